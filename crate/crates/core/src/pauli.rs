//! Phase-free Pauli operators in binary symplectic form.

use crate::gf2::{rref, BitVec, EchelonBasis};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli character {0:?}")]
    BadChar(char),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("target is not in the span of the basis")]
    NotInSpan,
    #[error("basis rows are linearly dependent")]
    DependentBasis,
}

/// An n-qubit Pauli operator up to phase, stored as `(x | z)` bit vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: BitVec,
    pub z: BitVec,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Pauli { x: BitVec::zeros(n), z: BitVec::zeros(n) }
    }

    pub fn new(x: BitVec, z: BitVec) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        Ok(Pauli { x, z })
    }

    pub fn x_type(x: BitVec) -> Self {
        let n = x.len();
        Pauli { x, z: BitVec::zeros(n) }
    }

    pub fn z_type(z: BitVec) -> Self {
        let n = z.len();
        Pauli { x: BitVec::zeros(n), z }
    }

    pub fn x_on(n: usize, idx: &[usize]) -> Self {
        Self::x_type(BitVec::from_indices(n, idx))
    }

    pub fn z_on(n: usize, idx: &[usize]) -> Self {
        Self::z_type(BitVec::from_indices(n, idx))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn weight(&self) -> usize {
        (0..self.n()).filter(|&i| self.x.get(i) || self.z.get(i)).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.x.get(i) || self.z.get(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn is_x_type(&self) -> bool {
        self.z.is_zero()
    }

    pub fn is_z_type(&self) -> bool {
        self.x.is_zero()
    }

    /// Product up to phase.
    pub fn mul(&self, other: &Pauli) -> Pauli {
        Pauli { x: self.x.xor(&other.x), z: self.z.xor(&other.z) }
    }

    /// Symplectic vector `x || z` of length 2n.
    pub fn to_symplectic(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn from_symplectic(v: &BitVec) -> Pauli {
        let n = v.len() / 2;
        Pauli { x: v.slice(0, n), z: v.slice(n, n) }
    }

    /// Restriction to the listed qubits, re-indexed in that order.
    pub fn restrict(&self, idx: &[usize]) -> Pauli {
        Pauli { x: self.x.gather(idx), z: self.z.gather(idx) }
    }
}

/// `true` when `a` and `b` anticommute.
pub fn symplectic_product(a: &Pauli, b: &Pauli) -> Result<bool, PauliError> {
    if a.n() != b.n() {
        return Err(PauliError::LengthMismatch(a.n(), b.n()));
    }
    Ok(a.x.dot(&b.z) ^ a.z.dot(&b.x))
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Pauli {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.trim().chars().collect();
        let mut p = Pauli::identity(chars.len());
        for (i, c) in chars.into_iter().enumerate() {
            match c.to_ascii_uppercase() {
                'I' | '_' => {}
                'X' => p.x.set(i, true),
                'Z' => p.z.set(i, true),
                'Y' => {
                    p.x.set(i, true);
                    p.z.set(i, true);
                }
                other => return Err(PauliError::BadChar(other)),
            }
        }
        Ok(p)
    }
}

impl Serialize for Pauli {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Pauli {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A list of mutually commuting Pauli generators on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerMatrix {
    n: usize,
    rows: Vec<Pauli>,
}

impl StabilizerMatrix {
    pub fn new(n: usize, rows: Vec<Pauli>) -> Result<Self, PauliError> {
        for r in &rows {
            if r.n() != n {
                return Err(PauliError::LengthMismatch(n, r.n()));
            }
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if symplectic_product(&rows[i], &rows[j])? {
                    return Err(PauliError::NonCommuting(i, j));
                }
            }
        }
        Ok(StabilizerMatrix { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        StabilizerMatrix { n, rows: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Pauli] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn symplectic_rows(&self) -> Vec<BitVec> {
        self.rows.iter().map(Pauli::to_symplectic).collect()
    }

    pub fn rank(&self) -> usize {
        crate::gf2::rank(&self.symplectic_rows())
    }

    /// Row space membership.
    pub fn spans(&self, p: &Pauli) -> bool {
        EchelonBasis::from_rows(&self.symplectic_rows(), 2 * self.n).contains(&p.to_symplectic())
    }
}

/// Gaussian elimination over the symplectic vectors with leftmost pivots.
/// Returns the reduced basis (zero rows removed) and its rank; the result is a
/// fixed point of this function.
pub fn row_reduce(m: &StabilizerMatrix) -> (StabilizerMatrix, usize) {
    let (red, _) = rref(&m.symplectic_rows());
    let rows: Vec<Pauli> = red.iter().map(Pauli::from_symplectic).collect();
    let r = rows.len();
    (StabilizerMatrix { n: m.n, rows }, r)
}

/// Coefficients `c` with `target = prod_i basis[i]^{c_i}` (up to phase).
/// The basis must be linearly independent.
pub fn decompose(target: &Pauli, basis: &[Pauli]) -> Result<Vec<bool>, PauliError> {
    let n = target.n();
    let mut eb = EchelonBasis::with_capacity(2 * n, basis.len());
    for b in basis {
        if b.n() != n {
            return Err(PauliError::LengthMismatch(n, b.n()));
        }
        if !eb.insert(b.to_symplectic()) {
            return Err(PauliError::DependentBasis);
        }
    }
    let c = eb.decompose(&target.to_symplectic()).ok_or(PauliError::NotInSpan)?;
    Ok((0..basis.len()).map(|i| c.get(i)).collect())
}
