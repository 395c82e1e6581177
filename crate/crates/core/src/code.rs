//! CSS codes: construction, logical operators, distance, and the named catalog.

use crate::colex::{self, Colex};
use crate::gf2::{kernel, rank, BitVec, EchelonBasis};
use crate::pauli::{Pauli, PauliError, StabilizerMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("X and Z stabilizers do not commute (rows {0}, {1})")]
    NonCommuting(usize, usize),
    #[error("operator has length {0}, expected {1}")]
    Length(usize, usize),
    #[error("expected an {0}-type operator")]
    WrongType(char),
    #[error("logical operators are not a symplectic basis")]
    BadLogicals,
    #[error("brute-force distance needs n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("code encodes no logical qubits")]
    NoLogicals,
    #[error("unknown code {0:?}")]
    Unknown(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
}

pub const DISTANCE_LIMIT: usize = 20;

/// A CSS stabilizer code with a paired logical basis
/// (`logical_x[i]` anticommutes exactly with `logical_z[i]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub label: String,
    n: usize,
    x_stabs: Vec<BitVec>,
    z_stabs: Vec<BitVec>,
    logical_x: Vec<BitVec>,
    logical_z: Vec<BitVec>,
}

fn check_len(v: &[BitVec], n: usize) -> Result<(), CodeError> {
    match v.iter().find(|r| r.len() != n) {
        Some(r) => Err(CodeError::Length(r.len(), n)),
        None => Ok(()),
    }
}

impl CssCode {
    /// Build a code from its stabilizer supports; logicals are extracted.
    pub fn new(label: &str, n: usize, x_stabs: Vec<BitVec>, z_stabs: Vec<BitVec>) -> Result<Self, CodeError> {
        check_len(&x_stabs, n)?;
        check_len(&z_stabs, n)?;
        for (i, x) in x_stabs.iter().enumerate() {
            for (j, z) in z_stabs.iter().enumerate() {
                if x.dot(z) {
                    return Err(CodeError::NonCommuting(i, j));
                }
            }
        }
        let (lx, lz) = extract_logicals(n, &x_stabs, &z_stabs);
        Ok(CssCode { label: label.to_string(), n, x_stabs, z_stabs, logical_x: lx, logical_z: lz })
    }

    /// Build a code with caller-supplied logicals, validating everything.
    pub fn with_logicals(
        label: &str,
        n: usize,
        x_stabs: Vec<BitVec>,
        z_stabs: Vec<BitVec>,
        logical_x: Vec<BitVec>,
        logical_z: Vec<BitVec>,
    ) -> Result<Self, CodeError> {
        let mut c = Self::new(label, n, x_stabs, z_stabs)?;
        check_len(&logical_x, n)?;
        check_len(&logical_z, n)?;
        if logical_x.len() != c.k() || logical_z.len() != c.k() {
            return Err(CodeError::BadLogicals);
        }
        for l in &logical_x {
            if c.z_stabs.iter().any(|s| s.dot(l)) {
                return Err(CodeError::BadLogicals);
            }
        }
        for l in &logical_z {
            if c.x_stabs.iter().any(|s| s.dot(l)) {
                return Err(CodeError::BadLogicals);
            }
        }
        for (i, a) in logical_x.iter().enumerate() {
            for (j, b) in logical_z.iter().enumerate() {
                if a.dot(b) != (i == j) {
                    return Err(CodeError::BadLogicals);
                }
            }
        }
        c.logical_x = logical_x;
        c.logical_z = logical_z;
        Ok(c)
    }

    /// Parse from Pauli-string generators; mixed-type rows are rejected.
    pub fn from_paulis(
        label: &str,
        n: usize,
        x_stabs: &[Pauli],
        z_stabs: &[Pauli],
        logical_x: &[Pauli],
        logical_z: &[Pauli],
    ) -> Result<Self, CodeError> {
        let xs = x_parts(x_stabs, n)?;
        let zs = z_parts(z_stabs, n)?;
        if logical_x.is_empty() && logical_z.is_empty() {
            return Self::new(label, n, xs, zs);
        }
        Self::with_logicals(label, n, xs, zs, x_parts(logical_x, n)?, z_parts(logical_z, n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.logical_x.len()
    }

    pub fn x_stabs(&self) -> &[BitVec] {
        &self.x_stabs
    }

    pub fn z_stabs(&self) -> &[BitVec] {
        &self.z_stabs
    }

    pub fn logical_x(&self) -> &[BitVec] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[BitVec] {
        &self.logical_z
    }

    pub fn x_rank(&self) -> usize {
        rank(&self.x_stabs)
    }

    pub fn z_rank(&self) -> usize {
        rank(&self.z_stabs)
    }

    /// All generators as one commuting Pauli matrix (X rows first).
    pub fn stabilizers(&self) -> StabilizerMatrix {
        let rows = self
            .x_stabs
            .iter()
            .map(|v| Pauli::x_type(v.clone()))
            .chain(self.z_stabs.iter().map(|v| Pauli::z_type(v.clone())))
            .collect();
        StabilizerMatrix::new(self.n, rows).expect("CSS rows commute")
    }

    pub fn logical_x_paulis(&self) -> Vec<Pauli> {
        self.logical_x.iter().map(|v| Pauli::x_type(v.clone())).collect()
    }

    pub fn logical_z_paulis(&self) -> Vec<Pauli> {
        self.logical_z.iter().map(|v| Pauli::z_type(v.clone())).collect()
    }

    /// Z-type operator with support `v` is a stabilizer.
    pub fn is_z_stabilizer(&self, v: &BitVec) -> bool {
        EchelonBasis::from_rows(&self.z_stabs, self.n).contains(v)
    }

    pub fn is_x_stabilizer(&self, v: &BitVec) -> bool {
        EchelonBasis::from_rows(&self.x_stabs, self.n).contains(v)
    }

    /// Z-type operator commutes with all X checks but is not a stabilizer.
    pub fn is_z_logical(&self, v: &BitVec) -> bool {
        self.x_stabs.iter().all(|s| !s.dot(v)) && self.logical_x.iter().any(|l| l.dot(v))
    }

    pub fn is_x_logical(&self, v: &BitVec) -> bool {
        self.z_stabs.iter().all(|s| !s.dot(v)) && self.logical_z.iter().any(|l| l.dot(v))
    }

    /// Minimum weight of a nontrivial Z-type logical, searching weights up to
    /// `max_w`; works for any `n <= 128`.
    pub fn z_distance_upto(&self, max_w: usize) -> Option<usize> {
        min_logical_weight(self.n, &self.x_stabs, &self.logical_x, max_w)
    }

    pub fn x_distance_upto(&self, max_w: usize) -> Option<usize> {
        min_logical_weight(self.n, &self.z_stabs, &self.logical_z, max_w)
    }

    /// Exact distance by enumeration, guarded to `n <= 20`.
    pub fn distance(&self) -> Result<usize, CodeError> {
        if self.n > DISTANCE_LIMIT {
            return Err(CodeError::TooLarge { n: self.n, max: DISTANCE_LIMIT });
        }
        if self.k() == 0 {
            return Err(CodeError::NoLogicals);
        }
        let dz = self.z_distance_upto(self.n).ok_or(CodeError::NoLogicals)?;
        let dx = self.x_distance_upto(dz).unwrap_or(dz);
        Ok(dx.min(dz))
    }

    /// Number of weight-2 Z-type logical operators.
    pub fn count_weight2_logical_z(&self) -> usize {
        let mut c = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.is_z_logical(&BitVec::from_indices(self.n, &[i, j])) {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn to_json(&self) -> CodeJson {
        let s = |v: &[BitVec], x: bool| -> Vec<String> {
            v.iter()
                .map(|b| if x { Pauli::x_type(b.clone()) } else { Pauli::z_type(b.clone()) }.to_string())
                .collect()
        };
        CodeJson {
            label: self.label.clone(),
            n: self.n,
            x_stabs: s(&self.x_stabs, true),
            z_stabs: s(&self.z_stabs, false),
            logical_x: s(&self.logical_x, true),
            logical_z: s(&self.logical_z, false),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<Self, CodeError> {
        let parse = |v: &[String]| -> Result<Vec<Pauli>, CodeError> {
            v.iter().map(|s| s.parse::<Pauli>().map_err(CodeError::from)).collect()
        };
        Self::from_paulis(
            &j.label,
            j.n,
            &parse(&j.x_stabs)?,
            &parse(&j.z_stabs)?,
            &parse(&j.logical_x)?,
            &parse(&j.logical_z)?,
        )
    }
}

/// On-disk code description.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CodeJson {
    pub label: String,
    pub n: usize,
    pub x_stabs: Vec<String>,
    pub z_stabs: Vec<String>,
    #[serde(default)]
    pub logical_x: Vec<String>,
    #[serde(default)]
    pub logical_z: Vec<String>,
}

fn x_parts(ps: &[Pauli], n: usize) -> Result<Vec<BitVec>, CodeError> {
    ps.iter()
        .map(|p| {
            if p.n() != n {
                Err(CodeError::Length(p.n(), n))
            } else if !p.is_x_type() {
                Err(CodeError::WrongType('X'))
            } else {
                Ok(p.x.clone())
            }
        })
        .collect()
}

fn z_parts(ps: &[Pauli], n: usize) -> Result<Vec<BitVec>, CodeError> {
    ps.iter()
        .map(|p| {
            if p.n() != n {
                Err(CodeError::Length(p.n(), n))
            } else if !p.is_z_type() {
                Err(CodeError::WrongType('Z'))
            } else {
                Ok(p.z.clone())
            }
        })
        .collect()
}

/// Kernel vectors of `other` that are independent modulo the row space of `same`.
fn logical_candidates(n: usize, same: &[BitVec], other: &[BitVec]) -> Vec<BitVec> {
    let mut eb = EchelonBasis::from_rows(same, n);
    kernel(other, n).into_iter().filter(|v| eb.insert(v.clone())).collect()
}

/// Logical X and Z representatives, paired so that `lx[i] . lz[j] = delta_ij`.
pub fn extract_logicals(n: usize, x_stabs: &[BitVec], z_stabs: &[BitVec]) -> (Vec<BitVec>, Vec<BitVec>) {
    let lx = logical_candidates(n, x_stabs, z_stabs);
    let lz = logical_candidates(n, z_stabs, x_stabs);
    pair_logicals(lx, lz)
}

/// Symplectic Gram-Schmidt over two equally sized families.
pub fn pair_logicals(mut lx: Vec<BitVec>, mut lz: Vec<BitVec>) -> (Vec<BitVec>, Vec<BitVec>) {
    assert_eq!(lx.len(), lz.len());
    let k = lx.len();
    for i in 0..k {
        let (a, b) = (i..k)
            .flat_map(|a| (i..k).map(move |b| (a, b)))
            .find(|&(a, b)| lx[a].dot(&lz[b]))
            .expect("logical families must be non-degenerate");
        lx.swap(i, a);
        lz.swap(i, b);
        for j in i + 1..k {
            if lx[j].dot(&lz[i]) {
                let t = lx[i].clone();
                lx[j].xor_assign(&t);
            }
            if lx[i].dot(&lz[j]) {
                let t = lz[i].clone();
                lz[j].xor_assign(&t);
            }
        }
    }
    (lx, lz)
}

/// Invert a square GF(2) matrix given by rows.
pub fn invert(m: &[BitVec]) -> Option<Vec<BitVec>> {
    let k = m.len();
    let mut a: Vec<BitVec> = m.iter().map(|r| r.concat(&BitVec::zeros(k))).collect();
    for (i, row) in a.iter_mut().enumerate() {
        row.set(k + i, true);
    }
    for c in 0..k {
        let p = (c..k).find(|&r| a[r].get(c))?;
        a.swap(c, p);
        let pr = a[c].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != c && row.get(c) {
                row.xor_assign(&pr);
            }
        }
    }
    Some(a.iter().map(|r| r.slice(k, k)).collect())
}

/// Given chosen logical X representatives, the unique (up to stabilizers)
/// paired logical Z representatives.
pub fn dual_logicals(code: &CssCode, lx: &[BitVec]) -> Result<Vec<BitVec>, CodeError> {
    let k = code.k();
    if lx.len() != k {
        return Err(CodeError::BadLogicals);
    }
    let lz0 = &code.logical_z;
    let m: Vec<BitVec> = lx.iter().map(|a| BitVec::from_bools(&lz0.iter().map(|b| a.dot(b)).collect::<Vec<_>>())).collect();
    let inv = invert(&m).ok_or(CodeError::BadLogicals)?;
    // lz'_j = sum_l inv[l][j] lz0_l
    Ok((0..k)
        .map(|j| {
            let mut v = BitVec::zeros(code.n);
            for (l, row) in inv.iter().enumerate() {
                if row.get(j) {
                    v.xor_assign(&lz0[l]);
                }
            }
            v
        })
        .collect())
}

fn to_mask(v: &BitVec) -> u128 {
    v.iter_ones().fold(0u128, |m, i| m | (1u128 << i))
}

fn min_logical_weight(n: usize, checks: &[BitVec], partners: &[BitVec], max_w: usize) -> Option<usize> {
    assert!(n <= 128, "mask enumeration supports n <= 128");
    let cm: Vec<u128> = checks.iter().map(to_mask).collect();
    let pm: Vec<u128> = partners.iter().map(to_mask).collect();
    let ok = |e: u128| cm.iter().all(|&c| (c & e).count_ones() % 2 == 0) && pm.iter().any(|&c| (c & e).count_ones() % 2 == 1);
    let limit: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    for w in 1..=max_w.min(n) {
        let mut x: u128 = if w == 128 { u128::MAX } else { (1u128 << w) - 1 };
        loop {
            if ok(x) {
                return Some(w);
            }
            // Gosper's hack
            let c = x & x.wrapping_neg();
            let (r, of) = x.overflowing_add(c);
            if of || r > limit {
                break;
            }
            x = (((r ^ x) >> 2) / c) | r;
            if x > limit {
                break;
            }
        }
    }
    None
}

/// Named catalog entries.
pub fn by_name(name: &str, d: Option<usize>) -> Result<CssCode, CodeError> {
    match name {
        "steane" => qrm(2).map(|mut c| {
            c.label = "steane".into();
            c
        }),
        "qrm2" => qrm(2),
        "qrm3" => qrm(3),
        "qrm" => qrm(d.unwrap_or(3)),
        "hyperoct" | "hyperoctahedron" => hyperoctahedron(d.unwrap_or(3)),
        other => Err(CodeError::Unknown(other.to_string())),
    }
}

pub fn steane() -> CssCode {
    by_name("steane", None).expect("catalog")
}

/// Quantum Reed-Muller code on the nested-simplex complex of dimension `d`.
pub fn qrm(d: usize) -> Result<CssCode, CodeError> {
    if !(2..=4).contains(&d) {
        return Err(CodeError::Unsupported(format!("qrm needs 2 <= d <= 4, got {d}")));
    }
    let mut c = colex::color_code(&Colex::nested_simplex(d));
    c.label = format!("qrm{d}");
    Ok(c)
}

/// Ball code of the d-dimensional cross-polytope, an [[2^d, d, 2]] code.
pub fn hyperoctahedron(d: usize) -> Result<CssCode, CodeError> {
    if !(2..=6).contains(&d) {
        return Err(CodeError::Unsupported(format!("hyperoctahedron needs 2 <= d <= 6, got {d}")));
    }
    let cx = Colex::hyperoctahedron(d);
    let ball = cx.ball(0).expect("center is interior");
    let mut c = colex::ball_code(&cx, &ball);
    c.label = format!("hyperoct{d}");
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn steane_parameters() {
        let c = steane();
        assert_eq!((c.n(), c.k()), (7, 1));
        assert_eq!(c.distance().unwrap(), 3);
        assert_eq!(c.x_rank(), 3);
        assert_eq!(c.z_rank(), 3);
    }

    #[test]
    fn qrm3_parameters() {
        let c = qrm(3).unwrap();
        assert_eq!((c.n(), c.k()), (15, 1));
        assert_eq!(c.distance().unwrap(), 3);
        assert_eq!(c.x_rank(), 4);
        assert_eq!(c.z_rank(), 10);
        assert!(c.x_stabs().iter().all(|s| s.count_ones() == 8));
        assert!(c.z_stabs().iter().all(|s| s.count_ones() == 4));
    }

    #[test]
    fn hyperoctahedra() {
        for d in 2..=4 {
            let c = hyperoctahedron(d).unwrap();
            assert_eq!((c.n(), c.k()), (1 << d, d));
            assert_eq!(c.distance().unwrap(), 2);
        }
        let c = hyperoctahedron(2).unwrap();
        assert!(c.logical_x().iter().chain(c.logical_z()).all(|l| l.count_ones() == 2));
        for d in 5..=6 {
            let c = hyperoctahedron(d).unwrap();
            assert_eq!((c.n(), c.k()), (1 << d, d));
            assert_eq!(c.z_distance_upto(2), Some(2));
        }
        assert!(matches!(hyperoctahedron(5).unwrap().distance(), Err(CodeError::TooLarge { .. })));
    }

    #[test]
    fn steane_has_no_weight2_logicals() {
        assert_eq!(steane().count_weight2_logical_z(), 0);
    }

    #[test]
    fn json_round_trip() {
        let c = qrm(3).unwrap();
        let j = c.to_json();
        let back = CssCode::from_json(&j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn dual_logicals_pair() {
        let c = hyperoctahedron(3).unwrap();
        let lx: Vec<BitVec> = vec![
            c.logical_x()[0].xor(&c.logical_x()[1]),
            c.logical_x()[1].clone(),
            c.logical_x()[2].xor(&c.x_stabs()[0]),
        ];
        let lz = dual_logicals(&c, &lx).unwrap();
        let c2 = CssCode::with_logicals("t", c.n(), c.x_stabs().to_vec(), c.z_stabs().to_vec(), lx, lz);
        assert!(c2.is_ok());
    }

    // exhaustive oracle: smallest weight Z pattern that is a nontrivial logical
    fn oracle_z_distance(c: &CssCode) -> usize {
        let n = c.n();
        let zs = EchelonBasis::from_rows(c.z_stabs(), n);
        (1u32..(1 << n))
            .filter_map(|m| {
                let v = BitVec::from_bools(&(0..n).map(|i| m >> i & 1 == 1).collect::<Vec<_>>());
                let commutes = c.x_stabs().iter().all(|s| !s.dot(&v));
                (commutes && !zs.contains(&v)).then(|| m.count_ones() as usize)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn distance_matches_oracle() {
        for c in [steane(), hyperoctahedron(3).unwrap(), hyperoctahedron(2).unwrap()] {
            assert_eq!(c.z_distance_upto(c.n()).unwrap(), oracle_z_distance(&c));
        }
    }

    proptest! {
        #[test]
        fn logicals_are_symplectic_basis(seed in 0u64..500) {
            // random CSS code from random commuting supports on 8 qubits
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 8;
            let mut xs: Vec<BitVec> = Vec::new();
            for _ in 0..rng.random_range(0..3) {
                xs.push(BitVec::from_bools(&(0..n).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()));
            }
            let zk = kernel(&xs, n);
            let mut zs = Vec::new();
            for v in zk.iter().take(rng.random_range(0..3)) {
                zs.push(v.clone());
            }
            let c = CssCode::new("r", n, xs.clone(), zs.clone()).unwrap();
            prop_assert_eq!(c.k(), n - rank(&xs) - rank(&zs));
            for (i, a) in c.logical_x().iter().enumerate() {
                for (j, b) in c.logical_z().iter().enumerate() {
                    prop_assert_eq!(a.dot(b), i == j);
                }
                prop_assert!(zs.iter().all(|s| !s.dot(a)));
            }
            for b in c.logical_z() {
                prop_assert!(xs.iter().all(|s| !s.dot(b)));
            }
        }
    }
}
