//! Packed GF(2) vectors and the handful of linear-algebra routines the rest of
//! the crate is built on.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in idx {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    /// Parity of the overlap `|self & other|`.
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn ones(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Concatenation `self || other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut r = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            r.set(i, true);
        }
        for i in other.iter_ones() {
            r.set(self.len + i, true);
        }
        r
    }

    /// Bits `[start, start+len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        let mut r = BitVec::zeros(len);
        for i in self.iter_ones() {
            if i >= start && i < start + len {
                r.set(i - start, true);
            }
        }
        r
    }

    /// Keep only the coordinates listed in `idx`, in that order.
    pub fn gather(&self, idx: &[usize]) -> BitVec {
        let mut r = BitVec::zeros(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            if self.get(i) {
                r.set(j, true);
            }
        }
        r
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with leftmost pivots. Zero rows are dropped and
/// rows come out sorted by pivot column.
pub fn rref(rows: &[BitVec]) -> (Vec<BitVec>, Vec<usize>) {
    let mut m: Vec<BitVec> = rows.to_vec();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[BitVec]) -> usize {
    let mut b = EchelonBasis::new(rows.first().map_or(0, |r| r.len()));
    rows.iter().filter(|r| b.insert((*r).clone())).count()
}

/// Null space basis of the matrix whose rows are `rows` (vectors `v` with
/// `row . v = 0` for every row).
pub fn kernel(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let (red, pivots) = rref(rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(ncols);
        v.set(f, true);
        for (row, &p) in red.iter().zip(&pivots) {
            if row.get(f) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

/// Incrementally built echelon basis supporting fast membership tests and
/// decomposition into the inserted vectors.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    ncols: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    // combination of original inserted vectors that produced each row
    combos: Vec<BitVec>,
    inserted: usize,
    cap: usize,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        Self::with_capacity(ncols, 0)
    }

    /// `cap` bounds the number of inserted vectors tracked for decomposition.
    pub fn with_capacity(ncols: usize, cap: usize) -> Self {
        EchelonBasis { ncols, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new(), inserted: 0, cap }
    }

    pub fn from_rows(rows: &[BitVec], ncols: usize) -> Self {
        let mut b = Self::with_capacity(ncols, rows.len());
        for r in rows {
            b.insert(r.clone());
        }
        b
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce_tracked(&self, v: &mut BitVec, combo: &mut Option<BitVec>) {
        for (k, (row, &p)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v.get(p) {
                v.xor_assign(row);
                if let Some(c) = combo.as_mut() {
                    c.xor_assign(&self.combos[k]);
                }
            }
        }
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        self.reduce_tracked(&mut r, &mut None);
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert `v`; returns whether it was independent of the current basis.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let track = idx < self.cap;
        let mut combo = if track { Some(BitVec::from_indices(self.cap, &[idx])) } else { None };
        let mut r = v;
        self.reduce_tracked(&mut r, &mut combo);
        let Some(p) = r.first_one() else {
            return false;
        };
        // keep rows mutually reduced at pivot columns
        for k in 0..self.rows.len() {
            if self.rows[k].get(p) {
                self.rows[k].xor_assign(&r);
                if let Some(c) = combo.as_ref() {
                    self.combos[k].xor_assign(c);
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        self.combos.push(combo.unwrap_or_else(|| BitVec::zeros(self.cap)));
        true
    }

    /// Coefficients over the tracked inserted vectors expressing `v`, or
    /// `None` when `v` is outside the span.
    pub fn decompose(&self, v: &BitVec) -> Option<BitVec> {
        let mut r = v.clone();
        let mut c = Some(BitVec::zeros(self.cap));
        self.reduce_tracked(&mut r, &mut c);
        if r.is_zero() {
            c
        } else {
            None
        }
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_is_idempotent() {
        let rows = vec![
            BitVec::from_indices(5, &[0, 1, 2]),
            BitVec::from_indices(5, &[1, 2, 3]),
            BitVec::from_indices(5, &[0, 3]),
            BitVec::from_indices(5, &[4]),
        ];
        let (r1, p1) = rref(&rows);
        let (r2, p2) = rref(&r1);
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
        assert_eq!(r1.len(), 3);
    }

    #[test]
    fn kernel_is_orthogonal() {
        let rows = vec![BitVec::from_indices(4, &[0, 1, 2, 3])];
        let k = kernel(&rows, 4);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(!rows[0].dot(v));
        }
    }

    #[test]
    fn decompose_recovers_combination() {
        let a = BitVec::from_indices(6, &[0, 2]);
        let b = BitVec::from_indices(6, &[2, 3, 5]);
        let c = BitVec::from_indices(6, &[1]);
        let basis = EchelonBasis::from_rows(&[a.clone(), b.clone(), c.clone()], 6);
        let t = a.xor(&c);
        let coef = basis.decompose(&t).unwrap();
        assert_eq!(coef.ones(), vec![0, 2]);
        assert!(basis.decompose(&BitVec::from_indices(6, &[4])).is_none());
    }

    #[test]
    fn iter_ones_crosses_words() {
        let v = BitVec::from_indices(200, &[3, 64, 130, 199]);
        assert_eq!(v.ones(), vec![3, 64, 130, 199]);
        assert_eq!(v.count_ones(), 4);
    }
}
