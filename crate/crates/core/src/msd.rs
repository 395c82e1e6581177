//! Exact analysis of magic state distillation under diagonal Z noise and
//! multi-round cost optimization.

use crate::code::{qrm, CssCode};
use crate::colex::{self, Colex};
use crate::gf2::BitVec;
use crate::morph::{morph, MorphSpec, QubitOrigin};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MsdError {
    #[error("{0} branches exceed the enumeration limit of 2^24")]
    TooManyBranches(u128),
    #[error("code has {0} qubits; at most 64 supported")]
    TooManyQubits(usize),
    #[error("invalid noise spec: {0}")]
    BadNoise(String),
    #[error("no sequence of at most {rounds} rounds reaches {target:e}")]
    Infeasible { target: f64, rounds: usize },
    #[error("no protocols given")]
    NoProtocols,
    #[error("reading {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Code(String),
}

/// Polynomial in `p` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<BigRational>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly(c.iter().map(|&x| q(x)).collect()).trimmed()
    }

    pub fn from_coeffs(c: Vec<BigRational>) -> Self {
        Poly(c).trimmed()
    }

    /// `p`
    pub fn p() -> Self {
        Self::from_ints(&[0, 1])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.0.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect()).trimmed()
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect()).trimmed()
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly(c).trimmed()
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect()).trimmed()
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::from_ints(&[1]), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Power series of `self / den` up to and including `p^order`.
    pub fn series_div(&self, den: &Poly, order: usize) -> Poly {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "series division needs a nonzero constant term");
        let mut out = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut c = self.coeff(i);
            for (j, o) in out.iter().enumerate() {
                c -= den.coeff(i - j) * o;
            }
            out.push(c / &d0);
        }
        Poly(out).trimmed()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let mag = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
            let var = match i {
                0 => String::new(),
                1 => "p".into(),
                _ => format!("p^{i}"),
            };
            write!(f, "{}{}{}{}", if first { "" } else { " " }, sign, if first || sign.is_empty() { "" } else { " " }, mag + &var)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized form: list of `(power, numerator, denominator)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson(pub Vec<(usize, String, String)>);

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson(
            p.0.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        )
    }
}

impl TryFrom<&PolyJson> for Poly {
    type Error = MsdError;
    fn try_from(j: &PolyJson) -> Result<Self, MsdError> {
        let mut c: Vec<BigRational> = Vec::new();
        for (i, n, d) in &j.0 {
            let parse = |s: &str| s.trim().parse::<BigInt>().map_err(|e| MsdError::BadNoise(format!("{s:?}: {e}")));
            let (n, d) = (parse(n)?, parse(d)?);
            if d.is_zero() {
                return Err(MsdError::BadNoise("zero denominator".into()));
            }
            if c.len() <= *i {
                c.resize(i + 1, BigRational::zero());
            }
            c[*i] += BigRational::new(n, d);
        }
        Ok(Poly::from_coeffs(c))
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::try_from(&j).map_err(serde::de::Error::custom)
    }
}

/// A three-qubit CCZ input with probabilities of the eight `Z^b` branches
/// (bit `i` of `b` acts on `qubits[i]`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CczSlot {
    pub qubits: [usize; 3],
    pub branches: Vec<Poly>,
}

/// Optimistic CCZ noise: `1 - p` on `b = 0`, `p / 7` on each other branch.
pub fn optimistic_branches() -> Vec<Poly> {
    let mut v = vec![Poly::from_ints(&[1, -1])];
    let seventh = Poly::p().scale(&BigRational::new(BigInt::from(1), BigInt::from(7)));
    v.extend(std::iter::repeat_n(seventh, 7));
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Qubits fed by a T state with independent Z error probability `p`.
    pub t_slots: Vec<usize>,
    pub ccz: Vec<CczSlot>,
}

impl NoiseSpec {
    pub fn validate(&self, n: usize) -> Result<(), MsdError> {
        let mut seen = vec![false; n];
        let all = self.t_slots.iter().chain(self.ccz.iter().flat_map(|c| c.qubits.iter()));
        for &qb in all {
            if qb >= n || seen[qb] {
                return Err(MsdError::BadNoise(format!("qubit {qb} out of range or used twice")));
            }
            seen[qb] = true;
        }
        for c in &self.ccz {
            if c.branches.len() != 8 {
                return Err(MsdError::BadNoise("CCZ needs 8 branch probabilities".into()));
            }
            let total = c.branches.iter().fold(Poly::zero(), |a, b| a.add(b));
            if total != Poly::from_ints(&[1]) {
                return Err(MsdError::BadNoise(format!("branch probabilities sum to {total}")));
            }
        }
        Ok(())
    }
}

impl NoiseSpec {
    /// T noise on every qubit.
    pub fn all_t(n: usize) -> Self {
        NoiseSpec { t_slots: (0..n).collect(), ccz: Vec::new() }
    }

    /// Optimistic layout for a morphed code: T states on parent qubits and
    /// one CCZ state on exactly three child logical qubits.
    pub fn optimistic_for_morph(qubit_map: &[QubitOrigin]) -> Result<Self, MsdError> {
        let (t, c) = split_origins(qubit_map);
        match c.len() {
            0 => Ok(NoiseSpec { t_slots: t, ccz: Vec::new() }),
            3 => Ok(NoiseSpec { t_slots: t, ccz: vec![CczSlot { qubits: [c[0], c[1], c[2]], branches: optimistic_branches() }] }),
            k => Err(MsdError::BadNoise(format!("{k} child logical qubits; a CCZ input needs exactly 3"))),
        }
    }
}

fn split_origins(qubit_map: &[QubitOrigin]) -> (Vec<usize>, Vec<usize>) {
    let mut t = Vec::new();
    let mut e = Vec::new();
    for (i, o) in qubit_map.iter().enumerate() {
        match o {
            QubitOrigin::Parent(_) => t.push(i),
            QubitOrigin::ChildLogical(_) => e.push(i),
        }
    }
    (t, e)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    /// Probability of a trivial syndrome.
    pub p_s: Poly,
    /// Probability of a trivial syndrome with a logical error.
    pub p_out_numerator: Poly,
}

impl Analysis {
    /// Output error conditioned on success, as a power series.
    pub fn p_out_series(&self, order: usize) -> Poly {
        self.p_out_numerator.series_div(&self.p_s, order)
    }

    pub fn p_out(&self, p: f64) -> f64 {
        self.p_out_numerator.eval(p) / self.p_s.eval(p)
    }
}

fn mask(v: &BitVec) -> u64 {
    v.iter_ones().fold(0, |m, i| m | 1 << i)
}

/// Enumerate all Z-error branches of the inputs and sum the probability of
/// a trivial X syndrome, with and without a logical error.
pub fn analyze(code: &CssCode, noise: &NoiseSpec) -> Result<Analysis, MsdError> {
    let n = code.n();
    if n > 64 {
        return Err(MsdError::TooManyQubits(n));
    }
    noise.validate(n)?;
    let t = noise.t_slots.len();
    let m = noise.ccz.len();
    let branches: u128 = (1u128 << t) << (3 * m);
    if branches > 1 << 24 {
        return Err(MsdError::TooManyBranches(branches));
    }
    let xs: Vec<u64> = code.x_stabs().iter().map(mask).collect();
    let lx: Vec<u64> = code.logical_x().iter().map(mask).collect();
    let combos = 1usize << (3 * m);
    let mut ok = vec![vec![0u64; combos]; t + 1];
    let mut bad = vec![vec![0u64; combos]; t + 1];
    let ccz_mask = |combo: usize| -> u64 {
        let mut z = 0;
        for (j, c) in noise.ccz.iter().enumerate() {
            let b = combo >> (3 * j) & 7;
            for (i, &qb) in c.qubits.iter().enumerate() {
                if b >> i & 1 == 1 {
                    z |= 1 << qb;
                }
            }
        }
        z
    };
    for tm in 0u64..1 << t {
        let mut zt = 0u64;
        for (i, &qb) in noise.t_slots.iter().enumerate() {
            if tm >> i & 1 == 1 {
                zt |= 1 << qb;
            }
        }
        let w = tm.count_ones() as usize;
        for combo in 0..combos {
            let z = zt ^ ccz_mask(combo);
            if xs.iter().all(|&s| (s & z).count_ones() % 2 == 0) {
                if lx.iter().any(|&l| (l & z).count_ones() % 2 == 1) {
                    bad[w][combo] += 1;
                } else {
                    ok[w][combo] += 1;
                }
            }
        }
    }
    let pp = Poly::p();
    let qq = Poly::from_ints(&[1, -1]);
    let combo_weight = |combo: usize| -> Poly {
        noise
            .ccz
            .iter()
            .enumerate()
            .fold(Poly::from_ints(&[1]), |acc, (j, c)| acc.mul(&c.branches[combo >> (3 * j) & 7]))
    };
    let mut p_s = Poly::zero();
    let mut num = Poly::zero();
    for w in 0..=t {
        let tw = pp.pow(w).mul(&qq.pow(t - w));
        for combo in 0..combos {
            let (g, b) = (ok[w][combo], bad[w][combo]);
            if g + b == 0 {
                continue;
            }
            let base = tw.mul(&combo_weight(combo));
            p_s = p_s.add(&base.scale(&q((g + b) as i64)));
            num = num.add(&base.scale(&q(b as i64)));
        }
    }
    Ok(Analysis { p_s, p_out_numerator: num })
}

/// For each nonzero CCZ pattern, the number of single T-slot Z errors that
/// complete it to an undetected logical error.
pub fn ccz_completions(code: &CssCode, t_slots: &[usize], triple: [usize; 3]) -> Vec<usize> {
    let xs: Vec<u64> = code.x_stabs().iter().map(mask).collect();
    let lx: Vec<u64> = code.logical_x().iter().map(mask).collect();
    (1..8)
        .map(|b: usize| {
            let zb = (0..3).filter(|i| b >> i & 1 == 1).fold(0u64, |z, i| z | 1 << triple[i]);
            t_slots
                .iter()
                .filter(|&&s| {
                    let z = zb ^ 1 << s;
                    xs.iter().all(|&x| (x & z).count_ones() % 2 == 0) && lx.iter().any(|&l| (l & z).count_ones() % 2 == 1)
                })
                .count()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Derived,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub name: String,
    pub inputs: u32,
    pub outputs: u32,
    pub p_s: Poly,
    /// Unconditioned probability of success with a wrong output.
    pub p_out_numerator: Poly,
    pub provenance: Provenance,
}

impl Protocol {
    pub fn p_out(&self, p: f64) -> f64 {
        self.p_out_numerator.eval(p) / self.p_s.eval(p)
    }

    pub fn from_analysis(name: &str, inputs: u32, outputs: u32, a: Analysis) -> Self {
        Protocol { name: name.into(), inputs, outputs, p_s: a.p_s, p_out_numerator: a.p_out_numerator, provenance: Provenance::Derived }
    }
}

/// The `[[10,1,2]]` code with its noise layout: T states on the seven
/// qubits kept from QRM(3), one CCZ state on the three cc-edge qubits.
pub fn ten_one_two_setup() -> Result<(CssCode, Vec<usize>, [usize; 3]), MsdError> {
    let cx = Colex::nested_simplex(3);
    let parent = colex::color_code(&cx);
    let ball = cx.ball(4).map_err(|e| MsdError::Code(e.to_string()))?;
    let hubs = colex::default_hubs(&cx, &ball);
    let spec = MorphSpec::ball(&cx, &parent, &ball, &hubs).map_err(|e| MsdError::Code(e.to_string()))?;
    let r = morph(&spec).map_err(|e| MsdError::Code(e.to_string()))?;
    let (t, e) = split_origins(&r.qubit_map);
    let triple: [usize; 3] = e.try_into().map_err(|_| MsdError::Code("expected three edge qubits".into()))?;
    Ok((r.code, t, triple))
}

pub fn ten_to_one_with(branches: Vec<Poly>) -> Result<(Protocol, Analysis), MsdError> {
    let (code, t, triple) = ten_one_two_setup()?;
    let noise = NoiseSpec { t_slots: t, ccz: vec![CczSlot { qubits: triple, branches }] };
    let a = analyze(&code, &noise)?;
    // a CCZ input counts as one magic state
    Ok((Protocol::from_analysis("10", 8, 1, a.clone()), a))
}

pub fn ten_to_one() -> Result<(Protocol, Analysis), MsdError> {
    ten_to_one_with(optimistic_branches())
}

pub fn fifteen_to_one() -> Result<(Protocol, Analysis), MsdError> {
    let code = qrm(3).map_err(|e| MsdError::Code(e.to_string()))?;
    let noise = NoiseSpec { t_slots: (0..15).collect(), ccz: Vec::new() };
    let a = analyze(&code, &noise)?;
    Ok((Protocol::from_analysis("15", 15, 1, a.clone()), a))
}

fn read(path: &Path) -> Result<String, MsdError> {
    std::fs::read_to_string(path).map_err(|e| MsdError::Io { path: path.display().to_string(), msg: e.to_string() })
}

/// External protocol descriptor (JSON `Protocol`); provenance forced to external.
pub fn load_protocol(path: &Path) -> Result<Protocol, MsdError> {
    let mut p: Protocol =
        serde_json::from_str(&read(path)?).map_err(|e| MsdError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    p.provenance = Provenance::External;
    Ok(p)
}

/// External CCZ branch distribution: JSON list of eight polynomials.
pub fn load_ccz_distribution(path: &Path) -> Result<Vec<Poly>, MsdError> {
    let v: Vec<Poly> =
        serde_json::from_str(&read(path)?).map_err(|e| MsdError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    if v.len() != 8 {
        return Err(MsdError::BadNoise(format!("expected 8 branches, got {}", v.len())));
    }
    Ok(v)
}

/// Smallest `p` in `(lo, hi]` with `p_out(a) <= p_out(b)`, by scan then bisection.
pub fn crossover(a: &Protocol, b: &Protocol, lo: f64, hi: f64) -> Option<f64> {
    let f = |p: f64| a.p_out(p) - b.p_out(p);
    let steps = 10_000;
    let mut prev = lo;
    for i in 1..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        if f(x) <= 0.0 {
            let (mut l, mut h) = (prev, x);
            for _ in 0..60 {
                let mid = 0.5 * (l + h);
                if f(mid) <= 0.0 {
                    h = mid;
                } else {
                    l = mid;
                }
            }
            return Some(h);
        }
        prev = x;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostResult {
    pub sequence: Vec<String>,
    pub cost: f64,
    pub p_actual: f64,
}

/// Cheapest sequence of at most `max_rounds` rounds reaching `p_targ`;
/// cost = prod inputs / (outputs * p_s) over the rounds.
pub fn optimize_cost(p_in: f64, p_targ: f64, protocols: &[Protocol], max_rounds: usize) -> Result<CostResult, MsdError> {
    if protocols.is_empty() {
        return Err(MsdError::NoProtocols);
    }
    let mut best: Option<(f64, Vec<usize>, f64)> = None;
    let mut stack: Vec<(Vec<usize>, f64, f64)> = vec![(Vec::new(), p_in, 1.0)];
    while let Some((seq, p, cost)) = stack.pop() {
        if !seq.is_empty() && p <= p_targ {
            let better = match &best {
                None => true,
                Some((c, s, _)) => cost < *c * (1.0 - 1e-12) || ((cost - c).abs() <= 1e-12 * c && seq < *s),
            };
            if better {
                best = Some((cost, seq.clone(), p));
            }
            continue;
        }
        if seq.len() == max_rounds {
            continue;
        }
        for (i, pr) in protocols.iter().enumerate() {
            let ps = pr.p_s.eval(p);
            if !(ps > 0.0) {
                continue;
            }
            let mut s = seq.clone();
            s.push(i);
            stack.push((s, pr.p_out(p), cost * pr.inputs as f64 / (pr.outputs as f64 * ps)));
        }
    }
    let (cost, seq, p_actual) = best.ok_or(MsdError::Infeasible { target: p_targ, rounds: max_rounds })?;
    Ok(CostResult { sequence: seq.iter().map(|&i| protocols[i].name.clone()).collect(), cost, p_actual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arithmetic() {
        let a = Poly::from_ints(&[1, -1]);
        assert_eq!(a.pow(2), Poly::from_ints(&[1, -2, 1]));
        assert_eq!(a.mul(&Poly::zero()), Poly::zero());
        let s = Poly::from_ints(&[1]).series_div(&a, 3);
        assert_eq!(s, Poly::from_ints(&[1, 1, 1, 1]));
        assert_eq!(a.to_string(), "1 - p");
        let j = PolyJson::from(&a);
        assert_eq!(Poly::try_from(&j).unwrap(), a);
        assert!((a.eval(0.25) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn ten_to_one_polynomials() {
        let (_, a) = ten_to_one().unwrap();
        assert_eq!(a.p_s.coeff(0), q(1));
        assert_eq!(a.p_s.coeff(1), q(-8));
        assert_eq!(a.p_s.coeff(2), q(29));
        let num = &a.p_out_numerator;
        assert_eq!((num.coeff(0), num.coeff(1), num.coeff(2), num.coeff(3)), (q(0), q(0), q(1), q(1)));
        assert_eq!(a.p_out_series(3), Poly::from_ints(&[0, 0, 1, 9]));
    }

    #[test]
    fn fifteen_to_one_leading_term() {
        let (_, a) = fifteen_to_one().unwrap();
        let s = a.p_out_series(3);
        assert_eq!(s, Poly::from_ints(&[0, 0, 0, 35]));
        assert_eq!(a.p_s.eval_exact(&q(0)), q(1));
    }

    #[test]
    fn single_completion_per_ccz_pattern() {
        let (code, t, triple) = ten_one_two_setup().unwrap();
        assert_eq!(ccz_completions(&code, &t, triple), vec![1; 7]);
    }

    #[test]
    fn morph_layout_matches_setup() {
        let (code, t, triple) = ten_one_two_setup().unwrap();
        let cx = Colex::nested_simplex(3);
        let ball = cx.ball(4).unwrap();
        let spec = MorphSpec::ball(&cx, &colex::color_code(&cx), &ball, &colex::default_hubs(&cx, &ball)).unwrap();
        let r = morph(&spec).unwrap();
        let noise = NoiseSpec::optimistic_for_morph(&r.qubit_map).unwrap();
        assert_eq!((noise.t_slots.clone(), noise.ccz[0].qubits), (t, triple));
        assert_eq!(analyze(&code, &noise).unwrap(), ten_to_one().unwrap().1);
        assert!(NoiseSpec::optimistic_for_morph(&[QubitOrigin::ChildLogical(0)]).is_err());
    }

    #[test]
    fn noise_validation_and_trivial_distribution() {
        let (code, t, triple) = ten_one_two_setup().unwrap();
        let mut zero = vec![Poly::zero(); 8];
        zero[0] = Poly::from_ints(&[1]);
        let a = analyze(&code, &NoiseSpec { t_slots: t.clone(), ccz: vec![CczSlot { qubits: triple, branches: zero }] }).unwrap();
        assert_eq!(a.p_s.eval_exact(&q(0)), q(1));
        assert!(a.p_out_numerator.eval_exact(&q(0)).is_zero());
        let bad = NoiseSpec { t_slots: vec![0, 0], ccz: Vec::new() };
        assert!(analyze(&code, &bad).is_err());
        let skew = NoiseSpec { t_slots: t, ccz: vec![CczSlot { qubits: triple, branches: vec![Poly::zero(); 8] }] };
        assert!(analyze(&code, &skew).is_err());
    }

    #[test]
    fn ten_succeeds_more_often_than_fifteen() {
        let (p10, _) = ten_to_one().unwrap();
        let (p15, _) = fifteen_to_one().unwrap();
        for i in 0..=1000 {
            let p = 0.1 * i as f64 / 1000.0;
            assert!(p10.p_s.eval(p) >= p15.p_s.eval(p) - 1e-15);
        }
        let x = crossover(&p10, &p15, 1e-4, 0.2).unwrap();
        assert!((x - 0.034).abs() <= 0.001, "{x}");
    }

    #[test]
    fn cost_anchor_ten_ten() {
        let (p10, _) = ten_to_one().unwrap();
        let (p15, _) = fifteen_to_one().unwrap();
        let r = optimize_cost(0.01, 1e-7, &[p15.clone(), p10.clone()], 5).unwrap();
        assert_eq!(r.sequence, vec!["10", "10"]);
        assert!((r.cost - 69.41).abs() / 69.41 < 0.005, "{r:?}");
        assert!(matches!(optimize_cost(0.01, 1e-300, &[p10], 2), Err(MsdError::Infeasible { .. })));
        assert!(matches!(optimize_cost(0.01, 1e-3, &[], 2), Err(MsdError::NoProtocols)));
    }
}
