//! Dense state-vector checks of logical gates on small CSS codes.

use crate::code::CssCode;
use crate::colex::{self, Ball, Colex};
use crate::gf2::{rref, BitVec};
use crate::morph::{MorphResult, QubitOrigin};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::f64::consts::PI;
use thiserror::Error;

pub const MAX_QUBITS: usize = 16;
pub const TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("{0} qubits exceed the simulator limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("gate target {0} out of range")]
    BadTarget(usize),
    #[error("state length {0} does not match {1} qubits")]
    BadState(usize, usize),
    #[error("circuit leaves the codespace (leaked norm {0:.3e})")]
    NotLogical(f64),
    #[error("dual graph of the facets is not bipartite")]
    NotBipartite,
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    /// `diag(1, exp(2 pi i / 2^k))`.
    R { k: u32, q: usize },
    Rdg { k: u32, q: usize },
    CZ(usize, usize),
    CCZ(usize, usize, usize),
    /// Phase -1 on the all-ones state of the listed qubits.
    MCZ(Vec<usize>),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => vec![*q],
            Gate::R { q, .. } | Gate::Rdg { q, .. } => vec![*q],
            Gate::CZ(a, b) => vec![*a, *b],
            Gate::CCZ(a, b, c) => vec![*a, *b, *c],
            Gate::MCZ(v) => v.clone(),
        }
    }

    /// Phase on the basis state when the gate is diagonal.
    fn phase(&self, idx: usize) -> Option<C64> {
        let bit = |q: usize| idx >> q & 1 == 1;
        let rot = |k: u32, sign: f64| C64::from_polar(1.0, sign * 2.0 * PI / f64::powi(2.0, k as i32));
        let one = C64::new(1.0, 0.0);
        Some(match self {
            Gate::Z(q) => if bit(*q) { -one } else { one },
            Gate::S(q) => if bit(*q) { C64::new(0.0, 1.0) } else { one },
            Gate::Sdg(q) => if bit(*q) { C64::new(0.0, -1.0) } else { one },
            Gate::T(q) => if bit(*q) { rot(3, 1.0) } else { one },
            Gate::Tdg(q) => if bit(*q) { rot(3, -1.0) } else { one },
            Gate::R { k, q } => if bit(*q) { rot(*k, 1.0) } else { one },
            Gate::Rdg { k, q } => if bit(*q) { rot(*k, -1.0) } else { one },
            Gate::CZ(a, b) => if bit(*a) && bit(*b) { -one } else { one },
            Gate::CCZ(a, b, c) => if bit(*a) && bit(*b) && bit(*c) { -one } else { one },
            Gate::MCZ(v) => if v.iter().all(|&q| bit(q)) { -one } else { one },
            Gate::H(_) | Gate::X(_) => return None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn validate(&self) -> Result<(), GateError> {
        if self.n > MAX_QUBITS {
            return Err(GateError::TooManyQubits(self.n));
        }
        for g in &self.gates {
            if let Some(&q) = g.qubits().iter().find(|&&q| q >= self.n) {
                return Err(GateError::BadTarget(q));
            }
        }
        Ok(())
    }
}

pub fn basis_state(n: usize, idx: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 1 << n];
    v[idx] = C64::new(1.0, 0.0);
    v
}

fn apply_gate(g: &Gate, state: &mut [C64]) {
    match g {
        Gate::H(q) => {
            let m = 1 << q;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..state.len() {
                if i & m == 0 {
                    let (a, b) = (state[i], state[i | m]);
                    state[i] = (a + b) * s;
                    state[i | m] = (a - b) * s;
                }
            }
        }
        Gate::X(q) => {
            let m = 1 << q;
            for i in 0..state.len() {
                if i & m == 0 {
                    state.swap(i, i | m);
                }
            }
        }
        _ => {
            for (i, a) in state.iter_mut().enumerate() {
                *a *= g.phase(i).unwrap();
            }
        }
    }
}

pub fn apply(c: &Circuit, state: &[C64]) -> Result<Vec<C64>, GateError> {
    c.validate()?;
    if state.len() != 1 << c.n {
        return Err(GateError::BadState(state.len(), c.n));
    }
    let mut s = state.to_vec();
    for g in &c.gates {
        apply_gate(g, &mut s);
    }
    Ok(s)
}

fn mask(v: &BitVec) -> usize {
    v.iter_ones().fold(0, |m, i| m | 1 << i)
}

/// Logical computational basis `|x>` (bit `i` of `x` = logical qubit `i`):
/// uniform superposition over the X-stabilizer coset of `x . LX`.
pub fn codespace_basis(code: &CssCode) -> Result<Vec<Vec<C64>>, GateError> {
    let n = code.n();
    if n > MAX_QUBITS {
        return Err(GateError::TooManyQubits(n));
    }
    let gens: Vec<usize> = rref(code.x_stabs()).0.iter().map(mask).collect();
    let mut span = vec![0usize];
    for g in gens {
        let more: Vec<usize> = span.iter().map(|s| s ^ g).collect();
        span.extend(more);
    }
    let amp = C64::new(1.0 / (span.len() as f64).sqrt(), 0.0);
    let lx: Vec<usize> = code.logical_x().iter().map(mask).collect();
    Ok((0..1usize << code.k())
        .map(|x| {
            let off = (0..code.k()).filter(|&i| x >> i & 1 == 1).fold(0, |m, i| m ^ lx[i]);
            let mut v = vec![C64::new(0.0, 0.0); 1 << n];
            for s in &span {
                v[s ^ off] = amp;
            }
            v
        })
        .collect())
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Induced logical operator `U[i][j] = <i|C|j>` plus the worst leaked norm.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalAction {
    pub matrix: Vec<Vec<C64>>,
    pub leak: f64,
}

pub fn logical_action(code: &CssCode, c: &Circuit) -> Result<LogicalAction, GateError> {
    let a = project(code, c)?;
    if a.leak > 1e-10 {
        return Err(GateError::NotLogical(a.leak));
    }
    Ok(a)
}

fn project(code: &CssCode, c: &Circuit) -> Result<LogicalAction, GateError> {
    if c.n != code.n() {
        return Err(GateError::BadState(1 << c.n, code.n()));
    }
    let basis = codespace_basis(code)?;
    let dim = basis.len();
    let mut m = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let mut leak: f64 = 0.0;
    for j in 0..dim {
        let out = apply(c, &basis[j])?;
        let mut kept = 0.0;
        for i in 0..dim {
            m[i][j] = inner(&basis[i], &out);
            kept += m[i][j].norm_sqr();
        }
        leak = leak.max(1.0 - kept);
    }
    Ok(LogicalAction { matrix: m, leak })
}

/// Phase `z` with `a = z b` entrywise within `tol`, using the largest entry
/// of `b` to fix `z`.
pub fn equal_up_to_phase(a: &[Vec<C64>], b: &[Vec<C64>], tol: f64) -> Option<C64> {
    let (mut bi, mut bj, mut best) = (0, 0, -1.0);
    for (i, row) in b.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.norm() > best {
                (bi, bj, best) = (i, j, x.norm());
            }
        }
    }
    if best <= 0.0 {
        return None;
    }
    let z = a[bi][bj] / b[bi][bj];
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let ok = a.iter().zip(b).all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - z * y).norm() <= tol));
    ok.then_some(z)
}

pub fn diagonal(k: usize, f: impl Fn(usize) -> C64) -> Vec<Vec<C64>> {
    let dim = 1 << k;
    (0..dim).map(|i| (0..dim).map(|j| if i == j { f(i) } else { C64::new(0.0, 0.0) }).collect()).collect()
}

/// Product of multi-controlled Z gates over the given tuples of logical qubits.
pub fn ck_product(k: usize, tuples: &[Vec<usize>]) -> Vec<Vec<C64>> {
    diagonal(k, |x| {
        let flips = tuples.iter().filter(|t| t.iter().all(|&i| x >> i & 1 == 1)).count();
        C64::new(if flips % 2 == 1 { -1.0 } else { 1.0 }, 0.0)
    })
}

/// `R_k` on a single logical qubit.
pub fn r_matrix(k: u32) -> Vec<Vec<C64>> {
    diagonal(1, |x| if x == 1 { C64::from_polar(1.0, 2.0 * PI / f64::powi(2.0, k as i32)) } else { C64::new(1.0, 0.0) })
}

/// Two-coloring of the given facets under the dual adjacency (sharing a
/// codimension-1 face). The smallest facet of each component gets `true`.
pub fn bipartition(cx: &Colex, facets: &[usize]) -> Result<Vec<(usize, bool)>, GateError> {
    let d = cx.d();
    let mut color: Vec<Option<bool>> = vec![None; facets.len()];
    let pos = |f: usize| facets.iter().position(|&x| x == f);
    for s in 0..facets.len() {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(true);
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            let fv = cx.simplex(d, facets[i]);
            for skip in 0..fv.len() {
                let ridge: Vec<usize> = fv.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect();
                let r = cx.find(&ridge).expect("ridge");
                for &g in cx.star_facets(d - 1, r) {
                    let Some(j) = pos(g) else { continue };
                    if j == i {
                        continue;
                    }
                    let want = !color[i].unwrap();
                    match color[j] {
                        None => {
                            color[j] = Some(want);
                            queue.push_back(j);
                        }
                        Some(c) if c != want => return Err(GateError::NotBipartite),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    Ok(facets.iter().zip(color).map(|(&f, c)| (f, c.unwrap())).collect())
}

/// `R_k` on the `true` side of the bipartition and `R_k^dagger` on the other,
/// restricted to facets containing all vertices of `kappa`. Qubit `i` is
/// `ball.members[d][i]`; `flip` swaps the two sides.
pub fn r_tilde(cx: &Colex, ball: &Ball, kappa: &[usize], k: u32, flip: bool) -> Result<Circuit, GateError> {
    let d = cx.d();
    let facets = &ball.members[d];
    let sides = bipartition(cx, facets)?;
    let mut c = Circuit::new(facets.len());
    for (i, &(f, side)) in sides.iter().enumerate() {
        if !kappa.iter().all(|v| cx.simplex(d, f).contains(v)) {
            continue;
        }
        c.push(if side != flip { Gate::R { k, q: i } } else { Gate::Rdg { k, q: i } });
    }
    Ok(c)
}

/// k-tuples of logical qubits whose edges join with `kappa` to a facet.
pub fn predicted_tuples(cx: &Colex, basis: &colex::BallBasis, kappa: &[usize]) -> Vec<Vec<usize>> {
    let d = cx.d();
    let k = d + 1 - kappa.len();
    let lv = &basis.logical_vertices;
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::new();
    fn rec(cx: &Colex, lv: &[usize], kappa: &[usize], k: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == k {
            let mut vs: Vec<usize> = kappa.to_vec();
            vs.extend(pick.iter().map(|&i| lv[i]));
            vs.sort_unstable();
            vs.dedup();
            if vs.len() == cx.d() + 1 && cx.find(&vs).is_some() {
                out.push(pick.clone());
            }
            return;
        }
        for i in start..lv.len() {
            pick.push(i);
            rec(cx, lv, kappa, k, i + 1, pick, out);
            pick.pop();
        }
    }
    rec(cx, lv, kappa, k, 0, &mut pick, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CkReport {
    pub kappa: Vec<usize>,
    pub level: u32,
    pub tuples: Vec<Vec<usize>>,
    pub phase: Option<(f64, f64)>,
    pub leak: f64,
    pub pass: bool,
}

/// Check that `R~_k(kappa)` acts as the predicted product of `C_k` gates in
/// the canonical basis with the given hubs.
pub fn verify_ckz(cx: &Colex, ball: &Ball, hubs: &[usize], kappa: &[usize]) -> Result<CkReport, GateError> {
    let d = cx.d();
    if !kappa.contains(&ball.center) {
        return Err(GateError::Invalid("kappa must contain the ball center".into()));
    }
    let level = (d + 1 - kappa.len()) as u32;
    let basis = colex::canonical_basis(cx, ball, hubs).map_err(|e| GateError::Invalid(e.to_string()))?;
    let parent = colex::ball_code(cx, ball);
    let code = CssCode::with_logicals("ball", parent.n(), parent.x_stabs().to_vec(), parent.z_stabs().to_vec(), basis.logical_x.clone(), basis.logical_z.clone())
        .map_err(|e| GateError::Invalid(e.to_string()))?;
    let tuples = predicted_tuples(cx, &basis, kappa);
    let target = ck_product(code.k(), &tuples);
    let circ = r_tilde(cx, ball, kappa, level, false)?;
    let act = project(&code, &circ)?;
    let phase = if act.leak <= 1e-10 { equal_up_to_phase(&act.matrix, &target, TOL) } else { None };
    Ok(CkReport { kappa: kappa.to_vec(), level, tuples, phase: phase.map(|z| (z.re, z.im)), leak: act.leak, pass: phase.is_some() })
}

/// Transversal `R_level^{+-1}` on the surviving parent qubits (sides from
/// the parent's bipartition) and a multi-controlled Z on the child's logical
/// qubits.
pub fn morphed_gate_circuit(cx: &Colex, morphed: &MorphResult, level: u32, flip: bool) -> Result<Circuit, GateError> {
    let d = cx.d();
    let all: Vec<usize> = (0..cx.count(d)).collect();
    let sides = bipartition(cx, &all)?;
    let mut c = Circuit::new(morphed.code.n());
    let mut logical = Vec::new();
    for (i, o) in morphed.qubit_map.iter().enumerate() {
        match *o {
            QubitOrigin::Parent(f) => {
                c.push(if sides[f].1 != flip { Gate::R { k: level, q: i } } else { Gate::Rdg { k: level, q: i } });
            }
            QubitOrigin::ChildLogical(_) => logical.push(i),
        }
    }
    c.push(Gate::MCZ(logical));
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GateReport {
    pub level: u32,
    pub flipped: bool,
    pub phase: (f64, f64),
    pub leak: f64,
}

/// Find the bipartition orientation under which the morphed circuit acts as
/// logical `R_level` (k = 1 codes).
pub fn verify_morphed_gate(cx: &Colex, morphed: &MorphResult, level: u32) -> Result<(Circuit, GateReport), GateError> {
    let target = r_matrix(level);
    let mut last_leak = 0.0;
    for flip in [false, true] {
        let c = morphed_gate_circuit(cx, morphed, level, flip)?;
        let act = logical_action(&morphed.code, &c)?;
        last_leak = act.leak;
        if let Some(z) = equal_up_to_phase(&act.matrix, &target, TOL) {
            return Ok((c, GateReport { level, flipped: flip, phase: (z.re, z.im), leak: act.leak }));
        }
    }
    Err(GateError::Invalid(format!("no orientation gives logical R_{level} (leak {last_leak:.2e})")))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FaultReport {
    pub faults: usize,
    pub detected: usize,
    pub harmless: usize,
    pub undetected_logical: usize,
}

/// Insert every nonzero Z pattern on each gate's support right after that
/// gate. A fault must either leave the codespace completely (detected) or
/// give the ideal logical action.
pub fn single_fault_check(code: &CssCode, c: &Circuit) -> Result<FaultReport, GateError> {
    let ideal = logical_action(code, c)?;
    let mut rep = FaultReport::default();
    for (i, g) in c.gates.iter().enumerate() {
        let qs = g.qubits();
        for pat in 1u32..(1 << qs.len()) {
            let mut fc = Circuit::new(c.n);
            fc.gates.extend_from_slice(&c.gates[..=i]);
            for (j, &q) in qs.iter().enumerate() {
                if pat >> j & 1 == 1 {
                    fc.push(Gate::Z(q));
                }
            }
            fc.gates.extend_from_slice(&c.gates[i + 1..]);
            let act = project(code, &fc)?;
            rep.faults += 1;
            if act.leak > 1.0 - 1e-9 {
                rep.detected += 1;
            } else if act.leak < 1e-9 && equal_up_to_phase(&act.matrix, &ideal.matrix, TOL).is_some() {
                rep.harmless += 1;
            } else {
                rep.undetected_logical += 1;
            }
        }
    }
    Ok(rep)
}
