//! Hybrid color-toric (HCT) lattices: a 2D color code with some balls
//! morphed into cc-edge qubits, the generation methods, restricted lattices
//! and the fully morphed toric split.

use crate::code::CssCode;
use crate::colex::{self, Ball, Colex, ColexError};
use crate::gf2::BitVec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HctError {
    #[error(transparent)]
    Colex(#[from] ColexError),
    #[error("HCT lattices are two-dimensional, got d = {0}")]
    NotTwoDimensional(usize),
    #[error("ball at {0} overlaps an already morphed ball")]
    Overlap(usize),
    #[error("lattice still has {0} face qubits")]
    NotFullyMorphed(usize),
    #[error("unknown method {0:?}")]
    BadMethod(String),
    #[error("q = {0} outside [0, 1]")]
    BadProbability(f64),
}

/// Generation method for random HCT lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// Each r ball morphed with probability q, fixed hubs.
    A1,
    /// As A1 with random hubs.
    A2,
    /// Color passes r, g, b; overlapping balls skipped.
    B,
    /// Random vertex order; overlapping balls skipped.
    C,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::A1 => "A1",
            Method::A2 => "A2",
            Method::B => "B",
            Method::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Method {
    type Err = HctError;
    fn from_str(s: &str) -> Result<Self, HctError> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Method::A1),
            "A2" => Ok(Method::A2),
            "B" => Ok(Method::B),
            "C" => Ok(Method::C),
            _ => Err(HctError::BadMethod(s.to_string())),
        }
    }
}

/// A morph request: ball center and one hub vertex per boundary color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: usize,
    pub hubs: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MorphedBall {
    pub ball: Ball,
    /// `(color, hub)` sorted by color.
    pub hubs: Vec<(u8, usize)>,
    /// cc-edge ids created by this ball, in logical-qubit order.
    pub edges: Vec<usize>,
}

impl MorphedBall {
    pub fn center(&self) -> usize {
        self.ball.center
    }

    pub fn hub_of(&self, color: u8) -> usize {
        self.hubs.iter().find(|h| h.0 == color).expect("hub per ring color").1
    }
}

/// Edge linking a ball's hub to another boundary vertex of the same color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CcEdge {
    pub hub: usize,
    pub other: usize,
    pub color: u8,
    pub ball: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Qubit {
    Face(usize),
    Cc(usize),
}

#[derive(Clone, Debug)]
pub struct HctLattice {
    base: Colex,
    specs: Vec<BallSpec>,
    balls: Vec<MorphedBall>,
    cc: Vec<CcEdge>,
    qubits: Vec<Qubit>,
    face_qubit: Vec<Option<usize>>,
    cc_qubit: Vec<usize>,
    center_ball: Vec<Option<usize>>,
    face_ball: Vec<Option<usize>>,
    x_checks: Vec<Vec<usize>>,
    z_checks: Vec<Vec<usize>>,
    qubit_x: Vec<Vec<usize>>,
}

/// Serializable lattice: the base torus size or complex plus morph requests.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub l: Option<usize>,
    pub colex: Option<colex::ColexJson>,
    pub method: Option<Method>,
    pub q: Option<f64>,
    pub seed: Option<u64>,
    pub balls: Vec<BallSpec>,
    pub n_qubits: usize,
}

fn toggle(v: &mut Vec<usize>, q: usize) {
    match v.iter().position(|&x| x == q) {
        Some(i) => {
            v.swap_remove(i);
        }
        None => v.push(q),
    }
}

impl HctLattice {
    /// Morph the given balls of `base` at once. Balls must not share a face.
    pub fn new(base: Colex, specs: Vec<BallSpec>) -> Result<Self, HctError> {
        if base.d() != 2 {
            return Err(HctError::NotTwoDimensional(base.d()));
        }
        let nv = base.num_vertices();
        let nf = base.count(2);
        let mut center_ball = vec![None; nv];
        let mut face_ball = vec![None; nf];
        let mut balls = Vec::with_capacity(specs.len());
        let mut cc = Vec::new();
        for (bi, s) in specs.iter().enumerate() {
            let ball = base.ball(s.center)?;
            for &f in &ball.members[2] {
                if face_ball[f].is_some() {
                    return Err(HctError::Overlap(s.center));
                }
            }
            for &f in &ball.members[2] {
                face_ball[f] = Some(bi);
            }
            center_ball[s.center] = Some(bi);
            let basis = colex::canonical_basis(&base, &ball, &s.hubs)?;
            let mut edges = Vec::with_capacity(basis.logical_vertices.len());
            for &w in &basis.logical_vertices {
                let color = base.color(w);
                edges.push(cc.len());
                cc.push(CcEdge { hub: basis.hub_of(color).unwrap(), other: w, color, ball: bi });
            }
            balls.push(MorphedBall { ball, hubs: basis.hubs, edges });
        }

        let mut qubits = Vec::new();
        let mut face_qubit = vec![None; nf];
        for f in 0..nf {
            if face_ball[f].is_none() {
                face_qubit[f] = Some(qubits.len());
                qubits.push(Qubit::Face(f));
            }
        }
        let mut cc_qubit = Vec::with_capacity(cc.len());
        for e in 0..cc.len() {
            cc_qubit.push(qubits.len());
            qubits.push(Qubit::Cc(e));
        }

        let mut x_checks = vec![Vec::new(); nv];
        let mut z_checks = vec![Vec::new(); nv];
        for v in 0..nv {
            if center_ball[v].is_some() {
                continue;
            }
            let star = base.star_facets(0, base.find(&[v]).unwrap());
            for &f in star {
                if let Some(q) = face_qubit[f] {
                    x_checks[v].push(q);
                    z_checks[v].push(q);
                }
            }
        }
        for (e, c) in cc.iter().enumerate() {
            x_checks[c.hub].push(cc_qubit[e]);
            x_checks[c.other].push(cc_qubit[e]);
        }
        // Z on a ring vertex mu picks up the logical Z's of the ring
        // neighbours of mu that are not hubs
        for b in &balls {
            let c = b.center();
            for &mu in &b.ball.ring {
                for &f in &b.ball.members[2] {
                    let fv = base.simplex(2, f);
                    if !fv.contains(&mu) {
                        continue;
                    }
                    let w = *fv.iter().find(|&&x| x != c && x != mu).unwrap();
                    if w == b.hub_of(base.color(w)) {
                        continue;
                    }
                    let e = b.edges.iter().copied().find(|&e| cc[e].other == w).unwrap();
                    toggle(&mut z_checks[mu], cc_qubit[e]);
                }
            }
        }
        let mut qubit_x = vec![Vec::new(); qubits.len()];
        for (v, chk) in x_checks.iter_mut().enumerate() {
            chk.sort_unstable();
            for &q in chk.iter() {
                qubit_x[q].push(v);
            }
        }
        for chk in z_checks.iter_mut() {
            chk.sort_unstable();
        }
        Ok(HctLattice {
            base,
            specs,
            balls,
            cc,
            qubits,
            face_qubit,
            cc_qubit,
            center_ball,
            face_ball,
            x_checks,
            z_checks,
            qubit_x,
        })
    }

    /// Unmorphed color code on the triangular torus.
    pub fn torus(l: usize) -> Result<Self, HctError> {
        Self::new(Colex::triangular_torus(l)?, Vec::new())
    }

    /// Morph one more ball, refusing overlaps.
    pub fn geometric_morph(&self, center: usize, hubs: &[usize]) -> Result<Self, HctError> {
        let mut specs = self.specs.clone();
        specs.push(BallSpec { center, hubs: hubs.to_vec() });
        Self::new(self.base.clone(), specs)
    }

    pub fn base(&self) -> &Colex {
        &self.base
    }

    pub fn specs(&self) -> &[BallSpec] {
        &self.specs
    }

    pub fn balls(&self) -> &[MorphedBall] {
        &self.balls
    }

    pub fn cc_edges(&self) -> &[CcEdge] {
        &self.cc
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, q: usize) -> Qubit {
        self.qubits[q]
    }

    pub fn face_qubit(&self, f: usize) -> Option<usize> {
        self.face_qubit[f]
    }

    pub fn cc_qubit(&self, e: usize) -> usize {
        self.cc_qubit[e]
    }

    pub fn n_face_qubits(&self) -> usize {
        self.qubits.len() - self.cc.len()
    }

    /// Index of the morphed ball centered at `v`.
    pub fn center_ball(&self, v: usize) -> Option<usize> {
        self.center_ball[v]
    }

    /// Morphed ball that removed face `f`.
    pub fn face_ball(&self, f: usize) -> Option<usize> {
        self.face_ball[f]
    }

    /// Qubits of the X check at vertex `v` (empty for morphed centers).
    pub fn x_check(&self, v: usize) -> &[usize] {
        &self.x_checks[v]
    }

    pub fn z_check(&self, v: usize) -> &[usize] {
        &self.z_checks[v]
    }

    /// Vertices whose X check contains qubit `q`.
    pub fn checks_on(&self, q: usize) -> &[usize] {
        &self.qubit_x[q]
    }

    /// The cc-edge `(hub, w)` of ball `b` for non-hub ring vertex `w`.
    pub fn cc_edge_to(&self, b: usize, w: usize) -> Option<usize> {
        self.balls[b].edges.iter().copied().find(|&e| self.cc[e].other == w)
    }

    pub fn to_code(&self) -> CssCode {
        let n = self.n_qubits();
        let rows = |chk: &Vec<Vec<usize>>| -> Vec<BitVec> {
            chk.iter().filter(|c| !c.is_empty()).map(|c| BitVec::from_indices(n, c)).collect()
        };
        CssCode::new("hct", n, rows(&self.x_checks), rows(&self.z_checks)).expect("HCT checks commute")
    }

    pub fn to_json(&self, method: Option<Method>, q: Option<f64>, seed: Option<u64>) -> LatticeJson {
        let (l, cx) = match self.base.torus() {
            Some(t) => (Some(t.l), None),
            None => (None, Some(self.base.to_json())),
        };
        LatticeJson { l, colex: cx, method, q, seed, balls: self.specs.clone(), n_qubits: self.n_qubits() }
    }

    pub fn from_json(j: &LatticeJson) -> Result<Self, HctError> {
        let base = match (&j.l, &j.colex) {
            (Some(l), _) => Colex::triangular_torus(*l)?,
            (None, Some(c)) => Colex::from_json(c)?,
            (None, None) => return Err(HctError::BadMethod("lattice needs `l` or `colex`".into())),
        };
        Self::new(base, j.balls.clone())
    }
}

/// Random HCT lattice on the `l x l` triangular torus.
pub fn generate(l: usize, method: Method, q: f64, seed: u64) -> Result<HctLattice, HctError> {
    generate_on(Colex::triangular_torus(l)?, method, q, seed)
}

pub fn generate_on(base: Colex, method: Method, q: f64, seed: u64) -> Result<HctLattice, HctError> {
    if !(0.0..=1.0).contains(&q) {
        return Err(HctError::BadProbability(q));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = base.num_vertices();
    let interior = |v: usize| !base.is_boundary(0, base.find(&[v]).unwrap());
    let order: Vec<usize> = match method {
        Method::A1 | Method::A2 => (0..nv).filter(|&v| base.color(v) == 0).collect(),
        Method::B => {
            let colors = base.colors();
            (0..3u8).flat_map(|c| (0..nv).filter(move |&v| colors[v] == c)).collect()
        }
        Method::C => {
            let mut o: Vec<usize> = (0..nv).collect();
            o.shuffle(&mut rng);
            o
        }
    };
    let mut used = vec![false; base.count(2)];
    let mut specs = Vec::new();
    for v in order {
        if !interior(v) {
            continue;
        }
        let st = base.star_facets(0, base.find(&[v]).unwrap());
        if st.iter().any(|&f| used[f]) {
            continue;
        }
        if !rng.random_bool(q) {
            continue;
        }
        let ball = base.ball(v)?;
        let hubs = match method {
            Method::A1 => colex::default_hubs(&base, &ball),
            _ => colex::random_hubs(&base, &ball, &mut rng),
        };
        for &f in st {
            used[f] = true;
        }
        specs.push(BallSpec { center: v, hubs });
    }
    HctLattice::new(base, specs)
}

/// Edge of a restricted lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LatticeEdge {
    /// Surviving edge of the base colex (edge id).
    Base(usize),
    /// cc-edge id.
    Cc(usize),
}

/// Graph on the surviving vertices of two colors (r and `other`) with the
/// surviving base edges and the cc-edges of those colors.
#[derive(Clone, Debug)]
pub struct Restricted {
    pub other: u8,
    pub vertices: Vec<usize>,
    /// Local index of each base vertex, `usize::MAX` if absent.
    pub local: Vec<usize>,
    /// `(neighbor local index, edge)` sorted by neighbor vertex id.
    pub adj: Vec<Vec<(usize, LatticeEdge)>>,
}

impl Restricted {
    pub fn contains(&self, v: usize) -> bool {
        self.local[v] != usize::MAX
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }
}

pub fn restricted_lattice(lat: &HctLattice, other: u8) -> Restricted {
    let cx = lat.base();
    let keep = |v: usize| (cx.color(v) == 0 || cx.color(v) == other) && lat.center_ball(v).is_none();
    let vertices: Vec<usize> = (0..cx.num_vertices()).filter(|&v| keep(v)).collect();
    let mut local = vec![usize::MAX; cx.num_vertices()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut adj: Vec<Vec<(usize, LatticeEdge)>> = vec![Vec::new(); vertices.len()];
    for (e, s) in cx.simplices(1).iter().enumerate() {
        let (a, b) = (s[0], s[1]);
        if keep(a) && keep(b) {
            adj[local[a]].push((local[b], LatticeEdge::Base(e)));
            adj[local[b]].push((local[a], LatticeEdge::Base(e)));
        }
    }
    for (e, c) in lat.cc_edges().iter().enumerate() {
        if (c.color == 0 || c.color == other) && keep(c.hub) && keep(c.other) {
            adj[local[c.hub]].push((local[c.other], LatticeEdge::Cc(e)));
            adj[local[c.other]].push((local[c.hub], LatticeEdge::Cc(e)));
        }
    }
    for a in &mut adj {
        a.sort_by_key(|&(u, e)| (vertices[u], e));
    }
    Restricted { other, vertices, local, adj }
}

/// Connected components of a code's qubits under shared checks; each
/// component becomes its own code (qubits in increasing order).
pub fn split_components(code: &CssCode) -> Vec<(Vec<usize>, CssCode)> {
    let n = code.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for row in code.x_stabs().iter().chain(code.z_stabs()) {
        let ones = row.ones();
        for w in ones.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for q in 0..n {
        let r = find(&mut parent, q);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(q),
            None => groups.push((r, vec![q])),
        }
    }
    groups
        .into_iter()
        .map(|(_, qs)| {
            let sub = |rows: &[BitVec]| -> Vec<BitVec> {
                rows.iter().map(|r| r.gather(&qs)).filter(|r| !r.is_zero()).collect()
            };
            let c = CssCode::new("component", qs.len(), sub(code.x_stabs()), sub(code.z_stabs()))
                .expect("component checks commute");
            (qs, c)
        })
        .collect()
}

/// The two toric-code copies of a fully morphed lattice (cc-edge colors).
pub fn split_into_toric_copies(lat: &HctLattice) -> Result<Vec<(u8, CssCode)>, HctError> {
    let nf = lat.n_face_qubits();
    if nf > 0 {
        return Err(HctError::NotFullyMorphed(nf));
    }
    let mut out = Vec::new();
    for (qs, c) in split_components(&lat.to_code()) {
        let color = match lat.qubit(qs[0]) {
            Qubit::Cc(e) => lat.cc_edges()[e].color,
            Qubit::Face(_) => unreachable!(),
        };
        out.push((color, c));
    }
    out.sort_by_key(|e| e.0);
    Ok(out)
}

/// Structural test for a toric code on a 4-regular cellulation: every qubit
/// in exactly two X checks and two Z checks, all checks of weight 4.
pub fn is_square_toric(code: &CssCode) -> bool {
    let n = code.n();
    let deg = |rows: &[BitVec]| {
        let mut d = vec![0usize; n];
        for r in rows {
            for q in r.iter_ones() {
                d[q] += 1;
            }
        }
        d
    };
    let ok = |rows: &[BitVec]| rows.iter().all(|r| r.count_ones() == 4) && deg(rows).iter().all(|&d| d == 2);
    code.k() == 2 && ok(code.x_stabs()) && ok(code.z_stabs())
}
