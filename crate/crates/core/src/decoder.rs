//! Phase-flip decoder for 2D HCT lattices: matching on the two restricted
//! lattices, local modification of rr-edges, and the local lift.

use crate::gf2::{BitVec, EchelonBasis};
use crate::hct::{restricted_lattice, BallSpec, HctError, HctLattice, LatticeEdge, Qubit, Restricted};
use crate::matching::min_weight_perfect_matching;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("odd number of defects ({count}) in restricted lattice r{other}")]
    OddParity { other: u8, count: usize },
    #[error("defects in restricted lattice r{0} cannot be paired within connected components")]
    Unmatchable(u8),
    #[error("no detour for rr-edge {0}")]
    NoDetour(usize),
    #[error("no local lift at vertex {0}")]
    NoLocalLift(usize),
    #[error("correction syndrome differs from the error syndrome")]
    SyndromeMismatch,
    #[error("qubit {0} out of range")]
    BadQubit(usize),
    #[error("dual lattice needs hexagonal balls")]
    NotHexagonal,
    #[error(transparent)]
    Lattice(#[from] HctError),
}

/// Mod-2 edge set on one restricted lattice (`other` = 1 for rg, 2 for rb).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub other: u8,
    pub edges: BTreeSet<LatticeEdge>,
}

impl Matching {
    pub fn new(other: u8) -> Self {
        Matching { other, edges: BTreeSet::new() }
    }

    pub fn toggle(&mut self, e: LatticeEdge) {
        if !self.edges.remove(&e) {
            self.edges.insert(e);
        }
    }
}

/// Defect vertices (sorted) of a set of Z-errored qubits.
pub fn syndrome_of(lat: &HctLattice, error: &[usize]) -> Result<Vec<usize>, DecodeError> {
    let mut odd = BTreeSet::new();
    for &q in error {
        if q >= lat.n_qubits() {
            return Err(DecodeError::BadQubit(q));
        }
        for &v in lat.checks_on(q) {
            if !odd.remove(&v) {
                odd.insert(v);
            }
        }
    }
    Ok(odd.into_iter().collect())
}

pub fn edge_ends(lat: &HctLattice, e: LatticeEdge) -> (usize, usize) {
    match e {
        LatticeEdge::Base(i) => {
            let s = lat.base().simplex(1, i);
            (s[0], s[1])
        }
        LatticeEdge::Cc(i) => {
            let c = lat.cc_edges()[i];
            (c.hub, c.other)
        }
    }
}

/// Vertices with odd degree in the matching.
pub fn boundary(lat: &HctLattice, m: &Matching) -> Vec<usize> {
    let mut odd = BTreeSet::new();
    for &e in &m.edges {
        let (a, b) = edge_ends(lat, e);
        for v in [a, b] {
            if !odd.remove(&v) {
                odd.insert(v);
            }
        }
    }
    odd.into_iter().collect()
}

fn base_edge(lat: &HctLattice, a: usize, b: usize) -> usize {
    lat.base().find(&[a.min(b), a.max(b)]).expect("base edge")
}

/// Ring neighbours of `u` inside the ball `b`.
fn ring_neighbours(lat: &HctLattice, b: usize, u: usize) -> Vec<usize> {
    let ball = &lat.balls()[b].ball;
    let c = ball.center;
    let mut out: Vec<usize> = ball.members[2]
        .iter()
        .map(|&f| lat.base().simplex(2, f))
        .filter(|fv| fv.contains(&u))
        .map(|fv| *fv.iter().find(|&&x| x != c && x != u).unwrap())
        .collect();
    out.sort_unstable();
    out
}

/// Replace rr-edges whose ball color differs from the lattice's second color
/// by a detour through the ball's ring and same-color cc-edges.
pub fn local_modify(lat: &HctLattice, m: &Matching) -> Result<Matching, DecodeError> {
    let cx = lat.base();
    let mut out = Matching::new(m.other);
    for &e in &m.edges {
        let LatticeEdge::Cc(id) = e else {
            out.toggle(e);
            continue;
        };
        let cce = lat.cc_edges()[id];
        let b = cce.ball;
        if cce.color != 0 || cx.color(lat.balls()[b].center()) == m.other {
            out.toggle(e);
            continue;
        }
        let (u1, u2) = (cce.hub, cce.other);
        let hub = lat.balls()[b].hub_of(m.other);
        let path = |w1: usize, w2: usize| -> Vec<usize> {
            if w1 == w2 {
                return Vec::new();
            }
            [w1, w2].into_iter().filter(|&w| w != hub).map(|w| lat.cc_edge_to(b, w).unwrap()).collect()
        };
        let mut best: Option<(usize, usize, usize)> = None;
        for &w1 in &ring_neighbours(lat, b, u1) {
            for &w2 in &ring_neighbours(lat, b, u2) {
                if cx.color(w1) != m.other || cx.color(w2) != m.other {
                    continue;
                }
                let cost = 2 + path(w1, w2).len();
                if best.is_none_or(|(c, _, _)| cost < c) {
                    best = Some((cost, w1, w2));
                }
            }
        }
        let (_, w1, w2) = best.ok_or(DecodeError::NoDetour(id))?;
        out.toggle(LatticeEdge::Base(base_edge(lat, u1, w1)));
        out.toggle(LatticeEdge::Base(base_edge(lat, u2, w2)));
        for p in path(w1, w2) {
            out.toggle(LatticeEdge::Cc(p));
        }
    }
    debug_assert_eq!(boundary(lat, m), boundary(lat, &out));
    Ok(out)
}

/// Minimal face sets around one r-vertex indexed by the parity pattern of
/// their boundary on the incident edges.
#[derive(Clone, Debug)]
struct LiftTable {
    edges: Vec<usize>,
    faces: Vec<usize>,
    best: Vec<Option<u32>>,
}

impl LiftTable {
    fn new(lat: &HctLattice, v: usize) -> Self {
        let cx = lat.base();
        let vi = cx.find(&[v]).unwrap();
        let mut faces = cx.star_facets(0, vi).to_vec();
        faces.sort_unstable();
        let mut edges: Vec<usize> = cx.neighbors(v).iter().map(|&u| base_edge(lat, v, u)).collect();
        edges.sort_unstable();
        let ne = edges.len();
        let mut best: Vec<Option<u32>> = vec![None; 1 << ne];
        // ascending subsets by size, ties by the sorted face-id list
        let mut subsets: Vec<u32> = (0..1u32 << faces.len()).collect();
        subsets.sort_by_key(|&s| {
            let ids: Vec<usize> = (0..faces.len()).filter(|&i| s >> i & 1 == 1).map(|i| faces[i]).collect();
            (s.count_ones(), ids)
        });
        for s in subsets {
            let mut mask = 0usize;
            for (i, &f) in faces.iter().enumerate() {
                if s >> i & 1 == 1 {
                    for &u in cx.simplex(2, f) {
                        if u != v {
                            let e = base_edge(lat, v, u);
                            mask ^= 1 << edges.binary_search(&e).unwrap();
                        }
                    }
                }
            }
            if best[mask].is_none() {
                best[mask] = Some(s);
            }
        }
        LiftTable { edges, faces, best }
    }
}

/// Per-lattice decoding state: restricted lattices, lift tables and the
/// Z-stabilizer row space.
pub struct Decoder<'a> {
    lat: &'a HctLattice,
    rg: Restricted,
    rb: Restricted,
    lift: Vec<Option<LiftTable>>,
    zspace: EchelonBasis,
}

impl<'a> Decoder<'a> {
    pub fn new(lat: &'a HctLattice) -> Self {
        let cx = lat.base();
        let lift = (0..cx.num_vertices())
            .map(|v| (cx.color(v) == 0 && lat.center_ball(v).is_none()).then(|| LiftTable::new(lat, v)))
            .collect();
        let n = lat.n_qubits();
        let mut zspace = EchelonBasis::new(n);
        for v in 0..cx.num_vertices() {
            if !lat.z_check(v).is_empty() {
                zspace.insert(BitVec::from_indices(n, lat.z_check(v)));
            }
        }
        Decoder { lat, rg: restricted_lattice(lat, 1), rb: restricted_lattice(lat, 2), lift, zspace }
    }

    pub fn lattice(&self) -> &HctLattice {
        self.lat
    }

    pub fn restricted(&self, other: u8) -> &Restricted {
        if other == 1 {
            &self.rg
        } else {
            &self.rb
        }
    }

    /// Minimum-weight perfect matching of the defects in one restricted
    /// lattice, returned as the mod-2 sum of BFS shortest paths.
    pub fn match_defects(&self, syndrome: &[usize], other: u8) -> Result<Matching, DecodeError> {
        let r = self.restricted(other);
        let defects: Vec<usize> = syndrome.iter().copied().filter(|&v| r.contains(v)).map(|v| r.local[v]).collect();
        if defects.len() % 2 == 1 {
            return Err(DecodeError::OddParity { other, count: defects.len() });
        }
        let mut m = Matching::new(other);
        if defects.is_empty() {
            return Ok(m);
        }
        let trees: Vec<(Vec<u32>, Vec<(usize, LatticeEdge)>)> = defects.iter().map(|&s| bfs(r, s)).collect();
        let pairs = min_weight_perfect_matching(defects.len(), |i, j| {
            let d = trees[i].0[defects[j]];
            (d != u32::MAX).then_some(d as i64)
        })
        .ok_or(DecodeError::Unmatchable(other))?;
        for (i, j) in pairs {
            let parent = &trees[i].1;
            let mut x = defects[j];
            while x != defects[i] {
                let (p, e) = parent[x];
                m.toggle(e);
                x = p;
            }
        }
        Ok(m)
    }

    /// Correction from the two modified matchings.
    pub fn local_lift(&self, mrg: &Matching, mrb: &Matching) -> Result<Vec<usize>, DecodeError> {
        let lat = self.lat;
        let cx = lat.base();
        let mut zeta: BTreeSet<usize> = BTreeSet::new();
        let flip = |z: &mut BTreeSet<usize>, q: usize| {
            if !z.remove(&q) {
                z.insert(q);
            }
        };
        let mut mu: BTreeMap<usize, usize> = BTreeMap::new();
        let mut mark = |v: usize, e: usize| -> Result<(), DecodeError> {
            let t = self.lift[v].as_ref().ok_or(DecodeError::NoLocalLift(v))?;
            let pos = t.edges.binary_search(&e).map_err(|_| DecodeError::NoLocalLift(v))?;
            *mu.entry(v).or_insert(0) ^= 1 << pos;
            Ok(())
        };
        for m in [mrg, mrb] {
            for &e in &m.edges {
                match e {
                    LatticeEdge::Cc(id) => {
                        let c = lat.cc_edges()[id];
                        if c.color == 0 {
                            // a kept rr-edge stands for the two ball edges to its center
                            let center = lat.balls()[c.ball].center();
                            mark(c.hub, base_edge(lat, c.hub, center))?;
                            mark(c.other, base_edge(lat, c.other, center))?;
                        } else {
                            flip(&mut zeta, lat.cc_qubit(id));
                        }
                    }
                    LatticeEdge::Base(id) => {
                        let s = cx.simplex(1, id);
                        let v = if cx.color(s[0]) == 0 { s[0] } else { s[1] };
                        mark(v, id)?;
                    }
                }
            }
        }
        for (v, mask) in mu {
            if mask == 0 {
                continue;
            }
            let t = self.lift[v].as_ref().unwrap();
            let s = t.best[mask].ok_or(DecodeError::NoLocalLift(v))?;
            for (i, &f) in t.faces.iter().enumerate() {
                if s >> i & 1 == 1 {
                    for q in self.face_image(f) {
                        flip(&mut zeta, q);
                    }
                }
            }
        }
        Ok(zeta.into_iter().collect())
    }

    /// Qubits carrying `Z` on original face `f`: the face itself if it
    /// survives, otherwise its image under the ball's logical Z basis.
    pub fn face_image(&self, f: usize) -> Vec<usize> {
        let lat = self.lat;
        if let Some(q) = lat.face_qubit(f) {
            return vec![q];
        }
        let b = lat.face_ball(f).expect("removed face belongs to a ball");
        let ball = &lat.balls()[b];
        lat.base()
            .simplex(2, f)
            .iter()
            .filter(|&&x| x != ball.center() && x != ball.hub_of(lat.base().color(x)))
            .map(|&x| lat.cc_qubit(lat.cc_edge_to(b, x).unwrap()))
            .collect()
    }

    pub fn decode(&self, syndrome: &[usize]) -> Result<Vec<usize>, DecodeError> {
        let mrg = local_modify(self.lat, &self.match_defects(syndrome, 1)?)?;
        let mrb = local_modify(self.lat, &self.match_defects(syndrome, 2)?)?;
        self.local_lift(&mrg, &mrb)
    }

    /// Success iff error and correction differ by a Z stabilizer.
    pub fn judge(&self, error: &[usize], correction: &[usize]) -> Result<bool, DecodeError> {
        if syndrome_of(self.lat, error)? != syndrome_of(self.lat, correction)? {
            return Err(DecodeError::SyndromeMismatch);
        }
        let n = self.lat.n_qubits();
        let mut d = BitVec::from_indices(n, error);
        d.xor_assign(&BitVec::from_indices(n, correction));
        Ok(self.zspace.contains(&d))
    }
}

fn bfs(r: &Restricted, s: usize) -> (Vec<u32>, Vec<(usize, LatticeEdge)>) {
    let n = r.vertices.len();
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![(usize::MAX, LatticeEdge::Base(usize::MAX)); n];
    let mut q = VecDeque::new();
    dist[s] = 0;
    q.push_back(s);
    while let Some(x) = q.pop_front() {
        for &(y, e) in &r.adj[x] {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                parent[y] = (x, e);
                q.push_back(y);
            }
        }
    }
    (dist, parent)
}

/// Lattice whose X checks equal the Z checks of `lat` (and vice versa) under
/// a relabeling of cc-edge qubits: in each hexagonal ball the hub of one
/// ring color becomes the vertex of that color not adjacent to the other
/// color's hub. Returns the lattice and `map[q]` = dual index of qubit `q`.
pub fn dual_lattice(lat: &HctLattice) -> Result<(HctLattice, Vec<usize>), DecodeError> {
    let cx = lat.base();
    let mut specs = Vec::new();
    for (b, mb) in lat.balls().iter().enumerate() {
        if mb.ball.ring.len() != 6 || mb.hubs.len() != 2 {
            return Err(DecodeError::NotHexagonal);
        }
        let mut hubs = Vec::new();
        for &(c, _) in &mb.hubs {
            let (oc, oh) = *mb.hubs.iter().find(|h| h.0 != c).unwrap();
            let _ = oc;
            let adj = ring_neighbours(lat, b, oh);
            let h = *mb.ball.ring.iter().find(|&&u| cx.color(u) == c && !adj.contains(&u)).unwrap();
            hubs.push(h);
        }
        specs.push(BallSpec { center: mb.center(), hubs });
    }
    let dual = HctLattice::new(cx.clone(), specs)?;
    let mut map = vec![usize::MAX; lat.n_qubits()];
    for (q, slot) in map.iter_mut().enumerate() {
        *slot = match lat.qubit(q) {
            Qubit::Face(f) => dual.face_qubit(f).unwrap(),
            Qubit::Cc(e) => {
                let c = lat.cc_edges()[e];
                let nb = ring_neighbours(lat, c.ball, c.other);
                let hub = dual.balls()[c.ball].hub_of(cx.color(nb[0]));
                let x = if nb[0] == hub { nb[1] } else { nb[0] };
                dual.cc_qubit(dual.cc_edge_to(c.ball, x).ok_or(DecodeError::NotHexagonal)?)
            }
        };
    }
    Ok((dual, map))
}

/// Decoder for bit flips: the Z pipeline run on the dual lattice.
pub struct XDecoder {
    dual: HctLattice,
    map: Vec<usize>,
    inverse: Vec<usize>,
}

impl XDecoder {
    pub fn new(lat: &HctLattice) -> Result<Self, DecodeError> {
        let (dual, map) = dual_lattice(lat)?;
        let mut inverse = vec![0; map.len()];
        for (q, &d) in map.iter().enumerate() {
            inverse[d] = q;
        }
        Ok(XDecoder { dual, map, inverse })
    }

    /// Vertices whose Z check anticommutes with X on the given qubits.
    pub fn syndrome_of(&self, error: &[usize]) -> Result<Vec<usize>, DecodeError> {
        let mapped: Vec<usize> = error.iter().map(|&q| self.map.get(q).copied().ok_or(DecodeError::BadQubit(q))).collect::<Result<_, _>>()?;
        syndrome_of(&self.dual, &mapped)
    }

    pub fn decode(&self, syndrome: &[usize]) -> Result<Vec<usize>, DecodeError> {
        let dec = Decoder::new(&self.dual);
        let mut c: Vec<usize> = dec.decode(syndrome)?.into_iter().map(|q| self.inverse[q]).collect();
        c.sort_unstable();
        Ok(c)
    }

    pub fn judge(&self, error: &[usize], correction: &[usize]) -> Result<bool, DecodeError> {
        let m = |v: &[usize]| -> Vec<usize> { v.iter().map(|&q| self.map[q]).collect() };
        Decoder::new(&self.dual).judge(&m(error), &m(correction))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex;
    use crate::hct::{generate, split_into_toric_copies, Method};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_error(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<usize> {
        (0..n).filter(|_| rng.random_bool(p)).collect()
    }

    #[test]
    fn syndrome_examples() {
        let lat = generate(6, Method::A1, 0.5, 3).unwrap();
        assert!(syndrome_of(&lat, &[]).unwrap().is_empty());
        let f = (0..lat.n_qubits()).find(|&q| matches!(lat.qubit(q), Qubit::Face(_))).unwrap();
        assert_eq!(syndrome_of(&lat, &[f]).unwrap().len(), 3);
        let e = lat.cc_qubit(0);
        let c = lat.cc_edges()[0];
        let mut want = vec![c.hub, c.other];
        want.sort_unstable();
        assert_eq!(syndrome_of(&lat, &[e]).unwrap(), want);
    }

    #[test]
    fn adjacent_defects_match_by_one_edge() {
        let lat = HctLattice::torus(6).unwrap();
        let dec = Decoder::new(&lat);
        let (r, g) = (0, 1);
        assert_eq!(lat.base().color(g), 1);
        let m = dec.match_defects(&[r, g], 1).unwrap();
        assert_eq!(m.edges.len(), 1);
        assert!(dec.match_defects(&[], 1).unwrap().edges.is_empty());
        assert!(matches!(dec.match_defects(&[r], 1), Err(DecodeError::OddParity { .. })));
    }

    // exhaustive pairing over BFS distances
    fn brute_pairing(d: &dyn Fn(usize, usize) -> i64, idx: &mut Vec<usize>) -> i64 {
        if idx.is_empty() {
            return 0;
        }
        let a = idx.remove(0);
        let mut best = i64::MAX;
        for k in 0..idx.len() {
            let b = idx.remove(k);
            best = best.min(d(a, b) + brute_pairing(d, idx));
            idx.insert(k, b);
        }
        idx.insert(0, a);
        best
    }

    #[test]
    fn matching_weight_equals_exhaustive_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let lat = generate(6, Method::C, 0.5, trial).unwrap();
            let dec = Decoder::new(&lat);
            for other in [1u8, 2] {
                let r = dec.restricted(other);
                let k = 2 * rng.random_range(1..=5);
                let mut defects: Vec<usize> = Vec::new();
                while defects.len() < k {
                    let v = r.vertices[rng.random_range(0..r.vertices.len())];
                    if !defects.contains(&v) {
                        defects.push(v);
                    }
                }
                defects.sort_unstable();
                let m = dec.match_defects(&defects, other).unwrap();
                assert_eq!(boundary(&lat, &m), defects);
                let trees: Vec<Vec<u32>> = defects.iter().map(|&v| bfs(r, r.local[v]).0).collect();
                let dist = |i: usize, j: usize| trees[i][r.local[defects[j]]] as i64;
                let opt = brute_pairing(&dist, &mut (0..k).collect());
                // the mod-2 sum can only cancel edges
                assert!(m.edges.len() as i64 <= opt);
                let pairs = min_weight_perfect_matching(k, |i, j| Some(dist(i, j))).unwrap();
                assert_eq!(pairs.iter().map(|&(i, j)| dist(i, j)).sum::<i64>(), opt);
            }
        }
    }

    #[test]
    fn local_modify_leaves_method_a_unchanged() {
        let lat = generate(9, Method::A2, 0.7, 1).unwrap();
        let dec = Decoder::new(&lat);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = random_error(lat.n_qubits(), 0.05, &mut rng);
        let s = syndrome_of(&lat, &err).unwrap();
        for other in [1, 2] {
            let m = dec.match_defects(&s, other).unwrap();
            assert_eq!(local_modify(&lat, &m).unwrap(), m);
        }
    }

    #[test]
    fn local_modify_preserves_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut replaced = 0;
        for i in 0..10_000u64 {
            let lat_seed = i % 25;
            let lat = generate(6, Method::B, 0.6, lat_seed).unwrap();
            let rr: Vec<usize> = (0..lat.cc_edges().len()).filter(|&e| lat.cc_edges()[e].color == 0).collect();
            let mut m = Matching::new(1 + (i % 2) as u8);
            for _ in 0..rng.random_range(1..6) {
                if !rr.is_empty() && rng.random_bool(0.6) {
                    m.toggle(LatticeEdge::Cc(rr[rng.random_range(0..rr.len())]));
                } else {
                    m.toggle(LatticeEdge::Base(rng.random_range(0..lat.base().count(1))));
                }
            }
            let out = local_modify(&lat, &m).unwrap();
            assert_eq!(boundary(&lat, &m), boundary(&lat, &out));
            if out != m {
                replaced += 1;
            }
        }
        assert!(replaced > 1000);
    }

    #[test]
    fn lift_next_to_hub() {
        // r-vertex v on the ring of a morphed b ball whose g hub is next to v
        let lat = HctLattice::torus(6).unwrap();
        let cx = lat.base().clone();
        let c = (0..36).find(|&v| cx.color(v) == 2).unwrap();
        let ball = cx.ball(c).unwrap();
        let v = *ball.ring.iter().find(|&&u| cx.color(u) == 0).unwrap();
        let nb: Vec<usize> = ball
            .members[2]
            .iter()
            .map(|&f| cx.simplex(2, f))
            .filter(|fv| fv.contains(&v))
            .map(|fv| *fv.iter().find(|&&x| x != c && x != v).unwrap())
            .collect();
        let mut m = Matching::new(1);
        for &x in &nb {
            m.toggle(LatticeEdge::Base(base_edge(&lat, v, x)));
        }
        let dec = Decoder::new(&lat);
        let faces = dec.local_lift(&m, &Matching::new(2)).unwrap();
        let want: Vec<usize> = ball.members[2].iter().copied().filter(|&f| cx.simplex(2, f).contains(&v)).collect();
        assert_eq!(faces, want);

        let r_hub = *ball.ring.iter().find(|&&u| cx.color(u) == 0).unwrap();
        let hubs = vec![r_hub, nb[0]];
        let morphed = lat.geometric_morph(c, &hubs).unwrap();
        let dec = Decoder::new(&morphed);
        let out = dec.local_lift(&m, &Matching::new(2)).unwrap();
        let e = morphed.cc_edge_to(0, nb[1]).unwrap();
        assert_eq!(out, vec![morphed.cc_qubit(e)]);
    }

    #[test]
    fn single_qubit_errors_are_corrected() {
        for (l, method, q, seed) in [(6, Method::A1, 0.0, 0), (6, Method::A1, 1.0, 0), (9, Method::A2, 0.5, 2), (9, Method::B, 0.6, 3), (12, Method::C, 0.8, 4)] {
            let lat = generate(l, method, q, seed).unwrap();
            let dec = Decoder::new(&lat);
            for e in 0..lat.n_qubits() {
                let s = syndrome_of(&lat, &[e]).unwrap();
                let c = dec.decode(&s).unwrap();
                assert!(dec.judge(&[e], &c).unwrap(), "{method} q={q} qubit {e}");
            }
        }
    }

    #[test]
    fn judge_examples() {
        let lat = generate(6, Method::A1, 0.5, 1).unwrap();
        let dec = Decoder::new(&lat);
        let code = lat.to_code();
        let err = vec![0, 5];
        assert!(dec.judge(&err, &err).unwrap());
        let with_stab: Vec<usize> = BitVec::from_indices(lat.n_qubits(), &err).xor(&code.z_stabs()[0]).ones();
        assert!(dec.judge(&err, &with_stab).unwrap());
        let with_log: Vec<usize> = BitVec::from_indices(lat.n_qubits(), &err).xor(&code.logical_z()[0]).ones();
        assert!(!dec.judge(&err, &with_log).unwrap());
        assert_eq!(dec.judge(&err, &[]), Err(DecodeError::SyndromeMismatch));
    }

    #[test]
    fn full_morph_matches_toric_mwpm_weight() {
        let lat = generate(9, Method::A1, 1.0, 0).unwrap();
        let dec = Decoder::new(&lat);
        let copies = split_into_toric_copies(&lat).unwrap();
        assert_eq!(copies.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let err = random_error(lat.n_qubits(), 0.06, &mut rng);
            let s = syndrome_of(&lat, &err).unwrap();
            let c = dec.decode(&s).unwrap();
            for other in [1u8, 2] {
                // independent MWPM over the toric copy's vertex graph
                let r = dec.restricted(other);
                let defects: Vec<usize> = s.iter().copied().filter(|&v| r.contains(v)).collect();
                let trees: Vec<Vec<u32>> = defects.iter().map(|&v| bfs(r, r.local[v]).0).collect();
                let w: i64 = min_weight_perfect_matching(defects.len(), |i, j| Some(trees[i][r.local[defects[j]]] as i64))
                    .unwrap()
                    .iter()
                    .map(|&(i, j)| trees[i][r.local[defects[j]]] as i64)
                    .sum();
                let in_copy = c.iter().filter(|&&q| matches!(lat.qubit(q), Qubit::Cc(e) if lat.cc_edges()[e].color == other)).count() as i64;
                assert!(in_copy <= w && (w - in_copy) % 2 == 0);
            }
            assert_eq!(syndrome_of(&lat, &c).unwrap(), s);
        }
    }

    #[test]
    fn dual_lattice_swaps_check_types() {
        for (method, q, seed) in [(Method::A1, 0.5, 0), (Method::A2, 1.0, 1), (Method::B, 0.6, 2), (Method::C, 0.7, 3)] {
            let lat = generate(9, method, q, seed).unwrap();
            let (dual, map) = dual_lattice(&lat).unwrap();
            for v in 0..lat.base().num_vertices() {
                let mut z: Vec<usize> = lat.z_check(v).iter().map(|&q| map[q]).collect();
                z.sort_unstable();
                assert_eq!(z, dual.x_check(v), "{method} Z->X at {v}");
                let mut x: Vec<usize> = lat.x_check(v).iter().map(|&q| map[q]).collect();
                x.sort_unstable();
                assert_eq!(x, dual.z_check(v), "{method} X->Z at {v}");
            }
            let xd = XDecoder::new(&lat).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..20 {
                let err = random_error(lat.n_qubits(), 0.03, &mut rng);
                let s = xd.syndrome_of(&err).unwrap();
                let c = xd.decode(&s).unwrap();
                assert_eq!(xd.syndrome_of(&c).unwrap(), s);
                let _ = xd.judge(&err, &c).unwrap();
            }
        }
    }

    #[test]
    fn q0_lift_returns_only_faces() {
        let lat = HctLattice::torus(9).unwrap();
        let dec = Decoder::new(&lat);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let err = random_error(lat.n_qubits(), 0.08, &mut rng);
        let s = syndrome_of(&lat, &err).unwrap();
        let c = dec.decode(&s).unwrap();
        assert!(c.iter().all(|&q| matches!(lat.qubit(q), Qubit::Face(_))));
        assert_eq!(syndrome_of(&lat, &c).unwrap(), s);
        let _ = colex::default_hubs;
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn decode_reproduces_syndrome(l in prop::sample::select(vec![6usize, 12]), qi in 0usize..4, mi in 0usize..4, seed in 0u64..1000, p in 0.0f64..0.2) {
            let q = [0.0, 0.3, 0.6, 1.0][qi];
            let method = [Method::A1, Method::A2, Method::B, Method::C][mi];
            let lat = generate(l, method, q, seed).unwrap();
            let dec = Decoder::new(&lat);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..20 {
                let err = random_error(lat.n_qubits(), p, &mut rng);
                let s = syndrome_of(&lat, &err).unwrap();
                let c = dec.decode(&s).unwrap();
                prop_assert_eq!(syndrome_of(&lat, &c).unwrap(), s);
            }
        }

        #[test]
        fn defects_pair_up_on_each_restricted_lattice(mi in 0usize..4, q in 0.0f64..=1.0, seed in 0u64..1000, p in 0.0f64..0.3) {
            let method = [Method::A1, Method::A2, Method::B, Method::C][mi];
            let lat = generate(9, method, q, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let err = random_error(lat.n_qubits(), p, &mut rng);
            let s = syndrome_of(&lat, &err).unwrap();
            for other in [1u8, 2] {
                let r = restricted_lattice(&lat, other);
                prop_assert_eq!(s.iter().filter(|&&v| r.contains(v)).count() % 2, 0);
            }
        }
    }
}
