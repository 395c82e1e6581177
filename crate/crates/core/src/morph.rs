//! Code morphing: replace a region of a parent code by the logical qubits of
//! the child code it supports.

use crate::code::{dual_logicals, invert, CodeError, CodeJson, CssCode};
use crate::colex::{self, Ball, Colex};
use crate::gf2::{rref, BitVec, EchelonBasis};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("region is empty")]
    EmptyRegion,
    #[error("region qubit {0} invalid or repeated")]
    BadRegion(usize),
    #[error("child code has no logical qubits")]
    TrivialChild,
    #[error("generator restriction is outside the child's stabilizer + logical span")]
    NotInSpan,
    #[error("colex error: {0}")]
    Colex(String),
}

/// Where a qubit of the morphed code came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QubitOrigin {
    Parent(usize),
    ChildLogical(usize),
}

/// Parent code, region and the child code with the logical basis to use.
#[derive(Clone, Debug)]
pub struct MorphSpec {
    pub parent: CssCode,
    pub region: Vec<usize>,
    pub child: CssCode,
}

#[derive(Clone, Debug)]
pub struct MorphResult {
    pub code: CssCode,
    pub qubit_map: Vec<QubitOrigin>,
}

/// On-disk morph result: the code plus where each qubit came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphJson {
    pub code: CodeJson,
    pub qubit_map: Vec<QubitOrigin>,
}

impl MorphResult {
    pub fn to_json(&self) -> MorphJson {
        MorphJson { code: self.code.to_json(), qubit_map: self.qubit_map.clone() }
    }

    pub fn from_json(j: &MorphJson) -> Result<Self, MorphError> {
        let code = CssCode::from_json(&j.code)?;
        if j.qubit_map.len() != code.n() {
            return Err(MorphError::Code(CodeError::Length(j.qubit_map.len(), code.n())));
        }
        Ok(MorphResult { code, qubit_map: j.qubit_map.clone() })
    }
}

fn check_region(n: usize, region: &[usize]) -> Result<Vec<usize>, MorphError> {
    if region.is_empty() {
        return Err(MorphError::EmptyRegion);
    }
    let mut r = region.to_vec();
    r.sort_unstable();
    for w in r.windows(2) {
        if w[0] == w[1] {
            return Err(MorphError::BadRegion(w[0]));
        }
    }
    if let Some(&last) = r.last() {
        if last >= n {
            return Err(MorphError::BadRegion(last));
        }
    }
    Ok(r)
}

/// Basis of the part of `span(rows)` supported inside `region`, expressed on
/// region-local coordinates.
fn supported_subspace(rows: &[BitVec], region: &[usize], outside: &[usize]) -> Vec<BitVec> {
    // order columns as (outside | region); rows whose pivot lands in the region
    // part have no outside support
    let order: Vec<usize> = outside.iter().chain(region).copied().collect();
    let permuted: Vec<BitVec> = rows.iter().map(|r| r.gather(&order)).collect();
    let (red, pivots) = rref(&permuted);
    red.iter()
        .zip(&pivots)
        .filter(|(_, &p)| p >= outside.len())
        .map(|(r, _)| r.slice(outside.len(), region.len()))
        .collect()
}

fn complement(n: usize, region: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &q in region {
        inside[q] = true;
    }
    (0..n).filter(|&q| !inside[q]).collect()
}

/// Child stabilizer: all elements of the parent stabilizer group supported
/// in the region, with default logicals. Qubit `i` is `region[i]` (sorted).
pub fn restrict_stabilizer(parent: &CssCode, region: &[usize]) -> Result<CssCode, MorphError> {
    let r = check_region(parent.n(), region)?;
    let out = complement(parent.n(), &r);
    let xs = supported_subspace(parent.x_stabs(), &r, &out);
    let zs = supported_subspace(parent.z_stabs(), &r, &out);
    Ok(CssCode::new(&format!("{}|R", parent.label), r.len(), xs, zs)?)
}

impl MorphSpec {
    /// Child logicals from the default extraction.
    pub fn canonical(parent: &CssCode, region: &[usize]) -> Result<Self, MorphError> {
        let child = restrict_stabilizer(parent, region)?;
        if child.k() == 0 {
            return Err(MorphError::TrivialChild);
        }
        Ok(MorphSpec { parent: parent.clone(), region: check_region(parent.n(), region)?, child })
    }

    /// Child logicals given on region-local coordinates.
    pub fn with_basis(
        parent: &CssCode,
        region: &[usize],
        logical_x: Vec<BitVec>,
        logical_z: Vec<BitVec>,
    ) -> Result<Self, MorphError> {
        let c = restrict_stabilizer(parent, region)?;
        if c.k() == 0 {
            return Err(MorphError::TrivialChild);
        }
        let child = CssCode::with_logicals(&c.label, c.n(), c.x_stabs().to_vec(), c.z_stabs().to_vec(), logical_x, logical_z)?;
        Ok(MorphSpec { parent: parent.clone(), region: check_region(parent.n(), region)?, child })
    }

    /// Child logical X basis from the given X representatives; Z partners
    /// are computed.
    pub fn with_x_basis(parent: &CssCode, region: &[usize], logical_x: Vec<BitVec>) -> Result<Self, MorphError> {
        let c = restrict_stabilizer(parent, region)?;
        let lz = dual_logicals(&c, &logical_x)?;
        Self::with_basis(parent, region, logical_x, lz)
    }

    /// Uniformly random invertible change of the child's logical X basis,
    /// each representative also multiplied by random stabilizers.
    pub fn random(parent: &CssCode, region: &[usize], seed: u64) -> Result<Self, MorphError> {
        let c = restrict_stabilizer(parent, region)?;
        let k = c.k();
        if k == 0 {
            return Err(MorphError::TrivialChild);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let a = loop {
            let m: Vec<BitVec> = (0..k)
                .map(|_| BitVec::from_bools(&(0..k).map(|_| rng.random_bool(0.5)).collect::<Vec<_>>()))
                .collect();
            if invert(&m).is_some() {
                break m;
            }
        };
        let lx: Vec<BitVec> = a
            .iter()
            .map(|row| {
                let mut v = BitVec::zeros(c.n());
                for j in row.iter_ones() {
                    v.xor_assign(&c.logical_x()[j]);
                }
                for s in c.x_stabs() {
                    if rng.random_bool(0.5) {
                        v.xor_assign(s);
                    }
                }
                v
            })
            .collect();
        Self::with_x_basis(parent, region, lx)
    }

    /// Canonical geometric basis for a ball of a colex whose color code is
    /// the parent (parent qubit `i` is facet `i`).
    pub fn ball(cx: &Colex, parent: &CssCode, ball: &Ball, hubs: &[usize]) -> Result<Self, MorphError> {
        let basis = colex::canonical_basis(cx, ball, hubs).map_err(|e| MorphError::Colex(e.to_string()))?;
        let region = ball.members[cx.d()].clone();
        Self::with_basis(parent, &region, basis.logical_x, basis.logical_z)
    }
}

fn rewrite(
    gens: &[BitVec],
    region: &[usize],
    outside: &[usize],
    child_stabs: &[BitVec],
    child_logicals: &[BitVec],
) -> Result<Vec<BitVec>, MorphError> {
    let ns = child_stabs.len();
    let k = child_logicals.len();
    let mut eb = EchelonBasis::with_capacity(region.len(), ns + k);
    // stabilizer rows may be redundant; logical rows never are
    for s in child_stabs.iter().chain(child_logicals) {
        eb.insert(s.clone());
    }
    gens.iter()
        .map(|g| {
            let inner = g.gather(region);
            let c = eb.decompose(&inner).ok_or(MorphError::NotInSpan)?;
            let mut out = g.gather(outside).concat(&BitVec::zeros(k));
            for j in 0..k {
                if c.get(ns + j) {
                    out.flip(outside.len() + j);
                }
            }
            Ok(out)
        })
        .collect()
}

fn nonzero_reduced(rows: Vec<BitVec>) -> Vec<BitVec> {
    rref(&rows).0
}

/// Apply the morph. Surviving parent qubits keep their relative order and
/// the child's logical qubits are appended.
pub fn morph(spec: &MorphSpec) -> Result<MorphResult, MorphError> {
    let parent = &spec.parent;
    let region = &spec.region;
    let outside = complement(parent.n(), region);
    let child = &spec.child;
    let xs = rewrite(parent.x_stabs(), region, &outside, child.x_stabs(), child.logical_x())?;
    let zs = rewrite(parent.z_stabs(), region, &outside, child.z_stabs(), child.logical_z())?;
    let lx = rewrite(parent.logical_x(), region, &outside, child.x_stabs(), child.logical_x())?;
    let lz = rewrite(parent.logical_z(), region, &outside, child.z_stabs(), child.logical_z())?;
    let n = outside.len() + child.k();
    let code = CssCode::with_logicals(
        &format!("{}~", parent.label),
        n,
        nonzero_reduced(xs),
        nonzero_reduced(zs),
        lx,
        lz,
    )?;
    let qubit_map = outside
        .iter()
        .map(|&q| QubitOrigin::Parent(q))
        .chain((0..child.k()).map(QubitOrigin::ChildLogical))
        .collect();
    Ok(MorphResult { code, qubit_map })
}

/// Parameters of the morphed code predicted from ball statistics:
/// `N' = N - |B_d| + |B_1| - d`, `K' = K`, `D' >= D - max|St_d(e)| + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallStats {
    pub d: usize,
    pub n_facets: usize,
    pub n_edges: usize,
    pub max_edge_star: usize,
}

pub fn ball_stats(cx: &Colex, ball: &Ball) -> BallStats {
    let max_edge_star = ball.members[1].iter().map(|&e| cx.star_facets(1, e).len()).max().unwrap_or(0);
    BallStats { d: cx.d(), n_facets: ball.n_facets(), n_edges: ball.n_edges(), max_edge_star }
}

pub fn parameter_delta(n: usize, k: usize, dist: usize, s: &BallStats) -> (usize, usize, i64) {
    let n2 = n + s.n_edges - s.n_facets - s.d;
    (n2, k, dist as i64 - s.max_edge_star as i64 + 1)
}

/// Row spaces coincide.
pub fn same_span(a: &[BitVec], b: &[BitVec]) -> bool {
    rref(a).0 == rref(b).0
}

fn permute(rows: &[BitVec], perm: &[usize]) -> Vec<BitVec> {
    // perm[i] = new position of qubit i
    rows.iter()
        .map(|r| {
            let mut v = BitVec::zeros(r.len());
            for i in r.iter_ones() {
                v.set(perm[i], true);
            }
            v
        })
        .collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Search for a relabeling of `a`'s qubits that maps each role class onto
/// the same class of `b` and makes both stabilizer groups equal. `classes`
/// lists, per role, the qubits of `a` and of `b` in that role.
pub fn equivalent_under_relabeling(
    a: &CssCode,
    b: &CssCode,
    classes: &[(Vec<usize>, Vec<usize>)],
) -> Option<Vec<usize>> {
    if a.n() != b.n() || classes.iter().any(|(x, y)| x.len() != y.len()) {
        return None;
    }
    let bx = rref(b.x_stabs()).0;
    let bz = rref(b.z_stabs()).0;
    let mut perms: Vec<Vec<usize>> = classes.iter().map(|(x, _)| (0..x.len()).collect()).collect();
    loop {
        let mut map = vec![usize::MAX; a.n()];
        for ((src, dst), p) in classes.iter().zip(&perms) {
            for (i, &q) in src.iter().enumerate() {
                map[q] = dst[p[i]];
            }
        }
        if map.iter().all(|&m| m != usize::MAX)
            && rref(&permute(a.x_stabs(), &map)).0 == bx
            && rref(&permute(a.z_stabs(), &map)).0 == bz
        {
            return Some(map);
        }
        // odometer over the per-class permutations
        let mut advanced = false;
        for p in perms.iter_mut() {
            if next_permutation(p) {
                advanced = true;
                break;
            }
            p.sort_unstable();
        }
        if !advanced {
            return None;
        }
    }
}

/// Qubits of a morphed code grouped by role: parent qubits, then child
/// logical qubits.
pub fn origin_classes(r: &MorphResult) -> (Vec<usize>, Vec<usize>) {
    let mut parent = Vec::new();
    let mut child = Vec::new();
    for (i, o) in r.qubit_map.iter().enumerate() {
        match o {
            QubitOrigin::Parent(_) => parent.push(i),
            QubitOrigin::ChildLogical(_) => child.push(i),
        }
    }
    (parent, child)
}

fn supports(n: usize, sets: &[&[usize]]) -> Vec<BitVec> {
    sets.iter().map(|s| BitVec::from_indices(n, s)).collect()
}

/// Hand-written `[[5,1,2]]` generators: qubits 0..3 are parent qubits,
/// 3 and 4 the two edge qubits.
pub fn reference_5_1_2() -> CssCode {
    let x = supports(5, &[&[0, 1, 3], &[1, 2, 4]]);
    let z = supports(5, &[&[0, 1, 4], &[1, 2, 3]]);
    CssCode::new("[[5,1,2]] reference", 5, x, z).expect("valid generators")
}

/// Hand-written `[[10,1,2]]` generators: qubits 0..7 are parent qubits,
/// 7..10 the three edge qubits.
pub fn reference_10_1_2() -> CssCode {
    let (a, b, c): (&[usize], &[usize], &[usize]) = (&[0, 1, 3, 4], &[1, 2, 4, 5], &[3, 4, 5, 6]);
    let x = supports(10, &[&[0, 1, 3, 4, 7], &[1, 2, 4, 5, 8], &[3, 4, 5, 6, 9]]);
    let z = supports(10, &[a, b, c, &[3, 4, 8], &[1, 4, 9], &[4, 5, 7]]);
    CssCode::new("[[10,1,2]] reference", 10, x, z).expect("valid generators")
}

/// Whether a morph result matches a reference code whose parent qubits come
/// first, up to relabeling within each role.
pub fn matches_reference(r: &MorphResult, reference: &CssCode) -> Option<Vec<usize>> {
    let (p, c) = origin_classes(r);
    let np = p.len();
    let classes = [(p, (0..np).collect()), (c, (np..reference.n()).collect())];
    equivalent_under_relabeling(&r.code, reference, &classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{qrm, steane};
    use proptest::prelude::*;

    fn red_ball(d: usize) -> (Colex, CssCode, Ball) {
        let cx = Colex::nested_simplex(d);
        let parent = colex::color_code(&cx);
        let ball = cx.ball(d + 1).unwrap();
        (cx, parent, ball)
    }

    #[test]
    fn steane_region_child_is_422() {
        let (_, parent, ball) = red_ball(2);
        let child = restrict_stabilizer(&parent, &ball.members[2]).unwrap();
        assert_eq!((child.n(), child.k()), (4, 2));
    }

    #[test]
    fn steane_morphs_to_512() {
        let (cx, parent, ball) = red_ball(2);
        let hubs = colex::default_hubs(&cx, &ball);
        let r = morph(&MorphSpec::ball(&cx, &parent, &ball, &hubs).unwrap()).unwrap();
        assert_eq!((r.code.n(), r.code.k()), (5, 1));
        assert_eq!(r.code.distance().unwrap(), 2);
        assert_eq!(r.code.count_weight2_logical_z(), 2);
    }

    #[test]
    fn qrm3_morphs_to_10_1_2() {
        let (cx, parent, ball) = red_ball(3);
        let hubs = colex::default_hubs(&cx, &ball);
        let r = morph(&MorphSpec::ball(&cx, &parent, &ball, &hubs).unwrap()).unwrap();
        assert_eq!((r.code.n(), r.code.k()), (10, 1));
        assert_eq!(r.code.distance().unwrap(), 2);
        assert_eq!(r.code.count_weight2_logical_z(), 3);
        let stats = ball_stats(&cx, &ball);
        assert_eq!(parameter_delta(15, 1, 3, &stats), (10, 1, 0));
    }

    #[test]
    fn morphs_match_reference_generators() {
        for (d, reference) in [(2, reference_5_1_2()), (3, reference_10_1_2())] {
            let (cx, parent, ball) = red_ball(d);
            let hubs = colex::default_hubs(&cx, &ball);
            let r = morph(&MorphSpec::ball(&cx, &parent, &ball, &hubs).unwrap()).unwrap();
            assert_eq!(reference.k(), 1);
            assert!(matches_reference(&r, &reference).is_some(), "d = {d}");
        }
    }

    #[test]
    fn parameters_independent_of_hub_choice() {
        let (cx, parent, ball) = red_ball(3);
        let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); 4];
        for &u in &ball.ring {
            by_color[cx.color(u) as usize].push(u);
        }
        by_color.retain(|v| !v.is_empty());
        assert_eq!(by_color.len(), 3);
        let mut seen = std::collections::BTreeSet::new();
        for &a in &by_color[0] {
            for &b in &by_color[1] {
                for &c in &by_color[2] {
                    let r = morph(&MorphSpec::ball(&cx, &parent, &ball, &[a, b, c]).unwrap()).unwrap();
                    seen.insert((r.code.n(), r.code.k(), r.code.distance().unwrap()));
                }
            }
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![(10, 1, 2)]);
    }

    #[test]
    fn json_round_trip() {
        let (cx, parent, ball) = red_ball(2);
        let hubs = colex::default_hubs(&cx, &ball);
        let r = morph(&MorphSpec::ball(&cx, &parent, &ball, &hubs).unwrap()).unwrap();
        let back = MorphResult::from_json(&r.to_json()).unwrap();
        assert_eq!(back.qubit_map, r.qubit_map);
        assert!(same_span(back.code.x_stabs(), r.code.x_stabs()));
    }

    #[test]
    fn canonical_morph_of_generic_region() {
        let s = steane();
        let r = morph(&MorphSpec::canonical(&s, &[0, 1, 2, 3]).unwrap());
        // a region that is not a ball may still support a child
        if let Ok(r) = r {
            assert_eq!(r.code.k(), 1);
        }
    }

    #[test]
    fn region_errors() {
        let s = steane();
        assert!(matches!(restrict_stabilizer(&s, &[]), Err(MorphError::EmptyRegion)));
        assert!(matches!(restrict_stabilizer(&s, &[0, 0]), Err(MorphError::BadRegion(0))));
        assert!(matches!(restrict_stabilizer(&s, &[9]), Err(MorphError::BadRegion(9))));
        // a lone qubit carries no stabilizer, so morphing it is the identity
        let r = morph(&MorphSpec::canonical(&s, &[0]).unwrap()).unwrap();
        assert_eq!((r.code.n(), r.code.k()), (7, 1));
    }

    #[test]
    fn relabeling_search_finds_identity() {
        let c = qrm(3).unwrap();
        let all: Vec<usize> = (0..c.n()).collect();
        let mut shuffled = all.clone();
        shuffled.swap(0, 1);
        let map = equivalent_under_relabeling(&c, &c, &[(vec![0, 1], vec![0, 1]), (all[2..].to_vec(), all[2..].to_vec())]);
        assert!(map.is_some());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_basis_preserves_k_and_commutation(seed in any::<u64>(), which in 0usize..3) {
            let (parent, region) = match which {
                0 => { let (_, p, b) = red_ball(2); (p, b.members[2].clone()) }
                1 => { let (_, p, b) = red_ball(3); (p, b.members[3].clone()) }
                _ => {
                    let cx = Colex::triangular_torus(6).unwrap();
                    let p = colex::color_code(&cx);
                    let b = cx.ball((seed % 36) as usize).unwrap();
                    (p, b.members[2].clone())
                }
            };
            let spec = MorphSpec::random(&parent, &region, seed).unwrap();
            let r = morph(&spec).unwrap();
            prop_assert_eq!(r.code.k(), parent.k());
            prop_assert_eq!(r.code.n(), parent.n() - region.len() + spec.child.k());
            // with_logicals validated commutation and pairing already
            prop_assert_eq!(r.qubit_map.len(), r.code.n());
        }
    }
}
