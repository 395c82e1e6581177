//! Colored simplicial complexes (colexes), balls, ball codes and the canonical
//! logical basis of a ball code.

use crate::code::{dual_logicals, CssCode};
use crate::gf2::BitVec;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColexError {
    #[error("facet {0} is not a properly colored d-simplex")]
    BadFacet(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("vertex {0} lies on the boundary; its star is not a ball")]
    NotInterior(usize),
    #[error("lattice size {0} must be a multiple of 3 and at least 6")]
    BadSize(usize),
    #[error("invalid hub choice: {0}")]
    BadHub(String),
}

/// Periodic coordinates for the triangular torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusGeometry {
    pub l: usize,
}

#[derive(Clone, Debug)]
pub struct Colex {
    d: usize,
    colors: Vec<u8>,
    // simplices[k][i]: sorted vertex list of the i-th k-simplex
    simplices: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<Vec<usize>, usize>,
    // star[k][i]: facets containing simplex (k, i)
    star: Vec<Vec<Vec<usize>>>,
    boundary: Vec<Vec<bool>>,
    neighbors: Vec<Vec<usize>>,
    torus: Option<TorusGeometry>,
}

/// Serializable description of a colex: colors per vertex and facets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColexJson {
    pub d: usize,
    pub colors: Vec<u8>,
    pub facets: Vec<Vec<usize>>,
}

impl Colex {
    pub fn from_facets(d: usize, colors: Vec<u8>, facets: Vec<Vec<usize>>) -> Result<Self, ColexError> {
        let nv = colors.len();
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
        let mut star: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
        let mut lookup: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut facets: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        {
            let mut seen = std::collections::HashSet::new();
            facets.retain(|f| seen.insert(f.clone()));
        }
        for (fi, f) in facets.iter().enumerate() {
            if f.len() != d + 1 {
                return Err(ColexError::BadFacet(fi));
            }
            let mut mask = 0u32;
            for &v in f {
                if v >= nv {
                    return Err(ColexError::BadVertex(v));
                }
                let c = colors[v] as usize;
                if c > d || mask >> c & 1 == 1 {
                    return Err(ColexError::BadFacet(fi));
                }
                mask |= 1 << c;
            }
        }
        for (fi, f) in facets.iter().enumerate() {
            for sub in 1u32..(1 << (d + 1)) {
                let s: Vec<usize> = (0..=d).filter(|&b| sub >> b & 1 == 1).map(|b| f[b]).collect();
                let k = s.len() - 1;
                let idx = match lookup.get(&s) {
                    Some(&i) => i,
                    None => {
                        let i = simplices[k].len();
                        simplices[k].push(s.clone());
                        star[k].push(Vec::new());
                        lookup.insert(s, i);
                        i
                    }
                };
                star[k][idx].push(fi);
            }
        }
        let mut boundary: Vec<Vec<bool>> = simplices.iter().map(|s| vec![false; s.len()]).collect();
        if d >= 1 {
            let bd: Vec<usize> = (0..simplices[d - 1].len()).filter(|&i| star[d - 1][i].len() == 1).collect();
            for i in bd {
                let f = simplices[d - 1][i].clone();
                for sub in 1u32..(1 << d) {
                    let s: Vec<usize> = (0..d).filter(|&b| sub >> b & 1 == 1).map(|b| f[b]).collect();
                    let j = lookup[&s];
                    boundary[s.len() - 1][j] = true;
                }
            }
        }
        let mut neighbors = vec![Vec::new(); nv];
        if d >= 1 {
            for e in &simplices[1] {
                neighbors[e[0]].push(e[1]);
                neighbors[e[1]].push(e[0]);
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(Colex { d, colors, simplices, lookup, star, boundary, neighbors, torus: None })
    }

    pub fn from_json(j: &ColexJson) -> Result<Self, ColexError> {
        Self::from_facets(j.d, j.colors.clone(), j.facets.clone())
    }

    pub fn to_json(&self) -> ColexJson {
        ColexJson { d: self.d, colors: self.colors.clone(), facets: self.simplices[self.d].clone() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices[k].len()
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[usize] {
        &self.simplices[k][i]
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        &self.simplices[k]
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.simplices[self.d]
    }

    /// Index of the simplex with the given (unsorted) vertex set.
    pub fn find(&self, verts: &[usize]) -> Option<usize> {
        let mut s = verts.to_vec();
        s.sort_unstable();
        self.lookup.get(&s).copied()
    }

    /// Facets containing simplex `(k, i)`.
    pub fn star_facets(&self, k: usize, i: usize) -> &[usize] {
        &self.star[k][i]
    }

    pub fn is_boundary(&self, k: usize, i: usize) -> bool {
        self.boundary[k][i]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// Bitmask of the colors of a vertex set.
    pub fn color_mask(&self, verts: &[usize]) -> u32 {
        verts.iter().fold(0, |m, &v| m | 1 << self.colors[v])
    }

    pub fn torus(&self) -> Option<&TorusGeometry> {
        self.torus.as_ref()
    }

    /// Ordering key of boundary vertex `u` as seen from `v`; on the torus this
    /// is the wrapped offset so that choices are translation invariant.
    pub fn local_key(&self, v: usize, u: usize) -> (i64, i64) {
        match &self.torus {
            Some(t) => {
                let l = t.l as i64;
                let wrap = |a: i64| {
                    let r = a.rem_euclid(l);
                    if r > l / 2 {
                        r - l
                    } else {
                        r
                    }
                };
                let (vx, vy) = ((v % t.l) as i64, (v / t.l) as i64);
                let (ux, uy) = ((u % t.l) as i64, (u / t.l) as i64);
                (wrap(ux - vx), wrap(uy - vy))
            }
            None => (u as i64, 0),
        }
    }

    /// Periodic triangular lattice with `l * l` vertices, color `(x - y) mod 3`.
    pub fn triangular_torus(l: usize) -> Result<Self, ColexError> {
        if l % 3 != 0 || l < 6 {
            return Err(ColexError::BadSize(l));
        }
        let id = |x: usize, y: usize| (x % l) + l * (y % l);
        let mut colors = vec![0u8; l * l];
        let mut facets = Vec::with_capacity(2 * l * l);
        for y in 0..l {
            for x in 0..l {
                colors[id(x, y)] = ((x + 3 * l - y) % 3) as u8;
                facets.push(vec![id(x, y), id(x + 1, y), id(x, y + 1)]);
                facets.push(vec![id(x + 1, y), id(x, y + 1), id(x + 1, y + 1)]);
            }
        }
        let mut c = Self::from_facets(2, colors, facets)?;
        c.torus = Some(TorusGeometry { l });
        Ok(c)
    }

    /// A d-simplex with a second d-simplex nested inside it; each inner vertex
    /// is joined to the outer vertices of other colors. Outer vertex `c` and
    /// inner vertex `d + 1 + c` have color `c`.
    pub fn nested_simplex(d: usize) -> Self {
        let colors: Vec<u8> = (0..=d).chain(0..=d).map(|c| c as u8).collect();
        let facets = (1u32..(1 << (d + 1)))
            .map(|s| (0..=d).map(|c| if s >> c & 1 == 1 { d + 1 + c } else { c }).collect())
            .collect();
        Self::from_facets(d, colors, facets).expect("nested simplex is a colex")
    }

    /// Center vertex 0 (color d) surrounded by the d-dimensional cross-polytope;
    /// vertices `1 + 2i` and `2 + 2i` are the two poles of axis `i` (color i).
    pub fn hyperoctahedron(d: usize) -> Self {
        let mut colors = vec![d as u8];
        for i in 0..d {
            colors.push(i as u8);
            colors.push(i as u8);
        }
        let facets = (0u32..(1 << d))
            .map(|s| std::iter::once(0).chain((0..d).map(|i| 1 + 2 * i + (s >> i & 1) as usize)).collect())
            .collect();
        Self::from_facets(d, colors, facets).expect("cross-polytope is a colex")
    }

    /// 3-ball whose boundary is the tetrakis hexahedron (dual of the
    /// truncated octahedron): 24 tetrahedra around vertex 0.
    pub fn truncated_octahedron_ball() -> Self {
        // 1..=6: axis poles (color 1); 7..=14: octants, color 2 or 3 by sign parity
        let pole = |i: usize, s: usize| 1 + 2 * i + s;
        let oct = |o: usize| 7 + o;
        let mut colors = vec![0u8; 15];
        for i in 0..3 {
            colors[pole(i, 0)] = 1;
            colors[pole(i, 1)] = 1;
        }
        for o in 0..8usize {
            colors[oct(o)] = 2 + (o.count_ones() % 2) as u8;
        }
        let mut facets = Vec::new();
        for i in 0..3 {
            for s in 0..2 {
                for o1 in 0..8usize {
                    if (o1 >> i & 1) != s {
                        continue;
                    }
                    for j in (0..3).filter(|&j| j != i) {
                        let o2 = o1 ^ (1 << j);
                        if o1 < o2 {
                            facets.push(vec![0, pole(i, s), oct(o1), oct(o2)]);
                        }
                    }
                }
            }
        }
        Self::from_facets(3, colors, facets).expect("tetrakis hexahedron ball")
    }

    /// 3-ball whose boundary is the disdyakis dodecahedron (dual of the
    /// truncated cuboctahedron): 48 tetrahedra around vertex 0.
    pub fn truncated_cuboctahedron_ball() -> Self {
        // 1..=6 axis poles (color 1), 7..=14 octants (color 2), 15..=26 edge midpoints (color 3)
        let pole = |i: usize, s: usize| 1 + 2 * i + s;
        let oct = |o: usize| 7 + o;
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let mid = |i: usize, j: usize, si: usize, sj: usize| {
            let p = pairs.iter().position(|&q| q == (i.min(j), i.max(j))).unwrap();
            let (a, b) = if i < j { (si, sj) } else { (sj, si) };
            15 + 4 * p + 2 * a + b
        };
        let mut colors = vec![0u8; 27];
        colors[1..7].fill(1);
        colors[7..15].fill(2);
        colors[15..27].fill(3);
        let mut facets = Vec::new();
        for i in 0..3 {
            for si in 0..2 {
                for j in (0..3).filter(|&j| j != i) {
                    for sj in 0..2 {
                        let k = 3 - i - j;
                        for sk in 0..2 {
                            let o = (si << i) | (sj << j) | (sk << k);
                            facets.push(vec![0, pole(i, si), oct(o), mid(i, j, si, sj)]);
                        }
                    }
                }
            }
        }
        Self::from_facets(3, colors, facets).expect("disdyakis dodecahedron ball")
    }

    /// Cone over the barycentric subdivision of a polyhedron's boundary, given
    /// as face vertex cycles: one tetrahedron per (vertex, edge, face) flag.
    /// Center 0 has color 0; polyhedron vertices, edges and faces get colors
    /// 1, 2 and 3.
    pub fn flag_ball(faces: &[Vec<usize>]) -> Result<Self, ColexError> {
        let nv = faces.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for f in faces {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                let n = edges.len();
                edges.entry((a.min(b), a.max(b))).or_insert(n);
            }
        }
        let (e0, f0) = (1 + nv, 1 + nv + edges.len());
        let mut colors = vec![0u8];
        colors.extend(std::iter::repeat_n(1, nv));
        colors.extend(std::iter::repeat_n(2, edges.len()));
        colors.extend(std::iter::repeat_n(3, faces.len()));
        let mut facets = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                let e = edges[&(a.min(b), a.max(b))];
                for v in [a, b] {
                    facets.push(vec![0, 1 + v, e0 + e, f0 + fi]);
                }
            }
        }
        Self::from_facets(3, colors, facets)
    }

    /// Flag ball of the icosahedron: 120 tetrahedra around vertex 0.
    pub fn icosahedral_flag_ball() -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut pts: Vec<[f64; 3]> = Vec::new();
        for a in [-1.0, 1.0] {
            for b in [-phi, phi] {
                pts.push([0.0, a, b]);
                pts.push([a, b, 0.0]);
                pts.push([b, 0.0, a]);
            }
        }
        let adj = |i: usize, j: usize| {
            let d: f64 = (0..3).map(|k| (pts[i][k] - pts[j][k]).powi(2)).sum();
            (d - 4.0).abs() < 1e-9
        };
        let mut faces = Vec::new();
        for i in 0..12 {
            for j in i + 1..12 {
                for k in j + 1..12 {
                    if adj(i, j) && adj(j, k) && adj(i, k) {
                        faces.push(vec![i, j, k]);
                    }
                }
            }
        }
        Self::flag_ball(&faces).expect("icosahedron flags")
    }

    /// 2-ball with a ring of `2m` vertices alternating two colors around vertex 0.
    pub fn polygon_ball(m: usize) -> Self {
        let r = 2 * m;
        let mut colors = vec![0u8];
        colors.extend((0..r).map(|i| 1 + (i % 2) as u8));
        let facets = (0..r).map(|i| vec![0, 1 + i, 1 + (i + 1) % r]).collect();
        Self::from_facets(2, colors, facets).expect("polygon ball")
    }

    /// The ball `B^v` (all simplices containing `v`).
    pub fn ball(&self, v: usize) -> Result<Ball, ColexError> {
        if v >= self.num_vertices() {
            return Err(ColexError::BadVertex(v));
        }
        let i0 = self.lookup[&vec![v]];
        if self.boundary[0][i0] {
            return Err(ColexError::NotInterior(v));
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.d + 1];
        members[0].push(i0);
        let facets = self.star[0][i0].clone();
        let mut seen: Vec<HashMap<usize, ()>> = vec![HashMap::new(); self.d + 1];
        for &f in &facets {
            let fv = &self.simplices[self.d][f];
            let others: Vec<usize> = fv.iter().copied().filter(|&u| u != v).collect();
            for sub in 0u32..(1 << self.d) {
                let mut s: Vec<usize> = (0..self.d).filter(|&b| sub >> b & 1 == 1).map(|b| others[b]).collect();
                s.push(v);
                s.sort_unstable();
                let k = s.len() - 1;
                let j = self.lookup[&s];
                if seen[k].insert(j, ()).is_none() {
                    members[k].push(j);
                }
            }
        }
        for m in &mut members {
            m.sort_unstable();
        }
        let mut ring: Vec<usize> = members[1]
            .iter()
            .map(|&e| self.simplices[1][e].iter().copied().find(|&u| u != v).unwrap())
            .collect();
        ring.sort_unstable();
        Ok(Ball { center: v, members, ring })
    }
}

/// The ball around an interior vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: usize,
    /// `members[k]`: indices of the k-simplices containing the center.
    pub members: Vec<Vec<usize>>,
    /// Boundary vertices, i.e. the far endpoints of the ball's edges.
    pub ring: Vec<usize>,
}

impl Ball {
    pub fn n_facets(&self) -> usize {
        self.members.last().map_or(0, |m| m.len())
    }

    pub fn n_edges(&self) -> usize {
        self.members.get(1).map_or(0, |m| m.len())
    }

    /// Position of facet `f` among the ball's qubits.
    pub fn qubit_of(&self, f: usize) -> Option<usize> {
        self.members.last().and_then(|m| m.binary_search(&f).ok())
    }
}

/// Color code of a colex: qubits on facets, X checks on interior vertices,
/// Z checks on interior (d-2)-simplices.
pub fn color_code(cx: &Colex) -> CssCode {
    let d = cx.d();
    let n = cx.count(d);
    let rows = |k: usize| -> Vec<BitVec> {
        (0..cx.count(k))
            .filter(|&i| !cx.is_boundary(k, i))
            .map(|i| BitVec::from_indices(n, cx.star_facets(k, i)))
            .collect()
    };
    let xs = rows(0);
    let zs = rows(d - 2);
    CssCode::new("color", n, xs, zs).expect("color code checks commute")
}

/// Ball code: X on all facets of the ball, Z on the stars of the ball's
/// (d-2)-simplices. Qubit `i` is facet `ball.members[d][i]`.
pub fn ball_code(cx: &Colex, ball: &Ball) -> CssCode {
    let d = cx.d();
    let n = ball.n_facets();
    let to_local = |fs: &[usize]| -> BitVec {
        BitVec::from_indices(n, &fs.iter().map(|&f| ball.qubit_of(f).expect("facet in ball")).collect::<Vec<_>>())
    };
    let xs = vec![BitVec::from_indices(n, &(0..n).collect::<Vec<_>>())];
    let zs = ball.members[d - 2].iter().map(|&s| to_local(cx.star_facets(d - 2, s))).collect();
    CssCode::new(&format!("ball{}", ball.center), n, xs, zs).expect("ball code checks commute")
}

/// `X(e)` restricted to the ball: facets of the ball containing edge `(center, w)`.
pub fn edge_support(cx: &Colex, ball: &Ball, w: usize) -> BitVec {
    let n = ball.n_facets();
    let e = cx.find(&[ball.center, w]).expect("ball edge");
    BitVec::from_indices(n, &cx.star_facets(1, e).iter().map(|&f| ball.qubit_of(f).unwrap()).collect::<Vec<_>>())
}

/// Canonical logical basis of a ball code: one hub vertex per boundary color;
/// every other boundary vertex `w` gives the logical `X(center, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallBasis {
    /// `(color, hub vertex)` for each boundary color, sorted by color.
    pub hubs: Vec<(u8, usize)>,
    /// Non-hub boundary vertex behind each logical qubit.
    pub logical_vertices: Vec<usize>,
    pub logical_x: Vec<BitVec>,
    pub logical_z: Vec<BitVec>,
}

impl BallBasis {
    pub fn hub_of(&self, color: u8) -> Option<usize> {
        self.hubs.iter().find(|h| h.0 == color).map(|h| h.1)
    }
}

fn ring_by_color(cx: &Colex, ball: &Ball) -> Vec<(u8, Vec<usize>)> {
    let mut m: Vec<(u8, Vec<usize>)> = Vec::new();
    for &u in &ball.ring {
        let c = cx.color(u);
        match m.iter_mut().find(|e| e.0 == c) {
            Some(e) => e.1.push(u),
            None => m.push((c, vec![u])),
        }
    }
    m.sort_by_key(|e| e.0);
    for e in &mut m {
        e.1.sort_by_key(|&u| cx.local_key(ball.center, u));
    }
    m
}

/// Hubs with the smallest local key per color.
pub fn default_hubs(cx: &Colex, ball: &Ball) -> Vec<usize> {
    ring_by_color(cx, ball).into_iter().map(|(_, vs)| vs[0]).collect()
}

/// Uniformly random hub per color.
pub fn random_hubs<R: Rng>(cx: &Colex, ball: &Ball, rng: &mut R) -> Vec<usize> {
    ring_by_color(cx, ball)
        .into_iter()
        .map(|(_, vs)| vs[rng.random_range(0..vs.len())])
        .collect()
}

pub fn canonical_basis(cx: &Colex, ball: &Ball, hubs: &[usize]) -> Result<BallBasis, ColexError> {
    let groups = ring_by_color(cx, ball);
    if hubs.len() != groups.len() {
        return Err(ColexError::BadHub(format!("expected {} hubs, got {}", groups.len(), hubs.len())));
    }
    let mut hub_list = Vec::new();
    let mut logical_vertices = Vec::new();
    for (c, vs) in &groups {
        let h = *hubs
            .iter()
            .find(|&&h| cx.color(h) == *c && vs.contains(&h))
            .ok_or_else(|| ColexError::BadHub(format!("no hub of color {c}")))?;
        hub_list.push((*c, h));
        logical_vertices.extend(vs.iter().copied().filter(|&u| u != h));
    }
    let code = ball_code(cx, ball);
    let lx: Vec<BitVec> = logical_vertices.iter().map(|&w| edge_support(cx, ball, w)).collect();
    let lz = dual_logicals(&code, &lx).map_err(|e| ColexError::BadHub(e.to_string()))?;
    Ok(BallBasis { hubs: hub_list, logical_vertices, logical_x: lx, logical_z: lz })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        for l in [6, 9, 12] {
            let t = Colex::triangular_torus(l).unwrap();
            assert_eq!(t.count(0), l * l);
            assert_eq!(t.count(1), 3 * l * l);
            assert_eq!(t.count(2), 2 * l * l);
            for f in t.facets() {
                assert_eq!(t.color_mask(f), 0b111);
            }
            assert!(t.neighbors(0).len() == 6);
        }
        assert!(Colex::triangular_torus(8).is_err());
    }

    #[test]
    fn torus_color_code_has_four_logicals() {
        let t = Colex::triangular_torus(6).unwrap();
        let c = color_code(&t);
        assert_eq!(c.k(), 4);
    }

    #[test]
    fn nested_simplex_boundary() {
        let c = Colex::nested_simplex(3);
        assert_eq!(c.facets().len(), 15);
        for v in 0..8 {
            let i = c.find(&[v]).unwrap();
            assert_eq!(c.is_boundary(0, i), v < 4);
        }
    }

    #[test]
    fn ball_sizes() {
        let t = Colex::triangular_torus(6).unwrap();
        let b = t.ball(7).unwrap();
        assert_eq!(b.n_facets(), 6);
        assert_eq!(b.n_edges(), 6);
        assert_eq!(b.ring.len(), 6);
        let code = ball_code(&t, &b);
        assert_eq!((code.n(), code.k()), (6, 4));
    }

    #[test]
    fn three_dimensional_balls() {
        let a = Colex::truncated_octahedron_ball();
        let b = ball_code(&a, &a.ball(0).unwrap());
        assert_eq!((b.n(), b.k()), (24, 11));
        let a = Colex::truncated_cuboctahedron_ball();
        let b = ball_code(&a, &a.ball(0).unwrap());
        assert_eq!((b.n(), b.k()), (48, 23));
    }

    #[test]
    fn canonical_basis_is_paired() {
        let t = Colex::triangular_torus(6).unwrap();
        let b = t.ball(0).unwrap();
        let hubs = default_hubs(&t, &b);
        let bb = canonical_basis(&t, &b, &hubs).unwrap();
        assert_eq!(bb.logical_x.len(), 4);
        for (i, x) in bb.logical_x.iter().enumerate() {
            assert_eq!(x.count_ones(), 2);
            for (j, z) in bb.logical_z.iter().enumerate() {
                assert_eq!(x.dot(z), i == j);
            }
        }
    }

    #[test]
    fn boundary_vertex_has_no_ball() {
        let c = Colex::nested_simplex(2);
        assert_eq!(c.ball(0), Err(ColexError::NotInterior(0)));
    }

    fn check_ball_parameters(cx: &Colex, v: usize) {
        let b = cx.ball(v).unwrap();
        let code = ball_code(cx, &b);
        assert_eq!(code.n(), b.n_facets());
        assert_eq!(code.k(), b.n_edges() - cx.d());
        if code.n() <= 20 {
            assert_eq!(code.distance().unwrap(), 2);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn ball_parameters_follow_edge_count(kind in 0usize..3, size in 0usize..4, v in 0usize..10_000) {
            match kind {
                0 => {
                    let t = Colex::triangular_torus(6 + 3 * size).unwrap();
                    check_ball_parameters(&t, v % t.num_vertices());
                }
                1 => check_ball_parameters(&Colex::polygon_ball(2 + size), 0),
                _ => check_ball_parameters(&Colex::hyperoctahedron(2 + size % 3), 0),
            }
        }
    }

    #[test]
    fn flag_balls() {
        let cube: Vec<Vec<usize>> = vec![vec![0, 1, 3, 2], vec![4, 5, 7, 6], vec![0, 1, 5, 4], vec![2, 3, 7, 6], vec![0, 2, 6, 4], vec![1, 3, 7, 5]];
        let c = Colex::flag_ball(&cube).unwrap();
        let b = ball_code(&c, &c.ball(0).unwrap());
        assert_eq!((b.n(), b.k()), (48, 23));
        let ico = Colex::icosahedral_flag_ball();
        let ball = ico.ball(0).unwrap();
        let b = ball_code(&ico, &ball);
        assert_eq!((b.n(), b.k(), ball.n_edges()), (120, 59, 62));
        let gamma = (120f64 / 59.0).ln() / 2f64.ln();
        assert!((gamma - 1.02).abs() < 0.005, "{gamma}");
    }

    #[test]
    fn same_color_ring_products_coincide() {
        for (cx, v) in [
            (Colex::polygon_ball(3), 0),
            (Colex::polygon_ball(5), 0),
            (Colex::hyperoctahedron(3), 0),
            (Colex::nested_simplex(3), 4),
            (Colex::truncated_octahedron_ball(), 0),
            (Colex::truncated_cuboctahedron_ball(), 0),
        ] {
            let d = cx.d();
            let ball = cx.ball(v).unwrap();
            let facets = &ball.members[d];
            let check = |u: usize| -> BitVec {
                let idx: Vec<usize> = (0..facets.len()).filter(|&i| cx.simplex(d, facets[i]).contains(&u)).collect();
                BitVec::from_indices(facets.len(), &idx)
            };
            let groups = ring_by_color(&cx, &ball);
            assert_eq!(groups.len(), d);
            let products: Vec<BitVec> = groups
                .iter()
                .map(|(_, us)| us.iter().fold(BitVec::zeros(facets.len()), |acc, &u| acc.xor(&check(u))))
                .collect();
            assert!(products.windows(2).all(|w| w[0] == w[1]));
            let rows: Vec<BitVec> = ball.ring.iter().map(|&u| check(u)).collect();
            assert_eq!(crate::gf2::rank(&rows), ball.ring.len() - (d - 1));
        }
    }

    #[test]
    fn three_dimensional_balls_follow_edge_count() {
        check_ball_parameters(&Colex::nested_simplex(3), 7);
        check_ball_parameters(&Colex::truncated_octahedron_ball(), 0);
        check_ball_parameters(&Colex::truncated_cuboctahedron_ball(), 0);
    }
}
