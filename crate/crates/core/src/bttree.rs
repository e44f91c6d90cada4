//! The Bruhat-Tits tree of SL(2, F_p((t))).
//!
//! Every homothety class of lattices has a unique basis of the form
//! `<t^n e1, b e1 + e2>` with `n` an integer and `b` a Laurent polynomial
//! whose exponents are all below `n`. Equivalently the class is the ball
//! `b + t^n O` in K, and the tree structure is ball inclusion.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use crate::arith::{ArithError, LaurentSeries, ZeroStatus};
use crate::error::{Error, Result};
use crate::matrix::Matrix2;

pub type LMatrix = Matrix2<LaurentSeries>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    n: i64,
    b: LaurentSeries,
}

impl Vertex {
    /// Class of `<t^n e1, b e1 + e2>`; `b` is reduced modulo `t^n`.
    pub fn new(n: i64, b: &LaurentSeries) -> Result<Self> {
        Ok(Vertex { n, b: b.truncate_below(n)? })
    }

    /// Class of the standard lattice O^2.
    pub fn base(p: u32) -> Self {
        Vertex { n: 0, b: LaurentSeries::zero(p) }
    }

    pub fn modulus(&self) -> u32 {
        self.b.modulus()
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    pub fn offset(&self) -> &LaurentSeries {
        &self.b
    }

    /// Exact basis matrix [[t^n, b], [0, 1]].
    pub fn basis(&self) -> LMatrix {
        let p = self.modulus();
        Matrix2::new(LaurentSeries::monomial(p, 1, self.n), self.b.clone(), LaurentSeries::zero(p), LaurentSeries::one(p))
    }

    /// The neighbor one level up (the unique superlattice class of index p above).
    pub fn parent(&self) -> Vertex {
        Vertex { n: self.n - 1, b: self.b.truncate_below(self.n - 1).expect("offsets are exact") }
    }

    pub fn children(&self) -> Vec<Vertex> {
        let p = self.modulus();
        (0..p as i64)
            .map(|lam| Vertex { n: self.n + 1, b: self.b.add(&LaurentSeries::monomial(p, lam, self.n)) })
            .collect()
    }

    fn ancestor(&self, level: i64) -> Vertex {
        debug_assert!(level <= self.n);
        Vertex { n: level, b: self.b.truncate_below(level).expect("offsets are exact") }
    }

    fn sort_key(&self) -> (i64, Vec<(i64, u32)>) {
        (self.n, self.b.terms())
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Vertex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.sort_key().cmp(&o.sort_key())
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.b.to_poly_string())
    }
}

/// A non-backtracking path of adjacent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePath {
    vertices: Vec<Vertex>,
}

impl TreePath {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> u64 {
        (self.vertices.len() - 1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn reversed(&self) -> TreePath {
        TreePath { vertices: self.vertices.iter().rev().cloned().collect() }
    }
}

/// Level of the smallest ball containing both vertices.
fn join_level(v: &Vertex, w: &Vertex) -> i64 {
    let mut j = v.n.min(w.n);
    if let Ok(Some(d)) = v.b.sub(&w.b).valuation() {
        j = j.min(d);
    }
    j
}

pub fn distance(v: &Vertex, w: &Vertex) -> u64 {
    let j = join_level(v, w);
    (v.n + w.n - 2 * j) as u64
}

/// The vertex at distance `k` from `v` on the geodesic towards `w`.
pub fn geodesic_point(v: &Vertex, w: &Vertex, k: u64) -> Vertex {
    let j = join_level(v, w);
    let up = (v.n - j) as u64;
    let total = up + (w.n - j) as u64;
    assert!(k <= total, "point beyond the end of the geodesic");
    if k <= up {
        v.ancestor(v.n - k as i64)
    } else {
        w.ancestor(j + (k - up) as i64)
    }
}

pub fn geodesic(v: &Vertex, w: &Vertex) -> TreePath {
    let d = distance(v, w);
    TreePath { vertices: (0..=d).map(|k| geodesic_point(v, w, k)).collect() }
}

/// Midpoint of two vertices at even distance.
pub fn midpoint(v: &Vertex, w: &Vertex) -> Option<Vertex> {
    let d = distance(v, w);
    d.is_multiple_of(2).then(|| geodesic_point(v, w, d / 2))
}

/// The p + 1 neighbors in canonical order.
pub fn neighbors(v: &Vertex) -> Vec<Vertex> {
    let mut out = v.children();
    out.push(v.parent());
    out.sort();
    out
}

fn certified_valuation(x: &LaurentSeries) -> Result<i64> {
    x.valuation()?.ok_or(Error::Arith(ArithError::ZeroDivision))
}

/// Canonical vertex of the lattice spanned by the columns of `basis`.
pub fn canonicalize(basis: &LMatrix) -> Result<Vertex> {
    let det = basis.det();
    let vdet = match det.valuation()? {
        Some(v) => v,
        None => return Err(Error::Invalid("basis vectors are linearly dependent".into())),
    };
    canonicalize_with_det(basis, vdet)
}

fn canonicalize_with_det(basis: &LMatrix, vdet: i64) -> Result<Vertex> {
    let cols = [(&basis.a, &basis.c), (&basis.b, &basis.d)];
    // the column whose second coordinate has the least valuation spans the projection
    let mut best: Option<(i64, usize)> = None;
    for (j, (_, low)) in cols.iter().enumerate() {
        if low.zero_status() == ZeroStatus::NonZero {
            let v = certified_valuation(low)?;
            if best.is_none_or(|(bv, _)| v < bv) {
                best = Some((v, j));
            }
        }
    }
    let (d, j) = best.ok_or_else(|| {
        Error::Arith(ArithError::PrecisionExhausted("second coordinates not certified nonzero".into()))
    })?;
    for (k, (_, low)) in cols.iter().enumerate() {
        if k != j && low.zero_status() == ZeroStatus::Indeterminate && low.valuation_lower_bound().unwrap() < d {
            return Err(Error::Arith(ArithError::PrecisionExhausted(
                "cannot certify the pivot valuation of a lattice basis".into(),
            )));
        }
    }
    let n = vdet - 2 * d;
    let (top, low) = cols[j];
    let ratio = top.div_to(low, n)?;
    Vertex::new(n, &ratio)
}

/// Image of a vertex under a determinant-one matrix.
pub fn act(g: &LMatrix, v: &Vertex) -> Result<Vertex> {
    let image = g.mul(&v.basis());
    canonicalize_with_det(&image, v.n)
}

/// Class of `<t^q e1, e2>`, a vertex of the standard apartment.
pub fn apartment_vertex(p: u32, q: i64) -> Vertex {
    Vertex { n: q, b: LaurentSeries::zero(p) }
}

/// For `a != 0`, the matrix [[1, a], [0, 1]] fixes `apartment_vertex(q)` exactly when `q <= val(a)`.
pub fn unipotent_fixed_threshold(a: &LaurentSeries) -> Result<i64> {
    match a.valuation()? {
        None => Err(Error::IdentityInput),
        Some(v) => Ok(v),
    }
}

/// All vertices within `radius` of `center`, breadth first in canonical order.
pub fn ball(center: &Vertex, radius: u64) -> Vec<Vertex> {
    let mut out = vec![center.clone()];
    let mut frontier = vec![(center.clone(), None::<Vertex>)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (v, from) in &frontier {
            for w in neighbors(v) {
                if Some(&w) != from.as_ref() {
                    out.push(w.clone());
                    next.push((w, Some(v.clone())));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Vertices within `radius` of `center` fixed by `g`.
pub fn fixed_vertices_within(g: &LMatrix, center: &Vertex, radius: u64) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for v in ball(center, radius) {
        if act(g, &v)? == v {
            out.push(v);
        }
    }
    Ok(out)
}

/// Breadth-first distances from `source` over the neighbor graph, up to `radius`.
pub fn bfs_distances(source: &Vertex, radius: u64) -> HashMap<Vertex, u64> {
    let mut dist = HashMap::new();
    dist.insert(source.clone(), 0);
    let mut queue = VecDeque::from([source.clone()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv == radius {
            continue;
        }
        for w in neighbors(&v) {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// DOT rendering of the ball of `radius` around `center`, center highlighted.
pub fn ball_dot(center: &Vertex, radius: u64) -> String {
    let vertices = ball(center, radius);
    let index: HashMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut s = String::from("digraph tree {\n");
    for (i, v) in vertices.iter().enumerate() {
        let extra = if i == 0 { ", style=filled, fillcolor=gold" } else { "" };
        let _ = writeln!(s, "  v{i} [label=\"{v}\"{extra}];");
    }
    let mut edges = BTreeSet::new();
    for v in &vertices {
        for w in neighbors(v) {
            if let Some(&j) = index.get(&w) {
                let i = index[v];
                if distance(center, v) < distance(center, &w) {
                    edges.insert((i, j));
                }
            }
        }
    }
    for (i, j) in edges {
        let _ = writeln!(s, "  v{i} -> v{j};");
    }
    s.push_str("}\n");
    s
}

/// Convenience constructor for the diagonal matrix diag(c t^k, c^{-1} t^{-k}).
pub fn diagonal(p: u32, k: i64) -> LMatrix {
    Matrix2::new(
        LaurentSeries::monomial(p, 1, k),
        LaurentSeries::zero(p),
        LaurentSeries::zero(p),
        LaurentSeries::monomial(p, 1, -k),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(p: u32, terms: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_terms(p, terms, None).unwrap()
    }

    fn mat(p: u32, e: [&[(i64, i64)]; 4]) -> LMatrix {
        Matrix2::sl2(ls(p, e[0]), ls(p, e[1]), ls(p, e[2]), ls(p, e[3])).unwrap()
    }

    #[test]
    fn canonical_forms() {
        let p = 3;
        let id = Matrix2::identity_like(&LaurentSeries::one(p));
        assert_eq!(canonicalize(&id).unwrap(), Vertex::base(p));
        let d1 = Matrix2::new(ls(p, &[(1, 1)]), ls(p, &[]), ls(p, &[]), ls(p, &[(0, 1)]));
        let d2 = Matrix2::new(ls(p, &[(0, 1)]), ls(p, &[]), ls(p, &[]), ls(p, &[(-1, 1)]));
        assert_eq!(canonicalize(&d1).unwrap(), canonicalize(&d2).unwrap());
        assert_eq!(canonicalize(&d1).unwrap(), apartment_vertex(p, 1));
    }

    #[test]
    fn distances_and_neighbors() {
        for p in [2, 5] {
            let base = Vertex::base(p);
            let nb = neighbors(&base);
            assert_eq!(nb.len(), p as usize + 1);
            assert!(nb.iter().all(|w| distance(&base, w) == 1));
            assert_eq!(distance(&base, &apartment_vertex(p, 2)), 2);
        }
        assert_eq!(distance(&apartment_vertex(2, 1), &apartment_vertex(2, 4)), 3);
        let path = geodesic(&Vertex::base(2), &apartment_vertex(2, 2));
        assert_eq!(path.vertices()[1], apartment_vertex(2, 1));
    }

    #[test]
    fn actions() {
        let p = 5;
        let base = Vertex::base(p);
        let w = mat(p, [&[], &[(0, -1)], &[(0, 1)], &[]]);
        assert_eq!(act(&w, &base).unwrap(), base);
        let g = diagonal(p, -1);
        assert_eq!(act(&g, &base).unwrap(), apartment_vertex(p, -2));
        for q in -3..4 {
            assert_eq!(act(&g, &apartment_vertex(p, q)).unwrap(), apartment_vertex(p, q - 2));
        }
    }

    #[test]
    fn unipotent_thresholds() {
        let p = 3;
        for (a, expect) in [(ls(p, &[(3, 1)]), 3), (ls(p, &[(0, 1)]), 0), (ls(p, &[(-2, 1)]), -2)] {
            let q = unipotent_fixed_threshold(&a).unwrap();
            assert_eq!(q, expect);
            let u = Matrix2::new(LaurentSeries::one(p), a, LaurentSeries::zero(p), LaurentSeries::one(p));
            for r in q - 3..=q {
                assert_eq!(act(&u, &apartment_vertex(p, r)).unwrap(), apartment_vertex(p, r));
            }
            assert_ne!(act(&u, &apartment_vertex(p, q + 1)).unwrap(), apartment_vertex(p, q + 1));
        }
        assert_eq!(unipotent_fixed_threshold(&LaurentSeries::zero(p)), Err(Error::IdentityInput));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(&Vertex::base(2), 3).len(), 1 + 3 + 6 + 12);
        assert!(ball_dot(&Vertex::base(2), 1).starts_with("digraph"));
    }
}
