//! Exact lattice polytopes: base and independence polytopes of polymatroids,
//! Minkowski sums, lattice points, face enumeration, simplicity and lattice
//! smoothness.

mod hull;
mod lattice;

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Rational;
use crate::linalg;
use crate::polymatroid::{SetFunction, SetFunctionError};

pub use hull::{convex_hull, Hull, MAX_HULL_DIM};
pub use lattice::{integer_kernel, smith_normal_form, to_big, IntMatrix, SmithForm};

/// Default cap on candidate points visited by [`LatticePolytope::lattice_points`].
pub const DEFAULT_MAX_LATTICE_SCAN: u64 = 5_000_000;
/// Cap on `|V(P)| * |V(Q)|` for Minkowski sums.
pub const MAX_MINKOWSKI_PRODUCT: usize = 1_000_000;
/// Largest ground set for permutation-based vertex enumeration.
pub const MAX_GREEDY_GROUND_SET: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("ambient dimension {0} exceeds the limit of {1}")]
    DimensionTooLarge(usize, usize),
    #[error("integer overflow in exact hull computation")]
    Overflow,
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("Minkowski sum of {0} x {1} vertices exceeds the scale guard")]
    TooManyPairs(usize, usize),
    #[error("lattice point scan exceeded {0} candidates")]
    ScanLimit(u64),
    #[error(transparent)]
    SetFunction(#[from] SetFunctionError),
}

/// A lattice polytope with exact V- and H-representations.
///
/// Vertices are sorted lexicographically; inequalities are the facets
/// `a.x <= b`; equations `a.x = b` cut out the affine hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub inequalities: Vec<Inequality>,
    pub equations: Vec<Inequality>,
}

/// `a.x <= b` (or `a.x = b` in the equation list).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inequality {
    pub a: Vec<i64>,
    pub b: i64,
}

impl Inequality {
    pub fn eval(&self, x: &[i64]) -> i64 {
        self.a.iter().zip(x).map(|(a, x)| a * x).sum()
    }

    pub fn is_tight(&self, x: &[i64]) -> bool {
        self.eval(x) == self.b
    }
}

/// A nonempty face, given by the indices of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub vertex_subset: Vec<usize>,
    pub dim: usize,
    pub lattice_points: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexVerdict {
    pub holds: bool,
    /// First vertex (index) at which the property fails.
    pub witness: Option<usize>,
}

impl LatticePolytope {
    /// Convex hull of arbitrary integer points.
    pub fn from_points(points: &[Vec<i64>]) -> Result<Self, PolytopeError> {
        let pts: Vec<Vec<i64>> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let h = convex_hull(&pts)?;
        let ambient_dim = pts[0].len();
        let vertices: Vec<Vec<i64>> = h.vertices.iter().map(|&i| pts[i].clone()).collect();
        Ok(LatticePolytope {
            ambient_dim,
            dim: h.dim,
            vertices,
            inequalities: h.facets.into_iter().map(|(a, b)| Inequality { a, b }).collect(),
            equations: h.equations.into_iter().map(|(a, b)| Inequality { a, b }).collect(),
        })
    }

    /// Replaces each facet by an equivalent candidate inequality (same tight
    /// vertex set, valid on all vertices) when one is available.
    fn prefer_inequalities(mut self, candidates: &[Inequality]) -> Self {
        let valid: Vec<&Inequality> = candidates
            .iter()
            .filter(|c| self.vertices.iter().all(|v| c.eval(v) <= c.b))
            .collect();
        for facet in self.inequalities.iter_mut() {
            let tight: Vec<bool> = self.vertices.iter().map(|v| facet.is_tight(v)).collect();
            if let Some(c) = valid
                .iter()
                .find(|c| self.vertices.iter().zip(&tight).all(|(v, &t)| c.is_tight(v) == t))
            {
                *facet = (*c).clone();
            }
        }
        self.inequalities.sort_by(|x, y| (&x.a, x.b).cmp(&(&y.a, y.b)));
        self
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| e.is_tight(x))
            && self.inequalities.iter().all(|f| f.eval(x) <= f.b)
    }

    pub fn vertex_set(&self) -> BTreeSet<Vec<i64>> {
        self.vertices.iter().cloned().collect()
    }

    /// Vertex indices tight on each facet.
    pub fn facet_incidences(&self) -> Vec<Vec<usize>> {
        self.inequalities
            .iter()
            .map(|f| (0..self.vertices.len()).filter(|&i| f.is_tight(&self.vertices[i])).collect())
            .collect()
    }

    /// All integer points, by a bounding-box scan pruned coordinate by
    /// coordinate against the H-representation.
    pub fn lattice_points(&self) -> Result<Vec<Vec<i64>>, PolytopeError> {
        self.lattice_points_with_limit(DEFAULT_MAX_LATTICE_SCAN)
    }

    pub fn lattice_points_with_limit(&self, limit: u64) -> Result<Vec<Vec<i64>>, PolytopeError> {
        let n = self.ambient_dim;
        let lo: Vec<i64> = (0..n).map(|j| self.vertices.iter().map(|v| v[j]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|j| self.vertices.iter().map(|v| v[j]).max().unwrap()).collect();
        let constraints: Vec<(&Inequality, bool)> = self
            .inequalities
            .iter()
            .map(|f| (f, false))
            .chain(self.equations.iter().map(|e| (e, true)))
            .collect();
        // range of sum_{j >= k} a_j x_j over the box, per constraint and depth
        let tails: Vec<Vec<(i64, i64)>> = constraints
            .iter()
            .map(|(c, _)| {
                let mut t = vec![(0i64, 0i64); n + 1];
                for j in (0..n).rev() {
                    let (p, q) = (c.a[j] * lo[j], c.a[j] * hi[j]);
                    t[j] = (t[j + 1].0 + p.min(q), t[j + 1].1 + p.max(q));
                }
                t
            })
            .collect();

        struct Scan<'a> {
            lo: &'a [i64],
            hi: &'a [i64],
            constraints: &'a [(&'a Inequality, bool)],
            tails: &'a [Vec<(i64, i64)>],
            visited: u64,
            limit: u64,
            out: Vec<Vec<i64>>,
        }
        fn rec(s: &mut Scan<'_>, x: &mut Vec<i64>, partial: &mut Vec<i64>) -> Result<(), PolytopeError> {
            let k = x.len();
            s.visited += 1;
            if s.visited > s.limit {
                return Err(PolytopeError::ScanLimit(s.limit));
            }
            for (ci, (c, eq)) in s.constraints.iter().enumerate() {
                let (tmin, tmax) = s.tails[ci][k];
                if partial[ci] + tmin > c.b || (*eq && partial[ci] + tmax < c.b) {
                    return Ok(());
                }
            }
            if k == s.lo.len() {
                s.out.push(x.clone());
                return Ok(());
            }
            for v in s.lo[k]..=s.hi[k] {
                for (ci, (c, _)) in s.constraints.iter().enumerate() {
                    partial[ci] += c.a[k] * v;
                }
                x.push(v);
                let r = rec(s, x, partial);
                x.pop();
                for (ci, (c, _)) in s.constraints.iter().enumerate() {
                    partial[ci] -= c.a[k] * v;
                }
                r?;
            }
            Ok(())
        }
        let mut scan = Scan {
            lo: &lo,
            hi: &hi,
            constraints: &constraints,
            tails: &tails,
            visited: 0,
            limit,
            out: Vec::new(),
        };
        let mut partial = vec![0i64; constraints.len()];
        rec(&mut scan, &mut Vec::with_capacity(n), &mut partial)?;
        Ok(scan.out)
    }

    /// Affine dimension of a set of vertices.
    fn affine_dim(&self, idx: &[usize]) -> usize {
        let Some(&first) = idx.first() else { return 0 };
        let p0 = &self.vertices[first];
        let rows: Vec<Vec<Rational>> = idx[1..]
            .iter()
            .map(|&i| {
                self.vertices[i]
                    .iter()
                    .zip(p0)
                    .map(|(a, b)| Rational::from_integer((a - b).into()))
                    .collect()
            })
            .collect();
        linalg::rank(&rows, self.ambient_dim)
    }

    /// Nonempty faces as vertex-index sets, without lattice points. Ordered by
    /// dimension, then by vertex index list.
    pub fn face_vertex_sets(&self) -> Vec<(Vec<usize>, usize)> {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let facets = self.facet_incidences();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        seen.insert(all.clone());
        for f in &facets {
            if seen.insert(f.clone()) {
                queue.push_back(f.clone());
            }
        }
        while let Some(face) = queue.pop_front() {
            for f in &facets {
                let meet: Vec<usize> = face.iter().copied().filter(|i| f.binary_search(i).is_ok()).collect();
                if !meet.is_empty() && seen.insert(meet.clone()) {
                    queue.push_back(meet);
                }
            }
        }
        let mut out: Vec<(Vec<usize>, usize)> =
            seen.into_iter().map(|s| {
                let d = self.affine_dim(&s);
                (s, d)
            }).collect();
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        out
    }

    /// All nonempty faces with their lattice points.
    pub fn faces(&self) -> Result<Vec<Face>, PolytopeError> {
        let points = self.lattice_points()?;
        Ok(self.faces_with_points(&points))
    }

    /// Like [`faces`](Self::faces) with the polytope's lattice points supplied.
    pub fn faces_with_points(&self, points: &[Vec<i64>]) -> Vec<Face> {
        let incid = self.facet_incidences();
        self.face_vertex_sets()
            .into_iter()
            .map(|(vs, dim)| {
                // a face is cut out by the facets containing all its vertices
                let supporting: Vec<&Inequality> = self
                    .inequalities
                    .iter()
                    .zip(&incid)
                    .filter(|(_, inc)| vs.iter().all(|i| inc.binary_search(i).is_ok()))
                    .map(|(f, _)| f)
                    .collect();
                let lattice_points = points
                    .iter()
                    .filter(|p| supporting.iter().all(|f| f.is_tight(p)))
                    .cloned()
                    .collect();
                Face {
                    vertex_subset: vs,
                    dim,
                    lattice_points,
                }
            })
            .collect()
    }

    /// Vertex adjacency lists from the one-dimensional faces.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.face_vertex_sets()
            .into_iter()
            .filter(|(_, d)| *d == 1)
            .map(|(vs, _)| (vs[0], vs[vs.len() - 1]))
            .collect()
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Every vertex lies on exactly `dim` edges.
    pub fn is_simple(&self) -> VertexVerdict {
        let adj = self.neighbours();
        let witness = adj.iter().position(|a| a.len() != self.dim);
        VertexVerdict {
            holds: witness.is_none(),
            witness,
        }
    }

    /// Simple, and at each vertex the primitive edge directions form a basis
    /// of the lattice `Z^n` intersected with the direction space of the
    /// affine hull (all Smith divisors equal to one).
    pub fn is_smooth(&self) -> VertexVerdict {
        let adj = self.neighbours();
        for (i, nb) in adj.iter().enumerate() {
            if nb.len() != self.dim {
                return VertexVerdict {
                    holds: false,
                    witness: Some(i),
                };
            }
            let v = &self.vertices[i];
            let dirs: Vec<Vec<i64>> = nb
                .iter()
                .map(|&j| {
                    let d: Vec<i64> = self.vertices[j].iter().zip(v).map(|(a, b)| a - b).collect();
                    let g = d.iter().fold(0i64, |g, x| g.gcd(x));
                    d.into_iter().map(|x| x / g).collect()
                })
                .collect();
            let snf = smith_normal_form(&to_big(&dirs), self.ambient_dim);
            if snf.rank() != self.dim || !snf.divisors.iter().all(|d| d.is_one()) {
                return VertexVerdict {
                    holds: false,
                    witness: Some(i),
                };
            }
        }
        VertexVerdict {
            holds: true,
            witness: None,
        }
    }

    /// Convex hull of pairwise vertex sums.
    pub fn minkowski_sum(&self, other: &LatticePolytope) -> Result<LatticePolytope, PolytopeError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(PolytopeError::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        let (a, b) = (self.vertices.len(), other.vertices.len());
        if a.saturating_mul(b) > MAX_MINKOWSKI_PRODUCT {
            return Err(PolytopeError::TooManyPairs(a, b));
        }
        let sums: BTreeSet<Vec<i64>> = self
            .vertices
            .iter()
            .flat_map(|p| other.vertices.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()))
            .collect();
        Self::from_points(&sums.into_iter().collect::<Vec<_>>())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("polytope serializes")
    }
}

/// Points `v` with `v_{pi(j)} = r(prefix_j) - r(prefix_{j-1})` for `j <= k`
/// and zero afterwards, over all permutations `pi` and `k` in `ks`.
fn greedy_points(r: &SetFunction, full_prefix_only: bool) -> Result<BTreeSet<Vec<i64>>, PolytopeError> {
    let n = r.n();
    if n > MAX_GREEDY_GROUND_SET {
        return Err(PolytopeError::DimensionTooLarge(n, MAX_GREEDY_GROUND_SET));
    }
    let mut out = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut v = vec![0i64; n];
        let mut prefix = 0u32;
        if !full_prefix_only {
            out.insert(v.clone());
        }
        for &e in &perm {
            let next = prefix | (1 << e);
            v[e] = r.get(next) - r.get(prefix);
            prefix = next;
            if !full_prefix_only {
                out.insert(v.clone());
            }
        }
        if full_prefix_only {
            out.insert(v);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
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

fn subset_inequalities(r: &SetFunction) -> Vec<Inequality> {
    let n = r.n();
    let mut out = Vec::new();
    for i in 0..n {
        let mut a = vec![0; n];
        a[i] = -1;
        out.push(Inequality { a, b: 0 });
    }
    for s in 1..(1u32 << n) {
        let a = (0..n).map(|i| i64::from(s & (1 << i) != 0)).collect();
        out.push(Inequality { a, b: r.get(s) });
    }
    out
}

/// `P(r) = {x >= 0 : sum_{i in S} x_i <= r(S)}`.
pub fn independence_polytope(r: &SetFunction) -> Result<LatticePolytope, PolytopeError> {
    r.ensure_polymatroid()?;
    let pts: Vec<Vec<i64>> = greedy_points(r, false)?.into_iter().collect();
    Ok(LatticePolytope::from_points(&pts)?.prefer_inequalities(&subset_inequalities(r)))
}

/// `B(r)`: the face of `P(r)` on which `sum x_i = r([n])`.
pub fn base_polytope(r: &SetFunction) -> Result<LatticePolytope, PolytopeError> {
    r.ensure_polymatroid()?;
    let pts: Vec<Vec<i64>> = greedy_points(r, true)?.into_iter().collect();
    let mut p = LatticePolytope::from_points(&pts)?.prefer_inequalities(&subset_inequalities(r));
    let n = r.n();
    let sum_eq = Inequality {
        a: vec![1; n],
        b: r.rank(),
    };
    // show the rank equation itself when it belongs to the affine hull basis
    if p.equations.len() == 1 && !p.equations.contains(&sum_eq) {
        p.equations = vec![sum_eq];
    }
    Ok(p)
}

/// Vertices of `B(bar r)` for a matroid rank function `r`, built directly:
/// points supported on a basis whose nonzero entries are `1, ..., d`.
pub fn matroid_bar_vertices(r: &SetFunction) -> Result<BTreeSet<Vec<i64>>, PolytopeError> {
    if !r.is_matroid() {
        let bad = (0..r.n()).find(|&i| r.get(1 << i) > 1).unwrap_or(0);
        return Err(SetFunctionError::NotMatroid(bad + 1).into());
    }
    let n = r.n();
    let d = r.rank();
    let mut out = BTreeSet::new();
    for b in 0..(1u32 << n) {
        if b.count_ones() as i64 != d || r.get(b) != d {
            continue;
        }
        let elems: Vec<usize> = (0..n).filter(|i| b & (1 << i) != 0).collect();
        let mut perm: Vec<usize> = (0..elems.len()).collect();
        loop {
            let mut v = vec![0i64; n];
            for (pos, &e) in perm.iter().zip(&elems) {
                v[e] = *pos as i64 + 1;
            }
            out.insert(v);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }
    Ok(out)
}

/// Rational form of the lattice `Z^n` restricted to a polytope's direction
/// space; exposed for tests that cross-check smoothness.
pub fn direction_lattice_basis(p: &LatticePolytope) -> IntMatrix {
    let eqs: Vec<Vec<BigInt>> = p
        .equations
        .iter()
        .map(|e| e.a.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    if eqs.is_empty() {
        return (0..p.ambient_dim)
            .map(|i| (0..p.ambient_dim).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect();
    }
    integer_kernel(&eqs, p.ambient_dim)
}
