//! Exact convex hull of integer points by the double description method.
//!
//! The points are first projected onto coordinates of their affine hull.
//! Facets `a.y <= b` of the full-dimensional image are the extreme rays of
//! the cone `{(a, b) : b - a.y >= 0 for all points y}`, which is built up one
//! point at a time with the combinatorial adjacency test.

use num_integer::Integer;

use crate::algebra::Rational;
use crate::linalg;

use super::PolytopeError;

/// Largest ambient dimension accepted by [`convex_hull`].
pub const MAX_HULL_DIM: usize = 8;

#[derive(Clone, Debug)]
pub struct Hull {
    pub dim: usize,
    /// Affine hull as `a.x = b`.
    pub equations: Vec<(Vec<i64>, i64)>,
    /// Facets as `a.x <= b`, valid on the affine hull.
    pub facets: Vec<(Vec<i64>, i64)>,
    /// Indices of the input points that are vertices.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<i128>,
    zeros: Vec<u64>,
}

fn bit_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bit_get(bits: &[u64], i: usize) -> bool {
    bits[i / 64] & (1 << (i % 64)) != 0
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

fn normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(c: &[i128], r: &[i128]) -> Result<i128, PolytopeError> {
    let mut s: i128 = 0;
    for (x, y) in c.iter().zip(r) {
        s = x
            .checked_mul(*y)
            .and_then(|p| s.checked_add(p))
            .ok_or(PolytopeError::Overflow)?;
    }
    Ok(s)
}

/// Convex hull of distinct integer points.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<Hull, PolytopeError> {
    let Some(p0) = points.first() else {
        return Err(PolytopeError::Empty);
    };
    let n = p0.len();
    if n > MAX_HULL_DIM {
        return Err(PolytopeError::DimensionTooLarge(n, MAX_HULL_DIM));
    }
    let diffs: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| Rational::from_integer((a - b).into())).collect())
        .collect();
    let (_, pivots) = linalg::rref(&diffs, n);
    let m = pivots.len();

    let equations = linalg::kernel(&diffs, n)
        .iter()
        .map(|a| {
            let a: Vec<i64> = linalg::normalized_integer(a)
                .iter()
                .map(|x| i64::try_from(x).expect("small normal"))
                .collect();
            let b = a.iter().zip(p0).map(|(x, y)| x * y).sum();
            (a, b)
        })
        .collect();

    if m == 0 {
        return Ok(Hull {
            dim: 0,
            equations,
            facets: Vec::new(),
            vertices: vec![0],
        });
    }

    // constraint vectors (-y, 1) in the projected coordinates
    let cons: Vec<Vec<i128>> = points
        .iter()
        .map(|p| {
            let mut c: Vec<i128> = pivots.iter().map(|&j| -(p[j] as i128)).collect();
            c.push(1);
            c
        })
        .collect();
    let words = points.len().div_ceil(64);

    // initial simplex cone from m + 1 affinely independent points
    let mut initial: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (i, c) in cons.iter().enumerate() {
        let row: Vec<Rational> = c.iter().map(|&x| Rational::from_integer(x.into())).collect();
        rows.push(row);
        if linalg::rank(&rows, m + 1) == rows.len() {
            initial.push(i);
            if initial.len() == m + 1 {
                break;
            }
        } else {
            rows.pop();
        }
    }
    debug_assert_eq!(initial.len(), m + 1);

    let mut rays: Vec<Ray> = Vec::new();
    for j in 0..=m {
        // ray j: tight on every initial constraint except j
        let others: Vec<Vec<Rational>> = initial
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &i)| cons[i].iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        let ker = linalg::kernel(&others, m + 1);
        debug_assert_eq!(ker.len(), 1);
        let mut v: Vec<i128> = linalg::primitive_integer(&ker[0])
            .iter()
            .map(|x| i128::try_from(x).expect("small ray"))
            .collect();
        if dot(&cons[initial[j]], &v)? < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = vec![0u64; words];
        for (k, &i) in initial.iter().enumerate() {
            if k != j {
                bit_set(&mut zeros, i);
            }
        }
        rays.push(Ray { coords: v, zeros });
    }

    for (k, c) in cons.iter().enumerate() {
        if initial.contains(&k) {
            continue;
        }
        let vals: Vec<i128> = rays.iter().map(|r| dot(c, &r.coords)).collect::<Result<_, _>>()?;
        if vals.iter().all(|&v| v >= 0) {
            for (r, &v) in rays.iter_mut().zip(&vals) {
                if v == 0 {
                    bit_set(&mut r.zeros, k);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = bits_and(&rays[p].zeros, &rays[q].zeros);
                if popcount(&common) + 1 < m as u32 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !bits_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let (sp, sq) = (vals[p], vals[q]);
                let mut coords = Vec::with_capacity(m + 1);
                for (x, y) in rays[q].coords.iter().zip(&rays[p].coords) {
                    let a = sp.checked_mul(*x).ok_or(PolytopeError::Overflow)?;
                    let b = sq.checked_mul(*y).ok_or(PolytopeError::Overflow)?;
                    coords.push(a.checked_sub(b).ok_or(PolytopeError::Overflow)?);
                }
                normalize(&mut coords);
                let mut zeros = common;
                bit_set(&mut zeros, k);
                next.push(Ray { coords, zeros });
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if vals[i] > 0 {
                next.push(r.clone());
            } else if vals[i] == 0 {
                let mut r = r.clone();
                bit_set(&mut r.zeros, k);
                next.push(r);
            }
        }
        rays = next;
    }

    let lift = |a: &[i128]| -> Vec<i64> {
        let mut full = vec![0i64; n];
        for (&j, &x) in pivots.iter().zip(a) {
            full[j] = i64::try_from(x).expect("facet normal fits i64");
        }
        full
    };
    let facets: Vec<(Vec<i64>, i64)> = rays
        .iter()
        .map(|r| (lift(&r.coords[..m]), i64::try_from(r.coords[m]).expect("rhs fits i64")))
        .collect();

    let vertices = (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vec<Rational>> = rays
                .iter()
                .filter(|r| bit_get(&r.zeros, i))
                .map(|r| r.coords[..m].iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect();
            linalg::rank(&normals, m) == m
        })
        .collect();

    Ok(Hull {
        dim: m,
        equations,
        facets,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid(h: &Hull, pts: &[Vec<i64>]) {
        for p in pts {
            for (a, b) in &h.facets {
                let s: i64 = a.iter().zip(p).map(|(x, y)| x * y).sum();
                assert!(s <= *b, "{p:?} violates {a:?} <= {b}");
            }
            for (a, b) in &h.equations {
                let s: i64 = a.iter().zip(p).map(|(x, y)| x * y).sum();
                assert_eq!(s, *b);
            }
        }
    }

    #[test]
    fn square_with_interior_point() {
        let pts = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![2, 2], vec![1, 1], vec![1, 0]];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.dim, 2);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.vertices, vec![0, 1, 2, 3]);
        valid(&h, &pts);
    }

    #[test]
    fn cube_facets() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![i & 1, (i >> 1) & 1, (i >> 2) & 1]);
        }
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertices.len(), 8);
        valid(&h, &pts);
    }

    #[test]
    fn lower_dimensional_simplex() {
        let pts = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.dim, 3);
        assert_eq!(h.equations.len(), 1);
        assert_eq!(h.facets.len(), 4);
        valid(&h, &pts);
    }

    #[test]
    fn single_point_and_segment() {
        let h = convex_hull(&[vec![3, 4]]).unwrap();
        assert_eq!((h.dim, h.facets.len(), h.equations.len()), (0, 0, 2));
        let pts = vec![vec![0], vec![2], vec![1]];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(h.facets.len(), 2);
        assert_eq!(h.vertices, vec![0, 1]);
    }
}
