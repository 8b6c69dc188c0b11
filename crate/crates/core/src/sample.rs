//! Seeded random generators for polymatroids, M-convex sets and polynomials.
//!
//! Used by the smoothability probe and by the property suites. M-convex sets
//! are produced by brute-force enumeration of the base-polytope inequalities,
//! independently of the polytope module.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::Rng;

use crate::algebra::{monomials_of_degree, ExponentVector, Polynomial, Rational};
use crate::linalg;
use crate::polymatroid::SetFunction;

/// Random polymatroid on `n` elements with rank at most `max_rank`.
///
/// Mixes capped coverage functions and capped sums of linear matroids, so
/// loops, parallel elements and non-matroidal values all occur.
pub fn random_polymatroid<R: Rng + ?Sized>(rng: &mut R, n: usize, max_rank: i64) -> SetFunction {
    let base = if rng.gen_bool(0.5) {
        coverage_function(rng, n)
    } else {
        let a = linear_matroid(rng, n);
        if rng.gen_bool(0.5) {
            a.add(&linear_matroid(rng, n))
        } else {
            a
        }
    };
    let cap = rng.gen_range(0..=max_rank.max(0));
    SetFunction::from_fn(n, |s| base.get(s).min(cap)).expect("small ground set")
}

/// `S -> |union of A_i, i in S|` for random subsets `A_i` of a small universe.
fn coverage_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SetFunction {
    let universe = rng.gen_range(2..=4u32);
    let sets: Vec<u32> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.15) {
                0
            } else {
                rng.gen_range(1..(1u32 << universe))
            }
        })
        .collect();
    SetFunction::from_fn(n, |s| {
        let u = (0..n)
            .filter(|i| s & (1 << i) != 0)
            .fold(0u32, |acc, i| acc | sets[i]);
        u.count_ones() as i64
    })
    .expect("small ground set")
}

/// Rank function of random vectors in `Q^2` or `Q^3`.
fn linear_matroid<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SetFunction {
    let dim = rng.gen_range(2..=3usize);
    let vectors: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            if rng.gen_bool(0.1) {
                vec![0; dim]
            } else {
                (0..dim).map(|_| rng.gen_range(-1..=1)).collect()
            }
        })
        .collect();
    SetFunction::from_fn(n, |s| {
        let rows: Vec<Vec<i64>> = (0..n)
            .filter(|i| s & (1 << i) != 0)
            .map(|i| vectors[i].clone())
            .collect();
        linalg::rank(&linalg::to_rational_matrix(&rows), dim) as i64
    })
    .expect("small ground set")
}

/// Integer points `x >= 0` with `sum x = r([n])` and `sum_{i in S} x_i <= r(S)`,
/// by enumeration of all exponent vectors of that degree.
pub fn base_lattice_points_brute_force(r: &SetFunction) -> BTreeSet<ExponentVector> {
    let n = r.n();
    let d = r.rank().max(0) as u32;
    monomials_of_degree(n, d)
        .into_iter()
        .filter(|x| {
            (1..(1u32 << n)).all(|s| {
                let sum: i64 = (0..n)
                    .filter(|i| s & (1 << i) != 0)
                    .map(|i| x[i] as i64)
                    .sum();
                sum <= r.get(s)
            })
        })
        .collect()
}

/// Random M-convex set of positive degree at most `max_degree` in `n` variables.
pub fn random_mconvex_set<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    max_degree: i64,
) -> BTreeSet<ExponentVector> {
    loop {
        let r = random_polymatroid(rng, n, max_degree);
        if r.rank() >= 1 {
            return base_lattice_points_brute_force(&r);
        }
    }
}

/// Polynomial with the given support and uniform integer coefficients in `1..=max_coeff`.
pub fn random_positive_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    support: &BTreeSet<ExponentVector>,
    max_coeff: i64,
) -> Polynomial {
    let nvars = support.iter().next().map_or(0, |e| e.len());
    Polynomial::from_terms(
        nvars,
        support.iter().map(|e| {
            (
                e.clone(),
                Rational::from_integer(BigInt::from(rng.gen_range(1..=max_coeff))),
            )
        }),
    )
}

/// Product of `d` linear forms with nonnegative integer coefficients; such
/// products are stable, hence Lorentzian.
pub fn random_positive_product<R: Rng + ?Sized>(rng: &mut R, n: usize, d: u32) -> Polynomial {
    let mut acc = Polynomial::constant(n, Rational::from_integer(1.into()));
    for _ in 0..d {
        let mut coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            coeffs[rng.gen_range(0..n)] = 1;
        }
        let form = Polynomial::from_terms(
            n,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (ExponentVector::unit(n, i), Rational::from_integer(c.into()))),
        );
        acc = &acc * &form;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::is_mconvex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_polymatroids_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let n = rng.gen_range(1..=5);
            let r = random_polymatroid(&mut rng, n, 4);
            assert!(r.is_polymatroid().is_polymatroid(), "{r:?}");
            assert!(r.rank() <= 4);
        }
    }

    #[test]
    fn generated_sets_are_mconvex() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let s = random_mconvex_set(&mut rng, 4, 4);
            assert!(!s.is_empty());
            assert!(is_mconvex(&s).unwrap().holds());
        }
    }
}
