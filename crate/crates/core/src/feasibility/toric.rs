//! Toric ideals of point configurations and the projective check of whether a
//! linear subspace meets the toric variety. This is the slow second decision
//! path for centre disjointness.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::groebner::{groebner_int, reduce_basis, IntPoly};
use super::{buchberger, is_unit_ideal, FeasibilityError, FeasibilityVerdict, GroebnerError, Method, Outcome};
use crate::algebra::{ExponentVector, MonomialOrder, Polynomial, Rational};
use crate::linalg::{self, Matrix};
use crate::polytope::integer_kernel;

/// Largest configuration accepted by the oracle.
pub const MAX_ORACLE_POINTS: usize = 12;

fn binomial_of(u: &[BigInt]) -> Polynomial {
    let m = u.len();
    let plus: Vec<u32> = u
        .iter()
        .map(|x| if x.is_positive() { u32::try_from(x).expect("small exponent") } else { 0 })
        .collect();
    let minus: Vec<u32> = u
        .iter()
        .map(|x| if x.is_negative() { u32::try_from(-x).expect("small exponent") } else { 0 })
        .collect();
    Polynomial::from_terms(
        m,
        [
            (ExponentVector::new(plus), Rational::one()),
            (ExponentVector::new(minus), -Rational::one()),
        ],
    )
}

fn permute(p: &Polynomial, perm: &[usize]) -> Polynomial {
    // variable i of the result is variable perm[i] of p
    Polynomial::from_terms(
        p.nvars(),
        p.terms()
            .iter()
            .map(|(e, c)| (ExponentVector::new(perm.iter().map(|&j| e[j]).collect()), c.clone())),
    )
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `I : z_var^infinity` for a homogeneous ideal, via a graded reverse
/// lexicographic basis with `z_var` as the smallest variable.
fn saturate_variable(gens: &[Polynomial], var: usize, max_pairs: usize) -> Result<Vec<Polynomial>, GroebnerError> {
    let m = gens[0].nvars();
    let mut perm: Vec<usize> = (0..m).filter(|&j| j != var).collect();
    perm.push(var);
    let order = MonomialOrder::GrevLex;
    let moved: Vec<IntPoly> = gens
        .iter()
        .map(|g| IntPoly::from_polynomial(&permute(g, &perm), order))
        .collect();
    let basis = groebner_int(moved, order, max_pairs)?;
    let divided: Vec<IntPoly> = basis
        .into_iter()
        .map(|g| {
            let k = g.terms.iter().map(|(e, _)| e[m - 1]).min().unwrap_or(0);
            IntPoly {
                terms: g
                    .terms
                    .into_iter()
                    .map(|(mut e, c)| {
                        e[m - 1] -= k;
                        (e, c)
                    })
                    .collect(),
            }
        })
        .collect();
    let inv = inverse(&perm);
    Ok(reduce_basis(divided, order)
        .iter()
        .map(|g| permute(&g.to_polynomial(m), &inv))
        .collect())
}

/// Generators of the kernel of `k[z_a : a in A] -> k[x], z_a -> x^a`, as a
/// reduced Groebner basis in graded reverse lexicographic order.
pub fn toric_ideal(points: &[ExponentVector], max_pairs: usize) -> Result<Vec<Polynomial>, FeasibilityError> {
    let m = points.len();
    if m > MAX_ORACLE_POINTS {
        return Err(FeasibilityError::TooManyPoints(m, MAX_ORACLE_POINTS));
    }
    let Some(first) = points.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if points.iter().any(|p| p.len() != n) {
        return Err(FeasibilityError::RaggedPoints);
    }
    // rows: coordinates plus a row of ones for homogeneity
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| points.iter().map(|p| BigInt::from(p[i])).collect())
        .collect();
    rows.push(vec![BigInt::one(); m]);
    let lattice = integer_kernel(&rows, m);
    if lattice.is_empty() {
        return Ok(Vec::new());
    }
    let mut gens: Vec<Polynomial> = lattice.iter().map(|u| binomial_of(u)).collect();
    for var in 0..m {
        gens = saturate_variable(&gens, var, max_pairs)?;
    }
    Ok(buchberger(&gens, MonomialOrder::GrevLex, max_pairs)?)
}

/// `p(sum_l K[l][j] y_l)` for a polynomial `p` in the coordinates `z_j`.
fn substitute_linear(p: &Polynomial, images: &[Polynomial], nvars: usize) -> Polynomial {
    let mut acc = Polynomial::zero(nvars);
    for (e, c) in p.terms() {
        let mut term = Polynomial::constant(nvars, c.clone());
        for (j, &a) in e.iter().enumerate() {
            if a > 0 {
                term = &term * &images[j].pow(a);
            }
        }
        acc = &acc + &term;
    }
    acc
}

fn set_to_one(p: &Polynomial, var: usize) -> Polynomial {
    Polynomial::from_terms(
        p.nvars(),
        p.terms().iter().map(|(e, c)| {
            let mut q = e.entries().to_vec();
            q[var] = 0;
            (ExponentVector::new(q), c.clone())
        }),
    )
}

/// Whether the projectivized kernel of `forms` (rows over the coordinates
/// `z_a`, `a` in `points`) meets the projective toric variety of `points`.
/// Feasible means they intersect.
pub fn centre_meets_toric_variety(
    points: &[ExponentVector],
    forms: &Matrix,
    max_pairs: usize,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    let m = points.len();
    let centre = linalg::kernel(forms, m);
    let verdict = |outcome, certificate: String| FeasibilityVerdict {
        outcome,
        method: Method::ToricOracle,
        certificate,
        witness: None,
    };
    if centre.is_empty() {
        return Ok(verdict(Outcome::Infeasible, "the centre is empty".into()));
    }
    let ideal = match toric_ideal(points, max_pairs) {
        Ok(g) => g,
        Err(FeasibilityError::Groebner(_)) => {
            return Ok(verdict(Outcome::Undecided, "toric ideal: S-pair budget exhausted".into()))
        }
        Err(e) => return Err(e),
    };
    let c = centre.len();
    let images: Vec<Polynomial> = (0..m)
        .map(|j| {
            Polynomial::from_terms(
                c,
                (0..c).map(|l| (ExponentVector::unit(c, l), centre[l][j].clone())),
            )
        })
        .collect();
    let pulled: Vec<Polynomial> = ideal.iter().map(|g| substitute_linear(g, &images, c)).collect();
    for chart in 0..c {
        let sys: Vec<Polynomial> = pulled
            .iter()
            .map(|g| set_to_one(g, chart))
            .filter(|g| !g.is_zero())
            .collect();
        if sys.is_empty() {
            return Ok(verdict(
                Outcome::Feasible,
                format!("the toric equations vanish on the centre chart y{} = 1", chart + 1),
            ));
        }
        match buchberger(&sys, MonomialOrder::GrevLex, max_pairs) {
            Ok(b) if is_unit_ideal(&b) => {}
            Ok(_) => {
                return Ok(verdict(
                    Outcome::Feasible,
                    format!("nonempty intersection on the centre chart y{} = 1", chart + 1),
                ))
            }
            Err(_) => {
                return Ok(verdict(
                    Outcome::Undecided,
                    format!("S-pair budget exhausted on chart y{}", chart + 1),
                ))
            }
        }
    }
    Ok(verdict(
        Outcome::Infeasible,
        format!("1 lies in the pulled-back toric ideal on each of the {c} centre charts"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::{ideal_contains, DEFAULT_MAX_PAIRS};
    use num_traits::Zero;
    use crate::algebra::parse_polynomial;

    fn pts(list: &[&[u32]]) -> Vec<ExponentVector> {
        list.iter().map(|p| ExponentVector::new(p.to_vec())).collect()
    }

    #[test]
    fn conic_configuration() {
        let a = pts(&[&[2, 0], &[1, 1], &[0, 2]]);
        let g = toric_ideal(&a, DEFAULT_MAX_PAIRS).unwrap();
        assert_eq!(g.len(), 1);
        let want = parse_polynomial("z2^2 - z1*z3", &["z1", "z2", "z3"]).unwrap();
        assert!(g[0] == want || g[0] == -&want);
    }

    #[test]
    fn unimodular_simplex_has_no_relations() {
        let a = pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(toric_ideal(&a, DEFAULT_MAX_PAIRS).unwrap().is_empty());
    }

    #[test]
    fn five_point_configuration_binomials() {
        // z20, z11, z10, z02, z01
        let a = pts(&[&[2, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 2, 0], &[0, 1, 1]]);
        let g = toric_ideal(&a, DEFAULT_MAX_PAIRS).unwrap();
        let vars = ["z20", "z11", "z10", "z02", "z01"];
        for b in ["z10*z02 - z11*z01", "z11*z10 - z20*z01", "z11^2 - z20*z02"] {
            assert!(ideal_contains(&g, &parse_polynomial(b, &vars).unwrap(), MonomialOrder::GrevLex), "{b}");
        }
        assert!(!ideal_contains(&g, &parse_polynomial("z20 - z11", &vars).unwrap(), MonomialOrder::GrevLex));
    }

    #[test]
    fn saturation_is_needed() {
        // lattice basis binomials of the rational normal quartic generate a
        // non-saturated ideal; the result must contain z1*z5 - z3^2
        let a = pts(&[&[4, 0], &[3, 1], &[2, 2], &[1, 3], &[0, 4]]);
        let g = toric_ideal(&a, DEFAULT_MAX_PAIRS).unwrap();
        let vars = ["z1", "z2", "z3", "z4", "z5"];
        for b in ["z1*z5 - z3^2", "z2*z4 - z3^2", "z1*z4 - z2*z3", "z1*z3 - z2^2"] {
            assert!(ideal_contains(&g, &parse_polynomial(b, &vars).unwrap(), MonomialOrder::GrevLex), "{b}");
        }
        assert_eq!(g.len(), 6);
    }

    #[test]
    fn oracle_on_the_conic() {
        let a = pts(&[&[2, 0], &[1, 1], &[0, 2]]);
        // centre spanned by [1:0:0], which lies on z2^2 = z1 z3
        let forms: Matrix = vec![
            vec![Rational::zero(), Rational::one(), Rational::zero()],
            vec![Rational::zero(), Rational::zero(), Rational::one()],
        ];
        let v = centre_meets_toric_variety(&a, &forms, DEFAULT_MAX_PAIRS).unwrap();
        assert_eq!(v.outcome, Outcome::Feasible);
        // centre [0:1:0] misses the conic
        let forms: Matrix = vec![
            vec![Rational::one(), Rational::zero(), Rational::zero()],
            vec![Rational::zero(), Rational::zero(), Rational::one()],
        ];
        let v = centre_meets_toric_variety(&a, &forms, DEFAULT_MAX_PAIRS).unwrap();
        assert_eq!(v.outcome, Outcome::Infeasible);
    }

    #[test]
    fn oracle_scale_guard() {
        let a: Vec<ExponentVector> = (0..13).map(|i| ExponentVector::new(vec![i, 13 - i])).collect();
        assert!(matches!(
            centre_meets_toric_variety(&a, &vec![], 10),
            Err(FeasibilityError::TooManyPoints(13, 12))
        ));
    }
}
