//! Exact rational arithmetic, exponent vectors and sparse polynomials.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{grevlex_cmp, monomials_of_degree, multisets, ExponentVector, MonomialOrder};
pub use parse::{parse_polynomial, ParseError};
pub use polynomial::{default_names, Polynomial};

use num_bigint::BigInt;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(
            (prop::collection::vec(0u32..4, nvars), -20i64..20, 1i64..5),
            0..7,
        )
        .prop_map(move |ts| {
            Polynomial::from_terms(
                nvars,
                ts.into_iter()
                    .map(|(e, n, d)| (ExponentVector::new(e), ratio(n, d))),
            )
        })
    }

    fn arb_nonneg_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u32..4, nvars), 1i64..9), 1..7).prop_map(
            move |ts| {
                Polynomial::from_terms(
                    nvars,
                    ts.into_iter().map(|(e, c)| (ExponentVector::new(e), rational(c))),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_poly(3)) {
            let names = default_names(3);
            let text = p.to_string_with(&names);
            let back = parse_polynomial(&text, &names).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn partials_commute(p in arb_poly(3), i in 0usize..3, j in 0usize..3) {
            prop_assert_eq!(p.partial(i).partial(j), p.partial(j).partial(i));
        }

        #[test]
        fn derivative_support_shifts(p in arb_nonneg_poly(3), i in 0usize..3) {
            let want: std::collections::BTreeSet<_> =
                p.support().iter().filter_map(|e| e.decrement(i)).collect();
            prop_assert_eq!(p.partial(i).support(), want);
        }

        #[test]
        fn line_degree_bounded(p in arb_poly(3), e in prop::collection::vec(-3i64..4, 3), v in prop::collection::vec(-3i64..4, 3)) {
            let e: Vec<Rational> = e.into_iter().map(rational).collect();
            let v: Vec<Rational> = v.into_iter().map(rational).collect();
            let coeffs = p.substitute_line(&e, &v);
            if let Some(d) = p.degree() {
                prop_assert!(coeffs.len() <= d as usize + 1);
            }
        }

        #[test]
        fn homogeneous_line_through_e(p in arb_nonneg_poly(3), e in prop::collection::vec(1i64..4, 3)) {
            // keep only the top-degree part so the input is homogeneous
            let d = p.degree().unwrap();
            let top = Polynomial::from_terms(3, p.terms().iter().filter(|(x, _)| x.degree() == d).map(|(x, c)| (x.clone(), c.clone())));
            let e: Vec<Rational> = e.into_iter().map(rational).collect();
            let coeffs = top.substitute_line(&e, &e);
            prop_assert!(!num_traits::Zero::is_zero(&top.eval(&e)));
            prop_assert_eq!(coeffs.len(), d as usize + 1);
        }
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3/6"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("7"), Some(rational(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
