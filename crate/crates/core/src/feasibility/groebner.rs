//! Buchberger's algorithm over the rationals, run on primitive integer
//! polynomials with fraction-free reduction.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{ExponentVector, MonomialOrder, Polynomial, Rational};

/// Default cap on the number of S-pairs reduced by [`buchberger`].
pub const DEFAULT_MAX_PAIRS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("generators live in different polynomial rings")]
    RingMismatch,
    #[error("S-pair budget of {0} exhausted")]
    Undecided(usize),
}

/// Terms sorted descending in the active order, primitive integer coefficients
/// with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly {
    pub(crate) terms: Vec<(Vec<u32>, BigInt)>,
}

impl IntPoly {
    pub(crate) fn from_polynomial(p: &Polynomial, order: MonomialOrder) -> Self {
        let lcm_den = p
            .terms()
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut terms: Vec<(Vec<u32>, BigInt)> = p
            .terms()
            .iter()
            .map(|(e, c)| (e.entries().to_vec(), (c * Rational::from_integer(lcm_den.clone())).to_integer()))
            .collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out = IntPoly { terms };
        out.make_primitive();
        out
    }

    pub(crate) fn to_polynomial(&self, nvars: usize) -> Polynomial {
        Polynomial::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(e, c)| (ExponentVector::new(e.clone()), Rational::from_integer(c.clone()))),
        )
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&x| x == 0)
    }

    fn make_primitive(&mut self) {
        let g = self
            .terms
            .iter()
            .fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if g.is_zero() {
            return;
        }
        let g = if self.terms[0].1.is_negative() { -g } else { g };
        if !g.is_one() {
            for (_, c) in self.terms.iter_mut() {
                *c /= &g;
            }
        }
    }

    /// `a * self - b * m * other`, where the two leading terms cancel.
    fn combine(&self, a: &BigInt, other: &IntPoly, b: &BigInt, m: &[u32], order: MonomialOrder) -> IntPoly {
        let shifted = other.terms.iter().map(|(e, c)| {
            let e: Vec<u32> = e.iter().zip(m).map(|(x, y)| x + y).collect();
            (e, -(b * c))
        });
        let mine = self.terms.iter().map(|(e, c)| (e.clone(), a * c));
        merge(mine, shifted, order)
    }
}

fn merge(
    xs: impl Iterator<Item = (Vec<u32>, BigInt)>,
    ys: impl Iterator<Item = (Vec<u32>, BigInt)>,
    order: MonomialOrder,
) -> IntPoly {
    let mut xs = xs.peekable();
    let mut ys = ys.peekable();
    let mut out = Vec::new();
    loop {
        let next = match (xs.peek(), ys.peek()) {
            (None, None) => break,
            (Some(_), None) => xs.next().unwrap(),
            (None, Some(_)) => ys.next().unwrap(),
            (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                Ordering::Greater => xs.next().unwrap(),
                Ordering::Less => ys.next().unwrap(),
                Ordering::Equal => {
                    let (e, c) = xs.next().unwrap();
                    let (_, d) = ys.next().unwrap();
                    (e, c + d)
                }
            },
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    IntPoly { terms: out }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Full reduction of `f` modulo `basis`; the result is primitive.
fn reduce(f: &IntPoly, basis: &[IntPoly], order: MonomialOrder) -> IntPoly {
    let mut f = f.clone();
    let mut rem: Vec<(Vec<u32>, BigInt)> = Vec::new();
    while !f.is_zero() {
        let lm = f.lm().to_vec();
        match basis.iter().find(|g| divides(g.lm(), &lm)) {
            Some(g) => {
                let gcd = g.lc().gcd(f.lc());
                let a = g.lc() / &gcd;
                let b = f.lc() / &gcd;
                let m = quotient(&lm, g.lm());
                f = f.combine(&a, g, &b, &m, order);
                if !a.is_one() {
                    for (_, c) in rem.iter_mut() {
                        *c *= &a;
                    }
                }
                // keep coefficients small
                let g_all = rem
                    .iter()
                    .chain(f.terms.iter())
                    .fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
                if !g_all.is_zero() && !g_all.is_one() {
                    for (_, c) in rem.iter_mut().chain(f.terms.iter_mut()) {
                        *c /= &g_all;
                    }
                }
            }
            None => {
                let t = f.terms.remove(0);
                rem.push(t);
            }
        }
    }
    let mut out = IntPoly { terms: rem };
    out.make_primitive();
    out
}

fn s_polynomial(f: &IntPoly, g: &IntPoly, order: MonomialOrder) -> IntPoly {
    let l = lcm(f.lm(), g.lm());
    let mf = quotient(&l, f.lm());
    let mg = quotient(&l, g.lm());
    let gcd = f.lc().gcd(g.lc());
    let a = g.lc() / &gcd;
    let b = f.lc() / &gcd;
    let fm = IntPoly {
        terms: f
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&mf).map(|(x, y)| x + y).collect(), c.clone()))
            .collect(),
    };
    let mut s = fm.combine(&a, g, &b, &mg, order);
    s.make_primitive();
    s
}

/// Groebner basis (not yet reduced) of primitive integer polynomials.
pub(crate) fn groebner_int(
    gens: Vec<IntPoly>,
    order: MonomialOrder,
    max_pairs: usize,
) -> Result<Vec<IntPoly>, GroebnerError> {
    let mut basis: Vec<IntPoly> = Vec::new();
    for g in gens {
        let r = reduce(&g, &basis, order);
        if !r.is_zero() {
            if r.is_constant() {
                return Ok(vec![r]);
            }
            basis.push(r);
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((i, j));
        }
    }
    let mut done = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm first
        let &(i, j) = pairs
            .iter()
            .min_by(|p, q| {
                let lp = lcm(basis[p.0].lm(), basis[p.1].lm());
                let lq = lcm(basis[q.0].lm(), basis[q.1].lm());
                order.cmp(&lp, &lq).then(p.cmp(q))
            })
            .unwrap();
        pairs.remove(&(i, j));
        let (fi, fj) = (basis[i].lm(), basis[j].lm());
        if fi.iter().zip(fj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = lcm(fi, fj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(basis[k].lm(), &l)
                && !pairs.contains(&key(i, k))
                && !pairs.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        done += 1;
        if done > max_pairs {
            return Err(GroebnerError::Undecided(max_pairs));
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![r]);
        }
        let new = basis.len();
        basis.push(r);
        for i in 0..new {
            pairs.insert((i, new));
        }
    }
    Ok(basis)
}

/// Minimal and interreduced form of a Groebner basis, sorted by descending
/// leading monomial.
pub(crate) fn reduce_basis(basis: Vec<IntPoly>, order: MonomialOrder) -> Vec<IntPoly> {
    let mut minimal: Vec<IntPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != idx && divides(h.lm(), g.lm()) && (h.lm() != g.lm() || j < idx)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<IntPoly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<IntPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        // the leading term is irreducible by the others, so reduction keeps it
        out.push(reduce(&minimal[i], &others, order));
    }
    out.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    out
}

/// Reduced Groebner basis, each element monic.
pub fn buchberger(
    gens: &[Polynomial],
    order: MonomialOrder,
    max_pairs: usize,
) -> Result<Vec<Polynomial>, GroebnerError> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let nvars = first.nvars();
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(GroebnerError::RingMismatch);
    }
    let ints: Vec<IntPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| IntPoly::from_polynomial(g, order))
        .collect();
    let basis = reduce_basis(groebner_int(ints, order, max_pairs)?, order);
    Ok(basis.iter().map(|g| g.to_polynomial(nvars).monic_in(order)).collect())
}

/// Normal form of `f` modulo a Groebner basis, up to a nonzero scalar.
pub fn normal_form(f: &Polynomial, basis: &[Polynomial], order: MonomialOrder) -> Polynomial {
    let b: Vec<IntPoly> = basis.iter().map(|g| IntPoly::from_polynomial(g, order)).collect();
    reduce(&IntPoly::from_polynomial(f, order), &b, order).to_polynomial(f.nvars())
}

/// Whether `f` lies in the ideal generated by the Groebner basis `basis`.
pub fn ideal_contains(basis: &[Polynomial], f: &Polynomial, order: MonomialOrder) -> bool {
    normal_form(f, basis, order).is_zero()
}

pub fn is_unit_ideal(basis: &[Polynomial]) -> bool {
    basis.len() == 1 && basis[0].degree() == Some(0)
}

trait MonicIn {
    fn monic_in(&self, order: MonomialOrder) -> Polynomial;
}

impl MonicIn for Polynomial {
    fn monic_in(&self, order: MonomialOrder) -> Polynomial {
        let lead = self
            .terms()
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(_, c)| c.clone());
        match lead {
            Some(c) => self.scale(&(Rational::one() / c)),
            None => self.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    fn sys(polys: &[&str], vars: &[&str]) -> Vec<Polynomial> {
        polys.iter().map(|s| parse_polynomial(s, vars).unwrap()).collect()
    }

    fn gb(polys: &[&str], vars: &[&str]) -> Vec<Polynomial> {
        buchberger(&sys(polys, vars), MonomialOrder::GrevLex, DEFAULT_MAX_PAIRS).unwrap()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        assert_eq!(gb(&["x^2", "x*y"], &["x", "y"]), sys(&["x^2", "x*y"], &["x", "y"]));
    }

    #[test]
    fn inconsistent_system() {
        let g = gb(&["x - 1", "x"], &["x"]);
        assert!(is_unit_ideal(&g));
        assert_eq!(g[0].to_string(), "1");
    }

    #[test]
    fn single_binomial() {
        assert_eq!(gb(&["x1*x2 - 1"], &["x1", "x2"]), sys(&["x1*x2 - 1"], &["x1", "x2"]));
    }

    #[test]
    fn empty_input() {
        assert!(buchberger(&[], MonomialOrder::GrevLex, 10).unwrap().is_empty());
    }

    #[test]
    fn twisted_cubic_lex() {
        let vars = ["t", "x", "y", "z"];
        let g = buchberger(
            &sys(&["x - t", "y - t^2", "z - t^3"], &vars),
            MonomialOrder::Lex,
            DEFAULT_MAX_PAIRS,
        )
        .unwrap();
        assert!(g.contains(&parse_polynomial("t - x", &vars).unwrap()));
        assert!(ideal_contains(&g, &parse_polynomial("x*z - y^2", &vars).unwrap(), MonomialOrder::Lex));
        assert!(ideal_contains(&g, &parse_polynomial("y - x^2", &vars).unwrap(), MonomialOrder::Lex));
    }

    #[test]
    fn pair_budget_gives_undecided() {
        let vars = ["x", "y", "z"];
        let polys = sys(&["x^2*y + z^3", "x*y^2 + 1", "x*y*z - 2"], &vars);
        assert_eq!(
            buchberger(&polys, MonomialOrder::GrevLex, 1),
            Err(GroebnerError::Undecided(1))
        );
    }

    #[test]
    fn output_is_a_reduced_groebner_basis() {
        let vars = ["x", "y", "z"];
        let polys = sys(&["x^2 + y*z - 2", "x*y - z^2", "y^2 - x + z"], &vars);
        let g = buchberger(&polys, MonomialOrder::GrevLex, DEFAULT_MAX_PAIRS).unwrap();
        for p in &polys {
            assert!(ideal_contains(&g, p, MonomialOrder::GrevLex));
        }
        for a in &g {
            for b in &g {
                let ia = IntPoly::from_polynomial(a, MonomialOrder::GrevLex);
                let ib = IntPoly::from_polynomial(b, MonomialOrder::GrevLex);
                if ia != ib {
                    let s = s_polynomial(&ia, &ib, MonomialOrder::GrevLex);
                    let gi: Vec<IntPoly> =
                        g.iter().map(|p| IntPoly::from_polynomial(p, MonomialOrder::GrevLex)).collect();
                    assert!(reduce(&s, &gi, MonomialOrder::GrevLex).is_zero());
                }
            }
        }
        let again = buchberger(&g, MonomialOrder::GrevLex, DEFAULT_MAX_PAIRS).unwrap();
        assert_eq!(again, g);
    }
}
