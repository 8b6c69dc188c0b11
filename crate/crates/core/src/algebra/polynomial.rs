use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::monomial::{grevlex_cmp, ExponentVector};
use super::Rational;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Immutable after construction. No stored coefficient is zero and every key
/// has length `nvars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, i), Rational::one())
    }

    pub fn monomial(exp: ExponentVector, c: Rational) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial { nvars, terms }
    }

    /// Builds a polynomial from possibly repeated terms, combining like terms.
    ///
    /// Panics if an exponent vector has the wrong length.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        let mut map: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(e).or_insert_with(Rational::zero);
            *slot += c;
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial { nvars, terms: map }
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, c)| {
                (
                    ExponentVector::new(e.to_vec()),
                    Rational::from_integer(BigInt::from(*c)),
                )
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<ExponentVector, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// The common total degree if every term has it. The zero polynomial is
    /// not considered homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.degree());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    pub fn support(&self) -> BTreeSet<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Terms sorted descending in graded reverse lexicographic order.
    pub fn terms_grevlex(&self) -> Vec<(&ExponentVector, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grevlex_cmp(b.0, a.0));
        v
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Indices of variables occurring in some term.
    pub fn variables_present(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i` (0-based).
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.nvars, "variable index out of range");
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter_map(|(e, c)| {
                let a = e[i];
                e.decrement(i)
                    .map(|d| (d, c * Rational::from_integer(BigInt::from(a))))
            }),
        )
    }

    /// Iterated partial derivative along the listed variables.
    pub fn partial_multi(&self, indices: &[usize]) -> Self {
        indices.iter().fold(self.clone(), |p, &i| p.partial(i))
    }

    /// Directional derivative `sum_i dir_i * d/dx_i`.
    pub fn directional_derivative(&self, dir: &[Rational]) -> Self {
        assert_eq!(dir.len(), self.nvars);
        let mut acc = Self::zero(self.nvars);
        for (i, c) in dir.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.partial(i).scale(c);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(e.iter()) {
                if a > 0 {
                    t *= num_traits::pow(x.clone(), a as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients of `t -> p(e + t v)` in ascending degree, trailing zeros
    /// trimmed. The zero polynomial gives an empty sequence.
    pub fn substitute_line(&self, e: &[Rational], v: &[Rational]) -> Vec<Rational> {
        assert_eq!(e.len(), self.nvars);
        assert_eq!(v.len(), self.nvars);
        let mut total: Vec<Rational> = Vec::new();
        for (exp, c) in &self.terms {
            let mut uni = vec![c.clone()];
            for (i, &a) in exp.iter().enumerate() {
                let lin = [e[i].clone(), v[i].clone()];
                for _ in 0..a {
                    uni = univariate_mul(&uni, &lin);
                }
            }
            if total.len() < uni.len() {
                total.resize(uni.len(), Rational::zero());
            }
            for (slot, x) in total.iter_mut().zip(uni) {
                *slot += x;
            }
        }
        while total.last().is_some_and(|c| c.is_zero()) {
            total.pop();
        }
        total
    }

    /// Keeps only the terms whose exponent lies in `allowed`.
    pub fn restrict_to(&self, allowed: &BTreeSet<ExponentVector>) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| allowed.contains(*e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading (grevlex) coefficient.
    pub fn monic(&self) -> Self {
        match self.terms_grevlex().first() {
            None => self.clone(),
            Some((_, lc)) => {
                let inv = Rational::one() / (*lc).clone();
                self.scale(&inv)
            }
        }
    }

    /// Renders with the given variable names, terms in descending grevlex order.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms_grevlex().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], a)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

pub(crate) fn univariate_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Default variable names `x1, ..., xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&default_names(self.nvars)))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        Polynomial::from_terms(
            self.nvars,
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut acc: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                *acc.entry(ea.mul(eb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial {
            nvars: self.nvars,
            terms: acc,
        }
    }
}
