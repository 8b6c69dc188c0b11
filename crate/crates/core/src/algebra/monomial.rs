use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// Exponent vector of a monomial `x_1^a_1 ... x_n^a_n`.
///
/// The derived `Ord` is plain lexicographic on the entries and is only used
/// for map keys; term orders live in [`MonomialOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(nvars: usize) -> Self {
        ExponentVector(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        ExponentVector(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&a| a as i64).collect()
    }

    /// Converts a nonnegative integer point. Returns `None` on a negative entry.
    pub fn from_i64(point: &[i64]) -> Option<Self> {
        point
            .iter()
            .map(|&a| u32::try_from(a).ok())
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    pub fn mul(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Self) -> Self {
        ExponentVector(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Lowers entry `i` by one; `None` if it is already zero.
    pub fn decrement(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(ExponentVector(e))
    }
}

impl Deref for ExponentVector {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Term orders on exponent vectors, with `x_1 > x_2 > ... > x_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    GrevLex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex_cmp(a, b),
        }
    }
}

/// Graded reverse lexicographic comparison.
pub fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller power of the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// All exponent vectors of total degree `degree` in `nvars` variables,
/// in lexicographic order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<ExponentVector> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(nvars, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(ExponentVector(Vec::new()));
        }
        return out;
    }
    rec(nvars, degree, &mut Vec::with_capacity(nvars), &mut out);
    out.sort();
    out
}

/// Multisets of size `k` drawn from `0..n`, as nondecreasing index lists.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}
