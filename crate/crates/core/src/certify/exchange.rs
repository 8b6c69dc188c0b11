//! M-convexity by the symmetric exchange axiom, and the Lorentzian test.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{multisets, ExponentVector, Polynomial, Rational};
use crate::linalg;

use super::CertifyError;

/// A triple `(x, y, i)` with `x_i > y_i` for which no `j` completes the exchange.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeViolation {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    /// 1-based coordinate.
    pub i: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MConvexReport {
    pub violation: Option<ExchangeViolation>,
}

impl MConvexReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// For all `x, y` in the set and `i` with `x_i > y_i`, some `j` with
/// `x_j < y_j` has `x - e_i + e_j` and `y + e_i - e_j` in the set.
pub fn is_mconvex(set: &BTreeSet<ExponentVector>) -> Result<MConvexReport, CertifyError> {
    let Some(first) = set.iter().next() else {
        return Err(CertifyError::EmptySupport);
    };
    let (n, d) = (first.len(), first.degree());
    if set.iter().any(|a| a.len() != n || a.degree() != d) {
        return Err(CertifyError::InhomogeneousSupport);
    }
    let shifted = |v: &ExponentVector, down: usize, up: usize| -> ExponentVector {
        let mut w = v.entries().to_vec();
        w[down] -= 1;
        w[up] += 1;
        ExponentVector::new(w)
    };
    for x in set {
        for y in set {
            for i in 0..n {
                if x[i] <= y[i] {
                    continue;
                }
                let ok = (0..n).any(|j| {
                    x[j] < y[j] && set.contains(&shifted(x, i, j)) && set.contains(&shifted(y, j, i))
                });
                if !ok {
                    return Ok(MConvexReport {
                        violation: Some(ExchangeViolation {
                            x: x.entries().to_vec(),
                            y: y.entries().to_vec(),
                            i: i + 1,
                        }),
                    });
                }
            }
        }
    }
    Ok(MConvexReport { violation: None })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LorentzianReport {
    pub mconvex: bool,
    pub nonneg_coeffs: bool,
    /// 1-based multi-indices whose quadratic derivative has more than one
    /// positive Hessian eigenvalue.
    pub hessian_failures: Vec<Vec<usize>>,
    pub is_lorentzian: bool,
}

/// Hessian of a quadratic form.
pub fn quadratic_hessian(q: &Polynomial) -> Vec<Vec<Rational>> {
    let n = q.nvars();
    let zero = vec![Rational::zero(); n];
    (0..n)
        .map(|i| {
            let qi = q.partial(i);
            (0..n).map(|j| qi.partial(j).eval(&zero)).collect()
        })
        .collect()
}

pub fn is_lorentzian(h: &Polynomial) -> Result<LorentzianReport, CertifyError> {
    if h.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    let d = h.homogeneous_degree().ok_or(CertifyError::NotHomogeneous)?;
    if d < 2 {
        return Err(CertifyError::DegreeTooLow(d));
    }
    let mconvex = is_mconvex(&h.support())?.holds();
    let nonneg_coeffs = h.terms().values().all(|c| !c.is_negative());
    let mut hessian_failures = Vec::new();
    for idx in multisets(h.nvars(), (d - 2) as usize) {
        let q = h.partial_multi(&idx);
        if linalg::positive_eigenvalue_count(&quadratic_hessian(&q)) > 1 {
            hessian_failures.push(idx.iter().map(|i| i + 1).collect());
        }
    }
    let is_lorentzian = mconvex && nonneg_coeffs && hessian_failures.is_empty();
    Ok(LorentzianReport {
        mconvex,
        nonneg_coeffs,
        hessian_failures,
        is_lorentzian,
    })
}
