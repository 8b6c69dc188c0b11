//! Common zeros with all coordinates nonzero, over the algebraic closure of
//! the rationals.
//!
//! [`torus_feasible`] tries a linear relaxation in monomial coordinates first,
//! which settles infeasibility outright and feasibility whenever the monomials
//! have linearly independent exponents. Otherwise one variable is fixed to 1,
//! the rest are inverted with an auxiliary variable, and a Groebner basis
//! decides. [`toric`] provides the independent projective oracle.

mod groebner;
pub mod toric;

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{ExponentVector, MonomialOrder, Polynomial, Rational};
use crate::linalg::{self, Matrix};

pub use groebner::{buchberger, ideal_contains, is_unit_ideal, normal_form, GroebnerError, DEFAULT_MAX_PAIRS};
pub use toric::{centre_meets_toric_variety, toric_ideal, MAX_ORACLE_POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("generators live in different polynomial rings")]
    RingMismatch,
    #[error("generator {0} is not a linear form")]
    NotLinear(usize),
    #[error("point configuration of size {0} exceeds the oracle limit of {1}")]
    TooManyPoints(usize, usize),
    #[error("points have different lengths")]
    RaggedPoints,
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Feasible,
    Infeasible,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LinearAlgebra,
    Groebner,
    ToricOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::LinearAlgebra => "linear-algebra",
            Method::Groebner => "groebner",
            Method::ToricOracle => "toric-oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub outcome: Outcome,
    pub method: Method,
    pub certificate: String,
    /// For linear-algebra verdicts of feasibility: values of the monomials
    /// (or of the variables, for linear systems) at a solution.
    pub witness: Option<Vec<Rational>>,
}

impl FeasibilityVerdict {
    pub fn feasible(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Feasible => Some(true),
            Outcome::Infeasible => Some(false),
            Outcome::Undecided => None,
        }
    }

    fn new(outcome: Outcome, method: Method, certificate: impl Into<String>) -> Self {
        FeasibilityVerdict {
            outcome,
            method,
            certificate: certificate.into(),
            witness: None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "outcome": self.outcome,
            "method": self.method.to_string(),
            "certificate": self.certificate,
            "witness": self.witness.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        })
    }
}

fn check_ring(gens: &[Polynomial]) -> Result<(), FeasibilityError> {
    match gens.first() {
        Some(g) if gens.iter().any(|h| h.nvars() != g.nvars()) => Err(FeasibilityError::RingMismatch),
        _ => Ok(()),
    }
}

/// Kernel of a coefficient matrix and the first coordinate on which the whole
/// kernel vanishes, if any.
fn kernel_and_dead_coordinate(rows: &Matrix, ncols: usize) -> (Matrix, Option<usize>) {
    let k = linalg::kernel(rows, ncols);
    let dead = (0..ncols).find(|&i| k.iter().all(|v| v[i].is_zero()));
    (k, dead)
}

/// A kernel vector with every coordinate nonzero: `sum_l t^l K_l` for the
/// first positive integer `t` that works.
fn generic_point(kernel: &Matrix, ncols: usize) -> Vec<Rational> {
    let mut t = 1i64;
    loop {
        let mut v = vec![Rational::zero(); ncols];
        let mut pow = Rational::one();
        for row in kernel {
            for (x, y) in v.iter_mut().zip(row) {
                *x += &pow * y;
            }
            pow *= Rational::from_integer(t.into());
        }
        if v.iter().all(|x| !x.is_zero()) {
            return v;
        }
        t += 1;
    }
}

/// Torus feasibility of linear forms: the kernel must avoid every coordinate
/// hyperplane, since a vector space over an infinite field is not a finite
/// union of proper subspaces.
pub fn torus_feasible_linear(forms: &[Polynomial]) -> Result<FeasibilityVerdict, FeasibilityError> {
    check_ring(forms)?;
    let Some(first) = forms.first() else {
        return Ok(FeasibilityVerdict::new(Outcome::Feasible, Method::LinearAlgebra, "empty system"));
    };
    let n = first.nvars();
    let mut rows = Vec::new();
    for (idx, f) in forms.iter().enumerate() {
        if f.terms().keys().any(|e| e.degree() != 1) {
            return Err(FeasibilityError::NotLinear(idx));
        }
        rows.push((0..n).map(|i| f.coefficient(&ExponentVector::unit(n, i))).collect());
    }
    let (k, dead) = kernel_and_dead_coordinate(&rows, n);
    Ok(match dead {
        Some(i) => FeasibilityVerdict::new(
            Outcome::Infeasible,
            Method::LinearAlgebra,
            format!("the solution space lies in the hyperplane x{} = 0", i + 1),
        ),
        None => FeasibilityVerdict {
            witness: Some(generic_point(&k, n)),
            ..FeasibilityVerdict::new(
                Outcome::Feasible,
                Method::LinearAlgebra,
                "the solution space meets the torus",
            )
        },
    })
}

/// Linear relaxation in monomial coordinates `u_a = x^a`.
fn monomial_relaxation(gens: &[Polynomial]) -> Option<FeasibilityVerdict> {
    let mut monomials: Vec<ExponentVector> = gens
        .iter()
        .flat_map(|g| g.terms().keys().cloned())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    monomials.sort_by(|a, b| crate::algebra::grevlex_cmp(b, a));
    let m = monomials.len();
    let rows: Matrix = gens
        .iter()
        .map(|g| monomials.iter().map(|a| g.coefficient(a)).collect())
        .collect();
    let (k, dead) = kernel_and_dead_coordinate(&rows, m);
    if let Some(i) = dead {
        let names = crate::algebra::default_names(gens[0].nvars());
        let mono = Polynomial::monomial(monomials[i].clone(), Rational::one()).to_string_with(&names);
        return Some(FeasibilityVerdict::new(
            Outcome::Infeasible,
            Method::LinearAlgebra,
            format!("{mono} vanishes on every solution of the linear relaxation in monomial coordinates"),
        ));
    }
    let exps: Matrix = monomials
        .iter()
        .map(|a| a.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect();
    if linalg::rank(&exps, gens[0].nvars()) == m {
        // independent exponents: the monomial map onto the torus is surjective
        return Some(FeasibilityVerdict {
            witness: Some(generic_point(&k, m)),
            ..FeasibilityVerdict::new(
                Outcome::Feasible,
                Method::LinearAlgebra,
                format!(
                    "the linear relaxation meets the torus and the monomials {} have independent exponents",
                    monomials.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
                ),
            )
        });
    }
    None
}

/// Divides out the largest monomial factor.
fn strip_monomial_factor(p: &Polynomial) -> Polynomial {
    let n = p.nvars();
    let g: Vec<u32> = (0..n)
        .map(|i| p.terms().keys().map(|e| e[i]).min().unwrap_or(0))
        .collect();
    if g.iter().all(|&x| x == 0) {
        return p.clone();
    }
    Polynomial::from_terms(
        n,
        p.terms().iter().map(|(e, c)| {
            let q: Vec<u32> = e.iter().zip(&g).map(|(a, b)| a - b).collect();
            (ExponentVector::new(q), c.clone())
        }),
    )
}

/// Torus feasibility of a system of homogeneous polynomials.
pub fn torus_feasible(gens: &[Polynomial], max_pairs: usize) -> Result<FeasibilityVerdict, FeasibilityError> {
    check_ring(gens)?;
    let gens: Vec<Polynomial> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return Ok(FeasibilityVerdict::new(
            Outcome::Feasible,
            Method::LinearAlgebra,
            "every generator vanishes identically",
        ));
    }
    if let Some(v) = monomial_relaxation(&gens) {
        return Ok(v);
    }
    let n = gens[0].nvars();
    let stripped: Vec<Polynomial> = gens.iter().map(strip_monomial_factor).collect();
    let present: Vec<usize> = (0..n)
        .filter(|&i| stripped.iter().any(|g| g.terms().keys().any(|e| e[i] > 0)))
        .collect();
    let Some((&fixed, others)) = present.split_last() else {
        return Ok(FeasibilityVerdict::new(
            Outcome::Infeasible,
            Method::LinearAlgebra,
            "a generator is a nonzero monomial",
        ));
    };
    // ring: the other present variables, then the inverse t of their product
    let nv = others.len() + 1;
    let mut system: Vec<Polynomial> = stripped
        .iter()
        .map(|g| {
            Polynomial::from_terms(
                nv,
                g.terms().iter().map(|(e, c)| {
                    let mut q: Vec<u32> = others.iter().map(|&i| e[i]).collect();
                    q.push(0);
                    (ExponentVector::new(q), c.clone())
                }),
            )
        })
        .collect();
    system.push(Polynomial::from_terms(
        nv,
        [
            (ExponentVector::new(vec![1; nv]), Rational::one()),
            (ExponentVector::zero(nv), -Rational::one()),
        ],
    ));
    match buchberger(&system, MonomialOrder::GrevLex, max_pairs) {
        Ok(basis) if is_unit_ideal(&basis) => Ok(FeasibilityVerdict::new(
            Outcome::Infeasible,
            Method::Groebner,
            format!(
                "1 lies in the ideal after setting x{} = 1 and inverting the remaining variables",
                fixed + 1
            ),
        )),
        Ok(basis) => Ok(FeasibilityVerdict::new(
            Outcome::Feasible,
            Method::Groebner,
            format!(
                "reduced Groebner basis with {} elements after setting x{} = 1 is not {{1}}",
                basis.len(),
                fixed + 1
            ),
        )),
        Err(GroebnerError::Undecided(cap)) => Ok(FeasibilityVerdict::new(
            Outcome::Undecided,
            Method::Groebner,
            format!("S-pair budget of {cap} exhausted"),
        )),
        Err(GroebnerError::RingMismatch) => Err(FeasibilityError::RingMismatch),
    }
}
