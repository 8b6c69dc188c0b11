//! Spans of k-th order partial derivatives, their supports `B_k`, and the
//! coefficient matrices of the linear projections `pi_k` that factor the maps
//! `x -> [D^k_1(x) : ... : D^k_m(x)]` through the monomial maps of `B_k`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{grevlex_cmp, multisets, ExponentVector, Polynomial, Rational};
use crate::linalg::{self, Matrix};
use crate::polymatroid::{rho_from_support, SetFunctionError};
use crate::polytope::{base_polytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivativeError {
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("the zero polynomial has no derivative spaces")]
    ZeroPolynomial,
    #[error("order {k} outside 0..={max}")]
    OrderOutOfRange { k: u32, max: u32 },
    #[error("need 1 <= d <= n and 1 <= k < d, got n={n}, d={d}, k={k}")]
    BadParameters { n: usize, d: usize, k: usize },
    #[error(transparent)]
    SetFunction(#[from] SetFunctionError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// A basis of the span of all k-th partials of `h`, with the projection matrix
/// over the monomials of `B_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeSpace {
    pub k: u32,
    /// Echelon basis, rows primitive integral with positive leading coefficient.
    pub basis: Vec<Polynomial>,
    /// Union of the supports of all k-th partials.
    pub support_union: BTreeSet<ExponentVector>,
    /// `support_union` in descending graded reverse lexicographic order; the
    /// column labels of `projection_matrix`.
    pub columns: Vec<ExponentVector>,
    /// `projection_matrix[i][j]` is the coefficient of `columns[j]` in `basis[i]`.
    pub projection_matrix: Matrix,
}

fn grevlex_desc(a: &ExponentVector, b: &ExponentVector) -> Ordering {
    grevlex_cmp(b, a)
}

fn degree_of(h: &Polynomial) -> Result<u32, DerivativeError> {
    if h.is_zero() {
        return Err(DerivativeError::ZeroPolynomial);
    }
    h.homogeneous_degree().ok_or(DerivativeError::NotHomogeneous)
}

/// Every k-th partial `d^k h / dx_{i_1} ... dx_{i_k}` over multisets `i_1 <= ... <= i_k`.
pub fn all_partials(h: &Polynomial, k: u32) -> Vec<(Vec<usize>, Polynomial)> {
    multisets(h.nvars(), k as usize)
        .into_iter()
        .map(|idx| {
            let p = h.partial_multi(&idx);
            (idx, p)
        })
        .collect()
}

/// `B_k`: exponents occurring in some k-th partial of `h`.
pub fn derivative_support(h: &Polynomial, k: u32) -> Result<BTreeSet<ExponentVector>, DerivativeError> {
    let d = degree_of(h)?;
    if k > d {
        return Err(DerivativeError::OrderOutOfRange { k, max: d });
    }
    Ok(all_partials(h, k)
        .into_iter()
        .flat_map(|(_, p)| p.support())
        .collect())
}

impl DerivativeSpace {
    /// Builds the space for `0 <= k < deg h`.
    pub fn new(h: &Polynomial, k: u32) -> Result<Self, DerivativeError> {
        let d = degree_of(h)?;
        if k >= d {
            return Err(DerivativeError::OrderOutOfRange { k, max: d - 1 });
        }
        let partials = all_partials(h, k);
        let support_union: BTreeSet<ExponentVector> =
            partials.iter().flat_map(|(_, p)| p.support()).collect();
        let mut columns: Vec<ExponentVector> = support_union.iter().cloned().collect();
        columns.sort_by(grevlex_desc);
        let rows: Matrix = partials
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(_, p)| columns.iter().map(|c| p.coefficient(c)).collect())
            .collect();
        let (echelon, _) = linalg::rref(&rows, columns.len());
        let projection_matrix: Matrix = echelon
            .iter()
            .map(|row| {
                linalg::primitive_integer(row)
                    .into_iter()
                    .map(Rational::from_integer)
                    .collect()
            })
            .collect();
        let basis = projection_matrix
            .iter()
            .map(|row| Polynomial::from_terms(h.nvars(), columns.iter().cloned().zip(row.iter().cloned())))
            .collect();
        Ok(DerivativeSpace {
            k,
            basis,
            support_union,
            columns,
            projection_matrix,
        })
    }

    /// `m_k`, the dimension of the span.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `p` lies in the span of the basis.
    pub fn contains(&self, p: &Polynomial) -> bool {
        if p.support().iter().any(|e| !self.support_union.contains(e)) {
            return false;
        }
        let v: Vec<Rational> = self.columns.iter().map(|c| p.coefficient(c)).collect();
        linalg::in_row_space(&self.projection_matrix, &v)
    }

    /// The projection matrix with columns relabelled by `points`; monomials of
    /// `points` outside `B_k` get zero columns.
    pub fn matrix_over(&self, points: &[ExponentVector]) -> Matrix {
        self.basis
            .iter()
            .map(|b| points.iter().map(|a| b.coefficient(a)).collect())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let mut b_k: Vec<Vec<u32>> = self.support_union.iter().map(|e| e.entries().to_vec()).collect();
        b_k.sort();
        json!({
            "k": self.k,
            "m_k": self.dim(),
            "B_k": b_k,
            "columns": self.columns.iter().map(|e| e.entries().to_vec()).collect::<Vec<_>>(),
            "projection_matrix": self
                .projection_matrix
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "basis": self.basis.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub fn derivative_space(h: &Polynomial, k: u32) -> Result<DerivativeSpace, DerivativeError> {
    DerivativeSpace::new(h, k)
}

/// Kernel of the projection matrix in reduced echelon form, over
/// `ds.columns`. Its projectivization is the centre of `pi_k`.
pub fn projection_centre(ds: &DerivativeSpace) -> Matrix {
    linalg::kernel(&ds.projection_matrix, ds.columns.len())
}

/// A kernel vector keyed by exponent, for comparisons independent of column order.
pub fn centre_vector_map(ds: &DerivativeSpace, v: &[Rational]) -> BTreeMap<ExponentVector, Rational> {
    ds.columns.iter().cloned().zip(v.iter().cloned()).collect()
}

/// Orders `k` in `0..=d` at which `B_k` differs from the lattice points of
/// `B((rho_h)_k)`.
pub fn verify_monomial_proposition(h: &Polynomial) -> Result<Vec<u32>, DerivativeError> {
    let d = degree_of(h)?;
    let rho = rho_from_support(&h.support())?;
    let mut failures = Vec::new();
    for k in 0..=d {
        let bk = derivative_support(h, k)?;
        let pts: BTreeSet<ExponentVector> = base_polytope(&rho.truncate(i64::from(k))?)?
            .lattice_points()?
            .iter()
            .map(|p| ExponentVector::from_i64(p).expect("nonnegative lattice point"))
            .collect();
        if bk != pts {
            failures.push(k);
        }
    }
    Ok(failures)
}

/// `sigma_{d,n}`, the sum of all squarefree monomials of degree `d`.
pub fn elementary_symmetric(d: usize, n: usize) -> Polynomial {
    let terms = (0..(1u32 << n)).filter(|s| s.count_ones() as usize == d).map(|s| {
        let e: Vec<u32> = (0..n).map(|i| (s >> i) & 1).collect();
        (ExponentVector::new(e), Rational::one())
    });
    Polynomial::from_terms(n, terms)
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialIdentityReport {
    pub coefficient: BigInt,
    pub holds: bool,
    /// Both sides vanish identically for some `i`.
    pub degenerate: bool,
}

/// Checks `C(n+k-1-d, n-d) * H_i = sum_{T subset [n]-{i}, |T|=n-k} L_T` for
/// every `i`, as linear forms in coordinates `z_S`, `|S| = d-k`, where
/// `L_T = sum_{S subset T} z_S` and `H_i = sum_{S subset [n]-{i}} z_S`.
pub fn binomial_identity_check(n: usize, d: usize, k: usize) -> Result<BinomialIdentityReport, DerivativeError> {
    if !(1 <= d && d <= n && 1 <= k && k < d) || n > 20 {
        return Err(DerivativeError::BadParameters { n, d, k });
    }
    let m = d - k;
    let coefficient = binomial((n + k - 1 - d) as i64, (n - d) as i64);
    let subsets = |size: usize, within: u32| -> Vec<u32> {
        (0..(1u32 << n))
            .filter(|s| s.count_ones() as usize == size && s & !within == 0)
            .collect()
    };
    let full = (1u32 << n) - 1;
    let mut holds = true;
    let mut degenerate = false;
    for i in 0..n {
        let rest = full & !(1 << i);
        let mut lhs: BTreeMap<u32, BigInt> = BTreeMap::new();
        for s in subsets(m, rest) {
            *lhs.entry(s).or_default() += &coefficient;
        }
        let mut rhs: BTreeMap<u32, BigInt> = BTreeMap::new();
        for t in subsets(n - k, rest) {
            for s in subsets(m, t) {
                *rhs.entry(s).or_default() += 1;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        if lhs.is_empty() && rhs.is_empty() {
            degenerate = true;
        }
        if lhs != rhs {
            holds = false;
        }
    }
    Ok(BinomialIdentityReport {
        coefficient,
        holds,
        degenerate,
    })
}

/// Primitive integer form of a rational vector with positive first nonzero
/// entry; used to compare kernel vectors up to scaling.
pub fn projective_normal(v: &[Rational]) -> Vec<BigInt> {
    let mut w = linalg::primitive_integer(v);
    if w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        w.iter_mut().for_each(|x| *x = -x.clone());
    }
    w
}
