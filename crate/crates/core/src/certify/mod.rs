//! The smoothness certificate: M-convexity gate, Lorentzian report, and for
//! each order `k` whether the centre of `pi_k` misses the toric variety of
//! `B(r_k)`, decided orbit by orbit over the faces of `B(r_k)`.

mod exchange;

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{default_names, ExponentVector, Polynomial};
use crate::derivatives::{DerivativeError, DerivativeSpace};
use crate::feasibility::{
    centre_meets_toric_variety, torus_feasible, FeasibilityError, FeasibilityVerdict, Outcome, DEFAULT_MAX_PAIRS,
    MAX_ORACLE_POINTS,
};
use crate::polymatroid::{rho_from_support, SetFunction, SetFunctionError};
use crate::polytope::{base_polytope, Face, LatticePolytope, PolytopeError, DEFAULT_MAX_LATTICE_SCAN};
use crate::sample::random_positive_polynomial;

pub use exchange::{is_lorentzian, is_mconvex, quadratic_hessian, ExchangeViolation, LorentzianReport, MConvexReport};

/// Version tag carried by every JSON document.
pub const SCHEMA: &str = "omegalab/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("the zero polynomial is not allowed")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("degree {0} is too low (need at least 2)")]
    DegreeTooLow(u32),
    #[error("order {k} outside 1..{d}")]
    OrderOutOfRange { k: u32, d: u32 },
    #[error("support is empty")]
    EmptySupport,
    #[error("exponent vectors have different lengths or degrees")]
    InhomogeneousSupport,
    #[error(transparent)]
    SetFunction(#[from] SetFunctionError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Derivative(#[from] DerivativeError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

/// Resource guards and parallelism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub max_pairs: usize,
    pub max_lattice_scan: u64,
    /// Worker threads for the per-face checks; 1 runs inline.
    pub jobs: usize,
    pub lorentzian: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            max_pairs: DEFAULT_MAX_PAIRS,
            max_lattice_scan: DEFAULT_MAX_LATTICE_SCAN,
            jobs: 1,
            lorentzian: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disjointness {
    Yes,
    No,
    Undecided,
}

impl fmt::Display for Disjointness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Disjointness::Yes => "yes",
            Disjointness::No => "no",
            Disjointness::Undecided => "undecided",
        })
    }
}

/// A face of `B(r_k)` whose torus orbit meets the centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWitness {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub lattice_points: Vec<Vec<i64>>,
    pub verdict: FeasibilityVerdict,
}

impl FaceWitness {
    pub fn vertex_set(&self) -> BTreeSet<Vec<i64>> {
        self.vertices.iter().cloned().collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "vertices": self.vertices,
            "lattice_points": self.lattice_points,
            "feasibility": self.verdict.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KReport {
    pub k: u32,
    pub m_k: usize,
    /// `|B_k|`, exponents of all k-th partials.
    pub b_k: usize,
    /// `|B(r_k) cap Z^n|`.
    pub lattice_points: usize,
    /// Vector-space dimension of the centre inside the span of `B(r_k) cap Z^n`.
    pub centre_dim: usize,
    pub faces_checked: usize,
    pub disjoint: Disjointness,
    /// First intersecting face in (dimension, vertex list) order.
    pub witness: Option<FaceWitness>,
    /// Every intersecting face, same order.
    pub intersecting_faces: Vec<FaceWitness>,
    pub undecided_faces: usize,
}

impl KReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "m_k": self.m_k,
            "B_k_size": self.b_k,
            "lattice_points": self.lattice_points,
            "centre_dim": self.centre_dim,
            "faces_checked": self.faces_checked,
            "disjoint": self.disjoint,
            "witness_face": self.witness.as_ref().map(FaceWitness::to_json),
            "intersecting_faces": self.intersecting_faces.len(),
            "undecided_faces": self.undecided_faces,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SmoothToric,
    CriterionFails,
    NotApplicable,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::SmoothToric => "smooth-toric",
            Verdict::CriterionFails => "criterion-fails",
            Verdict::NotApplicable => "not-applicable",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessCertificate {
    pub polynomial: String,
    pub n: usize,
    pub d: u32,
    pub mconvex: bool,
    pub mconvex_violation: Option<ExchangeViolation>,
    pub lorentzian: Option<LorentzianReport>,
    pub k_reports: Vec<KReport>,
    pub verdict: Verdict,
    pub reason: Option<String>,
    /// `B(r_1 + ... + r_{d-1})` when the verdict is smooth-toric.
    pub polytope: Option<LatticePolytope>,
    pub polytope_is_smooth: Option<bool>,
}

impl SmoothnessCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "polynomial": self.polynomial,
            "n": self.n,
            "d": self.d,
            "mconvex": self.mconvex,
            "mconvex_violation": self.mconvex_violation,
            "lorentzian": self.lorentzian,
            "k_reports": self.k_reports.iter().map(KReport::to_json).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "reason": self.reason,
            "polytope": self.polytope.as_ref().map(LatticePolytope::to_json),
            "polytope_is_smooth": self.polytope_is_smooth,
        })
    }

    pub fn report(&self, k: u32) -> Option<&KReport> {
        self.k_reports.iter().find(|r| r.k == k)
    }
}

/// Order-preserving map over `items` with up to `jobs` scoped threads.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn degree_checked(h: &Polynomial) -> Result<u32, CertifyError> {
    if h.is_zero() {
        return Err(CertifyError::ZeroPolynomial);
    }
    let d = h.homogeneous_degree().ok_or(CertifyError::NotHomogeneous)?;
    if d < 2 {
        return Err(CertifyError::DegreeTooLow(d));
    }
    Ok(d)
}

/// `B((rho_h)_k)` together with its lattice points as exponent vectors.
pub fn truncated_support_polytope(
    rho: &SetFunction,
    k: u32,
    max_lattice_scan: u64,
) -> Result<(LatticePolytope, Vec<Vec<i64>>), CertifyError> {
    let p = base_polytope(&rho.truncate(i64::from(k))?)?;
    let pts = p.lattice_points_with_limit(max_lattice_scan)?;
    Ok((p, pts))
}

fn to_exponents(points: &[Vec<i64>]) -> Vec<ExponentVector> {
    points
        .iter()
        .map(|p| ExponentVector::from_i64(p).expect("nonnegative lattice point"))
        .collect()
}

/// Whether the centre of `pi_k` misses the toric variety of `B(r_k) cap Z^n`,
/// checked on the torus orbit of every face.
pub fn centre_disjoint(h: &Polynomial, k: u32, options: &CertifyOptions) -> Result<KReport, CertifyError> {
    let d = degree_checked(h)?;
    if k < 1 || k >= d {
        return Err(CertifyError::OrderOutOfRange { k, d });
    }
    let rho = rho_from_support(&h.support())?;
    let (poly, points) = truncated_support_polytope(&rho, k, options.max_lattice_scan)?;
    let faces: Vec<Face> = poly.faces_with_points(&points);
    let ds = DerivativeSpace::new(h, k)?;

    let verdicts: Vec<Result<FeasibilityVerdict, FeasibilityError>> = parallel_map(&faces, options.jobs, |face| {
        let allowed: BTreeSet<ExponentVector> = to_exponents(&face.lattice_points).into_iter().collect();
        let system: Vec<Polynomial> = ds.basis.iter().map(|b| b.restrict_to(&allowed)).collect();
        torus_feasible(&system, options.max_pairs)
    });

    let mut intersecting = Vec::new();
    let mut undecided_faces = 0;
    for (face, v) in faces.iter().zip(verdicts) {
        let v = v?;
        match v.outcome {
            Outcome::Feasible => intersecting.push(FaceWitness {
                dim: face.dim,
                vertices: face.vertex_subset.iter().map(|&i| poly.vertices[i].clone()).collect(),
                lattice_points: face.lattice_points.clone(),
                verdict: v,
            }),
            Outcome::Undecided => undecided_faces += 1,
            Outcome::Infeasible => {}
        }
    }
    let disjoint = if !intersecting.is_empty() {
        Disjointness::No
    } else if undecided_faces > 0 {
        Disjointness::Undecided
    } else {
        Disjointness::Yes
    };
    Ok(KReport {
        k,
        m_k: ds.dim(),
        b_k: ds.support_union.len(),
        lattice_points: points.len(),
        centre_dim: points.len() - ds.dim(),
        faces_checked: faces.len(),
        disjoint,
        witness: intersecting.first().cloned(),
        intersecting_faces: intersecting,
        undecided_faces,
    })
}

/// The same question decided by the toric-ideal oracle. `None` when
/// `B(r_k)` has more lattice points than the oracle accepts.
pub fn oracle_centre_disjoint(
    h: &Polynomial,
    k: u32,
    options: &CertifyOptions,
) -> Result<Option<Disjointness>, CertifyError> {
    let d = degree_checked(h)?;
    if k < 1 || k >= d {
        return Err(CertifyError::OrderOutOfRange { k, d });
    }
    let rho = rho_from_support(&h.support())?;
    let (_, points) = truncated_support_polytope(&rho, k, options.max_lattice_scan)?;
    if points.len() > MAX_ORACLE_POINTS {
        return Ok(None);
    }
    let a = to_exponents(&points);
    let ds = DerivativeSpace::new(h, k)?;
    let v = centre_meets_toric_variety(&a, &ds.matrix_over(&a), options.max_pairs)?;
    Ok(Some(match v.outcome {
        Outcome::Feasible => Disjointness::No,
        Outcome::Infeasible => Disjointness::Yes,
        Outcome::Undecided => Disjointness::Undecided,
    }))
}

/// Runs the whole criterion on `h`, printing it with `names` (default
/// `x1..xn`).
pub fn certify_smooth(
    h: &Polynomial,
    names: Option<&[String]>,
    options: &CertifyOptions,
) -> Result<SmoothnessCertificate, CertifyError> {
    let d = degree_checked(h)?;
    let n = h.nvars();
    let names: Vec<String> = names.map_or_else(|| default_names(n), |s| s.to_vec());
    let support = h.support();
    let mreport = is_mconvex(&support)?;
    let lorentzian = if options.lorentzian { Some(is_lorentzian(h)?) } else { None };
    let mut cert = SmoothnessCertificate {
        polynomial: h.to_string_with(&names),
        n,
        d,
        mconvex: mreport.holds(),
        mconvex_violation: mreport.violation.clone(),
        lorentzian,
        k_reports: Vec::new(),
        verdict: Verdict::NotApplicable,
        reason: None,
        polytope: None,
        polytope_is_smooth: None,
    };
    if !cert.mconvex {
        cert.reason = Some("support is not M-convex".into());
        return Ok(cert);
    }
    let present = h.variables_present();
    if let Some(missing) = (0..n).find(|i| !present.contains(i)) {
        cert.reason = Some(format!("variable {} does not occur", names[missing]));
        return Ok(cert);
    }
    for k in 1..d {
        cert.k_reports.push(centre_disjoint(h, k, options)?);
    }
    let any = |want| cert.k_reports.iter().any(|r| r.disjoint == want);
    cert.verdict = if any(Disjointness::No) {
        let first = cert.k_reports.iter().find(|r| r.disjoint == Disjointness::No).unwrap();
        cert.reason = Some(format!("the centre of pi_{} meets the toric variety", first.k));
        Verdict::CriterionFails
    } else if any(Disjointness::Undecided) {
        cert.reason = Some("resource guard reached before a decision".into());
        Verdict::Undecided
    } else {
        let rho = rho_from_support(&support)?;
        let p = base_polytope(&rho.bar_from(1))?;
        cert.polytope_is_smooth = Some(p.is_smooth().holds);
        cert.polytope = Some(p);
        Verdict::SmoothToric
    };
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub seed: u64,
    pub smooth_toric: usize,
    pub criterion_fails: usize,
    pub not_applicable: usize,
    pub undecided: usize,
    pub verdicts: Vec<Verdict>,
}

/// Certifies `trials` random polynomials with support exactly `support` and
/// coefficients in `1..=1000`. Evidence about generic behaviour only.
pub fn torically_smoothable_probe(
    support: &BTreeSet<ExponentVector>,
    trials: usize,
    seed: u64,
    options: &CertifyOptions,
) -> Result<ProbeReport, CertifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport {
        trials,
        seed,
        smooth_toric: 0,
        criterion_fails: 0,
        not_applicable: 0,
        undecided: 0,
        verdicts: Vec::with_capacity(trials),
    };
    if trials == 0 {
        return Ok(report);
    }
    if support.is_empty() {
        return Err(CertifyError::EmptySupport);
    }
    for _ in 0..trials {
        let h = random_positive_polynomial(&mut rng, support, 1000);
        let v = certify_smooth(&h, None, options)?.verdict;
        match v {
            Verdict::SmoothToric => report.smooth_toric += 1,
            Verdict::CriterionFails => report.criterion_fails += 1,
            Verdict::NotApplicable => report.not_applicable += 1,
            Verdict::Undecided => report.undecided += 1,
        }
        report.verdicts.push(v);
    }
    Ok(report)
}
