use std::collections::BTreeSet;
use std::fmt::Write as _;

use omegalab::algebra::{ExponentVector, Polynomial, Rational};
use omegalab::certify::{
    certify_smooth, is_lorentzian, is_mconvex, torically_smoothable_probe, CertifyOptions,
    LorentzianReport, SmoothnessCertificate, Verdict, SCHEMA,
};
use omegalab::derivatives::{derivative_space, projection_centre};
use omegalab::polymatroid::{format_subset, hyperbolic_rank, rho_from_support, SetFunction};
use omegalab::polytope::{base_polytope, independence_polytope, LatticePolytope};
use serde_json::{json, Value};

use crate::input::{usage, InputError};

pub const EXIT_USAGE: i32 = 64;

/// Exit status of `certify`, a function of the verdict alone.
pub fn exit_code(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::SmoothToric => 0,
        Verdict::CriterionFails => 1,
        Verdict::NotApplicable => 2,
        Verdict::Undecided => 3,
    }
}

/// A finished command: the JSON document, its text rendering and the exit status.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub code: i32,
}

fn with_schema(mut v: Value, command: &str) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), SCHEMA.into());
        map.insert("command".into(), command.into());
    }
    v
}

fn point(e: &[u32]) -> String {
    let parts: Vec<String> = e.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn ipoint(e: &[i64]) -> String {
    let parts: Vec<String> = e.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn support_lines(h: &Polynomial) -> Vec<Vec<u32>> {
    h.support().iter().map(|e| e.entries().to_vec()).collect()
}

fn requires_positive_degree(h: &Polynomial) -> Result<u32, InputError> {
    if h.is_zero() {
        return Err(usage("the zero polynomial is not allowed"));
    }
    match h.homogeneous_degree() {
        None => Err(usage("polynomial is not homogeneous")),
        Some(0) => Err(usage("constant polynomial: degree at least 1 is required")),
        Some(d) => Ok(d),
    }
}

fn lorentzian_text(out: &mut String, r: &LorentzianReport) {
    let _ = writeln!(
        out,
        "lorentzian: {} (nonnegative coefficients: {}, M-convex support: {}, hessian failures: {})",
        r.is_lorentzian,
        r.nonneg_coeffs,
        r.mconvex,
        r.hessian_failures.len()
    );
    for idx in &r.hessian_failures {
        if idx.is_empty() {
            let _ = writeln!(out, "  the Hessian has more than one positive eigenvalue");
        } else {
            let _ = writeln!(out, "  more than one positive eigenvalue after differentiating by {idx:?}");
        }
    }
}

pub fn certify(h: &Polynomial, names: &[String], opts: &CertifyOptions) -> Result<Output, InputError> {
    requires_positive_degree(h)?;
    let cert = certify_smooth(h, Some(names), opts).map_err(|e| usage(e.to_string()))?;
    Ok(Output {
        json: with_schema(cert.to_json(), "certify"),
        text: certificate_text(&cert),
        code: exit_code(cert.verdict),
    })
}

pub fn certificate_text(cert: &SmoothnessCertificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "polynomial: {}", cert.polynomial);
    let _ = writeln!(out, "n = {}, d = {}", cert.n, cert.d);
    let _ = writeln!(out, "M-convex support: {}", cert.mconvex);
    if let Some(v) = &cert.mconvex_violation {
        let _ = writeln!(out, "  exchange fails for x = {}, y = {}, i = {}", point(&v.x), point(&v.y), v.i);
    }
    if let Some(l) = &cert.lorentzian {
        lorentzian_text(&mut out, l);
    }
    for r in &cert.k_reports {
        let _ = writeln!(
            out,
            "k = {}: m_k = {}, |B_k| = {}, lattice points = {}, centre dim = {}, faces = {}, disjoint = {}",
            r.k, r.m_k, r.b_k, r.lattice_points, r.centre_dim, r.faces_checked, r.disjoint
        );
        if let Some(w) = &r.witness {
            let verts: Vec<String> = w.vertices.iter().map(|v| ipoint(v)).collect();
            let _ = writeln!(out, "  witness face (dim {}): {}", w.dim, verts.join(" "));
            let _ = writeln!(out, "  {}", w.verdict.certificate);
        }
        if r.intersecting_faces.len() > 1 {
            let _ = writeln!(out, "  {} faces meet the centre in total", r.intersecting_faces.len());
        }
    }
    let _ = writeln!(out, "verdict: {}", cert.verdict);
    if let Some(reason) = &cert.reason {
        let _ = writeln!(out, "reason: {reason}");
    }
    if let Some(p) = &cert.polytope {
        let verts: Vec<String> = p.vertices.iter().map(|v| ipoint(v)).collect();
        let _ = writeln!(out, "toric polytope: {} vertices, dim {}", p.vertices.len(), p.dim);
        let _ = writeln!(out, "  {}", verts.join(" "));
        let _ = writeln!(out, "  smooth: {}", cert.polytope_is_smooth.unwrap_or(false));
    }
    out
}

fn rho_table(rho: &SetFunction) -> Vec<(String, i64)> {
    (1..(1u32 << rho.n())).map(|s| (format_subset(s), rho.get(s))).collect()
}

pub fn analyze(h: &Polynomial, names: &[String]) -> Result<Output, InputError> {
    let d = requires_positive_degree(h)?;
    let support = h.support();
    let mreport = is_mconvex(&support).map_err(|e| usage(e.to_string()))?;
    let rho = rho_from_support(&support).map_err(|e| usage(e.to_string()))?;
    let lorentzian = if d >= 2 {
        Some(is_lorentzian(h).map_err(|e| usage(e.to_string()))?)
    } else {
        None
    };
    let mut spaces = Vec::new();
    for k in 0..d {
        let ds = derivative_space(h, k).map_err(|e| usage(e.to_string()))?;
        let centre_dim = projection_centre(&ds).len();
        let basis: Vec<String> = ds.basis.iter().map(|p| p.to_string_with(names)).collect();
        let mut v = ds.to_json();
        v["basis"] = json!(basis);
        v["centre_dim"] = json!(centre_dim);
        spaces.push((ds, basis, centre_dim, v));
    }
    let table = rho_table(&rho);
    let json = json!({
        "polynomial": h.to_string_with(names),
        "vars": names,
        "n": h.nvars(),
        "d": d,
        "support": support_lines(h),
        "mconvex": mreport.holds(),
        "mconvex_violation": mreport.violation,
        "rho": table.iter().map(|(s, v)| json!({"set": s, "value": v})).collect::<Vec<_>>(),
        "lorentzian": lorentzian,
        "derivatives": spaces.iter().map(|s| s.3.clone()).collect::<Vec<_>>(),
    });

    let mut text = String::new();
    let _ = writeln!(text, "polynomial: {}", h.to_string_with(names));
    let _ = writeln!(text, "variables: {}", names.join(", "));
    let _ = writeln!(text, "n = {}, d = {}, {} terms", h.nvars(), d, support.len());
    let pts: Vec<String> = support.iter().map(|e| point(e.entries())).collect();
    let _ = writeln!(text, "support: {}", pts.join(" "));
    let _ = writeln!(text, "M-convex: {}", mreport.holds());
    if let Some(v) = &mreport.violation {
        let _ = writeln!(text, "  exchange fails for x = {}, y = {}, i = {}", point(&v.x), point(&v.y), v.i);
    }
    let _ = writeln!(text, "rho:");
    for (s, v) in &table {
        let _ = writeln!(text, "  {s} -> {v}");
    }
    if let Some(l) = &lorentzian {
        lorentzian_text(&mut text, l);
    }
    for (ds, basis, centre_dim, _) in &spaces {
        let _ = writeln!(
            text,
            "k = {}: m_k = {}, |B_k| = {}, centre dim = {}",
            ds.k,
            ds.dim(),
            ds.support_union.len(),
            centre_dim
        );
        for b in basis {
            let _ = writeln!(text, "  {b}");
        }
    }
    Ok(Output {
        json: with_schema(json, "analyze"),
        text,
        code: 0,
    })
}

pub fn mconvex(points: &BTreeSet<ExponentVector>) -> Result<Output, InputError> {
    let r = is_mconvex(points).map_err(|e| usage(e.to_string()))?;
    let mut text = format!("M-convex: {}\n", r.holds());
    if let Some(v) = &r.violation {
        let _ = writeln!(text, "exchange fails for x = {}, y = {}, i = {}", point(&v.x), point(&v.y), v.i);
    }
    let json = json!({
        "points": points.iter().map(|e| e.entries().to_vec()).collect::<Vec<_>>(),
        "mconvex": r.holds(),
        "violation": r.violation,
    });
    Ok(Output {
        json: with_schema(json, "mconvex"),
        text,
        code: 0,
    })
}

pub fn lorentzian(h: &Polynomial) -> Result<Output, InputError> {
    let r = is_lorentzian(h).map_err(|e| usage(e.to_string()))?;
    let mut text = String::new();
    lorentzian_text(&mut text, &r);
    Ok(Output {
        json: with_schema(serde_json::to_value(&r).expect("report serializes"), "lorentzian"),
        text,
        code: 0,
    })
}

pub fn rank(h: &Polynomial, e: &[Rational], v: &[Rational]) -> Result<Output, InputError> {
    let r = hyperbolic_rank(h, e, v).map_err(|err| usage(err.to_string()))?;
    let show = |xs: &[Rational]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let json = json!({"e": show(e), "v": show(v), "rank": r});
    Ok(Output {
        json: with_schema(json, "rank"),
        text: format!("rank = {r}\n"),
        code: 0,
    })
}

pub fn probe(support: &BTreeSet<ExponentVector>, trials: usize, seed: u64, opts: &CertifyOptions) -> Result<Output, InputError> {
    let r = torically_smoothable_probe(support, trials, seed, opts).map_err(|e| usage(e.to_string()))?;
    let text = format!(
        "{} trials (seed {}): smooth-toric {}, criterion-fails {}, not-applicable {}, undecided {}\n",
        r.trials, r.seed, r.smooth_toric, r.criterion_fails, r.not_applicable, r.undecided
    );
    Ok(Output {
        json: with_schema(serde_json::to_value(&r).expect("report serializes"), "probe-smoothable"),
        text,
        code: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolytopeKind {
    Base,
    Independence,
    Bar,
}

pub fn polytope(r: &SetFunction, kind: PolytopeKind, truncate: Option<i64>) -> Result<Output, InputError> {
    let check = r.is_polymatroid();
    if let Some((s, t)) = check.violating_pair {
        return Err(usage(format!(
            "not a polymatroid: violating pair S = {}, T = {}",
            format_subset(s),
            format_subset(t)
        )));
    }
    let r = match truncate {
        Some(k) => r.truncate(k).map_err(|e| usage(e.to_string()))?,
        None => r.clone(),
    };
    let p = match kind {
        PolytopeKind::Base => base_polytope(&r),
        PolytopeKind::Independence => independence_polytope(&r),
        PolytopeKind::Bar => base_polytope(&r.bar()),
    }
    .map_err(|e| usage(e.to_string()))?;
    Ok(polytope_output(&p))
}

pub fn polytope_output(p: &LatticePolytope) -> Output {
    let simple = p.is_simple();
    let smooth = p.is_smooth();
    let mut json = p.to_json();
    json["simple"] = json!(simple.holds);
    json["smooth"] = json!(smooth.holds);
    let mut text = String::new();
    let _ = writeln!(text, "dim {} in R^{}, {} vertices", p.dim, p.ambient_dim, p.vertices.len());
    for v in &p.vertices {
        let _ = writeln!(text, "  {}", ipoint(v));
    }
    for eq in &p.equations {
        let _ = writeln!(text, "  {:?} . x = {}", eq.a, eq.b);
    }
    for ineq in &p.inequalities {
        let _ = writeln!(text, "  {:?} . x <= {}", ineq.a, ineq.b);
    }
    let _ = writeln!(text, "simple: {}", simple.holds);
    let _ = writeln!(text, "smooth: {}", smooth.holds);
    Output {
        json: with_schema(json, "polytope"),
        text,
        code: 0,
    }
}
