//! Browser bindings. Every export takes strings and returns a JSON string;
//! failures come back as `{"error": ...}` so the page never has to catch.

use omegalab::algebra::{parse_polynomial, Polynomial};
use omegalab::certify::{certify_smooth, is_lorentzian, is_mconvex, CertifyOptions, SCHEMA};
use omegalab::derivatives::{derivative_space, projection_centre};
use omegalab::polymatroid::{format_subset, rho_from_support, SetFunction};
use omegalab::polytope::{base_polytope, independence_polytope, LatticePolytope};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error(msg: impl ToString) -> String {
    json!({"schema": SCHEMA, "error": msg.to_string()}).to_string()
}

fn names(vars: &str) -> Vec<String> {
    vars.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn parse(text: &str, vars: &str) -> Result<(Polynomial, Vec<String>), String> {
    let names = names(vars);
    if names.is_empty() {
        return Err("no variables".into());
    }
    let p = parse_polynomial(text, &names).map_err(|e| e.to_string())?;
    Ok((p, names))
}

/// Polytope JSON plus its edges and flags, ready for drawing.
fn drawable(p: &LatticePolytope) -> Value {
    let mut v = p.to_json();
    v["edges"] = json!(p.edges());
    v["simple"] = json!(p.is_simple().holds);
    v["smooth"] = json!(p.is_smooth().holds);
    v
}

/// Smoothness certificate of a homogeneous polynomial.
#[wasm_bindgen]
pub fn certify(polynomial: &str, vars: &str) -> String {
    let (h, names) = match parse(polynomial, vars) {
        Ok(x) => x,
        Err(e) => return error(e),
    };
    match certify_smooth(&h, Some(&names), &CertifyOptions::default()) {
        Ok(cert) => {
            let mut v = cert.to_json();
            if let Some(p) = &cert.polytope {
                v["polytope"] = drawable(p);
            }
            v.to_string()
        }
        Err(e) => error(e),
    }
}

/// Polytope of a matroid given by bases such as `12,13,14,23,24,34`;
/// `function` is `base`, `independence` or `bar`.
#[wasm_bindgen]
pub fn matroid_polytope(bases: &str, function: &str) -> String {
    let mut list = Vec::new();
    for word in bases.split(',').map(str::trim).filter(|w| !w.is_empty()) {
        match word.chars().map(|c| c.to_digit(10).filter(|&d| d >= 1)).collect::<Option<Vec<u32>>>() {
            Some(b) => list.push(b.into_iter().map(|d| d as usize - 1).collect::<Vec<_>>()),
            None => return error(format!("bad basis `{word}`")),
        }
    }
    let n = list.iter().flatten().map(|&e| e + 1).max().unwrap_or(0);
    let r = match SetFunction::matroid_from_bases(n, &list) {
        Ok(r) => r,
        Err(e) => return error(e),
    };
    let p = match function {
        "base" => base_polytope(&r),
        "independence" => independence_polytope(&r),
        "bar" => base_polytope(&r.bar()),
        other => return error(format!("unknown function `{other}`")),
    };
    match p {
        Ok(p) => {
            let mut v = drawable(&p);
            v["schema"] = json!(SCHEMA);
            v.to_string()
        }
        Err(e) => error(e),
    }
}

/// Support, M-convexity, rho, Lorentzian test and derivative spaces.
#[wasm_bindgen]
pub fn analyze(polynomial: &str, vars: &str) -> String {
    let (h, names) = match parse(polynomial, vars) {
        Ok(x) => x,
        Err(e) => return error(e),
    };
    let d = match h.homogeneous_degree() {
        Some(d) if d >= 1 && !h.is_zero() => d,
        Some(_) => return error("degree at least 1 is required"),
        None => return error("polynomial is not homogeneous"),
    };
    let support = h.support();
    let (Ok(mc), Ok(rho)) = (is_mconvex(&support), rho_from_support(&support)) else {
        return error("bad support");
    };
    let lorentzian = if d >= 2 { is_lorentzian(&h).ok() } else { None };
    let mut derivatives = Vec::new();
    for k in 0..d {
        let Ok(ds) = derivative_space(&h, k) else {
            return error("derivative space failed");
        };
        let mut v = ds.to_json();
        v["basis"] = json!(ds.basis.iter().map(|p| p.to_string_with(&names)).collect::<Vec<_>>());
        v["centre_dim"] = json!(projection_centre(&ds).len());
        derivatives.push(v);
    }
    let newton = base_polytope(&rho).ok().map(|p| drawable(&p));
    json!({
        "schema": SCHEMA,
        "polynomial": h.to_string_with(&names),
        "d": d,
        "support": support.iter().map(|e| e.entries().to_vec()).collect::<Vec<_>>(),
        "mconvex": mc.holds(),
        "mconvex_violation": mc.violation,
        "rho": (1..(1u32 << rho.n())).map(|s| json!({"set": format_subset(s), "value": rho.get(s)})).collect::<Vec<_>>(),
        "lorentzian": lorentzian,
        "derivatives": derivatives,
        "polytope": newton,
    })
    .to_string()
}
