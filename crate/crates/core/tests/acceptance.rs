//! End-to-end acceptance checks. Each criterion is its own test so the
//! harness prints one pass/fail line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_traits::Zero;
use omegalab::algebra::{parse_polynomial, ExponentVector, MonomialOrder, Polynomial, Rational};
use omegalab::certify::{
    centre_disjoint, certify_smooth, is_lorentzian, is_mconvex, oracle_centre_disjoint, CertifyOptions, Disjointness,
    Verdict,
};
use omegalab::derivatives::{
    binomial_identity_check, centre_vector_map, derivative_space, elementary_symmetric, projection_centre,
    projective_normal, verify_monomial_proposition,
};
use omegalab::feasibility::{ideal_contains, toric_ideal, DEFAULT_MAX_PAIRS};
use omegalab::polymatroid::{rho_from_support, SetFunction};
use omegalab::polytope::{base_polytope, LatticePolytope};
use omegalab::sample::{random_mconvex_set, random_polymatroid, random_positive_polynomial, random_positive_product};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FIVE_TERM_CUBIC: &str = "x1^2*x2 + x1*x2^2 + x1^2*x3 + x1*x2*x3 + x2^2*x3";
const STABLE_CUBIC_FAILING: &str = "w*(2*x + 4*y + 7*z)*(4*x + 2*y + 7*z) \
    + x^3 + 11*x^2*y + 11*x*y^2 + y^3 + 15*x^2*z + 46*x*y*z + 15*y^2*z + 37*x*z^2 + 37*y*z^2 + 21*z^3";
const STABLE_CUBIC_SMOOTH: &str = "x^3 + 11*x^2*y + 11*x*y^2 + y^3 + 15*x^2*z + 46*x*y*z + 15*y^2*z \
    + 37*x*z^2 + 37*y*z^2 + 21*z^3 + w*(29*x^2 + 90*x*y + 29*y^2 + 150*x*z + 150*y*z + 137*z^2)";
const WXYZ: [&str; 4] = ["w", "x", "y", "z"];

fn poly(text: &str, vars: &[&str]) -> Polynomial {
    parse_polynomial(text, vars).unwrap()
}

fn points(list: &[&[i64]]) -> BTreeSet<Vec<i64>> {
    list.iter().map(|p| p.to_vec()).collect()
}

fn permutations(base: &[i64]) -> BTreeSet<Vec<i64>> {
    fn rec(rest: &mut Vec<i64>, cur: &mut Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = BTreeSet::new();
    rec(&mut base.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// Permutations of the last entries, keeping the first fixed.
fn tail_permutations(base: &[i64]) -> BTreeSet<Vec<i64>> {
    permutations(&base[1..])
        .into_iter()
        .map(|t| std::iter::once(base[0]).chain(t).collect())
        .collect()
}

fn oracle_agrees(h: &Polynomial, k: u32, opts: &CertifyOptions) -> Option<(Disjointness, Disjointness)> {
    let oracle = oracle_centre_disjoint(h, k, opts).unwrap()?;
    let orbit = centre_disjoint(h, k, opts).unwrap().disjoint;
    Some((orbit, oracle))
}

fn log(criterion: u32, line: &str) {
    println!("criterion {criterion}: {line}");
}

#[test]
fn criterion_01_uniform_matroid_polytopes() {
    let r = SetFunction::uniform_matroid(2, 4);
    let simplex = base_polytope(&r.truncate(1).unwrap()).unwrap();
    assert_eq!(simplex.vertex_set(), permutations(&[1, 0, 0, 0]));
    assert_eq!(simplex.vertices.len(), 4);

    let octahedron = base_polytope(&r).unwrap();
    assert_eq!(octahedron.vertex_set(), permutations(&[1, 1, 0, 0]));
    assert_eq!(octahedron.vertices.len(), 6);
    assert!(!octahedron.is_simple().holds);

    let truncated = base_polytope(&r.bar()).unwrap();
    assert_eq!(truncated.vertex_set(), permutations(&[2, 1, 0, 0]));
    assert_eq!(truncated.vertices.len(), 12);
    assert!(truncated.is_simple().holds);
    assert!(truncated.is_smooth().holds);
    log(1, "simplex, octahedron (not simple), truncated tetrahedron (simple, smooth)");
}

#[test]
fn criterion_02_five_term_cubic() {
    let vars = ["x1", "x2", "x3"];
    let h = poly(FIVE_TERM_CUBIC, &vars);
    let ds = derivative_space(&h, 1).unwrap();
    for q in [
        "2*x1*x2 + x2^2 + 2*x1*x3 + x2*x3",
        "x1^2 + 2*x1*x2 + x1*x3 + 2*x2*x3",
        "x1^2 + x1*x2 + x2^2",
    ] {
        assert!(ds.contains(&poly(q, &vars)), "{q} not in the span");
    }
    let labels: [&[u32]; 5] = [&[2, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 2, 0], &[0, 1, 1]];
    let b1: BTreeSet<ExponentVector> = labels.iter().map(|e| ExponentVector::new(e.to_vec())).collect();
    assert_eq!(ds.support_union, b1);

    // toric ideal of B_1 in coordinates z20, z11, z10, z02, z01
    let a: Vec<ExponentVector> = labels.iter().map(|e| ExponentVector::new(e.to_vec())).collect();
    let ideal = toric_ideal(&a, DEFAULT_MAX_PAIRS).unwrap();
    let zvars = ["z20", "z11", "z10", "z02", "z01"];
    for b in ["z10*z02 - z11*z01", "z11*z10 - z20*z01", "z11^2 - z20*z02"] {
        assert!(ideal_contains(&ideal, &poly(b, &zvars), MonomialOrder::GrevLex), "{b}");
    }

    let centre = projection_centre(&ds);
    assert_eq!(centre.len(), 2);
    let centre_maps: Vec<BTreeMap<ExponentVector, Rational>> =
        centre.iter().map(|v| centre_vector_map(&ds, v)).collect();
    for target in [[0i64, -1, 0, 1, 1], [1, -1, 1, 0, 0]] {
        // target in span(centre): rank does not grow
        let col = |m: &BTreeMap<ExponentVector, Rational>| -> Vec<Rational> {
            a.iter().map(|e| m[e].clone()).collect()
        };
        let mut rows: Vec<Vec<Rational>> = centre_maps.iter().map(col).collect();
        rows.push(target.iter().map(|&x| Rational::from_integer(x.into())).collect());
        assert_eq!(omegalab::linalg::rank(&rows, 5), 2, "{target:?}");
    }

    let report = centre_disjoint(&h, 1, &CertifyOptions::default()).unwrap();
    assert_eq!(report.disjoint, Disjointness::Yes);
    log(2, "span, B_1, toric binomials, 2-dimensional centre, disjoint");
}

#[test]
fn criterion_03_stable_cubic_with_intersecting_centre() {
    let start = Instant::now();
    let h = poly(STABLE_CUBIC_FAILING, &WXYZ);
    assert_eq!(h.num_terms(), 16);
    assert!(is_mconvex(&h.support()).unwrap().holds());
    let names: Vec<String> = WXYZ.iter().map(|s| s.to_string()).collect();
    let cert = certify_smooth(&h, Some(&names), &CertifyOptions::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::CriterionFails);

    // The degree-two truncation is the frustum on (0,2,0,0), (1,1,0,0); its
    // projection is the one whose centre meets the toric variety.
    let rho = rho_from_support(&h.support()).unwrap();
    let quad = base_polytope(&rho.truncate(1).unwrap()).unwrap();
    let frustum: BTreeSet<Vec<i64>> =
        tail_permutations(&[0, 2, 0, 0]).union(&tail_permutations(&[1, 1, 0, 0])).cloned().collect();
    assert_eq!(quad.vertex_set(), frustum);

    let degree_two = cert.report(1).unwrap();
    assert_eq!(degree_two.disjoint, Disjointness::No);
    let witness = degree_two.witness.as_ref().unwrap();
    let expected = points(&[&[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]);
    assert_eq!(witness.vertex_set(), expected);
    let faces: Vec<BTreeSet<Vec<i64>>> = degree_two.intersecting_faces.iter().map(|f| f.vertex_set()).collect();
    assert_eq!(faces, vec![expected]);
    // the intersection point is real: monomial values proportional to (7, 7, -6) on w*x, w*y, w*z
    let u = witness.verdict.witness.as_ref().unwrap();
    assert!(u.iter().all(|x| !x.is_zero()));

    // With r_k = min(d - k, r) the linear projection sees only the four unit
    // vectors, its matrix is invertible and the centre is empty.
    let linear = cert.report(2).unwrap();
    assert_eq!((linear.m_k, linear.b_k, linear.centre_dim), (4, 4, 0));
    assert_eq!(linear.disjoint, Disjointness::Yes);
    println!(
        "criterion 3: linear projection: m_2 = {}, |B_2| = {}, centre_dim = {}, disjoint = {}",
        linear.m_k, linear.b_k, linear.centre_dim, linear.disjoint
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    log(3, &format!("criterion fails on the degree-2 projection with the expected witness face ({elapsed:?})"));
}

#[test]
fn criterion_04_stable_cubic_smooth() {
    let h = poly(STABLE_CUBIC_SMOOTH, &WXYZ);
    let cert = certify_smooth(&h, None, &CertifyOptions::default()).unwrap();
    assert_eq!(cert.verdict, Verdict::SmoothToric);
    let p = cert.polytope.as_ref().unwrap();
    let frustum: BTreeSet<Vec<i64>> =
        tail_permutations(&[0, 3, 0, 0]).union(&tail_permutations(&[2, 1, 0, 0])).cloned().collect();
    assert_eq!(p.vertex_set(), frustum);
    assert_eq!(cert.polytope_is_smooth, Some(true));
    log(4, "smooth-toric with the frustum on (0,3,0,0), (2,1,0,0)");
}

#[test]
fn criterion_05_elementary_symmetric_family() {
    let start = Instant::now();
    for n in 2..=5usize {
        for d in 2..=n {
            let h = elementary_symmetric(d, n);
            let cert = certify_smooth(&h, None, &CertifyOptions::default()).unwrap();
            assert_eq!(cert.verdict, Verdict::SmoothToric, "d={d} n={n}");
            let mut base: Vec<i64> = (1..d as i64).collect();
            base.resize(n, 0);
            assert_eq!(cert.polytope.as_ref().unwrap().vertex_set(), permutations(&base), "d={d} n={n}");
            for k in 1..d {
                let r = binomial_identity_check(n, d, k).unwrap();
                assert!(r.holds && !r.degenerate, "n={n} d={d} k={k}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    log(5, &format!("all 2 <= d <= n <= 5 smooth-toric, identity verified ({elapsed:?})"));
}

#[test]
fn criterion_06_random_polymatroids() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for trial in 0..200 {
        let n = rng.gen_range(1..=5);
        let r = random_polymatroid(&mut rng, n, 4);
        let rb = r.bar();
        let p = base_polytope(&rb).unwrap();
        assert!(p.is_simple().holds, "trial {trial}: {r:?}");
        assert!(p.is_smooth().holds, "trial {trial}: {r:?}");
        assert!(rb.check_simplicity_conditions().unwrap().holds(), "trial {trial}: {r:?}");
    }
    for trial in 0..50 {
        let n = rng.gen_range(1..=5);
        let r = random_polymatroid(&mut rng, n, 4);
        let s = random_polymatroid(&mut rng, n, 4);
        let sum = base_polytope(&r).unwrap().minkowski_sum(&base_polytope(&s).unwrap()).unwrap();
        assert_eq!(sum.vertex_set(), base_polytope(&r.add(&s)).unwrap().vertex_set(), "trial {trial}");
    }
    log(6, "200 simple smooth bar polytopes, 50 Minkowski sums");
}

#[test]
fn criterion_07_derivative_supports() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for trial in 0..100 {
        let n = rng.gen_range(1..=4);
        let s = random_mconvex_set(&mut rng, n, 4);
        let h = random_positive_polynomial(&mut rng, &s, 50);
        assert_eq!(verify_monomial_proposition(&h).unwrap(), Vec::<u32>::new(), "trial {trial}: {h}");
    }
    log(7, "100 random M-convex supports, B_k matches at every k");
}

#[test]
fn criterion_08_non_mconvex_negative_control() {
    let h = poly("x1*x2^2 + x3^3", &["x1", "x2", "x3"]);
    assert!(!is_mconvex(&h.support()).unwrap().holds());
    let hull = |k: u32| {
        let pts: Vec<Vec<i64>> = omegalab::derivatives::derivative_support(&h, k)
            .unwrap()
            .iter()
            .map(|e| e.to_i64())
            .collect();
        LatticePolytope::from_points(&pts).unwrap()
    };
    let sum = hull(1).minkowski_sum(&hull(2)).unwrap();
    assert!(sum.is_simple().holds);
    assert!(!sum.is_smooth().holds);
    log(8, "B_1 + B_2 is simple and not smooth");
}

#[test]
fn criterion_09_lorentzian() {
    assert!(is_lorentzian(&elementary_symmetric(2, 3)).unwrap().is_lorentzian);
    assert!(!is_lorentzian(&poly("x1*x2 + x3^2", &["x1", "x2", "x3"])).unwrap().is_lorentzian);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut instances = 0;
    while instances < 50 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(2..=4);
        let h = random_positive_product(&mut rng, n, d);
        let report = is_lorentzian(&h).unwrap();
        assert!(report.is_lorentzian, "{h}");
        let e: Vec<Rational> = (0..n)
            .map(|_| Rational::new(rng.gen_range(1..=9i64).into(), rng.gen_range(1..=9i64).into()))
            .collect();
        let de = h.directional_derivative(&e);
        if de.degree().unwrap_or(0) >= 2 {
            assert!(is_lorentzian(&de).unwrap().is_lorentzian, "D_e of {h}");
        }
        instances += 1;
    }
    log(9, "sigma_{2,3} yes, x1x2 + x3^2 no, 50 derivative-closure instances");
}

#[test]
fn criterion_10_oracle_agreement() {
    let opts = CertifyOptions::default();
    let mut fixtures: Vec<(String, Polynomial)> = vec![
        ("five-term cubic".into(), poly(FIVE_TERM_CUBIC, &["x1", "x2", "x3"])),
        ("failing stable cubic".into(), poly(STABLE_CUBIC_FAILING, &WXYZ)),
        ("smooth stable cubic".into(), poly(STABLE_CUBIC_SMOOTH, &WXYZ)),
    ];
    for n in 2..=5usize {
        for d in 2..=n {
            fixtures.push((format!("sigma_{{{d},{n}}}"), elementary_symmetric(d, n)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for trial in 0..100 {
        let n = rng.gen_range(1..=4);
        let s = random_mconvex_set(&mut rng, n, 4);
        fixtures.push((format!("random M-convex {trial}"), random_positive_polynomial(&mut rng, &s, 50)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000a);
    for trial in 0..50 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(2..=4);
        fixtures.push((format!("random product {trial}"), random_positive_product(&mut rng, n, d)));
    }
    let mut compared = 0;
    for (name, h) in &fixtures {
        let d = h.homogeneous_degree().unwrap();
        for k in 1..d {
            if let Some((orbit, oracle)) = oracle_agrees(h, k, &opts) {
                assert_ne!(oracle, Disjointness::Undecided, "{name} k={k}");
                assert_eq!(orbit, oracle, "{name} k={k}");
                compared += 1;
            }
        }
    }
    assert!(compared >= 20);
    log(10, &format!("{compared} face-orbit verdicts match the toric-ideal oracle"));
}

#[test]
fn witness_kernel_vectors_match_up_to_scale() {
    let h = poly(FIVE_TERM_CUBIC, &["x1", "x2", "x3"]);
    let ds = derivative_space(&h, 1).unwrap();
    let normals: BTreeSet<Vec<num_bigint::BigInt>> =
        projection_centre(&ds).iter().map(|v| projective_normal(v)).collect();
    assert_eq!(normals.len(), 2);
}
