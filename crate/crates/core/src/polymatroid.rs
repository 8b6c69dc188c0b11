//! Integer set functions on `2^[n]`: polymatroid axioms, truncations, the
//! barred sum of truncations, inseparability and the simplicity conditions.
//!
//! Subsets are bitmasks; bit `i` stands for ground element `i + 1`.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{ExponentVector, Polynomial, Rational};

/// Largest ground set accepted by the table-based operations.
pub const MAX_GROUND_SET: usize = 20;
/// Largest ground set for the partition-enumerating simplicity check.
pub const MAX_SIMPLICITY_GROUND_SET: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetFunctionError {
    #[error("ground set of size {0} exceeds the limit of {1}")]
    GroundSetTooLarge(usize, usize),
    #[error("value table has length {got}, expected 2^{n} = {}", 1usize << n)]
    BadTableLength { n: usize, got: usize },
    #[error("truncation index {k} outside 0..={rank}")]
    TruncationOutOfRange { k: i64, rank: i64 },
    #[error("support is empty")]
    EmptySupport,
    #[error("support is not homogeneous")]
    InhomogeneousSupport,
    #[error("exponent vectors of different lengths")]
    RaggedSupport,
    #[error("not a polymatroid: {0}")]
    NotPolymatroid(String),
    #[error("not a matroid: element {0} has rank above 1")]
    NotMatroid(usize),
    #[error("h(e + t v) vanishes identically")]
    VanishingLine,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("point has length {got}, expected {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("invalid matroid description: {0}")]
    BadMatroid(String),
}

/// Dense table of integer values indexed by subset bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SetFunctionJson", into = "SetFunctionJson")]
pub struct SetFunction {
    n: usize,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct SetFunctionJson {
    n: usize,
    values: Vec<i64>,
}

impl TryFrom<SetFunctionJson> for SetFunction {
    type Error = SetFunctionError;
    fn try_from(j: SetFunctionJson) -> Result<Self, Self::Error> {
        SetFunction::new(j.n, j.values)
    }
}

impl From<SetFunction> for SetFunctionJson {
    fn from(f: SetFunction) -> Self {
        SetFunctionJson {
            n: f.n,
            values: f.values,
        }
    }
}

impl SetFunction {
    pub fn new(n: usize, values: Vec<i64>) -> Result<Self, SetFunctionError> {
        if n > MAX_GROUND_SET {
            return Err(SetFunctionError::GroundSetTooLarge(n, MAX_GROUND_SET));
        }
        if values.len() != 1usize << n {
            return Err(SetFunctionError::BadTableLength {
                n,
                got: values.len(),
            });
        }
        Ok(SetFunction { n, values })
    }

    pub fn from_fn(n: usize, f: impl Fn(u32) -> i64) -> Result<Self, SetFunctionError> {
        if n > MAX_GROUND_SET {
            return Err(SetFunctionError::GroundSetTooLarge(n, MAX_GROUND_SET));
        }
        Ok(SetFunction {
            n,
            values: (0..(1u32 << n)).map(f).collect(),
        })
    }

    pub fn zero(n: usize) -> Self {
        SetFunction {
            n,
            values: vec![0; 1 << n],
        }
    }

    /// Rank function of the matroid with the given bases (0-based elements).
    pub fn matroid_from_bases(n: usize, bases: &[Vec<usize>]) -> Result<Self, SetFunctionError> {
        if bases.is_empty() {
            return Err(SetFunctionError::BadMatroid("no bases given".into()));
        }
        let masks: Vec<u32> = bases
            .iter()
            .map(|b| {
                b.iter().try_fold(0u32, |m, &i| {
                    if i >= n {
                        Err(SetFunctionError::BadMatroid(format!("element {} out of range", i + 1)))
                    } else {
                        Ok(m | (1 << i))
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        let f = Self::from_fn(n, |s| {
            masks.iter().map(|b| (b & s).count_ones() as i64).max().unwrap_or(0)
        })?;
        // an arbitrary basis family need not satisfy the exchange axiom
        let report = f.is_polymatroid();
        if let Some((s, t)) = report.violating_pair {
            return Err(SetFunctionError::BadMatroid(format!(
                "bases do not satisfy the exchange axiom (violation at {}, {})",
                format_subset(s),
                format_subset(t)
            )));
        }
        Ok(f)
    }

    /// Uniform matroid `U(rank, n)`.
    pub fn uniform_matroid(rank: usize, n: usize) -> Self {
        Self::from_fn(n, |s| (s.count_ones() as i64).min(rank as i64)).expect("small ground set")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn full_set(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn get(&self, s: u32) -> i64 {
        self.values[s as usize]
    }

    /// Value of the full ground set.
    pub fn rank(&self) -> i64 {
        self.get(self.full_set())
    }

    /// Elements (0-based) of rank zero.
    pub fn loops(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.get(1 << i) == 0).collect()
    }

    pub fn is_matroid(&self) -> bool {
        self.is_polymatroid().is_polymatroid() && (0..self.n).all(|i| self.get(1 << i) <= 1)
    }

    pub fn add(&self, other: &SetFunction) -> SetFunction {
        assert_eq!(self.n, other.n, "ground sets differ");
        SetFunction {
            n: self.n,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Checks the axioms: normalized, monotone, submodular.
    ///
    /// Monotonicity and submodularity are tested through their local forms
    /// `f(S) <= f(S+i)` and `f(S+i) + f(S+j) >= f(S+i+j) + f(S)`, which are
    /// equivalent to the pairwise statements. The reported witness is the
    /// first local violation in bitmask order of `S`, then `i`, then `j`.
    pub fn is_polymatroid(&self) -> PolymatroidCheckReport {
        let n = self.n;
        let normalized = self.values[0] == 0;
        let mut witness = if normalized { None } else { Some((0, 0)) };
        let mut monotone = true;
        let mut submodular = true;
        for s in 0..(1u32 << n) {
            for i in (0..n).filter(|&i| s & (1 << i) == 0) {
                let si = s | (1 << i);
                if self.get(s) > self.get(si) {
                    monotone = false;
                    witness.get_or_insert((s, si));
                }
                for j in (i + 1..n).filter(|&j| s & (1 << j) == 0) {
                    let sj = s | (1 << j);
                    if self.get(si) + self.get(sj) < self.get(si | sj) + self.get(s) {
                        submodular = false;
                        witness.get_or_insert((si, sj));
                    }
                }
            }
        }
        PolymatroidCheckReport {
            is_normalized: normalized,
            is_monotone: monotone,
            is_submodular: submodular,
            violating_pair: witness,
        }
    }

    pub fn ensure_polymatroid(&self) -> Result<(), SetFunctionError> {
        let report = self.is_polymatroid();
        match report.violating_pair {
            None => Ok(()),
            Some((s, t)) => Err(SetFunctionError::NotPolymatroid(format!(
                "{} at S = {}, T = {}",
                report.failed_axiom(),
                format_subset(s),
                format_subset(t)
            ))),
        }
    }

    /// `r_k(S) = min(d - k, r(S))` where `d` is the rank.
    pub fn truncate(&self, k: i64) -> Result<SetFunction, SetFunctionError> {
        let d = self.rank();
        if k < 0 || k > d {
            return Err(SetFunctionError::TruncationOutOfRange { k, rank: d });
        }
        Ok(SetFunction {
            n: self.n,
            values: self.values.iter().map(|&v| v.min(d - k)).collect(),
        })
    }

    /// `r_0 + r_1 + ... + r_d`.
    pub fn bar(&self) -> SetFunction {
        self.bar_from(0)
    }

    /// `r_start + ... + r_d`; `bar_from(1)` is the polymatroid whose base
    /// polytope carries the toric variety of the smoothness certificate.
    pub fn bar_from(&self, start: i64) -> SetFunction {
        let d = self.rank().max(0);
        let start = start.max(0);
        let values = self
            .values
            .iter()
            .map(|&v| (start..=d).map(|k| v.min(d - k)).sum())
            .collect();
        SetFunction { n: self.n, values }
    }

    /// `S` is inseparable when every split into two disjoint nonempty parts
    /// is strictly subadditive. Sets of size at most one are inseparable.
    pub fn is_inseparable(&self, s: u32) -> bool {
        if s.count_ones() <= 1 {
            return true;
        }
        let low = s & s.wrapping_neg();
        // each unordered split once: the part containing the lowest element
        let mut a = (s - 1) & s;
        while a > 0 {
            if a & low != 0 && self.get(s) >= self.get(a) + self.get(s ^ a) {
                return false;
            }
            a = (a - 1) & s;
        }
        true
    }

    /// Exhaustively checks the two strict-inequality conditions whose joint
    /// validity characterizes simple independence polytopes. The function is
    /// checked as given; pass `r.bar()` to test the barred polymatroid.
    pub fn check_simplicity_conditions(&self) -> Result<SimplicityReport, SetFunctionError> {
        let n = self.n;
        if n > MAX_SIMPLICITY_GROUND_SET {
            return Err(SetFunctionError::GroundSetTooLarge(n, MAX_SIMPLICITY_GROUND_SET));
        }
        let full = 1u32 << n;
        let insep: Vec<bool> = (0..full).map(|s| self.is_inseparable(s)).collect();

        for s in 0..full {
            if !insep[s as usize] {
                continue;
            }
            for t in 0..full {
                let i = s & t;
                let u = s | t;
                if i == 0 || i == s || i == t {
                    continue;
                }
                if !(insep[t as usize] && insep[u as usize]) {
                    continue;
                }
                let (fi, fs, ft, fu) = (self.get(i), self.get(s), self.get(t), self.get(u));
                if fi < fs && fi < ft && fi + fu >= fs + ft {
                    return Ok(SimplicityReport::PairViolation { s, t });
                }
            }
        }

        for union in 1..full {
            if union.count_ones() < 2 {
                continue;
            }
            let fu = self.get(union);
            let Some(sup) = (0..full).find(|&s| {
                s & union == union && insep[s as usize] && self.get(s) == fu
            }) else {
                continue;
            };
            let elems: Vec<u32> = (0..n as u32).filter(|i| union & (1 << i) != 0).collect();
            let mut found = None;
            for_each_set_partition(&elems, &mut |blocks: &[u32]| {
                if found.is_some() || blocks.len() < 2 {
                    return;
                }
                let sum: i64 = blocks.iter().map(|&b| self.get(b)).sum();
                if fu >= sum {
                    found = Some(blocks.to_vec());
                }
            });
            if let Some(parts) = found {
                return Ok(SimplicityReport::PartitionViolation { superset: sup, parts });
            }
        }
        Ok(SimplicityReport::Holds)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("set function serializes")
    }
}

/// Outcome of [`SetFunction::is_polymatroid`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolymatroidCheckReport {
    pub is_normalized: bool,
    pub is_monotone: bool,
    pub is_submodular: bool,
    pub violating_pair: Option<(u32, u32)>,
}

impl PolymatroidCheckReport {
    pub fn is_polymatroid(&self) -> bool {
        self.violating_pair.is_none()
    }

    fn failed_axiom(&self) -> &'static str {
        if !self.is_normalized {
            "f(empty set) != 0"
        } else if !self.is_monotone {
            "monotonicity fails"
        } else {
            "submodularity fails"
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SimplicityReport {
    Holds,
    /// `S, T` meet the hypotheses of the pair condition but
    /// `f(S&T) + f(S|T) >= f(S) + f(T)`.
    PairViolation { s: u32, t: u32 },
    /// Disjoint nonempty parts with an inseparable superset of equal value
    /// whose values do not strictly exceed the value of their union.
    PartitionViolation { superset: u32, parts: Vec<u32> },
}

impl SimplicityReport {
    pub fn holds(&self) -> bool {
        matches!(self, SimplicityReport::Holds)
    }
}

/// Calls `visit` with every set partition of `elems` (blocks as bitmasks),
/// in restricted-growth-string order.
pub fn for_each_set_partition(elems: &[u32], visit: &mut dyn FnMut(&[u32])) {
    fn rec(elems: &[u32], idx: usize, blocks: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if idx == elems.len() {
            visit(blocks);
            return;
        }
        let bit = 1u32 << elems[idx];
        for b in 0..blocks.len() {
            blocks[b] |= bit;
            rec(elems, idx + 1, blocks, visit);
            blocks[b] &= !bit;
        }
        blocks.push(bit);
        rec(elems, idx + 1, blocks, visit);
        blocks.pop();
    }
    rec(elems, 0, &mut Vec::new(), visit);
}

/// `rho(S) = max over alpha in supp of sum_{i in S} alpha_i`.
pub fn rho_from_support(
    support: &BTreeSet<ExponentVector>,
) -> Result<SetFunction, SetFunctionError> {
    let first = support.iter().next().ok_or(SetFunctionError::EmptySupport)?;
    let n = first.len();
    let d = first.degree();
    for a in support {
        if a.len() != n {
            return Err(SetFunctionError::RaggedSupport);
        }
        if a.degree() != d {
            return Err(SetFunctionError::InhomogeneousSupport);
        }
    }
    SetFunction::from_fn(n, |s| {
        support
            .iter()
            .map(|a| {
                a.iter()
                    .enumerate()
                    .filter(|(i, _)| s & (1 << i) != 0)
                    .map(|(_, &x)| x as i64)
                    .sum::<i64>()
            })
            .max()
            .unwrap_or(0)
    })
}

/// `deg h(e + t v)`.
pub fn hyperbolic_rank(
    h: &Polynomial,
    e: &[Rational],
    v: &[Rational],
) -> Result<usize, SetFunctionError> {
    if !h.is_homogeneous() {
        return Err(SetFunctionError::NotHomogeneous);
    }
    for p in [e, v] {
        if p.len() != h.nvars() {
            return Err(SetFunctionError::DimensionMismatch {
                got: p.len(),
                want: h.nvars(),
            });
        }
    }
    let coeffs = h.substitute_line(e, v);
    if coeffs.is_empty() {
        return Err(SetFunctionError::VanishingLine);
    }
    Ok(coeffs.len() - 1)
}

/// The set function `S -> rank_{h,e}(sum_{i in S} delta_i)`.
pub fn polymatroid_from_hyperbolic(
    h: &Polynomial,
    e: &[Rational],
) -> Result<SetFunction, SetFunctionError> {
    if !h.is_homogeneous() {
        return Err(SetFunctionError::NotHomogeneous);
    }
    if e.len() != h.nvars() {
        return Err(SetFunctionError::DimensionMismatch {
            got: e.len(),
            want: h.nvars(),
        });
    }
    if h.eval(e).is_zero() {
        return Err(SetFunctionError::VanishingLine);
    }
    let n = h.nvars();
    let mut values = Vec::with_capacity(1 << n);
    for s in 0..(1u32 << n) {
        let v: Vec<Rational> = (0..n)
            .map(|i| {
                if s & (1 << i) != 0 {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            })
            .collect();
        values.push(hyperbolic_rank(h, e, &v)? as i64);
    }
    SetFunction::new(n, values)
}

/// `{1,3}` style rendering with 1-based elements.
pub fn format_subset(s: u32) -> String {
    let elems: Vec<String> = (0..32)
        .filter(|i| s & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, rational};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma23() -> Polynomial {
        parse_polynomial("x1*x2+x1*x3+x2*x3", &["x1", "x2", "x3"]).unwrap()
    }

    #[test]
    fn uniform_matroid_is_polymatroid() {
        let r = SetFunction::uniform_matroid(2, 4);
        assert!(r.is_polymatroid().is_polymatroid());
        assert!(r.is_matroid());
    }

    #[test]
    fn nonzero_empty_value_fails_normalization() {
        let f = SetFunction::new(1, vec![1, 1]).unwrap();
        let rep = f.is_polymatroid();
        assert!(!rep.is_normalized);
        assert_eq!(rep.violating_pair, Some((0, 0)));
    }

    #[test]
    fn squared_cardinality_is_not_submodular() {
        let f = SetFunction::from_fn(2, |s| (s.count_ones() as i64).pow(2)).unwrap();
        // oracle: f({1,2}) + f(empty) = 4 > f({1}) + f({2}) = 2
        assert!(f.get(3) + f.get(0) > f.get(1) + f.get(2));
        let rep = f.is_polymatroid();
        assert!(rep.is_monotone && !rep.is_submodular);
        assert_eq!(rep.violating_pair, Some((0b01, 0b10)));
    }

    #[test]
    fn rho_of_sigma() {
        let rho = rho_from_support(&sigma23().support()).unwrap();
        assert_eq!(rho.get(0b001), 1);
        assert_eq!(rho.get(0b011), 2);
        assert_eq!(rho.get(0b111), 2);
    }

    #[test]
    fn rho_of_single_monomial() {
        let supp: BTreeSet<_> = [ExponentVector::new(vec![3, 0, 0])].into();
        let rho = rho_from_support(&supp).unwrap();
        for s in 0..8u32 {
            assert_eq!(rho.get(s), if s & 1 != 0 { 3 } else { 0 });
        }
    }

    #[test]
    fn rho_of_uniform_bases_is_uniform_rank() {
        let mut supp = BTreeSet::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let mut e = vec![0; 4];
                e[i] = 1;
                e[j] = 1;
                supp.insert(ExponentVector::new(e));
            }
        }
        assert_eq!(rho_from_support(&supp).unwrap(), SetFunction::uniform_matroid(2, 4));
    }

    #[test]
    fn rho_rejects_bad_supports() {
        assert_eq!(rho_from_support(&BTreeSet::new()), Err(SetFunctionError::EmptySupport));
        let supp: BTreeSet<_> =
            [ExponentVector::new(vec![1, 0]), ExponentVector::new(vec![1, 1])].into();
        assert_eq!(rho_from_support(&supp), Err(SetFunctionError::InhomogeneousSupport));
    }

    #[test]
    fn truncations_of_uniform() {
        let r = SetFunction::uniform_matroid(2, 4);
        assert_eq!(r.truncate(1).unwrap(), SetFunction::uniform_matroid(1, 4));
        assert_eq!(r.truncate(0).unwrap(), r);
        assert_eq!(r.truncate(2).unwrap(), SetFunction::zero(4));
        assert!(r.truncate(3).is_err());
        assert!(r.truncate(-1).is_err());
    }

    #[test]
    fn bar_of_uniform() {
        let rb = SetFunction::uniform_matroid(2, 4).bar();
        assert_eq!(rb.get(0b0001), 2);
        assert_eq!(rb.get(0b0011), 3);
        assert_eq!(rb.rank(), 3);
        assert_eq!(SetFunction::zero(3).bar(), SetFunction::zero(3));
    }

    #[test]
    fn bar_from_one_for_sigma33() {
        let s33 = parse_polynomial("x1*x2*x3", &["x1", "x2", "x3"]).unwrap();
        let rho = rho_from_support(&s33.support()).unwrap();
        assert_eq!(rho.bar_from(1).rank(), 3);
    }

    #[test]
    fn inseparability_examples() {
        let r = SetFunction::uniform_matroid(2, 4);
        assert!(r.is_inseparable(0b0001));
        assert!(r.bar().is_inseparable(0b0011));
        let with_loop = SetFunction::matroid_from_bases(3, &[vec![0], vec![1]]).unwrap();
        assert_eq!(with_loop.loops(), vec![2]);
        assert!(!with_loop.is_inseparable(0b101));
    }

    #[test]
    fn simplicity_conditions_examples() {
        let r = SetFunction::uniform_matroid(2, 4);
        assert!(r.bar().check_simplicity_conditions().unwrap().holds());
        assert!(!r.check_simplicity_conditions().unwrap().holds());
        let r1 = SetFunction::uniform_matroid(1, 3);
        assert!(r1.check_simplicity_conditions().unwrap().holds());
        assert!(SetFunction::zero(9).check_simplicity_conditions().is_err());
    }

    #[test]
    fn partitions_are_bell_numbered() {
        let mut count = 0;
        for_each_set_partition(&[0, 1, 2, 3], &mut |_| count += 1);
        assert_eq!(count, 15);
    }

    #[test]
    fn hyperbolic_rank_examples() {
        let ones = vec![rational(1); 3];
        let e1 = vec![rational(1), rational(0), rational(0)];
        assert_eq!(hyperbolic_rank(&sigma23(), &ones, &e1).unwrap(), 1);
        assert_eq!(hyperbolic_rank(&sigma23(), &ones, &ones).unwrap(), 2);
        assert_eq!(hyperbolic_rank(&sigma23(), &ones, &vec![rational(0); 3]).unwrap(), 0);
        let zero_pt = vec![rational(0); 3];
        assert_eq!(
            hyperbolic_rank(&sigma23(), &zero_pt, &zero_pt),
            Err(SetFunctionError::VanishingLine)
        );
    }

    #[test]
    fn hyperbolic_polymatroid_matches_rho() {
        let ones = vec![rational(1); 3];
        let from_h = polymatroid_from_hyperbolic(&sigma23(), &ones).unwrap();
        assert_eq!(from_h, rho_from_support(&sigma23().support()).unwrap());
        let mono = parse_polynomial("x1^3", &["x1", "x2"]).unwrap();
        let f = polymatroid_from_hyperbolic(&mono, &[rational(1), rational(1)]).unwrap();
        assert_eq!(f.values(), &[0, 3, 0, 3]);
    }

    #[test]
    fn json_shape() {
        let r = SetFunction::uniform_matroid(1, 2);
        assert_eq!(r.to_json(), serde_json::json!({"n": 2, "values": [0, 1, 1, 1]}));
        let back: SetFunction = serde_json::from_value(r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(serde_json::from_str::<SetFunction>(r#"{"n":2,"values":[0,1]}"#).is_err());
    }

    #[test]
    fn random_polymatroid_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = 2 + (rand::Rng::gen_range(&mut rng, 0..4));
            let r = sample::random_polymatroid(&mut rng, n, 4);
            let r2 = sample::random_polymatroid(&mut rng, n, 4);
            assert!(r.is_polymatroid().is_polymatroid());
            assert!(r.add(&r2).is_polymatroid().is_polymatroid());
            for k in 0..=r.rank() {
                assert!(r.truncate(k).unwrap().is_polymatroid().is_polymatroid());
            }
            let rb = r.bar();
            let sum = r.add(&r2);
            let loops = r.loops();
            for s in 0..(1u32 << n) {
                // inseparability passes to sums
                if r.is_inseparable(s) {
                    assert!(sum.is_inseparable(s));
                }
                if s.count_ones() >= 2 {
                    let has_loop = loops.iter().any(|&l| s & (1 << l) != 0);
                    assert_eq!(rb.is_inseparable(s), !has_loop);
                }
            }
            assert!(rb.check_simplicity_conditions().unwrap().holds());
        }
    }
}
