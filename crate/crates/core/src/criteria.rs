//! Identifiability and rank certificates that only need Hilbert-function and
//! Kruskal-rank computations on the decomposition itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CriteriaError;
use crate::points::PointSet;
use crate::poly::{binomial, monomial_values};

/// A form `T = sum λ_i v_d(P_i)` given by its decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    points: PointSet,
    degree: u32,
    lambda: Vec<u64>,
}

impl Instance {
    pub fn new(points: PointSet, degree: u32, lambda: Vec<u64>) -> Result<Self, CriteriaError> {
        if lambda.len() != points.len() {
            return Err(CriteriaError::LambdaLength {
                got: lambda.len(),
                expected: points.len(),
            });
        }
        let p = points.field().modulus();
        let lambda = lambda.into_iter().map(|v| v % p).collect();
        Ok(Instance {
            points,
            degree,
            lambda,
        })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn lambda(&self) -> &[u64] {
        &self.lambda
    }

    pub fn rank_len(&self) -> usize {
        self.points.len()
    }

    /// Coefficient vector of `T` in the degree-d monomial basis:
    /// `p = sum λ_i * veronese_vector(P_i, d)`.
    pub fn tensor(&self) -> Vec<u64> {
        let f = self.points.field();
        let mut p = vec![0; crate::poly::monomial_count(self.points.n() + 1, self.degree)];
        for (pt, &l) in self.points.points().iter().zip(&self.lambda) {
            for (acc, v) in p.iter_mut().zip(monomial_values(f, pt, self.degree)) {
                *acc = f.mul_add(*acc, l, v);
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EvidenceValue {
    Int(i64),
    Bool(bool),
    Text(String),
}

/// One computed quantity backing a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub value: EvidenceValue,
}

/// Parameter vector certifying a second decomposition, together with the
/// dimension checks it passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub params: Vec<u64>,
    pub system_rank: usize,
    pub quintic_piece_dim: usize,
    pub octic_piece_dim: usize,
    pub sum_dim: usize,
    pub annihilated_generators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    IdentifiableOfRank { rank: usize },
    ComputesRank { rank: usize },
    NotIdentifiable { witness: Witness },
    Degenerate { reason: String },
    Inconclusive { reason: String },
}

impl Verdict {
    /// Identifiable, rank-certified or certified non-identifiable.
    pub fn is_decisive(&self) -> bool {
        matches!(
            self,
            Verdict::IdentifiableOfRank { .. }
                | Verdict::ComputesRank { .. }
                | Verdict::NotIdentifiable { .. }
        )
    }

    pub fn short(&self) -> String {
        match self {
            Verdict::IdentifiableOfRank { rank } => format!("IdentifiableOfRank({rank})"),
            Verdict::ComputesRank { rank } => format!("ComputesRank({rank})"),
            Verdict::NotIdentifiable { witness } => {
                format!("NotIdentifiable(system_rank={})", witness.system_rank)
            }
            Verdict::Degenerate { reason } => format!("Degenerate({reason})"),
            Verdict::Inconclusive { reason } => format!("Inconclusive({reason})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Range,
    Ranger,
    ReshapedKruskal,
    Mo,
    Octic14,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

impl Certificate {
    pub fn new(criterion: Criterion) -> Self {
        Certificate {
            criterion,
            verdict: Verdict::Inconclusive {
                reason: "not evaluated".into(),
            },
            evidence: Vec::new(),
        }
    }

    pub fn int(&mut self, label: impl Into<String>, value: impl TryInto<i64>) -> &mut Self {
        let value = value.try_into().ok().expect("evidence value fits in i64");
        self.evidence.push(Evidence {
            label: label.into(),
            value: EvidenceValue::Int(value),
        });
        self
    }

    pub fn flag(&mut self, label: impl Into<String>, value: bool) -> &mut Self {
        self.evidence.push(Evidence {
            label: label.into(),
            value: EvidenceValue::Bool(value),
        });
        self
    }

    pub fn text(&mut self, label: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.evidence.push(Evidence {
            label: label.into(),
            value: EvidenceValue::Text(value.into()),
        });
        self
    }

    pub fn get(&self, label: &str) -> Option<&EvidenceValue> {
        self.evidence.iter().find(|e| e.label == label).map(|e| &e.value)
    }

    pub fn get_int(&self, label: &str) -> Option<i64> {
        match self.get(label)? {
            EvidenceValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    fn conclude(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }
}

/// Rank of the degree-d evaluation matrix must equal ℓ(A), and no λ_i may
/// vanish; otherwise a proper subset already computes `T`.
pub(crate) fn check_non_redundant(inst: &Instance, cert: &mut Certificate) -> Result<(), CriteriaError> {
    let rank = inst.points.hilbert_value(inst.degree);
    let zeros = inst.lambda.iter().filter(|&&l| l == 0).count();
    cert.int(format!("h_A({})", inst.degree), rank)
        .int("lambda_zero_entries", zeros);
    if rank != inst.rank_len() {
        return Err(CriteriaError::RedundancyDetected(format!(
            "v_{}(A) spans dimension {rank} < {}",
            inst.degree,
            inst.rank_len()
        )));
    }
    if zeros > 0 {
        return Err(CriteriaError::RedundancyDetected(format!(
            "{zeros} coefficient(s) lambda_i vanish"
        )));
    }
    Ok(())
}

fn require_plane(inst: &Instance) -> Result<(), CriteriaError> {
    if inst.points.n() != 2 {
        return Err(CriteriaError::NotApplicable(format!(
            "points in P^2, got P^{}",
            inst.points.n()
        )));
    }
    Ok(())
}

/// Kruskal ranks keyed by degree, computed at most once per degree.
#[derive(Default)]
struct KruskalCache(BTreeMap<u32, usize>);

impl KruskalCache {
    fn get(&mut self, set: &PointSet, degree: u32) -> usize {
        *self
            .0
            .entry(degree)
            .or_insert_with(|| set.kruskal_rank(degree).rank)
    }
}

/// All splits `d1 >= d2 >= d3 >= 1` of `d`, largest `d1` first.
pub fn splits(degree: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for d1 in (1..=degree).rev() {
        for d2 in (1..=d1).rev() {
            if d1 + d2 >= degree {
                continue;
            }
            let d3 = degree - d1 - d2;
            if d3 <= d2 {
                out.push((d1, d2, d3));
            }
        }
    }
    out
}

/// Reshaped Kruskal criterion for one split:
/// `2ℓ(A) <= k_{d1}(A) + k_{d2}(A) + k_{d3}(A) - 2`.
pub fn reshaped_kruskal_certify(inst: &Instance, split: (u32, u32, u32)) -> Result<Certificate, CriteriaError> {
    let (d1, d2, d3) = split;
    if inst.degree < 3 || d1 + d2 + d3 != inst.degree || !(d1 >= d2 && d2 >= d3 && d3 >= 1) {
        return Err(CriteriaError::BadSplit(split));
    }
    let mut cert = Certificate::new(Criterion::ReshapedKruskal);
    check_non_redundant(inst, &mut cert)?;
    let mut cache = KruskalCache::default();
    Ok(kruskal_for_split(inst, split, &mut cache, cert))
}

fn kruskal_for_split(
    inst: &Instance,
    (d1, d2, d3): (u32, u32, u32),
    cache: &mut KruskalCache,
    mut cert: Certificate,
) -> Certificate {
    let l = inst.rank_len() as i64;
    let ks = [d1, d2, d3].map(|d| cache.get(&inst.points, d) as i64);
    cert.text("split", format!("({d1},{d2},{d3})"));
    for (d, k) in [d1, d2, d3].iter().zip(ks) {
        cert.int(format!("k_{d}(A)"), k);
    }
    let sum = ks.iter().sum::<i64>() - 2;
    cert.int("r", l)
        .int("kruskal_sum_minus_2", sum)
        .int("twice_length", 2 * l);
    if 2 * l <= sum {
        cert.conclude(Verdict::IdentifiableOfRank { rank: l as usize })
    } else {
        cert.conclude(Verdict::Inconclusive {
            reason: format!("2*{l} > {sum}"),
        })
    }
}

/// Tries every split and returns the first certificate that succeeds, or the
/// one with the largest bound when none does.
pub fn reshaped_kruskal_best(inst: &Instance) -> Result<Certificate, CriteriaError> {
    if inst.degree < 3 {
        return Err(CriteriaError::NotApplicable("degree >= 3".into()));
    }
    let mut base = Certificate::new(Criterion::ReshapedKruskal);
    check_non_redundant(inst, &mut base)?;
    let mut cache = KruskalCache::default();
    let mut best: Option<Certificate> = None;
    for split in splits(inst.degree) {
        let cert = kruskal_for_split(inst, split, &mut cache, base.clone());
        if matches!(cert.verdict, Verdict::IdentifiableOfRank { .. }) {
            return Ok(cert);
        }
        let better = match &best {
            None => true,
            Some(b) => cert.get_int("kruskal_sum_minus_2") > b.get_int("kruskal_sum_minus_2"),
        };
        if better {
            best = Some(cert);
        }
    }
    let mut cert = best.expect("degree >= 3 has at least one split");
    cert.int("splits_tried", splits(inst.degree).len());
    Ok(cert)
}

/// Sharp identifiability range for ternary forms.
///
/// `d = 2m`: `k_{m-1}(A) = min(binom(m+1,2), r)` and `h_A(m) = r <= binom(m+2,2) - 2`.
/// `d = 2m+1`: `k_m(A) = min(binom(m+2,2), r)` and `h_A(m+1) = r <= binom(m+2,2) + floor(m/2)`.
pub fn range_certify(inst: &Instance) -> Result<Certificate, CriteriaError> {
    require_plane(inst)?;
    let mut cert = Certificate::new(Criterion::Range);
    check_non_redundant(inst, &mut cert)?;
    let r = inst.rank_len() as u64;
    let d = inst.degree as u64;
    let m = d / 2;
    let (k_deg, k_target, h_deg, bound) = if d % 2 == 0 {
        if m == 0 {
            return Err(CriteriaError::NotApplicable("positive degree".into()));
        }
        (m - 1, binomial(m + 1, 2).min(r), m, (binomial(m + 2, 2)).saturating_sub(2))
    } else {
        (m, binomial(m + 2, 2).min(r), m + 1, binomial(m + 2, 2) + m / 2)
    };
    Ok(hilbert_kruskal_verdict(
        inst,
        cert,
        Some((k_deg as u32, k_target)),
        h_deg as u32,
        bound,
        |rank| Verdict::IdentifiableOfRank { rank },
    ))
}

/// Rank certification for ternary forms.
///
/// `d = 2m`: `h_A(m) = r <= binom(m+2,2)`.
/// `d = 2m+1`: `k_m(A) = min(binom(m+2,2), r)` and `h_A(m+1) = r <= binom(m+2,2) + ceil(m/2)`.
pub fn ranger_certify(inst: &Instance) -> Result<Certificate, CriteriaError> {
    require_plane(inst)?;
    let mut cert = Certificate::new(Criterion::Ranger);
    check_non_redundant(inst, &mut cert)?;
    let r = inst.rank_len() as u64;
    let d = inst.degree as u64;
    let m = d / 2;
    let (kruskal, h_deg, bound) = if d % 2 == 0 {
        (None, m, binomial(m + 2, 2))
    } else {
        (
            Some((m as u32, binomial(m + 2, 2).min(r))),
            m + 1,
            binomial(m + 2, 2) + m.div_ceil(2),
        )
    };
    Ok(hilbert_kruskal_verdict(
        inst,
        cert,
        kruskal,
        h_deg as u32,
        bound,
        |rank| Verdict::ComputesRank { rank },
    ))
}

fn hilbert_kruskal_verdict(
    inst: &Instance,
    mut cert: Certificate,
    kruskal: Option<(u32, u64)>,
    h_deg: u32,
    bound: u64,
    success: impl FnOnce(usize) -> Verdict,
) -> Certificate {
    let r = inst.rank_len() as u64;
    cert.int("r", r).int("rank_bound", bound);
    let mut failures = Vec::new();
    if r > bound {
        failures.push(format!("r = {r} > {bound}"));
    }
    let h = inst.points.hilbert_value(h_deg) as u64;
    cert.int(format!("h_A({h_deg})"), h);
    if h != r {
        failures.push(format!("h_A({h_deg}) = {h} != {r}"));
    }
    if let Some((k_deg, target)) = kruskal {
        // skip the subset enumeration when the cheap tests already failed
        if failures.is_empty() {
            let k = inst.points.kruskal_rank(k_deg).rank as u64;
            cert.int(format!("k_{k_deg}(A)"), k)
                .int(format!("k_{k_deg}_target"), target);
            if k != target {
                failures.push(format!("k_{k_deg}(A) = {k} != {target}"));
            }
        }
    }
    if failures.is_empty() {
        cert.conclude(success(r as usize))
    } else {
        cert.conclude(Verdict::Inconclusive {
            reason: failures.join("; "),
        })
    }
}

/// Identifiability in `n + 1` variables when `h_A(m-1)` is close to `r`.
///
/// Requires `h_A(1) = min(n+1, r)`; then `d = 2m` needs
/// `h_A(m-1) >= r - min((n-1)/2, (m-1)/2)`, and `d = 2m+1` additionally
/// needs `k_m(A) = r`. The bound is compared exactly after doubling.
pub fn mo_certify(inst: &Instance) -> Result<Certificate, CriteriaError> {
    let n = inst.points.n() as i64;
    if n < 2 || inst.degree < 3 {
        return Err(CriteriaError::NotApplicable("n >= 2 and degree >= 3".into()));
    }
    let mut cert = Certificate::new(Criterion::Mo);
    check_non_redundant(inst, &mut cert)?;
    let r = inst.rank_len() as i64;
    let h1 = inst.points.hilbert_value(1) as i64;
    cert.int("h_A(1)", h1);
    let concise = (n + 1).min(r);
    if h1 != concise {
        return Err(CriteriaError::NotConcise {
            h1: h1 as usize,
            expected: concise as usize,
        });
    }
    let d = inst.degree as i64;
    let m = d / 2;
    let h = inst.points.hilbert_value((m - 1) as u32) as i64;
    let slack_twice = (n - 1).min(m - 1);
    cert.int("r", r)
        .int(format!("h_A({})", m - 1), h)
        .int("twice_slack", slack_twice);
    let lhs = 2 * h;
    let rhs = 2 * r - slack_twice;
    cert.int("twice_h", lhs)
        .int("twice_r_minus_slack", rhs)
        .flag("mo_bound_tight", lhs == rhs);
    let mut failures = Vec::new();
    if lhs < rhs {
        failures.push(format!("2*h_A({}) = {lhs} < {rhs}", m - 1));
    }
    if d % 2 == 1 && failures.is_empty() {
        let k = inst.points.kruskal_rank(m as u32).rank as i64;
        cert.int(format!("k_{m}(A)"), k);
        if k != r {
            failures.push(format!("k_{m}(A) = {k} != {r}"));
        }
    }
    if failures.is_empty() {
        Ok(cert.conclude(Verdict::IdentifiableOfRank { rank: r as usize }))
    } else {
        Ok(cert.conclude(Verdict::Inconclusive {
            reason: failures.join("; "),
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn splits_of_small_degrees() {
        assert_eq!(splits(3), vec![(1, 1, 1)]);
        assert_eq!(splits(8), vec![(6, 1, 1), (5, 2, 1), (4, 3, 1), (4, 2, 2), (3, 3, 2)]);
        for d in 3..=12 {
            for (a, b, c) in splits(d) {
                assert!(a >= b && b >= c && c >= 1 && a + b + c == d);
            }
        }
    }

    // bounds written out by hand from the statements, for 3 <= d <= 12
    #[test]
    fn bound_arithmetic_matches_direct_evaluation() {
        let choose2 = |x: u64| x * (x - 1) / 2;
        for d in 3u64..=12 {
            let m = d / 2;
            if d % 2 == 0 {
                assert_eq!(binomial(m + 2, 2) - 2, choose2(m + 2) - 2);
                assert_eq!(binomial(m + 1, 2), choose2(m + 1));
            } else {
                let floor = (m as f64 / 2.0).floor() as u64;
                let ceil = (m as f64 / 2.0).ceil() as u64;
                assert_eq!(binomial(m + 2, 2) + m / 2, choose2(m + 2) + floor);
                assert_eq!(binomial(m + 2, 2) + m.div_ceil(2), choose2(m + 2) + ceil);
            }
        }
        // the degree-8 values quoted in the octic discussion
        assert_eq!(binomial(6, 2) - 2, 13);
        assert_eq!(binomial(6, 2), 15);
    }

    #[test]
    fn instance_rejects_wrong_lambda_length() {
        let f = PrimeField::default();
        let pts = PointSet::new(f, 2, vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            Instance::new(pts, 3, vec![1]),
            Err(CriteriaError::LambdaLength { got: 1, expected: 2 })
        );
    }

    #[test]
    fn bad_splits_are_rejected() {
        let f = PrimeField::default();
        let pts = PointSet::new(f, 2, vec![vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let inst = Instance::new(pts, 5, vec![1, 1]).unwrap();
        for split in [(2, 2, 2), (1, 2, 2), (5, 0, 0)] {
            assert_eq!(reshaped_kruskal_certify(&inst, split), Err(CriteriaError::BadSplit(split)));
        }
    }

    #[test]
    fn zero_lambda_is_redundant() {
        let f = PrimeField::default();
        let pts = PointSet::new(f, 2, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let inst = Instance::new(pts, 4, vec![1, 0, 2]).unwrap();
        assert!(matches!(range_certify(&inst), Err(CriteriaError::RedundancyDetected(_))));
        assert!(matches!(ranger_certify(&inst), Err(CriteriaError::RedundancyDetected(_))));
        assert!(matches!(mo_certify(&inst), Err(CriteriaError::RedundancyDetected(_))));
    }
}
