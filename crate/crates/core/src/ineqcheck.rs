//! Exact sign reports for log-concavity, log-convexity and the refined
//! two-sided ratio bounds on `a` and `b`.
//!
//! Every check is written in cross-multiplied form so that each difference
//! `d_k` must be nonnegative (or, for the strict step checks, positive).
//! Nothing is divided, so zero entries are harmless.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{serde_rat, serde_rat_vec};
use crate::seqcore::{expand_a, TruncationOrder, WeightSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `d_k = s_k^2 - s_{k-1} s_{k+1}`, shape classification.
    LogConcavity,
    /// `a_k^2 - a_{k-1} a_{k+1} >= 0`
    ALogConcave,
    /// `(k+1) a_{k-1} a_{k+1} - k a_k^2 >= 0`
    ARatioUpper,
    /// `a_{k-1} a_{k+1} - a_k^2 >= 0`
    ALogConvex,
    /// `b_{k-1} b_{k+1} - b_k^2 >= 0`
    BLogConvex,
    /// `(k+1) b_k^2 - k b_{k-1} b_{k+1} >= 0`
    BRatioLower,
    /// `k b_{k-1} b_{k+1} - (k+1) b_k^2 >= 0`
    BRatioUpper,
    /// `r_0 Q_m - Q_{m+1} > 0`
    HansenConcaveStep,
    /// `r_{m+2} Q_{m+2} - r_{m+1} Q_{m+3} > 0`
    HansenConvexStep,
}

impl InequalityId {
    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::LogConcavity => "log_concavity",
            InequalityId::ALogConcave => "a_log_concave",
            InequalityId::ARatioUpper => "a_ratio_upper",
            InequalityId::ALogConvex => "a_log_convex",
            InequalityId::BLogConvex => "b_log_convex",
            InequalityId::BRatioLower => "b_ratio_lower",
            InequalityId::BRatioUpper => "b_ratio_upper",
            InequalityId::HansenConcaveStep => "hansen_concave_step",
            InequalityId::HansenConvexStep => "hansen_convex_step",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            InequalityId::LogConcavity => "s_k^2 - s_{k-1}s_{k+1}",
            InequalityId::ALogConcave => "a_{k-1}a_{k+1} <= a_k^2",
            InequalityId::ARatioUpper => "a_k^2 <= (k+1)/k a_{k-1}a_{k+1}",
            InequalityId::ALogConvex => "a_{k-1}a_{k+1} >= a_k^2",
            InequalityId::BLogConvex => "b_{k-1}b_{k+1} >= b_k^2",
            InequalityId::BRatioLower => "b_k^2 >= k/(k+1) b_{k-1}b_{k+1}",
            InequalityId::BRatioUpper => "b_k^2 <= k/(k+1) b_{k-1}b_{k+1}",
            InequalityId::HansenConcaveStep => "r_0 Q_m - Q_{m+1} > 0",
            InequalityId::HansenConvexStep => "r_{m+2}Q_{m+2} - r_{m+1}Q_{m+3} > 0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LogConcave,
    LogConvex,
    Both,
    Neither,
    Holds,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    pub inequality_id: InequalityId,
    pub verdict: Verdict,
    pub first_violation: Option<usize>,
    /// Index `k` of `differences[0]`.
    pub start_index: usize,
    #[serde(with = "serde_rat_vec")]
    pub differences: Vec<BigRational>,
    /// Fewer than three terms: nothing to compare.
    pub vacuous: bool,
}

impl SignReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, Verdict::Holds)
    }

    /// `(k, d_k)` pairs.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.differences.iter().enumerate().map(move |(i, d)| (self.start_index + i, d))
    }

    fn requirement(id: InequalityId, start_index: usize, differences: Vec<BigRational>, strict: bool) -> Self {
        let bad = |d: &BigRational| if strict { !d.is_positive() } else { d.is_negative() };
        let first_violation = differences.iter().position(bad).map(|i| i + start_index);
        SignReport {
            inequality_id: id,
            verdict: if first_violation.is_some() { Verdict::Violated } else { Verdict::Holds },
            first_violation,
            start_index,
            vacuous: differences.is_empty(),
            differences,
        }
    }
}

fn k_rat(k: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Shape of `s` from `d_k = s_k^2 - s_{k-1} s_{k+1}`; `first_index` is the
/// index of `s[0]` (0 for `a`, `b`, `P`; 1 for `c`).
pub fn logconcavity_report(s: &[BigRational], first_index: usize) -> SignReport {
    let differences: Vec<BigRational> = (1..s.len().saturating_sub(1))
        .map(|i| &s[i] * &s[i] - &s[i - 1] * &s[i + 1])
        .collect();
    let any_neg = differences.iter().any(|d| d.is_negative());
    let any_pos = differences.iter().any(|d| d.is_positive());
    let (verdict, first_violation) = match (any_pos, any_neg) {
        (false, false) => (Verdict::Both, None),
        (true, false) => (Verdict::LogConcave, None),
        (false, true) => (Verdict::LogConvex, None),
        (true, true) => {
            // report where the minority sign first appears
            let first_neg = differences.iter().position(|d| d.is_negative()).unwrap();
            let first_pos = differences.iter().position(|d| d.is_positive()).unwrap();
            (Verdict::Neither, Some(first_neg.max(first_pos) + first_index + 1))
        }
    };
    SignReport {
        inequality_id: InequalityId::LogConcavity,
        verdict,
        first_violation,
        start_index: first_index + 1,
        vacuous: differences.is_empty(),
        differences,
    }
}

pub fn is_log_concave(s: &[BigRational]) -> bool {
    matches!(logconcavity_report(s, 0).verdict, Verdict::LogConcave | Verdict::Both)
}

pub fn is_log_convex(s: &[BigRational]) -> bool {
    matches!(logconcavity_report(s, 0).verdict, Verdict::LogConvex | Verdict::Both)
}

fn interior<F>(s: &[BigRational], id: InequalityId, f: F) -> SignReport
where
    F: Fn(usize, &BigRational, &BigRational, &BigRational) -> BigRational,
{
    let d = (1..s.len().saturating_sub(1))
        .map(|k| f(k, &s[k - 1], &s[k], &s[k + 1]))
        .collect();
    SignReport::requirement(id, 1, d, false)
}

/// Both sides of `a_{k-1}a_{k+1} <= a_k^2 <= (k+1)/k a_{k-1}a_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSided {
    pub lower: SignReport,
    pub upper: SignReport,
}

impl TwoSided {
    pub fn holds(&self) -> bool {
        self.lower.holds() && self.upper.holds()
    }
}

/// `a` indexed from 0.
pub fn refined_bounds_a(a: &[BigRational]) -> TwoSided {
    TwoSided {
        lower: interior(a, InequalityId::ALogConcave, |_, p, x, n| x * x - p * n),
        upper: interior(a, InequalityId::ARatioUpper, |k, p, x, n| {
            k_rat(k + 1) * p * n - k_rat(k) * x * x
        }),
    }
}

pub fn a_log_convex(a: &[BigRational]) -> SignReport {
    interior(a, InequalityId::ALogConvex, |_, p, x, n| p * n - x * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BMode {
    Concave,
    Convex,
}

/// Concave mode: `b_{k-1}b_{k+1} >= b_k^2 >= k/(k+1) b_{k-1}b_{k+1}`
/// (`lower` holds the left part, `upper` the right).
/// Convex mode: `b_k^2 <= k/(k+1) b_{k-1}b_{k+1}` in both slots.
pub fn refined_bounds_b(b: &[BigRational], mode: BMode) -> TwoSided {
    match mode {
        BMode::Concave => TwoSided {
            lower: interior(b, InequalityId::BLogConvex, |_, p, x, n| p * n - x * x),
            upper: interior(b, InequalityId::BRatioLower, |k, p, x, n| {
                k_rat(k + 1) * x * x - k_rat(k) * p * n
            }),
        },
        BMode::Convex => {
            let r = b_ratio_upper(b);
            TwoSided { lower: r.clone(), upper: r }
        }
    }
}

pub fn b_ratio_upper(b: &[BigRational]) -> SignReport {
    interior(b, InequalityId::BRatioUpper, |k, p, x, n| k_rat(k) * p * n - k_rat(k + 1) * x * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    HoldsEverywhere,
    /// The inequality must fail at `k = 1`.
    FailsAtOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedCheck {
    pub expectation: Expectation,
    pub report: SignReport,
    pub met: bool,
}

impl ExpectedCheck {
    fn new(expectation: Expectation, report: SignReport) -> Self {
        let met = match expectation {
            Expectation::HoldsEverywhere => report.holds(),
            Expectation::FailsAtOne => report.first_violation == Some(1),
        };
        ExpectedCheck { expectation, report, met }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem1Status {
    /// Every predicted conclusion was observed.
    Consistent,
    /// Some prediction failed; the offending report carries the witness.
    Contradiction,
    /// Weights are neither log-concave nor log-convex.
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Verdict {
    pub order: usize,
    pub weight_shape: Verdict,
    #[serde(with = "serde_rat")]
    pub c1sq_minus_c2: BigRational,
    pub checks: Vec<ExpectedCheck>,
    /// `b_0 b_2 - 2 b_1^2 == c_2 - c_1^2`, the exact form of the `k = 1`
    /// boundary behind the "only if" statements.
    pub boundary_identity: bool,
    pub status: Theorem1Status,
}

/// Classifies `c_1..c_K` and checks every conclusion the hypotheses predict
/// for `a_0..a_K` and `b_0..b_K`.
///
/// Log-concave weights with `c_1^2 >= c_2` must satisfy both refined bounds;
/// with `c_1^2 < c_2` the lower bound must break at `k = 1`. Log-convex
/// weights satisfy the convex bounds exactly when `c_1^2 <= c_2`, and
/// otherwise break them at `k = 1`.
pub fn theorem1_verdict(c: &WeightSeq, k: TruncationOrder) -> Theorem1Verdict {
    let prefix = c.prefix(k);
    let shape = logconcavity_report(&prefix, 1).verdict;
    let c1 = c.get(1);
    let c2 = c.get(2);
    let gap = &c1 * &c1 - &c2;
    let e = expand_a(c, k);

    let boundary_identity = if e.b.len() >= 3 {
        &e.b[0] * &e.b[2] - k_rat(2) * &e.b[1] * &e.b[1] == &c2 - &c1 * &c1
    } else {
        true
    };

    let concave = matches!(shape, Verdict::LogConcave | Verdict::Both);
    let convex = matches!(shape, Verdict::LogConvex | Verdict::Both);
    let mut checks = Vec::new();
    if concave {
        let ra = refined_bounds_a(&e.a);
        let rb = refined_bounds_b(&e.b, BMode::Concave);
        if !gap.is_negative() {
            for r in [ra.lower, ra.upper, rb.lower, rb.upper] {
                checks.push(ExpectedCheck::new(Expectation::HoldsEverywhere, r));
            }
        } else if e.a.len() >= 3 {
            checks.push(ExpectedCheck::new(Expectation::FailsAtOne, ra.lower));
            checks.push(ExpectedCheck::new(Expectation::FailsAtOne, rb.upper));
        }
    }
    if convex {
        let ea = if gap.is_positive() { Expectation::FailsAtOne } else { Expectation::HoldsEverywhere };
        if e.a.len() >= 3 || ea == Expectation::HoldsEverywhere {
            checks.push(ExpectedCheck::new(ea, a_log_convex(&e.a)));
            checks.push(ExpectedCheck::new(ea, b_ratio_upper(&e.b)));
        }
    }

    let status = if !concave && !convex {
        Theorem1Status::Inapplicable
    } else if checks.iter().all(|c| c.met) && boundary_identity {
        Theorem1Status::Consistent
    } else {
        Theorem1Status::Contradiction
    };
    Theorem1Verdict {
        order: k.get(),
        weight_shape: shape,
        c1sq_minus_c2: gap,
        checks,
        boundary_identity,
        status,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HansenPart {
    /// Strictly log-concave `Q` forces `r_0 Q_m > Q_{m+1}`.
    Concave,
    /// Strictly log-convex `r` with `r_0^2 < r_1` forces
    /// `r_{m+2} Q_{m+2} > r_{m+1} Q_{m+3}`.
    Convex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HansenStrict {
    Checked { report: SignReport },
    HypothesisNotMet { reason: String },
}

fn strictly_concave_at(s: &[BigRational], n: usize) -> bool {
    (&s[n] * &s[n] - &s[n - 1] * &s[n + 1]).is_positive()
}

fn strictly_convex_at(s: &[BigRational], n: usize) -> bool {
    (&s[n] * &s[n] - &s[n - 1] * &s[n + 1]).is_negative()
}

/// Strict step inequalities along `Q` and `r` tied by
/// `(n+1) Q_{n+1} = sum_k r_k Q_{n-k}`.
pub fn hansen_strict_checks(q: &[BigRational], r: &[BigRational], part: HansenPart) -> HansenStrict {
    if q.first().is_none_or(|q0| !q0.is_positive()) {
        return HansenStrict::HypothesisNotMet { reason: "Q_0 must be positive".into() };
    }
    match part {
        HansenPart::Concave => {
            // m runs while Q stays strictly log-concave on 1..=m
            let r0 = match r.first() {
                Some(x) => x,
                None => return HansenStrict::HypothesisNotMet { reason: "r is empty".into() },
            };
            let mut d = Vec::new();
            let mut m = 1;
            while m + 1 < q.len() && strictly_concave_at(q, m) {
                d.push(r0 * &q[m] - &q[m + 1]);
                m += 1;
            }
            if d.is_empty() {
                return HansenStrict::HypothesisNotMet {
                    reason: "Q is not strictly log-concave at n = 1".into(),
                };
            }
            HansenStrict::Checked {
                report: SignReport::requirement(InequalityId::HansenConcaveStep, 1, d, true),
            }
        }
        HansenPart::Convex => {
            if r.len() < 3 {
                return HansenStrict::HypothesisNotMet { reason: "need r_0..r_2".into() };
            }
            if let Some(n) = (1..r.len() - 1).find(|&n| !strictly_convex_at(r, n)) {
                return HansenStrict::HypothesisNotMet {
                    reason: format!("r is not strictly log-convex at k = {n}"),
                };
            }
            if !(&r[0] * &r[0] - &r[1]).is_negative() {
                return HansenStrict::HypothesisNotMet { reason: "r_0^2 - r_1 is not negative".into() };
            }
            let d: Vec<BigRational> = (0..)
                .take_while(|m| m + 2 < r.len() && m + 3 < q.len())
                .map(|m| &r[m + 2] * &q[m + 2] - &r[m + 1] * &q[m + 3])
                .collect();
            HansenStrict::Checked {
                report: SignReport::requirement(InequalityId::HansenConvexStep, 0, d, true),
            }
        }
    }
}

/// `true` when `d` is exactly zero everywhere.
pub fn all_zero(report: &SignReport) -> bool {
    report.differences.iter().all(Zero::is_zero)
}
