//! Concrete weight families: geometric and log-series weights with their
//! closed forms, and seeded random log-concave / log-convex sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hiprec::{self, working_scale, Enclosure, HighPrecisionValue, SignConfidence};
use crate::rational::{self, serde_rat, serde_rat_vec};
use crate::seqcore::{TruncationOrder, WeightSeq};
use crate::sympoly::{Alphabet, IdentityCheck, MultiPoly};
use crate::{Error, Result};

/// Smallest precision accepted for log-series checks.
pub const MIN_LOGSERIES_DIGITS: u32 = 50;

fn check_probability(p: &BigRational) -> Result<()> {
    if !p.is_positive() || *p >= BigRational::one() {
        return Err(Error::invalid(format!("p must lie in (0, 1), got {}", rational::format(p))));
    }
    Ok(())
}

/// `c_k = p (1-p)^{k-1}` for `k = 1..K`.
pub fn geometric_weights(p: &BigRational, k: TruncationOrder) -> Result<WeightSeq> {
    check_probability(p)?;
    let q = BigRational::one() - p;
    WeightSeq::new((0..k.get()).map(|i| p * rational::pow(&q, i)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricReport {
    #[serde(with = "serde_rat")]
    pub p: BigRational,
    pub weights: WeightSeq,
    /// `c_k^2 - c_{k-1} c_{k+1} = 0` for `2 <= k < K`.
    pub ratio_differences_vanish: bool,
    #[serde(with = "serde_rat")]
    pub c1sq_minus_c2: BigRational,
    /// `c_1^2 - c_2 == p (2p - 1)`.
    pub boundary_closed_form: bool,
}

pub fn geometric_report(p: &BigRational, k: TruncationOrder) -> Result<GeometricReport> {
    let weights = geometric_weights(p, k)?;
    let c = |i| weights.get(i);
    let ratio_differences_vanish = (2..k.get()).all(|i| (c(i) * c(i) - c(i - 1) * c(i + 1)).is_zero());
    let gap = c(1) * c(1) - c(2);
    let two = rational::int(2);
    Ok(GeometricReport {
        p: p.clone(),
        ratio_differences_vanish,
        boundary_closed_form: gap == p * (&two * p - BigRational::one()),
        c1sq_minus_c2: gap,
        weights,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoGeometricReport {
    #[serde(with = "serde_rat")]
    pub p: BigRational,
    #[serde(with = "serde_rat")]
    pub p2: BigRational,
    pub summed: WeightSeq,
    /// `C_k^2 - C_{k-1} C_{k+1}` for `k = 2..K-1`.
    #[serde(with = "serde_rat_vec")]
    pub differences: Vec<BigRational>,
    /// Every difference equals `-p p' ((1-p)(1-p'))^{k-2} (p - p')^2`.
    pub closed_form: bool,
    /// Every difference equals `-p p' (1-p)^{k-1} (1-p')^{k-1} (2-p-p')^2`.
    pub alternative_form: bool,
    /// `C_1^2 - C_2` with `C_0 = 1`.
    #[serde(with = "serde_rat")]
    pub c1sq_minus_c2: BigRational,
    /// `C_1^2 - C_2 == (p+p')(2(p+p') - 1) - 2 p p'`.
    pub boundary_closed_form: bool,
}

/// Summed weights of two geometric families.
pub fn two_geometric_report(p: &BigRational, p2: &BigRational, k: TruncationOrder) -> Result<TwoGeometricReport> {
    let w1 = geometric_weights(p, k)?;
    let w2 = geometric_weights(p2, k)?;
    let summed = WeightSeq::new((1..=k.get()).map(|i| w1.get(i) + w2.get(i)).collect())?;
    let c = |i| summed.get(i);
    let one = BigRational::one();
    let (q, q2) = (&one - p, &one - p2);
    let differences: Vec<BigRational> = (2..k.get()).map(|i| c(i) * c(i) - c(i - 1) * c(i + 1)).collect();
    let closed_form = differences.iter().enumerate().all(|(i, d)| {
        let kk = i + 2;
        *d == -(p * p2) * rational::pow(&(&q * &q2), kk - 2) * (p - p2) * (p - p2)
    });
    let alternative_form = differences.iter().enumerate().all(|(i, d)| {
        let kk = i + 2;
        let s = rational::int(2) - p - p2;
        *d == -(p * p2) * rational::pow(&q, kk - 1) * rational::pow(&q2, kk - 1) * &s * &s
    });
    let gap = c(1) * c(1) - c(2);
    let sum = p + p2;
    let boundary = &sum * (rational::int(2) * &sum - &one) - rational::int(2) * p * p2;
    Ok(TwoGeometricReport {
        p: p.clone(),
        p2: p2.clone(),
        differences,
        closed_form,
        alternative_form,
        boundary_closed_form: gap == boundary,
        c1sq_minus_c2: gap,
        summed,
    })
}

/// The geometric closed forms with `p`, `p'` as indeterminates, for
/// `k <= kmax`.
pub fn geometric_symbolic_checks(kmax: usize) -> Vec<IdentityCheck> {
    let alpha = Alphabet::new(vec!["p".into(), "q".into()]);
    let one = MultiPoly::one(&alpha);
    let p = MultiPoly::var(&alpha, 0);
    let p2 = MultiPoly::var(&alpha, 1);
    let weight = |x: &MultiPoly, k: usize| {
        if k == 0 {
            one.clone()
        } else {
            x * &(&one - x).pow(k as u32 - 1)
        }
    };
    let summed = |k: usize| if k == 0 { one.clone() } else { &weight(&p, k) + &weight(&p2, k) };
    let mut out = Vec::new();
    out.push(IdentityCheck::compare(
        "geometric_boundary",
        "k=1".into(),
        &(&weight(&p, 1).pow(2) - &weight(&p, 2)),
        &(&p * &(&p.scalar_mul_int(2) - &one)),
    ));
    let sum = &p + &p2;
    out.push(IdentityCheck::compare(
        "two_geometric_boundary",
        "k=1".into(),
        &(&summed(1).pow(2) - &summed(2)),
        &(&(&sum * &(&sum.scalar_mul_int(2) - &one)) - &(&p * &p2).scalar_mul_int(2)),
    ));
    for k in 2..=kmax {
        let zero = MultiPoly::zero(&alpha);
        out.push(IdentityCheck::compare(
            "geometric_ratio_difference",
            format!("k={k}"),
            &(&weight(&p, k).pow(2) - &(&weight(&p, k - 1) * &weight(&p, k + 1))),
            &zero,
        ));
        let lhs = &summed(k).pow(2) - &(&summed(k - 1) * &summed(k + 1));
        let rhs = &(&(&p * &p2) * &(&(&one - &p) * &(&one - &p2)).pow(k as u32 - 2)) * &(&p - &p2).pow(2);
        out.push(IdentityCheck::compare("two_geometric_ratio_difference", format!("k={k}"), &lhs, &rhs.neg()));
    }
    out
}

/// Log-series weights `c_k = p^k / (k |log(1-p)|)` as enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSeriesWeights {
    pub p: BigRational,
    pub digits: u32,
    /// Enclosure of `1 / |log(1-p)|`.
    pub inv_log: Enclosure,
    /// `c_1..c_K`.
    pub entries: Vec<Enclosure>,
}

impl LogSeriesWeights {
    pub fn values(&self) -> Vec<HighPrecisionValue> {
        self.entries.iter().map(|e| e.to_value(self.digits)).collect()
    }
}

pub fn logseries_weights(p: &BigRational, k: TruncationOrder, digits: u32) -> Result<LogSeriesWeights> {
    check_probability(p)?;
    if digits < MIN_LOGSERIES_DIGITS {
        return Err(Error::invalid(format!("need at least {MIN_LOGSERIES_DIGITS} digits, got {digits}")));
    }
    let scale = working_scale(digits);
    let neg_log = hiprec::ln(&(BigRational::one() - p), digits).neg();
    let inv_log = Enclosure::from_int(1, scale)
        .div(&neg_log)
        .ok_or_else(|| Error::Inconclusive { digits, context: "log(1-p) not separated from 0".into() })?;
    let entries = (1..=k.get())
        .map(|i| inv_log.mul_rational(&(rational::pow(p, i) / rational::int(i as i64))))
        .collect();
    Ok(LogSeriesWeights { p: p.clone(), digits, inv_log, entries })
}

/// `a` and `b` from interval weights via `n a_n = sum_l c_l a_{n-l}`.
pub fn expand_enclosures(c: &[Enclosure], scale: u32) -> (Vec<Enclosure>, Vec<Enclosure>) {
    let mut a = vec![Enclosure::from_int(1, scale)];
    for n in 1..=c.len() {
        let mut s = Enclosure::from_int(0, scale);
        for l in 1..=n {
            s = s.add(&c[l - 1].mul(&a[n - l]));
        }
        a.push(s.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(n))));
    }
    let mut fact = BigRational::one();
    let b = a
        .iter()
        .enumerate()
        .map(|(n, x)| {
            if n > 0 {
                fact *= rational::int(n as i64);
            }
            x.mul_rational(&fact)
        })
        .collect();
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogSeriesStatus {
    /// `c_1^2 < c_2`: every log-convexity conclusion was certified.
    ConvexConclusionsHold,
    /// `c_1^2 > c_2`: the convex half does not apply.
    ConvexHalfInapplicable,
    /// A certified sign contradicts a predicted conclusion.
    Contradiction,
    /// Some needed sign could not be certified at this precision.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSeriesReport {
    #[serde(with = "serde_rat")]
    pub p: BigRational,
    pub digits: u32,
    pub order: usize,
    pub weights: Vec<HighPrecisionValue>,
    /// Signs of `c_k^2 - c_{k-1} c_{k+1}`, `k = 2..K-1` (expected negative).
    pub weight_differences: Vec<SignConfidence>,
    pub c1sq_minus_c2: HighPrecisionValue,
    /// Interval of `p^2 (2 + log(1-p)) / (2 log^2(1-p))` overlaps the computed gap.
    pub gap_closed_form_agrees: bool,
    /// `2 + log(1-p)`: negative exactly when `p > 1 - e^{-2}`.
    pub threshold: HighPrecisionValue,
    /// Signs of `a_{k-1} a_{k+1} - a_k^2`, `k = 1..K-1`.
    pub a_differences: Vec<SignConfidence>,
    /// Signs of `k b_{k-1} b_{k+1} - (k+1) b_k^2`, `k = 1..K-1`.
    pub b_differences: Vec<SignConfidence>,
    pub status: LogSeriesStatus,
}

fn overlaps(x: &Enclosure, y: &Enclosure) -> bool {
    x.lower() <= y.upper() && y.lower() <= x.upper()
}

/// Weight shape, the boundary sign and, when the convex half applies, the
/// log-convexity conclusions for `a` and `b`, all as certified signs.
pub fn logseries_report(p: &BigRational, k: TruncationOrder, digits: u32) -> Result<LogSeriesReport> {
    let w = logseries_weights(p, k, digits)?;
    let scale = working_scale(digits);
    let c = &w.entries;
    let kk = k.get();
    let inv_sq = w.inv_log.mul(&w.inv_log);
    // c_k^2 - c_{k-1} c_{k+1} = p^{2k} / L^2 * (1/k^2 - 1/(k^2 - 1))
    let weight_differences: Vec<SignConfidence> = (2..kk)
        .map(|i| {
            let i2 = rational::int((i * i) as i64);
            let exact = rational::pow(p, 2 * i) * (BigRational::one() / &i2 - BigRational::one() / (&i2 - BigRational::one()));
            inv_sq.mul_rational(&exact).sign(digits)
        })
        .collect();
    let c1 = c[0].clone();
    let c2 = if kk >= 2 { c[1].clone() } else { Enclosure::from_int(0, scale) };
    let gap = c1.mul(&c1).sub(&c2);
    let log1p = hiprec::ln(&(BigRational::one() - p), digits);
    let threshold = Enclosure::from_int(2, scale).add(&log1p);
    let closed = threshold
        .mul(&inv_sq)
        .mul_rational(&(p * p / rational::int(2)));
    let gap_closed_form_agrees = overlaps(&gap, &closed);

    let (a, b) = expand_enclosures(c, scale);
    let a_differences: Vec<SignConfidence> = (1..kk)
        .map(|i| a[i - 1].mul(&a[i + 1]).sub(&a[i].mul(&a[i])).sign(digits))
        .collect();
    let b_differences: Vec<SignConfidence> = (1..kk)
        .map(|i| {
            b[i - 1]
                .mul(&b[i + 1])
                .mul_rational(&rational::int(i as i64))
                .sub(&b[i].mul(&b[i]).mul_rational(&rational::int(i as i64 + 1)))
                .sign(digits)
        })
        .collect();

    let gap_sign = gap.sign(digits);
    let positive = |s: &SignConfidence| *s == SignConfidence::ExactSign(1);
    let negative = |s: &SignConfidence| *s == SignConfidence::ExactSign(-1);
    let inconclusive = |s: &SignConfidence| !s.is_conclusive();
    let status = if !gap_sign.is_conclusive() || weight_differences.iter().any(inconclusive) {
        LogSeriesStatus::Inconclusive
    } else if !weight_differences.iter().all(negative) {
        LogSeriesStatus::Contradiction
    } else if gap_sign == SignConfidence::ExactSign(1) {
        LogSeriesStatus::ConvexHalfInapplicable
    } else if a_differences.iter().chain(&b_differences).any(negative) {
        LogSeriesStatus::Contradiction
    } else if a_differences.iter().chain(&b_differences).all(positive) {
        LogSeriesStatus::ConvexConclusionsHold
    } else {
        LogSeriesStatus::Inconclusive
    };
    Ok(LogSeriesReport {
        p: p.clone(),
        digits,
        order: kk,
        weights: w.values(),
        weight_differences,
        c1sq_minus_c2: gap.to_value(digits),
        gap_closed_form_agrees,
        threshold: threshold.to_value(digits),
        a_differences,
        b_differences,
        status,
    })
}

/// `sum_i c_{i,2} - (sum_i c_{i,1})^2` for several log-series families.
pub fn logseries_condition(ps: &[BigRational], digits: u32) -> Result<HighPrecisionValue> {
    if ps.is_empty() {
        return Err(Error::invalid("need at least one family"));
    }
    let order = TruncationOrder::new(2)?;
    let scale = working_scale(digits);
    let mut c1 = Enclosure::from_int(0, scale);
    let mut c2 = Enclosure::from_int(0, scale);
    for p in ps {
        let w = logseries_weights(p, order, digits)?;
        c1 = c1.add(&w.entries[0]);
        c2 = c2.add(&w.entries[1]);
    }
    Ok(c2.sub(&c1.mul(&c1)).to_value(digits))
}

/// Sign of `p - (1 - e^{-t})`.
pub fn compare_with_threshold(p: &BigRational, t: &BigRational, digits: u32) -> SignConfidence {
    let scale = working_scale(digits);
    let e = hiprec::exp(&-t.clone(), digits);
    Enclosure::from_rational(p, scale)
        .sub(&Enclosure::from_int(1, scale))
        .add(&e)
        .sign(digits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Concave,
    Convex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// `c_1^2 > c_2`.
    C1sqGeC2,
    /// `c_1^2 < c_2`.
    C1sqLeC2,
}

/// Seeded random weights with monotone ratios `c_{k+1} / c_k` (nonincreasing
/// for concave, nondecreasing for convex). The overall scale is
/// `c_1 = t (c_2 / c_1)` with `t > 1` or `t < 1`, which fixes the sign of
/// `c_1^2 - c_2` strictly without touching the shape.
pub fn random_logshape(seed: u64, k: TruncationOrder, shape: Shape, boundary: Boundary) -> WeightSeq {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frac = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let mut ratio = {
        let d = rng.gen_range(1..=6);
        frac(rng.gen_range(d..=4 * d), 2 * d)
    };
    let first_ratio = ratio.clone();
    let mut ratios = Vec::with_capacity(k.get());
    for _ in 1..k.get() {
        ratios.push(ratio.clone());
        let d = rng.gen_range(1..=8);
        let step = match shape {
            Shape::Concave => frac(rng.gen_range((d + 1) / 2..=d), d),
            Shape::Convex => frac(rng.gen_range(d..=2 * d), d),
        };
        ratio *= step;
    }
    let t = match boundary {
        Boundary::C1sqGeC2 => frac(8 + rng.gen_range(1..=8), 8),
        Boundary::C1sqLeC2 => frac(rng.gen_range(1..=8), 9),
    };
    let mut c = vec![first_ratio * t];
    for r in ratios {
        let next = c.last().unwrap() * r;
        c.push(next);
    }
    WeightSeq::new(c).expect("positive by construction")
}
