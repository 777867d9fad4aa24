//! Compound Poisson side of the exponential formula.
//!
//! A compound Poisson law with rate `lambda` and jump masses `f_k` has
//! `P_0 = exp(lambda (f_0 - 1))` and `(n+1) P_{n+1} = sum_k lambda (k+1) f_{k+1} P_{n-k}`.
//! `P_0` is transcendental for rational inputs, so we keep `Q_n = P_n / P_0`
//! exactly and carry the exponent `lambda (f_0 - 1)` alongside.
//! Setting `c_k = lambda k f_k` makes `Q` coincide with the cycle-index
//! coefficients `a` of `c`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::hiprec::{self, Enclosure};
use crate::rational::{self, serde_rat, serde_rat_vec};
use crate::seqcore::{TruncationOrder, WeightSeq};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CPModel {
    #[serde(with = "serde_rat")]
    lambda: BigRational,
    /// `f_0..f_K`
    #[serde(with = "serde_rat_vec")]
    f: Vec<BigRational>,
}

impl CPModel {
    pub fn new(lambda: BigRational, f: Vec<BigRational>) -> Result<Self> {
        if !lambda.is_positive() {
            return Err(Error::invalid("lambda must be positive"));
        }
        if f.is_empty() {
            return Err(Error::invalid("jump distribution needs f_0"));
        }
        if let Some(i) = f.iter().position(|x| x.is_negative()) {
            return Err(Error::invalid(format!("f_{i} is negative")));
        }
        let total: BigRational = f.iter().sum();
        if total > BigRational::one() {
            return Err(Error::invalid(format!(
                "jump masses sum to {} > 1",
                rational::format(&total)
            )));
        }
        Ok(CPModel { lambda, f })
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn f(&self) -> &[BigRational] {
        &self.f
    }

    fn f_at(&self, k: usize) -> BigRational {
        self.f.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `r_k = lambda (k+1) f_{k+1}` for `k < order`.
    pub fn r_sequence(&self, order: usize) -> Vec<BigRational> {
        (0..order)
            .map(|k| &self.lambda * BigRational::from_integer(BigInt::from(k + 1)) * self.f_at(k + 1))
            .collect()
    }
}

/// `Q_n = P_n / P_0` together with the exponent of `P_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedPmf {
    #[serde(with = "serde_rat_vec")]
    q: Vec<BigRational>,
    #[serde(rename = "lam_f0_minus_1", with = "serde_rat")]
    log_prefactor: BigRational,
}

impl NormalizedPmf {
    /// Normalizes an arbitrary mass vector by its zeroth entry. The prefactor
    /// exponent is unknown in this case and recorded as zero.
    pub fn from_masses(p: &[BigRational]) -> Result<Self> {
        let p0 = p.first().ok_or_else(|| Error::invalid("empty mass sequence"))?;
        if !p0.is_positive() {
            return Err(Error::invalid("P_0 must be positive"));
        }
        if let Some(i) = p.iter().position(|x| x.is_negative()) {
            return Err(Error::invalid(format!("P_{i} is negative")));
        }
        Ok(NormalizedPmf {
            q: p.iter().map(|x| x / p0).collect(),
            log_prefactor: BigRational::zero(),
        })
    }

    pub fn q(&self) -> &[BigRational] {
        &self.q
    }

    pub fn log_prefactor(&self) -> &BigRational {
        &self.log_prefactor
    }

    pub fn order(&self) -> usize {
        self.q.len() - 1
    }

    /// `P_0 = exp(log_prefactor)` as a rigorous enclosure.
    pub fn prefactor(&self, digits: u32) -> Enclosure {
        hiprec::exp(&self.log_prefactor, digits)
    }

    /// Serializable form with the prefactor rendered to `digits` decimals.
    pub fn to_report(&self, digits: u32) -> PmfReport {
        PmfReport {
            q: self.q.clone(),
            lam_f0_minus_1: self.log_prefactor.clone(),
            prefactor: self.prefactor(digits).to_decimal(digits),
            digits,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PmfReport {
    #[serde(with = "serde_rat_vec")]
    pub q: Vec<BigRational>,
    #[serde(with = "serde_rat")]
    pub lam_f0_minus_1: BigRational,
    pub prefactor: String,
    pub digits: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RSeq(#[serde(with = "serde_rat_vec")] pub Vec<BigRational>);

pub fn panjer(model: &CPModel, k: TruncationOrder) -> NormalizedPmf {
    let k = k.get();
    let r = model.r_sequence(k);
    let mut q = Vec::with_capacity(k + 1);
    q.push(BigRational::one());
    for n in 0..k {
        let mut acc = BigRational::zero();
        for (j, rj) in r.iter().enumerate().take(n + 1) {
            if !rj.is_zero() {
                acc += rj * &q[n - j];
            }
        }
        q.push(acc / BigRational::from_integer(BigInt::from(n + 1)));
    }
    let log_prefactor = model.lambda() * (model.f_at(0) - BigRational::one());
    NormalizedPmf { q, log_prefactor }
}

/// Inverts `(n+1) P_{n+1} = sum_{k<=n} r_k P_{n-k}` for `r_0..r_{K-1}`.
pub fn recover_r(p: &[BigRational]) -> Result<RSeq> {
    let p0 = p.first().ok_or_else(|| Error::invalid("empty mass sequence"))?;
    if p0.is_zero() {
        return Err(Error::invalid("P_0 = 0: r is undefined"));
    }
    let mut r: Vec<BigRational> = Vec::with_capacity(p.len().saturating_sub(1));
    for n in 0..p.len().saturating_sub(1) {
        let mut rest = BigRational::from_integer(BigInt::from(n + 1)) * &p[n + 1];
        for (k, rk) in r.iter().enumerate() {
            rest -= rk * &p[n - k];
        }
        r.push(rest / p0);
    }
    Ok(RSeq(r))
}

/// ID verdict from the first `K` recovered `r_k`; a positive verdict only
/// holds up to the truncation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IdVerdict {
    IdUpToOrder { order: usize },
    NotId { first_negative: usize },
}

pub fn is_infinitely_divisible(p: &[BigRational]) -> Result<IdVerdict> {
    let r = recover_r(p)?;
    Ok(match r.0.iter().position(|x| x.is_negative()) {
        Some(k) => IdVerdict::NotId { first_negative: k },
        None => IdVerdict::IdUpToOrder { order: r.0.len() },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lambda {
    Auto,
    Fixed(BigRational),
}

/// Embeds weights `c_1..c_K` as `f_k = c_k / (lambda k)`, `f_0 = 1 - sum f_k`.
///
/// `Auto` picks `lambda = 1 + sum_k c_k / k`; a fixed lambda must strictly
/// exceed that sum.
pub fn embed_c_as_cp(c: &WeightSeq, k: TruncationOrder, lambda: Lambda) -> Result<CPModel> {
    let weights = c.prefix(k);
    let mass: BigRational = weights
        .iter()
        .enumerate()
        .map(|(i, ci)| ci / BigRational::from_integer(BigInt::from(i + 1)))
        .sum();
    let lambda = match lambda {
        Lambda::Auto => BigRational::one() + &mass,
        Lambda::Fixed(l) => {
            if l <= mass {
                return Err(Error::invalid(format!(
                    "lambda = {} must exceed sum c_k/k = {}",
                    rational::format(&l),
                    rational::format(&mass)
                )));
            }
            l
        }
    };
    let mut f = Vec::with_capacity(weights.len() + 1);
    f.push(BigRational::zero());
    for (i, ci) in weights.iter().enumerate() {
        f.push(ci / (&lambda * BigRational::from_integer(BigInt::from(i + 1))));
    }
    let jumps: BigRational = f.iter().sum();
    f[0] = BigRational::one() - jumps;
    CPModel::new(lambda, f)
}

/// `c'_k = c_k u0^k`.
pub fn scale_normalize(c: &WeightSeq, u0: &BigRational) -> Result<WeightSeq> {
    if !u0.is_positive() {
        return Err(Error::invalid("u0 must be positive"));
    }
    let mut power = BigRational::one();
    let scaled = c
        .as_slice()
        .iter()
        .map(|ck| {
            power *= u0;
            ck * &power
        })
        .collect();
    WeightSeq::new(scaled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::seqcore::{expand_a, factorial};

    fn order(k: usize) -> TruncationOrder {
        TruncationOrder::new(k).unwrap()
    }

    #[test]
    fn poisson_case() {
        let m = CPModel::new(int(1), vec![int(0), int(1)]).unwrap();
        let pmf = panjer(&m, order(10));
        for n in 0..=10 {
            assert_eq!(pmf.q()[n], BigRational::new(1.into(), factorial(n)));
        }
        assert_eq!(*pmf.log_prefactor(), int(-1));
    }

    #[test]
    fn two_steps_by_hand() {
        let m = CPModel::new(int(2), vec![int(0), frac(1, 2), frac(1, 2)]).unwrap();
        let pmf = panjer(&m, order(2));
        assert_eq!(pmf.q()[1], int(1));
        assert_eq!(pmf.q()[2], frac(3, 2));
    }

    #[test]
    fn degenerate_at_zero() {
        let m = CPModel::new(int(5), vec![int(1), int(0), int(0)]).unwrap();
        let pmf = panjer(&m, order(6));
        assert!(pmf.q()[1..].iter().all(|x| x.is_zero()));
        assert!(pmf.log_prefactor().is_zero());
    }

    #[test]
    fn model_validation() {
        assert!(CPModel::new(int(0), vec![int(1)]).is_err());
        assert!(CPModel::new(int(1), vec![frac(1, 2), frac(2, 3)]).is_err());
        assert!(CPModel::new(int(1), vec![int(-1), int(1)]).is_err());
    }

    #[test]
    fn recover_r_inverts_panjer() {
        let m = CPModel::new(int(3), vec![frac(1, 4), frac(1, 4), frac(1, 3), frac(1, 6)]).unwrap();
        let pmf = panjer(&m, order(8));
        let r = recover_r(pmf.q()).unwrap();
        assert_eq!(r.0, m.r_sequence(8));
        assert_eq!(r.0[0], int(3) * frac(1, 4));
        assert_eq!(r.0[3], int(0));
    }

    #[test]
    fn geometric_masses_recover_powers() {
        let q = frac(2, 7);
        let p: Vec<_> = (0..12).map(|n| rational::pow(&q, n)).collect();
        let r = recover_r(&p).unwrap();
        for (k, rk) in r.0.iter().enumerate() {
            assert_eq!(*rk, rational::pow(&q, k + 1));
        }
    }

    #[test]
    fn alternating_masses_are_id() {
        // (1, 0, 1, 0, ...) is 1/(1 - u^2) = exp(sum u^{2j}/j)
        let p: Vec<_> = (0..10).map(|n| if n % 2 == 0 { int(1) } else { int(0) }).collect();
        let r = recover_r(&p).unwrap();
        for (k, rk) in r.0.iter().enumerate() {
            assert_eq!(*rk, if k % 2 == 1 { int(2) } else { int(0) });
        }
        assert_eq!(is_infinitely_divisible(&p).unwrap(), IdVerdict::IdUpToOrder { order: 9 });
    }

    #[test]
    fn binomial_masses_are_not_id() {
        // Bin(2, 1/2) up to scale: r_0 = 2, 2 P_2 = r_0 P_1 + r_1 P_0 gives r_1 = -2
        let p = vec![int(1), int(2), int(1), int(0), int(0)];
        let r = recover_r(&p).unwrap();
        assert_eq!(r.0[..2], [int(2), int(-2)]);
        assert_eq!(is_infinitely_divisible(&p).unwrap(), IdVerdict::NotId { first_negative: 1 });
    }

    #[test]
    fn zero_p0_rejected() {
        assert!(recover_r(&[int(0), int(1)]).is_err());
        assert!(NormalizedPmf::from_masses(&[int(0), int(1)]).is_err());
    }

    #[test]
    fn id_verdicts() {
        let m = CPModel::new(int(1), vec![int(0), int(1)]).unwrap();
        let pmf = panjer(&m, order(12));
        assert_eq!(
            is_infinitely_divisible(pmf.q()).unwrap(),
            IdVerdict::IdUpToOrder { order: 12 }
        );
    }

    #[test]
    fn embedding_examples() {
        let c = WeightSeq::from_ints(&[1]).unwrap();
        let m = embed_c_as_cp(&c, order(1), Lambda::Fixed(int(2))).unwrap();
        assert_eq!(m.f(), &[frac(1, 2), frac(1, 2)]);

        let c = WeightSeq::from_ints(&[2, 2]).unwrap();
        assert!(embed_c_as_cp(&c, order(2), Lambda::Fixed(int(3))).is_err());
        assert!(embed_c_as_cp(&c, order(2), Lambda::Fixed(frac(31, 10))).is_ok());
    }

    #[test]
    fn embedding_reproduces_expansion() {
        let c = WeightSeq::new(vec![frac(3, 2), int(1), frac(1, 5), int(4)]).unwrap();
        let k = order(15);
        let m = embed_c_as_cp(&c, k, Lambda::Auto).unwrap();
        assert_eq!(panjer(&m, k).q(), expand_a(&c, k).a.as_slice());
    }

    #[test]
    fn rescaling() {
        let c = WeightSeq::from_ints(&[1, 1, 1]).unwrap();
        assert_eq!(scale_normalize(&c, &int(1)).unwrap(), c);
        let s = scale_normalize(&c, &frac(1, 2)).unwrap();
        assert_eq!(s.as_slice(), &[frac(1, 2), frac(1, 4), frac(1, 8)]);
        assert!(scale_normalize(&c, &int(0)).is_err());
    }

    #[test]
    fn prefactor_rendering() {
        let m = CPModel::new(int(1), vec![int(0), int(1)]).unwrap();
        let rep = panjer(&m, order(3)).to_report(50);
        assert!(rep.prefactor.starts_with("0.36787944117144232159552377016146086744581113103176"));
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["lam_f0_minus_1"], "-1/1");
    }
}
