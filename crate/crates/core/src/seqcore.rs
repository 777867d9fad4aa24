//! Truncated expansion of the exponential formula.
//!
//! Given weights `c_1, c_2, ...` the coefficients of
//! `exp(sum_j c_j u^j / j)` satisfy `a_0 = 1`,
//! `n a_n = sum_{l=1}^n c_l a_{n-l}` and `b_k = k! a_k`. With indeterminate
//! weights, `a_n` is the cycle index of the symmetric group of degree `n`.
//!
//! Everything is truncated at a [`TruncationOrder`]; the formal variable is
//! never evaluated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::serde_rat_vec;
use crate::{Error, Result};

/// Degree at which every series is cut. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct TruncationOrder(usize);

impl TruncationOrder {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("truncation order must be at least 1"));
        }
        Ok(TruncationOrder(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for TruncationOrder {
    type Error = Error;
    fn try_from(k: usize) -> Result<Self> {
        TruncationOrder::new(k)
    }
}

impl From<TruncationOrder> for usize {
    fn from(k: TruncationOrder) -> usize {
        k.0
    }
}

/// Nonnegative weights `c_1..c_L`; entries past `L` read as zero.
///
/// `c_0` is never stored. [`WeightSeq::get_or_one`] substitutes the constant 1
/// where an identity needs it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightSeqRepr", into = "WeightSeqRepr")]
pub struct WeightSeq {
    c: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct WeightSeqRepr(#[serde(with = "serde_rat_vec")] Vec<BigRational>);

impl TryFrom<WeightSeqRepr> for WeightSeq {
    type Error = Error;
    fn try_from(r: WeightSeqRepr) -> Result<Self> {
        WeightSeq::new(r.0)
    }
}

impl From<WeightSeq> for WeightSeqRepr {
    fn from(w: WeightSeq) -> Self {
        WeightSeqRepr(w.c)
    }
}

impl WeightSeq {
    /// `c[0]` is `c_1`. Rejects negative entries and the empty list.
    pub fn new(c: Vec<BigRational>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::invalid("weight sequence needs at least c_1"));
        }
        if let Some(i) = c.iter().position(|x| x.is_negative()) {
            return Err(Error::invalid(format!("c_{} is negative", i + 1)));
        }
        Ok(WeightSeq { c })
    }

    pub fn from_ints(c: &[i64]) -> Result<Self> {
        WeightSeq::new(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    /// `c_k` for `k >= 1`, zero past the stored length.
    ///
    /// # Panics
    /// On `k == 0`; use [`WeightSeq::get_or_one`] for identities that mention `c_0`.
    pub fn get(&self, k: usize) -> BigRational {
        assert!(k >= 1, "c_0 is not stored");
        self.c.get(k - 1).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Like [`WeightSeq::get`] but `c_0 = 1`.
    pub fn get_or_one(&self, k: usize) -> BigRational {
        if k == 0 {
            BigRational::one()
        } else {
            self.get(k)
        }
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.c
    }

    /// `c_1..c_K`, zero-extended or cut to exactly `K` entries.
    pub fn prefix(&self, k: TruncationOrder) -> Vec<BigRational> {
        (1..=k.get()).map(|i| self.get(i)).collect()
    }
}

/// Coefficients `a_0..a_K` and `b_0..b_K = 0!a_0..K!a_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffPair {
    #[serde(with = "serde_rat_vec")]
    pub a: Vec<BigRational>,
    #[serde(with = "serde_rat_vec")]
    pub b: Vec<BigRational>,
}

impl CoeffPair {
    pub fn order(&self) -> usize {
        self.a.len() - 1
    }
}

/// Coefficients of `exp(sum_{j>=1} w_j u^j / j)` up to `u^k`, with `w[0] = w_1`.
///
/// Accepts signed weights; [`expand_a`] is the validated entry point.
pub fn exp_coefficients(w: &[BigRational], k: usize) -> Vec<BigRational> {
    let weight = |l: usize| w.get(l - 1);
    let mut a = Vec::with_capacity(k + 1);
    a.push(BigRational::one());
    for n in 1..=k {
        let mut acc = BigRational::zero();
        for l in 1..=n {
            if let Some(c) = weight(l) {
                if !c.is_zero() {
                    acc += c * &a[n - l];
                }
            }
        }
        a.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    a
}

pub fn expand_a(c: &WeightSeq, k: TruncationOrder) -> CoeffPair {
    let a = exp_coefficients(&c.prefix(k), k.get());
    let b = b_from_a(&a);
    CoeffPair { a, b }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `m (m-1) ... (m-k+1)`; 1 for `k = 0`, 0 for `k > m`.
pub fn falling_factorial(m: u64, k: u64) -> BigInt {
    if k > m {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(m - i))
}

pub fn b_from_a(a: &[BigRational]) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    a.iter()
        .enumerate()
        .map(|(k, x)| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            x * BigRational::from_integer(fact.clone())
        })
        .collect()
}

pub fn a_from_b(b: &[BigRational]) -> Vec<BigRational> {
    let mut fact = BigInt::one();
    b.iter()
        .enumerate()
        .map(|(k, x)| {
            if k > 0 {
                fact *= BigInt::from(k);
            }
            x / BigRational::from_integer(fact.clone())
        })
        .collect()
}

/// Truncated product of two series given by their first coefficients.
pub fn series_mul(x: &[BigRational], y: &[BigRational], k: usize) -> Vec<BigRational> {
    (0..=k)
        .map(|n| {
            let mut acc = BigRational::zero();
            for i in 0..=n {
                if let (Some(p), Some(q)) = (x.get(i), y.get(n - i)) {
                    acc += p * q;
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn order(k: usize) -> TruncationOrder {
        TruncationOrder::new(k).unwrap()
    }

    #[test]
    fn all_ones_gives_geometric_series() {
        let c = WeightSeq::new(vec![int(1); 12]).unwrap();
        let e = expand_a(&c, order(10));
        assert!(e.a.iter().all(|x| *x == int(1)));
        assert_eq!(e.b[5], int(120));
    }

    #[test]
    fn single_weight_gives_exponential() {
        let c = WeightSeq::from_ints(&[1]).unwrap();
        let e = expand_a(&c, order(8));
        for k in 0..=8 {
            assert_eq!(e.a[k], BigRational::new(1.into(), factorial(k)));
            assert_eq!(e.b[k], int(1));
        }
    }

    #[test]
    fn low_order_b_match_permutation_counts() {
        // b_2 = c1^2 + c2 and b_3 = c1^3 + 3 c1 c2 + 2 c3 at c = (2, 3, 5)
        let c = WeightSeq::from_ints(&[2, 3, 5]).unwrap();
        let e = expand_a(&c, order(3));
        assert_eq!(e.b[1], int(2));
        assert_eq!(e.b[2], int(4 + 3));
        assert_eq!(e.b[3], int(8 + 3 * 2 * 3 + 2 * 5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(WeightSeq::new(vec![int(1), int(-1)]).is_err());
        assert!(WeightSeq::new(vec![]).is_err());
        assert!(TruncationOrder::new(0).is_err());
    }

    #[test]
    fn zero_extension_and_c0() {
        let c = WeightSeq::from_ints(&[4]).unwrap();
        assert_eq!(c.get(3), int(0));
        assert_eq!(c.get_or_one(0), int(1));
        assert_eq!(c.prefix(order(3)), vec![int(4), int(0), int(0)]);
    }

    #[test]
    fn falling_factorial_cases() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(7, 0), BigInt::from(1));
        assert_eq!(falling_factorial(3, 5), BigInt::from(0));
        assert_eq!(falling_factorial(4, 4), BigInt::from(24));
    }

    #[test]
    fn factorial_rescaling() {
        assert_eq!(b_from_a(&[int(1), int(1), frac(1, 2)]), vec![int(1), int(1), int(1)]);
        assert_eq!(a_from_b(&[int(1), int(3), int(11)]), vec![int(1), int(3), frac(11, 2)]);
    }

    #[test]
    fn integral_weights_give_integral_b() {
        let c = WeightSeq::from_ints(&[3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let e = expand_a(&c, order(15));
        assert!(e.b.iter().all(|x| x.is_integer()));
    }

    #[test]
    fn serde_rejects_negative_weights() {
        let ok: WeightSeq = serde_json::from_str(r#"["1/2","3/1"]"#).unwrap();
        assert_eq!(ok.get(1), frac(1, 2));
        assert!(serde_json::from_str::<WeightSeq>(r#"["-1/2"]"#).is_err());
    }
}
