//! Decimal interval arithmetic for the few transcendental values in play.
//!
//! An [`Enclosure`] is a closed interval `[lo, hi] / 10^scale` with integer
//! endpoints. Every operation rounds outward, so the true value always lies
//! inside. Signs are only reported when the interval excludes zero and the
//! magnitude clears the precision floor; otherwise the caller gets
//! [`SignConfidence::Inconclusive`].

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Digits carried beyond the requested precision.
const GUARD: u32 = 20;

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

fn div_floor(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn div_ceil(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigInt,
    hi: BigInt,
    scale: u32,
}

impl Enclosure {
    /// Tightest grid interval around `r`.
    pub fn from_rational(r: &BigRational, scale: u32) -> Self {
        let n = r.numer() * pow10(scale);
        let d = r.denom();
        Enclosure {
            lo: div_floor(&n, d),
            hi: div_ceil(&n, d),
            scale,
        }
    }

    pub fn from_int(n: i64, scale: u32) -> Self {
        let v = BigInt::from(n) * pow10(scale);
        Enclosure { lo: v.clone(), hi: v, scale }
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow10(self.scale))
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow10(self.scale))
    }

    pub fn midpoint(&self) -> BigRational {
        (self.lower() + self.upper()) / BigRational::from_integer(2.into())
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lower() <= r && r <= &self.upper()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    fn check(&self, other: &Enclosure) {
        assert_eq!(self.scale, other.scale, "enclosures at different scales");
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        self.check(o);
        Enclosure { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi, scale: self.scale }
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo, scale: self.scale }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        self.check(o);
        let s = pow10(self.scale);
        let prods = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = prods.iter().min().unwrap();
        let max = prods.iter().max().unwrap();
        Enclosure { lo: div_floor(min, &s), hi: div_ceil(max, &s), scale: self.scale }
    }

    /// Multiplication by an exact rational.
    pub fn mul_rational(&self, r: &BigRational) -> Enclosure {
        let s_num = r.numer();
        let d = r.denom();
        let a = &self.lo * s_num;
        let b = &self.hi * s_num;
        let (min, max) = if a <= b { (a, b) } else { (b, a) };
        Enclosure { lo: div_floor(&min, d), hi: div_ceil(&max, d), scale: self.scale }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, o: &Enclosure) -> Option<Enclosure> {
        self.check(o);
        if o.contains_zero() {
            return None;
        }
        let s = pow10(self.scale);
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let n = a * &s;
                let f = div_floor(&n, b);
                let c = div_ceil(&n, b);
                lo = Some(match lo {
                    Some(x) if x <= f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x >= c => x,
                    _ => c,
                });
            }
        }
        Some(Enclosure { lo: lo.unwrap(), hi: hi.unwrap(), scale: self.scale })
    }

    /// Widens the interval by `r >= 0` on both sides.
    fn widen(&self, r: &BigRational) -> Enclosure {
        let e = Enclosure::from_rational(r, self.scale);
        Enclosure { lo: &self.lo - &e.hi, hi: &self.hi + &e.hi, scale: self.scale }
    }

    /// Re-grid to a coarser scale, rounding outward.
    pub fn rescale(&self, scale: u32) -> Enclosure {
        match scale.cmp(&self.scale) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let f = pow10(scale - self.scale);
                Enclosure { lo: &self.lo * &f, hi: &self.hi * &f, scale }
            }
            Ordering::Less => {
                let f = pow10(self.scale - scale);
                Enclosure { lo: div_floor(&self.lo, &f), hi: div_ceil(&self.hi, &f), scale }
            }
        }
    }

    /// Sign if certified: interval excludes zero and `|mid| >= 10^-(digits-10)`.
    pub fn sign(&self, digits: u32) -> SignConfidence {
        if self.contains_zero() {
            return SignConfidence::Inconclusive;
        }
        let floor = BigRational::new(BigInt::one(), pow10(digits.saturating_sub(10)));
        if self.midpoint().abs() < floor {
            return SignConfidence::Inconclusive;
        }
        if self.lo.is_positive() {
            SignConfidence::ExactSign(1)
        } else {
            SignConfidence::ExactSign(-1)
        }
    }

    /// Midpoint rendered with `digits` decimals, truncated toward zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        let mid = self.midpoint();
        decimal_string(&mid, digits)
    }

    pub fn to_value(&self, digits: u32) -> HighPrecisionValue {
        HighPrecisionValue {
            value: self.to_decimal(digits),
            digits,
            sign_confidence: self.sign(digits),
        }
    }
}

/// `r` written with exactly `digits` decimals (truncated toward zero).
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scaled = (r.numer().abs() * pow10(digits)) / r.denom();
    let s = scaled.to_string();
    let s = if s.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
    } else {
        s
    };
    let (int_part, frac_part) = s.split_at(s.len() - digits as usize);
    let neg = r.is_negative() && !scaled.is_zero();
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConfidence {
    /// -1 or 1.
    ExactSign(i8),
    Inconclusive,
}

impl SignConfidence {
    pub fn is_conclusive(self) -> bool {
        matches!(self, SignConfidence::ExactSign(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighPrecisionValue {
    pub value: String,
    pub digits: u32,
    pub sign_confidence: SignConfidence,
}

/// Working scale for a requested number of digits.
pub fn working_scale(digits: u32) -> u32 {
    digits + GUARD
}

/// Enclosure of `exp(x)`.
pub fn exp(x: &BigRational, digits: u32) -> Enclosure {
    let mag = x.abs().ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    // halve until |y| <= 1/2, then square back
    let mut halvings = 0u32;
    let mut y = x.clone();
    let half = BigRational::new(1.into(), 2.into());
    while y.abs() > half {
        y /= BigRational::from_integer(2.into());
        halvings += 1;
    }
    let extra = (mag as f64 * std::f64::consts::LOG10_E).ceil() as u32 + halvings + 5;
    let scale = working_scale(digits) + extra;

    let y_enc = Enclosure::from_rational(&y, scale);
    let mut sum = Enclosure::from_int(1, scale);
    let mut term = Enclosure::from_int(1, scale);
    let mut n = 1u32;
    let eps = BigRational::new(BigInt::one(), pow10(scale));
    loop {
        term = term.mul(&y_enc).mul_rational(&BigRational::new(1.into(), n.into()));
        sum = sum.add(&term);
        // tail after term n is bounded by 2 |term|
        let bound = term.lower().abs().max(term.upper().abs());
        if bound <= eps {
            sum = sum.widen(&(bound * BigRational::from_integer(2.into()) + &eps));
            break;
        }
        n += 1;
    }
    let mut out = sum;
    for _ in 0..halvings {
        out = out.mul(&out);
    }
    out.rescale(working_scale(digits))
}

/// Enclosure of `atanh(z)` for rational `0 <= z <= 1/2`.
fn atanh_small(z: &BigRational, scale: u32) -> Enclosure {
    let z_enc = Enclosure::from_rational(z, scale);
    let z2 = z_enc.mul(&z_enc);
    let mut power = z_enc.clone();
    let mut sum = Enclosure::from_int(0, scale);
    let eps = BigRational::new(BigInt::one(), pow10(scale));
    let mut k = 0u32;
    loop {
        let t = power.mul_rational(&BigRational::new(1.into(), (2 * k + 1).into()));
        sum = sum.add(&t);
        let bound = power.upper().abs();
        if bound <= eps {
            // geometric tail: z^{2k+3}/(1 - z^2) <= 2 z^{2k+1} for z <= 1/2
            sum = sum.widen(&(bound * BigRational::from_integer(2.into()) + &eps));
            break;
        }
        power = power.mul(&z2);
        k += 1;
    }
    sum
}

/// Enclosure of `ln(y)` for rational `y > 0`.
pub fn ln(y: &BigRational, digits: u32) -> Enclosure {
    assert!(y.is_positive(), "ln of non-positive value");
    let scale = working_scale(digits) + 5;
    // y = 2^e * m with m in [1, 2)
    let two = BigRational::from_integer(2.into());
    let mut m = y.clone();
    let mut e: i64 = 0;
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < BigRational::one() {
        m *= &two;
        e -= 1;
    }
    let one = BigRational::one();
    let z = (&m - &one) / (&m + &one);
    let ln_m = atanh_small(&z, scale).mul_rational(&two);
    let ln2 = atanh_small(&BigRational::new(1.into(), 3.into()), scale).mul_rational(&two);
    let total = ln2.mul_rational(&BigRational::from_integer(e.into())).add(&ln_m);
    total.rescale(working_scale(digits))
}
