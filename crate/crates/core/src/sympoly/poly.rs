//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, serde_rat};
use crate::{Error, Result};

/// Ordered list of indeterminate names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Arc<Self> {
        Arc::new(Alphabet { names })
    }

    /// `{prefix}_{lo}`, ..., `{prefix}_{hi}`.
    pub fn indexed(prefix: &str, lo: usize, hi: usize) -> Arc<Self> {
        Alphabet::new((lo..=hi).map(|i| format!("{prefix}_{i}")).collect())
    }

    /// `c_1..c_n` (at least one variable).
    pub fn weights(n: usize) -> Arc<Self> {
        Alphabet::indexed("c", 1, n.max(1))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn is_prefix_of(&self, other: &Alphabet) -> bool {
        self.names.len() <= other.names.len() && other.names[..self.names.len()] == self.names[..]
    }
}

pub type Exponents = Vec<u32>;

/// Canonical sparse polynomial: no zero coefficients are ever stored, so map
/// equality is polynomial equality.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    alphabet: Arc<Alphabet>,
    terms: HashMap<Exponents, BigRational>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        match unify(self, other) {
            Ok((_, a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }
}

impl Eq for MultiPoly {}

/// Brings two polynomials onto a common alphabet when one alphabet is a
/// prefix of the other.
fn unify(p: &MultiPoly, q: &MultiPoly) -> Result<(Arc<Alphabet>, MultiPoly, MultiPoly)> {
    if Arc::ptr_eq(&p.alphabet, &q.alphabet) || p.alphabet == q.alphabet {
        return Ok((p.alphabet.clone(), p.clone(), q.clone()));
    }
    if p.alphabet.is_prefix_of(&q.alphabet) {
        Ok((q.alphabet.clone(), p.extend_to(&q.alphabet)?, q.clone()))
    } else if q.alphabet.is_prefix_of(&p.alphabet) {
        Ok((p.alphabet.clone(), p.clone(), q.extend_to(&p.alphabet)?))
    } else {
        Err(Error::AlphabetMismatch(
            p.alphabet.names.join(","),
            q.alphabet.names.join(","),
        ))
    }
}

impl MultiPoly {
    pub fn zero(alphabet: &Arc<Alphabet>) -> Self {
        MultiPoly { alphabet: alphabet.clone(), terms: HashMap::new() }
    }

    pub fn constant(alphabet: &Arc<Alphabet>, c: BigRational) -> Self {
        let mut p = MultiPoly::zero(alphabet);
        p.add_term(vec![0; alphabet.len()], c);
        p
    }

    pub fn one(alphabet: &Arc<Alphabet>) -> Self {
        MultiPoly::constant(alphabet, BigRational::one())
    }

    /// The indeterminate at position `i`.
    pub fn var(alphabet: &Arc<Alphabet>, i: usize) -> Self {
        assert!(i < alphabet.len(), "variable index {i} out of range");
        let mut e = vec![0; alphabet.len()];
        e[i] = 1;
        MultiPoly::monomial(alphabet, e, BigRational::one())
    }

    pub fn monomial(alphabet: &Arc<Alphabet>, exps: Exponents, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), alphabet.len());
        let mut p = MultiPoly::zero(alphabet);
        p.add_term(exps, coeff);
        p
    }

    pub fn from_terms<I>(alphabet: &Arc<Alphabet>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, BigRational)>,
    {
        let mut p = MultiPoly::zero(alphabet);
        for (e, c) in terms {
            assert_eq!(e.len(), alphabet.len());
            p.add_term(e, c);
        }
        p
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Adds `c * x^exps` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// Re-expresses the polynomial over a longer alphabet that starts with
    /// the current one.
    pub fn extend_to(&self, alphabet: &Arc<Alphabet>) -> Result<Self> {
        if !self.alphabet.is_prefix_of(alphabet) {
            return Err(Error::AlphabetMismatch(
                self.alphabet.names.join(","),
                alphabet.names.join(","),
            ));
        }
        let n = alphabet.len();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(n, 0);
                (e, c.clone())
            })
            .collect();
        Ok(MultiPoly { alphabet: alphabet.clone(), terms })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (_, mut a, b) = unify(self, other)?;
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (alpha, a, b) = unify(self, other)?;
        let mut out = MultiPoly::zero(&alpha);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return MultiPoly::zero(&self.alphabet);
        }
        MultiPoly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn scalar_mul_int(&self, s: i64) -> Self {
        self.scalar_mul(&BigRational::from_integer(BigInt::from(s)))
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            alphabet: self.alphabet.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = MultiPoly::one(&self.alphabet);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a point; `values[i]` is assigned to variable `i`.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        assert!(values.len() >= self.alphabet.len(), "not enough values");
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &values[i];
                }
            }
            total += t;
        }
        total
    }

    /// Replaces variable `i` by `values[i]`; the result lives over the
    /// alphabet of `values`.
    pub fn substitute(&self, values: &[MultiPoly]) -> Result<MultiPoly> {
        if values.len() < self.alphabet.len() {
            return Err(Error::invalid("not enough substitution values"));
        }
        let Some(first) = values.first() else {
            return Ok(self.clone());
        };
        let target = first.alphabet.clone();
        let mut out = MultiPoly::zero(&target);
        for (e, c) in self.sorted_terms() {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.try_mul(&values[i].pow(k))?;
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Terms in graded-lex order, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| grlex_cmp(b, a));
        v
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            alphabet: self.alphabet.names.clone(),
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|(e, c)| TermJson { exps: e.clone(), coeff: c.clone() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let alpha = Alphabet::new(j.alphabet.clone());
        let mut p = MultiPoly::zero(&alpha);
        for t in &j.terms {
            if t.exps.len() != alpha.len() {
                return Err(Error::invalid("exponent vector length differs from alphabet"));
            }
            p.add_term(t.exps.clone(), t.coeff.clone());
        }
        Ok(p)
    }
}

/// Graded lexicographic comparison.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub alphabet: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    #[serde(with = "serde_rat")]
    pub coeff: BigRational,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MultiPoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    let name = &self.alphabet.names[v];
                    if k == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", show_coeff(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", show_coeff(&mag), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

fn show_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        rational::format(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl<'a, 'b> std::ops::$tr<&'b MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            /// # Panics
            /// On incompatible alphabets; use the `try_` form to get an error instead.
            fn $m(self, rhs: &'b MultiPoly) -> MultiPoly {
                self.$inner(rhs).expect("polynomial alphabets are incompatible")
            }
        }
        impl std::ops::$tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn c(alpha: &Arc<Alphabet>, i: usize) -> MultiPoly {
        MultiPoly::var(alpha, i - 1)
    }

    #[test]
    fn difference_of_squares() {
        let a = Alphabet::weights(2);
        let lhs = &(&c(&a, 1) + &c(&a, 2)) * &(&c(&a, 1) - &c(&a, 2));
        let rhs = &c(&a, 1).pow(2) - &c(&a, 2).pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.num_terms(), 2);
    }

    #[test]
    fn substitution_composes() {
        let a = Alphabet::weights(2);
        let x = Alphabet::indexed("x", 1, 2);
        let p = &c(&a, 1).pow(2) - &c(&a, 2);
        let vals = [&MultiPoly::var(&x, 0) + &MultiPoly::var(&x, 1), MultiPoly::var(&x, 1)];
        let q = p.substitute(&vals).unwrap();
        assert_eq!(q.to_string(), "x_1^2 + 2*x_1*x_2 + x_2^2 - x_2");
    }

    #[test]
    fn self_subtraction_is_empty() {
        let a = Alphabet::weights(3);
        let p = &(&c(&a, 1) * &c(&a, 3)) + &c(&a, 2).scalar_mul(&frac(2, 3));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn b2_from_products() {
        let a = Alphabet::weights(2);
        let b2 = &(&c(&a, 1) * &c(&a, 1)) + &c(&a, 2);
        assert_eq!(b2.to_string(), "c_1^2 + c_2");
    }

    #[test]
    fn prefix_alphabets_unify() {
        let small = Alphabet::weights(1);
        let big = Alphabet::weights(3);
        let p = &MultiPoly::var(&small, 0) + &MultiPoly::var(&big, 2);
        assert_eq!(p.alphabet().len(), 3);
        assert_eq!(MultiPoly::var(&small, 0), MultiPoly::var(&big, 0));
    }

    #[test]
    fn mismatched_alphabets_error() {
        let x = Alphabet::indexed("x", 0, 1);
        let y = Alphabet::indexed("y", 0, 1);
        let r = MultiPoly::var(&x, 0).try_mul(&MultiPoly::var(&y, 0));
        assert!(matches!(r, Err(Error::AlphabetMismatch(..))));
    }

    #[test]
    fn evaluation() {
        let a = Alphabet::weights(2);
        let p = &c(&a, 1).pow(3) - &c(&a, 2).scalar_mul_int(4);
        assert_eq!(p.eval(&[int(2), frac(1, 2)]), int(6));
    }

    #[test]
    fn json_round_trip_is_sorted() {
        let a = Alphabet::weights(3);
        let p = &(&c(&a, 3) + &c(&a, 1).pow(2)) - &(&c(&a, 1) * &c(&a, 2)).scalar_mul(&frac(1, 3));
        let js = serde_json::to_string(&p).unwrap();
        assert!(js.starts_with(r#"{"alphabet":["c_1","c_2","c_3"],"terms":[{"exps":[2,0,0],"coeff":"1/1"}"#));
        let back: MultiPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}
