//! Ratio certificates for `m b_{m-1} b_{n+1} - (n+1) b_m b_n`.
//!
//! With `D_k = k b_{k-1} b_{k+1} - (k+1) b_k^2` and
//! `T(k, l) = k b_{k-1} b_{l+1} - (l+1) b_k b_l` (so `T(k, k) = D_k`):
//!
//! ```text
//! D_1 = c_2 - c_1^2
//! T(k, l) = sum_{i=k}^{l} D_i (l+1) k b_l b_{k-1} / (i (i+1) b_i b_{i-1})
//! c_m D_m = sum_{j=2}^{m} (m)_{j-1} z_{j,m} T(m+1-j, m-1)
//!         + b_m sum_{j=1}^{m} (m-1)_{j-1} b_{m-j} z_{j,m}
//! ```
//!
//! where `z_{j,m} = c_{j-1} c_{m+1} - c_j c_m` is a `Z` generator. Every
//! quantity is kept as a sum of `z`-products times `c`/`b` monomials over a
//! single `c`/`b` monomial denominator; the `b_i` are expanded into `c`
//! monomials (all coefficients are nonnegative integers) only at the end.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{build_generator_set, CertTerm, Certificate, GenKind, GeneratorSet, RatioCertificate};
use crate::seqcore::falling_factorial;
use crate::sympoly::{symbolic_b_upto, MultiPoly};
use crate::{Error, Result};

/// Largest `n` accepted by [`certify_poly2`].
pub const MAX_POLY2_N: usize = 8;

/// `(z generators, c exponents, b exponents)`; `b` is indexed from 0 but
/// `b_0 = 1` is never stored.
type Key = (Vec<usize>, Vec<u32>, Vec<u32>);

#[derive(Debug, Clone)]
struct Atoms {
    coeff: BigInt,
    c: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Debug, Clone)]
struct Frac {
    num: BTreeMap<Key, BigInt>,
    den: Atoms,
}

fn add_exps(x: &mut [u32], y: &[u32]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a += b;
    }
}

impl Frac {
    fn zero(nc: usize, nb: usize) -> Self {
        Frac { num: BTreeMap::new(), den: Atoms { coeff: BigInt::one(), c: vec![0; nc], b: vec![0; nb] } }
    }

    fn scale(&self, f: &Atoms) -> Frac {
        let num = self
            .num
            .iter()
            .map(|((z, c, b), v)| {
                let (mut c, mut b) = (c.clone(), b.clone());
                add_exps(&mut c, &f.c);
                add_exps(&mut b, &f.b);
                ((z.clone(), c, b), v * &f.coeff)
            })
            .collect();
        Frac { num, den: self.den.clone() }
    }

    fn with_z(&self, zi: usize) -> Frac {
        let num = self
            .num
            .iter()
            .map(|((z, c, b), v)| {
                let mut z = z.clone();
                z.push(zi);
                z.sort_unstable();
                ((z, c.clone(), b.clone()), v.clone())
            })
            .collect();
        Frac { num, den: self.den.clone() }
    }

    fn divide(&mut self, f: &Atoms) {
        self.den.coeff *= &f.coeff;
        add_exps(&mut self.den.c, &f.c);
        add_exps(&mut self.den.b, &f.b);
    }

    fn add(&self, other: &Frac) -> Frac {
        let lcm = Atoms {
            coeff: self.den.coeff.lcm(&other.den.coeff),
            c: self.den.c.iter().zip(&other.den.c).map(|(a, b)| *a.max(b)).collect(),
            b: self.den.b.iter().zip(&other.den.b).map(|(a, b)| *a.max(b)).collect(),
        };
        let lift = |f: &Frac| {
            let m = Atoms {
                coeff: &lcm.coeff / &f.den.coeff,
                c: lcm.c.iter().zip(&f.den.c).map(|(a, b)| a - b).collect(),
                b: lcm.b.iter().zip(&f.den.b).map(|(a, b)| a - b).collect(),
            };
            f.scale(&m).num
        };
        let mut num = lift(self);
        for (k, v) in lift(other) {
            *num.entry(k).or_insert_with(BigInt::zero) += v;
        }
        num.retain(|_, v| !v.is_zero());
        let mut out = Frac { num, den: lcm };
        out.reduce();
        out
    }

    /// Cancels the largest atom monomial dividing the denominator and every
    /// numerator term.
    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for ((_, c, b), v) in &self.num {
            g.coeff = g.coeff.gcd(v);
            for (x, y) in g.c.iter_mut().zip(c) {
                *x = (*x).min(*y);
            }
            for (x, y) in g.b.iter_mut().zip(b) {
                *x = (*x).min(*y);
            }
        }
        if g.coeff.is_one() && g.c.iter().chain(&g.b).all(|&e| e == 0) {
            return;
        }
        let sub = |x: &mut [u32], y: &[u32]| x.iter_mut().zip(y).for_each(|(a, b)| *a -= b);
        self.num = std::mem::take(&mut self.num)
            .into_iter()
            .map(|((z, mut c, mut b), v)| {
                sub(&mut c, &g.c);
                sub(&mut b, &g.b);
                ((z, c, b), v / &g.coeff)
            })
            .collect();
        self.den.coeff /= &g.coeff;
        sub(&mut self.den.c, &g.c);
        sub(&mut self.den.b, &g.b);
    }
}

struct Builder {
    gens: GeneratorSet,
    nc: usize,
    nb: usize,
    d: HashMap<usize, Frac>,
}

impl Builder {
    fn atoms(&self, coeff: BigInt, c: &[usize], b: &[usize]) -> Atoms {
        let mut a = Atoms { coeff, c: vec![0; self.nc], b: vec![0; self.nb] };
        for &j in c {
            a.c[j - 1] += 1;
        }
        for &i in b.iter().filter(|&&i| i > 0) {
            a.b[i] += 1;
        }
        a
    }

    fn z(&self, j: usize, k: usize) -> usize {
        self.gens.pair_index(j, k).expect("pair generator within range")
    }

    fn d(&mut self, m: usize) -> Frac {
        if let Some(f) = self.d.get(&m) {
            return f.clone();
        }
        let f = if m == 1 {
            let mut f = Frac::zero(self.nc, self.nb);
            f.num.insert((vec![self.z(1, 1)], vec![0; self.nc], vec![0; self.nb]), BigInt::one());
            f
        } else {
            let mut acc = Frac::zero(self.nc, self.nb);
            for j in 2..=m {
                let t = self.t(m + 1 - j, m - 1);
                let ff = self.atoms(falling_factorial(m as u64, (j - 1) as u64), &[], &[]);
                acc = acc.add(&t.with_z(self.z(j, m)).scale(&ff));
            }
            let mut tail = Frac::zero(self.nc, self.nb);
            for j in 1..=m {
                let a = self.atoms(falling_factorial((m - 1) as u64, (j - 1) as u64), &[], &[m, m - j]);
                tail.num.insert((vec![self.z(j, m)], a.c, a.b), a.coeff);
            }
            acc = acc.add(&tail);
            acc.divide(&self.atoms(BigInt::one(), &[m], &[]));
            acc.reduce();
            acc
        };
        self.d.insert(m, f.clone());
        f
    }

    fn t(&mut self, k: usize, l: usize) -> Frac {
        if k == l {
            return self.d(k);
        }
        let mut acc = Frac::zero(self.nc, self.nb);
        for i in k..=l {
            let up = self.atoms(BigInt::from((l + 1) * k), &[], &[l, k - 1]);
            let mut f = self.d(i).scale(&up);
            f.divide(&self.atoms(BigInt::from(i * (i + 1)), &[], &[i, i - 1]));
            f.reduce();
            acc = acc.add(&f);
        }
        acc
    }
}

/// Builds a ratio certificate for `m b_{m-1} b_{n+1} - (n+1) b_m b_n` over
/// the `Z` set with `max_index = n + 1`.
pub fn certify_poly2(m: usize, n: usize) -> Result<(GeneratorSet, RatioCertificate)> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    if n > MAX_POLY2_N {
        return Err(Error::SizeLimit { what: "n", got: n, limit: MAX_POLY2_N });
    }
    let gens = build_generator_set(GenKind::Z, n + 1)?;
    let nc = n + 1;
    let nb = n + 2;
    let mut builder = Builder { gens, nc, nb, d: HashMap::new() };
    let frac = builder.t(m, n);
    let gens = builder.gens;
    let b = symbolic_b_upto(nb - 1, nc);
    let mut cache: HashMap<(Vec<u32>, Vec<u32>), MultiPoly> = HashMap::new();
    let mut expand = |c: &[u32], bx: &[u32]| -> MultiPoly {
        cache
            .entry((c.to_vec(), bx.to_vec()))
            .or_insert_with(|| {
                let mut p = MultiPoly::monomial(gens.alphabet(), c.to_vec(), One::one());
                for (i, &e) in bx.iter().enumerate() {
                    if e > 0 {
                        p = &p * &b[i].pow(e);
                    }
                }
                p
            })
            .clone()
    };
    let singles: Vec<usize> = (1..=nc).map(|j| gens.single_index(j).expect("single generator")).collect();
    let to_terms = |z: &[usize], coeff: &BigInt, p: &MultiPoly| -> Vec<CertTerm> {
        p.terms()
            .map(|(e, v)| {
                let mut ix = z.to_vec();
                for (j, &k) in e.iter().enumerate() {
                    ix.extend(std::iter::repeat_n(singles[j], k as usize));
                }
                CertTerm { gen_indices: ix, coeff: coeff * v.to_integer() }
            })
            .collect()
    };
    let mut num_terms = Vec::new();
    for ((z, c, bx), v) in &frac.num {
        let p = expand(c, bx);
        num_terms.extend(to_terms(z, v, &p));
    }
    let den_poly = expand(&frac.den.c, &frac.den.b);
    let den_terms = to_terms(&[], &frac.den.coeff, &den_poly);
    Ok((
        gens,
        RatioCertificate { numerator: Certificate::new(num_terms), denominator: Certificate::new(den_terms) },
    ))
}
