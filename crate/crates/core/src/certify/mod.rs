//! Nonnegative integer certificates over generator cones.
//!
//! A [`Certificate`] is a list of generator multisets with nonnegative
//! integer coefficients; its expansion is `sum coeff * prod gens`. A
//! [`RatioCertificate`] pairs a numerator over a `Z` set with a denominator
//! that only uses the `c_j` generators.
//!
//! Three producers exist: [`certify_in_cone`] (exact search within a degree
//! bound), [`certify_poly2`] (inductive construction of ratio certificates)
//! and the exploratory [`conjecture_search`] / [`multi_family_search`].

mod generators;
mod lp;
mod ratio;
mod search;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::sympoly::{symbolic_b_upto, MultiPoly};
use crate::{Error, Result};

pub use generators::{
    build_generator_set, build_union_generator_set, family_var, weight_alphabet, GenKind, GenShape,
    Generator, GeneratorJson, GeneratorSet,
};
pub use ratio::{certify_poly2, MAX_POLY2_N};
pub use search::{certify_in_cone, SearchOutcome, MAX_CANDIDATES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTerm {
    /// Sorted multiset of generator indices; empty means the constant 1.
    pub gen_indices: Vec<usize>,
    pub coeff: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Certificate {
    terms: Vec<CertTerm>,
}

impl Certificate {
    pub fn empty() -> Self {
        Certificate::default()
    }

    /// Sorts each multiset, merges repeats and drops zero coefficients.
    /// Ordering: fewer factors first, then lexicographic.
    pub fn new(terms: impl IntoIterator<Item = CertTerm>) -> Self {
        let mut merged: BTreeMap<(usize, Vec<usize>), BigInt> = BTreeMap::new();
        for mut t in terms {
            t.gen_indices.sort_unstable();
            *merged.entry((t.gen_indices.len(), t.gen_indices)).or_insert_with(BigInt::zero) += t.coeff;
        }
        Certificate {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((_, gen_indices), coeff)| CertTerm { gen_indices, coeff })
                .collect(),
        }
    }

    pub fn terms(&self) -> &[CertTerm] {
        &self.terms
    }

    /// Mutable access, for tests that tamper with coefficients.
    pub fn terms_mut(&mut self) -> &mut Vec<CertTerm> {
        &mut self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn check_indices(&self, gens: &GeneratorSet) -> Result<()> {
        for t in &self.terms {
            if let Some(&bad) = t.gen_indices.iter().find(|&&i| i >= gens.len()) {
                return Err(Error::invalid(format!(
                    "generator index {bad} out of range (set has {})",
                    gens.len()
                )));
            }
        }
        Ok(())
    }

    pub fn only_singles(&self, gens: &GeneratorSet) -> bool {
        self.terms.iter().all(|t| {
            t.gen_indices
                .iter()
                .all(|&i| matches!(gens.get(i).map(|g| g.shape), Some(GenShape::Single { .. })))
        })
    }

    /// Exact expansion. Single-variable generators are folded into monomials
    /// so each distinct pair-factor product is multiplied out only once.
    pub fn expand(&self, gens: &GeneratorSet) -> Result<MultiPoly> {
        self.check_indices(gens)?;
        let alpha = gens.alphabet();
        let mut grouped: BTreeMap<Vec<usize>, MultiPoly> = BTreeMap::new();
        for t in &self.terms {
            let mut exps = vec![0u32; alpha.len()];
            let mut pairs = Vec::new();
            for &i in &t.gen_indices {
                match gens.generators()[i].shape {
                    GenShape::Single { family, j } => exps[family * gens.max_index + j - 1] += 1,
                    GenShape::Pair { .. } => pairs.push(i),
                }
            }
            grouped
                .entry(pairs)
                .or_insert_with(|| MultiPoly::zero(alpha))
                .add_term(exps, BigRational::from_integer(t.coeff.clone()));
        }
        let mut out = MultiPoly::zero(alpha);
        for (pairs, mono) in grouped {
            let mut p = mono;
            for i in pairs {
                p = &p * &gens.generators()[i].poly;
            }
            out = &out + &p;
        }
        Ok(out)
    }

    /// Human-readable sum such as `2*c_1*y_1_1 + c_3`.
    pub fn render(&self, gens: &GeneratorSet) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut factors: Vec<String> = Vec::new();
                let mut k = 0;
                while k < t.gen_indices.len() {
                    let i = t.gen_indices[k];
                    let run = t.gen_indices[k..].iter().take_while(|&&x| x == i).count();
                    let name = gens.get(i).map(|g| g.name.clone()).unwrap_or_else(|| format!("g{i}"));
                    factors.push(if run > 1 { format!("{name}^{run}") } else { name });
                    k += run;
                }
                match (t.coeff.is_one(), factors.is_empty()) {
                    (_, true) => t.coeff.to_string(),
                    (true, false) => factors.join("*"),
                    (false, false) => format!("{}*{}", t.coeff, factors.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }

    fn to_json_terms(&self) -> Vec<CertTermJson> {
        self.terms
            .iter()
            .map(|t| CertTermJson { gen_indices: t.gen_indices.clone(), coeff: t.coeff.to_string() })
            .collect()
    }

    fn from_json_terms(terms: &[CertTermJson]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|t| {
                let coeff = t
                    .coeff
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer coefficient {:?}", t.coeff)))?;
                Ok(CertTerm { gen_indices: t.gen_indices.clone(), coeff })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate::new(parsed))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCertificate {
    pub numerator: Certificate,
    pub denominator: Certificate,
}

#[derive(Debug, Clone, Copy)]
pub enum CertificateRef<'a> {
    Plain(&'a Certificate),
    Ratio(&'a RatioCertificate),
}

impl<'a> From<&'a Certificate> for CertificateRef<'a> {
    fn from(c: &'a Certificate) -> Self {
        CertificateRef::Plain(c)
    }
}

impl<'a> From<&'a RatioCertificate> for CertificateRef<'a> {
    fn from(c: &'a RatioCertificate) -> Self {
        CertificateRef::Ratio(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Pass,
    Fail {
        reason: String,
        /// `expansion - target` (ratio form: `numerator - target * denominator`).
        difference: Option<MultiPoly>,
    },
}

impl Validation {
    pub fn passed(&self) -> bool {
        matches!(self, Validation::Pass)
    }

    fn fail(reason: impl Into<String>) -> Self {
        Validation::Fail { reason: reason.into(), difference: None }
    }
}

fn nonnegative(cert: &Certificate) -> bool {
    cert.terms.iter().all(|t| !t.coeff.is_negative())
}

/// Exact re-expansion check.
pub fn validate_certificate<'a>(
    cert: impl Into<CertificateRef<'a>>,
    target: &MultiPoly,
    gens: &GeneratorSet,
) -> Validation {
    let target = match target.extend_to(gens.alphabet()) {
        Ok(t) => t,
        Err(e) => return Validation::fail(e.to_string()),
    };
    match cert.into() {
        CertificateRef::Plain(c) => {
            if !nonnegative(c) {
                return Validation::fail("negative coefficient");
            }
            let expanded = match c.expand(gens) {
                Ok(p) => p,
                Err(e) => return Validation::fail(e.to_string()),
            };
            let diff = &expanded - &target;
            if diff.is_zero() {
                Validation::Pass
            } else {
                Validation::Fail { reason: "expansion differs from target".into(), difference: Some(diff) }
            }
        }
        CertificateRef::Ratio(r) => {
            if !nonnegative(&r.numerator) || !nonnegative(&r.denominator) {
                return Validation::fail("negative coefficient");
            }
            if !r.denominator.only_singles(gens) {
                return Validation::fail("denominator uses a non-variable generator");
            }
            let (num, den) = match (r.numerator.expand(gens), r.denominator.expand(gens)) {
                (Ok(n), Ok(d)) => (n, d),
                (Err(e), _) | (_, Err(e)) => return Validation::fail(e.to_string()),
            };
            if den.is_zero() {
                return Validation::fail("denominator expands to zero");
            }
            let diff = &num - &(&target * &den);
            if diff.is_zero() {
                Validation::Pass
            } else {
                Validation::Fail {
                    reason: "numerator differs from target times denominator".into(),
                    difference: Some(diff),
                }
            }
        }
    }
}

/// Compares two polynomials at `count` seeded random positive rational points.
pub fn agree_at_random_points(p: &MultiPoly, q: &MultiPoly, count: usize, seed: u64) -> bool {
    let Ok(diff) = p.try_sub(q) else {
        return false;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = diff.alphabet().len();
    (0..count).all(|_| {
        let point: Vec<BigRational> = (0..n)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-50i64..=50)), BigInt::from(rng.gen_range(1i64..=17))))
            .collect();
        diff.eval(&point).is_zero()
    })
}

fn check_mn(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::invalid(format!("need 1 <= m <= n, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// `(n+1) b_m b_n - m b_{m-1} b_{n+1}` over `c_1..c_{n+1}`.
pub fn poly1_target(m: usize, n: usize) -> Result<MultiPoly> {
    check_mn(m, n)?;
    let b = symbolic_b_upto(n + 1, n + 1);
    let lhs = (&b[m] * &b[n]).scalar_mul_int((n + 1) as i64);
    let rhs = (&b[m - 1] * &b[n + 1]).scalar_mul_int(m as i64);
    Ok(&lhs - &rhs)
}

/// `m b_{m-1} b_{n+1} - (n+1) b_m b_n`.
pub fn poly2_target(m: usize, n: usize) -> Result<MultiPoly> {
    Ok(poly1_target(m, n)?.neg())
}

/// `(n+1) B_m B_n - m B_{m-1} B_{n+1}` where `B` is built from the summed
/// weights `C_j = sum_i c_{i,j}` of `w` families.
pub fn multi_family_target(w: usize, m: usize, n: usize) -> Result<MultiPoly> {
    if w == 0 {
        return Err(Error::invalid("need at least one family"));
    }
    let single = poly1_target(m, n)?;
    let alpha = weight_alphabet(w, n + 1);
    let summed: Vec<MultiPoly> = (1..=n + 1)
        .map(|j| {
            (0..w).fold(MultiPoly::zero(&alpha), |acc, i| &acc + &family_var(&alpha, n + 1, i, j))
        })
        .collect();
    single.substitute(&summed)
}

/// Searches for a pure `Z` certificate of `m b_{m-1} b_{n+1} - (n+1) b_m b_n`.
/// `NotFound` only reports that the bound was exhausted.
pub fn conjecture_search(m: usize, n: usize, degree_bound: u32) -> Result<(GeneratorSet, SearchOutcome)> {
    let gens = build_generator_set(GenKind::Z, n + 1)?;
    let target = poly2_target(m, n)?;
    let out = certify_in_cone(&target, &gens, degree_bound)?;
    Ok((gens, out))
}

/// Searches the union of `w` independent `Y` sets for [`multi_family_target`].
pub fn multi_family_search(
    w: usize,
    m: usize,
    n: usize,
    degree_bound: u32,
) -> Result<(GeneratorSet, SearchOutcome)> {
    let gens = build_union_generator_set(GenKind::Y, w, n + 1)?;
    let target = multi_family_target(w, m, n)?;
    let out = certify_in_cone(&target, &gens, degree_bound)?;
    Ok((gens, out))
}

/// `Y` certificate for [`poly1_target`] at the default bound `deg(target)`.
pub fn certify_poly1(m: usize, n: usize) -> Result<(GeneratorSet, SearchOutcome)> {
    let gens = build_generator_set(GenKind::Y, n + 1)?;
    let target = poly1_target(m, n)?;
    let bound = target.total_degree();
    let out = certify_in_cone(&target, &gens, bound)?;
    Ok((gens, out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertTermJson {
    pub gen_indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenominatorJson {
    pub terms: Vec<CertTermJson>,
}

/// Wire format shared by plain and ratio certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: GenKind,
    pub families: usize,
    pub max_index: usize,
    pub generators: Vec<GeneratorJson>,
    pub terms: Vec<CertTermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator: Option<DenominatorJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodedCertificate {
    Plain(Certificate),
    Ratio(RatioCertificate),
}

impl DecodedCertificate {
    pub fn as_ref(&self) -> CertificateRef<'_> {
        match self {
            DecodedCertificate::Plain(c) => CertificateRef::Plain(c),
            DecodedCertificate::Ratio(r) => CertificateRef::Ratio(r),
        }
    }
}

impl CertificateJson {
    pub fn plain(cert: &Certificate, gens: &GeneratorSet) -> Self {
        CertificateJson {
            kind: gens.kind,
            families: gens.families,
            max_index: gens.max_index,
            generators: gens.names(),
            terms: cert.to_json_terms(),
            denominator: None,
        }
    }

    pub fn ratio(cert: &RatioCertificate, gens: &GeneratorSet) -> Self {
        CertificateJson {
            denominator: Some(DenominatorJson { terms: cert.denominator.to_json_terms() }),
            ..CertificateJson::plain(&cert.numerator, gens)
        }
    }

    /// Rebuilds the generator set and checks it against the listed generators.
    pub fn decode(&self) -> Result<(GeneratorSet, DecodedCertificate)> {
        let gens = build_union_generator_set(self.kind, self.families, self.max_index)?;
        if gens.names() != self.generators {
            return Err(Error::invalid("generator list does not match the declared set"));
        }
        let num = Certificate::from_json_terms(&self.terms)?;
        num.check_indices(&gens)?;
        let cert = match &self.denominator {
            None => DecodedCertificate::Plain(num),
            Some(d) => {
                let den = Certificate::from_json_terms(&d.terms)?;
                den.check_indices(&gens)?;
                DecodedCertificate::Ratio(RatioCertificate { numerator: num, denominator: den })
            }
        };
        Ok((gens, cert))
    }
}
