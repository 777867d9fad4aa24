//! Exact checks of the polynomial identities behind the combinatorial
//! arguments: the deletion identities over `S_{m+1}`, the diagonal
//! rewrite used for log-convexity of `b`, and the two compound Poisson
//! step identities in `r_k` and `P_0`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::cycle::{self, cycle_length_through, cycle_type_of, delete_last, for_each_permutation};
use super::poly::{Alphabet, MultiPoly};
use super::{ff, symbolic_b_upto, weight_var};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub params: String,
    pub passed: bool,
    /// `lhs - rhs`; empty when the identity holds.
    pub difference: MultiPoly,
    pub witness: Option<String>,
}

impl IdentityCheck {
    pub(crate) fn compare(identity: &'static str, params: String, lhs: &MultiPoly, rhs: &MultiPoly) -> Self {
        let difference = lhs - rhs;
        IdentityCheck {
            identity,
            passed: difference.is_zero(),
            witness: (!difference.is_zero()).then(|| format!("lhs - rhs = {difference}")),
            params,
            difference,
        }
    }
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `(m+1) b_m = sum_{j=1}^{m+1} (m)_{j-1} c_{j-1} b_{m+1-j}` with `c_0 = 1`.
pub fn verify_prop4(m: usize) -> IdentityCheck {
    let b = symbolic_b_upto(m, m.max(1));
    let alpha = b[0].alphabet().clone();
    let lhs = b[m].scalar_mul(&rat(m + 1));
    let mut rhs = MultiPoly::zero(&alpha);
    for j in 1..=m + 1 {
        rhs = &rhs + &(&weight_var(&alpha, j - 1) * &b[m + 1 - j]).scalar_mul(&ff(m, j - 1));
    }
    IdentityCheck::compare("deletion_recursion", format!("m={m}"), &lhs, &rhs)
}

fn check_enumeration_size(m: usize) -> Result<()> {
    if m + 1 > cycle::MAX_PERMUTATION_M {
        return Err(Error::SizeLimit {
            what: "m + 1 (permutations)",
            got: m + 1,
            limit: cycle::MAX_PERMUTATION_M,
        });
    }
    Ok(())
}

/// `sum_{sigma in S_{m+1}} wt(sigma') = (m+1) b_m`, where `sigma'` deletes the
/// largest element from its cycle, by explicit enumeration.
pub fn verify_prop2(m: usize) -> Result<IdentityCheck> {
    check_enumeration_size(m)?;
    let alpha = Alphabet::weights(m.max(1));
    let mut lhs = MultiPoly::zero(&alpha);
    let mut counts = std::collections::HashMap::new();
    for_each_permutation(m + 1, |p| {
        *counts.entry(cycle_type_of(&delete_last(p))).or_insert(0u64) += 1;
    });
    for (ct, n) in counts {
        let w = if m == 0 { MultiPoly::one(&alpha) } else { ct.weight(&alpha) };
        lhs = &lhs + &w.scalar_mul(&rat(n as usize));
    }
    let rhs = symbolic_b_upto(m, m.max(1))[m].scalar_mul(&rat(m + 1));
    Ok(IdentityCheck::compare("deletion_sum", format!("m={m}"), &lhs, &rhs))
}

/// `c_{j-1} wt(sigma) = c_j wt(sigma')` for every `sigma in S_{m+1}` whose
/// largest element sits in a `j`-cycle. Returns the first failing
/// permutation as witness.
pub fn verify_prop22(m: usize) -> Result<IdentityCheck> {
    check_enumeration_size(m)?;
    let n = m + 1;
    let alpha = Alphabet::weights(n);
    let mut witness = None;
    let mut checked = 0u64;
    for_each_permutation(n, |p| {
        if witness.is_some() {
            return;
        }
        checked += 1;
        let j = cycle_length_through(p, n - 1);
        let mut lhs = cycle_type_of(p).multiplicities;
        lhs.resize(n, 0);
        if j >= 2 {
            lhs[j - 2] += 1;
        }
        let mut rhs = cycle_type_of(&delete_last(p)).multiplicities;
        rhs.resize(n, 0);
        rhs[j - 1] += 1;
        if lhs != rhs {
            witness = Some(format!("sigma = {p:?}, j = {j}"));
        }
    });
    let zero = MultiPoly::zero(&alpha);
    Ok(IdentityCheck {
        identity: "deletion_weight",
        params: format!("m={m}, permutations={checked}"),
        passed: witness.is_none(),
        difference: zero,
        witness,
    })
}

/// All three deletion identities at `m`.
pub fn verify_prop_identities(m: usize) -> Result<Vec<IdentityCheck>> {
    Ok(vec![verify_prop4(m), verify_prop2(m)?, verify_prop22(m)?])
}

/// The diagonal rewrite
///
/// ```text
/// c_m (m b_{m-1} b_{m+1} - (m+1) b_m^2)
///   = sum_{j=1}^m (m)_{j-1} (c_{m+1} c_{j-1} - c_m c_j) ((m+1-j) b_m b_{m-j} - m b_{m-1} b_{m+1-j})
///   + b_m sum_{j=1}^m (m-1)_{j-1} b_{m-j} (c_{m+1} c_{j-1} - c_m c_j)
/// ```
///
/// together with the intermediate form
/// `m b_{m-1} (c_m b_{m+1} - (m+1) c_{m+1} b_m) - (m+1) b_m (c_m b_m - m c_{m+1} b_{m-1})`.
pub fn verify_theorem1_proof_identity(m: usize) -> Result<Vec<IdentityCheck>> {
    if m == 0 {
        return Err(Error::invalid("the diagonal rewrite needs m >= 1"));
    }
    let b = symbolic_b_upto(m + 1, m + 1);
    let alpha: Arc<Alphabet> = b[0].alphabet().clone();
    let c = |j: usize| weight_var(&alpha, j);
    let lhs = &c(m) * &(&(&b[m - 1] * &b[m + 1]).scalar_mul(&rat(m)) - &(&b[m] * &b[m]).scalar_mul(&rat(m + 1)));

    let first = &b[m - 1].scalar_mul(&rat(m)) * &(&(&c(m) * &b[m + 1]) - &(&c(m + 1) * &b[m]).scalar_mul(&rat(m + 1)));
    let second = &b[m].scalar_mul(&rat(m + 1)) * &(&(&c(m) * &b[m]) - &(&c(m + 1) * &b[m - 1]).scalar_mul(&rat(m)));
    let intermediate = &first - &second;

    let z = |j: usize| &(&c(m + 1) * &c(j - 1)) - &(&c(m) * &c(j));
    let mut rhs = MultiPoly::zero(&alpha);
    for j in 1..=m {
        let bracket = &(&b[m] * &b[m - j]).scalar_mul(&rat(m + 1 - j)) - &(&b[m - 1] * &b[m + 1 - j]).scalar_mul(&rat(m));
        rhs = &rhs + &(&z(j) * &bracket).scalar_mul(&ff(m, j - 1));
    }
    let mut tail = MultiPoly::zero(&alpha);
    for j in 1..=m {
        tail = &tail + &(&b[m - j] * &z(j)).scalar_mul(&ff(m - 1, j - 1));
    }
    rhs = &rhs + &(&b[m] * &tail);

    Ok(vec![
        IdentityCheck::compare("diagonal_rewrite_split", format!("m={m}"), &lhs, &intermediate),
        IdentityCheck::compare("diagonal_rewrite", format!("m={m}"), &lhs, &rhs),
    ])
}

/// Symbolic `P_0..P_n` from `(k+1) P_{k+1} = sum_{i<=k} r_i P_{k-i}` over the
/// alphabet `{P_0, r_0, ..., r_{n-1}}`.
pub fn symbolic_cp_masses(n: usize) -> Vec<MultiPoly> {
    let mut names = vec!["P_0".to_string()];
    names.extend((0..n.max(1)).map(|k| format!("r_{k}")));
    let alpha = Alphabet::new(names);
    let r = |k: usize| MultiPoly::var(&alpha, k + 1);
    let mut p = vec![MultiPoly::var(&alpha, 0)];
    for k in 0..n {
        let mut s = MultiPoly::zero(&alpha);
        for i in 0..=k {
            s = &s + &(&r(i) * &p[k - i]);
        }
        p.push(s.scalar_mul(&(BigRational::from_integer(1.into()) / rat(k + 1))));
    }
    p
}

/// The two step identities relating `P` and `r` (with `P_{-1} = 0`):
///
/// ```text
/// m(m+2)(P_{m+1}^2 - P_m P_{m+2})
///   = P_{m+1}(r_0 P_m - P_{m+1})
///   + sum_{l=0}^m sum_{k=0}^l (P_{m-l} P_{m-k-1} - P_{m-k} P_{m-l-1})(r_{k+1} r_l - r_{l+1} r_k)
///
/// r_{m+1}(m+2)(P_{m+1} P_{m+3} - P_{m+2}^2)
///   = P_{m+1}(r_{m+2} P_{m+2} - r_{m+1} P_{m+3})
///   + sum_{k=0}^m (P_{m-k} P_{m+2} - P_{m+1} P_{m-k+1})(r_{m+2} r_k - r_{k+1} r_{m+1})
/// ```
pub fn verify_hansen_identities(m: usize) -> Vec<IdentityCheck> {
    let p = symbolic_cp_masses(m + 3);
    let alpha = p[0].alphabet().clone();
    let zero = MultiPoly::zero(&alpha);
    let pp = |i: isize| if i < 0 { zero.clone() } else { p[i as usize].clone() };
    let r = |k: usize| MultiPoly::var(&alpha, k + 1);
    let mi = m as isize;

    let lhs = (&(&pp(mi + 1) * &pp(mi + 1)) - &(&pp(mi) * &pp(mi + 2))).scalar_mul(&rat(m * (m + 2)));
    let mut rhs = &pp(mi + 1) * &(&(&r(0) * &pp(mi)) - &pp(mi + 1));
    for l in 0..=m {
        for k in 0..=l {
            let (l_, k_) = (l as isize, k as isize);
            let pdiff = &(&pp(mi - l_) * &pp(mi - k_ - 1)) - &(&pp(mi - k_) * &pp(mi - l_ - 1));
            let rdiff = &(&r(k + 1) * &r(l)) - &(&r(l + 1) * &r(k));
            rhs = &rhs + &(&pdiff * &rdiff);
        }
    }
    let concave = IdentityCheck::compare("cp_concave_step", format!("m={m}"), &lhs, &rhs);

    let lhs2 = (&r(m + 1) * &(&(&pp(mi + 1) * &pp(mi + 3)) - &(&pp(mi + 2) * &pp(mi + 2)))).scalar_mul(&rat(m + 2));
    let mut rhs2 = &pp(mi + 1) * &(&(&r(m + 2) * &pp(mi + 2)) - &(&r(m + 1) * &pp(mi + 3)));
    for k in 0..=m {
        let k_ = k as isize;
        let pdiff = &(&pp(mi - k_) * &pp(mi + 2)) - &(&pp(mi + 1) * &pp(mi - k_ + 1));
        let rdiff = &(&r(m + 2) * &r(k)) - &(&r(k + 1) * &r(m + 1));
        rhs2 = &rhs2 + &(&pdiff * &rdiff);
    }
    let convex = IdentityCheck::compare("cp_convex_step", format!("m={m}"), &lhs2, &rhs2);
    vec![concave, convex]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_recurrence_small() {
        for m in 0..6 {
            assert!(verify_prop4(m).passed, "m = {m}");
        }
    }

    #[test]
    fn enumeration_identities_small() {
        for m in 0..=4 {
            for chk in verify_prop_identities(m).unwrap() {
                assert!(chk.passed, "{} at m = {m}: {:?}", chk.identity, chk.witness);
            }
        }
    }

    #[test]
    fn prop_enumeration_limit() {
        assert!(matches!(verify_prop2(9), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn diagonal_rewrite_small() {
        for m in 1..=4 {
            for chk in verify_theorem1_proof_identity(m).unwrap() {
                assert!(chk.passed, "{} m = {m}: {:?}", chk.identity, chk.witness);
            }
        }
        assert!(verify_theorem1_proof_identity(0).is_err());
    }

    #[test]
    fn hansen_small() {
        for m in 0..=3 {
            for chk in verify_hansen_identities(m) {
                assert!(chk.passed, "{} m = {m}", chk.identity);
            }
        }
    }

    #[test]
    fn second_mass_by_hand() {
        // 2 P_2 = r_0 P_1 + r_1 P_0 with P_1 = r_0 P_0
        let p = symbolic_cp_masses(2);
        assert_eq!(p[1].to_string(), "P_0*r_0");
        assert_eq!(p[2].to_string(), "1/2*P_0*r_0^2 + 1/2*P_0*r_1");
    }

    #[test]
    fn broken_identity_reports_difference() {
        let a = Alphabet::weights(2);
        let lhs = MultiPoly::var(&a, 0);
        let rhs = MultiPoly::var(&a, 1);
        let chk = IdentityCheck::compare("demo", String::new(), &lhs, &rhs);
        assert!(!chk.passed);
        assert_eq!(chk.difference.to_string(), "c_1 - c_2");
    }
}
