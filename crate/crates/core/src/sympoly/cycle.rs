//! Cycle types of permutations and the two brute-force oracles for `b_m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::poly::{Alphabet, MultiPoly};
use crate::seqcore::factorial;
use crate::{Error, Result};

pub const MAX_PERMUTATION_M: usize = 9;
pub const MAX_CYCLE_TYPE_M: usize = 40;

/// A partition of `m` given by multiplicities: `multiplicities[j-1]` is the
/// number of `j`-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType {
    pub multiplicities: Vec<u32>,
}

impl CycleType {
    pub fn degree(&self) -> usize {
        self.multiplicities.iter().enumerate().map(|(i, &k)| (i + 1) * k as usize).sum()
    }

    /// `m! / prod_j (j^{m_j} m_j!)`.
    pub fn count(&self) -> BigInt {
        let mut denom = BigInt::one();
        for (i, &k) in self.multiplicities.iter().enumerate() {
            let j = BigInt::from(i + 1);
            denom *= num_traits::pow(j, k as usize) * factorial(k as usize);
        }
        factorial(self.degree()) / denom
    }

    /// The monomial `prod_j c_j^{m_j}` over `alphabet` (which must cover `c_1..c_m`).
    pub fn weight(&self, alphabet: &std::sync::Arc<Alphabet>) -> MultiPoly {
        let mut e = vec![0; alphabet.len()];
        e[..self.multiplicities.len()].copy_from_slice(&self.multiplicities);
        MultiPoly::monomial(alphabet, e, BigRational::one())
    }
}

/// Every cycle type of degree `m`, in a fixed order.
pub fn cycle_types(m: usize) -> Vec<CycleType> {
    let mut out = Vec::new();
    let mut mult = vec![0u32; m];
    fn rec(rest: usize, max_part: usize, mult: &mut Vec<u32>, out: &mut Vec<CycleType>) {
        if rest == 0 {
            out.push(CycleType { multiplicities: mult.clone() });
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            mult[part - 1] += 1;
            rec(rest - part, part, mult, out);
            mult[part - 1] -= 1;
        }
    }
    rec(m, m, &mut mult, &mut out);
    out
}

/// Cycle type of a permutation of `0..n` given in one-line form.
pub fn cycle_type_of(perm: &[usize]) -> CycleType {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut mult = vec![0u32; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        mult[len - 1] += 1;
    }
    CycleType { multiplicities: mult }
}

/// Length of the cycle of `perm` through `x`.
pub fn cycle_length_through(perm: &[usize], x: usize) -> usize {
    let mut len = 1;
    let mut i = perm[x];
    while i != x {
        i = perm[i];
        len += 1;
    }
    len
}

/// Removes the largest element `n-1` from its cycle: its predecessor is
/// linked to its successor. A fixed point simply disappears.
pub fn delete_last(perm: &[usize]) -> Vec<usize> {
    let last = perm.len() - 1;
    let succ = perm[last];
    perm[..last]
        .iter()
        .map(|&img| if img == last { succ } else { img })
        .collect()
}

/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BruteForce {
    Permutations,
    CycleTypes,
}

/// `b_m = sum_{sigma in S_m} prod_j c_j^{N_j(sigma)}` by enumeration.
pub fn bruteforce_b(m: usize, method: BruteForce) -> Result<MultiPoly> {
    let alpha = Alphabet::weights(m);
    match method {
        BruteForce::Permutations => {
            if m > MAX_PERMUTATION_M {
                return Err(Error::SizeLimit { what: "m (permutations)", got: m, limit: MAX_PERMUTATION_M });
            }
            let mut counts: HashMap<CycleType, u64> = HashMap::new();
            for_each_permutation(m, |p| *counts.entry(cycle_type_of(p)).or_default() += 1);
            let mut out = MultiPoly::zero(&alpha);
            if m == 0 {
                return Ok(MultiPoly::one(&alpha));
            }
            for (ct, n) in counts {
                let w = ct.weight(&alpha);
                out = &out + &w.scalar_mul(&BigRational::from_integer(BigInt::from(n)));
            }
            Ok(out)
        }
        BruteForce::CycleTypes => {
            if m > MAX_CYCLE_TYPE_M {
                return Err(Error::SizeLimit { what: "m (cycle types)", got: m, limit: MAX_CYCLE_TYPE_M });
            }
            if m == 0 {
                return Ok(MultiPoly::one(&alpha));
            }
            let terms = cycle_types(m).into_iter().map(|ct| {
                let mut e = vec![0; alpha.len()];
                e[..m].copy_from_slice(&ct.multiplicities);
                (e, BigRational::from_integer(ct.count()))
            });
            Ok(MultiPoly::from_terms(&alpha, terms))
        }
    }
}
