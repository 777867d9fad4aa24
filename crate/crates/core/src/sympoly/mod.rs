//! Symbolic cycle index polynomials and exact identity verification.
//!
//! `b_m` is built from `b_{m+1} = sum_{j=1}^{m+1} (m)_{j-1} c_j b_{m+1-j}`
//! and cross-checked against two enumerations in [`cycle`]. The identity
//! verifiers expand both sides of each relation as [`MultiPoly`] values and
//! compare them exactly; a failure carries the difference polynomial.

pub mod cycle;
pub mod identities;
pub mod poly;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

pub use cycle::{bruteforce_b, cycle_types, BruteForce, CycleType};
pub use identities::{
    verify_hansen_identities, verify_prop2, verify_prop22, verify_prop4, verify_prop_identities,
    verify_theorem1_proof_identity, IdentityCheck,
};
pub use poly::{Alphabet, MultiPoly};

use crate::seqcore::falling_factorial;

pub(crate) fn ff(m: usize, k: usize) -> BigRational {
    BigRational::from_integer(falling_factorial(m as u64, k as u64))
}

/// `c_j` over `alphabet`, with `c_0 = 1`.
pub fn weight_var(alphabet: &Arc<Alphabet>, j: usize) -> MultiPoly {
    if j == 0 {
        MultiPoly::one(alphabet)
    } else {
        MultiPoly::var(alphabet, j - 1)
    }
}

/// `b_0..b_m` over `c_1..c_n` with `n = max(m, alphabet_size, 1)`.
pub fn symbolic_b_upto(m: usize, alphabet_size: usize) -> Vec<MultiPoly> {
    let alpha = Alphabet::weights(m.max(alphabet_size));
    let mut b = vec![MultiPoly::one(&alpha)];
    for n in 0..m {
        let mut next = MultiPoly::zero(&alpha);
        for j in 1..=n + 1 {
            let term = (&weight_var(&alpha, j) * &b[n + 1 - j]).scalar_mul(&ff(n, j - 1));
            next = &next + &term;
        }
        b.push(next);
    }
    b
}

/// `b_m` as a polynomial in `c_1..c_m` (nonnegative integer coefficients).
pub fn symbolic_b(m: usize) -> MultiPoly {
    symbolic_b_upto(m, m).pop().unwrap()
}

/// `a_m = b_m / m!`.
pub fn symbolic_a(m: usize) -> MultiPoly {
    let f = BigRational::from_integer(crate::seqcore::factorial(m));
    symbolic_b(m).scalar_mul(&(BigRational::from_integer(1.into()) / f))
}

/// Sum of all coefficients, i.e. the value at `c_j = 1`.
pub fn coefficient_sum(p: &MultiPoly) -> BigRational {
    p.terms().fold(BigRational::zero(), |acc, (_, c)| acc + c)
}
