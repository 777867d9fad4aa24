//! Exact computations around the exponential formula
//!
//! ```text
//! sum_k a_k u^k = sum_k b_k u^k / k! = exp( sum_{j>=1} c_j u^j / j )
//! ```
//!
//! and the compound Poisson laws it encodes. Everything is exact: sequences are
//! `BigRational`, polynomials have rational coefficients, and inequality verdicts
//! are signs of exact differences. Transcendental quantities (the Poisson
//! prefactor, log-series weights) go through [`hiprec`], which carries rigorous
//! enclosures and refuses to decide a sign it cannot certify.
//!
//! Module map:
//!
//! - [`seqcore`]: truncated expansion `c -> (a, b)`, factorial rescaling.
//! - [`probseq`]: Panjer recursion, `r_k` recovery, infinite divisibility.
//! - [`ineqcheck`]: log-concavity/convexity reports and the refined bounds.
//! - [`sympoly`]: sparse multivariate polynomials, symbolic `b_m`, identity checks.
//! - [`certify`]: nonnegative certificates in generator cones.
//! - [`conv`]: ordinary and binomial convolution of several weight families.
//! - [`distexamples`]: geometric and log-series weights, seeded random shapes.

pub mod certify;
pub mod conv;
pub mod distexamples;
mod error;
pub mod hiprec;
pub mod ineqcheck;
pub mod probseq;
pub mod rational;
pub mod seqcore;
pub mod sympoly;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
