//! Exact computation of the local G2 zeta integrals attached to the binary
//! cubic form with coefficients `(1, 0, b, c)` at primes `p = 5 mod 6`.
//!
//! - [`padic`]: valuations, absolute values, digit expansions and the
//!   standard additive character on rationals.
//! - [`symval`]: rational functions in `q = p^(-s)` with exact coefficients.
//! - [`haar`]: Haar-measure integration of locally constant functions and the
//!   closed-form character integrals.
//! - [`counting`]: congruence solution counts, Hensel lifting, cubic root
//!   counts and the norm-form count.
//! - [`g2`]: the 8x8 matrix realization of G2, the representations on binary
//!   cubics and the orbit classifier.
//! - [`integrals`]: the sixteen sub-integrals, their aggregation and the
//!   theorem check.

pub mod counting;
pub mod error;
pub mod g2;
pub mod haar;
pub mod integrals;
pub mod padic;
pub mod poly;
pub mod symval;

pub use error::{Error, Result};
