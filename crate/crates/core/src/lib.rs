//! Exact Hurwitz numbers, symmetric-group characters, Schur functions and
//! Weingarten calculus, with brute-force, Wick and Monte Carlo cross-checks
//! for products of random Hermitian matrices.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the usual
//! choices.

pub mod characters;
pub mod error;
pub mod exact;
pub mod hurwitz;
pub mod mc;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod schur;
pub mod series;
pub mod verify;
pub mod weingarten;

use num_complex::{Complex32, Complex64};
use num_rational::BigRational;

pub use error::{Error, ErrorKind, Result};
pub use exact::ExactScalar;
pub use partition::Partition;
pub use scalar::Scalar;
pub use schur::PowerSumSpec;

pub type ExactPowerSums = PowerSumSpec<BigRational>;
pub type PowerSums64 = PowerSumSpec<f64>;
pub type PowerSums32 = PowerSumSpec<f32>;
pub type ComplexPowerSums = PowerSumSpec<Complex64>;
pub type ComplexPowerSums32 = PowerSumSpec<Complex32>;

/// Crate version embedded in every output document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn serde_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&exact::format_rational(r))
}
