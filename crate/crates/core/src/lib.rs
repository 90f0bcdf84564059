//! Certified computation of `sigma_n`, the largest `l` with `n + l - 1 <= e (n!)^(1/n)`,
//! its change points, and `n_a` (least `n` with `a^n <= n!`), on top of a small
//! interval arithmetic with directed rounding.
//!
//! The formula layer ([`atlas`]) is generic over [`Scalar`], so the same definitions
//! run certified on [`Certified`] or as quick estimates on [`Estimate`].
//!
//! ```
//! use sigma_lab::{sigma_exact, PrecisionPolicy};
//!
//! let cert = sigma_exact(55, &PrecisionPolicy::default()).unwrap();
//! assert_eq!(cert.sigma, 4);
//! ```

pub mod atlas;
pub mod changepoints;
pub mod decimal;
pub mod dyadic;
pub mod elementary;
pub mod error;
pub mod factorial;
pub mod interval;
pub mod scalar;
pub mod sigma;
pub mod verifier;

/// Rigorous enclosure of a real number.
pub type Certified = interval::BoundedReal;
/// Fast, uncertified evaluation of the same formulas.
pub type Estimate = f64;
/// Exact rationals, used for parsed input and series coefficients.
pub type Exact = num_rational::BigRational;

pub use atlas::{a_transform, alpha, delta, eval, FunctionId, ShiftParams};
pub use changepoints::{
    corollary_gap_check, enumerate_changepoints, first_n_with_sigma, quotient_report,
    ChangePointFinder, ChangePointRecord,
};
pub use dyadic::{Dyadic, Round};
pub use error::{Error, Result};
pub use factorial::{ln_factorial, LnFactorialMethod};
pub use interval::{compare_certified, BoundedReal, Comparison, PrecisionPolicy};
pub use scalar::Scalar;
pub use sigma::{n_a_of, n_a_of_rational, sigma_bracket, sigma_exact, t_value, CandidateBracket, NaResult, SigmaCertificate};
pub use verifier::{run_suite, CheckReport, Suite, SuiteConfig, Verdict};
