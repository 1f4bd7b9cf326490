//! Spectral functional calculus for quaternions inside the complexified
//! quaternion algebra 𝕄 = ℍ + iℍ.
//!
//! A quaternion `q` has the spectrum `σ(q) = {ℜq ± i‖ℑq‖}` in 𝕄. A function `F`
//! of one complex variable with values in 𝕄 yields
//! `F_ℍ(q) = F(s₊)ι₊ + F(s₋)ι₋`, which is a quaternion for every `q` exactly
//! when `F(λ̄) = bar F(λ)` (a stem function). For analytic `F` the same value
//! is the Cauchy transform `(2πi)⁻¹∮F(ζ)(ζ - q)⁻¹dζ` and, around real points,
//! a Taylor series in `q`. The crate evaluates all three routes and checks
//! slice regularity of the results numerically.
//!
//! ```
//! use num_complex::Complex64;
//! use quatcalc::calculus::fc_eval;
//! use quatcalc::cauchy::{cauchy_transform_default, taylor_eval};
//! use quatcalc::{PlaneDomain, Quaternion, Spectrum, StemFunctionSpec};
//!
//! let q = Quaternion::new(0.2, 0.0, 0.7, 0.0); // 0.2 + 0.7k
//! let exp = StemFunctionSpec::exp(40, PlaneDomain::disk(0.0, 0.0, 3.0))?;
//!
//! let spectral = fc_eval(&exp, q)?;
//! let cauchy = cauchy_transform_default(&exp, q)?.value;
//! let taylor = taylor_eval(&exp, q.re(), q, 40)?;
//!
//! assert!((spectral - cauchy).cstar_norm() < 1e-10);
//! assert!((spectral - taylor).cstar_norm() < 1e-10);
//! assert!(spectral.im.norm() < 1e-12);
//! assert_eq!(Spectrum::of(q).s_plus, Complex64::new(0.2, 0.7));
//! # Ok::<(), quatcalc::Error>(())
//! ```

pub mod algebra;
pub mod calculus;
pub mod cauchy;
pub mod cli;
pub mod domain;
pub mod error;
pub mod quadrature;
pub mod slice;
pub mod spectral;
pub mod stem;

pub use algebra::{Biquaternion, ComplexScalar, Mat2, Quaternion};
pub use domain::{saturate, Piece, PlaneDomain, QuaternionSet, SaturatedSet};
pub use error::{Error, Result};
pub use spectral::{IdempotentPair, Spectrum, UnitImaginary};
pub use stem::{Kind, StemFunctionSpec};
