//! Higher-order confidence intervals for the parameter of a one-parameter
//! continuous family, based on the mean of a (possibly transformed) i.i.d.
//! sample.
//!
//! The classical normal-theory interval for a mean has coverage error
//! `O(n^-1/2)`. This crate drives that error down to `O(n^-(j+1)/2)` for a
//! chosen order `j` by combining
//!
//! * the Edgeworth expansion of the CDF of the standardized mean,
//! * the Cornish-Fisher quantile transforms `xi_nj` / `eta_nj` built from
//!   exact-rational Hermite-polynomial tables, and
//! * a parameter-dependent correction transform `S_nxj` for families whose
//!   standardized cumulants vary with the parameter.
//!
//! Three interval constructions are provided (constant-cumulant, monotone
//! pivot, general transform), together with two built-in Lehmann-alternative
//! models, an efficiency/robustness calculus (influence function, asymptotic
//! variance, efficiency relative to the maximum-likelihood choice), and a
//! deterministic Monte Carlo / exact-oracle coverage harness.

pub mod edgeworth;
pub mod efficiency;
pub mod error;
pub mod interval;
pub mod mc;
pub mod models;
pub mod poly;
pub mod special;

pub use edgeworth::{ExpansionSpec, StandardizedCumulants};
pub use error::{Error, Result};
pub use interval::{ConfidenceSpec, IntervalResult, Method};
pub use models::CumulantModel;
pub use poly::{Polynomial, Rational};
