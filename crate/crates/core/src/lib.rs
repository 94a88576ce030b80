//! Alternating Bell-type inequalities for partial separability in
//! `N`-particle systems.
//!
//! * [`inequality`] builds the alternating sign tensors and evaluates
//!   inequality left-hand sides on correlation data.
//! * [`bound`] computes exact hybrid hidden-variable bounds by enumeration,
//!   along with the minimality, admissibility and μ-sequence conditions.
//! * [`quantum`] evaluates the inequalities on statevectors, GHZ states and
//!   biseparable ensembles, and maximizes violations numerically.
//! * [`hv_model`] represents, samples and estimates partially separable
//!   hidden-variable models and measurement-count data.
//! * [`certify`] turns counts into a per-variant violation verdict.

pub mod bound;
pub mod certify;
pub mod error;
pub mod exec;
pub mod hv_model;
pub mod inequality;
pub mod quantum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use inequality::{CoefficientTensor, CorrelationTensor, MultiIndex, SignVariant};
