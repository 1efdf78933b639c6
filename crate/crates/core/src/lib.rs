//! Steady-state cooling of two mechanical modes under cold-damping feedback
//! with an auxiliary mechanical coupling between them.
//!
//! Two independent routes to the position spectra are provided: the
//! closed-form ladder in [`analytic`] and a direct frequency-domain solve of
//! the linearized Langevin system in [`oracle`].

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analytic;
pub mod config;
pub mod cooling;
pub mod error;
pub mod model;
pub mod modes;
pub mod numeric;
pub mod oracle;
pub mod quadrature;
pub mod sweep;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    BareParams, DetuningMode, FeedbackControls, NormalizedHamiltonian, SteadyState, SystemParams,
    ThermalEnvironment,
};
