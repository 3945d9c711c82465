//! Pushing a union of small bidisks around lattice translates off the
//! Fatou–Bieberbach domain `V = {|w| < 1 + |z|^2}`.
//!
//! The pieces are the strip smoother of a `{0, C}`-valued step function,
//! two shears `F1`, `F2` built from it, the Hénon basin map `Psi` whose
//! image lies in `V`, and a sampling verifier that emits a certificate.

mod config;
mod henon;
mod shears;
mod smoother;
mod verify;

pub use config::AvoidanceConfig;
pub use henon::{
    adapted_norm, escape_radius, henon_backward, henon_forward, in_v, in_v_r, linear_part, v_r_radius, HenonSystem,
    Membership,
};
pub use shears::{build_f1, build_f2, F1Map, F2Map};
pub use smoother::{default_x_max, max_epsilon, Smoothed, StepFunction, StripSmoother};
pub use verify::{
    bidisk_samples, checks, verify_avoidance, verify_avoidance_unchecked, verify_with, Case, Certificate, Constants,
    Counts, Diagnostics, Inequality, Margins, SampleEval, SampleRecord,
};

use crate::lattice::LatticeError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AvoidanceError {
    #[error("configuration violates `{constraint}`: {detail}")]
    Config { constraint: String, detail: String },
    #[error("separating transform failed: {0}")]
    Transform(#[from] LatticeError),
    #[error("building F1 failed: {0}")]
    F1(String),
    #[error("building F2 failed: {0}")]
    F2(String),
    #[error("z = {z:?} is outside the strip |Im z - {gamma}| < {epsilon}")]
    OutsideStrip { z: [f64; 2], gamma: f64, epsilon: f64 },
    #[error("basin map did not converge in {n_max} steps (last step {residual:e})")]
    NoConvergence { n_max: usize, residual: f64 },
}

impl AvoidanceError {
    pub(crate) fn config(constraint: &str, detail: impl Into<String>) -> Self {
        AvoidanceError::Config { constraint: constraint.to_string(), detail: detail.into() }
    }
}
