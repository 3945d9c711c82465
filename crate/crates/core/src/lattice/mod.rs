//! Lattice translates in `C^2`: a linear change of coordinates separating
//! them into horizontal lines, and the straightening map that makes them
//! tame, both certified on a finite window.
//!
//! All computations here are in `f64`; certification compares against fixed
//! thresholds (unit gaps, `log 2`).

mod spec;
mod tame;
mod transform;

pub use spec::{LatticeFile, LatticeSpec};
pub use tame::{min_distinct_distance, straighten_tame, straighten_with, TameGaps, TameReport, WindowedApproximant, WorstPoint};
pub use transform::{
    apply, coefficient_bounds, distinct_levels, enumerate_window, inverse, min_pair_distance, realify,
    separating_transform, window_points, window_points_with_matrix, Mat2, SeparatingTransform, WindowPoint,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LatticeError {
    #[error("invalid lattice: {0}")]
    Input(String),
    #[error("degenerate generators: |det| = {det:e} below 1e-12 * scale^4 (scale {scale})")]
    Degenerate { det: f64, scale: f64 },
    #[error("window {window} holds {points} points on {levels} levels; at least 2 of each are needed, use a larger window")]
    WindowTooSmall { window: f64, points: usize, levels: usize },
    #[error("lattice too ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("windowed approximant misses the log 2 bound: sup error {sup_error} at w = {at:?}")]
    ApproximationFailed { sup_error: f64, at: [f64; 2] },
}
