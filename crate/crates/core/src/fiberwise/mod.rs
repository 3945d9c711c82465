//! Fiber-preserving holomorphic maps `(z, w) -> (z, H(z, w))` that omit a
//! prescribed section over each fiber.
//!
//! Sections are rational functions of `z`. Every map here leaves the first
//! coordinate untouched, so only the fiber coordinate is computed.

mod double;
mod graph;
mod grid;
mod poly;
mod psi;
mod rational;
mod twist;

pub use double::{h0, h0_from_hg, DoubleSectionData};
pub use graph::{hermite_interpolate, GraphComplementMap};
pub use grid::{square_grid, write_grid_csv, GridSample};
pub use poly::{Polynomial, Root};
pub use psi::{eval_psi, expm1, psi_graph_gap, psi_series, PSI_SWITCHOVER};
pub use rational::{parse_fraction, Proj, RationalFunction};
pub use twist::twist_map;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FiberError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("numerator and denominator share a zero near {at}")]
    NotCoprime { at: String },
    #[error("fiber over z = {at} lies over a pole")]
    Pole { at: String },
    #[error("value {c} is omitted over z = {z}")]
    OmittedValue { z: String, c: String },
}
