//! Dominability of complex surfaces by `C^2`.
//!
//! The crate has two halves. [`classifier`] decides dominability from
//! discrete invariants (Kodaira dimension, irregularity, fibration and
//! boundary data) and returns verdicts with a citation trail. The other
//! modules build explicit holomorphic maps and check their avoidance
//! properties numerically:
//!
//! * [`fiberwise`]: exponential fiber maps, graph complements of rational
//!   sections, twist maps and the double-section map.
//! * [`lattice`]: the separating linear transform for lattice translates and
//!   the tame-set straightening map on a window.
//! * [`avoidance`]: the strip smoother, the Hénon basin map and the two
//!   shear automorphisms that push a union of small bidisks off `V`.
//! * [`cli`]: command implementations behind the `domlab` binary.
//!
//! Numerical kernels are generic over [`Real`] (`f32`/`f64`); exact routes
//! use `BigRational`. The aliases below fix the common instantiations.

// Negated float comparisons are used on purpose so that NaN fails checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avoidance;
pub mod classifier;
pub mod cli;
pub mod fiberwise;
pub mod lattice;
mod scalar;

pub use scalar::Real;

use num_complex::Complex;

/// Double precision complex number, the default coefficient field.
pub type C64 = Complex<f64>;
/// Exact rational scalar used for orbifold Euler characteristics.
pub type Rational = num_rational::BigRational;
/// Gaussian rationals, used for exact Hénon map evaluation.
pub type ExactComplex = Complex<Rational>;

/// Complex polynomial with `f64` coefficients.
pub type Poly64 = fiberwise::Polynomial<C64>;
/// Rational function with `f64` complex coefficients.
pub type RatFn64 = fiberwise::RationalFunction<f64>;
/// Strip smoother over `f64`.
pub type Smoother64 = avoidance::StripSmoother<f64>;
/// Hénon system over `f64`.
pub type Henon64 = avoidance::HenonSystem<f64>;
/// A point of `C^2` in double precision.
pub type Point64 = [C64; 2];
