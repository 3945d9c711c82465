//! Dominability decisions from discrete invariants.
//!
//! Every `dominable`/`not_dominable` verdict names the theorem it rests on
//! through [`Verdict::citations`]; anchors resolve via [`resolve_citation`].
//! All functions are pure.

mod decide;
mod descriptor;
mod orbifold;
mod verdict;

pub use decide::{classify, classify_compact, classify_elliptic_fibration, classify_p2_complement, classify_quasiprojective};
pub use descriptor::{
    Ambient, BoundaryComponent, BoundaryDivisor, ClassTag, Compactness, GenericFiber, K3Flags, KodairaDim, Pi1Class,
    SpecialConfiguration, SurfaceDescriptor,
};
pub use orbifold::{orbifold_euler_char, CoverType, Mark, OrbifoldCurve};
pub use verdict::{resolve_citation, Outcome, Reason, Verdict, CITATIONS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("branch `{branch}` requires field `{field}`")]
    MissingField { branch: String, field: String },
    #[error("pi1_class `{pi1}` contradicts verdict `{outcome}` (compact surfaces: dominable iff kappa < 2 and pi_1 finite-by-abelian)")]
    Pi1Contradiction { pi1: String, outcome: String },
}

impl ClassifyError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ClassifyError::Invalid { field: field.into(), message: message.into() }
    }

    pub(crate) fn prefixed(self, prefix: &str) -> Self {
        match self {
            ClassifyError::Invalid { field, message } => {
                ClassifyError::Invalid { field: format!("{prefix}.{field}"), message }
            }
            other => other,
        }
    }

    /// JSON-style path of the offending field.
    pub fn field_path(&self) -> Option<&str> {
        match self {
            ClassifyError::Invalid { field, .. } | ClassifyError::MissingField { field, .. } => Some(field),
            ClassifyError::Pi1Contradiction { .. } => Some("pi1_class"),
        }
    }
}
