use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{ClassifyError, OrbifoldCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Compact,
    QuasiProjective,
}

/// Kodaira dimension, `-inf` or `0..=2`. In JSON: the string `"-inf"` or an
/// integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KodairaDim {
    MinusInfinity,
    Zero,
    One,
    Two,
}

impl Serialize for KodairaDim {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            KodairaDim::MinusInfinity => s.serialize_str("-inf"),
            KodairaDim::Zero => s.serialize_u8(0),
            KodairaDim::One => s.serialize_u8(1),
            KodairaDim::Two => s.serialize_u8(2),
        }
    }
}

impl<'de> Deserialize<'de> for KodairaDim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(0) => Ok(KodairaDim::Zero),
            Raw::Int(1) => Ok(KodairaDim::One),
            Raw::Int(2) => Ok(KodairaDim::Two),
            Raw::Str(s) if matches!(s.as_str(), "-inf" | "-infinity" | "minus_infinity") => {
                Ok(KodairaDim::MinusInfinity)
            }
            Raw::Str(s) if s == "0" => Ok(KodairaDim::Zero),
            Raw::Str(s) if s == "1" => Ok(KodairaDim::One),
            Raw::Str(s) if s == "2" => Ok(KodairaDim::Two),
            Raw::Int(n) => Err(de::Error::custom(format!("kodaira_dim must be -inf, 0, 1 or 2, got {n}"))),
            Raw::Str(s) => Err(de::Error::custom(format!("kodaira_dim must be -inf, 0, 1 or 2, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    Rational,
    RuledOverGenusG(u32),
    AbelianOrTorus,
    K3,
    Enriques,
    Hyperelliptic,
    KodairaPrimary,
    KodairaSecondary,
    Hopf,
    Inoue,
    Vii0Other,
    EllipticFibration,
    P2Complement,
    FiberedOpen,
    GeneralType,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct K3Flags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_elliptic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_kummer: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pi1Class {
    FiniteExtAbelian(u8),
    NotFiniteExtAbelian,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenericFiber {
    Elliptic,
    /// `P^1` with `k` punctures.
    P1Punctured(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    P2,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub degree: u32,
    pub is_rational: bool,
    pub smooth: bool,
    #[serde(default)]
    pub singular_point_count: u32,
}

impl BoundaryComponent {
    pub fn line() -> Self {
        Self { degree: 1, is_rational: true, smooth: true, singular_point_count: 0 }
    }

    pub fn conic() -> Self {
        Self { degree: 2, is_rational: true, smooth: true, singular_point_count: 0 }
    }

    pub fn smooth_cubic() -> Self {
        Self { degree: 3, is_rational: false, smooth: true, singular_point_count: 0 }
    }

    pub fn nodal_cubic() -> Self {
        Self { degree: 3, is_rational: true, smooth: false, singular_point_count: 1 }
    }
}

/// Named non-normal-crossing configurations in `P^2` that have a known
/// answer. Three lines that fail normal crossing are necessarily
/// concurrent, so that configuration is inferred when absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialConfiguration {
    ThreeConcurrentLines,
    ConicTwoLinesThroughConicPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDivisor {
    pub ambient: Ambient,
    pub components: Vec<BoundaryComponent>,
    pub normal_crossing: bool,
    pub connected: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_configuration: Option<SpecialConfiguration>,
}

impl BoundaryDivisor {
    pub fn p2(components: Vec<BoundaryComponent>, normal_crossing: bool, connected: bool) -> Self {
        Self { ambient: Ambient::P2, components, normal_crossing, connected, special_configuration: None }
    }

    pub fn total_degree(&self) -> u32 {
        self.components.iter().map(|c| c.degree).sum()
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        if self.components.is_empty() {
            return Err(ClassifyError::invalid("boundary.components", "component list must be nonempty"));
        }
        for (i, c) in self.components.iter().enumerate() {
            if c.degree == 0 {
                return Err(ClassifyError::invalid(
                    format!("boundary.components[{i}].degree"),
                    "degree must be positive",
                ));
            }
            if c.smooth && c.singular_point_count > 0 {
                return Err(ClassifyError::invalid(
                    format!("boundary.components[{i}].singular_point_count"),
                    "smooth component with singular points",
                ));
            }
        }
        Ok(())
    }
}

/// Discrete invariants of a compact or quasi-projective surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub compactness: Compactness,
    pub kodaira_dim: KodairaDim,
    pub irregularity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebraic_dim: Option<u8>,
    pub class_tag: ClassTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k3_flags: Option<K3Flags>,
    #[serde(default)]
    pub pi1_class: Pi1Class,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibration: Option<OrbifoldCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic_fiber: Option<GenericFiber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryDivisor>,
}

impl SurfaceDescriptor {
    pub fn compact(kodaira_dim: KodairaDim, irregularity: u32, algebraic_dim: u8, class_tag: ClassTag) -> Self {
        Self {
            compactness: Compactness::Compact,
            kodaira_dim,
            irregularity,
            algebraic_dim: Some(algebraic_dim),
            class_tag,
            k3_flags: None,
            pi1_class: Pi1Class::Unknown,
            fibration: None,
            generic_fiber: None,
            boundary: None,
        }
    }

    pub fn quasi_projective(kodaira_dim: KodairaDim, irregularity: u32, class_tag: ClassTag) -> Self {
        Self {
            compactness: Compactness::QuasiProjective,
            kodaira_dim,
            irregularity,
            algebraic_dim: None,
            class_tag,
            k3_flags: None,
            pi1_class: Pi1Class::Unknown,
            fibration: None,
            generic_fiber: None,
            boundary: None,
        }
    }

    pub fn with_fibration(mut self, orb: OrbifoldCurve, fiber: GenericFiber) -> Self {
        self.fibration = Some(orb);
        self.generic_fiber = Some(fiber);
        self
    }

    pub fn with_boundary(mut self, b: BoundaryDivisor) -> Self {
        self.boundary = Some(b);
        self
    }

    pub fn with_k3(mut self, is_elliptic: bool, is_kummer: bool) -> Self {
        self.k3_flags = Some(K3Flags { is_elliptic: Some(is_elliptic), is_kummer: Some(is_kummer) });
        self
    }

    pub fn with_pi1(mut self, pi1: Pi1Class) -> Self {
        self.pi1_class = pi1;
        self
    }

    /// Structural checks that do not depend on the branch of the decision
    /// tree.
    pub fn validate(&self) -> Result<(), ClassifyError> {
        use ClassTag::*;
        use KodairaDim::*;
        if self.k3_flags.is_some() && self.class_tag != K3 {
            return Err(ClassifyError::invalid("k3_flags", "k3_flags given for a non-K3 class_tag"));
        }
        if self.class_tag == GeneralType && self.kodaira_dim != Two {
            return Err(ClassifyError::invalid("kodaira_dim", "general_type requires kodaira_dim = 2"));
        }
        if let Pi1Class::FiniteExtAbelian(rank) = self.pi1_class {
            if rank > 4 {
                return Err(ClassifyError::invalid("pi1_class", format!("rank {rank} exceeds 4")));
            }
        }
        if let Some(orb) = &self.fibration {
            orb.validate().map_err(|e| e.prefixed("fibration"))?;
        }
        if let Some(b) = &self.boundary {
            b.validate()?;
        }
        if let Some(GenericFiber::P1Punctured(_)) = self.generic_fiber {
            if self.compactness == Compactness::Compact {
                return Err(ClassifyError::invalid("generic_fiber", "punctured fibers on a compact surface"));
            }
        }
        match self.compactness {
            Compactness::Compact => {
                let a = self
                    .algebraic_dim
                    .ok_or_else(|| ClassifyError::invalid("algebraic_dim", "required for compact surfaces"))?;
                if a > 2 {
                    return Err(ClassifyError::invalid("algebraic_dim", format!("must be 0, 1 or 2, got {a}")));
                }
                if matches!(self.class_tag, P2Complement | FiberedOpen) {
                    return Err(ClassifyError::invalid("class_tag", "tag requires a quasi-projective surface"));
                }
                if self.boundary.is_some() {
                    return Err(ClassifyError::invalid("boundary", "compact surfaces have no boundary divisor"));
                }
                let expected = match self.class_tag {
                    Rational | RuledOverGenusG(_) | Hopf | Inoue | Vii0Other => Some(MinusInfinity),
                    AbelianOrTorus | K3 | Enriques | Hyperelliptic | KodairaPrimary | KodairaSecondary => Some(Zero),
                    GeneralType => Some(Two),
                    _ => None,
                };
                if let Some(k) = expected {
                    if k != self.kodaira_dim {
                        return Err(ClassifyError::invalid(
                            "kodaira_dim",
                            format!("class_tag {:?} forces kodaira_dim {:?}", self.class_tag, k),
                        ));
                    }
                }
                if matches!(self.class_tag, Hopf | Inoue | Vii0Other) && a == 2 {
                    return Err(ClassifyError::invalid("algebraic_dim", "class VII surfaces are not projective"));
                }
                if matches!(self.class_tag, Rational | RuledOverGenusG(_)) && a != 2 {
                    return Err(ClassifyError::invalid("algebraic_dim", "rational and ruled surfaces are projective"));
                }
                match self.class_tag {
                    Rational if self.irregularity != 0 => {
                        return Err(ClassifyError::invalid("irregularity", "rational surfaces have q = 0"));
                    }
                    RuledOverGenusG(g) if self.irregularity != g => {
                        return Err(ClassifyError::invalid(
                            "irregularity",
                            format!("ruled surface over genus {g} has q = {g}"),
                        ));
                    }
                    _ => {}
                }
            }
            Compactness::QuasiProjective => {
                if self.algebraic_dim.is_some() {
                    return Err(ClassifyError::invalid("algebraic_dim", "only meaningful for compact surfaces"));
                }
                if matches!(
                    self.class_tag,
                    Hopf | Inoue | Vii0Other | KodairaPrimary | KodairaSecondary
                ) {
                    return Err(ClassifyError::invalid("class_tag", "tag requires a compact surface"));
                }
            }
        }
        Ok(())
    }
}
