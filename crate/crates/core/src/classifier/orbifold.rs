use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ClassifyError;
use crate::Rational;

/// A marked point of the base with its fiber multiplicity `n_s >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    pub point_id: String,
    pub multiplicity: u32,
}

impl Mark {
    pub fn new(point_id: impl Into<String>, multiplicity: u32) -> Self {
        Self { point_id: point_id.into(), multiplicity }
    }
}

/// A quasi-projective base curve `C` with orbifold divisor
/// `D = sum (1 - 1/n_s) s`.
///
/// `punctures` counts the points of `compactification \ C`. Labels for the
/// punctures are optional; when given they must be distinct from the mark
/// labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldCurve {
    pub genus_bar: u32,
    pub punctures: u32,
    #[serde(default)]
    pub marks: Vec<Mark>,
    #[serde(default = "default_true")]
    pub finitely_many_multiple_fibers: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub puncture_ids: Vec<String>,
}

fn default_true() -> bool {
    true
}

/// Uniformizing cover of the orbifold, decided by the sign of `chi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverType {
    ProjectiveLine,
    Plane,
    Disk,
}

impl OrbifoldCurve {
    pub fn new(genus_bar: u32, punctures: u32, multiplicities: &[u32]) -> Self {
        let marks = multiplicities
            .iter()
            .enumerate()
            .map(|(i, &n)| Mark::new(format!("s{i}"), n))
            .collect();
        Self { genus_bar, punctures, marks, finitely_many_multiple_fibers: true, puncture_ids: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        let mut seen = HashSet::new();
        for (i, m) in self.marks.iter().enumerate() {
            if m.multiplicity < 2 {
                return Err(ClassifyError::invalid(
                    format!("marks[{i}].multiplicity"),
                    format!("multiplicity must be >= 2, got {}", m.multiplicity),
                ));
            }
            if !seen.insert(m.point_id.as_str()) {
                return Err(ClassifyError::invalid(
                    format!("marks[{i}].point_id"),
                    format!("duplicate point id {:?}", m.point_id),
                ));
            }
        }
        if !self.puncture_ids.is_empty() {
            if self.puncture_ids.len() != self.punctures as usize {
                return Err(ClassifyError::invalid(
                    "puncture_ids",
                    format!("{} labels for {} punctures", self.puncture_ids.len(), self.punctures),
                ));
            }
            let mut pseen = HashSet::new();
            for (i, p) in self.puncture_ids.iter().enumerate() {
                if seen.contains(p.as_str()) || !pseen.insert(p.as_str()) {
                    return Err(ClassifyError::invalid(
                        format!("puncture_ids[{i}]"),
                        format!("label {p:?} collides with another puncture or mark"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Number of components of the completed divisor on the compactification:
    /// marks plus punctures (punctures carry weight one).
    pub fn boundary_components(&self) -> usize {
        self.marks.len() + self.punctures as usize
    }

    /// Orbifold Euler characteristic over an arbitrary integer type.
    pub fn euler_char_in<T>(&self) -> Ratio<T>
    where
        T: Clone + Integer + From<u32>,
    {
        let two = T::from(2u32);
        let mut chi = Ratio::from_integer(two.clone())
            - Ratio::from_integer(two * T::from(self.genus_bar))
            - Ratio::from_integer(T::from(self.punctures));
        for m in &self.marks {
            chi = chi - (Ratio::one() - Ratio::new(T::one(), T::from(m.multiplicity)));
        }
        chi
    }

    /// `chi = 2 - 2g - #punctures - sum (1 - 1/n_s)`, exactly.
    pub fn euler_char(&self) -> Rational {
        self.euler_char_in::<BigInt>()
    }

    /// True on the exceptional path: the compactification is `P^1` and the
    /// completed divisor has one or two components.
    pub fn is_exceptional_sphere(&self) -> bool {
        self.genus_bar == 0 && matches!(self.boundary_components(), 1 | 2)
    }

    /// Uniformizing cover. On the exceptional path the marked points are
    /// removed and `D` reset to zero, which leaves `P^1` minus one or two
    /// points with universal cover `C`.
    pub fn cover(&self) -> CoverType {
        if !self.finitely_many_multiple_fibers {
            return CoverType::Disk;
        }
        if self.is_exceptional_sphere() {
            return CoverType::Plane;
        }
        let chi = self.euler_char();
        if chi.is_positive() {
            CoverType::ProjectiveLine
        } else if chi.is_zero() {
            CoverType::Plane
        } else {
            CoverType::Disk
        }
    }
}

/// Free-function form of [`OrbifoldCurve::euler_char`].
pub fn orbifold_euler_char(orb: &OrbifoldCurve) -> Rational {
    orb.euler_char()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(n: i64, d: i64) -> Rational {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sphere_and_torus() {
        assert_eq!(OrbifoldCurve::new(0, 0, &[]).euler_char(), r(2, 1));
        assert_eq!(OrbifoldCurve::new(1, 0, &[]).euler_char(), r(0, 1));
    }

    #[test]
    fn triangle_237_with_puncture() {
        // 2 - 1 - (1/2 + 2/3 + 6/7) = -43/42
        assert_eq!(OrbifoldCurve::new(0, 1, &[2, 3, 7]).euler_char(), r(-43, 42));
    }

    #[test]
    fn generic_integer_type_agrees() {
        let orb = OrbifoldCurve::new(2, 3, &[5, 11, 4]);
        let small: Ratio<i64> = orb.euler_char_in::<i64>();
        let big = orb.euler_char();
        assert_eq!(BigInt::from(*small.numer()), *big.numer());
        assert_eq!(BigInt::from(*small.denom()), *big.denom());
    }

    #[test]
    fn rejects_bad_marks() {
        let mut orb = OrbifoldCurve::new(0, 0, &[2, 1]);
        assert!(orb.validate().is_err());
        orb.marks = vec![Mark::new("a", 2), Mark::new("a", 3)];
        let err = orb.validate().unwrap_err().to_string();
        assert!(err.contains("marks[1].point_id"), "{err}");
        orb.marks = vec![Mark::new("a", 2)];
        orb.punctures = 1;
        orb.puncture_ids = vec!["a".into()];
        assert!(orb.validate().is_err());
    }

    #[test]
    fn cover_types() {
        assert_eq!(OrbifoldCurve::new(0, 0, &[]).cover(), CoverType::ProjectiveLine);
        assert_eq!(OrbifoldCurve::new(0, 0, &[2, 2, 2, 2]).cover(), CoverType::Plane);
        assert_eq!(OrbifoldCurve::new(0, 1, &[2, 3, 7]).cover(), CoverType::Disk);
        // one or two boundary components on P^1 go through the exceptional path
        assert_eq!(OrbifoldCurve::new(0, 0, &[3, 5]).cover(), CoverType::Plane);
        assert_eq!(OrbifoldCurve::new(0, 1, &[]).cover(), CoverType::Plane);
        assert_eq!(OrbifoldCurve::new(0, 2, &[]).cover(), CoverType::Plane);
        assert_eq!(OrbifoldCurve::new(0, 0, &[2, 3, 5]).cover(), CoverType::ProjectiveLine);
    }
}
