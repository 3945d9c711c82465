use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::LatticeError;
use crate::{Point64, C64};

/// Four R-independent generators of a lattice in `C^2` and the offsets
/// `p_j` of its translates; the forbidden set is the union of `Lambda + p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub generators: [Point64; 4],
    pub offsets: Vec<Point64>,
}

/// JSON shape: every vector of `C^2` is `[[re, im], [re, im]]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub generators: Vec<[[f64; 2]; 2]>,
    #[serde(default)]
    pub offsets: Vec<[[f64; 2]; 2]>,
}

pub(crate) fn to_r4(p: &Point64) -> Vector4<f64> {
    Vector4::new(p[0].re, p[0].im, p[1].re, p[1].im)
}

pub(crate) fn norm(p: &Point64) -> f64 {
    (p[0].norm_sqr() + p[1].norm_sqr()).sqrt()
}

impl LatticeSpec {
    /// `Z^4` in `C^2 = R^4`, with the single offset 0.
    pub fn square() -> Self {
        let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
        LatticeSpec { generators: [[l, o], [i, o], [o, l], [o, i]], offsets: vec![[o, o]] }
    }

    pub fn from_file(f: &LatticeFile) -> Result<Self, LatticeError> {
        if f.generators.len() != 4 {
            return Err(LatticeError::Input(format!("generators: expected 4 vectors, got {}", f.generators.len())));
        }
        let conv = |v: &[[f64; 2]; 2]| [C64::new(v[0][0], v[0][1]), C64::new(v[1][0], v[1][1])];
        let mut generators = [[C64::new(0.0, 0.0); 2]; 4];
        for (g, v) in generators.iter_mut().zip(&f.generators) {
            *g = conv(v);
        }
        let mut offsets: Vec<Point64> = f.offsets.iter().map(conv).collect();
        if offsets.is_empty() {
            offsets.push([C64::new(0.0, 0.0); 2]);
        }
        let spec = LatticeSpec { generators, offsets };
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_file(&self) -> LatticeFile {
        let conv = |p: &Point64| [[p[0].re, p[0].im], [p[1].re, p[1].im]];
        LatticeFile {
            generators: self.generators.iter().map(conv).collect(),
            offsets: self.offsets.iter().map(conv).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let f: LatticeFile = serde_json::from_str(text).map_err(|e| LatticeError::Input(e.to_string()))?;
        Self::from_file(&f)
    }

    /// Real 4x4 matrix with the generators as columns.
    pub fn real_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&self.generators.map(|g| to_r4(&g)))
    }

    /// Longest generator length, the scale for the degeneracy test.
    pub fn scale(&self) -> f64 {
        self.generators.iter().map(norm).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let all_finite = self.generators.iter().chain(&self.offsets).flatten().all(|c| c.re.is_finite() && c.im.is_finite());
        if !all_finite {
            return Err(LatticeError::Input("non-finite coordinate".into()));
        }
        let det = self.real_matrix().determinant();
        let s = self.scale();
        if !(det.abs() >= 1e-12 * s.powi(4)) || s == 0.0 {
            return Err(LatticeError::Degenerate { det, scale: s });
        }
        // Translates must be distinct: p_j - p_i not in Lambda.
        let inv = self.real_matrix().try_inverse().ok_or(LatticeError::Degenerate { det, scale: s })?;
        for (i, a) in self.offsets.iter().enumerate() {
            for (j, b) in self.offsets.iter().enumerate().skip(i + 1) {
                let k = inv * (to_r4(b) - to_r4(a));
                if k.iter().all(|x| (x - x.round()).abs() < 1e-9) {
                    return Err(LatticeError::Input(format!("offsets {i} and {j} differ by a lattice vector")));
                }
            }
        }
        Ok(())
    }
}
