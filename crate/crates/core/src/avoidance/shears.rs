use crate::lattice::{distinct_levels, realify, LatticeSpec, SeparatingTransform};
use crate::{Point64, C64};

use super::smoother::{Smoothed, StepFunction, StripSmoother};
use super::{AvoidanceConfig, AvoidanceError};

/// Half-width of the closed bidisks `Delta^2(q_j; 1/8)` that define `f_k`.
const Q_RADIUS: f64 = 1.0 / 8.0;

/// `F1(z, w) = (z, w exp(g(z)))` with `g` the strip smoothing of `f_k`
/// near each line `Im z = gamma_k`.
#[derive(Debug, Clone)]
pub struct F1Map {
    strips: Vec<StripSmoother<f64>>,
    /// Transformed points `q_j` with `|pi^2 q_j| <= 1/8`.
    pub q_points: Vec<Point64>,
    pub epsilon: f64,
    pub delta: f64,
    pub c: f64,
    /// Window (original coordinates) over which `f_k` is exact; `f_k = C`
    /// beyond it.
    pub support_window: f64,
}

fn strip_index(gammas: impl Fn(usize) -> f64, n: usize, z: C64, eps: f64) -> Option<usize> {
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if gammas(mid) < z.im {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    [lo.checked_sub(1), (lo < n).then_some(lo)]
        .into_iter()
        .flatten()
        .find(|&k| (z.im - gammas(k)).abs() < eps)
}

impl F1Map {
    pub fn gammas(&self) -> Vec<f64> {
        self.strips.iter().map(|s| s.gamma).collect()
    }

    pub fn strip(&self, z: C64) -> Result<&StripSmoother<f64>, AvoidanceError> {
        strip_index(|k| self.strips[k].gamma, self.strips.len(), z, self.epsilon)
            .map(|k| &self.strips[k])
            .ok_or_else(|| AvoidanceError::F1(format!("z = {z} lies in no strip |Im z - gamma_k| < {}", self.epsilon)))
    }

    /// Distance from `Im z` to the nearest level `gamma_k`.
    pub fn strip_distance(&self, z: C64) -> f64 {
        self.strips.iter().map(|s| (z.im - s.gamma).abs()).fold(f64::INFINITY, f64::min)
    }

    pub fn strips(&self) -> &[StripSmoother<f64>] {
        &self.strips
    }

    /// `g(z)` on the strip containing `z` (used as `h`).
    pub fn g(&self, z: C64) -> Result<Smoothed<f64>, AvoidanceError> {
        self.strip(z)?.eval(z)
    }

    pub fn apply(&self, p: &Point64) -> Result<Point64, AvoidanceError> {
        let h = self.g(p[0])?.value;
        Ok([p[0], p[1] * h.exp()])
    }

    pub fn inverse(&self, p: &Point64) -> Result<Point64, AvoidanceError> {
        let h = self.g(p[0])?.value;
        Ok([p[0], p[1] * (-h).exp()])
    }
}

/// Assembles `f_k` and the strip smoothers from the transformed lattice.
///
/// Points `q_j` are enumerated on an enlarged window so that every zero
/// interval within reach of a verified bidisk is present.
pub fn build_f1(lat: &LatticeSpec, t: &SeparatingTransform, cfg: &AvoidanceConfig) -> Result<F1Map, AvoidanceError> {
    let inv_norm = realify(&t.inverse).norm();
    let support_window = t.window + 0.5 * inv_norm + 1.0;
    let pts = crate::lattice::window_points_with_matrix(lat, support_window, &t.matrix)
        .map_err(|e| AvoidanceError::F1(format!("enumerating q_j: {e}")))?;
    let gammas = distinct_levels(pts.iter().map(|p| p.image[0].im));
    let q_points: Vec<Point64> = pts.iter().filter(|p| p.image[1].norm() <= Q_RADIUS).map(|p| p.image).collect();
    let x_max = cfg.x_max();
    let strips = gammas
        .iter()
        .map(|&gamma| {
            let zeros: Vec<(f64, f64)> = q_points
                .iter()
                .filter_map(|q| {
                    let dy = q[0].im - gamma;
                    (dy.abs() <= Q_RADIUS).then(|| {
                        let half = (Q_RADIUS * Q_RADIUS - dy * dy).sqrt();
                        (q[0].re - half, q[0].re + half)
                    })
                })
                .collect();
            let step = StepFunction::from_zero_intervals(cfg.c, &zeros);
            StripSmoother::with_truncation(step, cfg.epsilon, gamma, cfg.tolerance, x_max)
                .map_err(|e| AvoidanceError::F1(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(F1Map { strips, q_points, epsilon: cfg.epsilon, delta: cfg.delta, c: cfg.c, support_window })
}

/// `F2(z, w) = (z, (w - 1/2) exp(g2(z)))` with
/// `g2 = log((z - i gamma_k)^2 + (|gamma_k| + r)^2 + 1 + eps^2) + 1 + log 16`.
#[derive(Debug, Clone)]
pub struct F2Map {
    pub gammas: Vec<f64>,
    pub r: f64,
    pub epsilon: f64,
}

pub fn build_f2(cfg: &AvoidanceConfig, gammas: &[f64]) -> F2Map {
    F2Map { gammas: gammas.to_vec(), r: cfg.r, epsilon: cfg.epsilon }
}

impl F2Map {
    fn gamma(&self, z: C64) -> Result<f64, AvoidanceError> {
        strip_index(|k| self.gammas[k], self.gammas.len(), z, self.epsilon)
            .map(|k| self.gammas[k])
            .ok_or_else(|| AvoidanceError::F2(format!("z = {z} lies in no strip |Im z - gamma_k| < {}", self.epsilon)))
    }

    /// The argument of the logarithm in `g2`.
    pub fn log_argument(&self, z: C64) -> Result<C64, AvoidanceError> {
        let gamma = self.gamma(z)?;
        let u = z - C64::new(0.0, gamma);
        let k = gamma.abs() + self.r;
        Ok(u * u + k * k + 1.0 + self.epsilon * self.epsilon)
    }

    /// `x^2 + (|gamma_k| + r)^2 + 1`, the lower bound for the real part of
    /// the log argument on the strip.
    pub fn re_lower_bound(&self, z: C64) -> Result<f64, AvoidanceError> {
        let gamma = self.gamma(z)?;
        let k = gamma.abs() + self.r;
        Ok(z.re * z.re + k * k + 1.0)
    }

    pub fn g2(&self, z: C64) -> Result<C64, AvoidanceError> {
        let a = self.log_argument(z)?;
        if !(a.re > 0.0) {
            return Err(AvoidanceError::F2(format!("Re of log argument is {} <= 0 at z = {z}", a.re)));
        }
        Ok(a.ln() + 1.0 + 16f64.ln())
    }

    pub fn apply(&self, p: &Point64) -> Result<Point64, AvoidanceError> {
        Ok([p[0], (p[1] - 0.5) * self.g2(p[0])?.exp()])
    }

    pub fn inverse(&self, p: &Point64) -> Result<Point64, AvoidanceError> {
        Ok([p[0], p[1] * (-self.g2(p[0])?).exp() + 0.5])
    }
}
