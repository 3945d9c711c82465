use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::transform::{distinct_levels, separating_transform, window_points, SeparatingTransform, WindowPoint};
use super::{LatticeError, LatticeSpec};
use crate::C64;

const MAX_DEGREE: usize = 8;
const LINE_SAMPLES: usize = 48;
const WORST_REPORTED: usize = 5;

/// Windowed stand-in for the straightening automorphism
/// `F(z, w) = (e^{G(w)} z, w)` in coordinates `(z, w) = (pi^2 A q, pi^1 A q)`.
#[derive(Debug, Clone, Serialize)]
pub struct TameReport {
    pub certified: bool,
    pub window: f64,
    pub gaps: TameGaps,
    pub worst_points: Vec<WorstPoint>,
    pub degree: usize,
    /// `G` in powers of `w / w_scale`, as `[re, im]`.
    pub coefficients: Vec<[f64; 2]>,
    pub w_scale: f64,
    /// `sup |G - log f0|` over the sample set.
    pub sup_error: f64,
    pub points: usize,
    pub fixed_points: usize,
    pub dilation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TameGaps {
    pub min_point_gap: f64,
    pub min_level_gap: f64,
    /// `min |e^{G(w)} z| / |w|` over points with `z != 0`, `w != 0`.
    pub min_ratio: f64,
    /// Smallest distance between distinct values of `pi^1 F`.
    pub first_coordinate_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstPoint {
    pub coeffs: [i64; 4],
    pub offset: usize,
    pub z: [f64; 2],
    pub w: [f64; 2],
    pub ratio: f64,
}

/// `G` as fitted polynomial in `w / scale`.
#[derive(Debug, Clone)]
pub struct WindowedApproximant {
    pub coeffs: Vec<C64>,
    pub scale: f64,
}

impl WindowedApproximant {
    pub fn eval(&self, w: C64) -> C64 {
        let t = w / self.scale;
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * t + c)
    }
}

fn zw(p: &WindowPoint) -> (C64, C64) {
    (p.image[1], p.image[0])
}

/// Runs the separating transform, then straightens the window.
pub fn straighten_tame(lat: &LatticeSpec, window: f64) -> Result<TameReport, LatticeError> {
    let t = separating_transform(lat, window)?;
    straighten_with(lat, &t)
}

pub fn straighten_with(lat: &LatticeSpec, t: &SeparatingTransform) -> Result<TameReport, LatticeError> {
    let pts = window_points(lat, t)?;
    let img_scale = pts.iter().map(|p| p.image[0].norm().max(p.image[1].norm())).fold(1.0, f64::max);
    let zero_tol = 1e-9 * img_scale;

    // r1 at each distinct w: |w| / min |z| over points with z != 0.
    let mut groups: HashMap<(i64, i64), (C64, f64)> = HashMap::new();
    for p in &pts {
        let (z, w) = zw(p);
        let key = ((w.re / zero_tol).round() as i64, (w.im / zero_tol).round() as i64);
        let e = groups.entry(key).or_insert((w, f64::INFINITY));
        if z.norm() > zero_tol {
            e.1 = e.1.min(z.norm());
        }
    }
    let mut wvals: Vec<(C64, f64)> = groups
        .into_values()
        .map(|(w, mz)| (w, if mz.is_finite() { w.norm() / mz } else { 0.0 }))
        .collect();
    wvals.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    let r2max = 2.0 * (wvals.iter().map(|x| x.1).fold(0.0, f64::max) + 1.0);
    let active: Vec<(C64, f64)> = wvals.iter().copied().filter(|x| x.1 > 0.0).collect();

    // Samples: every lattice w plus points along each line Im w = level.
    let w_scale = wvals.iter().map(|x| x.0.norm()).fold(1e-12, f64::max);
    let mut samples: Vec<C64> = wvals.iter().map(|x| x.0).collect();
    for mu in distinct_levels(wvals.iter().map(|x| x.0.im)) {
        let half = (w_scale * w_scale - mu * mu).max(0.0).sqrt();
        for k in 0..LINE_SAMPLES {
            let re = -half + 2.0 * half * k as f64 / (LINE_SAMPLES - 1) as f64;
            samples.push(C64::new(re, mu));
        }
    }
    // f0 = max(2(1 + rho), r2max/2), rho the 1-Lipschitz upper envelope of r1.
    let target: Vec<f64> = samples
        .par_iter()
        .map(|x| {
            let rho = active.iter().map(|(w, r)| r - (x - w).norm()).fold(0.0, f64::max);
            (2.0 * (1.0 + rho)).max(r2max / 2.0).ln()
        })
        .collect();

    let fit = (0..=MAX_DEGREE)
        .filter_map(|deg| {
            let a = DMatrix::from_fn(samples.len(), deg + 1, |i, k| (samples[i] / w_scale).powu(k as u32));
            let b = DMatrix::from_fn(samples.len(), 1, |i, _| C64::new(target[i], 0.0));
            let sol = a.svd(true, true).solve(&b, 1e-13).ok()?;
            let g = WindowedApproximant { coeffs: sol.column(0).iter().copied().collect(), scale: w_scale };
            let (err, at) = samples
                .iter()
                .zip(&target)
                .map(|(w, y)| ((g.eval(*w) - y).norm(), *w))
                .fold((0.0, C64::new(0.0, 0.0)), |m, x| if x.0 > m.0 { x } else { m });
            Some((err, at, deg, g))
        })
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .ok_or(LatticeError::ApproximationFailed { sup_error: f64::INFINITY, at: [0.0, 0.0] })?;
    let (sup_error, worst_w, degree, g) = fit;
    if sup_error > std::f64::consts::LN_2 {
        return Err(LatticeError::ApproximationFailed { sup_error, at: [worst_w.re, worst_w.im] });
    }

    let mut ratios: Vec<(f64, &WindowPoint)> = pts
        .iter()
        .filter_map(|p| {
            let (z, w) = zw(p);
            (z.norm() > zero_tol && w.norm() > zero_tol).then(|| (g.eval(w).exp().norm() * z.norm() / w.norm(), p))
        })
        .collect();
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0));
    let min_ratio = ratios.first().map_or(f64::INFINITY, |r| r.0);
    let worst_points = ratios
        .iter()
        .take(WORST_REPORTED)
        .map(|(r, p)| {
            let (z, w) = zw(p);
            WorstPoint { coeffs: p.coeffs, offset: p.offset, z: [z.re, z.im], w: [w.re, w.im], ratio: *r }
        })
        .collect();
    let firsts: Vec<C64> = pts
        .iter()
        .map(|p| {
            let (z, w) = zw(p);
            g.eval(w).exp() * z
        })
        .collect();
    let first_coordinate_gap = min_distinct_distance(&firsts, zero_tol);
    let fixed_points = pts.iter().filter(|p| zw(p).0.norm() <= zero_tol).count();
    Ok(TameReport {
        certified: t.certified() && min_ratio >= 1.0 && first_coordinate_gap > 0.0,
        window: t.window,
        gaps: TameGaps {
            min_point_gap: t.min_point_gap,
            min_level_gap: t.min_level_gap,
            min_ratio,
            first_coordinate_gap,
        },
        worst_points,
        degree,
        coefficients: g.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        w_scale,
        sup_error,
        points: pts.len(),
        fixed_points,
        dilation: t.dilation,
    })
}

/// Smallest distance between values farther apart than `same_tol`, by a
/// sweep over the values sorted by real part.
pub fn min_distinct_distance(vals: &[C64], same_tol: f64) -> f64 {
    let mut v = vals.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut best = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[j].re - v[i].re >= best {
                break;
            }
            let d = (v[j] - v[i]).norm();
            if d > same_tol && d < best {
                best = d;
            }
        }
    }
    best
}
