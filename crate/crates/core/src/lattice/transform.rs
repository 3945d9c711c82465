use std::collections::HashMap;

use nalgebra::{Matrix3, Matrix4, Vector4};
use rayon::prelude::*;
use serde::Serialize;

use super::spec::{norm, to_r4};
use super::{LatticeError, LatticeSpec};
use crate::{Point64, C64};

/// Complex 2x2 matrix, row major.
pub type Mat2 = [[C64; 2]; 2];

/// Largest coefficient box enumerated before giving up on a lattice.
const MAX_ENUMERATION: u64 = 40_000_000;
/// Levels closer than this (relative) count as the same level.
const LEVEL_TOL: f64 = 1e-9;

pub fn apply(a: &Mat2, p: &Point64) -> Point64 {
    [a[0][0] * p[0] + a[0][1] * p[1], a[1][0] * p[0] + a[1][1] * p[1]]
}

pub fn inverse(a: &Mat2) -> Option<Mat2> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.norm() == 0.0 {
        return None;
    }
    Some([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

/// The real 4x4 matrix of a complex-linear map on `C^2 = R^4`.
pub fn realify(a: &Mat2) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    for r in 0..2 {
        for c in 0..2 {
            let z = a[r][c];
            m[(2 * r, 2 * c)] = z.re;
            m[(2 * r, 2 * c + 1)] = -z.im;
            m[(2 * r + 1, 2 * c)] = z.im;
            m[(2 * r + 1, 2 * c + 1)] = z.re;
        }
    }
    m
}

/// A vector orthogonal (real inner product) to three vectors of `R^4`.
fn cross3(v: [Vector4<f64>; 3]) -> Vector4<f64> {
    let mut u = Vector4::zeros();
    for k in 0..4 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != k).collect();
        let m = Matrix3::from_fn(|i, j| v[j][rows[i]]);
        u[k] = if k % 2 == 0 { m.determinant() } else { -m.determinant() };
    }
    u
}

/// Linear map making `Im pi^1 A(Lambda_0)` discrete with unit gaps.
#[derive(Debug, Clone, Serialize)]
pub struct SeparatingTransform {
    #[serde(serialize_with = "ser_mat")]
    pub matrix: Mat2,
    #[serde(serialize_with = "ser_mat")]
    pub inverse: Mat2,
    /// `Im pi^1 A v_4`.
    pub mu0: f64,
    /// `Im pi^1 A p_j`.
    pub mu_offsets: Vec<f64>,
    pub dilation: f64,
    /// Distinct levels `Im pi^1 A q` over the window, sorted.
    pub line_levels: Vec<f64>,
    /// Global gaps after dilation, from bounded lattice enumeration.
    pub min_point_gap: f64,
    pub min_level_gap: f64,
    pub window: f64,
    pub window_points: usize,
    /// Smallest pair distance in the window (exact when below 1).
    pub window_min_point_gap: f64,
    pub window_min_level_gap: f64,
    /// Largest deviation of `Im pi^1 A q` from `k_4 mu0 + mu_j`.
    pub level_residual: f64,
}

fn ser_mat<S: serde::Serializer>(m: &Mat2, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = m.iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect();
    rows.serialize(s)
}

/// A lattice point of the window with its image.
#[derive(Debug, Clone, Copy)]
pub struct WindowPoint {
    pub coeffs: [i64; 4],
    pub offset: usize,
    pub q: Point64,
    pub image: Point64,
}

impl SeparatingTransform {
    pub fn apply(&self, p: &Point64) -> Point64 {
        apply(&self.matrix, p)
    }

    pub fn apply_inverse(&self, p: &Point64) -> Point64 {
        apply(&self.inverse, p)
    }

    pub fn certified(&self) -> bool {
        self.window_min_point_gap >= 1.0
            && self.window_min_level_gap >= 1.0
            && self.min_point_gap >= 1.0
            && self.min_level_gap >= 1.0
    }
}

/// Per-coordinate coefficient bounds covering `max(|z|,|w|) <= window`
/// around `center`: the larger of `ceil(window/shortest) + 2` and the
/// bound from the rows of the inverse generator matrix.
pub fn coefficient_bounds(lat: &LatticeSpec, window: f64) -> Result<[i64; 4], LatticeError> {
    let m = lat.real_matrix();
    let inv = m.try_inverse().ok_or(LatticeError::Degenerate { det: 0.0, scale: lat.scale() })?;
    let shortest = lat.generators.iter().map(norm).fold(f64::INFINITY, f64::min);
    let far = lat.offsets.iter().map(norm).fold(0.0, f64::max);
    let uniform = (window / shortest).ceil() + 2.0;
    let mut out = [0i64; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let row = inv.row(i).norm();
        let b = (row * (2f64.sqrt() * window + far)).ceil() + 1.0;
        *o = uniform.max(b) as i64;
    }
    let total: u64 = out.iter().map(|&k| (2 * k + 1) as u64).product::<u64>() * lat.offsets.len() as u64;
    if total > MAX_ENUMERATION {
        return Err(LatticeError::IllConditioned(format!("window enumeration needs {total} candidates")));
    }
    Ok(out)
}

/// All points `sum k_i v_i + p_j` with `max(|z|, |w|) <= window`.
pub fn enumerate_window(lat: &LatticeSpec, window: f64) -> Result<Vec<(Point64, [i64; 4], usize)>, LatticeError> {
    let b = coefficient_bounds(lat, window)?;
    let g = &lat.generators;
    let eps = window * 1e-12;
    let out: Vec<Vec<(Point64, [i64; 4], usize)>> = (-b[0]..=b[0])
        .into_par_iter()
        .map(|k0| {
            let mut v = Vec::new();
            for k1 in -b[1]..=b[1] {
                for k2 in -b[2]..=b[2] {
                    for k3 in -b[3]..=b[3] {
                        let ks = [k0, k1, k2, k3];
                        let mut base = [C64::new(0.0, 0.0); 2];
                        for (k, gen) in ks.iter().zip(g) {
                            let kf = *k as f64;
                            base[0] += gen[0] * kf;
                            base[1] += gen[1] * kf;
                        }
                        for (j, p) in lat.offsets.iter().enumerate() {
                            let q = [base[0] + p[0], base[1] + p[1]];
                            if q[0].norm() <= window + eps && q[1].norm() <= window + eps {
                                v.push((q, ks, j));
                            }
                        }
                    }
                }
            }
            v
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// `min |B k + d|` over integer `k`, skipping (near-)zero vectors.
fn shortest_shift(b: &Matrix4<f64>, binv: &Matrix4<f64>, d: &Vector4<f64>) -> Result<f64, LatticeError> {
    let c = -(binv * d);
    let r0 = c.map(f64::round);
    let zero_tol = 1e-9 * (1.0 + b.column_iter().map(|c| c.norm()).fold(0.0, f64::max));
    let mut best = f64::INFINITY;
    let start = b * r0 + d;
    if start.norm() > zero_tol {
        best = start.norm();
    }
    for col in b.column_iter() {
        for s in [-1.0, 1.0] {
            let v = start + col * s;
            if v.norm() > zero_tol {
                best = best.min(v.norm());
            }
        }
    }
    let lo: Vec<i64> = (0..4).map(|i| (c[i] - binv.row(i).norm() * best).floor() as i64).collect();
    let hi: Vec<i64> = (0..4).map(|i| (c[i] + binv.row(i).norm() * best).ceil() as i64).collect();
    let total: u64 = (0..4).map(|i| (hi[i] - lo[i] + 1) as u64).product();
    if total > MAX_ENUMERATION {
        return Err(LatticeError::IllConditioned(format!("gap search needs {total} candidates")));
    }
    for k0 in lo[0]..=hi[0] {
        for k1 in lo[1]..=hi[1] {
            for k2 in lo[2]..=hi[2] {
                for k3 in lo[3]..=hi[3] {
                    let k = Vector4::new(k0 as f64, k1 as f64, k2 as f64, k3 as f64);
                    let v = b * k + d;
                    let n = v.norm();
                    if n > zero_tol && n < best {
                        best = n;
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Distance from `x` to `period * Z`.
fn dist_to_multiples(x: f64, period: f64) -> f64 {
    (x - period * (x / period).round()).abs()
}

/// Builds `A` as the composite of `[u0 u1]^{-1}`, a rotation of the first
/// row and a dilation, then certifies both gaps on the window.
pub fn separating_transform(lat: &LatticeSpec, window: f64) -> Result<SeparatingTransform, LatticeError> {
    lat.validate()?;
    if !(window > 0.0 && window.is_finite()) {
        return Err(LatticeError::Input(format!("window must be positive, got {window}")));
    }
    let v: Vec<Vector4<f64>> = lat.generators.iter().map(to_r4).collect();
    let u = cross3([v[0], v[1], v[2]]);
    let u = u / u.norm();
    let (a, b) = (C64::new(u[0], u[1]), C64::new(u[2], u[3]));
    let u0 = [a, b];
    let u1 = [-b.conj(), a.conj()];
    let a1 = inverse(&[[u0[0], u1[0]], [u0[1], u1[1]]]).expect("u0, u1 are C-independent");
    let first = |p: &Point64| a1[0][0] * p[0] + a1[0][1] * p[1];
    let pivot = lat.generators[..3].iter().map(first).max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
    let rot = C64::from_polar(1.0, -pivot.arg());
    let mut m: Mat2 = [[a1[0][0] * rot, a1[0][1] * rot], a1[1]];

    let mu = |m: &Mat2, p: &Point64| apply(m, p)[0].im;
    let mu0 = mu(&m, &lat.generators[3]);
    let mu_j: Vec<f64> = lat.offsets.iter().map(|p| mu(&m, p)).collect();
    let level_scale = mu0.abs().max(1.0);
    let mut level_gap = mu0.abs();
    for (i, x) in mu_j.iter().enumerate() {
        for y in &mu_j[i + 1..] {
            let d = dist_to_multiples(y - x, mu0);
            if d > LEVEL_TOL * level_scale {
                level_gap = level_gap.min(d);
            }
        }
    }
    let br = realify(&m) * lat.real_matrix();
    let brinv = br.try_inverse().ok_or(LatticeError::Degenerate { det: 0.0, scale: lat.scale() })?;
    let ar = realify(&m);
    let mut point_gap = f64::INFINITY;
    for (i, p) in lat.offsets.iter().enumerate() {
        for q in &lat.offsets[i..] {
            let d = ar * (to_r4(q) - to_r4(p));
            point_gap = point_gap.min(shortest_shift(&br, &brinv, &d)?);
        }
    }
    let worst = point_gap.min(level_gap);
    let target = 1.0 + 1e-9;
    let dilation = if worst < target { target / worst } else { 1.0 };
    for row in m.iter_mut() {
        for z in row.iter_mut() {
            *z *= dilation;
        }
    }
    let inv = inverse(&m).ok_or(LatticeError::Degenerate { det: 0.0, scale: lat.scale() })?;
    let mu0 = mu0 * dilation;
    let mu_offsets: Vec<f64> = mu_j.iter().map(|x| x * dilation).collect();

    let pts = window_points_with_matrix(lat, window, &m)?;
    let levels = distinct_levels(pts.iter().map(|p| p.image[0].im));
    if pts.len() < 2 || levels.len() < 2 {
        return Err(LatticeError::WindowTooSmall { window, points: pts.len(), levels: levels.len() });
    }
    let window_min_level_gap = levels.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let level_residual = pts
        .iter()
        .map(|p| (p.image[0].im - (p.coeffs[3] as f64 * mu0 + mu_offsets[p.offset])).abs())
        .fold(0.0, f64::max);
    Ok(SeparatingTransform {
        matrix: m,
        inverse: inv,
        mu0,
        mu_offsets,
        dilation,
        window_min_point_gap: min_pair_distance(&pts),
        line_levels: levels,
        min_point_gap: point_gap * dilation,
        min_level_gap: level_gap * dilation,
        window,
        window_points: pts.len(),
        window_min_level_gap,
        level_residual,
    })
}

/// Window points with their images under an arbitrary matrix.
pub fn window_points_with_matrix(lat: &LatticeSpec, window: f64, m: &Mat2) -> Result<Vec<WindowPoint>, LatticeError> {
    Ok(enumerate_window(lat, window)?
        .into_iter()
        .map(|(q, coeffs, offset)| WindowPoint { coeffs, offset, q, image: apply(m, &q) })
        .collect())
}

/// Window points with their images under `t`.
pub fn window_points(lat: &LatticeSpec, t: &SeparatingTransform) -> Result<Vec<WindowPoint>, LatticeError> {
    window_points_with_matrix(lat, t.window, &t.matrix)
}

/// Sorted distinct values, merging values closer than `LEVEL_TOL` (relative).
pub fn distinct_levels(vals: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = vals.collect();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        match out.last() {
            Some(&l) if (x - l).abs() <= LEVEL_TOL * (1.0 + x.abs()) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Smallest distance between images closer than one unit, found by
/// hashing into unit cells of `R^4`; `INFINITY` if no pair is that close
/// within adjacent cells.
pub fn min_pair_distance(pts: &[WindowPoint]) -> f64 {
    let key = |p: &Point64| -> [i64; 4] { to_r4(p).map(|x| x.floor() as i64).into() };
    let mut cells: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        cells.entry(key(&p.image)).or_default().push(i);
    }
    pts.par_iter()
        .enumerate()
        .map(|(i, p)| {
            let k = key(&p.image);
            let mut best = f64::INFINITY;
            for d in 0..81 {
                let off = [d % 3, (d / 3) % 3, (d / 9) % 3, d / 27].map(|o| o as i64 - 1);
                let nk = [k[0] + off[0], k[1] + off[1], k[2] + off[2], k[3] + off[3]];
                if let Some(ids) = cells.get(&nk) {
                    for &j in ids {
                        if j > i {
                            best = best.min(norm(&[p.image[0] - pts[j].image[0], p.image[1] - pts[j].image[1]]));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}
