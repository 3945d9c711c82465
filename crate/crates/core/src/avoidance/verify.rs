use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::henon::{escape_radius, HenonSystem};
use super::shears::{build_f1, build_f2, F1Map, F2Map};
use super::{AvoidanceConfig, AvoidanceError};
use crate::lattice::{separating_transform, window_points, LatticeSpec, SeparatingTransform, WindowPoint};
use crate::{Point64, C64};

const JACOBIAN_MIN: f64 = 1e-6;
const INVERSION_MAX: f64 = 1e-8;
const MAX_FAILURES: usize = 32;
const FIXED_SAMPLES: usize = 9;

/// Which inequality of the trichotomy applies to a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    /// Bidisk around some `q_j`: `|pi^2 F1(p)| <= 1/3`.
    In,
    /// `f_k = C` on `[x0 - delta, x0 + delta]`: `|pi^2 F1(p)| > 1`.
    Out1,
    /// Otherwise: `|pi^2 F1(p)| >= 9/16`.
    Out2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    In,
    Out1,
    Out2,
    DistHalf,
    Final,
    Jacobian,
    Inversion,
    SmootherPositivity,
    StripMembership,
}

impl Inequality {
    pub fn describe(self) -> &'static str {
        match self {
            Inequality::In => "|pi2 F1(p)| <= 1/3",
            Inequality::Out1 => "|pi2 F1(p)| > 1",
            Inequality::Out2 => "|pi2 F1(p)| >= 9/16",
            Inequality::DistHalf => "|pi2 F1(p) - 1/2| >= 1/16",
            Inequality::Final => "|pi2 F2 F1(p)| >= 1 + |pi1 p|^2",
            Inequality::Jacobian => "|det D(F2 F1)| >= 1e-6",
            Inequality::Inversion => "|F1^-1 F2^-1 F2 F1(p) - p| <= 1e-8 (1 + |p|)",
            Inequality::SmootherPositivity => "Re g >= -tolerance",
            Inequality::StripMembership => "|Im z - gamma_k| < epsilon for some k",
        }
    }
}

/// One evaluated sample, located by bidisk and sample index.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub inequality: Inequality,
    pub condition: &'static str,
    pub bidisk: usize,
    pub lattice_coeffs: [i64; 4],
    pub offset: usize,
    pub sample: usize,
    pub case: Case,
    pub point: [[f64; 2]; 2],
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Smallest slack per inequality, `None` when no sample fell in the case.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct Margins {
    #[serde(rename = "in")]
    pub in_: Option<f64>,
    pub out1: Option<f64>,
    pub out2: Option<f64>,
    pub dist_half: Option<f64>,
    #[serde(rename = "final")]
    pub final_: Option<f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Constants {
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "delta")]
    pub delta: f64,
    #[serde(rename = "epsilon")]
    pub epsilon: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Counts {
    pub bidisks: usize,
    pub samples: usize,
    pub samples_per_bidisk: usize,
    #[serde(rename = "in")]
    pub in_: usize,
    pub out1: usize,
    pub out2: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub jacobian_min: f64,
    pub inversion_max_error: f64,
    pub smoother_min_re: f64,
    pub smoother_max_error: f64,
    pub quadrature_x_max: f64,
    pub quadrature_tolerance: f64,
    pub tail_bound: f64,
    pub dilation: f64,
    pub lines: usize,
    pub q_points: usize,
    pub min_point_gap: f64,
    pub min_level_gap: f64,
    pub escape_radius: f64,
    pub basin_radius: f64,
}

/// Verification result. Deterministic for a given lattice and config.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub pass: bool,
    pub constants: Constants,
    pub margins: Margins,
    pub worst_points: Vec<SampleRecord>,
    pub failures: Vec<SampleRecord>,
    pub counts: Counts,
    pub diagnostics: Diagnostics,
    pub window: f64,
    pub seed: u64,
}

/// Everything computed for one sample point.
#[derive(Debug, Clone, Copy)]
pub struct SampleEval {
    pub case: Case,
    pub p: Point64,
    pub f1: Point64,
    pub f2: Point64,
    pub g_re: f64,
    pub g_error: f64,
    pub jacobian: f64,
    pub inversion_error: f64,
}

/// The 9 fixed samples (center, 4 faces in `z`, 4 in `w`, all at distance
/// exactly `r`) followed by `n` seeded interior points.
pub fn bidisk_samples(center: &Point64, r: f64, n: usize, seed: u64, index: usize) -> Vec<Point64> {
    let dirs = [C64::new(r, 0.0), C64::new(-r, 0.0), C64::new(0.0, r), C64::new(0.0, -r)];
    let mut out = Vec::with_capacity(FIXED_SAMPLES + n);
    out.push(*center);
    out.extend(dirs.iter().map(|d| [center[0] + d, center[1]]));
    out.extend(dirs.iter().map(|d| [center[0], center[1] + d]));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let disk = |rng: &mut ChaCha8Rng| {
        let rho = r * rng.gen::<f64>().sqrt();
        C64::from_polar(rho, std::f64::consts::TAU * rng.gen::<f64>())
    };
    for _ in 0..n {
        let a = disk(&mut rng);
        let b = disk(&mut rng);
        out.push([center[0] + a, center[1] + b]);
    }
    out
}

/// Composite `F2 F1` fiber map for fixed `z`: `w -> (w e^h - 1/2) e^{g2}`.
fn fiber(w: C64, eh: C64, eg2: C64) -> C64 {
    (w * eh - 0.5) * eg2
}

pub(crate) fn evaluate_sample(
    f1: &F1Map,
    f2: &F2Map,
    center_is_q: bool,
    p: Point64,
    g_cache: Option<super::smoother::Smoothed<f64>>,
) -> Result<SampleEval, AvoidanceError> {
    let z = p[0];
    let strip = f1.strip(z)?;
    let g = match g_cache {
        Some(g) => g,
        None => strip.eval(z).map_err(|e| AvoidanceError::F1(e.to_string()))?,
    };
    let case = if center_is_q {
        Case::In
    } else if strip.step.constant_on(z.re - f1.delta, z.re + f1.delta) == Some(f1.c) {
        Case::Out1
    } else {
        Case::Out2
    };
    let eh = g.value.exp();
    let w1 = p[1] * eh;
    let g2 = f2.g2(z)?;
    let eg2 = g2.exp();
    let w2 = (w1 - 0.5) * eg2;
    let back1 = w2 * (-g2).exp() + 0.5;
    let back = back1 * (-g.value).exp();
    let inversion_error = (back - p[1]).norm() / (1.0 + p[1].norm());
    // D(F2 F1) is block lower triangular with identity in the z block, so
    // its real determinant is that of the 2x2 w block.
    let s = 1e-6 * (1.0 + p[1].norm());
    let dre = (fiber(p[1] + s, eh, eg2) - fiber(p[1] - s, eh, eg2)) / (2.0 * s);
    let dim = (fiber(p[1] + C64::new(0.0, s), eh, eg2) - fiber(p[1] - C64::new(0.0, s), eh, eg2)) / (2.0 * s);
    let jacobian = dre.re * dim.im - dre.im * dim.re;
    Ok(SampleEval {
        case,
        p,
        f1: [z, w1],
        f2: [z, w2],
        g_re: g.value.re,
        g_error: g.error_bound,
        jacobian,
        inversion_error,
    })
}

/// The checks applied to one sample: `(inequality, lhs, rhs, margin)`,
/// each passing iff `margin >= 0` (strictly for `Out1`).
pub fn checks(e: &SampleEval, tolerance: f64) -> Vec<(Inequality, f64, f64, f64)> {
    let a = e.f1[1].norm();
    let mut v = Vec::with_capacity(6);
    v.push(match e.case {
        Case::In => (Inequality::In, a, 1.0 / 3.0, 1.0 / 3.0 - a),
        Case::Out1 => (Inequality::Out1, a, 1.0, a - 1.0),
        Case::Out2 => (Inequality::Out2, a, 9.0 / 16.0, a - 9.0 / 16.0),
    });
    let d = (e.f1[1] - 0.5).norm();
    v.push((Inequality::DistHalf, d, 1.0 / 16.0, d - 1.0 / 16.0));
    let fin = e.f2[1].norm();
    let bound = 1.0 + e.p[0].norm_sqr();
    v.push((Inequality::Final, fin, bound, fin - bound));
    v.push((Inequality::Jacobian, e.jacobian.abs(), JACOBIAN_MIN, e.jacobian.abs() - JACOBIAN_MIN));
    v.push((Inequality::Inversion, e.inversion_error, INVERSION_MAX, INVERSION_MAX - e.inversion_error));
    v.push((Inequality::SmootherPositivity, e.g_re, -tolerance, e.g_re + tolerance));
    v
}

fn passes(ineq: Inequality, margin: f64) -> bool {
    match ineq {
        Inequality::Out1 | Inequality::StripMembership => margin > 0.0,
        _ => margin >= 0.0,
    }
}

/// Partial result over a set of bidisks; merging is associative and
/// commutative, with ties broken by (bidisk, sample).
#[derive(Debug, Clone, Default)]
struct Fold {
    worst: Vec<SampleRecord>,
    failures: Vec<SampleRecord>,
    counts: Counts,
    jacobian_min: f64,
    inversion_max: f64,
    g_min_re: f64,
    g_max_err: f64,
}

fn key(r: &SampleRecord) -> (f64, usize, usize) {
    (r.margin, r.bidisk, r.sample)
}

fn better(a: &SampleRecord, b: &SampleRecord) -> bool {
    key(a).partial_cmp(&key(b)).is_some_and(|o| o.is_lt())
}

impl Fold {
    fn empty() -> Self {
        Fold {
            jacobian_min: f64::INFINITY,
            g_min_re: f64::INFINITY,
            ..Default::default()
        }
    }

    fn offer(&mut self, rec: SampleRecord) {
        if !passes(rec.inequality, rec.margin) {
            self.failures.push(rec.clone());
            self.failures.sort_by_key(|f| (f.bidisk, f.sample, f.inequality));
            self.failures.truncate(MAX_FAILURES);
        }
        match self.worst.iter_mut().find(|w| w.inequality == rec.inequality) {
            Some(w) if better(&rec, w) => *w = rec,
            Some(_) => {}
            None => self.worst.push(rec),
        }
    }

    fn merge(mut self, other: Fold) -> Fold {
        for r in other.worst {
            self.offer_worst(r);
        }
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| (f.bidisk, f.sample, f.inequality));
        self.failures.truncate(MAX_FAILURES);
        self.counts.bidisks += other.counts.bidisks;
        self.counts.samples += other.counts.samples;
        self.counts.in_ += other.counts.in_;
        self.counts.out1 += other.counts.out1;
        self.counts.out2 += other.counts.out2;
        self.jacobian_min = self.jacobian_min.min(other.jacobian_min);
        self.inversion_max = self.inversion_max.max(other.inversion_max);
        self.g_min_re = self.g_min_re.min(other.g_min_re);
        self.g_max_err = self.g_max_err.max(other.g_max_err);
        self
    }

    fn offer_worst(&mut self, rec: SampleRecord) {
        match self.worst.iter_mut().find(|w| w.inequality == rec.inequality) {
            Some(w) if better(&rec, w) => *w = rec,
            Some(_) => {}
            None => self.worst.push(rec),
        }
    }
}

fn verify_bidisk(
    f1: &F1Map,
    f2: &F2Map,
    cfg: &AvoidanceConfig,
    index: usize,
    wp: &WindowPoint,
) -> Result<Fold, AvoidanceError> {
    let mut fold = Fold::empty();
    let center = wp.image;
    let center_is_q = center[1].norm() <= 1.0 / 8.0;
    let samples = bidisk_samples(&center, cfg.r, cfg.samples, cfg.seed, index);
    // Samples 0 and 5..=8 share the first coordinate of the center.
    let g_center = f1.g(center[0]).map_err(|e| AvoidanceError::F1(e.to_string()))?;
    fold.counts.bidisks = 1;
    for (k, p) in samples.into_iter().enumerate() {
        let d = f1.strip_distance(p[0]);
        if d >= f1.epsilon {
            // F1 is only defined on the strips; nothing else can be checked.
            fold.counts.samples += 1;
            fold.offer(SampleRecord {
                inequality: Inequality::StripMembership,
                condition: Inequality::StripMembership.describe(),
                bidisk: index,
                lattice_coeffs: wp.coeffs,
                offset: wp.offset,
                sample: k,
                case: if center_is_q { Case::In } else { Case::Out2 },
                point: [[p[0].re, p[0].im], [p[1].re, p[1].im]],
                lhs: d,
                rhs: f1.epsilon,
                margin: f1.epsilon - d,
            });
            continue;
        }
        let cache = (k == 0 || (5..FIXED_SAMPLES).contains(&k)).then_some(g_center);
        let e = evaluate_sample(f1, f2, center_is_q, p, cache)?;
        fold.counts.samples += 1;
        match e.case {
            Case::In => fold.counts.in_ += 1,
            Case::Out1 => fold.counts.out1 += 1,
            Case::Out2 => fold.counts.out2 += 1,
        }
        fold.jacobian_min = fold.jacobian_min.min(e.jacobian.abs());
        fold.inversion_max = fold.inversion_max.max(e.inversion_error);
        fold.g_min_re = fold.g_min_re.min(e.g_re);
        fold.g_max_err = fold.g_max_err.max(e.g_error);
        for (ineq, lhs, rhs, margin) in checks(&e, cfg.tolerance) {
            fold.offer(SampleRecord {
                inequality: ineq,
                condition: ineq.describe(),
                bidisk: index,
                lattice_coeffs: wp.coeffs,
                offset: wp.offset,
                sample: k,
                case: e.case,
                point: [[p[0].re, p[0].im], [p[1].re, p[1].im]],
                lhs,
                rhs,
                margin,
            });
        }
    }
    Ok(fold)
}

/// Checks the configuration, then runs the whole pipeline.
pub fn verify_avoidance(lat: &LatticeSpec, cfg: &AvoidanceConfig) -> Result<Certificate, AvoidanceError> {
    cfg.validate()?;
    verify_avoidance_unchecked(lat, cfg)
}

/// The pipeline without the configuration check, for probing what breaks
/// when a constraint is violated.
pub fn verify_avoidance_unchecked(lat: &LatticeSpec, cfg: &AvoidanceConfig) -> Result<Certificate, AvoidanceError> {
    let t = separating_transform(lat, cfg.window)?;
    let f1 = build_f1(lat, &t, cfg)?;
    let f2 = build_f2(cfg, &f1.gammas());
    verify_with(lat, &t, &f1, &f2, cfg)
}

pub fn verify_with(
    lat: &LatticeSpec,
    t: &SeparatingTransform,
    f1: &F1Map,
    f2: &F2Map,
    cfg: &AvoidanceConfig,
) -> Result<Certificate, AvoidanceError> {
    let centers = window_points(lat, t)?;
    let fold = centers
        .par_iter()
        .enumerate()
        .map(|(i, wp)| verify_bidisk(f1, f2, cfg, i, wp))
        .try_reduce(Fold::empty, |a, b| Ok(a.merge(b)))?;
    let margin_of = |ineq: Inequality| fold.worst.iter().find(|w| w.inequality == ineq).map(|w| w.margin);
    let mut worst = fold.worst.clone();
    worst.sort_by_key(|w| w.inequality);
    let henon = HenonSystem::<f64>::default();
    let tail = f1.strips().iter().map(|s| s.effective_tail_bound()).fold(0.0, f64::max);
    let mut counts = fold.counts.clone();
    counts.samples_per_bidisk = FIXED_SAMPLES + cfg.samples;
    Ok(Certificate {
        pass: fold.failures.is_empty() && counts.bidisks > 0,
        constants: Constants { c: cfg.c, delta: cfg.delta, epsilon: cfg.epsilon, r: cfg.r },
        margins: Margins {
            in_: margin_of(Inequality::In),
            out1: margin_of(Inequality::Out1),
            out2: margin_of(Inequality::Out2),
            dist_half: margin_of(Inequality::DistHalf),
            final_: margin_of(Inequality::Final),
        },
        worst_points: worst,
        failures: fold.failures,
        counts,
        diagnostics: Diagnostics {
            jacobian_min: fold.jacobian_min,
            inversion_max_error: fold.inversion_max,
            smoother_min_re: fold.g_min_re,
            smoother_max_error: fold.g_max_err,
            quadrature_x_max: cfg.x_max(),
            quadrature_tolerance: cfg.tolerance,
            tail_bound: tail,
            dilation: t.dilation,
            lines: f1.strips().len(),
            q_points: f1.q_points.len(),
            min_point_gap: t.min_point_gap,
            min_level_gap: t.min_level_gap,
            escape_radius: escape_radius::<f64>(),
            basin_radius: henon.basin_radius,
        },
        window: cfg.window,
        seed: cfg.seed,
    })
}
