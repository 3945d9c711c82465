use rayon::prelude::*;
use serde::Serialize;

use super::{emit, exit, write_output, Cli, CliError, FbGridArgs, Report, RunManifest};
use crate::avoidance::{henon_forward, in_v, linear_part, AvoidanceError, HenonSystem, Membership};
use crate::{Point64, C64};

/// Largest accepted `|Psi(Dq) - H(Psi(q))|`.
pub const CONJUGACY_BOUND: f64 = 1e-6;
/// Smallest accepted distance between images of distinct grid points.
pub const INJECTIVITY_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct FbGridReport {
    pub grid: usize,
    pub extent: f64,
    pub tol: f64,
    pub nmax: usize,
    pub points: usize,
    pub max_conjugacy_residual: f64,
    pub inside_basin: usize,
    pub scaled_in_v: usize,
    pub min_pair_distance: f64,
    pub basin_radius: f64,
    pub empirical_radius: f64,
    pub pass: bool,
}

impl FbGridReport {
    pub fn render_text(&self) -> String {
        format!(
            "fb-grid: {}\n  points {}  inside basin {}  scaled in V {}\n  max conjugacy residual {:.3e} (bound {:e})\n  min pair distance {:.3e} (margin {:e})\n  basin radius {}  empirical radius {:.4}\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.points,
            self.inside_basin,
            self.scaled_in_v,
            self.max_conjugacy_residual,
            CONJUGACY_BOUND,
            self.min_pair_distance,
            INJECTIVITY_MARGIN,
            self.basin_radius,
            self.empirical_radius
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FbRow {
    pub re_z: f64,
    pub im_z: f64,
    pub re_w: f64,
    pub im_w: f64,
    pub re_psi_z: f64,
    pub im_psi_z: f64,
    pub re_psi_w: f64,
    pub im_psi_w: f64,
    pub inside: bool,
}

fn dist(a: &Point64, b: &Point64) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

/// `Psi` on the `grid^4` points of `[-extent, extent]^4` with the
/// conjugacy, basin, `V` and injectivity checks.
pub fn fb_grid(grid: usize, extent: f64, tol: f64, nmax: usize) -> Result<(FbGridReport, Vec<FbRow>), AvoidanceError> {
    let sys = HenonSystem::<f64> { n_max: nmax, ..Default::default() };
    sys.validate()?;
    let axis: Vec<f64> = (0..grid)
        .map(|k| if grid == 1 { 0.0 } else { -extent + 2.0 * extent * k as f64 / (grid - 1) as f64 })
        .collect();
    let mut qs = Vec::with_capacity(grid.pow(4));
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                for &d in &axis {
                    qs.push([C64::new(a, b), C64::new(c, d)]);
                }
            }
        }
    }
    let evals: Vec<(Point64, f64, bool, bool)> = qs
        .par_iter()
        .map(|q| {
            let psi = sys.fb_map(q, tol)?;
            let lhs = sys.fb_map(&linear_part(q), tol)?;
            let residual = dist(&lhs, &henon_forward(&psi));
            let inside = sys.basin_membership(&psi) == Membership::Inside;
            let scaled = sys.fb_scaled(q, tol)?;
            Ok((psi, residual, inside, in_v(&scaled)))
        })
        .collect::<Result<_, AvoidanceError>>()?;
    let images: Vec<Point64> = evals.iter().map(|e| e.0).collect();
    let min_pair = (0..images.len())
        .into_par_iter()
        .map(|i| images[i + 1..].iter().map(|b| dist(&images[i], b)).fold(f64::INFINITY, f64::min))
        .reduce(|| f64::INFINITY, f64::min);
    let inside: Vec<Point64> = evals.iter().filter(|e| e.2).map(|e| e.0).collect();
    let report = FbGridReport {
        grid,
        extent,
        tol,
        nmax,
        points: qs.len(),
        max_conjugacy_residual: evals.iter().map(|e| e.1).fold(0.0, f64::max),
        inside_basin: inside.len(),
        scaled_in_v: evals.iter().filter(|e| e.3).count(),
        min_pair_distance: min_pair,
        basin_radius: sys.basin_radius,
        empirical_radius: sys.empirical_radius(&inside),
        pass: false,
    };
    let pass = report.max_conjugacy_residual <= CONJUGACY_BOUND
        && report.inside_basin == report.points
        && report.scaled_in_v == report.points
        && (report.points < 2 || report.min_pair_distance >= INJECTIVITY_MARGIN);
    let rows = qs
        .iter()
        .zip(&evals)
        .map(|(q, e)| FbRow {
            re_z: q[0].re,
            im_z: q[0].im,
            re_w: q[1].re,
            im_w: q[1].im,
            re_psi_z: e.0[0].re,
            im_psi_z: e.0[0].im,
            re_psi_w: e.0[1].re,
            im_psi_w: e.0[1].im,
            inside: e.2,
        })
        .collect();
    Ok((FbGridReport { pass, ..report }, rows))
}

pub(super) fn run(cli: &Cli, a: &FbGridArgs) -> Result<i32, CliError> {
    if a.grid == 0 || !(a.extent > 0.0) || !(a.tol > 0.0) {
        return Err(CliError::new(exit::USAGE, "--grid, --extent and --tol must be positive"));
    }
    let (report, rows) = fb_grid(a.grid, a.extent, a.tol, a.nmax).map_err(|e| {
        let code = if matches!(e, AvoidanceError::Config { .. }) { exit::CONFIG } else { exit::FAIL };
        CliError::new(code, e.to_string())
    })?;
    let mut wr = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        wr.serialize(r).map_err(|e| CliError::new(exit::IO, e.to_string()))?;
    }
    let bytes = wr.into_inner().map_err(|e| CliError::new(exit::IO, e.to_string()))?;
    write_output(cli, "fb-grid.csv", &bytes)?;
    let config = serde_json::json!({ "grid": a.grid, "extent": a.extent, "tol": a.tol, "nmax": a.nmax });
    let manifest = RunManifest::new("fb-grid", cli.seed.unwrap_or(0), config);
    let json = Report::new(&manifest, &report).to_json();
    write_output(cli, "fb-grid.json", json.as_bytes())?;
    emit(cli, &json, || report.render_text());
    Ok(if report.pass { exit::PASS } else { exit::FAIL })
}
