use std::collections::BTreeMap;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{emit, exit, write_output, Cli, CliError, ConstructArgs, Report, RunManifest};
use crate::fiberwise::{
    eval_psi, psi_graph_gap, square_grid, twist_map, write_grid_csv, DoubleSectionData, FiberError,
    GraphComplementMap, GridSample, Proj,
};
use crate::{RatFn64, C64};

const SOLVE_TOL: f64 = 1e-8;
const POLE_RADIUS: f64 = 1e-2;
const POLE_H_BOUND: f64 = 1e3;
const BRANCH_RADIUS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructKind {
    Psi,
    GraphComplement,
    DoubleSection,
    Twist,
}

impl ConstructKind {
    fn name(self) -> &'static str {
        match self {
            ConstructKind::Psi => "psi",
            ConstructKind::GraphComplement => "graph-complement",
            ConstructKind::DoubleSection => "double-section",
            ConstructKind::Twist => "twist",
        }
    }
}

/// One self-check: `value > bound` for gaps, `value <= bound` for errors.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub relation: &'static str,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn above(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.to_string(), relation: ">", value, bound, pass: value > bound }
    }

    fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.to_string(), relation: "<=", value, bound, pass: value <= bound }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructSummary {
    pub kind: ConstructKind,
    pub params: BTreeMap<String, String>,
    pub rows: usize,
    /// Grid points over a pole of the input data, left out of the dump.
    pub skipped: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl ConstructSummary {
    pub fn render_text(&self) -> String {
        let mut out = format!("construct {}: {} rows, {} skipped\n", self.kind.name(), self.rows, self.skipped);
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {tag} {}: {:.6e} {} {:e}\n", c.name, c.value, c.relation, c.bound));
        }
        out
    }
}

fn fiber_samples(n: usize, extent: f64) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let t = -1.0 + 2.0 * (k as f64 + 0.5) / n as f64;
            C64::new(t * extent, 0.5 * t * extent)
        })
        .collect()
}

fn random_point(rng: &mut ChaCha8Rng, extent: f64) -> C64 {
    C64::new(rng.gen_range(-extent..extent), rng.gen_range(-extent..extent))
}

/// Evaluates the map on the grid and runs its self-checks.
pub fn construct(a: &ConstructArgs, seed: u64) -> Result<(ConstructSummary, Vec<GridSample<f64>>), FiberError> {
    let zs = square_grid(C64::new(0.0, 0.0), a.extent, a.grid);
    let ws = fiber_samples(a.w_samples, a.extent);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(zs.len() * ws.len());
    let mut skipped = 0;
    let mut checks = Vec::new();
    let mut params = BTreeMap::new();
    let mut worst_solve = 0.0f64;
    let mut solved = 0usize;
    let mut solve = |lhs: C64, c: C64| {
        worst_solve = worst_solve.max((lhs - c).norm() / (1.0 + c.norm()));
        solved += 1;
    };
    match a.kind {
        ConstructKind::Psi => {
            let mut gap = f64::INFINITY;
            for &t in &zs {
                for &w in &ws {
                    rows.push(GridSample { z: t, w, out: Proj::Finite(eval_psi(t, w)) });
                    if t.norm() > 0.0 {
                        gap = gap.min(psi_graph_gap(t, w).norm());
                    }
                }
            }
            checks.push(Check::above("min |psi(t,w) + 1/t|", gap, 0.0));
            for _ in 0..a.fibers {
                let t = random_point(&mut rng, a.extent);
                for _ in 0..a.targets {
                    let c = random_point(&mut rng, a.extent);
                    let w = (t * c + 1.0).ln() / t;
                    solve(eval_psi(t, w), c);
                }
            }
        }
        ConstructKind::GraphComplement => {
            params.insert("s".into(), a.s.clone());
            let s = RatFn64::parse(&a.s)?;
            let map = GraphComplementMap::principal_part_inverse(s)?;
            let mut gap = f64::INFINITY;
            for &z in &zs {
                if map.section().is_pole(z) {
                    skipped += 1;
                    continue;
                }
                for &w in &ws {
                    rows.push(GridSample { z, w, out: Proj::Finite(map.eval(z, w)) });
                    if let Some(d) = map.avoidance_gap(z, w) {
                        gap = gap.min(d.norm());
                    }
                }
            }
            checks.push(Check::above("min |phi(z,w) - s(z)|", gap, 0.0));
            let poles: Vec<C64> = map.section().poles().iter().map(|p| p.at).collect();
            let fibers: Vec<C64> = poles
                .iter()
                .copied()
                .chain(std::iter::repeat_with(|| random_point(&mut rng, a.extent)))
                .take(a.fibers.max(poles.len()))
                .collect();
            for z in fibers {
                for _ in 0..a.targets {
                    let c = random_point(&mut rng, a.extent);
                    let w = map.solve_fiber(z, c)?;
                    solve(map.eval(z, w), c);
                }
            }
            if !poles.is_empty() {
                checks.push(Check::at_most("max |h| near poles", map.max_h_near_poles(POLE_RADIUS, 64), POLE_H_BOUND));
            }
        }
        ConstructKind::DoubleSection => {
            params.insert("u".into(), a.u.clone());
            params.insert("v".into(), a.v.clone());
            let data = DoubleSectionData::from_sections(&RatFn64::parse(&a.u)?, &RatFn64::parse(&a.v)?)?;
            let mut gap = f64::INFINITY;
            for &z in &zs {
                let Ok(first) = data.eval(z, ws[0]) else {
                    skipped += 1;
                    continue;
                };
                for (k, &w) in ws.iter().enumerate() {
                    let out = if k == 0 { first } else { data.eval(z, w)? };
                    rows.push(GridSample { z, w, out });
                    gap = gap.min(data.avoidance_gap(z, w)?);
                }
            }
            checks.push(Check::above("min chordal distance to v+-", gap, 0.0));
            let mut near = f64::INFINITY;
            for &b in data.branch_points() {
                for k in 0..16 {
                    let z = b + C64::from_polar(BRANCH_RADIUS, std::f64::consts::TAU * k as f64 / 16.0);
                    for &w in &ws {
                        if let Ok(d) = data.avoidance_gap(z, w) {
                            near = near.min(d);
                        }
                    }
                }
            }
            if near.is_finite() {
                checks.push(Check::above("min chordal distance near branch points", near, 0.0));
            }
        }
        ConstructKind::Twist => {
            params.insert("p".into(), a.p.clone());
            params.insert("q".into(), a.q.clone());
            let pr = RatFn64::parse(&a.p)?;
            if pr.denominator().degree() != Some(0) {
                return Err(FiberError::Parse { pos: 0, msg: "p must be a polynomial".into() });
            }
            let p = pr.numerator().clone();
            let q = RatFn64::parse(&a.q)?;
            for &z in &zs {
                if q.is_pole(z) {
                    skipped += 1;
                    continue;
                }
                for &w in &ws {
                    rows.push(GridSample { z, w, out: Proj::Finite(twist_map(&p, &q, z, w)?) });
                }
            }
            let mut collapse = 0.0f64;
            for r in p.distinct_roots(1e-4) {
                if let Ok(q0) = q.eval_finite(r.at) {
                    for &w in &ws {
                        collapse = collapse.max((twist_map(&p, &q, r.at, w)? - q0).norm() / (1.0 + q0.norm()));
                    }
                }
            }
            checks.push(Check::at_most("max |H(z0,w) - q(z0)| over zeros of p", collapse, 1e-9));
            for _ in 0..a.fibers {
                let z = random_point(&mut rng, a.extent);
                let (Ok(qz), pz) = (q.eval_finite(z), p.eval(&z)) else { continue };
                for _ in 0..a.targets {
                    let c = random_point(&mut rng, a.extent);
                    solve(twist_map(&p, &q, z, (c - qz) / pz)?, c);
                }
            }
        }
    }
    if solved > 0 {
        checks.push(Check::at_most("max relative residual of fiber inversion", worst_solve, SOLVE_TOL));
    }
    for (k, v) in [
        ("kind", a.kind.name().to_string()),
        ("grid", a.grid.to_string()),
        ("extent", a.extent.to_string()),
        ("w_samples", a.w_samples.to_string()),
        ("fibers", a.fibers.to_string()),
        ("targets", a.targets.to_string()),
    ] {
        params.insert(k.into(), v);
    }
    let pass = checks.iter().all(|c| c.pass);
    let summary = ConstructSummary { kind: a.kind, params, rows: rows.len(), skipped, checks, pass };
    Ok((summary, rows))
}

pub(super) fn run(cli: &Cli, a: &ConstructArgs) -> Result<i32, CliError> {
    if a.grid == 0 || a.w_samples == 0 || !(a.extent > 0.0) {
        return Err(CliError::new(exit::USAGE, "--grid, --w-samples and --extent must be positive"));
    }
    let seed = cli.seed.unwrap_or(0);
    let (summary, rows) = construct(a, seed).map_err(|e| CliError::new(exit::USAGE, e.to_string()))?;
    let mut csv = Vec::new();
    write_grid_csv(&mut csv, &rows).map_err(|e| CliError::new(exit::IO, e.to_string()))?;
    let name = a.kind.name();
    write_output(cli, &format!("construct-{name}.csv"), &csv)?;
    let manifest = RunManifest::new("construct", seed, serde_json::to_value(&summary.params).unwrap());
    let json = Report::new(&manifest, &summary).to_json();
    write_output(cli, &format!("construct-{name}.json"), json.as_bytes())?;
    emit(cli, &json, || summary.render_text());
    Ok(if summary.pass { exit::PASS } else { exit::FAIL })
}
