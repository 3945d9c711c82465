use std::time::Instant;

use serde::Serialize;

use super::{
    elapsed_ms, emit, exit, read_input, write_output, Cli, CliError, Report, RunManifest, VerifyArgs,
    SQUARE_LATTICE_FIXTURE,
};
use crate::avoidance::{build_f1, build_f2, verify_with, AvoidanceConfig, AvoidanceError, Certificate};
use crate::lattice::{separating_transform, window_points, LatticeSpec};

fn stage_code(e: &AvoidanceError) -> i32 {
    match e {
        AvoidanceError::Config { .. } => exit::CONFIG,
        AvoidanceError::Transform(_) => exit::TRANSFORM,
        AvoidanceError::F2(_) => exit::F2,
        AvoidanceError::F1(_) | AvoidanceError::OutsideStrip { .. } | AvoidanceError::NoConvergence { .. } => exit::F1,
    }
}

fn config_error(e: AvoidanceError) -> CliError {
    CliError::new(stage_code(&e), e.to_string())
}

/// Layers defaults, the config file, a replayed manifest, flags and
/// `--seed`, in increasing priority. Setting `epsilon` anywhere resets `r`
/// to `epsilon/2` unless `r` is set at the same level or later.
pub fn resolve_config(
    file: Option<&str>,
    manifest: Option<&RunManifest>,
    a: &VerifyArgs,
    seed: Option<u64>,
) -> Result<AvoidanceConfig, AvoidanceError> {
    let mut cfg = match file {
        Some(text) => AvoidanceConfig::from_kv(text)?,
        None => AvoidanceConfig::default(),
    };
    if let Some(m) = manifest {
        cfg = serde_json::from_value(m.config.clone())
            .map_err(|e| AvoidanceError::config("manifest config", e.to_string()))?;
        cfg.seed = m.seed;
    }
    if let Some(e) = a.epsilon {
        cfg = cfg.with_epsilon(e);
    }
    if let Some(r) = a.r {
        cfg.r = r;
    }
    if let Some(w) = a.window {
        cfg.window = w;
    }
    if let Some(s) = a.samples {
        cfg.samples = s;
    }
    if let Some(t) = a.tolerance {
        cfg.tolerance = t;
    }
    if let Some(n) = a.nmax {
        cfg.nmax = n;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct PointRow {
    re_z: f64,
    im_z: f64,
    re_w: f64,
    im_w: f64,
    re_f_z: f64,
    im_f_z: f64,
    re_f_w: f64,
    im_f_w: f64,
}

pub(super) fn run(cli: &Cli, a: &VerifyArgs) -> Result<i32, CliError> {
    let start = Instant::now();
    let (lattice_bytes, lattice_name) = match &a.lattice {
        Some(p) => (read_input(p)?, p.display().to_string()),
        None => (SQUARE_LATTICE_FIXTURE.as_bytes().to_vec(), "bundled:square_lattice".to_string()),
    };
    let text = String::from_utf8(lattice_bytes.clone()).map_err(|_| CliError::new(exit::USAGE, "lattice is not UTF-8"))?;
    let lat = LatticeSpec::from_json(&text).map_err(|e| CliError::new(exit::USAGE, format!("{lattice_name}: {e}")))?;

    let config_text = match &a.config {
        Some(p) => Some(
            String::from_utf8(read_input(p)?).map_err(|_| CliError::new(exit::USAGE, "config is not UTF-8"))?,
        ),
        None => None,
    };
    let replay = match &a.manifest {
        Some(p) => {
            let v: serde_json::Value = serde_json::from_slice(&read_input(p)?)
                .map_err(|e| CliError::new(exit::USAGE, format!("{}: {e}", p.display())))?;
            let m = v.get("manifest").cloned().unwrap_or(v);
            let m: RunManifest = serde_json::from_value(m)
                .map_err(|e| CliError::new(exit::USAGE, format!("{}: not a manifest: {e}", p.display())))?;
            if m.command != "verify" {
                return Err(CliError::new(exit::USAGE, format!("manifest is for `{}`, not `verify`", m.command)));
            }
            let want = m.input_digests.get("lattice");
            let have = super::digest(&lattice_bytes);
            if want.is_some_and(|d| *d != have) {
                return Err(CliError::new(exit::USAGE, "lattice does not match the manifest digest"));
            }
            Some(m)
        }
        None => None,
    };
    let cfg = resolve_config(config_text.as_deref(), replay.as_ref(), a, cli.seed).map_err(config_error)?;
    let mut manifest = RunManifest::new("verify", cfg.seed, serde_json::to_value(&cfg).unwrap())
        .with_input("lattice", &lattice_bytes);
    if let Some(t) = &config_text {
        manifest = manifest.with_input("config", t.as_bytes());
    }

    cfg.validate().map_err(config_error)?;
    let t = separating_transform(&lat, cfg.window).map_err(|e| config_error(e.into()))?;
    let f1 = build_f1(&lat, &t, &cfg).map_err(config_error)?;
    let f2 = build_f2(&cfg, &f1.gammas());
    let cert = verify_with(&lat, &t, &f1, &f2, &cfg).map_err(config_error)?;

    if a.points_csv {
        let centers = window_points(&lat, &t).map_err(|e| config_error(e.into()))?;
        let mut wr = csv::Writer::from_writer(Vec::new());
        for wp in &centers {
            let p = wp.image;
            let img = f1.apply(&p).and_then(|q| f2.apply(&q)).map_err(config_error)?;
            wr.serialize(PointRow {
                re_z: p[0].re,
                im_z: p[0].im,
                re_w: p[1].re,
                im_w: p[1].im,
                re_f_z: img[0].re,
                im_f_z: img[0].im,
                re_f_w: img[1].re,
                im_f_w: img[1].im,
            })
            .map_err(|e| CliError::new(exit::IO, e.to_string()))?;
        }
        let bytes = wr.into_inner().map_err(|e| CliError::new(exit::IO, e.to_string()))?;
        write_output(cli, "points.csv", &bytes)?;
    }

    let json = Report::new(&manifest, &cert).to_json();
    write_output(cli, "certificate.json", json.as_bytes())?;
    manifest.runtime_ms = Some(elapsed_ms(start));
    let mut run_json = serde_json::to_string_pretty(&manifest).unwrap();
    run_json.push('\n');
    write_output(cli, "run.json", run_json.as_bytes())?;
    emit(cli, &json, || render_text(&cert));
    Ok(if cert.pass { exit::PASS } else { exit::FAIL })
}

fn render_text(c: &Certificate) -> String {
    let fmt = |m: Option<f64>| m.map_or("n/a".to_string(), |v| format!("{v:.6}"));
    let mut out = format!(
        "verify: {}\n  bidisks {}  samples {}  (in {}, out1 {}, out2 {})\n",
        if c.pass { "PASS" } else { "FAIL" },
        c.counts.bidisks,
        c.counts.samples,
        c.counts.in_,
        c.counts.out1,
        c.counts.out2
    );
    out.push_str(&format!(
        "  margins: in {}  out1 {}  out2 {}  dist_half {}  final {}\n",
        fmt(c.margins.in_),
        fmt(c.margins.out1),
        fmt(c.margins.out2),
        fmt(c.margins.dist_half),
        fmt(c.margins.final_)
    ));
    out.push_str(&format!(
        "  jacobian min {:.3e}  inversion max {:.3e}\n",
        c.diagnostics.jacobian_min, c.diagnostics.inversion_max_error
    ));
    for f in c.failures.iter().take(5) {
        out.push_str(&format!(
            "  violated {} at bidisk {} ({:?}, sample {}): lhs {:.6e}, rhs {:.6e}\n",
            f.condition, f.bidisk, f.lattice_coeffs, f.sample, f.lhs, f.rhs
        ));
    }
    out
}
