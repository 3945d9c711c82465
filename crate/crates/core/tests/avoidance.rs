use domlab::avoidance::{
    bidisk_samples, build_f2, henon_backward, henon_forward, in_v, linear_part, max_epsilon, verify_avoidance,
    verify_avoidance_unchecked, AvoidanceConfig, AvoidanceError, HenonSystem, Inequality, Membership, StepFunction,
    StripSmoother,
};
use domlab::lattice::LatticeSpec;
use domlab::{ExactComplex, Point64, Rational, C64};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn small(cfg: AvoidanceConfig) -> AvoidanceConfig {
    AvoidanceConfig { window: 2.0, samples: 4, ..cfg }
}

#[test]
fn epsilon_bound_values() {
    let eps = max_epsilon(32f64.ln(), 1.0 / 16.0);
    assert!((eps - 0.0114857).abs() < 1e-6);
    // With a small C the strip half-width bound delta/2 is the binding one.
    assert_eq!(max_epsilon(0.1, 1.0 / 16.0), 1.0 / 32.0);
}

#[test]
fn smoother_is_positive_and_local() {
    let cfg = AvoidanceConfig::default();
    let step = StepFunction::from_zero_intervals(cfg.c, &[(-0.1, 0.1), (1.0, 1.1)]);
    let sm = StripSmoother::new(step, cfg.epsilon, 3.0, cfg.tolerance).unwrap();
    let bound = 2.0 * cfg.c * cfg.epsilon / (std::f64::consts::PI * cfg.delta);
    for k in 0..200 {
        let x = -1.0 + 3.0 * k as f64 / 199.0;
        for y in [-0.9, 0.0, 0.9] {
            let g = sm.eval(c(x, 3.0 + y * cfg.epsilon)).unwrap().value;
            assert!(g.re >= -cfg.tolerance);
            if let Some(f) = sm.step.constant_on(x - cfg.delta, x + cfg.delta) {
                assert!((g - f).norm() <= bound + cfg.tolerance);
            }
        }
    }
    assert!(matches!(sm.eval(c(0.0, 0.0)), Err(AvoidanceError::OutsideStrip { .. })));
}

#[test]
fn henon_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut r = || Rational::new(BigInt::from(rng.gen_range(-1000i64..1000)), BigInt::from(rng.gen_range(1i64..1000)));
    for _ in 0..10_000 {
        let p: [ExactComplex; 2] = [ExactComplex::new(r(), r()), ExactComplex::new(r(), r())];
        assert_eq!(henon_backward(&henon_forward(&p)), p);
        assert_eq!(henon_forward(&henon_backward(&p)), p);
    }
}

#[test]
fn linear_part_eigenvalues() {
    // D has eigenvalues +- i/sqrt 2, so D^2 = -1/2.
    let p = [c(0.3, -1.0), c(2.0, 0.5)];
    let d2 = linear_part(&linear_part(&p));
    assert!((d2[0] + p[0] * 0.5).norm() < 1e-15 && (d2[1] + p[1] * 0.5).norm() < 1e-15);
    let lambda = c(0.0, 1.0 / 2f64.sqrt());
    let v = [c(1.0, 0.0), lambda];
    let dv = linear_part(&v);
    assert!((dv[0] - lambda * v[0]).norm() < 1e-15 && (dv[1] - lambda * v[1]).norm() < 1e-15);
}

#[test]
fn basin_membership_extremes() {
    let sys = HenonSystem::<f64>::default();
    assert_eq!(sys.basin_membership(&[c(0.0, 0.0), c(0.0, 0.0)]), Membership::Inside);
    assert_eq!(sys.basin_membership(&[c(0.0, 0.0), c(1e6, 0.0)]), Membership::Outside);
}

#[test]
fn basin_map_conjugates() {
    let sys = HenonSystem::<f64>::default();
    let axis: Vec<f64> = (0..12).map(|k| -2.0 + 4.0 * k as f64 / 11.0).collect();
    let mut worst = 0.0f64;
    for &a in &axis {
        for &b in &axis {
            for &x in &axis {
                for &y in &axis {
                    let q: Point64 = [c(a, b), c(x, y)];
                    let lhs = sys.fb_map(&linear_part(&q), 1e-10).unwrap();
                    let rhs = henon_forward(&sys.fb_map(&q, 1e-10).unwrap());
                    worst = worst.max((lhs[0] - rhs[0]).norm() + (lhs[1] - rhs[1]).norm());
                }
            }
        }
    }
    assert!(worst <= 1e-6, "conjugacy residual {worst}");
    // The first two iterates coincide on q = (0, w).
    let q: Point64 = [c(0.0, 0.0), c(1.0, 0.0)];
    let lhs = sys.fb_map(&linear_part(&q), 1e-10).unwrap();
    let rhs = henon_forward(&sys.fb_map(&q, 1e-10).unwrap());
    assert!((lhs[0] - rhs[0]).norm() + (lhs[1] - rhs[1]).norm() <= 1e-6);
    let img = sys.fb_scaled(&[c(1.0, 0.0), c(0.0, -1.0)], 1e-10).unwrap();
    assert!(in_v(&img));
}

#[test]
fn f2_real_part_bound_on_strips() {
    let cfg = AvoidanceConfig::default();
    let gammas = [-3.0, 0.0, 1.0, 7.5];
    let f2 = build_f2(&cfg, &gammas);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10_000 {
        let g = gammas[rng.gen_range(0..gammas.len())];
        let z = c(rng.gen_range(-50.0..50.0), g + rng.gen_range(-0.999..0.999) * cfg.epsilon);
        let a = f2.log_argument(z).unwrap();
        assert!(a.re >= f2.re_lower_bound(z).unwrap() - 1e-9 * (1.0 + a.re));
        let p = [z, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))];
        let back = f2.inverse(&f2.apply(&p).unwrap()).unwrap();
        assert!((back[1] - p[1]).norm() <= 1e-12 * (1.0 + p[1].norm()));
    }
}

#[test]
fn square_lattice_passes() {
    let cert = verify_avoidance(&LatticeSpec::square(), &small(AvoidanceConfig::default())).unwrap();
    assert!(cert.pass, "{:?}", cert.failures);
    assert_eq!(cert.counts.samples_per_bidisk, 13);
    assert!(cert.diagnostics.jacobian_min >= 1e-6);
    assert!(cert.diagnostics.inversion_max_error <= 1e-8);
}

#[test]
fn inflated_radius_is_caught() {
    let mut cfg = small(AvoidanceConfig::default());
    cfg.r = 10.0 * cfg.epsilon;
    assert!(matches!(verify_avoidance(&LatticeSpec::square(), &cfg), Err(AvoidanceError::Config { .. })));
    let cert = verify_avoidance_unchecked(&LatticeSpec::square(), &cfg).unwrap();
    assert!(!cert.pass);
    let failed = &cert.failures[0];
    assert!(matches!(failed.inequality, Inequality::StripMembership | Inequality::In | Inequality::DistHalf));
    assert!(!failed.inequality.describe().is_empty());
}

#[test]
fn seeds_change_samples_not_verdict() {
    let run = |seed| {
        let cfg = AvoidanceConfig { seed, ..small(AvoidanceConfig::default()) };
        verify_avoidance(&LatticeSpec::square(), &cfg).unwrap()
    };
    let (a, b) = (run(1), run(2));
    assert!(a.pass && b.pass);
    // Extremal margins sit on the fixed center and face samples.
    assert_eq!(a.margins, b.margins);
    let center = [c(0.5, 0.0), c(0.0, 0.5)];
    assert_ne!(bidisk_samples(&center, 0.1, 4, 1, 0), bidisk_samples(&center, 0.1, 4, 2, 0));
    assert_eq!(bidisk_samples(&center, 0.1, 4, 1, 3), bidisk_samples(&center, 0.1, 4, 1, 3));
    let again = run(1);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&again).unwrap());
}

proptest! {
    #[test]
    fn quadrature_matches_closed_form(
        a in -2.0..2.0f64,
        len in 0.01..1.5f64,
        x in -3.0..3.0f64,
        y in -0.99..0.99f64,
        one_sided in any::<bool>(),
    ) {
        let cfg = AvoidanceConfig::default();
        let step = if one_sided {
            StepFunction::from_breaks(cfg.c, vec![a], vec![cfg.c, 0.0]).unwrap()
        } else {
            StepFunction::from_zero_intervals(cfg.c, &[(a, a + len)])
        };
        let sm = StripSmoother::new(step, cfg.epsilon, 0.0, cfg.tolerance).unwrap();
        let z = c(x, y * cfg.epsilon);
        let g = sm.eval(z).unwrap();
        let exact = sm.eval_closed_form(z).unwrap();
        prop_assert!((g.value - exact).norm() <= cfg.tolerance + 2.0 * sm.effective_tail_bound());
        prop_assert!(g.value.re >= -cfg.tolerance);
    }
}
