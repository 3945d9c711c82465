use domlab::fiberwise::{
    eval_psi, expm1, h0, psi_graph_gap, psi_series, twist_map, DoubleSectionData, FiberError, GraphComplementMap, Proj,
    PSI_SWITCHOVER,
};
use domlab::{Poly64, RatFn64, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn complex(r: f64) -> impl Strategy<Value = C64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

/// `(u e^{w(u-v)} - v) / (e^{w(u-v)} - 1)` evaluated literally.
fn h0_direct(u: C64, v: C64, w: C64) -> C64 {
    let g = (w * (u - v)).exp();
    (u * g - v) / (g - 1.0)
}

#[test]
fn psi_limits() {
    assert_eq!(eval_psi(c(0.0, 0.0), c(2.0, -1.0)), c(2.0, -1.0));
    assert_eq!(eval_psi(c(3.0, 1.0), c(0.0, 0.0)), c(0.0, 0.0));
    let t = c(0.3, -0.2);
    let h = 1e-6;
    let slope = (eval_psi(t, c(h, 0.0)) - eval_psi(t, c(-h, 0.0))) / (2.0 * h);
    assert!((slope - 1.0).norm() < 1e-9);
}

#[test]
fn expm1_small_arguments() {
    let z = c(1e-12, -2e-12);
    assert!((expm1(z) - z - z * z / 2.0).norm() <= 1e-15 * z.norm());
}

#[test]
fn graph_complement_omits_the_section() {
    let map = GraphComplementMap::principal_part_inverse(RatFn64::parse("1/z").unwrap()).unwrap();
    let z = c(0.5, 0.25);
    let s = map.section().eval_finite(z).unwrap();
    assert!(matches!(map.solve_fiber(z, s), Err(FiberError::OmittedValue { .. })));
    assert!(map.avoidance_gap(c(0.0, 0.0), c(1.0, 0.0)).is_none());
}

#[test]
fn graph_complement_two_poles() {
    let map = GraphComplementMap::principal_part_inverse(RatFn64::parse("1/(z-1) + 1/(z+1)").unwrap()).unwrap();
    assert_eq!(map.section().poles().len(), 2);
    assert!(map.max_h_near_poles(1e-2, 128) <= 1e3);
}

#[test]
fn parse_errors_carry_position() {
    match RatFn64::parse("1/(z-") {
        Err(FiberError::Parse { pos, .. }) => assert!(pos <= 5),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(RatFn64::parse("1/0"), Err(FiberError::Parse { .. })));
}

#[test]
fn double_section_branch_points() {
    let d = DoubleSectionData::from_h_g(RatFn64::parse("z/2").unwrap(), RatFn64::parse("z^2 - 1").unwrap()).unwrap();
    let mut b: Vec<f64> = d.branch_points().iter().map(|z| z.re).collect();
    b.sort_by(f64::total_cmp);
    assert!((b[0] + 1.0).abs() < 1e-9 && (b[1] - 1.0).abs() < 1e-9);
    let gap = d.avoidance_gap(c(1.0, 0.0), c(0.3, 0.1)).unwrap();
    assert!(gap > 0.0);
}

#[test]
fn twist_collapses_over_zeros() {
    let p = Poly64::from_roots(&[c(2.0, 0.0)]);
    let q = RatFn64::parse("1/(z-1)").unwrap();
    let a = twist_map(&p, &q, c(2.0, 0.0), c(7.0, 3.0)).unwrap();
    let b = twist_map(&p, &q, c(2.0, 0.0), c(-4.0, 0.5)).unwrap();
    assert_eq!(a, b);
    assert!((a - 1.0).norm() < 1e-15);
}

proptest! {
    #[test]
    fn psi_gap_never_vanishes(t in complex(50.0), w in complex(0.5)) {
        prop_assume!(t.norm() > 1e-6);
        prop_assert!(psi_graph_gap(t, w).norm() > 0.0);
    }

    #[test]
    fn psi_branches_agree_near_switchover(t in complex(10.0), theta in 0.0..std::f64::consts::TAU, k in 0.5f64..1.0) {
        prop_assume!(t.norm() > 1e-3);
        let w = C64::from_polar(k * PSI_SWITCHOVER, theta) / t;
        let closed = expm1(t * w) / t;
        prop_assert!((psi_series(t, w) - closed).norm() <= 1e-12 * closed.norm());
    }

    #[test]
    fn graph_inversion(z in complex(2.0), v in complex(3.0)) {
        let map = GraphComplementMap::principal_part_inverse(RatFn64::parse("1/(z-1) + 1/(z+1)").unwrap()).unwrap();
        prop_assume!(!map.section().is_pole(z));
        let s = map.section().eval_finite(z).unwrap();
        prop_assume!((v - s).norm() > 1e-6);
        let w = map.solve_fiber(z, v).unwrap();
        prop_assert!((map.eval(z, w) - v).norm() <= 1e-8 * (1.0 + v.norm()));
    }

    #[test]
    fn h0_matches_direct_formula(u in complex(1.0), v in complex(1.0), w in complex(2.0)) {
        let x = w * (u - v);
        prop_assume!(x.norm() > 0.1 && (x.exp() - 1.0).norm() > 1e-3);
        let got = h0(u, v, w).finite().unwrap();
        let want = h0_direct(u, v, w);
        prop_assert!((got - want).norm() <= 1e-9 * (1.0 + want.norm()));
    }

    #[test]
    fn h0_is_equivariant_under_affine_maps(u in complex(1.0), v in complex(1.0), w in complex(2.0), a in complex(1.0), l in complex(2.0)) {
        prop_assume!(l.norm() > 0.1 && w.norm() > 1e-3 && (w * (u - v)).norm() > 1e-3);
        let base = h0(u, v, w).finite().unwrap();
        prop_assume!(base.norm() < 1e6);
        let shifted = h0(l * u + a, l * v + a, w / l).finite().unwrap();
        let want = l * base + a;
        prop_assert!((shifted - want).norm() <= 1e-8 * (1.0 + want.norm()));
    }

    #[test]
    fn h0_is_symmetric(u in complex(1.0), v in complex(1.0), w in complex(2.0)) {
        let (a, b) = (h0(u, v, w), h0(v, u, w));
        match (a, b) {
            (Proj::Finite(a), Proj::Finite(b)) => prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm())),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn double_section_avoids_both_sheets(z in complex(2.0), w in complex(1.0)) {
        let d = DoubleSectionData::from_h_g(RatFn64::parse("z/2").unwrap(), RatFn64::parse("z^2 - 1").unwrap()).unwrap();
        prop_assert!(d.avoidance_gap(z, w).unwrap() > 0.0);
    }
}
