use domlab::lattice::{separating_transform, straighten_tame, window_points, LatticeError, LatticeSpec};
use domlab::C64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn square_lattice_is_separated() {
    let t = separating_transform(&LatticeSpec::square(), 4.0).unwrap();
    assert!(t.certified());
    assert!(t.min_point_gap >= 1.0 && t.min_level_gap >= 1.0);
    assert!(t.dilation >= 1.0);
    let pts = window_points(&LatticeSpec::square(), &t).unwrap();
    assert_eq!(pts.len(), t.window_points);
    for p in &pts {
        let back = t.apply_inverse(&p.image);
        assert!((back[0] - p.q[0]).norm() + (back[1] - p.q[1]).norm() < 1e-9);
    }
}

#[test]
fn transform_is_deterministic() {
    let a = separating_transform(&LatticeSpec::square(), 3.0).unwrap();
    let b = separating_transform(&LatticeSpec::square(), 3.0).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn degenerate_generators_are_rejected() {
    let mut lat = LatticeSpec::square();
    lat.generators[3] = lat.generators[2];
    assert!(matches!(lat.validate(), Err(LatticeError::Degenerate { .. })));
    assert!(separating_transform(&lat, 3.0).is_err());
}

#[test]
fn tiny_window_is_rejected() {
    assert!(matches!(separating_transform(&LatticeSpec::square(), 0.1), Err(LatticeError::WindowTooSmall { .. })));
}

#[test]
fn close_offsets_are_pulled_apart() {
    let mut lat = LatticeSpec::square();
    lat.offsets.push([c(0.3, 0.2), c(0.1, 0.25)]);
    let t = separating_transform(&lat, 3.0).unwrap();
    assert!(t.certified());
    let pts = window_points(&lat, &t).unwrap();
    assert!(pts.iter().any(|p| p.offset == 1));
}

#[test]
fn lattice_file_round_trip() {
    let lat = LatticeSpec::square();
    let text = serde_json::to_string(&lat.to_file()).unwrap();
    assert_eq!(LatticeSpec::from_json(&text).unwrap(), lat);
    assert!(LatticeSpec::from_json(r#"{"generators": [[[1,0],[0,0]]]}"#).is_err());
}

#[test]
fn tame_straightening_on_square_lattice() {
    let report = straighten_tame(&LatticeSpec::square(), 3.0).unwrap();
    assert!(report.certified);
    assert!(report.sup_error < 2f64.ln());
    assert!(report.gaps.first_coordinate_gap > 0.0);
    assert!(report.gaps.min_ratio > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_is_complex_linear(l in (-2.0..2.0, -2.0..2.0), p in prop::array::uniform4(-3.0..3.0f64), q in prop::array::uniform4(-3.0..3.0f64)) {
        let t = separating_transform(&LatticeSpec::square(), 3.0).unwrap();
        let l = c(l.0, l.1);
        let p = [c(p[0], p[1]), c(p[2], p[3])];
        let q = [c(q[0], q[1]), c(q[2], q[3])];
        let lhs = t.apply(&[l * p[0] + q[0], l * p[1] + q[1]]);
        let (ap, aq) = (t.apply(&p), t.apply(&q));
        let scale = 1.0 + lhs[0].norm() + lhs[1].norm();
        prop_assert!((lhs[0] - l * ap[0] - aq[0]).norm() + (lhs[1] - l * ap[1] - aq[1]).norm() <= 1e-13 * scale);
    }

    #[test]
    fn sheared_lattices_separate(a in -0.5..0.5f64, b in -0.5..0.5f64) {
        let mut lat = LatticeSpec::square();
        lat.generators[2] = [c(a, b), c(1.0, 0.0)];
        let t = separating_transform(&lat, 3.0).unwrap();
        let pts = window_points(&lat, &t).unwrap();
        for (i, x) in pts.iter().enumerate() {
            for y in &pts[i + 1..] {
                let d = ((x.image[0] - y.image[0]).norm_sqr() + (x.image[1] - y.image[1]).norm_sqr()).sqrt();
                prop_assert!(d >= 1.0);
            }
        }
    }
}
