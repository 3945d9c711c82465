use domlab::classifier::{
    classify, classify_elliptic_fibration, classify_p2_complement, orbifold_euler_char, resolve_citation,
    BoundaryComponent, BoundaryDivisor, ClassTag, ClassifyError, CoverType, GenericFiber, KodairaDim, OrbifoldCurve,
    Outcome, SurfaceDescriptor,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fixture(name: &str) -> SurfaceDescriptor {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn euler_char_known_values() {
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(0, 0, &[])), rat(2, 1));
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(0, 0, &[2, 3, 6])), rat(0, 1));
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(0, 0, &[2, 3, 7])), rat(-1, 42));
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(1, 0, &[])), rat(0, 1));
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(0, 1, &[2, 2])), rat(0, 1));
    assert_eq!(orbifold_euler_char(&OrbifoldCurve::new(2, 1, &[5])), rat(-19, 5));
}

#[test]
fn triangle_groups_pick_the_cover() {
    let cover = |m: &[u32]| classify_elliptic_fibration(&OrbifoldCurve::new(0, 0, m)).unwrap().cover;
    assert_eq!(cover(&[2, 3, 5]), Some(CoverType::ProjectiveLine));
    assert_eq!(cover(&[3, 3, 3]), Some(CoverType::Plane));
    assert_eq!(cover(&[2, 3, 7]), Some(CoverType::Disk));
}

#[test]
fn fixtures_classify() {
    assert_eq!(classify(&fixture("smooth_cubic_complement.json")).unwrap().outcome, Outcome::Dominable);
    assert_eq!(classify(&fixture("genus2_ruled.json")).unwrap().outcome, Outcome::NotDominable);
    assert_eq!(classify(&fixture("generic_k3.json")).unwrap().outcome, Outcome::Unknown);
}

#[test]
fn bad_kodaira_is_rejected() {
    let path = format!("{}/tests/fixtures/bad_kodaira.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    assert!(serde_json::from_str::<SurfaceDescriptor>(&text).is_err());
}

#[test]
fn infinitely_many_multiple_fibers_use_the_disk() {
    let mut orb = OrbifoldCurve::new(0, 0, &[2, 3]);
    orb.finitely_many_multiple_fibers = false;
    let v = classify_elliptic_fibration(&orb).unwrap();
    assert_eq!(v.outcome, Outcome::NotDominable);
    assert_eq!(v.cover, Some(CoverType::Disk));
}

#[test]
fn missing_fibration_data() {
    let open = SurfaceDescriptor::quasi_projective(KodairaDim::Zero, 1, ClassTag::FiberedOpen);
    assert!(matches!(classify(&open), Err(ClassifyError::MissingField { .. })));
    let compact = SurfaceDescriptor::compact(KodairaDim::One, 0, 1, ClassTag::EllipticFibration);
    assert_eq!(classify(&compact).unwrap().outcome, Outcome::OutOfScope);
}

#[test]
fn p2_rule_needs_p2_ambient() {
    let mut b = BoundaryDivisor::p2(vec![BoundaryComponent::line()], true, true);
    b.ambient = domlab::classifier::Ambient::Other;
    assert!(classify_p2_complement(&b).is_err());
}

#[test]
fn punctured_fibers_use_the_base() {
    let d = SurfaceDescriptor::quasi_projective(KodairaDim::MinusInfinity, 1, ClassTag::FiberedOpen)
        .with_fibration(OrbifoldCurve::new(2, 0, &[]), GenericFiber::P1Punctured(2));
    assert_eq!(classify(&d).unwrap().outcome, Outcome::NotDominable);
}

#[test]
fn citations_resolve() {
    assert!(resolve_citation("Prop. cu").is_some());
    assert!(resolve_citation("no such anchor").is_none());
}

proptest! {
    #[test]
    fn chi_is_additive_in_marks(g in 0u32..6, p in 0u32..4, marks in prop::collection::vec(2u32..13, 0..8), n in 2u32..13) {
        let base = orbifold_euler_char(&OrbifoldCurve::new(g, p, &marks));
        let mut more = marks.clone();
        more.push(n);
        let with = orbifold_euler_char(&OrbifoldCurve::new(g, p, &more));
        prop_assert_eq!(base - with, rat(n as i64 - 1, n as i64));
    }

    #[test]
    fn chi_is_independent_of_mark_order(g in 0u32..6, p in 0u32..4, mut marks in prop::collection::vec(2u32..13, 0..8)) {
        let a = orbifold_euler_char(&OrbifoldCurve::new(g, p, &marks));
        marks.reverse();
        prop_assert_eq!(a, orbifold_euler_char(&OrbifoldCurve::new(g, p, &marks)));
    }

    #[test]
    fn fibration_verdict_tracks_chi_sign(g in 0u32..6, p in 0u32..4, marks in prop::collection::vec(2u32..13, 0..8)) {
        let orb = OrbifoldCurve::new(g, p, &marks);
        let v = classify_elliptic_fibration(&orb).unwrap();
        let nonneg = orbifold_euler_char(&orb) >= rat(0, 1);
        prop_assert_eq!(v.outcome == Outcome::Dominable, nonneg);
        prop_assert!(v.citations.iter().all(|c| resolve_citation(c).is_some()));
    }

    #[test]
    fn p2_normal_crossing_threshold(lines in 1u32..6) {
        let b = BoundaryDivisor::p2(vec![BoundaryComponent::line(); lines as usize], true, true);
        let v = classify_p2_complement(&b).unwrap();
        let want = if lines <= 3 { Outcome::Dominable } else { Outcome::NotDominable };
        prop_assert_eq!(v.outcome, want);
    }

    #[test]
    fn verdict_json_round_trips(g in 0u32..6, p in 0u32..4, marks in prop::collection::vec(2u32..13, 0..8)) {
        let v = classify_elliptic_fibration(&OrbifoldCurve::new(g, p, &marks)).unwrap();
        let back = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(v, back);
    }
}
