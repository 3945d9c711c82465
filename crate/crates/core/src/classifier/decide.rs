use num_traits::Signed;

use super::*;

/// Dispatches on `compactness`.
pub fn classify(d: &SurfaceDescriptor) -> Result<Verdict, ClassifyError> {
    match d.compactness {
        Compactness::Compact => classify_compact(d),
        Compactness::QuasiProjective => classify_quasiprojective(d),
    }
}

/// Elliptic fibration over a quasi-projective base: dominable iff the
/// orbifold Euler characteristic of the base is non-negative.
pub fn classify_elliptic_fibration(orb: &OrbifoldCurve) -> Result<Verdict, ClassifyError> {
    orb.validate()?;
    if !orb.finitely_many_multiple_fibers {
        let mut v = Verdict::new(
            Outcome::NotDominable,
            Reason::InfinitelyManyMultipleFibers,
            &["Theorem E2", "Theorem elliptic"],
        );
        v.cover = Some(CoverType::Disk);
        return Ok(v);
    }
    let chi = orb.euler_char();
    let exceptional = orb.is_exceptional_sphere();
    let mut v = if chi.is_negative() {
        Verdict::new(Outcome::NotDominable, Reason::ChiNegativePropertyC, &["Theorem elliptic-fibration"])
    } else {
        Verdict::new(Outcome::Dominable, Reason::ChiNonnegative, &["Theorem elliptic-fibration"])
    };
    v.cover = Some(orb.cover());
    v.chi = Some(chi.to_string());
    v.exceptional_path = Some(exceptional);
    if exceptional {
        v = v.with_note("P^1 with one or two boundary components: marked points removed and D reset to 0");
    }
    Ok(v)
}

fn out_of_scope(note: &str) -> Verdict {
    Verdict::new(Outcome::OutOfScope, Reason::MissingData, &[]).with_note(note)
}

/// Decision tree for compact complex surfaces.
pub fn classify_compact(d: &SurfaceDescriptor) -> Result<Verdict, ClassifyError> {
    d.validate()?;
    if d.compactness != Compactness::Compact {
        return Err(ClassifyError::invalid("compactness", "classify_compact needs a compact surface"));
    }
    let a = d.algebraic_dim.unwrap_or(0);
    let v = match d.kodaira_dim {
        KodairaDim::Two => Verdict::new(Outcome::NotDominable, Reason::GeneralType, &["Kodaira dimension two"]),
        KodairaDim::MinusInfinity => compact_kappa_minus_infinity(d, a)?,
        KodairaDim::Zero => compact_kappa_zero(d)?,
        KodairaDim::One => match (&d.fibration, d.generic_fiber) {
            (Some(orb), None | Some(GenericFiber::Elliptic)) => {
                classify_elliptic_fibration(orb)?.cite("Theorem elliptic").cite("Theorem 1'")
            }
            _ => out_of_scope("kappa = 1 surfaces are elliptic; supply the fibration orbifold to decide"),
        },
    };
    cross_check_pi1(d, a, v)
}

fn compact_kappa_minus_infinity(d: &SurfaceDescriptor, a: u8) -> Result<Verdict, ClassifyError> {
    use ClassTag::*;
    Ok(match (a, d.class_tag) {
        (_, Hopf) => Verdict::new(Outcome::Dominable, Reason::HopfConstruction, &["Other compact surfaces"]),
        (_, Inoue) => Verdict::new(Outcome::NotDominable, Reason::InoueException, &["Other compact surfaces"])
            .with_note("universal cover is D x C although entire curves are Zariski dense"),
        (_, Vii0Other) => Verdict::new(Outcome::Unknown, Reason::Vii0Gap, &["Class VII0 gap"]),
        (2, _) => {
            if d.irregularity < 2 {
                Verdict::new(Outcome::Dominable, Reason::QLessThan2, &["Theorem kappa-minus-infinity", "Theorem 1'"])
            } else {
                Verdict::new(Outcome::NotDominable, Reason::QAtLeast2, &["Theorem kappa-minus-infinity", "Theorem 1'"])
                    .with_note("ruled over a curve of genus >= 2: property C")
            }
        }
        (1, _) => match &d.fibration {
            Some(orb) => classify_elliptic_fibration(orb)?.cite("Theorem elliptic").cite("Theorem 1'"),
            None => out_of_scope("non-projective surface with a = 1 is elliptic; supply the fibration orbifold"),
        },
        _ => out_of_scope("kappa = -inf, a = 0 requires a hopf, inoue or vii0_other class tag"),
    })
}

fn compact_kappa_zero(d: &SurfaceDescriptor) -> Result<Verdict, ClassifyError> {
    use ClassTag::*;
    Ok(match d.class_tag {
        AbelianOrTorus => {
            Verdict::new(Outcome::Dominable, Reason::TorusTame, &["Cor. tori", "Prop. tame", "Theorem 1'"])
        }
        K3 => {
            let flags = d.k3_flags.unwrap_or_default();
            match (flags.is_kummer, flags.is_elliptic) {
                (Some(true), _) => Verdict::new(Outcome::Dominable, Reason::KummerK3, &["Prop. Kummer-K3", "Cor. tori"]),
                (_, Some(true)) => {
                    Verdict::new(Outcome::Dominable, Reason::EllipticK3, &["Prop. elliptic-K3", "Theorem elliptic-fibration"])
                }
                (Some(false), Some(false)) => Verdict::new(Outcome::Unknown, Reason::K3Gap, &["K3 gap"]),
                _ => out_of_scope("K3 surface: set k3_flags.is_elliptic and k3_flags.is_kummer"),
            }
        }
        Enriques | Hyperelliptic => {
            Verdict::new(Outcome::Dominable, Reason::EllipticKodairaZero, &["Other compact surfaces", "Theorem 1'"])
        }
        KodairaPrimary | KodairaSecondary => {
            Verdict::new(Outcome::Dominable, Reason::KodairaSurfaceException, &["Other compact surfaces"])
                .with_note("pi_1 is not a finite extension of an abelian group")
        }
        EllipticFibration => match &d.fibration {
            Some(orb) => classify_elliptic_fibration(orb)?.cite("Theorem elliptic").cite("Theorem 1'"),
            None => Verdict::new(Outcome::Dominable, Reason::EllipticKodairaZero, &["Other compact surfaces", "Theorem 1'"]),
        },
        _ => out_of_scope("kappa = 0 compact surface without a recognised class tag"),
    })
}

/// Cross-checks the verdict against `pi1_class` where the fundamental group
/// criterion applies (not a Kodaira surface, `kappa != -inf` or `a != 0`,
/// and not an unresolved K3).
fn cross_check_pi1(d: &SurfaceDescriptor, a: u8, v: Verdict) -> Result<Verdict, ClassifyError> {
    use ClassTag::*;
    let applies = !matches!(d.class_tag, KodairaPrimary | KodairaSecondary)
        && (d.kodaira_dim != KodairaDim::MinusInfinity || a != 0)
        && matches!(v.outcome, Outcome::Dominable | Outcome::NotDominable);
    if !applies || d.pi1_class == Pi1Class::Unknown {
        return Ok(v);
    }
    let finite_abelian = matches!(d.pi1_class, Pi1Class::FiniteExtAbelian(_));
    let contradiction = match v.outcome {
        Outcome::Dominable => !finite_abelian,
        Outcome::NotDominable => finite_abelian && d.kodaira_dim != KodairaDim::Two,
        _ => false,
    };
    if contradiction {
        return Err(ClassifyError::Pi1Contradiction {
            pi1: format!("{:?}", d.pi1_class),
            outcome: format!("{:?}", v.outcome),
        });
    }
    let mut v = v;
    if !v.citations.iter().any(|c| c == "Theorem 2'") {
        v.citations.push("Theorem 2'".to_string());
    }
    Ok(v)
}

/// Complements of curves in `P^2`.
pub fn classify_p2_complement(b: &BoundaryDivisor) -> Result<Verdict, ClassifyError> {
    b.validate()?;
    if b.ambient != Ambient::P2 {
        return Err(ClassifyError::invalid("boundary.ambient", "classify_p2_complement needs ambient p2"));
    }
    let deg = b.total_degree();
    let mut degrees: Vec<u32> = b.components.iter().map(|c| c.degree).collect();
    degrees.sort_unstable();
    if b.normal_crossing {
        if let Some(cfg) = b.special_configuration {
            return Err(ClassifyError::invalid(
                "boundary.special_configuration",
                format!("{cfg:?} is not normal crossing"),
            ));
        }
        let v = if deg <= 3 {
            let mut v = Verdict::new(Outcome::Dominable, Reason::P2DegreeAtMost3, &["Theorem normal-crossing"]);
            if b.components.len() == 1 && deg == 3 && b.components[0].smooth {
                v = v.cite("Prop. cu");
            }
            v
        } else {
            Verdict::new(Outcome::NotDominable, Reason::P2DegreeAbove3, &["Theorem normal-crossing", "Kodaira dimension two"])
        };
        return Ok(v);
    }
    let inferred = match (b.special_configuration, degrees.as_slice()) {
        (Some(SpecialConfiguration::ThreeConcurrentLines), [1, 1, 1]) | (None, [1, 1, 1]) => {
            Some(SpecialConfiguration::ThreeConcurrentLines)
        }
        (Some(SpecialConfiguration::ConicTwoLinesThroughConicPoint), [1, 1, 2]) => {
            Some(SpecialConfiguration::ConicTwoLinesThroughConicPoint)
        }
        (Some(cfg), _) => {
            return Err(ClassifyError::invalid(
                "boundary.special_configuration",
                format!("{cfg:?} does not match component degrees {degrees:?}"),
            ))
        }
        (None, _) => None,
    };
    Ok(match inferred {
        Some(SpecialConfiguration::ThreeConcurrentLines) => {
            Verdict::new(Outcome::NotDominable, Reason::ThreeConcurrentLines, &["Remark non-normal-crossing"])
        }
        Some(SpecialConfiguration::ConicTwoLinesThroughConicPoint) => {
            Verdict::new(Outcome::Dominable, Reason::ConicTwoLinesOnConic, &["Remark non-normal-crossing"])
        }
        None if b.components.len() == 1 && b.components[0].is_rational && deg >= 4 => Verdict::new(
            Outcome::OutOfScope,
            Reason::HighDegreeRationalDeferred,
            &["Rational high degree"],
        ),
        None => Verdict::new(Outcome::Unknown, Reason::NonNormalCrossingUnresolved, &["Theorem normal-crossing"])
            .with_note("non-normal-crossing configuration without a documented answer"),
    })
}

/// Applies the orbifold criterion of the fibration carried by `d`. Elliptic
/// fibers use the elliptic fibration theorem directly; fibers that are
/// `P^1` with at most two punctures use the same sign test on the base.
fn fibered_rule(d: &SurfaceDescriptor, branch: &str, anchor: &str) -> Result<Verdict, ClassifyError> {
    let orb = d.fibration.as_ref().ok_or_else(|| ClassifyError::MissingField {
        branch: branch.to_string(),
        field: "fibration".to_string(),
    })?;
    let fiber = d.generic_fiber.ok_or_else(|| ClassifyError::MissingField {
        branch: branch.to_string(),
        field: "generic_fiber".to_string(),
    })?;
    Ok(match fiber {
        GenericFiber::Elliptic => classify_elliptic_fibration(orb)
            .map_err(|e| e.prefixed("fibration"))?
            .cite("Theorem one")
            .cite(anchor),
        GenericFiber::P1Punctured(k) if k <= 2 => classify_elliptic_fibration(orb)
            .map_err(|e| e.prefixed("fibration"))?
            .cite("Theorem punc")
            .cite(anchor)
            .with_note("orbifold sign test applied to the base of a punctured P^1 fibration"),
        GenericFiber::P1Punctured(_) => Verdict::new(Outcome::OutOfScope, Reason::FiberHyperbolic, &[])
            .with_note("generic fiber P^1 with three or more punctures is not covered"),
    })
}

/// Decision tree for quasi-projective surfaces `X = Xbar \ D`.
pub fn classify_quasiprojective(d: &SurfaceDescriptor) -> Result<Verdict, ClassifyError> {
    d.validate()?;
    if d.compactness != Compactness::QuasiProjective {
        return Err(ClassifyError::invalid("compactness", "classify_quasiprojective needs a quasi-projective surface"));
    }
    if let Some(b) = d.boundary.as_ref().filter(|b| b.ambient == Ambient::P2) {
        return classify_p2_complement(b);
    }
    if d.class_tag == ClassTag::P2Complement {
        return Err(ClassifyError::MissingField { branch: "p2_complement".into(), field: "boundary".into() });
    }
    let q = d.irregularity;
    Ok(match d.kodaira_dim {
        KodairaDim::Two => Verdict::new(Outcome::NotDominable, Reason::GeneralType, &["Kodaira dimension two"]),
        KodairaDim::MinusInfinity => {
            if q >= 2 {
                Verdict::new(Outcome::NotDominable, Reason::QAtLeast2, &["Theorem infty", "Prop. sub"])
            } else if q == 1 {
                fibered_rule(d, "kbar=-inf,qbar=1", "Theorem infty")?
            } else {
                let connected = d.boundary.as_ref().map(|b| b.connected).unwrap_or(false);
                let punc_form = matches!(d.generic_fiber, Some(GenericFiber::P1Punctured(k)) if k <= 2);
                if connected && punc_form && d.fibration.is_some() {
                    fibered_rule(d, "kbar=-inf,qbar=0", "Theorem infty")?
                } else {
                    Verdict::new(
                        Outcome::Unknown,
                        Reason::OpenQuestionKbarMinusInftyQbarZero,
                        &["Open question kbar=-inf qbar=0"],
                    )
                }
            }
        }
        KodairaDim::One => fibered_rule(d, "kbar=1", "Theorem one")?,
        KodairaDim::Zero => {
            if q >= 2 {
                Verdict::new(Outcome::Dominable, Reason::SemiAbelianMorphism, &["Kawamata semi-abelian", "Theorem zero"])
            } else if q == 1 {
                fibered_rule(d, "kbar=0,qbar=1", "Theorem zero")?
            } else if d.fibration.is_some() {
                fibered_rule(d, "kbar=0,qbar=0", "Theorem zero")?
            } else {
                Verdict::new(Outcome::Unknown, Reason::LogK3Gap, &["K3 gap"])
                    .with_note("kbar = 0, qbar = 0 without fibration or P^2 boundary data")
            }
        }
    })
}
