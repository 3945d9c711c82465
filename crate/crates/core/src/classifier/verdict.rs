use serde::{Deserialize, Serialize};

use super::CoverType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Dominable,
    NotDominable,
    Unknown,
    OutOfScope,
}

impl Outcome {
    /// Process exit code used by `domlab classify`.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Dominable => 0,
            Outcome::NotDominable => 1,
            Outcome::Unknown => 2,
            Outcome::OutOfScope => 3,
        }
    }
}

/// Why a verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    ChiNonnegative,
    ChiNegativePropertyC,
    InfinitelyManyMultipleFibers,
    GeneralType,
    QLessThan2,
    QAtLeast2,
    TorusTame,
    KummerK3,
    EllipticK3,
    EllipticKodairaZero,
    KodairaSurfaceException,
    HopfConstruction,
    InoueException,
    Vii0Gap,
    K3Gap,
    P2DegreeAtMost3,
    P2DegreeAbove3,
    ThreeConcurrentLines,
    ConicTwoLinesOnConic,
    NonNormalCrossingUnresolved,
    HighDegreeRationalDeferred,
    SemiAbelianMorphism,
    FiberHyperbolic,
    OpenQuestionKbarMinusInftyQbarZero,
    LogK3Gap,
    MissingData,
}

impl Reason {
    /// Reasons that record a gap in the available theory rather than a
    /// theorem. `unknown` verdicts always carry one of these.
    pub fn is_gap(self) -> bool {
        matches!(
            self,
            Reason::K3Gap
                | Reason::Vii0Gap
                | Reason::NonNormalCrossingUnresolved
                | Reason::OpenQuestionKbarMinusInftyQbarZero
                | Reason::LogK3Gap
                | Reason::HighDegreeRationalDeferred
                | Reason::FiberHyperbolic
                | Reason::MissingData
        )
    }
}

/// Known citation anchors with a one-line description of what each states.
pub const CITATIONS: &[(&str, &str)] = &[
    ("Theorem elliptic-fibration", "relatively minimal elliptic fibration with finitely many multiple fibers is dominable iff chi >= 0"),
    ("Theorem elliptic", "for any elliptic fibration, dominability is equivalent to a Zariski dense entire curve"),
    ("Theorem E2", "infinitely many multiple fibers: the base orbifold is uniformized by the disk"),
    ("Theorem kappa-minus-infinity", "projective surface with kappa = -inf is dominable iff q < 2"),
    ("Theorem 1'", "compact surfaces with kappa < 2: dominable iff property C fails"),
    ("Theorem 2'", "compact surfaces: dominable iff kappa < 2 and pi_1 is a finite extension of an abelian group of rank <= 4"),
    ("Cor. tori", "complex 2-tori and surfaces bimeromorphic to them are dominable"),
    ("Prop. tame", "finite unions of lattice translates are tame"),
    ("Prop. elliptic-K3", "surfaces bimeromorphic to elliptic K3 are dominable"),
    ("Prop. Kummer-K3", "surfaces bimeromorphic to Kummer surfaces are dominable"),
    ("Other compact surfaces", "Kodaira, hyperelliptic and Enriques surfaces are elliptic and dominable; Hopf surfaces are dominable; Inoue surfaces are covered by D x C"),
    ("Kodaira dimension two", "surfaces of general type cannot be dominated, even meromorphically"),
    ("Prop. cu", "the complement of a smooth cubic in P^2 is dominable"),
    ("Theorem normal-crossing", "P^2 minus a normal crossing divisor D is dominable iff deg D <= 3"),
    ("Remark non-normal-crossing", "three concurrent lines are not dominable; a conic plus two lines through a point of the conic is dominable"),
    ("Theorem cubic", "the complement of the graph of a meromorphic function is dominable fiberwise"),
    ("Theorem punc", "fibrations with generic fiber P^1 with at most two punctures: dominable iff Zariski dense entire curve"),
    ("Theorem infty", "kbar = -inf: qbar >= 2 gives property C; qbar = 1 or connected boundary reduces to the fibered criterion"),
    ("Theorem one", "fibrations with elliptic or twice punctured P^1 fibers: dominable iff Zariski dense entire curve"),
    ("Theorem zero", "kbar = 0 with qbar > 0 or affine with a non-rational boundary component: fibered criterion"),
    ("Kawamata semi-abelian", "kbar = 0 and qbar >= 2: birational morphism to a semi-abelian surface"),
    ("Prop. sub", "subadditivity of logarithmic Kodaira dimension for fibrations"),
    ("Open question kbar=-inf qbar=0", "generic fiber form unresolved for kbar = -inf, qbar = 0"),
    ("K3 gap", "K3 surfaces neither elliptic nor Kummer are unresolved"),
    ("Class VII0 gap", "non-elliptic non-Hopf class VII0 surfaces outside the Inoue-Hirzebruch construction are unresolved"),
    ("Rational high degree", "complements of rational curves of high degree are not treated"),
];

/// Returns the description of a citation anchor, if known.
pub fn resolve_citation(anchor: &str) -> Option<&'static str> {
    CITATIONS.iter().find(|(a, _)| *a == anchor).map(|(_, d)| *d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub reason: Reason,
    pub citations: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverType>,
    /// Orbifold Euler characteristic as `p/q`, when one was computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional_path: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(outcome: Outcome, reason: Reason, citations: &[&str]) -> Self {
        Self {
            outcome,
            reason,
            citations: citations.iter().map(|c| c.to_string()).collect(),
            cover: None,
            chi: None,
            exceptional_path: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub(crate) fn cite(mut self, anchor: &str) -> Self {
        if !self.citations.iter().any(|c| c == anchor) {
            self.citations.insert(0, anchor.to_string());
        }
        self
    }

    /// Plain-text rendering for terminals.
    pub fn render_text(&self) -> String {
        let outcome = match self.outcome {
            Outcome::Dominable => "DOMINABLE",
            Outcome::NotDominable => "NOT DOMINABLE",
            Outcome::Unknown => "UNKNOWN",
            Outcome::OutOfScope => "OUT OF SCOPE",
        };
        let reason = serde_json::to_value(self.reason)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let mut out = format!("verdict: {outcome}\nreason:  {reason}\n");
        if let Some(chi) = &self.chi {
            out.push_str(&format!("chi:     {chi}\n"));
        }
        if let Some(cover) = self.cover {
            out.push_str(&format!("cover:   {cover:?}\n"));
        }
        for c in &self.citations {
            let desc = resolve_citation(c).unwrap_or("?");
            out.push_str(&format!("  - {c}: {desc}\n"));
        }
        if let Some(n) = &self.note {
            out.push_str(&format!("note:    {n}\n"));
        }
        out
    }
}
