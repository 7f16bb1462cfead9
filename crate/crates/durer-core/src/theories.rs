//! Published face-shape theories and how far each sits from a measurement.
//!
//! A theory fixes λ directly or through a construction (truncation ratio,
//! circle through the vertices, grid cross ratio, golden frame) and may also
//! fix the rhombus angle α. Angles are the acute apex angle of the rhombus.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use thiserror::Error;

use crate::analysis::Summary;
use crate::math::{acos, to_degrees};
use crate::projective::{cross_ratio, CrossRatio, HPoint2};
use crate::solid::{
    cross_ratio_of_truncation, golden_pentagon, inscribed_truncation_ratio, shape_proximity, truncation_ratio,
    FaceShape,
};
use crate::PHI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TheoryError {
    #[error("theory {0} specifies neither lambda nor a derivation")]
    MissingLambda(String),
    #[error("theory {name}: {reason}")]
    Invalid { name: String, reason: String },
    #[error("measured {what} out of range: {value}")]
    BadMeasurement { what: &'static str, value: f64 },
}

/// How a theory arrives at λ.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Derivation {
    ExplicitLambda { lambda: f64 },
    /// r = BC/AC.
    FromTruncationRatio { r: f64 },
    /// Truncate so the five vertices lie on a circle; needs α.
    FromInscribedCircle,
    /// Cross ratio of four collinear grid positions A, B, C, D.
    FromGrid { positions: [f64; 4] },
    /// λ = φ.
    GoldenConstruction,
}

/// Rhombus angle as reported, plus the single value used for scoring.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlphaSpec {
    pub value: f64,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub uncertainty: Option<f64>,
    /// Raw reported angles when they differ from `value`.
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Vec::is_empty"))]
    pub reported: Vec<f64>,
}

impl AlphaSpec {
    pub fn exact(value: f64) -> Self {
        Self { value, uncertainty: None, reported: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Theory {
    pub name: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub alpha: Option<AlphaSpec>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub derivation: Option<Derivation>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub note: String,
}

impl Theory {
    pub fn alpha_deg(&self) -> Option<f64> {
        self.alpha.as_ref().map(|a| a.value)
    }

    fn invalid(&self, reason: impl ToString) -> TheoryError {
        TheoryError::Invalid { name: self.name.clone(), reason: reason.to_string() }
    }

    /// λ implied by the derivation.
    pub fn lambda(&self) -> Result<f64, TheoryError> {
        let derivation = self.derivation.as_ref().ok_or_else(|| TheoryError::MissingLambda(self.name.clone()))?;
        let lambda = match derivation {
            Derivation::ExplicitLambda { lambda } => *lambda,
            Derivation::FromTruncationRatio { r } => cross_ratio_of_truncation(*r).map_err(|e| self.invalid(e))?,
            Derivation::FromInscribedCircle => {
                let alpha = self.alpha_deg().ok_or_else(|| self.invalid("inscribed circle needs alpha"))?;
                let r = inscribed_truncation_ratio(alpha).map_err(|e| self.invalid(e))?;
                cross_ratio_of_truncation(r).map_err(|e| self.invalid(e))?
            }
            Derivation::FromGrid { positions } => {
                let p = positions.map(|x| HPoint2::finite(x, 0.0));
                match cross_ratio(&p[0], &p[1], &p[2], &p[3]).map_err(|e| self.invalid(e))? {
                    CrossRatio::Finite(v) => v,
                    CrossRatio::Infinite => return Err(self.invalid("grid cross ratio is infinite")),
                }
            }
            Derivation::GoldenConstruction => PHI,
        };
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(self.invalid(format!("lambda {lambda} below 1")));
        }
        Ok(lambda)
    }

    /// Check the catalog invariants: λ ≥ 1 when derivable and α, if given,
    /// a valid rhombus angle.
    pub fn validate(&self) -> Result<(), TheoryError> {
        let lambda = match self.lambda() {
            Ok(l) => Some(l),
            Err(TheoryError::MissingLambda(_)) => None,
            Err(e) => return Err(e),
        };
        if let Some(alpha) = self.alpha_deg() {
            FaceShape::new(alpha, lambda.unwrap_or(1.0)).map_err(|e| self.invalid(e))?;
        }
        Ok(())
    }
}

/// MacGillavry's working angle and truncation ratio.
pub const MACGILLAVRY_WORKING: (f64, f64) = (78.0, 0.45);

/// α = 2·arccos(φ/2) = 72°.
pub fn golden_angle_72() -> f64 {
    to_degrees(2.0 * acos(PHI / 2.0))
}

pub fn builtin_theories() -> Vec<Theory> {
    let golden = golden_pentagon();
    vec![
        Theory {
            name: "Lynch".into(),
            alpha: None,
            derivation: Some(Derivation::FromGrid { positions: [0.0, 1.0, 2.0, 4.0] }),
            note: "orthogonal projection onto grid lattice points at 0, 1, 2, 4".into(),
        },
        Theory {
            name: "Schreiber".into(),
            alpha: Some(AlphaSpec::exact(72.0)),
            derivation: Some(Derivation::FromInscribedCircle),
            note: "acute angle 72 degrees, face inscribed in a circle".into(),
        },
        Theory {
            name: "Weitzel".into(),
            alpha: Some(AlphaSpec { value: (79.5 + 75.8) / 2.0, uncertainty: Some(0.5), reported: vec![79.5, 75.8] }),
            derivation: Some(Derivation::FromTruncationRatio { r: 0.57 }),
            note: "asymmetric sketch; scored at the mean of both angles".into(),
        },
        Theory {
            name: "MacGillavry".into(),
            alpha: Some(AlphaSpec { value: MACGILLAVRY_WORKING.0, uncertainty: Some(1.0), reported: vec![79.0] }),
            derivation: Some(Derivation::FromTruncationRatio { r: MACGILLAVRY_WORKING.1 }),
            note: "perspective analysis estimate 79 +/- 1 degrees; working value 78".into(),
        },
        Theory {
            name: "Golden".into(),
            alpha: Some(AlphaSpec::exact(golden.alpha())),
            derivation: Some(Derivation::GoldenConstruction),
            note: "rhombus in two golden rectangles, 45 degree truncation ray".into(),
        },
        Theory {
            name: "Golden-angle-72".into(),
            alpha: Some(AlphaSpec::exact(golden_angle_72())),
            derivation: None,
            note: "alpha = 2 arccos(phi/2); the 72 degree cluster".into(),
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub theory: String,
    pub lambda: f64,
    /// |λ_theory − λ_measured| / λ_measured, percent.
    pub lambda_deviation_pct: f64,
    pub alpha: Option<f64>,
    pub alpha_deviation_pct: Option<f64>,
    pub assessment: String,
}

fn deviation_pct(theory: f64, measured: f64) -> f64 {
    (theory - measured).abs() / measured * 100.0
}

fn direction(theory: f64, measured: f64) -> &'static str {
    match theory.partial_cmp(&measured) {
        Some(Ordering::Less) => "below",
        Some(Ordering::Greater) => "above",
        _ => "equal to",
    }
}

pub fn score_theory(theory: &Theory, measured_lambda: f64, measured_alpha: Option<f64>) -> Result<Verdict, TheoryError> {
    if !(measured_lambda >= 1.0) || !measured_lambda.is_finite() {
        return Err(TheoryError::BadMeasurement { what: "lambda", value: measured_lambda });
    }
    if let Some(a) = measured_alpha {
        if !(a > 0.0 && a <= 90.0) {
            return Err(TheoryError::BadMeasurement { what: "alpha", value: a });
        }
    }
    let lambda = theory.lambda()?;
    let lambda_dev = deviation_pct(lambda, measured_lambda);
    let mut assessment = format!(
        "lambda {lambda:.4} is {lambda_dev:.2}% {} measured {measured_lambda:.4}",
        direction(lambda, measured_lambda)
    );
    let alpha = theory.alpha_deg();
    let alpha_dev = match (alpha, measured_alpha) {
        (Some(t), Some(m)) => {
            let d = deviation_pct(t, m);
            assessment.push_str(&format!("; alpha {t:.2} is {d:.2}% {} {m:.2}", direction(t, m)));
            Some(d)
        }
        _ => None,
    };
    if let Some(spec) = &theory.alpha {
        if spec.reported.len() > 1 {
            let raw: Vec<String> = spec.reported.iter().map(|a| format!("{a}")).collect();
            assessment.push_str(&format!(" (alpha reported as {}; mean used)", raw.join(" and ")));
        }
    }
    Ok(Verdict {
        theory: theory.name.clone(),
        lambda,
        lambda_deviation_pct: lambda_dev,
        alpha,
        alpha_deviation_pct: alpha_dev,
        assessment,
    })
}

/// How close MacGillavry's working shape is to the golden pentagon.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Proximity {
    /// tan(α/2) ratio: rhombus half-width at unit half-height.
    pub half_width_ratio: f64,
    /// Truncation-height ratio r / r_φ.
    pub truncation_height_ratio: f64,
}

pub fn macgillavry_golden_proximity() -> Proximity {
    let golden = golden_pentagon();
    let (half_width_ratio, truncation_height_ratio) =
        shape_proximity(MACGILLAVRY_WORKING, (golden.alpha(), golden.truncation_ratio()));
    Proximity { half_width_ratio, truncation_height_ratio }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparison {
    pub measured_lambda: f64,
    pub measured_alpha: Option<f64>,
    /// Best first.
    pub ranked: Vec<Verdict>,
    /// Theories that fix no λ, with the reason.
    pub unscored: Vec<(String, String)>,
    pub proximity: Proximity,
}

fn rank(a: &Verdict, b: &Verdict) -> Ordering {
    let alpha = |v: &Verdict| v.alpha_deviation_pct.unwrap_or(f64::INFINITY);
    a.lambda_deviation_pct
        .total_cmp(&b.lambda_deviation_pct)
        .then_with(|| alpha(a).total_cmp(&alpha(b)))
        .then_with(|| a.theory.cmp(&b.theory))
}

/// Score every theory against a measured λ (and optionally α) and rank by
/// λ deviation, then α deviation, then name.
pub fn compare(measured_lambda: f64, measured_alpha: Option<f64>, theories: &[Theory]) -> Result<Comparison, TheoryError> {
    let mut ranked = Vec::new();
    let mut unscored = Vec::new();
    for theory in theories {
        match score_theory(theory, measured_lambda, measured_alpha) {
            Ok(v) => ranked.push(v),
            Err(e @ TheoryError::MissingLambda(_)) | Err(e @ TheoryError::Invalid { .. }) => {
                unscored.push((theory.name.clone(), e.to_string()))
            }
            Err(e) => return Err(e),
        }
    }
    ranked.sort_by(rank);
    unscored.sort();
    Ok(Comparison { measured_lambda, measured_alpha, ranked, unscored, proximity: macgillavry_golden_proximity() })
}

/// [`compare`] against the mean of a measurement summary.
pub fn compare_report(summary: &Summary, measured_alpha: Option<f64>, theories: &[Theory]) -> Result<Comparison, TheoryError> {
    compare(summary.mean, measured_alpha, theories)
}

/// Round trip r → λ → r, for catalog checks.
pub fn truncation_round_trip(r: f64) -> Option<f64> {
    cross_ratio_of_truncation(r).ok().and_then(|l| truncation_ratio(l).ok())
}
