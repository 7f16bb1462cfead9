//! Measurement of face cross ratios from picked image points, and the two
//! perspective-consistency diagnostics (edge concurrency and convergence
//! direction).

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::math::{atan2, hypot, sqrt, to_degrees};
use crate::projective::{
    collinearity_defect, cross_ratio_with_tolerance, join, meet, CrossRatio, HLine2, HPoint2,
    ProjectiveError,
};
use crate::solid::centerline_points;

/// Meets whose condition number exceeds this are rejected as meaningless.
pub const MAX_CONDITION: f64 = 1e6;

/// Default collinearity tolerance for picked points, in pixels.
pub const DEFAULT_COLLINEARITY_PX: f64 = 0.5;

/// Default angle below which two image lines count as parallel, in degrees.
pub const DEFAULT_PARALLEL_DEG: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("extended cropped sides are too close to parallel (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("centerline cross ratio is infinite")]
    InfiniteCrossRatio,
    #[error("no faces to measure")]
    EmptyAnnotation,
    #[error("every face failed to measure")]
    NoMeasurements { failures: Vec<(String, AnalysisError)> },
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

/// A picked image segment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Segment2 {
    pub start: [f64; 2],
    pub end: [f64; 2],
}

impl Segment2 {
    pub fn new(start: [f64; 2], end: [f64; 2]) -> Self {
        Self { start, end }
    }

    pub fn line(&self) -> Result<HLine2, ProjectiveError> {
        join(&HPoint2::finite(self.start[0], self.start[1]), &HPoint2::finite(self.end[0], self.end[1]))
    }

    pub fn midpoint(&self) -> [f64; 2] {
        [(self.start[0] + self.end[0]) * 0.5, (self.start[1] + self.end[1]) * 0.5]
    }

    pub fn direction(&self) -> [f64; 2] {
        [self.end[0] - self.start[0], self.end[1] - self.start[1]]
    }
}

/// Acute angle between two 2D directions, in degrees.
fn line_angle_deg(u: [f64; 2], v: [f64; 2]) -> f64 {
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    to_degrees(atan2(cross.abs(), dot.abs()))
}

/// Centerline points of one face plus the conditioning of the apex meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructedFace {
    pub a: HPoint2,
    pub b: HPoint2,
    pub c: HPoint2,
    pub d: HPoint2,
    /// 1 / |sin θ| for the angle θ between the two extended cropped sides.
    pub condition: f64,
}

/// Locate the cropped apex A, center C and truncation point B from the five
/// visible vertices (canonical order) and take D as the far vertex.
///
/// A may be far away or ideal; only exactly (or numerically) parallel
/// cropped sides are rejected.
pub fn reconstruct_face_points(face: &[HPoint2; 5]) -> Result<ReconstructedFace, AnalysisError> {
    let side_l = join(&face[0], &face[1])?;
    let side_r = join(&face[3], &face[2])?;
    let (nl, nr) = (side_l.coeffs(), side_r.coeffs());
    let sin = (nl[0] * nr[1] - nl[1] * nr[0]).abs() / (hypot(nl[0], nl[1]) * hypot(nr[0], nr[1]));
    let condition = if sin > 0.0 { 1.0 / sin } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(AnalysisError::IllConditioned { condition });
    }
    let [a, b, c, d] = centerline_points(face)?;
    Ok(ReconstructedFace { a, b, c, d, condition })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceMeasurement {
    pub face_id: String,
    pub a: HPoint2,
    pub b: HPoint2,
    pub c: HPoint2,
    pub d: HPoint2,
    pub lambda: f64,
    /// Perpendicular spread of the finite centerline points, pixels.
    pub collinearity_defect: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `max − min`.
    pub spread: f64,
    /// Sample standard deviation; `None` for a single face.
    pub std_dev: Option<f64>,
}

impl Summary {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let std_dev = (n > 1).then(|| {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            sqrt(ss / (n - 1) as f64)
        });
        Some(Self { count: n, mean, min, max, spread: max - min, std_dev })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementReport {
    pub faces: Vec<FaceMeasurement>,
    pub failures: Vec<(String, AnalysisError)>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasureSettings {
    pub collinearity_px: f64,
}

impl Default for MeasureSettings {
    fn default() -> Self {
        Self { collinearity_px: DEFAULT_COLLINEARITY_PX }
    }
}

pub fn measure_face(id: &str, face: &[HPoint2; 5], settings: &MeasureSettings) -> Result<FaceMeasurement, AnalysisError> {
    let r = reconstruct_face_points(face)?;
    let lambda = match cross_ratio_with_tolerance(&r.a, &r.b, &r.c, &r.d, settings.collinearity_px)? {
        CrossRatio::Finite(v) if v.is_finite() => v,
        _ => return Err(AnalysisError::InfiniteCrossRatio),
    };
    let defect = collinearity_defect(&[r.a, r.b, r.c, r.d])?;
    Ok(FaceMeasurement {
        face_id: id.into(),
        a: r.a,
        b: r.b,
        c: r.c,
        d: r.d,
        lambda,
        collinearity_defect: defect,
        condition: r.condition,
    })
}

/// Per-face λ and their arithmetic mean. Individual face failures are
/// collected; the call fails only when nothing could be measured.
pub fn measure(faces: &[(String, [HPoint2; 5])], settings: &MeasureSettings) -> Result<MeasurementReport, AnalysisError> {
    if faces.is_empty() {
        return Err(AnalysisError::EmptyAnnotation);
    }
    let mut measured = Vec::new();
    let mut failures = Vec::new();
    for (id, pts) in faces {
        match measure_face(id, pts, settings) {
            Ok(m) => measured.push(m),
            Err(e) => failures.push((id.clone(), e)),
        }
    }
    let values: Vec<f64> = measured.iter().map(|m| m.lambda).collect();
    match Summary::from_values(&values) {
        Some(summary) => Ok(MeasurementReport { faces: measured, failures, summary }),
        None => Err(AnalysisError::NoMeasurements { failures }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Concurrency {
    ConcurrentOrdinary,
    ConcurrentIdeal,
    NonConcurrent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConcurrencyReport {
    /// Largest angle any one line must turn about its segment midpoint to
    /// pass through the meet of the other two, in degrees.
    pub defect_deg: f64,
    /// Largest pairwise angle between the three lines, in degrees.
    pub max_pair_angle_deg: f64,
    /// Meet of the first two lines.
    pub meet: HPoint2,
    pub classification: Concurrency,
}

/// Angle between line `k` and the line from its midpoint to `p`.
fn turn_to_pass_through(seg: &Segment2, p: &HPoint2) -> f64 {
    let [x, y, w] = p.coords();
    let m = seg.midpoint();
    let toward = [x - w * m[0], y - w * m[1]];
    let len = hypot(toward[0], toward[1]);
    let scale = hypot(x, y).max(w.abs() * hypot(m[0], m[1])).max(f64::MIN_POSITIVE);
    if len <= 1e-14 * scale {
        // p is the midpoint itself
        return 0.0;
    }
    line_angle_deg(seg.direction(), toward)
}

/// Concurrency test for three picked segments that should image parallel 3D
/// lines. Ideal meets are handled homogeneously.
pub fn concurrency_defect(segments: [&Segment2; 3], parallel_deg: f64) -> Result<ConcurrencyReport, AnalysisError> {
    let lines = [segments[0].line()?, segments[1].line()?, segments[2].line()?];
    let mut defect: f64 = 0.0;
    let mut first_meet = None;
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let p = meet(&lines[i], &lines[j])?;
        if k == 2 {
            first_meet = Some(p);
        }
        defect = defect.max(turn_to_pass_through(segments[k], &p));
    }
    let mut max_pair: f64 = 0.0;
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        max_pair = max_pair.max(line_angle_deg(segments[i].direction(), segments[j].direction()));
    }
    let classification = if defect > parallel_deg {
        Concurrency::NonConcurrent
    } else if max_pair <= parallel_deg {
        Concurrency::ConcurrentIdeal
    } else {
        Concurrency::ConcurrentOrdinary
    };
    Ok(ConcurrencyReport {
        defect_deg: defect,
        max_pair_angle_deg: max_pair,
        meet: first_meet.expect("loop visits k = 2"),
        classification,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ConvergenceVerdict {
    ConvergesExpected,
    ConvergesOpposite,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceReport {
    pub verdict: ConvergenceVerdict,
    pub angle_deg: f64,
    pub meet: HPoint2,
    /// Side of the segments on which the two lines meet; `None` if parallel.
    pub side: Option<Side>,
}

/// Which way two picked segments converge, compared with the side on which
/// the vanishing point of their (parallel) 3D lines is expected.
pub fn convergence_direction_check(
    p: &Segment2,
    q: &Segment2,
    expected: Side,
    parallel_deg: f64,
) -> Result<ConvergenceReport, AnalysisError> {
    let vp = meet(&p.line()?, &q.line()?)?;
    let angle = line_angle_deg(p.direction(), q.direction());
    if angle <= parallel_deg || vp.is_ideal() {
        return Ok(ConvergenceReport { verdict: ConvergenceVerdict::Parallel, angle_deg: angle, meet: vp, side: None });
    }
    let [x, _] = vp.to_euclidean().expect("non-parallel lines meet at a finite point");
    let centre = (p.midpoint()[0] + q.midpoint()[0]) * 0.5;
    let side = if x < centre { Side::Left } else { Side::Right };
    let verdict = if side == expected {
        ConvergenceVerdict::ConvergesExpected
    } else {
        ConvergenceVerdict::ConvergesOpposite
    };
    Ok(ConvergenceReport { verdict, angle_deg: angle, meet: vp, side: Some(side) })
}
