//! Versioned JSON reports and their table renderings.

use std::fmt::Write;

use durer_core::analysis::{Concurrency, ConcurrencyReport, ConvergenceReport, ConvergenceVerdict, Side};
use durer_core::theories::Comparison;
use durer_core::{FitResult, HPoint2, MeasurementReport, Summary};
use serde::Serialize;

/// Bumped on any incompatible change to a report layout.
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub report: &'static str,
    pub version: u32,
    #[serde(flatten)]
    pub body: T,
}

pub fn to_json<T: Serialize>(report: &'static str, body: T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { report, version: REPORT_VERSION, body }).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct FaceRow {
    pub id: String,
    pub lambda: f64,
    pub collinearity_defect_px: f64,
    pub condition: f64,
    /// Homogeneous centerline points A, B, C, D.
    pub centerline: [[f64; 3]; 4],
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureBody {
    pub provenance: String,
    pub faces: Vec<FaceRow>,
    pub failures: Vec<Failure>,
    pub summary: Summary,
}

impl MeasureBody {
    pub fn new(provenance: &str, r: &MeasurementReport) -> Self {
        let c = |p: &HPoint2| p.coords();
        Self {
            provenance: provenance.into(),
            faces: r
                .faces
                .iter()
                .map(|m| FaceRow {
                    id: m.face_id.clone(),
                    lambda: m.lambda,
                    collinearity_defect_px: m.collinearity_defect,
                    condition: m.condition,
                    centerline: [c(&m.a), c(&m.b), c(&m.c), c(&m.d)],
                })
                .collect(),
            failures: r.failures.iter().map(|(id, e)| Failure { id: id.clone(), error: e.to_string() }).collect(),
            summary: r.summary,
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<8} {:>10} {:>12} {:>10}", "face", "lambda", "defect_px", "condition").unwrap();
        for f in &self.faces {
            writeln!(out, "{:<8} {:>10.6} {:>12.6} {:>10.3}", f.id, f.lambda, f.collinearity_defect_px, f.condition).unwrap();
        }
        for f in &self.failures {
            writeln!(out, "{:<8} failed: {}", f.id, f.error).unwrap();
        }
        let s = &self.summary;
        writeln!(out, "mean     {:>10.6}  ({} faces)", s.mean, s.count).unwrap();
        writeln!(out, "spread   {:>10.6}  (min {:.6}, max {:.6})", s.spread, s.min, s.max).unwrap();
        if let Some(sd) = s.std_dev {
            writeln!(out, "std dev  {sd:>10.6}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CameraRow {
    pub eye: [f64; 3],
    pub look: [f64; 3],
    pub up: [f64; 3],
    pub focal_px: f64,
    pub offset: [f64; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct FitBody {
    pub alpha_deg: f64,
    pub lambda: f64,
    pub truncation_ratio: f64,
    pub rms_px: f64,
    pub converged: bool,
    pub evaluations: usize,
    pub iterations: usize,
    pub correspondences: usize,
    pub camera: CameraRow,
}

impl FitBody {
    pub fn new(r: &FitResult, correspondences: usize) -> Self {
        let c = &r.camera;
        Self {
            alpha_deg: r.shape.alpha(),
            lambda: r.shape.lambda(),
            truncation_ratio: r.shape.truncation_ratio(),
            rms_px: r.rms,
            converged: r.converged,
            evaluations: r.evaluations,
            iterations: r.iterations,
            correspondences,
            camera: CameraRow {
                eye: c.eye().to_array(),
                look: c.look().to_array(),
                up: c.up().to_array(),
                focal_px: c.focal_px(),
                offset: c.offset(),
            },
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "alpha        {:.4} deg", self.alpha_deg).unwrap();
        writeln!(out, "lambda       {:.6}", self.lambda).unwrap();
        writeln!(out, "r            {:.6}", self.truncation_ratio).unwrap();
        writeln!(out, "rms          {:.6} px over {} points", self.rms_px, self.correspondences).unwrap();
        writeln!(out, "converged    {}", self.converged).unwrap();
        writeln!(out, "evaluations  {} ({} iterations)", self.evaluations, self.iterations).unwrap();
        let e = self.camera.eye;
        writeln!(out, "eye          ({:.4}, {:.4}, {:.4})", e[0], e[1], e[2]).unwrap();
        writeln!(out, "focal        {:.3} px, principal point ({:.3}, {:.3})", self.camera.focal_px, self.camera.offset[0], self.camera.offset[1]).unwrap();
        out
    }
}

pub fn theories_table(c: &Comparison) -> String {
    let mut out = String::new();
    match c.measured_alpha {
        Some(a) => writeln!(out, "measured lambda {:.4}, alpha {:.2} deg", c.measured_lambda, a).unwrap(),
        None => writeln!(out, "measured lambda {:.4}", c.measured_lambda).unwrap(),
    }
    writeln!(out, "{:<4} {:<16} {:>8} {:>9} {:>8} {:>9}", "rank", "theory", "lambda", "d_lambda", "alpha", "d_alpha").unwrap();
    for (i, v) in c.ranked.iter().enumerate() {
        let alpha = v.alpha.map_or("-".to_string(), |a| format!("{a:.2}"));
        let d_alpha = v.alpha_deviation_pct.map_or("-".to_string(), |d| format!("{d:.2}%"));
        writeln!(
            out,
            "{:<4} {:<16} {:>8.4} {:>8.2}% {:>8} {:>9}",
            i + 1,
            v.theory,
            v.lambda,
            v.lambda_deviation_pct,
            alpha,
            d_alpha
        )
        .unwrap();
    }
    for (name, why) in &c.unscored {
        writeln!(out, "-    {name:<16} not scored: {why}").unwrap();
    }
    writeln!(
        out,
        "MacGillavry vs golden: half-width ratio {:.5}, truncation-height ratio {:.5}",
        c.proximity.half_width_ratio, c.proximity.truncation_height_ratio
    )
    .unwrap();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupRow {
    pub id: String,
    #[serde(flatten)]
    pub result: Option<ConcurrencyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairRow {
    pub id: String,
    pub expected_side: Side,
    #[serde(flatten)]
    pub result: Option<ConvergenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnomalyBody {
    pub provenance: String,
    pub parallel_angle_deg: f64,
    pub concurrency: Vec<GroupRow>,
    pub convergence: Vec<PairRow>,
}

fn concurrency_name(c: Concurrency) -> &'static str {
    match c {
        Concurrency::ConcurrentOrdinary => "concurrent",
        Concurrency::ConcurrentIdeal => "concurrent (ideal point)",
        Concurrency::NonConcurrent => "NON-CONCURRENT",
    }
}

fn verdict_name(v: ConvergenceVerdict) -> &'static str {
    match v {
        ConvergenceVerdict::ConvergesExpected => "converges as expected",
        ConvergenceVerdict::ConvergesOpposite => "CONVERGES OPPOSITE",
        ConvergenceVerdict::Parallel => "parallel",
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

impl AnomalyBody {
    pub fn table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "threshold {:.3} deg", self.parallel_angle_deg).unwrap();
        for g in &self.concurrency {
            match (&g.result, &g.error) {
                (Some(r), _) => writeln!(
                    out,
                    "group {:<10} defect {:>9.4} deg  spread {:>8.4} deg  {}",
                    g.id,
                    r.defect_deg,
                    r.max_pair_angle_deg,
                    concurrency_name(r.classification)
                )
                .unwrap(),
                (None, e) => writeln!(out, "group {:<10} failed: {}", g.id, e.as_deref().unwrap_or("")).unwrap(),
            }
        }
        for p in &self.convergence {
            match (&p.result, &p.error) {
                (Some(r), _) => writeln!(
                    out,
                    "pair  {:<10} angle  {:>9.4} deg  expected {:<5}  {}",
                    p.id,
                    r.angle_deg,
                    side_name(p.expected_side),
                    verdict_name(r.verdict)
                )
                .unwrap(),
                (None, e) => writeln!(out, "pair  {:<10} failed: {}", p.id, e.as_deref().unwrap_or("")).unwrap(),
            }
        }
        out
    }
}
