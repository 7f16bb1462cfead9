//! Annotation files: labeled image points picked on a picture of the solid.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "image": { "width": 800, "height": 600 },
//!   "provenance": "free text",
//!   "points": { "P1": [312.5, 400.0], "R1": [330.1, 351.7] },
//!   "faces": [ { "id": "F1", "labels": ["P1", "R1", "R2", "P2", "Q3"] } ],
//!   "concurrency_groups": [ { "id": "e3", "segments": [["P1", "Q2"], ["P2", "Q1"], ["Q3", "S3"]] } ],
//!   "convergence_pairs": [ { "id": "pq", "p": ["a", "b"], "q": ["c", "d"], "expected_side": "left" } ]
//! }
//! ```
//!
//! Pixel coordinates have y pointing down. Face labels run around the
//! pentagon starting at the left end of the truncation-free side: left base,
//! left shoulder, right shoulder, right base, apex.

use std::collections::BTreeMap;
use std::path::Path;

use durer_core::analysis::Side;
use durer_core::{HPoint2, Segment2};
use serde::{Deserialize, Serialize};

use crate::error::{read, Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSize {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceAnnotation {
    pub id: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcurrencyGroup {
    pub id: String,
    pub segments: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergencePair {
    pub id: String,
    pub p: [String; 2],
    pub q: [String; 2],
    pub expected_side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Annotation {
    pub schema: u32,
    pub image: ImageSize,
    #[serde(default)]
    pub provenance: String,
    pub points: BTreeMap<String, [f64; 2]>,
    #[serde(default)]
    pub faces: Vec<FaceAnnotation>,
    #[serde(default)]
    pub concurrency_groups: Vec<ConcurrencyGroup>,
    #[serde(default)]
    pub convergence_pairs: Vec<ConvergencePair>,
}

impl Annotation {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        let ann: Annotation =
            serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.into(), message: e.to_string() })?;
        ann.validate()?;
        Ok(ann)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("annotation serializes");
        s.push('\n');
        s
    }

    fn check_label(&self, label: &str, context: &str) -> Result<()> {
        if self.points.contains_key(label) {
            Ok(())
        } else {
            Err(Error::Schema(format!("{context}: unknown point label {label:?}")))
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Schema(format!("unsupported schema {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        if !(self.image.width > 0.0 && self.image.height > 0.0) {
            return Err(Error::Schema("image size must be positive".into()));
        }
        for (label, p) in &self.points {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::Schema(format!("point {label} has non-finite coordinates")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for face in &self.faces {
            if !seen.insert(&face.id) {
                return Err(Error::Schema(format!("duplicate face id {:?}", face.id)));
            }
            if face.labels.len() != 5 {
                return Err(Error::Schema(format!("face {}: expected 5 labels, got {}", face.id, face.labels.len())));
            }
            let distinct: std::collections::BTreeSet<_> = face.labels.iter().collect();
            if distinct.len() != 5 {
                return Err(Error::Schema(format!("face {}: labels must be distinct", face.id)));
            }
            for l in &face.labels {
                self.check_label(l, &format!("face {}", face.id))?;
            }
        }
        for g in &self.concurrency_groups {
            if g.segments.len() != 3 {
                return Err(Error::Schema(format!("group {}: expected 3 segments, got {}", g.id, g.segments.len())));
            }
            for [a, b] in &g.segments {
                self.check_label(a, &format!("group {}", g.id))?;
                self.check_label(b, &format!("group {}", g.id))?;
            }
        }
        for p in &self.convergence_pairs {
            for l in p.p.iter().chain(&p.q) {
                self.check_label(l, &format!("pair {}", p.id))?;
            }
        }
        Ok(())
    }

    pub fn point(&self, label: &str) -> [f64; 2] {
        self.points[label]
    }

    pub fn segment(&self, [a, b]: &[String; 2]) -> Segment2 {
        Segment2::new(self.point(a), self.point(b))
    }

    /// Faces as homogeneous 5-point cycles, ready for measurement.
    pub fn face_points(&self) -> Vec<(String, [HPoint2; 5])> {
        self.faces
            .iter()
            .map(|f| {
                let pts = std::array::from_fn(|k| {
                    let [x, y] = self.point(&f.labels[k]);
                    HPoint2::finite(x, y)
                });
                (f.id.clone(), pts)
            })
            .collect()
    }

    pub fn observations(&self) -> Vec<(String, [f64; 2])> {
        self.points.iter().map(|(k, v)| (k.clone(), *v)).collect()
    }
}
