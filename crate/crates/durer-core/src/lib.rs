//! Projective analysis of truncated rhombohedra.
//!
//! The crate is `no_std` (with `alloc`) and is organised bottom-up:
//!
//! 1. [`projective`] – homogeneous points and lines in the plane, join/meet,
//!    homographies and the signed cross ratio.
//! 2. [`solid`] – the pentagonal face and the 3D solid built from the shape
//!    pair (α, λ): acute rhombus angle and centerline cross ratio.
//! 3. [`perspective`] – central projection, vanishing points, visibility.
//! 4. [`analysis`] – per-face cross ratios from picked image points,
//!    concurrency/convergence diagnostics and reprojection fitting.
//! 5. [`theories`] – a catalog of published face shapes and their scores.
//!
//! IO, file formats and the command line live in the `durer` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod fit;
pub mod math;
pub mod perspective;
pub mod projective;
pub mod simplex;
pub mod solid;
pub mod theories;
pub mod vec3;

pub use analysis::{
    concurrency_defect, convergence_direction_check, measure, measure_face, reconstruct_face_points, AnalysisError,
    Concurrency, ConcurrencyReport, ConvergenceReport, ConvergenceVerdict, FaceMeasurement, MeasureSettings,
    MeasurementReport, Segment2, Side, Summary,
};
pub use fit::{fit_model, FitConfig, FitError, FitResult};
pub use perspective::{synthetic_view, Camera, CameraError, SyntheticView};
pub use projective::{
    collinearity_defect, cross_ratio, join, meet, CrossRatio, HLine2, HPoint2, HPoint3, Homography2, ProjectiveError,
};
pub use solid::{
    build_rhombohedron, cross_ratio_of_truncation, golden_pentagon, inscribed_truncation_ratio, pentagon_vertices,
    truncate, truncation_ratio, FaceShape, PentagonFace, SolidError, SolidMesh,
};
pub use theories::{builtin_theories, compare, compare_report, score_theory, Theory, TheoryError, Verdict};
pub use vec3::Vec3;

/// The golden ratio (√5 + 1) / 2.
pub const PHI: f64 = 1.618_033_988_749_895;
