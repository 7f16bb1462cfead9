//! Shape and camera recovery by reprojection-error minimization.
//!
//! Parameters: α, λ, camera rotation vector (3), translation (3), focal
//! length in pixels and principal point (2). The pixel scale of the initial
//! camera is held fixed because only the product focal·scale is observable.
//! α and λ are clamped to their valid ranges and the overshoot is penalized,
//! so the search never leaves the space of buildable solids.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::math::sqrt;
use crate::perspective::Camera;
use crate::simplex::{minimize, SimplexConfig};
use crate::solid::{generators, truncated_positions, FaceShape, TRUNCATED_LABELS};
use crate::vec3::{mat_vec, rotation_from_vector, Vec3};

pub const MIN_CORRESPONDENCES: usize = 8;

const ALPHA_RANGE: (f64, f64) = (1.0, 90.0);
const LAMBDA_RANGE: (f64, f64) = (1.0 + 1e-9, 50.0);
const BOUND_PENALTY: f64 = 1e6;
const BEHIND_PENALTY: f64 = 1e8;
const PARAMS: usize = 11;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("too few correspondences: need {needed}, got {got}")]
    TooFewCorrespondences { needed: usize, got: usize },
    #[error("fit did not converge (rms {:.4} px after {} evaluations)", .0.rms, .0.evaluations)]
    NoConvergence(Box<FitResult>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitConfig {
    /// Total objective-evaluation budget across all simplex runs.
    pub max_evaluations: usize,
    /// Deterministic simplex rebuilds around the incumbent.
    pub max_cycles: usize,
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Extra runs from seeded random perturbations of the incumbent.
    pub restarts: usize,
    pub seed: u64,
    /// Results with a larger rms reprojection error are flagged unconverged.
    pub rms_threshold: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_evaluations: 400_000,
            max_cycles: 60,
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            restarts: 0,
            seed: 0,
            rms_threshold: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub shape: FaceShape,
    pub camera: Camera,
    /// Root-mean-square point reprojection error, pixels.
    pub rms: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best objective (sum of squared pixel errors) after each iteration.
    pub history: Vec<f64>,
}

struct Problem {
    targets: Vec<(usize, [f64; 2])>,
    origin: [f64; PARAMS],
    scales: [f64; PARAMS],
    pixel_scale: f64,
}

struct Decoded {
    alpha: f64,
    lambda: f64,
    rotvec: Vec3,
    translation: Vec3,
    focal_px: f64,
    offset: [f64; 2],
    penalty: f64,
}

impl Problem {
    fn decode(&self, u: &[f64]) -> Decoded {
        let p: [f64; PARAMS] = core::array::from_fn(|i| self.origin[i] + u[i] * self.scales[i]);
        let mut penalty = 0.0;
        let mut clamp = |v: f64, (lo, hi): (f64, f64)| {
            let c = v.clamp(lo, hi);
            penalty += BOUND_PENALTY * (v - c) * (v - c);
            c
        };
        let alpha = clamp(p[0], ALPHA_RANGE);
        let lambda = clamp(p[1], LAMBDA_RANGE);
        let focal_px = clamp(p[8], (1e-6, f64::INFINITY));
        Decoded {
            alpha,
            lambda,
            rotvec: Vec3::new(p[2], p[3], p[4]),
            translation: Vec3::new(p[5], p[6], p[7]),
            focal_px,
            offset: [p[9], p[10]],
            penalty,
        }
    }

    /// Sum of squared pixel residuals plus penalties.
    fn objective(&self, u: &[f64]) -> f64 {
        let d = self.decode(u);
        let e = match generators(d.alpha) {
            Ok(e) => e,
            Err(_) => return f64::INFINITY,
        };
        let t = 1.0 - 1.0 / (2.0 * d.lambda - 1.0);
        let verts = truncated_positions(&e, t);
        let rot = rotation_from_vector(d.rotvec);
        let mut sum = d.penalty;
        for (idx, target) in &self.targets {
            let c = mat_vec(&rot, verts[*idx]) + d.translation;
            if c.z <= 1e-9 {
                sum += BEHIND_PENALTY * (1.0 + (1e-9 - c.z) * (1e-9 - c.z));
                continue;
            }
            let x = d.focal_px * c.x / c.z + d.offset[0];
            let y = d.focal_px * c.y / c.z + d.offset[1];
            sum += (x - target[0]) * (x - target[0]) + (y - target[1]) * (y - target[1]);
        }
        sum
    }
}

/// Fit (α, λ) and the camera to labeled image points. Labels are matched to
/// the truncated-solid vertex labels (`P1..P3`, `Q1..Q3`, `R1..R3`,
/// `S1..S3`); other labels are ignored.
///
/// The search is a deterministic simplex descent restarted around the
/// incumbent until it stops improving, followed by `restarts` seeded random
/// restarts. A result whose rms exceeds `rms_threshold` is returned inside
/// [`FitError::NoConvergence`].
pub fn fit_model(
    observations: &[(String, [f64; 2])],
    initial_shape: &FaceShape,
    initial_camera: &Camera,
    config: &FitConfig,
) -> Result<FitResult, FitError> {
    let mut targets: Vec<(usize, [f64; 2])> = Vec::new();
    for (label, px) in observations {
        if let Some(idx) = TRUNCATED_LABELS.iter().position(|l| l == label) {
            if !targets.iter().any(|(i, _)| *i == idx) {
                targets.push((idx, *px));
            }
        }
    }
    if targets.len() < MIN_CORRESPONDENCES {
        return Err(FitError::TooFewCorrespondences { needed: MIN_CORRESPONDENCES, got: targets.len() });
    }

    let (rotvec, translation) = initial_camera.pose();
    let f0 = initial_camera.focal_px();
    let off = initial_camera.offset();
    let t_scale = (0.05 * translation.norm()).max(0.05);
    let problem = Problem {
        targets,
        origin: [
            initial_shape.alpha(),
            initial_shape.lambda(),
            rotvec.x,
            rotvec.y,
            rotvec.z,
            translation.x,
            translation.y,
            translation.z,
            f0,
            off[0],
            off[1],
        ],
        scales: [2.0, 0.05, 0.05, 0.05, 0.05, t_scale, t_scale, t_scale, 0.05 * f0, 10.0, 10.0],
        pixel_scale: initial_camera.scale(),
    };
    let objective = |u: &[f64]| problem.objective(u);

    let simplex_cfg = |budget: usize| SimplexConfig {
        max_evaluations: budget,
        reflection: config.reflection,
        expansion: config.expansion,
        contraction: config.contraction,
        shrink: config.shrink,
        f_tol_abs: 1e-24,
        f_tol_rel: 1e-15,
        x_tol: 1e-11,
    };

    let mut best = vec![0.0; PARAMS];
    let mut best_value = objective(&best);
    let mut evaluations = 1usize;
    let mut iterations = 0usize;
    let mut history = vec![best_value];
    let mut step = 1.0;

    let mut run = |start: &[f64], step: f64, best: &mut Vec<f64>, best_value: &mut f64, evaluations: &mut usize| -> bool {
        let remaining = config.max_evaluations.saturating_sub(*evaluations);
        if remaining <= PARAMS + 2 {
            return false;
        }
        let out = minimize(objective, start, &[step; PARAMS], &simplex_cfg(remaining));
        *evaluations += out.evaluations;
        iterations += out.iterations;
        for v in out.history {
            history.push(v.min(*best_value));
        }
        if out.value < *best_value {
            *best_value = out.value;
            *best = out.best;
            true
        } else {
            false
        }
    };

    for cycle in 0..config.max_cycles {
        let before = best_value;
        let start = best.clone();
        run(&start, step, &mut best, &mut best_value, &mut evaluations);
        let gain = before - best_value;
        if cycle > 0 && gain <= 1e-12 * before + 1e-26 {
            if step <= 1e-3 {
                break;
            }
            // stalled at this scale: probe a finer simplex
            step *= 0.1;
        }
        if config.max_evaluations.saturating_sub(evaluations) <= PARAMS + 2 {
            break;
        }
    }

    if config.restarts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for _ in 0..config.restarts {
            let start: Vec<f64> = best
                .iter()
                .map(|b| {
                    let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                    b + 2.0 * (2.0 * unit - 1.0)
                })
                .collect();
            run(&start, 1.0, &mut best, &mut best_value, &mut evaluations);
            for _ in 0..4 {
                let start = best.clone();
                if !run(&start, 0.1, &mut best, &mut best_value, &mut evaluations) {
                    break;
                }
            }
        }
    }

    let d = problem.decode(&best);
    let shape = FaceShape::new(d.alpha, d.lambda).expect("decoded parameters are clamped into range");
    let camera = Camera::from_pose(d.rotvec, d.translation, d.focal_px / problem.pixel_scale, problem.pixel_scale, d.offset)
        .expect("decoded focal length is positive");
    let rms = sqrt((best_value - d.penalty).max(0.0) / problem.targets.len() as f64);
    let converged = rms <= config.rms_threshold;
    let result = FitResult { shape, camera, rms, iterations, evaluations, converged, history };
    if converged {
        Ok(result)
    } else {
        Err(FitError::NoConvergence(Box::new(result)))
    }
}
