//! Synthetic annotations: project a solid of known shape, optionally jitter
//! the points with seeded Gaussian noise.

use std::collections::BTreeMap;

use durer_core::analysis::Side;
use durer_core::{build_rhombohedron, synthetic_view, truncate, Camera, FaceShape, Segment2, SolidMesh};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::annotation::{Annotation, ConcurrencyGroup, ConvergencePair, FaceAnnotation, ImageSize, SCHEMA_VERSION};
use crate::error::{Error, Result};

/// Convergence pairs are only emitted when the two image edges differ in
/// direction by at least this much, so the expected side is unambiguous.
const MIN_PAIR_ANGLE_DEG: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub shape: FaceShape,
    pub camera: Camera,
    pub image: [f64; 2],
    /// Standard deviation of the per-coordinate pixel noise.
    pub noise: f64,
    pub seed: u64,
}

pub fn solid(shape: &FaceShape) -> Result<SolidMesh> {
    let mesh = build_rhombohedron(shape.alpha()).map_err(|e| Error::Usage(e.to_string()))?;
    truncate(&mesh, shape.lambda()).map_err(|e| Error::Usage(e.to_string()))
}

/// Three edges per generator direction: `P_i–Q_j`, `P_j–Q_i` and `Q_k–S_k`.
fn parallel_edge_triples() -> Vec<(String, [[String; 2]; 3])> {
    (0..3)
        .map(|k| {
            let (i, j) = ((k + 1) % 3 + 1, (k + 2) % 3 + 1);
            let k = k + 1;
            let seg = |a: String, b: String| [a, b];
            (
                format!("e{k}"),
                [
                    seg(format!("P{i}"), format!("Q{j}")),
                    seg(format!("P{j}"), format!("Q{i}")),
                    seg(format!("Q{k}"), format!("S{k}")),
                ],
            )
        })
        .collect()
}

fn angle_deg(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.abs().atan2(dot.abs()).to_degrees()
}

pub fn synthesize(opts: &SynthOptions) -> Result<Annotation> {
    if !(opts.noise >= 0.0 && opts.noise.is_finite()) {
        return Err(Error::Usage(format!("noise must be a finite non-negative number, got {}", opts.noise)));
    }
    let mesh = solid(&opts.shape)?;
    let view = synthetic_view(&mesh, &opts.camera).map_err(Error::compute)?;
    let exact: BTreeMap<String, [f64; 2]> = view.points.iter().cloned().collect();

    let mut points = BTreeMap::new();
    let normal = Normal::new(0.0, opts.noise).expect("sigma checked above");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (label, p) in &exact {
        let q = if opts.noise > 0.0 {
            [p[0] + normal.sample(&mut rng), p[1] + normal.sample(&mut rng)]
        } else {
            *p
        };
        points.insert(label.clone(), q);
    }

    let faces = view
        .faces
        .iter()
        .map(|(id, labels)| FaceAnnotation { id: id.clone(), labels: labels.to_vec() })
        .collect();

    let mut concurrency_groups = Vec::new();
    let mut convergence_pairs = Vec::new();
    for (id, segs) in parallel_edge_triples() {
        if !segs.iter().flatten().all(|l| exact.contains_key(l)) {
            continue;
        }
        let s: Vec<Segment2> = segs.iter().map(|[a, b]| Segment2::new(exact[a], exact[b])).collect();
        concurrency_groups.push(ConcurrencyGroup { id: id.clone(), segments: segs.to_vec() });

        let k: usize = id[1..].parse().expect("group ids are e1..e3");
        let vp = opts.camera.vanishing_point(mesh.generators[k - 1]).map_err(Error::compute)?;
        if vp.is_ideal() || angle_deg(s[0].direction(), s[1].direction()) < MIN_PAIR_ANGLE_DEG {
            continue;
        }
        let x = vp.to_euclidean().expect("finite vanishing point")[0];
        let centre = (s[0].midpoint()[0] + s[1].midpoint()[0]) * 0.5;
        convergence_pairs.push(ConvergencePair {
            id: format!("{id}-pair"),
            p: segs[0].clone(),
            q: segs[1].clone(),
            expected_side: if x < centre { Side::Left } else { Side::Right },
        });
    }

    let ann = Annotation {
        schema: SCHEMA_VERSION,
        image: ImageSize { width: opts.image[0], height: opts.image[1] },
        provenance: format!(
            "synthetic: alpha={} lambda={} noise={} seed={}",
            opts.shape.alpha(),
            opts.shape.lambda(),
            opts.noise,
            opts.seed
        ),
        points,
        faces,
        concurrency_groups,
        convergence_pairs,
    };
    ann.validate()?;
    Ok(ann)
}
