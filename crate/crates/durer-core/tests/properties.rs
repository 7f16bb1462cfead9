use durer_core::analysis::{Concurrency, DEFAULT_PARALLEL_DEG};
use durer_core::projective::apply_homography;
use durer_core::solid::{face_cross_ratio_3d, FaceKind};
use durer_core::{
    build_rhombohedron, concurrency_defect, cross_ratio, join, meet, measure, synthetic_view, truncate, Camera,
    CrossRatio, HPoint2, Homography2, MeasureSettings, Segment2, Vec3,
};
use proptest::prelude::*;

fn finite(c: CrossRatio) -> f64 {
    match c {
        CrossRatio::Finite(v) => v,
        CrossRatio::Infinite => panic!("unexpected infinite cross ratio"),
    }
}

/// Well-conditioned projective map: near-identity affine part plus a mild
/// perspective row.
fn homography(a: [f64; 8]) -> Homography2 {
    Homography2::new([
        [1.0 + 0.3 * a[0], 0.3 * a[1], 5.0 * a[2]],
        [0.3 * a[3], 1.0 + 0.3 * a[4], 5.0 * a[5]],
        [0.02 * a[6], 0.02 * a[7], 1.0],
    ])
    .unwrap()
}

fn camera_around(azimuth: f64, elevation: f64, distance: f64) -> Camera {
    let (sa, ca) = azimuth.sin_cos();
    let (se, ce) = elevation.sin_cos();
    let target = Vec3::new(0.0, 0.0, 1.0);
    let eye = target + Vec3::new(ca * ce, sa * ce, se) * distance;
    Camera::look_at(eye, target, Vec3::new(0.0, 0.0, 1.0), 1.0, 700.0, [400.0, 300.0]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cross_ratio_survives_homographies(
        t in prop::array::uniform4(-4.0f64..4.0),
        origin in prop::array::uniform2(-3.0f64..3.0),
        angle in 0.0f64..std::f64::consts::PI,
        h in prop::array::uniform8(-1.0f64..1.0),
    ) {
        let mut s = t;
        s.sort_by(f64::total_cmp);
        prop_assume!(s.windows(2).all(|w| w[1] - w[0] > 0.05));
        let dir = [angle.cos(), angle.sin()];
        let pts: Vec<HPoint2> = t.iter().map(|k| HPoint2::finite(origin[0] + k * dir[0], origin[1] + k * dir[1])).collect();
        let before = finite(cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap());
        // independent value straight from the parameters
        let direct = ((t[2] - t[0]) / (t[2] - t[1])) * ((t[3] - t[1]) / (t[3] - t[0]));
        prop_assert!((before - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        let m = homography(h);
        let img: Vec<HPoint2> = pts.iter().map(|p| apply_homography(m.matrix(), p).unwrap()).collect();
        let after = finite(cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap());
        prop_assert!((after - before).abs() <= 1e-9 * before.abs().max(1.0));
    }

    #[test]
    fn join_meet_duality(p in prop::array::uniform4(-50.0f64..50.0)) {
        let a = HPoint2::finite(p[0], p[1]);
        let b = HPoint2::finite(p[2], p[3]);
        prop_assume!((p[0] - p[2]).hypot(p[1] - p[3]) > 1e-3);
        let l = join(&a, &b).unwrap();
        prop_assert!(l.incidence(&a).abs() < 1e-9 && l.incidence(&b).abs() < 1e-9);
        // the meet of two lines through a is a
        let c = HPoint2::finite(p[0] + 1.0, p[1] - 2.0);
        let l2 = join(&a, &c).unwrap();
        if let Ok(x) = meet(&l, &l2) {
            let [u, v] = x.to_euclidean().unwrap();
            prop_assert!((u - p[0]).abs() < 1e-6 && (v - p[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn truncated_mesh_invariants(alpha in 30.0f64..=90.0, lambda in 1.01f64..6.0) {
        let mesh = truncate(&build_rhombohedron(alpha).unwrap(), lambda).unwrap();
        prop_assert_eq!(mesh.vertices.len(), 12);
        let pentagons: Vec<_> = mesh.faces.iter().filter(|f| f.kind == FaceKind::Pentagon).collect();
        let triangles: Vec<_> = mesh.faces.iter().filter(|f| f.kind == FaceKind::Triangle).collect();
        prop_assert_eq!(pentagons.len(), 6);
        prop_assert_eq!(triangles.len(), 2);
        for f in &pentagons {
            prop_assert!((face_cross_ratio_3d(&mesh, &f.id).unwrap() - lambda).abs() < 1e-9);
        }
        for t in &triangles {
            let p = mesh.face_positions(t);
            prop_assert!((p[0].z - p[1].z).abs() < 1e-9 && (p[1].z - p[2].z).abs() < 1e-9);
            let d = [p[0].distance(p[1]), p[1].distance(p[2]), p[2].distance(p[0])];
            prop_assert!((d[0] - d[1]).abs() < 1e-9 && (d[1] - d[2]).abs() < 1e-9);
        }
    }

    #[test]
    fn measured_lambda_matches_generator(
        alpha in 60.0f64..=90.0,
        lambda in 1.05f64..4.0,
        azimuth in 0.0f64..std::f64::consts::TAU,
        elevation in -0.6f64..0.9,
        distance in 4.0f64..12.0,
    ) {
        let mesh = truncate(&build_rhombohedron(alpha).unwrap(), lambda).unwrap();
        let view = synthetic_view(&mesh, &camera_around(azimuth, elevation, distance)).unwrap();
        let pos = |l: &str| view.points.iter().find(|(k, _)| k == l).unwrap().1;
        let faces: Vec<(String, [HPoint2; 5])> = view
            .faces
            .iter()
            .map(|(id, labels)| (id.clone(), labels.clone().map(|l| { let p = pos(&l); HPoint2::finite(p[0], p[1]) })))
            .collect();
        prop_assume!(!faces.is_empty());
        let report = measure(&faces, &MeasureSettings { collinearity_px: 1e-6 }).unwrap();
        prop_assert!(report.failures.is_empty(), "{:?}", report.failures);
        for f in &report.faces {
            prop_assert!((f.lambda - lambda).abs() < 1e-9, "face {} gave {}", f.face_id, f.lambda);
        }
    }

    #[test]
    fn parallel_edges_are_concurrent_until_nudged(
        alpha in 60.0f64..=90.0,
        lambda in 1.1f64..3.0,
        azimuth in 0.0f64..std::f64::consts::TAU,
        elevation in -0.5f64..0.9,
        k in 0usize..3,
        nudge_dir in 0.0f64..std::f64::consts::TAU,
    ) {
        let mesh = truncate(&build_rhombohedron(alpha).unwrap(), lambda).unwrap();
        let cam = camera_around(azimuth, elevation, 8.0);
        let px = |l: &str| cam.project_point(mesh.position(l).unwrap()).unwrap();
        let (i, j) = ((k + 1) % 3 + 1, (k + 2) % 3 + 1);
        let labels = [
            (format!("P{i}"), format!("Q{j}")),
            (format!("P{j}"), format!("Q{i}")),
            (format!("Q{}", k + 1), format!("S{}", k + 1)),
        ];
        let segs: Vec<Segment2> = labels.iter().map(|(a, b)| Segment2::new(px(a), px(b))).collect();
        let r = concurrency_defect([&segs[0], &segs[1], &segs[2]], DEFAULT_PARALLEL_DEG).unwrap();
        prop_assert_ne!(r.classification, Concurrency::NonConcurrent);

        // push the endpoint of the shortest segment nearest the vanishing
        // point sideways by 5 px
        let len = |s: &Segment2| (s.end[0] - s.start[0]).hypot(s.end[1] - s.start[1]);
        let idx = (0..3).min_by(|a, b| len(&segs[*a]).total_cmp(&len(&segs[*b]))).unwrap();
        prop_assume!(len(&segs[idx]) < 500.0);
        let others: Vec<_> = (0..3).filter(|o| *o != idx).map(|o| segs[o].line().unwrap()).collect();
        let vp = meet(&others[0], &others[1]).unwrap();
        let s = segs[idx];
        let toward_vp = |p: [f64; 2]| {
            let [x, y, w] = vp.coords();
            let d = s.direction();
            (x - w * p[0]) * d[0] + (y - w * p[1]) * d[1]
        };
        let move_end = toward_vp(s.end).abs() <= toward_vp(s.start).abs();
        let d = s.direction();
        let n = [-d[1], d[0]];
        let norm = n[0].hypot(n[1]);
        let sign = if nudge_dir.cos() >= 0.0 { 1.0 } else { -1.0 };
        let shift = |p: [f64; 2]| [p[0] + sign * 5.0 * n[0] / norm, p[1] + sign * 5.0 * n[1] / norm];
        let mut moved = segs.clone();
        if move_end {
            moved[idx].end = shift(s.end);
        } else {
            moved[idx].start = shift(s.start);
        }
        let r = concurrency_defect([&moved[0], &moved[1], &moved[2]], DEFAULT_PARALLEL_DEG).unwrap();
        prop_assert_eq!(r.classification, Concurrency::NonConcurrent);
    }
}
