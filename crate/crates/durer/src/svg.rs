//! SVG 1.1 figures. Output is byte-for-byte deterministic: fixed element
//! order and six-decimal coordinates.

use std::fmt::Write;

use durer_core::solid::FaceKind;
use durer_core::{Camera, HPoint2, MeasurementReport, SolidMesh};

use crate::annotation::Annotation;
use crate::error::{Error, Result};

fn f6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn open(out: &mut String, width: f64, height: f64) {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f6(width),
        h = f6(height)
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, f6(width), f6(height)).unwrap();
}

fn polygon(out: &mut String, pts: &[[f64; 2]], class: &str, fill: &str) {
    let coords: Vec<String> = pts.iter().map(|p| format!("{},{}", f6(p[0]), f6(p[1]))).collect();
    writeln!(out, r#"<polygon class="{class}" points="{}" fill="{fill}" stroke="black" stroke-width="1.5" stroke-linejoin="round"/>"#, coords.join(" ")).unwrap();
}

fn label(out: &mut String, p: [f64; 2], text: &str, color: &str) {
    writeln!(
        out,
        r#"<circle cx="{x}" cy="{y}" r="2.5" fill="{color}"/><text x="{tx}" y="{ty}" font-family="sans-serif" font-size="12" fill="{color}">{t}</text>"#,
        x = f6(p[0]),
        y = f6(p[1]),
        tx = f6(p[0] + 4.0),
        ty = f6(p[1] - 4.0),
        t = escape(text)
    )
    .unwrap();
}

/// The solid as seen by `camera`; back faces are culled.
pub fn render_solid(mesh: &SolidMesh, camera: &Camera, size: [f64; 2], labels: bool) -> Result<String> {
    let visible = camera.visible_faces(mesh);
    let projected = mesh
        .vertices
        .iter()
        .map(|v| camera.project_point(v.position))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Error::compute)?;
    let mut out = String::new();
    open(&mut out, size[0], size[1]);
    let mut shown = vec![false; mesh.vertices.len()];
    for (face, vis) in mesh.faces.iter().zip(&visible) {
        if !vis {
            continue;
        }
        let fill = match face.kind {
            FaceKind::Triangle => "#d9d9d9",
            _ => "#f2f2f2",
        };
        let pts: Vec<[f64; 2]> = face.cycle.iter().map(|&i| projected[i]).collect();
        writeln!(out, "<!-- {} -->", escape(&face.id)).unwrap();
        polygon(&mut out, &pts, "face", fill);
        for &i in &face.cycle {
            shown[i] = true;
        }
    }
    if labels {
        for (i, v) in mesh.vertices.iter().enumerate() {
            if shown[i] {
                label(&mut out, projected[i], &v.label, "black");
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn finite(p: &HPoint2) -> Option<[f64; 2]> {
    if p.is_ideal() {
        None
    } else {
        p.to_euclidean()
    }
}

/// Annotated points and faces, with the reconstructed centerline points
/// A, B, C, D of every measured face overlaid in red.
pub fn render_annotation(ann: &Annotation, report: Option<&MeasurementReport>) -> String {
    let mut out = String::new();
    open(&mut out, ann.image.width, ann.image.height);
    for face in &ann.faces {
        let pts: Vec<[f64; 2]> = face.labels.iter().map(|l| ann.point(l)).collect();
        writeln!(out, "<!-- {} -->", escape(&face.id)).unwrap();
        polygon(&mut out, &pts, "face", "none");
    }
    for g in &ann.concurrency_groups {
        for seg in &g.segments {
            let (a, b) = (ann.point(&seg[0]), ann.point(&seg[1]));
            writeln!(
                out,
                r##"<line class="group" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f5fbf" stroke-width="1"/>"##,
                f6(a[0]),
                f6(a[1]),
                f6(b[0]),
                f6(b[1])
            )
            .unwrap();
        }
    }
    for (name, p) in &ann.points {
        label(&mut out, *p, name, "black");
    }
    if let Some(report) = report {
        for m in &report.faces {
            let named = [("A", &m.a), ("B", &m.b), ("C", &m.c), ("D", &m.d)];
            let pts: Vec<[f64; 2]> = named.iter().filter_map(|(_, p)| finite(p)).collect();
            if let (Some(first), Some(last)) = (pts.first(), pts.last()) {
                writeln!(
                    out,
                    r#"<line class="centerline" x1="{}" y1="{}" x2="{}" y2="{}" stroke="red" stroke-width="1" stroke-dasharray="4,3"/>"#,
                    f6(first[0]),
                    f6(first[1]),
                    f6(last[0]),
                    f6(last[1])
                )
                .unwrap();
            }
            for (name, p) in named {
                if let Some(q) = finite(p) {
                    label(&mut out, q, &format!("{}.{name}", m.face_id), "red");
                }
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use durer_core::{build_rhombohedron, truncate, Vec3};

    #[test]
    fn solid_render_is_deterministic_and_culled() {
        let mesh = truncate(&build_rhombohedron(78.0).unwrap(), 1.6111).unwrap();
        let cam = Camera::look_at(Vec3::new(3.0, -4.0, 3.0), Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 1.0), 1.0, 800.0, [400.0, 300.0])
            .unwrap();
        let a = render_solid(&mesh, &cam, [800.0, 600.0], true).unwrap();
        let b = render_solid(&mesh, &cam, [800.0, 600.0], true).unwrap();
        assert_eq!(a, b);
        let polys = a.matches("<polygon").count();
        let visible = cam.visible_faces(&mesh).iter().filter(|v| **v).count();
        assert_eq!(polys, visible);
        assert!(polys < mesh.faces.len());
        assert!(a.ends_with("</svg>\n"));
        assert!(!a.contains("-0.000000"));
    }

    #[test]
    fn negative_zero_is_normalized() {
        assert_eq!(f6(-0.0), "0.000000");
        assert_eq!(f6(-1e-9), "0.000000");
        assert_eq!(f6(1.25), "1.250000");
    }
}
