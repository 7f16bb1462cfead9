//! Plain-text mesh export.
//!
//! ```text
//! durer-mesh 1
//! alpha 78.000000000000
//! lambda 1.611111111111
//! vertex P1 0.798635510047 0.000000000000 0.601815023152
//! ...
//! face F1 pentagon P1 R1 R2 P2 Q3
//! ```
//!
//! One record per line, whitespace separated, `#` starts a comment. `lambda`
//! is `none` for an untruncated solid. Face cycles are counter-clockwise
//! seen from outside. Coordinates use 12 decimals.

use std::fmt::Write;

use durer_core::solid::{Face, FaceKind, SolidMesh, Vertex};
use durer_core::Vec3;

use crate::error::{Error, Result};

pub const MESH_FORMAT_VERSION: u32 = 1;

fn kind_name(k: FaceKind) -> &'static str {
    match k {
        FaceKind::Rhombus => "rhombus",
        FaceKind::Pentagon => "pentagon",
        FaceKind::Triangle => "triangle",
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.12}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn write_mesh(mesh: &SolidMesh) -> String {
    let mut out = String::new();
    writeln!(out, "durer-mesh {MESH_FORMAT_VERSION}").unwrap();
    writeln!(out, "alpha {}", num(mesh.alpha_deg)).unwrap();
    match mesh.lambda {
        Some(l) => writeln!(out, "lambda {}", num(l)).unwrap(),
        None => writeln!(out, "lambda none").unwrap(),
    }
    for v in &mesh.vertices {
        let p = v.position;
        writeln!(out, "vertex {} {} {} {}", v.label, num(p.x), num(p.y), num(p.z)).unwrap();
    }
    for f in &mesh.faces {
        let labels: Vec<&str> = mesh.face_labels(f);
        writeln!(out, "face {} {} {}", f.id, kind_name(f.kind), labels.join(" ")).unwrap();
    }
    out
}

/// Parsed mesh text: shape header plus vertices and faces. Generators are
/// not stored in the file and come back as zero vectors.
pub fn parse_mesh(text: &str) -> Result<SolidMesh> {
    let bad = |line: usize, msg: &str| Error::Schema(format!("mesh line {line}: {msg}"));
    let mut alpha = None;
    let mut lambda = None;
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut faces = Vec::new();
    let mut header = false;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let n = n + 1;
        let mut tok = line.split_whitespace();
        let key = tok.next().unwrap();
        let rest: Vec<&str> = tok.collect();
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(n, &format!("bad number {s:?}")));
        match key {
            "durer-mesh" => {
                if rest != [MESH_FORMAT_VERSION.to_string().as_str()] {
                    return Err(bad(n, "unsupported version"));
                }
                header = true;
            }
            _ if !header => return Err(bad(n, "missing durer-mesh header")),
            "alpha" if rest.len() == 1 => alpha = Some(float(rest[0])?),
            "lambda" if rest.len() == 1 => lambda = if rest[0] == "none" { Some(None) } else { Some(Some(float(rest[0])?)) },
            "vertex" if rest.len() == 4 => {
                if vertices.iter().any(|v| v.label == rest[0]) {
                    return Err(bad(n, "duplicate vertex"));
                }
                let position = Vec3::new(float(rest[1])?, float(rest[2])?, float(rest[3])?);
                vertices.push(Vertex { label: rest[0].to_string(), position });
            }
            "face" if rest.len() >= 5 => {
                let kind = match rest[1] {
                    "rhombus" => FaceKind::Rhombus,
                    "pentagon" => FaceKind::Pentagon,
                    "triangle" => FaceKind::Triangle,
                    other => return Err(bad(n, &format!("unknown face kind {other}"))),
                };
                let cycle = rest[2..]
                    .iter()
                    .map(|l| vertices.iter().position(|v| v.label == *l).ok_or_else(|| bad(n, &format!("unknown vertex {l}"))))
                    .collect::<Result<Vec<_>>>()?;
                faces.push(Face { id: rest[0].to_string(), kind, cycle });
            }
            _ => return Err(bad(n, "unrecognized record")),
        }
    }
    let alpha_deg = alpha.ok_or_else(|| Error::Schema("mesh: missing alpha".into()))?;
    let lambda = lambda.ok_or_else(|| Error::Schema("mesh: missing lambda".into()))?;
    let cut = lambda.map(|l| 1.0 - 1.0 / (2.0 * l - 1.0));
    Ok(SolidMesh { vertices, faces, generators: [Vec3::ZERO; 3], alpha_deg, cut, lambda })
}
