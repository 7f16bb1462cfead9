//! The truncated rhombic face and the truncated rhombohedron.
//!
//! A face is fixed by the shape pair (α, λ): α is the acute rhombus angle
//! at the apexes (on the long diagonal) and λ the cross ratio of the
//! centerline quadruple A, B, C, D (cropped apex, truncation point, center,
//! far apex). The truncation ratio r = BC/AC satisfies λ = (1 + 1/r)/2.
//!
//! Canonical face frame: unit rhombus side, center at the origin, cropped
//! apex up. Canonical vertex order is
//! `left, truncation-left, truncation-right, right, bottom`.
//!
//! Solid frame: bottom apex at the origin, main diagonal along +z, first
//! generator at azimuth 0°.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::math::{atan, cos, sin, sqrt, tan, to_degrees, to_radians};
use crate::projective::{cross_ratio, join, meet, CrossRatio, HPoint2, ProjectiveError};
use crate::vec3::Vec3;
use crate::PHI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolidError {
    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("mesh is already truncated")]
    AlreadyTruncated,
    #[error("mesh is not truncated")]
    NotTruncated,
    #[error("face {0} is not a pentagon")]
    NotPentagon(String),
    #[error("no face with id {0}")]
    UnknownFace(String),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
}

fn out_of_range(what: &'static str, value: f64) -> SolidError {
    SolidError::OutOfRange { what, value }
}

/// r = BC/AC = 1/(2λ − 1).
pub fn truncation_ratio(lambda: f64) -> Result<f64, SolidError> {
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(out_of_range("lambda", lambda));
    }
    Ok(1.0 / (2.0 * lambda - 1.0))
}

/// λ = (1 + 1/r)/2, the inverse of [`truncation_ratio`].
pub fn cross_ratio_of_truncation(r: f64) -> Result<f64, SolidError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(out_of_range("truncation ratio", r));
    }
    Ok(0.5 * (1.0 + 1.0 / r))
}

/// Shape pair (α, λ). `0 < α ≤ 90°`, `λ ≥ 1`; λ = 1 is the untruncated rhombus.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FaceShape {
    alpha_deg: f64,
    lambda: f64,
}

impl FaceShape {
    pub fn new(alpha_deg: f64, lambda: f64) -> Result<Self, SolidError> {
        if !(alpha_deg > 0.0 && alpha_deg <= 90.0) {
            return Err(out_of_range("alpha", alpha_deg));
        }
        truncation_ratio(lambda)?;
        Ok(Self { alpha_deg, lambda })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_deg
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn truncation_ratio(&self) -> f64 {
        1.0 / (2.0 * self.lambda - 1.0)
    }
}

/// Planar pentagon in canonical order and frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PentagonFace {
    vertices: [[f64; 2]; 5],
    alpha_deg: f64,
    ratio: f64,
}

impl PentagonFace {
    /// Pentagon of a rhombus with apex angle `alpha_deg` cut at ratio `r ∈ [0, 1]`.
    /// `r = 0` cuts through the center and is accepted as a limit case.
    pub fn from_truncation_ratio(alpha_deg: f64, r: f64) -> Result<Self, SolidError> {
        if !(alpha_deg > 0.0 && alpha_deg < 180.0) {
            return Err(out_of_range("alpha", alpha_deg));
        }
        if !(0.0..=1.0).contains(&r) {
            return Err(out_of_range("truncation ratio", r));
        }
        let half = to_radians(alpha_deg) * 0.5;
        let (w, h) = (sin(half), cos(half));
        Ok(Self {
            vertices: [[-w, 0.0], [-(1.0 - r) * w, r * h], [(1.0 - r) * w, r * h], [w, 0.0], [0.0, -h]],
            alpha_deg,
            ratio: r,
        })
    }

    pub fn vertices(&self) -> [[f64; 2]; 5] {
        self.vertices
    }

    pub fn alpha(&self) -> f64 {
        self.alpha_deg
    }

    pub fn truncation_ratio(&self) -> f64 {
        self.ratio
    }

    pub fn half_width(&self) -> f64 {
        self.vertices[3][0]
    }

    pub fn half_height(&self) -> f64 {
        -self.vertices[4][1]
    }

    pub fn truncation_height(&self) -> f64 {
        self.vertices[1][1]
    }

    /// A, B, C, D on the vertical centerline.
    pub fn centerline(&self) -> [[f64; 2]; 4] {
        let h = self.half_height();
        [[0.0, h], [0.0, self.ratio * h], [0.0, 0.0], [0.0, -h]]
    }
}

pub fn pentagon_vertices(shape: &FaceShape) -> PentagonFace {
    PentagonFace::from_truncation_ratio(shape.alpha(), shape.truncation_ratio())
        .expect("FaceShape invariants guarantee a valid pentagon")
}

/// α_φ = 2·arctan(φ/2), λ_φ = φ.
pub fn golden_pentagon() -> FaceShape {
    FaceShape { alpha_deg: to_degrees(2.0 * atan(PHI / 2.0)), lambda: PHI }
}

/// The 45° ray construction inside the golden-rectangle frame (rhombus
/// half-diagonals φ/2 across and 1 up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenConstruction {
    /// Where the 45° ray from the center meets the upper-right rhombus edge.
    pub ray_hit: [f64; 2],
    /// BC/AC read off the construction (the hit height over the half-diagonal 1).
    pub truncation_ratio: f64,
    pub shape: FaceShape,
}

pub fn golden_construction() -> GoldenConstruction {
    // edge: x/(φ/2) + y = 1, ray: y = x
    let half_width = PHI / 2.0;
    let x = 1.0 / (1.0 / half_width + 1.0);
    let shape = golden_pentagon();
    GoldenConstruction {
        ray_hit: [x, x],
        truncation_ratio: x,
        shape,
    }
}

/// Truncation ratio making the pentagon concyclic: r = 1 − 2·cos α,
/// defined for 60° ≤ α ≤ 90°.
pub fn inscribed_truncation_ratio(alpha_deg: f64) -> Result<f64, SolidError> {
    if !(60.0..=90.0).contains(&alpha_deg) {
        return Err(out_of_range("alpha for an inscribed face", alpha_deg));
    }
    Ok((1.0 - 2.0 * cos(to_radians(alpha_deg))).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FaceKind {
    Rhombus,
    Pentagon,
    Triangle,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vertex {
    pub label: String,
    pub position: Vec3,
}

/// Vertex-index cycle, counter-clockwise seen from outside.
///
/// Rhombi are stored as `left, apex, right, far`; pentagons in canonical
/// order `left, truncation-left, truncation-right, right, far`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Face {
    pub id: String,
    pub kind: FaceKind,
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolidMesh {
    pub vertices: Vec<Vertex>,
    pub faces: Vec<Face>,
    pub generators: [Vec3; 3],
    pub alpha_deg: f64,
    /// Cut fraction t along each apex edge, measured from the apex.
    pub cut: Option<f64>,
    pub lambda: Option<f64>,
}

impl SolidMesh {
    pub fn is_truncated(&self) -> bool {
        self.cut.is_some()
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    pub fn position(&self, label: &str) -> Option<Vec3> {
        self.vertex_index(label).map(|i| self.vertices[i].position)
    }

    pub fn face(&self, id: &str) -> Option<&Face> {
        self.faces.iter().find(|f| f.id == id)
    }

    pub fn face_positions(&self, face: &Face) -> Vec<Vec3> {
        face.cycle.iter().map(|&i| self.vertices[i].position).collect()
    }

    /// Undirected edges as sorted index pairs, in first-seen order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for face in &self.faces {
            let n = face.cycle.len();
            for k in 0..n {
                let (a, b) = (face.cycle[k], face.cycle[(k + 1) % n]);
                let e = if a < b { (a, b) } else { (b, a) };
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out
    }

    pub fn centroid(&self) -> Vec3 {
        let sum = self.vertices.iter().fold(Vec3::ZERO, |acc, v| acc + v.position);
        sum * (1.0 / self.vertices.len() as f64)
    }

    /// Outward unit normal of a face.
    pub fn face_normal(&self, face: &Face) -> Vec3 {
        let pts = self.face_positions(face);
        newell_normal(&pts)
    }

    /// Labels of the vertices of a face, in cycle order.
    pub fn face_labels(&self, face: &Face) -> Vec<&str> {
        face.cycle.iter().map(|&i| self.vertices[i].label.as_str()).collect()
    }
}

fn newell_normal(pts: &[Vec3]) -> Vec3 {
    let mut n = Vec3::ZERO;
    for k in 0..pts.len() {
        let (a, b) = (pts[k], pts[(k + 1) % pts.len()]);
        n = n + Vec3::new((a.y - b.y) * (a.z + b.z), (a.z - b.z) * (a.x + b.x), (a.x - b.x) * (a.y + b.y));
    }
    n.normalized().unwrap_or(Vec3::ZERO)
}

/// Unit generators with pairwise angle α, three-fold symmetric about +z.
/// Their polar angle β satisfies cos²β = (2·cos α + 1)/3.
pub fn generators(alpha_deg: f64) -> Result<[Vec3; 3], SolidError> {
    if !(alpha_deg > 0.0 && alpha_deg < 120.0) {
        return Err(out_of_range("alpha", alpha_deg));
    }
    let cos2_beta = (2.0 * cos(to_radians(alpha_deg)) + 1.0) / 3.0;
    let cos_beta = sqrt(cos2_beta);
    let sin_beta = sqrt(1.0 - cos2_beta);
    let mut out = [Vec3::ZERO; 3];
    for (k, g) in out.iter_mut().enumerate() {
        let az = to_radians(120.0 * k as f64);
        *g = Vec3::new(sin_beta * cos(az), sin_beta * sin(az), cos_beta);
    }
    Ok(out)
}

fn push_face(vertices: &[Vertex], faces: &mut Vec<Face>, id: String, kind: FaceKind, mut cycle: Vec<usize>, inside: Vec3) {
    let pts: Vec<Vec3> = cycle.iter().map(|&i| vertices[i].position).collect();
    let n = newell_normal(&pts);
    if n.dot(pts[0] - inside) < 0.0 {
        // reverse while keeping the canonical roles: mirror left ↔ right
        match kind {
            FaceKind::Rhombus => cycle.swap(0, 2),
            FaceKind::Pentagon => {
                cycle.swap(0, 3);
                cycle.swap(1, 2);
            }
            FaceKind::Triangle => cycle.swap(1, 2),
        }
    }
    faces.push(Face { id, kind, cycle });
}

/// Rhombohedron with six congruent rhombic faces of apex angle α.
///
/// Vertices: `N` (bottom apex), `P1..P3` = e_k, `Q1..Q3` = s − e_k,
/// `Z` = s = e1 + e2 + e3. Faces `F1..F3` meet at `N`, `F4..F6` at `Z`.
pub fn build_rhombohedron(alpha_deg: f64) -> Result<SolidMesh, SolidError> {
    let e = generators(alpha_deg)?;
    let s = e[0] + e[1] + e[2];
    let mut vertices = Vec::with_capacity(8);
    vertices.push(Vertex { label: "N".into(), position: Vec3::ZERO });
    for k in 0..3 {
        vertices.push(Vertex { label: format!("P{}", k + 1), position: e[k] });
    }
    for k in 0..3 {
        vertices.push(Vertex { label: format!("Q{}", k + 1), position: s - e[k] });
    }
    vertices.push(Vertex { label: "Z".into(), position: s });
    let (n_idx, p, q, z_idx) = (0usize, |k: usize| 1 + k, |k: usize| 4 + k, 7usize);

    let inside = s * 0.5;
    let mut faces = Vec::with_capacity(6);
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        push_face(&vertices, &mut faces, format!("F{}", k + 1), FaceKind::Rhombus, alloc::vec![p(i), n_idx, p(j), q(k)], inside);
    }
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        push_face(&vertices, &mut faces, format!("F{}", k + 4), FaceKind::Rhombus, alloc::vec![q(i), z_idx, q(j), p(k)], inside);
    }
    Ok(SolidMesh { vertices, faces, generators: e, alpha_deg, cut: None, lambda: None })
}

/// Vertex labels of a truncated solid, in storage order.
pub const TRUNCATED_LABELS: [&str; 12] = ["P1", "P2", "P3", "Q1", "Q2", "Q3", "R1", "R2", "R3", "S1", "S2", "S3"];

/// Vertex positions of the truncated solid in [`TRUNCATED_LABELS`] order,
/// for generators `e` and apex cut fraction `t`.
pub fn truncated_positions(e: &[Vec3; 3], t: f64) -> [Vec3; 12] {
    let s = e[0] + e[1] + e[2];
    core::array::from_fn(|i| {
        let k = i % 3;
        match i / 3 {
            0 => e[k],
            1 => s - e[k],
            2 => e[k] * t,
            _ => s - e[k] * t,
        }
    })
}

/// Crops both apexes with horizontal planes so every face has centerline
/// cross ratio λ. Each apex edge is cut at t = (2λ − 2)/(2λ − 1) from the apex.
///
/// Adds `R1..R3` = t·e_k and `S1..S3` = s − t·e_k; triangles `T0` (bottom)
/// and `T1` (top).
pub fn truncate(mesh: &SolidMesh, lambda: f64) -> Result<SolidMesh, SolidError> {
    if mesh.is_truncated() {
        return Err(SolidError::AlreadyTruncated);
    }
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(out_of_range("lambda", lambda));
    }
    let t = 1.0 - truncation_ratio(lambda)?;
    let e = mesh.generators;
    let s = e[0] + e[1] + e[2];
    let vertices: Vec<Vertex> = TRUNCATED_LABELS
        .iter()
        .zip(truncated_positions(&e, t))
        .map(|(label, position)| Vertex { label: String::from(*label), position })
        .collect();
    let (p, q, r, sv) = (|k: usize| k, |k: usize| 3 + k, |k: usize| 6 + k, |k: usize| 9 + k);

    let inside = s * 0.5;
    let mut faces = Vec::with_capacity(8);
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        push_face(&vertices, &mut faces, format!("F{}", k + 1), FaceKind::Pentagon, alloc::vec![p(i), r(i), r(j), p(j), q(k)], inside);
    }
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        push_face(&vertices, &mut faces, format!("F{}", k + 4), FaceKind::Pentagon, alloc::vec![q(i), sv(i), sv(j), q(j), p(k)], inside);
    }
    push_face(&vertices, &mut faces, "T0".into(), FaceKind::Triangle, alloc::vec![r(0), r(1), r(2)], inside);
    push_face(&vertices, &mut faces, "T1".into(), FaceKind::Triangle, alloc::vec![sv(0), sv(1), sv(2)], inside);
    Ok(SolidMesh {
        vertices,
        faces,
        generators: e,
        alpha_deg: mesh.alpha_deg,
        cut: Some(t),
        lambda: Some(lambda),
    })
}

/// Centerline quadruple A, B, C, D of a pentagon given in canonical order:
/// A is the meet of the extended cropped sides, D the far vertex, C the meet
/// of A–D with left–right and B the meet of A–D with the truncation edge.
pub fn centerline_points(face: &[HPoint2; 5]) -> Result<[HPoint2; 4], ProjectiveError> {
    let [left, trunc_l, trunc_r, right, far] = face;
    let a = meet(&join(left, trunc_l)?, &join(right, trunc_r)?)?;
    let axis = join(&a, far)?;
    let c = meet(&axis, &join(left, right)?)?;
    let b = meet(&axis, &join(trunc_l, trunc_r)?)?;
    Ok([a, b, c, *far])
}

/// In-plane coordinates of a planar polygon: origin at the first vertex,
/// x along the first edge.
fn planar_coordinates(pts: &[Vec3]) -> Vec<[f64; 2]> {
    let n = newell_normal(pts);
    let u = (pts[1] - pts[0]).normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0));
    let v = n.cross(u);
    pts.iter().map(|p| [(*p - pts[0]).dot(u), (*p - pts[0]).dot(v)]).collect()
}

/// Cross ratio of a pentagonal face, reconstructed purely from its vertices.
pub fn face_cross_ratio_3d(mesh: &SolidMesh, face_id: &str) -> Result<f64, SolidError> {
    let face = mesh.face(face_id).ok_or_else(|| SolidError::UnknownFace(face_id.into()))?;
    if face.kind != FaceKind::Pentagon {
        return Err(SolidError::NotPentagon(face_id.into()));
    }
    let coords = planar_coordinates(&mesh.face_positions(face));
    let pts: [HPoint2; 5] = core::array::from_fn(|k| HPoint2::finite(coords[k][0], coords[k][1]));
    let [a, b, c, d] = centerline_points(&pts)?;
    match cross_ratio(&a, &b, &c, &d)? {
        CrossRatio::Finite(v) => Ok(v),
        CrossRatio::Infinite => Err(out_of_range("face cross ratio", f64::INFINITY)),
    }
}

/// Half-width and truncation-height ratios of one face shape over another,
/// both normalized to a unit vertical half-diagonal.
pub fn shape_proximity(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (alpha_a, r_a) = a;
    let (alpha_b, r_b) = b;
    (tan(to_radians(alpha_a) / 2.0) / tan(to_radians(alpha_b) / 2.0), r_a / r_b)
}
