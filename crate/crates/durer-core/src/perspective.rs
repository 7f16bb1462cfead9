//! Central projection onto a picture plane.
//!
//! The camera basis is right-handed: `right`, `down`, `forward` (= look).
//! Pixel x grows to the right and pixel y grows downward, matching image
//! tools, so picked coordinates can be used as-is.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::projective::{HPoint2, HPoint3};
use crate::solid::{FaceKind, SolidMesh};
use crate::vec3::{mat_t_vec, mat_vec, rotation_from_vector, rotation_to_vector, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CameraError {
    #[error("point is behind the eye")]
    BehindEye,
    #[error("point coincides with the eye")]
    AtEye,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("invalid camera: {0}")]
    Invalid(&'static str),
}

/// Pinhole camera: eye position, orientation, focal distance to the picture
/// plane, and the plane-to-pixel map `pixel = scale · plane + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Camera {
    /// World → camera rotation; rows are right, down, forward.
    rotation: [[f64; 3]; 3],
    eye: Vec3,
    focal: f64,
    scale: f64,
    offset: [f64; 2],
}

impl Camera {
    /// Camera at `eye` looking along `look`, with `up` fixing the roll.
    pub fn new(eye: Vec3, look: Vec3, up: Vec3, focal: f64, scale: f64, offset: [f64; 2]) -> Result<Self, CameraError> {
        if !(focal > 0.0) || !focal.is_finite() {
            return Err(CameraError::Invalid("focal distance must be positive"));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(CameraError::Invalid("pixel scale must be positive"));
        }
        let forward = look.normalized().ok_or(CameraError::Invalid("look direction is zero"))?;
        let up = up.normalized().ok_or(CameraError::Invalid("up direction is zero"))?;
        let right = forward
            .cross(up)
            .normalized()
            .filter(|r| r.norm() > 0.5 && forward.cross(up).norm() > 1e-9)
            .ok_or(CameraError::Invalid("up is parallel to look"))?;
        let down = forward.cross(right);
        Ok(Self {
            rotation: [right.to_array(), down.to_array(), forward.to_array()],
            eye,
            focal,
            scale,
            offset,
        })
    }

    pub fn look_at(eye: Vec3, target: Vec3, up: Vec3, focal: f64, scale: f64, offset: [f64; 2]) -> Result<Self, CameraError> {
        Self::new(eye, target - eye, up, focal, scale, offset)
    }

    /// Pose form: camera coordinates are `R(rotvec)·X + translation`.
    pub fn from_pose(rotvec: Vec3, translation: Vec3, focal: f64, scale: f64, offset: [f64; 2]) -> Result<Self, CameraError> {
        if !(focal > 0.0) || !(scale > 0.0) {
            return Err(CameraError::Invalid("focal and scale must be positive"));
        }
        let rotation = rotation_from_vector(rotvec);
        let eye = -mat_t_vec(&rotation, translation);
        Ok(Self { rotation, eye, focal, scale, offset })
    }

    /// `(rotvec, translation)` with `from_pose(rotvec, translation, ..) == self`.
    pub fn pose(&self) -> (Vec3, Vec3) {
        let rotvec = rotation_to_vector(&self.rotation);
        let translation = -mat_vec(&self.rotation, self.eye);
        (rotvec, translation)
    }

    pub fn eye(&self) -> Vec3 {
        self.eye
    }

    pub fn look(&self) -> Vec3 {
        Vec3::from_array(self.rotation[2])
    }

    pub fn up(&self) -> Vec3 {
        -Vec3::from_array(self.rotation[1])
    }

    pub fn right(&self) -> Vec3 {
        Vec3::from_array(self.rotation[0])
    }

    pub fn focal(&self) -> f64 {
        self.focal
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> [f64; 2] {
        self.offset
    }

    /// Focal length in pixels, `focal · scale`.
    pub fn focal_px(&self) -> f64 {
        self.focal * self.scale
    }

    pub fn principal_point(&self) -> [f64; 2] {
        self.offset
    }

    /// Signed distance of a point in front of the eye along the view axis.
    pub fn depth(&self, p: Vec3) -> f64 {
        (p - self.eye).dot(self.look())
    }

    fn image_of(&self, c: Vec3) -> [f64; 3] {
        let f = self.focal_px();
        [f * c.x + self.offset[0] * c.z, f * c.y + self.offset[1] * c.z, c.z]
    }

    /// Homogeneous image of a finite point or a direction (`w = 0`).
    pub fn project(&self, p: &HPoint3) -> Result<HPoint2, CameraError> {
        let [x, y, z, w] = p.coords();
        let d = Vec3::new(x, y, z) - self.eye * w;
        let c = mat_vec(&self.rotation, d);
        if w != 0.0 {
            let scale = Vec3::new(x, y, z).norm().max(self.eye.norm() * w.abs()).max(w.abs());
            if d.norm() <= 1e-12 * scale {
                return Err(CameraError::AtEye);
            }
            if c.z / w <= 1e-12 * d.norm() / w.abs() {
                return Err(CameraError::BehindEye);
            }
        }
        let h = self.image_of(c);
        HPoint2::new(h[0], h[1], h[2]).map_err(|_| CameraError::AtEye)
    }

    /// Pixel coordinates of a finite point.
    pub fn project_point(&self, p: Vec3) -> Result<[f64; 2], CameraError> {
        let img = self.project(&HPoint3::finite(p))?;
        let [x, y, w] = img.coords();
        Ok([x / w, y / w])
    }

    /// Image of the ideal point of `direction`; ideal iff the direction is
    /// parallel to the picture plane.
    pub fn vanishing_point(&self, direction: Vec3) -> Result<HPoint2, CameraError> {
        if direction.normalized().is_none() {
            return Err(CameraError::ZeroDirection);
        }
        let c = mat_vec(&self.rotation, direction);
        let h = self.image_of(c);
        HPoint2::new(h[0], h[1], h[2]).map_err(|_| CameraError::ZeroDirection)
    }

    /// Per-face visibility for a convex mesh (back-face culling).
    pub fn visible_faces(&self, mesh: &SolidMesh) -> Vec<bool> {
        mesh.faces
            .iter()
            .map(|f| {
                let p = mesh.vertices[f.cycle[0]].position;
                mesh.face_normal(f).dot(self.eye - p) > 0.0
            })
            .collect()
    }
}

/// Picked-point view of a mesh as an annotator would record it: pixel
/// positions of every vertex on a visible face, and the visible pentagons
/// as canonical 5-label cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticView {
    pub points: Vec<(String, [f64; 2])>,
    pub faces: Vec<(String, [String; 5])>,
    pub visible: Vec<bool>,
}

pub fn synthetic_view(mesh: &SolidMesh, camera: &Camera) -> Result<SyntheticView, CameraError> {
    let visible = camera.visible_faces(mesh);
    let mut used = alloc::vec![false; mesh.vertices.len()];
    let mut faces = Vec::new();
    for (face, vis) in mesh.faces.iter().zip(&visible) {
        if !vis {
            continue;
        }
        for &i in &face.cycle {
            used[i] = true;
        }
        if face.kind == FaceKind::Pentagon {
            let labels: [String; 5] = core::array::from_fn(|k| mesh.vertices[face.cycle[k]].label.clone());
            faces.push((face.id.clone(), labels));
        }
    }
    let mut points = Vec::new();
    for (v, keep) in mesh.vertices.iter().zip(used) {
        if keep {
            points.push((v.label.clone(), camera.project_point(v.position)?));
        }
    }
    Ok(SyntheticView { points, faces, visible })
}
