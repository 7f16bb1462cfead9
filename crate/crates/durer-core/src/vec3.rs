//! Minimal 3-vector arithmetic for mesh and camera code.

use core::ops::{Add, Mul, Neg, Sub};

use crate::math::{acos, sin, sin_cos, sqrt};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        sqrt(self.dot(self))
    }

    /// Unit vector in the same direction, or `None` for (near) zero input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > f64::MIN_POSITIVE && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, k: f64) -> Vec3 {
        Vec3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Rotation matrix (row-major) for a rotation vector (axis · angle in radians).
pub fn rotation_from_vector(r: Vec3) -> [[f64; 3]; 3] {
    let theta = r.norm();
    if theta < 1e-12 {
        // first-order expansion keeps the map smooth through zero
        return [[1.0, -r.z, r.y], [r.z, 1.0, -r.x], [-r.y, r.x, 1.0]];
    }
    let k = r * (1.0 / theta);
    let (s, c) = sin_cos(theta);
    let v = 1.0 - c;
    [
        [c + k.x * k.x * v, k.x * k.y * v - k.z * s, k.x * k.z * v + k.y * s],
        [k.y * k.x * v + k.z * s, c + k.y * k.y * v, k.y * k.z * v - k.x * s],
        [k.z * k.x * v - k.y * s, k.z * k.y * v + k.x * s, c + k.z * k.z * v],
    ]
}

/// Rotation vector of a proper rotation matrix (inverse of [`rotation_from_vector`]).
pub fn rotation_to_vector(m: &[[f64; 3]; 3]) -> Vec3 {
    let trace = m[0][0] + m[1][1] + m[2][2];
    let cos_t = ((trace - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = acos(cos_t);
    let w = Vec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]);
    if theta < 1e-9 {
        return w * 0.5;
    }
    if core::f64::consts::PI - theta > 1e-6 {
        return w * (theta / (2.0 * sin(theta)));
    }
    // near π: axis from the symmetric part, sign fixed by the skew part
    let xx = sqrt(((m[0][0] + 1.0) * 0.5).max(0.0));
    let yy = sqrt(((m[1][1] + 1.0) * 0.5).max(0.0));
    let zz = sqrt(((m[2][2] + 1.0) * 0.5).max(0.0));
    let mut axis = if xx >= yy && xx >= zz {
        Vec3::new(xx, (m[0][1] + m[1][0]) / (4.0 * xx), (m[0][2] + m[2][0]) / (4.0 * xx))
    } else if yy >= zz {
        Vec3::new((m[0][1] + m[1][0]) / (4.0 * yy), yy, (m[1][2] + m[2][1]) / (4.0 * yy))
    } else {
        Vec3::new((m[0][2] + m[2][0]) / (4.0 * zz), (m[1][2] + m[2][1]) / (4.0 * zz), zz)
    };
    if axis.dot(w) < 0.0 {
        axis = -axis;
    }
    axis.normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0)) * theta
}

pub fn mat_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
        m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
        m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
    )
}

pub fn mat_t_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    Vec3::new(
        m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
        m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
        m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z,
    )
}
