//! Homogeneous plane geometry: points, lines, homographies, cross ratios.
//!
//! Points and lines are scale-equivalent triples. Comparisons normalize to
//! unit Euclidean norm with the first nonzero coordinate positive and then
//! compare componentwise at [`EQUIVALENCE_TOL`].

use alloc::vec::Vec;
use thiserror::Error;

use crate::math::{atan2, cos, hypot, sin, sin_cos, sqrt};
use crate::vec3::Vec3;

/// Relative tolerance for scale-equivalence and coincidence tests.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

/// Relative tolerance on `|w|` below which a point counts as ideal.
pub const IDEAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProjectiveError {
    #[error("homogeneous coordinates must not all be zero (and must be finite)")]
    ZeroVector,
    #[error("points coincide; no unique line through them")]
    CoincidentPoints,
    #[error("lines coincide; no unique intersection point")]
    CoincidentLines,
    #[error("points are not collinear (defect {defect:.3e} > tolerance {tolerance:.3e})")]
    NotCollinear { defect: f64, tolerance: f64 },
    #[error("three or more points of the quadruple coincide")]
    DegenerateQuadruple,
    #[error("homography matrix is singular")]
    SingularHomography,
    #[error("too few points: need {needed}, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

fn normalize3(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if !(n > 0.0) || !n.is_finite() {
        return None;
    }
    let mut out = [v[0] / n, v[1] / n, v[2] / n];
    let first = out.iter().copied().find(|c| c.abs() > EQUIVALENCE_TOL).unwrap_or(0.0);
    if first < 0.0 {
        out.iter_mut().for_each(|c| *c = -*c);
    }
    Some(out)
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn equivalent3(a: [f64; 3], b: [f64; 3]) -> bool {
    match (normalize3(a), normalize3(b)) {
        (Some(a), Some(b)) => a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= EQUIVALENCE_TOL),
        _ => false,
    }
}

/// A point of the projective plane, `(x, y, w)` up to scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HPoint2 {
    coords: [f64; 3],
}

impl HPoint2 {
    pub fn new(x: f64, y: f64, w: f64) -> Result<Self, ProjectiveError> {
        let coords = [x, y, w];
        if coords.iter().any(|c| !c.is_finite()) || coords.iter().all(|c| *c == 0.0) {
            return Err(ProjectiveError::ZeroVector);
        }
        Ok(Self { coords })
    }

    /// Finite point with Euclidean coordinates `(x, y)`.
    pub fn finite(x: f64, y: f64) -> Self {
        Self { coords: [x, y, 1.0] }
    }

    /// Ideal point in direction `(dx, dy)`.
    pub fn ideal(dx: f64, dy: f64) -> Result<Self, ProjectiveError> {
        Self::new(dx, dy, 0.0)
    }

    pub fn coords(&self) -> [f64; 3] {
        self.coords
    }

    pub fn w(&self) -> f64 {
        self.coords[2]
    }

    pub fn is_ideal(&self) -> bool {
        let n = sqrt(dot3(self.coords, self.coords));
        self.coords[2].abs() <= IDEAL_TOL * n
    }

    /// Euclidean coordinates, or `None` for an ideal point.
    pub fn to_euclidean(&self) -> Option<[f64; 2]> {
        if self.is_ideal() {
            None
        } else {
            Some([self.coords[0] / self.coords[2], self.coords[1] / self.coords[2]])
        }
    }

    /// Unit-norm representative with the first nonzero coordinate positive.
    pub fn normalized(&self) -> [f64; 3] {
        normalize3(self.coords).expect("HPoint2 is never the zero vector")
    }

    pub fn is_equivalent(&self, other: &HPoint2) -> bool {
        equivalent3(self.coords, other.coords)
    }
}

/// A point of projective 3-space, `(x, y, z, w)` up to scale; `w = 0` is a direction.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HPoint3 {
    coords: [f64; 4],
}

impl HPoint3 {
    pub fn new(x: f64, y: f64, z: f64, w: f64) -> Result<Self, ProjectiveError> {
        let coords = [x, y, z, w];
        if coords.iter().any(|c| !c.is_finite()) || coords.iter().all(|c| *c == 0.0) {
            return Err(ProjectiveError::ZeroVector);
        }
        Ok(Self { coords })
    }

    pub fn finite(p: Vec3) -> Self {
        Self { coords: [p.x, p.y, p.z, 1.0] }
    }

    pub fn direction(d: Vec3) -> Result<Self, ProjectiveError> {
        Self::new(d.x, d.y, d.z, 0.0)
    }

    pub fn coords(&self) -> [f64; 4] {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords[3] != 0.0
    }

    pub fn to_euclidean(&self) -> Option<Vec3> {
        let w = self.coords[3];
        (w != 0.0).then(|| Vec3::new(self.coords[0] / w, self.coords[1] / w, self.coords[2] / w))
    }
}

/// A line `a·x + b·y + c·w = 0`, up to scale.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HLine2 {
    coeffs: [f64; 3],
}

impl HLine2 {
    /// The line at infinity.
    pub const IDEAL: HLine2 = HLine2 { coeffs: [0.0, 0.0, 1.0] };

    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, ProjectiveError> {
        let coeffs = [a, b, c];
        if coeffs.iter().any(|v| !v.is_finite()) || coeffs.iter().all(|v| *v == 0.0) {
            return Err(ProjectiveError::ZeroVector);
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> [f64; 3] {
        self.coeffs
    }

    pub fn normalized(&self) -> [f64; 3] {
        normalize3(self.coeffs).expect("HLine2 is never the zero vector")
    }

    pub fn is_equivalent(&self, other: &HLine2) -> bool {
        equivalent3(self.coeffs, other.coeffs)
    }

    pub fn is_ideal(&self) -> bool {
        let n = sqrt(dot3(self.coeffs, self.coeffs));
        hypot(self.coeffs[0], self.coeffs[1]) <= IDEAL_TOL * n
    }

    /// Unit direction `(dx, dy)` of a non-ideal line.
    pub fn direction(&self) -> Option<[f64; 2]> {
        let [a, b, _] = self.coeffs;
        let n = hypot(a, b);
        if self.is_ideal() {
            None
        } else {
            Some([-b / n, a / n])
        }
    }

    /// Signed distance of a finite point from the line, in the point's units.
    pub fn signed_distance(&self, p: [f64; 2]) -> Option<f64> {
        let [a, b, c] = self.coeffs;
        let n = hypot(a, b);
        if self.is_ideal() {
            None
        } else {
            Some((a * p[0] + b * p[1] + c) / n)
        }
    }

    /// Incidence residual `l·p` for unit-normalized `l` and `p`.
    pub fn incidence(&self, p: &HPoint2) -> f64 {
        dot3(self.normalized(), p.normalized())
    }
}

/// The line through two distinct points.
pub fn join(p: &HPoint2, q: &HPoint2) -> Result<HLine2, ProjectiveError> {
    let l = cross3(p.normalized(), q.normalized());
    if sqrt(dot3(l, l)) <= EQUIVALENCE_TOL {
        return Err(ProjectiveError::CoincidentPoints);
    }
    // recompute from raw coordinates for accuracy; the gate above is scale-free
    HLine2::new_unchecked(cross3(p.coords, q.coords))
}

/// The intersection of two distinct lines; ideal when they are parallel.
pub fn meet(l: &HLine2, m: &HLine2) -> Result<HPoint2, ProjectiveError> {
    let p = cross3(l.normalized(), m.normalized());
    if sqrt(dot3(p, p)) <= EQUIVALENCE_TOL {
        return Err(ProjectiveError::CoincidentLines);
    }
    let raw = cross3(l.coeffs, m.coeffs);
    HPoint2::new(raw[0], raw[1], raw[2]).or(HPoint2::new(p[0], p[1], p[2]))
}

impl HLine2 {
    fn new_unchecked(c: [f64; 3]) -> Result<Self, ProjectiveError> {
        Self::new(c[0], c[1], c[2])
    }
}

/// Value of a cross ratio. A quadruple with `B = C` or `A = D` has no finite
/// value and is reported as [`CrossRatio::Infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CrossRatio {
    Finite(f64),
    Infinite,
}

impl CrossRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            CrossRatio::Finite(v) => Some(v),
            CrossRatio::Infinite => None,
        }
    }
}

struct Frame {
    origin: [f64; 2],
    dir: [f64; 2],
    spread: f64,
}

fn fit_line(points: &[[f64; 2]]) -> Frame {
    let n = points.len() as f64;
    let cx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    let mut spread: f64 = 0.0;
    for p in points {
        let (dx, dy) = (p[0] - cx, p[1] - cy);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
        spread = spread.max(hypot(dx, dy));
    }
    let theta = 0.5 * atan2(2.0 * sxy, sxx - syy);
    Frame {
        origin: [cx, cy],
        dir: [cos(theta), sin(theta)],
        spread,
    }
}

/// Largest perpendicular distance of the points from their total-least-squares
/// line, in the points' own units. Zero iff the points are exactly collinear.
pub fn collinearity_defect(points: &[HPoint2]) -> Result<f64, ProjectiveError> {
    let finite: Vec<[f64; 2]> = points.iter().filter_map(HPoint2::to_euclidean).collect();
    if finite.len() < 3 {
        return Err(ProjectiveError::TooFewPoints { needed: 3, got: finite.len() });
    }
    let frame = fit_line(&finite);
    let normal = [-frame.dir[1], frame.dir[0]];
    Ok(finite
        .iter()
        .map(|p| ((p[0] - frame.origin[0]) * normal[0] + (p[1] - frame.origin[1]) * normal[1]).abs())
        .fold(0.0, f64::max))
}

/// Signed cross ratio `(AC/BC)·(BD/AD)` with the synthetic-data tolerance
/// `1e-9 · max(1, spread)`.
pub fn cross_ratio(
    a: &HPoint2,
    b: &HPoint2,
    c: &HPoint2,
    d: &HPoint2,
) -> Result<CrossRatio, ProjectiveError> {
    let finite: Vec<[f64; 2]> = [a, b, c, d].iter().filter_map(|p| p.to_euclidean()).collect();
    let spread = if finite.is_empty() { 1.0 } else { fit_line(&finite).spread };
    cross_ratio_with_tolerance(a, b, c, d, 1e-9 * spread.max(1.0))
}

/// Signed cross ratio `(AC/BC)·(BD/AD)` computed from homogeneous parameters
/// along the common line, so ideal points are handled like any other.
///
/// `tolerance` is in the points' units and bounds the distance of each point
/// from the fitted line. Coincidence is judged at `1e-9 · max(1, spread)`.
pub fn cross_ratio_with_tolerance(
    a: &HPoint2,
    b: &HPoint2,
    c: &HPoint2,
    d: &HPoint2,
    tolerance: f64,
) -> Result<CrossRatio, ProjectiveError> {
    let pts = [a, b, c, d];
    let finite: Vec<[f64; 2]> = pts.iter().filter_map(|p| p.to_euclidean()).collect();
    let ideal_dir = |p: &HPoint2| -> [f64; 2] {
        let [x, y, _] = p.coords;
        let n = hypot(x, y);
        [x / n, y / n]
    };

    // Params are P^1 coordinates (s, t); finite points have t = 1.
    let mut params = [[0.0f64; 2]; 4];
    let mut coincidence = EQUIVALENCE_TOL;
    if finite.is_empty() {
        // all four on the ideal line
        for (i, p) in pts.iter().enumerate() {
            params[i] = ideal_dir(p);
        }
    } else {
        let fitted = fit_line(&finite);
        coincidence = 1e-9 * fitted.spread.max(1.0);
        let frame = if fitted.spread > coincidence {
            fitted
        } else if let Some(p) = pts.iter().find(|p| p.is_ideal()) {
            Frame { origin: fitted.origin, dir: ideal_dir(p), spread: fitted.spread }
        } else {
            return Err(ProjectiveError::DegenerateQuadruple);
        };
        let normal = [-frame.dir[1], frame.dir[0]];
        let scale = frame.spread.max(1.0);
        let mut defect: f64 = 0.0;
        for (i, p) in pts.iter().enumerate() {
            match p.to_euclidean() {
                Some(e) => {
                    let (dx, dy) = (e[0] - frame.origin[0], e[1] - frame.origin[1]);
                    defect = defect.max((dx * normal[0] + dy * normal[1]).abs());
                    params[i] = [dx * frame.dir[0] + dy * frame.dir[1], 1.0];
                }
                None => {
                    let u = ideal_dir(p);
                    defect = defect.max((u[0] * normal[0] + u[1] * normal[1]).abs() * scale);
                    params[i] = [u[0] * frame.dir[0] + u[1] * frame.dir[1], 0.0];
                }
            }
        }
        if defect > tolerance {
            return Err(ProjectiveError::NotCollinear { defect, tolerance });
        }
    }

    let ideal = [a.is_ideal(), b.is_ideal(), c.is_ideal(), d.is_ideal()];
    let coincide = |i: usize, j: usize| -> bool {
        let (pi, pj) = (params[i], params[j]);
        if finite.is_empty() {
            return (pi[0] * pj[1] - pj[0] * pi[1]).abs() <= EQUIVALENCE_TOL;
        }
        match (ideal[i], ideal[j]) {
            // a finite line carries exactly one ideal point
            (true, true) => true,
            (false, false) => (pi[0] - pj[0]).abs() <= coincidence,
            _ => false,
        }
    };
    let mut pairs = Vec::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            if coincide(i, j) {
                pairs.push((i, j));
            }
        }
    }
    match pairs.len() {
        0 => {}
        1 => {
            let (i, j) = pairs[0];
            params[j] = params[i];
        }
        _ => return Err(ProjectiveError::DegenerateQuadruple),
    }

    let det = |i: usize, j: usize| params[i][0] * params[j][1] - params[j][0] * params[i][1];
    let (ia, ib, ic, id) = (0, 1, 2, 3);
    let num = det(ia, ic) * det(ib, id);
    let den = det(ib, ic) * det(ia, id);
    if den == 0.0 {
        Ok(CrossRatio::Infinite)
    } else {
        Ok(CrossRatio::Finite(num / den))
    }
}

/// A nonsingular 3×3 plane projective transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Homography2 {
    m: [[f64; 3]; 3],
}

impl Homography2 {
    pub const IDENTITY: Homography2 = Homography2 {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Rejects matrices with `|det| ≤ 1e-12 · ‖M‖_F³`.
    pub fn new(m: [[f64; 3]; 3]) -> Result<Self, ProjectiveError> {
        let frob = m.iter().flatten().map(|v| v * v).sum::<f64>();
        let frob = sqrt(frob);
        let rows = [Vec3::from_array(m[0]), Vec3::from_array(m[1]), Vec3::from_array(m[2])];
        let det = rows[0].dot(rows[1].cross(rows[2]));
        if !det.is_finite() || det.abs() <= 1e-12 * frob * frob * frob {
            return Err(ProjectiveError::SingularHomography);
        }
        Ok(Self { m })
    }

    /// Rotation by `angle` (radians), uniform `scale`, then translation.
    pub fn similarity(scale: f64, angle: f64, tx: f64, ty: f64) -> Result<Self, ProjectiveError> {
        let (s, c) = sin_cos(angle);
        Self::new([[scale * c, -scale * s, tx], [scale * s, scale * c, ty], [0.0, 0.0, 1.0]])
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    pub fn apply(&self, p: &HPoint2) -> HPoint2 {
        let v = crate::vec3::mat_vec(&self.m, Vec3::from_array(p.coords));
        HPoint2 { coords: v.to_array() }
    }

    pub fn compose(&self, then: &Homography2) -> Homography2 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| then.m[i][k] * self.m[k][j]).sum();
            }
        }
        Homography2 { m: out }
    }
}

/// `h · p`, validating the matrix first.
pub fn apply_homography(h: [[f64; 3]; 3], p: &HPoint2) -> Result<HPoint2, ProjectiveError> {
    Ok(Homography2::new(h)?.apply(p))
}
