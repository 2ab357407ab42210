//! Oriented spheres, point spheres and planes as points of the Lie quadric.
//!
//! Spheres in S^n use the chart `(cos ρ, p, sin ρ)`: `p` is the unit center
//! and `ρ` the signed radius. The normal of a sphere with `ρ > 0` points away
//! from its center; `ρ` and `ρ + π` are the two orientations of one sphere.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, raw_inner, LieTransform, LorentzVector};

/// Relative tolerance for `|⟨x,x⟩| ≤ tol·‖x‖²`.
pub const QUADRIC_TOL: f64 = 1e-12;
/// Tolerance for projective equality of normalized representatives.
pub const PROJECTIVE_TOL: f64 = 1e-10;

/// A point `[x]` of the Lie quadric `⟨x,x⟩ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricPoint {
    rep: LorentzVector,
    normalized: bool,
}

impl QuadricPoint {
    pub fn new(rep: LorentzVector, tol: f64) -> Result<Self> {
        let norm2 = rep.norm().powi(2);
        if norm2 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let defect = rep.square().abs() / norm2;
        if defect > tol {
            return Err(Error::OffQuadric(defect));
        }
        Ok(Self { rep, normalized: false })
    }

    pub(crate) fn new_unchecked(rep: LorentzVector) -> Self {
        Self { rep, normalized: false }
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        Self::new(LorentzVector::new(coords)?, QUADRIC_TOL)
    }

    pub fn rep(&self) -> &LorentzVector {
        &self.rep
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Same point with unit-norm, sign-fixed representative.
    pub fn normalized(&self) -> Self {
        let rep = self.rep.canonical().expect("quadric points are nonzero");
        Self { rep, normalized: true }
    }

    /// Equality in projective space: normalized reps agree up to sign.
    pub fn projectively_equal(&self, other: &Self, tol: f64) -> bool {
        projective_distance(self.rep.coords(), other.rep.coords()) <= tol
    }

    pub fn ambient_n(&self) -> usize {
        self.rep.ambient_n()
    }
}

/// `min(‖â − b̂‖, ‖â + b̂‖)` for unit-normalized `a`, `b`.
pub fn projective_distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    let (ua, ub) = (a / na, b / nb);
    (&ua - &ub).norm().min((&ua + &ub).norm())
}

/// Oriented sphere with unit center `center ∈ S^n ⊂ R^{n+1}` and signed radius.
pub fn sphere_to_point(center: &[f64], signed_radius: f64) -> Result<QuadricPoint> {
    let norm = center.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnit(norm));
    }
    let mut coords = Vec::with_capacity(center.len() + 2);
    coords.push(signed_radius.cos());
    coords.extend_from_slice(center);
    coords.push(signed_radius.sin());
    QuadricPoint::new(LorentzVector::new(coords)?, QUADRIC_TOL)
}

/// The point sphere `(1, p, 0)`.
pub fn point_sphere(p: &[f64]) -> Result<QuadricPoint> {
    sphere_to_point(p, 0.0)
}

/// `|⟨s₁, s₂⟩| ≤ tol` after normalizing both representatives.
pub fn in_oriented_contact(s1: &QuadricPoint, s2: &QuadricPoint, tol: f64) -> bool {
    let (a, b) = (s1.rep.coords(), s2.rep.coords());
    if a.len() != b.len() {
        return false;
    }
    let v = raw_inner(a.as_slice(), b.as_slice()) / (a.norm() * b.norm());
    v.abs() <= tol
}

/// Homogeneous coordinates `[r : s]` on a pencil; `κ` is `(κ, 1)`, `∞` is `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectivePair {
    pub r: f64,
    pub s: f64,
}

impl ProjectivePair {
    pub fn new(r: f64, s: f64) -> Result<Self> {
        if r == 0.0 && s == 0.0 {
            return Err(Error::ZeroPair);
        }
        Ok(Self { r, s })
    }

    pub fn finite(kappa: f64) -> Self {
        Self { r: kappa, s: 1.0 }
    }

    pub fn infinity() -> Self {
        Self { r: 1.0, s: 0.0 }
    }

    /// `r/s`, or `None` at infinity (relative to `tol`).
    pub fn value(&self, tol: f64) -> Option<f64> {
        if self.s.abs() <= tol * self.r.abs() {
            None
        } else {
            Some(self.r / self.s)
        }
    }

    /// `r₁s₂ − r₂s₁`; zero exactly when the points coincide.
    pub fn cross(&self, other: &Self) -> f64 {
        self.r * other.s - other.r * self.s
    }

    /// Unit-normalized with a fixed sign, for comparisons.
    pub fn normalized(&self) -> Self {
        let n = self.r.hypot(self.s);
        let sign = if self.s < 0.0 || (self.s == 0.0 && self.r < 0.0) { -1.0 } else { 1.0 };
        Self { r: sign * self.r / n, s: sign * self.s / n }
    }

    /// Apply `t ↦ (at + b)/(ct + d)`.
    pub fn mobius(&self, a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { r: a * self.r + b * self.s, s: c * self.r + d * self.s }
    }
}

/// A projective line on the quadric, spanned by two orthogonal null vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricLine {
    x: QuadricPoint,
    y: QuadricPoint,
}

impl QuadricLine {
    pub fn new(x: QuadricPoint, y: QuadricPoint, tol: f64) -> Result<Self> {
        let (a, b) = (x.rep.coords(), y.rep.coords());
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        let pairing = inner(&x.rep, &y.rep)? / (a.norm() * b.norm());
        if pairing.abs() > tol {
            return Err(Error::NotALine(format!("generators pair to {pairing:e}")));
        }
        if x.projectively_equal(&y, tol.max(PROJECTIVE_TOL)) {
            return Err(Error::NotALine("generators coincide".into()));
        }
        Ok(Self { x, y })
    }

    pub fn generators(&self) -> (&QuadricPoint, &QuadricPoint) {
        (&self.x, &self.y)
    }

    /// `[r·X + s·Y]`.
    pub fn pencil_point(&self, pair: ProjectivePair) -> Result<QuadricPoint> {
        if pair.r == 0.0 && pair.s == 0.0 {
            return Err(Error::ZeroPair);
        }
        let v = &(&self.x.rep * pair.r) + &(&self.y.rep * pair.s);
        if v.norm() == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(QuadricPoint::new_unchecked(v))
    }

    /// Pencil coordinates of a point on this line (least squares).
    pub fn coordinates_of(&self, p: &QuadricPoint) -> Result<ProjectivePair> {
        pencil_coordinates(self.x.rep.coords(), self.y.rep.coords(), p.rep.coords())
    }
}

/// Least-squares `[r : s]` with `v ≈ r·x + s·y`.
pub fn pencil_coordinates(
    x: &DVector<f64>,
    y: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<ProjectivePair> {
    let (xx, xy, yy) = (x.dot(x), x.dot(y), y.dot(y));
    let (xv, yv) = (x.dot(v), y.dot(v));
    let det = xx * yy - xy * xy;
    if det.abs() <= 1e-24 * xx * yy {
        return Err(Error::NotALine("pencil generators are dependent".into()));
    }
    ProjectivePair::new((yy * xv - xy * yv) / det, (xx * yv - xy * xv) / det)
}

/// Action of Lie sphere transformations.
pub trait LieAction: Sized {
    fn transformed(&self, a: &LieTransform) -> Result<Self>;
}

impl LieAction for QuadricPoint {
    fn transformed(&self, a: &LieTransform) -> Result<Self> {
        Ok(QuadricPoint::new_unchecked(a.apply(&self.rep)?))
    }
}

impl LieAction for QuadricLine {
    fn transformed(&self, a: &LieTransform) -> Result<Self> {
        Ok(QuadricLine { x: self.x.transformed(a)?, y: self.y.transformed(a)? })
    }
}

/// Map a point or line by a Lie sphere transformation.
pub fn apply_transform<T: LieAction>(a: &LieTransform, item: &T) -> Result<T> {
    a.validate()?;
    item.transformed(a)
}
