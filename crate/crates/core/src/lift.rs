//! Legendre lifts of hypersurface patches into the Lie quadric.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{raw_inner, LorentzVector};
use crate::patch::{
    check_jet, jet, Ambient, Domain, Grid, HypersurfacePatch, Jet, JetOptions, JetSource,
};
use crate::quadric::QuadricPoint;

/// Relative tolerance on the null/orthogonality conditions of a lift.
pub const LIFT_TOL: f64 = 1e-10;

/// Which representatives a sample carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LiftModel {
    /// `Y₀ = (1, f, 0)`, `Y₁ = (0, ξ, 1)`.
    Spherical,
    /// `k₁ = (1+f·f, 1−f·f, 2f, 0)/2`, `k₂ = (f·ξ, −f·ξ, ξ, 1)`.
    Euclidean,
}

/// The Legendre line `[Y₀, Y₁]` at one parameter point, with derivatives.
#[derive(Debug, Clone)]
pub struct LegendreSample {
    pub model: LiftModel,
    pub jet: Jet,
    pub source: JetSource,
    pub y0: QuadricPoint,
    pub y1: QuadricPoint,
    pub dy0: Vec<LorentzVector>,
    pub dy1: Vec<LorentzVector>,
}

impl LegendreSample {
    pub fn u(&self) -> &[f64] {
        &self.jet.u
    }

    /// Build the lift straight from a jet without validating it.
    pub fn from_jet(jet: Jet, ambient: Ambient, source: JetSource) -> Self {
        let (model, y0, y1, dy0, dy1) = match ambient {
            Ambient::Sphere(_) => {
                let y0 = pad(1.0, &jet.f, 0.0);
                let y1 = pad(0.0, &jet.xi, 1.0);
                let dy0 = jet.df.iter().map(|d| pad(0.0, d, 0.0)).collect();
                let dy1 = jet.dxi.iter().map(|d| pad(0.0, d, 0.0)).collect();
                (LiftModel::Spherical, y0, y1, dy0, dy1)
            }
            Ambient::Euclidean(_) => {
                let ff = jet.f.dot(&jet.f);
                let fx = jet.f.dot(&jet.xi);
                let k1 = pad2(0.5 * (1.0 + ff), 0.5 * (1.0 - ff), &jet.f, 0.0);
                let k2 = pad2(fx, -fx, &jet.xi, 1.0);
                let dk1 = jet
                    .df
                    .iter()
                    .map(|d| {
                        let s = jet.f.dot(d);
                        pad2(s, -s, d, 0.0)
                    })
                    .collect();
                let dk2 = jet
                    .df
                    .iter()
                    .zip(&jet.dxi)
                    .map(|(d, dx)| {
                        let s = d.dot(&jet.xi) + jet.f.dot(dx);
                        pad2(s, -s, dx, 0.0)
                    })
                    .collect();
                (LiftModel::Euclidean, k1, k2, dk1, dk2)
            }
        };
        let wrap = |v: DVector<f64>| LorentzVector::from_dvector_unchecked(v);
        LegendreSample {
            model,
            y0: QuadricPoint::new_unchecked(wrap(y0)),
            y1: QuadricPoint::new_unchecked(wrap(y1)),
            dy0: map_wrap(dy0),
            dy1: map_wrap(dy1),
            jet,
            source,
        }
    }

    /// Null and orthogonality defects of `(Y₀, Y₁)`, relative to their norms.
    pub fn null_defects(&self) -> [f64; 3] {
        let a = self.y0.rep().as_slice();
        let b = self.y1.rep().as_slice();
        let na = self.y0.rep().norm();
        let nb = self.y1.rep().norm();
        [
            raw_inner(a, a).abs() / (na * na),
            raw_inner(b, b).abs() / (nb * nb),
            raw_inner(a, b).abs() / (na * nb),
        ]
    }
}

fn map_wrap(v: Vec<DVector<f64>>) -> Vec<LorentzVector> {
    v.into_iter().map(LorentzVector::from_dvector_unchecked).collect()
}

fn pad(first: f64, middle: &DVector<f64>, last: f64) -> DVector<f64> {
    let mut out = DVector::zeros(middle.len() + 2);
    out[0] = first;
    out.rows_mut(1, middle.len()).copy_from(middle);
    out[middle.len() + 1] = last;
    out
}

fn pad2(a: f64, b: f64, middle: &DVector<f64>, last: f64) -> DVector<f64> {
    let mut out = DVector::zeros(middle.len() + 3);
    out[0] = a;
    out[1] = b;
    out.rows_mut(2, middle.len()).copy_from(middle);
    out[middle.len() + 2] = last;
    out
}

fn validated(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<(Jet, JetSource)> {
    let (j, source) = jet(patch, u, opts)?;
    check_jet(&j, patch.ambient())?;
    Ok((j, source))
}

fn check_null(sample: LegendreSample) -> Result<LegendreSample> {
    let worst = sample.null_defects().into_iter().fold(0.0, f64::max);
    if worst > LIFT_TOL {
        return Err(Error::InvalidPatch {
            at: sample.jet.u.clone(),
            reason: format!("lift leaves the quadric (defect {worst:e})"),
        });
    }
    Ok(sample)
}

/// Lift of a patch in `S^n`.
pub fn spherical_lift(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<LegendreSample> {
    let ambient = patch.ambient();
    if !matches!(ambient, Ambient::Sphere(_)) {
        return Err(Error::InvalidParameter(format!("spherical lift of a patch in {ambient}")));
    }
    let (j, source) = validated(patch, u, opts)?;
    check_null(LegendreSample::from_jet(j, ambient, source))
}

/// Lift of a patch in `R^n`.
pub fn euclidean_lift(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<LegendreSample> {
    let ambient = patch.ambient();
    if !matches!(ambient, Ambient::Euclidean(_)) {
        return Err(Error::InvalidParameter(format!("Euclidean lift of a patch in {ambient}")));
    }
    let (j, source) = validated(patch, u, opts)?;
    check_null(LegendreSample::from_jet(j, ambient, source))
}

/// Lift in whichever model matches the patch.
pub fn lift(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<LegendreSample> {
    match patch.ambient() {
        Ambient::Sphere(_) => spherical_lift(patch, u, opts),
        Ambient::Euclidean(_) => euclidean_lift(patch, u, opts),
    }
}

/// Lifts over a grid, in grid order.
pub fn lift_grid(patch: &dyn HypersurfacePatch, grid: &Grid, opts: &JetOptions) -> Result<Vec<LegendreSample>> {
    grid.points(patch.domain())?
        .par_iter()
        .map(|u| lift(patch, u, opts))
        .collect()
}

/// `max_X |⟨dY₀(X), Y₁⟩| / (‖dY₀(X)‖ ‖Y₁‖)` over coordinate directions.
pub fn contact_residual(sample: &LegendreSample) -> Result<f64> {
    if sample.dy0.is_empty() {
        return Err(Error::MissingDerivatives);
    }
    let y1 = sample.y1.rep();
    let ny1 = y1.norm();
    Ok(sample
        .dy0
        .iter()
        .map(|d| {
            let nd = d.norm();
            if nd == 0.0 { 0.0 } else { raw_inner(d.as_slice(), y1.as_slice()).abs() / (nd * ny1) }
        })
        .fold(0.0, f64::max))
}

/// A Euclidean patch viewed in `S^n` through inverse stereographic projection
/// from `(−1, 0, …, 0)`.
///
/// With this choice `k₁ = (1+f·f)/2 · Y₀` and `k₂ = Y₁ + (f·ξ) Y₀`.
pub struct InverseStereographic<P> {
    pub inner: P,
}

impl<P: HypersurfacePatch> InverseStereographic<P> {
    pub fn new(inner: P) -> Result<Self> {
        if !matches!(inner.ambient(), Ambient::Euclidean(_)) {
            return Err(Error::InvalidParameter("stereographic image needs a Euclidean patch".into()));
        }
        Ok(Self { inner })
    }
}

fn stereo(f: &DVector<f64>, xi: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let q = 1.0 + f.dot(f);
    let a = f.dot(xi);
    let mut y = DVector::zeros(f.len() + 1);
    y[0] = 2.0 / q - 1.0;
    y.rows_mut(1, f.len()).copy_from(&(f * (2.0 / q)));
    let mut n = DVector::zeros(f.len() + 1);
    n[0] = -2.0 * a / q;
    n.rows_mut(1, f.len()).copy_from(&(xi - f * (2.0 * a / q)));
    (y, n)
}

impl<P: HypersurfacePatch> HypersurfacePatch for InverseStereographic<P> {
    fn ambient(&self) -> Ambient {
        Ambient::Sphere(self.inner.ambient().n())
    }

    fn domain(&self) -> &Domain {
        self.inner.domain()
    }

    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (f, xi) = self.inner.eval(u);
        stereo(&f, &xi)
    }

    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let j = self.inner.analytic_jet(u)?;
        let (f, xi) = (&j.f, &j.xi);
        let q = 1.0 + f.dot(f);
        let a = f.dot(xi);
        let (sf, sxi) = stereo(f, xi);
        let mut df = Vec::with_capacity(j.df.len());
        let mut dxi = Vec::with_capacity(j.df.len());
        for (d, dx) in j.df.iter().zip(&j.dxi) {
            let dq = 2.0 * f.dot(d);
            let da = d.dot(xi) + f.dot(dx);
            let mut g = DVector::zeros(f.len() + 1);
            g[0] = -2.0 * dq / (q * q);
            g.rows_mut(1, f.len()).copy_from(&(d * (2.0 / q) - f * (2.0 * dq / (q * q))));
            let mut h = DVector::zeros(f.len() + 1);
            h[0] = -2.0 * da / q + 2.0 * a * dq / (q * q);
            h.rows_mut(1, f.len())
                .copy_from(&(dx - (d * a + f * da) * (2.0 / q) + f * (2.0 * a * dq / (q * q))));
            df.push(g);
            dxi.push(h);
        }
        Some(Jet { u: j.u, f: sf, xi: sxi, df, dxi })
    }

    fn describe(&self) -> String {
        format!("inverse stereographic image of {}", self.inner.describe())
    }
}
