//! Parametrized hypersurface patches and their first-order jets.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};

/// Ambient model of a patch: `S^n ⊂ R^{n+1}` or `R^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ambient {
    Sphere(usize),
    Euclidean(usize),
}

impl Ambient {
    pub fn n(&self) -> usize {
        match *self {
            Ambient::Sphere(n) | Ambient::Euclidean(n) => n,
        }
    }

    /// Length of position and normal vectors.
    pub fn position_len(&self) -> usize {
        match *self {
            Ambient::Sphere(n) => n + 1,
            Ambient::Euclidean(n) => n,
        }
    }

    /// Dimension of the parameter domain, `n − 1`.
    pub fn param_dim(&self) -> usize {
        self.n() - 1
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Sphere(n) => write!(f, "S^{n}"),
            Ambient::Euclidean(n) => write!(f, "R^{n}"),
        }
    }
}

/// Box-shaped parameter domain; periodic axes wrap around.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, periodic: Vec<bool>) -> Self {
        assert!(lo.len() == hi.len() && hi.len() == periodic.len());
        Self { lo, hi, periodic }
    }

    /// A full period `[0, 2π)`.
    pub fn angle() -> Self {
        Self::new(vec![0.0], vec![TAU], vec![true])
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::new(vec![lo], vec![hi], vec![false])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn product(&self, other: &Domain) -> Domain {
        let cat = |a: &[f64], b: &[f64]| a.iter().chain(b).copied().collect::<Vec<_>>();
        Domain {
            lo: cat(&self.lo, &other.lo),
            hi: cat(&self.hi, &other.hi),
            periodic: self.periodic.iter().chain(&other.periodic).copied().collect(),
        }
    }

    /// Restrict one axis to a sub-interval (the axis stops being periodic).
    pub fn restricted(&self, axis: usize, lo: f64, hi: f64) -> Domain {
        let mut d = self.clone();
        d.lo[axis] = lo;
        d.hi[axis] = hi;
        d.periodic[axis] = false;
        d
    }
}

/// Uniform sampling grid; periodic axes omit the right endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub resolution: Vec<usize>,
}

impl Grid {
    pub fn new(resolution: Vec<usize>) -> Self {
        Self { resolution }
    }

    pub fn uniform(dim: usize, per_axis: usize) -> Self {
        Self { resolution: vec![per_axis; dim] }
    }

    /// Default density: 64 per axis up to surfaces, 16 per axis beyond.
    pub fn default_for(dim: usize) -> Self {
        Self::uniform(dim, if dim <= 2 { 64 } else { 16 })
    }

    /// Parses `64x64` style specifications.
    pub fn parse(spec: &str) -> Result<Self> {
        let resolution = spec
            .split(['x', 'X'])
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidParameter(format!("bad grid `{spec}`")))?;
        if resolution.is_empty() || resolution.contains(&0) {
            return Err(Error::InvalidParameter(format!("bad grid `{spec}`")));
        }
        Ok(Self { resolution })
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis_values(&self, domain: &Domain, axis: usize) -> Vec<f64> {
        let count = self.resolution[axis];
        let (lo, hi) = (domain.lo[axis], domain.hi[axis]);
        if count == 1 {
            return vec![0.5 * (lo + hi)];
        }
        let steps = if domain.periodic[axis] { count } else { count - 1 } as f64;
        (0..count).map(|i| lo + (hi - lo) * i as f64 / steps).collect()
    }

    /// Grid points in row-major order (last axis fastest).
    pub fn points(&self, domain: &Domain) -> Result<Vec<Vec<f64>>> {
        if self.resolution.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: self.resolution.len(),
            });
        }
        let axes: Vec<Vec<f64>> = (0..domain.dim()).map(|a| self.axis_values(domain, a)).collect();
        let mut out = vec![Vec::with_capacity(domain.dim())];
        for values in &axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.resolution.iter().map(usize::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Position, unit normal and their partial derivatives at a parameter point.
#[derive(Debug, Clone)]
pub struct Jet {
    pub u: Vec<f64>,
    pub f: DVector<f64>,
    pub xi: DVector<f64>,
    pub df: Vec<DVector<f64>>,
    pub dxi: Vec<DVector<f64>>,
}

impl Jet {
    pub fn param_dim(&self) -> usize {
        self.df.len()
    }
}

/// Where a jet's derivatives came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JetSource {
    Analytic,
    CentralDifference,
    Richardson,
}

/// A hypersurface `u ↦ (f(u), ξ(u))` over a box domain.
///
/// Evaluators must be pure; normals are supplied explicitly.
pub trait HypersurfacePatch: Send + Sync {
    fn ambient(&self) -> Ambient;
    fn domain(&self) -> &Domain;
    /// Position and unit normal.
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>);
    /// Analytic first jet, when the generator knows it.
    fn analytic_jet(&self, _u: &[f64]) -> Option<Jet> {
        None
    }
    fn describe(&self) -> String;
}

pub type PatchRef = Arc<dyn HypersurfacePatch>;

/// How to obtain derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JetOptions {
    /// Use analytic jets when the patch provides them.
    pub prefer_analytic: bool,
    /// Step as a fraction of each axis extent.
    pub rel_step: f64,
    /// Normality residual that triggers Richardson extrapolation.
    pub richardson_trigger: f64,
}

impl Default for JetOptions {
    fn default() -> Self {
        Self { prefer_analytic: true, rel_step: 1e-5, richardson_trigger: 1e-8 }
    }
}

impl JetOptions {
    pub fn finite_difference() -> Self {
        Self { prefer_analytic: false, ..Self::default() }
    }
}

/// First jet of the patch at `u`, with its provenance.
pub fn jet(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<(Jet, JetSource)> {
    check_param(patch, u)?;
    if opts.prefer_analytic {
        if let Some(j) = patch.analytic_jet(u) {
            return Ok((j, JetSource::Analytic));
        }
    }
    let plain = difference_jet(patch, u, opts.rel_step);
    if normality_defect(&plain) <= opts.richardson_trigger {
        return Ok((plain, JetSource::CentralDifference));
    }
    let half = difference_jet(patch, u, 0.5 * opts.rel_step);
    let extrapolate = |coarse: &[DVector<f64>], fine: &[DVector<f64>]| -> Vec<DVector<f64>> {
        coarse.iter().zip(fine).map(|(c, f)| (f * 4.0 - c) / 3.0).collect()
    };
    Ok((
        Jet {
            df: extrapolate(&plain.df, &half.df),
            dxi: extrapolate(&plain.dxi, &half.dxi),
            ..half
        },
        JetSource::Richardson,
    ))
}

fn check_param(patch: &dyn HypersurfacePatch, u: &[f64]) -> Result<()> {
    let dim = patch.domain().dim();
    if u.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: u.len() });
    }
    Ok(())
}

/// Central differences; one-sided second-order stencils at non-periodic edges.
fn difference_jet(patch: &dyn HypersurfacePatch, u: &[f64], rel_step: f64) -> Jet {
    let domain = patch.domain();
    let (f, xi) = patch.eval(u);
    let mut df = Vec::with_capacity(u.len());
    let mut dxi = Vec::with_capacity(u.len());
    for axis in 0..u.len() {
        let h = rel_step * domain.extent(axis).abs().max(1e-12);
        let at = |offset: f64| {
            let mut v = u.to_vec();
            v[axis] += offset;
            patch.eval(&v)
        };
        let periodic = domain.periodic[axis];
        let (d_f, d_xi) = if !periodic && u[axis] - h < domain.lo[axis] {
            let (f1, x1) = at(h);
            let (f2, x2) = at(2.0 * h);
            ((&f1 * 4.0 - &f * 3.0 - f2) / (2.0 * h), (&x1 * 4.0 - &xi * 3.0 - x2) / (2.0 * h))
        } else if !periodic && u[axis] + h > domain.hi[axis] {
            let (f1, x1) = at(-h);
            let (f2, x2) = at(-2.0 * h);
            ((&f * 3.0 - &f1 * 4.0 + f2) / (2.0 * h), (&xi * 3.0 - &x1 * 4.0 + x2) / (2.0 * h))
        } else {
            let (fp, xp) = at(h);
            let (fm, xm) = at(-h);
            ((fp - fm) / (2.0 * h), (xp - xm) / (2.0 * h))
        };
        df.push(d_f);
        dxi.push(d_xi);
    }
    Jet { u: u.to_vec(), f, xi, df, dxi }
}

/// `max_i |ξ·∂ᵢf| / |∂ᵢf|`.
pub fn normality_defect(jet: &Jet) -> f64 {
    jet.df
        .iter()
        .map(|d| {
            let n = d.norm();
            if n > 0.0 { (jet.xi.dot(d) / n).abs() } else { 0.0 }
        })
        .fold(0.0, f64::max)
}

/// Tolerances on patch data.
pub const UNIT_NORMAL_TOL: f64 = 1e-10;
pub const NORMALITY_TOL: f64 = 1e-8;

/// Enforces the patch invariants: unit normal, normality, and for spherical
/// patches `|f| = 1`, `f·ξ = 0`.
pub fn check_jet(jet: &Jet, ambient: Ambient) -> Result<()> {
    let bad = |reason: String| Err(Error::InvalidPatch { at: jet.u.clone(), reason });
    let len = ambient.position_len();
    if jet.f.len() != len || jet.xi.len() != len || jet.df.len() != ambient.param_dim() {
        return bad(format!("expected vectors of length {len} and {} tangents", ambient.param_dim()));
    }
    if (jet.xi.norm() - 1.0).abs() > UNIT_NORMAL_TOL {
        return bad(format!("|ξ| = {}", jet.xi.norm()));
    }
    let defect = normality_defect(jet);
    if defect > NORMALITY_TOL {
        return bad(format!("ξ is not normal (defect {defect:e})"));
    }
    if let Ambient::Sphere(_) = ambient {
        if (jet.f.norm() - 1.0).abs() > UNIT_NORMAL_TOL {
            return bad(format!("|f| = {}", jet.f.norm()));
        }
        if jet.f.dot(&jet.xi).abs() > UNIT_NORMAL_TOL {
            return bad("ξ is not tangent to the sphere".into());
        }
    }
    Ok(())
}

/// Hyperspherical chart of `S^m ⊂ R^{m+1}`.
///
/// `y₀ = cos φ₁, y₁ = sin φ₁ cos φ₂, …, y_m = sin φ₁ ⋯ sin φ_m`. The first
/// `m − 1` angles live in `[δ, π − δ]` (poles excluded), the last is periodic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereChart {
    pub m: usize,
    pub pole_margin: f64,
}

impl SphereChart {
    pub fn new(m: usize) -> Self {
        Self { m, pole_margin: 0.15 }
    }

    pub fn domain(&self) -> Domain {
        let mut lo = vec![self.pole_margin; self.m];
        let mut hi = vec![PI - self.pole_margin; self.m];
        let mut periodic = vec![false; self.m];
        lo[self.m - 1] = 0.0;
        hi[self.m - 1] = TAU;
        periodic[self.m - 1] = true;
        Domain { lo, hi, periodic }
    }

    // component j as a product of (angle index, is_sin) factors
    fn factors(&self, j: usize) -> Vec<(usize, bool)> {
        let mut f: Vec<(usize, bool)> = (0..j.min(self.m)).map(|k| (k, true)).collect();
        if j < self.m {
            f.push((j, false));
        }
        f
    }

    fn eval_factors(factors: &[(usize, bool)], angles: &[f64], diff: Option<usize>) -> f64 {
        let mut hit = diff.is_none();
        let mut value = 1.0;
        for &(k, is_sin) in factors {
            let a = angles[k];
            value *= if diff == Some(k) {
                hit = true;
                if is_sin { a.cos() } else { -a.sin() }
            } else if is_sin {
                a.sin()
            } else {
                a.cos()
            };
        }
        if hit { value } else { 0.0 }
    }

    pub fn point(&self, angles: &[f64]) -> DVector<f64> {
        DVector::from_fn(self.m + 1, |j, _| Self::eval_factors(&self.factors(j), angles, None))
    }

    /// `∂y/∂φ_k`.
    pub fn partial(&self, angles: &[f64], k: usize) -> DVector<f64> {
        DVector::from_fn(self.m + 1, |j, _| Self::eval_factors(&self.factors(j), angles, Some(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_and_parse() {
        let d = Domain::new(vec![0.0, -1.0], vec![TAU, 1.0], vec![true, false]);
        let g = Grid::new(vec![4, 3]);
        let pts = g.points(&d).unwrap();
        assert_eq!(pts.len(), 12);
        assert_eq!(pts[0], vec![0.0, -1.0]);
        assert_eq!(pts[2], vec![0.0, 1.0]);
        assert!((pts[3][0] - TAU / 4.0).abs() < 1e-15);
        assert_eq!(Grid::parse("64x32").unwrap().resolution, vec![64, 32]);
        assert!(Grid::parse("64xz").is_err());
        assert!(Grid::parse("0").is_err());
        assert_eq!(Grid::new(vec![8, 16]).to_string(), "8x16");
    }

    #[test]
    fn sphere_chart_is_unit_with_consistent_partials() {
        for m in 1..4 {
            let chart = SphereChart::new(m);
            let angles: Vec<f64> = (0..m).map(|k| 0.4 + 0.3 * k as f64).collect();
            let y = chart.point(&angles);
            assert!((y.norm() - 1.0).abs() < 1e-15);
            for k in 0..m {
                let h = 1e-6;
                let mut a = angles.clone();
                a[k] += h;
                let yp = chart.point(&a);
                a[k] -= 2.0 * h;
                let ym = chart.point(&a);
                let fd = (yp - ym) / (2.0 * h);
                assert!((fd - chart.partial(&angles, k)).norm() < 1e-9);
            }
        }
        let c = SphereChart::new(1);
        assert!((c.point(&[0.0]) - DVector::from_vec(vec![1.0, 0.0])).norm() < 1e-15);
    }
}
