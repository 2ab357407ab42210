//! Dupin-preserving constructions: surfaces of revolution, tubes and cylinders.
//!
//! All three take a Euclidean patch in `R^n` and return a Euclidean patch in a
//! higher-dimensional space, keeping the original coordinates first.

use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::curvature::{curvature_pencil, AnalysisOptions};
use crate::error::{Error, Result};
use crate::lift::LegendreSample;
use crate::linalg::LorentzVector;
use crate::patch::{Ambient, Domain, Grid, HypersurfacePatch, Jet, PatchRef, SphereChart};
use crate::quadric::{ProjectivePair, QuadricPoint, PROJECTIVE_TOL};

/// Which construction produced a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionKind {
    Revolution,
    Tube,
    Cylinder,
}

impl ConstructionKind {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructionKind::Revolution => "revolution",
            ConstructionKind::Tube => "tube",
            ConstructionKind::Cylinder => "cylinder",
        }
    }
}

/// Shared interface of the constructed patches.
pub trait Construction: HypersurfacePatch {
    fn kind(&self) -> ConstructionKind;
    /// Dimension of the added fiber (`m` or `k`).
    fn fiber_dim(&self) -> usize;
    /// Number of leading parameters that belong to the base patch.
    fn base_param_dim(&self) -> usize;
    /// Curvature of the new family at a parameter point of the result.
    fn new_curvature(&self, u: &[f64]) -> ProjectivePair;
}

pub type ConstructionRef = Arc<dyn Construction>;

fn require_euclidean(patch: &dyn HypersurfacePatch) -> Result<usize> {
    match patch.ambient() {
        Ambient::Euclidean(n) => Ok(n),
        a => Err(Error::InvalidParameter(format!("construction needs a Euclidean patch, got {a}"))),
    }
}

fn check_domain(current: &Domain, domain: &Domain) -> Result<()> {
    if current.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: current.dim(), found: domain.dim() });
    }
    Ok(())
}

/// Revolution of a profile about `span{u₁,…,u_{n−1}}` with fiber `S^m`.
///
/// `F(x,y) = f̂(x) + f_n(x) y`, `η(x,y) = ξ̂(x) + ξ_n(x) y`, with
/// `y ∈ S^m ⊂ span{u_n,…,u_{n+m}}`.
pub struct SurfaceOfRevolution {
    profile: PatchRef,
    n: usize,
    chart: SphereChart,
    domain: Domain,
}

impl SurfaceOfRevolution {
    pub fn new(profile: PatchRef, m: usize) -> Result<Self> {
        let n = require_euclidean(profile.as_ref())?;
        if m == 0 {
            return Err(Error::InvalidParameter("revolution needs m ≥ 1".into()));
        }
        let chart = SphereChart::new(m);
        let domain = profile.domain().product(&chart.domain());
        Ok(Self { profile, n, chart, domain })
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        check_domain(&self.domain, &domain)?;
        self.domain = domain;
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.chart.m
    }

    pub fn profile(&self) -> &PatchRef {
        &self.profile
    }

    fn split<'a>(&self, u: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        u.split_at(self.profile.domain().dim())
    }

    fn revolve(&self, v: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n + self.m());
        out.rows_mut(0, n - 1).copy_from(&v.rows(0, n - 1));
        out.rows_mut(n - 1, self.m() + 1).copy_from(&(y * v[n - 1]));
        out
    }

    /// `(F, η)` at a profile parameter and an explicit fiber point `y ∈ S^m`.
    pub fn eval_fiber(&self, x: &[f64], y: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let (f, xi) = self.profile.eval(x);
        (self.revolve(&f, y), self.revolve(&xi, y))
    }

    /// `(f_n, ξ_n)` at a profile parameter.
    pub fn axial_components(&self, x: &[f64]) -> (f64, f64) {
        let (f, xi) = self.profile.eval(x);
        (f[self.n - 1], xi[self.n - 1])
    }
}

impl HypersurfacePatch for SurfaceOfRevolution {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(self.n + self.m())
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (x, angles) = self.split(u);
        self.eval_fiber(x, &self.chart.point(angles))
    }

    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (x, angles) = self.split(u);
        let base = self.profile.analytic_jet(x)?;
        let y = self.chart.point(angles);
        let mut df: Vec<DVector<f64>> = base.df.iter().map(|d| self.revolve(d, &y)).collect();
        let mut dxi: Vec<DVector<f64>> = base.dxi.iter().map(|d| self.revolve(d, &y)).collect();
        let n = self.n;
        for k in 0..self.m() {
            let dy = self.chart.partial(angles, k);
            let lift = |scale: f64| {
                let mut v = DVector::zeros(n + self.m());
                v.rows_mut(n - 1, self.m() + 1).copy_from(&(&dy * scale));
                v
            };
            df.push(lift(base.f[n - 1]));
            dxi.push(lift(base.xi[n - 1]));
        }
        Some(Jet { u: u.to_vec(), f: self.revolve(&base.f, &y), xi: self.revolve(&base.xi, &y), df, dxi })
    }

    fn describe(&self) -> String {
        format!("surface of revolution (m = {}) of {}", self.m(), self.profile.describe())
    }
}

impl Construction for SurfaceOfRevolution {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Revolution
    }

    fn fiber_dim(&self) -> usize {
        self.m()
    }

    fn base_param_dim(&self) -> usize {
        self.profile.domain().dim()
    }

    /// `−ξ_n/f_n`, i.e. the pair `(ξ_n, −f_n)`.
    fn new_curvature(&self, u: &[f64]) -> ProjectivePair {
        let (fn_, xin) = self.axial_components(self.split(u).0);
        ProjectivePair { r: xin, s: -fn_ }
    }
}

/// Curvature spheres of a revolved patch predicted from its profile.
#[derive(Debug, Clone)]
pub struct PredictedSpheres {
    /// `[ξ_n K₁ − f_n K₂]`.
    pub new_sphere: QuadricPoint,
    pub new_kappa: ProjectivePair,
    /// `[r K₁ + s K₂]` for each profile curvature `(r, s)`.
    pub inherited: Vec<QuadricPoint>,
    /// Projectively distinct members of the above.
    pub distinct: Vec<QuadricPoint>,
}

/// Predicted spheres at `(x, y)` from the profile curvatures at `x` and the
/// lift `[K₁, K₂]` of the revolved patch.
pub fn predicted_curvature_spheres(
    profile_kappas: &[ProjectivePair],
    axial: (f64, f64),
    revolved: &LegendreSample,
) -> Result<PredictedSpheres> {
    let (fn_, xin) = axial;
    if fn_ == 0.0 && xin == 0.0 {
        return Err(Error::DegenerateRevolution(revolved.u().to_vec()));
    }
    let k1 = revolved.y0.rep().coords();
    let k2 = revolved.y1.rep().coords();
    let point = |p: ProjectivePair| {
        QuadricPoint::new_unchecked(LorentzVector::from_dvector_unchecked(k1 * p.r + k2 * p.s))
    };
    let new_kappa = ProjectivePair { r: xin, s: -fn_ };
    let new_sphere = point(new_kappa);
    let inherited: Vec<QuadricPoint> = profile_kappas.iter().map(|p| point(*p)).collect();
    let mut distinct: Vec<QuadricPoint> = Vec::new();
    for s in inherited.iter().chain(std::iter::once(&new_sphere)) {
        if !distinct.iter().any(|d| d.projectively_equal(s, 1e-6)) {
            distinct.push(s.clone());
        }
    }
    Ok(PredictedSpheres { new_sphere, new_kappa, inherited, distinct })
}

/// Tube of radius `ε` about `f(M) ⊂ R^n ⊂ R^{n+k}`.
///
/// `w = y₀ ξ + Σ yⱼ u_{n+j}` over `y ∈ S^k`, `F = f + ε w`, `η = w`.
/// The new curvature is `−1/ε`; inherited ones become `y₀κ/(1 − ε y₀ κ)`.
pub struct Tube {
    base: PatchRef,
    n: usize,
    eps: f64,
    chart: SphereChart,
    domain: Domain,
}

impl Tube {
    /// Rejects radii reaching a focal point (`ε|κ| ≥ 1`) on `check_grid`.
    pub fn new(base: PatchRef, eps: f64, k: usize, check_grid: &Grid, opts: &AnalysisOptions) -> Result<Self> {
        let n = require_euclidean(base.as_ref())?;
        if k == 0 || !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!("tube needs k ≥ 1 and ε > 0, got k = {k}, ε = {eps}")));
        }
        for u in check_grid.points(base.domain())? {
            let pencil = curvature_pencil(base.as_ref(), &u, opts)?;
            if pencil.kappas().iter().any(|kappa| eps * kappa.abs() >= 1.0) {
                return Err(Error::FocalRadius { eps, at: u });
            }
        }
        let chart = SphereChart::new(k);
        let domain = base.domain().product(&chart.domain());
        Ok(Self { base, n, eps, chart, domain })
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        check_domain(&self.domain, &domain)?;
        self.domain = domain;
        Ok(self)
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k(&self) -> usize {
        self.chart.m
    }

    fn split<'a>(&self, u: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        u.split_at(self.base.domain().dim())
    }

    fn embed(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n + self.k());
        out.rows_mut(0, self.n).copy_from(v);
        out
    }

    fn fiber_vector(&self, xi: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut w = self.embed(&(xi * y[0]));
        w.rows_mut(self.n, self.k()).copy_from(&y.rows(1, self.k()));
        w
    }
}

impl HypersurfacePatch for Tube {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(self.n + self.k())
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (x, angles) = self.split(u);
        let (f, xi) = self.base.eval(x);
        let w = self.fiber_vector(&xi, &self.chart.point(angles));
        (self.embed(&f) + &w * self.eps, w)
    }

    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (x, angles) = self.split(u);
        let base = self.base.analytic_jet(x)?;
        let y = self.chart.point(angles);
        let w = self.fiber_vector(&base.xi, &y);
        let mut df = Vec::with_capacity(u.len());
        let mut dxi = Vec::with_capacity(u.len());
        for (d, dx) in base.df.iter().zip(&base.dxi) {
            let dw = self.embed(&(dx * y[0]));
            df.push(self.embed(d) + &dw * self.eps);
            dxi.push(dw);
        }
        for k in 0..self.k() {
            let dw = self.fiber_vector(&base.xi, &self.chart.partial(angles, k));
            df.push(&dw * self.eps);
            dxi.push(dw);
        }
        Some(Jet { u: u.to_vec(), f: self.embed(&base.f) + &w * self.eps, xi: w, df, dxi })
    }

    fn describe(&self) -> String {
        format!("tube (ε = {}, k = {}) about {}", self.eps, self.k(), self.base.describe())
    }
}

impl Construction for Tube {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Tube
    }

    fn fiber_dim(&self) -> usize {
        self.k()
    }

    fn base_param_dim(&self) -> usize {
        self.base.domain().dim()
    }

    fn new_curvature(&self, _u: &[f64]) -> ProjectivePair {
        ProjectivePair::finite(-1.0 / self.eps)
    }
}

/// Cylinder `F(x,t) = f(x) + Σ tⱼ u_{n+j}`, `η = ξ`, over `t ∈ [−1, 1]^k`.
pub struct Cylinder {
    base: PatchRef,
    n: usize,
    k: usize,
    domain: Domain,
}

impl Cylinder {
    pub fn new(base: PatchRef, k: usize) -> Result<Self> {
        let n = require_euclidean(base.as_ref())?;
        if k == 0 {
            return Err(Error::InvalidParameter("cylinder needs k ≥ 1".into()));
        }
        let fiber = Domain::new(vec![-1.0; k], vec![1.0; k], vec![false; k]);
        let domain = base.domain().product(&fiber);
        Ok(Self { base, n, k, domain })
    }

    pub fn with_domain(mut self, domain: Domain) -> Result<Self> {
        check_domain(&self.domain, &domain)?;
        self.domain = domain;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn split<'a>(&self, u: &'a [f64]) -> (&'a [f64], &'a [f64]) {
        u.split_at(self.base.domain().dim())
    }

    fn embed(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n + self.k);
        out.rows_mut(0, self.n).copy_from(v);
        out
    }
}

impl HypersurfacePatch for Cylinder {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(self.n + self.k)
    }

    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (x, t) = self.split(u);
        let (f, xi) = self.base.eval(x);
        let mut big = self.embed(&f);
        big.rows_mut(self.n, self.k).copy_from_slice(t);
        (big, self.embed(&xi))
    }

    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (x, t) = self.split(u);
        let base = self.base.analytic_jet(x)?;
        let mut f = self.embed(&base.f);
        f.rows_mut(self.n, self.k).copy_from_slice(t);
        let mut df: Vec<DVector<f64>> = base.df.iter().map(|d| self.embed(d)).collect();
        let mut dxi: Vec<DVector<f64>> = base.dxi.iter().map(|d| self.embed(d)).collect();
        for j in 0..self.k {
            let mut e = DVector::zeros(self.n + self.k);
            e[self.n + j] = 1.0;
            df.push(e);
            dxi.push(DVector::zeros(self.n + self.k));
        }
        Some(Jet { u: u.to_vec(), f, xi: self.embed(&base.xi), df, dxi })
    }

    fn describe(&self) -> String {
        format!("cylinder (k = {}) over {}", self.k, self.base.describe())
    }
}

impl Construction for Cylinder {
    fn kind(&self) -> ConstructionKind {
        ConstructionKind::Cylinder
    }

    fn fiber_dim(&self) -> usize {
        self.k
    }

    fn base_param_dim(&self) -> usize {
        self.base.domain().dim()
    }

    fn new_curvature(&self, _u: &[f64]) -> ProjectivePair {
        ProjectivePair::finite(0.0)
    }
}

/// Whether two projective pairs name the same curvature.
pub fn same_curvature(a: &ProjectivePair, b: &ProjectivePair, tol: f64) -> bool {
    a.normalized().cross(&b.normalized()).abs() <= tol.max(PROJECTIVE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{curvature_pencil, pencil_from_sample};
    use crate::lift::euclidean_lift;
    use crate::patch::JetOptions;

    /// Circle in the plane `f = (a sin t, R + a cos t)` with outward normal.
    struct Circle {
        a: f64,
        center: f64,
        domain: Domain,
    }

    impl Circle {
        fn new(a: f64, center: f64) -> Arc<Self> {
            Arc::new(Self { a, center, domain: Domain::angle() })
        }
    }

    impl HypersurfacePatch for Circle {
        fn ambient(&self) -> Ambient {
            Ambient::Euclidean(2)
        }
        fn domain(&self) -> &Domain {
            &self.domain
        }
        fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
            let (s, c) = u[0].sin_cos();
            (DVector::from_vec(vec![self.a * s, self.center + self.a * c]), DVector::from_vec(vec![s, c]))
        }
        fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
            let (s, c) = u[0].sin_cos();
            let (f, xi) = self.eval(u);
            Some(Jet {
                u: u.to_vec(),
                f,
                xi,
                df: vec![DVector::from_vec(vec![self.a * c, -self.a * s])],
                dxi: vec![DVector::from_vec(vec![c, -s])],
            })
        }
        fn describe(&self) -> String {
            "circle".into()
        }
    }

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(f64::total_cmp);
        v
    }

    fn torus_oracle(a: f64, big: f64, t: f64) -> Vec<f64> {
        sorted(vec![-1.0 / a, -t.cos() / (big + a * t.cos())])
    }

    #[test]
    fn revolved_circle_is_the_torus() {
        let (a, big) = (0.5, 2.0);
        let rev = SurfaceOfRevolution::new(Circle::new(a, big), 1).unwrap();
        let opts = AnalysisOptions::default();
        for &(t, phi) in &[(0.3, 0.0), (1.7, 2.2), (4.0, 5.5)] {
            let p = curvature_pencil(&rev, &[t, phi], &opts).unwrap();
            let got = sorted(p.kappas());
            for (g, e) in got.iter().zip(torus_oracle(a, big, t)) {
                assert!((g - e).abs() < 1e-6, "{got:?}");
            }
            let fd = curvature_pencil(&rev, &[t, phi], &AnalysisOptions { jet: JetOptions::finite_difference(), ..opts }).unwrap();
            for (x, y) in sorted(fd.kappas()).iter().zip(&got) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn fiber_slice_recovers_profile_and_normals_stay_unit() {
        let circle = Circle::new(0.5, 2.0);
        let rev = SurfaceOfRevolution::new(circle.clone(), 2).unwrap();
        let (f, xi) = circle.eval(&[0.9]);
        let (big_f, eta) = rev.eval_fiber(&[0.9], &DVector::from_vec(vec![1.0, 0.0, 0.0]));
        assert_eq!(big_f.rows(0, 2), f.rows(0, 2));
        assert_eq!(eta.rows(0, 2), xi.rows(0, 2));
        assert!(big_f.rows(2, 2).iter().all(|v| *v == 0.0));
        for u in Grid::uniform(3, 5).points(rev.domain()).unwrap() {
            assert!((rev.eval(&u).1.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn revolution_is_equivariant_in_the_fiber() {
        let rev = SurfaceOfRevolution::new(Circle::new(0.5, 2.0), 1).unwrap();
        let y = DVector::from_vec(vec![0.6, 0.8]);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let qy = DVector::from_vec(vec![c * y[0] - s * y[1], s * y[0] + c * y[1]]);
        let (f, _) = rev.eval_fiber(&[1.1], &y);
        let (g, _) = rev.eval_fiber(&[1.1], &qy);
        assert_eq!(g[0], f[0]);
        assert!((g[1] - (c * f[1] - s * f[2])).abs() < 1e-15);
        assert!((g[2] - (s * f[1] + c * f[2])).abs() < 1e-15);
    }

    #[test]
    fn predicted_spheres_match_computed_pencil() {
        let circle = Circle::new(0.5, 2.0);
        let rev = SurfaceOfRevolution::new(circle.clone(), 1).unwrap();
        let opts = AnalysisOptions::default();
        let x = [1.3];
        let profile = curvature_pencil(circle.as_ref(), &x, &opts).unwrap();
        let kappas: Vec<ProjectivePair> = profile.curvatures().iter().map(|c| c.kappa).collect();
        let sample = euclidean_lift(&rev, &[1.3, 0.7], &opts.jet).unwrap();
        let pred = predicted_curvature_spheres(&kappas, rev.axial_components(&x), &sample).unwrap();
        let pencil = pencil_from_sample(sample, opts.cluster_tol).unwrap();
        assert_eq!(pred.distinct.len(), 2);
        assert_eq!(pencil.g(), 2);
        for s in &pred.distinct {
            assert!(pencil.spheres.iter().any(|t| t.projectively_equal(s, 1e-6)));
        }
        let new = pencil.curvatures().iter().find(|c| same_curvature(&c.kappa, &rev.new_curvature(&[1.3, 0.7]), 1e-8));
        assert!(new.is_some());
    }

    #[test]
    fn new_sphere_is_constant_along_the_fiber() {
        let circle = Circle::new(0.5, 2.0);
        let rev = SurfaceOfRevolution::new(circle, 2).unwrap();
        let opts = JetOptions::default();
        let reps: Vec<DVector<f64>> = Grid::new(vec![1, 4, 6])
            .points(&rev.domain().restricted(0, 0.8, 0.8))
            .unwrap()
            .iter()
            .map(|u| {
                let s = euclidean_lift(&rev, u, &opts).unwrap();
                let p = rev.new_curvature(u);
                s.y0.rep().coords() * p.r + s.y1.rep().coords() * p.s
            })
            .collect();
        let m = nalgebra::DMatrix::from_columns(&reps);
        assert_eq!(crate::linalg::numerical_rank(&m, 1e-8).unwrap().rank, 1);
    }

    #[test]
    fn degenerate_axial_data_is_reported() {
        let rev = SurfaceOfRevolution::new(Circle::new(0.5, 2.0), 1).unwrap();
        let s = euclidean_lift(&rev, &[0.2, 0.1], &JetOptions::default()).unwrap();
        assert!(matches!(predicted_curvature_spheres(&[], (0.0, 0.0), &s), Err(Error::DegenerateRevolution(_))));
    }

    #[test]
    fn cylinder_over_circle() {
        let cyl = Cylinder::new(Circle::new(0.5, 0.0), 1).unwrap();
        let p = curvature_pencil(&cyl, &[0.4, 0.3], &AnalysisOptions::default()).unwrap();
        let k = sorted(p.kappas());
        assert!((k[0] + 2.0).abs() < 1e-9 && k[1].abs() < 1e-9);
        assert_eq!(cyl.eval(&[0.4, 0.3]).1, cyl.eval(&[0.4, -0.9]).1);
        let cyl2 = Cylinder::new(Circle::new(0.5, 0.0), 2).unwrap();
        let p = curvature_pencil(&cyl2, &[0.4, 0.3, 0.1], &AnalysisOptions::default()).unwrap();
        assert_eq!(p.multiplicities().iter().max(), Some(&2));
    }

    #[test]
    fn tube_about_circle_is_the_torus() {
        let (eps, big) = (0.5, 2.0);
        let opts = AnalysisOptions::default();
        let tube = Tube::new(Circle::new(big, 0.0), eps, 1, &Grid::uniform(1, 16), &opts).unwrap();
        for &(x, phi) in &[(0.3, 0.4), (2.0, 2.5), (5.0, 4.0)] {
            let p = curvature_pencil(&tube, &[x, phi], &opts).unwrap();
            let expected = torus_oracle(eps, big, phi);
            for (g, e) in sorted(p.kappas()).iter().zip(expected) {
                assert!((g - e).abs() < 1e-9);
            }
            assert!(p.kappas().iter().any(|k| (k + 1.0 / eps).abs() < 1e-9));
        }
    }

    #[test]
    fn tube_rejects_focal_radius() {
        let opts = AnalysisOptions::default();
        let err = Tube::new(Circle::new(0.5, 0.0), 0.5, 1, &Grid::uniform(1, 8), &opts);
        assert!(matches!(err, Err(Error::FocalRadius { .. })));
    }
}
