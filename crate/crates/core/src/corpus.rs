//! Named example generators and the synthetic isoparametric pencil.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::SphereMapSamples;
use crate::constructions::{ConstructionRef, Cylinder, SurfaceOfRevolution, Tube};
use crate::curvature::AnalysisOptions;
use crate::error::{Error, Result};
use crate::linalg::{expm, polish, random_generator, random_lie_transform, LieTransform, LorentzVector};
use crate::patch::{Ambient, Domain, Grid, HypersurfacePatch, Jet, PatchRef, SphereChart};

/// `--key value` style numeric parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamMap {
    values: BTreeMap<String, f64>,
}

impl ParamMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }

    pub fn insert(&mut self, key: &str, value: f64) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: f64) -> f64 {
        self.get(key).unwrap_or(default)
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(v) => Err(Error::InvalidParameter(format!("{key} must be a non-negative integer, got {v}"))),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Rejects keys outside `allowed`.
    pub fn expect_only(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidParameter(format!("unknown parameter `{k}` (expected one of {allowed:?})"))),
            None => Ok(()),
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.get_or(key, default);
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidParameter(format!("{key} must be positive, got {v}")))
        }
    }
}

/// Round sphere of radius `a` in `R^n` with inward normal, so `A = I/a`.
pub struct Sphere {
    n: usize,
    a: f64,
    chart: SphereChart,
    domain: Domain,
}

impl Sphere {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        if n < 2 || !(a > 0.0) {
            return Err(Error::InvalidParameter(format!("sphere needs n ≥ 2 and a > 0, got n = {n}, a = {a}")));
        }
        let chart = SphereChart::new(n - 1);
        Ok(Self { n, a, chart, domain: chart.domain() })
    }
}

impl HypersurfacePatch for Sphere {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(self.n)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let y = self.chart.point(u);
        (&y * self.a, -y)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (f, xi) = self.eval(u);
        let partials: Vec<DVector<f64>> = (0..u.len()).map(|k| self.chart.partial(u, k)).collect();
        Some(Jet {
            u: u.to_vec(),
            f,
            xi,
            df: partials.iter().map(|p| p * self.a).collect(),
            dxi: partials.iter().map(|p| -p).collect(),
        })
    }
    fn describe(&self) -> String {
        format!("sphere of radius {} in R^{}", self.a, self.n)
    }
}

/// Hyperplane `x_n = 0` in `R^n` over `[−1, 1]^{n−1}`, normal `e_n`.
pub struct Plane {
    n: usize,
    domain: Domain,
}

impl Plane {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("plane needs n ≥ 2, got {n}")));
        }
        Ok(Self { n, domain: Domain::new(vec![-1.0; n - 1], vec![1.0; n - 1], vec![false; n - 1]) })
    }
}

impl HypersurfacePatch for Plane {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(self.n)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let mut f = DVector::zeros(self.n);
        f.rows_mut(0, self.n - 1).copy_from_slice(u);
        let mut xi = DVector::zeros(self.n);
        xi[self.n - 1] = 1.0;
        (f, xi)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (f, xi) = self.eval(u);
        let df = (0..self.n - 1)
            .map(|i| {
                let mut e = DVector::zeros(self.n);
                e[i] = 1.0;
                e
            })
            .collect();
        Some(Jet { u: u.to_vec(), f, xi, df, dxi: vec![DVector::zeros(self.n); self.n - 1] })
    }
    fn describe(&self) -> String {
        format!("hyperplane in R^{}", self.n)
    }
}

/// Circle `f = a sin t · u₁ + (R + a cos t) · u₂` in `R²`, outward normal.
pub struct CircleProfile {
    big: f64,
    a: f64,
    domain: Domain,
}

impl CircleProfile {
    pub fn new(big: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!("circle radius must be positive, got {a}")));
        }
        Ok(Self { big, a, domain: Domain::angle() })
    }
}

impl HypersurfacePatch for CircleProfile {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(2)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (s, c) = u[0].sin_cos();
        (DVector::from_vec(vec![self.a * s, self.big + self.a * c]), DVector::from_vec(vec![s, c]))
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
        format!("circle of radius {} centred at distance {} from the axis", self.a, self.big)
    }
}

/// Torus `((R + a cos t) cos φ, (R + a cos t) sin φ, a sin t)`, outward normal.
///
/// Principal curvatures `−1/a` and `−cos t/(R + a cos t)`.
pub struct Torus {
    big: f64,
    a: f64,
    domain: Domain,
}

impl Torus {
    pub fn new(big: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) || !(big > a) {
            return Err(Error::InvalidParameter(format!("torus needs R > a > 0, got R = {big}, a = {a}")));
        }
        Ok(Self { big, a, domain: Domain::new(vec![0.0, 0.0], vec![2.0 * PI, 2.0 * PI], vec![true, true]) })
    }

    /// Analytic principal curvatures at `t`.
    pub fn curvatures(&self, t: f64) -> [f64; 2] {
        [-1.0 / self.a, -t.cos() / (self.big + self.a * t.cos())]
    }
}

impl HypersurfacePatch for Torus {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(3)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let rho = self.big + self.a * ct;
        (
            DVector::from_vec(vec![rho * cp, rho * sp, self.a * st]),
            DVector::from_vec(vec![ct * cp, ct * sp, st]),
        )
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let rho = self.big + self.a * ct;
        let (f, xi) = self.eval(u);
        Some(Jet {
            u: u.to_vec(),
            f,
            xi,
            df: vec![
                DVector::from_vec(vec![-self.a * st * cp, -self.a * st * sp, self.a * ct]),
                DVector::from_vec(vec![-rho * sp, rho * cp, 0.0]),
            ],
            dxi: vec![
                DVector::from_vec(vec![-st * cp, -st * sp, ct]),
                DVector::from_vec(vec![-ct * sp, ct * cp, 0.0]),
            ],
        })
    }
    fn describe(&self) -> String {
        format!("torus R = {}, a = {}", self.big, self.a)
    }
}

/// Ellipsoid with semi-axes `(a, b, c)`, outward normal, poles excluded.
pub struct Ellipsoid {
    axes: [f64; 3],
    domain: Domain,
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::InvalidParameter("ellipsoid axes must be positive".into()));
        }
        Ok(Self {
            axes: [a, b, c],
            domain: Domain::new(vec![0.2, 0.0], vec![PI - 0.2, 2.0 * PI], vec![false, true]),
        })
    }

    fn parts(&self, u: &[f64]) -> (DVector<f64>, [DVector<f64>; 2]) {
        let [a, b, c] = self.axes;
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let f = DVector::from_vec(vec![a * st * cp, b * st * sp, c * ct]);
        let df = [
            DVector::from_vec(vec![a * ct * cp, b * ct * sp, -c * st]),
            DVector::from_vec(vec![-a * st * sp, b * st * cp, 0.0]),
        ];
        (f, df)
    }

    fn gradient(&self, v: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(3, |i, _| v[i] / (self.axes[i] * self.axes[i]))
    }
}

impl HypersurfacePatch for Ellipsoid {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(3)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (f, _) = self.parts(u);
        let xi = self.gradient(&f).normalize();
        (f, xi)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (f, df) = self.parts(u);
        let big_n = self.gradient(&f);
        let len = big_n.norm();
        let xi = &big_n / len;
        let dxi = df
            .iter()
            .map(|d| {
                let dn = self.gradient(d);
                (&dn - &xi * xi.dot(&dn)) / len
            })
            .collect();
        Some(Jet { u: u.to_vec(), f, xi, df: df.to_vec(), dxi })
    }
    fn describe(&self) -> String {
        let [a, b, c] = self.axes;
        format!("ellipsoid ({a}, {b}, {c})")
    }
}

/// `S^k(r) × S^{n−k−1}(s) ⊂ S^n`, `r² + s² = 1`, with `f = (r p, s q)`,
/// `ξ = (s p, −r q)`; curvatures `−s/r` (mult. `k`) and `r/s` (mult. `n−k−1`).
pub struct ProductOfSpheres {
    n: usize,
    k: usize,
    r: f64,
    s: f64,
    first: SphereChart,
    second: SphereChart,
    domain: Domain,
}

impl ProductOfSpheres {
    pub fn new(n: usize, k: usize, r: f64, s: f64) -> Result<Self> {
        if k == 0 || k + 1 >= n {
            return Err(Error::InvalidParameter(format!("product of spheres needs 1 ≤ k ≤ n − 2, got k = {k}, n = {n}")));
        }
        if !(r > 0.0 && s > 0.0) || (r * r + s * s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("radii must be positive with r² + s² = 1, got r = {r}, s = {s}")));
        }
        let first = SphereChart::new(k);
        let second = SphereChart::new(n - k - 1);
        let domain = first.domain().product(&second.domain());
        Ok(Self { n, k, r, s, first, second, domain })
    }

    fn join(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        let mut v = DVector::zeros(self.n + 1);
        v.rows_mut(0, self.k + 1).copy_from(a);
        v.rows_mut(self.k + 1, self.n - self.k).copy_from(b);
        v
    }
}

impl HypersurfacePatch for ProductOfSpheres {
    fn ambient(&self) -> Ambient {
        Ambient::Sphere(self.n)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (a, b) = u.split_at(self.k);
        let p = self.first.point(a);
        let q = self.second.point(b);
        (self.join(&(&p * self.r), &(&q * self.s)), self.join(&(&p * self.s), &(&q * -self.r)))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let (a, b) = u.split_at(self.k);
        let (f, xi) = self.eval(u);
        let zp = DVector::zeros(self.k + 1);
        let zq = DVector::zeros(self.n - self.k);
        let mut df = Vec::with_capacity(u.len());
        let mut dxi = Vec::with_capacity(u.len());
        for i in 0..self.k {
            let dp = self.first.partial(a, i);
            df.push(self.join(&(&dp * self.r), &zq));
            dxi.push(self.join(&(&dp * self.s), &zq));
        }
        for i in 0..self.n - self.k - 1 {
            let dq = self.second.partial(b, i);
            df.push(self.join(&zp, &(&dq * self.s)));
            dxi.push(self.join(&zp, &(&dq * -self.r)));
        }
        Some(Jet { u: u.to_vec(), f, xi, df, dxi })
    }
    fn describe(&self) -> String {
        format!("S^{}({}) × S^{}({}) in S^{}", self.k, self.r, self.n - self.k - 1, self.s, self.n)
    }
}

/// Cone `F = t · c(θ, φ)` in `R⁴` over the Clifford torus `c ⊂ S³`, with
/// curvatures `−1/t`, `1/t` and `0`.
pub struct CliffordCone {
    domain: Domain,
}

impl CliffordCone {
    pub fn new(t_min: f64, t_max: f64) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min) {
            return Err(Error::InvalidParameter(format!("cone needs 0 < t_min < t_max, got {t_min}, {t_max}")));
        }
        Ok(Self {
            domain: Domain::new(vec![t_min, 0.0, 0.0], vec![t_max, 2.0 * PI, 2.0 * PI], vec![false, true, true]),
        })
    }

    fn torus(theta: f64, phi: f64) -> (DVector<f64>, DVector<f64>, [DVector<f64>; 2], [DVector<f64>; 2]) {
        let h = FRAC_1_SQRT_2;
        let (s1, c1) = theta.sin_cos();
        let (s2, c2) = phi.sin_cos();
        let c = DVector::from_vec(vec![h * c1, h * s1, h * c2, h * s2]);
        let xi = DVector::from_vec(vec![h * c1, h * s1, -h * c2, -h * s2]);
        let dc = [DVector::from_vec(vec![-h * s1, h * c1, 0.0, 0.0]), DVector::from_vec(vec![0.0, 0.0, -h * s2, h * c2])];
        let dxi = [DVector::from_vec(vec![-h * s1, h * c1, 0.0, 0.0]), DVector::from_vec(vec![0.0, 0.0, h * s2, -h * c2])];
        (c, xi, dc, dxi)
    }
}

impl HypersurfacePatch for CliffordCone {
    fn ambient(&self) -> Ambient {
        Ambient::Euclidean(4)
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (c, xi, _, _) = Self::torus(u[1], u[2]);
        (c * u[0], xi)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let t = u[0];
        let (c, xi, dc, dxi) = Self::torus(u[1], u[2]);
        Some(Jet {
            u: u.to_vec(),
            f: &c * t,
            xi,
            df: vec![c, &dc[0] * t, &dc[1] * t],
            dxi: vec![DVector::zeros(4), dxi[0].clone(), dxi[1].clone()],
        })
    }
    fn describe(&self) -> String {
        "cone over the Clifford torus in R^4".into()
    }
}

/// Names accepted by [`generate`].
pub const GENERATORS: &[&str] = &[
    "sphere",
    "plane",
    "circle_profile",
    "torus",
    "ellipsoid",
    "product_of_spheres",
    "clifford_cone",
    "revolved_circle",
    "tubed_circle",
    "cylinder_circle",
    "revolved_torus",
    "cylinder_torus",
    "iterated_pinkall",
];

fn circle(params: &ParamMap) -> Result<CircleProfile> {
    CircleProfile::new(params.get_or("R", 2.0), params.positive("a", 0.5)?)
}

/// Outer band `|t| ≤ 0.8` of a torus moved off the coordinate axes, so that its
/// curvature sphere maps span the whole space and stay apart from the curvature
/// a revolution or cylinder adds.
fn placed_torus(params: &ParamMap) -> Result<PatchRef> {
    let inner = Torus::new(params.positive("R", 2.0)?, params.positive("a", 0.5)?)?;
    let domain = inner.domain().restricted(0, -0.8, 0.8);
    Ok(Arc::new(Placed { inner, offset: DVector::from_vec(vec![0.3, -0.2, 4.0]), domain }))
}

/// A patch translated in its ambient Euclidean space, over a chosen domain.
pub struct Placed<P> {
    pub inner: P,
    pub offset: DVector<f64>,
    pub domain: Domain,
}

impl<P: HypersurfacePatch> HypersurfacePatch for Placed<P> {
    fn ambient(&self) -> Ambient {
        self.inner.ambient()
    }
    fn domain(&self) -> &Domain {
        &self.domain
    }
    fn eval(&self, u: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let (f, xi) = self.inner.eval(u);
        (f + &self.offset, xi)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Jet> {
        let mut j = self.inner.analytic_jet(u)?;
        j.f += &self.offset;
        Some(j)
    }
    fn describe(&self) -> String {
        format!("{} translated by {:?}", self.inner.describe(), self.offset.as_slice())
    }
}

/// Tube of radius `eps` about the Clifford cone with the fiber restricted to
/// `y₀ > 0`: a reducible proper Dupin hypersurface in `R⁵` with `g = 4`.
pub fn iterated_pinkall(t_min: f64, t_max: f64, eps: f64) -> Result<Tube> {
    let cone: PatchRef = Arc::new(CliffordCone::new(t_min, t_max)?);
    let tube = Tube::new(cone, eps, 1, &Grid::uniform(3, 3), &AnalysisOptions::default())?;
    let d = tube.domain().restricted(3, -1.2, 1.2);
    tube.with_domain(d)
}

/// Builds a named patch.
pub fn generate(name: &str, params: &ParamMap) -> Result<PatchRef> {
    let patch: PatchRef = match name {
        "sphere" => {
            params.expect_only(&["n", "a"])?;
            Arc::new(Sphere::new(params.usize_or("n", 3)?, params.positive("a", 1.0)?)?)
        }
        "plane" => {
            params.expect_only(&["n"])?;
            Arc::new(Plane::new(params.usize_or("n", 3)?)?)
        }
        "circle_profile" => {
            params.expect_only(&["R", "a"])?;
            Arc::new(circle(params)?)
        }
        "torus" => {
            params.expect_only(&["R", "a"])?;
            Arc::new(Torus::new(params.positive("R", 2.0)?, params.positive("a", 0.5)?)?)
        }
        "ellipsoid" => {
            params.expect_only(&["a", "b", "c"])?;
            Arc::new(Ellipsoid::new(params.get_or("a", 1.0), params.get_or("b", 2.0), params.get_or("c", 3.0))?)
        }
        "product_of_spheres" => {
            params.expect_only(&["n", "k", "r", "s"])?;
            let r = params.positive("r", 0.6)?;
            let s = params.get_or("s", (1.0 - r * r).sqrt());
            Arc::new(ProductOfSpheres::new(params.usize_or("n", 3)?, params.usize_or("k", 1)?, r, s)?)
        }
        "clifford_cone" => {
            params.expect_only(&["t_min", "t_max"])?;
            Arc::new(CliffordCone::new(params.get_or("t_min", 1.0), params.get_or("t_max", 2.0))?)
        }
        other => match generate_construction(other, params)? {
            Some(c) => c,
            None => return Err(Error::UnknownGenerator(other.to_string())),
        },
    };
    Ok(patch)
}

/// Builds a named construction-derived patch; `None` for other names.
pub fn generate_construction(name: &str, params: &ParamMap) -> Result<Option<ConstructionRef>> {
    let opts = AnalysisOptions::default();
    let check = Grid::uniform(1, 64);
    let c: ConstructionRef = match name {
        "revolved_circle" => {
            params.expect_only(&["R", "a", "m"])?;
            Arc::new(SurfaceOfRevolution::new(Arc::new(circle(params)?), params.usize_or("m", 1)?)?)
        }
        "tubed_circle" => {
            params.expect_only(&["R", "a", "eps", "k"])?;
            let base: PatchRef = Arc::new(circle(params)?);
            Arc::new(Tube::new(base, params.positive("eps", 0.2)?, params.usize_or("k", 1)?, &check, &opts)?)
        }
        "cylinder_circle" => {
            params.expect_only(&["R", "a", "k"])?;
            Arc::new(Cylinder::new(Arc::new(circle(params)?), params.usize_or("k", 1)?)?)
        }
        "revolved_torus" => {
            params.expect_only(&["R", "a", "m"])?;
            Arc::new(SurfaceOfRevolution::new(placed_torus(params)?, params.usize_or("m", 1)?)?)
        }
        "cylinder_torus" => {
            params.expect_only(&["R", "a", "k"])?;
            Arc::new(Cylinder::new(placed_torus(params)?, params.usize_or("k", 1)?)?)
        }
        "iterated_pinkall" => {
            params.expect_only(&["t_min", "t_max", "eps"])?;
            Arc::new(iterated_pinkall(params.get_or("t_min", 1.0), params.get_or("t_max", 2.0), params.positive("eps", 0.5)?)?)
        }
        _ => return Ok(None),
    };
    Ok(Some(c))
}

/// Four curvature sphere families of a planted isoparametric frame.
#[derive(Debug, Clone)]
pub struct SyntheticPencil {
    pub families: Vec<SphereMapSamples>,
    pub w1: LorentzVector,
    pub w2: LorentzVector,
    pub transform: Option<LieTransform>,
}

/// Synthetic `g = 4` families in `R^{n+3}` orthogonal to a planted pair.
///
/// `W₁ = √2 e₀`, `W₂ = √2 e_{n+2}`. Lines `ℓ(x) = exp(Σ xⱼXⱼ) · span{e₀+e₁,
/// e_{n+2}+e_{n+1}}` over `x ∈ [−½, ½]^{n−1}` carry the points
/// `Kᵢ = ⟨Q,W⟩P − ⟨P,W⟩Q` for `W ∈ {W₁, W₂, W₁−W₂, W₁+W₂}`, which sit at
/// cross-ratio −1 on each line. With `conjugate`, everything is moved by a
/// random Lie transformation.
pub fn synthetic_isoparametric_pencil(seed: u64, n: usize, samples: usize, conjugate: bool) -> Result<SyntheticPencil> {
    if n < 2 || samples == 0 {
        return Err(Error::InvalidParameter(format!("synthetic pencil needs n ≥ 2 and samples > 0, got n = {n}")));
    }
    let d = n + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens: Vec<DMatrix<f64>> = (0..n - 1).map(|_| random_generator(&mut rng, d)).collect();
    let basis = |i: usize| {
        let mut e = DVector::zeros(d);
        e[i] = 1.0;
        e
    };
    let p0 = basis(0) + basis(1);
    let q0 = basis(d - 1) + basis(d - 2);
    let w1 = basis(0) * SQRT_2;
    let w2 = basis(d - 1) * SQRT_2;
    let targets = [w1.clone(), w2.clone(), &w1 - &w2, &w1 + &w2];
    let transform = if conjugate { Some(random_lie_transform(seed ^ 0x5eed, n, 0.7)?) } else { None };
    let lie = crate::linalg::lie_metric(d);
    let ip = |a: &DVector<f64>, b: &DVector<f64>| a.dot(&(&lie * b));
    let mut reps: Vec<Vec<LorentzVector>> = vec![Vec::with_capacity(samples); 4];
    for _ in 0..samples {
        let x: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let gen = gens.iter().zip(&x).fold(DMatrix::zeros(d, d), |acc, (g, c)| acc + g * *c);
        let b = polish(&expm(&gen));
        let (p, q) = (&b * &p0, &b * &q0);
        for (fam, w) in reps.iter_mut().zip(&targets) {
            let k = &p * ip(&q, w) - &q * ip(&p, w);
            let k = match &transform {
                Some(a) => a.apply_raw(&k),
                None => k,
            };
            fam.push(LorentzVector::from_dvector(k)?);
        }
    }
    let families = reps
        .into_iter()
        .enumerate()
        .map(|(i, r)| SphereMapSamples::new(i, 1, r, 1e-8))
        .collect::<Result<Vec<_>>>()?;
    let (w1, w2) = match &transform {
        Some(a) => (a.apply_raw(&w1), a.apply_raw(&w2)),
        None => (w1, w2),
    };
    Ok(SyntheticPencil {
        families,
        w1: LorentzVector::from_dvector(w1)?,
        w2: LorentzVector::from_dvector(w2)?,
        transform,
    })
}
