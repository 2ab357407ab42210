//! Principal curvatures, curvature spheres, Lie curvature and Dupin checks.
//!
//! Sign convention: `A = −dξ` on tangent vectors, so `I = dfᵀdf`,
//! `II = −dfᵀdξ` and `A = I⁻¹ II`. A round sphere with inward normal has
//! positive curvature.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::LorentzVector;
use crate::patch::{jet, Grid, HypersurfacePatch, Jet, JetOptions, JetSource};
use crate::lift::{lift, LegendreSample};
use crate::quadric::{ProjectivePair, QuadricPoint};

/// Relative self-adjointness tolerance for `I·A − Aᵀ·I`.
pub const SELF_ADJOINT_TOL: f64 = 1e-8;

/// Numerical knobs for curvature analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub jet: JetOptions,
    /// Relative tolerance for merging eigenvalues.
    pub cluster_tol: f64,
    /// Threshold on `|dκ(X)|` for flagging a patch as Dupin.
    pub dupin_tol: f64,
    /// Arc-length step for differentiating curvatures.
    pub dupin_step: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { jet: JetOptions::default(), cluster_tol: 1e-6, dupin_tol: 1e-6, dupin_step: 1e-4 }
    }
}

/// Shape operator in the coordinate tangent basis, with both fundamental forms.
#[derive(Debug, Clone)]
pub struct ShapeOperator {
    pub matrix: DMatrix<f64>,
    pub first: DMatrix<f64>,
    pub second: DMatrix<f64>,
    /// `‖II − IIᵀ‖ / ‖II‖`, i.e. `‖I·A − Aᵀ·I‖ / ‖I·A‖`.
    pub self_adjoint_defect: f64,
}

/// `A = I⁻¹ II` from a first jet.
pub fn shape_operator_from_jet(jet: &Jet) -> Result<ShapeOperator> {
    let d = jet.param_dim();
    let first = DMatrix::from_fn(d, d, |i, j| jet.df[i].dot(&jet.df[j]));
    let second = DMatrix::from_fn(d, d, |i, j| -jet.df[i].dot(&jet.dxi[j]));
    let chol = first
        .clone()
        .cholesky()
        .filter(|c| c.l().diagonal().iter().all(|v| *v > 1e-12 * first.norm().sqrt()))
        .ok_or_else(|| Error::DegenerateMetric(jet.u.clone()))?;
    let matrix = chol.solve(&second);
    let scale = second.norm();
    let self_adjoint_defect =
        if scale > 0.0 { (&second - second.transpose()).norm() / scale } else { 0.0 };
    Ok(ShapeOperator { matrix, first, second, self_adjoint_defect })
}

/// Shape operator of the patch at `u`.
pub fn shape_operator(patch: &dyn HypersurfacePatch, u: &[f64], opts: &JetOptions) -> Result<ShapeOperator> {
    let (j, _) = jet(patch, u, opts)?;
    shape_operator_from_jet(&j)
}

/// One distinct principal curvature.
#[derive(Debug, Clone, Serialize)]
pub struct PrincipalCurvature {
    pub kappa: ProjectivePair,
    pub multiplicity: usize,
    /// Positions of this cluster in the ascending eigenvalue list.
    pub positions: Vec<usize>,
    /// I-orthonormal principal directions as coordinate vectors (columns).
    #[serde(skip)]
    pub basis: DMatrix<f64>,
}

impl PrincipalCurvature {
    pub fn value(&self) -> f64 {
        self.kappa.r / self.kappa.s
    }
}

/// Result of the generalized eigenproblem `II x = κ I x` after clustering.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// I-orthonormal eigenvectors matching `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
    pub curvatures: Vec<PrincipalCurvature>,
    /// Two clusters are closer than twice the merge tolerance.
    pub ambiguous: bool,
}

impl Decomposition {
    pub fn g(&self) -> usize {
        self.curvatures.len()
    }
}

fn merge_gap(a: f64, b: f64, tol: f64) -> f64 {
    tol * (1.0 + a.abs().max(b.abs()))
}

/// Ascending generalized eigenpairs of `(II, I)`.
fn generalized_eigen(shape: &ShapeOperator) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if shape.self_adjoint_defect > SELF_ADJOINT_TOL {
        return Err(Error::NotSelfAdjoint(shape.self_adjoint_defect));
    }
    let chol = shape.first.clone().cholesky().ok_or_else(|| Error::DegenerateMetric(vec![]))?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or_else(|| Error::DegenerateMetric(vec![]))?;
    let sym = (&shape.second + shape.second.transpose()) * 0.5;
    let c = &l_inv * sym * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = l_inv.transpose() * eig.eigenvectors.select_columns(&order);
    Ok((values, vecs))
}

/// Eigen-decomposition of the shape operator with multiplicity clustering.
pub fn principal_decomposition(shape: &ShapeOperator, cluster_tol: f64) -> Result<Decomposition> {
    let (eigenvalues, eigenvectors) = generalized_eigen(shape)?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut ambiguous = false;
    for (k, &v) in eigenvalues.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - eigenvalues[k - 1] <= merge_gap(v, eigenvalues[k - 1], cluster_tol) => g.push(k),
            _ => {
                if k > 0 && v - eigenvalues[k - 1] <= 2.0 * merge_gap(v, eigenvalues[k - 1], cluster_tol) {
                    ambiguous = true;
                }
                groups.push(vec![k]);
            }
        }
    }
    let curvatures = groups
        .into_iter()
        .map(|positions| {
            let mean = positions.iter().map(|&k| eigenvalues[k]).sum::<f64>() / positions.len() as f64;
            PrincipalCurvature {
                kappa: ProjectivePair::finite(mean),
                multiplicity: positions.len(),
                basis: eigenvectors.select_columns(&positions),
                positions,
            }
        })
        .collect();
    Ok(Decomposition { eigenvalues, eigenvectors, curvatures, ambiguous })
}

/// Curvature data at one point: principal curvatures and their spheres.
#[derive(Debug, Clone)]
pub struct CurvaturePencil {
    pub sample: LegendreSample,
    pub shape: ShapeOperator,
    pub decomposition: Decomposition,
    /// `[κᵢ Y₀ + Y₁]`, in the order of `decomposition.curvatures`.
    pub spheres: Vec<QuadricPoint>,
}

impl CurvaturePencil {
    pub fn u(&self) -> &[f64] {
        self.sample.u()
    }

    pub fn g(&self) -> usize {
        self.decomposition.g()
    }

    pub fn curvatures(&self) -> &[PrincipalCurvature] {
        &self.decomposition.curvatures
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.curvatures().iter().map(|c| c.multiplicity).collect()
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.curvatures().iter().map(PrincipalCurvature::value).collect()
    }
}

fn pencil_vector(sample: &LegendreSample, kappa: ProjectivePair) -> LorentzVector {
    let v = sample.y0.rep().coords() * kappa.r + sample.y1.rep().coords() * kappa.s;
    LorentzVector::from_dvector_unchecked(v)
}

/// Curvature pencil of a lifted sample.
pub fn pencil_from_sample(sample: LegendreSample, cluster_tol: f64) -> Result<CurvaturePencil> {
    let shape = shape_operator_from_jet(&sample.jet)?;
    let decomposition = principal_decomposition(&shape, cluster_tol).map_err(|e| match e {
        Error::DegenerateMetric(_) => Error::DegenerateMetric(sample.jet.u.clone()),
        other => other,
    })?;
    let spheres = decomposition
        .curvatures
        .iter()
        .map(|c| QuadricPoint::new_unchecked(pencil_vector(&sample, c.kappa)))
        .collect();
    Ok(CurvaturePencil { sample, shape, decomposition, spheres })
}

/// Lift and decompose at `u`.
pub fn curvature_pencil(patch: &dyn HypersurfacePatch, u: &[f64], opts: &AnalysisOptions) -> Result<CurvaturePencil> {
    pencil_from_sample(lift(patch, u, &opts.jet)?, opts.cluster_tol)
}

/// Pencils over a grid, in grid order.
pub fn pencil_grid(patch: &dyn HypersurfacePatch, grid: &Grid, opts: &AnalysisOptions) -> Result<Vec<CurvaturePencil>> {
    grid.points(patch.domain())?
        .par_iter()
        .map(|u| curvature_pencil(patch, u, opts))
        .collect()
}

/// How far `d(rY₀ + sY₁)(X)` leaves `span{Y₀, Y₁}`, relative to its size.
///
/// `(r, s)` is the i-th curvature of the pencil and `X` a coordinate tangent
/// vector. Near zero exactly when `X` is a principal vector for that sphere;
/// a non-principal `X` yields a large value rather than an error.
pub fn curvature_sphere_residual(pencil: &CurvaturePencil, i: usize, x: &[f64]) -> Result<f64> {
    let curv = pencil.curvatures();
    let c = curv.get(i).ok_or(Error::OutOfRange { index: i, len: curv.len() })?;
    let sample = &pencil.sample;
    if x.len() != sample.dy0.len() {
        return Err(Error::DimensionMismatch { expected: sample.dy0.len(), found: x.len() });
    }
    let combine = |ds: &[LorentzVector]| -> DVector<f64> {
        ds.iter().zip(x).fold(DVector::zeros(sample.y0.rep().len()), |acc, (d, w)| acc + d.coords() * *w)
    };
    let d0 = combine(&sample.dy0);
    let d1 = combine(&sample.dy1);
    let (r, s) = (c.kappa.r, c.kappa.s);
    let scale = r.abs() * d0.norm() + s.abs() * d1.norm();
    if scale == 0.0 {
        // the sphere does not move along X at all
        return Ok(0.0);
    }
    let v = &d0 * r + &d1 * s;
    let span = DMatrix::from_columns(&[sample.y0.rep().coords().clone(), sample.y1.rep().coords().clone()]);
    let coeffs = span
        .clone()
        .svd(true, true)
        .solve(&v, 1e-14)
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok((v - span * coeffs).norm() / scale)
}

fn cross_ratio_pairs(k: &[ProjectivePair; 4]) -> f64 {
    let d = |i: usize, j: usize| k[i].cross(&k[j]);
    (d(3, 1) * d(2, 0)) / (d(3, 0) * d(2, 1))
}

/// Cross-ratio `((κ₄−κ₂)(κ₃−κ₁)) / ((κ₄−κ₁)(κ₃−κ₂))`, evaluated projectively.
pub fn lie_curvature(kappas: &[ProjectivePair; 4]) -> Result<f64> {
    let k = kappas.map(|p| p.normalized());
    for i in 0..4 {
        for j in i + 1..4 {
            if k[i].cross(&k[j]).abs() <= 1e-12 {
                return Err(Error::RepeatedValues);
            }
        }
    }
    Ok(cross_ratio_pairs(&k))
}

/// Chosen ordering and cross-ratio of four curvatures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LieCurvatureResult {
    /// Indices into the input list.
    pub ordering: [usize; 4],
    pub r: f64,
    /// `r < 0` under an ordering that respects the multiplicity pairing.
    pub canonical: bool,
    /// Some ordering pairs equal multiplicities `m₁ = m₂`, `m₃ = m₄`.
    pub pairing_available: bool,
}

/// All 24 permutations of `0..4` in lexicographic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|v| p.contains(&v)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn pairs_multiplicities(p: &[usize; 4], m: &[usize]) -> bool {
    m[p[0]] == m[p[1]] && m[p[2]] == m[p[3]]
}

/// Ordering with `r ∈ [−1, 0)` that respects the multiplicity pairing when one
/// exists; ties go to the lexicographically smallest permutation.
pub fn canonical_lie_curvature(kappas: &[(ProjectivePair, usize)]) -> Result<LieCurvatureResult> {
    if kappas.len() != 4 {
        return Err(Error::CurvatureCount { expected: 4, found: kappas.len() });
    }
    let k: [ProjectivePair; 4] = std::array::from_fn(|i| kappas[i].0);
    let m: Vec<usize> = kappas.iter().map(|(_, m)| *m).collect();
    lie_curvature(&k)?;
    let perms = permutations4();
    let pairing_available = perms.iter().any(|p| pairs_multiplicities(p, &m));
    let mut candidates: Vec<([usize; 4], f64)> = perms
        .into_iter()
        .filter(|p| !pairing_available || pairs_multiplicities(p, &m))
        .map(|p| {
            let q = p.map(|i| k[i].normalized());
            (p, cross_ratio_pairs(&q))
        })
        .collect();
    let eps = 1e-12;
    if let Some(&(ordering, r)) = candidates.iter().find(|(_, r)| *r < 0.0 && *r >= -1.0 - eps) {
        return Ok(LieCurvatureResult { ordering, r, canonical: true, pairing_available });
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (ordering, r) = candidates[0];
    Ok(LieCurvatureResult { ordering, r, canonical: r < 0.0, pairing_available })
}

/// Lie curvature of a pencil with `g = 4`.
pub fn pencil_lie_curvature(pencil: &CurvaturePencil) -> Result<LieCurvatureResult> {
    let data: Vec<(ProjectivePair, usize)> =
        pencil.curvatures().iter().map(|c| (c.kappa, c.multiplicity)).collect();
    canonical_lie_curvature(&data)
}

/// Per-branch Dupin residuals over a grid.
#[derive(Debug, Clone, Serialize)]
pub struct DupinReport {
    /// Max `|dκ|` over unit principal vectors, per curvature rank (ascending κ).
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub points: usize,
    /// Points skipped because clusters were ambiguous or changed nearby.
    pub skipped: usize,
    pub tol: f64,
    pub is_dupin: bool,
}

fn sorted_eigenvalues(
    patch: &dyn HypersurfacePatch,
    u: &[f64],
    opts: &JetOptions,
) -> Result<Vec<f64>> {
    let (j, _) = jet(patch, u, opts)?;
    Ok(generalized_eigen(&shape_operator_from_jet(&j)?)?.0)
}

fn clusters_stable(values: &[f64], positions: &[Vec<usize>], tol: f64) -> bool {
    let spread_ok = positions.iter().all(|p| {
        let lo = values[p[0]];
        let hi = values[*p.last().unwrap()];
        hi - lo <= 10.0 * merge_gap(lo, hi, tol)
    });
    let gaps_ok = positions.windows(2).all(|w| {
        let a = values[*w[0].last().unwrap()];
        let b = values[w[1][0]];
        b - a > 2.0 * merge_gap(a, b, tol)
    });
    spread_ok && gaps_ok
}

/// Directional derivatives of each principal curvature along its own
/// principal directions, at one point. `None` when branches are ambiguous.
pub fn pointwise_dupin(
    patch: &dyn HypersurfacePatch,
    pencil: &CurvaturePencil,
    opts: &AnalysisOptions,
) -> Result<Option<Vec<f64>>> {
    let dec = &pencil.decomposition;
    if dec.ambiguous {
        return Ok(None);
    }
    // keep the jet method fixed across neighbouring evaluations
    let mut jopts = opts.jet;
    jopts.richardson_trigger = match pencil.sample.source {
        JetSource::Richardson => 0.0,
        _ => f64::INFINITY,
    };
    let positions: Vec<Vec<usize>> = dec.curvatures.iter().map(|c| c.positions.clone()).collect();
    let t = opts.dupin_step;
    let u = pencil.u();
    let mut out = Vec::with_capacity(positions.len());
    for (c, pos) in dec.curvatures.iter().zip(&positions) {
        let mut sum = 0.0;
        for b in c.basis.column_iter() {
            let shifted = |sign: f64| -> Vec<f64> { u.iter().zip(b.iter()).map(|(x, d)| x + sign * t * d).collect() };
            let plus = sorted_eigenvalues(patch, &shifted(1.0), &jopts)?;
            let minus = sorted_eigenvalues(patch, &shifted(-1.0), &jopts)?;
            if !clusters_stable(&plus, &positions, opts.cluster_tol)
                || !clusters_stable(&minus, &positions, opts.cluster_tol)
            {
                return Ok(None);
            }
            let mean = |v: &[f64]| pos.iter().map(|&k| v[k]).sum::<f64>() / pos.len() as f64;
            let dk = (mean(&plus) - mean(&minus)) / (2.0 * t);
            sum += dk * dk;
        }
        out.push(sum.sqrt());
    }
    Ok(Some(out))
}

/// Dupin residuals of a patch over a grid.
pub fn dupin_residual(patch: &dyn HypersurfacePatch, grid: &Grid, opts: &AnalysisOptions) -> Result<DupinReport> {
    let pencils = pencil_grid(patch, grid, opts)?;
    dupin_from_pencils(patch, &pencils, opts)
}

/// Dupin residuals from precomputed pencils.
pub fn dupin_from_pencils(
    patch: &dyn HypersurfacePatch,
    pencils: &[CurvaturePencil],
    opts: &AnalysisOptions,
) -> Result<DupinReport> {
    let per_point: Vec<Option<Vec<f64>>> = pencils
        .par_iter()
        .map(|p| pointwise_dupin(patch, p, opts))
        .collect::<Result<_>>()?;
    let mut residuals: Vec<f64> = Vec::new();
    let mut skipped = 0;
    for r in &per_point {
        match r {
            None => skipped += 1,
            Some(v) => {
                if residuals.len() < v.len() {
                    residuals.resize(v.len(), 0.0);
                }
                for (acc, x) in residuals.iter_mut().zip(v) {
                    *acc = acc.max(*x);
                }
            }
        }
    }
    if skipped == pencils.len() && !pencils.is_empty() {
        return Err(Error::BranchMatching(pencils[0].u().to_vec()));
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(DupinReport {
        residuals,
        max_residual,
        points: pencils.len(),
        skipped,
        tol: opts.dupin_tol,
        is_dupin: max_residual <= opts.dupin_tol,
    })
}

/// Whether the number of distinct principal curvatures is constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProperDupin {
    pub is_proper: bool,
    /// `g` at the first grid point.
    pub g: usize,
    pub g_min: usize,
    pub g_max: usize,
}

pub fn proper_dupin_from_pencils(pencils: &[CurvaturePencil]) -> Result<ProperDupin> {
    let first = pencils.first().ok_or(Error::Empty("grid"))?.g();
    let (g_min, g_max) = pencils.iter().fold((first, first), |(lo, hi), p| (lo.min(p.g()), hi.max(p.g())));
    Ok(ProperDupin { is_proper: g_min == g_max, g: first, g_min, g_max })
}

pub fn proper_dupin_check(patch: &dyn HypersurfacePatch, grid: &Grid, opts: &AnalysisOptions) -> Result<ProperDupin> {
    proper_dupin_from_pencils(&pencil_grid(patch, grid, opts)?)
}
