//! Reducibility, construction type, isoparametric witness and immersing
//! transformations from sampled curvature sphere maps.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{canonical_lie_curvature, permutations4, CurvaturePencil, LieCurvatureResult};
use crate::error::{Error, Result};
use crate::linalg::{
    lie_metric, numerical_rank, polish, raw_inner, restricted_gram, restricted_signature,
    LieTransform, LorentzVector, Signature, SubspaceBasis, DEFAULT_TRANSFORM_TOL,
};
use crate::quadric::ProjectivePair;

/// Default relative rank tolerance for sample spans.
pub const REDUCIBILITY_TOL: f64 = 1e-8;
/// Default zero band for signature eigenvalues.
pub const SIGNATURE_TOL: f64 = 1e-8;
/// Default tolerance for the witness search.
pub const WITNESS_TOL: f64 = 1e-8;

/// Normalized representatives of one curvature sphere map over a grid.
#[derive(Debug, Clone)]
pub struct SphereMapSamples {
    pub family: usize,
    pub multiplicity: usize,
    pub reps: Vec<LorentzVector>,
}

impl SphereMapSamples {
    /// Normalizes each representative and checks it is null (relative `tol`).
    pub fn new(family: usize, multiplicity: usize, reps: Vec<LorentzVector>, tol: f64) -> Result<Self> {
        if reps.is_empty() {
            return Err(Error::Empty("sphere map samples"));
        }
        let dim = reps[0].len();
        let reps = reps
            .into_iter()
            .map(|r| {
                if r.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
                }
                let c = r.canonical()?;
                let q = c.square().abs();
                if q > tol {
                    return Err(Error::OffQuadric(q));
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { family, multiplicity, reps })
    }

    pub fn dim(&self) -> usize {
        self.reps[0].len()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives as rows.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.len(), self.dim(), |i, j| self.reps[i].coords()[j])
    }

    pub fn transformed(&self, a: &LieTransform) -> Result<Self> {
        let reps = self.reps.iter().map(|r| a.apply(r)).collect::<Result<Vec<_>>>()?;
        Self::new(self.family, self.multiplicity, reps, 1e-8)
    }
}

/// Splits pencils into curvature sphere families by ascending curvature.
///
/// Requires the same `g` and multiplicities at every point.
pub fn families_from_pencils(pencils: &[CurvaturePencil]) -> Result<Vec<SphereMapSamples>> {
    let first = pencils.first().ok_or(Error::Empty("pencils"))?;
    let mults = first.multiplicities();
    for p in pencils {
        if p.g() != first.g() {
            return Err(Error::CurvatureCount { expected: first.g(), found: p.g() });
        }
        if p.multiplicities() != mults {
            return Err(Error::BranchMatching(p.u().to_vec()));
        }
    }
    (0..first.g())
        .map(|i| {
            let reps = pencils.iter().map(|p| p.spheres[i].rep().clone()).collect();
            SphereMapSamples::new(i, mults[i], reps, 1e-8)
        })
        .collect()
}

/// Construction type read off the signature of `E^⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstructionTag {
    Revolution,
    Tube,
    Cylinder,
    Unknown,
}

/// Three-valued outcome for evidence that cannot certify absence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

/// Span analysis of one curvature sphere family.
#[derive(Debug, Clone, Serialize)]
pub struct FamilySpan {
    pub family: usize,
    pub samples: usize,
    pub span_dim: usize,
    /// `(n+3) − span_dim`.
    pub codim: usize,
    pub reducible: Verdict,
    /// `codim − 1` when reducible.
    pub m: Option<usize>,
    pub singular_values: Vec<f64>,
    /// Signature of the form on `E^⊥`.
    pub perp_signature: Option<Signature>,
    pub construction: ConstructionTag,
    #[serde(skip)]
    pub e: SubspaceBasis,
    #[serde(skip)]
    pub e_perp: SubspaceBasis,
}

/// Reducibility over all families; the reported family has maximal codimension.
#[derive(Debug, Clone, Serialize)]
pub struct ReducibilityVerdict {
    pub reducible: Verdict,
    pub family: Option<usize>,
    pub span_dim: Option<usize>,
    pub m: Option<usize>,
    pub construction: ConstructionTag,
    pub families: Vec<FamilySpan>,
    pub warnings: Vec<String>,
    pub rank_tol: f64,
    pub signature_tol: f64,
}

/// Tag from the signature of `E^⊥`, of dimension `m + 1`.
pub fn classify_signature(sig: &Signature, m: usize) -> ConstructionTag {
    match (sig.pos, sig.neg, sig.null) {
        (p, 0, 0) if p == m + 1 => ConstructionTag::Revolution,
        (p, 1, 0) if p == m => ConstructionTag::Tube,
        (p, 0, 1) if p == m => ConstructionTag::Cylinder,
        _ => ConstructionTag::Unknown,
    }
}

/// Construction tag of a reducible family.
pub fn classify_construction(span: &FamilySpan) -> ConstructionTag {
    match (span.perp_signature, span.m) {
        (Some(sig), Some(m)) => classify_signature(&sig, m),
        _ => ConstructionTag::Unknown,
    }
}

/// Span, complement and signature of one family.
pub fn family_span(samples: &SphereMapSamples, rank_tol: f64, signature_tol: f64) -> Result<FamilySpan> {
    let dim = samples.dim();
    let info = numerical_rank(&samples.matrix(), rank_tol)?;
    let span_dim = info.rank;
    let codim = dim - span_dim;
    let enough = samples.len() >= dim;
    let reducible = match (codim >= 2, enough) {
        (true, true) => Verdict::Yes,
        (false, _) => Verdict::No,
        (true, false) => Verdict::Inconclusive,
    };
    let e_perp = SubspaceBasis::from_columns(lie_metric(dim) * info.nullspace.columns());
    let (m, perp_signature) = if reducible == Verdict::Yes {
        (Some(codim - 1), Some(restricted_signature(&e_perp, signature_tol)?))
    } else {
        (None, None)
    };
    let mut span = FamilySpan {
        family: samples.family,
        samples: samples.len(),
        span_dim,
        codim,
        reducible,
        m,
        singular_values: info.singular_values,
        perp_signature,
        construction: ConstructionTag::Unknown,
        e: info.row_space,
        e_perp,
    };
    span.construction = classify_construction(&span);
    Ok(span)
}

/// Sampled-span reducibility test over all curvature sphere families.
pub fn reducibility_detect(
    families: &[SphereMapSamples],
    rank_tol: f64,
    signature_tol: f64,
) -> Result<ReducibilityVerdict> {
    if families.is_empty() {
        return Err(Error::Empty("families"));
    }
    let spans = families
        .iter()
        .map(|f| family_span(f, rank_tol, signature_tol))
        .collect::<Result<Vec<_>>>()?;
    let warnings = spans
        .iter()
        .filter(|s| s.reducible == Verdict::Inconclusive)
        .map(|s| format!("family {} has {} samples for a {}-dimensional ambient space", s.family, s.samples, s.codim + s.span_dim))
        .collect();
    let best = spans
        .iter()
        .filter(|s| s.reducible == Verdict::Yes)
        .fold(None::<&FamilySpan>, |acc, s| match acc {
            Some(b) if b.codim >= s.codim => Some(b),
            _ => Some(s),
        });
    let reducible = if best.is_some() {
        Verdict::Yes
    } else if spans.iter().any(|s| s.reducible == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::No
    };
    Ok(ReducibilityVerdict {
        reducible,
        family: best.map(|b| b.family),
        span_dim: best.map(|b| b.span_dim),
        m: best.and_then(|b| b.m),
        construction: best.map_or(ConstructionTag::Unknown, |b| b.construction),
        families: spans,
        warnings,
        rank_tol,
        signature_tol,
    })
}

/// Münzner-type conditions for `g = 4`.
#[derive(Debug, Clone, Serialize)]
pub struct NecessaryConditions {
    pub holds: bool,
    pub pairing: bool,
    pub lie_curvature: LieCurvatureResult,
    pub tol: f64,
}

/// `m₁ = m₂`, `m₃ = m₄` for some ordering and canonical `r = −1`.
pub fn necessary_conditions(kappas: &[(ProjectivePair, usize)], tol: f64) -> Result<NecessaryConditions> {
    let lc = canonical_lie_curvature(kappas)?;
    let holds = lc.pairing_available && lc.canonical && (lc.r + 1.0).abs() <= tol;
    Ok(NecessaryConditions { holds, pairing: lc.pairing_available, lie_curvature: lc, tol })
}

/// Constant vectors `W₁, W₂` spanning a timelike plane with the orthogonality
/// pattern of an isoparametric frame.
#[derive(Debug, Clone, Serialize)]
pub struct IsoparametricWitness {
    pub w1: Vec<f64>,
    pub w2: Vec<f64>,
    /// Families assigned to the slots `(W₁, W₂, W₁−W₂, W₁+W₂)`.
    pub ordering: [usize; 4],
    /// Max `|⟨K, W⟩| / (‖K‖ ‖W‖)` over all samples.
    pub replay_residual: f64,
    /// Max defect of `⟨W₁,W₁⟩ = ⟨W₂,W₂⟩ = −2`, `⟨W₁,W₂⟩ = 0`.
    pub quadratic_residual: f64,
}

/// Result of a witness search.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessSearch {
    pub verdict: Verdict,
    pub witness: Option<IsoparametricWitness>,
    /// Nullspace dimension per tried ordering, in order.
    pub nullspace_dims: Vec<usize>,
    pub undersampled: bool,
    pub tol: f64,
}

// signs of W₁ and W₂ in each slot
const SLOT_COEFFS: [(f64, f64); 4] = [(1.0, 0.0), (0.0, 1.0), (1.0, -1.0), (1.0, 1.0)];

fn witness_system(families: &[&SphereMapSamples; 4]) -> DMatrix<f64> {
    let dim = families[0].dim();
    let g = lie_metric(dim);
    let rows: usize = families.iter().map(|f| f.len()).sum();
    let mut m = DMatrix::zeros(rows, 2 * dim);
    let mut r = 0;
    for (fam, &(a, b)) in families.iter().zip(&SLOT_COEFFS) {
        for k in &fam.reps {
            let kg = (&g * k.coords()).transpose();
            m.view_mut((r, 0), (1, dim)).copy_from(&(&kg * a));
            m.view_mut((r, dim), (1, dim)).copy_from(&(&kg * b));
            r += 1;
        }
    }
    m
}

fn replay(families: &[&SphereMapSamples; 4], w1: &DVector<f64>, w2: &DVector<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (fam, &(a, b)) in families.iter().zip(&SLOT_COEFFS) {
        let w = w1 * a + w2 * b;
        let nw = w.norm();
        for k in &fam.reps {
            worst = worst.max(raw_inner(k.as_slice(), w.as_slice()).abs() / (k.norm() * nw));
        }
    }
    worst
}

struct Quadratic {
    g11: DMatrix<f64>,
    g22: DMatrix<f64>,
    g12: DMatrix<f64>,
}

impl Quadratic {
    fn residuals(&self, c: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(vec![
            c.dot(&(&self.g11 * c)) + 2.0,
            c.dot(&(&self.g22 * c)) + 2.0,
            c.dot(&(&self.g12 * c)),
        ])
    }

    fn jacobian(&self, c: &DVector<f64>) -> DMatrix<f64> {
        let rows = [&self.g11 * c * 2.0, &self.g22 * c * 2.0, &self.g12 * c * 2.0];
        DMatrix::from_fn(3, c.len(), |i, j| rows[i][j])
    }

    /// Damped Gauss–Newton from `c`.
    fn solve(&self, mut c: DVector<f64>) -> (DVector<f64>, f64) {
        let k = c.len();
        let mut lambda = 1e-3;
        let mut res = self.residuals(&c);
        for _ in 0..200 {
            let norm = res.amax();
            if norm < 1e-14 {
                break;
            }
            let j = self.jacobian(&c);
            let jt = j.transpose();
            let lhs = &jt * &j + DMatrix::identity(k, k) * lambda;
            let Some(step) = lhs.cholesky().map(|ch| ch.solve(&(&jt * &res))) else {
                lambda *= 10.0;
                continue;
            };
            let trial = &c - step;
            let trial_res = self.residuals(&trial);
            if trial_res.amax() < norm {
                c = trial;
                res = trial_res;
                lambda = (lambda * 0.3).max(1e-15);
            } else {
                lambda *= 10.0;
                if lambda > 1e12 {
                    break;
                }
            }
        }
        let r = res.amax();
        (c, r)
    }
}

/// Witness candidate within the nullspace `null` of the linear system.
fn quadratic_stage(null: &DMatrix<f64>, dim: usize, seed: u64) -> Option<(DVector<f64>, DVector<f64>, f64)> {
    let n1 = null.rows(0, dim).into_owned();
    let n2 = null.rows(dim, dim).into_owned();
    let sym = |m: DMatrix<f64>| (&m + m.transpose()) * 0.5;
    let g = lie_metric(dim);
    let q = Quadratic {
        g11: restricted_gram(&n1),
        g22: restricted_gram(&n2),
        g12: sym(n1.transpose() * &g * &n2),
    };
    let k = null.ncols();
    if k == 1 {
        let (a, b, c) = (q.g11[(0, 0)], q.g22[(0, 0)], q.g12[(0, 0)]);
        if a >= 0.0 {
            return None;
        }
        let s = (-2.0 / a).sqrt();
        let resid = [(a * s * s + 2.0).abs(), (b * s * s + 2.0).abs(), (c * s * s).abs()]
            .into_iter()
            .fold(0.0, f64::max);
        let w = null.column(0) * s;
        return Some((w.rows(0, dim).into_owned(), w.rows(dim, dim).into_owned(), resid));
    }
    let mut starts: Vec<DVector<f64>> = Vec::new();
    for m in [&q.g11, &q.g22] {
        let eig = m.clone().symmetric_eigen();
        for (i, l) in eig.eigenvalues.iter().enumerate() {
            if *l < 0.0 {
                starts.push(eig.eigenvectors.column(i) * (2.0 / -l).sqrt());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        starts.push(DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0)));
    }
    starts
        .into_iter()
        .map(|s| q.solve(s))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, r)| {
            let w = null * c;
            (w.rows(0, dim).into_owned(), w.rows(dim, dim).into_owned(), r)
        })
}

/// Searches constant `W₁, W₂` with `⟨K₁,W₁⟩ = ⟨K₂,W₂⟩ = ⟨K₃,W₁−W₂⟩ = ⟨K₄,W₁+W₂⟩ = 0`
/// on all samples and `⟨W₁,W₁⟩ = ⟨W₂,W₂⟩ = −2`, `⟨W₁,W₂⟩ = 0`.
///
/// Every assignment of families to slots is tried (restricted to those pairing
/// equal multiplicities when `respect_multiplicities`); the smallest replay
/// residual wins, ties to the lexicographically first ordering.
pub fn isoparametric_witness(
    families: &[SphereMapSamples],
    tol: f64,
    respect_multiplicities: bool,
) -> Result<WitnessSearch> {
    if families.len() != 4 {
        return Err(Error::CurvatureCount { expected: 4, found: families.len() });
    }
    let dim = families[0].dim();
    if families.iter().any(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: families.iter().map(|f| f.dim()).find(|d| *d != dim).unwrap_or(dim) });
    }
    let m: Vec<usize> = families.iter().map(|f| f.multiplicity).collect();
    let pairs = |p: &[usize; 4]| m[p[0]] == m[p[1]] && m[p[2]] == m[p[3]];
    let perms = permutations4();
    let pairing_exists = perms.iter().any(|p| pairs(p));
    let orderings: Vec<[usize; 4]> = perms
        .into_iter()
        .filter(|p| !respect_multiplicities || !pairing_exists || pairs(p))
        .collect();
    let outcomes: Vec<(usize, bool, Option<IsoparametricWitness>)> = orderings
        .par_iter()
        .enumerate()
        .map(|(idx, p)| -> Result<_> {
            let fams = [&families[p[0]], &families[p[1]], &families[p[2]], &families[p[3]]];
            let system = witness_system(&fams);
            let info = numerical_rank(&system, tol)?;
            let null = info.nullspace.columns();
            let k = null.ncols();
            if k == 0 {
                return Ok((0, false, None));
            }
            let found = quadratic_stage(null, dim, idx as u64).and_then(|(w1, w2, quad)| {
                let replay_residual = replay(&fams, &w1, &w2);
                (quad <= tol && replay_residual <= tol).then(|| IsoparametricWitness {
                    w1: w1.iter().copied().collect(),
                    w2: w2.iter().copied().collect(),
                    ordering: *p,
                    replay_residual,
                    quadratic_residual: quad,
                })
            });
            Ok((k, k > 4, found))
        })
        .collect::<Result<_>>()?;
    let nullspace_dims: Vec<usize> = outcomes.iter().map(|o| o.0).collect();
    let undersampled = outcomes.iter().any(|o| o.1);
    let witness = outcomes
        .into_iter()
        .filter_map(|o| o.2)
        .fold(None::<IsoparametricWitness>, |best, w| match best {
            Some(b) if b.replay_residual <= w.replay_residual => Some(b),
            _ => Some(w),
        });
    let verdict = match (&witness, undersampled) {
        (Some(_), _) => Verdict::Yes,
        (None, true) => Verdict::Inconclusive,
        (None, false) => Verdict::No,
    };
    Ok(WitnessSearch { verdict, witness, nullspace_dims, undersampled, tol })
}

/// Whether the plane spanned by `(a1, a2)` equals that of `(b1, b2)`.
pub fn same_plane(a1: &[f64], a2: &[f64], b1: &[f64], b2: &[f64], tol: f64) -> bool {
    let cols = |x: &[f64], y: &[f64]| DMatrix::from_columns(&[DVector::from_column_slice(x), DVector::from_column_slice(y)]);
    let joint = {
        let a = cols(a1, a2);
        let b = cols(b1, b2);
        let mut m = DMatrix::zeros(a.nrows(), 4);
        m.columns_mut(0, 2).copy_from(&a);
        m.columns_mut(2, 2).copy_from(&b);
        m
    };
    numerical_rank(&joint.transpose(), tol).map(|r| r.rank == 2).unwrap_or(false)
}

/// Search settings for a unit timelike `v` avoiding all curvature spheres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ImmersionOptions {
    pub starts: usize,
    pub steps: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for ImmersionOptions {
    fn default() -> Self {
        Self { starts: 256, steps: 50, tol: 1e-6, seed: 0 }
    }
}

/// Outcome of the immersing-transform search.
#[derive(Debug, Clone, Serialize)]
pub struct ImmersionSearch {
    pub verdict: Verdict,
    /// Best unit timelike vector found.
    pub v: Vec<f64>,
    /// `min |⟨k̂, v̂⟩|` over normalized samples, `v̂ = v/‖v‖`.
    pub min_inner: f64,
    /// Index of the winning start (0 is `e_{n+2}`).
    pub start: usize,
    #[serde(skip)]
    pub transform: Option<LieTransform>,
    pub tol: f64,
}

/// `v(θ, x) = (c cos θ, x, c sin θ)` with `c = √(1+|x|²)`; always unit timelike.
fn timelike(theta: f64, x: &[f64]) -> DVector<f64> {
    let c = (1.0 + x.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let mut v = DVector::zeros(x.len() + 2);
    v[0] = c * theta.cos();
    v.rows_mut(1, x.len()).copy_from_slice(x);
    v[x.len() + 1] = c * theta.sin();
    v
}

fn min_inner(reps: &[DVector<f64>], v: &DVector<f64>) -> (f64, usize) {
    let nv = v.norm();
    reps.iter()
        .enumerate()
        .map(|(i, k)| (raw_inner(k.as_slice(), v.as_slice()).abs() / nv, i))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
}

// subgradient ascent on the active constraint, with backtracking
fn ascend(reps: &[DVector<f64>], mut params: Vec<f64>, steps: usize) -> (Vec<f64>, f64) {
    let d = reps[0].len();
    let g = lie_metric(d);
    let eval = |p: &[f64]| min_inner(reps, &timelike(p[0], &p[1..]));
    let (mut best, mut active) = eval(&params);
    let mut step = 0.1;
    for _ in 0..steps {
        let v = timelike(params[0], &params[1..]);
        let nv = v.norm();
        let k = &reps[active];
        let ip = raw_inner(k.as_slice(), v.as_slice());
        let grad_v = (&g * k) * (ip.signum() / nv) - &v * (ip.abs() / (nv * nv * nv));
        let c = (1.0 + params[1..].iter().map(|x| x * x).sum::<f64>()).sqrt();
        let (s, co) = params[0].sin_cos();
        let mut grad = vec![0.0; params.len()];
        grad[0] = grad_v[0] * (-c * s) + grad_v[d - 1] * (c * co);
        for i in 1..params.len() {
            let x = params[i];
            grad[i] = grad_v[0] * (x / c * co) + grad_v[i] + grad_v[d - 1] * (x / c * s);
        }
        let gn = grad.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gn == 0.0 {
            break;
        }
        let mut improved = false;
        for _ in 0..8 {
            let trial: Vec<f64> = params.iter().zip(&grad).map(|(p, gr)| p + step * gr / gn).collect();
            let (val, act) = eval(&trial);
            if val > best {
                params = trial;
                best = val;
                active = act;
                step *= 1.5;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (params, best)
}

/// Searches a unit timelike `v` with `⟨k, v⟩ ≠ 0` on every sample and, on
/// success, builds `A ∈ O(n+1,2)` with `A v = e_{n+2}`.
pub fn find_immersing_transform(samples: &[LorentzVector], opts: &ImmersionOptions) -> Result<ImmersionSearch> {
    let first = samples.first().ok_or(Error::Empty("curvature sphere samples"))?;
    let d = first.len();
    let reps: Vec<DVector<f64>> = samples.iter().map(|k| k.coords() / k.norm()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = vec![{
        let mut p = vec![0.0; d - 1];
        p[0] = std::f64::consts::FRAC_PI_2;
        p
    }];
    for _ in 1..opts.starts.max(1) {
        let mut p = vec![rng.gen_range(0.0..std::f64::consts::TAU)];
        p.extend((0..d - 2).map(|_| rng.gen_range(-1.0..1.0)));
        starts.push(p);
    }
    let results: Vec<(Vec<f64>, f64)> = starts.into_par_iter().map(|p| ascend(&reps, p, opts.steps)).collect();
    let (start, (params, best)) = results
        .into_iter()
        .enumerate()
        .fold(None::<(usize, (Vec<f64>, f64))>, |acc, (i, r)| match acc {
            Some(a) if a.1 .1 >= r.1 => Some(a),
            _ => Some((i, r)),
        })
        .expect("at least one start");
    let v = timelike(params[0], &params[1..]);
    let success = best >= opts.tol;
    let transform = if success { Some(transform_sending_to_last(&v)?) } else { None };
    Ok(ImmersionSearch {
        verdict: if success { Verdict::Yes } else { Verdict::Inconclusive },
        v: v.iter().copied().collect(),
        min_inner: best,
        start,
        transform,
        tol: opts.tol,
    })
}

/// `A ∈ O(n+1,2)` with `A v = e_{n+2}` for a unit timelike `v`.
pub fn transform_sending_to_last(v: &DVector<f64>) -> Result<LieTransform> {
    let d = v.len();
    let q = raw_inner(v.as_slice(), v.as_slice());
    if (q + 1.0).abs() > 1e-10 * v.norm_squared().max(1.0) {
        return Err(Error::NotUnit(q));
    }
    let g = lie_metric(d);
    let mut chosen: Vec<(DVector<f64>, f64)> = vec![(v.clone(), -1.0)];
    let mut remaining: Vec<usize> = (0..d).collect();
    while chosen.len() < d {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (slot, &i) in remaining.iter().enumerate() {
            let mut w = DVector::zeros(d);
            w[i] = 1.0;
            // two passes of indefinite Gram–Schmidt for stability
            for _ in 0..2 {
                for (b, sign) in &chosen {
                    let c = raw_inner(w.as_slice(), b.as_slice()) * sign;
                    w -= b * c;
                }
            }
            let score = raw_inner(w.as_slice(), w.as_slice()).abs() / w.norm_squared().max(f64::MIN_POSITIVE);
            if best.as_ref().map_or(true, |b| score > b.2) {
                best = Some((slot, w, score));
            }
        }
        let (slot, w, score) = best.ok_or(Error::DegenerateBasis { rank: chosen.len(), dim: d })?;
        if score < 1e-6 {
            return Err(Error::DegenerateBasis { rank: chosen.len(), dim: d });
        }
        remaining.remove(slot);
        let q = raw_inner(w.as_slice(), w.as_slice());
        chosen.push((&w / q.abs().sqrt(), q.signum()));
    }
    let timelike_extra: Vec<&DVector<f64>> = chosen[1..].iter().filter(|c| c.1 < 0.0).map(|c| &c.0).collect();
    let spacelike: Vec<&DVector<f64>> = chosen[1..].iter().filter(|c| c.1 > 0.0).map(|c| &c.0).collect();
    if timelike_extra.len() != 1 || spacelike.len() != d - 2 {
        return Err(Error::DegenerateBasis { rank: spacelike.len() + 1, dim: d });
    }
    let mut b = DMatrix::zeros(d, d);
    b.set_column(0, timelike_extra[0]);
    for (j, s) in spacelike.iter().enumerate() {
        b.set_column(j + 1, s);
    }
    b.set_column(d - 1, v);
    let mut a = &g * b.transpose() * &g;
    for _ in 0..2 {
        a = polish(&a);
    }
    LieTransform::new(a, DEFAULT_TRANSFORM_TOL)
}

/// Orthogonal projection `q ↦ (q₀, …, q_{n+1}, q_last)` that drops the
/// `m` fiber coordinates added by a revolution.
pub fn project_timelike(q: &[f64], n: usize) -> Result<LorentzVector> {
    if q.len() < n + 3 {
        return Err(Error::DimensionMismatch { expected: n + 3, found: q.len() });
    }
    let mut v: Vec<f64> = q[..n + 2].to_vec();
    v.push(q[q.len() - 1]);
    LorentzVector::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_lie_transform;
    use crate::quadric::sphere_to_point;

    fn null_from(center: &[f64], rho: f64) -> LorentzVector {
        sphere_to_point(center, rho).unwrap().rep().clone()
    }

    #[test]
    fn constant_family_is_maximally_reducible() {
        let k = null_from(&[0.0, 0.0, 1.0], 0.4);
        let fam = SphereMapSamples::new(0, 2, vec![k.clone(); 8], 1e-10).unwrap();
        let v = reducibility_detect(&[fam], REDUCIBILITY_TOL, SIGNATURE_TOL).unwrap();
        assert_eq!(v.reducible, Verdict::Yes);
        assert_eq!(v.span_dim, Some(1));
        assert_eq!(v.m, Some(3));
    }

    #[test]
    fn undersampled_family_is_inconclusive() {
        let fam = SphereMapSamples::new(0, 1, vec![null_from(&[1.0, 0.0, 0.0], 0.2)], 1e-10).unwrap();
        let v = reducibility_detect(&[fam], REDUCIBILITY_TOL, SIGNATURE_TOL).unwrap();
        assert_eq!(v.reducible, Verdict::Inconclusive);
        assert_eq!(v.warnings.len(), 1);
    }

    #[test]
    fn signature_tags() {
        let s = |pos, neg, null| Signature { pos, neg, null };
        assert_eq!(classify_signature(&s(2, 0, 0), 1), ConstructionTag::Revolution);
        assert_eq!(classify_signature(&s(1, 1, 0), 1), ConstructionTag::Tube);
        assert_eq!(classify_signature(&s(1, 0, 1), 1), ConstructionTag::Cylinder);
        assert_eq!(classify_signature(&s(0, 2, 0), 1), ConstructionTag::Unknown);
    }

    #[test]
    fn necessary_condition_examples() {
        let k: Vec<ProjectivePair> = (0..4)
            .map(|i| ProjectivePair::finite(1.0 / (std::f64::consts::PI / 8.0 + i as f64 * std::f64::consts::FRAC_PI_4).tan()))
            .collect();
        let ones: Vec<_> = k.iter().map(|p| (*p, 1)).collect();
        assert!(necessary_conditions(&ones, 1e-10).unwrap().holds);
        let uneven = vec![(k[0], 2), (k[1], 1), (k[2], 1), (k[3], 1)];
        let res = necessary_conditions(&uneven, 1e-10).unwrap();
        assert!(!res.holds && !res.pairing);
        let off = [0.0, 1.0, 3.0, -1.0].map(ProjectivePair::finite);
        let r = crate::curvature::lie_curvature(&off).unwrap();
        assert!((r + 1.0).abs() > 1e-3);
        assert!(!necessary_conditions(&off.iter().map(|p| (*p, 1)).collect::<Vec<_>>(), 1e-10).unwrap().holds);
        assert!(matches!(necessary_conditions(&ones[..3], 1e-10), Err(Error::CurvatureCount { .. })));
    }

    #[test]
    fn transform_sends_v_to_last_basis_vector() {
        for (theta, x) in [(0.3, vec![0.2, -1.0, 0.5, 0.1]), (2.0, vec![3.0, 0.0, -2.0, 1.0])] {
            let v = timelike(theta, &x);
            let a = transform_sending_to_last(&v).unwrap();
            let image = a.matrix() * &v;
            let mut e = DVector::zeros(6);
            e[5] = 1.0;
            assert!((image - e).norm() < 1e-10);
            assert!(crate::linalg::is_lie_transform(a.matrix(), 1e-10).unwrap());
        }
    }

    #[test]
    fn immersion_search_avoids_the_point_sphere_direction() {
        // spheres with (r, s) = (1, 0) are orthogonal to e_{n+2}
        let reps: Vec<LorentzVector> = [0.1, 0.7, 1.9, 2.6, 4.0]
            .iter()
            .map(|t: &f64| {
                let mut v = vec![1.0, t.cos(), t.sin(), 0.0, 0.0];
                v.push(0.0);
                LorentzVector::new(v).unwrap()
            })
            .collect();
        let e = LorentzVector::basis(3, 5);
        assert!(reps.iter().all(|k| crate::linalg::inner(k, &e).unwrap() == 0.0));
        let res = find_immersing_transform(&reps, &ImmersionOptions { starts: 32, ..Default::default() }).unwrap();
        assert_eq!(res.verdict, Verdict::Yes);
        assert!(res.v[..5].iter().any(|x| x.abs() > 1e-3));
        assert!(res.min_inner > 1e-3);
    }

    #[test]
    fn family_span_is_lie_equivariant() {
        let reps: Vec<LorentzVector> = (0..12)
            .map(|i| {
                let t = i as f64 * 0.5;
                null_from(&[t.cos(), t.sin(), 0.0], 0.3 + 0.1 * (t * 0.7).sin())
            })
            .collect();
        let fam = SphereMapSamples::new(0, 1, reps, 1e-10).unwrap();
        let a = random_lie_transform(3, 2, 0.8).unwrap();
        let s0 = family_span(&fam, REDUCIBILITY_TOL, SIGNATURE_TOL).unwrap();
        let s1 = family_span(&fam.transformed(&a).unwrap(), REDUCIBILITY_TOL, SIGNATURE_TOL).unwrap();
        assert_eq!(s0.span_dim, s1.span_dim);
        assert_eq!(s0.perp_signature, s1.perp_signature);
        assert_eq!(s0.construction, s1.construction);
    }
}
