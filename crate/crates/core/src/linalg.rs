//! Linear algebra for the signature-(n+1,2) form on R^{n+3}.
//!
//! Coordinates are laid out as `(x⁰, x¹, …, x^{n+1}, x^{n+2})`; the first and
//! last slots are timelike:
//!
//! ```text
//! ⟨x, y⟩ = −x⁰y⁰ + x¹y¹ + … + x^{n+1}y^{n+1} − x^{n+2}y^{n+2}
//! ```
//!
//! Rank, nullspace and signature computations are tolerance driven; the
//! defaults below match the noise floor of double precision jets.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative singular value cut-off for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;
/// Zero band for eigenvalues of a restricted Gram matrix.
pub const DEFAULT_SIGNATURE_TOL: f64 = 1e-8;
/// Default tolerance for membership in O(n+1,2).
pub const DEFAULT_TRANSFORM_TOL: f64 = 1e-10;

/// Smallest ambient dimension `n` supported (vectors of length n+3).
pub const MIN_AMBIENT_N: usize = 2;

/// A coordinate vector in R^{n+3} carrying the signature-(n+1,2) form.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzVector {
    coords: DVector<f64>,
}

impl LorentzVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(coords))
    }

    pub fn from_dvector(coords: DVector<f64>) -> Result<Self> {
        if coords.len() < MIN_AMBIENT_N + 3 {
            return Err(Error::DimensionMismatch {
                expected: MIN_AMBIENT_N + 3,
                found: coords.len(),
            });
        }
        Ok(Self { coords })
    }

    pub(crate) fn from_dvector_unchecked(coords: DVector<f64>) -> Self {
        Self { coords }
    }

    pub fn zeros(n: usize) -> Self {
        Self { coords: DVector::zeros(n + 3) }
    }

    /// Standard basis vector `e_i` in R^{n+3}.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coords[i] = 1.0;
        v
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn ambient_n(&self) -> usize {
        self.coords.len() - 3
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// Self inner product under the indefinite form.
    pub fn square(&self) -> f64 {
        raw_inner(self.as_slice(), self.as_slice())
    }

    /// Unit Euclidean norm with the first significant coordinate positive.
    ///
    /// Coordinates below `1e-12` of the largest magnitude do not decide the sign.
    pub fn canonical(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let scaled = &self.coords / norm;
        let cut = 1e-12 * scaled.amax();
        let lead = scaled.iter().copied().find(|c| c.abs() > cut).unwrap_or(1.0);
        let sign = if lead < 0.0 { -1.0 } else { 1.0 };
        Ok(Self { coords: scaled * sign })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coords: &self.coords * factor }
    }
}

impl Add for &LorentzVector {
    type Output = LorentzVector;
    fn add(self, rhs: &LorentzVector) -> LorentzVector {
        LorentzVector { coords: &self.coords + &rhs.coords }
    }
}

impl Sub for &LorentzVector {
    type Output = LorentzVector;
    fn sub(self, rhs: &LorentzVector) -> LorentzVector {
        LorentzVector { coords: &self.coords - &rhs.coords }
    }
}

impl Mul<f64> for &LorentzVector {
    type Output = LorentzVector;
    fn mul(self, rhs: f64) -> LorentzVector {
        self.scale(rhs)
    }
}

impl Neg for &LorentzVector {
    type Output = LorentzVector;
    fn neg(self) -> LorentzVector {
        self.scale(-1.0)
    }
}

pub(crate) fn raw_inner(x: &[f64], y: &[f64]) -> f64 {
    let last = x.len() - 1;
    let mut acc = -x[0] * y[0] - x[last] * y[last];
    for i in 1..last {
        acc += x[i] * y[i];
    }
    acc
}

/// The indefinite inner product.
pub fn inner(x: &LorentzVector, y: &LorentzVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: y.len() });
    }
    Ok(raw_inner(x.as_slice(), y.as_slice()))
}

/// `G = diag(−1, 1, …, 1, −1)` of size `dim`.
pub fn lie_metric(dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::identity(dim, dim);
    g[(0, 0)] = -1.0;
    g[(dim - 1, dim - 1)] = -1.0;
    g
}

/// Gram matrix `k` of a Lie frame: `−J` corner blocks, identity in the middle.
pub fn lie_frame_metric(dim: usize) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(dim, dim);
    for i in 2..dim - 2 {
        k[(i, i)] = 1.0;
    }
    k[(0, dim - 1)] = -1.0;
    k[(dim - 1, 0)] = -1.0;
    k[(1, dim - 2)] = -1.0;
    k[(dim - 2, 1)] = -1.0;
    k
}

/// Full Gram matrix of a frame and whether it is a Lie frame.
#[derive(Debug, Clone)]
pub struct FrameGram {
    pub gram: DMatrix<f64>,
    pub is_lie_frame: bool,
}

pub fn frame_gram(frame: &[LorentzVector], tol: f64) -> Result<FrameGram> {
    let dim = frame.first().map(LorentzVector::len).ok_or(Error::Empty("frame"))?;
    if frame.len() != dim {
        return Err(Error::FrameSize { expected: dim, found: frame.len() });
    }
    let mut gram = DMatrix::zeros(dim, dim);
    for (a, ya) in frame.iter().enumerate() {
        for (b, yb) in frame.iter().enumerate() {
            gram[(a, b)] = inner(ya, yb)?;
        }
    }
    let defect = (&gram - lie_frame_metric(dim)).amax();
    Ok(FrameGram { gram, is_lie_frame: defect <= tol })
}

/// Columns spanning a subspace; orthonormality is not assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: DMatrix<f64>,
}

impl SubspaceBasis {
    pub fn from_columns(columns: DMatrix<f64>) -> Self {
        Self { columns }
    }

    pub fn from_vectors(ambient_len: usize, vectors: &[LorentzVector]) -> Result<Self> {
        let mut columns = DMatrix::zeros(ambient_len, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != ambient_len {
                return Err(Error::DimensionMismatch { expected: ambient_len, found: v.len() });
            }
            columns.set_column(j, v.coords());
        }
        Ok(Self { columns })
    }

    pub fn empty(ambient_len: usize) -> Self {
        Self { columns: DMatrix::zeros(ambient_len, 0) }
    }

    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn ambient_len(&self) -> usize {
        self.columns.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn vector(&self, j: usize) -> DVector<f64> {
        self.columns.column(j).into_owned()
    }

    pub fn vectors(&self) -> Vec<LorentzVector> {
        (0..self.dim())
            .map(|j| LorentzVector::from_dvector_unchecked(self.vector(j)))
            .collect()
    }
}

/// Result of a numerical rank computation.
#[derive(Debug, Clone)]
pub struct RankInfo {
    pub rank: usize,
    /// Singular values in decreasing order (padded with zeros for wide inputs).
    pub singular_values: Vec<f64>,
    /// Orthonormal basis of the right nullspace.
    pub nullspace: SubspaceBasis,
    /// Orthonormal basis of the row space.
    pub row_space: SubspaceBasis,
}

/// Rank is the count of singular values above `tol` times the largest one.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> Result<RankInfo> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Empty("matrix"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("rank tolerance must be positive, got {tol}")));
    }
    let cols = m.ncols();
    // Thin SVD only exposes min(rows, cols) right vectors: pad wide inputs.
    let work = if m.nrows() < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.rows_mut(0, m.nrows()).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = work.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let largest = singular_values[0];
    let rank = if largest > 0.0 {
        singular_values.iter().filter(|&&s| s > tol * largest).count()
    } else {
        0
    };
    let pick = |idx: &[usize]| {
        let mut out = DMatrix::zeros(cols, idx.len());
        for (j, &i) in idx.iter().enumerate() {
            out.set_column(j, &v_t.row(i).transpose());
        }
        SubspaceBasis::from_columns(out)
    };
    Ok(RankInfo {
        rank,
        singular_values,
        nullspace: pick(&order[rank..]),
        row_space: pick(&order[..rank]),
    })
}

/// Inertia of the form restricted to a subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

/// Orthonormal (Euclidean) basis of the span, rejecting rank-deficient input.
fn orthonormalize(basis: &SubspaceBasis) -> Result<DMatrix<f64>> {
    if basis.is_empty() {
        return Err(Error::Empty("subspace basis"));
    }
    let info = numerical_rank(&basis.columns().transpose(), DEFAULT_RANK_TOL)?;
    if info.rank < basis.dim() {
        return Err(Error::DegenerateBasis { rank: info.rank, dim: basis.dim() });
    }
    Ok(info.row_space.columns().clone())
}

/// Counts positive, negative and zero eigenvalues of the Gram matrix of the form
/// on `span(basis)`. The basis is orthonormalized first, so eigenvalues lie in
/// `[−1, 1]` and `tol` is an absolute zero band.
pub fn restricted_signature(basis: &SubspaceBasis, tol: f64) -> Result<Signature> {
    let q = orthonormalize(basis)?;
    let gram = restricted_gram(&q);
    let eig = gram.symmetric_eigenvalues();
    let mut sig = Signature { pos: 0, neg: 0, null: 0 };
    for &l in eig.iter() {
        if l > tol {
            sig.pos += 1;
        } else if l < -tol {
            sig.neg += 1;
        } else {
            sig.null += 1;
        }
    }
    Ok(sig)
}

/// `Bᵀ G B`, symmetrized.
pub fn restricted_gram(columns: &DMatrix<f64>) -> DMatrix<f64> {
    let g = lie_metric(columns.nrows());
    let gram = columns.transpose() * g * columns;
    (&gram + gram.transpose()) * 0.5
}

/// Orthogonal complement of a span with respect to the indefinite form.
pub fn orthogonal_complement(basis: &SubspaceBasis) -> Result<SubspaceBasis> {
    let dim = basis.ambient_len();
    if basis.is_empty() {
        return Ok(SubspaceBasis::from_columns(DMatrix::identity(dim, dim)));
    }
    // ⟨b, v⟩ = bᵀ G v = 0 for all b  ⇔  v ∈ G · null(Bᵀ).
    let info = numerical_rank(&basis.columns().transpose(), DEFAULT_RANK_TOL)?;
    let g = lie_metric(dim);
    Ok(SubspaceBasis::from_columns(g * info.nullspace.columns()))
}

/// Maximum entry of `AᵀGA − G`.
pub fn transform_defect(a: &DMatrix<f64>) -> f64 {
    let g = lie_metric(a.nrows());
    (a.transpose() * &g * a - g).amax()
}

/// Whether `AᵀGA = G` within `tol` (max-entry norm).
pub fn is_lie_transform(a: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    if a.nrows() < MIN_AMBIENT_N + 3 {
        return Err(Error::DimensionMismatch { expected: MIN_AMBIENT_N + 3, found: a.nrows() });
    }
    Ok(transform_defect(a) <= tol)
}

/// An element of O(n+1,2).
#[derive(Debug, Clone, PartialEq)]
pub struct LieTransform {
    matrix: DMatrix<f64>,
    tol: f64,
}

impl LieTransform {
    pub fn new(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !is_lie_transform(&matrix, tol)? {
            return Err(Error::NotLieTransform(transform_defect(&matrix)));
        }
        Ok(Self { matrix, tol })
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n + 3, n + 3), tol: DEFAULT_TRANSFORM_TOL }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `A⁻¹ = G Aᵀ G`.
    pub fn inverse(&self) -> Self {
        let g = lie_metric(self.dim());
        Self { matrix: &g * self.matrix.transpose() * g, tol: self.tol }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix, tol: self.tol.max(other.tol) }
    }

    pub fn apply(&self, v: &LorentzVector) -> Result<LorentzVector> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(LorentzVector::from_dvector_unchecked(&self.matrix * v.coords()))
    }

    pub fn apply_raw(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// Re-checks group membership at the stored tolerance.
    pub fn validate(&self) -> Result<()> {
        if transform_defect(&self.matrix) <= self.tol {
            Ok(())
        } else {
            Err(Error::NotLieTransform(transform_defect(&self.matrix)))
        }
    }
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub(crate) fn expm(x: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = x.nrows();
    let norm1 = (0..dim).map(|j| x.column(j).abs().sum()).fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 { (norm1 / 0.5).log2().ceil() as i32 } else { 0 };
    let y = x / 2f64.powi(squarings);
    let mut sum = DMatrix::identity(dim, dim);
    let mut term = DMatrix::identity(dim, dim);
    for k in 1..40 {
        term = &term * &y / k as f64;
        sum += &term;
        if term.amax() <= f64::EPSILON * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// One Newton step back onto O(n+1,2): `A ← A (I − E/2)` with `E = G AᵀG A − I`.
pub(crate) fn polish(a: &DMatrix<f64>) -> DMatrix<f64> {
    let dim = a.nrows();
    let g = lie_metric(dim);
    let e = &g * a.transpose() * &g * a - DMatrix::<f64>::identity(dim, dim);
    a * (DMatrix::<f64>::identity(dim, dim) - e * 0.5)
}

/// A G-antisymmetric generator (`XᵀG + GX = 0`) with unit Frobenius norm.
pub(crate) fn random_generator<R: Rng>(rng: &mut R, dim: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let v: f64 = rng.gen_range(-1.0..1.0);
            s[(i, j)] = v;
            s[(j, i)] = -v;
        }
    }
    let x = lie_metric(dim) * s;
    let norm = x.norm();
    x / norm
}

/// Deterministic element of O(n+1,2) for the given seed, `exp(magnitude · X)`.
pub fn random_lie_transform(seed: u64, n: usize, magnitude: f64) -> Result<LieTransform> {
    if !(magnitude >= 0.0) || !magnitude.is_finite() {
        return Err(Error::InvalidParameter(format!("magnitude must be ≥ 0, got {magnitude}")));
    }
    if n < MIN_AMBIENT_N {
        return Err(Error::InvalidParameter(format!("ambient n must be ≥ {MIN_AMBIENT_N}, got {n}")));
    }
    let dim = n + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_generator(&mut rng, dim) * magnitude;
    let mut a = expm(&x);
    for _ in 0..2 {
        a = polish(&a);
    }
    LieTransform::new(a, DEFAULT_TRANSFORM_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(n: usize, i: usize) -> LorentzVector {
        LorentzVector::basis(n, i)
    }

    #[test]
    fn inner_on_basis_vectors() {
        assert_eq!(inner(&e(3, 0), &e(3, 0)).unwrap(), -1.0);
        assert_eq!(inner(&e(3, 1), &e(3, 1)).unwrap(), 1.0);
        assert_eq!(inner(&e(3, 5), &e(3, 5)).unwrap(), -1.0);
        let null = &e(3, 0) + &e(3, 1);
        assert_eq!(inner(&null, &null).unwrap(), 0.0);
    }

    #[test]
    fn inner_rejects_mismatched_lengths() {
        assert!(matches!(
            inner(&e(2, 0), &e(3, 0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn standard_basis_is_not_a_lie_frame() {
        let n = 3;
        let frame: Vec<_> = (0..n + 3).map(|i| e(n, i)).collect();
        let fg = frame_gram(&frame, 1e-12).unwrap();
        assert_eq!(fg.gram, lie_metric(n + 3));
        assert!(!fg.is_lie_frame);
    }

    #[test]
    fn null_frame_is_a_lie_frame() {
        let n = 4;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut frame: Vec<_> = (0..n + 3).map(|i| e(n, i)).collect();
        frame[0] = &(&e(n, 0) + &e(n, 1)) * s;
        frame[n + 2] = &(&e(n, 0) - &e(n, 1)) * s;
        frame[1] = &(&e(n, n + 2) + &e(n, n + 1)) * s;
        frame[n + 1] = &(&e(n, n + 2) - &e(n, n + 1)) * s;
        // middle slots: the remaining spacelike units e2..en
        let fg = frame_gram(&frame, 1e-12).unwrap();
        assert_abs_diff_eq!(fg.gram[(0, n + 2)], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fg.gram[(1, n + 1)], -1.0, epsilon = 1e-15);
        assert!(fg.is_lie_frame);

        frame[0] = e(n, 2);
        assert!(!frame_gram(&frame, 1e-12).unwrap().is_lie_frame);
    }

    #[test]
    fn frame_of_wrong_size() {
        let frame = vec![e(2, 0), e(2, 1)];
        assert!(matches!(frame_gram(&frame, 1e-12), Err(Error::FrameSize { .. })));
    }

    #[test]
    fn rank_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        let r = numerical_rank(&id, 1e-9).unwrap();
        assert_eq!(r.rank, 3);
        assert!(r.nullspace.is_empty());

        let z = DMatrix::<f64>::zeros(4, 4);
        let r = numerical_rank(&z, 1e-9).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.nullspace.dim(), 4);

        let u = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let v = DVector::from_vec(vec![3.0, 0.0, 1.0, 4.0]);
        let outer = &u * v.transpose();
        let r = numerical_rank(&outer, 1e-9).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.nullspace.dim(), 3);
        for j in 0..3 {
            assert!((&outer * r.nullspace.vector(j)).norm() < 1e-12);
        }

        assert!(matches!(numerical_rank(&DMatrix::zeros(0, 3), 1e-9), Err(Error::Empty(_))));
    }

    #[test]
    fn signature_examples() {
        let n = 3;
        let sig = |vs: &[LorentzVector]| {
            restricted_signature(&SubspaceBasis::from_vectors(n + 3, vs).unwrap(), 1e-8).unwrap()
        };
        assert_eq!(sig(&[e(n, 0)]), Signature { pos: 0, neg: 1, null: 0 });
        assert_eq!(sig(&[e(n, 1), e(n, 2)]), Signature { pos: 2, neg: 0, null: 0 });
        assert_eq!(sig(&[&e(n, 0) + &e(n, 1)]), Signature { pos: 0, neg: 0, null: 1 });
        let all: Vec<_> = (0..n + 3).map(|i| e(n, i)).collect();
        assert_eq!(sig(&all), Signature { pos: n + 1, neg: 2, null: 0 });
    }

    #[test]
    fn signature_reports_degenerate_basis() {
        let basis = SubspaceBasis::from_vectors(5, &[e(2, 1), &e(2, 1) * 2.0]).unwrap();
        assert!(matches!(
            restricted_signature(&basis, 1e-8),
            Err(Error::DegenerateBasis { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn transform_examples() {
        let dim = 6;
        assert!(is_lie_transform(&DMatrix::identity(dim, dim), 1e-12).unwrap());

        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let mut rot = DMatrix::<f64>::identity(dim, dim);
        rot[(1, 1)] = c;
        rot[(1, 2)] = -s;
        rot[(2, 1)] = s;
        rot[(2, 2)] = c;
        assert!(transform_defect(&rot) < 1e-15);
        assert!(is_lie_transform(&rot, 1e-12).unwrap());

        let mut scale = DMatrix::<f64>::identity(dim, dim);
        scale[(0, 0)] = 2.0;
        assert!(!is_lie_transform(&scale, 1e-6).unwrap());
    }

    #[test]
    fn random_transforms() {
        let id = random_lie_transform(11, 4, 0.0).unwrap();
        assert_eq!(id.matrix(), &DMatrix::identity(7, 7));

        for seed in 0..20 {
            let a = random_lie_transform(seed, 2 + (seed as usize % 5), 1.5).unwrap();
            assert!(is_lie_transform(a.matrix(), 1e-10).unwrap());
        }
        let a = random_lie_transform(5, 3, 1.0).unwrap();
        let b = random_lie_transform(5, 3, 1.0).unwrap();
        assert_eq!(a.matrix().as_slice(), b.matrix().as_slice());
        let c = random_lie_transform(6, 3, 1.0).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn inverse_undoes_transform() {
        let a = random_lie_transform(3, 4, 1.2).unwrap();
        let prod = a.matrix() * a.inverse().matrix();
        assert!((prod - DMatrix::<f64>::identity(7, 7)).amax() < 1e-12);
    }

    #[test]
    fn canonical_representative() {
        let v = LorentzVector::new(vec![0.0, -3.0, 4.0, 0.0, 0.0]).unwrap();
        let c = v.canonical().unwrap();
        assert_abs_diff_eq!(c.norm(), 1.0, epsilon = 1e-15);
        assert!(c.as_slice()[1] > 0.0);
        assert!(LorentzVector::zeros(2).canonical().is_err());
    }

    #[test]
    fn complement_of_timelike_line() {
        let n = 3;
        let basis = SubspaceBasis::from_vectors(n + 3, &[e(n, 0)]).unwrap();
        let perp = orthogonal_complement(&basis).unwrap();
        assert_eq!(perp.dim(), n + 2);
        for v in perp.vectors() {
            assert!(inner(&v, &e(n, 0)).unwrap().abs() < 1e-14);
        }
        let sig = restricted_signature(&perp, 1e-8).unwrap();
        assert_eq!(sig, Signature { pos: n + 1, neg: 1, null: 0 });
    }
}
