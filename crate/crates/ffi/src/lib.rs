//! C interface to `lsk`.
//!
//! Every fallible function returns an [`LskStatus`]; on failure the message is
//! available from [`lsk_last_error`] on the same thread. Patches are opaque
//! handles released with [`lsk_patch_free`]; strings returned by the library
//! are released with [`lsk_string_free`]. Matrices are row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nalgebra::DMatrix;

use lsk::analysis::{analyze, classify, construct, ConstructionSpec, InputDescriptor, Settings, Subject};
use lsk::classify::ImmersionOptions;
use lsk::constructions::ConstructionKind;
use lsk::corpus::ParamMap;
use lsk::curvature::canonical_lie_curvature;
use lsk::linalg::{is_lie_transform, random_lie_transform};
use lsk::patch::Grid;
use lsk::report::to_json;
use lsk::{Error, LorentzVector, ProjectivePair};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LskStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    UnknownGenerator = 4,
    Numerical = 5,
    Panic = 6,
}

/// Constructions accepted by [`lsk_patch_construct`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LskConstruction {
    Revolution = 0,
    Tube = 1,
    Cylinder = 2,
}

/// Opaque patch handle.
pub struct LskPatch {
    subject: Subject,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(LskStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::DimensionMismatch { .. } => LskStatus::DimensionMismatch,
            Error::UnknownGenerator(_) => LskStatus::UnknownGenerator,
            Error::InvalidParameter(_) | Error::Corpus(_) => LskStatus::InvalidArgument,
            _ => LskStatus::Numerical,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LskStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(LskStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LskStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LskStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            LskStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn string(p: *const c_char, what: &str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map(str::to_owned).map_err(|_| invalid(format!("{what} is not UTF-8")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lsk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn lsk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// `⟨x, y⟩` for the form `diag(−1, 1, …, 1, −1)` on vectors of length `len ≥ 5`.
///
/// # Safety
/// `x` and `y` must point to `len` doubles and `result` to one double.
#[no_mangle]
pub unsafe extern "C" fn lsk_inner(x: *const f64, y: *const f64, len: usize, result: *mut f64) -> LskStatus {
    guard(|| {
        let a = LorentzVector::new(slice(x, len, "x")?.to_vec())?;
        let b = LorentzVector::new(slice(y, len, "y")?.to_vec())?;
        *out(result, "result")? = lsk::inner(&a, &b)?;
        Ok(())
    })
}

/// Whether the `dim × dim` matrix preserves the form within `tol`.
///
/// # Safety
/// `matrix` must point to `dim * dim` doubles and `result` to one bool.
#[no_mangle]
pub unsafe extern "C" fn lsk_is_lie_transform(matrix: *const f64, dim: usize, tol: f64, result: *mut bool) -> LskStatus {
    guard(|| {
        let a = DMatrix::from_row_slice(dim, dim, slice(matrix, dim * dim, "matrix")?);
        *out(result, "result")? = is_lie_transform(&a, tol)?;
        Ok(())
    })
}

/// Random element of `O(n+1, 2)`, written row-major into `matrix`, which must
/// hold `(n+3)²` doubles (`len`).
///
/// # Safety
/// `matrix` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn lsk_random_lie_transform(
    seed: u64,
    n: usize,
    magnitude: f64,
    matrix: *mut f64,
    len: usize,
) -> LskStatus {
    guard(|| {
        let d = n + 3;
        if len != d * d {
            return Err(Fail(LskStatus::DimensionMismatch, format!("expected {} entries, got {len}", d * d)));
        }
        let a = random_lie_transform(seed, n, magnitude)?;
        let dst = slice_mut(matrix, len, "matrix")?;
        for i in 0..d {
            for j in 0..d {
                dst[i * d + j] = a.matrix()[(i, j)];
            }
        }
        Ok(())
    })
}

/// Canonical Lie curvature of four curvatures `(r[i] : s[i])` with
/// multiplicities. Writes the cross-ratio, the chosen ordering and whether it
/// is canonical.
///
/// # Safety
/// Array arguments must hold four elements; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_lie_curvature(
    r: *const f64,
    s: *const f64,
    multiplicities: *const usize,
    result: *mut f64,
    ordering: *mut usize,
    canonical: *mut bool,
) -> LskStatus {
    guard(|| {
        let (r, s, m) = (slice(r, 4, "r")?, slice(s, 4, "s")?, slice(multiplicities, 4, "multiplicities")?);
        let data = (0..4)
            .map(|i| Ok((ProjectivePair::new(r[i], s[i])?, m[i])))
            .collect::<Result<Vec<_>, Error>>()?;
        let lc = canonical_lie_curvature(&data)?;
        *out(result, "result")? = lc.r;
        slice_mut(ordering, 4, "ordering")?.copy_from_slice(&lc.ordering);
        *out(canonical, "canonical")? = lc.canonical;
        Ok(())
    })
}

/// Builds a named patch from `count` parameter keys and values.
///
/// # Safety
/// `name` must be a NUL-terminated string, `keys` an array of `count` such
/// strings and `values` an array of `count` doubles; `patch` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_new(
    name: *const c_char,
    keys: *const *const c_char,
    values: *const f64,
    count: usize,
    patch: *mut *mut LskPatch,
) -> LskStatus {
    guard(|| {
        let slot = out(patch, "patch")?;
        let name = string(name, "name")?;
        let keys = slice(keys, count, "keys")?;
        let values = slice(values, count, "values")?;
        let mut params = ParamMap::new();
        for (k, v) in keys.iter().zip(values) {
            params.insert(&string(*k, "key")?, *v);
        }
        let subject = Subject::build(InputDescriptor::named(&name, params))?;
        *slot = Box::into_raw(Box::new(LskPatch { subject }));
        Ok(())
    })
}

/// Applies a construction to a generated profile. `fiber_dim` is `m` for a
/// revolution and `k` otherwise; `eps` is the tube radius and ignored for the
/// other kinds. The profile handle stays owned by the caller.
///
/// # Safety
/// `profile` must be a live handle and `patch` writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_construct(
    profile: *const LskPatch,
    kind: LskConstruction,
    fiber_dim: usize,
    eps: f64,
    patch: *mut *mut LskPatch,
) -> LskStatus {
    guard(|| {
        let slot = out(patch, "patch")?;
        let base = &profile.as_ref().ok_or_else(|| null("profile"))?.subject;
        if base.input.construction.is_some() {
            return Err(invalid("constructions apply to generated profiles only"));
        }
        let (kind, eps) = match kind {
            LskConstruction::Revolution => (ConstructionKind::Revolution, None),
            LskConstruction::Tube => (ConstructionKind::Tube, Some(eps)),
            LskConstruction::Cylinder => (ConstructionKind::Cylinder, None),
        };
        let spec = ConstructionSpec { kind, fiber_dim, eps };
        let c = construct(&spec, base.patch.clone())?;
        let mut input = base.input.clone();
        input.construction = Some(spec);
        let subject = Subject { input, patch: c.clone(), construction: Some(c) };
        *slot = Box::into_raw(Box::new(LskPatch { subject }));
        Ok(())
    })
}

/// Releases a patch handle; null is ignored.
///
/// # Safety
/// `patch` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_free(patch: *mut LskPatch) {
    if !patch.is_null() {
        drop(Box::from_raw(patch));
    }
}

/// Number of patch parameters.
///
/// # Safety
/// `patch` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_param_dim(patch: *const LskPatch, result: *mut usize) -> LskStatus {
    guard(|| {
        let p = patch.as_ref().ok_or_else(|| null("patch"))?;
        *out(result, "result")? = p.subject.patch.domain().dim();
        Ok(())
    })
}

/// Length of position and normal vectors of the patch.
///
/// # Safety
/// `patch` must be a live handle and `result` writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_position_len(patch: *const LskPatch, result: *mut usize) -> LskStatus {
    guard(|| {
        let p = patch.as_ref().ok_or_else(|| null("patch"))?;
        *out(result, "result")? = p.subject.patch.ambient().position_len();
        Ok(())
    })
}

/// Position and unit normal at `u`. `position` and `normal` hold `len`
/// doubles each, which must equal [`lsk_patch_position_len`].
///
/// # Safety
/// `u` must hold the parameter dimension of doubles; outputs `len` each.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_eval(
    patch: *const LskPatch,
    u: *const f64,
    u_len: usize,
    position: *mut f64,
    normal: *mut f64,
    len: usize,
) -> LskStatus {
    guard(|| {
        let p = &patch.as_ref().ok_or_else(|| null("patch"))?.subject.patch;
        let dim = p.domain().dim();
        if u_len != dim {
            return Err(Fail(LskStatus::DimensionMismatch, format!("patch has {dim} parameters, got {u_len}")));
        }
        let expected = p.ambient().position_len();
        if len != expected {
            return Err(Fail(LskStatus::DimensionMismatch, format!("vectors have length {expected}, got {len}")));
        }
        let (f, xi) = p.eval(slice(u, u_len, "u")?);
        slice_mut(position, len, "position")?.copy_from_slice(f.as_slice());
        slice_mut(normal, len, "normal")?.copy_from_slice(xi.as_slice());
        Ok(())
    })
}

fn settings(grid: &[usize], seed: u64, immersion: bool) -> Settings {
    Settings {
        grid: (!grid.is_empty()).then(|| Grid::new(grid.to_vec())),
        seed,
        immersion: immersion.then(ImmersionOptions::default),
        ..Settings::default()
    }
}

/// Analysis report as JSON. `grid` holds samples per axis (`grid_len` may be 0
/// for the default resolution). Free the string with [`lsk_string_free`].
///
/// # Safety
/// `patch` must be a live handle, `grid` hold `grid_len` values, `json` writable.
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_analyze(
    patch: *const LskPatch,
    grid: *const usize,
    grid_len: usize,
    seed: u64,
    json: *mut *mut c_char,
) -> LskStatus {
    guard(|| {
        let slot = out(json, "json")?;
        let p = patch.as_ref().ok_or_else(|| null("patch"))?;
        let report = analyze(&p.subject, &settings(slice(grid, grid_len, "grid")?, seed, false))?;
        *slot = into_c_string(to_json(&report)?);
        Ok(())
    })
}

/// Classification report as JSON; `immersion` enables the immersing-transform
/// search. Free the string with [`lsk_string_free`].
///
/// # Safety
/// As for [`lsk_patch_analyze`].
#[no_mangle]
pub unsafe extern "C" fn lsk_patch_classify(
    patch: *const LskPatch,
    grid: *const usize,
    grid_len: usize,
    seed: u64,
    immersion: bool,
    json: *mut *mut c_char,
) -> LskStatus {
    guard(|| {
        let slot = out(json, "json")?;
        let p = patch.as_ref().ok_or_else(|| null("patch"))?;
        let report = classify(&p.subject, &settings(slice(grid, grid_len, "grid")?, seed, immersion))?;
        *slot = into_c_string(to_json(&report)?);
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lsk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
