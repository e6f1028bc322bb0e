//! C ABI for `spinscale`.
//!
//! Maps and matrices are opaque heap handles created by `*_new` style
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`SpinscaleStatus`]; on failure a message describing the error is
//! available from [`spinscale_last_error_message`] on the same thread.
//! Panics are caught at the boundary and reported as `SPINSCALE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinscale::classify::{self, ClassificationReport};
use spinscale::scan::{self, Property};
use spinscale::{Complex64, ComplexMatrix, Error, MapSpec, ScalingTriple, SpinLabel};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinscaleStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NoConvergence = 5,
    /// A search finished without a result.
    NotFound = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Property selector for boundary searches.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinscaleProperty {
    Pos = 0,
    Cp = 1,
    Ppt = 2,
    Phi2Cp = 3,
    Phi2Ppt = 4,
}

impl From<SpinscaleProperty> for Property {
    fn from(p: SpinscaleProperty) -> Self {
        match p {
            SpinscaleProperty::Pos => Property::Pos,
            SpinscaleProperty::Cp => Property::Cp,
            SpinscaleProperty::Ppt => Property::Ppt,
            SpinscaleProperty::Phi2Cp => Property::Phi2Cp,
            SpinscaleProperty::Phi2Ppt => Property::Phi2Ppt,
        }
    }
}

/// Opaque polarization-scaling map.
pub struct SpinscaleMap(MapSpec);

/// Opaque square complex matrix.
pub struct SpinscaleMatrix(ComplexMatrix);

/// Classification results, filled by [`spinscale_map_classify`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinscaleReport {
    pub two_j: u32,
    pub lambda: [f64; 3],
    pub positive_sufficient: bool,
    pub positive_necessary: bool,
    pub positive_exact: bool,
    pub cp: bool,
    /// Choi matrix and its partial transpose both PSD.
    pub ppt: bool,
    pub phi2_cp: bool,
    pub phi2_ppt: bool,
    pub min_positivity_eig: f64,
    pub min_choi_eig: f64,
    pub min_ptchoi_eig: f64,
    pub min_phi2_choi_eig: f64,
    pub min_phi2_ptchoi_eig: f64,
    pub tol: f64,
}

impl From<&ClassificationReport> for SpinscaleReport {
    fn from(r: &ClassificationReport) -> Self {
        SpinscaleReport {
            two_j: r.j.two_j(),
            lambda: r.lambda,
            positive_sufficient: r.positive_sufficient,
            positive_necessary: r.positive_necessary,
            positive_exact: r.positive_exact,
            cp: r.cp,
            ppt: r.ppt_both_signs,
            phi2_cp: r.phi2_cp,
            phi2_ppt: r.phi2_ppt,
            min_positivity_eig: r.min_positivity_eig,
            min_choi_eig: r.min_choi_eig,
            min_ptchoi_eig: r.min_ptchoi_eig,
            min_phi2_choi_eig: r.min_phi2_choi_eig,
            min_phi2_ptchoi_eig: r.min_phi2_ptchoi_eig,
            tol: r.tol,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(SpinscaleStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        Failure(status_of(&e), msg)
    }
}

fn status_of(e: &Error) -> SpinscaleStatus {
    match e {
        Error::DimensionMismatch { .. } => SpinscaleStatus::DimensionMismatch,
        Error::NotHermitian { .. } => SpinscaleStatus::NotHermitian,
        Error::NoConvergence { .. } => SpinscaleStatus::NoConvergence,
        Error::AtPoint { source, .. } => status_of(source),
        _ => SpinscaleStatus::InvalidArgument,
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SpinscaleStatus::InvalidArgument, msg.into())
}

fn null(name: &str) -> Failure {
    Failure(SpinscaleStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpinscaleStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpinscaleStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SpinscaleStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn spin(two_j: u32) -> Result<SpinLabel, Failure> {
    Ok(SpinLabel::new(two_j)?)
}

fn finite_triple(l: [f64; 3]) -> Result<ScalingTriple, Failure> {
    let t = ScalingTriple::from(l);
    if t.is_finite() {
        Ok(t)
    } else {
        Err(invalid(format!(
            "scaling parameters must be finite, got {l:?}"
        )))
    }
}

/// Message for the most recent failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spinscale_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spinscale_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates the map with spin `two_j / 2` and scaling parameters `l1, l2, l3`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_new(
    two_j: u32,
    lambda1: f64,
    lambda2: f64,
    lambda3: f64,
    out: *mut *mut SpinscaleMap,
) -> SpinscaleStatus {
    guard(|| {
        let map = MapSpec::new(spin(two_j)?, finite_triple([lambda1, lambda2, lambda3])?);
        write_out(out, Box::into_raw(Box::new(SpinscaleMap(map))), "out")
    })
}

/// Releases a map. Null is ignored.
///
/// # Safety
/// `map` must come from [`spinscale_map_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_free(map: *mut SpinscaleMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Hilbert-space dimension `2j + 1` of the map, or 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_dim(map: *const SpinscaleMap) -> usize {
    map.as_ref().map_or(0, |m| m.0.dim())
}

/// Classifies the map at PSD tolerance `tol`.
///
/// # Safety
/// `map` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_classify(
    map: *const SpinscaleMap,
    tol: f64,
    out: *mut SpinscaleReport,
) -> SpinscaleStatus {
    guard(|| {
        let map = deref(map, "map")?;
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(invalid(format!(
                "tolerance must be finite and >= 0, got {tol}"
            )));
        }
        let report = classify::classify(&map.0, tol)?;
        write_out(out, SpinscaleReport::from(&report), "out")
    })
}

/// Choi matrix of the map, or its partial transpose on the second factor.
///
/// # Safety
/// `map` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_choi(
    map: *const SpinscaleMap,
    partial_transpose: bool,
    out: *mut *mut SpinscaleMatrix,
) -> SpinscaleStatus {
    guard(|| {
        let map = deref(map, "map")?;
        let m = if partial_transpose {
            map.0.choi_partial_transpose()
        } else {
            map.0.choi_closed_form()
        };
        write_out(out, Box::into_raw(Box::new(SpinscaleMatrix(m))), "out")
    })
}

/// Applies the map to `x`, which must have dimension `2j + 1`.
///
/// # Safety
/// `map` and `x` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_map_apply(
    map: *const SpinscaleMap,
    x: *const SpinscaleMatrix,
    out: *mut *mut SpinscaleMatrix,
) -> SpinscaleStatus {
    guard(|| {
        let map = deref(map, "map")?;
        let x = deref(x, "x")?;
        let y = map.0.apply(&x.0)?;
        write_out(out, Box::into_raw(Box::new(SpinscaleMatrix(y))), "out")
    })
}

/// Builds a `dim x dim` matrix from row-major real and imaginary parts.
/// `im` may be null for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim * dim` readable doubles;
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_from_parts(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SpinscaleMatrix,
) -> SpinscaleStatus {
    guard(|| {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let n = dim
            .checked_mul(dim)
            .ok_or_else(|| invalid("dimension too large"))?;
        let re = std::slice::from_raw_parts(re, n);
        let im = (!im.is_null()).then(|| std::slice::from_raw_parts(im, n));
        let data = (0..n)
            .map(|k| Complex64::new(re[k], im.map_or(0.0, |im| im[k])))
            .collect();
        let m = ComplexMatrix::from_row_major(data)?;
        write_out(out, Box::into_raw(Box::new(SpinscaleMatrix(m))), "out")
    })
}

/// Releases a matrix. Null is ignored.
///
/// # Safety
/// `m` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_free(m: *mut SpinscaleMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Matrix dimension, or 0 for null.
///
/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_dim(m: *const SpinscaleMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.dim())
}

/// Reads entry `(row, col)`.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_get(
    m: *const SpinscaleMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> SpinscaleStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let d = m.0.dim();
        if row >= d || col >= d {
            return Err(invalid(format!(
                "index ({row}, {col}) out of range for dimension {d}"
            )));
        }
        let z = m.0[(row, col)];
        write_out(re, z.re, "re")?;
        write_out(im, z.im, "im")
    })
}

/// Smallest eigenvalue of a Hermitian matrix.
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_min_eig(
    m: *const SpinscaleMatrix,
    out: *mut f64,
) -> SpinscaleStatus {
    guard(|| {
        let m = deref(m, "m")?;
        write_out(out, spinscale::min_eig(&m.0)?, "out")
    })
}

/// Serializes the matrix as `{"dim":n,"re":[[..]],"im":[[..]]}`.
/// Release the string with [`spinscale_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_to_json(
    m: *const SpinscaleMatrix,
    out: *mut *mut c_char,
) -> SpinscaleStatus {
    guard(|| {
        let m = deref(m, "m")?;
        let s = CString::new(m.0.to_json_string()).map_err(|e| invalid(e.to_string()))?;
        write_out(out, s.into_raw(), "out")
    })
}

/// Parses the JSON produced by [`spinscale_matrix_to_json`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_matrix_from_json(
    json: *const c_char,
    out: *mut *mut SpinscaleMatrix,
) -> SpinscaleStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| invalid(e.to_string()))?;
        let m = ComplexMatrix::from_json_str(text)?;
        write_out(out, Box::into_raw(Box::new(SpinscaleMatrix(m))), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn spinscale_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Radius at which `property` first fails along the ray through `direction`.
///
/// # Safety
/// `direction` must point to 3 readable doubles and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_boundary_radius(
    two_j: u32,
    direction: *const f64,
    property: SpinscaleProperty,
    tol: f64,
    out: *mut f64,
) -> SpinscaleStatus {
    guard(|| {
        if direction.is_null() {
            return Err(null("direction"));
        }
        let dir = std::ptr::read(direction.cast::<[f64; 3]>());
        let r = scan::boundary_radius(spin(two_j)?, dir, property.into(), tol)?;
        write_out(out, r, "out")
    })
}

/// Grid plus random search for a map whose square is CP while its tensor
/// square is not positive on the canonical Schmidt-rank-2 state.
/// Returns `SPINSCALE_STATUS_NOT_FOUND` when the search is exhausted.
///
/// # Safety
/// `lambda_out` must point to 3 writable doubles; `phi2_choi_min_eig` and
/// `witness` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn spinscale_hunt(
    two_j: u32,
    steps: usize,
    seed: u64,
    tol: f64,
    lambda_out: *mut f64,
    phi2_choi_min_eig: *mut f64,
    witness: *mut f64,
) -> SpinscaleStatus {
    guard(|| {
        if lambda_out.is_null() || phi2_choi_min_eig.is_null() || witness.is_null() {
            return Err(null("output pointer"));
        }
        if steps < 2 {
            return Err(invalid(format!("steps must be >= 2, got {steps}")));
        }
        match classify::counterexample_hunt(spin(two_j)?, steps, seed, tol)? {
            Some(hit) => {
                lambda_out.cast::<[f64; 3]>().write(hit.lambdas.as_array());
                phi2_choi_min_eig.write(hit.phi2_choi_min_eig);
                witness.write(hit.witness);
                Ok(())
            }
            None => Err(Failure(
                SpinscaleStatus::NotFound,
                "no counterexample found".into(),
            )),
        }
    })
}
