//! C ABI for the `pierced` library.
//!
//! Objects are opaque handles created by `pc_*` constructors and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`PcStatus`]; on failure `pc_last_error_message` describes the error for
//! the calling thread. Strings returned by the library are owned by the
//! caller and must be released with `pc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pierced::geometry::{realize, well_formed_check, GeometryConfig};
use pierced::io::realization_to_json;
use pierced::piercing::{analyze, random_pierced_code, Analysis, RecognizeOptions};
use pierced::split::{is_splittable, min_realization_dim};
use pierced::verify::{monte_carlo_code_check, pairwise_relation_check, witness_check};
use pierced::{Code, Error, Realization, RecognitionVerdict, WitnessRegistry};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input, out-of-range labels, or a code violating conventions.
    InvalidInput = 3,
    NotPierced = 4,
    DimensionTooSmall = 5,
    /// Geometric construction failed.
    Geometry = 6,
    OutOfRange = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PcVerdict {
    Pierced = 0,
    NotDegreeTwo = 1,
    NotChordal = 2,
}

/// Summary of recognizing a code.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PcAnalysis {
    pub verdict: PcVerdict,
    /// Minimal k; meaningful only when pierced.
    pub k: u32,
    pub splittable: bool,
    /// Minimal dimension of a well-formed ball realization; 0 when not pierced.
    pub min_dim: u32,
}

/// Outcome of the four verification checks.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PcVerifyReport {
    pub ok: bool,
    pub well_formed: bool,
    pub witnesses: bool,
    pub monte_carlo: bool,
    pub pairwise: bool,
    pub violations: usize,
    pub coverage: f64,
}

/// Opaque code handle.
pub struct PcCode(Code);

/// Opaque realization handle, with its witness registry.
pub struct PcRealization {
    realization: Realization,
    witnesses: WitnessRegistry,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> PcStatus {
    match e {
        Error::NotPierced | Error::NotDegreeTwo { .. } => PcStatus::NotPierced,
        Error::DimensionTooSmall { .. } => PcStatus::DimensionTooSmall,
        Error::DegenerateConfiguration(_) | Error::NoPointFound(_) | Error::RadiusUnderflow { .. } => PcStatus::Geometry,
        Error::Parse { .. }
        | Error::NeuronOutOfRange { .. }
        | Error::TooManyNeurons { .. }
        | Error::MissingEmptyCodeword
        | Error::LimitExceeded { .. }
        | Error::UnsupportedDimension(_)
        | Error::Io(_) => PcStatus::InvalidInput,
        _ => PcStatus::Internal,
    }
}

/// Runs `f`, recording the error message and mapping panics to `Internal`.
fn guard(f: impl FnOnce() -> Result<(), (PcStatus, String)>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PcStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PcStatus::Internal
        }
    }
}

fn fail(e: Error) -> (PcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (PcStatus, String) {
    (PcStatus::NullPointer, "null pointer argument".into())
}

unsafe fn code_ref<'a>(code: *const PcCode) -> Result<&'a Code, (PcStatus, String)> {
    code.as_ref().map(|c| &c.0).ok_or_else(null)
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn recognize(c: &Code) -> Result<Analysis, (PcStatus, String)> {
    analyze(c, RecognizeOptions::default()).map_err(fail)
}

/// Message for the last failed call on this thread. Valid until the next
/// call into the library from the same thread. Never null.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a code in the text (`n=...` header) or JSON format and applies the
/// standing conventions (unused and duplicate neurons are removed).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_code_parse(text: *const c_char, out: *mut *mut PcCode) -> PcStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return Err(null());
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| (PcStatus::InvalidUtf8, "text is not UTF-8".to_string()))?;
        let (code, _) = Code::parse(s).and_then(|c| c.canonicalize()).map_err(fail)?;
        *out = Box::into_raw(Box::new(PcCode(code)));
        Ok(())
    })
}

/// A random inductively pierced code on `n` neurons with steps of rank at
/// most `k`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_code_random_pierced(n: usize, k: usize, seed: u64, out: *mut *mut PcCode) -> PcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        if n == 0 || n > pierced::set::MAX_NEURONS {
            return Err((PcStatus::OutOfRange, format!("n={n} is out of range")));
        }
        let (code, _) = random_pierced_code(n, k, seed).map_err(fail)?;
        *out = Box::into_raw(Box::new(PcCode(code)));
        Ok(())
    })
}

/// # Safety
/// `code` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pc_code_free(code: *mut PcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Number of neurons, or 0 for null.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_code_neurons(code: *const PcCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Number of codewords, or 0 for null.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_code_len(code: *const PcCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.len())
}

/// The code in the text format. Free with `pc_string_free`.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_code_to_text(code: *const PcCode) -> *mut c_char {
    code.as_ref().map_or(ptr::null_mut(), |c| into_c_string(c.0.to_text()))
}

/// Recognition verdict, minimal k, splittability and minimal dimension.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_code_analyze(code: *const PcCode, out: *mut PcAnalysis) -> PcStatus {
    guard(|| {
        let c = code_ref(code)?;
        if out.is_null() {
            return Err(null());
        }
        let a = recognize(c)?;
        let mut res = PcAnalysis { verdict: PcVerdict::NotChordal, k: 0, splittable: false, min_dim: 0 };
        match &a.verdict {
            RecognitionVerdict::Pierced { order, k } => {
                let cert = is_splittable(a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap(), &order.cliques);
                res = PcAnalysis {
                    verdict: PcVerdict::Pierced,
                    k: *k as u32,
                    splittable: cert.splittable,
                    min_dim: min_realization_dim(&a.verdict, &cert).map_err(fail)? as u32,
                };
            }
            RecognitionVerdict::NotDegreeTwo { .. } => res.verdict = PcVerdict::NotDegreeTwo,
            RecognitionVerdict::NotChordal => {}
        }
        *out = res;
        Ok(())
    })
}

/// Piercing order as JSON: a list of `{neuron, sigma, tau, rank}` with the
/// first removed neuron first and 1-based labels. Free with `pc_string_free`.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_code_piercing_order_json(code: *const PcCode, out: *mut *mut c_char) -> PcStatus {
    guard(|| {
        let c = code_ref(code)?;
        if out.is_null() {
            return Err(null());
        }
        let a = recognize(c)?;
        let order = a.verdict.order().ok_or_else(|| fail(Error::NotPierced))?;
        let steps: Vec<serde_json::Value> = order
            .steps
            .iter()
            .map(|s| {
                serde_json::json!({"neuron": s.neuron + 1, "sigma": s.sigma.labels(), "tau": s.tau.labels(), "rank": s.rank})
            })
            .collect();
        *out = into_c_string(serde_json::Value::Array(steps).to_string());
        Ok(())
    })
}

/// Builds a well-formed realization by open balls. `dim = 0` selects the
/// minimal dimension.
///
/// # Safety
/// `code` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_realize(code: *const PcCode, dim: usize, seed: u64, out: *mut *mut PcRealization) -> PcStatus {
    guard(|| {
        let c = code_ref(code)?;
        if out.is_null() {
            return Err(null());
        }
        let a = recognize(c)?;
        let order = a.verdict.order().ok_or_else(|| fail(Error::NotPierced))?;
        let cert = is_splittable(a.graph.as_ref().unwrap(), a.poset.as_ref().unwrap(), &order.cliques);
        let dim = if dim == 0 { min_realization_dim(&a.verdict, &cert).map_err(fail)? } else { dim };
        let cfg = GeometryConfig { seed, ..GeometryConfig::default() };
        let (realization, witnesses) = realize(c, order, dim, Some(&cert), &cfg).map_err(fail)?;
        *out = Box::into_raw(Box::new(PcRealization { realization, witnesses }));
        Ok(())
    })
}

/// # Safety
/// `r` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn pc_realization_free(r: *mut PcRealization) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Ambient dimension, or 0 for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_realization_dim(r: *const PcRealization) -> usize {
    r.as_ref().map_or(0, |r| r.realization.dim)
}

/// Number of balls, or 0 for null.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_realization_len(r: *const PcRealization) -> usize {
    r.as_ref().map_or(0, |r| r.realization.n())
}

/// Copies ball `index` (0-based neuron) into `center` (room for `dim`
/// values) and `radius`.
///
/// # Safety
/// `r` must be a live handle; `center` must hold `dim` doubles; `radius`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_realization_ball(
    r: *const PcRealization,
    index: usize,
    center: *mut f64,
    radius: *mut f64,
) -> PcStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(null)?;
        if center.is_null() || radius.is_null() {
            return Err(null());
        }
        let b = r
            .realization
            .balls
            .get(index)
            .ok_or_else(|| (PcStatus::OutOfRange, format!("ball index {index} out of range")))?;
        ptr::copy_nonoverlapping(b.center.as_ptr(), center, b.center.len());
        *radius = b.radius;
        Ok(())
    })
}

/// The realization document with witnesses. Free with `pc_string_free`.
///
/// # Safety
/// `r` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_realization_to_json(r: *const PcRealization) -> *mut c_char {
    r.as_ref().map_or(ptr::null_mut(), |r| into_c_string(realization_to_json(&r.realization, Some(&r.witnesses))))
}

/// Runs the well-formedness, witness, pairwise-relation and Monte Carlo
/// checks of `r` against `code`.
///
/// # Safety
/// `r` and `code` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pc_verify(
    r: *const PcRealization,
    code: *const PcCode,
    samples: usize,
    seed: u64,
    out: *mut PcVerifyReport,
) -> PcStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(null)?;
        let c = code_ref(code)?;
        if out.is_null() {
            return Err(null());
        }
        if r.realization.n() != c.n() {
            return Err((PcStatus::InvalidInput, "realization and code have different neuron counts".into()));
        }
        let tol = GeometryConfig::default().tolerance;
        let wf = well_formed_check(&r.realization, tol);
        let wit = witness_check(&r.realization, c, &r.witnesses);
        let mc = monte_carlo_code_check(&r.realization, c, samples.max(1), seed);
        let a = recognize(c)?;
        let pairwise = !a.cf.is_degree_two() || pairwise_relation_check(&r.realization, &a.cf).ok;
        *out = PcVerifyReport {
            ok: wf.ok && wit.ok && mc.ok && pairwise,
            well_formed: wf.ok,
            witnesses: wit.ok,
            monte_carlo: mc.ok,
            pairwise,
            violations: mc.violations.len(),
            coverage: mc.coverage,
        };
        Ok(())
    })
}
