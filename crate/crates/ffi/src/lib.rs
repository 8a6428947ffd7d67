//! C interface to `clusterkit`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible function
//! returns an `i32` status (`CK_OK` or a negative `CK_ERR_*` code) and
//! writes results through out-pointers. After a failure,
//! `ck_last_error` describes what went wrong on the calling thread.
//!
//! Strings returned through `char **` are allocated here and must be
//! released with `ck_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use clusterkit::cli::session::{Session, SessionError, StartSpec};
use clusterkit::cli::{verify_start, CliError};
use clusterkit::seeds::{explore_from, Limits, SeedError};
use clusterkit::surface::SurfaceError;
use clusterkit::verify::VerifyError;
use clusterkit::{LaurentError, LaurentPolynomial};

pub const CK_OK: i32 = 0;
/// A required pointer argument was null.
pub const CK_ERR_NULL: i32 = -1;
/// A string argument was not valid UTF-8.
pub const CK_ERR_UTF8: i32 = -2;
/// Text or JSON input could not be parsed or described an invalid object.
pub const CK_ERR_INPUT: i32 = -3;
/// A vertex or index was out of range.
pub const CK_ERR_RANGE: i32 = -4;
/// The operation does not apply in the current state (nothing to undo, no surface, ...).
pub const CK_ERR_STATE: i32 = -5;
/// Exact division had a remainder.
pub const CK_ERR_NOT_DIVISIBLE: i32 = -6;
/// A configured search or size limit was hit.
pub const CK_ERR_LIMIT: i32 = -7;
/// Internal failure, including a caught panic.
pub const CK_ERR_INTERNAL: i32 = -8;

/// Opaque Laurent polynomial.
pub struct CkLaurent(LaurentPolynomial);

/// Opaque interactive session: a seed, its triangulation if any, and an undo history.
pub struct CkSession(Session);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<LaurentError> for Failure {
    fn from(e: LaurentError) -> Failure {
        let code = match e {
            LaurentError::NotDivisible { .. } | LaurentError::DivisionByZero => CK_ERR_NOT_DIVISIBLE,
            LaurentError::RankMismatch { .. } => CK_ERR_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

fn seed_code(e: &SeedError) -> i32 {
    match e {
        SeedError::NonExactDivision { .. } => CK_ERR_NOT_DIVISIBLE,
        SeedError::TruncatedGraph => CK_ERR_LIMIT,
        _ => CK_ERR_INPUT,
    }
}

fn surface_code(e: &SurfaceError) -> i32 {
    match e {
        SurfaceError::SearchLimitExceeded(_) => CK_ERR_LIMIT,
        SurfaceError::Inconsistent(_) => CK_ERR_INTERNAL,
        _ => CK_ERR_INPUT,
    }
}

impl From<SessionError> for Failure {
    fn from(e: SessionError) -> Failure {
        let message = e.to_string();
        Failure::from_session(&e, message)
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Failure {
        let code = match &e {
            CliError::Session(s) => return Failure::from_session(s, e.to_string()),
            CliError::Seed(s) => seed_code(s),
            CliError::Surface(s) => surface_code(s),
            CliError::Verify(VerifyError::LimitExceeded(_) | VerifyError::TruncatedGraph) => CK_ERR_LIMIT,
            _ => CK_ERR_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl Failure {
    fn from_session(e: &SessionError, message: String) -> Failure {
        let code = match e {
            SessionError::VertexOutOfRange { .. } => CK_ERR_RANGE,
            SessionError::EmptyHistory | SessionError::NoSurface(_) => CK_ERR_STATE,
            SessionError::LockStep(_) => CK_ERR_INTERNAL,
            SessionError::UnknownPreset(_) => CK_ERR_INPUT,
            SessionError::Seed(s) => seed_code(s),
            SessionError::Surface(s) => surface_code(s),
        };
        Failure::new(code, message)
    }
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            CK_OK
        }
        Ok(Err(fail)) => {
            set_error(&fail.message);
            fail.code
        }
        Err(_) => {
            set_error("internal panic");
            CK_ERR_INTERNAL
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(CK_ERR_NULL, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::new(CK_ERR_UTF8, "string argument is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(CK_ERR_NULL, "null handle"))
}

unsafe fn deref_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| Failure::new(CK_ERR_NULL, "null handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(CK_ERR_NULL, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure::new(CK_ERR_INTERNAL, "string contains NUL"))?;
    put(out, c.into_raw())
}

/// Message for the last failed call on this thread, or null after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `x1^2*x2^-1 + 3` style text in `rank` variables.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_parse(src: *const c_char, rank: usize, out: *mut *mut CkLaurent) -> i32 {
    guard(|| {
        let p = LaurentPolynomial::parse(text(src)?, rank).map_err(|e| Failure::new(CK_ERR_INPUT, e.to_string()))?;
        put(out, Box::into_raw(Box::new(CkLaurent(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_free(p: *mut CkLaurent) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn binary(
    a: *const CkLaurent,
    b: *const CkLaurent,
    out: *mut *mut CkLaurent,
    op: impl FnOnce(&LaurentPolynomial, &LaurentPolynomial) -> Result<LaurentPolynomial, Failure>,
) -> i32 {
    guard(|| {
        let (a, b) = (&deref(a)?.0, &deref(b)?.0);
        if a.rank() != b.rank() {
            return Err(LaurentError::RankMismatch { left: a.rank(), right: b.rank() }.into());
        }
        let r = op(a, b)?;
        put(out, Box::into_raw(Box::new(CkLaurent(r))))
    })
}

/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_add(a: *const CkLaurent, b: *const CkLaurent, out: *mut *mut CkLaurent) -> i32 {
    binary(a, b, out, |a, b| Ok(a + b))
}

/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_mul(a: *const CkLaurent, b: *const CkLaurent, out: *mut *mut CkLaurent) -> i32 {
    binary(a, b, out, |a, b| Ok(a * b))
}

/// Exact quotient `a / b`; fails with `CK_ERR_NOT_DIVISIBLE` on a remainder.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_divide_exact(
    a: *const CkLaurent,
    b: *const CkLaurent,
    out: *mut *mut CkLaurent,
) -> i32 {
    binary(a, b, out, |a, b| Ok(a.divide_exact(b)?))
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_num_terms(p: *const CkLaurent, out: *mut usize) -> i32 {
    guard(|| put(out, deref(p)?.0.num_terms()))
}

/// Writes whether every coefficient is strictly positive.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_is_positive(p: *const CkLaurent, out: *mut bool) -> i32 {
    guard(|| put(out, deref(p)?.0.all_coefficients_positive()))
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_laurent_to_string(p: *const CkLaurent, out: *mut *mut c_char) -> i32 {
    guard(|| put_string(out, deref(p)?.0.to_string()))
}

/// Starts a session from JSON: `{"preset": "A2"}`, a triangulation, or a
/// seed, in the same formats the command-line tool reads.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_session_new(json: *const c_char, out: *mut *mut CkSession) -> i32 {
    guard(|| {
        let spec: StartSpec =
            serde_json::from_str(text(json)?).map_err(|e| Failure::new(CK_ERR_INPUT, e.to_string()))?;
        let s = Session::new(spec, Limits::default())?;
        put(out, Box::into_raw(Box::new(CkSession(s))))
    })
}

/// # Safety
/// `s` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ck_session_free(s: *mut CkSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_session_rank(s: *const CkSession, out: *mut usize) -> i32 {
    guard(|| put(out, deref(s)?.0.seed().rank()))
}

/// Mutates at `vertex` (1-based), flipping the matching arc when the
/// session has a triangulation.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_session_mutate(s: *mut CkSession, vertex: usize) -> i32 {
    guard(|| Ok(deref_mut(s)?.0.mutate(vertex)?))
}

/// Flips the arc with the given label, for example `"1-3"`.
///
/// # Safety
/// `s` must be a live handle and `arc` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ck_session_flip(s: *mut CkSession, arc: *const c_char) -> i32 {
    guard(|| {
        let arc = text(arc)?;
        Ok(deref_mut(s)?.0.flip(arc)?)
    })
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ck_session_undo(s: *mut CkSession) -> i32 {
    guard(|| Ok(deref_mut(s)?.0.undo()?))
}

/// The cluster variable at `index` (1-based) as a new polynomial handle.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_session_variable(s: *const CkSession, index: usize, out: *mut *mut CkLaurent) -> i32 {
    guard(|| {
        let cluster = deref(s)?.0.seed().cluster();
        let n = cluster.len();
        let x = index
            .checked_sub(1)
            .and_then(|i| cluster.get(i))
            .ok_or_else(|| Failure::new(CK_ERR_RANGE, format!("index {index} out of range 1..={n}")))?;
        put(out, Box::into_raw(Box::new(CkLaurent(x.clone()))))
    })
}

/// The session state as JSON, identical to the `/state` payload of the
/// HTTP service.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_session_state_json(s: *const CkSession, out: *mut *mut c_char) -> i32 {
    guard(|| put_string(out, deref(s)?.0.state().to_string()))
}

/// Explores the exchange graph from the current seed, visiting at most
/// `max_seeds` seeds.
///
/// # Safety
/// `s` must be a live handle; the three output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ck_session_explore(
    s: *const CkSession,
    max_seeds: usize,
    seeds: *mut usize,
    variables: *mut usize,
    truncated: *mut bool,
) -> i32 {
    guard(|| {
        let s = &deref(s)?.0;
        let limits = Limits { max_seeds, ..s.limits() };
        let g = explore_from(s.seed(), limits).map_err(|e| Failure::new(seed_code(&e), e.to_string()))?;
        put(seeds, g.num_seeds())?;
        put(variables, g.num_variables())?;
        put(truncated, g.truncated)
    })
}

/// Runs the verifier on a start specification (same JSON as
/// `ck_session_new`). `passed` is false when some check failed; the full
/// report is written to `report` as JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `passed` and `report` writable.
#[no_mangle]
pub unsafe extern "C" fn ck_verify(json: *const c_char, winding: u32, passed: *mut bool, report: *mut *mut c_char) -> i32 {
    guard(|| {
        let spec: StartSpec =
            serde_json::from_str(text(json)?).map_err(|e| Failure::new(CK_ERR_INPUT, e.to_string()))?;
        let r = verify_start(&spec, Limits::default(), winding)?;
        put(passed, r.passed())?;
        put_string(report, serde_json::to_string(&r).expect("reports serialize"))
    })
}
