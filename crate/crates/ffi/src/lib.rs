//! C ABI over the `pexider` builders, evaluators and checks.
//!
//! Solutions are opaque `PkSolution` handles released with
//! `pk_solution_free`. Every fallible call returns a `PkStatus`; on failure
//! `pk_last_error_message` describes the error for the calling thread.
//! Strings returned through out-parameters are released with
//! `pk_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pexider::cli::{build_tuple, read_artifact_str, CliError, RunConfig, EXIT_CONSTRAINT, EXIT_SCHEMA};
use pexider::families::{paper_example, Component, SolutionTuple};
use pexider::verify::{classify_affine_intervals, residual_main, Verdict};
use pexider::Error;

/// Opaque solution tuple `(F, f1, f2, g1, g2, G)`.
pub struct PkSolution {
    tuple: SolutionTuple,
}

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, unknown fields or an invalid specification.
    InvalidInput = 3,
    /// Parameters violate the constraint identities of their family.
    Constraint = 4,
    /// Argument outside the evaluation window or image.
    Domain = 5,
    /// Numerical failure, including nonmonotone or degenerate input.
    Numerical = 6,
    /// The library panicked; the handle arguments are left unchanged.
    Panic = 7,
}

/// Function of a solution tuple.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkComponent {
    BigF = 0,
    F1 = 1,
    F2 = 2,
    G1 = 3,
    G2 = 4,
    BigG = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PkVerdict {
    GloballyAffine = 0,
    PartiallyAffine = 1,
    NowhereAffine = 2,
}

/// Absolute residual of the main equation over an `n × n` grid.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PkResidual {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub worst_x: f64,
    pub worst_y: f64,
    pub samples: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.root() {
            Error::Constraint { .. } => PkStatus::Constraint,
            Error::Domain { .. } | Error::Range { .. } | Error::NotContained { .. } => PkStatus::Domain,
            Error::Spec(_) | Error::InvalidInterval { .. } => PkStatus::InvalidInput,
            _ => PkStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e.code {
            EXIT_CONSTRAINT => PkStatus::Constraint,
            EXIT_SCHEMA => PkStatus::InvalidInput,
            _ => PkStatus::Numerical,
        };
        Failure(status, e.message)
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure or panic and converts it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            PkStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PkStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(PkStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a>(s: *const PkSolution) -> Result<&'a PkSolution, Failure> {
    s.as_ref().ok_or_else(|| null("solution"))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn hand_out(out: *mut *mut PkSolution, tuple: SolutionTuple) -> Result<(), Failure> {
    put(out, Box::into_raw(Box::new(PkSolution { tuple })), "out")
}

fn component(c: PkComponent) -> Component {
    match c {
        PkComponent::BigF => Component::BigF,
        PkComponent::F1 => Component::F1,
        PkComponent::F2 => Component::F2,
        PkComponent::G1 => Component::G1,
        PkComponent::G2 => Component::G2,
        PkComponent::BigG => Component::BigG,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null after a
/// successful call. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn pk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The C¹ partially affine example on `]0, 4[`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_paper_example(out: *mut *mut PkSolution) -> PkStatus {
    guard(|| hand_out(out, paper_example()))
}

/// Builds a solution from a run configuration in JSON, the same document
/// accepted by `pexider-kit --config`; `family` must be set.
///
/// # Safety
/// `config_json` must be null or a NUL-terminated string; `out` must be
/// null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_build(config_json: *const c_char, out: *mut *mut PkSolution) -> PkStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Failure(PkStatus::InvalidInput, format!("invalid config: {e}")))?;
        if cfg.schema != pexider::cli::CONFIG_SCHEMA {
            return Err(Failure(PkStatus::InvalidInput, format!("unsupported config schema {:?}", cfg.schema)));
        }
        let family = cfg.family.ok_or_else(|| Failure(PkStatus::InvalidInput, "config has no \"family\"".into()))?;
        hand_out(out, build_tuple(family, &cfg)?)
    })
}

/// Loads a solution from JSON: either a bare tuple as written by
/// `pk_solution_to_json` or a `pexider-kit build` artifact.
///
/// # Safety
/// As for [`pk_solution_build`].
#[no_mangle]
pub unsafe extern "C" fn pk_solution_from_json(json: *const c_char, out: *mut *mut PkSolution) -> PkStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let is_artifact = serde_json::from_str::<serde_json::Value>(text)
            .map_err(|e| Failure(PkStatus::InvalidInput, format!("invalid JSON: {e}")))?
            .get("schema")
            .is_some();
        let tuple = if is_artifact {
            read_artifact_str(text)?.tuple
        } else {
            serde_json::from_str(text).map_err(|e| Failure(PkStatus::InvalidInput, format!("invalid tuple: {e}")))?
        };
        hand_out(out, tuple)
    })
}

/// Serializes the tuple to JSON; release the string with `pk_string_free`.
///
/// # Safety
/// `solution` must be null or a live handle; `out` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_to_json(solution: *const PkSolution, out: *mut *mut c_char) -> PkStatus {
    guard(|| {
        let s = handle(solution)?;
        let text = serde_json::to_string(&s.tuple)
            .map_err(|e| Failure(PkStatus::Numerical, format!("cannot serialize: {e}")))?;
        let c = CString::new(text).map_err(|e| Failure(PkStatus::Numerical, e.to_string()))?;
        put(out, c.into_raw(), "out")
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_free(solution: *mut PkSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Open domain `]lo, hi[` of one component (`I` for all but `G`).
///
/// # Safety
/// `solution` must be null or a live handle; `lo` and `hi` must be null or
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_domain(
    solution: *const PkSolution,
    which: PkComponent,
    lo: *mut f64,
    hi: *mut f64,
) -> PkStatus {
    guard(|| {
        let d = handle(solution)?.tuple.component(component(which)).domain();
        put(lo, d.lo(), "lo")?;
        put(hi, d.hi(), "hi")
    })
}

/// Value of one component at `x`.
///
/// # Safety
/// As for [`pk_solution_domain`], with `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_eval(
    solution: *const PkSolution,
    which: PkComponent,
    x: f64,
    out: *mut f64,
) -> PkStatus {
    guard(|| {
        let v = handle(solution)?.tuple.component(component(which)).eval(x)?;
        put(out, v, "out")
    })
}

/// Derivative of one component at `x`.
///
/// # Safety
/// As for [`pk_solution_eval`].
#[no_mangle]
pub unsafe extern "C" fn pk_solution_deriv(
    solution: *const PkSolution,
    which: PkComponent,
    x: f64,
    out: *mut f64,
) -> PkStatus {
    guard(|| {
        let v = handle(solution)?.tuple.component(component(which)).deriv(x)?;
        put(out, v, "out")
    })
}

/// Residual of `F((x+y)/2) + f1(x) + f2(y) - G(g1(x) + g2(y))` over the
/// `n × n` grid of `I` shrunk by `margin`.
///
/// # Safety
/// As for [`pk_solution_eval`].
#[no_mangle]
pub unsafe extern "C" fn pk_solution_residual(
    solution: *const PkSolution,
    n: usize,
    margin: f64,
    out: *mut PkResidual,
) -> PkStatus {
    guard(|| {
        let r = residual_main(&handle(solution)?.tuple, n, margin)?;
        let res = PkResidual {
            max_abs: r.max_abs,
            mean_abs: r.mean_abs,
            worst_x: r.worst_point[0],
            worst_y: r.worst_point[1],
            samples: r.samples,
        };
        put(out, res, "out")
    })
}

/// Classifies `F` as globally, partially or nowhere affine from `n` samples
/// of `F'` with relative tolerance `tol`. The affine windows are written to
/// `windows` as `[lo, hi]` pairs, at most `capacity` of them; `count`
/// receives the total number found. `windows` may be null when `capacity`
/// is 0.
///
/// # Safety
/// `solution` must be null or a live handle; `verdict` and `count` must be
/// null or valid for writes; `windows` must be valid for `2 * capacity`
/// writes when `capacity > 0`.
#[no_mangle]
pub unsafe extern "C" fn pk_solution_classify(
    solution: *const PkSolution,
    tol: f64,
    n: usize,
    verdict: *mut PkVerdict,
    windows: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> PkStatus {
    guard(|| {
        let rep = classify_affine_intervals(handle(solution)?.tuple.big_f(), tol, n)?;
        if capacity > 0 && windows.is_null() {
            return Err(null("windows"));
        }
        let v = match rep.verdict {
            Verdict::GloballyAffine => PkVerdict::GloballyAffine,
            Verdict::PartiallyAffine => PkVerdict::PartiallyAffine,
            Verdict::NowhereAffine => PkVerdict::NowhereAffine,
        };
        put(verdict, v, "verdict")?;
        put(count, rep.intervals.len(), "count")?;
        for (k, w) in rep.intervals.iter().take(capacity).enumerate() {
            windows.add(2 * k).write(w.interval.lo());
            windows.add(2 * k + 1).write(w.interval.hi());
        }
        Ok(())
    })
}
