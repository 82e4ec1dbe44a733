//! C ABI over `maxent-core`.
//!
//! Every function returns a [`MaxentStatus`]. On failure a message for the
//! calling thread is available from [`maxent_last_error`]. Solver results
//! come back as opaque [`MaxentSolution`] handles owned by the caller and
//! released with [`maxent_solution_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use maxent_core::{
    dist, most_probable_coherent_type, shannon_entropy, solve_inverse, solve_maxent_coherent,
    solve_ml_scalar, ConstraintSystem, DualSolution, Error, Pmf, Potential, SolverConfig,
};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxentStatus {
    Ok = 0,
    InvalidInput = 1,
    DimensionMismatch = 2,
    SupportMismatch = 3,
    InfeasibleTarget = 4,
    DegeneratePotential = 5,
    /// The solution handle, if requested, still holds the best iterate.
    MaxIterExceeded = 6,
    EnumerationTooLarge = 7,
    NoCoherentType = 8,
    NoFeasiblePoint = 9,
    InvalidRange = 10,
    NullPointer = 11,
    Panic = 12,
}

impl From<&Error> for MaxentStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => Self::InvalidInput,
            Error::DimensionMismatch { .. } => Self::DimensionMismatch,
            Error::SupportMismatch { .. } => Self::SupportMismatch,
            Error::InfeasibleTarget(_) => Self::InfeasibleTarget,
            Error::DegeneratePotential { .. } => Self::DegeneratePotential,
            Error::MaxIterExceeded { .. } => Self::MaxIterExceeded,
            Error::EnumerationTooLarge { .. } => Self::EnumerationTooLarge,
            Error::NoCoherentType { .. } => Self::NoCoherentType,
            Error::NoFeasiblePoint => Self::NoFeasiblePoint,
            Error::InvalidRange { .. } => Self::InvalidRange,
        }
    }
}

/// Solver settings. Created with [`maxent_config_new`].
pub struct MaxentConfig {
    inner: SolverConfig,
}

/// Multipliers and distribution returned by the solvers.
pub struct MaxentSolution {
    inner: DualSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: MaxentStatus, msg: impl Into<String>) -> MaxentStatus {
    set_error(msg.into());
    status
}

fn fail_with(e: &Error) -> MaxentStatus {
    set_error(e.to_string());
    MaxentStatus::from(e)
}

fn guard(f: impl FnOnce() -> MaxentStatus) -> MaxentStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(MaxentStatus::Panic, format!("panic: {msg}"))
        }
    }
}

/// # Safety
/// `data` must be null or valid for `len` reads.
unsafe fn slice<'a, T>(data: *const T, len: usize, name: &str) -> Result<&'a [T], MaxentStatus> {
    if len == 0 {
        Ok(&[])
    } else if data.is_null() {
        Err(fail(MaxentStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(std::slice::from_raw_parts(data, len))
    }
}

/// # Safety
/// `data` must be null or valid for `len` writes.
unsafe fn slice_mut<'a, T>(data: *mut T, len: usize, name: &str) -> Result<&'a mut [T], MaxentStatus> {
    if len == 0 {
        Ok(&mut [])
    } else if data.is_null() {
        Err(fail(MaxentStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(std::slice::from_raw_parts_mut(data, len))
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

macro_rules! core {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail_with(&e),
        }
    };
}

unsafe fn config_or_default(cfg: *const MaxentConfig) -> SolverConfig {
    cfg.as_ref().map(|c| c.inner).unwrap_or_default()
}

/// Writes `sol` through `out`. A `MaxIterExceeded` error still hands back
/// the best iterate.
unsafe fn emit(result: maxent_core::Result<DualSolution>, out: *mut *mut MaxentSolution) -> MaxentStatus {
    let (sol, status) = match result {
        Ok(sol) => (sol, MaxentStatus::Ok),
        Err(Error::MaxIterExceeded { best }) => {
            let status = fail(
                MaxentStatus::MaxIterExceeded,
                Error::MaxIterExceeded { best: best.clone() }.to_string(),
            );
            (*best, status)
        }
        Err(e) => return fail_with(&e),
    };
    *out = Box::into_raw(Box::new(MaxentSolution { inner: sol }));
    status
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn maxent_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn maxent_status_name(status: MaxentStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MaxentStatus::Ok => b"ok\0",
        MaxentStatus::InvalidInput => b"invalid input\0",
        MaxentStatus::DimensionMismatch => b"dimension mismatch\0",
        MaxentStatus::SupportMismatch => b"support mismatch\0",
        MaxentStatus::InfeasibleTarget => b"infeasible target\0",
        MaxentStatus::DegeneratePotential => b"degenerate potential\0",
        MaxentStatus::MaxIterExceeded => b"max iterations exceeded\0",
        MaxentStatus::EnumerationTooLarge => b"enumeration too large\0",
        MaxentStatus::NoCoherentType => b"no coherent type\0",
        MaxentStatus::NoFeasiblePoint => b"no feasible point\0",
        MaxentStatus::InvalidRange => b"invalid range\0",
        MaxentStatus::NullPointer => b"null pointer\0",
        MaxentStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

/// New config with default settings. Free with [`maxent_config_free`].
#[no_mangle]
pub extern "C" fn maxent_config_new() -> *mut MaxentConfig {
    Box::into_raw(Box::new(MaxentConfig { inner: SolverConfig::default() }))
}

/// # Safety
/// `cfg` must be null or come from [`maxent_config_new`], and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maxent_config_free(cfg: *mut MaxentConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Sets all solver settings at once. Invalid values are rejected and leave
/// `cfg` unchanged.
///
/// # Safety
/// `cfg` must be null or a live config handle.
#[no_mangle]
pub unsafe extern "C" fn maxent_config_set(
    cfg: *mut MaxentConfig,
    tol_residual: f64,
    max_iter: usize,
    lambda_blowup: f64,
    damping: f64,
) -> MaxentStatus {
    guard(|| {
        let Some(cfg) = cfg.as_mut() else {
            return fail(MaxentStatus::NullPointer, "cfg is null");
        };
        let next = SolverConfig { tol_residual, max_iter, lambda_blowup, damping };
        core!(next.validate());
        cfg.inner = next;
        MaxentStatus::Ok
    })
}

/// `dist(u)` written to `out` (length `m`).
///
/// # Safety
/// `u` must be valid for `m` reads and `out` for `m` writes.
#[no_mangle]
pub unsafe extern "C" fn maxent_dist(u: *const f64, m: usize, out: *mut f64) -> MaxentStatus {
    guard(|| {
        let u = tri!(slice(u, m, "u"));
        let out = tri!(slice_mut(out, m, "out"));
        let p = dist(&core!(Potential::new(u.to_vec())));
        out.copy_from_slice(p.probs());
        MaxentStatus::Ok
    })
}

/// Shannon entropy of `p` in nats.
///
/// # Safety
/// `p` must be valid for `m` reads and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn maxent_shannon_entropy(p: *const f64, m: usize, out: *mut f64) -> MaxentStatus {
    guard(|| {
        let p = tri!(slice(p, m, "p"));
        if out.is_null() {
            return fail(MaxentStatus::NullPointer, "out is null");
        }
        *out = shannon_entropy(&core!(Pmf::new(p.to_vec())));
        MaxentStatus::Ok
    })
}

/// Maximum-likelihood scalar `λ` fitting `dist(λu)` to frequencies `r`.
/// `cfg` may be null for defaults. `*out` is set to null on failure.
///
/// # Safety
/// `u` and `r` must be valid for `m` reads, `cfg` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxent_solve_ml(
    u: *const f64,
    r: *const f64,
    m: usize,
    cfg: *const MaxentConfig,
    out: *mut *mut MaxentSolution,
) -> MaxentStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxentStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let u = core!(Potential::new(tri!(slice(u, m, "u")).to_vec()));
        let r = core!(Pmf::new(tri!(slice(r, m, "r")).to_vec()));
        emit(solve_ml_scalar(&u, &r, &config_or_default(cfg)), out)
    })
}

/// Maximum-entropy distribution with the same mean of `u` as `r`.
///
/// # Safety
/// Same as [`maxent_solve_ml`].
#[no_mangle]
pub unsafe extern "C" fn maxent_solve_maxent(
    u: *const f64,
    r: *const f64,
    m: usize,
    cfg: *const MaxentConfig,
    out: *mut *mut MaxentSolution,
) -> MaxentStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxentStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let u = core!(Potential::new(tri!(slice(u, m, "u")).to_vec()));
        let r = core!(Pmf::new(tri!(slice(r, m, "r")).to_vec()));
        emit(solve_maxent_coherent(&u, &r, &config_or_default(cfg)), out)
    })
}

/// Maximum-entropy `p` with `X p = y`. `x` is `j × m`, row-major.
///
/// # Safety
/// `x` must be valid for `j * m` reads, `y` for `j` reads, `cfg` null or
/// live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn maxent_solve_inverse(
    x: *const f64,
    j: usize,
    m: usize,
    y: *const f64,
    cfg: *const MaxentConfig,
    out: *mut *mut MaxentSolution,
) -> MaxentStatus {
    guard(|| {
        if out.is_null() {
            return fail(MaxentStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let Some(len) = j.checked_mul(m) else {
            return fail(MaxentStatus::InvalidInput, "j * m overflows");
        };
        let x = tri!(slice(x, len, "x"));
        let y = tri!(slice(y, j, "y"));
        let rows = if m == 0 { vec![Vec::new(); j] } else { x.chunks(m).map(<[f64]>::to_vec).collect() };
        let sys = core!(ConstraintSystem::new(rows, y.to_vec()));
        emit(solve_inverse(&sys, &config_or_default(cfg)), out)
    })
}

/// Most probable type of size `n` whose mean of `u` lies within `delta` of
/// `c`. A null `delta` selects the default window. `counts` receives `m`
/// entries; `log_multiplicity` may be null.
///
/// # Safety
/// `u` must be valid for `m` reads, `counts` for `m` writes, `delta` and
/// `log_multiplicity` null or valid.
#[no_mangle]
pub unsafe extern "C" fn maxent_most_probable_coherent_type(
    n: u64,
    u: *const f64,
    m: usize,
    c: f64,
    delta: *const f64,
    counts: *mut u64,
    log_multiplicity: *mut f64,
) -> MaxentStatus {
    guard(|| {
        let u = core!(Potential::new(tri!(slice(u, m, "u")).to_vec()));
        let counts = tri!(slice_mut(counts, m, "counts"));
        let t = core!(most_probable_coherent_type(n, &u, c, delta.as_ref().copied()));
        counts.copy_from_slice(&t.counts);
        if let Some(out) = log_multiplicity.as_mut() {
            *out = t.log_multiplicity;
        }
        MaxentStatus::Ok
    })
}

/// # Safety
/// `sol` must be null or come from a solver call, and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_free(sol: *mut MaxentSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// Number of outcomes, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_pmf_len(sol: *const MaxentSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.pmf.len())
}

/// Number of multipliers, or 0 for a null handle.
///
/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_lambda_len(sol: *const MaxentSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.lambda.len())
}

unsafe fn copy_out(sol: *const MaxentSolution, out: *mut f64, len: usize, pick: fn(&DualSolution) -> &[f64]) -> MaxentStatus {
    guard(|| {
        let Some(sol) = sol.as_ref() else {
            return fail(MaxentStatus::NullPointer, "sol is null");
        };
        let src = pick(&sol.inner);
        if src.len() != len {
            return fail_with(&Error::DimensionMismatch { expected: src.len(), found: len });
        }
        tri!(slice_mut(out, len, "out")).copy_from_slice(src);
        MaxentStatus::Ok
    })
}

/// Copies the distribution into `out`; `len` must equal
/// [`maxent_solution_pmf_len`].
///
/// # Safety
/// `sol` must be live and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_copy_pmf(sol: *const MaxentSolution, out: *mut f64, len: usize) -> MaxentStatus {
    copy_out(sol, out, len, |s| s.pmf.probs())
}

/// Copies the multipliers into `out`; `len` must equal
/// [`maxent_solution_lambda_len`].
///
/// # Safety
/// `sol` must be live and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_copy_lambda(sol: *const MaxentSolution, out: *mut f64, len: usize) -> MaxentStatus {
    copy_out(sol, out, len, |s| &s.lambda)
}

/// Max-norm constraint residual, or NaN for a null handle.
///
/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_residual(sol: *const MaxentSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.inner.residual_inf)
}

/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_iterations(sol: *const MaxentSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.inner.iterations)
}

/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_converged(sol: *const MaxentSolution) -> bool {
    sol.as_ref().is_some_and(|s| s.inner.converged)
}

/// True when a constant potential left `λ` undetermined and 0 was chosen.
///
/// # Safety
/// `sol` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn maxent_solution_degenerate(sol: *const MaxentSolution) -> bool {
    sol.as_ref().is_some_and(|s| s.inner.degenerate)
}
