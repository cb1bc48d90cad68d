//! C ABI for the `wsvd` library.
//!
//! Every function returns a [`WsvdStatus`]; results come back through out
//! pointers. Objects are opaque handles released with the matching `_free`
//! function. After a failure, [`wsvd_last_error`] describes it (per thread).
//!
//! Points cross the boundary as interleaved `x0, y0, x1, y1, …` arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use wsvd::cubature::{rule_with_budget, CubatureRule, RuleKind};
use wsvd::{Approximant, Domain, Kernel, Truncation, WsvdBasis as Basis, WsvdError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsvdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DuplicatePoints = 3,
    TooFewPoints = 4,
    UnsupportedDomain = 5,
    DegenerateRule = 6,
    EigenFailure = 7,
    LengthMismatch = 8,
    SingularMatrix = 9,
    BufferTooSmall = 10,
    Internal = 99,
}

/// Cubature rule handle.
pub struct WsvdRule(CubatureRule);

/// Weighted SVD basis handle.
pub struct WsvdBasis(Arc<Basis>);

/// Approximant handle. Keeps its basis alive independently of the basis
/// handle it was built from.
pub struct WsvdApproximant(Approximant);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| c"error message contained NUL".into());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &WsvdError) -> WsvdStatus {
    match err {
        WsvdError::DuplicatePoints { .. } => WsvdStatus::DuplicatePoints,
        WsvdError::TooFewPoints { .. } => WsvdStatus::TooFewPoints,
        WsvdError::UnsupportedDomain(_) => WsvdStatus::UnsupportedDomain,
        WsvdError::DegenerateRule(_) => WsvdStatus::DegenerateRule,
        WsvdError::EigenFailure => WsvdStatus::EigenFailure,
        WsvdError::LengthMismatch { .. } => WsvdStatus::LengthMismatch,
        WsvdError::SingularMatrix { .. } => WsvdStatus::SingularMatrix,
        WsvdError::EmptyGrid | WsvdError::InvalidArgument(_) | WsvdError::InvalidConfig(_) | WsvdError::Io(_) => {
            WsvdStatus::InvalidArgument
        }
    }
}

struct Failure(WsvdStatus, String);

impl From<WsvdError> for Failure {
    fn from(err: WsvdError) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(WsvdStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any failure and converts panics to `Internal`.
fn guard<F: FnOnce() -> Result<(), Failure>>(body: F) -> WsvdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            WsvdStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            WsvdStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(WsvdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn points_arg(xy: *const f64, count: usize) -> Result<Vec<[f64; 2]>, Failure> {
    Ok(slice_arg(xy, 2 * count, "xy")?
        .chunks_exact(2)
        .map(|c| [c[0], c[1]])
        .collect())
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn copy_out(src: &[f64], dst: *mut f64, capacity: usize) -> Result<(), Failure> {
    if src.len() > capacity {
        return Err(Failure(
            WsvdStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", src.len()),
        ));
    }
    if src.is_empty() {
        return Ok(());
    }
    if dst.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn wsvd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Rule on a named domain (`square`, `disk`, `cutdisk`, `lens`) with about
/// `budget` nodes. `kind` may be null for the domain's default rule.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_new(
    domain: *const c_char,
    kind: *const c_char,
    budget: usize,
    out: *mut *mut WsvdRule,
) -> WsvdStatus {
    guard(|| {
        let domain: Domain = str_arg(domain, "domain")?.parse()?;
        let kind = if kind.is_null() {
            RuleKind::for_domain(&domain)
        } else {
            str_arg(kind, "kind")?.parse()?
        };
        let rule = rule_with_budget(&domain, kind, budget)?;
        write_out(out, Box::into_raw(Box::new(WsvdRule(rule))))
    })
}

/// Rule from explicit nodes and positive weights on a named domain.
///
/// # Safety
/// `xy` holds `2 * count` values and `weights` holds `count`.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_from_arrays(
    domain: *const c_char,
    xy: *const f64,
    weights: *const f64,
    count: usize,
    out: *mut *mut WsvdRule,
) -> WsvdStatus {
    guard(|| {
        let domain: Domain = str_arg(domain, "domain")?.parse()?;
        let nodes = points_arg(xy, count)?;
        let weights = slice_arg(weights, count, "weights")?.to_vec();
        let rule = CubatureRule::new(nodes, weights, domain)?;
        write_out(out, Box::into_raw(Box::new(WsvdRule(rule))))
    })
}

/// # Safety
/// `rule` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_len(rule: *const WsvdRule, out: *mut usize) -> WsvdStatus {
    guard(|| write_out(out, handle(rule, "rule")?.0.len()))
}

/// Copies `2 * len` interleaved coordinates into `xy`.
///
/// # Safety
/// `xy` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_nodes(rule: *const WsvdRule, xy: *mut f64, capacity: usize) -> WsvdStatus {
    guard(|| {
        let flat: Vec<f64> = handle(rule, "rule")?.0.nodes().iter().flatten().copied().collect();
        copy_out(&flat, xy, capacity)
    })
}

/// # Safety
/// `weights` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_weights(rule: *const WsvdRule, weights: *mut f64, capacity: usize) -> WsvdStatus {
    guard(|| copy_out(handle(rule, "rule")?.0.weights(), weights, capacity))
}

/// # Safety
/// `rule` must come from this library and not be used afterwards. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn wsvd_rule_free(rule: *mut WsvdRule) {
    if !rule.is_null() {
        drop(Box::from_raw(rule));
    }
}

/// Builds the basis for kernel `name` with shape parameter `eps` on `rule`.
/// The rule handle stays owned by the caller.
///
/// # Safety
/// `kernel` must be NUL-terminated, `rule` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_new(
    kernel: *const c_char,
    eps: f64,
    rule: *const WsvdRule,
    out: *mut *mut WsvdBasis,
) -> WsvdStatus {
    guard(|| {
        let kernel = Kernel::from_name(str_arg(kernel, "kernel")?, eps)?;
        let rule = handle(rule, "rule")?.0.clone();
        let basis = Basis::build(kernel, rule)?;
        write_out(out, Box::into_raw(Box::new(WsvdBasis(Arc::new(basis)))))
    })
}

/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_len(basis: *const WsvdBasis, out: *mut usize) -> WsvdStatus {
    guard(|| write_out(out, handle(basis, "basis")?.0.len()))
}

/// Number of basis functions above the eigenvalue clamp.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_active(basis: *const WsvdBasis, out: *mut usize) -> WsvdStatus {
    guard(|| write_out(out, handle(basis, "basis")?.0.n_active()))
}

/// Copies the `len` eigenvalues `σⱼ²`, descending.
///
/// # Safety
/// `sigma2` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_sigma2(basis: *const WsvdBasis, sigma2: *mut f64, capacity: usize) -> WsvdStatus {
    guard(|| copy_out(handle(basis, "basis")?.0.sigma2(), sigma2, capacity))
}

/// Writes the `active` basis values `u_j(x, y)` into `values`.
///
/// # Safety
/// `values` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_eval(
    basis: *const WsvdBasis,
    x: f64,
    y: f64,
    values: *mut f64,
    capacity: usize,
) -> WsvdStatus {
    guard(|| {
        let u = handle(basis, "basis")?.0.eval_basis(&[x, y]);
        copy_out(u.as_slice(), values, capacity)
    })
}

/// Power function of the first `m` basis functions at `(x, y)`.
///
/// # Safety
/// `basis` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_power_function(
    basis: *const WsvdBasis,
    x: f64,
    y: f64,
    m: usize,
    out: *mut f64,
) -> WsvdStatus {
    guard(|| write_out(out, handle(basis, "basis")?.0.power_function(&[x, y], m)))
}

/// # Safety
/// `basis` must come from this library and not be used afterwards. Null is
/// ignored. Approximants built from it remain valid.
#[no_mangle]
pub unsafe extern "C" fn wsvd_basis_free(basis: *mut WsvdBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

/// Projects node samples (`len` values, in node order) onto the basis.
///
/// # Safety
/// `samples` must hold `count` values.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_project(
    basis: *const WsvdBasis,
    samples: *const f64,
    count: usize,
    out: *mut *mut WsvdApproximant,
) -> WsvdStatus {
    guard(|| {
        let basis = Arc::clone(&handle(basis, "basis")?.0);
        let approx = Approximant::project(basis, slice_arg(samples, count, "samples")?)?;
        write_out(out, Box::into_raw(Box::new(WsvdApproximant(approx))))
    })
}

unsafe fn truncated(approx: *const WsvdApproximant, policy: Truncation, out: *mut *mut WsvdApproximant) -> WsvdStatus {
    guard(|| {
        let t = handle(approx, "approximant")?.0.truncate(policy)?;
        write_out(out, Box::into_raw(Box::new(WsvdApproximant(t))))
    })
}

/// New approximant keeping the first `m` terms (capped at the active count).
///
/// # Safety
/// `approx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_truncate_order(
    approx: *const WsvdApproximant,
    m: usize,
    out: *mut *mut WsvdApproximant,
) -> WsvdStatus {
    truncated(approx, Truncation::Order(m), out)
}

/// New approximant keeping the terms with `σⱼ ≥ tol`.
///
/// # Safety
/// `approx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_truncate_tol(
    approx: *const WsvdApproximant,
    tol: f64,
    out: *mut *mut WsvdApproximant,
) -> WsvdStatus {
    truncated(approx, Truncation::SigmaTol(tol), out)
}

/// # Safety
/// `approx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_terms(approx: *const WsvdApproximant, out: *mut usize) -> WsvdStatus {
    guard(|| write_out(out, handle(approx, "approximant")?.0.m_active()))
}

/// # Safety
/// `approx` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_eval(approx: *const WsvdApproximant, x: f64, y: f64, out: *mut f64) -> WsvdStatus {
    guard(|| write_out(out, handle(approx, "approximant")?.0.eval(&[x, y])))
}

/// Evaluates at `count` points given as interleaved `xy`.
///
/// # Safety
/// `xy` holds `2 * count` values and `values` holds `count`.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_eval_many(
    approx: *const WsvdApproximant,
    xy: *const f64,
    count: usize,
    values: *mut f64,
) -> WsvdStatus {
    guard(|| {
        let approx = &handle(approx, "approximant")?.0;
        let points = points_arg(xy, count)?;
        copy_out(&approx.eval_many(&points), values, count)
    })
}

/// # Safety
/// `approx` must come from this library and not be used afterwards. Null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn wsvd_approx_free(approx: *mut WsvdApproximant) {
    if !approx.is_null() {
        drop(Box::from_raw(approx));
    }
}
