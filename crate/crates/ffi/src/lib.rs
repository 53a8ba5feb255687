//! C ABI over the laplace-fourier library. Functions are reached through
//! opaque handles; every call returns an [`LpftStatus`] and writes results
//! through out-pointers. The message of the last failure on the calling
//! thread is available from [`lpft_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use laplace_fourier::config::FnSpec;
use laplace_fourier::convolution::{convolve, ConvPlan};
use laplace_fourier::fourier::{fourier_transform, invert, SpectrumProvider};
use laplace_fourier::laplace_means::{ld0, ld1, MeanSpec};
use laplace_fourier::{
    integrate_improper, Error, ExtendedInterval, IntegralResult, LadderConfig, RealFn, TailClass, TruncationPolicy,
};

/// Result codes of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpftStatus {
    Ok = 0,
    /// A value was written but its error estimate misses the tolerance.
    NotConverged = 1,
    InvalidArgument = 2,
    HypothesisViolation = 3,
    SidesDisagree = 4,
    NoConvergence = 5,
    IntegrationFailed = 6,
    ParseError = 7,
    UnknownFunction = 8,
    IoError = 9,
    NullPointer = 10,
    Panic = 11,
}

impl From<&Error> for LpftStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => LpftStatus::InvalidArgument,
            Error::HypothesisViolation(_) => LpftStatus::HypothesisViolation,
            Error::SidesDisagree { .. } => LpftStatus::SidesDisagree,
            Error::NoConvergence(_) => LpftStatus::NoConvergence,
            Error::Integration(_) => LpftStatus::IntegrationFailed,
            Error::Parse(_) => LpftStatus::ParseError,
            Error::UnknownFunction(_) => LpftStatus::UnknownFunction,
            Error::Io(_) => LpftStatus::IoError,
        }
    }
}

/// A real function of one variable.
pub struct LpftFunction {
    inner: RealFn,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> LpftStatus {
    let status = LpftStatus::from(&e);
    set_error(e.to_string());
    status
}

fn guard(body: impl FnOnce() -> LpftStatus) -> LpftStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            LpftStatus::Panic
        }
    }
}

fn null(what: &str) -> LpftStatus {
    set_error(format!("{what} is null"));
    LpftStatus::NullPointer
}

fn converged_status<V>(r: &IntegralResult<V>) -> LpftStatus {
    if r.status.is_converged() {
        LpftStatus::Ok
    } else {
        set_error(format!("result not converged: {}", r.status));
        LpftStatus::NotConverged
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, LpftStatus> {
    if p.is_null() {
        return Err(null("string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string is not UTF-8".into());
        LpftStatus::InvalidArgument
    })
}

unsafe fn func<'a>(p: *const LpftFunction) -> Result<&'a RealFn, LpftStatus> {
    p.as_ref().map(|f| &f.inner).ok_or_else(|| null("function handle"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! out {
    ($($p:ident),*) => {
        $( if $p.is_null() { return null(stringify!($p)); } )*
    };
}

/// Creates a handle for a corpus function or an expression from the
/// closed grammar. `tail` names the tail class of expressions that are not
/// compactly supported and may be null.
///
/// # Safety
/// `spec` and `tail` must be null or NUL-terminated strings; `out` must be
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lpft_function_new(
    spec: *const c_char,
    tail: *const c_char,
    out: *mut *mut LpftFunction,
) -> LpftStatus {
    guard(|| {
        out!(out);
        let spec: FnSpec = match tri!(text(spec)).parse() {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let tail = if tail.is_null() {
            None
        } else {
            match TailClass::parse(tri!(text(tail))) {
                Ok(t) => Some(t),
                Err(e) => return fail(e),
            }
        };
        match spec.resolve(tail) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(LpftFunction { inner: f }));
                LpftStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `f` must be null or a handle from [`lpft_function_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lpft_function_free(f: *mut LpftFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Evaluates f at x.
///
/// # Safety
/// `f` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lpft_function_eval(f: *const LpftFunction, x: f64, out: *mut f64) -> LpftStatus {
    guard(|| {
        out!(out);
        *out = tri!(func(f)).eval(x);
        LpftStatus::Ok
    })
}

/// ∫_lo^hi f with infinite endpoints allowed (pass ±INFINITY).
///
/// # Safety
/// `f` must be a live handle; `value` and `abs_err` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lpft_integrate(
    f: *const LpftFunction,
    lo: f64,
    hi: f64,
    tol: f64,
    value: *mut f64,
    abs_err: *mut f64,
) -> LpftStatus {
    guard(|| {
        out!(value, abs_err);
        let f = tri!(func(f));
        let iv = match ExtendedInterval::new(lo, hi) {
            Ok(iv) => iv,
            Err(e) => return fail(e),
        };
        let r = if iv.is_bounded() {
            laplace_fourier::integrate_bounded(f, lo, hi, tol)
        } else {
            integrate_improper(f, iv, tol, &TruncationPolicy::for_tol(tol))
        };
        match r {
            Ok(r) => {
                *value = r.value;
                *abs_err = r.abs_error_estimate;
                converged_status(&r)
            }
            Err(e) => fail(e),
        }
    })
}

/// f^(y) = ∫ f(x) e^{-2 pi i y x} dx.
///
/// # Safety
/// `f` must be a live handle; `re`, `im` and `abs_err` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lpft_fourier_transform(
    f: *const LpftFunction,
    y: f64,
    tol: f64,
    re: *mut f64,
    im: *mut f64,
    abs_err: *mut f64,
) -> LpftStatus {
    guard(|| {
        out!(re, im, abs_err);
        let f = tri!(func(f));
        match fourier_transform(f, y, tol, &TruncationPolicy::for_tol(tol)) {
            Ok(r) => {
                *re = r.value.re;
                *im = r.value.im;
                *abs_err = r.abs_error_estimate;
                converged_status(&r)
            }
            Err(e) => fail(e),
        }
    })
}

/// Laplace continuity value (order 0) or Laplace derivative (order 1) at
/// x, with mean half-width `delta` and the default s ladder.
///
/// # Safety
/// `f` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lpft_laplace_derivative(
    f: *const LpftFunction,
    order: u32,
    x: f64,
    delta: f64,
    tol: f64,
    out: *mut f64,
) -> LpftStatus {
    guard(|| {
        out!(out);
        let f = tri!(func(f));
        let spec = match MeanSpec::new(delta, LadderConfig::laplace_default(), tol) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let r = match order {
            0 => ld0(f, x, &spec),
            1 => ld1(f, x, &spec),
            _ => return fail(Error::InvalidArgument(format!("order must be 0 or 1, got {order}"))),
        };
        match r {
            Ok(l) => {
                *out = l.value;
                LpftStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// (f*g)(x).
///
/// # Safety
/// `f` and `g` must be live handles; `value` and `abs_err` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lpft_convolve(
    f: *const LpftFunction,
    g: *const LpftFunction,
    x: f64,
    tol: f64,
    value: *mut f64,
    abs_err: *mut f64,
) -> LpftStatus {
    guard(|| {
        out!(value, abs_err);
        let (f, g) = (tri!(func(f)), tri!(func(g)));
        let plan = match ConvPlan::new(tol, vec![x]) {
            Ok(p) => p,
            Err(e) => return fail(e),
        };
        match convolve(f, g, x, &plan) {
            Ok(r) => {
                *value = r.value;
                *abs_err = r.abs_error_estimate;
                converged_status(&r)
            }
            Err(e) => fail(e),
        }
    })
}

/// Gaussian summability inversion of the transform of f at x, along the
/// default λ ladder.
///
/// # Safety
/// `f` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lpft_invert(f: *const LpftFunction, x: f64, tol: f64, out: *mut f64) -> LpftStatus {
    guard(|| {
        out!(out);
        let f = tri!(func(f));
        let r = SpectrumProvider::for_fn(f, tol).and_then(|p| invert(&p, x, &LadderConfig::gauss_default(), tol));
        match r {
            Ok(v) => {
                *out = v.value.re;
                LpftStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lpft_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn lpft_status_name(status: LpftStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LpftStatus::Ok => c"ok",
        LpftStatus::NotConverged => c"not-converged",
        LpftStatus::InvalidArgument => c"invalid-argument",
        LpftStatus::HypothesisViolation => c"hypothesis-violation",
        LpftStatus::SidesDisagree => c"sides-disagree",
        LpftStatus::NoConvergence => c"no-convergence",
        LpftStatus::IntegrationFailed => c"integration-failed",
        LpftStatus::ParseError => c"parse-error",
        LpftStatus::UnknownFunction => c"unknown-function",
        LpftStatus::IoError => c"io-error",
        LpftStatus::NullPointer => c"null-pointer",
        LpftStatus::Panic => c"panic",
    };
    s.as_ptr()
}
