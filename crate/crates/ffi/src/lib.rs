//! C ABI over `li_lab`.
//!
//! Objects are opaque heap handles released with the matching `*_free`.
//! Every fallible call returns an [`LlStatus`]; on failure the message is
//! kept per thread and can be read with [`ll_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use li_lab::volchkov::VolchkovConfig;
use li_lab::zeros::ZeroTable;
use li_lab::{FunctionDescriptor, LaurentData, LiEvaluation, LiLabError};

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Domain = 4,
    Parse = 5,
    Coverage = 6,
    Io = 7,
    Network = 8,
    Panic = 9,
}

/// Opaque L-function descriptor.
pub struct LlDescriptor(FunctionDescriptor);

/// Opaque zero table.
pub struct LlZeroTable(ZeroTable);

/// Opaque Laurent data.
pub struct LlLaurent(LaurentData);

/// Result of one coefficient evaluation.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LlEvaluation {
    pub n: u32,
    pub value: f64,
    pub tail_bound: f64,
    /// NaN when the route has no truncation height.
    pub truncation_height: f64,
}

/// Result of the oscillator integral `I₃(n)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct LlIntegral {
    pub value: f64,
    pub step_part: f64,
    pub smooth_part: f64,
    pub tail_bound: f64,
    pub quadrature_error: f64,
    pub truncation_height: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &LiLabError) -> LlStatus {
    use LiLabError::*;
    match err {
        InvalidDescriptor { .. }
        | InvalidLaurent(_)
        | DegenerateLaurent
        | SymmetryViolation { .. }
        | InvalidSource(_)
        | InvalidTable(_)
        | EmptyTable
        | InsufficientCoefficients { .. } => LlStatus::InvalidArgument,
        Domain { .. } | UnsupportedDegreeZero(_) => LlStatus::Domain,
        Parse { .. }
        | Ordering { .. }
        | NonpositiveOrdinate { .. }
        | Json(_)
        | MalformedResponse(_) => LlStatus::Parse,
        OutOfCoverage { .. } => LlStatus::Coverage,
        Io(_) => LlStatus::Io,
        Network(_) | LabelNotFound(_) => LlStatus::Network,
    }
}

enum Failure {
    Status(LlStatus, String),
    Lib(LiLabError),
}

impl From<LiLabError> for Failure {
    fn from(e: LiLabError) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LlStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            LlStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::Status(LlStatus::NullPointer, format!("{what} is null")))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(
            LlStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(LlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(
            LlStatus::NullPointer,
            "output pointer is null".into(),
        ));
    }
    out.write(v);
    Ok(())
}

fn to_c(e: &LiEvaluation) -> LlEvaluation {
    LlEvaluation {
        n: e.n,
        value: e.value,
        tail_bound: e.tail_bound,
        truncation_height: e.truncation_height.unwrap_or(f64::NAN),
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ll_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The Riemann zeta descriptor.
#[no_mangle]
pub extern "C" fn ll_descriptor_zeta() -> *mut LlDescriptor {
    Box::into_raw(Box::new(LlDescriptor(FunctionDescriptor::zeta())))
}

/// Parse a descriptor from a JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_descriptor_from_json(
    json: *const c_char,
    out: *mut *mut LlDescriptor,
) -> LlStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let d = FunctionDescriptor::from_json_str(text)?;
        write_out(out, Box::into_raw(Box::new(LlDescriptor(d))))
    })
}

/// # Safety
/// `d` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_descriptor_free(d: *mut LlDescriptor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Parse a zero table from text (one ordinate per line, optional multiplicity).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_zero_table_parse(
    text: *const c_char,
    out: *mut *mut LlZeroTable,
) -> LlStatus {
    guard(|| {
        let t = li_lab::ingest::parse_ordinates(str_arg(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(LlZeroTable(t))))
    })
}

/// Load a zero table from a file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_zero_table_load(
    path: *const c_char,
    out: *mut *mut LlZeroTable,
) -> LlStatus {
    guard(|| {
        let t = li_lab::ingest::load_zero_file(str_arg(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(LlZeroTable(t))))
    })
}

/// Number of ordinates, 0 for null.
///
/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_zero_table_len(t: *const LlZeroTable) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// Coverage height, NaN for null.
///
/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_zero_table_coverage(t: *const LlZeroTable) -> f64 {
    t.as_ref().map_or(f64::NAN, |t| t.0.coverage_height())
}

/// # Safety
/// `t` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_zero_table_free(t: *mut LlZeroTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Bundled Laurent data of zeta at s = 1.
#[no_mangle]
pub extern "C" fn ll_laurent_zeta() -> *mut LlLaurent {
    Box::into_raw(Box::new(LlLaurent(LaurentData::zeta())))
}

/// Laurent data from `len` interleaved (re, im) pairs in `coefficients`.
///
/// # Safety
/// `coefficients` must point to `2 * len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_laurent_new(
    pole_order: u32,
    coefficients: *const f64,
    len: usize,
    out: *mut *mut LlLaurent,
) -> LlStatus {
    guard(|| {
        if coefficients.is_null() {
            return Err(Failure::Status(
                LlStatus::NullPointer,
                "coefficients is null".into(),
            ));
        }
        let raw = std::slice::from_raw_parts(coefficients, 2 * len);
        let c = raw
            .chunks_exact(2)
            .map(|p| num_complex::Complex64::new(p[0], p[1]))
            .collect();
        let l = LaurentData::new(pole_order, c)?;
        write_out(out, Box::into_raw(Box::new(LlLaurent(l))))
    })
}

/// # Safety
/// `l` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn ll_laurent_free(l: *mut LlLaurent) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// `λ_F(n)` as a sum over the zeros in the table.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_li_zero_sum(
    d: *const LlDescriptor,
    t: *const LlZeroTable,
    n: u32,
    out: *mut LlEvaluation,
) -> LlStatus {
    guard(|| {
        let e = li_lab::li_zero_sum(&as_ref(d, "descriptor")?.0, &as_ref(t, "table")?.0, n)?;
        write_out(out, to_c(&e))
    })
}

/// `λ_F(n)` from the Laurent coefficients and the gamma factors.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_li_arithmetic(
    d: *const LlDescriptor,
    l: *const LlLaurent,
    n: u32,
    out: *mut LlEvaluation,
) -> LlStatus {
    guard(|| {
        let e = li_lab::li_arithmetic(&as_ref(d, "descriptor")?.0, &as_ref(l, "laurent")?.0, n)?;
        write_out(out, to_c(&e))
    })
}

/// `λ_F(n)` through the integral decomposition.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_li_decomposition(
    d: *const LlDescriptor,
    t: *const LlZeroTable,
    n: u32,
    out: *mut LlEvaluation,
) -> LlStatus {
    guard(|| {
        let e = li_lab::li_decomposition(&as_ref(d, "descriptor")?.0, &as_ref(t, "table")?.0, n)?;
        write_out(out, to_c(&e))
    })
}

/// `I₂(n)`.
///
/// # Safety
/// `d` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_i2(d: *const LlDescriptor, n: u32, out: *mut f64) -> LlStatus {
    guard(|| {
        let v = li_lab::i2(&as_ref(d, "descriptor")?.0, n)?;
        write_out(out, v)
    })
}

/// `I₃(n)` with `|S_F| <= s_cap` above the table; `s_cap <= 0` selects the default.
///
/// # Safety
/// Handles must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ll_i3(
    d: *const LlDescriptor,
    t: *const LlZeroTable,
    n: u32,
    s_cap: f64,
    out: *mut LlIntegral,
) -> LlStatus {
    guard(|| {
        let mut config = VolchkovConfig::default();
        if s_cap > 0.0 {
            config.s_cap = s_cap;
        }
        let r = li_lab::i3(
            &as_ref(d, "descriptor")?.0,
            &as_ref(t, "table")?.0,
            n,
            config,
        )?;
        write_out(
            out,
            LlIntegral {
                value: r.value,
                step_part: r.step_part,
                smooth_part: r.smooth_part,
                tail_bound: r.tail_bound,
                quadrature_error: r.quadrature_error,
                truncation_height: r.truncation_height,
            },
        )
    })
}

/// `G_n(x) = 2 sin²(n arctan(1/(2x)))`.
#[no_mangle]
pub extern "C" fn ll_g_oscillator(n: u32, x: f64) -> f64 {
    li_lab::special::g_oscillator(n, x)
}

/// `T_n(x)`.
#[no_mangle]
pub extern "C" fn ll_cheb_t(n: u32, x: f64) -> f64 {
    li_lab::special::cheb_t(n, x)
}

/// `U_n(x)`.
#[no_mangle]
pub extern "C" fn ll_cheb_u(n: u32, x: f64) -> f64 {
    li_lab::special::cheb_u(n, x)
}
