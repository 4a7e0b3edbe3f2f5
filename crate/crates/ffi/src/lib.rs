//! C ABI for the toroidal library.
//!
//! Every function returns a status code: [`TOROIDAL_OK`] on success, a
//! negative value for misuse of the interface, or the library's positive
//! error code. After a failure, [`toroidal_last_error`] describes it.
//! Strings returned through out-pointers are owned by the caller and must be
//! released with [`toroidal_string_free`]; charts with [`toroidal_chart_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toroidal::chart::ToroidalChart;
use toroidal::format::{parse_inline_ideal, ChartDocument, FormatError};

pub const TOROIDAL_OK: i32 = 0;
pub const TOROIDAL_NULL_POINTER: i32 = -1;
pub const TOROIDAL_INVALID_UTF8: i32 = -2;
pub const TOROIDAL_PANIC: i32 = -3;

// Library error codes, shared with the command line reports.
pub const TOROIDAL_E_NON_POINTED_CONE: i32 = 10;
pub const TOROIDAL_E_NOT_A_FACE: i32 = 11;
pub const TOROIDAL_E_ELEMENT_NOT_IN_MONOID: i32 = 12;
pub const TOROIDAL_E_DENOMINATOR_MISMATCH: i32 = 13;
pub const TOROIDAL_E_NON_MONOMIAL_KUMMER_IDEAL: i32 = 14;
pub const TOROIDAL_E_INVALID_POINT: i32 = 15;
pub const TOROIDAL_E_NO_UNIFORM_TOROIDAL_SUBGROUP: i32 = 16;
pub const TOROIDAL_E_NOT_PERMISSIBLE: i32 = 17;
pub const TOROIDAL_E_NOT_STABILIZED: i32 = 18;
pub const TOROIDAL_E_UNSUPPORTED_ACTION: i32 = 19;
pub const TOROIDAL_E_INVALID_INPUT: i32 = 20;
pub const TOROIDAL_E_TOO_LARGE: i32 = 21;
pub const TOROIDAL_E_INVARIANT_VIOLATED: i32 = 22;
pub const TOROIDAL_E_SCHEMA: i32 = 30;
pub const TOROIDAL_E_DIMENSION_MISMATCH: i32 = 31;
pub const TOROIDAL_E_MONOMIAL_NOT_IN_MONOID: i32 = 32;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// A parsed and validated chart.
pub struct ToroidalChartHandle {
    doc: ChartDocument,
    chart: ToroidalChart,
}

enum Failure {
    Code(i32, String),
    Format(FormatError),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Format(e)
    }
}

impl From<toroidal::Error> for Failure {
    fn from(e: toroidal::Error) -> Self {
        Failure::Format(e.into())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TOROIDAL_OK,
        Ok(Err(Failure::Code(c, msg))) => {
            set_error(msg);
            c
        }
        Ok(Err(Failure::Format(e))) => {
            set_error(format!("{}: {e}", e.name()));
            e.code()
        }
        Err(_) => {
            set_error("internal panic".into());
            TOROIDAL_PANIC
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Code(TOROIDAL_NULL_POINTER, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Code(TOROIDAL_INVALID_UTF8, format!("{what} is not UTF-8")))
}

unsafe fn chart_arg<'a>(p: *const ToroidalChartHandle) -> Result<&'a ToroidalChartHandle, Failure> {
    p.as_ref().ok_or_else(|| Failure::Code(TOROIDAL_NULL_POINTER, "chart handle is null".into()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Code(TOROIDAL_NULL_POINTER, "output pointer is null".into()));
    }
    *out = CString::new(s).expect("reports contain no nul bytes").into_raw();
    Ok(())
}

/// Parses a chart document. On success `*out` receives a new handle.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn toroidal_chart_parse(text: *const c_char, out: *mut *mut ToroidalChartHandle) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Code(TOROIDAL_NULL_POINTER, "output pointer is null".into()));
        }
        *out = ptr::null_mut();
        let doc = ChartDocument::parse(str_arg(text, "text")?)?;
        let chart = doc.to_chart()?;
        *out = Box::into_raw(Box::new(ToroidalChartHandle { doc, chart }));
        Ok(())
    })
}

/// Releases a chart handle. Null is ignored.
///
/// # Safety
/// `chart` must come from [`toroidal_chart_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn toroidal_chart_free(chart: *mut ToroidalChartHandle) {
    if !chart.is_null() {
        drop(Box::from_raw(chart));
    }
}

/// Writes the chart document, normalized to minimal generators.
///
/// # Safety
/// `chart` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn toroidal_chart_print(chart: *const ToroidalChartHandle, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let h = chart_arg(chart)?;
        let doc = ChartDocument::from_chart(&h.chart).with_names(h.doc.monomial_names.clone(), h.doc.t_names.clone());
        put_string(out, doc.print())
    })
}

/// Rank of the chart monoid.
///
/// # Safety
/// `chart` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn toroidal_chart_rank(chart: *const ToroidalChartHandle, out: *mut usize) -> i32 {
    guard(|| {
        let h = chart_arg(chart)?;
        if out.is_null() {
            return Err(Failure::Code(TOROIDAL_NULL_POINTER, "output pointer is null".into()));
        }
        *out = h.chart.monoid.rank();
        Ok(())
    })
}

/// Whether every stabilizer of the chart acts toroidally.
///
/// # Safety
/// `chart` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn toroidal_chart_is_destackified(chart: *const ToroidalChartHandle, out: *mut bool) -> i32 {
    guard(|| {
        let h = chart_arg(chart)?;
        if out.is_null() {
            return Err(Failure::Code(TOROIDAL_NULL_POINTER, "output pointer is null".into()));
        }
        *out = h.chart.is_destackified()?.0;
        Ok(())
    })
}

/// Root ideal `I^[1/d]` of a monomial ideal in inline syntax; writes its
/// generators as a JSON array of exponent vectors.
///
/// # Safety
/// Pointers must be valid; `ideal` a C string.
#[no_mangle]
pub unsafe extern "C" fn toroidal_root_ideal(
    chart: *const ToroidalChartHandle,
    ideal: *const c_char,
    d: u64,
    out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        let h = chart_arg(chart)?;
        let i = parse_inline_ideal(str_arg(ideal, "ideal")?, &h.doc)?.to_monomial(&h.chart)?;
        let r = i.root(d)?;
        let gens: Vec<Vec<String>> =
            r.generators().iter().map(|g| g.0.iter().map(|x| x.to_string()).collect()).collect();
        let json = format!(
            "[{}]",
            gens.iter().map(|g| format!("[{}]", g.join(","))).collect::<Vec<_>>().join(",")
        );
        put_string(out, json)
    })
}

/// Runs the command line with `argc` arguments (without the program name).
/// `*out` receives standard output, `*exit_code` the exit status; standard
/// error goes to [`toroidal_last_error`].
///
/// # Safety
/// `argv` must point to `argc` valid C strings; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn toroidal_run(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    exit_code: *mut i32,
) -> i32 {
    guard(|| {
        if (argv.is_null() && argc > 0) || exit_code.is_null() {
            return Err(Failure::Code(TOROIDAL_NULL_POINTER, "argument pointer is null".into()));
        }
        let mut args = vec!["toroidal".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argument")?.to_string());
        }
        let o = toroidal::cli::run(args);
        *exit_code = o.code;
        put_string(out, o.stdout)?;
        if !o.stderr.is_empty() {
            set_error(o.stderr);
        }
        Ok(())
    })
}

/// Message describing the last failure on this thread, or null. The pointer
/// stays valid until the next call on this thread; do not free it.
#[no_mangle]
pub extern "C" fn toroidal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn toroidal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
