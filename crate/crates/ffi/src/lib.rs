//! C ABI for the `sympl` library.
//!
//! Every function returns a [`SymplStatus`]; results come back through out
//! pointers. Strings handed to the caller are owned by the caller and must be
//! released with [`sympl_string_free`]. After a failure the message and the
//! library error name are available from [`sympl_last_error_message`] and
//! [`sympl_last_error_name`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sympl::ehw::first_reduction_point;
use sympl::lfactors::{gk_value, SatakeDatum};
use sympl::orbitclassify::{classify_levels, decomposition_report};
use sympl::weights::is_k_dominant;
use sympl::weyl::infchar_equal;
use sympl::{Error, Scalar, Weight};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymplStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input text.
    Parse = 3,
    /// The library rejected the input; see the error name.
    Domain = 4,
    /// Command-line style usage error from `sympl_cli_json`.
    Usage = 5,
    Panic = 6,
}

/// Opaque weight handle.
pub struct SymplWeight(Weight);

struct LastError {
    name: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(name: &str, message: &str) {
    let clean = |s: &str| CString::new(s.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { name: clean(name), message: clean(message) }));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SymplStatus);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        set_error(e.name(), &e.to_string());
        match e {
            Error::Parse(_) => Failure(SymplStatus::Parse),
            _ => Failure(SymplStatus::Domain),
        }
    }
}

fn null(what: &str) -> Failure {
    set_error("NullPointer", &format!("{what} is null"));
    Failure(SymplStatus::NullPointer)
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SymplStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SymplStatus::Ok,
        Ok(Err(Failure(status))) => status,
        Err(_) => {
            set_error("Panic", "internal panic");
            SymplStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("InvalidUtf8", &format!("{what} is not valid UTF-8"));
        Failure(SymplStatus::InvalidUtf8)
    })
}

unsafe fn weight_ref<'a>(w: *const SymplWeight) -> Result<&'a Weight, Failure> {
    w.as_ref().map(|w| &w.0).ok_or_else(|| null("weight"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).expect("library output has no nul bytes");
    write_out(out, c.into_raw())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("library values serialize")
}

/// Parses a weight such as `"5,3;5,4"` (places separated by `;`).
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_parse(text: *const c_char, out: *mut *mut SymplWeight) -> SymplStatus {
    guard(|| {
        let w: Weight = read_str(text, "text")?.parse()?;
        write_out(out, Box::into_raw(Box::new(SymplWeight(w))))
    })
}

/// Releases a weight handle; null is ignored.
///
/// # Safety
/// `w` must come from `sympl_weight_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_free(w: *mut SymplWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Rank `n` of the weight.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_rank(w: *const SymplWeight, out: *mut usize) -> SymplStatus {
    guard(|| write_out(out, weight_ref(w)?.n()))
}

/// Number of places `d`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_places(w: *const SymplWeight, out: *mut usize) -> SymplStatus {
    guard(|| write_out(out, weight_ref(w)?.d()))
}

/// Canonical text form of the weight.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_to_string(w: *const SymplWeight, out: *mut *mut c_char) -> SymplStatus {
    guard(|| write_string(out, weight_ref(w)?.to_string()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_weight_is_k_dominant(w: *const SymplWeight, out: *mut bool) -> SymplStatus {
    guard(|| write_out(out, is_k_dominant(weight_ref(w)?)))
}

/// Whether two weights share an infinitesimal character.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_infchar_equal(
    a: *const SymplWeight,
    b: *const SymplWeight,
    out: *mut bool,
) -> SymplStatus {
    guard(|| write_out(out, infchar_equal(weight_ref(a)?, weight_ref(b)?)?))
}

/// First reduction point of a single-place normalized weight, as `"p"` or
/// `"p/2"`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_reduction_point(w: *const SymplWeight, out: *mut *mut c_char) -> SymplStatus {
    guard(|| {
        let w = weight_ref(w)?;
        if w.d() != 1 {
            return Err(Error::InvalidArgument("expected a single-place weight".into()).into());
        }
        let r: Scalar = first_reduction_point(w.row(0))?;
        write_string(out, r.to_string())
    })
}

/// Level classification as JSON; `inner` is comma separated.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_classify_levels_json(
    inner: *const c_char,
    n: usize,
    i: usize,
    out: *mut *mut c_char,
) -> SymplStatus {
    guard(|| {
        let inner = read_str(inner, "inner")?
            .split(',')
            .map(str::parse::<Scalar>)
            .collect::<Result<Vec<_>, _>>()?;
        write_string(out, to_json(&classify_levels(&inner, n, i)?))
    })
}

/// Decomposition report for parabolic index `i` as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_report_json(w: *const SymplWeight, i: usize, out: *mut *mut c_char) -> SymplStatus {
    guard(|| write_string(out, to_json(&decomposition_report(weight_ref(w)?, i))))
}

/// Gindikin–Karpelevich value with symbolic Satake parameters `b1..bm`, as
/// JSON factor lists.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sympl_gk_json(i: usize, j: usize, m: usize, out: *mut *mut c_char) -> SymplStatus {
    guard(|| write_string(out, to_json(&gk_value(i, j, &SatakeDatum::symbolic(m))?)))
}

/// Runs any command-line command with `--json` and returns its output.
/// `args` excludes the program name.
///
/// # Safety
/// `args` must point to `argc` valid C strings.
#[no_mangle]
pub unsafe extern "C" fn sympl_cli_json(
    args: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
) -> SymplStatus {
    guard(|| {
        if args.is_null() && argc > 0 {
            return Err(null("args"));
        }
        let mut argv = vec!["sympl".to_string(), "--json".to_string()];
        for k in 0..argc {
            argv.push(read_str(*args.add(k), "argument")?.to_string());
        }
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let code = sympl::cli::run(argv, &mut stdout, &mut stderr);
        let err_text = String::from_utf8_lossy(&stderr).trim().to_string();
        match code {
            0 => write_string(out, String::from_utf8_lossy(&stdout).into_owned()),
            1 => {
                let name = err_text
                    .strip_prefix("error: ")
                    .and_then(|r| r.split(':').next())
                    .unwrap_or("Domain");
                set_error(name, &err_text);
                Err(Failure(SymplStatus::Domain))
            }
            _ => {
                set_error("Usage", &err_text);
                Err(Failure(SymplStatus::Usage))
            }
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sympl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sympl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.message.as_ptr()))
}

/// Library error name of the last failure (e.g. `"NotDominant"`), or null.
#[no_mangle]
pub extern "C" fn sympl_last_error_name() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |e| e.name.as_ptr()))
}
