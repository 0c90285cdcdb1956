//! C ABI for homcalc.
//!
//! Complexes are opaque [`HcComplex`] handles. Every fallible call returns an
//! [`HcStatus`]; on failure the message is available from [`hc_last_error`]
//! on the same thread. Strings handed out by the library are NUL-terminated
//! UTF-8 and must be released with [`hc_string_free`]. Results are JSON
//! documents; integers in them are exact JSON numbers of arbitrary length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use homcalc::bockstein::Groups;
use homcalc::cli::{build_recipe, cmd_verify, parse_complex, Suite};
use homcalc::complex::{to_document, ChainComplex};
use homcalc::homology::{homology, HomologyClass, HomologyGroup};
use homcalc::Error;
use num_bigint::BigInt;
use serde_json::{json, Number, Value};

/// Outcome of a call. The numeric values match the exit codes of the `homcalc` binary.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    /// The call ran but the verification report contains failing rows.
    CheckFailed = 1,
    Parse = 2,
    Validation = 3,
    /// Mathematically invalid input: a non-cycle, a degree out of range, a bad modulus.
    Math = 4,
    Internal = 5,
    NullPointer = 6,
    Utf8 = 7,
}

/// Opaque handle to a validated chain complex.
pub struct HcComplex {
    inner: ChainComplex,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HcStatus {
    match homcalc::cli::exit_code(e) {
        2 => HcStatus::Parse,
        3 => HcStatus::Validation,
        4 => HcStatus::Math,
        _ => HcStatus::Internal,
    }
}

struct Failure(HcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status plus the thread's last error.
fn guard(f: impl FnOnce() -> Result<HcStatus, Failure>) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            if s == HcStatus::Ok {
                set_error("");
            }
            s
        }
        Ok(Err(Failure(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside homcalc");
            HcStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(HcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(HcStatus::Utf8, format!("{what} is not UTF-8")))
}

unsafe fn complex_ref<'a>(c: *const HcComplex) -> Result<&'a ChainComplex, Failure> {
    c.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Failure(HcStatus::NullPointer, "complex handle is null".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(HcStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<HcStatus, Failure> {
    let c = CString::new(s).map_err(|_| Failure(HcStatus::Internal, "output contains NUL".into()))?;
    *out = c.into_raw();
    Ok(HcStatus::Ok)
}

fn num(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

fn nums(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

fn group_json(h: &HomologyGroup) -> Value {
    json!({
        "degree": h.degree,
        "modulus": h.modulus,
        "group": h.to_string(),
        "free_rank": h.free_rank,
        "torsion": nums(&h.torsion),
        "orders": nums(h.orders()),
        "generators": h.generators.iter().map(|g| nums(g)).collect::<Vec<_>>(),
    })
}

fn class_json(x: &HomologyClass) -> Value {
    json!({
        "group": x.group.to_string(),
        "coordinates": nums(&x.coordinates),
        "representative": nums(&x.representative()),
    })
}

/// Builds a library space from a recipe such as `klein`, `lens:3:4` or `bzp:3:8`.
///
/// # Safety
/// `recipe` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_complex_from_recipe(recipe: *const c_char, out: *mut *mut HcComplex) -> HcStatus {
    guard(|| {
        check_out(out)?;
        let inner = build_recipe(read_str(recipe, "recipe")?)?;
        *out = Box::into_raw(Box::new(HcComplex { inner }));
        Ok(HcStatus::Ok)
    })
}

/// Parses and validates a complex in the JSON interchange format.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_complex_from_json(json: *const c_char, out: *mut *mut HcComplex) -> HcStatus {
    guard(|| {
        check_out(out)?;
        let inner = parse_complex(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(HcComplex { inner }));
        Ok(HcStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `c` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_complex_free(c: *mut HcComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Serializes a complex to the interchange format.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_complex_to_json(c: *const HcComplex, out: *mut *mut c_char) -> HcStatus {
    guard(|| {
        check_out(out)?;
        put_string(out, to_document(complex_ref(c)?))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `H_degree(c; Z/modulus)` as JSON, `modulus = 0` meaning integer coefficients.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_homology(
    c: *const HcComplex,
    degree: i64,
    modulus: u64,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        check_out(out)?;
        let h = homology(complex_ref(c)?, degree, modulus)?;
        put_string(out, group_json(&h).to_string())
    })
}

/// Both Bockstein images of the mod-`k` class of the chain `chain[0..len]`.
///
/// # Safety
/// `c` must be a live handle, `chain` must point to `len` integers (it may be
/// null when `len` is 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_bockstein(
    c: *const HcComplex,
    degree: i64,
    k: u64,
    chain: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        check_out(out)?;
        let cx = complex_ref(c)?;
        if chain.is_null() && len > 0 {
            return Err(Failure(HcStatus::NullPointer, "chain is null".into()));
        }
        let z: Vec<BigInt> = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(chain, len)
                .iter()
                .map(|&x| BigInt::from(x))
                .collect()
        };
        if k < 2 {
            return Err(Error::InvalidParameter(format!("Bockstein needs k >= 2, got {k}")).into());
        }
        let mut g = Groups::new(cx);
        let b = g.bockstein_of_chain(degree, k, &z)?;
        let doc = json!({
            "input": class_json(&b.input),
            "beta": class_json(&b.integral_image),
            "beta_tilde": class_json(&b.modk_image),
            "lift": nums(&b.witness.lift),
            "divided": nums(&b.witness.divided),
        });
        put_string(out, doc.to_string())
    })
}

/// Runs a verification suite (`les`, `les2`, `compat`, `mv`, `pair`,
/// `derivation`, `glued`, `all`) and writes the report as JSON.
///
/// `c` may be null to use the built-in spaces; `k = 0` selects the default
/// moduli. Returns [`HcStatus::CheckFailed`] when the report has failing rows,
/// in which case `out` is still filled.
///
/// # Safety
/// `c` must be null or a live handle, `suite` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_verify(
    c: *const HcComplex,
    suite: *const c_char,
    k: u64,
    seed: u64,
    max_degree: usize,
    out: *mut *mut c_char,
) -> HcStatus {
    guard(|| {
        check_out(out)?;
        let suite: Suite = read_str(suite, "suite")?.parse()?;
        let space = c.as_ref().map(|h| &h.inner);
        let k = (k != 0).then_some(k);
        let report = cmd_verify(suite, space, k, None, None, max_degree, seed)?;
        let passed = report.passed();
        put_string(out, report.to_json())?;
        Ok(if passed { HcStatus::Ok } else { HcStatus::CheckFailed })
    })
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
