//! C ABI over `trigonal-sigma`.
//!
//! Every function returns a [`TsStatus`]; on failure the message is
//! available from [`ts_last_error`] on the same thread. Strings handed out
//! are NUL-terminated UTF-8 and must be released with [`ts_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use trigonal_sigma::curve::CurveParams;
use trigonal_sigma::relations::verify::{Verifier, VerifyOptions};
use trigonal_sigma::relations::{exit_code, run_suite, Suite, Verdict};
use trigonal_sigma::sigma::{build_sigma, BuildConfig, SigmaSeries};
use trigonal_sigma::{Error, Rational};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    Parse = 4,
    Schema = 5,
    Provenance = 6,
    Inconsistent = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TsVerdict {
    Pass = 0,
    Fail = 1,
    Indeterminate = 2,
}

/// A built or imported σ expansion.
pub struct TsSigma {
    sigma: SigmaSeries,
    verifier: OnceLock<Verifier>,
}

impl TsSigma {
    fn new(sigma: SigmaSeries) -> Self {
        TsSigma {
            sigma,
            verifier: OnceLock::new(),
        }
    }

    fn verifier(&self) -> Result<&Verifier, Failure> {
        if let Some(v) = self.verifier.get() {
            return Ok(v);
        }
        let v = Verifier::new(&self.sigma, VerifyOptions::default())?;
        Ok(self.verifier.get_or_init(|| v))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(TsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) | Error::InvalidIndex(_) | Error::MissingSymbol(_) => TsStatus::Parse,
            Error::Schema(_) | Error::Json(_) | Error::SpecMismatch(_) => TsStatus::Schema,
            Error::Provenance(_) => TsStatus::Provenance,
            Error::Inconsistent { .. } => TsStatus::Inconsistent,
            Error::Config(_) | Error::Io(_) => TsStatus::Config,
            _ => TsStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TsStatus::Ok
        }
        Ok(Err(Failure(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TsStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TsStatus::Internal, "interior NUL in output".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(TsStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Builds σ through `max_grade` with the default constraints. `lambdas` is
/// either null (all symbolic) or an array of five entries, each null,
/// `"symbolic"`, or a rational such as `"-3/2"`.
///
/// # Safety
/// `lambdas`, when non-null, must point to five readable pointers; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sigma_build(max_grade: u32, lambdas: *const *const c_char, out: *mut *mut TsSigma) -> TsStatus {
    guard(|| {
        check_out(out, "out")?;
        let mut params = CurveParams::symbolic();
        if !lambdas.is_null() {
            for j in 0..5 {
                let p = *lambdas.add(j);
                if p.is_null() {
                    continue;
                }
                let t = read_str(p, "λ value")?;
                if t != "symbolic" {
                    let r = t
                        .parse::<Rational>()
                        .map_err(|_| Failure(TsStatus::Config, format!("λ{j}: `{t}` is not a rational")))?;
                    params.lambdas[j] = Some(r);
                }
            }
        }
        if max_grade < 1 {
            return Err(Failure(TsStatus::Config, "max_grade must be at least 1".into()));
        }
        let cfg = BuildConfig {
            params,
            max_grade,
            ..BuildConfig::default()
        };
        let s = build_sigma(&cfg)?;
        *out = Box::into_raw(Box::new(TsSigma::new(s)));
        Ok(())
    })
}

/// # Safety
/// `sigma` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ts_sigma_free(sigma: *mut TsSigma) {
    if !sigma.is_null() {
        drop(Box::from_raw(sigma));
    }
}

/// Number of stored coefficients.
///
/// # Safety
/// `sigma` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sigma_term_count(sigma: *const TsSigma, out: *mut usize) -> TsStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = sigma.as_ref().ok_or_else(|| Failure(TsStatus::NullPointer, "sigma is null".into()))?;
        *out = s.sigma.series.len();
        Ok(())
    })
}

/// Serializes σ with its provenance.
///
/// # Safety
/// `sigma` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sigma_to_json(sigma: *const TsSigma, out: *mut *mut c_char) -> TsStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = sigma.as_ref().ok_or_else(|| Failure(TsStatus::NullPointer, "sigma is null".into()))?;
        give_string(s.sigma.to_json_string(false)?, out)
    })
}

/// Reads σ back, checking the content and provenance hashes.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ts_sigma_from_json(json: *const c_char, out: *mut *mut TsSigma) -> TsStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = read_str(json, "json")?;
        let s = SigmaSeries::from_json_str(text)?;
        *out = Box::into_raw(Box::new(TsSigma::new(s)));
        Ok(())
    })
}

/// Checks `lhs = rhs` (e.g. `"Q4444 = -3*P33"`) and returns the report as
/// one JSON object. `verdict` may be null.
///
/// # Safety
/// `sigma` must be a live handle, `relation` NUL-terminated, `report`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ts_verify_relation(
    sigma: *const TsSigma,
    relation: *const c_char,
    report: *mut *mut c_char,
    verdict: *mut TsVerdict,
) -> TsStatus {
    guard(|| {
        check_out(report, "report")?;
        let s = sigma.as_ref().ok_or_else(|| Failure(TsStatus::NullPointer, "sigma is null".into()))?;
        let text = read_str(relation, "relation")?;
        let r = s.verifier()?.verify_text("ffi", "ffi:relation", text, None)?;
        if !verdict.is_null() {
            *verdict = match r.verdict {
                Verdict::Pass => TsVerdict::Pass,
                Verdict::Fail => TsVerdict::Fail,
                Verdict::Indeterminate => TsVerdict::Indeterminate,
            };
        }
        give_string(r.to_json_line(), report)
    })
}

/// Runs comma-separated suites (or `"all"`), returning JSON lines and the
/// exit code the command-line tool would use. `exit` may be null.
///
/// # Safety
/// `sigma` must be a live handle, `suites` NUL-terminated, `reports`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ts_verify_suite(
    sigma: *const TsSigma,
    suites: *const c_char,
    reports: *mut *mut c_char,
    exit: *mut i32,
) -> TsStatus {
    guard(|| {
        check_out(reports, "reports")?;
        let s = sigma.as_ref().ok_or_else(|| Failure(TsStatus::NullPointer, "sigma is null".into()))?;
        let list = Suite::parse_list(read_str(suites, "suites")?)?;
        let v = s.verifier()?;
        let mut all = Vec::new();
        for suite in list {
            all.extend(run_suite(v, suite)?);
        }
        if !exit.is_null() {
            *exit = exit_code(&all);
        }
        let mut text = String::new();
        for r in &all {
            text.push_str(&r.to_json_line());
            text.push('\n');
        }
        give_string(text, reports)
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn ts_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
