//! C ABI for `psni`.
//!
//! Handles are opaque and owned by the caller: each `*_new`/`*_load`/`replay`
//! result is released with the matching `*_free`. Functions return a
//! [`PsniStatus`]; on failure [`psni_last_error`] describes the error for the
//! calling thread. Strings returned through out-parameters are released with
//! [`psni_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use psni::dyadic::{alpha, binom_nu, Valuation};
use psni::obstruction::{replay_part, ChartDb, ObstructionError, ObstructionReport, Verdict};
use psni::rules::{Catalog, FactIndex, Part11, RuleConfig, RulesError};
use psni::tabulator::{self, ClaimGroup};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsniStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    WrongAlpha = 4,
    UnknownChart = 5,
    Io = 6,
    Internal = 7,
}

/// Fact index over `0..=n_max` for one rule configuration.
pub struct PsniIndex(FactIndex);

pub struct PsniChartDb(ChartDb);

pub struct PsniReport(ObstructionReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: PsniStatus, msg: impl Into<String>) -> PsniStatus {
    set_error(msg);
    status
}

fn rules_status(e: &RulesError) -> PsniStatus {
    match e {
        RulesError::Io(_) => PsniStatus::Io,
        _ => PsniStatus::InvalidConfig,
    }
}

fn obstruction_status(e: &ObstructionError) -> PsniStatus {
    match e {
        ObstructionError::WrongAlpha { .. } => PsniStatus::WrongAlpha,
        ObstructionError::UnknownChart(_) => PsniStatus::UnknownChart,
        ObstructionError::Io(_) => PsniStatus::Io,
        ObstructionError::Parse { .. } => PsniStatus::InvalidArgument,
        _ => PsniStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> PsniStatus) -> PsniStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PsniStatus::Internal, "panic inside psni"),
    }
}

unsafe fn opt_str<'a>(p: *const c_char) -> Result<Option<&'a str>, PsniStatus> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| fail(PsniStatus::InvalidArgument, "string is not UTF-8"))
}

fn config_from(text: Option<&str>, catalog: &Catalog) -> Result<RuleConfig, PsniStatus> {
    match text {
        None => Ok(RuleConfig::default()),
        Some(t) => RuleConfig::parse(t, catalog).map_err(|e| fail(rules_status(&e), e.to_string())),
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn psni_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn psni_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn psni_alpha(n: u64) -> u32 {
    alpha(n)
}

/// 2-adic valuation of `C(top, bottom)`; negative `top` means `2^L + top`.
/// Writes -1 when the coefficient is zero.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_binom_nu(top: i64, bottom: u64, out: *mut i64) -> PsniStatus {
    if out.is_null() {
        return fail(PsniStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        *out = match binom_nu(top, bottom) {
            Valuation::Finite(v) => i64::from(v),
            Valuation::Infinite => -1,
        };
        PsniStatus::Ok
    })
}

/// Builds the index for `0..=n_max`. `config` is rule-configuration text
/// or NULL for the defaults.
///
/// # Safety
/// `config` is NULL or a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_index_new(
    config: *const c_char,
    n_max: u64,
    out: *mut *mut PsniIndex,
) -> PsniStatus {
    if out.is_null() {
        return fail(PsniStatus::NullPointer, "out is NULL");
    }
    *out = ptr::null_mut();
    guard(|| {
        let text = match opt_str(config) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let catalog = Catalog::builtin();
        let config = match config_from(text, &catalog) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match FactIndex::build(&catalog, &config, n_max) {
            Ok(index) => {
                *out = Box::into_raw(Box::new(PsniIndex(index)));
                PsniStatus::Ok
            }
            Err(e) => fail(rules_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `index` is NULL or a live handle from [`psni_index_new`].
#[no_mangle]
pub unsafe extern "C" fn psni_index_free(index: *mut PsniIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// `K(n)` and its first source. `source` may be NULL; otherwise it receives
/// a string to release with [`psni_string_free`] (NULL when no rule applies).
///
/// # Safety
/// `index` must be live; `k` valid for writes; `source` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_index_best(
    index: *const PsniIndex,
    n: u64,
    k: *mut u64,
    source: *mut *mut c_char,
) -> PsniStatus {
    if index.is_null() || k.is_null() {
        return fail(PsniStatus::NullPointer, "index or k is NULL");
    }
    let index = &(*index).0;
    if n > index.n_max() {
        return fail(
            PsniStatus::InvalidArgument,
            format!("n = {n} exceeds the index bound {}", index.n_max()),
        );
    }
    let (best, src) = index.best(n);
    *k = best;
    if !source.is_null() {
        *source = src.map_or(ptr::null_mut(), |s| into_c_string(s.to_string()));
    }
    PsniStatus::Ok
}

/// `D(n)` from the index.
///
/// # Safety
/// `index` must be live; `d` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_index_d(index: *const PsniIndex, n: u64, d: *mut u64) -> PsniStatus {
    if index.is_null() || d.is_null() {
        return fail(PsniStatus::NullPointer, "index or d is NULL");
    }
    let index = &(*index).0;
    if n > index.n_max() {
        return fail(PsniStatus::InvalidArgument, format!("n = {n} out of range"));
    }
    *d = index.d(n);
    PsniStatus::Ok
}

/// The embedded chart database.
#[no_mangle]
pub extern "C" fn psni_chartdb_builtin() -> *mut PsniChartDb {
    Box::into_raw(Box::new(PsniChartDb(ChartDb::builtin())))
}

/// # Safety
/// `path` is a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_chartdb_load(
    path: *const c_char,
    out: *mut *mut PsniChartDb,
) -> PsniStatus {
    if path.is_null() || out.is_null() {
        return fail(PsniStatus::NullPointer, "path or out is NULL");
    }
    *out = ptr::null_mut();
    guard(|| {
        let path = match opt_str(path) {
            Ok(Some(p)) => p,
            Ok(None) => unreachable!(),
            Err(s) => return s,
        };
        match ChartDb::load(Path::new(path)) {
            Ok(db) => {
                *out = Box::into_raw(Box::new(PsniChartDb(db)));
                PsniStatus::Ok
            }
            Err(e) => fail(obstruction_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `db` is NULL or a live chart database handle.
#[no_mangle]
pub unsafe extern "C" fn psni_chartdb_free(db: *mut PsniChartDb) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Replays part `part` (`'a'`..`'e'`) of the main family at `m`.
///
/// # Safety
/// `db` must be live; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_replay(
    db: *const PsniChartDb,
    part: c_char,
    m: u64,
    out: *mut *mut PsniReport,
) -> PsniStatus {
    if db.is_null() || out.is_null() {
        return fail(PsniStatus::NullPointer, "db or out is NULL");
    }
    *out = ptr::null_mut();
    let Some(part) = u8::try_from(part).ok().and_then(|c| Part11::from_letter(c as char)) else {
        return fail(PsniStatus::InvalidArgument, "part must be one of a..e");
    };
    guard(|| match replay_part(part, m, &(*db).0) {
        Ok(r) => {
            *out = Box::into_raw(Box::new(PsniReport(r)));
            PsniStatus::Ok
        }
        Err(e) => fail(obstruction_status(&e), e.to_string()),
    })
}

/// 1 when every statement's obstruction is nonzero, 0 otherwise, -1 for NULL.
///
/// # Safety
/// `report` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn psni_report_nonzero(report: *const PsniReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    i32::from((*report).0.verdict() == Verdict::Nonzero)
}

/// Human-readable report; release with [`psni_string_free`].
///
/// # Safety
/// `report` is NULL or live.
#[no_mangle]
pub unsafe extern "C" fn psni_report_text(report: *const PsniReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    into_c_string((*report).0.to_string())
}

/// # Safety
/// `report` is NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn psni_report_free(report: *mut PsniReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Runs every claim check. `failures` receives the number of failed exact
/// claims; `text`, if not NULL, receives the machine-readable lines.
///
/// # Safety
/// `config` is NULL or a NUL-terminated string; `failures` valid for
/// writes; `text` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn psni_verify_claims(
    config: *const c_char,
    failures: *mut u32,
    text: *mut *mut c_char,
) -> PsniStatus {
    if failures.is_null() {
        return fail(PsniStatus::NullPointer, "failures is NULL");
    }
    guard(|| {
        let cfg = match opt_str(config) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let catalog = Catalog::builtin();
        let config = match config_from(cfg, &catalog) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let reports = match tabulator::verify_claims(&catalog, &config, ClaimGroup::All) {
            Ok(r) => r,
            Err(e) => return fail(rules_status(&e), e.to_string()),
        };
        *failures = reports.iter().filter(|r| r.failed()).count() as u32;
        if !text.is_null() {
            let lines: Vec<String> = reports.iter().map(|r| r.machine_line()).collect();
            *text = into_c_string(lines.join("\n") + "\n");
        }
        PsniStatus::Ok
    })
}
