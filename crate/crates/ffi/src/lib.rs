//! C interface to the entropy-games solver.
//!
//! Games and reports are opaque handles owned by the caller and released
//! with their `_free` function. Every fallible call returns an [`EgStatus`];
//! the message of the last failure on the calling thread is available from
//! [`eg_last_error_message`]. Strings returned by the library are released
//! with [`eg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use entropy_games::certificates::{check_cw, CwCertificate, CwVerdict};
use entropy_games::operators::value_iterate;
use entropy_games::solvers::{solve_game, AlgoChoice, SolveOptions, SolveReport};
use entropy_games::{parse_game, EntropyGame};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Solve = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A parsed game.
pub struct EgGame(EntropyGame);

/// The outcome of a solve.
pub struct EgReport(SolveReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("NULs removed"));
}

/// Runs `f`, turning an `Err` or a panic into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), (EgStatus, String)>) -> EgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EgStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EgStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (EgStatus, String)> {
    if p.is_null() {
        return Err((EgStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (EgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, (EgStatus, String)> {
    p.as_ref().ok_or_else(|| (EgStatus::NullPointer, format!("{what} is NULL")))
}

fn out_arg<T>(p: *mut T, what: &str) -> Result<(), (EgStatus, String)> {
    if p.is_null() {
        Err((EgStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

/// Parses a game from NUL-terminated JSON into `*out`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eg_game_from_json(json: *const c_char, out: *mut *mut EgGame) -> EgStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let g = parse_game(text).map_err(|e| (EgStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(EgGame(g)));
        Ok(())
    })
}

/// Releases a game; NULL is ignored.
///
/// # Safety
/// `game` must come from [`eg_game_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eg_game_free(game: *mut EgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Number of Despot states, 0 for NULL.
///
/// # Safety
/// `game` must be NULL or a live game handle.
#[no_mangle]
pub unsafe extern "C" fn eg_game_num_despot(game: *const EgGame) -> usize {
    game.as_ref().map_or(0, |g| g.0.n())
}

/// Solves `game` with the algorithm tagged `algo` (NULL means `auto`).
/// `eps <= 0` selects the algorithm's default accuracy.
///
/// # Safety
/// `game` must be a live handle, `algo` NULL or a C string, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_solve(
    game: *const EgGame,
    algo: *const c_char,
    eps: f64,
    out: *mut *mut EgReport,
) -> EgStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = ref_arg(game, "game")?;
        let choice = if algo.is_null() {
            AlgoChoice::Auto
        } else {
            str_arg(algo, "algo")?.parse().map_err(|e: entropy_games::Error| (EgStatus::InvalidArgument, e.to_string()))?
        };
        if eps.is_nan() {
            return Err((EgStatus::InvalidArgument, "eps is NaN".into()));
        }
        let opts = SolveOptions { eps: (eps > 0.0).then_some(eps), seed: None };
        let r = solve_game(&g.0, choice, &opts).map_err(|e| (EgStatus::Solve, e.to_string()))?;
        *out = Box::into_raw(Box::new(EgReport(r)));
        Ok(())
    })
}

/// Releases a report; NULL is ignored.
///
/// # Safety
/// `report` must come from [`eg_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eg_report_free(report: *mut EgReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Copies the per-state values into `buf` (capacity `len`). The number of
/// values is stored in `*needed` when it is not NULL, also on
/// `EG_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `report` must be live; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn eg_report_values(
    report: *const EgReport,
    buf: *mut f64,
    len: usize,
    needed: *mut usize,
) -> EgStatus {
    guard(|| {
        let r = ref_arg(report, "report")?;
        copy_out(&r.0.values, buf, len, needed)
    })
}

unsafe fn copy_out(v: &[f64], buf: *mut f64, len: usize, needed: *mut usize) -> Result<(), (EgStatus, String)> {
    if !needed.is_null() {
        *needed = v.len();
    }
    if len < v.len() {
        return Err((EgStatus::BufferTooSmall, format!("need room for {} values, got {len}", v.len())));
    }
    out_arg(buf, "buf")?;
    ptr::copy_nonoverlapping(v.as_ptr(), buf, v.len());
    Ok(())
}

/// Largest state value; NaN for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn eg_report_free_state_value(report: *const EgReport) -> f64 {
    report.as_ref().map_or(f64::NAN, |r| r.0.free_state_value())
}

/// 1 if the solver converged, 0 otherwise or for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn eg_report_converged(report: *const EgReport) -> c_int {
    report.as_ref().map_or(0, |r| r.0.converged as c_int)
}

/// Outer iterations of the solve; 0 for NULL.
///
/// # Safety
/// `report` must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn eg_report_iterations(report: *const EgReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.iterations)
}

/// The report as JSON with node names from `game`; free with
/// [`eg_string_free`].
///
/// # Safety
/// `game` and `report` must be live and belong together; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn eg_report_to_json(
    game: *const EgGame,
    report: *const EgReport,
    out: *mut *mut c_char,
) -> EgStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = ptr::null_mut();
        let g = ref_arg(game, "game")?;
        let r = ref_arg(report, "report")?;
        if r.0.values.len() != g.0.n() {
            return Err((EgStatus::InvalidArgument, "report does not belong to this game".into()));
        }
        let text = serde_json::to_string(&r.0.to_json(&g.0)).expect("report serializes");
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library; NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn eg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks a certificate given as JSON. `*passed` is set to 1 or 0; on
/// failure `*witness` (if not NULL) receives the offending state, or
/// `SIZE_MAX` when there is none.
///
/// # Safety
/// `game` live, `certificate` a C string, `passed` valid, `witness` NULL or
/// valid.
#[no_mangle]
pub unsafe extern "C" fn eg_check_certificate(
    game: *const EgGame,
    certificate: *const c_char,
    passed: *mut c_int,
    witness: *mut usize,
) -> EgStatus {
    guard(|| {
        out_arg(passed, "passed")?;
        let g = ref_arg(game, "game")?;
        let cert = CwCertificate::from_json(str_arg(certificate, "certificate")?)
            .map_err(|e| (EgStatus::Parse, e.to_string()))?;
        let verdict = check_cw(&g.0, &cert);
        if let CwVerdict::Malformed(m) = &verdict {
            return Err((EgStatus::InvalidArgument, m.clone()));
        }
        *passed = verdict.passed() as c_int;
        if !witness.is_null() {
            *witness = verdict.witness().unwrap_or(usize::MAX);
        }
        Ok(())
    })
}

/// Finite-horizon values `V^k` into `buf` (capacity `len`, at least the
/// number of Despot states).
///
/// # Safety
/// `game` live; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn eg_value_iterate(game: *const EgGame, k: usize, buf: *mut f64, len: usize) -> EgStatus {
    guard(|| {
        let g = ref_arg(game, "game")?;
        let v = value_iterate(&g.0, k).map_err(|e| (EgStatus::Solve, e.to_string()))?;
        copy_out(&v, buf, len, ptr::null_mut())
    })
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full length including the NUL, so a
/// call with `len = 0` sizes the buffer.
///
/// # Safety
/// `buf` must be NULL (with `len = 0`) or hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn eg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, k);
            *buf.add(k - 1) = 0;
        }
        bytes.len()
    })
}
