//! C ABI over `mild-core`.
//!
//! A workspace handle owns the parsed source. Commands are passed as an
//! argv-style array (without the program name) and return the JSON report
//! as a string that the caller frees with `mild_string_free`. Status codes
//! match the exit codes of the `mild` binary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;
use mild_core::cli::{self, Cli};
use mild_core::MildError;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MildStatus {
    Ok = 0,
    /// rejected retraction or internal failure
    Failure = 1,
    /// parse, degree, ring or unknown-name error, or bad arguments
    InvalidInput = 2,
    /// a hypothesis of the construction fails
    HypothesisViolated = 3,
    /// not certified inside the window
    Uncertified = 4,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

impl MildStatus {
    fn from_code(code: i32) -> Self {
        match code {
            0 => MildStatus::Ok,
            2 => MildStatus::InvalidInput,
            3 => MildStatus::HypothesisViolated,
            4 => MildStatus::Uncertified,
            _ => MildStatus::Failure,
        }
    }
}

/// Opaque workspace handle.
pub struct MildWorkspace {
    source: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(err: &MildError) -> MildStatus {
    set_error(err.to_string());
    MildStatus::from_code(err.exit_code())
}

fn guarded(f: impl FnOnce() -> MildStatus) -> MildStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            MildStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, MildStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(MildStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        MildStatus::InvalidUtf8
    })
}

/// Parse and validate a workspace. On success `*out` receives a handle to
/// free with `mild_workspace_free`.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mild_workspace_parse(
    source: *const c_char,
    max_degree: usize,
    out: *mut *mut MildWorkspace,
) -> MildStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return MildStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let src = match str_arg(source) {
            Ok(s) => s,
            Err(s) => return s,
        };
        if let Err(e) = cli::parse(src, max_degree + 1) {
            return fail(&e);
        }
        *out = Box::into_raw(Box::new(MildWorkspace { source: src.to_string() }));
        MildStatus::Ok
    })
}

/// A handle on the built-in corpus.
#[no_mangle]
pub extern "C" fn mild_workspace_corpus() -> *mut MildWorkspace {
    Box::into_raw(Box::new(MildWorkspace { source: cli::CORPUS.to_string() }))
}

/// # Safety
/// `ws` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mild_workspace_free(ws: *mut MildWorkspace) {
    if !ws.is_null() {
        drop(Box::from_raw(ws));
    }
}

/// Run a command such as `{"tc", "--algebra", "S3", "--n", "2"}` and store
/// the JSON report in `*json_out`. The report is produced whenever the
/// status is `Ok`, `Failure` from a rejected retraction, or `Uncertified`
/// under `--strict`; otherwise `*json_out` is NULL.
///
/// # Safety
/// `ws` must be a live handle, `argv` must hold `argc` NUL-terminated
/// strings and `json_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mild_run(
    ws: *const MildWorkspace,
    argv: *const *const c_char,
    argc: usize,
    json_out: *mut *mut c_char,
) -> MildStatus {
    guarded(|| {
        if ws.is_null() || json_out.is_null() || (argv.is_null() && argc > 0) {
            set_error("null pointer argument");
            return MildStatus::NullPointer;
        }
        *json_out = ptr::null_mut();
        let mut args = vec!["mild".to_string()];
        for i in 0..argc {
            match str_arg(*argv.add(i)) {
                Ok(s) => args.push(s.to_string()),
                Err(s) => return s,
            }
        }
        let cli = match Cli::try_parse_from(&args) {
            Ok(c) => c,
            Err(e) => {
                set_error(e.to_string());
                return MildStatus::InvalidInput;
            }
        };
        let run = || -> mild_core::Result<cli::Outcome> {
            let w = cli::workspace_from_source(&(*ws).source, &cli)?;
            cli::thread_pool()?.install(|| cli::run_on(&cli, &w))
        };
        match run() {
            Ok(outcome) => {
                match CString::new(outcome.json_text()) {
                    Ok(s) => *json_out = s.into_raw(),
                    Err(_) => {
                        set_error("report contains a NUL byte");
                        return MildStatus::Failure;
                    }
                }
                if outcome.exit_code != 0 {
                    set_error("the report did not pass; see its JSON");
                }
                MildStatus::from_code(outcome.exit_code)
            }
            Err(e) => fail(&e),
        }
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mild_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or NULL. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn mild_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mild_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
