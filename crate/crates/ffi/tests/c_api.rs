use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use mild_ffi::*;

fn run(ws: *const MildWorkspace, args: &[&str]) -> (MildStatus, Option<serde_json::Value>) {
    let owned: Vec<CString> = args.iter().map(|a| CString::new(*a).unwrap()).collect();
    let argv: Vec<*const c_char> = owned.iter().map(|c| c.as_ptr()).collect();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { mild_run(ws, argv.as_ptr(), argv.len(), &mut out) };
    let json = (!out.is_null()).then(|| {
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { mild_string_free(out) };
        serde_json::from_str(&s).unwrap()
    });
    (status, json)
}

fn last_error() -> String {
    let p = mild_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn parse_and_run_cohomology() {
    let src = CString::new("ring Z invert 2\ncdga S2t { gen v : 2 gen w : 3 d w = 3*v^2 }").unwrap();
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { mild_workspace_parse(src.as_ptr(), 6, &mut ws) }, MildStatus::Ok);
    let (status, json) = run(ws, &["cohomology", "--algebra", "S2t", "--max-degree", "6"]);
    assert_eq!(status, MildStatus::Ok);
    assert_eq!(json.unwrap()["result"]["entries"][4]["torsion"], serde_json::json!(["3"]));
    unsafe { mild_workspace_free(ws) };
}

#[test]
fn parse_errors_carry_location() {
    let src = CString::new("cdga A {\n  gen v 2\n}").unwrap();
    let mut ws = ptr::null_mut();
    assert_eq!(unsafe { mild_workspace_parse(src.as_ptr(), 6, &mut ws) }, MildStatus::InvalidInput);
    assert!(ws.is_null());
    assert!(last_error().contains("2:9"), "{}", last_error());
}

#[test]
fn corpus_tc_and_error_codes() {
    let ws = mild_workspace_corpus();
    let (status, json) = run(ws, &["tc", "--algebra", "S3", "--m-max", "2", "--max-degree", "8"]);
    assert_eq!(status, MildStatus::Ok);
    assert_eq!(json.unwrap()["result"]["bounds"]["TC"]["squeezed"], true);

    let (status, json) = run(ws, &["cohomology", "--algebra", "Nope"]);
    assert_eq!((status, json), (MildStatus::InvalidInput, None));
    assert!(last_error().contains("Nope"));

    let (status, _) = run(ws, &["model", "--morphism", "collapse"]);
    assert_eq!(status, MildStatus::HypothesisViolated);

    let (status, _) = run(ws, &["no-such-command"]);
    assert_eq!(status, MildStatus::InvalidInput);
    unsafe { mild_workspace_free(ws) };
}

#[test]
fn null_pointers_are_reported() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mild_run(ptr::null(), ptr::null(), 0, &mut out) }, MildStatus::NullPointer);
    assert_eq!(unsafe { mild_workspace_parse(ptr::null(), 4, &mut ptr::null_mut()) }, MildStatus::NullPointer);
    unsafe {
        mild_workspace_free(ptr::null_mut());
        mild_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(mild_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/mild.h");
    assert!(header.exists());
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    assert!(status.success());
}
