use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use junta_forge_ffi::*;

fn parse(text: &str) -> *mut JfFamily {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { jf_family_parse(c.as_ptr(), &mut out) }, JfStatus::Ok);
    out
}

fn take(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { jf_string_free(s) };
    text
}

fn last_error() -> String {
    let p = jf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

const STAR: &str = "n=5 k=2\n1 2\n1 3\n1 4\n1 5\n";

#[test]
fn parse_serialize_roundtrip() {
    let f = parse(STAR);
    unsafe {
        assert_eq!(jf_family_len(f), 4);
        assert_eq!(jf_family_universe(f), 5);
        let mut s = ptr::null_mut();
        assert_eq!(jf_family_serialize(f, &mut s), JfStatus::Ok);
        assert_eq!(take(s), STAR);
        assert_eq!(jf_family_to_json(f, &mut s), JfStatus::Ok);
        let json = take(s);
        let g = parse(&json);
        assert_eq!(jf_family_len(g), 4);
        jf_family_free(g);
        jf_family_free(f);
        assert_eq!(jf_family_len(ptr::null()), 0);
        jf_family_free(ptr::null_mut());
    }
}

#[test]
fn errors_set_status_and_message() {
    let bad = CString::new("n=3 k=2\n1 7\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { jf_family_parse(bad.as_ptr(), &mut out) }, JfStatus::Parse);
    assert!(out.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
    assert_eq!(unsafe { jf_family_parse(ptr::null(), &mut out) }, JfStatus::NullPointer);
    let f = parse(STAR);
    let mut holds = false;
    assert_eq!(unsafe { jf_cross_t(f, f, 0, &mut holds) }, JfStatus::InvalidArgument);
    assert_eq!(unsafe { jf_is_shifted(f, ptr::null_mut()) }, JfStatus::NullPointer);
    unsafe { jf_family_free(f) };
}

#[test]
fn shifting_and_properties() {
    let f = parse("n=5 k=2\n3 4\n");
    unsafe {
        let mut shifted = false;
        assert_eq!(jf_is_shifted(f, &mut shifted), JfStatus::Ok);
        assert!(!shifted);
        let mut g = ptr::null_mut();
        assert_eq!(jf_make_shifted(f, &mut g), JfStatus::Ok);
        let mut s = ptr::null_mut();
        jf_family_serialize(g, &mut s);
        assert_eq!(take(s), "n=5 k=2\n1 2\n");
        let mut h = ptr::null_mut();
        assert_eq!(jf_shift(f, 1, 3, &mut h), JfStatus::Ok);
        jf_family_serialize(h, &mut s);
        assert_eq!(take(s), "n=5 k=2\n1 4\n");

        let star = parse(STAR);
        let mut holds = false;
        assert_eq!(jf_cross_t(star, star, 1, &mut holds), JfStatus::Ok);
        assert!(holds);
        assert_eq!(jf_cross_t(star, f, 1, &mut holds), JfStatus::Ok);
        assert!(!holds);

        let list = [star as *const JfFamily, star as *const JfFamily];
        assert_eq!(jf_cross_dependent(list.as_ptr(), 2, -1.0, &mut holds), JfStatus::Ok);
        assert!(holds);
        let split = [star as *const JfFamily, f as *const JfFamily];
        assert_eq!(jf_cross_dependent(split.as_ptr(), 2, -1.0, &mut holds), JfStatus::Ok);
        assert!(!holds);

        let one = CString::new("1").unwrap();
        let weights = [one.as_ptr(), one.as_ptr()];
        assert_eq!(
            jf_check_hitting(
                list.as_ptr(),
                weights.as_ptr(),
                2,
                one.as_ptr(),
                ptr::null(),
                0,
                -1.0,
                &mut holds
            ),
            JfStatus::Ok
        );
        assert!(holds);
        let levels = [1usize];
        assert_eq!(
            jf_check_hitting(
                split.as_ptr(),
                weights.as_ptr(),
                2,
                one.as_ptr(),
                levels.as_ptr(),
                1,
                -1.0,
                &mut holds
            ),
            JfStatus::Ok
        );
        assert!(!holds);

        for p in [f, g, h, star] {
            jf_family_free(p);
        }
    }
}

#[test]
fn pair_extraction_on_star() {
    let lines: Vec<String> = (2..=10)
        .flat_map(|b| (b + 1..=10).map(move |c| format!("1 {b} {c}")))
        .collect();
    let f = parse(&format!("n=10 k=3\n{}\n", lines.join("\n")));
    unsafe {
        let (mut ja, mut jb) = (ptr::null_mut(), ptr::null_mut());
        let (mut ra, mut rb, mut ok) = (0usize, 0usize, false);
        assert_eq!(
            jf_extract_pair(f, f, 1, 2, &mut ja, &mut jb, &mut ra, &mut rb, &mut ok),
            JfStatus::Ok
        );
        assert_eq!((ra, rb, ok), (8, 8, true));
        let mut s = ptr::null_mut();
        assert_eq!(jf_junta_to_json(ja, &mut s), JfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["center"], serde_json::json!([1, 2]));
        assert_eq!(v["n"], 10);
        jf_junta_free(ja);
        jf_junta_free(jb);

        let bad = parse("n=10 k=3\n2 3 4\n");
        assert_eq!(
            jf_extract_pair(bad, bad, 1, 2, &mut ja, &mut jb, &mut ra, &mut rb, &mut ok),
            JfStatus::Hypothesis
        );
        assert!(last_error().contains("not shifted"));
        jf_family_free(bad);
        jf_family_free(f);
    }
}

#[test]
fn binom_is_exact() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { jf_binom(100, 50, &mut s) }, JfStatus::Ok);
    assert_eq!(take(s), "100891344545564193334812497256");
    assert_eq!(unsafe { jf_binom(4, 7, &mut s) }, JfStatus::Ok);
    assert_eq!(take(s), "0");
    assert_eq!(unsafe { jf_binom(-1, 0, &mut s) }, JfStatus::InvalidArgument);
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(jf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/junta_forge.h")
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "jf_family_parse",
        "jf_family_free",
        "jf_family_len",
        "jf_family_universe",
        "jf_family_serialize",
        "jf_family_to_json",
        "jf_is_shifted",
        "jf_make_shifted",
        "jf_shift",
        "jf_cross_t",
        "jf_cross_dependent",
        "jf_check_hitting",
        "jf_extract_pair",
        "jf_junta_to_json",
        "jf_junta_free",
        "jf_string_free",
        "jf_binom",
        "jf_last_error_message",
        "jf_version",
        "typedef struct JfFamily JfFamily",
        "typedef struct JfJunta JfJunta",
        "JF_STATUS_OK = 0",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

/// Compiles and links a C client against the static library when a C
/// compiler and the archive are present.
#[test]
fn c_client_links_and_runs() {
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let archive = profile_dir.join("libjunta_forge_ffi.a");
    if !archive.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or {} missing", archive.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "junta_forge.h"

int main(void) {
    JfFamily *f = NULL;
    if (jf_family_parse("n=4 k=2\n1 2\n1 3\n1 4\n", &f) != JF_STATUS_OK) return 10;
    bool shifted = false;
    if (jf_is_shifted(f, &shifted) != JF_STATUS_OK || !shifted) return 11;
    char *text = NULL;
    if (jf_binom(10, 3, &text) != JF_STATUS_OK || strcmp(text, "120") != 0) return 12;
    jf_string_free(text);
    if (jf_family_parse("n=2 k=1\n5\n", &f) != JF_STATUS_PARSE) return 13;
    if (jf_last_error_message() == NULL) return 14;
    jf_family_free(f);
    puts("ok");
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("client");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&archive)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C client failed to build");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
