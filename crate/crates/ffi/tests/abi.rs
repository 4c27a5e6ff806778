use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use rcnli_ffi::*;

const WHO: &str = "# sent_id = e/q\n\
    1\tWho\twho\tPRON\tWP\tPronType=Int\t2\tnsubj\t_\t_\n\
    2\twrote\twrite\tVERB\tVBD\t_\t0\troot\t_\t_\n\
    3\tthe\tthe\tDET\tDT\t_\t4\tdet\t_\t_\n\
    4\tbook\tbook\tNOUN\tNN\t_\t2\tobj\t_\tSpaceAfter=No\n\
    5\t?\t?\tPUNCT\t.\t_\t2\tpunct\t_\t_\n\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn convert_with_parse_handle() {
    let text = c(WHO);
    let mut set = ptr::null_mut();
    unsafe {
        assert_eq!(rcnli_parses_from_conllu(text.as_ptr(), &mut set), RcnliStatus::Ok);
        assert_eq!(rcnli_parses_len(set), 1);

        let (q, a, id) = (c("Who wrote the book?"), c("Tom"), c("e/q"));
        let mut conv = ptr::null_mut();
        let status = rcnli_convert(q.as_ptr(), a.as_ptr(), set, id.as_ptr(), ptr::null(), &mut conv);
        assert_eq!(status, RcnliStatus::Ok);
        assert_eq!(
            CStr::from_ptr(rcnli_conversion_hypothesis(conv)).to_str().unwrap(),
            "Tom wrote the book."
        );
        assert_eq!(rcnli_conversion_rule(conv), RcnliRule::Wh);
        rcnli_conversion_free(conv);

        let missing = c("nope/q");
        let status = rcnli_convert(q.as_ptr(), a.as_ptr(), set, missing.as_ptr(), ptr::null(), &mut conv);
        assert_eq!(status, RcnliStatus::NotFound);
        assert!(conv.is_null());
        assert!(CStr::from_ptr(rcnli_last_error()).to_str().unwrap().contains("nope/q"));
        rcnli_parses_free(set);
    }
}

#[test]
fn conllu_errors() {
    let bad = c("# sent_id = a/q\n1\tx\tx\tX\tX\t_\t1\troot\t_\t_\n\n");
    let mut set = ptr::null_mut();
    unsafe {
        assert_eq!(
            rcnli_parses_from_conllu(bad.as_ptr(), &mut set),
            RcnliStatus::ParseError
        );
        assert!(set.is_null());

        let mut n = 0usize;
        let mut errors = ptr::null_mut();
        assert_eq!(
            rcnli_conllu_check(bad.as_ptr(), &mut n, &mut errors),
            RcnliStatus::ParseError
        );
        assert!(CStr::from_ptr(errors).to_str().unwrap().contains("own head"));
        rcnli_string_free(errors);

        let good = c(WHO);
        assert_eq!(rcnli_conllu_check(good.as_ptr(), &mut n, &mut errors), RcnliStatus::Ok);
        assert_eq!(n, 1);
        assert!(errors.is_null());
        rcnli_string_free(ptr::null_mut());
    }
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert_eq!(rcnli_parses_len(ptr::null()), 0);
        assert!(rcnli_conversion_hypothesis(ptr::null()).is_null());
        assert_eq!(rcnli_conversion_trace_len(ptr::null()), 0);
        rcnli_parses_free(ptr::null_mut());
        rcnli_conversion_free(ptr::null_mut());
    }
    assert!(!unsafe { CStr::from_ptr(rcnli_version()) }.to_bytes().is_empty());
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/rcnli.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "rcnli_convert",
        "rcnli_parses_from_conllu",
        "rcnli_last_error",
        "RCNLI_STATUS_NOT_FOUND",
        "RcnliFlags",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-xc", "-std=c99", "-Wall", "-Werror"])
        .arg(&header)
        .status()
    else {
        eprintln!("cc not available; skipping syntax check");
        return;
    };
    assert!(status.success(), "header does not compile as C99");
}
