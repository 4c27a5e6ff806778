//! C ABI over `rcnli`.
//!
//! Every fallible call returns an [`RcnliStatus`]; on failure the message
//! is available from [`rcnli_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Strings
//! returned through `out` parameters are owned by the caller and freed
//! with [`rcnli_string_free`]; strings returned directly borrow from the
//! handle they came from.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rcnli::categorize;
use rcnli::converter::{self, ConversionResult, RuleId};
use rcnli::parsetree::{self, ParseBundle};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcnliStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    NotFound = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcnliRule {
    Cloze = 0,
    WhichTrue = 1,
    Wh = 2,
    Fallback = 3,
}

impl From<RuleId> for RcnliRule {
    fn from(r: RuleId) -> Self {
        match r {
            RuleId::Cloze => RcnliRule::Cloze,
            RuleId::WhichTrue => RcnliRule::WhichTrue,
            RuleId::Wh => RcnliRule::Wh,
            RuleId::Fallback => RcnliRule::Fallback,
        }
    }
}

/// Keyword question types; several may be set at once.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RcnliFlags {
    pub main_idea: bool,
    pub negation: bool,
    pub dialogue: bool,
    pub math: bool,
    pub deductive: bool,
}

/// Parsed CoNLL-U sentences keyed by `sent_id`.
pub struct RcnliParseSet {
    bundle: ParseBundle,
}

/// One converted hypothesis with its rule and trace.
pub struct RcnliConversion {
    hypothesis: CString,
    rule: RcnliRule,
    trace: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let c = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: RcnliStatus, message: impl Into<String>) -> RcnliStatus {
    set_error(message);
    status
}

fn owned(s: &str) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, RcnliStatus> {
    if p.is_null() {
        return Err(fail(RcnliStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(RcnliStatus::InvalidUtf8, format!("{name}: {e}")))
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn read_opt_str<'a>(p: *const c_char, name: &str) -> Result<Option<&'a str>, RcnliStatus> {
    if p.is_null() {
        Ok(None)
    } else {
        read_str(p, name).map(Some)
    }
}

fn guarded(f: impl FnOnce() -> Result<(), RcnliStatus>) -> RcnliStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RcnliStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(RcnliStatus::Panic, "internal panic"),
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next `rcnli_*` call on the same thread.
#[no_mangle]
pub extern "C" fn rcnli_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version; static storage.
#[no_mangle]
pub extern "C" fn rcnli_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned through an `out` parameter. Null is a no-op.
///
/// # Safety
/// `s` is null or came from this library and has not been freed.
#[no_mangle]
pub unsafe extern "C" fn rcnli_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses CoNLL-U text into a new parse set.
///
/// # Safety
/// `conllu` is a NUL-terminated string; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rcnli_parses_from_conllu(conllu: *const c_char, out: *mut *mut RcnliParseSet) -> RcnliStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RcnliStatus::NullArgument, "out is null"));
        }
        *out = ptr::null_mut();
        let text = read_str(conllu, "conllu")?;
        let bundle = ParseBundle::from_conllu(text).map_err(|e| fail(RcnliStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(RcnliParseSet { bundle }));
        Ok(())
    })
}

/// Number of sentences in the set; 0 for null.
///
/// # Safety
/// `set` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rcnli_parses_len(set: *const RcnliParseSet) -> usize {
    set.as_ref().map_or(0, |s| s.bundle.len())
}

/// # Safety
/// `set` is null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcnli_parses_free(set: *mut RcnliParseSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Validates CoNLL-U text. On success `*out_errors` is null; with
/// structural problems it holds one message per line and the status is
/// `RCNLI_STATUS_PARSE_ERROR`. `out_sentences` may be null.
///
/// # Safety
/// `conllu` is a NUL-terminated string; `out_errors` is a valid pointer;
/// `out_sentences` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conllu_check(
    conllu: *const c_char,
    out_sentences: *mut usize,
    out_errors: *mut *mut c_char,
) -> RcnliStatus {
    guarded(|| {
        if out_errors.is_null() {
            return Err(fail(RcnliStatus::NullArgument, "out_errors is null"));
        }
        *out_errors = ptr::null_mut();
        let text = read_str(conllu, "conllu")?;
        let report = parsetree::validate_conllu(text);
        if !out_sentences.is_null() {
            *out_sentences = report.sentences.len();
        }
        if report.errors.is_empty() {
            return Ok(());
        }
        let joined: Vec<String> = report.errors.iter().map(ToString::to_string).collect();
        *out_errors = owned(&joined.join("\n")).into_raw();
        Err(fail(
            RcnliStatus::ParseError,
            format!("{} structural error(s)", joined.len()),
        ))
    })
}

/// Converts a question and answer option into a hypothesis.
///
/// `parses`, `question_id` and `answer_id` may be null. When `parses` is
/// given, the ids name sentences in it; a named id that is absent fails
/// with `RCNLI_STATUS_NOT_FOUND`.
///
/// # Safety
/// String arguments are null or NUL-terminated; `parses` is null or a live
/// handle; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rcnli_convert(
    question: *const c_char,
    answer: *const c_char,
    parses: *const RcnliParseSet,
    question_id: *const c_char,
    answer_id: *const c_char,
    out: *mut *mut RcnliConversion,
) -> RcnliStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RcnliStatus::NullArgument, "out is null"));
        }
        *out = ptr::null_mut();
        let q = read_str(question, "question")?;
        let a = read_str(answer, "answer")?;
        let q_id = read_opt_str(question_id, "question_id")?;
        let a_id = read_opt_str(answer_id, "answer_id")?;
        let set = parses.as_ref();
        let lookup = |id: Option<&str>| -> Result<_, RcnliStatus> {
            match (set, id) {
                (Some(s), Some(id)) => s
                    .bundle
                    .get(id)
                    .map(Some)
                    .ok_or_else(|| fail(RcnliStatus::NotFound, format!("no parse with sent_id {id}"))),
                _ => Ok(None),
            }
        };
        let result: ConversionResult = converter::convert(q, a, lookup(q_id)?, lookup(a_id)?);
        *out = Box::into_raw(Box::new(RcnliConversion {
            hypothesis: owned(&result.hypothesis),
            rule: result.rule_id.into(),
            trace: result.trace.iter().map(|t| owned(t)).collect(),
        }));
        Ok(())
    })
}

/// Borrowed hypothesis text; null for a null handle.
///
/// # Safety
/// `conv` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conversion_hypothesis(conv: *const RcnliConversion) -> *const c_char {
    conv.as_ref().map_or(ptr::null(), |c| c.hypothesis.as_ptr())
}

/// # Safety
/// `conv` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conversion_rule(conv: *const RcnliConversion) -> RcnliRule {
    conv.as_ref().map_or(RcnliRule::Fallback, |c| c.rule)
}

/// # Safety
/// `conv` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conversion_trace_len(conv: *const RcnliConversion) -> usize {
    conv.as_ref().map_or(0, |c| c.trace.len())
}

/// Borrowed trace entry `i`; null when out of range.
///
/// # Safety
/// `conv` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conversion_trace_at(conv: *const RcnliConversion, i: usize) -> *const c_char {
    conv.as_ref()
        .and_then(|c| c.trace.get(i))
        .map_or(ptr::null(), |t| t.as_ptr())
}

/// # Safety
/// `conv` is null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcnli_conversion_free(conv: *mut RcnliConversion) {
    if !conv.is_null() {
        drop(Box::from_raw(conv));
    }
}

/// Keyword question types for `question`, using `passage` for the
/// dialogue test. `passage` may be null.
///
/// # Safety
/// `question` is NUL-terminated; `passage` is null or NUL-terminated;
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rcnli_categorize(
    question: *const c_char,
    passage: *const c_char,
    out: *mut RcnliFlags,
) -> RcnliStatus {
    guarded(|| {
        if out.is_null() {
            return Err(fail(RcnliStatus::NullArgument, "out is null"));
        }
        let q = read_str(question, "question")?;
        let p = read_opt_str(passage, "passage")?.unwrap_or("");
        let f = categorize::heuristic_categorize(q, p);
        *out = RcnliFlags {
            main_idea: f.main_idea,
            negation: f.negation,
            dialogue: f.dialogue,
            math: f.math,
            deductive: f.deductive,
        };
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn convert_without_parses() {
        let q = c("Which of the following is NOT true?");
        let a = c("Tom is tall.");
        let mut out = ptr::null_mut();
        let status = unsafe { rcnli_convert(q.as_ptr(), a.as_ptr(), ptr::null(), ptr::null(), ptr::null(), &mut out) };
        assert_eq!(status, RcnliStatus::Ok);
        unsafe {
            let h = CStr::from_ptr(rcnli_conversion_hypothesis(out)).to_str().unwrap();
            assert_eq!(h, "Tom is tall is NOT true.");
            assert_eq!(rcnli_conversion_rule(out), RcnliRule::WhichTrue);
            assert!(rcnli_conversion_trace_len(out) >= 1);
            assert!(rcnli_conversion_trace_at(out, 999).is_null());
            rcnli_conversion_free(out);
        }
    }

    #[test]
    fn null_and_utf8_errors() {
        let mut out = ptr::null_mut();
        let a = c("x");
        let status = unsafe { rcnli_convert(ptr::null(), a.as_ptr(), ptr::null(), ptr::null(), ptr::null(), &mut out) };
        assert_eq!(status, RcnliStatus::NullArgument);
        assert!(out.is_null());
        let msg = unsafe { CStr::from_ptr(rcnli_last_error()) };
        assert!(msg.to_str().unwrap().contains("question"));

        let bad = [0xffu8, 0xfe, 0];
        let status = unsafe {
            rcnli_convert(
                bad.as_ptr().cast(),
                a.as_ptr(),
                ptr::null(),
                ptr::null(),
                ptr::null(),
                &mut out,
            )
        };
        assert_eq!(status, RcnliStatus::InvalidUtf8);
    }

    #[test]
    fn categorize_flags() {
        let q = c("Which of the following is NOT true?");
        let mut f = RcnliFlags::default();
        assert_eq!(
            unsafe { rcnli_categorize(q.as_ptr(), ptr::null(), &mut f) },
            RcnliStatus::Ok
        );
        assert!(f.negation && f.deductive && !f.math);
        assert!(rcnli_last_error().is_null());
    }
}
