//! C ABI over the segmenter.
//!
//! Models and span lists are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`MwpStatus`]; on failure the
//! message is available from [`mwp_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use mwe_partition::corpus::{infer_spaces, CorpusFormat, SupportData};
use mwe_partition::{AnnotatedSentence, Error, SegmenterModel, Threshold, Token, TrainConfig};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MwpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Io = 4,
    Parse = 5,
    Mismatch = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A trained segmenter.
pub struct MwpModel(SegmenterModel);

/// Predicted MWEs for one sentence.
pub struct MwpSpans(Vec<Vec<usize>>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    let c = CString::new(text).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(MwpStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::Io(_) => MwpStatus::Io,
            Error::Parse { .. } | Error::Malformed(_) | Error::InvalidSpans(_) => MwpStatus::Parse,
            Error::InvalidThreshold(_) | Error::Config(_) => MwpStatus::InvalidArgument,
            _ => MwpStatus::Mismatch,
        };
        Failure(status, err.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MwpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            MwpStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MwpStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MwpStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MwpStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn str_array<'a>(p: *const *const c_char, n: usize, name: &str) -> Result<Vec<&'a str>, Failure> {
    if p.is_null() {
        return Err(Failure(MwpStatus::NullPointer, format!("{name} is null")));
    }
    (0..n).map(|i| str_arg(*p.add(i), name)).collect()
}

fn null(name: &str) -> Failure {
    Failure(MwpStatus::NullPointer, format!("{name} is null"))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mwp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mwp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a model bundle directory.
///
/// # Safety
/// `dir` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_load(dir: *const c_char, out: *mut *mut MwpModel) -> MwpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dir = str_arg(dir, "dir")?;
        let model = SegmenterModel::load(Path::new(dir))?;
        *out = Box::into_raw(Box::new(MwpModel(model)));
        Ok(())
    })
}

/// Trains a model from a corpus file. `format` is `"dimsum"` or `"parseme"`.
///
/// # Safety
/// String arguments must be NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_train_file(
    corpus_path: *const c_char,
    format: *const c_char,
    use_pos: bool,
    out: *mut *mut MwpModel,
) -> MwpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = str_arg(corpus_path, "corpus_path")?;
        let format: CorpusFormat = str_arg(format, "format")?
            .parse()
            .map_err(|e: String| Failure(MwpStatus::InvalidArgument, e))?;
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let corpus = format.parse(&text)?;
        let config = TrainConfig {
            use_pos,
            ..TrainConfig::default()
        };
        let model = mwe_partition::train(&corpus, &config, &SupportData::default())?;
        *out = Box::into_raw(Box::new(MwpModel(model)));
        Ok(())
    })
}

/// Writes the model as a bundle directory.
///
/// # Safety
/// `model` must come from this library and `dir` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_save(model: *const MwpModel, dir: *const c_char) -> MwpStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        model.0.save(Path::new(str_arg(dir, "dir")?))?;
        Ok(())
    })
}

/// Sets the binding thresholds. Pass a negative `q_pos` for models without
/// a POS channel.
///
/// # Safety
/// `model` must come from this library.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_set_thresholds(model: *mut MwpModel, q_tok: f64, q_pos: f64) -> MwpStatus {
    guard(|| {
        let model = model.as_mut().ok_or_else(|| null("model"))?;
        let q_pos = if q_pos < 0.0 { None } else { Some(Threshold::new(q_pos)?) };
        model.0.set_thresholds(Threshold::new(q_tok)?, q_pos)?;
        Ok(())
    })
}

/// True when the model has a POS channel and needs tags to segment.
///
/// # Safety
/// `model` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_uses_pos(model: *const MwpModel) -> bool {
    model.as_ref().is_some_and(|m| m.0.pos_stats().is_some())
}

/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mwp_model_free(model: *mut MwpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Segments one tokenized sentence. Spacing between tokens is inferred from
/// punctuation. `pos` may be null unless the model uses POS.
///
/// # Safety
/// `tokens` (and `pos` when non-null) must point to `n_tokens` NUL-terminated
/// strings; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mwp_segment(
    model: *const MwpModel,
    tokens: *const *const c_char,
    pos: *const *const c_char,
    n_tokens: usize,
    use_lfd: bool,
    out: *mut *mut MwpSpans,
) -> MwpStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if n_tokens == 0 {
            return Err(Failure(MwpStatus::InvalidArgument, "sentence has no tokens".into()));
        }
        let forms = str_array(tokens, n_tokens, "tokens")?;
        let tags = if pos.is_null() {
            None
        } else {
            Some(str_array(pos, n_tokens, "pos")?)
        };
        let sentence_tokens = forms
            .iter()
            .enumerate()
            .map(|(i, f)| match &tags {
                Some(t) => Token::with_pos(*f, t[i]),
                None => Token::new(*f),
            })
            .collect();
        let sentence = AnnotatedSentence::new(sentence_tokens, infer_spaces(&forms), Vec::new())?;
        let spans = model.0.segment(&sentence, use_lfd)?;
        *out = Box::into_raw(Box::new(MwpSpans(
            spans.iter().map(|s| s.indices().to_vec()).collect(),
        )));
        Ok(())
    })
}

/// Number of spans, or 0 for null.
///
/// # Safety
/// `spans` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn mwp_spans_count(spans: *const MwpSpans) -> usize {
    spans.as_ref().map_or(0, |s| s.0.len())
}

/// Borrows the 0-based token indices of span `i`. The array stays valid
/// until the span list is freed.
///
/// # Safety
/// `spans` must come from this library; `indices` and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mwp_span_indices(
    spans: *const MwpSpans,
    i: usize,
    indices: *mut *const usize,
    len: *mut usize,
) -> MwpStatus {
    guard(|| {
        let spans = spans.as_ref().ok_or_else(|| null("spans"))?;
        if indices.is_null() || len.is_null() {
            return Err(null("indices or len"));
        }
        let span = spans
            .0
            .get(i)
            .ok_or_else(|| Failure(MwpStatus::OutOfRange, format!("span {i} of {}", spans.0.len())))?;
        *indices = span.as_ptr();
        *len = span.len();
        Ok(())
    })
}

/// # Safety
/// `spans` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mwp_spans_free(spans: *mut MwpSpans) {
    if !spans.is_null() {
        drop(Box::from_raw(spans));
    }
}
