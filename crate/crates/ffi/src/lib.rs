//! C interface to `hangul-obfus`.
//!
//! Every function returns an [`HoStatus`]. On anything but `HO_STATUS_OK`,
//! `ho_last_error_message()` describes the failure. Strings handed out by
//! the library are NUL-terminated UTF-8 and must be released with
//! `ho_string_free`; engines with `ho_engine_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hangul_obfus::config::Config;
use hangul_obfus::engine::pair_rng;
use hangul_obfus::{metrics, Error, JamoTriple, Level, Obfuscator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    NoEligibleTarget = 4,
    UnknownRule = 5,
    Incomplete = 6,
    NotHangulSyllable = 7,
    EmptyReference = 8,
    Config = 9,
    Io = 10,
    BackendUnavailable = 11,
    Panic = 98,
    Other = 99,
}

/// Difficulty: the number of rules applied to each side.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoLevel {
    Easy = 2,
    Normal = 3,
    Hard = 4,
}

impl From<HoLevel> for Level {
    fn from(l: HoLevel) -> Level {
        match l {
            HoLevel::Easy => Level::Easy,
            HoLevel::Normal => Level::Normal,
            HoLevel::Hard => Level::Hard,
        }
    }
}

/// Opaque engine: the rule tables, rates and seed.
pub struct HoEngine {
    ob: Obfuscator,
    seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HoStatus {
    match e {
        Error::NoEligibleTarget => HoStatus::NoEligibleTarget,
        Error::UnknownRule(_) => HoStatus::UnknownRule,
        Error::Incomplete { .. } => HoStatus::Incomplete,
        Error::NotHangulSyllable(_) | Error::IndexOutOfRange { .. } => HoStatus::NotHangulSyllable,
        Error::EmptyReference => HoStatus::EmptyReference,
        Error::Config(_) => HoStatus::Config,
        Error::Io(_) => HoStatus::Io,
        Error::BackendUnavailable(_) => HoStatus::BackendUnavailable,
        Error::InvalidArgument(_) | Error::EmptyPool => HoStatus::InvalidArgument,
        _ => HoStatus::Other,
    }
}

struct Failure(HoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> HoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HoStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside hangul-obfus");
            HoStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(HoStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HoStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn engine_ref<'a>(p: *const HoEngine) -> Result<&'a HoEngine, Failure> {
    p.as_ref().ok_or_else(|| Failure(HoStatus::NullPointer, "engine is null".into()))
}

fn check_out<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(HoStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(HoStatus::Other, "output contains NUL".into()))
}

/// Message for the last failing call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ho_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates an engine with the built-in tables and default rates.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn ho_engine_new(seed: u64, out: *mut *mut HoEngine) -> HoStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = Box::into_raw(Box::new(HoEngine { ob: Obfuscator::default(), seed }));
        Ok(())
    })
}

/// Creates an engine from TOML configuration text (same keys as the CLI's
/// `--config` file). The seed comes from the configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ho_engine_new_from_config(toml: *const c_char, out: *mut *mut HoEngine) -> HoStatus {
    guard(|| {
        check_out(out, "out")?;
        let cfg = Config::from_toml(text(toml, "toml")?)?;
        let ob = cfg.obfuscator()?;
        *out = Box::into_raw(Box::new(HoEngine { ob, seed: cfg.seed }));
        Ok(())
    })
}

/// # Safety
/// `engine` must come from `ho_engine_new*` and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ho_engine_free(engine: *mut HoEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Applies rule `rule` (1-17) at its configured rate. `stream` selects an
/// independent random stream under the engine seed, so equal inputs give
/// equal outputs.
///
/// # Safety
/// Pointers must be valid; `input` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ho_apply_rule(
    engine: *const HoEngine,
    input: *const c_char,
    rule: u8,
    stream: u64,
    out: *mut *mut c_char,
) -> HoStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let input = text(input, "input")?;
        check_out(out, "out")?;
        let mut rng = ChaCha8Rng::seed_from_u64(e.seed);
        rng.set_stream(stream);
        let rewrite = e.ob.apply_rule(input, rule, &mut rng)?;
        *out = c_string(rewrite.render())?;
        Ok(())
    })
}

/// Obfuscates a neutral/toxic pair at `level`. `pair_index` picks the random
/// stream the same way the dataset generator does. When `out_rules` is not
/// null it receives up to 4 applied rule ids, in order, and `out_rule_count`
/// their number.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated; `out_rules`, if given,
/// must hold 4 bytes.
#[no_mangle]
pub unsafe extern "C" fn ho_obfuscate_pair(
    engine: *const HoEngine,
    neutral: *const c_char,
    toxic: *const c_char,
    level: HoLevel,
    pair_index: u64,
    out_neutral: *mut *mut c_char,
    out_toxic: *mut *mut c_char,
    out_rules: *mut u8,
    out_rule_count: *mut usize,
) -> HoStatus {
    guard(|| {
        let e = engine_ref(engine)?;
        let (n, t) = (text(neutral, "neutral")?, text(toxic, "toxic")?);
        check_out(out_neutral, "out_neutral")?;
        check_out(out_toxic, "out_toxic")?;
        let level = Level::from(level);
        let mut rng = pair_rng(e.seed, pair_index, level);
        let r = e.ob.obfuscate_pair(n, t, level, e.seed, &mut rng)?;
        let on = c_string(r.neutral_obf)?;
        let ot = match c_string(r.toxic_obf) {
            Ok(p) => p,
            Err(f) => {
                drop(CString::from_raw(on));
                return Err(f);
            }
        };
        *out_neutral = on;
        *out_toxic = ot;
        if !out_rules.is_null() {
            ptr::copy_nonoverlapping(r.applied.as_ptr(), out_rules, r.applied.len().min(4));
        }
        if !out_rule_count.is_null() {
            *out_rule_count = r.applied.len();
        }
        Ok(())
    })
}

/// Sentence chrF (0-100) with whitespace ignored.
///
/// # Safety
/// Strings must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn ho_chrf(
    hypothesis: *const c_char,
    reference: *const c_char,
    max_n: usize,
    beta: f64,
    out: *mut f64,
) -> HoStatus {
    guard(|| {
        let (h, r) = (text(hypothesis, "hypothesis")?, text(reference, "reference")?);
        check_out(out, "out")?;
        if max_n == 0 || beta.is_nan() || beta <= 0.0 {
            return Err(Failure(HoStatus::InvalidArgument, "max_n and beta must be positive".into()));
        }
        *out = metrics::chrf(h, r, max_n, beta)?;
        Ok(())
    })
}

/// Splits a precomposed syllable into initial, medial and final indices.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ho_decompose(syllable: u32, initial: *mut u8, medial: *mut u8, coda: *mut u8) -> HoStatus {
    guard(|| {
        check_out(initial, "initial")?;
        check_out(medial, "medial")?;
        check_out(coda, "coda")?;
        let c = char::from_u32(syllable)
            .ok_or_else(|| Failure(HoStatus::NotHangulSyllable, format!("U+{syllable:X} is not a character")))?;
        let t = hangul_obfus::decompose(c)?;
        *initial = t.initial();
        *medial = t.medial();
        *coda = t.coda();
        Ok(())
    })
}

/// Builds a syllable code point from jamo indices.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ho_compose(initial: u8, medial: u8, coda: u8, out: *mut u32) -> HoStatus {
    guard(|| {
        check_out(out, "out")?;
        *out = hangul_obfus::compose(JamoTriple::new(initial, medial, coda)?) as u32;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ho_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
