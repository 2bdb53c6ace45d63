//! C ABI over `junta_forge`.
//!
//! Families and juntas cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Every fallible call
//! returns a [`JfStatus`]; on failure [`jf_last_error_message`] describes the
//! error for the calling thread. Strings handed out by this library are
//! released with [`jf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use junta_forge::junta::{extract_pair_juntas, JuntaSpec, PairOptions};
use junta_forge::properties::{
    are_cross_t_intersecting, check_hitting_within, is_cross_dependent_within, HittingSystem,
};
use junta_forge::setcore::{binom, family_to_json, parse_any, parse_rational, serialize_family};
use junta_forge::shifting::{is_shifted, make_shifted, shift_family};
use junta_forge::{Budget, Error, SetFamily};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JfStatus {
    Ok = 0,
    InvalidArgument = 1,
    Parse = 2,
    ResourceLimit = 3,
    Hypothesis = 4,
    BudgetExceeded = 5,
    Io = 6,
    NullPointer = 7,
    Utf8 = 8,
    Panic = 9,
}

/// Opaque set family.
pub struct JfFamily {
    inner: SetFamily,
}

/// Opaque junta (center plus defining family).
pub struct JfJunta {
    inner: JuntaSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(JfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidArgument(_) => JfStatus::InvalidArgument,
            Error::ResourceLimit(_) => JfStatus::ResourceLimit,
            Error::Parse { .. } | Error::Json(_) => JfStatus::Parse,
            Error::Hypothesis { .. } => JfStatus::Hypothesis,
            Error::BudgetExceeded => JfStatus::BudgetExceeded,
            Error::Io(_) => JfStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

type Attempt = Result<(), Failure>;

fn null(what: &str) -> Failure {
    Failure(JfStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Attempt) -> JfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => JfStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            JfStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(JfStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Attempt {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn boxed_family(f: SetFamily) -> *mut JfFamily {
    Box::into_raw(Box::new(JfFamily { inner: f }))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL in library output").into_raw()
}

unsafe fn families(list: *const *const JfFamily, count: usize) -> Result<Vec<SetFamily>, Failure> {
    if list.is_null() {
        return Err(null("family list"));
    }
    (0..count)
        .map(|i| borrow(*list.add(i), "family").map(|f| f.inner.clone()))
        .collect()
}

fn budget(seconds: f64) -> Budget {
    if seconds.is_finite() && seconds >= 0.0 {
        Budget::from_secs_f64(seconds)
    } else {
        Budget::unlimited()
    }
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn jf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string; do not free.
#[no_mangle]
pub extern "C" fn jf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn jf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `.fam` text or family JSON.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_family_parse(text: *const c_char, out: *mut *mut JfFamily) -> JfStatus {
    guard(|| {
        let f = parse_any(c_str(text, "text")?)?;
        store(out, boxed_family(f), "out")
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn jf_family_free(f: *mut JfFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Member count; 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn jf_family_len(f: *const JfFamily) -> usize {
    f.as_ref().map_or(0, |f| f.inner.len())
}

/// Universe size `n`; 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn jf_family_universe(f: *const JfFamily) -> usize {
    f.as_ref().map_or(0, |f| f.inner.universe())
}

/// Canonical `.fam` text; free with [`jf_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_family_serialize(f: *const JfFamily, out: *mut *mut c_char) -> JfStatus {
    guard(|| {
        let f = borrow(f, "family")?;
        store(out, c_string(serialize_family(&f.inner)), "out")
    })
}

/// Family JSON; free with [`jf_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_family_to_json(f: *const JfFamily, out: *mut *mut c_char) -> JfStatus {
    guard(|| {
        let f = borrow(f, "family")?;
        store(out, c_string(family_to_json(&f.inner)), "out")
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_is_shifted(f: *const JfFamily, out: *mut bool) -> JfStatus {
    guard(|| {
        let f = borrow(f, "family")?;
        store(out, is_shifted(&f.inner)?, "out")
    })
}

/// New handle holding the shifted family.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_make_shifted(f: *const JfFamily, out: *mut *mut JfFamily) -> JfStatus {
    guard(|| {
        let f = borrow(f, "family")?;
        store(out, boxed_family(make_shifted(&f.inner)), "out")
    })
}

/// New handle holding `S_(u<-v)(f)`, 1-based elements.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_shift(f: *const JfFamily, u: usize, v: usize, out: *mut *mut JfFamily) -> JfStatus {
    guard(|| {
        let f = borrow(f, "family")?;
        store(out, boxed_family(shift_family(&f.inner, u, v)?), "out")
    })
}

/// # Safety
/// `a`, `b` must be live handles; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_cross_t(a: *const JfFamily, b: *const JfFamily, t: usize, holds: *mut bool) -> JfStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        store(holds, are_cross_t_intersecting(&a.inner, &b.inner, t)?.holds(), "holds")
    })
}

/// `budget_seconds < 0` means unlimited.
///
/// # Safety
/// `list` must point to `count` live handles; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_cross_dependent(
    list: *const *const JfFamily,
    count: usize,
    budget_seconds: f64,
    holds: *mut bool,
) -> JfStatus {
    guard(|| {
        let fams = families(list, count)?;
        let out = is_cross_dependent_within(&fams, &budget(budget_seconds))?;
        store(holds, out.holds(), "holds")
    })
}

/// Weights and `q` are rational strings such as `"3/2"`. `levels` may be
/// NULL (all of `[n]`); otherwise it holds `level_count` entries.
///
/// # Safety
/// `list` and `weights` must each hold `count` valid entries; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_check_hitting(
    list: *const *const JfFamily,
    weights: *const *const c_char,
    count: usize,
    q: *const c_char,
    levels: *const usize,
    level_count: usize,
    budget_seconds: f64,
    holds: *mut bool,
) -> JfStatus {
    guard(|| {
        let fams = families(list, count)?;
        if weights.is_null() {
            return Err(null("weights"));
        }
        let w = (0..count)
            .map(|i| Ok(parse_rational(c_str(*weights.add(i), "weight")?)?))
            .collect::<Result<Vec<_>, Failure>>()?;
        let mut system = HittingSystem::new(w, parse_rational(c_str(q, "q")?)?)?;
        if !levels.is_null() {
            system = system.with_levels(std::slice::from_raw_parts(levels, level_count).iter().copied())?;
        }
        let out = check_hitting_within(&system, &fams, &budget(budget_seconds))?;
        store(holds, out.holds(), "holds")
    })
}

/// Pair extraction with hypothesis checks. Writes two junta handles and the
/// residual sizes. `passed` receives whether every post-hoc check passed.
///
/// # Safety
/// `a`, `b` must be live handles; every out pointer must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_extract_pair(
    a: *const JfFamily,
    b: *const JfFamily,
    t: usize,
    r: usize,
    junta_a: *mut *mut JfJunta,
    junta_b: *mut *mut JfJunta,
    residual_a: *mut usize,
    residual_b: *mut usize,
    passed: *mut bool,
) -> JfStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        for (p, what) in [
            (junta_a.cast::<u8>(), "junta_a"),
            (junta_b.cast(), "junta_b"),
            (residual_a.cast(), "residual_a"),
            (residual_b.cast(), "residual_b"),
            (passed.cast(), "passed"),
        ] {
            if p.is_null() {
                return Err(null(what));
            }
        }
        let ex = extract_pair_juntas(&a.inner, &b.inner, t, r, &PairOptions::default())?;
        let ok = ex.checks.iter().all(|c| !c.verdict.is_fail());
        store(residual_a, ex.residual_a.len(), "residual_a")?;
        store(residual_b, ex.residual_b.len(), "residual_b")?;
        store(passed, ok, "passed")?;
        store(
            junta_a,
            Box::into_raw(Box::new(JfJunta { inner: ex.junta_a })),
            "junta_a",
        )?;
        store(
            junta_b,
            Box::into_raw(Box::new(JfJunta { inner: ex.junta_b })),
            "junta_b",
        )
    })
}

/// JuntaSpec JSON; free with [`jf_string_free`].
///
/// # Safety
/// `j` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_junta_to_json(j: *const JfJunta, out: *mut *mut c_char) -> JfStatus {
    guard(|| {
        let j = borrow(j, "junta")?;
        store(out, c_string(j.inner.to_json()), "out")
    })
}

/// # Safety
/// `j` must be NULL or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn jf_junta_free(j: *mut JfJunta) {
    if !j.is_null() {
        drop(Box::from_raw(j));
    }
}

/// Exact `C(n, k)` as a decimal string (0 outside `0 <= k <= n`); free with [`jf_string_free`].
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jf_binom(n: i64, k: i64, out: *mut *mut c_char) -> JfStatus {
    guard(|| store(out, c_string(binom(n, k)?.to_string()), "out"))
}
