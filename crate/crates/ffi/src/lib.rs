//! C ABI for the lampwalk library: opaque handles for groups and elements,
//! integer status codes, and a thread-local last-error message. The header
//! is generated by cbindgen at build time into include/lampwalk.h.
//!
//! Ownership: every `*_new`/`*_parse`/`lw_multiply`-style constructor hands
//! the caller a pointer that must be released with the matching `*_free`;
//! strings returned as `char*` are released with `lw_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lampwalk::embed::{compression_composition, CycleEmbedding};
use lampwalk::group::{display_element, group_from_name, parse_element, Element, GroupSpec};
use lampwalk::metric::{distance, wreath_distance_exact};
use lampwalk::walk::{estimate_speed, WalkConfig};
use lampwalk::Error;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    KindMismatch = 4,
    BudgetExceeded = 5,
    Unsupported = 6,
    RuntimeError = 7,
    Panic = 8,
}

/// Opaque group handle.
pub struct LwGroup {
    spec: GroupSpec,
}

/// Opaque element handle.
pub struct LwElement {
    element: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> LwStatus {
    match err {
        Error::Parse(_) => LwStatus::ParseError,
        Error::KindMismatch(_) => LwStatus::KindMismatch,
        Error::BudgetExceeded { .. } => LwStatus::BudgetExceeded,
        Error::UnsupportedShape(_) | Error::InfiniteBase => LwStatus::Unsupported,
        _ => LwStatus::RuntimeError,
    }
}

fn fail(err: Error) -> LwStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Guard against panics crossing the ABI boundary.
fn guarded<F: FnOnce() -> LwStatus>(f: F) -> LwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic".into());
            LwStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, LwStatus> {
    if s.is_null() {
        set_error("null string pointer".into());
        return Err(LwStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8".into());
        LwStatus::InvalidUtf8
    })
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn lw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The last error message on this thread, or null; free with lw_string_free.
#[no_mangle]
pub extern "C" fn lw_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map(|c| export_string(c.to_string_lossy().into_owned()))
            .unwrap_or(ptr::null_mut())
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a lampwalk function and not freed before.
#[no_mangle]
pub unsafe extern "C" fn lw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Create a group from its registry name (z, z2, cn:<n>, f2, c2wrz, zwrz,
/// c2wrcn:<n>, zwrz2, iterated:<k>, lcnwrz:<m>, lcnwrcn:<m>:<n>).
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lw_group_new(name: *const c_char, out: *mut *mut LwGroup) -> LwStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return LwStatus::NullPointer;
        }
        let name = match read_str(name) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match group_from_name(name) {
            Ok(spec) => {
                *out = Box::into_raw(Box::new(LwGroup { spec }));
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `g` must come from lw_group_new and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lw_group_free(g: *mut LwGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Registry-style name of the group; free with lw_string_free.
///
/// # Safety
/// `g` must be a live group handle.
#[no_mangle]
pub unsafe extern "C" fn lw_group_name(g: *const LwGroup) -> *mut c_char {
    if g.is_null() {
        return ptr::null_mut();
    }
    export_string((*g).spec.name())
}

/// Parse an element in the textual syntax of the group.
///
/// # Safety
/// `g` must be live, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_element_parse(
    g: *const LwGroup,
    text: *const c_char,
    out: *mut *mut LwElement,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        let text = match read_str(text) {
            Ok(s) => s,
            Err(code) => return code,
        };
        match parse_element(&(*g).spec, text) {
            Ok(element) => {
                *out = Box::into_raw(Box::new(LwElement { element }));
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `g` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_element_identity(
    g: *const LwGroup,
    out: *mut *mut LwElement,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        *out = Box::into_raw(Box::new(LwElement {
            element: (*g).spec.identity(),
        }));
        LwStatus::Ok
    })
}

/// Canonical textual form; free with lw_string_free.
///
/// # Safety
/// `e` must be a live element handle.
#[no_mangle]
pub unsafe extern "C" fn lw_element_print(e: *const LwElement) -> *mut c_char {
    if e.is_null() {
        return ptr::null_mut();
    }
    export_string(display_element(&(*e).element))
}

/// # Safety
/// `e` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lw_element_free(e: *mut LwElement) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// 1 if the canonical forms are equal, 0 otherwise.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn lw_element_equal(a: *const LwElement, b: *const LwElement) -> i32 {
    if a.is_null() || b.is_null() {
        return 0;
    }
    i32::from((*a).element == (*b).element)
}

/// Group product a*b in canonical form.
///
/// # Safety
/// All handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_multiply(
    g: *const LwGroup,
    a: *const LwElement,
    b: *const LwElement,
    out: *mut *mut LwElement,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        match (*g).spec.multiply(&(*a).element, &(*b).element) {
            Ok(element) => {
                *out = Box::into_raw(Box::new(LwElement { element }));
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// All handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_inverse(
    g: *const LwGroup,
    a: *const LwElement,
    out: *mut *mut LwElement,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || a.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        match (*g).spec.inverse(&(*a).element) {
            Ok(element) => {
                *out = Box::into_raw(Box::new(LwElement { element }));
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Word distance by breadth-first search, visiting at most `budget` states.
///
/// # Safety
/// All handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_distance(
    g: *const LwGroup,
    a: *const LwElement,
    b: *const LwElement,
    budget: u64,
    out: *mut u64,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        match distance(&(*g).spec, &(*a).element, &(*b).element, budget as usize) {
            Ok(d) => {
                *out = d;
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact wreath distance for shapes Z and C_n.
///
/// # Safety
/// All handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_wreath_distance_exact(
    g: *const LwGroup,
    a: *const LwElement,
    b: *const LwElement,
    out: *mut u64,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        match wreath_distance_exact(&(*g).spec, &(*a).element, &(*b).element) {
            Ok(d) => {
                *out = d;
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Wreath compression-exponent composition min{a,b} / min{b, abp/(ap+bp-1)}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lw_compose_alpha(a: f64, b: f64, p: f64, out: *mut f64) -> LwStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return LwStatus::NullPointer;
        }
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || p < 1.0 {
            set_error(format!("parameters out of range: a={a}, b={b}, p={p}"));
            return LwStatus::ParseError;
        }
        *out = compression_composition(a, b, p);
        LwStatus::Ok
    })
}

/// Fitted speed exponent of the simple random walk (log-log fit over the
/// default power-of-two checkpoints at least 16).
///
/// # Safety
/// `g` live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_walk_speed(
    g: *const LwGroup,
    t_max: u64,
    trials: u64,
    seed: u64,
    out: *mut f64,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        let cfg = WalkConfig::new((*g).spec.clone(), t_max, trials, seed);
        match estimate_speed(&cfg) {
            Ok(est) => {
                *out = est.beta_hat;
                LwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// l_p distance between the images of two C_2 wr C_n elements under a cycle
/// embedding: `which` is 1 (first l_1), 2 (second l_1) or 3 (l_2 family
/// with parameter s).
///
/// # Safety
/// All handles live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lw_cycle_embedding_distance(
    g: *const LwGroup,
    which: u32,
    s: f64,
    a: *const LwElement,
    b: *const LwElement,
    out: *mut f64,
) -> LwStatus {
    guarded(|| {
        if g.is_null() || a.is_null() || b.is_null() || out.is_null() {
            set_error("null pointer".into());
            return LwStatus::NullPointer;
        }
        let emb = match which {
            1 => CycleEmbedding::First,
            2 => CycleEmbedding::Second,
            3 => CycleEmbedding::L2 { s },
            _ => {
                set_error(format!("unknown embedding id {which}; use 1, 2, or 3"));
                return LwStatus::ParseError;
            }
        };
        let spec = &(*g).spec;
        let va = match emb.eval_element(spec, &(*a).element) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let vb = match emb.eval_element(spec, &(*b).element) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        *out = va.dist_p(&vb, emb.p());
        LwStatus::Ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn group_element_round_trip() {
        unsafe {
            let mut g: *mut LwGroup = ptr::null_mut();
            assert_eq!(lw_group_new(cstr("zwrz").as_ptr(), &mut g), LwStatus::Ok);
            let mut e: *mut LwElement = ptr::null_mut();
            assert_eq!(
                lw_element_parse(g, cstr("wreath{2:3|cursor=0}").as_ptr(), &mut e),
                LwStatus::Ok
            );
            let printed = lw_element_print(e);
            assert_eq!(
                CStr::from_ptr(printed).to_str().unwrap(),
                "wreath{2:3|cursor=0}"
            );
            lw_string_free(printed);

            let mut id: *mut LwElement = ptr::null_mut();
            assert_eq!(lw_element_identity(g, &mut id), LwStatus::Ok);
            let mut d = 0u64;
            assert_eq!(lw_wreath_distance_exact(g, e, id, &mut d), LwStatus::Ok);
            assert_eq!(d, 7);

            let mut inv: *mut LwElement = ptr::null_mut();
            assert_eq!(lw_inverse(g, e, &mut inv), LwStatus::Ok);
            let mut prod: *mut LwElement = ptr::null_mut();
            assert_eq!(lw_multiply(g, e, inv, &mut prod), LwStatus::Ok);
            assert_eq!(lw_element_equal(prod, id), 1);

            lw_element_free(prod);
            lw_element_free(inv);
            lw_element_free(id);
            lw_element_free(e);
            lw_group_free(g);
        }
    }

    #[test]
    fn errors_set_messages_and_codes() {
        unsafe {
            let mut g: *mut LwGroup = ptr::null_mut();
            assert_eq!(
                lw_group_new(cstr("not-a-group").as_ptr(), &mut g),
                LwStatus::ParseError
            );
            let msg = lw_last_error_message();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap().to_string();
            assert!(text.contains("unknown group"), "{text}");
            lw_string_free(msg);

            assert_eq!(lw_group_new(cstr("z").as_ptr(), &mut g), LwStatus::Ok);
            let mut e: *mut LwElement = ptr::null_mut();
            assert_eq!(
                lw_element_parse(g, cstr("c:1").as_ptr(), &mut e),
                LwStatus::ParseError
            );
            assert_eq!(
                lw_element_parse(ptr::null(), cstr("z:1").as_ptr(), &mut e),
                LwStatus::NullPointer
            );
            lw_group_free(g);
        }
    }

    #[test]
    fn compose_alpha_matches_library() {
        unsafe {
            let mut v = 0.0f64;
            assert_eq!(lw_compose_alpha(1.0, 1.0, 2.0, &mut v), LwStatus::Ok);
            assert!((v - 2.0 / 3.0).abs() < 1e-15);
            assert_eq!(lw_compose_alpha(2.0, 1.0, 2.0, &mut v), LwStatus::ParseError);
        }
    }

    #[test]
    fn walk_speed_runs_through_the_abi() {
        unsafe {
            let mut g: *mut LwGroup = ptr::null_mut();
            assert_eq!(lw_group_new(cstr("z").as_ptr(), &mut g), LwStatus::Ok);
            let mut beta = 0.0f64;
            assert_eq!(lw_walk_speed(g, 1 << 10, 200, 42, &mut beta), LwStatus::Ok);
            assert!(beta > 0.3 && beta < 0.7, "{beta}");
            lw_group_free(g);
        }
    }

    #[test]
    fn cycle_embedding_distance_through_the_abi() {
        unsafe {
            let mut g: *mut LwGroup = ptr::null_mut();
            assert_eq!(lw_group_new(cstr("c2wrcn:6").as_ptr(), &mut g), LwStatus::Ok);
            let mut e: *mut LwElement = ptr::null_mut();
            assert_eq!(
                lw_element_parse(g, cstr("wreath{|cursor=1}").as_ptr(), &mut e),
                LwStatus::Ok
            );
            let mut id: *mut LwElement = ptr::null_mut();
            assert_eq!(lw_element_identity(g, &mut id), LwStatus::Ok);
            let mut d = 0.0f64;
            assert_eq!(
                lw_cycle_embedding_distance(g, 1, 0.0, e, id, &mut d),
                LwStatus::Ok
            );
            // ||f(0,1) - f(0,0)||_1 = 2(n-1)/n at n=6
            assert!((d - 10.0 / 6.0).abs() < 1e-9, "{d}");
            assert_eq!(
                lw_cycle_embedding_distance(g, 9, 0.0, e, id, &mut d),
                LwStatus::ParseError
            );
            lw_element_free(id);
            lw_element_free(e);
            lw_group_free(g);
        }
    }
}
