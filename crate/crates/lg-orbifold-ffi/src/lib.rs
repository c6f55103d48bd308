//! C ABI over lg-orbifold. Objects cross the boundary as opaque handles;
//! every fallible call returns an `LgoStatus` and leaves a message for
//! `lgo_last_error`. Strings returned to C are freed with `lgo_string_free`.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lg_orbifold::ainfty_formal::{verify_ainfty, Grading};
use lg_orbifold::exact_algebra::rational::{fmt_rational, parse_rational};
use lg_orbifold::exact_algebra::{Polynomial, WeightSystem};
use lg_orbifold::lg_core::{bh_transpose, max_symmetry_group, weight_system};
use lg_orbifold::mf_restrict::{check_mf, MatrixFactorization, MfFile};
use lg_orbifold::popsicle_moduli::admissible_cuts;
use lg_orbifold::reeb_sectors::{invariants, principal_orbit, LgContext};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LgoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    MathError = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A weighted homogeneous polynomial with its weight system.
pub struct LgoPolynomial {
    poly: Polynomial,
    weights: Option<WeightSystem>,
}

pub struct LgoMatrixFactorization(MatrixFactorization);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: LgoStatus, msg: impl Into<String>) -> LgoStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> LgoStatus) -> LgoStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(LgoStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LgoStatus> {
    if p.is_null() {
        return Err(fail(LgoStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(LgoStatus::InvalidUtf8, "string is not UTF-8"))
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> LgoStatus {
    if out.is_null() {
        return fail(LgoStatus::NullPointer, "null output pointer");
    }
    *out = to_c(s);
    LgoStatus::Ok
}

/// Message of the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lgo_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lgo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse W, e.g. "x^3*y + y^2". The weight system is computed eagerly but
/// a polynomial without one is still accepted.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_polynomial_parse(text: *const c_char, out: *mut *mut LgoPolynomial) -> LgoStatus {
    guard(|| {
        if out.is_null() {
            return fail(LgoStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Polynomial::parse(text) {
            Ok(poly) => {
                let weights = weight_system(&poly).ok();
                *out = Box::into_raw(Box::new(LgoPolynomial { poly, weights }));
                LgoStatus::Ok
            }
            Err(e) => fail(LgoStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `p` must be NULL or a handle from `lgo_polynomial_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lgo_polynomial_free(p: *mut LgoPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn lgo_polynomial_nvars(p: *const LgoPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.poly.nvars())
}

/// Reduced weights into `w[0..len]` and the degree into `h`.
///
/// # Safety
/// `p` must be a live handle, `w` must point to `len` writable `u64`s and
/// `h` to one.
#[no_mangle]
pub unsafe extern "C" fn lgo_weights(p: *const LgoPolynomial, w: *mut u64, len: usize, h: *mut u64) -> LgoStatus {
    guard(|| {
        let Some(p) = p.as_ref() else { return fail(LgoStatus::NullPointer, "null handle") };
        if w.is_null() || h.is_null() {
            return fail(LgoStatus::NullPointer, "null output pointer");
        }
        let Some(ws) = &p.weights else { return fail(LgoStatus::MathError, "polynomial is not weighted homogeneous") };
        if len < ws.w.len() {
            return fail(LgoStatus::BufferTooSmall, format!("need room for {} weights", ws.w.len()));
        }
        let conv = |x: &dyn std::fmt::Display| x.to_string().parse::<u64>().ok();
        let (Some(vals), Some(hh)) = (ws.w.iter().map(|x| conv(x)).collect::<Option<Vec<_>>>(), conv(&ws.h)) else {
            return fail(LgoStatus::MathError, "weights exceed 64 bits");
        };
        std::slice::from_raw_parts_mut(w, vals.len()).copy_from_slice(&vals);
        *h = hh;
        LgoStatus::Ok
    })
}

/// |G_W| as a decimal string.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_symmetry_order(p: *const LgoPolynomial, out: *mut *mut c_char) -> LgoStatus {
    guard(|| {
        let Some(p) = p.as_ref() else { return fail(LgoStatus::NullPointer, "null handle") };
        match max_symmetry_group(&p.poly) {
            Ok(g) => write_string(out, g.order.to_string()),
            Err(e) => fail(LgoStatus::MathError, e.to_string()),
        }
    })
}

/// The Berglund-Hübsch transpose W^T as text.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_transpose(p: *const LgoPolynomial, out: *mut *mut c_char) -> LgoStatus {
    guard(|| {
        let Some(p) = p.as_ref() else { return fail(LgoStatus::NullPointer, "null handle") };
        match bh_transpose(&p.poly) {
            Ok(t) => write_string(out, t.to_string()),
            Err(e) => fail(LgoStatus::MathError, e.to_string()),
        }
    })
}

/// μ_RS of the principal orbit as "p/q".
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_principal_mu(p: *const LgoPolynomial, out: *mut *mut c_char) -> LgoStatus {
    guard(|| {
        let Some(p) = p.as_ref() else { return fail(LgoStatus::NullPointer, "null handle") };
        let mu = LgContext::new(p.poly.clone())
            .and_then(|ctx| principal_orbit(&ctx).and_then(|s| invariants(&s, &ctx.ws)))
            .map(|inv| fmt_rational(&inv.mu_rs));
        match mu {
            Ok(m) => write_string(out, m),
            Err(e) => fail(LgoStatus::MathError, e.to_string()),
        }
    })
}

/// Number of admissible cuts for F ⊆ {1..n}, with F given as `len` 1-based indices.
///
/// # Safety
/// `f` must point to `len` readable `usize`s (or be NULL with `len == 0`),
/// and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lgo_cut_count(n: usize, f: *const usize, len: usize, out: *mut usize) -> LgoStatus {
    guard(|| {
        if out.is_null() || (f.is_null() && len > 0) {
            return fail(LgoStatus::NullPointer, "null pointer");
        }
        let set: BTreeSet<usize> =
            if len == 0 { BTreeSet::new() } else { std::slice::from_raw_parts(f, len).iter().copied().collect() };
        if set.len() != len || set.iter().any(|&k| k == 0 || k > n) {
            return fail(LgoStatus::InvalidInput, format!("F must be distinct indices in 1..={n}"));
        }
        *out = admissible_cuts(n, &set).len();
        LgoStatus::Ok
    })
}

/// Run the A∞ verifier and return its report as JSON. `deg_gamma` is a
/// rational like "0" or "7/3"; `gamma_parity` is used only when it is
/// not an integer.
///
/// # Safety
/// `eps` must point to `len` readable `usize`s (or be NULL with `len == 0`),
/// `deg_gamma` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lgo_verify_ainfty(
    n: usize,
    eps: *const usize,
    len: usize,
    deg_gamma: *const c_char,
    gamma_parity: u8,
    passes: *mut bool,
    out: *mut *mut c_char,
) -> LgoStatus {
    guard(|| {
        if passes.is_null() || (eps.is_null() && len > 0) {
            return fail(LgoStatus::NullPointer, "null pointer");
        }
        let d = match read_str(deg_gamma) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Ok(q) = parse_rational(d) else { return fail(LgoStatus::InvalidInput, format!("bad rational {d:?}")) };
        let gamma = match Grading::integral(q.clone()).map_or_else(|| Grading::new(q, gamma_parity), Ok) {
            Ok(g) => g,
            Err(e) => return fail(LgoStatus::InvalidInput, e.to_string()),
        };
        let slots: BTreeSet<usize> =
            if len == 0 { BTreeSet::new() } else { std::slice::from_raw_parts(eps, len).iter().copied().collect() };
        match verify_ainfty(n, &slots, &gamma, None) {
            Ok(r) => {
                *passes = r.passes;
                write_string(out, serde_json::to_string(&r).expect("serializable"))
            }
            Err(e) => fail(LgoStatus::InvalidInput, e.to_string()),
        }
    })
}

/// Parse a factorization from JSON `{"potential": .., "A": [[..]], "B": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_mf_from_json(json: *const c_char, out: *mut *mut LgoMatrixFactorization) -> LgoStatus {
    guard(|| {
        if out.is_null() {
            return fail(LgoStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file: MfFile = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => return fail(LgoStatus::InvalidInput, e.to_string()),
        };
        match MatrixFactorization::from_file(&file) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(LgoMatrixFactorization(m)));
                LgoStatus::Ok
            }
            Err(e) => fail(LgoStatus::InvalidInput, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be NULL or a handle from `lgo_mf_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lgo_mf_free(m: *mut LgoMatrixFactorization) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lgo_mf_rank(m: *const LgoMatrixFactorization) -> usize {
    m.as_ref().map_or(0, |m| m.0.rank())
}

/// Whether A·B = B·A = W·Id.
///
/// # Safety
/// `m` must be a live handle and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lgo_mf_check(m: *const LgoMatrixFactorization, valid: *mut bool) -> LgoStatus {
    guard(|| {
        let Some(m) = m.as_ref() else { return fail(LgoStatus::NullPointer, "null handle") };
        if valid.is_null() {
            return fail(LgoStatus::NullPointer, "null output pointer");
        }
        match check_mf(&m.0) {
            Ok(v) => {
                *valid = v;
                LgoStatus::Ok
            }
            Err(e) => fail(LgoStatus::MathError, e.to_string()),
        }
    })
}
