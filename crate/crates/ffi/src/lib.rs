//! C ABI over the ririg workbench.
//!
//! Algebras and catalogs are opaque heap handles released with their `_free`
//! functions. Every fallible call returns a [`RirigStatus`]; on failure the
//! message is available from [`ririg_last_error`] until the next call on the
//! same thread. Results are written through out-pointers only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ririg::catalog::{catalog_build, Catalog};
use ririg::congruence::{cep_check, SUBUNIVERSE_CAP};
use ririg::enumerate::Constraints;
use ririg::filters::{all_ifilters, generate_filter_of, is_ifilter};
use ririg::irreducible::{is_simple, is_subdirectly_irreducible};
use ririg::logic::{check_proof, Proof};
use ririg::varieties::{in_rc, is_chain};
use ririg::{Error, FiniteIModalRirig, SubsetMask};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RirigStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or proof text.
    Parse = 3,
    /// Well-formed input with bad shapes, labels or entries.
    Input = 4,
    /// Tables violate the ririg or modal axioms.
    Axioms = 5,
    /// A size or search cap was exceeded.
    SizeCap = 6,
    /// The operation is undefined on the one-element algebra.
    Trivial = 7,
    /// An element or index argument is out of range.
    OutOfRange = 8,
    /// A proof failed to check; see the out-parameter for the line.
    ProofRejected = 9,
    Io = 10,
    /// A Rust panic was caught at the boundary.
    Internal = 11,
}

/// A validated finite I-modal ririg.
pub struct RirigAlgebra(FiniteIModalRirig);

/// A catalog of algebras up to isomorphism.
pub struct RirigCatalog(Catalog);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RirigStatus {
    match e {
        Error::Parse { .. } => RirigStatus::Parse,
        Error::AxiomsViolated(_) | Error::NotResiduated { .. } => RirigStatus::Axioms,
        Error::SizeCap { .. } | Error::UnsupportedSize(_) => RirigStatus::SizeCap,
        Error::TrivialAlgebra => RirigStatus::Trivial,
        Error::Io(_) => RirigStatus::Io,
        _ => RirigStatus::Input,
    }
}

struct Fail(RirigStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RirigStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RirigStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error: panic caught at the C boundary".into());
            RirigStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(RirigStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(RirigStatus::NullPointer, format!("{what} is null")))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(RirigStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(RirigStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn elem(a: &FiniteIModalRirig, x: usize) -> Result<usize, Fail> {
    if x < a.size() {
        Ok(x)
    } else {
        Err(Fail(
            RirigStatus::OutOfRange,
            format!("element {x} outside a universe of size {}", a.size()),
        ))
    }
}

/// The message of the last failed call on this thread, or null. The
/// pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn ririg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses and validates an algebra in the JSON file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_algebra_from_json(json: *const c_char, out_alg: *mut *mut RirigAlgebra) -> RirigStatus {
    guard(|| {
        let text = string(json, "json")?;
        let slot = out(out_alg, "out")?;
        let a = ririg::io::parse_algebra(text)?;
        *slot = Box::into_raw(Box::new(RirigAlgebra(a)));
        Ok(())
    })
}

/// Serializes an algebra; free the result with [`ririg_string_free`].
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_algebra_to_json(alg: *const RirigAlgebra, out_str: *mut *mut c_char) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_str, "out")?;
        let text = ririg::io::algebra_to_json(a);
        *slot = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `alg` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ririg_algebra_free(alg: *mut RirigAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ririg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_algebra_size(alg: *const RirigAlgebra, out_size: *mut usize) -> RirigStatus {
    guard(|| {
        *out(out_size, "out")? = deref(alg, "algebra")?.0.size();
        Ok(())
    })
}

/// Number of modal symbols.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_algebra_modal_count(alg: *const RirigAlgebra, out_k: *mut usize) -> RirigStatus {
    guard(|| {
        *out(out_k, "out")? = deref(alg, "algebra")?.0.k();
        Ok(())
    })
}

/// The I-filter generated by `elems[0..len]`, as a bit mask over element
/// indices.
///
/// # Safety
/// `alg` must be a live handle; `elems` must point to `len` readable values
/// (or be null with `len == 0`); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_generate_filter(
    alg: *const RirigAlgebra,
    elems: *const usize,
    len: usize,
    out_mask: *mut u64,
) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_mask, "out")?;
        let xs: &[usize] = if len == 0 {
            &[]
        } else {
            if elems.is_null() {
                return Err(Fail(RirigStatus::NullPointer, "elems is null".into()));
            }
            std::slice::from_raw_parts(elems, len)
        };
        let xs = xs.iter().map(|&x| elem(a, x)).collect::<Result<Vec<_>, _>>()?;
        *slot = generate_filter_of(a, xs).mask().bits();
        Ok(())
    })
}

/// Whether the subset given by `mask` is an I-filter.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_is_ifilter(alg: *const RirigAlgebra, mask: u64, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_flag, "out")?;
        let n = a.size();
        if n < 64 && mask >> n != 0 {
            return Err(Fail(RirigStatus::OutOfRange, format!("mask {mask:#x} has bits beyond size {n}")));
        }
        *slot = is_ifilter(a, SubsetMask::from_bits(n, mask));
        Ok(())
    })
}

/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_count_ifilters(alg: *const RirigAlgebra, out_count: *mut usize) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        *out(out_count, "out")? = all_ifilters(a).len();
        Ok(())
    })
}

/// Fails with `Trivial` on the one-element algebra.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_is_simple(alg: *const RirigAlgebra, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_flag, "out")?;
        *slot = is_simple(a)?.simple;
        Ok(())
    })
}

/// Fails with `Trivial` on the one-element algebra.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_is_si(alg: *const RirigAlgebra, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_flag, "out")?;
        *slot = is_subdirectly_irreducible(a)?.si;
        Ok(())
    })
}

/// `λ(x) = x · m₁(x) ⋯ m_k(x)`.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_lambda(alg: *const RirigAlgebra, x: usize, out_elem: *mut usize) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_elem, "out")?;
        *slot = a.lambda(elem(a, x)?);
        Ok(())
    })
}

/// Contractive, prelinear and (Cm).
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_in_rc(alg: *const RirigAlgebra, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        *out(out_flag, "out")? = in_rc(&deref(alg, "algebra")?.0);
        Ok(())
    })
}

/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_is_chain(alg: *const RirigAlgebra, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        *out(out_flag, "out")? = is_chain(&deref(alg, "algebra")?.0);
        Ok(())
    })
}

/// Whether every congruence of every subalgebra extends.
///
/// # Safety
/// `alg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_cep(alg: *const RirigAlgebra, out_flag: *mut bool) -> RirigStatus {
    guard(|| {
        let a = &deref(alg, "algebra")?.0;
        let slot = out(out_flag, "out")?;
        *slot = cep_check(a, SUBUNIVERSE_CAP)?.is_none();
        Ok(())
    })
}

/// All algebras of size up to `max_size` with up to `modals` modal symbols,
/// up to isomorphism.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_build(max_size: usize, modals: usize, out_cat: *mut *mut RirigCatalog) -> RirigStatus {
    guard(|| {
        let slot = out(out_cat, "out")?;
        let c = catalog_build(max_size, modals, Constraints::none())?;
        *slot = Box::into_raw(Box::new(RirigCatalog(c)));
        Ok(())
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_load(path: *const c_char, out_cat: *mut *mut RirigCatalog) -> RirigStatus {
    guard(|| {
        let p = string(path, "path")?;
        let slot = out(out_cat, "out")?;
        let c = Catalog::load(std::path::Path::new(p))?;
        *slot = Box::into_raw(Box::new(RirigCatalog(c)));
        Ok(())
    })
}

/// # Safety
/// `cat` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_save(cat: *const RirigCatalog, path: *const c_char) -> RirigStatus {
    guard(|| {
        let c = &deref(cat, "catalog")?.0;
        let p = string(path, "path")?;
        c.save(std::path::Path::new(p))?;
        Ok(())
    })
}

/// # Safety
/// `cat` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_len(cat: *const RirigCatalog, out_len: *mut usize) -> RirigStatus {
    guard(|| {
        *out(out_len, "out")? = deref(cat, "catalog")?.0.len();
        Ok(())
    })
}

/// A copy of entry `index`, owned by the caller.
///
/// # Safety
/// `cat` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_get(cat: *const RirigCatalog, index: usize, out_alg: *mut *mut RirigAlgebra) -> RirigStatus {
    guard(|| {
        let c = &deref(cat, "catalog")?.0;
        let slot = out(out_alg, "out")?;
        let e = c.entries.get(index).ok_or_else(|| {
            Fail(RirigStatus::OutOfRange, format!("index {index} outside a catalog of {}", c.len()))
        })?;
        *slot = Box::into_raw(Box::new(RirigAlgebra(e.algebra.clone())));
        Ok(())
    })
}

/// # Safety
/// `cat` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ririg_catalog_free(cat: *mut RirigCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Checks a proof in the text format against its own `assume:` lines.
/// Returns `ProofRejected` with the failing line number (0 for an empty
/// proof) in `bad_line`, which may be null.
///
/// # Safety
/// `text` must be a NUL-terminated string; `bad_line` null or writable.
#[no_mangle]
pub unsafe extern "C" fn ririg_check_proof(text: *const c_char, bad_line: *mut usize) -> RirigStatus {
    guard(|| {
        let t = string(text, "text")?;
        let proof = Proof::parse(t)?;
        check_proof(&proof.hypotheses, &proof).map_err(|e| {
            if let Some(slot) = bad_line.as_mut() {
                *slot = e.line;
            }
            Fail(RirigStatus::ProofRejected, e.to_string())
        })
    })
}
