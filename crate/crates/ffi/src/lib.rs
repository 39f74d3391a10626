//! C interface to fcart.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns an
//! `FcartStatus`; on failure `fcart_last_error_message` describes the error
//! on the calling thread. Strings returned through out-parameters are
//! released with `fcart_string_free`, member arrays with `fcart_u64_array_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fcart::algebra::{parse_polynomial, Ideal, Polynomial, Ring, RingConfig};
use fcart::cartier::CartierStructure;
use fcart::invariants::nu_set;
use fcart::job::{run_job, JobSpec};
use fcart::padic::{lucas_binomial, PadicRational};
use fcart::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcartStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    InvalidRing = 4,
    InvalidArgument = 5,
    RingMismatch = 6,
    ResourceCap = 7,
    NotCartierSubmodule = 8,
    NotFPure = 9,
    ZeroInput = 10,
    DenominatorNotInvertible = 11,
    InternalMismatch = 12,
    UnsupportedRegime = 13,
    /// The job ran but its own consistency check failed; the report is still written.
    CheckFailed = 14,
    Panic = 15,
}

/// A polynomial ring F_p[x_1, ..., x_n].
pub struct FcartRing {
    inner: Ring,
}

/// A polynomial in some ring.
pub struct FcartPoly {
    inner: Polynomial,
}

/// A Cartier structure: the operator C(h) = C_std(g h) with q = p^e.
pub struct FcartCartier {
    inner: CartierStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> FcartStatus {
    match e {
        Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::NegativeExponent { .. } => FcartStatus::Syntax,
        Error::InvalidRing(_) | Error::InvalidQ { .. } => FcartStatus::InvalidRing,
        Error::RingMismatch => FcartStatus::RingMismatch,
        _ if e.is_resource_cap() => FcartStatus::ResourceCap,
        Error::NotCartierSubmodule => FcartStatus::NotCartierSubmodule,
        Error::NotFPure => FcartStatus::NotFPure,
        Error::ZeroDivisorInput(_) => FcartStatus::ZeroInput,
        Error::DenominatorNotInvertible { .. } => FcartStatus::DenominatorNotInvertible,
        Error::InternalMismatch(_) => FcartStatus::InternalMismatch,
        Error::UnsupportedRegime(_) => FcartStatus::UnsupportedRegime,
        _ => FcartStatus::InvalidArgument,
    }
}

struct Failure(FcartStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FcartStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<FcartStatus, Failure>) -> FcartStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside fcart");
            FcartStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(FcartStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fcart_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Creates the ring F_p[vars] from comma-separated variable names such as "x,y".
///
/// # Safety
/// `vars` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fcart_ring_new(p: u64, vars: *const c_char, out: *mut *mut FcartRing) -> FcartStatus {
    guard(|| {
        let names: Vec<&str> = text(vars, "vars")?.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        let ring = RingConfig::new(p, &names)?;
        write_out(out, Box::into_raw(Box::new(FcartRing { inner: ring })), "out")?;
        Ok(FcartStatus::Ok)
    })
}

/// # Safety
/// `ring` must come from `fcart_ring_new` and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fcart_ring_free(ring: *mut FcartRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Parses a polynomial such as "x^2+y^3" in `ring`.
///
/// # Safety
/// `ring` must be a live handle, `source` nul-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fcart_poly_parse(
    ring: *const FcartRing,
    source: *const c_char,
    out: *mut *mut FcartPoly,
) -> FcartStatus {
    guard(|| {
        let ring = handle(ring, "ring")?;
        let poly = parse_polynomial(text(source, "source")?, &ring.inner)?;
        write_out(out, Box::into_raw(Box::new(FcartPoly { inner: poly })), "out")?;
        Ok(FcartStatus::Ok)
    })
}

/// Canonical text of a polynomial; release with `fcart_string_free`.
///
/// # Safety
/// `poly` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fcart_poly_to_string(poly: *const FcartPoly, out: *mut *mut c_char) -> FcartStatus {
    guard(|| {
        let poly = handle(poly, "poly")?;
        write_out(out, to_c_string(poly.inner.to_string()), "out")?;
        Ok(FcartStatus::Ok)
    })
}

/// # Safety
/// `poly` must come from `fcart_poly_parse` and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fcart_poly_free(poly: *mut FcartPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// Cartier structure with q = p^e and twist g; a null `twist` means g = 1.
///
/// # Safety
/// `ring` must be live, `twist` null or live in the same ring, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fcart_cartier_new(
    ring: *const FcartRing,
    e: u32,
    twist: *const FcartPoly,
    out: *mut *mut FcartCartier,
) -> FcartStatus {
    guard(|| {
        let ring = handle(ring, "ring")?;
        let structure = match twist.as_ref() {
            None => CartierStructure::standard(&ring.inner, e)?,
            Some(g) => {
                if **g.inner.ring() != *ring.inner {
                    return Err(Error::RingMismatch.into());
                }
                CartierStructure::new(e, g.inner.clone())?
            }
        };
        write_out(out, Box::into_raw(Box::new(FcartCartier { inner: structure })), "out")?;
        Ok(FcartStatus::Ok)
    })
}

/// # Safety
/// `cartier` must come from `fcart_cartier_new` and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fcart_cartier_free(cartier: *mut FcartCartier) {
    if !cartier.is_null() {
        drop(Box::from_raw(cartier));
    }
}

/// ν(q^m) ∩ [0, q^m) for the module generated by `module[0..module_len]`
/// (the unit ideal when `module_len` is 0). The members are written to a new
/// array released with `fcart_u64_array_free`.
///
/// # Safety
/// All handles must be live and `module` must point to `module_len` handles.
#[no_mangle]
pub unsafe extern "C" fn fcart_nu_set(
    cartier: *const FcartCartier,
    module: *const *const FcartPoly,
    module_len: usize,
    f: *const FcartPoly,
    level: u32,
    out_members: *mut *mut u64,
    out_len: *mut usize,
) -> FcartStatus {
    guard(|| {
        let s = &handle(cartier, "cartier")?.inner;
        let f = &handle(f, "f")?.inner;
        let ideal = if module_len == 0 {
            Ideal::unit(s.ring())
        } else {
            if module.is_null() {
                return Err(null("module"));
            }
            let gens = std::slice::from_raw_parts(module, module_len)
                .iter()
                .map(|&g| handle(g, "module generator").map(|g| g.inner.clone()))
                .collect::<Result<Vec<_>, _>>()?;
            Ideal::new(s.ring(), gens)?
        };
        let set = nu_set(s, &ideal, f, level)?;
        if out_members.is_null() || out_len.is_null() {
            return Err(null("out"));
        }
        let members = set.members.into_boxed_slice();
        out_len.write(members.len());
        out_members.write(Box::into_raw(members) as *mut u64);
        Ok(FcartStatus::Ok)
    })
}

/// # Safety
/// `members` and `len` must come from one `fcart_nu_set` call; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fcart_u64_array_free(members: *mut u64, len: usize) {
    if !members.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(members, len)));
    }
}

/// binom(num/den, n) mod p for the p-adic integer num/den.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fcart_lucas_binomial(num: i64, den: i64, p: u32, n: u64, out: *mut u32) -> FcartStatus {
    guard(|| {
        let alpha = PadicRational::new(num as i128, den as i128, p)?;
        write_out(out, lucas_binomial(&alpha, n).value(), "out")?;
        Ok(FcartStatus::Ok)
    })
}

/// Runs a JSON job and writes the JSON report. Returns
/// `FCART_STATUS_CHECK_FAILED` with the report written when the job's own
/// consistency check fails.
///
/// # Safety
/// `job` must be nul-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn fcart_run_json(job: *const c_char, out: *mut *mut c_char) -> FcartStatus {
    guard(|| {
        let spec: JobSpec = serde_json::from_str(text(job, "job")?)
            .map_err(|e| Failure(FcartStatus::InvalidArgument, format!("bad job: {e}")))?;
        let output = run_job(&spec)?;
        let report = serde_json::to_string(&output.report).expect("values serialize");
        write_out(out, to_c_string(report), "out")?;
        if output.ok {
            Ok(FcartStatus::Ok)
        } else {
            set_error("the job's consistency check failed");
            Ok(FcartStatus::CheckFailed)
        }
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fcart_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
