//! C ABI for `hnstrata`.
//!
//! Objects cross the boundary as opaque handles created by `*_from_json` and
//! released by the matching `*_free`. Every fallible call returns an
//! [`HnsStatus`]; on failure, [`hns_last_error_kind`] and
//! [`hns_last_error_message`] describe the error for the calling thread.
//! Strings returned through out-parameters are owned by the caller and must be
//! released with [`hns_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hnstrata::family::{
    check_semicontinuity, recursive_stratify, stratification_report, FamilyError, FamilySpec,
    SheafFamily,
};
use hnstrata::hntype::{validate_hn_type, HnType, HnTypeError, TypeRelation};
use hnstrata::lattice::{
    hn_filtration, hn_type, is_semistable, validate_lattice, LatticeError, LatticeInput,
    SubobjectLattice,
};
use hnstrata::numpoly::{NumPoly, RatPoly};
use serde_json::json;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnsStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    MalformedJson = 3,
    InvalidType = 4,
    InvalidLattice = 5,
    InvalidFamily = 6,
    NotSemicontinuous = 7,
    Panic = 8,
}

/// Outcome of comparing two types in the polygon order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HnsRelation {
    Eq = 0,
    Leq = 1,
    Geq = 2,
    Incomparable = 3,
}

impl From<TypeRelation> for HnsRelation {
    fn from(r: TypeRelation) -> Self {
        match r {
            TypeRelation::Eq => HnsRelation::Eq,
            TypeRelation::Leq => HnsRelation::Leq,
            TypeRelation::Geq => HnsRelation::Geq,
            TypeRelation::Incomparable => HnsRelation::Incomparable,
        }
    }
}

/// A validated HN type.
pub struct HnsType(HnType);

/// A validated subobject lattice.
pub struct HnsLattice(SubobjectLattice);

/// A validated family over a finite space.
pub struct HnsFamily(SheafFamily);

struct Error {
    status: HnsStatus,
    kind: String,
    message: String,
}

impl Error {
    fn new(status: HnsStatus, kind: &str, message: impl Into<String>) -> Self {
        Error {
            status,
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        Error::new(
            HnsStatus::NullArgument,
            "NullArgument",
            format!("{what} is null"),
        )
    }
}

impl From<HnTypeError> for Error {
    fn from(e: HnTypeError) -> Self {
        Error::new(HnsStatus::InvalidType, e.code(), e.to_string())
    }
}

impl From<LatticeError> for Error {
    fn from(e: LatticeError) -> Self {
        Error::new(HnsStatus::InvalidLattice, e.code(), e.to_string())
    }
}

impl From<FamilyError> for Error {
    fn from(e: FamilyError) -> Self {
        let status = match e {
            FamilyError::SemicontinuityRequired(_) => HnsStatus::NotSemicontinuous,
            _ => HnsStatus::InvalidFamily,
        };
        Error::new(status, e.code(), e.to_string())
    }
}

struct LastError {
    kind: CString,
    message: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn c_string(s: String) -> CString {
    CString::new(s).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|&b| b != 0);
        CString::new(bytes).expect("interior nuls removed")
    })
}

fn set_last_error(e: Option<Error>) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = e.map(|e| LastError {
            kind: c_string(e.kind),
            message: c_string(e.message),
        });
    });
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> HnsStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_string());
        Err(Error::new(HnsStatus::Panic, "Panic", message))
    });
    match result {
        Ok(()) => {
            set_last_error(None);
            HnsStatus::Ok
        }
        Err(e) => {
            let status = e.status;
            set_last_error(Some(e));
            status
        }
    }
}

unsafe fn input<'a>(p: *const c_char, what: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        Error::new(
            HnsStatus::InvalidUtf8,
            "InvalidUtf8",
            format!("{what}: {e}"),
        )
    })
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    p.as_ref().ok_or_else(|| Error::null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Error> {
    if out.is_null() {
        return Err(Error::null(what));
    }
    out.write(value);
    Ok(())
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Error> {
    serde_json::from_str(text)
        .map_err(|e| Error::new(HnsStatus::MalformedJson, "MalformedInput", e.to_string()))
}

unsafe fn put_json(out: *mut *mut c_char, value: &serde_json::Value) -> Result<(), Error> {
    put(out, c_string(value.to_string()).into_raw(), "out")
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Error kind of the last failed call on this thread (for example
/// `"Condition3Violation"`), or null if the last call succeeded. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn hns_last_error_kind() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |e| e.kind.as_ptr())
    })
}

/// Human-readable message of the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn hns_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |e| e.message.as_ptr())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a type given as a JSON array of polynomials, each an
/// array of coefficient strings in increasing degree.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_type_from_json(
    json: *const c_char,
    out: *mut *mut HnsType,
) -> HnsStatus {
    guard(|| {
        let raw: Vec<RatPoly> = parse(input(json, "json")?)?;
        let polys = raw
            .into_iter()
            .map(|p| {
                NumPoly::new(p)
                    .map_err(|e| Error::new(HnsStatus::InvalidType, "NotNumerical", e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ty = validate_hn_type(polys)?;
        put(out, boxed(HnsType(ty)), "out")
    })
}

/// # Safety
/// `ty` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hns_type_free(ty: *mut HnsType) {
    free(ty)
}

/// Length of the type, or 0 for a null handle.
///
/// # Safety
/// `ty` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hns_type_len(ty: *const HnsType) -> usize {
    ty.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `ty` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_type_to_json(ty: *const HnsType, out: *mut *mut c_char) -> HnsStatus {
    guard(|| put_json(out, &json!(handle(ty, "ty")?.0)))
}

/// The quotient shift `(f_2 - f_1, ..., f_p - f_1)`.
///
/// # Safety
/// `ty` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_type_shift(ty: *const HnsType, out: *mut *mut HnsType) -> HnsStatus {
    guard(|| {
        let shifted = handle(ty, "ty")?.0.quotient_shift()?;
        put(out, boxed(HnsType(shifted)), "out")
    })
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_type_compare(
    a: *const HnsType,
    b: *const HnsType,
    out: *mut HnsRelation,
) -> HnsStatus {
    guard(|| {
        let relation = handle(a, "a")?.0.relation(&handle(b, "b")?.0);
        put(out, relation.into(), "out")
    })
}

/// Parses a lattice (`{"nodes", "leq", "P"}`) or a splitting type
/// (`{"degrees"}`) and checks every lattice invariant.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_from_json(
    json: *const c_char,
    out: *mut *mut HnsLattice,
) -> HnsStatus {
    guard(|| {
        let spec: LatticeInput = parse(input(json, "json")?)?;
        let lattice = spec.build()?;
        validate_lattice(&lattice)?;
        put(out, boxed(HnsLattice(lattice)), "out")
    })
}

/// # Safety
/// `lattice` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_free(lattice: *mut HnsLattice) {
    free(lattice)
}

/// Number of nodes, or 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_len(lattice: *const HnsLattice) -> usize {
    lattice.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_is_semistable(
    lattice: *const HnsLattice,
    out: *mut bool,
) -> HnsStatus {
    guard(|| put(out, is_semistable(&handle(lattice, "lattice")?.0)?, "out"))
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_hn_type(
    lattice: *const HnsLattice,
    out: *mut *mut HnsType,
) -> HnsStatus {
    guard(|| {
        let ty = hn_type(&handle(lattice, "lattice")?.0)?;
        put(out, boxed(HnsType(ty)), "out")
    })
}

/// The filtration as JSON: `{"steps": [node ids], "graded": [polys]}`.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_lattice_hn_filtration_json(
    lattice: *const HnsLattice,
    out: *mut *mut c_char,
) -> HnsStatus {
    guard(|| put_json(out, &json!(hn_filtration(&handle(lattice, "lattice")?.0)?)))
}

/// Parses a family `{"points", "specializes", "fibers"}` and checks fibers,
/// dimension and constancy of the Hilbert polynomial on connected pieces.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_family_from_json(
    json: *const c_char,
    out: *mut *mut HnsFamily,
) -> HnsStatus {
    guard(|| {
        let spec: FamilySpec = parse(input(json, "json")?)?;
        put(out, boxed(HnsFamily(spec.build()?)), "out")
    })
}

/// # Safety
/// `family` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hns_family_free(family: *mut HnsFamily) {
    free(family)
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hns_family_len(family: *const HnsFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.len())
}

/// Writes whether the type rises along every specialization. When it does not
/// and `witness` is non-null, a JSON witness
/// `{"generic", "special", "generic_type", "special_type"}` is written there;
/// otherwise `*witness` is set to null.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable; `witness` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn hns_family_check_semicontinuity(
    family: *const HnsFamily,
    out: *mut bool,
    witness: *mut *mut c_char,
) -> HnsStatus {
    guard(|| {
        let verdict = check_semicontinuity(&handle(family, "family")?.0)?;
        put(out, verdict.is_ok(), "out")?;
        if !witness.is_null() {
            match verdict {
                Ok(()) => witness.write(ptr::null_mut()),
                Err(v) => put_json(witness, &v.to_json())?,
            }
        }
        Ok(())
    })
}

/// Stratification report as JSON, as printed by `hnstrata stratify`.
/// Fails with `HNS_STATUS_NOT_SEMICONTINUOUS` on a family whose type drops
/// under some specialization.
///
/// # Safety
/// `family` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_family_stratify_json(
    family: *const HnsFamily,
    out: *mut *mut c_char,
) -> HnsStatus {
    guard(|| put_json(out, &stratification_report(&handle(family, "family")?.0)?))
}

/// Point ids of the stratum of `tau`, computed by the recursive construction
/// and checked against the direct level set, as a JSON array.
///
/// # Safety
/// `family` and `tau` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hns_family_stratum_json(
    family: *const HnsFamily,
    tau: *const HnsType,
    out: *mut *mut c_char,
) -> HnsStatus {
    guard(|| {
        let family = &handle(family, "family")?.0;
        let stratum = recursive_stratify(family, &handle(tau, "tau")?.0)?;
        put_json(out, &json!(family.space().names_of(&stratum)))
    })
}
