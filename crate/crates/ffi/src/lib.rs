//! C ABI over the fluxspec core.
//!
//! Every entry point returns an [`FsStatus`]; results travel through out
//! pointers. Modes are opaque heap handles released with [`fs_mode_free`].
//! On failure a message is available from [`fs_last_error_message`] on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fluxspec::operators::{apply_supercharge, flux_integral, hermiticity_defect};
use fluxspec::specialfn::try_jacobi_eval;
use fluxspec::susy::witten_index;
use fluxspec::{build_family, evaluate, inner_product, monopole_harmonic, Error, Family, FluxConfig, JacobiSpec, NormClass, Sector, SpectrumEntry};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Divergent = 3,
    OutOfRange = 4,
    NonIntegerFlux = 5,
    SectorMismatch = 6,
    NotAFamilyMode = 7,
    Numerical = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsNormClass {
    Regular = 0,
    Section = 1,
    SingularNormalizable = 2,
    NonNormalizable = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FsFamily {
    Plain = 0,
    Tilde = 1,
}

/// Opaque eigenmode handle.
pub struct FsMode {
    entry: SpectrumEntry,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FsStatus {
    match e {
        Error::InvalidArgument(_) | Error::InvalidExponents { .. } | Error::OutsideInterval(_) | Error::IntegerFlux(_) => FsStatus::InvalidArgument,
        Error::Divergent { .. } | Error::DivergentAtNorthPoleOfMap { .. } | Error::VanishingMode { .. } => FsStatus::Divergent,
        Error::OutOfRange { .. } => FsStatus::OutOfRange,
        Error::NonIntegerFlux(_) => FsStatus::NonIntegerFlux,
        Error::SectorMismatch { .. } | Error::AngularMismatch(..) => FsStatus::SectorMismatch,
        Error::NotAFamilyMode | Error::RelationInapplicable(_) => FsStatus::NotAFamilyMode,
        Error::Overflow { .. } | Error::SingularGram | Error::NoConvergence(_) => FsStatus::Numerical,
        Error::Internal(_) => FsStatus::Internal,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> FsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FsStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside fluxspec");
            FsStatus::Panic
        }
    }
}

macro_rules! out {
    ($p:expr) => {
        if $p.is_null() {
            set_error("null pointer argument");
            return FsStatus::NullPointer;
        }
    };
}

fn sector(f: u8) -> Result<Sector, Error> {
    Sector::from_index(f)
}

fn emit(entry: SpectrumEntry, out: *mut *mut FsMode) {
    let b = Box::new(FsMode { entry });
    // SAFETY: the caller checked `out` for null.
    unsafe { *out = Box::into_raw(b) };
}

/// Closed-form family mode at flux `q` in sector `f` (0 or 1).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_new(q: f64, f: u8, family: FsFamily, m: i64, n: usize, out: *mut *mut FsMode) -> FsStatus {
    out!(out);
    *out = ptr::null_mut();
    guard(|| {
        let fam = match family {
            FsFamily::Plain => Family::Plain,
            FsFamily::Tilde => Family::Tilde,
        };
        let e = build_family(FluxConfig::new(q, sector(f)?), fam, m, n)?;
        emit(e, out);
        Ok(())
    })
}

/// Regular monopole harmonic at integer flux, addressed by Jacobi degree.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fs_monopole_harmonic(q: i64, f: u8, m: i64, degree: usize, out: *mut *mut FsMode) -> FsStatus {
    out!(out);
    *out = ptr::null_mut();
    guard(|| {
        emit(monopole_harmonic(q, sector(f)?, m, degree)?, out);
        Ok(())
    })
}

/// Releases a handle. Null is accepted.
///
/// # Safety
/// `mode` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_free(mode: *mut FsMode) {
    if !mode.is_null() {
        drop(Box::from_raw(mode));
    }
}

/// # Safety
/// `mode` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_eigenvalue(mode: *const FsMode, out: *mut f64) -> FsStatus {
    out!(out);
    out!(mode);
    *out = (*mode).entry.eigenvalue;
    FsStatus::Ok
}

/// Exponent of the `1 + z` factor governing behaviour at the puncture.
///
/// # Safety
/// `mode` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_gamma(mode: *const FsMode, out: *mut f64) -> FsStatus {
    out!(out);
    out!(mode);
    *out = (*mode).entry.gamma;
    FsStatus::Ok
}

/// # Safety
/// `mode` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_class(mode: *const FsMode, out: *mut FsNormClass) -> FsStatus {
    out!(out);
    out!(mode);
    *out = match (*mode).entry.norm_class {
        NormClass::Regular => FsNormClass::Regular,
        NormClass::Section => FsNormClass::Section,
        NormClass::SingularNormalizable => FsNormClass::SingularNormalizable,
        NormClass::NonNormalizable => FsNormClass::NonNormalizable,
    };
    FsStatus::Ok
}

/// Angular quantum number and sector of the mode.
///
/// # Safety
/// `mode` must be a live handle; `m` and `f` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_labels(mode: *const FsMode, m: *mut i64, f: *mut u8) -> FsStatus {
    out!(m);
    out!(f);
    out!(mode);
    let d = &(*mode).entry.descriptor;
    *m = d.m;
    *f = d.config.sector.index();
    FsStatus::Ok
}

/// Value of the mode at `z = cos(theta)`, azimuth `phi`.
///
/// # Safety
/// `mode` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_evaluate(mode: *const FsMode, z: f64, phi: f64, re: *mut f64, im: *mut f64) -> FsStatus {
    out!(re);
    out!(im);
    out!(mode);
    let e = &(*mode).entry;
    guard(|| {
        let v = evaluate(&e.descriptor, z, phi)?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Supercharge image: `Q` on sector 0, `Qbar` on sector 1. A zero mode yields
/// a handle whose coefficient is zero.
///
/// # Safety
/// `mode` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_apply_supercharge(mode: *const FsMode, out: *mut *mut FsMode) -> FsStatus {
    out!(out);
    out!(mode);
    *out = ptr::null_mut();
    let e = &(*mode).entry;
    guard(|| {
        emit(apply_supercharge(e)?, out);
        Ok(())
    })
}

/// Whether the handle holds the zero function.
///
/// # Safety
/// `mode` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_mode_is_zero(mode: *const FsMode, out: *mut bool) -> FsStatus {
    out!(out);
    out!(mode);
    *out = (*mode).entry.descriptor.is_zero();
    FsStatus::Ok
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(z)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_jacobi_eval(n: usize, alpha: f64, beta: f64, z: f64, out: *mut f64) -> FsStatus {
    out!(out);
    guard(|| {
        *out = try_jacobi_eval(JacobiSpec::new(n, alpha, beta), z)?;
        Ok(())
    })
}

/// `<a, b>` with `npoints` Gauss-Jacobi nodes.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_inner_product(a: *const FsMode, b: *const FsMode, npoints: usize, out: *mut f64) -> FsStatus {
    out!(out);
    out!(a);
    out!(b);
    let (a, b) = (&(*a).entry, &(*b).entry);
    guard(|| {
        *out = inner_product(a, b, npoints)?;
        Ok(())
    })
}

/// `<a, H b> - <H a, b>`.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fs_hermiticity_defect(a: *const FsMode, b: *const FsMode, npoints: usize, out: *mut f64) -> FsStatus {
    out!(out);
    out!(a);
    out!(b);
    let (a, b) = (&(*a).entry, &(*b).entry);
    guard(|| {
        *out = hermiticity_defect(a, b, npoints)?;
        Ok(())
    })
}

/// Zero-mode index at integer flux.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_witten_index(q: f64, out: *mut i64) -> FsStatus {
    out!(out);
    guard(|| {
        *out = witten_index(q)?.index;
        Ok(())
    })
}

/// Total flux of the gauge field divided by `2 pi`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fs_flux_integral(q: f64, npoints: usize, out: *mut f64) -> FsStatus {
    out!(out);
    guard(|| {
        *out = flux_integral(q, npoints)?;
        Ok(())
    })
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn fs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
