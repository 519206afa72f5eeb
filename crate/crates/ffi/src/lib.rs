//! C interface to `riesz_sim`.
//!
//! Fields and profiles cross the boundary as opaque handles created by the
//! library and released with the matching `*_free` function. Every fallible
//! call returns an [`RzStatus`]; on failure a description is available from
//! [`rz_last_error_message`] on the same thread. Panics are caught and
//! reported as [`RzStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use riesz_sim::fracops::{hilbert_transform, riesz_coefficient, riesz_finite, riesz_order_one, riesz_spectral};
use riesz_sim::profile::{evaluate_profile, fourier_profile, refine_profile, Profile, ProfileSpec};
use riesz_sim::similarity::{reduced_ode_residual, PdeParams};
use riesz_sim::{ComplexField, Error, Grid1D};

/// Result of a call. Values match the error kinds of the library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RzStatus {
    Ok = 0,
    Domain = 1,
    Input = 2,
    Parse = 3,
    Singularity = 4,
    DegenerateScaling = 5,
    Extrapolation = 6,
    Precondition = 7,
    Io = 8,
    NullPointer = 9,
    Panic = 10,
}

impl From<&Error> for RzStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => RzStatus::Domain,
            Error::Input(_) => RzStatus::Input,
            Error::Parse { .. } => RzStatus::Parse,
            Error::Singularity(_) => RzStatus::Singularity,
            Error::DegenerateScaling(_) => RzStatus::DegenerateScaling,
            Error::Extrapolation { .. } => RzStatus::Extrapolation,
            Error::Precondition(_) => RzStatus::Precondition,
            Error::Io(_) | Error::Json(_) => RzStatus::Io,
        }
    }
}

/// Sampled complex field on a uniform grid.
pub struct RzField(ComplexField);

/// Similarity profile with its convergence estimate.
pub struct RzProfile(Profile);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RzStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(String::new());
            RzStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            RzStatus::from(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed as `{name}`"));
            RzStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".into());
            RzStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write_out<T>(p: *mut T, name: &'static str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    p.write(value);
    Ok(())
}

unsafe fn emit_field(out: *mut *mut RzField, field: ComplexField) -> Result<(), Failure> {
    write_out(out, "out", Box::into_raw(Box::new(RzField(field))))
}

/// Message describing the last failed call on this thread (empty after a
/// successful call). The pointer stays valid until the next call on the
/// same thread.
#[no_mangle]
pub extern "C" fn rz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a field of `count` samples at `start + i * step` from separate
/// real and imaginary arrays.
///
/// # Safety
/// `re` and `im` must point to `count` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rz_field_new(
    start: f64,
    step: f64,
    count: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut RzField,
) -> RzStatus {
    guard(|| {
        if re.is_null() {
            return Err(Failure::Null("re"));
        }
        if im.is_null() {
            return Err(Failure::Null("im"));
        }
        let grid = Grid1D::new(start, step, count)?;
        let re = std::slice::from_raw_parts(re, count);
        let im = std::slice::from_raw_parts(im, count);
        let values = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        emit_field(out, ComplexField::new(grid, values)?)
    })
}

/// Releases a field. Null is ignored.
///
/// # Safety
/// `field` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rz_field_free(field: *mut RzField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rz_field_len(field: *const RzField) -> usize {
    field.as_ref().map_or(0, |f| f.0.len())
}

/// Grid parameters of a field.
///
/// # Safety
/// `field` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_field_grid(
    field: *const RzField,
    start: *mut f64,
    step: *mut f64,
    count: *mut usize,
) -> RzStatus {
    guard(|| {
        let g = *deref(field, "field")?.0.grid();
        write_out(start, "start", g.start())?;
        write_out(step, "step", g.step())?;
        write_out(count, "count", g.count())
    })
}

/// Copies the samples into `re` and `im`, which hold `len` doubles each;
/// `len` must equal the field length.
///
/// # Safety
/// `field` must be a live handle; `re` and `im` must be writable for `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn rz_field_values(field: *const RzField, re: *mut f64, im: *mut f64, len: usize) -> RzStatus {
    guard(|| copy_values(deref(field, "field")?.0.values(), re, im, len))
}

unsafe fn copy_values(values: &[Complex64], re: *mut f64, im: *mut f64, len: usize) -> Result<(), Failure> {
    if re.is_null() {
        return Err(Failure::Null("re"));
    }
    if im.is_null() {
        return Err(Failure::Null("im"));
    }
    if len != values.len() {
        return Err(Error::Input(format!("buffer holds {len} values, field has {}", values.len())).into());
    }
    for (i, z) in values.iter().enumerate() {
        *re.add(i) = z.re;
        *im.add(i) = z.im;
    }
    Ok(())
}

/// Two-sided coefficient `1 / (2 cos(alpha pi / 2))`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_riesz_coefficient(alpha: f64, out: *mut f64) -> RzStatus {
    guard(|| write_out(out, "out", riesz_coefficient(alpha)?))
}

/// Spectral Riesz derivative of a periodic field.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_riesz_spectral(field: *const RzField, alpha: f64, out: *mut *mut RzField) -> RzStatus {
    guard(|| emit_field(out, riesz_spectral(&deref(field, "field")?.0, alpha)?))
}

/// Order-one Riesz derivative `d/dx H f` of a periodic field.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_riesz_order_one(field: *const RzField, out: *mut *mut RzField) -> RzStatus {
    guard(|| emit_field(out, riesz_order_one(&deref(field, "field")?.0)?))
}

/// Hilbert transform of a periodic field.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_hilbert_transform(field: *const RzField, out: *mut *mut RzField) -> RzStatus {
    guard(|| emit_field(out, hilbert_transform(&deref(field, "field")?.0)?))
}

/// Finite-domain Riesz derivative. `boundary_warning` (may be null) is set
/// when the field does not vanish at the interval ends.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_riesz_finite(
    field: *const RzField,
    alpha: f64,
    out: *mut *mut RzField,
    boundary_warning: *mut bool,
) -> RzStatus {
    guard(|| {
        let result = riesz_finite(&deref(field, "field")?.0, alpha)?;
        if !boundary_warning.is_null() {
            *boundary_warning = result.warning.is_some();
        }
        emit_field(out, result.field)
    })
}

/// Fourier-space profile `Psi(omega)` with amplitude `i`.
///
/// # Safety
/// `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_fourier_profile(omega: f64, alpha: f64, epsilon: f64, re: *mut f64, im: *mut f64) -> RzStatus {
    guard(|| {
        let psi = fourier_profile(omega, &ProfileSpec::new(alpha, epsilon)?)?;
        write_out(re, "re", psi.re)?;
        write_out(im, "im", psi.im)
    })
}

/// Profile on `points` samples of `[v_min, v_max]` with default quadrature.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_evaluate(
    alpha: f64,
    epsilon: f64,
    v_min: f64,
    v_max: f64,
    points: usize,
    out: *mut *mut RzProfile,
) -> RzStatus {
    guard(|| {
        let grid = Grid1D::closed(v_min, v_max, points)?;
        let p = evaluate_profile(&grid, &ProfileSpec::new(alpha, epsilon)?)?;
        write_out(out, "out", Box::into_raw(Box::new(RzProfile(p))))
    })
}

/// Profile refined until its convergence estimate is below `tol` (or the
/// refinement cap is reached, see [`rz_profile_unconverged`]).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_refine(
    alpha: f64,
    epsilon: f64,
    v_min: f64,
    v_max: f64,
    points: usize,
    tol: f64,
    out: *mut *mut RzProfile,
) -> RzStatus {
    guard(|| {
        let grid = Grid1D::closed(v_min, v_max, points)?;
        let p = refine_profile(&grid, &ProfileSpec::new(alpha, epsilon)?, tol)?;
        write_out(out, "out", Box::into_raw(Box::new(RzProfile(p))))
    })
}

/// Releases a profile. Null is ignored.
///
/// # Safety
/// `profile` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_free(profile: *mut RzProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Convergence estimate, or NaN for a null handle.
///
/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_convergence_estimate(profile: *const RzProfile) -> f64 {
    profile.as_ref().map_or(f64::NAN, |p| p.0.convergence_estimate)
}

/// Whether refinement stopped at the cap without reaching its target.
///
/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_unconverged(profile: *const RzProfile) -> bool {
    profile.as_ref().is_some_and(|p| p.0.unconverged)
}

/// Copy of the profile samples as a new field handle.
///
/// # Safety
/// `profile` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rz_profile_field(profile: *const RzProfile, out: *mut *mut RzField) -> RzStatus {
    guard(|| emit_field(out, deref(profile, "profile")?.0.field.clone()))
}

/// Norms of the profile-equation residual of `field` read as `phi(v)`.
/// Any of the outputs may be null.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn rz_reduced_ode_residual(
    field: *const RzField,
    alpha: f64,
    epsilon: f64,
    l2: *mut f64,
    linf: *mut f64,
    relative_linf: *mut f64,
) -> RzStatus {
    guard(|| {
        let report = reduced_ode_residual(&deref(field, "field")?.0, &PdeParams::new(alpha, epsilon)?)?;
        for (p, v) in [(l2, report.l2), (linf, report.linf), (relative_linf, report.relative_linf)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}
