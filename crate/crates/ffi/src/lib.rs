//! C interface to `idep-core`.
//!
//! Every fallible call returns an [`IdepStatus`] and writes its result through
//! an out-pointer. On failure the message is kept per thread and read back with
//! [`idep_last_error_message`]. Handles are opaque and owned by the caller;
//! release them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use idep_core::oracle::{domain_advisor, solve_grid_spectrum};
use idep_core::potential::{default_registry, find_molecule};
use idep_core::spectrum::jacobi;
use idep_core::{
    derive_coefficients, evaluate_potential, momentum_eigenvalue, BetaVariant, EigenvalueVariant, Error, MoleculeParams,
    PotentialConfig, UnitSystem,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownMolecule = 3,
    /// A numerical procedure failed (pole, singularity, no root, ...).
    Numerical = 4,
    /// The level has no admissible eigenvalue under the chosen variant.
    Excluded = 5,
    Panic = 6,
}

/// Values accepted by the `variant` argument of [`idep_momentum_eigenvalue`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdepEigenvalueVariant {
    QuantizationRoot = 0,
    BetaTimesA = 1,
    AsPrintedEq22 = 2,
}

/// Values accepted by the `beta` argument of the potential constructors.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdepBetaVariant {
    DimensionCorrected = 0,
    AsPrinted = 1,
}

/// Physical constants; see `idep_units_default` and `idep_units_new`.
pub struct IdepUnits {
    inner: UnitSystem,
}

/// A molecule together with α and the β convention.
pub struct IdepPotential {
    inner: PotentialConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> IdepStatus {
    match e {
        Error::UnknownMolecule(_) => IdepStatus::UnknownMolecule,
        e if e.is_numerical() => IdepStatus::Numerical,
        _ => IdepStatus::InvalidArgument,
    }
}

fn fail(status: IdepStatus, msg: impl Into<String>) -> IdepStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (IdepStatus, String)>) -> IdepStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IdepStatus::Ok,
        Ok(Err((status, msg))) => fail(status, msg),
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(IdepStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn core<T>(r: idep_core::Result<T>) -> Result<T, (IdepStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (IdepStatus, String) {
    (IdepStatus::NullPointer, format!("{what} is null"))
}

fn beta_of(beta: i32) -> Result<BetaVariant, (IdepStatus, String)> {
    match beta {
        0 => Ok(BetaVariant::DimensionCorrected),
        1 => Ok(BetaVariant::AsPrinted),
        _ => Err((IdepStatus::InvalidArgument, format!("unknown beta variant {beta}"))),
    }
}

fn variant_of(v: i32) -> Result<EigenvalueVariant, (IdepStatus, String)> {
    match v {
        0 => Ok(EigenvalueVariant::QuantizationRoot),
        1 => Ok(EigenvalueVariant::BetaTimesA),
        2 => Ok(EigenvalueVariant::AsPrintedEq22),
        _ => Err((IdepStatus::InvalidArgument, format!("unknown eigenvalue variant {v}"))),
    }
}

/// # Safety
/// `units` must be null or a live handle.
unsafe fn units_or_default(units: *const IdepUnits) -> UnitSystem {
    units.as_ref().map_or_else(UnitSystem::default, |u| u.inner)
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn idep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn idep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Library default constants. Never null.
#[no_mangle]
pub extern "C" fn idep_units_default() -> *mut IdepUnits {
    Box::into_raw(Box::new(IdepUnits {
        inner: UnitSystem::default(),
    }))
}

/// ħ in eV·ns and the amu rest energy in eV.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idep_units_new(hbar_ev_ns: f64, amu_to_ev_per_c2: f64, out: *mut *mut IdepUnits) -> IdepStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let inner = core(UnitSystem::new(hbar_ev_ns, amu_to_ev_per_c2))?;
        *out = Box::into_raw(Box::new(IdepUnits { inner }));
        Ok(())
    })
}

/// # Safety
/// `units` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn idep_units_free(units: *mut IdepUnits) {
    if !units.is_null() {
        drop(Box::from_raw(units));
    }
}

/// Potential for a molecule of the built-in registry (case-insensitive name).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idep_potential_from_registry(
    name: *const c_char,
    alpha: f64,
    beta: i32,
    out: *mut *mut IdepPotential,
) -> IdepStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|_| (IdepStatus::InvalidArgument, "name is not UTF-8".to_string()))?;
        let registry = default_registry();
        let molecule = core(find_molecule(&registry, name))?.clone();
        let inner = core(PotentialConfig::new(molecule, alpha, beta_of(beta)?))?;
        *out = Box::into_raw(Box::new(IdepPotential { inner }));
        Ok(())
    })
}

/// Potential from explicit parameters: `de` in eV, `te` and `t0` in ns, `mu`
/// in amu, `alpha` in 1/ns.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idep_potential_new(
    de: f64,
    te: f64,
    mu: f64,
    t0: f64,
    q: f64,
    alpha: f64,
    beta: i32,
    out: *mut *mut IdepPotential,
) -> IdepStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let molecule = core(MoleculeParams::new("custom", de, te, mu, t0, q))?;
        let inner = core(PotentialConfig::new(molecule, alpha, beta_of(beta)?))?;
        *out = Box::into_raw(Box::new(IdepPotential { inner }));
        Ok(())
    })
}

/// # Safety
/// `potential` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn idep_potential_free(potential: *mut IdepPotential) {
    if !potential.is_null() {
        drop(Box::from_raw(potential));
    }
}

/// V(t) in eV.
///
/// # Safety
/// `potential` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idep_potential_evaluate(potential: *const IdepPotential, t: f64, out: *mut f64) -> IdepStatus {
    guard(|| {
        let p = potential.as_ref().ok_or_else(|| null("potential"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = core(evaluate_potential(&p.inner, t))?;
        Ok(())
    })
}

/// cP_n in eV. `units` may be null for the defaults. Returns
/// `IDEP_STATUS_EXCLUDED` when the level has no admissible value.
///
/// # Safety
/// `potential` must be a live handle, `units` null or live, `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn idep_momentum_eigenvalue(
    potential: *const IdepPotential,
    units: *const IdepUnits,
    n: usize,
    variant: i32,
    out: *mut f64,
) -> IdepStatus {
    guard(|| {
        let p = potential.as_ref().ok_or_else(|| null("potential"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let units = units_or_default(units);
        let coeffs = core(derive_coefficients(&p.inner, &units))?;
        match core(momentum_eigenvalue(&coeffs, n, variant_of(variant)?))? {
            Ok(v) => {
                *out = v;
                Ok(())
            }
            Err(why) => Err((IdepStatus::Excluded, format!("level {n} excluded: {why}"))),
        }
    })
}

/// Lowest `count` finite-difference eigenvalues in eV on the default grid,
/// written to `out[0..count]`.
///
/// # Safety
/// `potential` must be a live handle, `units` null or live, and `out` valid
/// for `count` writes.
#[no_mangle]
pub unsafe extern "C" fn idep_grid_spectrum(
    potential: *const IdepPotential,
    units: *const IdepUnits,
    count: usize,
    out: *mut f64,
) -> IdepStatus {
    guard(|| {
        let p = potential.as_ref().ok_or_else(|| null("potential"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let units = units_or_default(units);
        let spec = core(domain_advisor(&p.inner, &units))?;
        let sol = core(solve_grid_spectrum(&p.inner, &units, spec, count))?;
        std::slice::from_raw_parts_mut(out, count).copy_from_slice(&sol.eigenvalues);
        Ok(())
    })
}

/// Jacobi polynomial P_n^{(a,b)}(x); requires a, b > -1.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn idep_jacobi(n: usize, a: f64, b: f64, x: f64, out: *mut f64) -> IdepStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = core(jacobi(n, a, b, x))?;
        Ok(())
    })
}
