//! C ABI for the qlga simulator.
//!
//! Every object crosses the boundary as an opaque pointer created and
//! destroyed by this library; every fallible call returns a [`QlgaStatus`]
//! and writes results through out-pointers. Passing a null pointer returns
//! `QLGA_STATUS_NULL_POINTER`; no call takes ownership of its inputs
//! unless documented.

use qlga::evolve::{EvolutionVariant, PhasePolicy, Stepper};
use qlga::field::{Initializer, SpinorField};
use qlga::oracle::DiracForm;
use qlga::params::{LatticeParams, StepOrdering};
use qlga::{Error, C64};
use std::ffi::{c_char, CStr};

/// Result codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlgaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimsMismatch = 3,
    Unsupported = 4,
    IoError = 5,
    NumericalError = 6,
}

fn status_of(e: &Error) -> QlgaStatus {
    match e {
        Error::DimsMismatch(..) => QlgaStatus::DimsMismatch,
        Error::Io(_) | Error::Snapshot(_) => QlgaStatus::IoError,
        Error::NonFinite { .. } => QlgaStatus::NumericalError,
        _ => QlgaStatus::InvalidArgument,
    }
}

/// Discretized 4-spinor field (opaque).
pub struct QlgaField(SpinorField);

/// Lattice discretization parameters (opaque).
pub struct QlgaParams(LatticeParams);

/// Reusable stepper for one update rule on one lattice (opaque).
pub struct QlgaStepper(Stepper);

/// Update rules.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlgaVariant {
    Basic = 0,
    Interleaved = 1,
    Symmetrized = 2,
}

/// Step orderings.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlgaOrdering {
    Relativistic = 0,
    Diffusive = 1,
}

/// Continuum matrix representations for the reference evolution.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlgaDiracForm {
    Standard = 0,
    Alternate = 1,
}

impl QlgaVariant {
    fn to_variant(self) -> EvolutionVariant {
        match self {
            QlgaVariant::Basic => EvolutionVariant::Basic,
            QlgaVariant::Interleaved => EvolutionVariant::Interleaved,
            QlgaVariant::Symmetrized => EvolutionVariant::Symmetrized(PhasePolicy::Phase),
        }
    }
}

/// Human-readable name of a status code (static storage).
#[no_mangle]
pub extern "C" fn qlga_status_name(status: QlgaStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        QlgaStatus::Ok => b"ok\0",
        QlgaStatus::NullPointer => b"null pointer\0",
        QlgaStatus::InvalidArgument => b"invalid argument\0",
        QlgaStatus::DimsMismatch => b"dims mismatch\0",
        QlgaStatus::Unsupported => b"unsupported\0",
        QlgaStatus::IoError => b"io error\0",
        QlgaStatus::NumericalError => b"numerical error\0",
    };
    name.as_ptr() as *const c_char
}

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => return QlgaStatus::NullPointer,
        }
    };
}

macro_rules! nonnull_mut {
    ($ptr:expr) => {
        match unsafe { $ptr.as_mut() } {
            Some(r) => r,
            None => return QlgaStatus::NullPointer,
        }
    };
}

fn box_out<T>(value: T, out: *mut *mut T) -> QlgaStatus {
    if out.is_null() {
        return QlgaStatus::NullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    QlgaStatus::Ok
}

/// Creates lattice parameters (natural units, eps = mass * delta_r).
///
/// # Safety
/// `out` must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn qlga_params_new(
    lx: usize,
    ly: usize,
    lz: usize,
    delta_r: f64,
    mass: f64,
    ordering: QlgaOrdering,
    out: *mut *mut QlgaParams,
) -> QlgaStatus {
    let ordering = match ordering {
        QlgaOrdering::Relativistic => StepOrdering::Relativistic,
        QlgaOrdering::Diffusive => StepOrdering::Diffusive,
    };
    match LatticeParams::new([lx, ly, lz], delta_r, mass, ordering) {
        Ok(p) => box_out(QlgaParams(p), out),
        Err(e) => status_of(&e),
    }
}

/// Frees parameters created by [`qlga_params_new`]. Null is a no-op.
///
/// # Safety
/// `params` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qlga_params_free(params: *mut QlgaParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Creates a zero field on the given lattice.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_new_zero(
    lx: usize,
    ly: usize,
    lz: usize,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    match SpinorField::zero([lx, ly, lz]) {
        Ok(f) => box_out(QlgaField(f), out),
        Err(e) => status_of(&e),
    }
}

/// Creates a unit amplitude at (site, component).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_new_unit(
    lx: usize,
    ly: usize,
    lz: usize,
    site: usize,
    component: usize,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    match SpinorField::new([lx, ly, lz], &Initializer::UnitComponent { site, component }) {
        Ok(f) => box_out(QlgaField(f), out),
        Err(e) => status_of(&e),
    }
}

/// Creates a normalized Gaussian packet. `center` and `k` are 3-element
/// arrays (cells and radians per cell); `pol_re`/`pol_im` carry the
/// 4-component polarization.
///
/// # Safety
/// Array pointers must reference the documented element counts; `out` must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_new_gaussian(
    lx: usize,
    ly: usize,
    lz: usize,
    center: *const f64,
    width: f64,
    k: *const f64,
    pol_re: *const f64,
    pol_im: *const f64,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    if center.is_null() || k.is_null() || pol_re.is_null() || pol_im.is_null() {
        return QlgaStatus::NullPointer;
    }
    let center = unsafe { std::slice::from_raw_parts(center, 3) };
    let k = unsafe { std::slice::from_raw_parts(k, 3) };
    let pr = unsafe { std::slice::from_raw_parts(pol_re, 4) };
    let pi = unsafe { std::slice::from_raw_parts(pol_im, 4) };
    let mut polarization = [C64::new(0.0, 0.0); 4];
    for c in 0..4 {
        polarization[c] = C64::new(pr[c], pi[c]);
    }
    let init = Initializer::GaussianPacket {
        center: [center[0], center[1], center[2]],
        width,
        k: [k[0], k[1], k[2]],
        polarization,
    };
    match SpinorField::new([lx, ly, lz], &init) {
        Ok(f) => box_out(QlgaField(f), out),
        Err(e) => status_of(&e),
    }
}

/// Deep copy.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_clone(
    field: *const QlgaField,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    let f = nonnull!(field);
    box_out(QlgaField(f.0.clone()), out)
}

/// Frees a field. Null is a no-op.
///
/// # Safety
/// `field` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_free(field: *mut QlgaField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Number of lattice sites.
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_site_count(
    field: *const QlgaField,
    out: *mut usize,
) -> QlgaStatus {
    let f = nonnull!(field);
    let out = nonnull_mut!(out);
    *out = f.0.site_count();
    QlgaStatus::Ok
}

/// Total norm (sum of squared amplitude moduli).
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_total_norm(
    field: *const QlgaField,
    out: *mut f64,
) -> QlgaStatus {
    let f = nonnull!(field);
    let out = nonnull_mut!(out);
    *out = f.0.total_norm();
    QlgaStatus::Ok
}

/// Per-site probability density.
///
/// # Safety
/// `field` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_probability_density(
    field: *const QlgaField,
    site: usize,
    out: *mut f64,
) -> QlgaStatus {
    let f = nonnull!(field);
    let out = nonnull_mut!(out);
    if site >= f.0.site_count() {
        return QlgaStatus::InvalidArgument;
    }
    *out = f.0.probability_density(site);
    QlgaStatus::Ok
}

/// Root-mean-square per-site density difference of two fields.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_l2_density_error(
    field: *const QlgaField,
    reference: *const QlgaField,
    out: *mut f64,
) -> QlgaStatus {
    let f = nonnull!(field);
    let r = nonnull!(reference);
    let out = nonnull_mut!(out);
    match f.0.l2_density_error(&r.0) {
        Ok(v) => {
            *out = v;
            QlgaStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Copies amplitudes into `buffer` as interleaved (re, im) pairs in site
/// order with the component index fastest. `len` is the buffer length in
/// doubles and must be exactly 8 * site_count.
///
/// # Safety
/// `buffer` must reference `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_copy_amplitudes(
    field: *const QlgaField,
    buffer: *mut f64,
    len: usize,
) -> QlgaStatus {
    let f = nonnull!(field);
    if buffer.is_null() {
        return QlgaStatus::NullPointer;
    }
    let amps = f.0.amplitudes();
    if len != 2 * amps.len() {
        return QlgaStatus::InvalidArgument;
    }
    let out = unsafe { std::slice::from_raw_parts_mut(buffer, len) };
    for (i, z) in amps.iter().enumerate() {
        out[2 * i] = z.re;
        out[2 * i + 1] = z.im;
    }
    QlgaStatus::Ok
}

/// Creates a stepper for one update rule over the given parameters.
///
/// # Safety
/// `params` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_stepper_new(
    variant: QlgaVariant,
    params: *const QlgaParams,
    out: *mut *mut QlgaStepper,
) -> QlgaStatus {
    let p = nonnull!(params);
    match Stepper::new(variant.to_variant(), &p.0) {
        Ok(s) => box_out(QlgaStepper(s), out),
        Err(e) => status_of(&e),
    }
}

/// Frees a stepper. Null is a no-op.
///
/// # Safety
/// `stepper` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn qlga_stepper_free(stepper: *mut QlgaStepper) {
    if !stepper.is_null() {
        drop(unsafe { Box::from_raw(stepper) });
    }
}

/// Advances the field by `n` steps in place.
///
/// # Safety
/// Both handles must be live and belong to matching lattices.
#[no_mangle]
pub unsafe extern "C" fn qlga_stepper_run(
    stepper: *mut QlgaStepper,
    field: *mut QlgaField,
    n: u64,
) -> QlgaStatus {
    let s = nonnull_mut!(stepper);
    let f = nonnull_mut!(field);
    for _ in 0..n {
        if let Err(e) = s.0.step(&mut f.0) {
            return status_of(&e);
        }
    }
    QlgaStatus::Ok
}

/// Physical time advanced per step.
///
/// # Safety
/// `stepper` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_stepper_step_time(
    stepper: *const QlgaStepper,
    out: *mut f64,
) -> QlgaStatus {
    let s = nonnull!(stepper);
    let out = nonnull_mut!(out);
    *out = s.0.step_time();
    QlgaStatus::Ok
}

/// Reads the running collision/stream-lane counters.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_stepper_counters(
    stepper: *const QlgaStepper,
    collisions: *mut u64,
    stream_lanes: *mut u64,
) -> QlgaStatus {
    let s = nonnull!(stepper);
    let c = nonnull_mut!(collisions);
    let l = nonnull_mut!(stream_lanes);
    let counters = s.0.counters();
    *c = counters.collisions;
    *l = counters.stream_lanes;
    QlgaStatus::Ok
}

/// Evolves a field for physical time `t` with the exact spectral reference
/// and writes a new handle to `out`.
///
/// # Safety
/// `field` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_exact_evolve(
    field: *const QlgaField,
    t: f64,
    mass: f64,
    delta_r: f64,
    form: QlgaDiracForm,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    let f = nonnull!(field);
    let form = match form {
        QlgaDiracForm::Standard => DiracForm::Standard,
        QlgaDiracForm::Alternate => DiracForm::Alternate,
    };
    match qlga::oracle::exact_evolve(&f.0, t, mass, delta_r, form) {
        Ok(g) => box_out(QlgaField(g), out),
        Err(e) => status_of(&e),
    }
}

/// Writes the field snapshot to `path` (bit-exact round trip with
/// [`qlga_field_read_snapshot`]).
///
/// # Safety
/// `path` must be a NUL-terminated string; `field` must be live.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_write_snapshot(
    field: *const QlgaField,
    path: *const c_char,
) -> QlgaStatus {
    let f = nonnull!(field);
    if path.is_null() {
        return QlgaStatus::NullPointer;
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p,
        Err(_) => return QlgaStatus::InvalidArgument,
    };
    let mut sink = match std::fs::File::create(path) {
        Ok(f) => f,
        Err(_) => return QlgaStatus::IoError,
    };
    match qlga::snapshot::write_snapshot(&f.0, &mut sink) {
        Ok(()) => QlgaStatus::Ok,
        Err(e) => status_of(&e),
    }
}

/// Reads a snapshot written by [`qlga_field_write_snapshot`].
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlga_field_read_snapshot(
    path: *const c_char,
    out: *mut *mut QlgaField,
) -> QlgaStatus {
    if path.is_null() {
        return QlgaStatus::NullPointer;
    }
    let path = match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => p,
        Err(_) => return QlgaStatus::InvalidArgument,
    };
    let mut source = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(_) => return QlgaStatus::IoError,
    };
    match qlga::snapshot::read_snapshot(&mut source) {
        Ok(f) => box_out(QlgaField(f), out),
        Err(e) => status_of(&e),
    }
}
