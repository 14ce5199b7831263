//! C ABI for `hjc-core`.
//!
//! Every entry point returns an [`HjcStatus`]; results go through out-pointers.
//! Operators and parameter sets are opaque handles released with their `_free`
//! function. On failure a message is kept per thread and read back with
//! [`hjc_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hjc_core::algebra::{AlgebraElement, AlgebraTag};
use hjc_core::berry::{self, BasePoint, ChartTag};
use hjc_core::block::BlockOperator;
use hjc_core::jc::{self, JCParams};
use hjc_core::HjcError;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HjcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A quantum chart hit a level where its normalizer vanishes.
    SingularSector = 3,
    /// A classical chart was evaluated on its Dirac string or at the origin.
    DiracString = 4,
    Numerical = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HjcChart {
    One = 1,
    Two = 2,
}

fn chart_tag(chart: u32) -> Result<ChartTag, (HjcStatus, String)> {
    match chart {
        c if c == HjcChart::One as u32 => Ok(ChartTag::I),
        c if c == HjcChart::Two as u32 => Ok(ChartTag::II),
        other => Err((HjcStatus::InvalidArgument, format!("unknown chart {other}"))),
    }
}

/// Opaque Jaynes-Cummings parameter set.
pub struct HjcParams(JCParams);

/// Opaque 2x2 block operator on the truncated Fock space.
pub struct HjcBlockOperator(BlockOperator);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &HjcError) -> HjcStatus {
    match e {
        HjcError::SingularSector { .. } => HjcStatus::SingularSector,
        HjcError::DiracString { .. } | HjcError::Origin | HjcError::ZeroFiber(_) => HjcStatus::DiracString,
        HjcError::NonFinite | HjcError::NonFiniteLevel { .. } | HjcError::NotHermitian(_) | HjcError::ZeroInverse => {
            HjcStatus::Numerical
        }
        _ => HjcStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (HjcStatus, String)>) -> HjcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HjcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside hjc".into());
            HjcStatus::Panic
        }
    }
}

fn core<T>(r: hjc_core::Result<T>) -> Result<T, (HjcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (HjcStatus, String) {
    (HjcStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (HjcStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (HjcStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the most recent failure on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hjc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

// ---------------------------------------------------------------- parameters

/// Parameters with coupling `g = 1` and detuning ratio `theta`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_params_new(theta: f64, dim: usize, out: *mut *mut HjcParams) -> HjcStatus {
    guard(|| put(out, HjcParams(core(JCParams::new(theta, dim))?)))
}

/// Full model; `theta = (delta - omega) / (2 g)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_params_new_physical(
    omega: f64,
    delta: f64,
    g: f64,
    dim: usize,
    out: *mut *mut HjcParams,
) -> HjcStatus {
    guard(|| put(out, HjcParams(core(JCParams::physical(omega, delta, g, dim))?)))
}

/// # Safety
/// `params` must come from `hjc_params_new*`.
#[no_mangle]
pub unsafe extern "C" fn hjc_params_set_g(params: *mut HjcParams, g: f64) -> HjcStatus {
    guard(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        p.0 = core(p.0.with_g(g))?;
        Ok(())
    })
}

/// # Safety
/// `params` must be NULL or come from `hjc_params_new*`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hjc_params_free(params: *mut HjcParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Levels at which `chart` (an `HjcChart` value) is singular. Writes at most
/// `capacity` levels and the total count to `count`; returns `BufferTooSmall`
/// when `capacity < count`.
///
/// # Safety
/// `levels` must hold `capacity` entries (may be NULL when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn hjc_singular_levels(
    params: *const HjcParams,
    chart: u32,
    levels: *mut usize,
    capacity: usize,
    count: *mut usize,
) -> HjcStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if count.is_null() {
            return Err(null("count"));
        }
        let report = jc::singular_sectors(&p.0);
        let found: Vec<usize> = report.singular_in(chart_tag(chart)?).map(|e| e.level).collect();
        *count = found.len();
        if found.len() > capacity {
            return Err((
                HjcStatus::BufferTooSmall,
                format!("{} levels, capacity {capacity}", found.len()),
            ));
        }
        if !found.is_empty() {
            if levels.is_null() {
                return Err(null("levels"));
            }
            ptr::copy_nonoverlapping(found.as_ptr(), levels, found.len());
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- operators

/// Hamiltonian `H_JC = [[theta, a], [a^dagger, -theta]]`.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_build_h_jc(params: *const HjcParams, out: *mut *mut HjcBlockOperator) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::build_h_jc(p))?))
    })
}

/// Full Hamiltonian; needs parameters from `hjc_params_new_physical`.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_build_full_hamiltonian(
    params: *const HjcParams,
    out: *mut *mut HjcBlockOperator,
) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::build_jc_hamiltonian(p))?))
    })
}

/// Projector onto the positive-energy eigenspace of `H_JC`.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_projector(params: *const HjcParams, out: *mut *mut HjcBlockOperator) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::projector_jc(p).map(|j| j.operator))?))
    })
}

/// Closed-form `exp(-i g t H_JC)`.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_propagator(
    params: *const HjcParams,
    t: f64,
    out: *mut *mut HjcBlockOperator,
) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::propagator_closed_form(p, t))?))
    })
}

/// Closed-form `exp(-i t H)` for the full model.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_propagator_full(
    params: *const HjcParams,
    t: f64,
    out: *mut *mut HjcBlockOperator,
) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::propagator_full(p, t))?))
    })
}

/// Chart unitary `V` for `chart` (an `HjcChart` value); fails with
/// `SingularSector` on the inadmissible chart.
///
/// # Safety
/// `params` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_chart_unitary(
    params: *const HjcParams,
    chart: u32,
    out: *mut *mut HjcBlockOperator,
) -> HjcStatus {
    guard(|| {
        let p = &deref(params, "params")?.0;
        put(out, HjcBlockOperator(core(jc::build_v(p, chart_tag(chart)?))?))
    })
}

/// Fock truncation `d`; the flattened operator is `2d x 2d`.
///
/// # Safety
/// `op` must be valid and `dim` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_operator_dim(op: *const HjcBlockOperator, dim: *mut usize) -> HjcStatus {
    guard(|| {
        let op = deref(op, "op")?;
        if dim.is_null() {
            return Err(null("dim"));
        }
        *dim = op.0.dim();
        Ok(())
    })
}

/// Copies the flattened operator, row-major with the atom index major, into
/// `re` and `im`, each holding `len >= (2d)^2` doubles.
///
/// # Safety
/// `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hjc_operator_copy_entries(
    op: *const HjcBlockOperator,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> HjcStatus {
    guard(|| {
        let op = deref(op, "op")?;
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let m = op.0.flatten();
        let n = m.nrows();
        if len < n * n {
            return Err((HjcStatus::BufferTooSmall, format!("need {} entries, got {len}", n * n)));
        }
        for i in 0..n {
            for j in 0..n {
                *re.add(i * n + j) = m[(i, j)].re;
                *im.add(i * n + j) = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Max-abs distance of two operators on the leading `d - margin` levels.
///
/// # Safety
/// `a` and `b` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_operator_distance(
    a: *const HjcBlockOperator,
    b: *const HjcBlockOperator,
    margin: usize,
    out: *mut f64,
) -> HjcStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = core(a.0.distance_on(&b.0, margin))?;
        Ok(())
    })
}

/// Product `a b` as a new handle.
///
/// # Safety
/// `a` and `b` must be valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hjc_operator_mul(
    a: *const HjcBlockOperator,
    b: *const HjcBlockOperator,
    out: *mut *mut HjcBlockOperator,
) -> HjcStatus {
    guard(|| {
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        put(out, HjcBlockOperator(core(a.0.mul(&b.0))?))
    })
}

/// # Safety
/// `op` must be NULL or a live handle, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hjc_operator_free(op: *mut HjcBlockOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

// ---------------------------------------------------------------- classical

/// Product in the algebra of dimension `dim` (1, 2, 4 or 8): `out = a b`.
///
/// # Safety
/// `a`, `b` and `out` must each hold `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn hjc_algebra_mul(dim: usize, a: *const f64, b: *const f64, out: *mut f64) -> HjcStatus {
    guard(|| {
        let tag =
            AlgebraTag::from_dim(dim).ok_or((HjcStatus::InvalidArgument, format!("no algebra of dimension {dim}")))?;
        if a.is_null() || b.is_null() || out.is_null() {
            return Err(null("a/b/out"));
        }
        let x = core(AlgebraElement::new(tag, std::slice::from_raw_parts(a, dim).to_vec()))?;
        let y = core(AlgebraElement::new(tag, std::slice::from_raw_parts(b, dim).to_vec()))?;
        let p = core(x.mul(&y))?;
        ptr::copy_nonoverlapping(p.coeffs().as_ptr(), out, dim);
        Ok(())
    })
}

/// Classical projector `P = (1 + H/r)/2` at `(x, y, z)` over C, as row-major
/// 2x2 real and imaginary parts.
///
/// # Safety
/// `re` and `im` must hold 4 doubles each.
#[no_mangle]
pub unsafe extern "C" fn hjc_berry_projector(x: f64, y: f64, z: f64, re: *mut f64, im: *mut f64) -> HjcStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        let p = core(BasePoint::complex(x, y, z))?;
        let proj = core(berry::projector(&p))?;
        for i in 0..2 {
            for j in 0..2 {
                let c = proj.entry(i, j).coeffs();
                *re.add(2 * i + j) = c[0];
                *im.add(2 * i + j) = c[1];
            }
        }
        Ok(())
    })
}
