//! C interface over the path-measure calculus: opaque handles, integer
//! status codes, and a thread-local last-error message. Every entry point
//! catches panics, so no unwind ever crosses the boundary.
//!
//! Conventions: functions return [`MhStatus`]; results come back through
//! `out` pointers, written only on `Ok` (plus the one documented
//! `NonConverged` case). Handles are freed exactly once by the matching
//! `_free`; strings returned by this library are freed by
//! [`mh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_double, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use markovhull::io::{measure_from_doc, measure_to_doc, space_from_doc, to_canonical_json, AnyMeasure};
use markovhull::{
    is_markov, markov_defect, markovianise_set, run_hull, Error, Mode, PathSpace, SubsetOrdering,
    Weight,
};

/// Result of every fallible call. `mh_last_error_message` describes the
/// most recent non-`Ok` return on the calling thread.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not UTF-8.
    InvalidUtf8 = 2,
    /// Input could not be parsed or referred to unknown names.
    Parse = 3,
    /// Inputs were readable but violated a documented precondition.
    Contract = 4,
    /// The hull iteration hit its step limit; outputs are still valid.
    NonConverged = 5,
    /// An internal invariant failed; the library state is still sound.
    Panic = 6,
}

/// Opaque path space handle.
pub struct MhSpace(std::sync::Arc<PathSpace>);

/// Opaque measure handle; carries its arithmetic mode.
pub struct MhMeasure(AnyMeasure);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn error_status(err: &Error) -> MhStatus {
    match err {
        Error::Io(_)
        | Error::Json(_)
        | Error::Parse(_)
        | Error::UnknownLabel(_)
        | Error::UnknownState(_) => MhStatus::Parse,
        _ => MhStatus::Contract,
    }
}

fn fail(err: &Error) -> MhStatus {
    set_error(&err.to_string());
    error_status(err)
}

fn null_argument(name: &str) -> MhStatus {
    set_error(&format!("null argument: {name}"));
    MhStatus::NullArgument
}

fn contract(message: &str) -> MhStatus {
    set_error(message);
    MhStatus::Contract
}

/// Shields the boundary: a panic inside `f` becomes `MhStatus::Panic`.
fn guarded<F: FnOnce() -> MhStatus>(f: F) -> MhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            MhStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, MhStatus> {
    if ptr.is_null() {
        return Err(null_argument(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{name} is not valid UTF-8"));
        MhStatus::InvalidUtf8
    })
}

fn parse_tolerance(measure: &AnyMeasure, tol: c_double) -> Result<(), MhStatus> {
    if !tol.is_finite() || tol < 0.0 {
        return Err(contract("tolerance must be finite and nonnegative"));
    }
    if measure.mode() == Mode::Exact && tol != 0.0 {
        return Err(contract("exact-mode measures take tolerance 0"));
    }
    Ok(())
}

/// Message for the most recent non-`Ok` status on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn mh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parse a path-space JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_space_parse_json(
    json: *const c_char,
    out: *mut *mut MhSpace,
) -> MhStatus {
    guarded(|| {
        if out.is_null() {
            return null_argument("out");
        }
        let text = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let doc = match serde_json::from_str(text) {
            Ok(doc) => doc,
            Err(e) => return fail(&Error::Json(e)),
        };
        match space_from_doc(&doc) {
            Ok(space) => {
                *out = Box::into_raw(Box::new(MhSpace(std::sync::Arc::new(space))));
                MhStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `space` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mh_space_free(space: *mut MhSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of grid points.
///
/// # Safety
/// `space` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_space_grid_len(space: *const MhSpace, out: *mut usize) -> MhStatus {
    guarded(|| {
        let (Some(space), false) = (space.as_ref(), out.is_null()) else {
            return null_argument("space/out");
        };
        *out = space.0.len();
        MhStatus::Ok
    })
}

/// Number of states.
///
/// # Safety
/// `space` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_space_state_count(
    space: *const MhSpace,
    out: *mut usize,
) -> MhStatus {
    guarded(|| {
        let (Some(space), false) = (space.as_ref(), out.is_null()) else {
            return null_argument("space/out");
        };
        *out = space.0.n_states();
        MhStatus::Ok
    })
}

/// Parse a measure JSON document. The space must be inlined in the
/// document; file references are not resolved across the C boundary.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_parse_json(
    json: *const c_char,
    out: *mut *mut MhMeasure,
) -> MhStatus {
    guarded(|| {
        if out.is_null() {
            return null_argument("out");
        }
        let text = match read_str(json, "json") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let doc = match serde_json::from_str(text) {
            Ok(doc) => doc,
            Err(e) => return fail(&Error::Json(e)),
        };
        match measure_from_doc(&doc, None) {
            Ok(measure) => {
                *out = Box::into_raw(Box::new(MhMeasure(measure)));
                MhStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `measure` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_free(measure: *mut MhMeasure) {
    if !measure.is_null() {
        drop(Box::from_raw(measure));
    }
}

/// Canonical JSON for a measure; free the string with `mh_string_free`.
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_to_json(
    measure: *const MhMeasure,
    out: *mut *mut c_char,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        let text = match to_canonical_json(&measure_to_doc(&measure.0)) {
            Ok(text) => text,
            Err(e) => return fail(&e),
        };
        match CString::new(text) {
            Ok(cstring) => {
                *out = cstring.into_raw();
                MhStatus::Ok
            }
            Err(_) => contract("serialized JSON contained a NUL byte"),
        }
    })
}

/// # Safety
/// `s` must have been returned by this library and not freed twice.
#[no_mangle]
pub unsafe extern "C" fn mh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Arithmetic mode: 0 exact, 1 float.
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_mode(measure: *const MhMeasure, out: *mut i32) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        *out = match measure.0.mode() {
            Mode::Exact => 0,
            Mode::Float => 1,
        };
        MhStatus::Ok
    })
}

/// Number of support atoms.
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_atom_count(
    measure: *const MhMeasure,
    out: *mut usize,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        *out = measure.0.atom_count();
        MhStatus::Ok
    })
}

/// Total mass as a double (a rounded view in exact mode).
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_total_mass(
    measure: *const MhMeasure,
    out: *mut c_double,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        *out = match &measure.0 {
            AnyMeasure::Exact(m) => m.total_mass().to_f64(),
            AnyMeasure::Float(m) => m.total_mass(),
        };
        MhStatus::Ok
    })
}

/// Total-variation distance from the measure to its own pin image at
/// `pin`, as a double.
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_markov_defect(
    measure: *const MhMeasure,
    pin: usize,
    out: *mut c_double,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        let defect = match &measure.0 {
            AnyMeasure::Exact(m) => markov_defect(m, pin).map(|d| d.to_f64()),
            AnyMeasure::Float(m) => markov_defect(m, pin),
        };
        match defect {
            Ok(d) => {
                *out = d;
                MhStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Whether every interior pin fixes the measure within `tol`. Exact-mode
/// measures require `tol == 0`.
///
/// # Safety
/// `measure` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_measure_is_markov(
    measure: *const MhMeasure,
    tol: c_double,
    out: *mut bool,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        if let Err(status) = parse_tolerance(&measure.0, tol) {
            return status;
        }
        let result = match &measure.0 {
            AnyMeasure::Exact(m) => is_markov(m, &Weight::zero()),
            AnyMeasure::Float(m) => is_markov(m, &tol),
        };
        match result {
            Ok(flag) => {
                *out = flag;
                MhStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Apply the pin operators for `pins[0..len]` in order, producing a new
/// measure handle.
///
/// # Safety
/// `measure` must be a live handle; `pins` must point to `len` readable
/// indices (null allowed when `len == 0`); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_markovianise(
    measure: *const MhMeasure,
    pins: *const usize,
    len: usize,
    out: *mut *mut MhMeasure,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false) = (measure.as_ref(), out.is_null()) else {
            return null_argument("measure/out");
        };
        if pins.is_null() && len > 0 {
            return null_argument("pins");
        }
        let pins: &[usize] =
            if len == 0 { &[] } else { std::slice::from_raw_parts(pins, len) };
        let image = match &measure.0 {
            AnyMeasure::Exact(m) => markovianise_set(m, pins).map(AnyMeasure::Exact),
            AnyMeasure::Float(m) => markovianise_set(m, pins).map(AnyMeasure::Float),
        };
        match image {
            Ok(image) => {
                *out = Box::into_raw(Box::new(MhMeasure(image)));
                MhStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Hull iteration ordering for [`mh_hull`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MhOrdering {
    /// Interior pins in ascending order, repeated.
    Sweep = 0,
    /// Seeded random interleaving of full sweeps.
    Random = 1,
}

/// Iterate pins until a fixed point, up to `max_steps` applications.
/// `seed` only matters for `MhOrdering::Random`. Exact-mode measures
/// require `tol == 0`.
///
/// On `Ok` and on `NonConverged`, `out` receives the final measure and
/// `out_converged` the convergence flag; other statuses write nothing.
///
/// # Safety
/// `measure` must be a live handle; `out` and `out_converged` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mh_hull(
    measure: *const MhMeasure,
    ordering: MhOrdering,
    seed: u64,
    max_steps: usize,
    tol: c_double,
    out: *mut *mut MhMeasure,
    out_converged: *mut bool,
) -> MhStatus {
    guarded(|| {
        let (Some(measure), false, false) =
            (measure.as_ref(), out.is_null(), out_converged.is_null())
        else {
            return null_argument("measure/out/out_converged");
        };
        if let Err(status) = parse_tolerance(&measure.0, tol) {
            return status;
        }
        let ordering = match ordering {
            MhOrdering::Sweep => SubsetOrdering::FullSweep,
            MhOrdering::Random => SubsetOrdering::Random { seed },
        };
        let run = match &measure.0 {
            AnyMeasure::Exact(m) => run_hull(m, &ordering, &Weight::zero(), max_steps)
                .map(|run| (AnyMeasure::Exact(run.measure), run.converged)),
            AnyMeasure::Float(m) => run_hull(m, &ordering, &tol, max_steps)
                .map(|run| (AnyMeasure::Float(run.measure), run.converged)),
        };
        match run {
            Ok((limit, converged)) => {
                *out = Box::into_raw(Box::new(MhMeasure(limit)));
                *out_converged = converged;
                if converged {
                    MhStatus::Ok
                } else {
                    set_error("hull iteration hit the step limit");
                    MhStatus::NonConverged
                }
            }
            Err(e) => fail(&e),
        }
    })
}
