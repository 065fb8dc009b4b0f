//! C ABI over `vide-core`.
//!
//! Every fallible function returns a [`VideStatus`]; on failure a message is
//! available from [`vide_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Results are
//! written through out-pointers only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vide_core::analysis::{self, Region};
use vide_core::bench;
use vide_core::expr::parse;
use vide_core::problem_file::parse_problem_file;
use vide_core::solver::{self, SolverConfig, Trajectory};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VideStatus {
    Ok = 0,
    NullPointer = 1,
    /// A string argument is not valid UTF-8.
    InvalidUtf8 = 2,
    /// Expression or problem-file syntax error, or a variable restriction.
    Parse = 3,
    /// Step size, step count, depth, range or other argument out of domain.
    InvalidArgument = 4,
    /// The solver aborted at a step.
    Solver = 5,
    UnknownName = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(VideStatus, String);

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> VideStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => VideStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            VideStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(VideStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        Failure(
            VideStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(VideStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn vide_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vide_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Opaque problem handle.
pub struct VideProblem {
    inner: vide_core::problem::VideProblem,
}

/// Opaque solution handle.
pub struct VideTrajectory {
    inner: Trajectory,
}

fn boxed_problem(p: vide_core::problem::VideProblem) -> *mut VideProblem {
    Box::into_raw(Box::new(VideProblem { inner: p }))
}

/// Builds a problem from expression strings. `exact` may be null.
///
/// # Safety
/// String arguments must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_problem_new(
    name: *const c_char,
    f: *const c_char,
    kernel: *const c_char,
    x0: f64,
    y0: f64,
    exact: *const c_char,
    out: *mut *mut VideProblem,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let name = read_str(name, "name")?;
        let expr = |s: *const c_char, what: &str| -> Result<_, Failure> {
            let text = read_str(s, what)?;
            parse(text).map_err(|e| Failure(VideStatus::Parse, format!("{what}: {e}")))
        };
        let f = expr(f, "f")?;
        let k = expr(kernel, "K")?;
        let exact = if exact.is_null() {
            None
        } else {
            Some(expr(exact, "exact")?)
        };
        let p = vide_core::problem::VideProblem::new(name, f, k, x0, y0, exact)
            .map_err(|e| Failure(VideStatus::Parse, e.to_string()))?;
        *out = boxed_problem(p);
        Ok(())
    })
}

/// Builds a problem from problem-file text (`key = value` lines).
///
/// # Safety
/// `text` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_problem_from_text(
    text: *const c_char,
    out: *mut *mut VideProblem,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let text = read_str(text, "text")?;
        let p = parse_problem_file(text).map_err(|e| Failure(VideStatus::Parse, e.to_string()))?;
        *out = boxed_problem(p);
        Ok(())
    })
}

/// One of the built-in examples `ex1` … `ex4`.
///
/// # Safety
/// `name` must be null or NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_problem_builtin(
    name: *const c_char,
    out: *mut *mut VideProblem,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let name = read_str(name, "name")?;
        let p = bench::builtin(name)
            .ok_or_else(|| Failure(VideStatus::UnknownName, format!("unknown example '{name}'")))?;
        *out = boxed_problem(p);
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vide_problem_free(problem: *mut VideProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Solves with `steps` steps of size `h` and a `depth`-term DJM correction
/// (3 is the standard method).
///
/// # Safety
/// `problem` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_solve(
    problem: *const VideProblem,
    h: f64,
    steps: usize,
    depth: usize,
    out: *mut *mut VideTrajectory,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let p = problem
            .as_ref()
            .ok_or_else(|| Failure(VideStatus::NullPointer, "problem is null".into()))?;
        let cfg = SolverConfig::with_depth(h, steps, depth)
            .map_err(|e| Failure(VideStatus::InvalidArgument, e.to_string()))?;
        let traj = solver::solve(&p.inner, &cfg).map_err(|e| match e {
            solver::SolveError::Config(c) => Failure(VideStatus::InvalidArgument, c.to_string()),
            other => Failure(VideStatus::Solver, other.to_string()),
        })?;
        *out = Box::into_raw(Box::new(VideTrajectory { inner: traj }));
        Ok(())
    })
}

/// Number of grid points (`steps + 1`), or 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vide_trajectory_len(t: *const VideTrajectory) -> usize {
    t.as_ref().map_or(0, |t| t.inner.len())
}

/// Grid nodes, `vide_trajectory_len` entries owned by the handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vide_trajectory_nodes(t: *const VideTrajectory) -> *const f64 {
    t.as_ref().map_or(ptr::null(), |t| t.inner.nodes().as_ptr())
}

/// Computed values, `vide_trajectory_len` entries owned by the handle.
///
/// # Safety
/// `t` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vide_trajectory_values(t: *const VideTrajectory) -> *const f64 {
    t.as_ref()
        .map_or(ptr::null(), |t| t.inner.values().as_ptr())
}

/// # Safety
/// `t` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vide_trajectory_free(t: *mut VideTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VideRoots {
    pub r1_re: f64,
    pub r1_im: f64,
    pub r2_re: f64,
    pub r2_im: f64,
}

impl From<(analysis::Complex, analysis::Complex)> for VideRoots {
    fn from((r1, r2): (analysis::Complex, analysis::Complex)) -> Self {
        VideRoots {
            r1_re: r1.re,
            r1_im: r1.im,
            r2_re: r2.re,
            r2_im: r2.im,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VideStability {
    pub b1: f64,
    pub b2: f64,
    pub roots: VideRoots,
    pub stable: bool,
}

/// Stability of the scheme at `(u, v) = (h·alpha, h²·beta)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_assess_stability(
    u: f64,
    v: f64,
    out: *mut VideStability,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let a = analysis::assess_stability(u, v);
        *out = VideStability {
            b1: a.b1,
            b2: a.b2,
            roots: (a.r1, a.r2).into(),
            stable: a.stable,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VideThresholds {
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vide_bifurcation_thresholds(
    h: f64,
    out: *mut VideThresholds,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        let t = analysis::bifurcation_thresholds(h)
            .map_err(|e| Failure(VideStatus::InvalidArgument, e.to_string()))?;
        *out = VideThresholds {
            alpha0: t.alpha0,
            alpha1: t.alpha1,
            alpha2: t.alpha2,
        };
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VideRegion {
    #[default]
    RegionI = 1,
    RegionII = 2,
    RegionIII = 3,
    RegionIV = 4,
    BoundaryIAndII = 12,
    BoundaryIIAndIII = 23,
    BoundaryIIIAndIV = 34,
}

impl From<Region> for VideRegion {
    fn from(r: Region) -> Self {
        match r {
            Region::I => VideRegion::RegionI,
            Region::II => VideRegion::RegionII,
            Region::III => VideRegion::RegionIII,
            Region::IV => VideRegion::RegionIV,
            Region::BoundaryOneTwo => VideRegion::BoundaryIAndII,
            Region::BoundaryTwoThree => VideRegion::BoundaryIIAndIII,
            Region::BoundaryThreeFour => VideRegion::BoundaryIIIAndIV,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VideBifurcation {
    pub b1: f64,
    pub b2: f64,
    pub roots: VideRoots,
    pub thresholds: VideThresholds,
    pub region: VideRegion,
}

/// Region of `alpha` at step `h`; boundaries are bands of half-width `tol`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub unsafe extern "C" fn vide_classify_bifurcation(
    alpha: f64,
    h: f64,
    tol: f64,
    out: *mut VideBifurcation,
) -> VideStatus {
    guard(|| {
        check_out(out, "out")?;
        if !(tol >= 0.0) {
            return Err(Failure(
                VideStatus::InvalidArgument,
                format!("tol must be non-negative, got {tol}"),
            ));
        }
        let r = analysis::classify_bifurcation(alpha, h, tol)
            .map_err(|e| Failure(VideStatus::InvalidArgument, e.to_string()))?;
        *out = VideBifurcation {
            b1: r.coefficients.b1,
            b2: r.coefficients.b2,
            roots: (r.r1, r.r2).into(),
            thresholds: VideThresholds {
                alpha0: r.thresholds.alpha0,
                alpha1: r.thresholds.alpha1,
                alpha2: r.thresholds.alpha2,
            },
            region: r.region.into(),
        };
        Ok(())
    })
}

/// Label such as `"II"` or `"boundary-II/III"` as a static string.
#[no_mangle]
pub extern "C" fn vide_region_label(region: VideRegion) -> *const c_char {
    let s: &'static str = match region {
        VideRegion::RegionI => "I\0",
        VideRegion::RegionII => "II\0",
        VideRegion::RegionIII => "III\0",
        VideRegion::RegionIV => "IV\0",
        VideRegion::BoundaryIAndII => "boundary-I/II\0",
        VideRegion::BoundaryIIAndIII => "boundary-II/III\0",
        VideRegion::BoundaryIIIAndIV => "boundary-III/IV\0",
    };
    s.as_ptr().cast()
}
