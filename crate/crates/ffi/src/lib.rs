//! C ABI for the fracburgers solver.
//!
//! Problems and solutions are opaque handles created and destroyed through
//! this interface. Every fallible call returns an [`FbStatus`]; on failure
//! [`fb_last_error_message`] describes the most recent error on the calling
//! thread. The header lives at `include/fracburgers.h` and is regenerated by
//! the build script.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fracburgers::cli::parse_config;
use fracburgers::operator::CollocationGrid;
use fracburgers::problems::problem_from_entries;
use fracburgers::solver::table_mesh;
use fracburgers::{solve, ApproximateSolution, Error, ExampleId, FractionalOrder, Problem, SolverOptions};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Bad input: order, grid size, point outside the domain, config text.
    InvalidArgument = 2,
    /// The computation failed (e.g. the Gram matrix lost positive definiteness).
    Numerical = 3,
    /// The problem has no exact solution to compare against.
    MissingExact = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

/// Opaque problem handle.
pub struct FbProblem {
    inner: Problem,
}

/// Opaque solution handle.
pub struct FbSolution {
    inner: ApproximateSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FbStatus {
    match e {
        Error::MissingExact(_) => FbStatus::MissingExact,
        e if e.is_validation() => FbStatus::InvalidArgument,
        Error::Domain { .. } => FbStatus::InvalidArgument,
        _ => FbStatus::Numerical,
    }
}

fn guard<F: FnOnce() -> Result<(), FbStatus>>(f: F) -> FbStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside fracburgers");
            FbStatus::Panic
        }
    }
}

fn fail(e: Error) -> FbStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn null(name: &str) -> FbStatus {
    set_error(&format!("{name} is null"));
    FbStatus::NullPointer
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn fb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds one of the built-in examples (`1` or `2`) at order `alpha`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_problem_example(example: u32, alpha: f64, out: *mut *mut FbProblem) -> FbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id: ExampleId = example.to_string().parse().map_err(fail)?;
        let order = FractionalOrder::new(alpha).map_err(fail)?;
        let inner = id.build(order).map_err(fail)?;
        *out = Box::into_raw(Box::new(FbProblem { inner }));
        Ok(())
    })
}

/// Builds a problem from `key = value` text with the keys `name`, `k1`..`k4`,
/// `f` and `exact` in the expression syntax of the command-line config files.
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` must be null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_problem_from_config(text: *const c_char, alpha: f64, out: *mut *mut FbProblem) -> FbStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| fail(Error::Validation("config text is not UTF-8".into())))?;
        let entries: BTreeMap<String, String> = parse_config(text).map_err(fail)?;
        if let Some(k) = entries
            .keys()
            .find(|k| !["name", "k1", "k2", "k3", "k4", "f", "exact"].contains(&k.as_str()))
        {
            return Err(fail(Error::Validation(format!(
                "key '{k}' does not describe a problem"
            ))));
        }
        let order = FractionalOrder::new(alpha).map_err(fail)?;
        let inner = problem_from_entries(&entries, order).map_err(fail)?;
        *out = Box::into_raw(Box::new(FbProblem { inner }));
        Ok(())
    })
}

/// Releases a problem. Null is ignored.
///
/// # Safety
/// `problem` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_problem_free(problem: *mut FbProblem) {
    if !problem.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(problem))));
    }
}

/// Solves on the uniform `p × q` collocation grid. `nodes` is the
/// quadrature size (0 selects the default) and `picard` the number of extra
/// fixed-point passes.
///
/// # Safety
/// `problem` must be null or a live handle; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fb_solve(
    problem: *const FbProblem,
    p: usize,
    q: usize,
    nodes: usize,
    picard: usize,
    out: *mut *mut FbSolution,
) -> FbStatus {
    guard(|| {
        if problem.is_null() {
            return Err(null("problem"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let grid = CollocationGrid::uniform(p, q).map_err(fail)?;
        let mut opts = SolverOptions {
            picard_iters: picard,
            ..SolverOptions::default()
        };
        if nodes > 0 {
            opts.quadrature_nodes = nodes;
        }
        let inner = solve(&(*problem).inner, &grid, &opts).map_err(fail)?;
        *out = Box::into_raw(Box::new(FbSolution { inner }));
        Ok(())
    })
}

/// Releases a solution. Null is ignored.
///
/// # Safety
/// `solution` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fb_solution_free(solution: *mut FbSolution) {
    if !solution.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(solution))));
    }
}

/// Number of basis functions, `p · q`. Returns 0 for null.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fb_solution_len(solution: *const FbSolution) -> usize {
    if solution.is_null() {
        return 0;
    }
    (*solution).inner.len()
}

/// Evaluates the approximation (or its `dxi_order`-th ξ-derivative, up to 2)
/// at a point of the unit square.
///
/// # Safety
/// `solution` must be null or a live handle; `out` must be null or valid for
/// writing one double.
#[no_mangle]
pub unsafe extern "C" fn fb_solution_evaluate(
    solution: *const FbSolution,
    xi: f64,
    eta: f64,
    dxi_order: u32,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        if solution.is_null() {
            return Err(null("solution"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = (*solution).inner.evaluate(xi, eta, dxi_order).map_err(fail)?;
        Ok(())
    })
}

/// PDE residual of the approximation at a point.
///
/// # Safety
/// As for [`fb_solution_evaluate`].
#[no_mangle]
pub unsafe extern "C" fn fb_solution_residual(
    solution: *const FbSolution,
    xi: f64,
    eta: f64,
    out: *mut f64,
) -> FbStatus {
    guard(|| {
        if solution.is_null() {
            return Err(null("solution"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = (*solution).inner.residual(xi, eta).map_err(fail)?;
        Ok(())
    })
}

/// Copies the expansion coefficients in the collocation basis into `buf`.
/// `len` must be at least [`fb_solution_len`].
///
/// # Safety
/// `solution` must be null or a live handle; `buf` must be null or valid for
/// writing `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fb_solution_coefficients(solution: *const FbSolution, buf: *mut f64, len: usize) -> FbStatus {
    guard(|| {
        if solution.is_null() {
            return Err(null("solution"));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let c = (*solution).inner.raw_coefficients();
        if len < c.len() {
            return Err(fail(Error::Validation(format!(
                "buffer holds {len} values, need {}",
                c.len()
            ))));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        Ok(())
    })
}

/// Largest absolute error against the exact solution on the
/// `{0.1, ..., 0.6}²` table mesh.
///
/// # Safety
/// `solution` must be null or a live handle; `out` must be null or valid for
/// writing one double.
#[no_mangle]
pub unsafe extern "C" fn fb_solution_max_error(solution: *const FbSolution, out: *mut f64) -> FbStatus {
    guard(|| {
        if solution.is_null() {
            return Err(null("solution"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = (*solution)
            .inner
            .error_report(&table_mesh())
            .map_err(fail)?
            .max_abs_error;
        Ok(())
    })
}
