//! C ABI over `shiftkrylov`.
//!
//! Matrices and solutions are opaque heap handles created by `sk_*` calls and
//! released with the matching `*_free`. Every fallible call returns an
//! `SkStatus`; on failure a message is kept per thread and can be read with
//! `sk_last_error`. Complex vectors cross the boundary as separate real and
//! imaginary arrays, where a null imaginary array means all zeros.
//!
//! Panics never unwind into C: they are caught and reported as
//! `SK_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use shiftkrylov::io::read_matrix_market;
use shiftkrylov::solvers::ShiftStatus;
use shiftkrylov::{solve_all, Method, ShiftSet, Solution, SolveError, SolveOptions, SparseSymMatrix, C64};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidMatrix = 3,
    Io = 4,
    Breakdown = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkMethod {
    QmrSym = 0,
    QmrSymB = 1,
    Cocg = 2,
    QmrSymOmega = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkShiftStatus {
    Converged = 0,
    NotConverged = 1,
    Breakdown = 2,
}

/// Solver settings. `max_iter = 0` means twice the dimension; `workers`
/// of 0 or 1 runs the shift loop on the calling thread.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SkSolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub workers: usize,
}

/// Sparse complex symmetric matrix.
pub struct SkMatrix(SparseSymMatrix);

/// Solutions and per-shift results of one solve.
pub struct SkSolution(Solution);

struct Failure(SkStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(SkStatus::NullPointer, format!("{what} is null"))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SkStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to `len` readable values.
unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

/// # Safety
/// `re` must point to `len` values, `im` must be null or point to `len` values.
unsafe fn complex_input(re: *const f64, im: *const f64, len: usize, what: &str) -> Result<Vec<C64>, Failure> {
    let re = input(re, len, what)?;
    if im.is_null() {
        return Ok(re.iter().map(|&x| C64::new(x, 0.0)).collect());
    }
    let im = input(im, len, what)?;
    Ok(re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect())
}

/// # Safety
/// `p` must be null or point to a live handle.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

/// # Safety
/// `p` must be null or valid for a write of `T`.
unsafe fn write_out<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    p.write(value);
    Ok(())
}

/// Default options: `tol = 1e-12`, `max_iter = 0`, `workers = 1`.
#[no_mangle]
pub extern "C" fn sk_solve_options_default() -> SkSolveOptions {
    SkSolveOptions { tol: 1e-12, max_iter: 0, workers: 1 }
}

/// Builds an `n × n` matrix from `nnz` zero-based triplets. With `mirrored`
/// each off-diagonal entry is given once and stored at both positions;
/// otherwise the list must already be symmetric.
///
/// # Safety
/// `rows`, `cols` and `re` must point to `nnz` values; `im` may be null.
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_from_triplets(
    n: usize,
    nnz: usize,
    rows: *const usize,
    cols: *const usize,
    re: *const f64,
    im: *const f64,
    mirrored: bool,
    out: *mut *mut SkMatrix,
) -> SkStatus {
    guard(|| {
        let rows = input(rows, nnz, "rows")?;
        let cols = input(cols, nnz, "cols")?;
        let vals = complex_input(re, im, nnz, "re")?;
        let entries = rows.iter().zip(cols).zip(vals).map(|((&i, &j), v)| (i, j, v));
        let m = if mirrored {
            SparseSymMatrix::from_mirrored_triplets(n, entries)
        } else {
            SparseSymMatrix::from_triplets(n, entries)
        }
        .map_err(|e| Failure(SkStatus::InvalidMatrix, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(SkMatrix(m))), "out")
    })
}

/// Reads a Matrix Market coordinate file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_read_matrix_market(path: *const c_char, out: *mut *mut SkMatrix) -> SkStatus {
    guard(|| {
        if path.is_null() {
            return Err(Failure::null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Failure(SkStatus::InvalidArgument, "path is not UTF-8".into()))?;
        let m = read_matrix_market(path).map_err(|e| Failure(SkStatus::Io, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(SkMatrix(m))), "out")
    })
}

/// # Safety
/// `m` must be a live matrix handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_dim(m: *const SkMatrix, out: *mut usize) -> SkStatus {
    guard(|| write_out(out, handle(m, "matrix")?.0.dim(), "out"))
}

/// # Safety
/// `m` must be null or a handle from `sk_matrix_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_matrix_free(m: *mut SkMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Solves `(A + σ_ℓ I) x = b` for all `num_shifts` shifts.
///
/// Returns `SK_STATUS_OK` whenever the solve ran, including when some
/// shifts did not converge or broke down; inspect them with
/// `sk_solution_shift`. A right-hand side whose bilinear self-product
/// vanishes is refused with `SK_STATUS_BREAKDOWN`.
///
/// # Safety
/// `b_re` must point to `dim(m)` values and `shift_re` to `num_shifts`
/// values; the imaginary arrays may be null. `opts` may be null for
/// defaults. `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn sk_solve(
    m: *const SkMatrix,
    b_re: *const f64,
    b_im: *const f64,
    n: usize,
    shift_re: *const f64,
    shift_im: *const f64,
    num_shifts: usize,
    method: SkMethod,
    opts: *const SkSolveOptions,
    out: *mut *mut SkSolution,
) -> SkStatus {
    guard(|| {
        let a = &handle(m, "matrix")?.0;
        if n != a.dim() {
            return Err(Failure(SkStatus::InvalidArgument, format!("rhs has length {n}, matrix is {}", a.dim())));
        }
        let b = complex_input(b_re, b_im, n, "b_re")?;
        let shifts = ShiftSet::new(complex_input(shift_re, shift_im, num_shifts, "shift_re")?)
            .ok_or_else(|| Failure(SkStatus::InvalidArgument, "no shifts".into()))?;
        let o = opts.as_ref().copied().unwrap_or_else(|| sk_solve_options_default());
        let opts = SolveOptions {
            tol: o.tol,
            max_iter: (o.max_iter > 0).then_some(o.max_iter),
            workers: o.workers,
            ..Default::default()
        };
        let method = match method {
            SkMethod::QmrSym => Method::QmrSym,
            SkMethod::QmrSymB => Method::QmrSymB,
            SkMethod::Cocg => Method::Cocg,
            SkMethod::QmrSymOmega => Method::QmrSymOmega,
        };
        let sol = solve_all(a, &b, &shifts, method, &opts).map_err(|e| {
            let status = match e {
                SolveError::Lanczos(_) | SolveError::Breakdown(_) => SkStatus::Breakdown,
                SolveError::ThreadPool(_) => SkStatus::Panic,
                _ => SkStatus::InvalidArgument,
            };
            Failure(status, e.to_string())
        })?;
        write_out(out, Box::into_raw(Box::new(SkSolution(sol))), "out")
    })
}

/// # Safety
/// `s` must be null or a handle from `sk_solve` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_solution_free(s: *mut SkSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of shifts and Lanczos iterations performed.
///
/// # Safety
/// `s` must be a live solution handle; either output may be null.
#[no_mangle]
pub unsafe extern "C" fn sk_solution_counts(
    s: *const SkSolution,
    num_shifts: *mut usize,
    iterations: *mut usize,
) -> SkStatus {
    guard(|| {
        let r = &handle(s, "solution")?.0.report;
        if !num_shifts.is_null() {
            num_shifts.write(r.shifts.len());
        }
        if !iterations.is_null() {
            iterations.write(r.iterations);
        }
        Ok(())
    })
}

/// Status, iteration count and relative residual estimate of one shift.
///
/// # Safety
/// `s` must be a live solution handle; each output may be null.
#[no_mangle]
pub unsafe extern "C" fn sk_solution_shift(
    s: *const SkSolution,
    index: usize,
    status: *mut SkShiftStatus,
    iterations: *mut usize,
    estimate: *mut f64,
) -> SkStatus {
    guard(|| {
        let r = &handle(s, "solution")?.0.report;
        let sh = r
            .shifts
            .get(index)
            .ok_or_else(|| Failure(SkStatus::InvalidArgument, format!("shift index {index} out of range")))?;
        if !status.is_null() {
            status.write(match sh.status {
                ShiftStatus::Converged => SkShiftStatus::Converged,
                ShiftStatus::Breakdown(_) => SkShiftStatus::Breakdown,
                ShiftStatus::Active | ShiftStatus::NotConverged => SkShiftStatus::NotConverged,
            });
        }
        if !iterations.is_null() {
            iterations.write(sh.iterations);
        }
        if !estimate.is_null() {
            estimate.write(sh.estimate);
        }
        Ok(())
    })
}

/// Copies the solution for shift `index` into `re`/`im` (length `len`,
/// which must equal the dimension). `im` may be null.
///
/// # Safety
/// `re` (and `im` if non-null) must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn sk_solution_x(
    s: *const SkSolution,
    index: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SkStatus {
    guard(|| {
        let sol = &handle(s, "solution")?.0;
        let x = sol
            .x
            .get(index)
            .ok_or_else(|| Failure(SkStatus::InvalidArgument, format!("shift index {index} out of range")))?;
        if len != x.len() {
            return Err(Failure(SkStatus::InvalidArgument, format!("buffer length {len}, solution has {}", x.len())));
        }
        if re.is_null() {
            return Err(Failure::null("re"));
        }
        let re = slice::from_raw_parts_mut(re, len);
        for (r, z) in re.iter_mut().zip(x) {
            *r = z.re;
        }
        if !im.is_null() {
            let im = slice::from_raw_parts_mut(im, len);
            for (i, z) in im.iter_mut().zip(x) {
                *i = z.im;
            }
        }
        Ok(())
    })
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next `sk_*` call on the same thread.
#[no_mangle]
pub extern "C" fn sk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn sk_status_name(status: SkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        SkStatus::Ok => c"ok",
        SkStatus::NullPointer => c"null pointer",
        SkStatus::InvalidArgument => c"invalid argument",
        SkStatus::InvalidMatrix => c"invalid matrix",
        SkStatus::Io => c"input/output error",
        SkStatus::Breakdown => c"breakdown",
        SkStatus::Panic => c"internal error",
    };
    s.as_ptr()
}
