//! Multi-shift Krylov solvers for complex symmetric shifted systems
//! `(A + σ_ℓI)x^{(ℓ)} = b`, `ℓ = 1..m`.
//!
//! One complex symmetric Lanczos stream is shared by every shift. Four
//! per-shift engines ride on it: shifted QMR_SYM, its Ω-weighted variant,
//! shifted QMR_SYM(B), and a Galerkin baseline whose iterates equal those
//! of shifted COCG.
//!
//! ```
//! use shiftkrylov::{solve_all, Method, ShiftSet, SolveOptions, SparseSymMatrix, C64};
//!
//! let a = SparseSymMatrix::from_triplets(
//!     2,
//!     [(0, 0, C64::new(2.0, 0.0)), (0, 1, C64::new(1.0, 0.0)),
//!      (1, 0, C64::new(1.0, 0.0)), (1, 1, C64::new(3.0, 0.0))],
//! ).unwrap();
//! let b = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
//! let shifts = ShiftSet::new(vec![C64::new(0.1, 0.01), C64::new(0.2, 0.01)]).unwrap();
//! let sol = solve_all(&a, &b, &shifts, Method::QmrSymB, &SolveOptions::default()).unwrap();
//! assert!(sol.report.all_converged());
//! ```

pub mod cli;
pub mod error;
pub mod flops;
pub mod generator;
pub mod io;
pub mod lanczos;
pub mod oracle;
pub mod scalar;
pub mod shifts;
pub mod solvers;
pub mod sparse;

pub use error::{BreakdownKind, DimensionMismatch, LanczosError, MatrixError, SolveError};
pub use flops::FlopCounter;
pub use lanczos::{Lanczos, LanczosRecord, LanczosStep};
pub use scalar::{bilinear_dot, norm2, Scalar, C64};
pub use shifts::ShiftSet;
pub use solvers::{solve_all, true_residual, Method, MultiShiftSolver, Solution, SolveOptions, SolveReport};
pub use sparse::SparseSymMatrix;
