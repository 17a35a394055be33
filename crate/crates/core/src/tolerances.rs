//! Default numerical tolerances used across the crate.
//!
//! All values assume IEEE 754 double precision and desk-scale problems
//! (matrix dimensions up to a few dozen, quadrature with a few hundred
//! nodes). Callers can pass their own tolerances to most operations; these
//! are the defaults the high-level reports use.

/// Relative Frobenius defect below which a matrix is accepted as Hermitian.
pub const HERM_TOL: f64 = 1e-12;

/// Tolerance on the eigendecomposition invariants (reconstruction residual
/// and unitarity of the eigenvector basis).
pub const EIG_TOL: f64 = 1e-10;

/// Jacobi sweep convergence: stop once the off-diagonal Frobenius mass drops
/// below `JACOBI_CONV * ||a||_F`.
pub const JACOBI_CONV: f64 = 1e-13;

/// Hard cap on Jacobi sweeps before reporting no convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues in `[-PSD_CLAMP_TOL, 0]` are clamped to zero before taking a
/// positive-semidefinite square root.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// A Gram matrix with `lambda_min` at or below this threshold is not a frame.
pub const FRAME_TOL: f64 = 1e-10;

/// Tight/Parseval verdicts in reports use this absolute tolerance.
pub const REPORT_TOL: f64 = 1e-8;

/// Smallest singular value above which a right-multiplication map counts as
/// surjective.
pub const SURJECTIVITY_TOL: f64 = 1e-10;

/// Star-bound elements must have `sigma_min` above this to count as
/// invertible.
pub const INVERTIBILITY_TOL: f64 = 1e-10;

/// Default panel count for interval quadrature.
pub const DEFAULT_PANELS: usize = 8;

/// Default Gauss-Legendre nodes per panel (exact through degree 15).
pub const DEFAULT_NODES_PER_PANEL: usize = 8;

/// Newton iteration tolerance for Legendre polynomial roots.
pub const LEGENDRE_NEWTON_TOL: f64 = 1e-15;

/// Newton iteration cap for Legendre polynomial roots.
pub const LEGENDRE_NEWTON_MAX_ITER: usize = 100;

/// Denominators below this are treated as degenerate in randomized
/// stability ratio checks.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;
