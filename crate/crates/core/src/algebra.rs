//! Dense complex matrix *-algebra kernel.
//!
//! Elements of the algebra are square complex matrices with the conjugate
//! transpose as involution. Positivity, the Loewner order, operator norms
//! and positive-semidefinite functional calculus are all realized through a
//! cyclic Jacobi eigensolver for Hermitian matrices, which is deterministic
//! and accurate at the dimensions this crate targets.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::Error;
use crate::tolerances::{
    EIG_TOL, HERM_TOL, JACOBI_CONV, JACOBI_MAX_SWEEPS, PSD_CLAMP_TOL,
};
use crate::Result;

/// Descriptor of the ambient algebra: full `M_n(C)` or its diagonal
/// subalgebra. The diagonal flag gates the exact star-bound checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Algebra {
    pub dim: usize,
    pub diagonal: bool,
}

impl Algebra {
    pub fn full(dim: usize) -> Self {
        Algebra { dim, diagonal: false }
    }

    pub fn diagonal(dim: usize) -> Self {
        Algebra { dim, diagonal: true }
    }
}

/// An element of `M_n(C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    mat: Array2<Complex64>,
}

impl AlgebraElement {
    /// Wraps a square matrix. Rejects empty or non-square input.
    pub fn new(mat: Array2<Complex64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r == 0 || r != c {
            return Err(Error::DimensionMismatch {
                context: "algebra element",
                expected: "square matrix with dim >= 1".into(),
                found: format!("{r}x{c}"),
            });
        }
        Ok(AlgebraElement { mat })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                context: "algebra element",
                expected: "square matrix with dim >= 1".into(),
                found: format!("{} rows", n),
            });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Ok(AlgebraElement {
            mat: Array2::from_shape_vec((n, n), flat).expect("shape checked"),
        })
    }

    pub fn identity(n: usize) -> Self {
        AlgebraElement { mat: Array2::eye(n) }
    }

    pub fn zeros(n: usize) -> Self {
        AlgebraElement { mat: Array2::zeros((n, n)) }
    }

    /// The scalar multiple `z * I`.
    pub fn scalar(n: usize, z: Complex64) -> Self {
        AlgebraElement { mat: Array2::<Complex64>::eye(n).mapv(|e| e * z) }
    }

    pub fn from_diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut mat = Array2::zeros((n, n));
        for (i, &d) in entries.iter().enumerate() {
            mat[(i, i)] = d;
        }
        AlgebraElement { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.mat
    }

    /// The involution `a -> a*` (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        AlgebraElement { mat: conj_transpose(&self.mat) }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        AlgebraElement { mat: self.mat.mapv(|e| e * z) }
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.mat)
    }

    /// `||a - a*||_F / ||a||_F`, with the convention 0/0 = 0.
    pub fn hermitian_defect(&self) -> f64 {
        let norm = frobenius(&self.mat);
        if norm == 0.0 {
            return 0.0;
        }
        frobenius(&(&self.mat - &conj_transpose(&self.mat))) / norm
    }

    /// Off-diagonal entries all below `tol * (1 + ||a||_F)`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let scale = tol * (1.0 + frobenius(&self.mat));
        self.mat
            .indexed_iter()
            .all(|((i, j), z)| i == j || z.norm() <= scale)
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.mat[(i, i)]).collect()
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { mat: &self.mat + &rhs.mat }
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { mat: &self.mat - &rhs.mat }
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { mat: self.mat.dot(&rhs.mat) }
    }
}

/// Spectral decomposition of a Hermitian element: `a = U diag(lambda) U*`
/// with real eigenvalues in ascending order and unitary `U`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub basis: Array2<Complex64>,
}

impl EigenDecomposition {
    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("dim >= 1")
    }

    /// Rebuilds `U diag(f(lambda)) U*`, Hermitized exactly.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Array2<Complex64> {
        let n = self.eigenvalues.len();
        let mut scaled = self.basis.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let v = f(lambda);
            for i in 0..n {
                scaled[(i, k)] *= v;
            }
        }
        let raw = scaled.dot(&conj_transpose(&self.basis));
        (&raw + &conj_transpose(&raw)).mapv(|z| z * 0.5)
    }

    pub fn reconstruct(&self) -> Array2<Complex64> {
        self.apply_spectral(|l| l)
    }
}

/// Outcome of a positivity test, carrying the smallest eigenvalue as
/// witness when the element is Hermitian.
#[derive(Debug, Clone, Copy)]
pub struct Positivity {
    pub is_positive: bool,
    pub lambda_min: Option<f64>,
    pub hermitian_defect: f64,
}

/// Outcome of a Loewner comparison `a <= b`; `margin` is
/// `lambda_min(b - a)`.
#[derive(Debug, Clone, Copy)]
pub struct LoewnerCheck {
    pub holds: bool,
    pub margin: f64,
}

/// Exponents admitted by the PSD functional calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdPower {
    /// `a^{1/2}`
    Sqrt,
    /// `a^{-1/2}`
    InvSqrt,
    /// `a^{-1}`
    Inverse,
}

pub(crate) fn conj_transpose(mat: &Array2<Complex64>) -> Array2<Complex64> {
    mat.t().mapv(|z| z.conj())
}

/// The Hermitian part `(a + a*) / 2`.
fn hermitian_part(a: &AlgebraElement) -> AlgebraElement {
    AlgebraElement {
        mat: (a.matrix() + &conj_transpose(a.matrix())).mapv(|z| z * 0.5),
    }
}

pub(crate) fn frobenius(mat: &Array2<Complex64>) -> f64 {
    mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigendecomposition of a Hermitian element by cyclic Jacobi sweeps.
///
/// The input must be Hermitian up to a relative Frobenius defect of
/// [`HERM_TOL`]; sweeps stop once the off-diagonal mass falls below
/// [`JACOBI_CONV`]` * ||a||_F` and are capped at [`JACOBI_MAX_SWEEPS`].
/// The returned decomposition is validated against `eig_tol`: the
/// reconstruction residual must stay below `eig_tol * (1 + ||a||_F)` and the
/// basis must be unitary to the same tolerance.
pub fn hermitian_eig(a: &AlgebraElement, eig_tol: f64) -> Result<EigenDecomposition> {
    hermitian_eig_with(a, HERM_TOL, eig_tol)
}

pub(crate) fn hermitian_eig_with(
    a: &AlgebraElement,
    herm_tol: f64,
    eig_tol: f64,
) -> Result<EigenDecomposition> {
    let defect = a.hermitian_defect();
    if defect > herm_tol {
        return Err(Error::NotHermitian { defect });
    }
    let decomp = jacobi_hermitian(a.matrix())?;

    let norm_a = frobenius(a.matrix());
    let residual = frobenius(&(&decomp.reconstruct() - a.matrix()));
    if residual > eig_tol * (1.0 + norm_a) {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }
    let gram = conj_transpose(&decomp.basis).dot(&decomp.basis);
    let unitarity = frobenius(&(&gram - &Array2::<Complex64>::eye(a.dim())));
    if unitarity > eig_tol {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }
    Ok(decomp)
}

/// Cyclic Jacobi for Hermitian complex matrices.
///
/// Each rotation annihilates one off-diagonal pair with a unitary
/// plane rotation that absorbs the phase of the pivot entry. The iteration
/// order (row-major over the upper triangle) is fixed, so results are
/// bit-reproducible.
fn jacobi_hermitian(mat: &Array2<Complex64>) -> Result<EigenDecomposition> {
    let n = mat.nrows();
    // Work on the Hermitian average so the invariant a[j][i] = conj(a[i][j])
    // holds exactly throughout the sweep.
    let mut a = (mat + &conj_transpose(mat)).mapv(|z| z * 0.5);
    let mut basis: Array2<Complex64> = Array2::eye(n);

    let norm = frobenius(&a);
    if norm == 0.0 {
        return Ok(EigenDecomposition { eigenvalues: vec![0.0; n], basis });
    }
    let threshold = JACOBI_CONV * norm;
    // If every pivot is below `skip`, the total off-diagonal mass is already
    // below `threshold`, so skipping cannot stall convergence.
    let skip = threshold / n as f64;

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / r;

                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Columns p and q of A and of the accumulated basis.
                let s_phase = phase * s;
                let s_phase_conj = phase.conj() * s;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        let new_kp = akp * c - akq * s_phase_conj;
                        let new_kq = akp * s_phase + akq * c;
                        a[(k, p)] = new_kp;
                        a[(p, k)] = new_kp.conj();
                        a[(k, q)] = new_kq;
                        a[(q, k)] = new_kq.conj();
                    }
                    let vkp = basis[(k, p)];
                    let vkq = basis[(k, q)];
                    basis[(k, p)] = vkp * c - vkq * s_phase_conj;
                    basis[(k, q)] = vkp * s_phase + vkq * c;
                }
                let two_scr = 2.0 * s * c * r;
                a[(p, p)] = Complex64::new(c * c * app - two_scr + s * s * aqq, 0.0);
                a[(q, q)] = Complex64::new(s * s * app + two_scr + c * c * aqq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    if !converged && off_diagonal_mass(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    // Ascending eigenvalue order; stable sort keeps the first-encountered
    // eigenvector order on ties.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut sorted_basis = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            sorted_basis[(k, dst)] = basis[(k, src)];
        }
    }
    Ok(EigenDecomposition { eigenvalues, basis: sorted_basis })
}

fn off_diagonal_mass(a: &Array2<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += 2.0 * a[(p, q)].norm_sqr();
        }
    }
    sum.sqrt()
}

/// Tests membership in the positive cone: Hermitian within `tol` and
/// `lambda_min >= -tol`. Never fails; a non-Hermitian input yields a
/// negative verdict with the defect as the reason.
pub fn is_positive(a: &AlgebraElement, tol: f64) -> Positivity {
    let defect = a.hermitian_defect();
    if defect > tol {
        return Positivity { is_positive: false, lambda_min: None, hermitian_defect: defect };
    }
    let eig = hermitian_eig_with(&hermitian_part(a), f64::INFINITY, EIG_TOL)
        .expect("cyclic Jacobi converges on Hermitian input");
    let lambda_min = eig.lambda_min();
    Positivity {
        is_positive: lambda_min >= -tol,
        lambda_min: Some(lambda_min),
        hermitian_defect: defect,
    }
}

/// PSD functional calculus `a -> a^p` for `p` in `{1/2, -1/2, -1}`.
///
/// Eigenvalues in `[-tol, 0]` are clamped to zero before a square root;
/// negative powers require `lambda_min > tol`.
pub fn psd_power(a: &AlgebraElement, p: PsdPower, tol: f64) -> Result<AlgebraElement> {
    let defect = a.hermitian_defect();
    if defect > tol.max(HERM_TOL) {
        return Err(Error::NotHermitian { defect });
    }
    let eig = hermitian_eig_with(&hermitian_part(a), f64::INFINITY, EIG_TOL)?;
    let lambda_min = eig.lambda_min();
    if lambda_min < -tol {
        return Err(Error::NotPositive { lambda_min });
    }
    let mat = match p {
        PsdPower::Sqrt => eig.apply_spectral(|l| if l <= 0.0 { 0.0 } else { l.sqrt() }),
        PsdPower::InvSqrt => {
            if lambda_min <= tol {
                return Err(Error::SingularForNegativePower { lambda_min });
            }
            eig.apply_spectral(|l| 1.0 / l.sqrt())
        }
        PsdPower::Inverse => {
            if lambda_min <= tol {
                return Err(Error::SingularForNegativePower { lambda_min });
            }
            eig.apply_spectral(|l| 1.0 / l)
        }
    };
    AlgebraElement::new(mat)
}

/// Loewner comparison `a <= b`, decided by the smallest eigenvalue of
/// `b - a`. Both sides must be Hermitian within `tol`.
pub fn loewner_leq(a: &AlgebraElement, b: &AlgebraElement, tol: f64) -> Result<LoewnerCheck> {
    for side in [a, b] {
        let defect = side.hermitian_defect();
        if defect > tol.max(HERM_TOL) {
            return Err(Error::NotHermitian { defect });
        }
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "loewner comparison",
            expected: format!("dim {}", a.dim()),
            found: format!("dim {}", b.dim()),
        });
    }
    let diff = hermitian_part(&(b - a));
    let eig = hermitian_eig_with(&diff, f64::INFINITY, EIG_TOL)?;
    let margin = eig.lambda_min();
    Ok(LoewnerCheck { holds: margin >= -tol, margin })
}

/// Largest singular value, computed as `sqrt(lambda_max(a* a))`.
pub fn operator_norm(a: &AlgebraElement) -> f64 {
    singular_extremes(a.matrix()).1
}

/// `(sigma_min, sigma_max)` of a rectangular complex matrix, via the
/// Hermitian eigenvalues of whichever of `m* m` and `m m*` is smaller.
pub(crate) fn singular_extremes(mat: &Array2<Complex64>) -> (f64, f64) {
    if mat.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return (0.0, 0.0);
    }
    let (r, c) = mat.dim();
    let gram = if c <= r {
        conj_transpose(mat).dot(mat)
    } else {
        mat.dot(&conj_transpose(mat))
    };
    let elem = AlgebraElement::new(gram).expect("gram of nonempty matrix is square");
    let eig = hermitian_eig_with(&elem, f64::INFINITY, EIG_TOL)
        .expect("cyclic Jacobi converges on Hermitian input");
    (
        eig.lambda_min().max(0.0).sqrt(),
        eig.lambda_max().max(0.0).sqrt(),
    )
}

/// The absolute value `|a| = (a* a)^{1/2}`.
pub fn abs_element(a: &AlgebraElement, tol: f64) -> Result<AlgebraElement> {
    let gram = &a.adjoint() * a;
    psd_power(&gram, PsdPower::Sqrt, tol.max(PSD_CLAMP_TOL))
}
