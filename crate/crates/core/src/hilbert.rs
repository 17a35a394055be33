//! The Hilbert C*-module layer: module vectors, the algebra-valued inner
//! product `<x, y> = x y*`, the module action, and adjointable maps between
//! modules.
//!
//! For a left module `M_{n×m}(C)` over the full matrix algebra, every
//! algebra-linear adjointable map commutes with all left multiplications and
//! is therefore a right multiplication `x -> x M`. That realization keeps
//! frame transport fully computable.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::{conj_transpose, frobenius, singular_extremes, AlgebraElement, PsdPower};
use crate::error::Error;
use crate::tolerances::PSD_CLAMP_TOL;
use crate::Result;

/// An element of the module `M_{n×m}(C)`; `rows` is the algebra dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    mat: Array2<Complex64>,
}

impl ModuleVector {
    pub fn new(mat: Array2<Complex64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch {
                context: "module vector",
                expected: "nonempty matrix".into(),
                found: format!("{r}x{c}"),
            });
        }
        Ok(ModuleVector { mat })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                context: "module vector",
                expected: "rectangular matrix".into(),
                found: format!("{r} rows"),
            });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Ok(ModuleVector {
            mat: Array2::from_shape_vec((r, c), flat).expect("shape checked"),
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModuleVector { mat: Array2::zeros((rows, cols)) }
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.mat
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.mat)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        ModuleVector { mat: self.mat.mapv(|e| e * z) }
    }
}

impl std::ops::Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        ModuleVector { mat: &self.mat + &rhs.mat }
    }
}

impl std::ops::Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        ModuleVector { mat: &self.mat - &rhs.mat }
    }
}

/// `<x, y> = x y*`, linear in the first slot.
pub fn inner_product(x: &ModuleVector, y: &ModuleVector) -> Result<AlgebraElement> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch {
            context: "inner product",
            expected: format!("{}x{}", x.rows(), x.cols()),
            found: format!("{}x{}", y.rows(), y.cols()),
        });
    }
    AlgebraElement::new(x.matrix().dot(&conj_transpose(y.matrix())))
}

/// The module action `a . x` of the algebra on the module.
pub fn module_action(a: &AlgebraElement, x: &ModuleVector) -> Result<ModuleVector> {
    if a.dim() != x.rows() {
        return Err(Error::DimensionMismatch {
            context: "module action",
            expected: format!("algebra dim {}", x.rows()),
            found: format!("algebra dim {}", a.dim()),
        });
    }
    ModuleVector::new(a.matrix().dot(x.matrix()))
}

/// The algebra-valued absolute value `|x| = <x, x>^{1/2}`.
pub fn vector_abs(x: &ModuleVector, tol: f64) -> Result<AlgebraElement> {
    let gram = inner_product(x, x)?;
    crate::algebra::psd_power(&gram, PsdPower::Sqrt, tol.max(PSD_CLAMP_TOL))
}

/// The scalar norm `||x|| = ||<x, x>||^{1/2}`, equal to the largest singular
/// value of `x`.
pub fn vector_norm(x: &ModuleVector) -> f64 {
    singular_extremes(x.matrix()).1
}

/// An adjointable map between modules, realized as right multiplication
/// `x -> x M` with `M` of shape `source_cols × target_cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointableMap {
    mat: Array2<Complex64>,
}

impl AdjointableMap {
    pub fn new(mat: Array2<Complex64>) -> Result<Self> {
        let (r, c) = mat.dim();
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch {
                context: "adjointable map",
                expected: "nonempty matrix".into(),
                found: format!("{r}x{c}"),
            });
        }
        Ok(AdjointableMap { mat })
    }

    pub fn identity(cols: usize) -> Self {
        AdjointableMap { mat: Array2::eye(cols) }
    }

    pub fn source_cols(&self) -> usize {
        self.mat.nrows()
    }

    pub fn target_cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.mat
    }

    /// `V x = x M`.
    pub fn apply(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.cols() != self.source_cols() {
            return Err(Error::DimensionMismatch {
                context: "map application",
                expected: format!("{} columns", self.source_cols()),
                found: format!("{} columns", x.cols()),
            });
        }
        ModuleVector::new(x.matrix().dot(&self.mat))
    }

    /// `V* y = y M*`, the adjoint for the algebra-valued inner product.
    pub fn adjoint_apply(&self, y: &ModuleVector) -> Result<ModuleVector> {
        if y.cols() != self.target_cols() {
            return Err(Error::DimensionMismatch {
                context: "adjoint map application",
                expected: format!("{} columns", self.target_cols()),
                found: format!("{} columns", y.cols()),
            });
        }
        ModuleVector::new(y.matrix().dot(&conj_transpose(&self.mat)))
    }

    /// `(lambda_min, lambda_max)` of `M* M` from one decomposition, so the
    /// two extremes are consistently ordered.
    pub fn gram_spectrum_extremes(&self) -> (f64, f64) {
        let gram = conj_transpose(&self.mat).dot(&self.mat);
        let elem = AlgebraElement::new(gram).expect("M*M is square");
        let eig = crate::algebra::hermitian_eig(&elem, crate::tolerances::EIG_TOL)
            .expect("M*M is Hermitian");
        (eig.lambda_min(), eig.lambda_max())
    }

    /// `lambda_min(M* M)`; the map is surjective iff this gap is positive.
    pub fn surjectivity_gap(&self) -> f64 {
        self.gram_spectrum_extremes().0
    }

    /// The operator norm of the map: the largest singular value of `M`.
    pub fn operator_norm(&self) -> f64 {
        singular_extremes(&self.mat).1
    }
}
