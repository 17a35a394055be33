//! The frame engine: parametrized families, Gram/frame operators by
//! quadrature, scalar and algebra-valued bound certification, canonical
//! Parseval/dual families, and images under adjointable maps.
//!
//! A family `w -> F_w` in `M_{n×m}(C)` together with a measure induces the
//! frame operator `S x = x G` with Gram matrix `G = int F_w* F_w dmu`. The
//! frame condition `A <x,x> <= <Sx,x> <= B <x,x>` for all module vectors is
//! equivalent to `A I <= G <= B I` in the Loewner order, so the optimal
//! scalar bounds are the extreme eigenvalues of `G`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::{
    conj_transpose, frobenius, hermitian_eig, is_positive, loewner_leq, operator_norm, Algebra,
    AlgebraElement, EigenDecomposition,
};
use crate::error::Error;
use crate::hilbert::{AdjointableMap, ModuleVector};
use crate::measure::{MatrixAccumulator, MeasureSpace, SampledFunction};
use crate::rng::SplitMix64;
use crate::tolerances::{EIG_TOL, FRAME_TOL, HERM_TOL, INVERTIBILITY_TOL, REPORT_TOL};
use crate::Result;

/// How a family assigns a module element to each parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyForm {
    /// `F_w = sum_k C_k w^k` with matrix coefficients, for interval (or any
    /// point-evaluable) measures.
    Polynomial { coefficients: Vec<Array2<Complex64>> },
    /// One explicit value per atom of a discrete measure, aligned by index.
    Tabulated { values: Vec<Array2<Complex64>> },
}

/// A parametrized family `w -> F_w` in `M_{n×m}(C)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameFamily {
    rows: usize,
    cols: usize,
    form: FamilyForm,
}

impl FrameFamily {
    pub fn polynomial(coefficients: Vec<Array2<Complex64>>) -> Result<Self> {
        let first = coefficients.first().ok_or(Error::FormMismatch(
            "polynomial family needs at least one coefficient".into(),
        ))?;
        let (rows, cols) = first.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                context: "frame family",
                expected: "nonempty coefficient matrices".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if coefficients.iter().any(|c| c.dim() != (rows, cols)) {
            return Err(Error::DimensionMismatch {
                context: "frame family",
                expected: format!("{rows}x{cols}"),
                found: "mixed coefficient shapes".into(),
            });
        }
        Ok(FrameFamily { rows, cols, form: FamilyForm::Polynomial { coefficients } })
    }

    pub fn tabulated(values: Vec<Array2<Complex64>>) -> Result<Self> {
        let first = values.first().ok_or(Error::FormMismatch(
            "tabulated family needs at least one value".into(),
        ))?;
        let (rows, cols) = first.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                context: "frame family",
                expected: "nonempty value matrices".into(),
                found: format!("{rows}x{cols}"),
            });
        }
        if values.iter().any(|v| v.dim() != (rows, cols)) {
            return Err(Error::DimensionMismatch {
                context: "frame family",
                expected: format!("{rows}x{cols}"),
                found: "mixed value shapes".into(),
            });
        }
        Ok(FrameFamily { rows, cols, form: FamilyForm::Tabulated { values } })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn form(&self) -> &FamilyForm {
        &self.form
    }

    /// Polynomial degree, if the family is polynomial.
    pub fn degree(&self) -> Option<usize> {
        match &self.form {
            FamilyForm::Polynomial { coefficients } => Some(coefficients.len() - 1),
            FamilyForm::Tabulated { .. } => None,
        }
    }

    /// Value `F_w` at node `index` with parameter `point`.
    ///
    /// Polynomial families evaluate by Horner's rule at `point`; tabulated
    /// families ignore `point` and return the stored value at `index`.
    pub fn eval(&self, index: usize, point: f64) -> Array2<Complex64> {
        match &self.form {
            FamilyForm::Polynomial { coefficients } => {
                let mut acc = coefficients.last().expect("nonempty").clone();
                for coeff in coefficients.iter().rev().skip(1) {
                    acc.mapv_inplace(|z| z * point);
                    acc += coeff;
                }
                acc
            }
            FamilyForm::Tabulated { values } => values[index].clone(),
        }
    }

    /// Checks the family is evaluable on the measure's node set.
    pub fn check_measure(&self, ms: &MeasureSpace) -> Result<()> {
        match &self.form {
            FamilyForm::Polynomial { .. } => Ok(()),
            FamilyForm::Tabulated { values } => {
                if !ms.is_discrete() {
                    return Err(Error::FormMismatch(
                        "tabulated family requires a discrete measure".into(),
                    ));
                }
                if values.len() != ms.node_count() {
                    return Err(Error::FormMismatch(format!(
                        "tabulated family has {} values but the measure has {} atoms",
                        values.len(),
                        ms.node_count()
                    )));
                }
                Ok(())
            }
        }
    }

    /// The transported family `w -> F_w M`.
    pub fn right_multiplied(&self, m: &Array2<Complex64>) -> Result<FrameFamily> {
        if m.nrows() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "family transport",
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", m.nrows()),
            });
        }
        let map = |mats: &[Array2<Complex64>]| mats.iter().map(|c| c.dot(m)).collect();
        let form = match &self.form {
            FamilyForm::Polynomial { coefficients } => {
                FamilyForm::Polynomial { coefficients: map(coefficients) }
            }
            FamilyForm::Tabulated { values } => FamilyForm::Tabulated { values: map(values) },
        };
        Ok(FrameFamily { rows: self.rows, cols: m.ncols(), form })
    }

    pub fn scaled(&self, factor: Complex64) -> FrameFamily {
        let map = |mats: &[Array2<Complex64>]| -> Vec<Array2<Complex64>> {
            mats.iter().map(|c| c.mapv(|z| z * factor)).collect()
        };
        let form = match &self.form {
            FamilyForm::Polynomial { coefficients } => {
                FamilyForm::Polynomial { coefficients: map(coefficients) }
            }
            FamilyForm::Tabulated { values } => FamilyForm::Tabulated { values: map(values) },
        };
        FrameFamily { rows: self.rows, cols: self.cols, form }
    }

    /// The difference family `w -> F_w - G_w`. Polynomial forms subtract
    /// coefficientwise (shorter lists are zero-padded); tabulated forms
    /// subtract pointwise and must share the atom count.
    pub fn difference(&self, other: &FrameFamily) -> Result<FrameFamily> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "family difference",
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        let form = match (&self.form, &other.form) {
            (
                FamilyForm::Polynomial { coefficients: a },
                FamilyForm::Polynomial { coefficients: b },
            ) => {
                let len = a.len().max(b.len());
                let zero = Array2::<Complex64>::zeros((self.rows, self.cols));
                let coefficients = (0..len)
                    .map(|k| {
                        let ca = a.get(k).unwrap_or(&zero);
                        let cb = b.get(k).unwrap_or(&zero);
                        ca - cb
                    })
                    .collect();
                FamilyForm::Polynomial { coefficients }
            }
            (FamilyForm::Tabulated { values: a }, FamilyForm::Tabulated { values: b }) => {
                if a.len() != b.len() {
                    return Err(Error::FormMismatch(format!(
                        "tabulated families differ in atom count: {} vs {}",
                        a.len(),
                        b.len()
                    )));
                }
                let values = a.iter().zip(b).map(|(x, y)| x - y).collect();
                FamilyForm::Tabulated { values }
            }
            _ => {
                return Err(Error::FormMismatch(
                    "cannot mix polynomial and tabulated families".into(),
                ))
            }
        };
        Ok(FrameFamily { rows: self.rows, cols: self.cols, form })
    }

    /// All coefficients (or values) diagonal, in the sense of
    /// [`AlgebraElement::is_diagonal`]'s tolerance convention.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mats = match &self.form {
            FamilyForm::Polynomial { coefficients } => coefficients,
            FamilyForm::Tabulated { values } => values,
        };
        mats.iter().all(|m| {
            let scale = tol * (1.0 + frobenius(m));
            m.indexed_iter().all(|((i, j), z)| i == j || z.norm() <= scale)
        })
    }
}

/// The Gram matrix `G = int F_w* F_w dmu` with its cached spectral
/// decomposition; the frame operator acts as `S x = x G`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    matrix: Array2<Complex64>,
    eig: EigenDecomposition,
}

impl GramMatrix {
    /// Validates hermiticity and near-positivity; a smallest eigenvalue
    /// below `-1e-8` signals a failed quadrature rather than a frame
    /// property and is rejected.
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        let elem = AlgebraElement::new(matrix)?;
        let defect = elem.hermitian_defect();
        if defect > HERM_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let eig = hermitian_eig(&elem, EIG_TOL)?;
        if eig.lambda_min() < -1e-8 {
            return Err(Error::NotPositive { lambda_min: eig.lambda_min() });
        }
        Ok(GramMatrix { matrix: elem.into_matrix(), eig })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn as_element(&self) -> AlgebraElement {
        AlgebraElement::new(self.matrix.clone()).expect("gram matrix is square")
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eig.lambda_min()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eig.lambda_max()
    }

    /// `G^{-1/2}`; requires `lambda_min > tol`.
    pub fn inv_sqrt(&self, tol: f64) -> Result<Array2<Complex64>> {
        if self.lambda_min() <= tol {
            return Err(Error::NotAFrame { lambda_min: self.lambda_min() });
        }
        Ok(self.eig.apply_spectral(|l| 1.0 / l.sqrt()))
    }

    /// `G^{-1}`; requires `lambda_min > tol`.
    pub fn inverse(&self, tol: f64) -> Result<Array2<Complex64>> {
        if self.lambda_min() <= tol {
            return Err(Error::NotAFrame { lambda_min: self.lambda_min() });
        }
        Ok(self.eig.apply_spectral(|l| 1.0 / l))
    }
}

/// Scalar frame bounds `0 < A <= B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && upper > 0.0 && lower <= upper) {
            return Err(Error::NonPositiveBound(format!(
                "need 0 < A <= B, got A = {lower}, B = {upper}"
            )));
        }
        Ok(FrameBounds { lower, upper })
    }
}

/// Algebra-valued frame bounds; both elements must be invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct StarFrameBounds {
    lower: AlgebraElement,
    upper: AlgebraElement,
}

impl StarFrameBounds {
    pub fn new(lower: AlgebraElement, upper: AlgebraElement) -> Result<Self> {
        for (name, elem) in [("lower", &lower), ("upper", &upper)] {
            let sigma_min = crate::algebra::singular_extremes(elem.matrix()).0;
            if sigma_min <= INVERTIBILITY_TOL {
                return Err(Error::NonPositiveBound(format!(
                    "{name} star bound is not invertible (sigma_min = {sigma_min:.3e})"
                )));
            }
        }
        if lower.dim() != upper.dim() {
            return Err(Error::DimensionMismatch {
                context: "star bounds",
                expected: format!("dim {}", lower.dim()),
                found: format!("dim {}", upper.dim()),
            });
        }
        Ok(StarFrameBounds { lower, upper })
    }

    pub fn lower(&self) -> &AlgebraElement {
        &self.lower
    }

    pub fn upper(&self) -> &AlgebraElement {
        &self.upper
    }
}

/// Scalar or algebra-valued bounds, for operations that accept either.
#[derive(Debug, Clone, PartialEq)]
pub enum Bounds {
    Scalar(FrameBounds),
    Star(StarFrameBounds),
}

/// Computes the Gram matrix `G = int F_w* F_w dmu` by quadrature.
pub fn gram(family: &FrameFamily, ms: &MeasureSpace) -> Result<GramMatrix> {
    family.check_measure(ms)?;
    let m = family.cols();
    let mut acc = MatrixAccumulator::new(m, m);
    for (index, node) in ms.nodes().iter().enumerate() {
        let value = family.eval(index, node.point);
        acc.add_scaled(node.weight, &conj_transpose(&value).dot(&value));
    }
    GramMatrix::new(acc.finish())
}

/// `S x = x G`.
pub fn frame_operator_apply(gram: &GramMatrix, x: &ModuleVector) -> Result<ModuleVector> {
    if x.cols() != gram.dim() {
        return Err(Error::DimensionMismatch {
            context: "frame operator",
            expected: format!("{} columns", gram.dim()),
            found: format!("{} columns", x.cols()),
        });
    }
    ModuleVector::new(x.matrix().dot(gram.matrix()))
}

/// The analysis operator: samples `w -> <x, F_w> = x F_w*` on the node set.
pub fn analysis(family: &FrameFamily, ms: &MeasureSpace, x: &ModuleVector) -> Result<SampledFunction> {
    family.check_measure(ms)?;
    if x.rows() != family.rows() || x.cols() != family.cols() {
        return Err(Error::DimensionMismatch {
            context: "analysis",
            expected: format!("{}x{}", family.rows(), family.cols()),
            found: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let nodes = ms.nodes().to_vec();
    let values = nodes
        .iter()
        .enumerate()
        .map(|(index, node)| {
            let fw = family.eval(index, node.point);
            x.matrix().dot(&conj_transpose(&fw))
        })
        .collect();
    SampledFunction::new(nodes, values)
}

/// The synthesis operator: `T* phi = int phi(w) F_w dmu`.
pub fn synthesis(
    family: &FrameFamily,
    ms: &MeasureSpace,
    phi: &SampledFunction,
) -> Result<ModuleVector> {
    family.check_measure(ms)?;
    if phi.nodes() != ms.nodes() {
        return Err(Error::NodeMismatch);
    }
    let shape = phi.values().first().map(|v| v.dim()).unwrap_or((0, 0));
    if shape.1 != family.rows() {
        return Err(Error::DimensionMismatch {
            context: "synthesis",
            expected: format!("values with {} columns", family.rows()),
            found: format!("values with {} columns", shape.1),
        });
    }
    let mut acc = MatrixAccumulator::new(shape.0, family.cols());
    for (index, (node, value)) in ms.nodes().iter().zip(phi.values()).enumerate() {
        let fw = family.eval(index, node.point);
        acc.add_scaled(node.weight, &value.dot(&fw));
    }
    ModuleVector::new(acc.finish())
}

/// The tightest scalar constants satisfying the frame sandwich:
/// `(lambda_min(G), lambda_max(G))`. `x (G - A I) x* >= 0` for every module
/// vector iff `G >= A I`, so no better constants exist.
pub fn optimal_scalar_bounds(gram: &GramMatrix, tol: f64) -> Result<FrameBounds> {
    let lambda_min = gram.lambda_min();
    if lambda_min <= tol {
        return Err(Error::NotAFrame { lambda_min });
    }
    FrameBounds::new(lambda_min, gram.lambda_max())
}

/// Outcome of checking candidate scalar bounds against a Gram matrix.
#[derive(Debug, Clone, Copy)]
pub struct ScalarBoundCheck {
    pub accepted: bool,
    /// `lambda_min(G - A I)`.
    pub lower_margin: f64,
    /// `lambda_min(B I - G)`.
    pub upper_margin: f64,
}

/// Checks `A I <= G <= B I` in the Loewner order at tolerance `tol`.
pub fn verify_scalar_bounds(gram: &GramMatrix, lower: f64, upper: f64, tol: f64) -> ScalarBoundCheck {
    let g = gram.as_element();
    let n = gram.dim();
    let low = loewner_leq(&AlgebraElement::scalar(n, Complex64::new(lower, 0.0)), &g, tol)
        .expect("gram and scalar matrices are Hermitian");
    let high = loewner_leq(&g, &AlgebraElement::scalar(n, Complex64::new(upper, 0.0)), tol)
        .expect("gram and scalar matrices are Hermitian");
    ScalarBoundCheck {
        accepted: low.holds && high.holds,
        lower_margin: low.margin,
        upper_margin: high.margin,
    }
}

/// Certification strategy for algebra-valued bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    /// Exact, for `A = alpha I`, `B = beta I`.
    Scalar,
    /// Exact, for the diagonal subalgebra with diagonal family and `m = n`.
    Diagonal,
    /// Seeded sampling; can falsify but never certify.
    Randomized,
}

/// Outcome of a star-bound verification.
#[derive(Debug, Clone)]
pub enum StarBoundVerdict {
    /// The sandwich holds for every module vector (exact modes only).
    Certified { lower_margin: f64, upper_margin: f64 },
    /// A concrete witness violates one side of the sandwich.
    Falsified { witness: ModuleVector, lower_margin: f64, upper_margin: f64 },
    /// Sampling found no violation (randomized mode only).
    NotFalsified { samples: usize, lower_margin: f64, upper_margin: f64 },
}

impl StarBoundVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, StarBoundVerdict::Certified { .. })
    }

    pub fn is_falsified(&self) -> bool {
        matches!(self, StarBoundVerdict::Falsified { .. })
    }
}

/// Verifies the algebra-valued sandwich
/// `A <x,x> A* <= x G x* <= B <x,x> B*` for all `x`.
///
/// The scalar and diagonal modes decide the condition exactly through the
/// spectrum (respectively the diagonal) of `G`; the randomized mode draws
/// `samples` unit-Frobenius vectors from the seeded generator and can only
/// falsify. Structural preconditions that fail yield `ModeUnavailable`.
#[allow(clippy::too_many_arguments)]
pub fn verify_star_bounds(
    algebra: &Algebra,
    family: &FrameFamily,
    ms: &MeasureSpace,
    bounds: &StarFrameBounds,
    mode: StarMode,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<StarBoundVerdict> {
    if bounds.lower.dim() != family.rows() {
        return Err(Error::DimensionMismatch {
            context: "star bounds",
            expected: format!("dim {}", family.rows()),
            found: format!("dim {}", bounds.lower.dim()),
        });
    }
    let g = gram(family, ms)?;
    match mode {
        StarMode::Scalar => {
            let alpha = scalar_part(&bounds.lower, tol).ok_or_else(|| {
                Error::ModeUnavailable("scalar mode needs A = alpha I".into())
            })?;
            let beta = scalar_part(&bounds.upper, tol).ok_or_else(|| {
                Error::ModeUnavailable("scalar mode needs B = beta I".into())
            })?;
            let lower_margin = g.lambda_min() - alpha.norm_sqr();
            let upper_margin = beta.norm_sqr() - g.lambda_max();
            if lower_margin >= -tol && upper_margin >= -tol {
                Ok(StarBoundVerdict::Certified { lower_margin, upper_margin })
            } else {
                let witness = if lower_margin < -tol {
                    eigenvector_witness(family, &g, 0)
                } else {
                    eigenvector_witness(family, &g, g.dim() - 1)
                };
                Ok(StarBoundVerdict::Falsified { witness, lower_margin, upper_margin })
            }
        }
        StarMode::Diagonal => {
            if !algebra.diagonal {
                return Err(Error::ModeUnavailable(
                    "diagonal mode needs the diagonal-algebra flag".into(),
                ));
            }
            if family.rows() != family.cols() {
                return Err(Error::ModeUnavailable("diagonal mode needs m = n".into()));
            }
            if !family.is_diagonal(1e-14) {
                return Err(Error::ModeUnavailable("diagonal mode needs a diagonal family".into()));
            }
            for (name, elem) in [("A", &bounds.lower), ("B", &bounds.upper)] {
                if !elem.is_diagonal(1e-14) {
                    return Err(Error::ModeUnavailable(format!(
                        "diagonal mode needs diagonal bound {name}"
                    )));
                }
            }
            let mut lower_margin = f64::INFINITY;
            let mut upper_margin = f64::INFINITY;
            let mut worst_index = 0usize;
            for i in 0..g.dim() {
                let gii = g.matrix()[(i, i)].re;
                let lo = gii - bounds.lower.matrix()[(i, i)].norm_sqr();
                let hi = bounds.upper.matrix()[(i, i)].norm_sqr() - gii;
                if lo.min(hi) < lower_margin.min(upper_margin) {
                    worst_index = i;
                }
                lower_margin = lower_margin.min(lo);
                upper_margin = upper_margin.min(hi);
            }
            if lower_margin >= -tol && upper_margin >= -tol {
                Ok(StarBoundVerdict::Certified { lower_margin, upper_margin })
            } else {
                let mut witness = Array2::zeros((g.dim(), g.dim()));
                witness[(worst_index, worst_index)] = Complex64::new(1.0, 0.0);
                Ok(StarBoundVerdict::Falsified {
                    witness: ModuleVector::new(witness).expect("nonempty witness"),
                    lower_margin,
                    upper_margin,
                })
            }
        }
        StarMode::Randomized => {
            let draw_diagonal = algebra.diagonal && family.rows() == family.cols();
            let mut worst_lower = f64::INFINITY;
            let mut worst_upper = f64::INFINITY;
            let a = &bounds.lower;
            let b = &bounds.upper;
            for index in 0..samples {
                let mut rng = SplitMix64::fork(seed, index as u64);
                let x = loop {
                    if let Some(x) =
                        rng.unit_frobenius_matrix(family.rows(), family.cols(), draw_diagonal)
                    {
                        break ModuleVector::new(x)?;
                    }
                };
                let xgx = sandwich(x.matrix(), g.matrix());
                let xx = crate::hilbert::inner_product(&x, &x)?;
                let axxa = &(a * &xx) * &a.adjoint();
                let bxxb = &(b * &xx) * &b.adjoint();
                let lower = loewner_leq(&axxa, &xgx, tol)?;
                let upper = loewner_leq(&xgx, &bxxb, tol)?;
                worst_lower = worst_lower.min(lower.margin);
                worst_upper = worst_upper.min(upper.margin);
                if !lower.holds || !upper.holds {
                    return Ok(StarBoundVerdict::Falsified {
                        witness: x,
                        lower_margin: lower.margin,
                        upper_margin: upper.margin,
                    });
                }
            }
            Ok(StarBoundVerdict::NotFalsified {
                samples,
                lower_margin: worst_lower,
                upper_margin: worst_upper,
            })
        }
    }
}

/// `x G x*` as an algebra element.
fn sandwich(x: &Array2<Complex64>, g: &Array2<Complex64>) -> AlgebraElement {
    AlgebraElement::new(x.dot(g).dot(&conj_transpose(x))).expect("square sandwich")
}

/// `alpha` when `a = alpha I` up to `tol * (1 + ||a||_F)` entrywise.
fn scalar_part(a: &AlgebraElement, tol: f64) -> Option<Complex64> {
    let alpha = a.matrix()[(0, 0)];
    let scale = tol.max(1e-14) * (1.0 + a.frobenius_norm());
    let ok = a.matrix().indexed_iter().all(|((i, j), z)| {
        if i == j {
            (z - alpha).norm() <= scale
        } else {
            z.norm() <= scale
        }
    });
    if ok {
        Some(alpha)
    } else {
        None
    }
}

/// A module vector concentrating the Gram quadratic form on eigenvalue
/// `index`: the eigenvector as a single nonzero row.
fn eigenvector_witness(family: &FrameFamily, g: &GramMatrix, index: usize) -> ModuleVector {
    let mut mat = Array2::zeros((family.rows(), family.cols()));
    for j in 0..family.cols() {
        mat[(0, j)] = g.eig.basis[(j, index)].conj();
    }
    ModuleVector::new(mat).expect("nonempty witness")
}

/// `F'_w = F_w G^{-1/2}`: the canonical Parseval family.
pub fn canonical_parseval(family: &FrameFamily, gram: &GramMatrix, tol: f64) -> Result<FrameFamily> {
    let factor = gram.inv_sqrt(tol)?;
    family.right_multiplied(&factor)
}

/// The canonical dual `F~_w = F_w G^{-1}`, satisfying
/// `int F~_w* F_w dmu = I`.
pub fn canonical_dual(family: &FrameFamily, gram: &GramMatrix, tol: f64) -> Result<FrameFamily> {
    let factor = gram.inverse(tol)?;
    family.right_multiplied(&factor)
}

/// Reconstructs `x` from its analysis coefficients through the canonical
/// dual: `x = int <x, F_w> F~_w dmu`.
pub fn reconstruct(
    x: &ModuleVector,
    family: &FrameFamily,
    ms: &MeasureSpace,
    gram: &GramMatrix,
) -> Result<ModuleVector> {
    let coefficients = analysis(family, ms, x)?;
    let dual = canonical_dual(family, gram, FRAME_TOL)?;
    synthesis(&dual, ms, &coefficients)
}

/// Image of a frame under a surjective adjointable map.
#[derive(Debug, Clone)]
pub struct ImageFrame {
    pub family: FrameFamily,
    pub gram: GramMatrix,
    pub predicted_bounds: Bounds,
}

/// Transports a frame through `V: x -> x M` and predicts bounds for the
/// image from the surjectivity gap and the operator norm.
///
/// The image family is `w -> F_w M`, its frame operator is `V S V*`, i.e.
/// the image Gram matrix is `M* G M`; the predicted scalar bounds are
/// `(A lambda_min(M*M), B ||V||^2)` and the predicted star bounds scale the
/// bound elements by `sqrt(lambda_min(M*M))` and `||V||`.
pub fn image_frame(
    family: &FrameFamily,
    gram: &GramMatrix,
    bounds: &Bounds,
    map: &AdjointableMap,
    tol: f64,
) -> Result<ImageFrame> {
    if map.source_cols() != family.cols() {
        return Err(Error::DimensionMismatch {
            context: "image frame",
            expected: format!("map with {} source columns", family.cols()),
            found: format!("{} source columns", map.source_cols()),
        });
    }
    // One decomposition of M*M supplies both the surjectivity gap and the
    // squared operator norm, keeping the predicted bounds ordered.
    let (gap, norm_sq) = map.gram_spectrum_extremes();
    if gap <= tol {
        return Err(Error::NotSurjective { gap });
    }
    let image_family = family.right_multiplied(map.matrix())?;
    let m = map.matrix();
    let image_gram_matrix = conj_transpose(m).dot(gram.matrix()).dot(m);
    // Rounding can leave an asymmetry of a few ulps; restore the exact
    // Hermitian structure the Gram constructor expects.
    let hermitized = (&image_gram_matrix + &conj_transpose(&image_gram_matrix)).mapv(|z| z * 0.5);
    let image_gram = GramMatrix::new(hermitized)?;
    let predicted_bounds = match bounds {
        Bounds::Scalar(fb) => {
            Bounds::Scalar(FrameBounds::new(fb.lower * gap, fb.upper * norm_sq)?)
        }
        Bounds::Star(sb) => Bounds::Star(StarFrameBounds::new(
            sb.lower.scale(Complex64::new(gap.sqrt(), 0.0)),
            sb.upper.scale(Complex64::new(norm_sq.sqrt(), 0.0)),
        )?),
    };
    Ok(ImageFrame { family: image_family, gram: image_gram, predicted_bounds })
}

/// Summary of the frame condition for one family and measure.
#[derive(Debug, Clone)]
pub struct FrameReport {
    pub gram: GramMatrix,
    pub bounds: Option<FrameBounds>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub is_frame: bool,
    pub is_tight: bool,
    pub is_parseval: bool,
    /// `B - A` when the family is a frame.
    pub tightness_gap: Option<f64>,
    /// `||G - I||_F`.
    pub parseval_deviation: f64,
    /// `B / A` when the family is a frame.
    pub condition: Option<f64>,
}

/// Assembles the Gram matrix, optimal bounds and verdicts. `report_tol`
/// controls the tight/Parseval calls; the frame decision itself uses the
/// dedicated [`FRAME_TOL`] rank threshold.
pub fn frame_report(family: &FrameFamily, ms: &MeasureSpace, report_tol: f64) -> Result<FrameReport> {
    let g = gram(family, ms)?;
    let lambda_min = g.lambda_min();
    let lambda_max = g.lambda_max();
    let bounds = optimal_scalar_bounds(&g, FRAME_TOL).ok();
    let eye = Array2::<Complex64>::eye(g.dim());
    let parseval_deviation = frobenius(&(g.matrix() - &eye));
    let tightness_gap = bounds.as_ref().map(|b| b.upper - b.lower);
    let condition = bounds.as_ref().map(|b| b.upper / b.lower);
    let is_frame = bounds.is_some();
    let is_tight = is_frame && tightness_gap.is_some_and(|gap| gap <= report_tol);
    let is_parseval = is_frame && parseval_deviation <= report_tol;
    Ok(FrameReport {
        gram: g,
        bounds,
        lambda_min,
        lambda_max,
        is_frame,
        is_tight,
        is_parseval,
        tightness_gap,
        parseval_deviation,
        condition,
    })
}

/// Convenience: `frame_report` with the default report tolerance.
pub fn frame_report_default(family: &FrameFamily, ms: &MeasureSpace) -> Result<FrameReport> {
    frame_report(family, ms, REPORT_TOL)
}

/// Numerical check that `<x, x>` is positive for module vectors; used by
/// report assembly and tests.
pub fn gram_vector_positivity(x: &ModuleVector, tol: f64) -> bool {
    let g = crate::hilbert::inner_product(x, x).expect("matching dims");
    is_positive(&g, tol).is_positive
}

/// `||V||` for the right-multiplication realization, exposed next to the
/// frame transport for convenience.
pub fn map_norm(map: &AdjointableMap) -> f64 {
    map.operator_norm()
}

/// `||a||` shortcut re-exported for report assembly.
pub fn element_norm(a: &AlgebraElement) -> f64 {
    operator_norm(a)
}
