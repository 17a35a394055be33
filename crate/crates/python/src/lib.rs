//! Python bindings for the integral-frame engine.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers
//! (row-major); measures and families are opaque handles. Example:
//!
//! ```python
//! import modframe as mf
//! ms = mf.MeasureSpace.lebesgue(0.0, 1.0)
//! family = mf.FrameFamily.polynomial([
//!     [[0, 0], [0, 0]],          # constant coefficient
//!     [[1, 0], [0, 1]],          # linear coefficient
//! ])
//! report = mf.frame_report(family, ms)
//! assert report["is_tight"]
//! ```

use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use modframe_core::algebra::AlgebraElement;
use modframe_core::frames::{self, Bounds, FamilyForm, StarBoundVerdict};
use modframe_core::hilbert::{AdjointableMap, ModuleVector};
use modframe_core::oracle;
use modframe_core::stability;
use modframe_core::tolerances;

type PyMatrix = Vec<Vec<Complex64>>;

fn core_err(e: modframe_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_array(matrix: &PyMatrix, what: &str) -> PyResult<Array2<Complex64>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
        return Err(PyValueError::new_err(format!(
            "{what}: expected a nonempty rectangular matrix"
        )));
    }
    let data: Vec<Complex64> = matrix.iter().flatten().copied().collect();
    Ok(Array2::from_shape_vec((rows, cols), data).expect("shape checked"))
}

fn to_lists(mat: &Array2<Complex64>) -> PyMatrix {
    (0..mat.nrows())
        .map(|i| (0..mat.ncols()).map(|j| mat[(i, j)]).collect())
        .collect()
}

/// A measure on the parameter domain: an interval with composite
/// Gauss-Legendre quadrature, or weighted atoms.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct MeasureSpace {
    inner: modframe_core::MeasureSpace,
}

#[pymethods]
impl MeasureSpace {
    #[staticmethod]
    #[pyo3(signature = (a, b, panels = tolerances::DEFAULT_PANELS, nodes = tolerances::DEFAULT_NODES_PER_PANEL))]
    fn interval(a: f64, b: f64, panels: usize, nodes: usize) -> PyResult<Self> {
        Ok(MeasureSpace {
            inner: modframe_core::MeasureSpace::interval(a, b, panels, nodes).map_err(core_err)?,
        })
    }

    /// Lebesgue measure on `[a, b]` with the default rule.
    #[staticmethod]
    fn lebesgue(a: f64, b: f64) -> PyResult<Self> {
        Ok(MeasureSpace {
            inner: modframe_core::MeasureSpace::lebesgue(a, b).map_err(core_err)?,
        })
    }

    /// Finite discrete measure from `(point, weight)` pairs.
    #[staticmethod]
    fn discrete(atoms: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(MeasureSpace {
            inner: modframe_core::MeasureSpace::discrete(&atoms).map_err(core_err)?,
        })
    }

    fn nodes(&self) -> Vec<(f64, f64)> {
        self.inner.nodes().iter().map(|n| (n.point, n.weight)).collect()
    }

    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn __repr__(&self) -> String {
        format!("MeasureSpace(nodes={})", self.inner.node_count())
    }
}

/// A parametrized family `w -> F_w` of module elements.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct FrameFamily {
    inner: frames::FrameFamily,
}

#[pymethods]
impl FrameFamily {
    /// Polynomial family from coefficient matrices `C_0, ..., C_d`
    /// (`F_w = sum C_k w^k`).
    #[staticmethod]
    fn polynomial(coefficients: Vec<PyMatrix>) -> PyResult<Self> {
        let mats: PyResult<Vec<_>> = coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| to_array(c, &format!("coefficients[{k}]")))
            .collect();
        Ok(FrameFamily {
            inner: frames::FrameFamily::polynomial(mats?).map_err(core_err)?,
        })
    }

    /// Tabulated family aligned with the atoms of a discrete measure.
    #[staticmethod]
    fn tabulated(matrices: Vec<PyMatrix>) -> PyResult<Self> {
        let mats: PyResult<Vec<_>> = matrices
            .iter()
            .enumerate()
            .map(|(k, c)| to_array(c, &format!("matrices[{k}]")))
            .collect();
        Ok(FrameFamily {
            inner: frames::FrameFamily::tabulated(mats?).map_err(core_err)?,
        })
    }

    fn rows(&self) -> usize {
        self.inner.rows()
    }

    fn cols(&self) -> usize {
        self.inner.cols()
    }

    /// Evaluates `F_w`; for tabulated families `index` selects the atom.
    #[pyo3(signature = (point, index = 0))]
    fn eval(&self, point: f64, index: usize) -> PyMatrix {
        to_lists(&self.inner.eval(index, point))
    }

    fn coefficients(&self) -> Vec<PyMatrix> {
        match self.inner.form() {
            FamilyForm::Polynomial { coefficients } => coefficients.iter().map(to_lists).collect(),
            FamilyForm::Tabulated { values } => values.iter().map(to_lists).collect(),
        }
    }

    fn scaled(&self, factor: Complex64) -> FrameFamily {
        FrameFamily { inner: self.inner.scaled(factor) }
    }

    fn __repr__(&self) -> String {
        format!(
            "FrameFamily({}x{}, {})",
            self.inner.rows(),
            self.inner.cols(),
            match self.inner.form() {
                FamilyForm::Polynomial { coefficients } =>
                    format!("polynomial degree {}", coefficients.len() - 1),
                FamilyForm::Tabulated { values } => format!("tabulated, {} values", values.len()),
            }
        )
    }
}

/// The Gram matrix of a family with its spectral data.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct GramMatrix {
    inner: frames::GramMatrix,
}

#[pymethods]
impl GramMatrix {
    fn matrix(&self) -> PyMatrix {
        to_lists(self.inner.matrix())
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn lambda_min(&self) -> f64 {
        self.inner.lambda_min()
    }

    fn lambda_max(&self) -> f64 {
        self.inner.lambda_max()
    }

    fn __repr__(&self) -> String {
        format!(
            "GramMatrix(dim={}, lambda_min={:.6e}, lambda_max={:.6e})",
            self.inner.dim(),
            self.inner.lambda_min(),
            self.inner.lambda_max()
        )
    }
}

/// `G = int F_w* F_w dmu` by quadrature.
#[pyfunction]
fn gram(family: &FrameFamily, measure: &MeasureSpace) -> PyResult<GramMatrix> {
    Ok(GramMatrix { inner: frames::gram(&family.inner, &measure.inner).map_err(core_err)? })
}

/// Frame verdicts and optimal bounds as a dict.
#[pyfunction]
#[pyo3(signature = (family, measure, report_tol = tolerances::REPORT_TOL))]
fn frame_report<'py>(
    py: Python<'py>,
    family: &FrameFamily,
    measure: &MeasureSpace,
    report_tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = frames::frame_report(&family.inner, &measure.inner, report_tol).map_err(core_err)?;
    let dict = PyDict::new(py);
    dict.set_item("is_frame", report.is_frame)?;
    dict.set_item("is_tight", report.is_tight)?;
    dict.set_item("is_parseval", report.is_parseval)?;
    dict.set_item("lambda_min", report.lambda_min)?;
    dict.set_item("lambda_max", report.lambda_max)?;
    dict.set_item("bounds", report.bounds.map(|b| (b.lower, b.upper)))?;
    dict.set_item("tightness_gap", report.tightness_gap)?;
    dict.set_item("parseval_deviation", report.parseval_deviation)?;
    dict.set_item("condition", report.condition)?;
    dict.set_item("gram", to_lists(report.gram.matrix()))?;
    dict.set_item("gram_spectrum", report.gram.eigenvalues().to_vec())?;
    Ok(dict)
}

/// `(lambda_min, lambda_max)` of the Gram matrix; raises if not a frame.
#[pyfunction]
#[pyo3(signature = (gram, tol = tolerances::FRAME_TOL))]
fn optimal_bounds(gram: &GramMatrix, tol: f64) -> PyResult<(f64, f64)> {
    let bounds = frames::optimal_scalar_bounds(&gram.inner, tol).map_err(core_err)?;
    Ok((bounds.lower, bounds.upper))
}

/// The canonical Parseval family `F G^{-1/2}`.
#[pyfunction]
#[pyo3(signature = (family, gram, tol = tolerances::FRAME_TOL))]
fn canonical_parseval(family: &FrameFamily, gram: &GramMatrix, tol: f64) -> PyResult<FrameFamily> {
    Ok(FrameFamily {
        inner: frames::canonical_parseval(&family.inner, &gram.inner, tol).map_err(core_err)?,
    })
}

/// The canonical dual family `F G^{-1}`.
#[pyfunction]
#[pyo3(signature = (family, gram, tol = tolerances::FRAME_TOL))]
fn canonical_dual(family: &FrameFamily, gram: &GramMatrix, tol: f64) -> PyResult<FrameFamily> {
    Ok(FrameFamily {
        inner: frames::canonical_dual(&family.inner, &gram.inner, tol).map_err(core_err)?,
    })
}

/// Reconstructs a module vector from its frame coefficients through the
/// canonical dual.
#[pyfunction]
fn reconstruct(
    x: PyMatrix,
    family: &FrameFamily,
    measure: &MeasureSpace,
    gram: &GramMatrix,
) -> PyResult<PyMatrix> {
    let vector = ModuleVector::new(to_array(&x, "x")?).map_err(core_err)?;
    let rebuilt = frames::reconstruct(&vector, &family.inner, &measure.inner, &gram.inner)
        .map_err(core_err)?;
    Ok(to_lists(rebuilt.matrix()))
}

/// Transports the frame through `x -> x M` and predicts bounds for the
/// image.
#[pyfunction]
#[pyo3(signature = (family, measure, map, tol = tolerances::FRAME_TOL))]
fn image_frame<'py>(
    py: Python<'py>,
    family: &FrameFamily,
    measure: &MeasureSpace,
    map: PyMatrix,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let g = frames::gram(&family.inner, &measure.inner).map_err(core_err)?;
    let bounds = Bounds::Scalar(frames::optimal_scalar_bounds(&g, tol).map_err(core_err)?);
    let map = AdjointableMap::new(to_array(&map, "map")?).map_err(core_err)?;
    let image = frames::image_frame(&family.inner, &g, &bounds, &map, tol).map_err(core_err)?;
    let dict = PyDict::new(py);
    dict.set_item("family", FrameFamily { inner: image.family })?;
    dict.set_item("gram", GramMatrix { inner: image.gram })?;
    match image.predicted_bounds {
        Bounds::Scalar(fb) => dict.set_item("predicted_bounds", (fb.lower, fb.upper))?,
        Bounds::Star(_) => unreachable!("scalar bounds in"),
    }
    dict.set_item("surjectivity_gap", map.surjectivity_gap())?;
    Ok(dict)
}

/// Verifies algebra-valued bounds `A <x,x> A* <= x G x* <= B <x,x> B*`.
///
/// `mode` is `"scalar"`, `"diagonal"` or `"randomized"`; the diagonal mode
/// requires `diagonal_algebra=True`.
#[pyfunction]
#[pyo3(signature = (family, measure, lower, upper, mode, diagonal_algebra = false, samples = 200, seed = 1, tol = tolerances::FRAME_TOL))]
#[allow(clippy::too_many_arguments)]
fn verify_star_bounds<'py>(
    py: Python<'py>,
    family: &FrameFamily,
    measure: &MeasureSpace,
    lower: PyMatrix,
    upper: PyMatrix,
    mode: &str,
    diagonal_algebra: bool,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = match mode {
        "scalar" => frames::StarMode::Scalar,
        "diagonal" => frames::StarMode::Diagonal,
        "randomized" => frames::StarMode::Randomized,
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be scalar, diagonal or randomized, got {other}"
            )))
        }
    };
    let algebra = if diagonal_algebra {
        modframe_core::Algebra::diagonal(family.inner.rows())
    } else {
        modframe_core::Algebra::full(family.inner.rows())
    };
    let bounds = frames::StarFrameBounds::new(
        AlgebraElement::new(to_array(&lower, "lower")?).map_err(core_err)?,
        AlgebraElement::new(to_array(&upper, "upper")?).map_err(core_err)?,
    )
    .map_err(core_err)?;
    let verdict = frames::verify_star_bounds(
        &algebra,
        &family.inner,
        &measure.inner,
        &bounds,
        mode,
        samples,
        seed,
        tol,
    )
    .map_err(core_err)?;
    let dict = PyDict::new(py);
    match verdict {
        StarBoundVerdict::Certified { lower_margin, upper_margin } => {
            dict.set_item("verdict", "certified")?;
            dict.set_item("lower_margin", lower_margin)?;
            dict.set_item("upper_margin", upper_margin)?;
        }
        StarBoundVerdict::Falsified { witness, lower_margin, upper_margin } => {
            dict.set_item("verdict", "falsified")?;
            dict.set_item("lower_margin", lower_margin)?;
            dict.set_item("upper_margin", upper_margin)?;
            dict.set_item("witness", to_lists(witness.matrix()))?;
        }
        StarBoundVerdict::NotFalsified { samples, lower_margin, upper_margin } => {
            dict.set_item("verdict", "not_falsified")?;
            dict.set_item("samples", samples)?;
            dict.set_item("lower_margin", lower_margin)?;
            dict.set_item("upper_margin", upper_margin)?;
        }
    }
    Ok(dict)
}

/// Full perturbation-stability analysis of a frame pair.
#[pyfunction]
#[pyo3(signature = (base, perturbed, measure, samples = 200, seed = 1, tol = 1e-9))]
fn stability_report<'py>(
    py: Python<'py>,
    base: &FrameFamily,
    perturbed: &FrameFamily,
    measure: &MeasureSpace,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = stability::stability_report(
        &base.inner,
        &perturbed.inner,
        &measure.inner,
        samples,
        seed,
        tol,
    )
    .map_err(core_err)?;
    let dict = PyDict::new(py);
    dict.set_item("m_certified", report.m_certified)?;
    dict.set_item("m_theorem_forward", report.m_theorem_forward)?;
    dict.set_item("base_bounds", (report.base_bounds.lower, report.base_bounds.upper))?;
    dict.set_item(
        "perturbed_bounds",
        (report.perturbed_bounds.lower, report.perturbed_bounds.upper),
    )?;
    dict.set_item("derived_bounds", (report.derived_bounds.lower, report.derived_bounds.upper))?;
    dict.set_item("sampled_max_ratio", report.sampled_max_ratio)?;
    dict.set_item("samples", report.samples)?;
    Ok(dict)
}

/// Closed-form stability constant from two optimal bound pairs.
#[pyfunction]
fn theorem_forward_constant(a: f64, b: f64, c: f64, d: f64) -> PyResult<f64> {
    stability::theorem_forward_constant(a, b, c, d).map_err(core_err)
}

/// Frame bounds for the perturbed family implied by stability constant `m`.
#[pyfunction]
fn derived_bounds_from_m(a: f64, b: f64, m: f64) -> PyResult<(f64, f64)> {
    let bounds = stability::derived_bounds_from_m(a, b, m).map_err(core_err)?;
    Ok((bounds.lower, bounds.upper))
}

/// Reference Gram matrix by the midpoint Riemann rule (test oracle).
#[pyfunction]
#[pyo3(signature = (family, a, b, subintervals = 100_000))]
fn riemann_gram(family: &FrameFamily, a: f64, b: f64, subintervals: usize) -> PyResult<GramMatrix> {
    Ok(GramMatrix {
        inner: oracle::riemann_gram(&family.inner, a, b, oracle::RiemannRule { subintervals })
            .map_err(core_err)?,
    })
}

/// Seeded random polynomial family (test generator).
#[pyfunction]
#[pyo3(signature = (seed, n, m, degree, offset = 2.5))]
fn random_frame(seed: u64, n: usize, m: usize, degree: usize, offset: f64) -> FrameFamily {
    FrameFamily { inner: oracle::random_frame(seed, n, m, degree, offset) }
}

#[pymodule]
fn modframe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MeasureSpace>()?;
    m.add_class::<FrameFamily>()?;
    m.add_class::<GramMatrix>()?;
    m.add_function(wrap_pyfunction!(gram, m)?)?;
    m.add_function(wrap_pyfunction!(frame_report, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_parseval, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_dual, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(image_frame, m)?)?;
    m.add_function(wrap_pyfunction!(verify_star_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(stability_report, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_forward_constant, m)?)?;
    m.add_function(wrap_pyfunction!(derived_bounds_from_m, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_gram, m)?)?;
    m.add_function(wrap_pyfunction!(random_frame, m)?)?;
    Ok(())
}
