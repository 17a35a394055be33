//! Measure spaces and the quadrature engine realizing integrals of
//! matrix-valued functions.
//!
//! Two kinds of measure are supported: Lebesgue measure on a bounded
//! interval, discretized by composite Gauss-Legendre rules, and finite
//! discrete measures given by weighted atoms. Composite Gauss-Legendre with
//! `K` nodes per panel integrates polynomials of degree `2K - 1` exactly,
//! which makes frame operators of polynomial families exact up to rounding.
//!
//! Accumulation is a fixed left-to-right sum with Neumaier-compensated
//! addition per matrix entry, so results are deterministic regardless of how
//! integrand evaluations are scheduled.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::{conj_transpose, AlgebraElement};
use crate::error::Error;
use crate::tolerances::{
    DEFAULT_NODES_PER_PANEL, DEFAULT_PANELS, LEGENDRE_NEWTON_MAX_ITER, LEGENDRE_NEWTON_TOL,
};
use crate::Result;

/// One quadrature point with its weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureNode {
    pub point: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum MeasureKind {
    Interval { a: f64, b: f64, panels: usize, nodes_per_panel: usize },
    Discrete { atoms: Vec<QuadratureNode> },
}

/// A measure space `(Omega, mu)` together with its quadrature
/// discretization, built eagerly at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    kind: MeasureKind,
    nodes: Vec<QuadratureNode>,
}

impl MeasureSpace {
    /// Lebesgue measure on `[a, b]` with a composite Gauss-Legendre rule of
    /// `panels` equal panels and `nodes_per_panel` nodes each.
    pub fn interval(a: f64, b: f64, panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval);
        }
        if panels == 0 || nodes_per_panel == 0 {
            return Err(Error::InvalidMeasure(
                "panels and nodes per panel must be at least 1".into(),
            ));
        }
        let reference = gauss_legendre_reference(nodes_per_panel)?;
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * nodes_per_panel);
        for panel in 0..panels {
            let left = a + panel as f64 * width;
            for &QuadratureNode { point, weight } in &reference {
                nodes.push(QuadratureNode {
                    point: left + 0.5 * width * (point + 1.0),
                    weight: 0.5 * width * weight,
                });
            }
        }
        Ok(MeasureSpace {
            kind: MeasureKind::Interval { a, b, panels, nodes_per_panel },
            nodes,
        })
    }

    /// Lebesgue measure on `[a, b]` with the default rule.
    pub fn lebesgue(a: f64, b: f64) -> Result<Self> {
        Self::interval(a, b, DEFAULT_PANELS, DEFAULT_NODES_PER_PANEL)
    }

    /// A finite discrete measure; atoms are taken verbatim as nodes.
    pub fn discrete(atoms: &[(f64, f64)]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("discrete measure needs at least one atom".into()));
        }
        for &(point, weight) in atoms {
            if !point.is_finite() || !weight.is_finite() || weight <= 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom ({point}, {weight}) must have a finite point and positive weight"
                )));
            }
        }
        let nodes: Vec<QuadratureNode> =
            atoms.iter().map(|&(point, weight)| QuadratureNode { point, weight }).collect();
        Ok(MeasureSpace { kind: MeasureKind::Discrete { atoms: nodes.clone() }, nodes })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, MeasureKind::Discrete { .. })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// The quadrature discretization of the measure.
    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    /// Total mass of the measure as seen by the quadrature rule.
    pub fn total_weight(&self) -> f64 {
        let mut acc = Neumaier::default();
        for node in &self.nodes {
            acc.add(node.weight);
        }
        acc.value()
    }

    pub fn interval_endpoints(&self) -> Option<(f64, f64)> {
        match self.kind {
            MeasureKind::Interval { a, b, .. } => Some((a, b)),
            MeasureKind::Discrete { .. } => None,
        }
    }
}

/// Nodes and weights of the `k`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre polynomial `P_k`.
pub fn gauss_legendre_reference(k: usize) -> Result<Vec<QuadratureNode>> {
    if k == 0 {
        return Err(Error::InvalidMeasure("Gauss-Legendre rule needs k >= 1".into()));
    }
    let mut nodes = Vec::with_capacity(k);
    for i in 1..=k {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (k as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..LEGENDRE_NEWTON_MAX_ITER {
            let (p, d) = legendre_value_derivative(k, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= LEGENDRE_NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            // One more evaluation to sharpen the weight; the guess is
            // already accurate to a few ulps for every k we use.
            let (_, d) = legendre_value_derivative(k, x);
            dp = d;
        }
        let weight = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(QuadratureNode { point: x, weight });
    }
    // Newton walks the roots from the right; emit ascending.
    nodes.reverse();
    Ok(nodes)
}

/// `(P_k(x), P_k'(x))` via the three-term recurrence.
fn legendre_value_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let d = k as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Neumaier-compensated scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    compensation: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated accumulator for complex matrices of a fixed shape.
pub(crate) struct MatrixAccumulator {
    rows: usize,
    cols: usize,
    re: Vec<Neumaier>,
    im: Vec<Neumaier>,
}

impl MatrixAccumulator {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        MatrixAccumulator {
            rows,
            cols,
            re: vec![Neumaier::default(); rows * cols],
            im: vec![Neumaier::default(); rows * cols],
        }
    }

    /// Adds `scale * term` entrywise.
    pub(crate) fn add_scaled(&mut self, scale: f64, term: &Array2<Complex64>) {
        debug_assert_eq!(term.dim(), (self.rows, self.cols));
        for (idx, z) in term.iter().enumerate() {
            self.re[idx].add(scale * z.re);
            self.im[idx].add(scale * z.im);
        }
    }

    pub(crate) fn finish(self) -> Array2<Complex64> {
        let data: Vec<Complex64> = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(re, im)| Complex64::new(re.value(), im.value()))
            .collect();
        Array2::from_shape_vec((self.rows, self.cols), data).expect("accumulator shape")
    }
}

/// `sum_i w_i * f(point_i)` over the quadrature nodes of `ms`, accumulated
/// in node order with compensated addition per entry.
pub fn integrate_matrix_function<F>(f: F, ms: &MeasureSpace) -> Result<Array2<Complex64>>
where
    F: Fn(f64) -> Array2<Complex64>,
{
    let nodes = ms.nodes();
    let first = f(nodes[0].point);
    let (rows, cols) = first.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch {
            context: "matrix integrand",
            expected: "nonempty matrix".into(),
            found: format!("{rows}x{cols}"),
        });
    }
    let mut acc = MatrixAccumulator::new(rows, cols);
    acc.add_scaled(nodes[0].weight, &first);
    for node in &nodes[1..] {
        let value = f(node.point);
        if value.dim() != (rows, cols) {
            return Err(Error::DimensionMismatch {
                context: "matrix integrand",
                expected: format!("{rows}x{cols}"),
                found: format!("{}x{}", value.dim().0, value.dim().1),
            });
        }
        acc.add_scaled(node.weight, &value);
    }
    Ok(acc.finish())
}

/// A function sampled on a quadrature node set: one matrix value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<QuadratureNode>,
    values: Vec<Array2<Complex64>>,
}

impl SampledFunction {
    pub fn new(nodes: Vec<QuadratureNode>, values: Vec<Array2<Complex64>>) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::DimensionMismatch {
                context: "sampled function",
                expected: format!("{} values", nodes.len()),
                found: format!("{} values", values.len()),
            });
        }
        if nodes.iter().any(|n| n.weight <= 0.0) {
            return Err(Error::InvalidMeasure("sampled function weights must be positive".into()));
        }
        if let Some(first) = values.first() {
            let shape = first.dim();
            if values.iter().any(|v| v.dim() != shape) {
                return Err(Error::DimensionMismatch {
                    context: "sampled function",
                    expected: format!("{}x{}", shape.0, shape.1),
                    found: "mixed shapes".into(),
                });
            }
        }
        Ok(SampledFunction { nodes, values })
    }

    /// Samples a closure on the node set of `ms`.
    pub fn sample<F>(f: F, ms: &MeasureSpace) -> Result<Self>
    where
        F: Fn(f64) -> Array2<Complex64>,
    {
        let nodes = ms.nodes().to_vec();
        let values = nodes.iter().map(|n| f(n.point)).collect();
        SampledFunction::new(nodes, values)
    }

    pub fn nodes(&self) -> &[QuadratureNode] {
        &self.nodes
    }

    pub fn values(&self) -> &[Array2<Complex64>] {
        &self.values
    }

    pub fn same_nodes(&self, other: &SampledFunction) -> bool {
        self.nodes == other.nodes
    }
}

/// `<phi, psi> = sum_i w_i phi_i psi_i*` over a shared node set.
pub fn l2_inner_product(phi: &SampledFunction, psi: &SampledFunction) -> Result<AlgebraElement> {
    if !phi.same_nodes(psi) {
        return Err(Error::NodeMismatch);
    }
    if phi.values.is_empty() {
        return Err(Error::InvalidMeasure("empty sampled functions".into()));
    }
    let rows = phi.values[0].nrows();
    let other_rows = psi.values[0].nrows();
    if rows != other_rows || phi.values[0].ncols() != psi.values[0].ncols() {
        return Err(Error::DimensionMismatch {
            context: "L2 inner product",
            expected: format!("{}x{}", rows, phi.values[0].ncols()),
            found: format!("{}x{}", other_rows, psi.values[0].ncols()),
        });
    }
    let mut acc = MatrixAccumulator::new(rows, other_rows);
    for ((node, f), g) in phi.nodes.iter().zip(&phi.values).zip(&psi.values) {
        acc.add_scaled(node.weight, &f.dot(&conj_transpose(g)));
    }
    AlgebraElement::new(acc.finish())
}
