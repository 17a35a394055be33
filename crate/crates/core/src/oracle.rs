//! Independent reference implementations and seeded instance generators for
//! tests and acceptance runs.
//!
//! Nothing here is used by the engine code paths. The Riemann rule shares no
//! nodes or code with the Gauss-Legendre engine, so agreement between the
//! two is a genuine cross-check rather than a tautology.

use ndarray::Array2;
use num_complex::Complex64;

use crate::algebra::conj_transpose;
use crate::error::Error;
use crate::frames::{FrameFamily, GramMatrix};
use crate::hilbert::ModuleVector;
use crate::rng::SplitMix64;
use crate::Result;

/// Midpoint Riemann rule with `subintervals` equal pieces.
#[derive(Debug, Clone, Copy)]
pub struct RiemannRule {
    pub subintervals: usize,
}

impl Default for RiemannRule {
    fn default() -> Self {
        RiemannRule { subintervals: 100_000 }
    }
}

/// Reference Gram matrix of a polynomial family over `[a, b]` by the
/// midpoint rule; error is `O(subintervals^{-2})`.
pub fn riemann_gram(
    family: &FrameFamily,
    a: f64,
    b: f64,
    rule: RiemannRule,
) -> Result<GramMatrix> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInterval);
    }
    if family.degree().is_none() {
        return Err(Error::FormMismatch("riemann_gram needs a polynomial family".into()));
    }
    if rule.subintervals == 0 {
        return Err(Error::InvalidMeasure("riemann rule needs at least one subinterval".into()));
    }
    let n = rule.subintervals;
    let h = (b - a) / n as f64;
    let m = family.cols();
    let mut sum: Array2<Complex64> = Array2::zeros((m, m));
    for i in 0..n {
        let w = a + (i as f64 + 0.5) * h;
        let value = family.eval(i, w);
        sum += &conj_transpose(&value).dot(&value).mapv(|z| z * h);
    }
    GramMatrix::new(sum)
}

/// Seeded random polynomial family. Coefficients have standard complex
/// Gaussian entries; the constant coefficient is augmented by
/// `offset * I`-block (ones on the main diagonal up to `min(n, m)`) to bias
/// the family toward a positive Gram matrix.
pub fn random_frame(seed: u64, n: usize, m: usize, degree: usize, offset: f64) -> FrameFamily {
    let mut rng = SplitMix64::new(seed);
    let mut coefficients = Vec::with_capacity(degree + 1);
    for k in 0..=degree {
        let mut coeff = rng.complex_gaussian_matrix(n, m);
        if k == 0 {
            for i in 0..n.min(m) {
                coeff[(i, i)] += Complex64::new(offset, 0.0);
            }
        }
        coefficients.push(coeff);
    }
    FrameFamily::polynomial(coefficients).expect("nonempty coefficient list")
}

/// Seeded additive perturbation of a family: every coefficient (or
/// tabulated value) receives `amplitude` times a standard complex Gaussian
/// matrix. Deterministic in the seed.
pub fn perturbed_frame(base: &FrameFamily, seed: u64, amplitude: f64) -> FrameFamily {
    let mut rng = SplitMix64::new(seed);
    let mut noise_for = |rows: usize, cols: usize| {
        rng.complex_gaussian_matrix(rows, cols)
            .mapv(|z| z * Complex64::new(amplitude, 0.0))
    };
    match base.form() {
        crate::frames::FamilyForm::Polynomial { coefficients } => {
            let perturbed = coefficients
                .iter()
                .map(|c| c + &noise_for(c.nrows(), c.ncols()))
                .collect();
            FrameFamily::polynomial(perturbed).expect("same shape as base")
        }
        crate::frames::FamilyForm::Tabulated { values } => {
            let perturbed = values
                .iter()
                .map(|v| v + &noise_for(v.nrows(), v.ncols()))
                .collect();
            FrameFamily::tabulated(perturbed).expect("same shape as base")
        }
    }
}

/// Seeded random module vector with unit Frobenius norm.
pub fn random_vector(seed: u64, n: usize, m: usize) -> ModuleVector {
    let mut rng = SplitMix64::new(seed);
    loop {
        if let Some(mat) = rng.unit_frobenius_matrix(n, m, false) {
            return ModuleVector::new(mat).expect("nonempty vector");
        }
    }
}
