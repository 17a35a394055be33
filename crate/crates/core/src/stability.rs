//! Perturbation stability of frames.
//!
//! Given a frame `F` and a perturbed family `G`, the stability question is
//! whether a constant `M` exists with
//!
//! ```text
//! || x R x* || <= M min(|| x P x* ||, || x Q x* ||)   for all x,
//! ```
//!
//! where `P`, `Q`, `R` are the Gram matrices of `F`, `G` and the difference
//! family `F - G`. Exact minimization over all `x` is nonconvex; this module
//! ships a certified upper proxy — the Loewner pencil maximum
//! `max(lambda_max(P^{-1/2} R P^{-1/2}), lambda_max(Q^{-1/2} R Q^{-1/2}))`,
//! which makes `R <= M P` and `R <= M Q` and hence the inequality for every
//! `x` — together with a seeded randomized lower estimate, the closed-form
//! constant coming from the frame bounds of both families, and the frame
//! bounds the inequality guarantees for the perturbed family.

use crate::algebra::{
    hermitian_eig, operator_norm, singular_extremes, AlgebraElement,
};
use crate::error::Error;
use crate::frames::{gram, optimal_scalar_bounds, FrameBounds, FrameFamily, GramMatrix};
use crate::hilbert::{inner_product, ModuleVector};
use crate::measure::MeasureSpace;
use crate::rng::SplitMix64;
use crate::tolerances::{DEGENERATE_DENOMINATOR, EIG_TOL, FRAME_TOL, INVERTIBILITY_TOL};
use crate::Result;

const MAX_RESAMPLES: usize = 64;

/// Gram matrices of a frame, a perturbed family, and their difference.
#[derive(Debug, Clone)]
pub struct PerturbationGrams {
    pub base: GramMatrix,
    pub perturbed: GramMatrix,
    pub difference: GramMatrix,
    rows: usize,
    cols: usize,
}

impl PerturbationGrams {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

/// Computes `P`, `Q` and `R`; the difference family is formed
/// coefficientwise for polynomial forms and pointwise for tabulated ones.
pub fn perturbation_grams(
    base: &FrameFamily,
    perturbed: &FrameFamily,
    ms: &MeasureSpace,
) -> Result<PerturbationGrams> {
    let difference = base.difference(perturbed)?;
    Ok(PerturbationGrams {
        base: gram(base, ms)?,
        perturbed: gram(perturbed, ms)?,
        difference: gram(&difference, ms)?,
        rows: base.rows(),
        cols: base.cols(),
    })
}

/// The certified stability constant
/// `M = max(lambda_max(P^{-1/2} R P^{-1/2}), lambda_max(Q^{-1/2} R Q^{-1/2}))`.
///
/// `R <= M P` in the Loewner order implies `x R x* <= M x P x*` and hence
/// `||x R x*|| <= M ||x P x*||` for every module vector, so the sampled
/// ratio can never exceed this value.
pub fn loewner_stability_constant(pg: &PerturbationGrams, tol: f64) -> Result<f64> {
    let mut constant: f64 = 0.0;
    for denominator in [&pg.base, &pg.perturbed] {
        let inv_sqrt = denominator
            .inv_sqrt(tol)
            .map_err(|_| Error::NotAFrame { lambda_min: denominator.lambda_min() })?;
        let pencil = inv_sqrt.dot(pg.difference.matrix()).dot(&inv_sqrt);
        let herm = (&pencil + &crate::algebra::conj_transpose(&pencil)).mapv(|z| z * 0.5);
        let eig = hermitian_eig(&AlgebraElement::new(herm)?, EIG_TOL)?;
        constant = constant.max(eig.lambda_max());
    }
    Ok(constant.max(0.0))
}

/// The closed-form constant from the frame bounds of both families:
/// `min((sqrt(B/C) + 1)^2, (sqrt(D/A) + 1)^2)`, where `(A, B)` bound the
/// base frame and `(C, D)` the perturbed one.
pub fn theorem_forward_constant(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    for (name, value) in [("A", a), ("B", b), ("C", c), ("D", d)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonPositiveBound(format!("{name} = {value}")));
        }
    }
    let first = ((b / c).sqrt() + 1.0).powi(2);
    let second = ((d / a).sqrt() + 1.0).powi(2);
    Ok(first.min(second))
}

/// The star-bound analogue:
/// `min((||B|| ||C^{-1}|| + 1)^2, (||D|| ||A^{-1}|| + 1)^2)`.
pub fn theorem_forward_constant_star(
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
    d: &AlgebraElement,
) -> Result<f64> {
    for elem in [a, b, c, d] {
        let sigma_min = singular_extremes(elem.matrix()).0;
        if sigma_min <= INVERTIBILITY_TOL {
            return Err(Error::NotInvertible { sigma_min });
        }
    }
    let inv_norm = |e: &AlgebraElement| 1.0 / singular_extremes(e.matrix()).0;
    let first = (operator_norm(b) * inv_norm(c) + 1.0).powi(2);
    let second = (operator_norm(d) * inv_norm(a) + 1.0).powi(2);
    Ok(first.min(second))
}

/// Frame bounds guaranteed for the perturbed family once the stability
/// inequality holds with constant `M`:
/// `(A / (1 + sqrt(M))^2, B (1 + sqrt(M))^2)`.
pub fn derived_bounds_from_m(a: f64, b: f64, m: f64) -> Result<FrameBounds> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::NonPositiveBound(format!("A = {a}, B = {b}")));
    }
    if !(m >= 0.0 && m.is_finite()) {
        return Err(Error::NonPositiveBound(format!("M = {m}")));
    }
    let factor = (1.0 + m.sqrt()).powi(2);
    FrameBounds::new(a / factor, b * factor)
}

/// Result of sampling the stability ratio.
#[derive(Debug, Clone, Copy)]
pub struct RatioCheck {
    pub max_ratio: f64,
    pub passes: bool,
    pub samples: usize,
    pub resamples: usize,
}

/// Draws `samples` unit-Frobenius module vectors and reports the largest
/// observed ratio `||x R x*|| / min(||x P x*||, ||x Q x*||)`, passing iff it
/// stays below `m + tol`. Deterministic for a given seed; near-zero
/// denominators are redrawn from a reserved index range, capped at
/// [`MAX_RESAMPLES`].
pub fn randomized_inequality_check(
    pg: &PerturbationGrams,
    m: f64,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<RatioCheck> {
    if samples == 0 {
        return Err(Error::DegenerateSample("at least one sample is required".into()));
    }
    let mut max_ratio: f64 = 0.0;
    let mut resamples = 0usize;
    for index in 0..samples {
        let mut fork_index = index as u64;
        let ratio = loop {
            let mut rng = SplitMix64::fork(seed, fork_index);
            let draw = rng.unit_frobenius_matrix(pg.rows, pg.cols, false);
            if let Some(mat) = draw {
                let x = ModuleVector::new(mat)?;
                if let Some(ratio) = sample_ratio(pg, &x)? {
                    break ratio;
                }
            }
            resamples += 1;
            if resamples > MAX_RESAMPLES {
                return Err(Error::DegenerateSample(format!(
                    "exceeded {MAX_RESAMPLES} redraws with near-zero denominators"
                )));
            }
            fork_index = (samples + resamples) as u64;
        };
        max_ratio = max_ratio.max(ratio);
    }
    Ok(RatioCheck { max_ratio, passes: max_ratio <= m + tol, samples, resamples })
}

/// `||x R x*|| / min(||x P x*||, ||x Q x*||)`, or `None` when the
/// denominator degenerates.
fn sample_ratio(pg: &PerturbationGrams, x: &ModuleVector) -> Result<Option<f64>> {
    let quadratic = |g: &GramMatrix| -> Result<f64> {
        let gx = crate::frames::frame_operator_apply(g, x)?;
        let form = inner_product(&gx, x)?;
        Ok(operator_norm(&form))
    };
    let p = quadratic(&pg.base)?;
    let q = quadratic(&pg.perturbed)?;
    let r = quadratic(&pg.difference)?;
    let denominator = p.min(q);
    if denominator < DEGENERATE_DENOMINATOR {
        return Ok(None);
    }
    Ok(Some(r / denominator))
}

/// Full stability analysis of a frame pair.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub grams: PerturbationGrams,
    /// Loewner-certified constant; the sampled ratio never exceeds it.
    pub m_certified: f64,
    /// Closed-form constant from the two optimal bound pairs.
    pub m_theorem_forward: f64,
    pub base_bounds: FrameBounds,
    pub perturbed_bounds: FrameBounds,
    /// Bounds guaranteed for the perturbed family by `m_certified`.
    pub derived_bounds: FrameBounds,
    pub sampled_max_ratio: f64,
    pub samples: usize,
}

/// Computes Gram matrices, certified and closed-form constants, derived
/// bounds and the sampled ratio in one pass. Both families must be frames.
pub fn stability_report(
    base: &FrameFamily,
    perturbed: &FrameFamily,
    ms: &MeasureSpace,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<StabilityReport> {
    let grams = perturbation_grams(base, perturbed, ms)?;
    let base_bounds = optimal_scalar_bounds(&grams.base, FRAME_TOL)?;
    let perturbed_bounds = optimal_scalar_bounds(&grams.perturbed, FRAME_TOL)?;
    let m_certified = loewner_stability_constant(&grams, FRAME_TOL)?;
    let m_theorem_forward = theorem_forward_constant(
        base_bounds.lower,
        base_bounds.upper,
        perturbed_bounds.lower,
        perturbed_bounds.upper,
    )?;
    let derived_bounds =
        derived_bounds_from_m(base_bounds.lower, base_bounds.upper, m_certified)?;
    let check = randomized_inequality_check(&grams, m_certified, samples, seed, tol)?;
    Ok(StabilityReport {
        grams,
        m_certified,
        m_theorem_forward,
        base_bounds,
        perturbed_bounds,
        derived_bounds,
        sampled_max_ratio: check.max_ratio,
        samples,
    })
}
