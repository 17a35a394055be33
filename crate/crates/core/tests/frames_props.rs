//! Frame-engine invariants over seeded random families: the factorization
//! `S = T* T`, self-adjointness, the bound sandwich, image-frame coherence,
//! Parseval idempotence, and the scalar/star bound embedding.

use modframe_core::algebra::{loewner_leq, Algebra, AlgebraElement};
use modframe_core::frames::{
    analysis, canonical_parseval, frame_operator_apply, gram, image_frame, optimal_scalar_bounds,
    synthesis, verify_scalar_bounds, verify_star_bounds, Bounds, FamilyForm, FrameFamily,
    StarFrameBounds, StarMode,
};
use modframe_core::hilbert::{inner_product, AdjointableMap};
use modframe_core::measure::MeasureSpace;
use modframe_core::oracle::{random_frame, random_vector};
use modframe_core::rng::SplitMix64;
use num_complex::Complex64;

const FRAME_TOL: f64 = 1e-10;

fn dims_for(trial: usize) -> (usize, usize, usize) {
    // (n, m, degree) with (degree + 1) * n >= m so the family can be a frame.
    let n = 1 + (trial % 4);
    let m = 1 + ((trial / 2) % n.min(4));
    let degree = 1 + (trial % 3);
    (n, m, degree)
}

fn verified_frame(seed: u64, n: usize, m: usize, degree: usize) -> (FrameFamily, MeasureSpace) {
    let family = random_frame(seed, n, m, degree, 2.5);
    let ms = MeasureSpace::lebesgue(0.0, 1.0).unwrap();
    let g = gram(&family, &ms).unwrap();
    assert!(
        optimal_scalar_bounds(&g, FRAME_TOL).is_ok(),
        "seed {seed}: generated family is not a frame"
    );
    (family, ms)
}

#[test]
fn frame_operator_factorizes_through_analysis_and_synthesis() {
    for trial in 0..20 {
        let (n, m, degree) = dims_for(trial);
        let (family, ms) = verified_frame(1000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        for sample in 0..5 {
            let x = random_vector(7000 + (trial * 10 + sample) as u64, n, m);
            let direct = frame_operator_apply(&g, &x).unwrap();
            let composed = synthesis(&family, &ms, &analysis(&family, &ms, &x).unwrap()).unwrap();
            let diff = (&direct - &composed).frobenius_norm();
            assert!(diff <= 1e-10, "trial {trial}, sample {sample}: {diff:.3e}");
        }
    }
}

#[test]
fn frame_operator_is_self_adjoint() {
    for trial in 0..20 {
        let (n, m, degree) = dims_for(trial);
        let (family, ms) = verified_frame(2000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        let x = random_vector(100 + trial as u64, n, m);
        let y = random_vector(200 + trial as u64, n, m);
        let sx = frame_operator_apply(&g, &x).unwrap();
        let sy = frame_operator_apply(&g, &y).unwrap();
        let lhs = inner_product(&sx, &y).unwrap();
        let rhs = inner_product(&x, &sy).unwrap();
        assert!((&lhs - &rhs).frobenius_norm() <= 1e-10, "trial {trial}");
    }
}

#[test]
fn optimal_bounds_sandwich_the_quadratic_form() {
    for trial in 0..20 {
        let (n, m, degree) = dims_for(trial);
        let (family, ms) = verified_frame(3000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        let bounds = optimal_scalar_bounds(&g, FRAME_TOL).unwrap();
        for sample in 0..5 {
            let x = random_vector(300 + (trial * 10 + sample) as u64, n, m);
            let sx = frame_operator_apply(&g, &x).unwrap();
            let sandwich_mid = inner_product(&sx, &x).unwrap();
            let xx = inner_product(&x, &x).unwrap();
            let lower = xx.scale(Complex64::new(bounds.lower, 0.0));
            let upper = xx.scale(Complex64::new(bounds.upper, 0.0));
            assert!(loewner_leq(&lower, &sandwich_mid, 1e-9).unwrap().holds, "trial {trial}");
            assert!(loewner_leq(&sandwich_mid, &upper, 1e-9).unwrap().holds, "trial {trial}");
        }
    }
}

#[test]
fn image_frames_cohere_with_algebraic_gram() {
    let mut rng = SplitMix64::new(4242);
    for trial in 0..20 {
        let (n, m, degree) = dims_for(trial);
        let (family, ms) = verified_frame(4000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        let bounds = optimal_scalar_bounds(&g, FRAME_TOL).unwrap();
        // Random surjective map: k <= m columns of a Gaussian matrix.
        let k = 1 + (trial % m.max(1)).min(m - 1).min(3);
        let map = AdjointableMap::new(rng.complex_gaussian_matrix(m, k)).unwrap();
        if map.surjectivity_gap() <= FRAME_TOL {
            continue;
        }
        let image = image_frame(&family, &g, &Bounds::Scalar(bounds), &map, FRAME_TOL).unwrap();
        let direct = gram(&image.family, &ms).unwrap();
        let diff = (&direct.as_element() - &image.gram.as_element()).frobenius_norm();
        assert!(diff <= 1e-10, "trial {trial}: gram mismatch {diff:.3e}");

        let image_bounds = optimal_scalar_bounds(&image.gram, FRAME_TOL).unwrap();
        match image.predicted_bounds {
            Bounds::Scalar(predicted) => {
                assert!(
                    image_bounds.lower >= predicted.lower - 1e-9,
                    "trial {trial}: lower {} < predicted {}",
                    image_bounds.lower,
                    predicted.lower
                );
                assert!(
                    image_bounds.upper <= predicted.upper + 1e-9,
                    "trial {trial}: upper {} > predicted {}",
                    image_bounds.upper,
                    predicted.upper
                );
            }
            Bounds::Star(_) => unreachable!("scalar bounds in"),
        }
    }
}

#[test]
fn canonical_parseval_is_idempotent() {
    for trial in 0..10 {
        let (n, m, degree) = dims_for(trial);
        let (family, ms) = verified_frame(5000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        let once = canonical_parseval(&family, &g, FRAME_TOL).unwrap();
        let g_once = gram(&once, &ms).unwrap();
        let twice = canonical_parseval(&once, &g_once, FRAME_TOL).unwrap();
        match (once.form(), twice.form()) {
            (
                FamilyForm::Polynomial { coefficients: a },
                FamilyForm::Polynomial { coefficients: b },
            ) => {
                for (x, y) in a.iter().zip(b) {
                    let diff: f64 = x
                        .iter()
                        .zip(y.iter())
                        .map(|(u, v)| (u - v).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(diff <= 1e-8, "trial {trial}: idempotence defect {diff:.3e}");
                }
            }
            _ => unreachable!("polynomial families"),
        }
    }
}

#[test]
fn scalar_star_certificates_match_scalar_verification() {
    for trial in 0..10 {
        let (n, m, degree) = dims_for(trial);
        // The scalar embedding compares bounds on the same algebra, which
        // requires m = n here.
        if n != m {
            continue;
        }
        let (family, ms) = verified_frame(6000 + trial as u64, n, m, degree);
        let g = gram(&family, &ms).unwrap();
        let optimal = optimal_scalar_bounds(&g, FRAME_TOL).unwrap();
        let algebra = Algebra::full(n);
        // Candidate pairs around the optimal bounds; the star certificate at
        // (sqrt(A), sqrt(B)) must exist exactly when the scalar check accepts.
        for (lo, hi) in [
            (optimal.lower, optimal.upper),
            (optimal.lower * 0.9, optimal.upper * 1.1),
            (optimal.lower * 1.1, optimal.upper),
            (optimal.lower, optimal.upper * 0.9),
        ] {
            let scalar = verify_scalar_bounds(&g, lo, hi, 1e-10);
            let star = StarFrameBounds::new(
                AlgebraElement::scalar(n, Complex64::new(lo.sqrt(), 0.0)),
                AlgebraElement::scalar(n, Complex64::new(hi.sqrt(), 0.0)),
            )
            .unwrap();
            let verdict = verify_star_bounds(
                &algebra,
                &family,
                &ms,
                &star,
                StarMode::Scalar,
                0,
                1,
                1e-10,
            )
            .unwrap();
            assert_eq!(
                scalar.accepted,
                verdict.is_certified(),
                "trial {trial}, candidates ({lo}, {hi})"
            );
        }
    }
}

#[test]
fn analysis_lands_on_measure_nodes() {
    let (family, ms) = verified_frame(8080, 3, 2, 2);
    let x = random_vector(1, 3, 2);
    let phi = analysis(&family, &ms, &x).unwrap();
    assert_eq!(phi.nodes(), ms.nodes());
    assert_eq!(phi.values().len(), ms.node_count());
}
