//! Module-layer invariants: inner product axioms, adjoint identity, and the
//! operator-norm contraction bound for adjointable maps.

use modframe_core::algebra::{is_positive, loewner_leq, AlgebraElement};
use modframe_core::hilbert::{
    inner_product, module_action, vector_norm, AdjointableMap, ModuleVector,
};
use modframe_core::rng::SplitMix64;
use num_complex::Complex64;

fn frob_diff(a: &AlgebraElement, b: &AlgebraElement) -> f64 {
    (a - b).frobenius_norm()
}

fn random_vector(rng: &mut SplitMix64, n: usize, m: usize) -> ModuleVector {
    ModuleVector::new(rng.complex_gaussian_matrix(n, m)).unwrap()
}

#[test]
fn adjoint_identity_holds_for_random_pairs() {
    let mut rng = SplitMix64::new(2024);
    for trial in 0..100 {
        let n = 1 + (trial % 6);
        let m = 1 + ((trial / 2) % 6);
        let k = 1 + ((trial / 3) % 6);
        let map = AdjointableMap::new(rng.complex_gaussian_matrix(m, k)).unwrap();
        let x = random_vector(&mut rng, n, m);
        let y = random_vector(&mut rng, n, k);
        let lhs = inner_product(&map.apply(&x).unwrap(), &y).unwrap();
        let rhs = inner_product(&x, &map.adjoint_apply(&y).unwrap()).unwrap();
        let scale = 1.0 + lhs.frobenius_norm().max(rhs.frobenius_norm());
        assert!(
            frob_diff(&lhs, &rhs) <= 1e-10 * scale,
            "trial {trial}: adjoint identity violated by {:.3e}",
            frob_diff(&lhs, &rhs)
        );
    }
}

#[test]
fn maps_contract_by_their_operator_norm() {
    let mut rng = SplitMix64::new(7);
    for trial in 0..100 {
        let n = 1 + (trial % 5);
        let m = 1 + ((trial / 2) % 5);
        let k = 1 + ((trial / 3) % 5);
        let map = AdjointableMap::new(rng.complex_gaussian_matrix(m, k)).unwrap();
        let x = random_vector(&mut rng, n, m);
        let vx = map.apply(&x).unwrap();
        let norm_bound = map.operator_norm() * vector_norm(&x);
        assert!(vector_norm(&vx) <= norm_bound + 1e-10 * (1.0 + norm_bound));

        // Loewner form: <Vx, Vx> <= ||V||^2 <x, x>.
        let lhs = inner_product(&vx, &vx).unwrap();
        let rhs = inner_product(&x, &x)
            .unwrap()
            .scale(Complex64::new(map.operator_norm().powi(2), 0.0));
        let check = loewner_leq(&lhs, &rhs, 1e-9).unwrap();
        assert!(check.holds, "trial {trial}: margin {:.3e}", check.margin);
    }
}

#[test]
fn inner_product_is_module_linear() {
    let mut rng = SplitMix64::new(99);
    for trial in 0..100 {
        let n = 1 + (trial % 5);
        let m = 1 + ((trial / 2) % 5);
        let a = AlgebraElement::new(rng.complex_gaussian_matrix(n, n)).unwrap();
        let x = random_vector(&mut rng, n, m);
        let y = random_vector(&mut rng, n, m);
        let z = random_vector(&mut rng, n, m);
        let combined = &module_action(&a, &x).unwrap() + &y;
        let lhs = inner_product(&combined, &z).unwrap();
        let rhs = &(&a * &inner_product(&x, &z).unwrap()) + &inner_product(&y, &z).unwrap();
        let scale = 1.0 + lhs.frobenius_norm();
        assert!(frob_diff(&lhs, &rhs) <= 1e-12 * scale * 10.0, "trial {trial}");
    }
}

#[test]
fn self_inner_product_is_positive_and_faithful() {
    let mut rng = SplitMix64::new(500);
    for trial in 0..50 {
        let n = 1 + (trial % 5);
        let m = 1 + ((trial / 2) % 5);
        let x = random_vector(&mut rng, n, m);
        let gram = inner_product(&x, &x).unwrap();
        assert!(is_positive(&gram, 1e-12).is_positive, "trial {trial}");
        assert!(gram.frobenius_norm() > 0.0);
    }
    let zero = ModuleVector::zeros(3, 2);
    let gram = inner_product(&zero, &zero).unwrap();
    assert_eq!(gram.frobenius_norm(), 0.0);
    assert!(is_positive(&gram, 1e-12).is_positive);
}

#[test]
fn conjugate_symmetry_of_inner_product() {
    let mut rng = SplitMix64::new(321);
    for _ in 0..50 {
        let x = random_vector(&mut rng, 4, 3);
        let y = random_vector(&mut rng, 4, 3);
        let xy = inner_product(&x, &y).unwrap();
        let yx = inner_product(&y, &x).unwrap();
        let defect = frob_diff(&xy.adjoint(), &yx);
        assert!(defect <= 1e-14 * (1.0 + yx.frobenius_norm()), "defect {defect:.3e}");
    }
}
