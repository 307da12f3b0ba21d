//! Property tests across module boundaries.

use frametensor::frames::{frame_bounds, random_frame_with, random_tight_frame_with};
use frametensor::hs::{adjoint, apply, column_energy, hs_inner, hs_norm, row_energy, simple_tensor, HSElement};
use frametensor::numeric::{
    hermitian_eig, hpd_solve, kron, operator_norm_2, random_gaussian_matrix_with,
    random_gaussian_vector, seeded_rng, CMatrix,
};
use frametensor::tensor::{tensor_frame, tensor_operator_frame};
use proptest::prelude::*;

fn random_hpd(n: usize, rng: &mut frametensor::numeric::FrameRng) -> CMatrix {
    let g = random_gaussian_matrix_with(n, n, rng);
    g.conj_transpose()
        .matmul(&g)
        .unwrap()
        .add(&CMatrix::identity(n).scale(0.1.into()))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstruction(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = seeded_rng(seed);
        let g = random_gaussian_matrix_with(n, n, &mut rng);
        let a = g.add(&g.conj_transpose()).unwrap();
        let eig = hermitian_eig(&a).unwrap();
        let resid = eig.reconstruct().sub(&a).unwrap().frobenius_norm();
        prop_assert!(resid <= 1e-10 * a.frobenius_norm());
    }

    #[test]
    fn kron_spectrum_is_pairwise_products(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let a = random_hpd(n, &mut rng);
        let b = random_hpd(m, &mut rng);
        let ea = hermitian_eig(&a).unwrap().eigenvalues;
        let eb = hermitian_eig(&b).unwrap().eigenvalues;
        let mut products: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x * y)).collect();
        products.sort_by(f64::total_cmp);
        let ek = hermitian_eig(&kron(&a, &b).unwrap()).unwrap().eigenvalues;
        for (got, want) in ek.iter().zip(&products) {
            prop_assert!((got - want).abs() <= 1e-9 * want.abs());
        }
    }

    #[test]
    fn hpd_solve_round_trip(seed in any::<u64>(), n in 1usize..=6, k in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let a = random_hpd(n, &mut rng);
        let b = random_gaussian_matrix_with(n, k, &mut rng);
        let x = hpd_solve(&a, &b).unwrap();
        let resid = a.matmul(&x).unwrap().sub(&b).unwrap().frobenius_norm();
        prop_assert!(resid <= 1e-10 * a.frobenius_norm() * b.frobenius_norm());
    }

    #[test]
    fn kron_norm_is_multiplicative(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut rng = seeded_rng(seed);
        let a = random_gaussian_matrix_with(n, m, &mut rng);
        let b = random_gaussian_matrix_with(m, n, &mut rng);
        let lhs = operator_norm_2(&kron(&a, &b).unwrap());
        let rhs = operator_norm_2(&a) * operator_norm_2(&b);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn adjoint_defining_identity(seed in any::<u64>(), dh in 1usize..=4, dk in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let t = HSElement::new(random_gaussian_matrix_with(dh, dk, &mut rng));
        let ta = adjoint(&t);
        for _ in 0..20 {
            let x = random_gaussian_vector(dh, &mut rng);
            let y = random_gaussian_vector(dk, &mut rng);
            let lhs = apply(&ta, &x).unwrap().inner(&y).unwrap();
            let rhs = apply(&t, &y).unwrap().inner(&x).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + hs_norm(&t)) * x.norm() * y.norm());
        }
        prop_assert_eq!(adjoint(&ta), t.clone());
        prop_assert!((column_energy(&t) - row_energy(&t)).abs() <= 1e-12 * (1.0 + column_energy(&t)));
    }

    #[test]
    fn simple_tensor_norm_and_inner(seed in any::<u64>(), dh in 1usize..=4, dk in 1usize..=4) {
        let mut rng = seeded_rng(seed);
        let x = random_gaussian_vector(dh, &mut rng);
        let xp = random_gaussian_vector(dh, &mut rng);
        let y = random_gaussian_vector(dk, &mut rng);
        let yp = random_gaussian_vector(dk, &mut rng);
        let t = simple_tensor(&x, &y);
        prop_assert!((hs_norm(&t) - x.norm() * y.norm()).abs() <= 1e-12 * (1.0 + hs_norm(&t)));
        let lhs = hs_inner(&t, &simple_tensor(&xp, &yp)).unwrap();
        let rhs = x.inner(&xp).unwrap() * y.inner(&yp).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + x.norm() * xp.norm() * y.norm() * yp.norm()));
    }

    #[test]
    fn tensor_of_normalized_tight_is_normalized_tight(seed in any::<u64>(), d1 in 2usize..=3, d2 in 2usize..=3) {
        let mut rng = seeded_rng(seed);
        let f1 = random_tight_frame_with(d1, d1 + 2, &mut rng).unwrap();
        let f2 = random_tight_frame_with(d2, d2 + 1, &mut rng).unwrap();
        let b = frame_bounds(&tensor_frame(&[&f1, &f2]).unwrap()).unwrap();
        prop_assert!(b.is_normalized_tight);
    }

    #[test]
    fn flattened_operator_frame_equals_tensor_frame(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let f1 = random_frame_with(2, 3, &mut rng).unwrap();
        let f2 = random_frame_with(3, 4, &mut rng).unwrap();
        let of = tensor_operator_frame(&f1, &f2).unwrap();
        prop_assert_eq!(of.flatten().frame, tensor_frame(&[&f1, &f2]).unwrap());
    }
}
