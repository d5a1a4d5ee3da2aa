use std::f64::consts::PI;

use band_lt::operator::{classify_discrete, discretize, grid_points, max_abs};
use band_lt::{BandSet, Boundary, DiscretizedOperator, OperatorError};
use faer::Mat;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_model(n: usize, boundary: Boundary, seed: u64, re_min: f64) -> DiscretizedOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let length = 10.0;
    let xs = grid_points(length, n, boundary);
    let v0: Vec<f64> = xs.iter().map(|x| 1.0 + (2.0 * PI * x / 5.0).cos()).collect();
    let v: Vec<Complex64> = xs
        .iter()
        .map(|_| Complex64::new(re_min + 2.0 * rng.random::<f64>(), 4.0 * rng.random::<f64>() - 2.0))
        .collect();
    discretize(&v0, &v, length, boundary).unwrap()
}

#[test]
fn free_eigenvalues_match_closed_forms() {
    let (n, length) = (60, 3.0);
    let zero = vec![Complex64::new(0.0, 0.0); n];
    let d = discretize(&vec![0.0; n], &zero, length, Boundary::Dirichlet).unwrap();
    let h = length / (n + 1) as f64;
    let mut expected: Vec<f64> = (1..=n)
        .map(|j| 4.0 / (h * h) * (j as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2))
        .collect();
    expected.sort_by(f64::total_cmp);
    for (e, x) in d.self_adjoint_eigenvalues().unwrap().iter().zip(&expected) {
        assert!((e - x).abs() < 1e-9 * (1.0 + x), "{e} vs {x}");
    }
    let p = discretize(&vec![0.0; n], &zero, length, Boundary::Periodic).unwrap();
    let h = length / n as f64;
    let mut expected: Vec<f64> = (0..n)
        .map(|j| 4.0 / (h * h) * (j as f64 * PI / n as f64).sin().powi(2))
        .collect();
    expected.sort_by(f64::total_cmp);
    for (e, x) in p.self_adjoint_eigenvalues().unwrap().iter().zip(&expected) {
        assert!((e - x).abs() < 1e-9 * (1.0 + x), "{e} vs {x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_perturbations_move_sorted_eigenvalues_by_at_most_sup_v(seed in any::<u64>(), periodic in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Dirichlet };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 40;
        let v0: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(3.0 * rng.random::<f64>() - 1.5, 0.0)).collect();
        let sup = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let h = discretize(&v0, &v, 5.0, boundary).unwrap();
        prop_assert!(h.is_self_adjoint());
        let a = h.self_adjoint_eigenvalues().unwrap();
        let b = h.unperturbed().self_adjoint_eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= sup + 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn complex_spectrum_stays_near_the_unperturbed_one(seed in any::<u64>()) {
        // H₀ is Hermitian, so every eigenvalue of H₀ + V lies within ‖V‖ = max|V_j| of σ(H₀).
        let h = random_model(50, Boundary::Periodic, seed, -1.0);
        let sup = h.perturbation().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let base = h.unperturbed().self_adjoint_eigenvalues().unwrap();
        for z in h.eigenvalues().unwrap() {
            let d = base.iter().map(|&e| (z - e).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= sup * (1.0 + 1e-9) + 1e-9, "{z} is {d} from σ(H₀), ‖V‖ = {sup}");
        }
    }

    #[test]
    fn eigenvalues_lie_right_of_the_numerical_range_abscissa(seed in any::<u64>(), periodic in any::<bool>()) {
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Dirichlet };
        let h = random_model(40, boundary, seed, -1.0);
        let w1 = h.numerical_range_abscissa().unwrap();
        let floor = h.background().iter().zip(h.perturbation()).map(|(a, v)| a + v.re).fold(f64::INFINITY, f64::min);
        prop_assert!(w1 >= floor - 1e-9);
        let trace: Complex64 = (0..h.size()).map(|i| h.matrix()[(i, i)]).sum();
        let eigs = h.eigenvalues().unwrap();
        let sum: Complex64 = eigs.iter().sum();
        prop_assert!((trace - sum).norm() <= 1e-8 * trace.norm());
        for z in eigs {
            prop_assert!(z.re >= w1 - 1e-9 * (1.0 + z.norm()));
        }
    }

    #[test]
    fn accretive_perturbations_keep_the_spectrum_in_the_right_half_plane(seed in any::<u64>()) {
        let h = random_model(40, Boundary::Periodic, seed, 0.0);
        prop_assert!(h.numerical_range_abscissa().unwrap() >= -1e-10);
        for z in h.eigenvalues().unwrap() {
            prop_assert!(z.re >= -1e-8);
        }
    }
}

#[test]
fn second_resolvent_identity() {
    for (seed, boundary) in [(1, Boundary::Dirichlet), (2, Boundary::Periodic)] {
        let h = random_model(120, boundary, seed, -1.0);
        let h0 = h.unperturbed();
        let n = h.size();
        for z in [Complex64::new(-3.0, 0.2), Complex64::new(10.0, 3.0)] {
            let r = h.resolvent(z).unwrap();
            let r0 = h0.resolvent(z).unwrap();
            let v = h.perturbation();
            let vr0 = Mat::from_fn(n, n, |i, j| v[i] * r0[(i, j)]);
            let prod = &r * &vr0;
            let residual = Mat::from_fn(n, n, |i, j| r[(i, j)] - r0[(i, j)] + prod[(i, j)]);
            assert!(max_abs(&residual) < 1e-10, "{}", max_abs(&residual));
            // (H − z) R = I
            let hz = Mat::from_fn(n, n, |i, j| h.matrix()[(i, j)] - if i == j { z } else { Complex64::new(0.0, 0.0) });
            let id = &hz * &r;
            let err = Mat::from_fn(n, n, |i, j| id[(i, j)] - if i == j { 1.0 } else { 0.0 });
            assert!(max_abs(&err) < 1e-10);
        }
    }
}

#[test]
fn resolvent_refuses_shifts_on_the_spectrum() {
    let h = random_model(30, Boundary::Periodic, 5, -1.0);
    let z = h.eigenvalues().unwrap()[3];
    assert!(matches!(h.resolvent(z), Err(OperatorError::NearSingular { .. })));
}

#[test]
fn classification_keeps_exactly_the_far_eigenvalues() {
    let bands = BandSet::new(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let eigs = [
        Complex64::new(0.5, 0.005),
        Complex64::new(1.5, 0.0),
        Complex64::new(-0.5, 0.0),
        Complex64::new(2.5, -0.3),
        Complex64::new(3.5, 0.0),
    ];
    let r = classify_discrete(&eigs, &bands, 0.01).unwrap();
    let kept: Vec<Complex64> = r.discrete.iter().map(|c| c.z).collect();
    assert_eq!(kept, vec![eigs[1], eigs[2], eigs[3]]);
    assert_eq!(r.beyond_cap, 1);
    for c in &r.discrete {
        assert!((c.dist - bands.dist(c.z).unwrap()).abs() < 1e-15);
    }
    assert!(matches!(classify_discrete(&eigs, &bands, 0.0), Err(OperatorError::BadDelta(_))));
}

#[test]
fn invalid_inputs_are_rejected() {
    let z = vec![Complex64::new(0.0, 0.0); 5];
    assert!(matches!(discretize(&[0.0; 2], &z[..2], 1.0, Boundary::Dirichlet), Err(OperatorError::TooFewPoints(2))));
    assert!(matches!(discretize(&[0.0; 5], &z[..4], 1.0, Boundary::Dirichlet), Err(OperatorError::LengthMismatch { .. })));
    assert!(matches!(
        discretize(&[0.0, -1.0, 0.0, 0.0, 0.0], &z, 1.0, Boundary::Dirichlet),
        Err(OperatorError::NegativeBackground { index: 1, .. })
    ));
    let big = discretize(&[0.0; 5], &z, 1.0, Boundary::Periodic).unwrap().with_dense_cap(4);
    assert!(matches!(big.eigenvalues(), Err(OperatorError::TooLarge { .. })));
}
