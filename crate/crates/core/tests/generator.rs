// SPDX-License-Identifier: Apache-2.0

mod common;

use corrdyn_core::amplitude::{amplitude_from_propagator, InputProfile};
use corrdyn_core::correlation::{
    averaged_generator, coherent_generator, dephasing_coefficient, dephasing_generator, evolve_g4,
    g4_from_amplitude, lindblad_oracle, pair_index, CorrelationTensor,
};
use corrdyn_core::linalg::Matrix;
use corrdyn_core::network::{build_network, paper_example_network};
use corrdyn_core::propagator::{evolve_exact, IntegratorConfig};
use corrdyn_core::ExchangeStatistics;
use num_complex::Complex64;

#[test]
fn averaged_generator_matches_lindblad_on_random_networks() {
    let mut rng = common::rng(11);
    for trial in 0..20 {
        let n = 1 + trial % 4;
        let net = common::random_network(&mut rng, n);
        let a = averaged_generator(&net).to_dense();
        let b = lindblad_oracle(&net).to_dense();
        let diff = a.max_abs_diff(&b);
        assert!(diff < 1e-12, "trial {trial} (N={n}): {diff}");
    }
}

#[test]
fn total_is_coherent_plus_dephasing() {
    let mut rng = common::rng(5);
    for n in 1..=4 {
        let net = common::random_network(&mut rng, n);
        let sum = &coherent_generator(&net).to_dense() + &dephasing_generator(&net).to_dense();
        assert!(sum.max_abs_diff(&averaged_generator(&net).to_dense()) < 1e-14);
    }
}

#[test]
fn exchange_and_population_coefficients_vanish_exactly() {
    let mut rng = common::rng(9);
    for n in 2..=4 {
        let net = common::random_network(&mut rng, n);
        for p in 0..n {
            for q in 0..n {
                assert_eq!(
                    dephasing_coefficient(&net, p, q, p, q),
                    Complex64::new(0.0, 0.0)
                );
                assert_eq!(
                    dephasing_coefficient(&net, p, q, q, p),
                    Complex64::new(0.0, 0.0)
                );
            }
        }
    }
}

/// Under the coherent generator a rank-one tensor must follow ΨΨ† with
/// Ψ(t) = UΨ(0)Uᵀ.
#[test]
fn coherent_generator_obeys_product_rule() {
    let mut rng = common::rng(21);
    for n in 2..=4 {
        let net = common::random_network(&mut rng, n);
        let phi = InputProfile::localized(n, 0, n - 1).unwrap();
        let id = evolve_exact(&net, 0.0).unwrap();
        let psi0 = amplitude_from_propagator(&phi, &id, ExchangeStatistics::Boson).unwrap();
        let g0 = g4_from_amplitude(&psi0);
        let t = 3.0;
        let ev = evolve_g4(
            &coherent_generator(&net),
            &g0,
            t,
            &IntegratorConfig::rk4(1e-3),
        )
        .unwrap();
        let u = evolve_exact(&net, t).unwrap();
        let psi = amplitude_from_propagator(&phi, &u, ExchangeStatistics::Boson).unwrap();
        let diff = ev
            .final_state
            .matrix
            .max_abs_diff(&g4_from_amplitude(&psi).matrix);
        assert!(diff < 1e-9, "N={n}: {diff}");
    }
}

#[test]
fn generator_preserves_trace_and_hermiticity_of_derivative() {
    let mut rng = common::rng(33);
    use rand::Rng;
    for n in 1..=4 {
        let net = common::random_network(&mut rng, n);
        let d = n * n;
        let mut x = Matrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        x = &x + &x.adjoint();
        let gen = averaged_generator(&net);
        let mut out = vec![Complex64::default(); d * d];
        gen.apply(x.as_slice(), &mut out);
        let dx = Matrix::from_vec(d, d, out);
        assert!(dx.trace().norm() < 1e-12, "N={n}: trace {}", dx.trace());
        assert!(dx.hermiticity_residual() < 1e-12);
    }
}

#[test]
fn decoupled_off_diagonal_decays_exponentially() {
    let net = build_network(vec![0.0; 3], Matrix::zeros(3, 3), vec![2.0; 3]).unwrap();
    let mut g0 = CorrelationTensor::zeros(3);
    let (a, b) = (pair_index(3, 0, 1), pair_index(3, 0, 2));
    g0.matrix[(a, b)] = Complex64::new(1.0, 0.0);
    let ev = evolve_g4(
        &averaged_generator(&net),
        &g0,
        1.0,
        &IntegratorConfig::rk4(1e-3),
    )
    .unwrap();
    let got = ev.final_state.matrix[(a, b)];
    assert!(
        (got - Complex64::new((-2.0f64).exp(), 0.0)).norm() < 1e-8,
        "{got}"
    );
}

#[test]
fn zero_coupling_keeps_populations_and_exchange_elements() {
    let base = paper_example_network::<f64>();
    let net = build_network(base.energies().to_vec(), Matrix::zeros(3, 3), vec![2.0; 3]).unwrap();
    let d = 9;
    let g0 = CorrelationTensor::new(
        3,
        Matrix::from_fn(d, d, |r, c| Complex64::new(1.0 / (1 + r + c) as f64, 0.0)),
        0.0,
    )
    .unwrap();
    let ev = evolve_g4(
        &averaged_generator(&net),
        &g0,
        5.0,
        &IntegratorConfig::rk4(1e-3),
    )
    .unwrap();
    for p in 0..3 {
        for q in 0..3 {
            for (pp, qq) in [(p, q), (q, p)] {
                let drift = (ev.final_state.get(p, q, pp, qq) - g0.get(p, q, pp, qq)).norm();
                assert!(drift < 1e-10);
            }
        }
    }
}

#[test]
fn matrix_free_above_threshold() {
    let mut rng = common::rng(2);
    let net = common::random_network(&mut rng, 9);
    let gen = averaged_generator(&net);
    assert!(gen.is_matrix_free());
    assert!(!averaged_generator(&paper_example_network::<f64>()).is_matrix_free());
}
