// SPDX-License-Identifier: Apache-2.0

mod common;

use corrdyn_core::amplitude::{amplitude_from_propagator, evolve_amplitude, InputProfile};
use corrdyn_core::correlation::{
    averaged_generator, coherent_generator, evolve_g4, find_steady_state, g2_from_g4,
    g4_from_amplitude, pair_index, CorrelationTensor, SteadyStatus,
};
use corrdyn_core::linalg::Matrix;
use corrdyn_core::network::{paper_example_network, Network};
use corrdyn_core::propagator::{evolve_exact, IntegratorConfig, Propagator};
use corrdyn_core::states::{build_initial_g4, InitialStateSpec};
use corrdyn_core::{Error, ExchangeStatistics};
use num_complex::Complex64;

fn canonical() -> [InitialStateSpec<f64>; 4] {
    [
        InitialStateSpec::Separable(1, 2),
        InitialStateSpec::Entangled(1, 2),
        InitialStateSpec::ClassicallyCorrelated(1, 2),
        InitialStateSpec::Distinguishable(1, 2),
    ]
}

fn sampled(
    net: &Network<f64>,
    g0: &CorrelationTensor<f64>,
    coherent: bool,
) -> Vec<CorrelationTensor<f64>> {
    let gen = if coherent {
        coherent_generator(net)
    } else {
        averaged_generator(net)
    };
    let cfg = IntegratorConfig {
        snapshot_times: (1..=50).map(f64::from).collect(),
        ..IntegratorConfig::rk4(1e-3)
    };
    evolve_g4(&gen, g0, 50.0, &cfg).unwrap().snapshots
}

#[test]
fn pure_state_routes_agree_at_t50() {
    let net = paper_example_network::<f64>()
        .with_uniform_dephasing(0.0)
        .unwrap();
    let phi = InputProfile::localized(3, 0, 1).unwrap();
    let u = evolve_exact(&net, 50.0).unwrap();
    let psi = amplitude_from_propagator(&phi, &u, ExchangeStatistics::Boson).unwrap();
    let psi0 = amplitude_from_propagator(&phi, &Propagator::identity(3), ExchangeStatistics::Boson)
        .unwrap();
    let psi_ode = evolve_amplitude(&net, &psi0, 50.0, &IntegratorConfig::rk4(1e-3)).unwrap();
    let g_gen = evolve_g4(
        &coherent_generator(&net),
        &g4_from_amplitude(&psi0),
        50.0,
        &IntegratorConfig::rk4(1e-3),
    )
    .unwrap()
    .final_state;
    let a = g4_from_amplitude(&psi).matrix;
    let b = g4_from_amplitude(&psi_ode).matrix;
    assert!(a.max_abs_diff(&b) < 1e-8);
    assert!(a.max_abs_diff(&g_gen.matrix) < 1e-8);
    assert!(b.max_abs_diff(&g_gen.matrix) < 1e-8);
}

#[test]
fn invariants_hold_along_all_evolutions() {
    for gamma in [0.0, 2.0] {
        let net = paper_example_network::<f64>()
            .with_uniform_dephasing(gamma)
            .unwrap();
        for spec in canonical() {
            let g0 = build_initial_g4(&spec, 3).unwrap().tensor;
            let d0 = g0.diagnostics();
            let (sym0, anti0) = (d0.sym_weight, d0.antisym_weight);
            for g in sampled(&net, &g0, gamma == 0.0) {
                let d = g.diagnostics();
                assert!(
                    d.trace_drift < 1e-9,
                    "{spec:?} γ={gamma} t={}: {}",
                    g.time,
                    d.trace_drift
                );
                assert!(d.hermiticity_residual < 1e-10);
                assert!(
                    d.min_eigenvalue > -1e-8,
                    "{spec:?} t={}: {}",
                    g.time,
                    d.min_eigenvalue
                );
                assert!((d.sym_weight - sym0).abs() < 1e-8);
                assert!((d.antisym_weight - anti0).abs() < 1e-8);
            }
        }
    }
    let net = paper_example_network::<f64>();
    for t in (0..=50).map(f64::from) {
        assert!(evolve_exact(&net, t).unwrap().unitarity_residual() < 1e-10);
    }
}

#[test]
fn fermionic_amplitude_stays_antisymmetric() {
    let net = paper_example_network::<f64>();
    let phi = InputProfile::localized(3, 0, 1).unwrap();
    for t in [0.5, 7.0, 50.0] {
        let u = evolve_exact(&net, t).unwrap();
        let psi = amplitude_from_propagator(&phi, &u, ExchangeStatistics::Fermion).unwrap();
        assert!(psi.exchange_residual() < 1e-12);
        for p in 0..3 {
            assert!(psi.matrix[(p, p)].norm() < 1e-12);
        }
    }
    let diag = InputProfile::<f64>::localized(3, 1, 1).unwrap();
    let err =
        amplitude_from_propagator(&diag, &Propagator::identity(3), ExchangeStatistics::Fermion);
    assert!(matches!(err, Err(Error::VanishingFermionicState)));
}

/// Long-time oracle for the steady-state values used as goldens elsewhere.
#[test]
fn long_time_steady_states() {
    let net = paper_example_network::<f64>();
    let gen = averaged_generator(&net);
    let (third_sixth, twelfth, eighth) = (1.0 / 6.0, 1.0 / 12.0, 1.0 / 8.0);
    for (k, spec) in canonical().iter().enumerate() {
        let g0 = build_initial_g4(spec, 3).unwrap().tensor;
        let ss = find_steady_state(&gen, &g0, 1e-12, 200.0, 1e-3).unwrap();
        assert!(ss.converged(), "{spec:?}: residual {}", ss.residual);
        let g = &ss.state;
        let (diag, off, exch) = if k < 3 {
            (third_sixth, twelfth, twelfth)
        } else {
            (twelfth, eighth, -1.0 / 24.0)
        };
        for p in 0..3 {
            for q in 0..3 {
                let want = if p == q { diag } else { off };
                assert!(
                    (g.get(p, q, p, q).re - want).abs() < 1e-9,
                    "{spec:?} ({p},{q})"
                );
                if p != q {
                    assert!((g.get(p, q, q, p).re - exch).abs() < 1e-9);
                }
            }
        }
        let d = 9;
        for r in 0..d {
            for c in 0..d {
                let (p, q, pp, qq) = (r / 3, r % 3, c / 3, c % 3);
                let structural = (p, q) == (pp, qq) || (p, q) == (qq, pp);
                if !structural && k == 3 {
                    assert!(g.matrix[(r, c)].norm() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn separable_entangled_and_classical_coincide_at_t50() {
    let net = paper_example_network::<f64>();
    let gen = averaged_generator(&net);
    let at50: Vec<_> = canonical()[..3]
        .iter()
        .map(|s| {
            let g0 = build_initial_g4(s, 3).unwrap().tensor;
            evolve_g4(&gen, &g0, 50.0, &IntegratorConfig::rk4(1e-3))
                .unwrap()
                .final_state
        })
        .collect();
    for a in &at50 {
        for b in &at50 {
            assert!(a.matrix.max_abs_diff(&b.matrix) < 1e-6);
        }
        let g2 = g2_from_g4(a).unwrap();
        for p in 0..3 {
            assert!((g2[(p, p)] - 1.0 / 6.0).abs() < 1e-4);
        }
    }
}

#[test]
fn evolution_is_linear_in_the_initial_state() {
    let net = paper_example_network::<f64>();
    let gen = averaged_generator(&net);
    let cfg = IntegratorConfig::rk4(1e-3);
    let [a, b, ..] = canonical();
    let ga = build_initial_g4(&a, 3).unwrap().tensor;
    let gb = build_initial_g4(&b, 3).unwrap().tensor;
    let mix = CorrelationTensor::mixture(&[(0.3, &ga), (0.7, &gb)]).unwrap();
    let ea = evolve_g4(&gen, &ga, 4.0, &cfg).unwrap().final_state;
    let eb = evolve_g4(&gen, &gb, 4.0, &cfg).unwrap().final_state;
    let em = evolve_g4(&gen, &mix, 4.0, &cfg).unwrap().final_state;
    let combined = CorrelationTensor::mixture(&[(0.3, &ea), (0.7, &eb)]).unwrap();
    assert!(em.matrix.max_abs_diff(&combined.matrix) < 1e-13);
}

#[test]
fn oversized_step_is_rejected() {
    let net = paper_example_network::<f64>();
    let g0 = build_initial_g4(&canonical()[0], 3).unwrap().tensor;
    let err = evolve_g4(
        &averaged_generator(&net),
        &g0,
        1.0,
        &IntegratorConfig::rk4(0.5),
    )
    .unwrap_err();
    match err {
        Error::StepTooLarge { max_step, .. } => assert!(max_step > 0.0 && max_step < 0.5),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn noiseless_dynamics_never_settles() {
    let net = paper_example_network::<f64>()
        .with_uniform_dephasing(0.0)
        .unwrap();
    let g0 = build_initial_g4(&canonical()[0], 3).unwrap().tensor;
    let ss = find_steady_state(&coherent_generator(&net), &g0, 1e-9, 20.0, 1e-3).unwrap();
    assert_eq!(ss.status, SteadyStatus::NotConverged { t_max: 20.0 });
    assert!(ss.residual > 1e-3);
}

#[test]
fn snapshots_follow_requested_times() {
    let net = paper_example_network::<f64>();
    let g0 = build_initial_g4(&canonical()[1], 3).unwrap().tensor;
    let cfg = IntegratorConfig {
        snapshot_times: vec![0.0, 0.25, 1.0, 9.0],
        ..IntegratorConfig::rk4(1e-3)
    };
    let ev = evolve_g4(&averaged_generator(&net), &g0, 2.0, &cfg).unwrap();
    let times: Vec<f64> = ev.snapshots.iter().map(|g| g.time).collect();
    assert_eq!(times, vec![0.0, 0.25, 1.0]);
    assert_eq!(ev.snapshots[0], g0);
    let direct = evolve_g4(
        &averaged_generator(&net),
        &g0,
        1.0,
        &IntegratorConfig::rk4(1e-3),
    )
    .unwrap();
    assert!(
        direct
            .final_state
            .matrix
            .max_abs_diff(&ev.snapshots[2].matrix)
            < 1e-12
    );
}

#[test]
fn exchange_block_survives_dephasing_without_hopping() {
    let base = paper_example_network::<f64>();
    let net = corrdyn_core::network::build_network(
        base.energies().to_vec(),
        Matrix::zeros(3, 3),
        vec![2.0; 3],
    )
    .unwrap();
    let g0 = build_initial_g4(&canonical()[0], 3).unwrap().tensor;
    let g = evolve_g4(
        &averaged_generator(&net),
        &g0,
        10.0,
        &IntegratorConfig::rk4(1e-3),
    )
    .unwrap()
    .final_state;
    let (a, b) = (pair_index(3, 0, 1), pair_index(3, 1, 0));
    assert!((g.matrix[(a, b)] - Complex64::new(0.5, 0.0)).norm() < 1e-10);
}
