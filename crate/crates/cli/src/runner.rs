// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use corrdyn_core::amplitude::amplitude_from_propagator;
use corrdyn_core::correlation::{
    averaged_generator, evolve_g4, find_steady_state, g4_from_amplitude, SteadyStatus,
};
use corrdyn_core::ensemble::{compare_to_master, ensemble_average_state, NoiseMode};
use corrdyn_core::propagator::evolve;
use corrdyn_core::states::build_initial_g4;
use corrdyn_core::{CorrelationTensor, InitialStateSpec, IntegratorConfig, Network};
use serde::Serialize;

use crate::config::{ExperimentConfig, RunKind};
use crate::error::{CliError, CliResult};
use crate::figures::reproduce_figure;
use crate::output::{
    ensure_dir, time_label, write_json, write_matrix_csv, write_snapshot, SnapshotSummary,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadySummary {
    pub converged: bool,
    /// Convergence time, or `t_max` when not converged.
    pub time: f64,
    pub residual: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSnapshot {
    pub time: f64,
    pub max_std_error: f64,
    pub max_deviation_from_master: f64,
    pub fraction_within_3se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub mode: &'static str,
    pub seed: u64,
    pub trajectories: usize,
    pub snapshots: Vec<EnsembleSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub run_kind: String,
    pub n_sites: usize,
    pub snapshots: Vec<SnapshotSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steady_state: Option<SteadySummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSummary>,
}

/// Noiseless evolution of every pure component with the single-particle
/// propagator, mixed back with the component weights.
pub fn deterministic_snapshots(
    net: &Network,
    spec: &InitialStateSpec,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> CliResult<Vec<CorrelationTensor>> {
    let comps = spec.pure_components(net.n_sites())?;
    let single = IntegratorConfig {
        snapshot_times: Vec::new(),
        ..cfg.clone()
    };
    times
        .iter()
        .map(|&t| {
            let u = evolve(net, t, &single)?;
            let parts = comps
                .iter()
                .map(|c| {
                    let psi = amplitude_from_propagator(&c.profile, &u, c.statistics)?;
                    Ok((c.weight, g4_from_amplitude(&psi)))
                })
                .collect::<corrdyn_core::Result<Vec<_>>>()?;
            let refs: Vec<_> = parts.iter().map(|(w, g)| (*w, g)).collect();
            let mut g = CorrelationTensor::mixture(&refs)?;
            g.time = t;
            Ok(g)
        })
        .collect()
}

/// Disorder-averaged evolution sampled at `times`.
pub fn averaged_snapshots(
    net: &Network,
    spec: &InitialStateSpec,
    times: &[f64],
    step_size: f64,
) -> CliResult<Vec<CorrelationTensor>> {
    let g0 = build_initial_g4(spec, net.n_sites())?.tensor;
    let cfg = IntegratorConfig {
        snapshot_times: times.to_vec(),
        ..IntegratorConfig::rk4(step_size)
    };
    let t_end = times.last().copied().unwrap_or(0.0);
    Ok(evolve_g4(&averaged_generator(net), &g0, t_end, &cfg)?.snapshots)
}

/// Writes snapshot files for each tensor and returns their summaries.
pub fn write_snapshots(
    dir: &Path,
    tensors: &[CorrelationTensor],
    heatmaps: bool,
) -> CliResult<Vec<SnapshotSummary>> {
    tensors
        .iter()
        .map(|g| write_snapshot(dir, g, heatmaps))
        .collect()
}

fn state_of(cfg: &ExperimentConfig) -> CliResult<&InitialStateSpec> {
    cfg.initial_state
        .as_ref()
        .ok_or_else(|| CliError::Config("initial_state is required".into()))
}

/// Runs a configured experiment, writing every output into `out`.
///
/// Steady-state runs that do not converge still write their summary before
/// returning [`CliError::NotConverged`].
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    if let RunKind::Figure(fig) = cfg.run_kind {
        let report = reproduce_figure(fig, out)?;
        return report.into_result();
    }
    ensure_dir(out)?;
    let net = &cfg.network;
    let spec = state_of(cfg)?;
    let times = cfg.snapshot_times();
    let mut summary = Summary {
        run_kind: cfg.run_kind.name(),
        n_sites: net.n_sites(),
        snapshots: Vec::new(),
        steady_state: None,
        ensemble: None,
    };
    let mut outcome = Ok(());

    match cfg.run_kind {
        RunKind::DeterministicG4 => {
            let gs = deterministic_snapshots(net, spec, times, &cfg.integrator)?;
            summary.snapshots = write_snapshots(out, &gs, cfg.heatmaps)?;
        }
        RunKind::AveragedG4 => {
            let gs = averaged_snapshots(net, spec, times, cfg.integrator.step_size)?;
            summary.snapshots = write_snapshots(out, &gs, cfg.heatmaps)?;
        }
        RunKind::SteadyState => {
            let g0 = build_initial_g4(spec, net.n_sites())?.tensor;
            let s = &cfg.steady_state;
            let ss = find_steady_state(
                &averaged_generator(net),
                &g0,
                s.tol,
                s.t_max,
                cfg.integrator.step_size,
            )?;
            let (converged, time) = match ss.status {
                SteadyStatus::Converged { time } => (true, time),
                SteadyStatus::NotConverged { t_max } => (false, t_max),
            };
            let mut tensors = vec![g0];
            if time > 0.0 {
                tensors.push(ss.state.clone());
            }
            summary.snapshots = write_snapshots(out, &tensors, cfg.heatmaps)?;
            summary.steady_state = Some(SteadySummary {
                converged,
                time,
                residual: ss.residual,
                tol: s.tol,
            });
            if !converged {
                outcome = Err(CliError::NotConverged {
                    t_max: s.t_max,
                    residual: ss.residual,
                });
            }
        }
        RunKind::Ensemble => {
            summary.ensemble = Some(run_ensemble(cfg, spec, out, &mut summary.snapshots)?);
        }
        RunKind::Figure(_) => unreachable!("handled above"),
    }
    write_json(&out.join("summary.json"), &summary)?;
    outcome
}

fn run_ensemble(
    cfg: &ExperimentConfig,
    spec: &InitialStateSpec,
    out: &Path,
    snapshots: &mut Vec<SnapshotSummary>,
) -> CliResult<EnsembleSummary> {
    let net = &cfg.network;
    let missing = |f: &str| CliError::Config(format!("{f} required for ensemble runs"));
    let seed = cfg.seed.ok_or_else(|| missing("seed"))?;
    let m = cfg.trajectories.ok_or_else(|| missing("trajectories"))?;
    let noise = cfg
        .noise
        .as_ref()
        .ok_or_else(|| missing("noise"))?
        .model(net, seed);
    let n = net.n_sites();
    let master_net = net.with_dephasing_rates(noise.effective_rates(n))?;
    let master = averaged_snapshots(
        &master_net,
        spec,
        cfg.snapshot_times(),
        cfg.integrator.step_size,
    )?;

    let mut stats = Vec::new();
    for (&t, reference) in cfg.snapshot_times().iter().zip(&master) {
        let ens = ensemble_average_state(net, &noise, spec, t, m)?;
        let report = compare_to_master(&ens, reference)?;
        let mut s = write_snapshot(out, &ens.mean_g4, cfg.heatmaps)?;
        let se_name = format!("g4_t{}_se.csv", time_label(t));
        write_matrix_csv(
            &out.join(&se_name),
            "standard error of the ensemble mean per G4 element, same layout as g4_*_re.csv",
            &ens.std_error,
        )?;
        s.files.push(se_name);
        snapshots.push(s);
        stats.push(EnsembleSnapshot {
            time: t,
            max_std_error: ens.max_std_error(),
            max_deviation_from_master: report.max_deviation,
            fraction_within_3se: report.fraction_within_3se,
        });
    }
    Ok(EnsembleSummary {
        mode: match noise.mode {
            NoiseMode::ItoSde => "ito-sde",
            NoiseMode::PiecewiseConstant => "piecewise-constant",
        },
        seed,
        trajectories: m,
        snapshots: stats,
    })
}
