// SPDX-License-Identifier: Apache-2.0

//! Strict JSON experiment configuration.
//!
//! Unknown keys anywhere in the document are rejected by name; syntax errors
//! carry the line and column reported by the JSON parser.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use corrdyn_core::ensemble::{NoiseMode, SdeScheme};
use corrdyn_core::linalg::Matrix;
use corrdyn_core::network::{build_network, paper_example_network};
use corrdyn_core::{
    Complex64, ExchangeStatistics, InitialStateSpec, IntegratorConfig, Method, Network, NoiseModel,
};
use serde::de::{self, value::MapAccessDeserializer, Deserializer, MapAccess, Visitor};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_STEADY_TOL: f64 = 1e-9;
pub const DEFAULT_STEADY_T_MAX: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure {s:?}, expected fig1, fig2, fig3 or fig4"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    DeterministicG4,
    AveragedG4,
    Ensemble,
    SteadyState,
    Figure(Figure),
}

const RUN_KINDS: &[&str] = &[
    "deterministic-g4",
    "averaged-g4",
    "ensemble",
    "steady-state",
];

impl RunKind {
    pub fn name(self) -> String {
        match self {
            RunKind::DeterministicG4 => "deterministic-g4".into(),
            RunKind::AveragedG4 => "averaged-g4".into(),
            RunKind::Ensemble => "ensemble".into(),
            RunKind::SteadyState => "steady-state".into(),
            RunKind::Figure(f) => format!("figure({f})"),
        }
    }
}

impl<'de> Deserialize<'de> for RunKind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RunKind;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a run kind string or {\"figure\": \"fig1\"..\"fig4\"}")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RunKind, E> {
                Ok(match v {
                    "deterministic-g4" => RunKind::DeterministicG4,
                    "averaged-g4" => RunKind::AveragedG4,
                    "ensemble" => RunKind::Ensemble,
                    "steady-state" => RunKind::SteadyState,
                    _ => return Err(E::unknown_variant(v, RUN_KINDS)),
                })
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<RunKind, A::Error> {
                let key: String = map
                    .next_key()?
                    .ok_or_else(|| de::Error::missing_field("figure"))?;
                if key != "figure" {
                    return Err(de::Error::unknown_field(&key, &["figure"]));
                }
                let fig: Figure = map.next_value()?;
                if let Some(extra) = map.next_key::<String>()? {
                    return Err(de::Error::unknown_field(&extra, &["figure"]));
                }
                Ok(RunKind::Figure(fig))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFields {
    preset: Option<String>,
    energies: Option<Vec<f64>>,
    couplings: Option<Vec<Vec<f64>>>,
    dephasing_rates: Option<Vec<f64>>,
}

#[derive(Debug)]
enum RawNetwork {
    Preset(String),
    Fields(NetworkFields),
}

impl<'de> Deserialize<'de> for RawNetwork {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawNetwork;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("\"paper-example\" or a network object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<RawNetwork, E> {
                Ok(RawNetwork::Preset(v.to_owned()))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<RawNetwork, A::Error> {
                NetworkFields::deserialize(MapAccessDeserializer::new(map)).map(RawNetwork::Fields)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RawStatistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl From<RawStatistics> for ExchangeStatistics {
    fn from(s: RawStatistics) -> Self {
        match s {
            RawStatistics::Boson => ExchangeStatistics::Boson,
            RawStatistics::Fermion => ExchangeStatistics::Fermion,
            RawStatistics::Distinguishable => ExchangeStatistics::Distinguishable,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum RawState {
    Separable {
        sites: [usize; 2],
    },
    Entangled {
        sites: [usize; 2],
    },
    ClassicallyCorrelated {
        sites: [usize; 2],
    },
    Distinguishable {
        sites: [usize; 2],
    },
    CustomPure {
        phi_re: Vec<Vec<f64>>,
        #[serde(default)]
        phi_im: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        statistics: Option<RawStatistics>,
    },
    CustomMixture {
        components: Vec<RawComponent>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    weight: f64,
    state: RawState,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawNoiseMode {
    ItoSde,
    PiecewiseConstant,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawScheme {
    Splitting,
    EulerMaruyama,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    mode: RawNoiseMode,
    rates: Option<Vec<f64>>,
    sigma: Option<f64>,
    delta_t: Option<f64>,
    step_size: Option<f64>,
    scheme: Option<RawScheme>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawMethod {
    MatrixExponential,
    Rk4,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    method: Option<RawMethod>,
    step_size: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteady {
    tol: Option<f64>,
    t_max: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    network: Option<RawNetwork>,
    initial_state: Option<RawState>,
    run_kind: RunKind,
    noise: Option<RawNoise>,
    integrator: Option<RawIntegrator>,
    snapshot_times: Option<Vec<f64>>,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    trajectories: Option<usize>,
    steady_state: Option<RawSteady>,
    heatmaps: Option<bool>,
}

/// Noise settings; the seed comes from the experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub mode: NoiseMode,
    /// Itô rates; `None` means the network's dephasing rates.
    pub rates: Option<Vec<f64>>,
    pub sigma: f64,
    pub delta_t: f64,
    pub step_size: Option<f64>,
    pub scheme: SdeScheme,
}

impl NoiseSpec {
    pub fn model(&self, net: &Network, seed: u64) -> NoiseModel {
        let mut m = match self.mode {
            NoiseMode::ItoSde => NoiseModel::ito(
                self.rates
                    .clone()
                    .unwrap_or_else(|| net.dephasing_rates().to_vec()),
                seed,
            ),
            NoiseMode::PiecewiseConstant => NoiseModel::piecewise(self.sigma, self.delta_t, seed),
        };
        if let Some(h) = self.step_size {
            m = m.with_step_size(h);
        }
        m.with_scheme(self.scheme)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadySettings {
    pub tol: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub network: Network,
    /// Absent only for figure runs.
    pub initial_state: Option<InitialStateSpec>,
    pub run_kind: RunKind,
    pub noise: Option<NoiseSpec>,
    /// Carries `snapshot_times` as well.
    pub integrator: IntegratorConfig,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trajectories: Option<usize>,
    pub steady_state: SteadySettings,
    pub heatmaps: bool,
}

impl ExperimentConfig {
    pub fn snapshot_times(&self) -> &[f64] {
        &self.integrator.snapshot_times
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn missing(field: &str, kind: RunKind) -> CliError {
    config_err(format!(
        "missing required field \"{field}\" for run_kind {}",
        kind.name()
    ))
}

fn matrix_from_rows(rows: Vec<Vec<f64>>, what: &str) -> CliResult<Matrix<f64>> {
    Matrix::from_rows(&rows).ok_or_else(|| config_err(format!("{what}: rows have unequal lengths")))
}

fn network_from_raw(raw: RawNetwork) -> CliResult<Network> {
    let fields = match raw {
        RawNetwork::Preset(name) => NetworkFields {
            preset: Some(name),
            energies: None,
            couplings: None,
            dephasing_rates: None,
        },
        RawNetwork::Fields(f) => f,
    };
    let net = match fields.preset.as_deref() {
        Some("paper-example") => {
            if fields.energies.is_some() || fields.couplings.is_some() {
                return Err(config_err(
                    "network: a preset cannot be combined with energies or couplings",
                ));
            }
            paper_example_network()
        }
        Some(other) => {
            return Err(config_err(format!(
                "network: unknown preset {other:?}, expected \"paper-example\""
            )))
        }
        None => {
            let energies = fields
                .energies
                .ok_or_else(|| config_err("network: missing field \"energies\""))?;
            let couplings = fields
                .couplings
                .ok_or_else(|| config_err("network: missing field \"couplings\""))?;
            let n = energies.len();
            build_network(
                energies,
                matrix_from_rows(couplings, "network.couplings")?,
                vec![0.0; n],
            )
            .map_err(|e| config_err(format!("network: {e}")))?
        }
    };
    match fields.dephasing_rates {
        Some(rates) => net
            .with_dephasing_rates(rates)
            .map_err(|e| config_err(format!("network: {e}"))),
        None => Ok(net),
    }
}

fn state_from_raw(raw: RawState) -> CliResult<InitialStateSpec> {
    Ok(match raw {
        RawState::Separable { sites: [m, n] } => InitialStateSpec::Separable(m, n),
        RawState::Entangled { sites: [m, n] } => InitialStateSpec::Entangled(m, n),
        RawState::ClassicallyCorrelated { sites: [m, n] } => {
            InitialStateSpec::ClassicallyCorrelated(m, n)
        }
        RawState::Distinguishable { sites: [m, n] } => InitialStateSpec::Distinguishable(m, n),
        RawState::CustomPure {
            phi_re,
            phi_im,
            statistics,
        } => {
            let re = matrix_from_rows(phi_re, "initial_state.phi_re")?;
            let im = match phi_im {
                Some(rows) => matrix_from_rows(rows, "initial_state.phi_im")?,
                None => Matrix::zeros(re.rows(), re.cols()),
            };
            if im.rows() != re.rows() || im.cols() != re.cols() {
                return Err(config_err(
                    "initial_state: phi_re and phi_im differ in shape",
                ));
            }
            if !re.is_square() {
                return Err(config_err("initial_state: phi must be square"));
            }
            let phi = Matrix::from_fn(re.rows(), re.cols(), |r, c| {
                Complex64::new(re[(r, c)], im[(r, c)])
            });
            InitialStateSpec::CustomPure {
                phi,
                statistics: statistics.map_or(ExchangeStatistics::Boson, Into::into),
            }
        }
        RawState::CustomMixture { components } => InitialStateSpec::CustomMixture(
            components
                .into_iter()
                .map(|c| Ok((c.weight, state_from_raw(c.state)?)))
                .collect::<CliResult<_>>()?,
        ),
    })
}

fn noise_from_raw(raw: RawNoise) -> CliResult<NoiseSpec> {
    let scheme = match raw.scheme {
        None | Some(RawScheme::Splitting) => SdeScheme::Splitting,
        Some(RawScheme::EulerMaruyama) => SdeScheme::EulerMaruyama,
    };
    let spec = match raw.mode {
        RawNoiseMode::ItoSde => {
            if raw.sigma.is_some() || raw.delta_t.is_some() {
                return Err(config_err(
                    "noise: sigma and delta_t apply to piecewise-constant mode",
                ));
            }
            NoiseSpec {
                mode: NoiseMode::ItoSde,
                rates: raw.rates,
                sigma: 0.0,
                delta_t: 1.0,
                step_size: raw.step_size,
                scheme,
            }
        }
        RawNoiseMode::PiecewiseConstant => {
            if raw.rates.is_some() {
                return Err(config_err("noise: rates apply to ito-sde mode"));
            }
            NoiseSpec {
                mode: NoiseMode::PiecewiseConstant,
                rates: None,
                sigma: raw
                    .sigma
                    .ok_or_else(|| config_err("noise: missing field \"sigma\""))?,
                delta_t: raw
                    .delta_t
                    .ok_or_else(|| config_err("noise: missing field \"delta_t\""))?,
                step_size: raw.step_size,
                scheme,
            }
        }
    };
    Ok(spec)
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> CliResult<ExperimentConfig> {
    parse_config_with_seed(text, None)
}

/// As [`parse_config`], with `seed` (from the command line) taking
/// precedence over the document.
pub fn parse_config_with_seed(text: &str, seed: Option<u64>) -> CliResult<ExperimentConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| config_err(e.to_string()))?;
    let kind = raw.run_kind;
    let is_figure = matches!(kind, RunKind::Figure(_));

    let network = match raw.network {
        Some(n) => network_from_raw(n)?,
        None if is_figure => paper_example_network(),
        None => return Err(missing("network", kind)),
    };
    if is_figure && network != paper_example_network() {
        return Err(config_err("figure runs use the built-in example network"));
    }
    let n = network.n_sites();

    let initial_state = match raw.initial_state {
        Some(s) => {
            let spec = state_from_raw(s)?;
            spec.pure_components(n)
                .map_err(|e| config_err(format!("initial_state: {e}")))?;
            Some(spec)
        }
        None if is_figure => None,
        None => return Err(missing("initial_state", kind)),
    };

    let mut integrator = IntegratorConfig::default();
    if let Some(i) = raw.integrator {
        if let Some(m) = i.method {
            integrator.method = match m {
                RawMethod::MatrixExponential => Method::MatrixExponential,
                RawMethod::Rk4 => Method::FixedStepRk4,
            };
        }
        if let Some(h) = i.step_size {
            integrator.step_size = h;
        }
    }
    match (raw.snapshot_times, kind) {
        (Some(times), _) => integrator.snapshot_times = times,
        (None, RunKind::DeterministicG4 | RunKind::AveragedG4 | RunKind::Ensemble) => {
            return Err(missing("snapshot_times", kind))
        }
        (None, _) => {}
    }
    integrator
        .validate()
        .map_err(|e| config_err(format!("integrator: {e}")))?;
    if matches!(
        kind,
        RunKind::DeterministicG4 | RunKind::AveragedG4 | RunKind::Ensemble
    ) && integrator.snapshot_times.is_empty()
    {
        return Err(config_err("snapshot_times must not be empty"));
    }

    let seed = seed.or(raw.seed);
    let noise = raw.noise.map(noise_from_raw).transpose()?;
    if kind == RunKind::Ensemble {
        let spec = noise.as_ref().ok_or_else(|| missing("noise", kind))?;
        let seed = seed.ok_or_else(|| config_err("seed required for ensemble runs"))?;
        match raw.trajectories {
            None => return Err(missing("trajectories", kind)),
            Some(0) => return Err(config_err("trajectories must be positive")),
            Some(_) => {}
        }
        spec.model(&network, seed)
            .validate(n)
            .map_err(|e| config_err(format!("noise: {e}")))?;
    }

    let steady = raw.steady_state.unwrap_or(RawSteady {
        tol: None,
        t_max: None,
    });
    let steady_state = SteadySettings {
        tol: steady.tol.unwrap_or(DEFAULT_STEADY_TOL),
        t_max: steady.t_max.unwrap_or(DEFAULT_STEADY_T_MAX),
    };
    let tol_ok = steady_state.tol > 0.0;
    let t_max_ok = steady_state.t_max >= 0.0 && steady_state.t_max.is_finite();
    if !tol_ok || !t_max_ok {
        return Err(config_err(
            "steady_state: tol must be positive and t_max finite, non-negative",
        ));
    }

    Ok(ExperimentConfig {
        network,
        initial_state,
        run_kind: kind,
        noise,
        integrator,
        output_dir: raw.output_dir,
        seed,
        trajectories: raw.trajectories,
        steady_state,
        heatmaps: raw.heatmaps.unwrap_or(true),
    })
}
