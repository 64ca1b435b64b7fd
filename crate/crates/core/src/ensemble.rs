// SPDX-License-Identifier: Apache-2.0

//! Noisy single trajectories and Monte-Carlo averages of `ΨΨ†`.
//!
//! Two noise modes are supported:
//!
//! * `ItoSde`: white phase noise on every site with intensity `γ_p`. The
//!   default scheme is a symmetric unitary splitting: half a noise kick
//!   `exp(i·diag(√γ ΔW))` with `ΔW ~ N(0, h/2)`, the exact coherent step
//!   `exp(iHh)`, then another independent half kick. Averaged over the noise
//!   each kick is exactly the dephasing semigroup, so the mean dynamics is a
//!   second-order splitting of the averaged generator. Euler–Maruyama on the
//!   Itô form (drift `iH − Γ/2`) is kept as a cross-check of that drift; it
//!   is not unitary.
//! * `PiecewiseConstant`: site energies are redrawn from `N(ε_p, σ²)` every
//!   `δt` and held fixed in between; each interval is propagated exactly.
//!
//! Randomness comes from a ChaCha8 stream selected by the trajectory index
//! under the run seed, consumed in a fixed order per step, so a trajectory
//! does not depend on which worker runs it. Per-block statistics are merged
//! pairwise in block order, which makes the averages bit-identical for any
//! worker count.

use std::time::Instant;

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::amplitude::{
    amplitude_from_propagator, ExchangeStatistics, InputProfile, TwoParticleAmplitude,
};
use crate::correlation::{g4_from_amplitude, CorrelationTensor};
use crate::error::{Error, Result};
use crate::integrate::step_count;
use crate::linalg::{symmetric_eigen, unitary_exp, unitary_exp_from_eigen, Matrix};
use crate::network::Network;
use crate::propagator::{check_time, Propagator};
use crate::scalar::{i_unit, Real, C};
use crate::states::InitialStateSpec;

/// Trajectories per reduction block.
const BLOCK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseMode {
    #[default]
    ItoSde,
    PiecewiseConstant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdeScheme {
    #[default]
    Splitting,
    EulerMaruyama,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel<T> {
    pub mode: NoiseMode,
    /// Standard deviation of the site-energy fluctuation (piecewise mode).
    pub sigma: T,
    /// Hold time of each energy draw (piecewise mode).
    pub delta_t: T,
    /// Per-site white-noise intensities (Itô mode).
    pub rates: Vec<T>,
    pub seed: u64,
    /// Integration step of the Itô schemes.
    pub step_size: T,
    pub scheme: SdeScheme,
}

impl<T: Real> NoiseModel<T> {
    pub fn ito(rates: Vec<T>, seed: u64) -> Self {
        Self {
            mode: NoiseMode::ItoSde,
            sigma: T::zero(),
            delta_t: T::one(),
            rates,
            seed,
            step_size: T::lit(1e-3),
            scheme: SdeScheme::Splitting,
        }
    }

    pub fn piecewise(sigma: T, delta_t: T, seed: u64) -> Self {
        Self {
            mode: NoiseMode::PiecewiseConstant,
            sigma,
            delta_t,
            rates: Vec::new(),
            seed,
            step_size: T::lit(1e-3),
            scheme: SdeScheme::Splitting,
        }
    }

    pub fn with_step_size(mut self, h: T) -> Self {
        self.step_size = h;
        self
    }

    pub fn with_scheme(mut self, scheme: SdeScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self, n_sites: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidNoise(msg));
        if !(self.sigma >= T::zero()) {
            return bad(format!("sigma must be non-negative, got {}", self.sigma));
        }
        if !(self.delta_t > T::zero()) {
            return bad(format!("delta_t must be positive, got {}", self.delta_t));
        }
        if !(self.step_size > T::zero()) {
            return bad(format!(
                "step_size must be positive, got {}",
                self.step_size
            ));
        }
        if self.mode == NoiseMode::ItoSde {
            if self.rates.len() != n_sites {
                return bad(format!("{} rates for {n_sites} sites", self.rates.len()));
            }
            if let Some(g) = self.rates.iter().find(|g| !(**g >= T::zero())) {
                return bad(format!("rates must be non-negative, got {g}"));
            }
        }
        Ok(())
    }

    /// Effective white-noise intensity per site.
    pub fn effective_rates(&self, n_sites: usize) -> Vec<T> {
        match self.mode {
            NoiseMode::ItoSde => self.rates.clone(),
            NoiseMode::PiecewiseConstant => {
                vec![gamma_from_sigma(self.sigma, self.delta_t); n_sites]
            }
        }
    }
}

/// `γ = σ²·δt/2`.
pub fn gamma_from_sigma<T: Real>(sigma: T, delta_t: T) -> T {
    sigma * sigma * delta_t / T::lit(2.0)
}

fn trajectory_rng(seed: u64, trajectory_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trajectory_index);
    rng
}

#[inline]
fn normal<T: Real>(rng: &mut ChaCha8Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// `out = a · b` for square row-major slices of side `n`.
fn mul_into<T: Real>(n: usize, a: &[C<T>], b: &[C<T>], out: &mut [C<T>]) {
    for r in 0..n {
        let row = &mut out[r * n..(r + 1) * n];
        row.iter_mut().for_each(|z| *z = C::zero());
        for k in 0..n {
            let x = a[r * n + k];
            for (o, &y) in row.iter_mut().zip(&b[k * n..(k + 1) * n]) {
                *o += x * y;
            }
        }
    }
}

/// Multiplies row `p` of `u` by `exp(i·√γ_p·ΔW_p)`, `ΔW_p ~ N(0, var)`.
fn phase_kick<T: Real>(u: &mut [C<T>], n: usize, amp: &[T], var_sqrt: T, rng: &mut ChaCha8Rng) {
    for p in 0..n {
        let dw = normal::<T>(rng) * var_sqrt;
        if amp[p] == T::zero() {
            continue;
        }
        let z = Complex::from_polar(T::one(), amp[p] * dw);
        for x in &mut u[p * n..(p + 1) * n] {
            *x *= z;
        }
    }
}

/// Single-particle propagator of one noisy realization.
pub fn trajectory_propagator<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    t: T,
    trajectory_index: u64,
) -> Result<Propagator<T>> {
    check_time(t)?;
    let n = net.n_sites();
    noise.validate(n)?;
    let mut rng = trajectory_rng(noise.seed, trajectory_index);
    let mut u = Matrix::<C<T>>::identity(n).into_vec();
    let mut scratch = vec![C::zero(); n * n];

    match noise.mode {
        NoiseMode::PiecewiseConstant => {
            let h0 = net.real_hamiltonian();
            let mut elapsed = T::zero();
            while elapsed < t {
                let span = noise.delta_t.min(t - elapsed);
                let mut h = h0.clone();
                for p in 0..n {
                    h[(p, p)] += noise.sigma * normal::<T>(&mut rng);
                }
                let step = unitary_exp(&h, span);
                mul_into(n, step.as_slice(), &u, &mut scratch);
                std::mem::swap(&mut u, &mut scratch);
                elapsed += span;
            }
        }
        NoiseMode::ItoSde => {
            let steps = step_count(t, noise.step_size);
            if steps > 0 {
                let h = t / T::from_usize(steps).expect("step count fits");
                let amp: Vec<T> = noise.rates.iter().map(|g| g.sqrt()).collect();
                let ham = net.real_hamiltonian();
                match noise.scheme {
                    SdeScheme::Splitting => {
                        let (values, vectors) = symmetric_eigen(&ham);
                        let coherent = unitary_exp_from_eigen(&values, &vectors, h);
                        let half_sd = (h * T::lit(0.5)).sqrt();
                        for _ in 0..steps {
                            phase_kick(&mut u, n, &amp, half_sd, &mut rng);
                            mul_into(n, coherent.as_slice(), &u, &mut scratch);
                            std::mem::swap(&mut u, &mut scratch);
                            phase_kick(&mut u, n, &amp, half_sd, &mut rng);
                        }
                    }
                    SdeScheme::EulerMaruyama => {
                        let iu = i_unit::<T>();
                        let sd = h.sqrt();
                        let half = T::lit(0.5);
                        let mut dw = vec![T::zero(); n];
                        for _ in 0..steps {
                            for w in dw.iter_mut() {
                                *w = normal::<T>(&mut rng) * sd;
                            }
                            for p in 0..n {
                                for col in 0..n {
                                    let mut hu = C::zero();
                                    for r in 0..n {
                                        hu += u[r * n + col] * ham[(p, r)];
                                    }
                                    let x = u[p * n + col];
                                    let drift = iu * hu - x * (half * noise.rates[p]);
                                    scratch[p * n + col] =
                                        x + drift * h + iu * x * (amp[p] * dw[p]);
                                }
                            }
                            std::mem::swap(&mut u, &mut scratch);
                        }
                    }
                }
            }
        }
    }
    Ok(Propagator {
        matrix: Matrix::from_vec(n, n, u),
        time: t,
    })
}

/// One noisy two-particle trajectory, assembled from its propagator.
pub fn run_trajectory<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    phi: &InputProfile<T>,
    stats: ExchangeStatistics,
    t: T,
    trajectory_index: u64,
) -> Result<TwoParticleAmplitude<T>> {
    let u = trajectory_propagator(net, noise, t, trajectory_index)?;
    amplitude_from_propagator(phi, &u, stats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult<T> {
    pub mean_g4: CorrelationTensor<T>,
    /// Standard error of the complex mean per element,
    /// `sqrt((Var Re + Var Im) / M)`.
    pub std_error: Matrix<T>,
    pub trajectories: usize,
    /// Not part of equality-relevant output; reported for diagnostics only.
    pub wall_time: f64,
}

impl<T: Real> EnsembleResult<T> {
    pub fn max_std_error(&self) -> T {
        self.std_error
            .as_slice()
            .iter()
            .copied()
            .fold(T::zero(), T::max)
    }
}

/// Per-element running mean and sum of squared deviations.
#[derive(Debug, Clone)]
struct Moments<T> {
    count: usize,
    mean: Vec<C<T>>,
    m2: Vec<T>,
}

impl<T: Real> Moments<T> {
    fn new(len: usize) -> Self {
        Self {
            count: 0,
            mean: vec![C::zero(); len],
            m2: vec![T::zero(); len],
        }
    }

    fn push(&mut self, x: &[C<T>]) {
        self.count += 1;
        let inv = T::one() / T::from_usize(self.count).expect("count fits");
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(x) {
            let delta = v - *m;
            *m += delta * inv;
            let after = v - *m;
            *s += delta.re * after.re + delta.im * after.im;
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let n = a.count + b.count;
        let (na, nb) = (
            T::from_usize(a.count).expect("count fits"),
            T::from_usize(b.count).expect("count fits"),
        );
        let nt = na + nb;
        let mut mean = Vec::with_capacity(a.mean.len());
        let mut m2 = Vec::with_capacity(a.mean.len());
        for k in 0..a.mean.len() {
            let delta = b.mean[k] - a.mean[k];
            mean.push(a.mean[k] + delta * (nb / nt));
            m2.push(a.m2[k] + b.m2[k] + delta.norm_sqr() * (na * nb / nt));
        }
        Self { count: n, mean, m2 }
    }
}

fn merge_pairwise<T: Real>(mut parts: Vec<Moments<T>>) -> Option<Moments<T>> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => Moments::merge(a, b),
                None => a,
            });
        }
        parts = next;
    }
    parts.pop()
}

fn ensemble_core<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    phi: &InputProfile<T>,
    stats: ExchangeStatistics,
    t: T,
    m: usize,
    index_offset: u64,
) -> Result<EnsembleResult<T>> {
    if m < 2 {
        return Err(Error::InvalidNoise(format!(
            "need at least 2 trajectories, got {m}"
        )));
    }
    check_time(t)?;
    let n = net.n_sites();
    noise.validate(n)?;
    if phi.n_sites() != n {
        return Err(Error::Dimension(format!(
            "profile has {} sites, network {n}",
            phi.n_sites()
        )));
    }
    let start = Instant::now();
    let d = n * n;
    let blocks = m.div_ceil(BLOCK);
    let parts = (0..blocks)
        .into_par_iter()
        .map(|b| -> Result<Moments<T>> {
            let mut acc = Moments::new(d * d);
            for k in (b * BLOCK)..((b + 1) * BLOCK).min(m) {
                let psi = run_trajectory(net, noise, phi, stats, t, index_offset + k as u64)?;
                acc.push(g4_from_amplitude(&psi).matrix.as_slice());
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = merge_pairwise(parts).expect("at least one block");
    let mf = T::from_usize(m).expect("count fits");
    let std_error = total
        .m2
        .iter()
        .map(|&s| (s / (mf - T::one()) / mf).sqrt())
        .collect();
    Ok(EnsembleResult {
        mean_g4: CorrelationTensor::new(n, Matrix::from_vec(d, d, total.mean), t)?,
        std_error: Matrix::from_vec(d, d, std_error),
        trajectories: m,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Mean of `ΨΨ†` over `m` trajectories `0..m` of a pure input, on the
/// current rayon pool.
pub fn ensemble_average<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    phi: &InputProfile<T>,
    stats: ExchangeStatistics,
    t: T,
    m: usize,
) -> Result<EnsembleResult<T>> {
    ensemble_core(net, noise, phi, stats, t, m, 0)
}

/// [`ensemble_average`] on a dedicated pool of `workers` threads.
pub fn ensemble_average_with_workers<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    phi: &InputProfile<T>,
    stats: ExchangeStatistics,
    t: T,
    m: usize,
    workers: usize,
) -> Result<EnsembleResult<T>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    pool.install(|| ensemble_average(net, noise, phi, stats, t, m))
}

/// Ensemble for any initial state: each pure component gets `m`
/// trajectories (on disjoint stream ranges) and the results are mixed with
/// the component weights.
pub fn ensemble_average_state<T: Real>(
    net: &Network<T>,
    noise: &NoiseModel<T>,
    spec: &InitialStateSpec<T>,
    t: T,
    m: usize,
) -> Result<EnsembleResult<T>> {
    let comps = spec.pure_components(net.n_sites())?;
    let start = Instant::now();
    let mut results = Vec::with_capacity(comps.len());
    for (k, comp) in comps.iter().enumerate() {
        let offset = (k as u64) * (m as u64);
        let r = ensemble_core(net, noise, &comp.profile, comp.statistics, t, m, offset)?;
        results.push((comp.weight, r));
    }
    if results.len() == 1 {
        let (_, mut r) = results.pop().expect("one component");
        r.wall_time = start.elapsed().as_secs_f64();
        return Ok(r);
    }
    let refs: Vec<_> = results.iter().map(|(w, r)| (*w, &r.mean_g4)).collect();
    let mut mean = CorrelationTensor::mixture(&refs)?;
    mean.time = t;
    let d = mean.matrix.rows();
    let std_error = Matrix::from_fn(d, d, |r, col| {
        results
            .iter()
            .map(|(w, res)| {
                let s = res.std_error[(r, col)] * *w;
                s * s
            })
            .sum::<T>()
            .sqrt()
    });
    Ok(EnsembleResult {
        mean_g4: mean,
        std_error,
        trajectories: m * results.len(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Element-wise agreement between an ensemble mean and a master-equation
/// tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationReport<T> {
    pub deviation: Matrix<T>,
    pub max_deviation: T,
    /// Share of elements with `|Δ| ≤ 3·std_error`.
    pub fraction_within_3se: f64,
}

impl<T: Real> DeviationReport<T> {
    /// Fewer than 99 % of the elements are statistically consistent.
    pub fn mismatch(&self) -> bool {
        self.fraction_within_3se < 0.99
    }
}

pub fn compare_to_master<T: Real>(
    ens: &EnsembleResult<T>,
    master: &CorrelationTensor<T>,
) -> Result<DeviationReport<T>> {
    let a = &ens.mean_g4.matrix;
    let b = &master.matrix;
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(
            "ensemble and master tensors differ in size".into(),
        ));
    }
    let deviation = Matrix::from_fn(a.rows(), a.cols(), |r, col| {
        (a[(r, col)] - b[(r, col)]).norm()
    });
    let floor = T::tol(1e-12);
    let within = deviation
        .as_slice()
        .iter()
        .zip(ens.std_error.as_slice())
        .filter(|(&dev, &se)| dev <= T::lit(3.0) * se + floor)
        .count();
    let total = deviation.as_slice().len().max(1);
    Ok(DeviationReport {
        max_deviation: deviation.as_slice().iter().copied().fold(T::zero(), T::max),
        deviation,
        fraction_within_3se: within as f64 / total as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_network, paper_example_network};
    use crate::propagator::evolve_exact;

    fn one_site(gamma: f64) -> Network<f64> {
        build_network(vec![1.0], Matrix::zeros(1, 1), vec![gamma]).unwrap()
    }

    #[test]
    fn gamma_relation() {
        assert_eq!(gamma_from_sigma(2.0, 1.0), 2.0);
        assert_eq!(gamma_from_sigma(0.0, 1.0), 0.0);
        assert_eq!(gamma_from_sigma(1.0, 0.5), 0.25);
    }

    #[test]
    fn noise_free_trajectories_are_deterministic_evolution() {
        let net = paper_example_network::<f64>();
        let exact = evolve_exact(&net, 3.0).unwrap();
        let ito = NoiseModel::ito(vec![0.0; 3], 9).with_step_size(1e-2);
        let pw = NoiseModel::piecewise(0.0, 1.0, 9);
        for (noise, idx) in [(ito, 0), (pw, 17)] {
            let u = trajectory_propagator(&net, &noise, 3.0, idx).unwrap();
            assert!(u.matrix.max_abs_diff(&exact.matrix) < 1e-12);
        }
    }

    #[test]
    fn trajectories_are_unitary_and_reproducible() {
        let net = paper_example_network::<f64>();
        let phi = InputProfile::localized(3, 0, 1).unwrap();
        let noise = NoiseModel::ito(vec![2.0; 3], 5).with_step_size(1e-2);
        let a = run_trajectory(&net, &noise, &phi, ExchangeStatistics::Boson, 4.0, 3).unwrap();
        let b = run_trajectory(&net, &noise, &phi, ExchangeStatistics::Boson, 4.0, 3).unwrap();
        let c = run_trajectory(&net, &noise, &phi, ExchangeStatistics::Boson, 4.0, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        let pw = NoiseModel::piecewise(2.0, 1.0, 5);
        let p = run_trajectory(&net, &pw, &phi, ExchangeStatistics::Boson, 4.5, 0).unwrap();
        assert!((p.norm_sqr() - 1.0).abs() < 1e-12);
    }

    fn mean_single_site(noise: &NoiseModel<f64>, m: u64) -> (C<f64>, f64) {
        let net = one_site(2.0);
        let samples: Vec<C<f64>> = (0..m)
            .map(|k| trajectory_propagator(&net, noise, 1.0, k).unwrap().matrix[(0, 0)])
            .collect();
        let mf = m as f64;
        let mean = samples.iter().fold(C::zero(), |a, &b| a + b) / mf;
        let var = samples.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (mf - 1.0);
        (mean, (var / mf).sqrt())
    }

    #[test]
    fn mean_phase_decays_at_half_gamma() {
        // ⟨exp(i t + i√γ W(t))⟩ = exp(i t − γ t / 2)
        let expected = C::from_polar((-1.0f64).exp(), 1.0);
        let noise = NoiseModel::ito(vec![2.0], 11).with_step_size(0.05);
        let (mean, se) = mean_single_site(&noise, 100_000);
        assert!(
            (mean.norm() - (-1.0f64).exp()).abs() < 3.0 * se,
            "{mean} ± {se}"
        );
        assert!((mean - expected).norm() < 3.0 * se);
    }

    #[test]
    fn euler_maruyama_reproduces_ito_drift() {
        let expected = C::from_polar((-1.0f64).exp(), 1.0);
        let noise = NoiseModel::ito(vec![2.0], 12)
            .with_step_size(1e-3)
            .with_scheme(SdeScheme::EulerMaruyama);
        let (mean, se) = mean_single_site(&noise, 20_000);
        assert!((mean - expected).norm() < 3.0 * se + 2e-3, "{mean} ± {se}");
    }

    #[test]
    fn zero_noise_ensemble_has_zero_error() {
        let net = paper_example_network::<f64>();
        let phi = InputProfile::localized(3, 0, 1).unwrap();
        let noise = NoiseModel::ito(vec![0.0; 3], 1).with_step_size(1e-2);
        let ens = ensemble_average(&net, &noise, &phi, ExchangeStatistics::Boson, 2.0, 2).unwrap();
        assert_eq!(ens.max_std_error(), 0.0);
        assert_eq!(ens.trajectories, 2);
        let master = g4_from_amplitude(
            &run_trajectory(&net, &noise, &phi, ExchangeStatistics::Boson, 2.0, 0).unwrap(),
        );
        let report = compare_to_master(&ens, &master).unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert_eq!(report.fraction_within_3se, 1.0);
    }

    #[test]
    fn rejects_single_trajectory_and_bad_noise() {
        let net = paper_example_network::<f64>();
        let phi = InputProfile::localized(3, 0, 1).unwrap();
        let noise = NoiseModel::ito(vec![1.0; 3], 1);
        assert!(ensemble_average(&net, &noise, &phi, ExchangeStatistics::Boson, 1.0, 1).is_err());
        let short = NoiseModel::ito(vec![1.0; 2], 1);
        assert!(trajectory_propagator(&net, &short, 1.0, 0).is_err());
        let neg = NoiseModel::piecewise(-1.0, 1.0, 1);
        assert!(trajectory_propagator(&net, &neg, 1.0, 0).is_err());
    }

    #[test]
    fn pairwise_merge_matches_sequential_moments() {
        let xs: Vec<Vec<C<f64>>> = (0..100)
            .map(|k| vec![C::new((k as f64).sin(), (k as f64 * 0.3).cos())])
            .collect();
        let mut seq = Moments::new(1);
        xs.iter().for_each(|x| seq.push(x));
        let parts: Vec<_> = xs
            .chunks(7)
            .map(|chunk| {
                let mut m = Moments::new(1);
                chunk.iter().for_each(|x| m.push(x));
                m
            })
            .collect();
        let merged = merge_pairwise(parts).unwrap();
        assert_eq!(merged.count, 100);
        assert!((merged.mean[0] - seq.mean[0]).norm() < 1e-14);
        assert!((merged.m2[0] - seq.m2[0]).abs() < 1e-12);
    }
}
