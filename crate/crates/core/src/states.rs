// SPDX-License-Identifier: Apache-2.0

//! Canonical two-particle inputs and custom pure/mixed states.
//!
//! Site indices in [`InitialStateSpec`] are 1-based, as they appear in
//! configuration files.

use num_complex::Complex;

use crate::amplitude::{
    amplitude_from_propagator, ExchangeStatistics, InputProfile, TwoParticleAmplitude,
};
use crate::correlation::{g4_from_amplitude, pair_index, CorrelationTensor};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::propagator::Propagator;
use crate::scalar::{Real, C};

#[derive(Debug, Clone, PartialEq)]
pub enum InitialStateSpec<T> {
    /// `(|m,n⟩ + |n,m⟩)/√2`, bosons.
    Separable(usize, usize),
    /// `(|m,m⟩ + |n,n⟩)/√2`, bosons.
    Entangled(usize, usize),
    /// `½(|m,m⟩⟨m,m| + |n,n⟩⟨n,n|)`.
    ClassicallyCorrelated(usize, usize),
    /// `½(|m,n⟩⟨m,n| + |n,m⟩⟨n,m|)` on ordered pairs.
    Distinguishable(usize, usize),
    CustomPure {
        phi: Matrix<C<T>>,
        statistics: ExchangeStatistics,
    },
    CustomMixture(Vec<(T, InitialStateSpec<T>)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialState<T> {
    pub tensor: CorrelationTensor<T>,
    /// Present for pure states.
    pub amplitude: Option<TwoParticleAmplitude<T>>,
}

/// One pure ingredient of a (possibly mixed) initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureComponent<T> {
    pub weight: T,
    pub profile: InputProfile<T>,
    pub statistics: ExchangeStatistics,
}

fn site(n_sites: usize, s: usize) -> Result<usize> {
    if s == 0 || s > n_sites {
        return Err(Error::InvalidState(format!(
            "site index {s} outside 1..={n_sites}"
        )));
    }
    Ok(s - 1)
}

fn distinct_pair(n_sites: usize, m: usize, n: usize, what: &str) -> Result<(usize, usize)> {
    let (a, b) = (site(n_sites, m)?, site(n_sites, n)?);
    if a == b {
        return Err(Error::InvalidState(format!(
            "{what} state needs two different sites, got ({m}, {n})"
        )));
    }
    Ok((a, b))
}

fn unit<T: Real>(n_sites: usize, cells: &[(usize, usize)]) -> Result<InputProfile<T>> {
    let mut phi = Matrix::zeros(n_sites, n_sites);
    let amp = T::one() / T::from_usize(cells.len()).expect("small count").sqrt();
    for &(m, n) in cells {
        phi[(m, n)] = Complex::new(amp, T::zero());
    }
    InputProfile::new(phi)
}

fn population<T: Real>(n_sites: usize, entries: &[(T, usize, usize)]) -> CorrelationTensor<T> {
    let mut g = CorrelationTensor::zeros(n_sites);
    for &(w, p, q) in entries {
        let k = pair_index(n_sites, p, q);
        g.matrix[(k, k)] += Complex::new(w, T::zero());
    }
    g
}

impl<T: Real> InitialStateSpec<T> {
    /// Decomposes the state into weighted pure inputs; mixtures of the
    /// classical kinds are exact convex combinations of these.
    pub fn pure_components(&self, n_sites: usize) -> Result<Vec<PureComponent<T>>> {
        let half = T::lit(0.5);
        let boson = ExchangeStatistics::Boson;
        let one = |profile, statistics| {
            Ok(vec![PureComponent {
                weight: T::one(),
                profile,
                statistics,
            }])
        };
        match self {
            Self::Separable(m, n) => {
                let (a, b) = distinct_pair(n_sites, *m, *n, "separable")?;
                one(InputProfile::localized(n_sites, a, b)?, boson)
            }
            Self::Entangled(m, n) => {
                let (a, b) = (site(n_sites, *m)?, site(n_sites, *n)?);
                let cells = if a == b {
                    vec![(a, a)]
                } else {
                    vec![(a, a), (b, b)]
                };
                one(unit(n_sites, &cells)?, boson)
            }
            Self::ClassicallyCorrelated(m, n) => {
                let (a, b) = (site(n_sites, *m)?, site(n_sites, *n)?);
                if a == b {
                    return one(InputProfile::localized(n_sites, a, a)?, boson);
                }
                Ok(vec![
                    PureComponent {
                        weight: half,
                        profile: InputProfile::localized(n_sites, a, a)?,
                        statistics: boson,
                    },
                    PureComponent {
                        weight: half,
                        profile: InputProfile::localized(n_sites, b, b)?,
                        statistics: boson,
                    },
                ])
            }
            Self::Distinguishable(m, n) => {
                let (a, b) = distinct_pair(n_sites, *m, *n, "distinguishable")?;
                let stats = ExchangeStatistics::Distinguishable;
                Ok(vec![
                    PureComponent {
                        weight: half,
                        profile: InputProfile::localized(n_sites, a, b)?,
                        statistics: stats,
                    },
                    PureComponent {
                        weight: half,
                        profile: InputProfile::localized(n_sites, b, a)?,
                        statistics: stats,
                    },
                ])
            }
            Self::CustomPure { phi, statistics } => {
                if phi.rows() != n_sites {
                    return Err(Error::Dimension(format!(
                        "custom profile is {}x{} for a {n_sites}-site network",
                        phi.rows(),
                        phi.cols()
                    )));
                }
                one(InputProfile::new(phi.clone())?, *statistics)
            }
            Self::CustomMixture(parts) => {
                check_weights(parts)?;
                let mut out = Vec::new();
                for (w, spec) in parts {
                    for comp in spec.pure_components(n_sites)? {
                        out.push(PureComponent {
                            weight: *w * comp.weight,
                            ..comp
                        });
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(
            self,
            Self::Separable(..) | Self::Entangled(..) | Self::CustomPure { .. }
        ) || matches!(self, Self::ClassicallyCorrelated(m, n) if m == n)
    }
}

fn check_weights<T: Real>(parts: &[(T, InitialStateSpec<T>)]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::InvalidState("mixture has no components".into()));
    }
    if let Some((w, _)) = parts.iter().find(|(w, _)| !(*w > T::zero())) {
        return Err(Error::InvalidState(format!(
            "mixture weight {w} is not positive"
        )));
    }
    let total: T = parts.iter().map(|(w, _)| *w).sum();
    if (total - T::one()).abs() > T::tol(1e-12) {
        return Err(Error::InvalidState(format!(
            "mixture weights sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Builds the initial four-point tensor (and the amplitude for pure kinds).
pub fn build_initial_g4<T: Real>(
    spec: &InitialStateSpec<T>,
    n_sites: usize,
) -> Result<InitialState<T>> {
    let half = T::lit(0.5);
    match spec {
        InitialStateSpec::ClassicallyCorrelated(m, n) if m != n => {
            let (a, b) = (site(n_sites, *m)?, site(n_sites, *n)?);
            Ok(InitialState {
                tensor: population(n_sites, &[(half, a, a), (half, b, b)]),
                amplitude: None,
            })
        }
        InitialStateSpec::Distinguishable(m, n) => {
            let (a, b) = distinct_pair(n_sites, *m, *n, "distinguishable")?;
            Ok(InitialState {
                tensor: population(n_sites, &[(half, a, b), (half, b, a)]),
                amplitude: None,
            })
        }
        InitialStateSpec::CustomMixture(parts) => {
            check_weights(parts)?;
            let built = parts
                .iter()
                .map(|(w, s)| Ok((*w, build_initial_g4(s, n_sites)?.tensor)))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<(T, &CorrelationTensor<T>)> =
                built.iter().map(|(w, g)| (*w, g)).collect();
            Ok(InitialState {
                tensor: CorrelationTensor::mixture(&refs)?,
                amplitude: None,
            })
        }
        pure => {
            let comps = pure.pure_components(n_sites)?;
            debug_assert_eq!(comps.len(), 1);
            let comp = &comps[0];
            let psi = amplitude_from_propagator(
                &comp.profile,
                &Propagator::identity(n_sites),
                comp.statistics,
            )?;
            Ok(InitialState {
                tensor: g4_from_amplitude(&psi),
                amplitude: Some(psi),
            })
        }
    }
}

/// Convenience: `Matrix` of complex ones/zeros for custom profiles.
pub fn profile_matrix<T: Real>(n_sites: usize, cells: &[((usize, usize), C<T>)]) -> Matrix<C<T>> {
    let mut m = Matrix::zeros(n_sites, n_sites);
    for &((p, q), z) in cells {
        m[(p, q)] = z;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::swap_block_weights;
    use crate::scalar::c;

    type Spec = InitialStateSpec<f64>;

    fn check_valid(g: &CorrelationTensor<f64>) {
        assert!((g.trace() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(g.hermiticity_residual() == 0.0);
        assert!(g.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn separable_pair() {
        let s = build_initial_g4(&Spec::Separable(1, 2), 3).unwrap();
        let hot = [pair_index(3, 0, 1), pair_index(3, 1, 0)];
        for r in 0..9 {
            for col in 0..9 {
                let v = if hot.contains(&r) && hot.contains(&col) {
                    0.5
                } else {
                    0.0
                };
                assert!((s.tensor.matrix[(r, col)].re - v).abs() < 1e-15);
            }
        }
        check_valid(&s.tensor);
        assert!(s.amplitude.is_some());
    }

    #[test]
    fn entangled_pair() {
        let s = build_initial_g4(&Spec::Entangled(1, 2), 3).unwrap();
        let hot = [pair_index(3, 0, 0), pair_index(3, 1, 1)];
        for r in 0..9 {
            for col in 0..9 {
                let v = if hot.contains(&r) && hot.contains(&col) {
                    0.5
                } else {
                    0.0
                };
                assert!((s.tensor.matrix[(r, col)].re - v).abs() < 1e-15);
            }
        }
        check_valid(&s.tensor);
    }

    #[test]
    fn classically_correlated_is_diagonal_mixture() {
        let s = build_initial_g4(&Spec::ClassicallyCorrelated(1, 2), 3).unwrap();
        assert!(s.amplitude.is_none());
        assert_eq!(s.tensor.get(0, 0, 0, 0), c(0.5, 0.0));
        assert_eq!(s.tensor.get(1, 1, 1, 1), c(0.5, 0.0));
        let off: f64 = s
            .tensor
            .matrix
            .as_slice()
            .iter()
            .map(|z| z.norm())
            .sum::<f64>()
            - 1.0;
        assert!(off.abs() < 1e-15);
        check_valid(&s.tensor);

        let mut e11 = Matrix::zeros(3, 3);
        e11[(0, 0)] = c(1.0, 0.0);
        let mut e22 = Matrix::zeros(3, 3);
        e22[(1, 1)] = c(1.0, 0.0);
        let boson = ExchangeStatistics::Boson;
        let mix = Spec::CustomMixture(vec![
            (
                0.5,
                Spec::CustomPure {
                    phi: e11,
                    statistics: boson,
                },
            ),
            (
                0.5,
                Spec::CustomPure {
                    phi: e22,
                    statistics: boson,
                },
            ),
        ]);
        let m = build_initial_g4(&mix, 3).unwrap();
        assert_eq!(m.tensor.matrix, s.tensor.matrix);
    }

    #[test]
    fn distinguishable_weights_split_evenly() {
        let s = build_initial_g4(&Spec::Distinguishable(1, 2), 3).unwrap();
        check_valid(&s.tensor);
        let (sym, anti) = swap_block_weights(&s.tensor);
        assert!((sym - 0.5).abs() < 1e-15 && (anti - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mixture_of_pure_states_is_valid() {
        let mix = Spec::CustomMixture(vec![
            (0.5, Spec::Separable(1, 2)),
            (0.5, Spec::Entangled(1, 2)),
        ]);
        let s = build_initial_g4(&mix, 3).unwrap();
        check_valid(&s.tensor);
    }

    #[test]
    fn pure_kinds_match_amplitude_outer_product() {
        for spec in [Spec::Separable(1, 3), Spec::Entangled(2, 3)] {
            let s = build_initial_g4(&spec, 3).unwrap();
            assert_eq!(s.tensor, g4_from_amplitude(s.amplitude.as_ref().unwrap()));
        }
    }

    #[test]
    fn pure_components_reproduce_mixed_tensors() {
        for spec in [
            Spec::ClassicallyCorrelated(1, 2),
            Spec::Distinguishable(2, 3),
        ] {
            let direct = build_initial_g4(&spec, 3).unwrap().tensor;
            let comps = spec.pure_components(3).unwrap();
            let tensors: Vec<_> = comps
                .iter()
                .map(|c| {
                    let psi = amplitude_from_propagator(
                        &c.profile,
                        &Propagator::identity(3),
                        c.statistics,
                    )
                    .unwrap();
                    (c.weight, g4_from_amplitude(&psi))
                })
                .collect();
            let refs: Vec<_> = tensors.iter().map(|(w, g)| (*w, g)).collect();
            let rebuilt = CorrelationTensor::mixture(&refs).unwrap();
            assert!(rebuilt.matrix.max_abs_diff(&direct.matrix) < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(build_initial_g4(&Spec::Separable(1, 1), 3).is_err());
        assert!(build_initial_g4(&Spec::Distinguishable(2, 2), 3).is_err());
        assert!(build_initial_g4(&Spec::Separable(1, 4), 3).is_err());
        assert!(build_initial_g4(&Spec::Entangled(0, 1), 3).is_err());
        let bad = Spec::CustomMixture(vec![
            (0.7, Spec::Separable(1, 2)),
            (0.7, Spec::Entangled(1, 2)),
        ]);
        assert!(build_initial_g4(&bad, 3).is_err());
        let neg = Spec::CustomMixture(vec![
            (1.5, Spec::Separable(1, 2)),
            (-0.5, Spec::Entangled(1, 2)),
        ]);
        assert!(build_initial_g4(&neg, 3).is_err());
    }
}
