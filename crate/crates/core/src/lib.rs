// SPDX-License-Identifier: Apache-2.0

//! Two-particle four-point correlation dynamics on tight-binding networks with
//! dynamic diagonal disorder.
//!
//! The numerical core is generic over the real scalar ([`Real`]: `f32` or
//! `f64`). The aliases at the crate root fix `f64`, which is what the CLI and
//! the tolerances quoted in the docs assume.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitude;
pub mod correlation;
pub mod ensemble;
pub mod error;
mod integrate;
pub mod linalg;
pub mod network;
pub mod propagator;
pub mod scalar;
pub mod states;

pub use amplitude::ExchangeStatistics;
pub use error::{Error, Result};
pub use propagator::Method;
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type Network = network::Network<f64>;
pub type Propagator = propagator::Propagator<f64>;
pub type IntegratorConfig = propagator::IntegratorConfig<f64>;
pub type InputProfile = amplitude::InputProfile<f64>;
pub type TwoParticleAmplitude = amplitude::TwoParticleAmplitude<f64>;
pub type CorrelationTensor = correlation::CorrelationTensor<f64>;
pub type GeneratorMatrix = correlation::GeneratorMatrix<f64>;
pub type InitialStateSpec = states::InitialStateSpec<f64>;
pub type NoiseModel = ensemble::NoiseModel<f64>;
pub type EnsembleResult = ensemble::EnsembleResult<f64>;
pub type RealMatrix = linalg::Matrix<f64>;
pub type ComplexMatrix = linalg::Matrix<Complex64>;

/// Single-precision variants.
pub mod f32 {
    pub type Network = crate::network::Network<f32>;
    pub type Propagator = crate::propagator::Propagator<f32>;
    pub type CorrelationTensor = crate::correlation::CorrelationTensor<f32>;
    pub type GeneratorMatrix = crate::correlation::GeneratorMatrix<f32>;
}
