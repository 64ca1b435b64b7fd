// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulator. Site indices in messages are 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("network must have at least one site")]
    EmptyNetwork,

    #[error("couplings are not symmetric at ({p}, {r}): {forward} vs {backward}")]
    AsymmetricCoupling {
        p: usize,
        r: usize,
        forward: f64,
        backward: f64,
    },

    #[error("coupling diagonal must be zero, found {value} at site {site}")]
    SelfCoupling { site: usize, value: f64 },

    #[error("dephasing rate at site {site} is negative ({value})")]
    NegativeRate { site: usize, value: f64 },

    #[error("non-finite parameter: {0}")]
    NonFinite(String),

    #[error("input profile is not normalized: sum |phi|^2 = {0}")]
    UnnormalizedProfile(f64),

    #[error("vanishing fermionic state: the antisymmetrized profile is zero")]
    VanishingFermionicState,

    #[error("vanishing {0} state: the symmetrized profile is zero")]
    VanishingAmplitude(&'static str),

    #[error("invalid integrator configuration: {0}")]
    InvalidIntegrator(String),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error(
        "step size {step} too large for generator norm {norm} (norm*h = {product} > 0.1); \
         use a step below {max_step}"
    )]
    StepTooLarge {
        step: f64,
        norm: f64,
        product: f64,
        max_step: f64,
    },

    #[error("integrity error: diagonal element ({p}, {q}) has imaginary part {imag}")]
    ComplexPopulation { p: usize, q: usize, imag: f64 },

    #[error("invalid initial state: {0}")]
    InvalidState(String),

    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
