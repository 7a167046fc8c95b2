//! Core library of a MIMO symbol-detection laboratory.
//!
//! The crate provides the building blocks for desk-scale detection
//! experiments over small antenna arrays:
//!
//! - [`signal`]: constellations, complex/real reparameterization, one-hot
//!   symbol targets, SNR and noise bookkeeping.
//! - [`channel`]: Gaussian and Kronecker-correlated channel generation,
//!   time-invariant/time-varying regimes, linear, uniformly quantized and
//!   transmit-side nonlinear transmission models.
//! - [`detect`]: classical detectors: exact posterior/MAP, zero forcing,
//!   approximate message passing and soft interference cancellation.
//! - [`mlp`]: a from-scratch fully-connected ReLU network with softmax
//!   head trained by cross-entropy, plus its linear-region diagnostics.
//! - [`sicnet`]: the unfolded SIC network with per-iteration trainable
//!   scalars, trained by backpropagation through the unrolled iterations.
//! - [`metrics`]: BER, empirical log-likelihood, KL and Hellinger
//!   discrepancies, and the approximation/generalization error split.
//! - [`bounds`]: covering-number and tail-bound calculators for the
//!   trained detector classes.
//!
//! All randomness flows through explicitly seeded generators (see [`rng`]);
//! every operation is deterministic given its inputs and RNG stream.

pub mod bounds;
pub mod channel;
pub mod detect;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod mlp;
pub mod rng;
pub mod sicnet;
pub mod signal;
pub mod stats;

pub use error::{Error, Result};
