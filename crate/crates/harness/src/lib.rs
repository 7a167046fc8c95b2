//! Experiment harness for the MIMO detection laboratory: configuration,
//! dataset generation, the seeded Monte-Carlo runner, sweeps, and result
//! emission.

pub mod config;
pub mod dataset;
pub mod detectors;
pub mod experiment;
pub mod report;
