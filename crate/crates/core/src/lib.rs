//! Associative memory for natural-language sentences in a discrete Hopfield
//! network.
//!
//! Sentences are encoded as sparse binary patterns over a content-word
//! lexicon (one unit per word), stored with the Hebb rule plus a global
//! inhibitor on never-cooccurring pairs, and recalled by stochastic
//! asynchronous updates. The [`experiments`] module runs seeded Monte Carlo
//! campaigns that measure recall error against probe noise.
//!
//! - [`corpus`] — tokenization, function-word removal, lexicon and pattern
//!   encoding, corpus statistics
//! - [`network`] — Hebbian training, recall dynamics, energy
//! - [`metrics`] — bias, storage ratio, connectivity, sparsity, recall error
//! - [`experiments`] — noise injection, pattern generators, trial harness,
//!   CSV output

pub mod corpus;
pub mod error;
pub mod experiments;
pub mod metrics;
pub mod network;

pub use corpus::{Lexicon, Pattern, PatternSet};
pub use error::{Error, Result};
pub use experiments::{ExperimentPlan, ExperimentResult, PatternSource};
pub use metrics::{MatrixCharacteristics, RecallError};
pub use network::{NetworkState, RecallOutcome, ThresholdPolicy, WeightMatrix};
