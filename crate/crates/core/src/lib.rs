//! Core algorithms for training classifiers on class-imbalanced text data.
//!
//! The crate is organized around a small pipeline:
//!
//! - [`dataset`]: labeled text rows, class distributions, stratified splits,
//!   and a synthetic long-tail corpus generator.
//! - [`resample`]: random over/undersampling and the hybrid
//!   filter-then-balance resampler ([`resample::middlesample`]).
//! - [`metrics`]: confusion matrices and the error-rate / accuracy /
//!   precision / recall family, kept in exact integer ratios.
//! - [`nbayes`]: a self-contained multinomial Naive Bayes text classifier.
//! - [`costsensitive`]: population-complement class weights and a minimal
//!   dense→ELU→softmax network trained with class-weighted cross-entropy.
//! - [`experiment`]: the filter×sample sweep harness tying it all together.
//!
//! Everything here is deterministic: all randomness flows from explicit
//! 64-bit seeds through the derivation scheme in [`rng`]. The crate is
//! `no_std` (with `alloc`); file formats and the CLI live in the companion
//! `rebalance-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod costsensitive;
pub mod dataset;
pub mod experiment;
pub mod metrics;
pub mod nbayes;
pub mod resample;
pub mod rng;

pub use dataset::{ClassDistribution, Dataset, LabeledExample};
pub use metrics::ConfusionMatrix;
pub use resample::MiddleSampleParams;
