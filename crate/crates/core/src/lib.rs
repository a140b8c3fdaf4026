//! Bayesian two-sample t-test: a two-component Gaussian mixture with known
//! allocations, sampled by Gibbs sampling, summarized through the posterior of
//! the standardized effect size.
//!
//! The pipeline is [`gibbs::run_chain`] → [`analysis::effect_size_series`] →
//! summaries in [`analysis`] (posterior mean, HPD interval, ROPE masses and
//! decisions). [`welch`] provides the frequentist baseline and [`sim`] the
//! simulation-study harness.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod distributions;
mod error;
pub mod gibbs;
pub mod model;
pub mod sim;
pub mod welch;

pub use error::{Error, Result};
