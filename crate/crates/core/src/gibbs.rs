//! Single-block Gibbs sampler over `(mu_1, mu_2, sigma_1^2, sigma_2^2)`.
//!
//! Each sweep draws both variances from their inverse-gamma full conditionals
//! given the current means, then both means from their normal full
//! conditionals given the fresh variances. The four variates of a sweep are
//! always consumed in the order `sigma_1^2, sigma_2^2, mu_1, mu_2`.

use serde::{Deserialize, Serialize};

use crate::distributions::RngState;
use crate::error::{Error, Result};
use crate::model::{GroupedSample, IndependencePrior, MixtureDraw, SufficientStats};

/// Floor applied to the initial variances so constant groups still start
/// inside the support.
pub const INITIAL_VARIANCE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub prior: IndependencePrior,
}

impl ChainConfig {
    pub fn new(iterations: usize, burn_in: usize, seed: u64, prior: IndependencePrior) -> Result<Self> {
        let config = Self {
            iterations,
            burn_in,
            seed,
            prior,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::ConfigInvalid("iterations must be at least 1".into()));
        }
        if self.burn_in >= self.iterations {
            return Err(Error::ConfigInvalid(format!(
                "burn-in ({}) must be smaller than iterations ({})",
                self.burn_in, self.iterations
            )));
        }
        Ok(())
    }

    pub fn retained(&self) -> usize {
        self.iterations - self.burn_in
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorChain {
    pub draws: Vec<MixtureDraw>,
    pub config: ChainConfig,
    pub stats: SufficientStats,
}

/// Parameters `(b_k, B_k)` of the normal full conditional of `mu_k`:
/// `B_k = 1 / (1/B0 + n_k/sigma_k^2)`, `b_k = B_k (n_k ybar_k / sigma_k^2 + b0/B0)`.
pub fn mu_conditional_params(
    sigma2: f64,
    n: usize,
    ybar: f64,
    prior: &IndependencePrior,
) -> Result<(f64, f64)> {
    if !(sigma2 > 0.0) {
        return Err(Error::NonPositiveVariance(sigma2));
    }
    if n == 0 {
        return Ok((prior.mu_mean, prior.mu_var));
    }
    let precision = 1.0 / prior.mu_var + n as f64 / sigma2;
    let var = 1.0 / precision;
    let mean = var * (n as f64 * ybar / sigma2 + prior.mu_mean / prior.mu_var);
    Ok((mean, var))
}

/// Parameters `(c_k, C_k)` of the inverse-gamma full conditional of `sigma_k^2`.
pub fn sigma2_conditional_params(mu: f64, group_values: &[f64], prior: &IndependencePrior) -> (f64, f64) {
    let ss: f64 = group_values.iter().map(|y| (y - mu).powi(2)).sum();
    (
        prior.sigma2_shape + 0.5 * group_values.len() as f64,
        prior.sigma2_scale + 0.5 * ss,
    )
}

/// Same as [`sigma2_conditional_params`], computed from sufficient statistics via
/// `sum (y_i - mu)^2 = n s2 + n (ybar - mu)^2`.
fn sigma2_params_from_stats(mu: f64, n: usize, ybar: f64, s2: f64, prior: &IndependencePrior) -> (f64, f64) {
    let n = n as f64;
    let d = ybar - mu;
    (
        prior.sigma2_shape + 0.5 * n,
        prior.sigma2_scale + 0.5 * n * (s2 + d * d),
    )
}

/// Conjugate-prior form of the mean update, where `B0 = sigma_k^2 / n0`.
/// Kept for comparison tests only; the sampler uses the independence form.
#[cfg(test)]
pub(crate) fn mu_conditional_params_conjugate(sigma2: f64, n: usize, ybar: f64, b0: f64, n0: f64) -> (f64, f64) {
    let n = n as f64;
    ((n * ybar + n0 * b0) / (n0 + n), sigma2 / (n0 + n))
}

/// One full sweep of the sampler.
pub fn gibbs_sweep(
    current: &MixtureDraw,
    stats: &SufficientStats,
    prior: &IndependencePrior,
    rng: &mut RngState,
) -> Result<MixtureDraw> {
    let mut sigma2 = [0.0; 2];
    for k in 0..2 {
        let (shape, scale) =
            sigma2_params_from_stats(current.mu[k], stats.n[k], stats.mean[k], stats.var[k], prior);
        sigma2[k] = rng.inverse_gamma(shape, scale)?;
    }
    let mut mu = [0.0; 2];
    for k in 0..2 {
        let (mean, var) = mu_conditional_params(sigma2[k], stats.n[k], stats.mean[k], prior)?;
        mu[k] = rng.normal(mean, var)?;
    }
    Ok(MixtureDraw { mu, sigma2 })
}

/// Initial state: group means and floored divisor-`N_k` variances.
pub fn initial_state(stats: &SufficientStats) -> MixtureDraw {
    MixtureDraw {
        mu: stats.mean,
        sigma2: [
            stats.var[0].max(INITIAL_VARIANCE_FLOOR),
            stats.var[1].max(INITIAL_VARIANCE_FLOOR),
        ],
    }
}

pub fn run_chain(sample: &GroupedSample, config: &ChainConfig) -> Result<PosteriorChain> {
    config.validate()?;
    let stats = sample.stats();
    let mut rng = RngState::new(config.seed);
    let mut state = initial_state(&stats);
    let mut draws = Vec::with_capacity(config.retained());
    for i in 0..config.iterations {
        state = gibbs_sweep(&state, &stats, &config.prior, &mut rng)?;
        if i >= config.burn_in {
            draws.push(state);
        }
    }
    Ok(PosteriorChain {
        draws,
        config: *config,
        stats,
    })
}
