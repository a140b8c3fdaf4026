//! Shared helpers for the integration tests: a brute-force quadrature of a
//! single group's posterior and batch-means Monte Carlo standard errors.

#![allow(dead_code)]

use bttest::model::IndependencePrior;

/// Posterior moments of `(mu, sigma2)` for one group.
#[derive(Debug, Clone, Copy)]
pub struct GroupMoments {
    pub mu_mean: f64,
    pub mu_var: f64,
    pub sigma2_mean: f64,
    pub sigma2_var: f64,
    /// `E[mu * sigma2]`
    pub mu_sigma2: f64,
}

fn log_posterior(mu: f64, sigma2: f64, ys: &[f64], prior: &IndependencePrior) -> f64 {
    let n = ys.len() as f64;
    let ss: f64 = ys.iter().map(|y| (y - mu).powi(2)).sum();
    let log_lik = -0.5 * n * sigma2.ln() - 0.5 * ss / sigma2;
    let log_mu_prior = -0.5 * (mu - prior.mu_mean).powi(2) / prior.mu_var;
    let log_s2_prior = -(prior.sigma2_shape + 1.0) * sigma2.ln() - prior.sigma2_scale / sigma2;
    log_lik + log_mu_prior + log_s2_prior
}

fn simpson_weight(i: usize, last: usize) -> f64 {
    if i == 0 || i == last {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// Composite Simpson quadrature over `mu` and `log sigma2` on a bounded grid.
/// `points` must be odd.
pub fn quadrature_moments(ys: &[f64], prior: &IndependencePrior, points: usize) -> GroupMoments {
    assert!(points % 2 == 1 && points >= 3);
    let n = ys.len() as f64;
    let ybar = ys.iter().sum::<f64>() / n;
    let spread = ys.iter().map(|y| (y - ybar).abs()).fold(1.0, f64::max);
    let (mu_lo, mu_hi) = (ybar - 25.0 * spread, ybar + 25.0 * spread);
    let (ls_lo, ls_hi) = ((1e-6f64).ln(), (1e4f64).ln());
    let last = points - 1;
    let mu_at = |i: usize| mu_lo + (mu_hi - mu_lo) * i as f64 / last as f64;
    let ls_at = |j: usize| ls_lo + (ls_hi - ls_lo) * j as f64 / last as f64;

    let mut log_density = vec![0.0; points * points];
    let mut peak = f64::NEG_INFINITY;
    for i in 0..points {
        for j in 0..points {
            let ls = ls_at(j);
            // Jacobian of sigma2 = exp(ls).
            let v = log_posterior(mu_at(i), ls.exp(), ys, prior) + ls;
            log_density[i * points + j] = v;
            peak = peak.max(v);
        }
    }

    let mut acc = [0.0f64; 6];
    for i in 0..points {
        let mu = mu_at(i);
        let wi = simpson_weight(i, last);
        for j in 0..points {
            let s2 = ls_at(j).exp();
            let w = wi * simpson_weight(j, last) * (log_density[i * points + j] - peak).exp();
            acc[0] += w;
            acc[1] += w * mu;
            acc[2] += w * mu * mu;
            acc[3] += w * s2;
            acc[4] += w * s2 * s2;
            acc[5] += w * mu * s2;
        }
    }
    let e = |k: usize| acc[k] / acc[0];
    GroupMoments {
        mu_mean: e(1),
        mu_var: e(2) - e(1).powi(2),
        sigma2_mean: e(3),
        sigma2_var: e(4) - e(3).powi(2),
        mu_sigma2: e(5),
    }
}

/// Mean of `xs` and its batch-means Monte Carlo standard error.
pub fn batch_means(xs: &[f64], batches: usize) -> (f64, f64) {
    let size = xs.len() / batches;
    let used = &xs[..size * batches];
    let mean = used.iter().sum::<f64>() / used.len() as f64;
    let means: Vec<f64> = used.chunks(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// Sample variance of `xs` with an MCSE from batch means of the centred squares.
pub fn batch_variance(xs: &[f64], batches: usize) -> (f64, f64) {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    batch_means(&sq, batches)
}

/// One comparison of a chain estimate with its oracle value.
#[derive(Debug, Clone)]
pub struct MomentCheck {
    pub name: String,
    pub estimate: f64,
    pub oracle: f64,
    pub mcse: f64,
}

impl MomentCheck {
    pub fn z(&self) -> f64 {
        (self.estimate - self.oracle) / self.mcse
    }

    pub fn passes(&self, limit: f64) -> bool {
        self.z().abs() <= limit
    }
}

impl std::fmt::Display for MomentCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:<14} chain {:>10.5} oracle {:>10.5} mcse {:.5} z {:+.2}",
            self.name,
            self.estimate,
            self.oracle,
            self.mcse,
            self.z()
        )
    }
}

pub const ORACLE_GROUP_1: [f64; 5] = [1.2, 2.9, 0.4, 3.3, 1.8];
pub const ORACLE_GROUP_2: [f64; 5] = [4.1, 5.6, 3.2, 6.0, 4.4];

pub fn oracle_prior() -> IndependencePrior {
    IndependencePrior::new(3.0, 4.0, 2.0, 2.0).unwrap()
}

/// Runs a chain on the fixed 5+5 dataset and compares the marginal means and
/// variances of all four parameters with the quadrature oracle. `iterations`
/// counts retained sweeps; 1000 more are discarded as burn-in.
pub fn sampler_oracle_checks(iterations: usize, seed: u64, joint: bool) -> Vec<MomentCheck> {
    use bttest::gibbs::{run_chain, ChainConfig};
    use bttest::model::GroupedSample;

    let sample = GroupedSample::from_groups(&ORACLE_GROUP_1, &ORACLE_GROUP_2).unwrap();
    let prior = oracle_prior();
    let config = ChainConfig::new(iterations + 1000, 1000, seed, prior).unwrap();
    let chain = run_chain(&sample, &config).unwrap();
    let batches = 100;

    let mut checks = Vec::new();
    for (k, ys) in [&ORACLE_GROUP_1[..], &ORACLE_GROUP_2[..]].into_iter().enumerate() {
        let oracle = quadrature_moments(ys, &prior, 801);
        let mu: Vec<f64> = chain.draws.iter().map(|d| d.mu[k]).collect();
        let s2: Vec<f64> = chain.draws.iter().map(|d| d.sigma2[k]).collect();
        let g = k + 1;
        let mut push = |name: String, (estimate, mcse): (f64, f64), oracle: f64| {
            checks.push(MomentCheck {
                name,
                estimate,
                oracle,
                mcse,
            })
        };
        push(format!("E[mu{g}]"), batch_means(&mu, batches), oracle.mu_mean);
        push(format!("Var[mu{g}]"), batch_variance(&mu, batches), oracle.mu_var);
        push(format!("E[sigma2_{g}]"), batch_means(&s2, batches), oracle.sigma2_mean);
        push(format!("Var[sigma2_{g}]"), batch_variance(&s2, batches), oracle.sigma2_var);
        if joint {
            let cross: Vec<f64> = mu.iter().zip(&s2).map(|(m, s)| m * s).collect();
            push(format!("E[mu{g}*s2_{g}]"), batch_means(&cross, batches), oracle.mu_sigma2);
        }
    }
    checks
}
