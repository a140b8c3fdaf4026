//! Complete-data model for the two-group comparison: observations with known
//! group allocations, their per-group sufficient statistics, and the
//! normal / inverse-gamma independence prior.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Known allocation of an observation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    One,
    Two,
}

impl Group {
    pub fn index(self) -> usize {
        match self {
            Group::One => 0,
            Group::Two => 1,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }
}

/// Observations `y_1..y_N` together with their allocations `S_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedSample {
    values: Vec<f64>,
    allocations: Vec<Group>,
}

impl GroupedSample {
    pub fn new(values: Vec<f64>, allocations: Vec<Group>) -> Result<Self> {
        if values.len() != allocations.len() {
            return Err(Error::LengthMismatch {
                values: values.len(),
                allocations: allocations.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        for g in [Group::One, Group::Two] {
            if !allocations.contains(&g) {
                return Err(Error::EmptyGroup(g.number()));
            }
        }
        Ok(Self {
            values,
            allocations,
        })
    }

    /// Builds a sample from two separate groups, group one first.
    pub fn from_groups(group1: &[f64], group2: &[f64]) -> Result<Self> {
        let values = group1.iter().chain(group2).copied().collect();
        let allocations = std::iter::repeat_n(Group::One, group1.len())
            .chain(std::iter::repeat_n(Group::Two, group2.len()))
            .collect();
        Self::new(values, allocations)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn allocations(&self) -> &[Group] {
        &self.allocations
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn group_values(&self, group: Group) -> Vec<f64> {
        self.values
            .iter()
            .zip(&self.allocations)
            .filter(|(_, g)| **g == group)
            .map(|(v, _)| *v)
            .collect()
    }

    /// Group weights `eta_k = N_k / N`.
    pub fn weights(&self) -> [f64; 2] {
        let stats = self.stats();
        let n = self.len() as f64;
        [stats.n[0] as f64 / n, stats.n[1] as f64 / n]
    }

    /// Per-group counts, means and divisor-`N_k` variances.
    pub fn stats(&self) -> SufficientStats {
        let mut n = [0usize; 2];
        let mut sum = [0.0f64; 2];
        for (v, g) in self.values.iter().zip(&self.allocations) {
            n[g.index()] += 1;
            sum[g.index()] += v;
        }
        let mean = [sum[0] / n[0] as f64, sum[1] / n[1] as f64];
        let mut ss = [0.0f64; 2];
        for (v, g) in self.values.iter().zip(&self.allocations) {
            let d = v - mean[g.index()];
            ss[g.index()] += d * d;
        }
        SufficientStats {
            n,
            mean,
            var: [ss[0] / n[0] as f64, ss[1] / n[1] as f64],
        }
    }

    /// Mean and unbiased (divisor `N - 1`) variance of all observations.
    pub fn pooled_moments(&self) -> (f64, f64) {
        let n = self.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let ss: f64 = self.values.iter().map(|v| (v - mean).powi(2)).sum();
        (mean, ss / (n - 1.0))
    }

    /// Adds `shift` to every observation.
    pub fn translated(&self, shift: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v + shift).collect(),
            allocations: self.allocations.clone(),
        }
    }

    /// Exchanges the two group labels.
    pub fn swapped(&self) -> Self {
        Self {
            values: self.values.clone(),
            allocations: self
                .allocations
                .iter()
                .map(|g| match g {
                    Group::One => Group::Two,
                    Group::Two => Group::One,
                })
                .collect(),
        }
    }
}

/// `N_k(S)`, `ybar_k(S)` and `s^2_{y,k}(S)` for both groups (index 0 is group one).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    pub n: [usize; 2],
    pub mean: [f64; 2],
    /// Within-group variance with divisor `N_k`.
    pub var: [f64; 2],
}

impl SufficientStats {
    pub fn total(&self) -> usize {
        self.n[0] + self.n[1]
    }
}

/// Hyperparameters of `mu_k ~ N(b0, B0)` and `sigma_k^2 ~ IG(c0, C0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndependencePrior {
    #[serde(rename = "b0")]
    pub mu_mean: f64,
    #[serde(rename = "B0")]
    pub mu_var: f64,
    #[serde(rename = "c0")]
    pub sigma2_shape: f64,
    #[serde(rename = "C0")]
    pub sigma2_scale: f64,
}

impl IndependencePrior {
    pub fn new(mu_mean: f64, mu_var: f64, sigma2_shape: f64, sigma2_scale: f64) -> Result<Self> {
        let checks = [
            ("b0", mu_mean, mu_mean.is_finite()),
            ("B0", mu_var, mu_var > 0.0),
            ("c0", sigma2_shape, sigma2_shape > 0.0),
            ("C0", sigma2_scale, sigma2_scale > 0.0),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(Error::NonPositiveParameter { name, value });
            }
        }
        Ok(Self {
            mu_mean,
            mu_var,
            sigma2_shape,
            sigma2_scale,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorPreset {
    Wide,
    Medium,
    Narrow,
    Custom(IndependencePrior),
}

impl PriorPreset {
    pub fn name(&self) -> &'static str {
        match self {
            PriorPreset::Wide => "wide",
            PriorPreset::Medium => "medium",
            PriorPreset::Narrow => "narrow",
            PriorPreset::Custom(_) => "custom",
        }
    }

    /// Data-dependent hyperparameters: `b0 = xbar` and `B0 = k * s^2(x)` over the
    /// pooled sample, with `k` and `c0 = C0` fixed per preset.
    pub fn realize(&self, sample: &GroupedSample) -> Result<IndependencePrior> {
        let (var_factor, ig) = match self {
            PriorPreset::Custom(prior) => return Ok(*prior),
            PriorPreset::Wide => (10.0, 0.01),
            PriorPreset::Medium => (5.0, 0.1),
            PriorPreset::Narrow => (1.0, 1.0),
        };
        let (mean, var) = sample.pooled_moments();
        if !(var > 0.0) {
            return Err(Error::DegenerateData(format!(
                "pooled sample variance is zero; the {} prior cannot be realized",
                self.name()
            )));
        }
        IndependencePrior::new(mean, var_factor * var, ig, ig)
    }
}

impl std::str::FromStr for PriorPreset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "wide" => Ok(PriorPreset::Wide),
            "medium" => Ok(PriorPreset::Medium),
            "narrow" => Ok(PriorPreset::Narrow),
            other => Err(format!("unknown prior preset `{other}` (expected wide, medium or narrow)")),
        }
    }
}

/// One state of the chain: `(mu_1, mu_2, sigma_1^2, sigma_2^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureDraw {
    pub mu: [f64; 2],
    pub sigma2: [f64; 2],
}

/// Pooled standard deviation of the two groups given their variances.
pub fn pooled_sd(sigma2_1: f64, sigma2_2: f64, n1: usize, n2: usize) -> Result<f64> {
    if n1 + n2 < 3 {
        return Err(Error::InsufficientSize(format!(
            "pooled standard deviation needs n1 + n2 >= 3, got {}",
            n1 + n2
        )));
    }
    for v in [sigma2_1, sigma2_2] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveVariance(v));
        }
    }
    let (w1, w2) = (n1 as f64 - 1.0, n2 as f64 - 1.0);
    if n1 == n2 {
        return Ok(((sigma2_1 + sigma2_2) / 2.0).sqrt());
    }
    Ok(((w1 * sigma2_1 + w2 * sigma2_2) / (n1 + n2 - 2) as f64).sqrt())
}
