//! Effect-size posterior and its summaries: posterior mean and mode, HPD
//! interval, posterior mass per ROPE cell, and HPD-based decisions.

mod hpd;
pub mod kde;
mod rope;

use serde::{Deserialize, Serialize};

pub use hpd::{hpd_from_sorted, window_len, HpdInterval};
pub use rope::{cohen_partition, Interval, IntervalSet, RopeCell, RopePartition};

use crate::error::{Error, Result};
use crate::gibbs::PosteriorChain;
use crate::model::{pooled_sd, MixtureDraw};

/// Grid size used for the posterior mode and plot densities.
pub const DENSITY_GRID_POINTS: usize = 512;

/// Which group mean is subtracted from which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Direction {
    /// `(mu_1 - mu_2) / s`
    #[default]
    #[serde(rename = "g1-g2")]
    Group1MinusGroup2,
    /// `(mu_2 - mu_1) / s`
    #[serde(rename = "g2-g1")]
    Group2MinusGroup1,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Group1MinusGroup2 => "g1-g2",
            Direction::Group2MinusGroup1 => "g2-g1",
        }
    }

    fn sign(self) -> f64 {
        match self {
            Direction::Group1MinusGroup2 => 1.0,
            Direction::Group2MinusGroup1 => -1.0,
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "g1-g2" => Ok(Direction::Group1MinusGroup2),
            "g2-g1" => Ok(Direction::Group2MinusGroup1),
            other => Err(format!("unknown direction `{other}` (expected g1-g2 or g2-g1)")),
        }
    }
}

/// Posterior draws of the standardized mean difference.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectSizeDraws {
    deltas: Vec<f64>,
    n: [usize; 2],
}

impl EffectSizeDraws {
    pub fn new(deltas: Vec<f64>, n1: usize, n2: usize) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InsufficientSize("no effect-size draws".into()));
        }
        if deltas.iter().any(|d| !d.is_finite()) {
            return Err(Error::DegenerateData("non-finite effect-size draw".into()));
        }
        Ok(Self {
            deltas,
            n: [n1, n2],
        })
    }

    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn group_sizes(&self) -> [usize; 2] {
        self.n
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut s = self.deltas.clone();
        s.sort_by(f64::total_cmp);
        s
    }

    pub fn negated(&self) -> Self {
        Self {
            deltas: self.deltas.iter().map(|d| -d).collect(),
            n: self.n,
        }
    }
}

/// `delta = (mu_1 - mu_2) / s` for a single draw, `s` the pooled SD of the
/// drawn variances.
pub fn effect_size(draw: &MixtureDraw, n1: usize, n2: usize, direction: Direction) -> Result<f64> {
    let s = pooled_sd(draw.sigma2[0], draw.sigma2[1], n1, n2)?;
    Ok(direction.sign() * (draw.mu[0] - draw.mu[1]) / s)
}

pub fn effect_size_series(chain: &PosteriorChain, direction: Direction) -> Result<EffectSizeDraws> {
    let [n1, n2] = chain.stats.n;
    let deltas = chain
        .draws
        .iter()
        .map(|d| effect_size(d, n1, n2, direction))
        .collect::<Result<Vec<_>>>()?;
    EffectSizeDraws::new(deltas, n1, n2)
}

/// Mean posterior effect size.
pub fn delta_mpe(draws: &EffectSizeDraws) -> f64 {
    draws.deltas.iter().sum::<f64>() / draws.len() as f64
}

/// KDE of the draws evaluated on an evenly spaced grid over `[min, max]`.
pub fn density_on_grid(draws: &EffectSizeDraws, points: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let sorted = draws.sorted();
    let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        return Err(Error::DegenerateDraws);
    }
    let bw = kde::silverman_bandwidth(&sorted);
    let xs = kde::grid(lo, hi, points);
    let density = kde::gaussian_kde(&sorted, bw, &xs);
    Ok((xs, density))
}

/// Posterior mode: maximizer of the KDE on a 512-point grid.
pub fn posterior_mode(draws: &EffectSizeDraws) -> Result<f64> {
    let (xs, density) = density_on_grid(draws, DENSITY_GRID_POINTS)?;
    let mut best = 0;
    for (i, d) in density.iter().enumerate() {
        if *d > density[best] {
            best = i;
        }
    }
    Ok(xs[best])
}

pub fn hpd_interval(draws: &EffectSizeDraws, level: f64) -> Result<HpdInterval> {
    hpd_from_sorted(&draws.sorted(), level)
}

/// Effect size range: the bounds of the level-`level` HPD interval.
pub fn effect_size_range(draws: &EffectSizeDraws, level: f64) -> Result<(f64, f64)> {
    let h = hpd_interval(draws, level)?;
    Ok((h.lower, h.upper))
}

/// Fraction of draws in each cell of the partition.
pub fn cell_masses(draws: &EffectSizeDraws, partition: &RopePartition) -> Vec<f64> {
    let mut counts = vec![0usize; partition.cells().len()];
    for &d in &draws.deltas {
        counts[partition.locate(d)] += 1;
    }
    let m = draws.len() as f64;
    counts.into_iter().map(|c| c as f64 / m).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorMass {
    pub cell: String,
    pub value: f64,
}

/// Posterior mass percentage of the cell containing the posterior mean.
pub fn pmp(draws: &EffectSizeDraws, partition: &RopePartition) -> PosteriorMass {
    let j = partition.locate(delta_mpe(draws));
    let inside = draws.deltas.iter().filter(|&&d| partition.locate(d) == j).count();
    PosteriorMass {
        cell: partition.cells()[j].label.clone(),
        value: inside as f64 / draws.len() as f64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionStatus {
    Accepted,
    Rejected,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionOutcome {
    pub status: DecisionStatus,
    pub alpha: f64,
}

/// Decision for a given credible interval: accepted if `[lower, upper]` lies in
/// the region, rejected if it misses it, indeterminate otherwise. `strict`
/// folds indeterminate into rejected.
pub fn decide(interval: &HpdInterval, rope: &IntervalSet, strict: bool) -> DecisionOutcome {
    let status = if rope.contains_closed(interval.lower, interval.upper) {
        DecisionStatus::Accepted
    } else if strict || !rope.meets_closed(interval.lower, interval.upper) {
        DecisionStatus::Rejected
    } else {
        DecisionStatus::Indeterminate
    };
    DecisionOutcome {
        status,
        alpha: interval.level,
    }
}

/// Alpha-acceptance of the hypothesis described by `rope`, judged from the
/// level-`alpha` HPD interval.
pub fn alpha_decision(
    draws: &EffectSizeDraws,
    rope: &IntervalSet,
    alpha: f64,
    strict: bool,
) -> Result<DecisionOutcome> {
    Ok(decide(&hpd_interval(draws, alpha)?, rope, strict))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorClass {
    #[serde(rename = "type-I")]
    TypeI,
    #[serde(rename = "type-II")]
    TypeII,
    #[serde(rename = "none")]
    None,
}

/// Type I: the hypothesis holds (true value inside it and its ROPE) yet is
/// rejected. Type II: the true value lies outside the ROPE yet the hypothesis
/// is accepted.
pub fn classify_error(
    true_delta: f64,
    rope: &IntervalSet,
    outcome: &DecisionOutcome,
    hypothesis_contains_true: bool,
) -> ErrorClass {
    let in_rope = rope.contains(true_delta);
    match outcome.status {
        DecisionStatus::Rejected if in_rope && hypothesis_contains_true => ErrorClass::TypeI,
        DecisionStatus::Accepted if !in_rope => ErrorClass::TypeII,
        _ => ErrorClass::None,
    }
}
