//! Simulation study harness: scenario data generation, one chain per
//! simulated dataset, and aggregation of decisions and error rates.
//!
//! Every dataset `i` draws its data and its chain from seeds derived from
//! `(master_seed, i)`, so results do not depend on execution order and
//! datasets run in parallel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    alpha_decision, classify_error, cohen_partition, delta_mpe, effect_size_series, hpd_interval,
    pmp, DecisionOutcome, DecisionStatus, Direction, ErrorClass, HpdInterval, IntervalSet,
    PosteriorMass,
};
use crate::distributions::{derive_seed, RngState};
use crate::error::{Error, Result};
use crate::gibbs::{run_chain, ChainConfig};
use crate::model::{GroupedSample, IndependencePrior, PriorPreset};

/// Direction used for every effect size the harness reports.
pub const HARNESS_DIRECTION: Direction = Direction::Group2MinusGroup1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Small,
    Medium,
    Large,
    Null,
    Custom { mu1: f64, sd1: f64, mu2: f64, sd2: f64 },
}

impl std::str::FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(ScenarioKind::Small),
            "medium" => Ok(ScenarioKind::Medium),
            "large" => Ok(ScenarioKind::Large),
            "null" => Ok(ScenarioKind::Null),
            other => Err(Error::UnknownScenario(other.to_string())),
        }
    }
}

/// Component means and standard deviations with the implied true effect size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub mu: [f64; 2],
    pub sd: [f64; 2],
    pub true_delta: f64,
}

impl Scenario {
    pub fn new(kind: ScenarioKind) -> Result<Self> {
        let (mu1, sd1, mu2, sd2) = match kind {
            ScenarioKind::Small => (2.89, 1.84, 3.5, 1.56),
            ScenarioKind::Medium => (254.08, 2.36, 255.84, 3.04),
            ScenarioKind::Large => (15.01, 3.4, 19.91, 5.8),
            ScenarioKind::Null => (148.3, 1.34, 148.3, 2.03),
            ScenarioKind::Custom { mu1, sd1, mu2, sd2 } => {
                for (name, value) in [("sd1", sd1), ("sd2", sd2)] {
                    if !(value > 0.0) {
                        return Err(Error::NonPositiveParameter { name, value });
                    }
                }
                (mu1, sd1, mu2, sd2)
            }
        };
        Ok(Self {
            kind,
            mu: [mu1, mu2],
            sd: [sd1, sd2],
            true_delta: true_effect_size(mu1, sd1, mu2, sd2),
        })
    }
}

/// `(mu2 - mu1) / sqrt((sd1^2 + sd2^2) / 2)`.
pub fn true_effect_size(mu1: f64, sd1: f64, mu2: f64, sd2: f64) -> f64 {
    (mu2 - mu1) / ((sd1 * sd1 + sd2 * sd2) / 2.0).sqrt()
}

/// `n` draws per group from the scenario's components, group one first.
pub fn generate_dataset(scenario: &Scenario, n_per_group: usize, rng: &mut RngState) -> Result<GroupedSample> {
    if n_per_group < 2 {
        return Err(Error::InsufficientSize(format!(
            "simulated groups need at least 2 observations, got {n_per_group}"
        )));
    }
    let mut groups = [Vec::with_capacity(n_per_group), Vec::with_capacity(n_per_group)];
    for k in 0..2 {
        let var = scenario.sd[k] * scenario.sd[k];
        for _ in 0..n_per_group {
            groups[k].push(rng.normal(scenario.mu[k], var)?);
        }
    }
    GroupedSample::from_groups(&groups[0], &groups[1])
}

/// Iterations and burn-in shared by every chain of a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainTemplate {
    pub iterations: usize,
    pub burn_in: usize,
}

impl Default for ChainTemplate {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            burn_in: 5_000,
        }
    }
}

impl ChainTemplate {
    pub fn instantiate(&self, seed: u64, prior: IndependencePrior) -> Result<ChainConfig> {
        ChainConfig::new(self.iterations, self.burn_in, seed, prior)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub scenario: Scenario,
    pub n_per_group: usize,
    pub n_datasets: usize,
    pub chain: ChainTemplate,
    pub preset: PriorPreset,
    pub alpha: f64,
    pub rope: IntervalSet,
    pub master_seed: u64,
}

impl StudyConfig {
    /// Wide prior, 10000/5000 chains, alpha 0.95 and the null ROPE.
    pub fn with_defaults(scenario: Scenario, n_per_group: usize, n_datasets: usize, master_seed: u64) -> Self {
        Self {
            scenario,
            n_per_group,
            n_datasets,
            chain: ChainTemplate::default(),
            preset: PriorPreset::Wide,
            alpha: 0.95,
            rope: IntervalSet::null_rope(),
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_datasets == 0 {
            return Err(Error::ConfigInvalid("at least one dataset is required".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidLevel(self.alpha));
        }
        if self.n_per_group < 2 {
            return Err(Error::InsufficientSize(format!(
                "simulated groups need at least 2 observations, got {}",
                self.n_per_group
            )));
        }
        self.chain
            .instantiate(0, IndependencePrior::new(0.0, 1.0, 1.0, 1.0)?)
            .map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub index: usize,
    pub seed: u64,
    pub delta_mpe: f64,
    pub hpd: HpdInterval,
    pub pmp: PosteriorMass,
    pub decision: DecisionOutcome,
    pub error: ErrorClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyAggregates {
    pub type_i_rate: f64,
    pub type_ii_rate: f64,
    pub accepted: usize,
    pub rejected: usize,
    pub indeterminate: usize,
    pub mean_delta_mpe: f64,
}

impl StudyAggregates {
    fn from_records(records: &[DatasetRecord]) -> Self {
        let m = records.len() as f64;
        let count = |f: &dyn Fn(&DatasetRecord) -> bool| records.iter().filter(|r| f(r)).count();
        Self {
            type_i_rate: count(&|r| r.error == ErrorClass::TypeI) as f64 / m,
            type_ii_rate: count(&|r| r.error == ErrorClass::TypeII) as f64 / m,
            accepted: count(&|r| r.decision.status == DecisionStatus::Accepted),
            rejected: count(&|r| r.decision.status == DecisionStatus::Rejected),
            indeterminate: count(&|r| r.decision.status == DecisionStatus::Indeterminate),
            mean_delta_mpe: records.iter().map(|r| r.delta_mpe).sum::<f64>() / m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub records: Vec<DatasetRecord>,
    pub aggregates: StudyAggregates,
}

fn run_dataset(config: &StudyConfig, index: usize) -> Result<DatasetRecord> {
    let seed = derive_seed(config.master_seed, index as u64);
    let mut data_rng = RngState::with_stream(seed, 1);
    let sample = generate_dataset(&config.scenario, config.n_per_group, &mut data_rng)?;
    let prior = config.preset.realize(&sample)?;
    let chain = run_chain(&sample, &config.chain.instantiate(seed, prior)?)?;
    let draws = effect_size_series(&chain, HARNESS_DIRECTION)?;
    let hpd = hpd_interval(&draws, config.alpha)?;
    let decision = alpha_decision(&draws, &config.rope, config.alpha, true)?;
    let truth = config.scenario.true_delta;
    Ok(DatasetRecord {
        index,
        seed,
        delta_mpe: delta_mpe(&draws),
        hpd,
        pmp: pmp(&draws, &cohen_partition()),
        decision,
        error: classify_error(truth, &config.rope, &decision, config.rope.contains(truth)),
    })
}

pub fn run_study(config: &StudyConfig) -> Result<StudyResult> {
    config.validate()?;
    let records = (0..config.n_datasets)
        .into_par_iter()
        .map(|i| run_dataset(config, i))
        .collect::<Result<Vec<_>>>()?;
    let aggregates = StudyAggregates::from_records(&records);
    Ok(StudyResult {
        config: config.clone(),
        records,
        aggregates,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetSummary {
    pub preset: String,
    pub prior: IndependencePrior,
    pub seed: u64,
    pub delta_mpe: f64,
    pub hpd: HpdInterval,
    pub pmp: PosteriorMass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresetDifference {
    pub first: String,
    pub second: String,
    /// `delta_mpe(first) - delta_mpe(second)`
    pub delta_mpe_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub summaries: Vec<PresetSummary>,
    pub differences: Vec<PresetDifference>,
}

/// Stream identifier of a preset, so a preset always gets the same derived
/// seed regardless of its position in the request.
fn preset_stream(preset: &PriorPreset) -> u64 {
    match preset {
        PriorPreset::Wide => 1,
        PriorPreset::Medium => 2,
        PriorPreset::Narrow => 3,
        PriorPreset::Custom(p) => [p.mu_mean, p.mu_var, p.sigma2_shape, p.sigma2_scale]
            .iter()
            .fold(4, |acc, v| derive_seed(acc, v.to_bits())),
    }
}

pub fn prior_sensitivity(
    sample: &GroupedSample,
    presets: &[PriorPreset],
    chain: &ChainTemplate,
    seed: u64,
    alpha: f64,
    direction: Direction,
) -> Result<SensitivityReport> {
    if presets.len() < 2 {
        return Err(Error::ConfigInvalid(
            "prior sensitivity needs at least two presets".into(),
        ));
    }
    let summaries = presets
        .par_iter()
        .map(|preset| {
            let prior = preset.realize(sample)?;
            let chain_seed = derive_seed(seed, preset_stream(preset));
            let posterior = run_chain(sample, &chain.instantiate(chain_seed, prior)?)?;
            let draws = effect_size_series(&posterior, direction)?;
            Ok(PresetSummary {
                preset: preset.name().to_string(),
                prior,
                seed: chain_seed,
                delta_mpe: delta_mpe(&draws),
                hpd: hpd_interval(&draws, alpha)?,
                pmp: pmp(&draws, &cohen_partition()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut differences = Vec::new();
    for (i, a) in summaries.iter().enumerate() {
        for b in &summaries[i + 1..] {
            differences.push(PresetDifference {
                first: a.preset.clone(),
                second: b.preset.clone(),
                delta_mpe_difference: a.delta_mpe - b.delta_mpe,
            });
        }
    }
    Ok(SensitivityReport {
        summaries,
        differences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ChainTemplate {
        ChainTemplate {
            iterations: 2_000,
            burn_in: 500,
        }
    }

    #[test]
    fn scenario_effect_sizes() {
        let large = Scenario::new(ScenarioKind::Large).unwrap();
        assert!((large.true_delta - 1.0307).abs() < 1e-4, "{}", large.true_delta);
        assert_eq!(Scenario::new(ScenarioKind::Null).unwrap().true_delta, 0.0);
        let medium = Scenario::new(ScenarioKind::Medium).unwrap();
        assert!((medium.true_delta - 0.6467).abs() < 1e-4);
        let small = Scenario::new(ScenarioKind::Small).unwrap();
        assert!((small.true_delta.abs() - 0.35).abs() < 0.01);
        assert!(small.true_delta > 0.0);
        assert!(matches!("huge".parse::<ScenarioKind>(), Err(Error::UnknownScenario(_))));
        assert!(Scenario::new(ScenarioKind::Custom {
            mu1: 0.0,
            sd1: 0.0,
            mu2: 1.0,
            sd2: 1.0
        })
        .is_err());
    }

    #[test]
    fn generated_data_shape_and_determinism() {
        let sc = Scenario::new(ScenarioKind::Null).unwrap();
        let a = generate_dataset(&sc, 300, &mut RngState::new(1)).unwrap();
        let b = generate_dataset(&sc, 300, &mut RngState::new(1)).unwrap();
        assert_eq!(a, b);
        let st = a.stats();
        assert_eq!(st.n, [300, 300]);
        for k in 0..2 {
            let se = sc.sd[k] / 300f64.sqrt();
            assert!((st.mean[k] - 148.3).abs() < 3.0 * se);
        }
        let tiny = generate_dataset(&Scenario::new(ScenarioKind::Large).unwrap(), 2, &mut RngState::new(2)).unwrap();
        assert_eq!(tiny.len(), 4);
        assert!(generate_dataset(&sc, 1, &mut RngState::new(2)).is_err());
    }

    #[test]
    fn null_group_means_close() {
        // sd of the mean difference is sqrt((1.34^2 + 2.03^2)/300) ~ 0.14,
        // so 0.5 is beyond 3.5 standard deviations.
        let sc = Scenario::new(ScenarioKind::Null).unwrap();
        for seed in 0..50 {
            let st = generate_dataset(&sc, 300, &mut RngState::new(seed)).unwrap().stats();
            assert!((st.mean[0] - st.mean[1]).abs() < 0.5);
        }
    }

    #[test]
    fn singleton_study() {
        let mut cfg = StudyConfig::with_defaults(Scenario::new(ScenarioKind::Large).unwrap(), 30, 1, 5);
        cfg.chain = quick();
        let res = run_study(&cfg).unwrap();
        assert_eq!(res.records.len(), 1);
        let r = &res.records[0];
        assert_eq!(res.aggregates.mean_delta_mpe, r.delta_mpe);
        assert_eq!(
            res.aggregates.accepted + res.aggregates.rejected + res.aggregates.indeterminate,
            1
        );
        assert_eq!(res.aggregates.type_i_rate, 0.0);
        let type_ii = if r.error == ErrorClass::TypeII { 1.0 } else { 0.0 };
        assert_eq!(res.aggregates.type_ii_rate, type_ii);
    }

    #[test]
    fn study_is_reproducible() {
        let mut cfg = StudyConfig::with_defaults(Scenario::new(ScenarioKind::Medium).unwrap(), 20, 6, 99);
        cfg.chain = quick();
        let a = run_study(&cfg).unwrap();
        let b = run_study(&cfg).unwrap();
        assert_eq!(a, b);
        // each record depends only on (master_seed, index)
        let mut fewer = cfg.clone();
        fewer.n_datasets = 3;
        assert_eq!(run_study(&fewer).unwrap().records[..], a.records[..3]);
        for r in &a.records {
            assert_ne!(r.decision.status, DecisionStatus::Indeterminate);
        }
    }

    #[test]
    fn study_config_validation() {
        let sc = Scenario::new(ScenarioKind::Null).unwrap();
        let mut cfg = StudyConfig::with_defaults(sc, 20, 0, 1);
        assert!(run_study(&cfg).is_err());
        cfg.n_datasets = 1;
        cfg.alpha = 0.0;
        assert!(matches!(run_study(&cfg), Err(Error::InvalidLevel(_))));
        cfg.alpha = 0.95;
        cfg.chain.burn_in = cfg.chain.iterations;
        assert!(matches!(run_study(&cfg), Err(Error::ConfigInvalid(_))));
    }

    fn unit_normal_data(seed: u64, n: usize) -> GroupedSample {
        let sc = Scenario::new(ScenarioKind::Custom {
            mu1: 0.0,
            sd1: 1.0,
            mu2: 1.0,
            sd2: 1.0,
        })
        .unwrap();
        generate_dataset(&sc, n, &mut RngState::new(seed)).unwrap()
    }

    #[test]
    fn sensitivity_wide_vs_medium_is_small() {
        let data = unit_normal_data(12, 100);
        let rep = prior_sensitivity(
            &data,
            &[PriorPreset::Wide, PriorPreset::Medium],
            &ChainTemplate::default(),
            3,
            0.95,
            HARNESS_DIRECTION,
        )
        .unwrap();
        assert_eq!(rep.summaries.len(), 2);
        assert_eq!(rep.differences.len(), 1);
        assert!(rep.differences[0].delta_mpe_difference.abs() < 0.1);
    }

    #[test]
    fn sensitivity_same_preset_twice_is_identical() {
        let data = unit_normal_data(13, 50);
        let rep = prior_sensitivity(&data, &[PriorPreset::Narrow, PriorPreset::Narrow], &quick(), 3, 0.95, HARNESS_DIRECTION)
            .unwrap();
        assert_eq!(rep.differences[0].delta_mpe_difference, 0.0);
    }

    #[test]
    fn sensitivity_narrow_shrinks_or_matches() {
        let data = unit_normal_data(14, 100);
        let rep = prior_sensitivity(
            &data,
            &[PriorPreset::Wide, PriorPreset::Narrow],
            &ChainTemplate::default(),
            8,
            0.95,
            HARNESS_DIRECTION,
        )
        .unwrap();
        let (wide, narrow) = (rep.summaries[0].delta_mpe, rep.summaries[1].delta_mpe);
        // Monte Carlo standard error of each mean is ~0.002
        assert!(narrow.abs() <= wide.abs() + 0.01, "wide {wide} narrow {narrow}");
    }

    #[test]
    fn sensitivity_needs_two_presets() {
        let data = unit_normal_data(1, 10);
        assert!(matches!(
            prior_sensitivity(&data, &[PriorPreset::Wide], &quick(), 1, 0.95, HARNESS_DIRECTION),
            Err(Error::ConfigInvalid(_))
        ));
    }
}
