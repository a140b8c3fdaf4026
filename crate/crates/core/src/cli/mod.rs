//! Command-line front end: `analyze`, `simulate` and `sensitivity`.
//!
//! Reports are pretty-printed JSON. Every report echoes the seed, chain
//! length, burn-in, realized prior and effect-size direction needed to
//! re-run it.

pub mod io;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    alpha_decision, cohen_partition, delta_mpe, density_on_grid, effect_size_range, effect_size_series,
    hpd_interval, pmp, posterior_mode, DecisionOutcome, Direction, HpdInterval, Interval, IntervalSet,
    PosteriorMass, DENSITY_GRID_POINTS,
};
use crate::gibbs::run_chain;
use crate::model::{IndependencePrior, PriorPreset};
use crate::sim::{prior_sensitivity, run_study, ChainTemplate, Scenario, ScenarioKind, StudyConfig};
use crate::welch::{welch_t_test, WelchResult};

#[derive(Debug, Parser)]
#[command(name = "bttest", version, about = "Bayesian two-sample t-test with ROPE-based effect-size estimation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze a two-group CSV file
    Analyze(AnalyzeArgs),
    /// Run a simulation study over synthetic datasets
    Simulate(SimulateArgs),
    /// Compare wide, medium and narrow priors on one dataset
    Sensitivity(SensitivityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Total Gibbs sweeps
    #[arg(long = "iters", default_value_t = 10_000)]
    pub iterations: usize,
    /// Sweeps discarded before summarizing
    #[arg(long = "burnin", default_value_t = 5_000)]
    pub burn_in: usize,
    /// Seed for all randomness
    #[arg(long)]
    pub seed: u64,
}

impl ChainArgs {
    fn template(&self) -> ChainTemplate {
        ChainTemplate {
            iterations: self.iterations,
            burn_in: self.burn_in,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PriorArgs {
    /// Prior preset
    #[arg(long, default_value = "wide")]
    pub prior: PriorPreset,
    /// Custom prior mean of the group means (requires --B0 --c0 --C0)
    #[arg(long = "b0", allow_hyphen_values = true, requires_all = ["mu_var", "sigma2_shape", "sigma2_scale"])]
    pub mu_mean: Option<f64>,
    /// Custom prior variance of the group means
    #[arg(long = "B0", requires = "mu_mean")]
    pub mu_var: Option<f64>,
    /// Custom inverse-gamma shape
    #[arg(long = "c0", requires = "mu_mean")]
    pub sigma2_shape: Option<f64>,
    /// Custom inverse-gamma scale
    #[arg(long = "C0", requires = "mu_mean")]
    pub sigma2_scale: Option<f64>,
}

impl PriorArgs {
    fn preset(&self) -> anyhow::Result<PriorPreset> {
        match (self.mu_mean, self.mu_var, self.sigma2_shape, self.sigma2_scale) {
            (Some(b0), Some(big_b0), Some(c0), Some(big_c0)) => {
                Ok(PriorPreset::Custom(IndependencePrior::new(b0, big_b0, c0, big_c0)?))
            }
            (None, None, None, None) => Ok(self.prior),
            _ => bail!("a custom prior needs all of --b0, --B0, --c0 and --C0"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// CSV file with a `value,group` header
    #[arg(long)]
    pub input: PathBuf,
    /// Report file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write the effect-size density and annotations here
    #[arg(long = "plot-data")]
    pub plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Credible level of the HPD interval
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    /// Decision ROPE as LO,HI (open interval)
    #[arg(long, default_value = "-0.2,0.2", value_parser = parse_rope, allow_hyphen_values = true)]
    pub rope: Interval,
    /// Effect-size direction
    #[arg(long, default_value = "g2-g1")]
    pub direction: Direction,
    /// Report partial overlap with the ROPE as rejection
    #[arg(long = "strict-decision")]
    pub strict_decision: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// small, medium, large, null or custom
    #[arg(long)]
    pub scenario: String,
    /// Group-one mean of a custom scenario
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: Option<f64>,
    #[arg(long)]
    pub sd1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: Option<f64>,
    #[arg(long)]
    pub sd2: Option<f64>,
    /// Observations per group
    #[arg(long)]
    pub n: usize,
    /// Number of simulated datasets
    #[arg(long, default_value_t = 100)]
    pub datasets: usize,
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    #[arg(long, default_value = "-0.2,0.2", value_parser = parse_rope, allow_hyphen_values = true)]
    pub rope: Interval,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub prior: PriorArgs,
    /// Study report file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SensitivityArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Comma-separated presets to compare
    #[arg(long, value_delimiter = ',', default_value = "wide,medium,narrow")]
    pub presets: Vec<PriorPreset>,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = 0.95)]
    pub alpha: f64,
    #[arg(long, default_value = "g2-g1")]
    pub direction: Direction,
}

fn parse_rope(s: &str) -> Result<Interval, String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LO,HI, got `{s}`"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("ROPE bounds must be finite with LO < HI, got `{s}`"));
    }
    Interval::open(lo, hi).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainMetadata {
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub preset: String,
    pub prior: IndependencePrior,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub label: String,
    pub n: usize,
    pub mean: f64,
    pub posterior_mean_mu: f64,
    pub posterior_mean_sigma2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub delta_mpe: f64,
    pub delta_mode: f64,
    pub hpd: HpdInterval,
    pub esr: (f64, f64),
    pub pmp: PosteriorMass,
    pub rope: Interval,
    pub strict_decision: bool,
    pub decision: DecisionOutcome,
    pub welch: WelchResult,
    pub groups: [GroupSummary; 2],
    pub chain: ChainMetadata,
}

pub fn analyze(args: &AnalyzeArgs) -> anyhow::Result<(AnalysisReport, Option<String>)> {
    let labeled = io::read_sample(&args.input)?;
    let sample = &labeled.sample;
    let preset = args.prior.preset()?;
    let prior = preset.realize(sample)?;
    let config = args.chain.template().instantiate(args.chain.seed, prior)?;
    let chain = run_chain(sample, &config)?;
    let draws = effect_size_series(&chain, args.direction)?;
    let rope = IntervalSet::single(args.rope);
    let hpd = hpd_interval(&draws, args.alpha)?;
    let partition = cohen_partition();

    let stats = chain.stats;
    let m = chain.draws.len() as f64;
    let groups = [0, 1].map(|k| GroupSummary {
        label: labeled.labels[k].clone(),
        n: stats.n[k],
        mean: stats.mean[k],
        posterior_mean_mu: chain.draws.iter().map(|d| d.mu[k]).sum::<f64>() / m,
        posterior_mean_sigma2: chain.draws.iter().map(|d| d.sigma2[k]).sum::<f64>() / m,
    });

    let report = AnalysisReport {
        delta_mpe: delta_mpe(&draws),
        delta_mode: posterior_mode(&draws)?,
        hpd,
        esr: effect_size_range(&draws, args.alpha)?,
        pmp: pmp(&draws, &partition),
        rope: args.rope,
        strict_decision: args.strict_decision,
        decision: alpha_decision(&draws, &rope, args.alpha, args.strict_decision)?,
        welch: welch_t_test(sample)?,
        groups,
        chain: ChainMetadata {
            iterations: config.iterations,
            burn_in: config.burn_in,
            seed: config.seed,
            preset: preset.name().to_string(),
            prior,
            direction: args.direction,
        },
    };

    let plot = match args.plot_data {
        Some(_) => {
            let (xs, density) = density_on_grid(&draws, DENSITY_GRID_POINTS)?;
            let mut out = String::from("x,density\n");
            for (x, d) in xs.iter().zip(&density) {
                out.push_str(&format!("{x:?},{d:?}\n"));
            }
            out.push_str(&format!("# hpd_lower,{:?}\n# hpd_upper,{:?}\n", hpd.lower, hpd.upper));
            for b in partition.boundaries() {
                out.push_str(&format!("# rope_boundary,{b:?}\n"));
            }
            Some(out)
        }
        None => None,
    };
    Ok((report, plot))
}

pub fn simulate(args: &SimulateArgs) -> anyhow::Result<crate::sim::StudyResult> {
    let kind = match args.scenario.as_str() {
        "custom" => match (args.mu1, args.sd1, args.mu2, args.sd2) {
            (Some(mu1), Some(sd1), Some(mu2), Some(sd2)) => ScenarioKind::Custom { mu1, sd1, mu2, sd2 },
            _ => bail!("a custom scenario needs --mu1, --sd1, --mu2 and --sd2"),
        },
        name => name.parse()?,
    };
    let config = StudyConfig {
        scenario: Scenario::new(kind)?,
        n_per_group: args.n,
        n_datasets: args.datasets,
        chain: args.chain.template(),
        preset: args.prior.preset()?,
        alpha: args.alpha,
        rope: IntervalSet::single(args.rope),
        master_seed: args.chain.seed,
    };
    Ok(run_study(&config)?)
}

pub fn sensitivity(args: &SensitivityArgs) -> anyhow::Result<crate::sim::SensitivityReport> {
    if args.presets.len() < 2 {
        bail!("at least two presets are required for a sensitivity analysis");
    }
    let labeled = io::read_sample(&args.input)?;
    Ok(prior_sensitivity(
        &labeled.sample,
        &args.presets,
        &args.chain.template(),
        args.chain.seed,
        args.alpha,
        args.direction,
    )?)
}

fn write_output(path: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Analyze(args) => {
            let (report, plot) = analyze(&args)?;
            if let (Some(path), Some(plot)) = (&args.plot_data, plot) {
                write_output(Some(path), &plot)?;
            }
            write_output(args.output.as_deref(), &to_json(&report)?)
        }
        Command::Simulate(args) => {
            let result = simulate(&args)?;
            write_output(args.output.as_deref(), &to_json(&result)?)
        }
        Command::Sensitivity(args) => {
            let report = sensitivity(&args)?;
            write_output(args.output.as_deref(), &to_json(&report)?)
        }
    }
}
