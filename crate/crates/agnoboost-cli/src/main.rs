//! Command-line surface for the agnoboost library.
//!
//! Subcommands: `bench` (cross-validated dataset benchmark with grid
//! search), `boost` (single run on one dataset), `verify` (invariant
//! suite), `halfspace` (boosted parities against a corrupted majority),
//! and `rl` (policy boosting on an MDP file). All outputs are
//! deterministic functions of the flags and `--seed`.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 data error.

mod bench;
mod commands;
mod table;
mod verify;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use agnoboost::booster::{BranchMode, RelabelMode, StepMode};
use agnoboost::data::{gen_halfspace, load_csv, Dataset, LabelColumn, LabelEncoding};
use agnoboost::rl_sim::load_mdp;
use agnoboost::Real;

use bench::{run_bench, Algo, BenchParams};
use table::{config_hash, Table};

#[derive(Parser)]
#[command(
    name = "agnoboost",
    version,
    about = "Agnostic boosting with recency-weighted sample reuse",
    disable_help_subcommand = true,
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Expands `--config FILE` into flags inserted right after the subcommand,
/// so explicit command-line flags (which come later) override file values.
/// The file is flat `key=value` text: keys are long flag names without the
/// leading dashes, boolean flags take `true`/`false`, comments start
/// with `#`.
fn expand_config_args(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut config_path: Option<String> = None;
    let mut rest: Vec<String> = Vec::with_capacity(argv.len());
    let mut iter = argv.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            config_path = Some(
                iter.next()
                    .ok_or_else(|| "--config requires a file path".to_string())?,
            );
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config_path = Some(path.to_string());
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config_path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut injected = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{path}:{}: expected key=value", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(format!("{path}:{}: empty key or value", i + 1));
        }
        match value {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => {
                injected.push(format!("--{key}"));
                injected.push(value.to_string());
            }
        }
    }
    // program name, subcommand, config-derived flags, then explicit flags
    if rest.len() < 2 || rest[1].starts_with('-') {
        return Err("--config requires a subcommand".to_string());
    }
    let mut out = rest[..2].to_vec();
    out.extend(injected);
    out.extend(rest[2..].iter().cloned());
    Ok(out)
}

#[derive(Clone, Copy, ValueEnum)]
enum RelabelArg {
    Stochastic,
    Fractional,
}

impl From<RelabelArg> for RelabelMode {
    fn from(v: RelabelArg) -> Self {
        match v {
            RelabelArg::Stochastic => RelabelMode::Stochastic,
            RelabelArg::Fractional => RelabelMode::Fractional,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Threshold,
    EmpiricalBest,
}

impl From<BranchArg> for BranchMode {
    fn from(v: BranchArg) -> Self {
        match v {
            BranchArg::Threshold => BranchMode::Threshold,
            BranchArg::EmpiricalBest => BranchMode::EmpiricalBest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StepArg {
    Fixed,
    Adaptive,
}

impl From<StepArg> for StepMode {
    fn from(v: StepArg) -> Self {
        match v {
            StepArg::Fixed => StepMode::Fixed,
            StepArg::Adaptive => StepMode::AdaptiveCorrelation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Ours,
    Kk09,
    Bhs20,
}

impl From<AlgoArg> for Algo {
    fn from(v: AlgoArg) -> Self {
        match v {
            AlgoArg::Ours => Algo::Ours,
            AlgoArg::Kk09 => Algo::Kk09,
            AlgoArg::Bhs20 => Algo::Bhs20,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(clap::Args, Clone)]
struct CsvArgs {
    /// First row is a header and is skipped
    #[arg(long)]
    header: bool,
    /// Label column: "first", "last", or a zero-based index
    #[arg(long = "label-col", default_value = "last")]
    label_col: String,
    /// Raw label value mapped to +1
    #[arg(long = "label-pos", default_value_t = 1.0)]
    label_pos: Real,
    /// Raw label value mapped to -1
    #[arg(long = "label-neg", default_value_t = 0.0)]
    label_neg: Real,
}

impl CsvArgs {
    fn load(&self, path: &PathBuf) -> Result<Dataset, String> {
        let column = match self.label_col.as_str() {
            "first" => LabelColumn::First,
            "last" => LabelColumn::Last,
            other => LabelColumn::Index(
                other
                    .parse()
                    .map_err(|_| format!("invalid --label-col '{other}'"))?,
            ),
        };
        load_csv(
            path,
            self.header,
            column,
            LabelEncoding {
                positive: self.label_pos,
                negative: self.label_neg,
            },
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(clap::Args, Clone)]
struct OutputArgs {
    /// Also write the rendered table to this path
    #[arg(long)]
    out: Option<PathBuf>,
    /// Render a markdown table instead of CSV
    #[arg(long)]
    markdown: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Cross-validated benchmark over datasets, noise levels, and all three
    /// boosters, with grid search over rounds and mixing weight
    Bench {
        /// Dataset CSV path; repeatable
        #[arg(long = "dataset", required = true)]
        datasets: Vec<PathBuf>,
        #[arg(long, default_value_t = 30)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Round-count grid
        #[arg(long = "grid-t", value_delimiter = ',', default_values_t = vec![25, 50, 100])]
        grid_t: Vec<usize>,
        /// Mixing-weight grid (reuse booster only)
        #[arg(long = "grid-sigma", value_delimiter = ',', default_values_t = vec![0.1, 0.25, 0.5])]
        grid_sigma: Vec<Real>,
        #[arg(long, value_enum, default_value_t = RelabelArg::Fractional)]
        relabel: RelabelArg,
        #[arg(long, value_enum, default_value_t = BranchArg::EmpiricalBest)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = StepArg::Adaptive)]
        step: StepArg,
        #[command(flatten)]
        csv: CsvArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Train one booster on one dataset and report its metrics
    Boost {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Training label-noise rate
        #[arg(long, default_value_t = 0.0)]
        noise: Real,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        rounds: usize,
        #[arg(long, default_value_t = 0.25)]
        sigma: Real,
        #[arg(long, value_enum, default_value_t = RelabelArg::Fractional)]
        relabel: RelabelArg,
        #[arg(long, value_enum, default_value_t = BranchArg::EmpiricalBest)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = StepArg::Adaptive)]
        step: StepArg,
        #[command(flatten)]
        csv: CsvArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the invariant verification suite
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Boost degree-limited parities against a corrupted majority function
    Halfspace {
        /// Hypercube dimension (enumerated exactly; odd keeps the majority
        /// unambiguous)
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: Real,
        /// Label corruption rate
        #[arg(long, default_value_t = 0.1)]
        corrupt: Real,
        #[arg(long, default_value_t = 60)]
        rounds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Policy boosting on an MDP specification file
    Rl {
        #[arg(long)]
        mdp: PathBuf,
        /// Outer policy-mixing rounds
        #[arg(long, default_value_t = 10)]
        rounds: usize,
        /// Evaluation rollouts per candidate policy
        #[arg(long = "post-rollouts", default_value_t = 400)]
        post_rollouts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum CliError {
    Verification(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Verification(m) | CliError::Data(m) => m,
        }
    }
}

fn emit(table: &Table, output: &OutputArgs) -> Result<(), CliError> {
    let rendered = table.render(output.markdown);
    print!("{rendered}");
    if let Some(path) = &output.out {
        std::fs::write(path, rendered)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn fmt_real(v: Real) -> String {
    format!("{v:.6}")
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bench {
            datasets,
            folds,
            seed,
            grid_t,
            grid_sigma,
            relabel,
            branch,
            step,
            csv,
            output,
        } => {
            let params = BenchParams {
                folds,
                seed,
                grid_t: grid_t.clone(),
                grid_sigma: grid_sigma.clone(),
                relabel: relabel.into(),
                branch: branch.into(),
                step: step.into(),
                ..BenchParams::default()
            };
            let mut loaded = Vec::new();
            for path in &datasets {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                match csv.load(path) {
                    Ok(data) => {
                        if data.len() < params.folds {
                            eprintln!(
                                "warning: skipping {name}: {} examples cannot fill {} folds",
                                data.len(),
                                params.folds
                            );
                        } else {
                            loaded.push((name, data));
                        }
                    }
                    Err(e) => eprintln!("warning: skipping {name}: {e}"),
                }
            }
            if loaded.is_empty() {
                return Err(CliError::Data("no usable datasets".into()));
            }
            let canonical = format!(
                "bench folds={folds} seed={seed} grid_t={grid_t:?} grid_sigma={grid_sigma:?} \
                 relabel={:?} branch={:?} step={:?} datasets={:?}",
                params.relabel,
                params.branch,
                params.step,
                loaded.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()
            );
            let cells = run_bench(&loaded, &params);
            let mut t = Table::new(&[
                "dataset",
                "noise",
                "algo",
                "t",
                "sigma",
                "mean_accuracy",
                "std_error",
                "samples_per_fold",
            ]);
            t.meta("command", "bench");
            t.meta("seed", seed);
            t.meta("config_hash", config_hash(&canonical));
            for c in &cells {
                t.row(vec![
                    c.dataset.clone(),
                    format!("{:.2}", c.noise),
                    c.algo.name().into(),
                    c.rounds.to_string(),
                    c.sigma.map(|s| format!("{s:.2}")).unwrap_or_else(|| "-".into()),
                    fmt_real(c.mean_accuracy),
                    fmt_real(c.std_error),
                    c.samples_per_fold.to_string(),
                ]);
            }
            emit(&t, &output)
        }
        Command::Boost {
            dataset,
            algo,
            noise,
            seed,
            rounds,
            sigma,
            relabel,
            branch,
            step,
            csv,
            output,
        } => {
            let data = csv.load(&dataset).map_err(CliError::Data)?;
            let params = BenchParams {
                seed,
                relabel: relabel.into(),
                branch: branch.into(),
                step: step.into(),
                ..BenchParams::default()
            };
            let algo: Algo = algo.into();
            let canonical = format!(
                "boost dataset={} algo={} noise={noise} seed={seed} rounds={rounds} sigma={sigma} \
                 relabel={:?} branch={:?} step={:?}",
                dataset.display(),
                algo.name(),
                params.relabel,
                params.branch,
                params.step
            );
            let outcome = commands::cmd_boost(&data, algo, noise, rounds, sigma, &params, seed)
                .map_err(CliError::Data)?;
            let mut t = Table::new(&["metric", "value"]);
            t.meta("command", "boost");
            t.meta("seed", seed);
            t.meta("config_hash", config_hash(&canonical));
            t.row(vec!["algo".into(), algo.name().into()]);
            t.row(vec!["examples".into(), data.len().to_string()]);
            t.row(vec!["noise".into(), format!("{noise:.2}")]);
            t.row(vec!["rounds_run".into(), outcome.rounds_run.to_string()]);
            t.row(vec!["chosen_round".into(), outcome.chosen_round.to_string()]);
            t.row(vec!["train_accuracy".into(), fmt_real(outcome.train_accuracy)]);
            t.row(vec![
                "noisy_train_accuracy".into(),
                fmt_real(outcome.noisy_accuracy),
            ]);
            t.row(vec!["samples_drawn".into(), outcome.samples_drawn.to_string()]);
            emit(&t, &output)
        }
        Command::Verify { level, seed, output } => {
            let level = match level {
                LevelArg::Fast => verify::Level::Fast,
                LevelArg::Full => verify::Level::Full,
            };
            let reports = verify::run_all(level, seed);
            let passed = reports.iter().filter(|r| r.passed).count();
            let mut t = Table::new(&["group", "status", "detail"]);
            t.meta("command", "verify");
            t.meta("seed", seed);
            t.meta(
                "config_hash",
                config_hash(&format!("verify level={level:?} seed={seed}")),
            );
            t.meta("groups", reports.len());
            t.meta("passed", passed);
            for r in &reports {
                t.row(vec![
                    r.name.into(),
                    if r.passed { "PASS".into() } else { "FAIL".into() },
                    r.detail.clone(),
                ]);
            }
            emit(&t, &output)?;
            if passed != reports.len() {
                return Err(CliError::Verification(format!(
                    "{} of {} invariant groups failed",
                    reports.len() - passed,
                    reports.len()
                )));
            }
            Ok(())
        }
        Command::Halfspace {
            n,
            degree,
            epsilon,
            corrupt,
            rounds,
            seed,
            output,
        } => {
            let dist = gen_halfspace(n, &vec![1.0; n], 0.0, corrupt)
                .map_err(|e| CliError::Data(e.to_string()))?;
            let outcome = commands::cmd_halfspace(&dist, n, degree, epsilon, rounds, seed)
                .map_err(CliError::Data)?;
            let mut t = Table::new(&["metric", "value"]);
            t.meta("command", "halfspace");
            t.meta("seed", seed);
            t.meta(
                "config_hash",
                config_hash(&format!(
                    "halfspace n={n} degree={degree} epsilon={epsilon} corrupt={corrupt} \
                     rounds={rounds} seed={seed}"
                )),
            );
            t.row(vec!["n".into(), n.to_string()]);
            t.row(vec!["degree".into(), degree.to_string()]);
            t.row(vec!["corrupt".into(), format!("{corrupt:.2}")]);
            t.row(vec![
                "best_single_parity_accuracy".into(),
                fmt_real(outcome.best_single_accuracy),
            ]);
            t.row(vec!["boosted_accuracy".into(), fmt_real(outcome.boosted_accuracy)]);
            t.row(vec![
                "advantage".into(),
                fmt_real(outcome.boosted_accuracy - outcome.best_single_accuracy),
            ]);
            t.row(vec!["samples_drawn".into(), outcome.samples_drawn.to_string()]);
            emit(&t, &output)
        }
        Command::Rl {
            mdp,
            rounds,
            post_rollouts,
            seed,
            output,
        } => {
            let loaded = load_mdp(&mdp).map_err(|e| CliError::Data(e.to_string()))?;
            let outcome =
                commands::cmd_rl(&loaded, rounds, post_rollouts, seed).map_err(CliError::Data)?;
            let mut t = Table::new(&["round", "value_estimate"]);
            t.meta("command", "rl");
            t.meta("seed", seed);
            t.meta(
                "config_hash",
                config_hash(&format!(
                    "rl mdp={} rounds={rounds} post_rollouts={post_rollouts} seed={seed}",
                    mdp.display()
                )),
            );
            t.meta("states", loaded.n_states);
            t.meta("discount", loaded.discount);
            for (i, v) in outcome.result.value_estimates.iter().enumerate() {
                t.row(vec![(i + 1).to_string(), fmt_real(*v)]);
            }
            t.row(vec!["chosen".into(), outcome.result.chosen_round.to_string()]);
            t.row(vec![
                "final_exact_value".into(),
                fmt_real(outcome.final_exact_value),
            ]);
            t.row(vec![
                "uniform_policy_value".into(),
                fmt_real(outcome.uniform_value),
            ]);
            t.row(vec!["episodes".into(), outcome.result.episodes.to_string()]);
            emit(&t, &output)
        }
    }
}

fn main() {
    let argv = match expand_config_args(std::env::args().collect()) {
        Ok(argv) => argv,
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}
