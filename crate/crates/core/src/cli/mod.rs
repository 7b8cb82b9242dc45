//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification failure.

pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::boosting::{BoostError, Loss, ScoreScaling};
use crate::dataset::{self, binarize_multiclass, load_csv, DatasetError, LabeledDataset, LoadedDataset};
use crate::infotheory::{info_quantities, InfoError};
use crate::trajectory::{self, AveragedTrajectory, RunResult, TrajectoryError};
use crate::verify::{self, CheckReport};

pub use config::{DataSource, ExperimentConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        match e {
            DatasetError::InvalidParameter(_) | DatasetError::NotEnoughVertices { .. } | DatasetError::TooFewBins(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<InfoError> for CliError {
    fn from(e: InfoError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<TrajectoryError> for CliError {
    fn from(e: TrajectoryError) -> Self {
        let mut inner = &e;
        while let TrajectoryError::Run { source, .. } = inner {
            inner = source;
        }
        match inner {
            TrajectoryError::Boost(BoostError::InvalidConfig(_)) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lmc", version, about = "Boosting trajectories on the entropy-normalized information plane")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the artificial cluster dataset as CSV.
    GenData {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Output file (default: <out>/artificial.csv).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Entropies, label information and the LMC target of a dataset.
    Inspect {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Run the boosting experiment and write trajectories.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
    },
    /// Repeat `run` over one hyperparameter axis.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        /// Comma-separated settings (default depends on the axis).
        #[arg(long)]
        values: Option<String>,
    },
    /// Run the equivalence suites and scenario witnesses.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per randomized suite.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value = "lmc_out")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    Depth,
    Shrinkage,
    Subsample,
    Loss,
}

impl SweepAxis {
    fn default_values(self) -> &'static str {
        match self {
            SweepAxis::Depth => "1,2,3,4,5,6",
            SweepAxis::Shrinkage => "1.0,0.1",
            SweepAxis::Subsample => "1.0,0.8",
            SweepAxis::Loss => "exponential,deviance",
        }
    }

    fn key(self) -> &'static str {
        match self {
            SweepAxis::Depth => "depth",
            SweepAxis::Shrinkage => "shrinkage",
            SweepAxis::Subsample => "subsample",
            SweepAxis::Loss => "loss",
        }
    }
}

/// Experiment options shared by the data and experiment commands. Values
/// given here override the configuration file, which overrides defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV path, or `artificial`.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Artificial data: number of rows.
    #[arg(long)]
    pub n: Option<usize>,
    /// Artificial data: number of features.
    #[arg(long)]
    pub features: Option<usize>,
    /// Artificial data: informative features.
    #[arg(long)]
    pub informative: Option<usize>,
    /// Artificial data: clusters per class.
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Artificial data: label flip probability.
    #[arg(long)]
    pub flip: Option<f64>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// exponential | deviance
    #[arg(long)]
    pub loss: Option<Loss>,
    #[arg(long)]
    pub shrinkage: Option<f64>,
    #[arg(long)]
    pub subsample: Option<f64>,
    /// tanh | max_abs
    #[arg(long)]
    pub scaling: Option<ScoreScaling>,
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lmc_tol: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot: bool,
}

impl ExperimentArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = ExperimentConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if let Some(v) = &self.dataset {
            c.dataset = DataSource::from(v.as_str());
        }
        macro_rules! over {
            ($($field:ident => $($target:ident).+),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { c.$($target).+ = v; })*
            };
        }
        over!(
            n => artificial.n,
            features => artificial.d,
            informative => artificial.n_informative,
            clusters => artificial.clusters_per_class,
            flip => artificial.flip_prob,
            rounds => rounds,
            depth => depth,
            loss => loss,
            shrinkage => shrinkage,
            subsample => subsample,
            scaling => scaling,
            bins => bins,
            runs => runs,
            test_fraction => test_fraction,
            seed => seed,
            lmc_tol => lmc_tolerance,
            out => out,
        );
        c.plot |= self.plot;
        Ok(c)
    }
}

/// Parses `args` (including the program name), executes, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::GenData { exp, output } => {
            let cfg = exp.resolve()?;
            let path = output.clone().unwrap_or_else(|| cfg.out.join("artificial.csv"));
            cmd_gen_data(&cfg, &path, out)
        }
        Command::Inspect { exp } => cmd_inspect(&exp.resolve()?, out),
        Command::Run { exp } => cmd_run(&exp.resolve()?, out).map(|_| ()),
        Command::Sweep { exp, axis, values } => {
            let values = values.as_deref().unwrap_or(axis.default_values());
            cmd_sweep(&exp.resolve()?, *axis, values, out)
        }
        Command::Verify { seed, count, out: dir } => cmd_verify(*seed, *count, dir, out),
    }
}

fn create_parent(path: &Path) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    Ok(())
}

pub fn cmd_gen_data(cfg: &ExperimentConfig, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let data = cfg.artificial_spec().generate()?;
    create_parent(path)?;
    let file = fs::File::create(path)?;
    data.write_csv(std::io::BufWriter::new(file))?;
    let (pos, neg) = data.class_counts();
    writeln!(out, "wrote {}", path.display())?;
    writeln!(out, "n = {}", data.n())?;
    writeln!(out, "d = {}", data.d())?;
    writeln!(out, "positives = {pos}")?;
    writeln!(out, "negatives = {neg}")?;
    Ok(())
}

/// The configured dataset with binary labels.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<LabeledDataset, CliError> {
    match &cfg.dataset {
        DataSource::Artificial => Ok(cfg.artificial_spec().generate()?),
        DataSource::Csv(path) => match load_csv(path)? {
            LoadedDataset::Binary(d) => Ok(d),
            LoadedDataset::Multiclass(m) => Ok(binarize_multiclass(&m, cfg.seed)?),
        },
    }
}

pub fn cmd_inspect(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let data = load_dataset(cfg)?;
    let disc = dataset::discretize(&data, &data, cfg.bins)?;
    let constant = vec![0u8; disc.n()];
    let q = info_quantities(&constant, disc.joint_keys(), disc.labels())?;
    let (pos, neg) = data.class_counts();
    writeln!(out, "dataset = {}", cfg.dataset)?;
    writeln!(out, "n = {}", data.n())?;
    writeln!(out, "d = {}", data.d())?;
    writeln!(out, "positives = {pos}")?;
    writeln!(out, "negatives = {neg}")?;
    writeln!(out, "bins = {}", cfg.bins)?;
    writeln!(out, "distinct_keys = {}", disc.distinct_keys())?;
    writeln!(out, "H(X) = {}", q.h_x)?;
    writeln!(out, "H(Y) = {}", q.h_y)?;
    writeln!(out, "I(X;Y) = {}", q.i_xy)?;
    writeln!(
        out,
        "verdict = {}",
        if disc.is_noiseless() { "noiseless" } else { "noisy" }
    )?;
    let (tx, ty) = q.lmc_target()?;
    writeln!(out, "I(X;Y)/H(X) = {tx}")?;
    writeln!(out, "I(X;Y)/H(Y) = {ty}")?;
    writeln!(out, "lmc_target = ({tx}, {ty})")?;
    Ok(())
}

fn round_or_none(r: Option<usize>) -> String {
    r.map(|r| r.to_string()).unwrap_or_else(|| "none".into())
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Structured text summary of a finished experiment.
pub fn summary_text(cfg: &ExperimentConfig, runs: &[RunResult], avg: &AveragedTrajectory) -> String {
    let mut s = String::new();
    s.push_str("[config]\n");
    s.push_str(&cfg.to_text());
    let reached = runs.iter().filter(|r| r.characteristic.lmc_round.is_some()).count();
    let c = &avg.characteristic;
    let last = avg.points.last().expect("non-empty trajectory");
    s.push_str("\n[average]\n");
    s.push_str(&format!("runs = {}\n", avg.runs));
    s.push_str(&format!("noiseless_fraction = {}\n", avg.noiseless_fraction));
    s.push_str(&format!("runs_reaching_lmc = {reached}\n"));
    s.push_str(&format!("lmc_target = {}, {}\n", fmt17(c.lmc_target.0), fmt17(c.lmc_target.1)));
    s.push_str(&format!("train_min_round = {}\n", c.train_min_round));
    s.push_str(&format!("test_min_round = {}\n", c.test_min_round));
    s.push_str(&format!("margin_max_round = {}\n", c.margin_max_round));
    s.push_str(&format!("fx_peak_round = {}\n", c.fx_peak_round));
    s.push_str(&format!("lmc_round = {}\n", round_or_none(c.lmc_round)));
    s.push_str(&format!(
        "final_point = {}, {}\n",
        fmt17(last.i_fx_norm),
        fmt17(last.i_fy_norm)
    ));
    s.push_str(&format!("final_train_error = {}\n", fmt17(last.train_error)));
    s.push_str(&format!("final_test_error = {}\n", fmt17(last.test_error)));
    for r in runs {
        let c = &r.characteristic;
        s.push_str(&format!("\n[run {}]\n", r.run_index));
        s.push_str(&format!("seed = {}\n", r.seed));
        s.push_str(&format!(
            "noiseless_after_discretization = {}\n",
            r.noiseless_after_discretization
        ));
        s.push_str(&format!("lmc_target = {}, {}\n", fmt17(c.lmc_target.0), fmt17(c.lmc_target.1)));
        s.push_str(&format!("train_min_round = {}\n", c.train_min_round));
        s.push_str(&format!("test_min_round = {}\n", c.test_min_round));
        s.push_str(&format!("margin_max_round = {}\n", c.margin_max_round));
        s.push_str(&format!("fx_peak_round = {}\n", c.fx_peak_round));
        s.push_str(&format!("lmc_round = {}\n", round_or_none(c.lmc_round)));
    }
    s
}

fn write_csv_file(path: &Path, run: &str, points: &[trajectory::TrajectoryPoint]) -> Result<(), CliError> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    trajectory::write_trajectory_csv(&mut w, run, points)?;
    w.flush()?;
    Ok(())
}

/// Runs the experiment and writes `trajectory_run_<r>.csv`,
/// `trajectory_avg.csv`, `summary.txt` and, with `plot`, `plane.svg` into
/// `cfg.out`.
pub fn cmd_run(
    cfg: &ExperimentConfig,
    out: &mut dyn Write,
) -> Result<(Vec<RunResult>, AveragedTrajectory), CliError> {
    cfg.validate()?;
    let data = load_dataset(cfg)?;
    let (runs, avg) = trajectory::run_experiment(&data, &cfg.experiment_spec())?;
    fs::create_dir_all(&cfg.out)?;
    for r in &runs {
        write_csv_file(
            &cfg.out.join(format!("trajectory_run_{}.csv", r.run_index)),
            &r.run_index.to_string(),
            &r.trajectory,
        )?;
    }
    write_csv_file(&cfg.out.join("trajectory_avg.csv"), "avg", &avg.points)?;
    fs::write(cfg.out.join("summary.txt"), summary_text(cfg, &runs, &avg))?;
    if cfg.plot {
        let individual: Vec<&[trajectory::TrajectoryPoint]> =
            runs.iter().take(5).map(|r| r.trajectory.as_slice()).collect();
        let title = format!("{} (average of {} runs)", cfg.dataset, avg.runs);
        fs::write(
            cfg.out.join("plane.svg"),
            svg::plane_svg(&title, &avg.points, &avg.characteristic, &individual),
        )?;
    }
    let c = &avg.characteristic;
    writeln!(out, "wrote {}", cfg.out.display())?;
    writeln!(
        out,
        "runs = {}, lmc reached in {} runs",
        avg.runs,
        runs.iter().filter(|r| r.characteristic.lmc_round.is_some()).count()
    )?;
    writeln!(
        out,
        "average: train_min_round = {}, test_min_round = {}, margin_max_round = {}, lmc_round = {}",
        c.train_min_round,
        c.test_min_round,
        c.margin_max_round,
        round_or_none(c.lmc_round)
    )?;
    Ok((runs, avg))
}

/// One configuration per value of `axis`, labeled `<axis>_<value>`.
pub fn sweep_settings(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &str,
) -> Result<Vec<(String, ExperimentConfig)>, CliError> {
    let values: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
    if values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    values
        .into_iter()
        .map(|v| {
            let mut c = base.clone();
            c.set(axis.key(), v)?;
            let label = format!("{}_{v}", axis.key());
            c.out = base.out.join(&label);
            Ok((label, c))
        })
        .collect()
}

pub fn cmd_sweep(base: &ExperimentConfig, axis: SweepAxis, values: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let settings = sweep_settings(base, axis, values)?;
    let mut table = String::from("setting,lmc_round,train_min_round,test_min_round,margin_max_round,final_fx,final_fy,final_test_error\n");
    for (label, cfg) in &settings {
        writeln!(out, "== {label}")?;
        let (_, avg) = cmd_run(cfg, out)?;
        let c = &avg.characteristic;
        let last = avg.points.last().expect("non-empty trajectory");
        table.push_str(&format!(
            "{label},{},{},{},{},{},{},{}\n",
            round_or_none(c.lmc_round),
            c.train_min_round,
            c.test_min_round,
            c.margin_max_round,
            fmt17(last.i_fx_norm),
            fmt17(last.i_fy_norm),
            fmt17(last.test_error)
        ));
    }
    fs::create_dir_all(&base.out)?;
    fs::write(base.out.join(format!("sweep_{}.csv", axis.key())), table)?;
    Ok(())
}

/// Exit code for a set of verification reports.
pub fn verification_exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(|r| r.passed) {
        0
    } else {
        3
    }
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn verification_reports(seed: u64, count: Option<usize>) -> Vec<CheckReport> {
    let big = count.unwrap_or(500);
    let small = count.unwrap_or(200);
    let mut reports = vec![
        verify::lemma1_suite(big, seed),
        verify::lemma2_suite(small, seed),
        verify::lemma3_suite(big, seed),
        verify::theorem1_suite(small, seed),
    ];
    reports.extend(
        crate::infotheory::ModelClassification::all()
            .into_iter()
            .map(verify::check_table1),
    );
    reports
}

pub fn cmd_verify(seed: u64, count: Option<usize>, dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let reports = verification_reports(seed, count);
    fs::create_dir_all(dir)?;
    for r in &reports {
        fs::write(dir.join(format!("verify_{}.txt", slug(&r.name))), r.to_string())?;
        writeln!(
            out,
            "{} {} ({} instances)",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.details.len()
        )?;
    }
    match verification_exit_code(&reports) {
        0 => Ok(()),
        _ => {
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name.as_str()).collect();
            Err(CliError::Verification(failed.join(", ")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Data(String::new()).exit_code(), 2);
        assert_eq!(CliError::Verification(String::new()).exit_code(), 3);
        let bad = CheckReport::new(
            "mutant",
            vec![verify::InstanceRecord {
                instance: 0,
                seed: None,
                left: "a".into(),
                right: "b".into(),
                agree: false,
            }],
        );
        assert_eq!(verification_exit_code(&[bad]), 3);
        assert_eq!(verification_exit_code(&[]), 0);
    }

    #[test]
    fn flags_override_config() {
        let args = ExperimentArgs {
            rounds: Some(5),
            loss: Some(Loss::Deviance),
            lmc_tol: Some(0.2),
            ..Default::default()
        };
        let c = args.resolve().unwrap();
        assert_eq!((c.rounds, c.loss, c.lmc_tolerance, c.depth), (5, Loss::Deviance, 0.2, 6));
    }

    #[test]
    fn empty_sweep_is_an_error() {
        let base = ExperimentConfig::default();
        assert!(matches!(sweep_settings(&base, SweepAxis::Depth, " , "), Err(CliError::Usage(_))));
        let s = sweep_settings(&base, SweepAxis::Loss, "exponential,deviance").unwrap();
        assert_eq!(s[1].1.loss, Loss::Deviance);
        assert_eq!(s[1].1.out, base.out.join("loss_deviance"));
        assert!(sweep_settings(&base, SweepAxis::Depth, "two").is_err());
    }

    #[test]
    fn parse_errors_exit_with_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["lmc", "frobnicate"], &mut out, &mut err), 1);
        assert_eq!(run(["lmc", "run", "--rounds", "x"], &mut out, &mut err), 1);
        assert_eq!(run(["lmc", "--help"], &mut out, &mut err), 0);
    }
}
