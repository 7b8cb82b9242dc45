//! Experiment configuration: defaults, flat `key = value` files, and
//! command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::boosting::{BoostConfig, Loss, ScoreScaling};
use crate::dataset::{ArtificialSpec, SplitSpec};
use crate::trajectory::{ExperimentSpec, DEFAULT_LMC_TOLERANCE};

use super::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    Artificial,
    Csv(PathBuf),
}

impl From<&str> for DataSource {
    fn from(s: &str) -> Self {
        if s == "artificial" {
            DataSource::Artificial
        } else {
            DataSource::Csv(PathBuf::from(s))
        }
    }
}

impl fmt::Display for DataSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSource::Artificial => f.write_str("artificial"),
            DataSource::Csv(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: DataSource,
    /// Used when `dataset` is artificial; its seed follows `seed`.
    pub artificial: ArtificialSpec,
    pub rounds: usize,
    pub depth: usize,
    pub loss: Loss,
    pub shrinkage: f64,
    pub subsample: f64,
    pub scaling: ScoreScaling,
    pub bins: usize,
    pub runs: usize,
    pub test_fraction: f64,
    pub seed: u64,
    pub lmc_tolerance: f64,
    pub out: PathBuf,
    pub plot: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let boost = BoostConfig::default();
        ExperimentConfig {
            dataset: DataSource::Artificial,
            artificial: ArtificialSpec::default(),
            rounds: boost.rounds,
            depth: boost.max_depth,
            loss: boost.loss,
            shrinkage: boost.shrinkage,
            subsample: boost.subsample,
            scaling: boost.scaling,
            bins: 100,
            runs: 100,
            test_fraction: 0.5,
            seed: 0,
            lmc_tolerance: DEFAULT_LMC_TOLERANCE,
            out: PathBuf::from("lmc_out"),
            plot: false,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(CliError::Usage(format!("invalid value {value:?} for {key}"))),
    }
}

impl ExperimentConfig {
    /// Sets one option by name. Dashes and underscores in `key` are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let k = key.as_str();
        match k {
            "dataset" => self.dataset = DataSource::from(value),
            "n" => self.artificial.n = parse(k, value)?,
            "features" | "d" => self.artificial.d = parse(k, value)?,
            "informative" => self.artificial.n_informative = parse(k, value)?,
            "clusters" => self.artificial.clusters_per_class = parse(k, value)?,
            "flip" => self.artificial.flip_prob = parse(k, value)?,
            "rounds" => self.rounds = parse(k, value)?,
            "depth" => self.depth = parse(k, value)?,
            "loss" => self.loss = parse(k, value)?,
            "shrinkage" => self.shrinkage = parse(k, value)?,
            "subsample" => self.subsample = parse(k, value)?,
            "scaling" => self.scaling = parse(k, value)?,
            "bins" => self.bins = parse(k, value)?,
            "runs" => self.runs = parse(k, value)?,
            "test_fraction" => self.test_fraction = parse(k, value)?,
            "seed" => self.seed = parse(k, value)?,
            "lmc_tol" | "lmc_tolerance" => self.lmc_tolerance = parse(k, value)?,
            "out" => self.out = PathBuf::from(value),
            "plot" => self.plot = parse_bool(k, value)?,
            _ => return Err(CliError::Usage(format!("unknown configuration key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat configuration text: one `key = value` per line, `#`
    /// starts a comment, blank lines are ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            self.set(key, value)
                .map_err(|e| CliError::Usage(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn artificial_spec(&self) -> ArtificialSpec {
        ArtificialSpec {
            seed: self.seed,
            ..self.artificial.clone()
        }
    }

    pub fn boost_config(&self) -> BoostConfig {
        BoostConfig {
            rounds: self.rounds,
            max_depth: self.depth,
            loss: self.loss,
            shrinkage: self.shrinkage,
            subsample: self.subsample,
            seed: self.seed,
            scaling: self.scaling,
        }
    }

    pub fn experiment_spec(&self) -> ExperimentSpec {
        ExperimentSpec {
            boost: self.boost_config(),
            bins: self.bins,
            runs: self.runs,
            split: SplitSpec {
                test_fraction: self.test_fraction,
                seed: self.seed,
            },
            lmc_tolerance: self.lmc_tolerance,
        }
    }

    /// Usage-level checks that do not need the data.
    pub fn validate(&self) -> Result<(), CliError> {
        self.boost_config()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if self.bins == 0 {
            return Err(CliError::Usage("bins must be positive".into()));
        }
        if self.runs == 0 {
            return Err(CliError::Usage("runs must be positive".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(CliError::Usage("test fraction must lie in (0, 1)".into()));
        }
        if !(self.lmc_tolerance >= 0.0) {
            return Err(CliError::Usage("lmc tolerance must be non-negative".into()));
        }
        Ok(())
    }

    /// The configuration as `key = value` lines, re-readable by [`ExperimentConfig::apply_text`].
    pub fn to_text(&self) -> String {
        let a = &self.artificial;
        format!(
            "dataset = {}\nn = {}\nfeatures = {}\ninformative = {}\nclusters = {}\nflip = {}\n\
             rounds = {}\ndepth = {}\nloss = {}\nshrinkage = {}\nsubsample = {}\nscaling = {}\n\
             bins = {}\nruns = {}\ntest_fraction = {}\nseed = {}\nlmc_tolerance = {}\n",
            self.dataset,
            a.n,
            a.d,
            a.n_informative,
            a.clusters_per_class,
            a.flip_prob,
            self.rounds,
            self.depth,
            self.loss,
            self.shrinkage,
            self.subsample,
            self.scaling,
            self.bins,
            self.runs,
            self.test_fraction,
            self.seed,
            self.lmc_tolerance,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_protocol() {
        let c = ExperimentConfig::default();
        assert_eq!((c.rounds, c.depth, c.loss), (100, 6, Loss::Exponential));
        assert_eq!((c.shrinkage, c.subsample), (1.0, 1.0));
        assert_eq!((c.bins, c.runs, c.test_fraction, c.lmc_tolerance), (100, 100, 0.5, 0.01));
    }

    #[test]
    fn text_round_trip() {
        let mut c = ExperimentConfig::default();
        c.apply_text("# comment\nrounds = 7\nloss=deviance\ntest-fraction = 0.25 # trailing\n\nlmc_tol=0.05\n")
            .unwrap();
        assert_eq!((c.rounds, c.loss, c.test_fraction, c.lmc_tolerance), (7, Loss::Deviance, 0.25, 0.05));
        let mut back = ExperimentConfig::default();
        back.apply_text(&c.to_text()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn bad_lines_are_usage_errors() {
        let mut c = ExperimentConfig::default();
        assert!(matches!(c.apply_text("rounds"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_text("colour = red"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_text("rounds = many"), Err(CliError::Usage(_))));
    }
}
