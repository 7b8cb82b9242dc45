//! Stagewise gradient boosting of regression trees for `{-1, +1}` labels.
//!
//! Each round fits a least-squares tree to the loss's pseudo-residuals and
//! then replaces every leaf value by a single Newton step computed over the
//! full training set. Scores are kept as raw additive sums and exposed in
//! `[-1, 1]` by dividing by the training max-abs raw score of that round.

pub mod tree;

use std::path::Path;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::LabeledDataset;
use crate::matrix::Matrix;
pub use tree::{fit_tree, fit_tree_on, Node, RegressionTree, TreeError};

#[derive(Debug, Error)]
pub enum BoostError {
    #[error("invalid boosting config: {0}")]
    InvalidConfig(String),
    #[error("round {t} out of range: ensemble has {rounds} trees")]
    RoundOutOfRange { t: usize, rounds: usize },
    #[error("expected {expected} features, got {found}")]
    FeatureMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("ensemble file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, BoostError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    /// `exp(-y F)`
    Exponential,
    /// Binomial deviance `log(1 + exp(-2 y F))`.
    Deviance,
}

impl Loss {
    /// Negative gradient of the loss with respect to the raw score.
    pub fn pseudo_residual(self, y: f64, f: f64) -> f64 {
        match self {
            Loss::Exponential => y * (-y * f).exp(),
            Loss::Deviance => 2.0 * y / (1.0 + (2.0 * y * f).exp()),
        }
    }

    pub fn value(self, y: f64, f: f64) -> f64 {
        match self {
            Loss::Exponential => (-y * f).exp(),
            Loss::Deviance => (-2.0 * y * f).exp().ln_1p(),
        }
    }

    /// Newton step `sum(g) / sum(h)` for one leaf, given
    /// `(label, raw score)` pairs of the training rows that reach it.
    pub fn newton_step<I: IntoIterator<Item = (f64, f64)>>(self, rows: I) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (y, f) in rows {
            let r = self.pseudo_residual(y, f);
            num += r;
            den += match self {
                Loss::Exponential => (-y * f).exp(),
                Loss::Deviance => r.abs() * (2.0 - r.abs()),
            };
        }
        match self {
            Loss::Exponential if den <= 0.0 => 0.0,
            Loss::Exponential => num / den,
            Loss::Deviance => num / den.max(1e-12),
        }
    }
}

impl FromStr for Loss {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Ok(Loss::Exponential),
            "deviance" | "binomial_deviance" => Ok(Loss::Deviance),
            other => Err(format!("unknown loss {other:?} (expected exponential or deviance)")),
        }
    }
}

impl std::fmt::Display for Loss {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Loss::Exponential => "exponential",
            Loss::Deviance => "deviance",
        })
    }
}

/// How unbounded raw scores are mapped into `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreScaling {
    /// `tanh(F)`, i.e. `2p - 1` for the class-probability estimate implied
    /// by either loss (raw scores are half log-odds).
    #[default]
    Tanh,
    /// `F / M_t` with `M_t` the training max-abs raw score at round `t`,
    /// clamped on unseen data.
    MaxAbs,
}

impl FromStr for ScoreScaling {
    type Err = BoostError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tanh" => Ok(ScoreScaling::Tanh),
            "max_abs" | "maxabs" | "max-abs" => Ok(ScoreScaling::MaxAbs),
            other => Err(BoostError::InvalidConfig(format!("unknown score scaling {other:?}"))),
        }
    }
}

impl fmt::Display for ScoreScaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreScaling::Tanh => "tanh",
            ScoreScaling::MaxAbs => "max_abs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    pub rounds: usize,
    pub max_depth: usize,
    pub loss: Loss,
    pub shrinkage: f64,
    pub subsample: f64,
    pub seed: u64,
    #[serde(default)]
    pub scaling: ScoreScaling,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            rounds: 100,
            max_depth: 6,
            loss: Loss::Exponential,
            shrinkage: 1.0,
            subsample: 1.0,
            seed: 0,
            scaling: ScoreScaling::default(),
        }
    }
}

impl BoostConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.shrinkage > 0.0 && self.shrinkage <= 1.0) {
            return Err(BoostError::InvalidConfig(format!(
                "shrinkage must lie in (0, 1], got {}",
                self.shrinkage
            )));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(BoostError::InvalidConfig(format!(
                "subsample must lie in (0, 1], got {}",
                self.subsample
            )));
        }
        Ok(())
    }

    fn subsample_size(&self, n: usize) -> usize {
        let exact = self.subsample * n as f64;
        ((exact - 1e-9 * n as f64).ceil() as usize).clamp(1, n)
    }
}

/// Staged additive tree model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostingEnsemble {
    config: BoostConfig,
    n_features: usize,
    init_score: f64,
    trees: Vec<RegressionTree>,
    /// Training max-abs raw score after each round, index 0 being the
    /// initial constant model.
    max_abs: Vec<f64>,
}

/// Clamped half log-odds of the positive class.
pub fn initial_score(labels: &[i8]) -> f64 {
    let n = labels.len() as f64;
    let pos = labels.iter().filter(|&&y| y > 0).count() as f64 / n;
    let lo = 1.0 / (2.0 * n);
    let p = pos.clamp(lo, 1.0 - lo);
    0.5 * (p / (1.0 - p)).ln()
}

fn max_abs(raw: &[f64]) -> f64 {
    let m = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Fits `cfg.rounds` trees to `train`.
pub fn fit_boosting(train: &LabeledDataset, cfg: &BoostConfig) -> Result<BoostingEnsemble> {
    cfg.validate()?;
    let x = train.features();
    let n = train.n();
    let y: Vec<f64> = train.labels().iter().map(|&v| v as f64).collect();
    let init = initial_score(train.labels());
    let mut raw = vec![init; n];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample_size = cfg.subsample_size(n);
    let all_rows: Vec<usize> = (0..n).collect();

    let mut trees = Vec::with_capacity(cfg.rounds);
    let mut maxima = Vec::with_capacity(cfg.rounds + 1);
    maxima.push(max_abs(&raw));

    for _ in 0..cfg.rounds {
        let residuals: Vec<f64> = y
            .iter()
            .zip(&raw)
            .map(|(&yi, &fi)| cfg.loss.pseudo_residual(yi, fi))
            .collect();
        let rows = if sample_size < n {
            let mut s = rand::seq::index::sample(&mut rng, n, sample_size).into_vec();
            s.sort_unstable();
            s
        } else {
            all_rows.clone()
        };
        let mut tree = fit_tree_on(x, &residuals, &rows, cfg.max_depth)?;

        // Newton leaf values over the full training set.
        let leaves: Vec<usize> = x.iter_rows().map(|r| tree.leaf_index(r)).collect();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); tree.nodes().len()];
        for (i, &leaf) in leaves.iter().enumerate() {
            members[leaf].push(i);
        }
        for (leaf, rows) in members.iter().enumerate() {
            if let Node::Leaf { .. } = tree.nodes()[leaf] {
                let step = cfg.loss.newton_step(rows.iter().map(|&i| (y[i], raw[i])));
                tree.set_leaf_value(leaf, step);
            }
        }

        for (f, row) in raw.iter_mut().zip(x.iter_rows()) {
            *f += cfg.shrinkage * tree.predict(row);
        }
        maxima.push(max_abs(&raw));
        trees.push(tree);
    }

    Ok(BoostingEnsemble {
        config: *cfg,
        n_features: train.d(),
        init_score: init,
        trees,
        max_abs: maxima,
    })
}

const FORMAT_NAME: &str = "lmc-boosting-ensemble";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct EnsembleFile {
    format: String,
    version: u32,
    ensemble: BoostingEnsemble,
}

impl BoostingEnsemble {
    pub fn config(&self) -> &BoostConfig {
        &self.config
    }

    pub fn init_score(&self) -> f64 {
        self.init_score
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }

    pub fn rounds(&self) -> usize {
        self.trees.len()
    }

    /// Training max-abs raw score `M_t` for `t = 0..=rounds`.
    pub fn max_abs_scores(&self) -> &[f64] {
        &self.max_abs
    }

    fn check(&self, features: &Matrix, t: usize) -> Result<()> {
        if t > self.trees.len() {
            return Err(BoostError::RoundOutOfRange {
                t,
                rounds: self.trees.len(),
            });
        }
        if features.cols() != self.n_features {
            return Err(BoostError::FeatureMismatch {
                expected: self.n_features,
                found: features.cols(),
            });
        }
        Ok(())
    }

    /// Raw scores after `t` rounds.
    pub fn staged_raw(&self, features: &Matrix, t: usize) -> Result<Vec<f64>> {
        self.check(features, t)?;
        Ok(features
            .iter_rows()
            .map(|row| {
                let mut f = self.init_score;
                for tree in &self.trees[..t] {
                    f += self.config.shrinkage * tree.predict(row);
                }
                f
            })
            .collect())
    }

    /// Maps raw round-`t` scores into `[-1, 1]`.
    pub fn normalize(&self, raw: &[f64], t: usize) -> Vec<f64> {
        match self.config.scaling {
            ScoreScaling::Tanh => raw.iter().map(|&f| f.tanh()).collect(),
            ScoreScaling::MaxAbs => {
                let m = self.max_abs[t];
                raw.iter().map(|&f| (f / m).clamp(-1.0, 1.0)).collect()
            }
        }
    }

    /// `(raw, normalized)` scores after `t` rounds.
    pub fn staged_scores(&self, data: &LabeledDataset, t: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let raw = self.staged_raw(data.features(), t)?;
        let norm = self.normalize(&raw, t);
        Ok((raw, norm))
    }

    /// Raw scores for every round `0..=rounds`, computed incrementally.
    pub fn stages<'a>(&'a self, features: &'a Matrix) -> Result<Stages<'a>> {
        self.check(features, 0)?;
        Ok(Stages {
            ensemble: self,
            features,
            raw: None,
            next: 0,
        })
    }

    pub fn to_writer<W: std::io::Write>(&self, w: W) -> Result<()> {
        let file = EnsembleFile {
            format: FORMAT_NAME.to_string(),
            version: FORMAT_VERSION,
            ensemble: self.clone(),
        };
        serde_json::to_writer_pretty(w, &file).map_err(|e| BoostError::Format(e.to_string()))
    }

    pub fn from_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let file: EnsembleFile =
            serde_json::from_reader(r).map_err(|e| BoostError::Format(e.to_string()))?;
        if file.format != FORMAT_NAME {
            return Err(BoostError::Format(format!("unexpected format {:?}", file.format)));
        }
        if file.version != FORMAT_VERSION {
            return Err(BoostError::Format(format!("unsupported version {}", file.version)));
        }
        Ok(file.ensemble)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.to_writer(f)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// Iterator over `(t, raw scores)` for `t = 0..=rounds`.
pub struct Stages<'a> {
    ensemble: &'a BoostingEnsemble,
    features: &'a Matrix,
    raw: Option<Vec<f64>>,
    next: usize,
}

impl Iterator for Stages<'_> {
    type Item = (usize, Vec<f64>);

    fn next(&mut self) -> Option<Self::Item> {
        let t = self.next;
        if t > self.ensemble.trees.len() {
            return None;
        }
        let raw = match self.raw.take() {
            None => vec![self.ensemble.init_score; self.features.rows()],
            Some(mut raw) => {
                let tree = &self.ensemble.trees[t - 1];
                let lr = self.ensemble.config.shrinkage;
                for (f, row) in raw.iter_mut().zip(self.features.iter_rows()) {
                    *f += lr * tree.predict(row);
                }
                raw
            }
        };
        self.raw = Some(raw.clone());
        self.next += 1;
        Some((t, raw))
    }
}

/// Decision rule with `sign(0) = +1`.
pub fn predict_label(score: f64) -> i8 {
    if score >= 0.0 {
        1
    } else {
        -1
    }
}

/// Fraction of rows whose predicted sign differs from the label.
pub fn error_rate(scores: &[f64], labels: &[i8]) -> f64 {
    assert_eq!(scores.len(), labels.len(), "scores and labels differ in length");
    let wrong = scores
        .iter()
        .zip(labels)
        .filter(|(&s, &y)| predict_label(s) != y)
        .count();
    wrong as f64 / labels.len() as f64
}

/// Functional margins `y_i f(x_i)` and their summary statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginStats {
    pub margins: Vec<f64>,
    pub average: f64,
    pub minimum: f64,
    /// Population variance.
    pub variance: f64,
}

pub fn margin_stats(scores: &[f64], labels: &[i8]) -> MarginStats {
    assert_eq!(scores.len(), labels.len(), "scores and labels differ in length");
    let margins: Vec<f64> = scores
        .iter()
        .zip(labels)
        .map(|(&s, &y)| y as f64 * s)
        .collect();
    let n = margins.len() as f64;
    let average = margins.iter().sum::<f64>() / n;
    let minimum = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let variance = margins.iter().map(|m| (m - average).powi(2)).sum::<f64>() / n;
    MarginStats {
        margins,
        average,
        minimum,
        variance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> LabeledDataset {
        let rows: Vec<[f64; 2]> = (0..12)
            .map(|i| [(i % 4) as f64, (i / 4) as f64 + 0.1 * i as f64])
            .collect();
        let labels = (0..12).map(|i| if (i % 4) % 3 == 0 { 1 } else { -1 }).collect();
        LabeledDataset::from_rows(&rows, labels).unwrap()
    }

    #[test]
    fn balanced_labels_start_at_zero() {
        assert_eq!(initial_score(&[1, -1, 1, -1]), 0.0);
        let all_pos = initial_score(&[1, 1]);
        assert!(all_pos.is_finite() && all_pos > 0.0);
        assert_eq!(all_pos, 0.5 * 3f64.ln());
    }

    #[test]
    fn exponential_newton_steps() {
        let pure = Loss::Exponential.newton_step([(1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(pure, 1.0);
        let mixed = Loss::Exponential.newton_step([(1.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]);
        assert!((mixed - 1.0 / 3.0).abs() < 1e-15);
        // the exact minimizer of 2e^{-g} + e^{g} is ln(2)/2; one Newton step
        // undershoots it but still decreases the loss
        let loss = |g: f64| 2.0 * (-g).exp() + g.exp();
        let argmin = golden_section(loss, 0.0, 1.0);
        assert!((argmin - 0.5 * 2f64.ln()).abs() < 1e-6);
        assert!((mixed - argmin).abs() > 1e-3);
        assert!(loss(mixed) < loss(0.0));
    }

    fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        let r = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let c = b - r * (b - a);
            let d = a + r * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        (a + b) / 2.0
    }

    #[test]
    fn deviance_step_floors_denominator() {
        let g = Loss::Deviance.newton_step([(1.0, 1e6)]);
        assert!(g.is_finite());
        let g = Loss::Deviance.newton_step([(1.0, 0.0), (1.0, 0.0)]);
        // r = 1, h = 1 per row
        assert_eq!(g, 1.0);
    }

    #[test]
    fn staged_additivity_and_normalization() {
        let d = toy();
        let cfg = BoostConfig {
            rounds: 8,
            max_depth: 2,
            scaling: ScoreScaling::MaxAbs,
            ..Default::default()
        };
        let e = fit_boosting(&d, &cfg).unwrap();
        let (raw0, _) = e.staged_scores(&d, 0).unwrap();
        assert!(raw0.iter().all(|&f| f == e.init_score()));
        let mut prev = raw0;
        for (t, raw) in e.stages(d.features()).unwrap() {
            assert_eq!(raw, e.staged_raw(d.features(), t).unwrap());
            if t > 0 {
                for ((r, p), row) in raw.iter().zip(&prev).zip(d.features().iter_rows()) {
                    assert_eq!(*r, p + cfg.shrinkage * e.trees()[t - 1].predict(row));
                }
            }
            let norm = e.normalize(&raw, t);
            assert!(norm.iter().all(|v| (-1.0..=1.0).contains(v)));
            for (&n, &r) in norm.iter().zip(&raw) {
                if r != 0.0 {
                    assert_eq!(n.signum(), r.signum());
                }
                // training rows are never clamped
                assert_eq!(n, r / e.max_abs_scores()[t]);
            }
            assert_eq!(norm.iter().fold(0.0f64, |m, v| m.max(v.abs())), if raw.iter().any(|&r| r != 0.0) { 1.0 } else { 0.0 });
            prev = raw;
        }
        assert!(matches!(
            e.staged_scores(&d, 9),
            Err(BoostError::RoundOutOfRange { t: 9, rounds: 8 })
        ));
    }

    #[test]
    fn unseen_rows_are_clamped() {
        let d = toy();
        let cfg = BoostConfig {
            rounds: 3,
            max_depth: 1,
            scaling: ScoreScaling::MaxAbs,
            ..Default::default()
        };
        let e = fit_boosting(&d, &cfg).unwrap();
        let m = e.max_abs_scores()[3];
        assert_eq!(e.normalize(&[2.0 * m, -2.0 * m, m], 3), vec![1.0, -1.0, 1.0]);
    }

    #[test]
    fn tanh_scaling_saturates() {
        let d = toy();
        let e = fit_boosting(&d, &BoostConfig { rounds: 2, max_depth: 1, ..Default::default() }).unwrap();
        assert_eq!(e.config().scaling, ScoreScaling::Tanh);
        assert_eq!(e.normalize(&[0.0, -0.5, 40.0, -40.0], 2), vec![0.0, (-0.5f64).tanh(), 1.0, -1.0]);
        assert_eq!("max-abs".parse::<ScoreScaling>().unwrap(), ScoreScaling::MaxAbs);
        assert!("sigmoid".parse::<ScoreScaling>().is_err());
    }

    #[test]
    fn deterministic_with_subsampling() {
        let d = toy();
        let cfg = BoostConfig {
            rounds: 5,
            max_depth: 3,
            subsample: 0.8,
            seed: 42,
            ..Default::default()
        };
        assert_eq!(fit_boosting(&d, &cfg).unwrap(), fit_boosting(&d, &cfg).unwrap());
    }

    #[test]
    fn rejects_bad_config() {
        let d = toy();
        for cfg in [
            BoostConfig { shrinkage: 0.0, ..Default::default() },
            BoostConfig { subsample: 1.5, ..Default::default() },
        ] {
            assert!(matches!(fit_boosting(&d, &cfg), Err(BoostError::InvalidConfig(_))));
        }
    }

    #[test]
    fn margin_and_error_examples() {
        assert_eq!(margin_stats(&[1.0], &[1]).margins, vec![1.0]);
        assert_eq!(margin_stats(&[0.5], &[-1]).margins, vec![-0.5]);
        let perfect = margin_stats(&[1.0, -1.0, 1.0], &[1, -1, 1]);
        assert_eq!((perfect.average, perfect.minimum, perfect.variance), (1.0, 1.0, 0.0));

        assert_eq!(error_rate(&[1.0, -1.0], &[1, -1]), 0.0);
        assert_eq!(error_rate(&[1.0, -1.0], &[-1, 1]), 1.0);
        assert_eq!(error_rate(&[0.0, 0.5], &[-1, 1]), 0.5);
    }

    #[test]
    fn loss_parsing() {
        assert_eq!("exponential".parse::<Loss>().unwrap(), Loss::Exponential);
        assert_eq!("Deviance".parse::<Loss>().unwrap(), Loss::Deviance);
        assert!("hinge".parse::<Loss>().is_err());
    }
}
