//! Per-round information-plane trajectories of a boosting run, the
//! characteristic rounds along them, and averaging across runs.

use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boosting::{self, fit_boosting, BoostConfig, BoostError};
use crate::dataset::{self, discretize, DatasetError, LabeledDataset, SplitSpec};
use crate::infotheory::{info_quantities, InfoError, InfoPlanePoint};

#[derive(Debug, Error)]
pub enum TrajectoryError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Boost(#[from] BoostError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error("trajectory is empty")]
    Empty,
    #[error("no runs to aggregate")]
    NoRuns,
    #[error("runs have different lengths: {0} vs {1}")]
    MismatchedRounds(usize, usize),
    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<TrajectoryError>,
    },
    #[error("trajectory csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, TrajectoryError>;

/// Default tolerance, in normalized plane units, for declaring the LMC point reached.
pub const DEFAULT_LMC_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub round: usize,
    pub i_fx_norm: f64,
    pub i_fy_norm: f64,
    pub train_error: f64,
    pub test_error: f64,
    pub avg_margin: f64,
    pub min_margin: f64,
    pub margin_variance: f64,
}

impl TrajectoryPoint {
    /// Largest per-axis distance to `target` on the normalized plane.
    pub fn distance_to(&self, target: (f64, f64)) -> f64 {
        (self.i_fx_norm - target.0)
            .abs()
            .max((self.i_fy_norm - target.1).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicPoints {
    pub train_min_round: usize,
    pub test_min_round: usize,
    pub margin_max_round: usize,
    /// Earliest round maximizing `I(F;X)/H(X)`: the turning point between
    /// fitting and compression.
    pub fx_peak_round: usize,
    pub lmc_round: Option<usize>,
    /// `(I(X;Y)/H(X), I(X;Y)/H(Y))`.
    pub lmc_target: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_index: usize,
    pub seed: u64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub characteristic: CharacteristicPoints,
    pub noiseless_after_discretization: bool,
    /// Full information quantities per round, aligned with `trajectory`.
    pub plane: Vec<InfoPlanePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AveragedTrajectory {
    pub points: Vec<TrajectoryPoint>,
    pub runs: usize,
    pub characteristic: CharacteristicPoints,
    /// Fraction of runs whose training split stayed noiseless after discretization.
    pub noiseless_fraction: f64,
}

/// Bin of a normalized score on `b` equal-width bins over `[-1, 1]`.
///
/// For even `b` the grid has an edge at 0; negative scores always land
/// strictly below it and non-negative ones at or above it, even when
/// `s + 1` rounds to 1.
pub fn score_bin(s: f64, b: usize) -> u32 {
    let raw = ((s + 1.0) / 2.0 * b as f64).floor().clamp(0.0, (b - 1) as f64) as usize;
    let bin = if b % 2 == 0 {
        let mid = b / 2;
        if s < 0.0 {
            raw.min(mid - 1)
        } else {
            raw.max(mid)
        }
    } else {
        raw
    };
    bin as u32
}

/// Fits one ensemble on `train` and traces it on the information plane,
/// round by round (`0..=cfg.rounds`).
///
/// Information quantities use the training split only, with both features
/// and scores discretized into `bins` bins; errors are reported on both
/// splits and margins on the training split.
pub fn compute_trajectory(
    train: &LabeledDataset,
    test: &LabeledDataset,
    cfg: &BoostConfig,
    bins: usize,
    lmc_tolerance: f64,
) -> Result<RunResult> {
    let disc = discretize(train, train, bins)?;
    let noiseless = disc.is_noiseless();
    let keys = disc.joint_keys();
    let labels = train.labels();

    let ensemble = fit_boosting(train, cfg)?;
    let test_stages = ensemble.stages(test.features())?;
    let train_stages = ensemble.stages(train.features())?;

    let mut trajectory = Vec::with_capacity(cfg.rounds + 1);
    let mut plane = Vec::with_capacity(cfg.rounds + 1);
    let mut target = None;
    for ((t, raw_train), (_, raw_test)) in train_stages.zip(test_stages) {
        let f_train = ensemble.normalize(&raw_train, t);
        let f_test = ensemble.normalize(&raw_test, t);
        let f_bins: Vec<u32> = f_train.iter().map(|&s| score_bin(s, bins)).collect();
        let q = info_quantities(&f_bins, keys, labels)?;
        let point = InfoPlanePoint::from_quantities(q)?;
        if target.is_none() {
            target = Some(q.lmc_target()?);
        }
        let margins = boosting::margin_stats(&f_train, labels);
        trajectory.push(TrajectoryPoint {
            round: t,
            i_fx_norm: point.i_fx_norm,
            i_fy_norm: point.i_fy_norm,
            train_error: boosting::error_rate(&f_train, labels),
            test_error: boosting::error_rate(&f_test, test.labels()),
            avg_margin: margins.average,
            min_margin: margins.minimum,
            margin_variance: margins.variance,
        });
        plane.push(point);
    }
    let lmc_target = target.ok_or(TrajectoryError::Empty)?;
    let characteristic = detect_characteristic_points(&trajectory, lmc_target, lmc_tolerance)?;
    Ok(RunResult {
        run_index: 0,
        seed: cfg.seed,
        trajectory,
        characteristic,
        noiseless_after_discretization: noiseless,
        plane,
    })
}

fn earliest_by(traj: &[TrajectoryPoint], key: impl Fn(&TrajectoryPoint) -> f64, maximize: bool) -> usize {
    let mut best = &traj[0];
    for p in &traj[1..] {
        let better = if maximize {
            key(p) > key(best)
        } else {
            key(p) < key(best)
        };
        if better {
            best = p;
        }
    }
    best.round
}

/// Earliest rounds attaining minimal train/test error, maximal average
/// margin, maximal `I(F;X)/H(X)`, and the first round within
/// `lmc_tolerance` of `lmc_target` on both axes.
pub fn detect_characteristic_points(
    traj: &[TrajectoryPoint],
    lmc_target: (f64, f64),
    lmc_tolerance: f64,
) -> Result<CharacteristicPoints> {
    if traj.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    let lmc_round = traj
        .iter()
        .find(|p| {
            (p.i_fy_norm - lmc_target.1).abs() <= lmc_tolerance
                && (p.i_fx_norm - lmc_target.0).abs() <= lmc_tolerance
        })
        .map(|p| p.round);
    Ok(CharacteristicPoints {
        train_min_round: earliest_by(traj, |p| p.train_error, false),
        test_min_round: earliest_by(traj, |p| p.test_error, false),
        margin_max_round: earliest_by(traj, |p| p.avg_margin, true),
        fx_peak_round: earliest_by(traj, |p| p.i_fx_norm, true),
        lmc_round,
        lmc_target,
    })
}

/// Pointwise mean over runs, summed in ascending `run_index` order.
pub fn average_trajectories(runs: &[RunResult], lmc_tolerance: f64) -> Result<AveragedTrajectory> {
    let mut sorted: Vec<&RunResult> = runs.iter().collect();
    sorted.sort_by_key(|r| r.run_index);
    let first = sorted.first().ok_or(TrajectoryError::NoRuns)?;
    let len = first.trajectory.len();
    if len == 0 {
        return Err(TrajectoryError::Empty);
    }
    for r in &sorted {
        if r.trajectory.len() != len {
            return Err(TrajectoryError::MismatchedRounds(len, r.trajectory.len()));
        }
    }
    let k = sorted.len() as f64;
    let mean = |f: &dyn Fn(&RunResult) -> f64| sorted.iter().map(|r| f(r)).sum::<f64>() / k;

    let points: Vec<TrajectoryPoint> = (0..len)
        .map(|t| TrajectoryPoint {
            round: first.trajectory[t].round,
            i_fx_norm: mean(&|r| r.trajectory[t].i_fx_norm),
            i_fy_norm: mean(&|r| r.trajectory[t].i_fy_norm),
            train_error: mean(&|r| r.trajectory[t].train_error),
            test_error: mean(&|r| r.trajectory[t].test_error),
            avg_margin: mean(&|r| r.trajectory[t].avg_margin),
            min_margin: mean(&|r| r.trajectory[t].min_margin),
            margin_variance: mean(&|r| r.trajectory[t].margin_variance),
        })
        .collect();
    let target = (
        mean(&|r| r.characteristic.lmc_target.0),
        mean(&|r| r.characteristic.lmc_target.1),
    );
    let characteristic = detect_characteristic_points(&points, target, lmc_tolerance)?;
    Ok(AveragedTrajectory {
        points,
        runs: sorted.len(),
        characteristic,
        noiseless_fraction: mean(&|r| if r.noiseless_after_discretization { 1.0 } else { 0.0 }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSpec {
    pub boost: BoostConfig,
    pub bins: usize,
    pub runs: usize,
    pub split: SplitSpec,
    pub lmc_tolerance: f64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            boost: BoostConfig::default(),
            bins: 100,
            runs: 100,
            split: SplitSpec::default(),
            lmc_tolerance: DEFAULT_LMC_TOLERANCE,
        }
    }
}

/// One run: seeded split, fit, and trajectory. Run `r` uses seed
/// `split.seed + r` for both the split and the boosting subsampler.
pub fn run_single(data: &LabeledDataset, spec: &ExperimentSpec, run: usize) -> Result<RunResult> {
    let seed = spec.split.seed.wrapping_add(run as u64);
    let tag = |e: TrajectoryError| TrajectoryError::Run {
        run,
        source: Box::new(e),
    };
    let (train, test) = dataset::split(
        data,
        SplitSpec {
            test_fraction: spec.split.test_fraction,
            seed,
        },
    )
    .map_err(|e| tag(e.into()))?;
    let cfg = BoostConfig { seed, ..spec.boost };
    let mut result =
        compute_trajectory(&train, &test, &cfg, spec.bins, spec.lmc_tolerance).map_err(tag)?;
    result.run_index = run;
    result.seed = seed;
    Ok(result)
}

/// Runs `spec.runs` independent splits (in parallel) and averages them.
pub fn run_experiment(
    data: &LabeledDataset,
    spec: &ExperimentSpec,
) -> Result<(Vec<RunResult>, AveragedTrajectory)> {
    if spec.runs == 0 {
        return Err(TrajectoryError::NoRuns);
    }
    let runs: Vec<RunResult> = (0..spec.runs)
        .into_par_iter()
        .map(|r| run_single(data, spec, r))
        .collect::<Result<_>>()?;
    let avg = average_trajectories(&runs, spec.lmc_tolerance)?;
    Ok((runs, avg))
}

pub const CSV_HEADER: &str =
    "run,round,i_fx_norm,i_fy_norm,train_err,test_err,avg_margin,min_margin,margin_var";

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes trajectory rows with 17 significant digits. `run` is the value of
/// the first column (a run index, or e.g. `avg`).
pub fn write_trajectory_csv<W: Write>(mut w: W, run: &str, points: &[TrajectoryPoint]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            w,
            "{run},{},{},{},{},{},{},{},{}",
            p.round,
            fmt17(p.i_fx_norm),
            fmt17(p.i_fy_norm),
            fmt17(p.train_error),
            fmt17(p.test_error),
            fmt17(p.avg_margin),
            fmt17(p.min_margin),
            fmt17(p.margin_variance),
        )?;
    }
    Ok(())
}

/// Parses a file written by [`write_trajectory_csv`].
pub fn read_trajectory_csv<R: BufRead>(r: R) -> Result<Vec<(String, TrajectoryPoint)>> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| TrajectoryError::Csv("missing header".into()))?
        .map_err(|e| TrajectoryError::Csv(e.to_string()))?;
    if header.trim() != CSV_HEADER {
        return Err(TrajectoryError::Csv(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| TrajectoryError::Csv(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 9 {
            return Err(TrajectoryError::Csv(format!("line {}: expected 9 cells", i + 2)));
        }
        let num = |k: usize| -> Result<f64> {
            cells[k]
                .parse()
                .map_err(|_| TrajectoryError::Csv(format!("line {}: bad number {:?}", i + 2, cells[k])))
        };
        let round = cells[1]
            .parse()
            .map_err(|_| TrajectoryError::Csv(format!("line {}: bad round", i + 2)))?;
        out.push((
            cells[0].to_string(),
            TrajectoryPoint {
                round,
                i_fx_norm: num(2)?,
                i_fy_norm: num(3)?,
                train_error: num(4)?,
                test_error: num(5)?,
                avg_margin: num(6)?,
                min_margin: num(7)?,
                margin_variance: num(8)?,
            },
        ));
    }
    Ok(out)
}
