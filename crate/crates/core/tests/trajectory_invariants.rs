use std::collections::HashMap;
use std::sync::OnceLock;

use lmc_core::boosting::{fit_boosting, BoostConfig, Loss};
use lmc_core::dataset::{discretize, generate_artificial, split, DiscretizedDataset, LabeledDataset, SplitSpec};
use lmc_core::trajectory::{
    compute_trajectory, read_trajectory_csv, run_experiment, score_bin, write_trajectory_csv, ExperimentSpec,
    RunResult,
};
use lmc_core::verify::check_lemma2;

/// Plug-in `(H(F), I(F;Y), I(F;X))` by direct summation with natural logs,
/// converted to bits at the end.
fn brute_force(f: &[u32], x: &[u32], y: &[i8]) -> (f64, f64, f64) {
    let n = f.len() as f64;
    fn count<K: std::hash::Hash + Eq>(it: impl Iterator<Item = K>) -> HashMap<K, f64> {
        let mut m = HashMap::new();
        for k in it {
            *m.entry(k).or_insert(0.0) += 1.0;
        }
        m
    }
    let pf = count(f.iter());
    let px = count(x.iter());
    let py = count(y.iter());
    let pfy = count(f.iter().zip(y));
    let pfx = count(f.iter().zip(x));
    let h_f: f64 = pf.values().map(|&c| -(c / n) * (c / n).ln()).sum();
    let i_fy: f64 = pfy
        .iter()
        .map(|((fv, yv), &c)| (c / n) * ((c / n) / ((pf[fv] / n) * (py[yv] / n))).ln())
        .sum();
    let i_fx: f64 = pfx
        .iter()
        .map(|((fv, xv), &c)| (c / n) * ((c / n) / ((pf[fv] / n) * (px[xv] / n))).ln())
        .sum();
    let bits = std::f64::consts::LN_2;
    (h_f / bits, i_fy / bits, i_fx / bits)
}

fn tiny() -> LabeledDataset {
    // label = (x0 >= 2) xor (x1 >= 1)
    let rows = [[0.0, 0.0], [1.0, 1.0], [2.0, 0.0], [3.0, 1.0], [0.5, 1.0], [1.5, 0.0], [2.5, 1.0], [3.5, 0.0]];
    let labels = rows
        .iter()
        .map(|r| if (r[0] >= 2.0) != (r[1] >= 1.0) { 1 } else { -1 })
        .collect();
    LabeledDataset::from_rows(&rows, labels).unwrap()
}

fn score_bins_at(train: &LabeledDataset, cfg: &BoostConfig, t: usize, b: usize) -> Vec<u32> {
    let e = fit_boosting(train, cfg).unwrap();
    let (_, norm) = e.staged_scores(train, t).unwrap();
    norm.iter().map(|&s| score_bin(s, b)).collect()
}

#[test]
fn tiny_fixture_matches_brute_force_and_ends_at_lmc() {
    let d = tiny();
    let cfg = BoostConfig {
        rounds: 20,
        max_depth: 2,
        ..Default::default()
    };
    let r = compute_trajectory(&d, &d, &cfg, 100, 0.01).unwrap();
    assert_eq!(r.trajectory.len(), 21);
    let disc = discretize(&d, &d, 100).unwrap();
    for (p, plane) in r.trajectory.iter().zip(&r.plane) {
        let f = score_bins_at(&d, &cfg, p.round, 100);
        let (h_f, i_fy, i_fx) = brute_force(&f, disc.joint_keys(), d.labels());
        let q = plane.quantities;
        assert!((q.h_f - h_f).abs() < 1e-10, "round {}", p.round);
        assert!((q.i_fy - i_fy).abs() < 1e-10, "round {}", p.round);
        assert!((q.i_fx - i_fx).abs() < 1e-10, "round {}", p.round);
    }
    assert!(r.plane.last().unwrap().quantities.lmc_gap() <= 1e-9);
    assert!(r.noiseless_after_discretization);
    assert_eq!(r.characteristic.lmc_target.1, 1.0);
}

#[test]
fn zero_rounds_give_the_origin() {
    let d = tiny();
    let cfg = BoostConfig {
        rounds: 0,
        ..Default::default()
    };
    let r = compute_trajectory(&d, &d, &cfg, 100, 0.01).unwrap();
    assert_eq!(r.trajectory.len(), 1);
    assert_eq!((r.trajectory[0].i_fx_norm, r.trajectory[0].i_fy_norm), (0.0, 0.0));
}

fn fixture_runs(flip: f64, loss: Loss) -> (LabeledDataset, ExperimentSpec, Vec<RunResult>) {
    let data = generate_artificial(400, 6, 2, 2, flip, 3).unwrap();
    let spec = ExperimentSpec {
        boost: BoostConfig {
            rounds: 40,
            max_depth: 4,
            loss,
            ..Default::default()
        },
        bins: 100,
        runs: 3,
        split: SplitSpec {
            test_fraction: 0.5,
            seed: 5,
        },
        lmc_tolerance: 0.01,
    };
    let (runs, _) = run_experiment(&data, &spec).unwrap();
    (data, spec, runs)
}

fn train_split(data: &LabeledDataset, spec: &ExperimentSpec, r: &RunResult) -> LabeledDataset {
    split(
        data,
        SplitSpec {
            test_fraction: spec.split.test_fraction,
            seed: r.seed,
        },
    )
    .unwrap()
    .0
}

#[test]
fn per_round_invariants() {
    for (flip, loss) in [(0.0, Loss::Exponential), (0.0, Loss::Deviance), (0.1, Loss::Exponential)] {
        let (data, spec, runs) = fixture_runs(flip, loss);
        for r in &runs {
            assert_eq!(r.trajectory.len(), spec.boost.rounds + 1);
            assert!(r.trajectory.windows(2).all(|w| w[1].round == w[0].round + 1));
            let train = train_split(&data, &spec, r);
            let disc: DiscretizedDataset = discretize(&train, &train, spec.bins).unwrap();
            let cfg = BoostConfig { seed: r.seed, ..spec.boost };
            for (p, plane) in r.trajectory.iter().zip(&r.plane) {
                let q = plane.quantities;
                assert!((p.i_fx_norm * q.h_x - q.h_f).abs() <= 1e-12);
                for v in [p.i_fx_norm, p.i_fy_norm, p.train_error, p.test_error] {
                    assert!((0.0..=1.0).contains(&v));
                }
                for v in [p.avg_margin, p.min_margin, p.margin_variance] {
                    assert!((-1.0..=1.0).contains(&v));
                }
                if p.i_fy_norm == 1.0 && p.train_error > 0.0 && r.noiseless_after_discretization {
                    let bins: Vec<f64> = score_bins_at(&train, &cfg, p.round, spec.bins)
                        .into_iter()
                        .map(f64::from)
                        .collect();
                    let o = check_lemma2(&bins, &disc).unwrap();
                    assert_eq!(o.witness.unwrap().achieved_error, 0.0);
                }
            }
            if r.noiseless_after_discretization {
                assert_eq!(r.characteristic.lmc_target.1, 1.0);
                if let Some(p) = r.trajectory.iter().find(|p| p.train_error == 0.0) {
                    assert_eq!(p.i_fy_norm, 1.0);
                }
            }
        }
    }
}

/// The acceptance fixture: 500 rows, 10 features, 2 informative, no flips.
fn bundled() -> &'static (LabeledDataset, ExperimentSpec, Vec<RunResult>) {
    static CELL: OnceLock<(LabeledDataset, ExperimentSpec, Vec<RunResult>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let data = generate_artificial(500, 10, 2, 2, 0.0, 0).unwrap();
        let spec = ExperimentSpec {
            runs: 10,
            ..ExperimentSpec::default()
        };
        let (runs, _) = run_experiment(&data, &spec).unwrap();
        (data, spec, runs)
    })
}

#[test]
fn lmc_round_never_escapes_on_the_fixture() {
    let (_, spec, runs) = bundled();
    for r in runs {
        let l = r.characteristic.lmc_round.expect("fixture reaches the LMC point");
        for (p, plane) in r.trajectory.iter().zip(&r.plane).filter(|(p, _)| p.round >= l) {
            let q = plane.quantities;
            assert!(q.lmc_gap() <= spec.lmc_tolerance * q.h_x.max(q.h_y), "run {} round {}", r.run_index, p.round);
        }
    }
}

fn error_and_loss(train: &LabeledDataset, cfg: &BoostConfig) -> Vec<(f64, f64)> {
    let e = fit_boosting(train, cfg).unwrap();
    e.stages(train.features())
        .unwrap()
        .map(|(_, raw)| {
            let err = lmc_core::boosting::error_rate(&raw, train.labels());
            let loss: f64 = raw
                .iter()
                .zip(train.labels())
                .map(|(&f, &y)| Loss::Exponential.value(y as f64, f))
                .sum();
            (err, loss)
        })
        .collect()
}

#[test]
fn exponential_loss_never_increases_on_the_fixture() {
    let (data, spec, runs) = bundled();
    for r in runs {
        let train = train_split(data, spec, r);
        let series = error_and_loss(&train, &BoostConfig { seed: r.seed, ..spec.boost });
        assert!(series.windows(2).all(|w| w[1].1 <= w[0].1), "run {}", r.run_index);
        assert!(series.iter().any(|&(e, _)| e == 0.0), "run {}", r.run_index);
    }
}

#[test]
fn training_error_never_increases_on_the_single_run_fixture() {
    let (data, spec, runs) = bundled();
    let train = train_split(data, spec, &runs[0]);
    let series = error_and_loss(&train, &spec.boost);
    assert!(series.windows(2).all(|w| w[1].0 <= w[0].0));
    assert_eq!(series.last().unwrap().0, 0.0);

    let d = tiny();
    let series = error_and_loss(&d, &BoostConfig { rounds: 20, max_depth: 2, ..Default::default() });
    assert!(series.windows(2).all(|w| w[1].0 <= w[0].0));
    assert_eq!(series.last().unwrap().0, 0.0);
}

#[test]
fn runs_are_deterministic_and_csv_round_trips() {
    let (_, _, a) = fixture_runs(0.0, Loss::Exponential);
    let (_, _, b) = fixture_runs(0.0, Loss::Exponential);
    assert_eq!(a, b);
    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, "0", &a[0].trajectory).unwrap();
    let back: Vec<_> = read_trajectory_csv(buf.as_slice())
        .unwrap()
        .into_iter()
        .map(|(_, p)| p)
        .collect();
    assert_eq!(back, a[0].trajectory);
}
