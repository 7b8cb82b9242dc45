use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmc")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const FIXTURE: [&str; 12] = [
    "--n", "500", "--features", "10", "--informative", "2", "--clusters", "2", "--flip", "0", "--seed", "0",
];

#[test]
fn gen_data_defaults_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let o = lmc(&["gen-data", "--output", s(&a)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 2001);

    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for p in [&b, &c] {
        let o = lmc(&["gen-data", "--n", "100", "--flip", "0", "--seed", "7", "--output", s(p)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(fs::read(&b).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn gen_data_rejects_too_many_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let o = lmc(&[
        "gen-data",
        "--informative",
        "3",
        "--clusters",
        "5",
        "--output",
        s(&dir.path().join("x.csv")),
    ]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn inspect_reports_entropies_and_target() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("four.csv");
    fs::write(&p, "a,b,label\n0,0,-1\n0,1,1\n1,0,1\n1,1,-1\n").unwrap();
    let o = lmc(&["inspect", "--dataset", s(&p), "--bins", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    for line in ["H(X) = 2\n", "H(Y) = 1\n", "I(X;Y) = 1\n", "verdict = noiseless\n", "lmc_target = (0.5, 1)\n"] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }

    let o = lmc(&["inspect", "--dataset", s(&p), "--bins", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).to_lowercase().contains("degenerate"), "{}", stderr(&o));
}

#[test]
fn inspect_flags_conflicting_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("noisy.csv");
    fs::write(&p, "a,label\n0,1\n0,-1\n1,1\n1,1\n").unwrap();
    let o = lmc(&["inspect", "--dataset", s(&p), "--bins", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict = noisy"));
}

#[test]
fn inspect_missing_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = lmc(&["inspect", "--dataset", s(&dir.path().join("nope.csv"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn multiclass_csv_is_binarized() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("three.csv");
    let mut text = String::from("a,b,label\n");
    for i in 0..30 {
        text.push_str(&format!("{},{},{}\n", i % 7, i % 5, ["red", "green", "blue"][i % 3]));
    }
    fs::write(&p, text).unwrap();
    let o = lmc(&["inspect", "--dataset", s(&p), "--bins", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let count = |key: &str| -> usize {
        out.lines()
            .find_map(|l| l.strip_prefix(key))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert_eq!(count("positives = ") + count("negatives = "), 20);
}

#[test]
fn run_writes_outputs_and_reaches_lmc() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = vec!["run", "--runs", "4", "--rounds", "50", "--plot", "--out", s(&out)];
    args.extend(FIXTURE);
    let o = lmc(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("runs_reaching_lmc = 4\n"), "{summary}");
    for r in 0..4 {
        let csv = fs::read_to_string(out.join(format!("trajectory_run_{r}.csv"))).unwrap();
        assert_eq!(csv.lines().count(), 52);
    }
    assert_eq!(fs::read_to_string(out.join("trajectory_avg.csv")).unwrap().lines().count(), 52);
    let svg = fs::read_to_string(out.join("plane.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

#[test]
fn single_run_average_equals_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one");
    let mut args = vec!["run", "--runs", "1", "--rounds", "20", "--out", s(&out)];
    args.extend(FIXTURE);
    let o = lmc(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(!out.join("plane.svg").exists());
    // the run column differs ("0" vs "avg"), the numbers must not
    let strip = |name: &str| -> Vec<String> {
        fs::read_to_string(out.join(name))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split_once(',').unwrap().1.to_string())
            .collect()
    };
    assert_eq!(strip("trajectory_run_0.csv"), strip("trajectory_avg.csv"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    let out = dir.path().join("cfg");
    fs::write(
        &cfg,
        format!("# small run\nn = 200\nfeatures = 4\nrounds = 30\nruns = 2\nout = {}\n", out.display()),
    )
    .unwrap();
    let o = lmc(&["run", "--config", s(&cfg), "--rounds", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("rounds = 5\n"));
    assert!(summary.contains("n = 200\n"));
    assert!(summary.contains("runs = 2\n"));
    assert_eq!(fs::read_to_string(out.join("trajectory_avg.csv")).unwrap().lines().count(), 7);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&lmc(&["run", "--no-such-flag"])), 1);
    assert_eq!(code(&lmc(&["run", "--rounds", "many"])), 1);
    assert_eq!(code(&lmc(&["frobnicate"])), 1);
    assert_eq!(code(&lmc(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(code(&lmc(&["run", "--config", s(&cfg)])), 1);
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = lmc(&["verify", "--seed", "11", "--count", "40", "--out", s(d)]);
        assert_eq!(code(&o), 0, "{}\n{}", stdout(&o), stderr(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 12);
    for n in names {
        assert_eq!(fs::read(a.join(&n)).unwrap(), fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn sweep_over_depth() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep");
    let o = lmc(&["sweep", "--axis", "depth", "--values", " , ", "--out", s(&out)]);
    assert_eq!(code(&o), 1);

    let mut args = vec![
        "sweep", "--axis", "depth", "--values", "1,3", "--runs", "2", "--rounds", "15", "--out", s(&out),
    ];
    args.extend(FIXTURE);
    let o = lmc(&args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("depth_1/summary.txt").exists());
    assert!(out.join("depth_3/trajectory_avg.csv").exists());
    let table = fs::read_to_string(out.join("sweep_depth.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.lines().nth(1).unwrap().starts_with("depth_1,"));
}
