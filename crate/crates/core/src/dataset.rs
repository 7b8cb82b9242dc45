//! Dataset loading, generation, binarization, splitting and discretization.
//!
//! Labels are stored as `i8` values in `{-1, +1}`. Discretization produces
//! per-feature equal-width bin indices plus a collision-free joint key per
//! row, so that the joint feature variable can be fed to the count-table
//! estimators in [`crate::infotheory`].

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::matrix::Matrix;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv has no header row")]
    MissingHeader,
    #[error("csv needs at least one feature column followed by a final \"label\" column, found {0:?}")]
    LabelColumn(String),
    #[error("line {line}, column {column:?}: non-numeric feature value {value:?}")]
    NonNumeric {
        line: u64,
        column: String,
        value: String,
    },
    #[error("dataset is empty")]
    Empty,
    #[error("row {row} has {found} features, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("invalid label {label} at row {row}; expected -1 or +1")]
    InvalidLabel { row: usize, label: i64 },
    #[error("binarization needs at least two classes, found {0}")]
    TooFewClasses(usize),
    #[error("cannot balance: minority class {class:?} has {minority} rows but only {pool} other rows exist")]
    CannotBalance {
        class: String,
        minority: usize,
        pool: usize,
    },
    #[error("{centroids} centroids need distinct hypercube vertices but only 2^{informative} exist")]
    NotEnoughVertices { centroids: usize, informative: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("split leaves an empty side (train {train}, test {test})")]
    EmptySplit { train: usize, test: usize },
    #[error("bin count must be positive, got {0}")]
    TooFewBins(usize),
    #[error("feature count mismatch: {0} vs {1}")]
    FeatureMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, DatasetError>;

/// Binary classification sample with labels in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Matrix,
    labels: Vec<i8>,
    feature_names: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(features: Matrix, labels: Vec<i8>) -> Result<Self> {
        Self::with_names(features, labels, None)
    }

    pub fn with_names(
        features: Matrix,
        labels: Vec<i8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if features.rows() == 0 || features.cols() == 0 {
            return Err(DatasetError::Empty);
        }
        if labels.len() != features.rows() {
            return Err(DatasetError::Shape {
                row: labels.len(),
                expected: features.rows(),
                found: labels.len(),
            });
        }
        if let Some(row) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(DatasetError::InvalidLabel {
                row,
                label: labels[row] as i64,
            });
        }
        if let Some(pos) = features.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFinite {
                row: pos / features.cols(),
                col: pos % features.cols(),
            });
        }
        if let Some(names) = &feature_names {
            if names.len() != features.cols() {
                return Err(DatasetError::FeatureMismatch(names.len(), features.cols()));
            }
        }
        Ok(LabeledDataset {
            features,
            labels,
            feature_names,
        })
    }

    /// Convenience constructor from row slices.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], labels: Vec<i8>) -> Result<Self> {
        let features = Matrix::from_rows(rows).ok_or_else(|| DatasetError::Shape {
            row: 0,
            expected: rows.first().map(|r| r.as_ref().len()).unwrap_or(0),
            found: 0,
        })?;
        Self::new(features, labels)
    }

    pub fn n(&self) -> usize {
        self.features.rows()
    }

    pub fn d(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Number of `+1` and `-1` labels.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        (pos, self.labels.len() - pos)
    }

    pub fn select(&self, idx: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: self.features.select_rows(idx),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// True when no two rows with bit-identical feature vectors carry different labels.
    pub fn is_noiseless(&self) -> bool {
        let mut seen: HashMap<Vec<u64>, i8> = HashMap::new();
        for (row, &y) in self.features.iter_rows().zip(&self.labels) {
            // -0.0 and 0.0 are the same feature value.
            let key: Vec<u64> = row.iter().map(|v| (v + 0.0).to_bits()).collect();
            match seen.get(&key) {
                Some(&prev) if prev != y => return false,
                Some(_) => {}
                None => {
                    seen.insert(key, y);
                }
            }
        }
        true
    }

    /// Writes the dataset in the loader's CSV format.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = match &self.feature_names {
            Some(names) => names.clone(),
            None => (0..self.d()).map(|j| format!("x{j}")).collect(),
        };
        header.push("label".to_string());
        w.write_record(&header)?;
        for (row, &y) in self.features.iter_rows().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            rec.push(if y > 0 { "1" } else { "-1" }.to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|source| DatasetError::Io {
            path: PathBuf::from("<csv writer>"),
            source,
        })?;
        Ok(())
    }
}

/// Sample whose labels are arbitrary class tokens, before binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassDataset {
    pub features: Matrix,
    pub class_labels: Vec<String>,
    pub feature_names: Option<Vec<String>>,
}

impl MulticlassDataset {
    /// Rows per class token, in lexicographic token order.
    pub fn class_counts(&self) -> BTreeMap<&str, usize> {
        let mut counts = BTreeMap::new();
        for c in &self.class_labels {
            *counts.entry(c.as_str()).or_insert(0) += 1;
        }
        counts
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedDataset {
    Binary(LabeledDataset),
    Multiclass(MulticlassDataset),
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "?" | "NA" | "na" | "NaN" | "nan")
}

/// Parses a CSV file whose last column is named `label`.
///
/// Rows with a missing cell (empty, `?`, `NA` or `NaN`) are discarded. Any
/// other non-numeric feature cell is an error.
pub fn load_csv(path: impl AsRef<Path>) -> Result<LoadedDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file)
}

pub fn read_csv<R: std::io::Read>(reader: R) -> Result<LoadedDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.is_empty() {
        return Err(DatasetError::MissingHeader);
    }
    let last = header.get(header.len() - 1).unwrap_or_default();
    if last != "label" || header.len() < 2 {
        return Err(DatasetError::LabelColumn(last.to_string()));
    }
    let d = header.len() - 1;
    let names: Vec<String> = header.iter().take(d).map(str::to_string).collect();

    let mut data = Vec::new();
    let mut tokens = Vec::new();
    'rows: for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != header.len() {
            return Err(DatasetError::Shape {
                row: tokens.len(),
                expected: header.len(),
                found: rec.len(),
            });
        }
        if rec.iter().any(is_missing) {
            continue 'rows;
        }
        let mut row = Vec::with_capacity(d);
        for (j, cell) in rec.iter().take(d).enumerate() {
            let v: f64 = cell.parse().map_err(|_| DatasetError::NonNumeric {
                line,
                column: names[j].clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DatasetError::NonNumeric {
                    line,
                    column: names[j].clone(),
                    value: cell.to_string(),
                });
            }
            row.push(v);
        }
        data.extend(row);
        tokens.push(rec.get(d).unwrap_or_default().to_string());
    }
    if tokens.is_empty() {
        return Err(DatasetError::Empty);
    }
    let features = Matrix::from_vec(tokens.len(), d, data);

    let as_binary: Option<Vec<i8>> = tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v == 1.0 => Some(1),
            Ok(v) if v == -1.0 => Some(-1),
            _ => None,
        })
        .collect();
    match as_binary {
        Some(labels) => Ok(LoadedDataset::Binary(LabeledDataset::with_names(
            features,
            labels,
            Some(names),
        )?)),
        None => Ok(LoadedDataset::Multiclass(MulticlassDataset {
            features,
            class_labels: tokens,
            feature_names: Some(names),
        })),
    }
}

/// Turns a multiclass sample into a balanced binary one.
///
/// The minority class (fewest rows, ties to the lexicographically smallest
/// token) becomes `+1`; as many rows are drawn uniformly without replacement
/// from all other classes pooled together and labelled `-1`. Output rows keep
/// their original relative order.
pub fn binarize_multiclass(d: &MulticlassDataset, seed: u64) -> Result<LabeledDataset> {
    let counts = d.class_counts();
    if counts.len() < 2 {
        return Err(DatasetError::TooFewClasses(counts.len()));
    }
    let mut minority: Option<(&str, usize)> = None;
    for (&tok, &c) in &counts {
        if minority.is_none_or(|(_, m)| c < m) {
            minority = Some((tok, c));
        }
    }
    let (class, m) = minority.expect("at least two classes");
    let (pos, pool): (Vec<usize>, Vec<usize>) =
        (0..d.class_labels.len()).partition(|&i| d.class_labels[i] == class);
    if m > pool.len() {
        return Err(DatasetError::CannotBalance {
            class: class.to_string(),
            minority: m,
            pool: pool.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = rand::seq::index::sample(&mut rng, pool.len(), m)
        .into_iter()
        .map(|k| pool[k])
        .collect();
    picked.sort_unstable();

    let mut rows: Vec<(usize, i8)> = pos
        .into_iter()
        .map(|i| (i, 1))
        .chain(picked.into_iter().map(|i| (i, -1)))
        .collect();
    rows.sort_unstable();
    let idx: Vec<usize> = rows.iter().map(|r| r.0).collect();
    LabeledDataset::with_names(
        d.features.select_rows(&idx),
        rows.iter().map(|r| r.1).collect(),
        d.feature_names.clone(),
    )
}

/// Parameters of the artificial cluster dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtificialSpec {
    pub n: usize,
    pub d: usize,
    pub n_informative: usize,
    pub clusters_per_class: usize,
    pub flip_prob: f64,
    pub seed: u64,
}

impl Default for ArtificialSpec {
    fn default() -> Self {
        ArtificialSpec {
            n: 2000,
            d: 20,
            n_informative: 2,
            clusters_per_class: 2,
            flip_prob: 0.01,
            seed: 0,
        }
    }
}

impl ArtificialSpec {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(DatasetError::InvalidParameter(m.to_string()));
        if self.n_informative == 0 || self.n_informative > self.d {
            return bad("need 1 <= informative <= d");
        }
        if self.clusters_per_class == 0 {
            return bad("clusters per class must be positive");
        }
        if !(0.0..=1.0).contains(&self.flip_prob) {
            return bad("flip probability must lie in [0, 1]");
        }
        let centroids = 2 * self.clusters_per_class;
        let vertices_ok = self.n_informative >= usize::BITS as usize - 1
            || centroids <= 1usize << self.n_informative;
        if !vertices_ok {
            return Err(DatasetError::NotEnoughVertices {
                centroids,
                informative: self.n_informative,
            });
        }
        if self.n == 0 || self.n % centroids != 0 {
            return bad("n must be a positive multiple of 2 * clusters per class");
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<LabeledDataset> {
        self.generate_with_clusters().map(|(d, _)| d)
    }

    /// Generates the dataset and reports each row's cluster index.
    ///
    /// Cluster `c` sits on the hypercube vertex given by the Gray code of `c`
    /// (bit `j` set means coordinate `+1`) and belongs to class `-1` when `c`
    /// is even, `+1` when odd. Consecutive clusters therefore differ in one
    /// coordinate and carry opposite labels.
    pub fn generate_with_clusters(&self) -> Result<(LabeledDataset, Vec<usize>)> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let centroids = 2 * self.clusters_per_class;
        let per_cluster = self.n / centroids;

        let mut rows: Vec<(Vec<f64>, i8, usize)> = Vec::with_capacity(self.n);
        for c in 0..centroids {
            let gray = c ^ (c >> 1);
            let label = if c % 2 == 0 { -1 } else { 1 };
            for _ in 0..per_cluster {
                let mut x = Vec::with_capacity(self.d);
                for j in 0..self.d {
                    let noise: f64 = rng.sample(StandardNormal);
                    let centre = if j >= self.n_informative {
                        0.0
                    } else if j < usize::BITS as usize && (gray >> j) & 1 == 1 {
                        1.0
                    } else {
                        -1.0
                    };
                    x.push(centre + noise);
                }
                rows.push((x, label, c));
            }
        }
        for row in rows.iter_mut() {
            let u: f64 = rng.random();
            if u < self.flip_prob {
                row.1 = -row.1;
            }
        }
        rows.shuffle(&mut rng);

        let mut data = Vec::with_capacity(self.n * self.d);
        let mut labels = Vec::with_capacity(self.n);
        let mut clusters = Vec::with_capacity(self.n);
        for (x, y, c) in rows {
            data.extend(x);
            labels.push(y);
            clusters.push(c);
        }
        let ds = LabeledDataset::new(Matrix::from_vec(self.n, self.d, data), labels)?;
        Ok((ds, clusters))
    }
}

/// Convenience wrapper around [`ArtificialSpec::generate`].
pub fn generate_artificial(
    n: usize,
    d: usize,
    n_informative: usize,
    clusters_per_class: usize,
    flip_prob: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    ArtificialSpec {
        n,
        d,
        n_informative,
        clusters_per_class,
        flip_prob,
        seed,
    }
    .generate()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub test_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            test_fraction: 0.5,
            seed: 0,
        }
    }
}

impl SplitSpec {
    /// Number of training rows: `ceil((1 - test_fraction) * n)`.
    pub fn train_size(&self, n: usize) -> usize {
        let exact = (1.0 - self.test_fraction) * n as f64;
        // Guard against products like 0.7 * 10 = 7.000000000000001.
        let k = (exact - 1e-9 * n.max(1) as f64).ceil();
        k.clamp(0.0, n as f64) as usize
    }
}

/// Seeded random train/test partition.
pub fn split(d: &LabeledDataset, s: SplitSpec) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(s.test_fraction > 0.0 && s.test_fraction < 1.0) {
        return Err(DatasetError::InvalidParameter(format!(
            "test fraction must lie in (0, 1), got {}",
            s.test_fraction
        )));
    }
    let n = d.n();
    let k = s.train_size(n);
    if k == 0 || k == n {
        return Err(DatasetError::EmptySplit {
            train: k,
            test: n - k,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(s.seed));
    Ok((d.select(&perm[..k]), d.select(&perm[k..])))
}

/// Equal-width discretization of every feature plus a joint key per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedDataset {
    bin_indices: Vec<u32>,
    d: usize,
    joint_keys: Vec<u32>,
    labels: Vec<i8>,
    bins: usize,
    bin_edges: Vec<Vec<f64>>,
}

impl DiscretizedDataset {
    /// Builds a discretized sample directly from bin tuples. Edges are the
    /// integer grid `0, 1, ..., b`.
    pub fn from_bin_rows<R: AsRef<[u32]>>(rows: &[R], labels: Vec<i8>, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(DatasetError::TooFewBins(bins));
        }
        if rows.is_empty() {
            return Err(DatasetError::Empty);
        }
        let d = rows[0].as_ref().len();
        if labels.len() != rows.len() {
            return Err(DatasetError::Shape {
                row: rows.len(),
                expected: rows.len(),
                found: labels.len(),
            });
        }
        let mut bin_indices = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(DatasetError::Shape {
                    row: i,
                    expected: d,
                    found: r.len(),
                });
            }
            if r.iter().any(|&b| b as usize >= bins) {
                return Err(DatasetError::InvalidParameter(format!(
                    "bin index out of range in row {i}"
                )));
            }
            bin_indices.extend_from_slice(r);
        }
        if let Some(row) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(DatasetError::InvalidLabel {
                row,
                label: labels[row] as i64,
            });
        }
        let grid: Vec<f64> = (0..=bins).map(|e| e as f64).collect();
        let joint_keys = assign_joint_keys(&bin_indices, d);
        Ok(DiscretizedDataset {
            bin_indices,
            d,
            joint_keys,
            labels,
            bins,
            bin_edges: vec![grid; d],
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn bin_row(&self, i: usize) -> &[u32] {
        &self.bin_indices[i * self.d..(i + 1) * self.d]
    }

    pub fn joint_keys(&self) -> &[u32] {
        &self.joint_keys
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn bin_edges(&self) -> &[Vec<f64>] {
        &self.bin_edges
    }

    /// Number of distinct joint keys.
    pub fn distinct_keys(&self) -> usize {
        self.joint_keys.iter().collect::<HashSet<_>>().len()
    }

    /// True when no joint key is shared by rows with different labels.
    pub fn is_noiseless(&self) -> bool {
        let mut seen: HashMap<u32, i8> = HashMap::new();
        for (&k, &y) in self.joint_keys.iter().zip(&self.labels) {
            if *seen.entry(k).or_insert(y) != y {
                return false;
            }
        }
        true
    }

    /// Bin indices as a real-valued dataset (useful for re-discretizing).
    pub fn bins_as_dataset(&self) -> Result<LabeledDataset> {
        LabeledDataset::new(
            Matrix::from_vec(
                self.n(),
                self.d,
                self.bin_indices.iter().map(|&b| b as f64).collect(),
            ),
            self.labels.clone(),
        )
    }
}

/// Positional code `sum_i bins[i] * b^i`, or `None` when it does not fit in 128 bits.
pub fn positional_code(bins: &[u32], b: usize) -> Option<u128> {
    let b = b as u128;
    let mut code: u128 = 0;
    let mut scale: u128 = 1;
    for (i, &x) in bins.iter().enumerate() {
        code = code.checked_add((x as u128).checked_mul(scale)?)?;
        if i + 1 < bins.len() {
            scale = scale.checked_mul(b)?;
        }
    }
    Some(code)
}

/// Dense ids in order of first appearance: identical tuples share an id,
/// distinct tuples never do.
fn assign_joint_keys(bin_indices: &[u32], d: usize) -> Vec<u32> {
    let mut ids: HashMap<&[u32], u32> = HashMap::new();
    bin_indices
        .chunks(d.max(1))
        .map(|t| {
            let next = ids.len() as u32;
            *ids.entry(t).or_insert(next)
        })
        .collect()
}

fn bin_of(v: f64, lo: f64, hi: f64, b: usize) -> u32 {
    if hi <= lo {
        return 0;
    }
    let x = ((v - lo) / (hi - lo) * b as f64).floor();
    x.clamp(0.0, (b - 1) as f64) as u32
}

/// Fits `b` equal-width bins per feature on `train` and applies them to `apply_to`.
///
/// A value `v` goes to `floor((v - min) / (max - min) * b)` clamped to
/// `[0, b - 1]`; constant training features put everything in bin 0.
pub fn discretize(
    train: &LabeledDataset,
    apply_to: &LabeledDataset,
    b: usize,
) -> Result<DiscretizedDataset> {
    if b == 0 {
        return Err(DatasetError::TooFewBins(b));
    }
    if train.d() != apply_to.d() {
        return Err(DatasetError::FeatureMismatch(train.d(), apply_to.d()));
    }
    let d = train.d();
    let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); d];
    for row in train.features().iter_rows() {
        for (r, &v) in ranges.iter_mut().zip(row) {
            r.0 = r.0.min(v);
            r.1 = r.1.max(v);
        }
    }
    let bin_edges: Vec<Vec<f64>> = ranges
        .iter()
        .map(|&(lo, hi)| {
            let width = if hi > lo { (hi - lo) / b as f64 } else { 1.0 };
            (0..=b)
                .map(|e| if e == b && hi > lo { hi } else { lo + e as f64 * width })
                .collect()
        })
        .collect();

    let mut bin_indices = Vec::with_capacity(apply_to.n() * d);
    for row in apply_to.features().iter_rows() {
        for (&v, &(lo, hi)) in row.iter().zip(&ranges) {
            bin_indices.push(bin_of(v, lo, hi, b));
        }
    }
    let joint_keys = assign_joint_keys(&bin_indices, d);
    Ok(DiscretizedDataset {
        bin_indices,
        d,
        joint_keys,
        labels: apply_to.labels().to_vec(),
        bins: b,
        bin_edges,
    })
}

/// Metadata of a benchmark dataset: instances after binarization, features,
/// and classes before binarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub instances: usize,
    pub features: usize,
    pub classes: usize,
}

/// The UCI benchmark sets the experiment harness is meant to be run on.
/// Data are not bundled; point the CLI at a local CSV copy.
pub const UCI_REGISTRY: &[RegistryEntry] = &[
    RegistryEntry { name: "parkinsons", instances: 96, features: 22, classes: 2 },
    RegistryEntry { name: "sonar", instances: 194, features: 60, classes: 2 },
    RegistryEntry { name: "heart", instances: 240, features: 13, classes: 2 },
    RegistryEntry { name: "ionosphere", instances: 252, features: 34, classes: 2 },
    RegistryEntry { name: "semeion", instances: 322, features: 256, classes: 10 },
    RegistryEntry { name: "congress", instances: 336, features: 16, classes: 2 },
    RegistryEntry { name: "wdbc", instances: 424, features: 31, classes: 2 },
    RegistryEntry { name: "credit", instances: 600, features: 24, classes: 2 },
    RegistryEntry { name: "landsat", instances: 1252, features: 36, classes: 6 },
    RegistryEntry { name: "splice", instances: 1524, features: 60, classes: 3 },
    RegistryEntry { name: "musk2", instances: 2034, features: 166, classes: 2 },
    RegistryEntry { name: "krvskp", instances: 3054, features: 36, classes: 2 },
    RegistryEntry { name: "waveform", instances: 3306, features: 40, classes: 3 },
    RegistryEntry { name: "mushroom", instances: 7832, features: 21, classes: 2 },
];

pub fn registry_entry(name: &str) -> Option<&'static RegistryEntry> {
    UCI_REGISTRY.iter().find(|e| e.name.eq_ignore_ascii_case(name))
}
