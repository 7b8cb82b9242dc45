//! Plug-in (maximum-likelihood) entropy and mutual information over finite
//! count tables, in bits.
//!
//! Every quantity is computed from integer counts under the empirical
//! measure, with `0 log 0 = 0`. Mutual information is evaluated as
//! `H(A) - H(A|B)`, where the conditional entropy is a weighted sum of
//! per-group entropies: a label-pure group contributes exactly `0.0`, so
//! deterministic and lossless relationships come out exact rather than
//! within rounding.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("count table is empty")]
    Empty,
    #[error("input lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("degenerate axis: H({0}) = 0, cannot normalize")]
    DegenerateAxis(&'static str),
}

pub type Result<T> = std::result::Result<T, InfoError>;

/// Entropy in bits of a distribution given by raw counts.
///
/// Zero counts are skipped. The summation order follows the iterator, so
/// callers that need bit-reproducible output must iterate deterministically.
pub fn entropy<I: IntoIterator<Item = u64>>(counts: I) -> Result<f64> {
    let counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(InfoError::Empty);
    }
    Ok(entropy_of(&counts, total))
}

fn entropy_of(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    let s: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum();
    if s < 0.0 {
        -s
    } else {
        0.0
    }
}

/// Finite joint count table of two discrete variables `(A, B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalJoint<A: Ord, B: Ord> {
    counts: BTreeMap<(A, B), u64>,
    total: u64,
}

impl<A: Ord + Clone, B: Ord + Clone> EmpiricalJoint<A, B> {
    /// Counts observed `(a, b)` pairs, one per sample row.
    pub fn from_pairs<I: IntoIterator<Item = (A, B)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for p in pairs {
            *counts.entry(p).or_insert(0) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(InfoError::Empty);
        }
        Ok(EmpiricalJoint { counts, total })
    }

    /// Builds a table from explicit cell counts; zero cells are dropped.
    pub fn from_counts<I: IntoIterator<Item = ((A, B), u64)>>(cells: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total = 0;
        for (k, c) in cells {
            if c > 0 {
                *counts.entry(k).or_insert(0) += c;
                total += c;
            }
        }
        if total == 0 {
            return Err(InfoError::Empty);
        }
        Ok(EmpiricalJoint { counts, total })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(A, B), u64)> + '_ {
        self.counts.iter().map(|(k, &c)| (k, c))
    }

    pub fn marginal_a(&self) -> BTreeMap<A, u64> {
        let mut m = BTreeMap::new();
        for ((a, _), &c) in &self.counts {
            *m.entry(a.clone()).or_insert(0) += c;
        }
        m
    }

    pub fn marginal_b(&self) -> BTreeMap<B, u64> {
        let mut m = BTreeMap::new();
        for ((_, b), &c) in &self.counts {
            *m.entry(b.clone()).or_insert(0) += c;
        }
        m
    }

    pub fn transpose(&self) -> EmpiricalJoint<B, A> {
        EmpiricalJoint {
            counts: self
                .counts
                .iter()
                .map(|((a, b), &c)| ((b.clone(), a.clone()), c))
                .collect(),
            total: self.total,
        }
    }

    /// `H(A)`.
    pub fn entropy_a(&self) -> f64 {
        let m: Vec<u64> = self.marginal_a().into_values().collect();
        entropy_of(&m, self.total)
    }

    /// `H(B)`.
    pub fn entropy_b(&self) -> f64 {
        let m: Vec<u64> = self.marginal_b().into_values().collect();
        entropy_of(&m, self.total)
    }

    /// `H(A, B)`.
    pub fn joint_entropy(&self) -> f64 {
        let c: Vec<u64> = self.counts.values().copied().collect();
        entropy_of(&c, self.total)
    }
}

/// `H(A|B) = sum_b p(b) H(A | B = b)`.
pub fn conditional_entropy<A: Ord + Clone, B: Ord + Clone>(j: &EmpiricalJoint<A, B>) -> f64 {
    let mut groups: BTreeMap<&B, Vec<u64>> = BTreeMap::new();
    for ((_, b), &c) in &j.counts {
        groups.entry(b).or_default().push(c);
    }
    let n = j.total as f64;
    groups
        .values()
        .map(|cs| {
            let nb: u64 = cs.iter().sum();
            (nb as f64 / n) * entropy_of(cs, nb)
        })
        .sum()
}

/// `I(A;B)`, evaluated as `H(A) - H(A|B)` and floored at zero.
///
/// Put the variable whose purity matters in the `A` slot: if `A` is a
/// function of `B`, the result equals `H(A)` bit for bit.
pub fn mutual_information<A: Ord + Clone, B: Ord + Clone>(j: &EmpiricalJoint<A, B>) -> f64 {
    let i = j.entropy_a() - conditional_entropy(j);
    if i > 0.0 {
        i
    } else {
        0.0
    }
}

/// Raw information quantities of a model output `F`, joint features `X` and
/// labels `Y` on one sample, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoQuantities {
    pub h_x: f64,
    pub h_y: f64,
    pub h_f: f64,
    pub i_fx: f64,
    pub i_fy: f64,
    pub i_xy: f64,
}

impl InfoQuantities {
    /// Distance, in bits, to the lossless maximal compression condition
    /// `I(F;X) = I(F;Y) = I(X;Y)`.
    pub fn lmc_gap(&self) -> f64 {
        (self.i_fy - self.i_xy)
            .abs()
            .max((self.i_fx - self.i_xy).abs())
    }

    /// The information-plane position of an LMC model on this sample.
    pub fn lmc_target(&self) -> Result<(f64, f64)> {
        let (hx, hy) = self.check_axes()?;
        Ok((self.i_xy / hx, self.i_xy / hy))
    }

    fn check_axes(&self) -> Result<(f64, f64)> {
        if self.h_x <= 0.0 {
            return Err(InfoError::DegenerateAxis("X"));
        }
        if self.h_y <= 0.0 {
            return Err(InfoError::DegenerateAxis("Y"));
        }
        Ok((self.h_x, self.h_y))
    }
}

/// Computes [`InfoQuantities`] from per-row model values, joint feature keys and labels.
pub fn info_quantities<F, X>(f: &[F], x: &[X], labels: &[i8]) -> Result<InfoQuantities>
where
    F: Ord + Clone,
    X: Ord + Clone,
{
    if f.len() != x.len() {
        return Err(InfoError::LengthMismatch(f.len(), x.len()));
    }
    if f.len() != labels.len() {
        return Err(InfoError::LengthMismatch(f.len(), labels.len()));
    }
    let fx = EmpiricalJoint::from_pairs(f.iter().cloned().zip(x.iter().cloned()))?;
    let yf = EmpiricalJoint::from_pairs(labels.iter().copied().zip(f.iter().cloned()))?;
    let yx = EmpiricalJoint::from_pairs(labels.iter().copied().zip(x.iter().cloned()))?;
    Ok(InfoQuantities {
        h_x: fx.entropy_b(),
        h_y: yx.entropy_a(),
        h_f: fx.entropy_a(),
        i_fx: mutual_information(&fx),
        i_fy: mutual_information(&yf),
        i_xy: mutual_information(&yx),
    })
}

/// Position on the entropy-normalized information plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoPlanePoint {
    /// `I(F;X) / H(X)`
    pub i_fx_norm: f64,
    /// `I(F;Y) / H(Y)`
    pub i_fy_norm: f64,
    pub quantities: InfoQuantities,
}

impl InfoPlanePoint {
    pub fn from_quantities(q: InfoQuantities) -> Result<Self> {
        let (hx, hy) = q.check_axes()?;
        Ok(InfoPlanePoint {
            i_fx_norm: q.i_fx / hx,
            i_fy_norm: q.i_fy / hy,
            quantities: q,
        })
    }
}

/// Builds the `(F,X)`, `(F,Y)` and `(X,Y)` joints over one sample and
/// returns the normalized plane position.
pub fn info_plane_point<F, X>(f_bins: &[F], x_keys: &[X], labels: &[i8]) -> Result<InfoPlanePoint>
where
    F: Ord + Clone,
    X: Ord + Clone,
{
    InfoPlanePoint::from_quantities(info_quantities(f_bins, x_keys, labels)?)
}

pub fn lmc_gap(q: &InfoQuantities) -> f64 {
    q.lmc_gap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Losslessness {
    Lossless,
    Lossy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compression {
    MaximallyCompressed,
    Undercompressed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Noise {
    Noiseless,
    Noisy,
}

/// One of the eight dataset/model scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelClassification {
    pub losslessness: Losslessness,
    pub compression: Compression,
    pub noise: Noise,
}

impl ModelClassification {
    pub fn is_lmc(&self) -> bool {
        self.losslessness == Losslessness::Lossless
            && self.compression == Compression::MaximallyCompressed
    }

    /// All eight combinations, noiseless first, in table order.
    pub fn all() -> [ModelClassification; 8] {
        let mut out = [ModelClassification {
            losslessness: Losslessness::Lossy,
            compression: Compression::Undercompressed,
            noise: Noise::Noiseless,
        }; 8];
        let mut k = 0;
        for noise in [Noise::Noiseless, Noise::Noisy] {
            for losslessness in [Losslessness::Lossy, Losslessness::Lossless] {
                for compression in [Compression::Undercompressed, Compression::MaximallyCompressed] {
                    out[k] = ModelClassification {
                        losslessness,
                        compression,
                        noise,
                    };
                    k += 1;
                }
            }
        }
        out
    }
}

impl std::fmt::Display for ModelClassification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = match self.losslessness {
            Losslessness::Lossless => "lossless",
            Losslessness::Lossy => "lossy",
        };
        let c = match self.compression {
            Compression::MaximallyCompressed => "maximally_compressed",
            Compression::Undercompressed => "undercompressed",
        };
        let n = match self.noise {
            Noise::Noiseless => "noiseless",
            Noise::Noisy => "noisy",
        };
        write!(f, "{n}/{l}/{c}")
    }
}

/// Classifies a model by absolute tolerance `tol` (bits):
/// lossless iff `I(F;Y) = I(X;Y)`, maximally compressed iff `I(F;X) = I(F;Y)`,
/// noiseless iff `I(X;Y) = H(Y)`.
pub fn classify_model(q: &InfoQuantities, tol: f64) -> ModelClassification {
    ModelClassification {
        losslessness: if (q.i_fy - q.i_xy).abs() <= tol {
            Losslessness::Lossless
        } else {
            Losslessness::Lossy
        },
        compression: if (q.i_fx - q.i_fy).abs() <= tol {
            Compression::MaximallyCompressed
        } else {
            Compression::Undercompressed
        },
        noise: if (q.i_xy - q.h_y).abs() <= tol {
            Noise::Noiseless
        } else {
            Noise::Noisy
        },
    }
}

/// Default absolute tolerance (bits) for exact-count comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
