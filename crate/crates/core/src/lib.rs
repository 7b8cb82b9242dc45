//! Gradient boosting instrumented with the empirical information plane.
//!
//! The crate fits stagewise tree ensembles and, after every boosting round,
//! places the model on the entropy-normalized information plane
//! (`I(F;X)/H(X)` against `I(F;Y)/H(Y)`), tracking training/test error and the
//! functional margin distribution along the way. A set of brute-force checks
//! relates noiselessness, losslessness, maximal compression and margin
//! maximization on small discrete samples.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`dataset`] | CSV loading, artificial data, binarization, splits, discretization |
//! | [`infotheory`] | plug-in entropy / mutual information over count tables |
//! | [`boosting`] | least-squares CART and stagewise boosting with Newton leaves |
//! | [`trajectory`] | per-round information-plane trajectories and characteristic points |
//! | [`verify`] | independent equivalence checks on small instances |
//! | [`cli`] | command-line front end, output files and SVG plotting |

pub mod boosting;
pub mod cli;
pub mod dataset;
pub mod infotheory;
pub mod matrix;
pub mod trajectory;
pub mod verify;

pub use boosting::{BoostConfig, ScoreScaling, BoostingEnsemble, Loss, MarginStats, RegressionTree};
pub use dataset::{DiscretizedDataset, LabeledDataset, MulticlassDataset, SplitSpec};
pub use infotheory::{EmpiricalJoint, InfoPlanePoint, InfoQuantities, ModelClassification};
pub use matrix::Matrix;
pub use trajectory::{AveragedTrajectory, CharacteristicPoints, RunResult, TrajectoryPoint};
