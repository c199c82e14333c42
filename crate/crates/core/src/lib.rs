//! Decision-tree-guided perturbation for privacy-preserving classification data.
//!
//! The crate builds a C4.5-style decision tree over a tabular dataset and then
//! uses the tree itself to steer how much noise each cell receives: numeric
//! attributes tested on a record's own root-to-leaf path get one noise scale,
//! numeric attributes tested elsewhere get another, and categorical/class
//! values are reshuffled per leaf according to the leaf's label mix. The
//! perturbed data stays inside declared attribute domains via modular
//! wrapping, and an evaluation module quantifies how much classification
//! utility survives.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod paths;
pub mod perturb;
mod rng;
pub mod synth;
pub mod tree;

pub use dataset::{
    embedded_liver_csv, embedded_liver_sample, AttrKind, AttrRole, AttributeDescriptor, Dataset,
    DomainRange, Granularity, NormalFit, Schema, StdConvention, TrainTestSplit,
};
pub use error::{Error, Result};
pub use eval::{AttrDistortion, EvalReport};
pub use paths::{LwpaScope, PathAttributeSets, RoutedPath};
pub use perturb::{
    CaptTarget, NoiseMode, PerturbConfig, PerturbReport, PipelineOutcome, SiblingRule, WrapMode,
};
pub use tree::{
    BuildParams, ClassDistribution, DecisionTree, SplitCriterion, SplitTest, ThresholdMode,
    TreeNode,
};
