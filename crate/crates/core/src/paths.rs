//! Root-to-leaf routing and the attribute sets it induces.
//!
//! For a record routed to a leaf, the attributes tested along its own path
//! form the LRPA (attributes along the routed path). The LWPA holds the
//! attributes the record was *not* tested on: either the rest of the
//! tree-tested attributes, or the rest of all feature attributes, depending
//! on scope. The two sets are disjoint by construction and drive how strongly
//! each cell is perturbed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::Result;
use crate::tree::{descend, DecisionTree, SplitForm, TreeNode};

/// One internal-node test taken on the way down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub attribute: String,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepOutcome {
    /// Categorical branch taken.
    Branch(String),
    /// Numeric comparison `value <= threshold` held.
    LessEq(f64),
    /// Numeric comparison `value > threshold` held.
    Greater(f64),
    /// The value was never seen at this node; routing fell back to the
    /// heaviest build-time branch.
    Fallback { observed: String, taken: String },
}

/// Where a record landed and how it got there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedPath {
    pub leaf_id: u32,
    pub steps: Vec<PathStep>,
    /// Whether the leaf's parent has other children (of any kind). False for
    /// a single-leaf tree.
    pub has_siblings: bool,
}

/// Routes one record down the tree.
pub fn route(tree: &DecisionTree, ds: &Dataset, row: usize) -> Result<RoutedPath> {
    let d = descend(tree, ds, row)?;
    let steps = d
        .steps
        .iter()
        .map(|s| {
            let outcome = match (&s.test.form, s.fallback) {
                (SplitForm::NumericThreshold { threshold }, _) => {
                    if s.branch == 0 {
                        StepOutcome::LessEq(*threshold)
                    } else {
                        StepOutcome::Greater(*threshold)
                    }
                }
                (SplitForm::CategoricalMultiway { branches }, false) => {
                    StepOutcome::Branch(branches[s.branch].clone())
                }
                (SplitForm::CategoricalMultiway { branches }, true) => StepOutcome::Fallback {
                    observed: s.observed_label.clone().unwrap_or_default(),
                    taken: branches[s.branch].clone(),
                },
            };
            PathStep {
                attribute: s.test.attribute.clone(),
                outcome,
            }
        })
        .collect();
    Ok(RoutedPath {
        leaf_id: d.leaf_id,
        steps,
        has_siblings: d.parent_children >= 2,
    })
}

/// Which attributes count as "elsewhere" for the LWPA.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LwpaScope {
    /// Attributes tested somewhere in the tree but not on this path.
    TreeTested,
    /// All feature attributes not on this path, whether the tree tests them
    /// or not.
    AllFeatures,
}

/// The complementary attribute sets for one routed record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathAttributeSets {
    pub lrpa: BTreeSet<String>,
    pub lwpa: BTreeSet<String>,
}

/// Splits attributes into on-path (LRPA) and off-path (LWPA) sets.
pub fn path_sets(path: &RoutedPath, tree: &DecisionTree, scope: LwpaScope) -> PathAttributeSets {
    let lrpa: BTreeSet<String> = path.steps.iter().map(|s| s.attribute.clone()).collect();
    let universe: BTreeSet<String> = match scope {
        LwpaScope::TreeTested => tree.tested_attributes(),
        LwpaScope::AllFeatures => tree.feature_names.iter().cloned().collect(),
    };
    let lwpa = universe.difference(&lrpa).cloned().collect();
    PathAttributeSets { lrpa, lwpa }
}

/// Class makeup of the records routed to one leaf.
///
/// `m` is the majority count, the minorities are every other label present
/// (sorted by label), `t` their number and `k` their total count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafPopulation {
    pub records: Vec<usize>,
    pub class_counts: BTreeMap<String, usize>,
    pub majority: Option<String>,
    pub majority_count: usize,
    pub minorities: Vec<(String, usize)>,
    pub minority_classes: usize,
    pub minority_total: usize,
}

impl LeafPopulation {
    fn from_rows(records: Vec<usize>, class_counts: BTreeMap<String, usize>) -> Self {
        let majority = class_counts
            .iter()
            .fold(None::<(&String, usize)>, |best, (label, &count)| {
                match best {
                    Some((_, c)) if c >= count => best,
                    _ => Some((label, count)),
                }
            })
            .map(|(l, _)| l.clone());
        let majority_count = majority
            .as_ref()
            .and_then(|m| class_counts.get(m))
            .copied()
            .unwrap_or(0);
        let minorities: Vec<(String, usize)> = class_counts
            .iter()
            .filter(|(l, _)| Some(l.as_str()) != majority.as_deref())
            .map(|(l, &c)| (l.clone(), c))
            .collect();
        let minority_total = minorities.iter().map(|(_, c)| c).sum();
        Self {
            records,
            minority_classes: minorities.len(),
            minority_total,
            majority,
            majority_count,
            minorities,
            class_counts,
        }
    }
}

/// Routes every record and groups them by leaf. Leaves nothing reaches are
/// still present, with empty populations.
pub fn leaf_population(tree: &DecisionTree, ds: &Dataset) -> Result<BTreeMap<u32, LeafPopulation>> {
    let mut rows_by_leaf: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut counts_by_leaf: BTreeMap<u32, BTreeMap<String, usize>> = BTreeMap::new();
    for leaf_id in leaf_ids(tree) {
        rows_by_leaf.insert(leaf_id, Vec::new());
        counts_by_leaf.insert(leaf_id, BTreeMap::new());
    }
    for row in 0..ds.n_rows() {
        let d = descend(tree, ds, row)?;
        rows_by_leaf.entry(d.leaf_id).or_default().push(row);
        *counts_by_leaf
            .entry(d.leaf_id)
            .or_default()
            .entry(ds.class_label(row).to_string())
            .or_default() += 1;
    }
    Ok(rows_by_leaf
        .into_iter()
        .map(|(leaf, rows)| {
            let counts = counts_by_leaf.remove(&leaf).unwrap_or_default();
            (leaf, LeafPopulation::from_rows(rows, counts))
        })
        .collect())
}

pub(crate) fn leaf_ids(tree: &DecisionTree) -> Vec<u32> {
    let mut out = Vec::new();
    fn walk(n: &TreeNode, out: &mut Vec<u32>) {
        match n {
            TreeNode::Leaf { id, .. } => out.push(*id),
            TreeNode::Internal { children, .. } => children.iter().for_each(|c| walk(c, out)),
        }
    }
    walk(&tree.root, &mut out);
    out
}

/// Sibling structure of each leaf: whether its parent has other children at
/// all, and whether any of those siblings is itself a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiblingInfo {
    pub has_siblings: bool,
    pub has_leaf_sibling: bool,
}

pub(crate) fn leaf_sibling_info(tree: &DecisionTree) -> BTreeMap<u32, SiblingInfo> {
    let mut out = BTreeMap::new();
    if let TreeNode::Leaf { id, .. } = &tree.root {
        out.insert(
            *id,
            SiblingInfo {
                has_siblings: false,
                has_leaf_sibling: false,
            },
        );
        return out;
    }
    fn walk(n: &TreeNode, out: &mut BTreeMap<u32, SiblingInfo>) {
        if let TreeNode::Internal { children, .. } = n {
            let leaf_children = children.iter().filter(|c| c.is_leaf()).count();
            for child in children {
                match child {
                    TreeNode::Leaf { id, .. } => {
                        out.insert(
                            *id,
                            SiblingInfo {
                                has_siblings: children.len() >= 2,
                                has_leaf_sibling: leaf_children >= 2,
                            },
                        );
                    }
                    internal => walk(internal, out),
                }
            }
        }
    }
    walk(&tree.root, &mut out);
    out
}
