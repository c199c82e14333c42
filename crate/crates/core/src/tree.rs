//! C4.5-style decision tree induction: entropy, information gain, gain ratio,
//! multiway categorical splits, binary numeric threshold splits, plus
//! classification, structural similarity and text/JSON serialization.
//!
//! Trees are deterministic functions of (dataset, parameters): candidate
//! splits are scored in schema order with strict-greater comparison, numeric
//! thresholds sit halfway between consecutive distinct values, and leaf ids
//! are assigned left to right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{AttrKind, Dataset};
use crate::error::{Error, Result};

/// Tiny positive score below which a candidate split is treated as useless.
const MIN_USEFUL_SCORE: f64 = 1e-12;

/// Class label counts at a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDistribution {
    counts: BTreeMap<String, usize>,
}

impl ClassDistribution {
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Self {
            counts: counts
                .into_iter()
                .filter(|(_, c)| *c > 0)
                .map(|(l, c)| (l.into(), c))
                .collect(),
        }
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.counts.len() == 1
    }

    /// Majority label; ties break toward the lexicographically smallest label.
    pub fn majority(&self) -> Option<(&str, usize)> {
        let mut best: Option<(&str, usize)> = None;
        for (label, &count) in &self.counts {
            if best.map_or(true, |(_, c)| count > c) {
                best = Some((label, count));
            }
        }
        best
    }
}

/// Shannon entropy of a class distribution, in bits.
pub fn entropy(dist: &ClassDistribution) -> Result<f64> {
    let total = dist.total();
    if total == 0 {
        return Err(Error::InvalidParam("entropy of an empty distribution".into()));
    }
    let total = total as f64;
    let mut h = 0.0;
    for &count in dist.counts.values() {
        let p = count as f64 / total;
        h -= p * p.log2();
    }
    Ok(h)
}

/// Expected entropy after splitting: sum of child entropies weighted by size.
/// Empty partitions contribute nothing.
pub fn partition_entropy(parts: &[ClassDistribution]) -> Result<f64> {
    let total: usize = parts.iter().map(|p| p.total()).sum();
    if total == 0 {
        return Err(Error::InvalidParam(
            "partition entropy of all-empty partitions".into(),
        ));
    }
    let total = total as f64;
    let mut h = 0.0;
    for part in parts {
        if part.is_empty() {
            continue;
        }
        h += (part.total() as f64 / total) * entropy(part)?;
    }
    Ok(h)
}

/// Information gain of a partition relative to its parent. Tiny negative
/// values from floating-point noise are clamped to zero.
pub fn gain(parent: &ClassDistribution, parts: &[ClassDistribution]) -> Result<f64> {
    let child_total: usize = parts.iter().map(|p| p.total()).sum();
    if child_total != parent.total() {
        return Err(Error::InvalidParam(format!(
            "partition covers {child_total} records but parent has {}",
            parent.total()
        )));
    }
    let g = entropy(parent)? - partition_entropy(parts)?;
    debug_assert!(g > -1e-9, "gain {g} more negative than numeric noise allows");
    Ok(g.max(0.0))
}

/// Entropy of the partition sizes themselves. A single non-empty partition
/// (or none) yields 0; callers of ratios must guard that case.
pub fn split_info(parts: &[ClassDistribution]) -> f64 {
    let total: usize = parts.iter().map(|p| p.total()).sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let mut h = 0.0;
    for part in parts {
        if part.is_empty() {
            continue;
        }
        let p = part.total() as f64 / total;
        h -= p * p.log2();
    }
    h
}

/// Gain normalized by split info; 0 when the split info is 0.
pub fn gain_ratio(parent: &ClassDistribution, parts: &[ClassDistribution]) -> Result<f64> {
    let g = gain(parent, parts)?;
    let si = split_info(parts);
    if si <= 0.0 {
        return Ok(0.0);
    }
    Ok(g / si)
}

/// What a candidate split is scored with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCriterion {
    #[default]
    Gain,
    GainRatio,
}

/// Parameters for [`build`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildParams {
    /// Nodes with fewer records become leaves. Must be at least 2.
    pub min_records_to_split: usize,
    pub split_criterion: SplitCriterion,
    /// Optional depth cap; the root is at depth 0.
    pub max_depth: Option<usize>,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self {
            min_records_to_split: 2,
            split_criterion: SplitCriterion::Gain,
            max_depth: None,
        }
    }
}

impl BuildParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_records_to_split < 2 {
            return Err(Error::InvalidParam(format!(
                "min_records_to_split must be >= 2, got {}",
                self.min_records_to_split
            )));
        }
        Ok(())
    }
}

/// The test performed at an internal node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitTest {
    pub attribute: String,
    #[serde(flatten)]
    pub form: SplitForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "test", rename_all = "kebab-case")]
pub enum SplitForm {
    /// One child per branch label, labels sorted lexicographically.
    CategoricalMultiway { branches: Vec<String> },
    /// Two children: `value <= threshold` first, then `value > threshold`.
    NumericThreshold { threshold: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TreeNode {
    Internal {
        test: SplitTest,
        children: Vec<TreeNode>,
        /// Index of the child that held the most training records; unseen
        /// categorical values are routed here.
        heaviest_child: usize,
        /// Training records that reached this node.
        records: usize,
    },
    Leaf {
        /// Deterministic left-to-right id.
        id: u32,
        distribution: ClassDistribution,
        majority: String,
    },
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    fn count_nodes(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { children, .. } => {
                1 + children.iter().map(TreeNode::count_nodes).sum::<usize>()
            }
        }
    }
}

/// A trained tree plus the schema context it was built against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub class_attribute: String,
    /// Feature attribute names of the training schema, in schema order.
    pub feature_names: Vec<String>,
    pub root: TreeNode,
}

impl DecisionTree {
    pub fn node_count(&self) -> usize {
        self.root.count_nodes()
    }

    pub fn leaf_count(&self) -> usize {
        fn leaves(n: &TreeNode) -> usize {
            match n {
                TreeNode::Leaf { .. } => 1,
                TreeNode::Internal { children, .. } => children.iter().map(leaves).sum(),
            }
        }
        leaves(&self.root)
    }

    pub fn is_single_leaf(&self) -> bool {
        self.root.is_leaf()
    }

    /// Attribute names tested anywhere in the tree.
    pub fn tested_attributes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(n: &TreeNode, out: &mut BTreeSet<String>) {
            if let TreeNode::Internal { test, children, .. } = n {
                out.insert(test.attribute.clone());
                for c in children {
                    walk(c, out);
                }
            }
        }
        walk(&self.root, &mut out);
        out
    }

    /// Numeric thresholds on the named attribute, in depth-first order.
    pub fn thresholds_for(&self, attribute: &str) -> Vec<f64> {
        let mut out = Vec::new();
        fn walk(n: &TreeNode, attribute: &str, out: &mut Vec<f64>) {
            if let TreeNode::Internal { test, children, .. } = n {
                if test.attribute == attribute {
                    if let SplitForm::NumericThreshold { threshold } = test.form {
                        out.push(threshold);
                    }
                }
                for c in children {
                    walk(c, attribute, out);
                }
            }
        }
        walk(&self.root, attribute, &mut out);
        out
    }

    /// Indented human-readable rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.root {
            TreeNode::Leaf {
                distribution,
                majority,
                ..
            } => {
                let _ = writeln!(
                    out,
                    "-> {majority} ({}/{})",
                    distribution.counts().get(majority).copied().unwrap_or(0),
                    distribution.total()
                );
            }
            internal => render_internal(internal, 0, &mut out),
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }
}

fn render_internal(node: &TreeNode, depth: usize, out: &mut String) {
    let TreeNode::Internal { test, children, .. } = node else {
        return;
    };
    let indent = "  ".repeat(depth);
    for (i, child) in children.iter().enumerate() {
        let branch = match &test.form {
            SplitForm::CategoricalMultiway { branches } => {
                format!("{} = {}", test.attribute, branches[i])
            }
            SplitForm::NumericThreshold { threshold } => {
                if i == 0 {
                    format!("{} <= {}", test.attribute, crate::dataset::format_number(*threshold))
                } else {
                    format!("{} > {}", test.attribute, crate::dataset::format_number(*threshold))
                }
            }
        };
        match child {
            TreeNode::Leaf {
                distribution,
                majority,
                ..
            } => {
                let _ = writeln!(
                    out,
                    "{indent}{branch} -> {majority} ({}/{})",
                    distribution.counts().get(majority).copied().unwrap_or(0),
                    distribution.total()
                );
            }
            internal => {
                let _ = writeln!(out, "{indent}{branch}");
                render_internal(internal, depth + 1, out);
            }
        }
    }
}

/// Best midpoint threshold for a numeric attribute over the whole dataset,
/// or `None` when every value is identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSplit {
    pub threshold: f64,
    pub score: f64,
}

pub fn best_numeric_split(
    ds: &Dataset,
    attr: &str,
    criterion: SplitCriterion,
) -> Result<Option<NumericSplit>> {
    let col = ds
        .attr_index(attr)
        .ok_or_else(|| Error::UnknownAttribute(attr.to_string()))?;
    if !ds.is_numeric(col) {
        return Err(Error::NotNumeric(attr.to_string()));
    }
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    let ctx = BuildCtx::new(ds)?;
    Ok(ctx.best_numeric_split_rows(&rows, col, criterion))
}

/// Grows a tree. Stops at pure nodes, nodes below `min_records_to_split`,
/// the depth cap, or when no candidate split scores above zero.
pub fn build(ds: &Dataset, params: &BuildParams) -> Result<DecisionTree> {
    params.validate()?;
    let ctx = BuildCtx::new(ds)?;
    let rows: Vec<usize> = (0..ds.n_rows()).collect();
    let mut used_categorical = vec![false; ds.attributes().len()];
    let mut next_leaf_id = 0;
    let root = ctx.grow(&rows, &mut used_categorical, 0, params, &mut next_leaf_id);
    Ok(DecisionTree {
        class_attribute: ds.class_name().to_string(),
        feature_names: ds
            .feature_indices()
            .into_iter()
            .map(|i| ds.attributes()[i].name.clone())
            .collect(),
        root,
    })
}

struct BuildCtx<'a> {
    ds: &'a Dataset,
    class_codes: Vec<u32>,
    class_labels: &'a [String],
    feature_cols: Vec<usize>,
}

impl<'a> BuildCtx<'a> {
    fn new(ds: &'a Dataset) -> Result<Self> {
        let feature_cols = ds.feature_indices();
        if feature_cols.is_empty() {
            return Err(Error::NoFeatures);
        }
        let class_idx = ds.class_index();
        let class_codes = (0..ds.n_rows())
            .map(|r| ds.label_code(r, class_idx).expect("class is categorical"))
            .collect();
        Ok(Self {
            ds,
            class_codes,
            class_labels: ds.labels(class_idx).expect("class is categorical"),
            feature_cols,
        })
    }

    fn class_counts(&self, rows: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_labels.len()];
        for &r in rows {
            counts[self.class_codes[r] as usize] += 1;
        }
        counts
    }

    fn distribution(&self, counts: &[usize]) -> ClassDistribution {
        ClassDistribution::from_counts(
            counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| (self.class_labels[i].clone(), c)),
        )
    }

    fn make_leaf(&self, rows: &[usize], next_leaf_id: &mut u32) -> TreeNode {
        let dist = self.distribution(&self.class_counts(rows));
        let majority = dist
            .majority()
            .expect("leaf has at least one record")
            .0
            .to_string();
        let id = *next_leaf_id;
        *next_leaf_id += 1;
        TreeNode::Leaf {
            id,
            distribution: dist,
            majority,
        }
    }

    fn grow(
        &self,
        rows: &[usize],
        used_categorical: &mut [bool],
        depth: usize,
        params: &BuildParams,
        next_leaf_id: &mut u32,
    ) -> TreeNode {
        let counts = self.class_counts(rows);
        let n_classes_present = counts.iter().filter(|&&c| c > 0).count();
        let depth_capped = params.max_depth.is_some_and(|cap| depth >= cap);
        if n_classes_present <= 1 || rows.len() < params.min_records_to_split || depth_capped {
            return self.make_leaf(rows, next_leaf_id);
        }

        let parent = self.distribution(&counts);
        let mut best: Option<Candidate> = None;
        for &col in &self.feature_cols {
            let candidate = match self.ds.attributes()[col].kind {
                AttrKind::Categorical if !used_categorical[col] => {
                    self.categorical_candidate(rows, col, &parent, params.split_criterion)
                }
                AttrKind::Categorical => None,
                AttrKind::Numeric => self
                    .best_numeric_split_rows(rows, col, params.split_criterion)
                    .map(|s| Candidate {
                        col,
                        score: s.score,
                        form: CandidateForm::Numeric(s.threshold),
                    }),
            };
            if let Some(c) = candidate {
                // Strict comparison keeps the lowest schema column on ties.
                if best.as_ref().map_or(true, |b| c.score > b.score) {
                    best = Some(c);
                }
            }
        }

        let Some(best) = best.filter(|b| b.score > MIN_USEFUL_SCORE) else {
            return self.make_leaf(rows, next_leaf_id);
        };

        let attr_name = self.ds.attributes()[best.col].name.clone();
        match best.form {
            CandidateForm::Categorical => {
                let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
                for &r in rows {
                    let label = self.ds.label_value(r, best.col).expect("categorical");
                    groups.entry(label).or_default().push(r);
                }
                let branches: Vec<String> = groups.keys().map(|s| s.to_string()).collect();
                used_categorical[best.col] = true;
                let children: Vec<TreeNode> = groups
                    .values()
                    .map(|g| self.grow(g, used_categorical, depth + 1, params, next_leaf_id))
                    .collect();
                used_categorical[best.col] = false;
                let heaviest_child = heaviest(&groups.values().map(Vec::len).collect::<Vec<_>>());
                TreeNode::Internal {
                    test: SplitTest {
                        attribute: attr_name,
                        form: SplitForm::CategoricalMultiway { branches },
                    },
                    children,
                    heaviest_child,
                    records: rows.len(),
                }
            }
            CandidateForm::Numeric(threshold) => {
                let values = self.ds.numeric_column(best.col).expect("numeric");
                let (mut left, mut right) = (Vec::new(), Vec::new());
                for &r in rows {
                    if values[r] <= threshold {
                        left.push(r);
                    } else {
                        right.push(r);
                    }
                }
                let sizes = [left.len(), right.len()];
                let children = vec![
                    self.grow(&left, used_categorical, depth + 1, params, next_leaf_id),
                    self.grow(&right, used_categorical, depth + 1, params, next_leaf_id),
                ];
                TreeNode::Internal {
                    test: SplitTest {
                        attribute: attr_name,
                        form: SplitForm::NumericThreshold { threshold },
                    },
                    children,
                    heaviest_child: heaviest(&sizes),
                    records: rows.len(),
                }
            }
        }
    }

    fn categorical_candidate(
        &self,
        rows: &[usize],
        col: usize,
        parent: &ClassDistribution,
        criterion: SplitCriterion,
    ) -> Option<Candidate> {
        let mut group_counts: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for &r in rows {
            let code = self.ds.label_code(r, col).expect("categorical");
            group_counts
                .entry(code)
                .or_insert_with(|| vec![0; self.class_labels.len()])[self.class_codes[r] as usize] +=
                1;
        }
        if group_counts.len() < 2 {
            return None;
        }
        let parts: Vec<ClassDistribution> =
            group_counts.values().map(|c| self.distribution(c)).collect();
        let score = match criterion {
            SplitCriterion::Gain => gain(parent, &parts).ok()?,
            SplitCriterion::GainRatio => gain_ratio(parent, &parts).ok()?,
        };
        Some(Candidate {
            col,
            score,
            form: CandidateForm::Categorical,
        })
    }

    /// Scans midpoints between consecutive distinct sorted values and keeps
    /// the highest-scoring threshold; earlier thresholds win ties.
    fn best_numeric_split_rows(
        &self,
        rows: &[usize],
        col: usize,
        criterion: SplitCriterion,
    ) -> Option<NumericSplit> {
        let values = self.ds.numeric_column(col).expect("numeric");
        let mut order: Vec<usize> = rows.to_vec();
        order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));

        let n_classes = self.class_labels.len();
        let mut left = vec![0usize; n_classes];
        let mut right = self.class_counts(rows);
        let total = rows.len() as f64;
        let parent = self.distribution(&right);
        let parent_entropy = entropy(&parent).ok()?;

        let mut best: Option<NumericSplit> = None;
        for i in 0..order.len() - 1 {
            let class = self.class_codes[order[i]] as usize;
            left[class] += 1;
            right[class] -= 1;
            let (v, next) = (values[order[i]], values[order[i + 1]]);
            if v == next {
                continue;
            }
            let threshold = (v + next) / 2.0;
            let n_left = (i + 1) as f64;
            let n_right = total - n_left;
            let h_left = counts_entropy(&left, n_left);
            let h_right = counts_entropy(&right, n_right);
            let weighted = (n_left / total) * h_left + (n_right / total) * h_right;
            let g = (parent_entropy - weighted).max(0.0);
            let score = match criterion {
                SplitCriterion::Gain => g,
                SplitCriterion::GainRatio => {
                    let pl = n_left / total;
                    let pr = n_right / total;
                    let si = -(pl * pl.log2() + pr * pr.log2());
                    if si > 0.0 {
                        g / si
                    } else {
                        0.0
                    }
                }
            };
            if best.map_or(true, |b| score > b.score) {
                best = Some(NumericSplit { threshold, score });
            }
        }
        best
    }
}

fn counts_entropy(counts: &[usize], total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total;
            h -= p * p.log2();
        }
    }
    h
}

fn heaviest(sizes: &[usize]) -> usize {
    let mut best = 0;
    for (i, &s) in sizes.iter().enumerate() {
        if s > sizes[best] {
            best = i;
        }
    }
    best
}

struct Candidate {
    col: usize,
    score: f64,
    form: CandidateForm,
}

enum CandidateForm {
    Categorical,
    Numeric(f64),
}

/// Walks a record down the tree. Values equal to a threshold take the `<=`
/// branch; categorical values never seen at the node fall back to the child
/// that was heaviest at build time.
pub(crate) struct Descent<'t> {
    pub leaf_id: u32,
    pub majority: &'t str,
    /// (attribute, branch index taken, fallback flag) per internal node.
    pub steps: Vec<DescentStep<'t>>,
    /// Child count of the leaf's parent; 0 for a single-leaf tree.
    pub parent_children: usize,
}

pub(crate) struct DescentStep<'t> {
    pub test: &'t SplitTest,
    pub branch: usize,
    pub fallback: bool,
    pub observed_label: Option<String>,
}

pub(crate) fn descend<'t>(tree: &'t DecisionTree, ds: &Dataset, row: usize) -> Result<Descent<'t>> {
    let mut node = &tree.root;
    let mut steps = Vec::new();
    let mut parent_children = 0;
    loop {
        match node {
            TreeNode::Leaf { id, majority, .. } => {
                return Ok(Descent {
                    leaf_id: *id,
                    majority,
                    steps,
                    parent_children,
                });
            }
            TreeNode::Internal {
                test,
                children,
                heaviest_child,
                ..
            } => {
                let col = ds
                    .attr_index(&test.attribute)
                    .ok_or_else(|| Error::UnknownAttribute(test.attribute.clone()))?;
                let (branch, fallback, observed) = match &test.form {
                    SplitForm::NumericThreshold { threshold } => {
                        let v = ds.numeric_value(row, col)?;
                        (if v <= *threshold { 0 } else { 1 }, false, None)
                    }
                    SplitForm::CategoricalMultiway { branches } => {
                        let label = ds.label_value(row, col)?;
                        match branches.iter().position(|b| b == label) {
                            Some(i) => (i, false, Some(label.to_string())),
                            None => (*heaviest_child, true, Some(label.to_string())),
                        }
                    }
                };
                steps.push(DescentStep {
                    test,
                    branch,
                    fallback,
                    observed_label: observed,
                });
                parent_children = children.len();
                node = &children[branch];
            }
        }
    }
}

/// Predicted class for one record.
pub fn classify<'t>(tree: &'t DecisionTree, ds: &Dataset, row: usize) -> Result<&'t str> {
    Ok(descend(tree, ds, row)?.majority)
}

/// How numeric thresholds are compared by [`similarity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Thresholds must agree within the given tolerance.
    Exact(f64),
    /// Thresholds are not compared at all.
    Ignore,
}

/// Structural similarity of two trees in [0, 1]: simultaneous traversal from
/// the roots, counting matching node pairs, divided by the larger node count.
/// Internal nodes match on attribute and test form (thresholds per `mode`,
/// categorical branch label lists exactly); leaves match on majority class.
pub fn similarity(t1: &DecisionTree, t2: &DecisionTree, mode: ThresholdMode) -> f64 {
    fn matched(a: &TreeNode, b: &TreeNode, mode: ThresholdMode) -> usize {
        match (a, b) {
            (TreeNode::Leaf { majority: m1, .. }, TreeNode::Leaf { majority: m2, .. }) => {
                usize::from(m1 == m2)
            }
            (
                TreeNode::Internal {
                    test: test1,
                    children: c1,
                    ..
                },
                TreeNode::Internal {
                    test: test2,
                    children: c2,
                    ..
                },
            ) => {
                if !tests_compatible(test1, test2, mode) {
                    return 0;
                }
                1 + c1
                    .iter()
                    .zip(c2)
                    .map(|(x, y)| matched(x, y, mode))
                    .sum::<usize>()
            }
            _ => 0,
        }
    }
    let denom = t1.node_count().max(t2.node_count());
    matched(&t1.root, &t2.root, mode) as f64 / denom as f64
}

fn tests_compatible(a: &SplitTest, b: &SplitTest, mode: ThresholdMode) -> bool {
    if a.attribute != b.attribute {
        return false;
    }
    match (&a.form, &b.form) {
        (
            SplitForm::CategoricalMultiway { branches: b1 },
            SplitForm::CategoricalMultiway { branches: b2 },
        ) => b1 == b2,
        (
            SplitForm::NumericThreshold { threshold: t1 },
            SplitForm::NumericThreshold { threshold: t2 },
        ) => match mode {
            ThresholdMode::Ignore => true,
            ThresholdMode::Exact(eps) => (t1 - t2).abs() <= eps,
        },
        _ => false,
    }
}
