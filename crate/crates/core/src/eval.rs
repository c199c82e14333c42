//! Utility measurement: accuracy, before/after comparison runs and
//! cell-level distortion between an original table and its perturbed copy.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::{split_train_test, AttrKind, Dataset};
use crate::error::{Error, Result};
use crate::perturb::{pipeline, PerturbConfig, PerturbReport};
use crate::tree::{build, classify, similarity, BuildParams, DecisionTree, ThresholdMode};

/// Fraction of records whose predicted class equals the recorded class.
pub fn accuracy(tree: &DecisionTree, ds: &Dataset) -> Result<f64> {
    let mut hits = 0usize;
    for row in 0..ds.n_rows() {
        if classify(tree, ds, row)? == ds.class_label(row) {
            hits += 1;
        }
    }
    Ok(hits as f64 / ds.n_rows() as f64)
}

/// Per-attribute damage summary. Numeric attributes report signed and
/// absolute deltas; categorical attributes only the changed fraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttrDistortion {
    pub mean_delta: Option<f64>,
    pub mean_abs_delta: Option<f64>,
    pub max_abs_delta: Option<f64>,
    pub changed_fraction: f64,
}

/// Compares two datasets cell by cell. Schemas and row counts must match.
pub fn distortion(original: &Dataset, perturbed: &Dataset) -> Result<BTreeMap<String, AttrDistortion>> {
    if original.attributes() != perturbed.attributes() {
        return Err(Error::DatasetMismatch(
            "schemas differ between original and perturbed".into(),
        ));
    }
    if original.n_rows() != perturbed.n_rows() {
        return Err(Error::DatasetMismatch(format!(
            "row counts differ: {} vs {}",
            original.n_rows(),
            perturbed.n_rows()
        )));
    }
    let n = original.n_rows() as f64;
    let mut out = BTreeMap::new();
    for (col, attr) in original.attributes().iter().enumerate() {
        let entry = match attr.kind {
            AttrKind::Numeric => {
                let before = original.numeric_column(col)?;
                let after = perturbed.numeric_column(col)?;
                let mut sum = 0.0;
                let mut abs_sum = 0.0;
                let mut max_abs: f64 = 0.0;
                let mut changed = 0usize;
                for (b, a) in before.iter().zip(after) {
                    let d = a - b;
                    sum += d;
                    abs_sum += d.abs();
                    max_abs = max_abs.max(d.abs());
                    if a != b {
                        changed += 1;
                    }
                }
                AttrDistortion {
                    mean_delta: Some(sum / n),
                    mean_abs_delta: Some(abs_sum / n),
                    max_abs_delta: Some(max_abs),
                    changed_fraction: changed as f64 / n,
                }
            }
            AttrKind::Categorical => {
                let mut changed = 0usize;
                for row in 0..original.n_rows() {
                    if original.label_value(row, col)? != perturbed.label_value(row, col)? {
                        changed += 1;
                    }
                }
                AttrDistortion {
                    mean_delta: None,
                    mean_abs_delta: None,
                    max_abs_delta: None,
                    changed_fraction: changed as f64 / n,
                }
            }
        };
        out.insert(attr.name.clone(), entry);
    }
    Ok(out)
}

/// Outcome of a full before/after experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    /// Accuracy of the original-data tree on its own training partition.
    pub accuracy_original_train: f64,
    /// Accuracy of the original-data tree on the held-out partition.
    pub accuracy_original_test: f64,
    /// Accuracy of the perturbed-data tree, measured on the original train.
    pub accuracy_perturbed_train: f64,
    /// Accuracy of the perturbed-data tree, measured on the original test.
    pub accuracy_perturbed_test: f64,
    /// Structural similarity of the two trees, thresholds ignored.
    pub tree_similarity: f64,
    pub distortion: BTreeMap<String, AttrDistortion>,
    pub stratified_split: bool,
    pub test_fraction: f64,
    pub split_seed: u64,
    pub build_params: BuildParams,
    pub perturb_config: PerturbConfig,
    pub perturb_report: PerturbReport,
}

/// Splits the data, perturbs only the training partition, trains a tree on
/// each version and scores both against the untouched partitions.
pub fn compare_runs(
    ds: &Dataset,
    params: &BuildParams,
    cfg: &PerturbConfig,
    test_fraction: f64,
    split_seed: u64,
) -> Result<EvalReport> {
    let split = split_train_test(ds, test_fraction, split_seed)?;
    let outcome = pipeline(&split.train, params, cfg)?;
    let original_tree = &outcome.tree;
    let perturbed_tree = build(&outcome.perturbed, params)?;

    Ok(EvalReport {
        accuracy_original_train: accuracy(original_tree, &split.train)?,
        accuracy_original_test: accuracy(original_tree, &split.test)?,
        accuracy_perturbed_train: accuracy(&perturbed_tree, &split.train)?,
        accuracy_perturbed_test: accuracy(&perturbed_tree, &split.test)?,
        tree_similarity: similarity(original_tree, &perturbed_tree, ThresholdMode::Ignore),
        distortion: distortion(&split.train, &outcome.perturbed)?,
        stratified_split: split.stratified,
        test_fraction,
        split_seed,
        build_params: params.clone(),
        perturb_config: cfg.clone(),
        perturb_report: outcome.report,
    })
}

impl EvalReport {
    /// Aligned before/after table for terminal output.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<28}{:>10}{:>10}", "", "before", "after");
        let _ = writeln!(
            out,
            "{:<28}{:>10.4}{:>10.4}",
            "train accuracy", self.accuracy_original_train, self.accuracy_perturbed_train
        );
        let _ = writeln!(
            out,
            "{:<28}{:>10.4}{:>10.4}",
            "test accuracy", self.accuracy_original_test, self.accuracy_perturbed_test
        );
        let _ = writeln!(
            out,
            "{:<28}{:>10.3}",
            "tree similarity", self.tree_similarity
        );
        let _ = writeln!(
            out,
            "{:<28}{:>10}",
            "stratified split",
            if self.stratified_split { "yes" } else { "no" }
        );
        let mut numeric: Vec<(&String, &AttrDistortion)> = self
            .distortion
            .iter()
            .filter(|(_, d)| d.mean_delta.is_some())
            .collect();
        numeric.sort_by_key(|(name, _)| name.as_str());
        if !numeric.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:<28}{:>12}{:>12}{:>12}{:>10}",
                "numeric distortion", "mean", "mean |d|", "max |d|", "changed"
            );
            for (name, d) in numeric {
                let _ = writeln!(
                    out,
                    "{:<28}{:>12.4}{:>12.4}{:>12.4}{:>9.1}%",
                    name,
                    d.mean_delta.unwrap_or(0.0),
                    d.mean_abs_delta.unwrap_or(0.0),
                    d.max_abs_delta.unwrap_or(0.0),
                    d.changed_fraction * 100.0
                );
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{embedded_liver_sample, parse_csv, AttributeDescriptor, Schema};
    use crate::tree::TreeNode;

    #[test]
    fn liver_tree_training_accuracy_is_one() {
        let ds = embedded_liver_sample();
        let tree = build(&ds, &BuildParams::default()).unwrap();
        assert_eq!(accuracy(&tree, &ds).unwrap(), 1.0);
    }

    #[test]
    fn stump_accuracy_is_majority_share() {
        let ds = embedded_liver_sample();
        let tree = build(
            &ds,
            &BuildParams {
                max_depth: Some(0),
                ..BuildParams::default()
            },
        )
        .unwrap();
        assert!((accuracy(&tree, &ds).unwrap() - 9.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn flipped_binary_labels_complement_accuracy() {
        let ds = embedded_liver_sample();
        let tree = build(&ds, &BuildParams::default()).unwrap();
        let mut flipped = ds.clone();
        for row in 0..ds.n_rows() {
            let other = if ds.class_label(row) == "CLASS1" {
                "CLASS2"
            } else {
                "CLASS1"
            };
            flipped.set_label(row, ds.class_index(), other);
        }
        let a = accuracy(&tree, &ds).unwrap();
        let b = accuracy(&tree, &flipped).unwrap();
        assert!((a + b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distortion_of_uniform_shift() {
        let ds = embedded_liver_sample();
        let mut shifted = ds.clone();
        let col = ds.attr_index("PatientsWeight").unwrap();
        for row in 0..ds.n_rows() {
            let v = ds.numeric_value(row, col).unwrap();
            shifted.set_numeric(row, col, v - 4.26);
        }
        let d = distortion(&ds, &shifted).unwrap();
        let w = &d["PatientsWeight"];
        assert!((w.mean_delta.unwrap() + 4.26).abs() < 1e-9);
        assert!((w.mean_abs_delta.unwrap() - 4.26).abs() < 1e-9);
        assert!((w.max_abs_delta.unwrap() - 4.26).abs() < 1e-9);
        assert_eq!(w.changed_fraction, 1.0);
        assert_eq!(d["LiverSize"].changed_fraction, 0.0);
        assert_eq!(d["LiverSize"].mean_delta, None);
    }

    #[test]
    fn distortion_rejects_mismatched_shapes() {
        let ds = embedded_liver_sample();
        let sub = ds.subset(&[0, 1, 2]).unwrap();
        assert!(matches!(
            distortion(&ds, &sub),
            Err(Error::DatasetMismatch(_))
        ));
        let schema = Schema::new(vec![
            AttributeDescriptor::numeric("X"),
            AttributeDescriptor::class("C"),
        ])
        .unwrap();
        let other = parse_csv("X,C\n1,a\n", &schema).unwrap();
        assert!(distortion(&ds, &other).is_err());
    }

    #[test]
    fn identity_config_reproduces_original_tree() {
        // No noise, no categorical shuffle: the perturbed tree must equal the
        // original and all four accuracies must pair up.
        let ds = embedded_liver_sample();
        let cfg = PerturbConfig {
            noise_scale_lrpa: 0.0,
            noise_scale_lwpa: 0.0,
            capt_enabled: false,
            ..PerturbConfig::default()
        };
        let report = compare_runs(&ds, &BuildParams::default(), &cfg, 0.3, 7).unwrap();
        assert_eq!(report.tree_similarity, 1.0);
        assert_eq!(
            report.accuracy_original_train,
            report.accuracy_perturbed_train
        );
        assert_eq!(
            report.accuracy_original_test,
            report.accuracy_perturbed_test
        );
        assert!(report
            .distortion
            .values()
            .all(|d| d.changed_fraction == 0.0));
    }

    #[test]
    fn compare_runs_perturbs_only_training_rows() {
        let ds = embedded_liver_sample();
        let cfg = PerturbConfig {
            seed: 13,
            domain_overrides: [("PatientsWeight".to_string(), (1.0, 200.0))].into(),
            ..PerturbConfig::default()
        };
        let report = compare_runs(&ds, &BuildParams::default(), &cfg, 0.3, 7).unwrap();
        // The distortion table is computed against the train partition only;
        // with 14 rows and fraction 0.3 the train side holds 10 records.
        let n_train = 10.0;
        let w = &report.distortion["PatientsWeight"];
        let changed_rows = (w.changed_fraction * n_train).round() as usize;
        assert!(changed_rows <= 10);
        assert_eq!(report.test_fraction, 0.3);
        assert_eq!(report.split_seed, 7);
    }

    #[test]
    fn text_table_lines_up() {
        let ds = embedded_liver_sample();
        let cfg = PerturbConfig {
            noise_scale_lrpa: 0.0,
            noise_scale_lwpa: 0.0,
            capt_enabled: false,
            ..PerturbConfig::default()
        };
        let report = compare_runs(&ds, &BuildParams::default(), &cfg, 0.3, 7).unwrap();
        let text = report.to_text();
        assert!(text.contains("train accuracy"));
        assert!(text.contains("before"));
        assert!(text.contains("after"));
        let json: EvalReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json.tree_similarity, report.tree_similarity);
    }

    #[test]
    fn single_leaf_trees_compare_cleanly() {
        let schema = Schema::new(vec![
            AttributeDescriptor::numeric("X"),
            AttributeDescriptor::class("C"),
        ])
        .unwrap();
        let ds = parse_csv("X,C\n1,a\n2,a\n3,a\n4,a\n", &schema).unwrap();
        let tree = build(&ds, &BuildParams::default()).unwrap();
        assert!(matches!(tree.root, TreeNode::Leaf { .. }));
        assert_eq!(accuracy(&tree, &ds).unwrap(), 1.0);
    }
}
