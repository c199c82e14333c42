//! The four subcommands: tree induction, perturbation, before/after
//! evaluation, and a self-checking walkthrough on the embedded sample.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use privtree_core::dataset::{embedded_liver_sample, Dataset};
use privtree_core::eval::compare_runs;
use privtree_core::perturb::pipeline;
use privtree_core::tree::{
    best_numeric_split, build, entropy, gain, partition_entropy, similarity, ClassDistribution,
    TreeNode,
};
use privtree_core::{BuildParams, PerturbConfig, PerturbReport, SplitCriterion, ThresholdMode};

use crate::config::resolve;
use crate::{Failure, OutputFormat, RunArgs};

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents)
        .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))
}

fn report_json(report: &PerturbReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn tree(args: &RunArgs) -> Result<(), Failure> {
    let run = resolve(args)?;
    let tree = build(&run.dataset, &run.build)?;
    match args.format {
        OutputFormat::Text => print!("{}", tree.to_text()),
        OutputFormat::Json => println!("{}", tree.to_json()),
    }
    if let Some(path) = &args.out {
        write_file(path, &tree.to_json())?;
    }
    Ok(())
}

pub fn perturb(args: &RunArgs) -> Result<(), Failure> {
    let run = resolve(args)?;
    let outcome = pipeline(&run.dataset, &run.build, &run.perturb)?;
    let csv = outcome.perturbed.to_csv_string();
    match &args.out {
        Some(path) => {
            write_file(path, &csv)?;
            match args.format {
                OutputFormat::Json => println!("{}", report_json(&outcome.report)),
                OutputFormat::Text => {
                    let sum = |stage: &Option<privtree_core::perturb::NoiseStageReport>| {
                        stage
                            .as_ref()
                            .map(|s| s.changed_cells.values().sum::<usize>())
                            .unwrap_or(0)
                    };
                    let relabeled = outcome
                        .report
                        .capt
                        .as_ref()
                        .map(|c| c.relabeled_cells.values().sum::<usize>())
                        .unwrap_or(0);
                    println!(
                        "wrote {} rows to {}",
                        outcome.perturbed.n_rows(),
                        path.display()
                    );
                    println!(
                        "changed cells: {} on-path, {} off-path, {} relabeled",
                        sum(&outcome.report.lrpa),
                        sum(&outcome.report.lwpa),
                        relabeled
                    );
                }
            }
        }
        None => print!("{csv}"),
    }
    if let Some(path) = &args.report {
        write_file(path, &report_json(&outcome.report))?;
    }
    Ok(())
}

pub fn eval(args: &RunArgs) -> Result<(), Failure> {
    let run = resolve(args)?;
    let report = compare_runs(
        &run.dataset,
        &run.build,
        &run.perturb,
        run.test_fraction,
        run.split_seed,
    )?;
    let text = report.to_text();
    match args.format {
        OutputFormat::Text => print!("{text}"),
        OutputFormat::Json => println!("{}", report.to_json()),
    }
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    if let Some(path) = &args.report {
        write_file(path, &report.to_json())?;
    }
    Ok(())
}

const REFERENCE_TOL: f64 = 0.001;

/// Frozen output of a uniform −4.26 shift on the weight column with the
/// categorical shuffle disabled and the weight domain widened to [1, 100].
const SHIFTED_WEIGHTS: [f64; 14] = [
    65.74, 85.74, 80.74, 90.74, 65.74, 85.74, 73.74, 60.74, 70.74, 75.74, 65.74, 75.74, 75.74,
    91.74,
];

fn class_dist(ds: &Dataset) -> Result<ClassDistribution, Failure> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for row in 0..ds.n_rows() {
        *counts.entry(ds.class_label(row).to_string()).or_insert(0) += 1;
    }
    Ok(ClassDistribution::from_counts(counts))
}

fn partition_by(ds: &Dataset, attr: &str) -> Result<Vec<ClassDistribution>, Failure> {
    let col = ds
        .attr_index(attr)
        .ok_or_else(|| Failure::Check(format!("attribute {attr:?} missing from sample")))?;
    let mut groups: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    for row in 0..ds.n_rows() {
        let label = ds.label_value(row, col)?.to_string();
        *groups
            .entry(label)
            .or_default()
            .entry(ds.class_label(row).to_string())
            .or_insert(0) += 1;
    }
    Ok(groups
        .into_values()
        .map(ClassDistribution::from_counts)
        .collect())
}

pub fn demo() -> Result<(), Failure> {
    let ds = embedded_liver_sample();
    let parent = class_dist(&ds)?;
    let h = entropy(&parent)?;
    let liver_parts = partition_by(&ds, "LiverSize")?;
    let ph = partition_entropy(&liver_parts)?;
    let g_liver = gain(&parent, &liver_parts)?;
    let g_pizza = gain(&parent, &partition_by(&ds, "EatsPizza")?)?;
    let split = best_numeric_split(&ds, "PatientsWeight", SplitCriterion::Gain)?
        .ok_or_else(|| Failure::Check("no usable PatientsWeight split".into()))?;

    println!("class entropy                   {h:.5}  (reference 0.940)");
    println!("partition entropy on LiverSize  {ph:.5}  (reference 0.694)");
    println!("gain on LiverSize               {g_liver:.5}  (reference 0.246)");
    println!("gain on EatsPizza               {g_pizza:.5}  (reference 0.048)");
    println!(
        "best PatientsWeight split gain  {:.5}  (reference 0.103, threshold {})",
        split.score, split.threshold
    );
    println!();

    let params = BuildParams::default();
    let tree = build(&ds, &params)?;
    print!("{}", tree.to_text());
    println!();

    let cfg = PerturbConfig {
        capt_enabled: false,
        injected_shifts: [("PatientsWeight".to_string(), -4.26)].into(),
        domain_overrides: [("PatientsWeight".to_string(), (1.0, 100.0))].into(),
        seed: 42,
        ..PerturbConfig::default()
    };
    let outcome = pipeline(&ds, &params, &cfg)?;
    let col = ds
        .attr_index("PatientsWeight")
        .ok_or_else(|| Failure::Check("PatientsWeight missing from sample".into()))?;
    println!("constant shift -4.26 on PatientsWeight (categorical shuffle off, domain [1, 100]):");
    println!("  {:<10} {:>7} {:>7}", "LiverSize", "before", "after");
    for row in 0..ds.n_rows() {
        println!(
            "  {:<10} {:>7} {:>7}",
            ds.label_value(row, 0)?,
            ds.numeric_value(row, col)?,
            outcome.perturbed.numeric_value(row, col)?
        );
    }
    let rebuilt = build(&outcome.perturbed, &params)?;
    let sim = similarity(&tree, &rebuilt, ThresholdMode::Ignore);
    println!();
    println!("rebuilt-tree similarity: {sim:.3}");

    let mut problems = Vec::new();
    for (name, got, want) in [
        ("class entropy", h, 0.940),
        ("partition entropy", ph, 0.694),
        ("LiverSize gain", g_liver, 0.246),
        ("EatsPizza gain", g_pizza, 0.048),
        ("weight split gain", split.score, 0.103),
    ] {
        if (got - want).abs() > REFERENCE_TOL {
            problems.push(format!("{name} {got:.5} is off reference {want}"));
        }
    }
    match &tree.root {
        TreeNode::Internal { test, .. } if test.attribute == "LiverSize" => {}
        _ => problems.push("root does not test LiverSize".into()),
    }
    for (row, want) in SHIFTED_WEIGHTS.iter().enumerate() {
        let got = outcome.perturbed.numeric_value(row, col)?;
        if got != *want {
            problems.push(format!("row {row} shifted weight {got} != {want}"));
        }
    }
    if sim != 1.0 {
        problems.push(format!("rebuilt-tree similarity {sim} is not 1.0"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(problems.join("; ")))
    }
}
