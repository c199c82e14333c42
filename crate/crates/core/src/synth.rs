//! Synthetic tables for integration tests and benchmarks: a car-evaluation
//! style categorical product, a housing-style numeric table with a dominant
//! feature, and a plain Gaussian table with a one-threshold class rule.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{AttributeDescriptor, Dataset};

const BUYING: [&str; 4] = ["vhigh", "high", "med", "low"];
const MAINT: [&str; 4] = ["vhigh", "high", "med", "low"];
const DOORS: [&str; 4] = ["2", "3", "4", "5more"];
const PERSONS: [&str; 3] = ["2", "4", "more"];
const LUG_BOOT: [&str; 3] = ["small", "med", "big"];
const SAFETY: [&str; 3] = ["low", "med", "high"];

fn price_rank(level: &str) -> u32 {
    match level {
        "vhigh" => 0,
        "high" => 1,
        "med" => 2,
        _ => 3,
    }
}

fn car_rating(
    buying: &str,
    maint: &str,
    doors: &str,
    persons: &str,
    lug_boot: &str,
    safety: &str,
) -> &'static str {
    if safety == "low" || persons == "2" {
        return "unacc";
    }
    if buying == "vhigh" && maint == "vhigh" {
        return "unacc";
    }
    let mut score = price_rank(buying) + price_rank(maint);
    score += match lug_boot {
        "small" => 0,
        "med" => 1,
        _ => 2,
    };
    score += if safety == "high" { 2 } else { 1 };
    let rating = if score >= 9 {
        "vgood"
    } else if score >= 7 {
        "good"
    } else {
        "acc"
    };
    if doors == "2" {
        match rating {
            "vgood" => "good",
            "good" => "acc",
            other => other,
        }
    } else {
        rating
    }
}

/// Full 1728-row product of six categorical attributes with a deterministic
/// rating rule, shaped like the UCI car-evaluation table.
pub fn car_like() -> Dataset {
    let mut buying = Vec::with_capacity(1728);
    let mut maint = Vec::with_capacity(1728);
    let mut doors = Vec::with_capacity(1728);
    let mut persons = Vec::with_capacity(1728);
    let mut lug_boot = Vec::with_capacity(1728);
    let mut safety = Vec::with_capacity(1728);
    let mut rating = Vec::with_capacity(1728);
    for b in BUYING {
        for m in MAINT {
            for d in DOORS {
                for p in PERSONS {
                    for l in LUG_BOOT {
                        for s in SAFETY {
                            buying.push(b.to_string());
                            maint.push(m.to_string());
                            doors.push(d.to_string());
                            persons.push(p.to_string());
                            lug_boot.push(l.to_string());
                            safety.push(s.to_string());
                            rating.push(car_rating(b, m, d, p, l, s).to_string());
                        }
                    }
                }
            }
        }
    }
    let attrs = vec![
        AttributeDescriptor::categorical("buying"),
        AttributeDescriptor::categorical("maint"),
        AttributeDescriptor::categorical("doors"),
        AttributeDescriptor::categorical("persons"),
        AttributeDescriptor::categorical("lug_boot"),
        AttributeDescriptor::categorical("safety"),
        AttributeDescriptor::class("rating"),
    ];
    let categorical: BTreeMap<String, Vec<String>> = [
        ("buying".to_string(), buying),
        ("maint".to_string(), maint),
        ("doors".to_string(), doors),
        ("persons".to_string(), persons),
        ("lug_boot".to_string(), lug_boot),
        ("safety".to_string(), safety),
        ("rating".to_string(), rating),
    ]
    .into();
    Dataset::from_columns(attrs, BTreeMap::new(), categorical).expect("car table is well formed")
}

/// 506-row numeric table in the shape of a housing study: five context
/// columns, a bimodal `status` column that separates the two value classes,
/// and a `tax` column that decides the low-status stragglers.
pub fn housing_like(seed: u64) -> Dataset {
    let n = 506;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");

    let mut crim = Vec::with_capacity(n);
    let mut rooms = Vec::with_capacity(n);
    let mut age = Vec::with_capacity(n);
    let mut dist = Vec::with_capacity(n);
    let mut tax = Vec::with_capacity(n);
    let mut status = Vec::with_capacity(n);
    let mut value = Vec::with_capacity(n);
    for _ in 0..n {
        crim.push((unit.sample(&mut rng) as f64).exp());
        rooms.push(6.3 + 0.7 * unit.sample(&mut rng));
        age.push(rng.gen_range(2.0..100.0));
        dist.push(4.0 + 1.5 * unit.sample(&mut rng));
        let t = 400.0 + 60.0 * unit.sample(&mut rng);
        tax.push(t);
        let s = if rng.gen::<f64>() < 0.62 {
            5.0 + unit.sample(&mut rng)
        } else {
            15.0 + unit.sample(&mut rng)
        };
        status.push(s);
        let v = if s > 10.0 || t > 490.0 { "low" } else { "high" };
        value.push(v.to_string());
    }
    let attrs = vec![
        AttributeDescriptor::numeric("crim"),
        AttributeDescriptor::numeric("rooms"),
        AttributeDescriptor::numeric("age"),
        AttributeDescriptor::numeric("dist"),
        AttributeDescriptor::numeric("tax"),
        AttributeDescriptor::numeric("status"),
        AttributeDescriptor::class("value"),
    ];
    let numeric: BTreeMap<String, Vec<f64>> = [
        ("crim".to_string(), crim),
        ("rooms".to_string(), rooms),
        ("age".to_string(), age),
        ("dist".to_string(), dist),
        ("tax".to_string(), tax),
        ("status".to_string(), status),
    ]
    .into();
    let categorical: BTreeMap<String, Vec<String>> = [("value".to_string(), value)].into();
    Dataset::from_columns(attrs, numeric, categorical).expect("housing table is well formed")
}

/// Plain Gaussian columns with fixed parameters and a single-threshold class
/// rule, for statistical checks that need many independent numeric cells.
pub fn gaussian_table(n_rows: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let mut alpha = Vec::with_capacity(n_rows);
    let mut beta = Vec::with_capacity(n_rows);
    let mut gamma = Vec::with_capacity(n_rows);
    let mut group = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let a = 10.0 + 2.0 * unit.sample(&mut rng);
        alpha.push(a);
        beta.push(50.0 + 6.0 * unit.sample(&mut rng));
        gamma.push(-3.0 + 1.5 * unit.sample(&mut rng));
        group.push(if a > 10.0 { "pos" } else { "neg" }.to_string());
    }
    let attrs = vec![
        AttributeDescriptor::numeric("alpha"),
        AttributeDescriptor::numeric("beta"),
        AttributeDescriptor::numeric("gamma"),
        AttributeDescriptor::class("group"),
    ];
    let numeric: BTreeMap<String, Vec<f64>> = [
        ("alpha".to_string(), alpha),
        ("beta".to_string(), beta),
        ("gamma".to_string(), gamma),
    ]
    .into();
    let categorical: BTreeMap<String, Vec<String>> = [("group".to_string(), group)].into();
    Dataset::from_columns(attrs, numeric, categorical).expect("gaussian table is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{fit_normal, split_train_test};
    use crate::eval::accuracy;
    use crate::tree::{build, BuildParams};
    use std::collections::BTreeSet;

    #[test]
    fn car_table_covers_the_full_product() {
        let ds = car_like();
        assert_eq!(ds.n_rows(), 1728);
        assert_eq!(ds.attributes().len(), 7);
        let mut combos = BTreeSet::new();
        for row in 0..ds.n_rows() {
            let mut key = String::new();
            for col in 0..6 {
                key.push_str(ds.label_value(row, col).unwrap());
                key.push('|');
            }
            combos.insert(key);
        }
        assert_eq!(combos.len(), 1728);
    }

    #[test]
    fn car_ratings_use_all_four_levels_with_unacc_majority() {
        let ds = car_like();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for row in 0..ds.n_rows() {
            *counts.entry(ds.class_label(row)).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts["unacc"] > ds.n_rows() / 2);
        assert!(counts["vgood"] >= 10);
    }

    #[test]
    fn car_rule_is_learnable_from_a_split() {
        let ds = car_like();
        let split = split_train_test(&ds, 0.3, 42).unwrap();
        let tree = build(&split.train, &BuildParams::default()).unwrap();
        assert_eq!(accuracy(&tree, &split.train).unwrap(), 1.0);
        assert!(accuracy(&tree, &split.test).unwrap() >= 0.80);
    }

    #[test]
    fn housing_table_is_deterministic_per_seed() {
        let a = housing_like(42);
        let b = housing_like(42);
        let c = housing_like(43);
        assert_eq!(a.to_csv_string(), b.to_csv_string());
        assert_ne!(a.to_csv_string(), c.to_csv_string());
        assert_eq!(a.n_rows(), 506);
    }

    #[test]
    fn housing_status_column_separates_the_classes() {
        let ds = housing_like(42);
        let status = ds.attr_index("status").unwrap();
        let tax = ds.attr_index("tax").unwrap();
        for row in 0..ds.n_rows() {
            let s = ds.numeric_value(row, status).unwrap();
            let t = ds.numeric_value(row, tax).unwrap();
            let expect = if s > 10.0 || t > 490.0 { "low" } else { "high" };
            assert_eq!(ds.class_label(row), expect);
        }
    }

    #[test]
    fn housing_rule_is_learnable_from_a_split() {
        let ds = housing_like(42);
        let split = split_train_test(&ds, 0.3, 42).unwrap();
        let tree = build(&split.train, &BuildParams::default()).unwrap();
        assert!(accuracy(&tree, &split.test).unwrap() >= 0.90);
    }

    #[test]
    fn gaussian_columns_match_their_parameters() {
        let ds = gaussian_table(4000, 7);
        let alpha = fit_normal(&ds, "alpha").unwrap();
        let beta = fit_normal(&ds, "beta").unwrap();
        assert!((alpha.mean - 10.0).abs() < 0.2);
        assert!((alpha.std - 2.0).abs() < 0.2);
        assert!((beta.mean - 50.0).abs() < 0.6);
        assert!((beta.std - 6.0).abs() < 0.6);
    }
}
