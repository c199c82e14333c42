//! Shared fixtures for the benchmark targets.

use privtree_core::synth::{car_like, gaussian_table, housing_like};
use privtree_core::Dataset;

/// The three dataset sizes the benchmarks sweep over.
pub fn fixtures() -> Vec<(&'static str, Dataset)> {
    vec![
        ("liver-14", privtree_core::embedded_liver_sample()),
        ("housing-506", housing_like(42)),
        ("car-1728", car_like()),
    ]
}

pub fn wide_numeric(rows: usize) -> Dataset {
    gaussian_table(rows, 7)
}
