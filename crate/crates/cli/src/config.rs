//! Declarative run configuration: a TOML document naming the dataset, its
//! schema and the build/perturb knobs, merged with command-line overrides.
//! Flags win over the file; the embedded liver sample is the fallback
//! dataset when no file is configured.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use privtree_core::dataset::{
    embedded_liver_sample, load_csv, load_csv_derive_class, AttributeDescriptor, Dataset,
    DeriveClassRule, Schema,
};
use privtree_core::{BuildParams, PerturbConfig};

use crate::{Failure, RunArgs};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// CSV path, resolved relative to the config file's directory.
    pub dataset: Option<PathBuf>,
    #[serde(default)]
    pub columns: Vec<AttributeDescriptor>,
    /// Replaces a numeric column with a two-label class split at a
    /// percentile, for tables that ship without a class column.
    pub derive_class: Option<DeriveClassRule>,
    #[serde(default)]
    pub build: BuildParams,
    #[serde(default)]
    pub perturb: PerturbConfig,
    pub test_fraction: Option<f64>,
    pub split_seed: Option<u64>,
}

/// Everything a command needs, after file and flags are reconciled.
pub struct Run {
    pub dataset: Dataset,
    pub build: BuildParams,
    pub perturb: PerturbConfig,
    pub test_fraction: f64,
    pub split_seed: u64,
}

pub fn load_file(path: &Path) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| Failure::Config(format!("invalid config {}: {e}", path.display())))
}

fn load_dataset(cfg: &FileConfig, config_dir: &Path) -> Result<Dataset, Failure> {
    let Some(rel) = &cfg.dataset else {
        return Ok(embedded_liver_sample());
    };
    if cfg.columns.is_empty() {
        return Err(Failure::Config(format!(
            "dataset {} declared without a [[columns]] schema",
            rel.display()
        )));
    }
    let path = if rel.is_absolute() {
        rel.clone()
    } else {
        config_dir.join(rel)
    };
    let ds = if let Some(rule) = &cfg.derive_class {
        let schema = Schema::without_class(cfg.columns.clone()).map_err(Failure::config)?;
        load_csv_derive_class(&path, &schema, rule).map_err(Failure::from)?
    } else {
        let schema = Schema::new(cfg.columns.clone()).map_err(Failure::config)?;
        load_csv(&path, &schema).map_err(Failure::from)?
    };
    Ok(ds)
}

fn parse_shift(raw: &str) -> Result<(String, f64), Failure> {
    let Some((attr, value)) = raw.split_once('=') else {
        return Err(Failure::Config(format!(
            "--inject-shift wants ATTR=REAL, got {raw:?}"
        )));
    };
    let shift: f64 = value
        .parse()
        .map_err(|_| Failure::Config(format!("--inject-shift value {value:?} is not a number")))?;
    Ok((attr.to_string(), shift))
}

pub fn resolve(args: &RunArgs) -> Result<Run, Failure> {
    let (file, dir) = match &args.config {
        Some(path) => {
            let dir = path
                .parent()
                .filter(|p| !p.as_os_str().is_empty())
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            (load_file(path)?, dir)
        }
        None => (FileConfig::default(), PathBuf::from(".")),
    };

    let dataset = load_dataset(&file, &dir)?;
    let build = file.build.clone();
    build.validate().map_err(Failure::config)?;

    let mut perturb = file.perturb.clone();
    if let Some(seed) = args.seed {
        perturb.seed = seed;
    }
    if let Some(p) = args.p {
        perturb.p = p;
    }
    if let Some(scale) = args.scale_lrpa {
        perturb.noise_scale_lrpa = scale;
    }
    if let Some(scale) = args.scale_lwpa {
        perturb.noise_scale_lwpa = scale;
    }
    if let Some(mode) = args.noise_mode {
        perturb.noise_mode = mode.into();
    }
    if let Some(wrap) = args.wrap {
        perturb.wrap_mode = wrap.into();
    }
    if let Some(scope) = args.lwpa_scope {
        perturb.lwpa_scope = scope.into();
    }
    if let Some(target) = args.capt_target {
        perturb.capt_target = target.into();
    }
    if args.no_capt {
        perturb.capt_enabled = false;
    }
    for raw in &args.inject_shift {
        let (attr, shift) = parse_shift(raw)?;
        perturb.injected_shifts.insert(attr, shift);
    }
    perturb.validate().map_err(Failure::config)?;

    for attr in perturb
        .injected_shifts
        .keys()
        .chain(perturb.domain_overrides.keys())
    {
        match dataset.attr_index(attr) {
            Some(col) if dataset.is_numeric(col) => {}
            Some(_) => {
                return Err(Failure::Config(format!(
                    "attribute {attr:?} is not numeric"
                )))
            }
            None => {
                return Err(Failure::Config(format!(
                    "attribute {attr:?} does not exist in the dataset"
                )))
            }
        }
    }

    let test_fraction = args.test_fraction.or(file.test_fraction).unwrap_or(0.3);
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Failure::Config(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let split_seed = args.split_seed.or(file.split_seed).unwrap_or(perturb.seed);

    Ok(Run {
        dataset,
        build,
        perturb,
        test_fraction,
        split_seed,
    })
}
