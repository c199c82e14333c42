//! Tree-guided perturbation: path-scaled Gaussian noise on numeric
//! attributes, per-leaf categorical shuffling, and modular wrapping that
//! keeps values inside their declared domains.
//!
//! The full pipeline is original-referenced: the tree is built once on the
//! unperturbed data, and every stage routes records using the original
//! values, so the stages compose without feedback.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{
    compute_domains_with_overrides, fit_all_normals, AttrKind, AttrRole, Dataset, DomainRange,
    Granularity, NormalFit, StdConvention,
};
use crate::error::{Error, Result};
use crate::paths::{leaf_sibling_info, path_sets, route, LwpaScope};
use crate::rng::{keyed_rng, StreamId, NO_RECORD};
use crate::tree::{build, descend, BuildParams, DecisionTree};

/// Per-record vs. one-constant-per-attribute noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// Independent draw for every (record, attribute) cell.
    #[default]
    PerRecord,
    /// One standard-normal draw per attribute, shared by both noise stages
    /// and scaled by each stage's own factor, so a whole column moves by a
    /// single realized constant.
    PerAttributeConstant,
}

/// Behavior when a perturbed value leaves its domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WrapMode {
    /// Modular re-entry: integral domains wrap on the integer lattice of
    /// `width + 1` values, continuous domains wrap modulo the interval width.
    #[default]
    Modular,
    /// The overflow formula `a + d - 1` applied verbatim to underflow too,
    /// which can leave the domain. Kept for fidelity comparisons only.
    PaperLiteral,
}

/// Which columns the categorical stage rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaptTarget {
    /// Only the class column.
    #[default]
    ClassColumn,
    /// The class column plus every categorical feature column, with per-leaf
    /// majority/minority stats computed per column.
    AllCategorical,
}

/// What counts as a leaf "with siblings" for the categorical stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiblingRule {
    /// Any other child of the parent counts; only a single-leaf tree has a
    /// sibling-free leaf.
    #[default]
    Literal,
    /// Only sibling leaves count; a leaf surrounded by internal nodes is
    /// treated as sibling-free.
    LeafSiblingsOnly,
}

/// Knobs for the perturbation stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PerturbConfig {
    /// Retention probability for the categorical shuffle: a record keeps its
    /// value with probability `p`.
    pub p: f64,
    pub noise_mode: NoiseMode,
    /// Noise scale, as a multiple of the attribute deviation, for on-path
    /// attributes.
    pub noise_scale_lrpa: f64,
    /// Noise scale for off-path attributes.
    pub noise_scale_lwpa: f64,
    pub noise_mean: f64,
    pub wrap_mode: WrapMode,
    pub lwpa_scope: LwpaScope,
    pub capt_target: CaptTarget,
    pub capt_sibling_rule: SiblingRule,
    pub capt_enabled: bool,
    pub seed: u64,
    /// Fixed shifts that bypass the noise draw for the named attributes, in
    /// both noise stages.
    pub injected_shifts: BTreeMap<String, f64>,
    /// Declared `[low, high]` domains that replace the observed ranges.
    pub domain_overrides: BTreeMap<String, (f64, f64)>,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        Self {
            p: 0.9,
            noise_mode: NoiseMode::PerRecord,
            noise_scale_lrpa: 0.05,
            noise_scale_lwpa: 0.15,
            noise_mean: 0.0,
            wrap_mode: WrapMode::Modular,
            lwpa_scope: LwpaScope::AllFeatures,
            capt_target: CaptTarget::ClassColumn,
            capt_sibling_rule: SiblingRule::Literal,
            capt_enabled: true,
            seed: 0,
            injected_shifts: BTreeMap::new(),
            domain_overrides: BTreeMap::new(),
        }
    }
}

impl PerturbConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParam(format!(
                "p must be in [0, 1], got {}",
                self.p
            )));
        }
        for (name, scale) in [
            ("noise_scale_lrpa", self.noise_scale_lrpa),
            ("noise_scale_lwpa", self.noise_scale_lwpa),
        ] {
            if !scale.is_finite() || scale < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "{name} must be finite and non-negative, got {scale}"
                )));
            }
        }
        if !self.noise_mean.is_finite() {
            return Err(Error::InvalidParam(format!(
                "noise_mean must be finite, got {}",
                self.noise_mean
            )));
        }
        for (attr, shift) in &self.injected_shifts {
            if !shift.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "injected shift for {attr:?} must be finite, got {shift}"
                )));
            }
        }
        Ok(())
    }
}

/// Re-enters a value into `[a, a + width]` after it left the domain.
///
/// In-domain values pass through unchanged in both modes. Modular mode wraps:
/// on an integral lattice the wrap is modulo `width + 1` (so overflowing by
/// `d` lands on `a + d - 1`), on a continuous domain it is modulo `width`.
/// PaperLiteral applies `a + d - 1` with `d` the signed excess, verbatim.
pub fn v_wrap(value: f64, domain: &DomainRange, mode: WrapMode) -> f64 {
    let a = domain.a;
    let upper = domain.upper();
    if domain.contains(value) {
        return value;
    }
    match mode {
        WrapMode::Modular => match domain.granularity {
            Granularity::Integral => {
                let r = a + euclid_rem(value - a, domain.width + 1.0);
                r.min(upper)
            }
            Granularity::Continuous => {
                if domain.width == 0.0 {
                    a
                } else {
                    a + euclid_rem(value - a, domain.width)
                }
            }
        },
        WrapMode::PaperLiteral => {
            let d = if value > upper { value - upper } else { value - a };
            a + d - 1.0
        }
    }
}

/// Remainder in `[0, modulus)` for positive `modulus`.
fn euclid_rem(v: f64, modulus: f64) -> f64 {
    let r = v % modulus;
    if r < 0.0 {
        r + modulus
    } else {
        r
    }
}

/// Per-attribute bookkeeping from one noise stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseStageReport {
    /// Cells whose value actually changed.
    pub changed_cells: BTreeMap<String, usize>,
    /// Cells that left the domain and were wrapped back.
    pub wrap_events: BTreeMap<String, usize>,
    /// The constant applied per attribute in per-attribute mode.
    pub realized_shifts: BTreeMap<String, f64>,
    /// Echo of the injected shifts that bypassed the noise draw.
    pub injected_shifts: BTreeMap<String, f64>,
}

/// Leaf-level numbers behind the categorical shuffle, one entry per
/// (leaf, target column) pair with at least one routed record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaptLeafStats {
    pub leaf_id: u32,
    pub column: String,
    /// Whether the deterministic majority branch applied.
    pub sibling_branch: bool,
    pub heterogeneous: bool,
    pub majority: String,
    /// Majority count `m`.
    pub m: usize,
    /// Minority labels with their counts `n_i` and weights `l_i`.
    pub minorities: Vec<MinorityStat>,
    /// Number of minority labels `t`.
    pub t: usize,
    /// Total minority count `k`.
    pub k: usize,
    /// Majority weight `q = m / (m + k)`.
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorityStat {
    pub label: String,
    pub count: usize,
    /// `l_i = n_i / (n_i + k)`.
    pub weight: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CaptReport {
    /// Cells rewritten to a different label, per target column.
    pub relabeled_cells: BTreeMap<String, usize>,
    pub leaf_stats: Vec<CaptLeafStats>,
}

/// Combined report of a pipeline run; standalone stage calls fill only their
/// own section.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PerturbReport {
    pub lrpa: Option<NoiseStageReport>,
    pub lwpa: Option<NoiseStageReport>,
    pub capt: Option<CaptReport>,
}

impl PerturbReport {
    /// Total number of cells that changed across all stages.
    pub fn total_changed(&self) -> usize {
        let noise: usize = [&self.lrpa, &self.lwpa]
            .into_iter()
            .flatten()
            .flat_map(|s| s.changed_cells.values())
            .sum();
        let relabels: usize = self
            .capt
            .iter()
            .flat_map(|c| c.relabeled_cells.values())
            .sum();
        noise + relabels
    }
}

/// Gaussian noise on numeric attributes along each record's own path.
pub fn ptlrpa(
    ds: &Dataset,
    tree: &DecisionTree,
    fits: &BTreeMap<String, NormalFit>,
    domains: &BTreeMap<String, DomainRange>,
    cfg: &PerturbConfig,
) -> Result<(Dataset, PerturbReport)> {
    cfg.validate()?;
    let (out, stage) = noise_stage(ds, ds, tree, fits, domains, cfg, NoiseSide::Lrpa)?;
    Ok((
        out,
        PerturbReport {
            lrpa: Some(stage),
            ..PerturbReport::default()
        },
    ))
}

/// Gaussian noise on numeric attributes *off* each record's path.
pub fn ptlwpa(
    ds: &Dataset,
    tree: &DecisionTree,
    fits: &BTreeMap<String, NormalFit>,
    domains: &BTreeMap<String, DomainRange>,
    cfg: &PerturbConfig,
) -> Result<(Dataset, PerturbReport)> {
    cfg.validate()?;
    let (out, stage) = noise_stage(ds, ds, tree, fits, domains, cfg, NoiseSide::Lwpa)?;
    Ok((
        out,
        PerturbReport {
            lwpa: Some(stage),
            ..PerturbReport::default()
        },
    ))
}

/// Per-leaf categorical shuffle.
pub fn capt(ds: &Dataset, tree: &DecisionTree, cfg: &PerturbConfig) -> Result<(Dataset, PerturbReport)> {
    cfg.validate()?;
    let (out, report) = capt_with_routing(ds, ds, tree, cfg)?;
    Ok((
        out,
        PerturbReport {
            capt: Some(report),
            ..PerturbReport::default()
        },
    ))
}

/// Everything a full run produces.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub perturbed: Dataset,
    /// The tree built on the original data that guided all stages.
    pub tree: DecisionTree,
    pub report: PerturbReport,
}

/// Builds the guide tree on the original data, fits domains and normals, then
/// applies on-path noise, off-path noise and the categorical shuffle in
/// order. All routing uses original values, so stage effects are disjoint.
pub fn pipeline(ds: &Dataset, params: &BuildParams, cfg: &PerturbConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    let tree = build(ds, params)?;
    let domains = compute_domains_with_overrides(ds, &cfg.domain_overrides)?;
    let fits = fit_all_normals(ds, StdConvention::Population);

    let (after_lrpa, lrpa) = noise_stage(ds, ds, &tree, &fits, &domains, cfg, NoiseSide::Lrpa)?;
    let (after_lwpa, lwpa) =
        noise_stage(ds, &after_lrpa, &tree, &fits, &domains, cfg, NoiseSide::Lwpa)?;
    let (perturbed, capt) = if cfg.capt_enabled {
        let (d, r) = capt_with_routing(ds, &after_lwpa, &tree, cfg)?;
        (d, Some(r))
    } else {
        (after_lwpa, None)
    };

    Ok(PipelineOutcome {
        perturbed,
        tree,
        report: PerturbReport {
            lrpa: Some(lrpa),
            lwpa: Some(lwpa),
            capt,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NoiseSide {
    Lrpa,
    Lwpa,
}

/// One noise stage. `route_ds` supplies the values used for routing (the
/// original data in a pipeline); `data_ds` supplies the values being noised.
fn noise_stage(
    route_ds: &Dataset,
    data_ds: &Dataset,
    tree: &DecisionTree,
    fits: &BTreeMap<String, NormalFit>,
    domains: &BTreeMap<String, DomainRange>,
    cfg: &PerturbConfig,
    side: NoiseSide,
) -> Result<(Dataset, NoiseStageReport)> {
    let (scale, stream) = match side {
        NoiseSide::Lrpa => (cfg.noise_scale_lrpa, StreamId::LrpaNoise),
        NoiseSide::Lwpa => (cfg.noise_scale_lwpa, StreamId::LwpaNoise),
    };
    let mut out = data_ds.clone();
    let mut report = NoiseStageReport::default();

    let numeric_features: Vec<(usize, &str)> = data_ds
        .attributes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.kind == AttrKind::Numeric && a.role == AttrRole::Feature)
        .map(|(i, a)| (i, a.name.as_str()))
        .collect();

    // Shared standard-normal constants for per-attribute mode. Both stages
    // key these identically, so equal scales move a column uniformly.
    let mut constants: BTreeMap<usize, f64> = BTreeMap::new();
    if cfg.noise_mode == NoiseMode::PerAttributeConstant {
        for &(col, name) in &numeric_features {
            let z: f64 = standard_normal(&mut keyed_rng(
                cfg.seed,
                StreamId::AttributeConstant,
                NO_RECORD,
                col as u64,
            ));
            let fit = fits
                .get(name)
                .ok_or_else(|| Error::MissingFit(name.to_string()))?;
            let eps = cfg
                .injected_shifts
                .get(name)
                .copied()
                .unwrap_or(cfg.noise_mean + scale * fit.std * z);
            report.realized_shifts.insert(name.to_string(), eps);
            constants.insert(col, eps);
        }
    }
    for (name, shift) in &cfg.injected_shifts {
        report.injected_shifts.insert(name.clone(), *shift);
    }

    for row in 0..data_ds.n_rows() {
        let path = route(tree, route_ds, row)?;
        let sets = path_sets(&path, tree, cfg.lwpa_scope);
        let targets = match side {
            NoiseSide::Lrpa => &sets.lrpa,
            NoiseSide::Lwpa => &sets.lwpa,
        };
        for &(col, name) in &numeric_features {
            if !targets.contains(name) {
                continue;
            }
            let fit = fits
                .get(name)
                .ok_or_else(|| Error::MissingFit(name.to_string()))?;
            let domain = domains
                .get(name)
                .ok_or_else(|| Error::MissingDomain(name.to_string()))?;
            let eps = match cfg.noise_mode {
                NoiseMode::PerAttributeConstant => constants[&col],
                NoiseMode::PerRecord => cfg.injected_shifts.get(name).copied().unwrap_or_else(|| {
                    let mut rng = keyed_rng(cfg.seed, stream, row as u64, col as u64);
                    cfg.noise_mean + scale * fit.std * standard_normal(&mut rng)
                }),
            };
            if eps == 0.0 {
                continue;
            }
            let old = data_ds.numeric_value(row, col)?;
            let mut new = old + eps;
            if !domain.contains(new) {
                new = v_wrap(new, domain, cfg.wrap_mode);
                *report.wrap_events.entry(name.to_string()).or_default() += 1;
            }
            if new != old {
                out.set_numeric(row, col, new);
                *report.changed_cells.entry(name.to_string()).or_default() += 1;
            }
        }
    }
    Ok((out, report))
}

fn standard_normal(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    Normal::new(0.0, 1.0)
        .expect("unit normal is valid")
        .sample(rng)
}

/// Label statistics for one (leaf, column) pair.
struct LeafColumnStats {
    majority: String,
    m: usize,
    minorities: Vec<(String, usize)>,
    k: usize,
}

impl LeafColumnStats {
    fn from_counts(counts: &BTreeMap<String, usize>) -> Option<Self> {
        let mut majority: Option<(&String, usize)> = None;
        for (label, &count) in counts {
            if majority.map_or(true, |(_, c)| count > c) {
                majority = Some((label, count));
            }
        }
        let (majority, m) = majority?;
        let minorities: Vec<(String, usize)> = counts
            .iter()
            .filter(|(l, _)| *l != majority)
            .map(|(l, &c)| (l.clone(), c))
            .collect();
        let k = minorities.iter().map(|(_, c)| c).sum();
        Some(Self {
            majority: majority.clone(),
            m,
            minorities,
            k,
        })
    }

    fn q(&self) -> f64 {
        self.m as f64 / (self.m + self.k) as f64
    }

    fn weights(&self) -> Vec<(String, f64)> {
        let mut out = vec![(self.majority.clone(), self.q())];
        for (label, n_i) in &self.minorities {
            out.push((label.clone(), *n_i as f64 / (*n_i + self.k) as f64));
        }
        out
    }
}

fn capt_with_routing(
    route_ds: &Dataset,
    data_ds: &Dataset,
    tree: &DecisionTree,
    cfg: &PerturbConfig,
) -> Result<(Dataset, CaptReport)> {
    let mut out = data_ds.clone();
    let mut report = CaptReport::default();

    let mut target_cols: Vec<usize> = vec![data_ds.class_index()];
    if cfg.capt_target == CaptTarget::AllCategorical {
        for (i, a) in data_ds.attributes().iter().enumerate() {
            if a.kind == AttrKind::Categorical && a.role == AttrRole::Feature {
                target_cols.push(i);
            }
        }
        target_cols.sort_unstable();
    }

    // Leaf routing and per-(leaf, column) label counts over original values.
    let mut leaf_of_row = Vec::with_capacity(route_ds.n_rows());
    let mut counts: BTreeMap<(u32, usize), BTreeMap<String, usize>> = BTreeMap::new();
    for row in 0..route_ds.n_rows() {
        let leaf = descend(tree, route_ds, row)?.leaf_id;
        leaf_of_row.push(leaf);
        for &col in &target_cols {
            *counts
                .entry((leaf, col))
                .or_default()
                .entry(route_ds.label_value(row, col)?.to_string())
                .or_default() += 1;
        }
    }

    let siblings = leaf_sibling_info(tree);
    let mut stats: BTreeMap<(u32, usize), LeafColumnStats> = BTreeMap::new();
    for (key, c) in &counts {
        let s = LeafColumnStats::from_counts(c).expect("populated leaves only");
        let info = siblings[&key.0];
        let sibling_branch = match cfg.capt_sibling_rule {
            SiblingRule::Literal => info.has_siblings,
            SiblingRule::LeafSiblingsOnly => info.has_leaf_sibling,
        };
        report.leaf_stats.push(CaptLeafStats {
            leaf_id: key.0,
            column: data_ds.attributes()[key.1].name.clone(),
            sibling_branch,
            heterogeneous: !s.minorities.is_empty(),
            majority: s.majority.clone(),
            m: s.m,
            minorities: s
                .minorities
                .iter()
                .map(|(label, n_i)| MinorityStat {
                    label: label.clone(),
                    count: *n_i,
                    weight: *n_i as f64 / (*n_i + s.k) as f64,
                })
                .collect(),
            t: s.minorities.len(),
            k: s.k,
            q: s.q(),
        });
        stats.insert(*key, s);
    }

    for row in 0..data_ds.n_rows() {
        let leaf = leaf_of_row[row];
        let info = siblings[&leaf];
        for &col in &target_cols {
            let s = &stats[&(leaf, col)];
            let sibling_branch = match cfg.capt_sibling_rule {
                SiblingRule::Literal => info.has_siblings,
                SiblingRule::LeafSiblingsOnly => info.has_leaf_sibling,
            };
            let name = data_ds.attributes()[col].name.clone();
            let old = data_ds.label_value(row, col)?.to_string();
            let new = if sibling_branch {
                // Leaves with siblings collapse to their majority label.
                s.majority.clone()
            } else if s.minorities.is_empty() {
                continue;
            } else {
                let mut rng = keyed_rng(cfg.seed, StreamId::Capt, row as u64, col as u64);
                let keep: f64 = rng.gen();
                if keep < 1.0 - cfg.p {
                    let weights = s.weights();
                    let total: f64 = weights.iter().map(|(_, w)| w).sum();
                    let mut pick: f64 = rng.gen::<f64>() * total;
                    let mut chosen = weights.last().expect("non-empty").0.clone();
                    for (label, w) in &weights {
                        if pick < *w {
                            chosen = label.clone();
                            break;
                        }
                        pick -= w;
                    }
                    chosen
                } else {
                    continue;
                }
            };
            if new != old {
                out.set_label(row, col, &new);
                *report.relabeled_cells.entry(name).or_default() += 1;
            }
        }
    }
    Ok((out, report))
}
