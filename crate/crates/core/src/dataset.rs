//! Tabular datasets: schema declaration, strict CSV loading, attribute
//! domains, normal fits and seeded train/test splitting.
//!
//! A [`Dataset`] is column-major: numeric columns hold `f64` values,
//! categorical columns hold interned label codes. Ignored schema columns are
//! dropped at load time and never reach the rest of the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether an attribute holds numbers or labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttrKind {
    Numeric,
    Categorical,
}

/// How an attribute participates in learning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttrRole {
    #[default]
    Feature,
    Class,
    Ignored,
}

/// One column declaration: name, kind and role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDescriptor {
    pub name: String,
    pub kind: AttrKind,
    #[serde(default)]
    pub role: AttrRole,
}

impl AttributeDescriptor {
    pub fn numeric(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: AttrKind::Numeric,
            role: AttrRole::Feature,
        }
    }

    pub fn categorical(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: AttrKind::Categorical,
            role: AttrRole::Feature,
        }
    }

    pub fn class(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: AttrKind::Categorical,
            role: AttrRole::Class,
        }
    }

    pub fn ignored(name: &str) -> Self {
        Self {
            name: name.to_string(),
            kind: AttrKind::Categorical,
            role: AttrRole::Ignored,
        }
    }
}

/// Ordered column declarations for a CSV file.
///
/// Exactly one column must carry [`AttrRole::Class`] and it must be
/// categorical. Names must be unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub attributes: Vec<AttributeDescriptor>,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeDescriptor>) -> Result<Self> {
        let schema = Self { attributes };
        schema.validate(true)?;
        Ok(schema)
    }

    /// A schema with no class column yet, for loaders that derive one.
    pub fn without_class(attributes: Vec<AttributeDescriptor>) -> Result<Self> {
        let schema = Self { attributes };
        schema.validate(false)?;
        Ok(schema)
    }

    fn validate(&self, want_class: bool) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(Error::InvalidSchema("no attributes declared".into()));
        }
        for (i, a) in self.attributes.iter().enumerate() {
            if self.attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidSchema(format!(
                    "duplicate attribute name {:?}",
                    a.name
                )));
            }
        }
        let classes: Vec<_> = self
            .attributes
            .iter()
            .filter(|a| a.role == AttrRole::Class)
            .collect();
        match (want_class, classes.len()) {
            (true, 1) => {
                if classes[0].kind != AttrKind::Categorical {
                    return Err(Error::InvalidSchema(format!(
                        "class attribute {:?} must be categorical",
                        classes[0].name
                    )));
                }
            }
            (true, n) => {
                return Err(Error::InvalidSchema(format!(
                    "expected exactly one class attribute, found {n}"
                )));
            }
            (false, 0) => {}
            (false, n) => {
                return Err(Error::InvalidSchema(format!(
                    "expected no class attribute here, found {n}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Column {
    Numeric(Vec<f64>),
    Categorical { codes: Vec<u32>, labels: Vec<String> },
}

/// An in-memory table with a validated schema.
///
/// Rows are addressed by index; cells by `(row, column)` where `column` is the
/// index into [`Dataset::attributes`] (ignored schema columns are gone).
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    attrs: Vec<AttributeDescriptor>,
    columns: Vec<Column>,
    n_rows: usize,
    class_idx: usize,
}

impl Dataset {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn attributes(&self) -> &[AttributeDescriptor] {
        &self.attrs
    }

    pub fn attr_index(&self, name: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a.name == name)
    }

    pub fn class_index(&self) -> usize {
        self.class_idx
    }

    pub fn class_name(&self) -> &str {
        &self.attrs[self.class_idx].name
    }

    /// Column indices of feature attributes, in schema order.
    pub fn feature_indices(&self) -> Vec<usize> {
        self.attrs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.role == AttrRole::Feature)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_numeric(&self, col: usize) -> bool {
        self.attrs[col].kind == AttrKind::Numeric
    }

    /// All values of a numeric column.
    pub fn numeric_column(&self, col: usize) -> Result<&[f64]> {
        match &self.columns[col] {
            Column::Numeric(v) => Ok(v),
            Column::Categorical { .. } => Err(Error::NotNumeric(self.attrs[col].name.clone())),
        }
    }

    pub fn numeric_value(&self, row: usize, col: usize) -> Result<f64> {
        Ok(self.numeric_column(col)?[row])
    }

    /// The label of a categorical cell.
    pub fn label_value(&self, row: usize, col: usize) -> Result<&str> {
        match &self.columns[col] {
            Column::Categorical { codes, labels } => Ok(&labels[codes[row] as usize]),
            Column::Numeric(_) => Err(Error::NotCategorical(self.attrs[col].name.clone())),
        }
    }

    /// Interned label table of a categorical column, in first-appearance order.
    pub fn labels(&self, col: usize) -> Result<&[String]> {
        match &self.columns[col] {
            Column::Categorical { labels, .. } => Ok(labels),
            Column::Numeric(_) => Err(Error::NotCategorical(self.attrs[col].name.clone())),
        }
    }

    /// Label code of a categorical cell (index into [`Dataset::labels`]).
    pub fn label_code(&self, row: usize, col: usize) -> Result<u32> {
        match &self.columns[col] {
            Column::Categorical { codes, .. } => Ok(codes[row]),
            Column::Numeric(_) => Err(Error::NotCategorical(self.attrs[col].name.clone())),
        }
    }

    pub fn class_label(&self, row: usize) -> &str {
        self.label_value(row, self.class_idx)
            .expect("class column is categorical by construction")
    }

    pub(crate) fn set_numeric(&mut self, row: usize, col: usize, value: f64) {
        match &mut self.columns[col] {
            Column::Numeric(v) => v[row] = value,
            Column::Categorical { .. } => unreachable!("numeric write to categorical column"),
        }
    }

    /// Rewrites a categorical cell to a label already present in the column.
    pub(crate) fn set_label(&mut self, row: usize, col: usize, label: &str) {
        match &mut self.columns[col] {
            Column::Categorical { codes, labels } => {
                let code = labels
                    .iter()
                    .position(|l| l == label)
                    .expect("relabel target must already be interned");
                codes[row] = code as u32;
            }
            Column::Numeric(_) => unreachable!("label write to numeric column"),
        }
    }

    /// Builds a dataset directly from typed columns. Mostly useful for
    /// generated fixtures; CSV files go through [`load_csv`].
    pub fn from_columns(
        attrs: Vec<AttributeDescriptor>,
        numeric: BTreeMap<String, Vec<f64>>,
        categorical: BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let schema = Schema::new(attrs.clone())?;
        if schema.attributes.iter().any(|a| a.role == AttrRole::Ignored) {
            return Err(Error::InvalidSchema(
                "from_columns does not accept ignored attributes".into(),
            ));
        }
        let mut n_rows = None;
        let mut columns = Vec::with_capacity(attrs.len());
        for a in &attrs {
            let col = match a.kind {
                AttrKind::Numeric => {
                    let values = numeric
                        .get(&a.name)
                        .ok_or_else(|| Error::UnknownAttribute(a.name.clone()))?;
                    for (row, v) in values.iter().enumerate() {
                        if !v.is_finite() {
                            return Err(Error::ParseNumeric {
                                row: row + 1,
                                column: a.name.clone(),
                                value: v.to_string(),
                            });
                        }
                    }
                    Column::Numeric(values.clone())
                }
                AttrKind::Categorical => {
                    let values = categorical
                        .get(&a.name)
                        .ok_or_else(|| Error::UnknownAttribute(a.name.clone()))?;
                    let mut labels: Vec<String> = Vec::new();
                    let mut codes = Vec::with_capacity(values.len());
                    for v in values {
                        let code = match labels.iter().position(|l| l == v) {
                            Some(c) => c,
                            None => {
                                labels.push(v.clone());
                                labels.len() - 1
                            }
                        };
                        codes.push(code as u32);
                    }
                    Column::Categorical { codes, labels }
                }
            };
            let len = match &col {
                Column::Numeric(v) => v.len(),
                Column::Categorical { codes, .. } => codes.len(),
            };
            match n_rows {
                None => n_rows = Some(len),
                Some(n) if n != len => {
                    return Err(Error::InvalidSchema(format!(
                        "column {:?} has {len} rows, expected {n}",
                        a.name
                    )));
                }
                _ => {}
            }
            columns.push(col);
        }
        let n_rows = n_rows.unwrap_or(0);
        if n_rows == 0 {
            return Err(Error::EmptyBody);
        }
        let class_idx = attrs
            .iter()
            .position(|a| a.role == AttrRole::Class)
            .expect("schema validated");
        Ok(Self {
            attrs,
            columns,
            n_rows,
            class_idx,
        })
    }

    /// A new dataset containing only the given rows, in the given order.
    /// Label tables are carried over unchanged.
    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyBody);
        }
        let columns = self
            .columns
            .iter()
            .map(|c| match c {
                Column::Numeric(v) => Column::Numeric(rows.iter().map(|&r| v[r]).collect()),
                Column::Categorical { codes, labels } => Column::Categorical {
                    codes: rows.iter().map(|&r| codes[r]).collect(),
                    labels: labels.clone(),
                },
            })
            .collect();
        Ok(Self {
            attrs: self.attrs.clone(),
            columns,
            n_rows: rows.len(),
            class_idx: self.class_idx,
        })
    }

    /// Serializes the table back to CSV, numeric cells in shortest
    /// round-trip form. Header and row order match the in-memory layout.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.attrs.iter().map(|a| a.name.as_str()).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.n_rows {
            let mut fields = Vec::with_capacity(self.attrs.len());
            for col in 0..self.attrs.len() {
                match &self.columns[col] {
                    Column::Numeric(v) => fields.push(format_number(v[row])),
                    Column::Categorical { codes, labels } => {
                        fields.push(labels[codes[row] as usize].clone())
                    }
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest decimal form that round-trips through `f64` parsing.
pub(crate) fn format_number(v: f64) -> String {
    format!("{v}")
}

/// Inclusive attribute domain `[a, a + width]`.
///
/// `granularity` records whether the observed values all sat on the integer
/// lattice; wrapping behaves differently on lattices (see `perturb::v_wrap`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainRange {
    /// Lower bound.
    pub a: f64,
    /// Non-negative width; the upper bound is `a + width`.
    pub width: f64,
    pub granularity: Granularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Granularity {
    Integral,
    Continuous,
}

impl DomainRange {
    pub fn new(a: f64, width: f64, granularity: Granularity) -> Result<Self> {
        if !a.is_finite() || !width.is_finite() || width < 0.0 {
            return Err(Error::InvalidParam(format!(
                "domain lower bound {a} and width {width} must be finite, width non-negative"
            )));
        }
        Ok(Self {
            a,
            width,
            granularity,
        })
    }

    pub fn upper(&self) -> f64 {
        self.a + self.width
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.a && value <= self.upper()
    }
}

impl fmt::Display for DomainRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.upper())
    }
}

/// Observed `[min, max]` of every numeric feature attribute.
pub fn compute_domains(ds: &Dataset) -> BTreeMap<String, DomainRange> {
    let mut out = BTreeMap::new();
    for (i, a) in ds.attributes().iter().enumerate() {
        if a.kind != AttrKind::Numeric {
            continue;
        }
        let values = ds.numeric_column(i).expect("kind checked");
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let granularity = if values.iter().all(|v| v.fract() == 0.0) {
            Granularity::Integral
        } else {
            Granularity::Continuous
        };
        out.insert(
            a.name.clone(),
            DomainRange {
                a: min,
                width: max - min,
                granularity,
            },
        );
    }
    out
}

/// Observed domains, with caller-declared `[low, high]` ranges replacing the
/// observed ones for the named attributes. Declared ranges win even when the
/// data falls outside them.
pub fn compute_domains_with_overrides(
    ds: &Dataset,
    overrides: &BTreeMap<String, (f64, f64)>,
) -> Result<BTreeMap<String, DomainRange>> {
    let mut out = compute_domains(ds);
    for (name, &(low, high)) in overrides {
        let idx = ds
            .attr_index(name)
            .ok_or_else(|| Error::UnknownAttribute(name.clone()))?;
        if !ds.is_numeric(idx) {
            return Err(Error::NotNumeric(name.clone()));
        }
        if !(low.is_finite() && high.is_finite() && low <= high) {
            return Err(Error::InvalidParam(format!(
                "domain override for {name:?} must satisfy low <= high, got [{low}, {high}]"
            )));
        }
        let granularity = out
            .get(name)
            .map(|d| d.granularity)
            .unwrap_or(Granularity::Continuous);
        out.insert(
            name.clone(),
            DomainRange {
                a: low,
                width: high - low,
                granularity,
            },
        );
    }
    Ok(out)
}

/// Gaussian summary of a numeric attribute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFit {
    pub mean: f64,
    pub std: f64,
}

/// Which denominator the standard deviation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdConvention {
    /// Divide by `n` (the default).
    Population,
    /// Divide by `n - 1`.
    Sample,
}

/// Mean and population standard deviation of a numeric attribute.
pub fn fit_normal(ds: &Dataset, attr: &str) -> Result<NormalFit> {
    fit_normal_with(ds, attr, StdConvention::Population)
}

pub fn fit_normal_with(ds: &Dataset, attr: &str, convention: StdConvention) -> Result<NormalFit> {
    let idx = ds
        .attr_index(attr)
        .ok_or_else(|| Error::UnknownAttribute(attr.to_string()))?;
    let values = ds.numeric_column(idx)?;
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let denom = match convention {
        StdConvention::Population => n,
        StdConvention::Sample => n - 1.0,
    };
    let std = if denom > 0.0 { (ss / denom).sqrt() } else { 0.0 };
    Ok(NormalFit { mean, std })
}

/// Normal fits for every numeric feature attribute.
pub fn fit_all_normals(ds: &Dataset, convention: StdConvention) -> BTreeMap<String, NormalFit> {
    let mut out = BTreeMap::new();
    for a in ds.attributes() {
        if a.kind == AttrKind::Numeric {
            let fit = fit_normal_with(ds, &a.name, convention).expect("numeric attribute exists");
            out.insert(a.name.clone(), fit);
        }
    }
    out
}

/// Result of [`split_train_test`]. `stratified` is false when some class had
/// fewer than two records and the split fell back to a plain shuffle.
#[derive(Debug, Clone)]
pub struct TrainTestSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub stratified: bool,
}

/// Seeded, class-stratified split. `test_fraction` of the rows go to the test
/// partition, with per-class counts within one record of the exact quota.
pub fn split_train_test(ds: &Dataset, test_fraction: f64, seed: u64) -> Result<TrainTestSplit> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParam(format!(
            "test_fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::InvalidParam(
            "need at least two rows to split".into(),
        ));
    }
    let total_test = ((n as f64) * test_fraction).round() as usize;
    let total_test = total_test.clamp(1, n - 1);

    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for row in 0..n {
        by_class.entry(ds.class_label(row)).or_default().push(row);
    }
    let stratified = by_class.values().all(|rows| rows.len() >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (mut test_rows, mut train_rows) = (Vec::new(), Vec::new());
    if stratified {
        // Largest-remainder quotas so per-class counts stay within one record
        // of n_c * fraction while summing to the overall target.
        let mut quotas: Vec<(&str, usize, f64)> = by_class
            .iter()
            .map(|(label, rows)| {
                let exact = rows.len() as f64 * test_fraction;
                (*label, exact.floor() as usize, exact - exact.floor())
            })
            .collect();
        let mut assigned: usize = quotas.iter().map(|q| q.1).sum();
        quotas.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap().then(a.0.cmp(b.0)));
        let mut i = 0;
        while assigned < total_test && i < quotas.len() {
            quotas[i].1 += 1;
            assigned += 1;
            i += 1;
        }
        let mut take: BTreeMap<&str, usize> = quotas.iter().map(|q| (q.0, q.1)).collect();
        for (label, rows) in &by_class {
            let mut rows = rows.clone();
            rows.shuffle(&mut rng);
            let t = take.remove(label).unwrap_or(0).min(rows.len() - 1);
            test_rows.extend_from_slice(&rows[..t]);
            train_rows.extend_from_slice(&rows[t..]);
        }
    } else {
        let mut rows: Vec<usize> = (0..n).collect();
        rows.shuffle(&mut rng);
        test_rows.extend_from_slice(&rows[..total_test]);
        train_rows.extend_from_slice(&rows[total_test..]);
    }
    test_rows.sort_unstable();
    train_rows.sort_unstable();
    Ok(TrainTestSplit {
        train: ds.subset(&train_rows)?,
        test: ds.subset(&test_rows)?,
        stratified,
    })
}

/// Strict CSV loader: comma separator, one header row that must equal the
/// schema names in order, no quoting, no missing values.
pub fn load_csv(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(&text, schema)
}

/// [`load_csv`] over an in-memory string.
pub fn parse_csv(text: &str, schema: &Schema) -> Result<Dataset> {
    schema.validate(true)?;
    let raw = parse_rows(text, schema)?;
    finish_columns(schema, raw)
}

/// Per-row threshold rule used by [`load_csv_derive_class`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeriveClassRule {
    /// Numeric source column, consumed by the derivation.
    pub source: String,
    /// Values strictly above this percentile (nearest-rank, computed over the
    /// whole file) get `above_label`; the rest get `below_label`.
    pub percentile: f64,
    pub above_label: String,
    pub below_label: String,
    /// Name of the new class column.
    pub class_name: String,
}

/// Loads a CSV that has no class column and derives one by thresholding a
/// numeric column at a percentile of its own values. The source column is
/// replaced by the derived class in place.
pub fn load_csv_derive_class(
    path: impl AsRef<Path>,
    schema: &Schema,
    rule: &DeriveClassRule,
) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv_derive_class(&text, schema, rule)
}

pub fn parse_csv_derive_class(text: &str, schema: &Schema, rule: &DeriveClassRule) -> Result<Dataset> {
    schema.validate(false)?;
    if !(rule.percentile > 0.0 && rule.percentile < 100.0) {
        return Err(Error::InvalidParam(format!(
            "percentile must be in (0, 100), got {}",
            rule.percentile
        )));
    }
    let src_pos = match schema.attributes.iter().position(|a| a.name == rule.source) {
        Some(pos) if schema.attributes[pos].role == AttrRole::Ignored => {
            return Err(Error::InvalidSchema(format!(
                "derive-class source {:?} is marked ignored; the source is replaced by the class column and cannot be ignored",
                rule.source
            )))
        }
        Some(pos) => pos,
        None => return Err(Error::UnknownAttribute(rule.source.clone())),
    };
    if schema.attributes[src_pos].kind != AttrKind::Numeric {
        return Err(Error::NotNumeric(rule.source.clone()));
    }

    let raw = parse_rows(text, schema)?;
    let source_values: Vec<f64> = raw
        .iter()
        .map(|row| {
            let active_idx = schema.attributes[..src_pos]
                .iter()
                .filter(|a| a.role != AttrRole::Ignored)
                .count();
            match &row[active_idx] {
                RawCell::Num(v) => *v,
                RawCell::Label(_) => unreachable!("source column parsed numeric"),
            }
        })
        .collect();

    // Nearest-rank percentile over the full file, before any splitting.
    let mut sorted = source_values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rank = ((rule.percentile / 100.0) * sorted.len() as f64).ceil() as usize;
    let threshold = sorted[rank.clamp(1, sorted.len()) - 1];

    let mut attrs = schema.attributes.clone();
    attrs[src_pos] = AttributeDescriptor {
        name: rule.class_name.clone(),
        kind: AttrKind::Categorical,
        role: AttrRole::Class,
    };
    let derived = Schema::new(attrs)?;

    let active_src = schema.attributes[..src_pos]
        .iter()
        .filter(|a| a.role != AttrRole::Ignored)
        .count();
    let raw = raw
        .into_iter()
        .zip(source_values)
        .map(|(mut row, v)| {
            let label = if v > threshold {
                rule.above_label.clone()
            } else {
                rule.below_label.clone()
            };
            row[active_src] = RawCell::Label(label);
            row
        })
        .collect();
    finish_columns(&derived, raw)
}

enum RawCell {
    Num(f64),
    Label(String),
}

/// Header check plus parsing of every non-ignored cell.
fn parse_rows(text: &str, schema: &Schema) -> Result<Vec<Vec<RawCell>>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let expected: Vec<&str> = schema.attributes.iter().map(|a| a.name.as_str()).collect();
    let found: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
    if found != expected {
        return Err(Error::HeaderMismatch {
            expected: expected.join(", "),
            found: found.join(", "),
        });
    }

    let mut rows = Vec::new();
    for (line_no, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() && rows.len() + 1 == text.lines().count() - 1 {
            // A single trailing blank line after the last record is fine.
            continue;
        }
        let row_no = line_no + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != schema.attributes.len() {
            return Err(Error::RaggedRow {
                row: row_no,
                expected: schema.attributes.len(),
                found: fields.len(),
            });
        }
        let mut row = Vec::new();
        for (a, field) in schema.attributes.iter().zip(&fields) {
            if a.role == AttrRole::Ignored {
                continue;
            }
            let field = field.trim();
            if field.is_empty() {
                return Err(Error::MissingValue {
                    row: row_no,
                    column: a.name.clone(),
                });
            }
            row.push(match a.kind {
                AttrKind::Numeric => {
                    let v: f64 = field.parse().map_err(|_| Error::ParseNumeric {
                        row: row_no,
                        column: a.name.clone(),
                        value: field.to_string(),
                    })?;
                    if !v.is_finite() {
                        return Err(Error::ParseNumeric {
                            row: row_no,
                            column: a.name.clone(),
                            value: field.to_string(),
                        });
                    }
                    RawCell::Num(v)
                }
                AttrKind::Categorical => RawCell::Label(field.to_string()),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyBody);
    }
    Ok(rows)
}

fn finish_columns(schema: &Schema, rows: Vec<Vec<RawCell>>) -> Result<Dataset> {
    let attrs: Vec<AttributeDescriptor> = schema
        .attributes
        .iter()
        .filter(|a| a.role != AttrRole::Ignored)
        .cloned()
        .collect();
    let n_rows = rows.len();
    let mut columns = Vec::with_capacity(attrs.len());
    for (i, a) in attrs.iter().enumerate() {
        match a.kind {
            AttrKind::Numeric => {
                let mut v = Vec::with_capacity(n_rows);
                for row in &rows {
                    match &row[i] {
                        RawCell::Num(x) => v.push(*x),
                        RawCell::Label(_) => unreachable!("kind checked at parse"),
                    }
                }
                columns.push(Column::Numeric(v));
            }
            AttrKind::Categorical => {
                let mut labels: Vec<String> = Vec::new();
                let mut codes = Vec::with_capacity(n_rows);
                for row in &rows {
                    let s = match &row[i] {
                        RawCell::Label(s) => s,
                        RawCell::Num(_) => unreachable!("kind checked at parse"),
                    };
                    let code = match labels.iter().position(|l| l == s) {
                        Some(c) => c,
                        None => {
                            labels.push(s.clone());
                            labels.len() - 1
                        }
                    };
                    codes.push(code as u32);
                }
                columns.push(Column::Categorical { codes, labels });
            }
        }
    }
    let class_idx = attrs
        .iter()
        .position(|a| a.role == AttrRole::Class)
        .expect("schema validated");
    Ok(Dataset {
        attrs,
        columns,
        n_rows,
        class_idx,
    })
}

const LIVER_CSV: &str = "\
LiverSize,PatientsWeight,EatsPizza,Class
NORMAL,70,YES,CLASS1
NORMAL,90,YES,CLASS2
NORMAL,85,NO,CLASS2
NORMAL,95,NO,CLASS2
NORMAL,70,NO,CLASS1
ENLARGED,90,YES,CLASS1
ENLARGED,78,NO,CLASS1
ENLARGED,65,YES,CLASS1
ENLARGED,75,NO,CLASS1
SHRINKED,80,YES,CLASS2
SHRINKED,70,YES,CLASS2
SHRINKED,80,NO,CLASS1
SHRINKED,80,NO,CLASS1
SHRINKED,96,NO,CLASS1
";

/// Schema of the embedded liver sample.
pub fn liver_schema() -> Schema {
    Schema::new(vec![
        AttributeDescriptor::categorical("LiverSize"),
        AttributeDescriptor::numeric("PatientsWeight"),
        AttributeDescriptor::categorical("EatsPizza"),
        AttributeDescriptor::class("Class"),
    ])
    .expect("static schema is valid")
}

/// The 14-record liver-diagnosis walkthrough table, byte-stable across calls.
pub fn embedded_liver_sample() -> Dataset {
    parse_csv(LIVER_CSV, &liver_schema()).expect("embedded fixture parses")
}

/// CSV text of the embedded liver sample.
pub fn embedded_liver_csv() -> &'static str {
    LIVER_CSV
}
