//! Real-data CSV ingestion: median imputation for numeric columns
//! (statistics from training rows only), one-hot recoding of categoricals
//! with an extra missing level, pass-through binaries, and train/eval
//! splitting by a period column or a head fraction.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fraudloss::dataset::Dataset;
use fraudloss::error::{Error, Result};
use fraudloss::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Numeric,
    Categorical,
    Binary,
}

/// Declarative description of a CSV's layout and split rule.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestionSpec {
    pub label: String,
    #[serde(default)]
    pub period_column: Option<String>,
    /// Rows whose period is listed here form the training set.
    #[serde(default)]
    pub train_periods: Option<Vec<i64>>,
    /// Evaluation periods; defaults to the complement of `train_periods`.
    #[serde(default)]
    pub eval_periods: Option<Vec<i64>>,
    /// Alternative split: the leading fraction of rows trains.
    #[serde(default)]
    pub train_fraction: Option<f64>,
    #[serde(default)]
    pub numeric: Vec<String>,
    #[serde(default)]
    pub categorical: Vec<String>,
    #[serde(default)]
    pub binary: Vec<String>,
    /// Role for columns not named in any list; without it every column
    /// must be covered explicitly.
    #[serde(default)]
    pub default_role: Option<Role>,
}

/// Fitted preprocessing state, stored with the model so evaluation applies
/// the same transform.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestionMetadata {
    pub label: String,
    pub period_column: Option<String>,
    pub columns: Vec<ColumnEncoder>,
    pub feature_names: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum ColumnEncoder {
    /// Missing values impute to the training median.
    Numeric { name: String, median: f64 },
    /// 0/1 column; missing values impute to the training median.
    Binary { name: String, median: f64 },
    /// One indicator per training level plus a missing indicator; unseen
    /// evaluation levels map to the missing indicator.
    Categorical { name: String, levels: Vec<String> },
}

impl ColumnEncoder {
    fn name(&self) -> &str {
        match self {
            ColumnEncoder::Numeric { name, .. }
            | ColumnEncoder::Binary { name, .. }
            | ColumnEncoder::Categorical { name, .. } => name,
        }
    }

    fn width(&self) -> usize {
        match self {
            ColumnEncoder::Numeric { .. } | ColumnEncoder::Binary { .. } => 1,
            ColumnEncoder::Categorical { levels, .. } => levels.len() + 1,
        }
    }

    fn push_feature_names(&self, out: &mut Vec<String>) {
        match self {
            ColumnEncoder::Numeric { name, .. } | ColumnEncoder::Binary { name, .. } => {
                out.push(name.clone())
            }
            ColumnEncoder::Categorical { name, levels } => {
                for level in levels {
                    out.push(format!("{name}={level}"));
                }
                out.push(format!("{name}=__missing__"));
            }
        }
    }
}

#[derive(Debug)]
pub struct IngestedData {
    pub train: Dataset<f64>,
    pub eval: Dataset<f64>,
    pub metadata: IngestionMetadata,
    /// Unseen categorical levels encountered while encoding (eval rows).
    pub unseen_levels: usize,
}

fn is_missing(cell: &str) -> bool {
    let t = cell.trim();
    t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan")
}

struct RawTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn read_table(path: &Path) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::data(format!("bad CSV header: {e}")))?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::data(format!("line {}: {e}", i + 2)))?;
        rows.push(record.iter().map(|s| s.to_string()).collect());
    }
    Ok(RawTable { header, rows })
}

fn column_index(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::config(format!("column `{name}` not found in CSV header")))
}

/// Ingest a CSV per the spec: returns the encoded train and eval datasets
/// plus the fitted metadata. The eval dataset is empty when no split rule
/// is given.
pub fn ingest_csv(spec: &IngestionSpec, path: &Path) -> Result<IngestedData> {
    let table = read_table(path)?;
    let label_idx = column_index(&table.header, &spec.label)?;
    let period_idx = spec
        .period_column
        .as_ref()
        .map(|name| column_index(&table.header, name))
        .transpose()?;

    // resolve roles, demanding full coverage of non-label columns
    let mut roles: Vec<Option<Role>> = vec![None; table.header.len()];
    for (list, role) in [
        (&spec.numeric, Role::Numeric),
        (&spec.categorical, Role::Categorical),
        (&spec.binary, Role::Binary),
    ] {
        for name in list {
            let idx = column_index(&table.header, name)?;
            if idx == label_idx {
                return Err(Error::config(format!(
                    "label column `{name}` cannot also carry a covariate role"
                )));
            }
            if roles[idx].is_some() {
                return Err(Error::config(format!("column `{name}` assigned two roles")));
            }
            roles[idx] = Some(role);
        }
    }
    for (idx, role) in roles.iter_mut().enumerate() {
        if idx == label_idx || Some(idx) == period_idx {
            continue;
        }
        if role.is_none() {
            match spec.default_role {
                Some(default) => *role = Some(default),
                None => {
                    return Err(Error::config(format!(
                        "column `{}` has no declared role and no default_role is set",
                        table.header[idx]
                    )))
                }
            }
        }
    }

    // labels first: the label column must be strictly binary
    let mut labels = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        match row.get(label_idx).map(|s| s.trim()) {
            Some("0") => labels.push(0u8),
            Some("1") => labels.push(1u8),
            other => {
                return Err(Error::data(format!(
                    "line {}: label `{}` is not binary",
                    i + 2,
                    other.unwrap_or("")
                )))
            }
        }
    }

    // split rule
    let n = table.rows.len();
    let (train_rows, eval_rows): (Vec<usize>, Vec<usize>) = match (
        period_idx,
        &spec.train_periods,
        spec.train_fraction,
    ) {
        (Some(pidx), Some(train_periods), None) => {
            let mut periods = Vec::with_capacity(n);
            for (i, row) in table.rows.iter().enumerate() {
                let cell = row.get(pidx).map(|s| s.trim()).unwrap_or("");
                let value = cell
                    .parse::<i64>()
                    .or_else(|_| cell.parse::<f64>().map(|v| v.round() as i64))
                    .map_err(|_| {
                        Error::data(format!("line {}: bad period value `{cell}`", i + 2))
                    })?;
                periods.push(value);
            }
            let in_train: Vec<usize> = (0..n)
                .filter(|&i| train_periods.contains(&periods[i]))
                .collect();
            let in_eval: Vec<usize> = match &spec.eval_periods {
                Some(eval_periods) => (0..n)
                    .filter(|&i| eval_periods.contains(&periods[i]))
                    .collect(),
                None => (0..n)
                    .filter(|&i| !train_periods.contains(&periods[i]))
                    .collect(),
            };
            (in_train, in_eval)
        }
        (_, None, Some(fraction)) => {
            if !(0.0..=1.0).contains(&fraction) {
                return Err(Error::config("train_fraction must lie in [0, 1]"));
            }
            let cut = (fraction * n as f64).round() as usize;
            ((0..cut).collect(), (cut..n).collect())
        }
        (_, None, None) => ((0..n).collect(), Vec::new()),
        (None, Some(_), _) => {
            return Err(Error::config(
                "train_periods requires a period_column",
            ))
        }
        (_, Some(_), Some(_)) => {
            return Err(Error::config(
                "give either train_periods or train_fraction, not both",
            ))
        }
    };
    if train_rows.is_empty() {
        return Err(Error::data("training split selects no rows"));
    }

    // fit encoders on training rows only
    let mut encoders = Vec::new();
    let mut parse_errors: Vec<String> = Vec::new();
    for (idx, role) in roles.iter().enumerate() {
        let Some(role) = role else { continue };
        let name = table.header[idx].clone();
        match role {
            Role::Numeric | Role::Binary => {
                let mut values = Vec::new();
                for &r in &train_rows {
                    let cell = &table.rows[r][idx];
                    if is_missing(cell) {
                        continue;
                    }
                    match cell.trim().parse::<f64>() {
                        Ok(v) => {
                            if *role == Role::Binary && v != 0.0 && v != 1.0 {
                                parse_errors.push(format!(
                                    "line {}: binary column `{name}` holds `{cell}`",
                                    r + 2
                                ));
                            } else {
                                values.push(v);
                            }
                        }
                        Err(_) => parse_errors.push(format!(
                            "line {}: column `{name}` holds non-numeric `{cell}`",
                            r + 2
                        )),
                    }
                }
                if values.is_empty() {
                    return Err(Error::data(format!(
                        "column `{name}` has no usable training values"
                    )));
                }
                let median = median_of(&mut values);
                encoders.push(match role {
                    Role::Numeric => ColumnEncoder::Numeric { name, median },
                    _ => ColumnEncoder::Binary { name, median },
                });
            }
            Role::Categorical => {
                let mut levels: BTreeSet<String> = BTreeSet::new();
                for &r in &train_rows {
                    let cell = &table.rows[r][idx];
                    if !is_missing(cell) {
                        levels.insert(cell.trim().to_string());
                    }
                }
                encoders.push(ColumnEncoder::Categorical {
                    name,
                    levels: levels.into_iter().collect(),
                });
            }
        }
    }
    if !parse_errors.is_empty() {
        let shown = parse_errors.len().min(10);
        return Err(Error::data(format!(
            "{} unparseable cells, first {shown}:\n{}",
            parse_errors.len(),
            parse_errors[..shown].join("\n")
        )));
    }

    let mut feature_names = Vec::new();
    for encoder in &encoders {
        encoder.push_feature_names(&mut feature_names);
    }
    let metadata = IngestionMetadata {
        label: spec.label.clone(),
        period_column: spec.period_column.clone(),
        columns: encoders,
        feature_names,
    };

    let (train, unseen_train) = encode_rows(&metadata, &table, &train_rows, &labels)?;
    debug_assert_eq!(unseen_train, 0, "training rows cannot have unseen levels");
    let (eval, unseen_eval) = encode_rows(&metadata, &table, &eval_rows, &labels)?;
    Ok(IngestedData {
        train,
        eval,
        metadata,
        unseen_levels: unseen_eval,
    })
}

/// Encode a CSV with previously fitted metadata (the evaluate path).
pub fn apply_metadata(metadata: &IngestionMetadata, path: &Path) -> Result<(Dataset<f64>, usize)> {
    let table = read_table(path)?;
    let label_idx = column_index(&table.header, &metadata.label)?;
    let mut labels = Vec::with_capacity(table.rows.len());
    for (i, row) in table.rows.iter().enumerate() {
        match row.get(label_idx).map(|s| s.trim()) {
            Some("0") => labels.push(0u8),
            Some("1") => labels.push(1u8),
            other => {
                return Err(Error::data(format!(
                    "line {}: label `{}` is not binary",
                    i + 2,
                    other.unwrap_or("")
                )))
            }
        }
    }
    let rows: Vec<usize> = (0..table.rows.len()).collect();
    encode_rows(metadata, &table, &rows, &labels)
}

fn encode_rows(
    metadata: &IngestionMetadata,
    table: &RawTable,
    rows: &[usize],
    labels: &[u8],
) -> Result<(Dataset<f64>, usize)> {
    let p: usize = metadata.columns.iter().map(ColumnEncoder::width).sum();
    let mut indices = Vec::with_capacity(metadata.columns.len());
    for encoder in &metadata.columns {
        indices.push(column_index(&table.header, encoder.name())?);
    }
    let mut data = Vec::with_capacity(rows.len() * p);
    let mut unseen = 0usize;
    for &r in rows {
        let row = &table.rows[r];
        for (encoder, &idx) in metadata.columns.iter().zip(indices.iter()) {
            let cell = row.get(idx).map(String::as_str).unwrap_or("");
            match encoder {
                ColumnEncoder::Numeric { median, .. } | ColumnEncoder::Binary { median, .. } => {
                    if is_missing(cell) {
                        data.push(*median);
                    } else {
                        let v = cell.trim().parse::<f64>().map_err(|_| {
                            Error::data(format!(
                                "line {}: column `{}` holds non-numeric `{cell}`",
                                r + 2,
                                encoder.name()
                            ))
                        })?;
                        data.push(v);
                    }
                }
                ColumnEncoder::Categorical { levels, .. } => {
                    let start = data.len();
                    data.resize(start + levels.len() + 1, 0.0);
                    if is_missing(cell) {
                        data[start + levels.len()] = 1.0;
                    } else {
                        match levels.iter().position(|l| l == cell.trim()) {
                            Some(pos) => data[start + pos] = 1.0,
                            None => {
                                // unseen level behaves like missing
                                unseen += 1;
                                data[start + levels.len()] = 1.0;
                            }
                        }
                    }
                }
            }
        }
    }
    let subset_labels: Vec<u8> = rows.iter().map(|&r| labels[r]).collect();
    let dataset = Dataset::new(Matrix::from_vec(rows.len(), p, data), subset_labels)?
        .with_feature_names(metadata.feature_names.clone())?;
    Ok((dataset, unseen))
}

fn median_of(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
