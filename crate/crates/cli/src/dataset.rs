//! Dataset CSV files: a header row, instance columns `x_*` (numeric) or a
//! single `x_id` column (element names), and an optional `y` column.

use std::path::Path;

use anyhow::{bail, Context, Result};

use crate::FormatError;

#[derive(Clone, Debug, PartialEq)]
pub enum Instances {
    Coords(Vec<Vec<f64>>),
    Ids(Vec<String>),
}

impl Instances {
    pub fn len(&self) -> usize {
        match self {
            Instances::Coords(v) => v.len(),
            Instances::Ids(v) => v.len(),
        }
    }

    /// Space id used when none is given: `real` / `euclidean:<d>` for
    /// coordinates, the discrete metric on the sorted distinct ids otherwise.
    pub fn default_space_id(&self, dim: usize) -> String {
        match self {
            Instances::Coords(_) if dim == 1 => "real".into(),
            Instances::Coords(_) => format!("euclidean:{dim}"),
            Instances::Ids(ids) => discrete_id(ids),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub instances: Instances,
    /// Number of `x_*` columns (1 for `x_id`).
    pub dim: usize,
    /// Raw `y` cells with their 1-based file line numbers.
    pub labels: Option<Vec<(String, usize)>>,
    /// File line number of every row.
    pub lines: Vec<usize>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn default_label_space_id(&self) -> Option<String> {
        let labels = self.labels.as_ref()?;
        let numeric: Option<Vec<f64>> = labels
            .iter()
            .map(|(y, _)| y.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        if let Some(v) = numeric {
            // the separable learner needs a bounded label space for its ε-net;
            // take the integer hull of the observed labels
            let lo = v.iter().copied().fold(f64::INFINITY, f64::min).floor();
            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
            let hi = if hi > lo { hi } else { lo + 1.0 };
            Some(format!("interval:{lo}:{hi}"))
        } else {
            Some(discrete_id(&labels.iter().map(|(y, _)| y.clone()).collect::<Vec<_>>()))
        }
    }
}

fn discrete_id(names: &[String]) -> String {
    let mut distinct: Vec<&str> = names.iter().map(|s| s.trim()).collect();
    distinct.sort_unstable();
    distinct.dedup();
    format!("discrete:{}", distinct.join(","))
}

pub fn read(path: &Path, require_labels: bool) -> Result<Dataset> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open dataset `{}`", path.display()))?;
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(file);
    let header = reader
        .headers()
        .map_err(|e| FormatError(format!("{}: {e}", path.display())))?
        .clone();
    let shown = path.display();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        if require_labels {
            return Err(FormatError(format!("{shown}: empty file, expected a header row")).into());
        }
        return Ok(Dataset { instances: Instances::Coords(Vec::new()), dim: 0, labels: None, lines: Vec::new() });
    }
    let x_cols: Vec<usize> = (0..header.len()).filter(|&i| header[i].starts_with("x_")).collect();
    let id_col = x_cols.iter().copied().find(|&i| &header[i] == "x_id");
    let y_col = (0..header.len()).find(|&i| &header[i] == "y");
    if x_cols.is_empty() {
        return Err(FormatError(format!("{shown}:1: no instance columns (expected `x_*` or `x_id`)")).into());
    }
    if id_col.is_some() && x_cols.len() > 1 {
        return Err(FormatError(format!("{shown}:1: `x_id` cannot be combined with other `x_*` columns")).into());
    }
    if require_labels && y_col.is_none() {
        return Err(FormatError(format!("{shown}:1: missing `y` column")).into());
    }
    let mut coords = Vec::new();
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            FormatError(format!("{shown}:{line}: {e}"))
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        lines.push(line);
        if id_col.is_some() {
            ids.push(record[x_cols[0]].trim().to_string());
        } else {
            let mut row = Vec::with_capacity(x_cols.len());
            for &c in &x_cols {
                let cell = record[c].trim();
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => row.push(v),
                    _ => bail!(FormatError(format!("{shown}:{line}: column `{}`: `{cell}` is not a finite number", &header[c]))),
                }
            }
            coords.push(row);
        }
        if let Some(c) = y_col {
            labels.push((record[c].trim().to_string(), line));
        }
    }
    let instances = if id_col.is_some() { Instances::Ids(ids) } else { Instances::Coords(coords) };
    Ok(Dataset { instances, dim: x_cols.len(), labels: y_col.map(|_| labels), lines })
}
