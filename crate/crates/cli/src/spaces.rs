//! Conversions between dataset cells and points of the built-in spaces.

use anyhow::{bail, Result};
use medoidnet::space::{Euclidean, FiniteSpace, Space};

use crate::dataset::{Dataset, Instances};
use crate::FormatError;

pub trait CliSpace: Space + Clone
where
    Self::Point: serde::Serialize + serde::de::DeserializeOwned,
{
    fn instances(&self, data: &Dataset) -> Result<Vec<Self::Point>>;
    fn parse_label(&self, cell: &str, line: usize) -> Result<Self::Point>;
    fn format_label(&self, p: &Self::Point) -> String;

    fn labels(&self, data: &Dataset) -> Result<Vec<Self::Point>> {
        match &data.labels {
            Some(ys) => ys.iter().map(|(y, line)| self.parse_label(y, *line)).collect(),
            None => bail!(FormatError("dataset has no `y` column".into())),
        }
    }
}

impl CliSpace for Euclidean {
    fn instances(&self, data: &Dataset) -> Result<Vec<Vec<f64>>> {
        match &data.instances {
            Instances::Coords(rows) => {
                if !rows.is_empty() && data.dim != self.dim() {
                    bail!(medoidnet::Error::InvalidElement {
                        space: self.id().to_string(),
                        detail: format!("dataset has {} instance columns, space has dimension {}", data.dim, self.dim()),
                    });
                }
                Ok(rows.clone())
            }
            Instances::Ids(_) => bail!(medoidnet::Error::InvalidElement {
                space: self.id().to_string(),
                detail: "dataset names instances by `x_id`; a numeric space needs `x_*` columns".into(),
            }),
        }
    }

    fn parse_label(&self, cell: &str, line: usize) -> Result<Vec<f64>> {
        if self.dim() != 1 {
            bail!(medoidnet::Error::Unsupported(format!(
                "label space `{}`: the `y` column holds one number",
                self.id()
            )));
        }
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(vec![v]),
            _ => bail!(FormatError(format!("line {line}: label `{cell}` is not a finite number"))),
        }
    }

    fn format_label(&self, p: &Vec<f64>) -> String {
        p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";")
    }
}

impl CliSpace for FiniteSpace {
    fn instances(&self, data: &Dataset) -> Result<Vec<usize>> {
        match &data.instances {
            Instances::Ids(ids) => ids
                .iter()
                .zip(&data.lines)
                .map(|(id, line)| {
                    self.index_of(id).ok_or_else(|| {
                        anyhow::Error::new(medoidnet::Error::InvalidElement {
                            space: self.id().to_string(),
                            detail: format!("line {line}: unknown instance `{id}`"),
                        })
                    })
                })
                .collect(),
            Instances::Coords(rows) if rows.is_empty() => Ok(Vec::new()),
            Instances::Coords(_) => bail!(medoidnet::Error::InvalidElement {
                space: self.id().to_string(),
                detail: "dataset has numeric `x_*` columns; a finite space needs an `x_id` column".into(),
            }),
        }
    }

    fn parse_label(&self, cell: &str, line: usize) -> Result<usize> {
        self.index_of(cell).ok_or_else(|| {
            FormatError(format!("line {line}: `{cell}` is not an element of `{}`", self.id())).into()
        })
    }

    fn format_label(&self, p: &usize) -> String {
        self.name(*p).to_string()
    }
}
