//! Spectral analysis of expansive matrices: eigenvalue clustering,
//! multiplicities, Jordan block sizes, power norms, and the expansive
//! normal form.

mod normal_form;
mod power;
mod spectral;

pub use normal_form::{
    exact_isotropy_degree, expansive_normal_form, isotropy_degree, isotropy, NormalForm,
    NormalFormEigen,
};
pub use power::{matrix_power_norm, matrix_power_norm_log, PowerNormWalker, DEFAULT_CONDITION_CAP};
pub use spectral::{
    geometric_multiplicity, max_jordan_block_size, spectral_analyze, AnalyzedMatrix, EigenCluster,
    Representative, DEFAULT_CLUSTER_TOL,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exact::{parse_surd, rational_from_f64, Surd};

/// A warning attached to an analysis; surfaced, never silently dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalysisWarning {
    /// Two eigenvalue moduli were merged at a resolvable distance, or sit
    /// just outside the merge tolerance, so the cluster partition (and with
    /// it the AND verdict) may be unreliable.
    ClusterAmbiguity { detail: String },
}

/// A real square matrix given with exact entries (rationals or surds)
/// alongside its floating-point image.
#[derive(Clone, Debug)]
pub struct InputMatrix {
    dim: usize,
    exact_entries: Vec<Surd>,
    values: DMatrix<f64>,
}

impl InputMatrix {
    pub fn from_exact_rows(rows: Vec<Vec<Surd>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Parse("matrix must have at least one row".into()));
        }
        for row in &rows {
            if row.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: row.len() });
            }
        }
        let exact_entries: Vec<Surd> = rows.into_iter().flatten().collect();
        let values = DMatrix::from_row_iterator(dim, dim, exact_entries.iter().map(Surd::to_f64));
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(InputMatrix { dim, exact_entries, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let exact = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| rational_from_f64(v).map(Surd::from_rational))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_exact_rows(exact)
    }

    /// Parses the shared matrix format
    /// `{"dim": d, "rows": [[entry, ...], ...]}` where each entry is a JSON
    /// number or a string of the form "p/q", a decimal, or "[-]sqrt(k)".
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        Self::from_json_value(&value)
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("matrix must be a JSON object".into()))?;
        let dim = obj
            .get("dim")
            .and_then(|d| d.as_u64())
            .ok_or_else(|| Error::Parse("missing or invalid \"dim\"".into()))? as usize;
        if dim == 0 {
            return Err(Error::Parse("\"dim\" must be positive".into()));
        }
        let rows_json = obj
            .get("rows")
            .and_then(|r| r.as_array())
            .ok_or_else(|| Error::Parse("missing or invalid \"rows\"".into()))?;
        if rows_json.len() != dim {
            return Err(Error::Parse(format!(
                "expected {dim} rows, got {}",
                rows_json.len()
            )));
        }
        let mut rows = Vec::with_capacity(dim);
        for row in rows_json {
            let cells = row
                .as_array()
                .ok_or_else(|| Error::Parse("each row must be an array".into()))?;
            if cells.len() != dim {
                return Err(Error::Parse(format!(
                    "expected {dim} entries per row, got {}",
                    cells.len()
                )));
            }
            let mut out = Vec::with_capacity(dim);
            for cell in cells {
                out.push(parse_entry(cell)?);
            }
            rows.push(out);
        }
        Self::from_exact_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn exact_entry(&self, i: usize, j: usize) -> &Surd {
        &self.exact_entries[i * self.dim + j]
    }
}

fn parse_entry(cell: &serde_json::Value) -> Result<Surd> {
    match cell {
        serde_json::Value::Number(n) => {
            let v = n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("non-finite entry {n}")))?;
            rational_from_f64(v).map(Surd::from_rational)
        }
        serde_json::Value::String(s) => parse_surd(s),
        other => Err(Error::Parse(format!("invalid matrix entry {other}"))),
    }
}
