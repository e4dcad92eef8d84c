//! Case ingestion: matrix references, parameter parsing, and the JSONL
//! batch record format.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use besov_embed::{exact, EmbeddingParams, ExtReal, InputMatrix, Surd, Variant};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteChoice {
    ClosedForm,
    Summability,
    Both,
}

/// One batch entry: an id, a matrix (inline object or file path), query
/// parameters, the variant, and the route to evaluate.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseRecord {
    pub id: String,
    pub matrix: Value,
    pub params: ParamsRecord,
    #[serde(default = "default_variant")]
    pub variant: VariantChoice,
    #[serde(default = "default_route")]
    pub route: RouteChoice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantChoice {
    Homogeneous,
    Inhomogeneous,
}

impl From<VariantChoice> for Variant {
    fn from(v: VariantChoice) -> Variant {
        match v {
            VariantChoice::Homogeneous => Variant::Homogeneous,
            VariantChoice::Inhomogeneous => Variant::Inhomogeneous,
        }
    }
}

fn default_variant() -> VariantChoice {
    VariantChoice::Inhomogeneous
}

fn default_route() -> RouteChoice {
    RouteChoice::ClosedForm
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsRecord {
    pub p: Value,
    pub q: Value,
    pub r: Value,
    pub alpha: Value,
    pub n: u32,
}

/// Parses an exponent given as a JSON number (exact binary expansion) or a
/// string ("inf", "p/q", decimal).
pub fn exponent_from_value(v: &Value) -> Result<ExtReal, CliError> {
    match v {
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| CliError::parse(format!("non-finite exponent {n}")))?;
            let r = exact::rational_from_f64(f)
                .map_err(|e| CliError::parse(e.to_string()))?;
            ExtReal::finite(r).map_err(|e| CliError::parse(e.to_string()))
        }
        Value::String(s) => ExtReal::parse(s).map_err(|e| CliError::parse(e.to_string())),
        other => Err(CliError::parse(format!("invalid exponent {other}"))),
    }
}

/// Parses a smoothness parameter: JSON number, rational/decimal string, or
/// "[-]sqrt(k)".
pub fn alpha_from_value(v: &Value) -> Result<Surd, CliError> {
    match v {
        Value::Number(n) => {
            let f = n
                .as_f64()
                .ok_or_else(|| CliError::parse(format!("non-finite alpha {n}")))?;
            exact::rational_from_f64(f)
                .map(Surd::from_rational)
                .map_err(|e| CliError::parse(e.to_string()))
        }
        Value::String(s) => exact::parse_surd(s).map_err(|e| CliError::parse(e.to_string())),
        other => Err(CliError::parse(format!("invalid alpha {other}"))),
    }
}

impl ParamsRecord {
    pub fn to_params(&self) -> Result<EmbeddingParams, CliError> {
        Ok(EmbeddingParams {
            p: exponent_from_value(&self.p)?,
            q: exponent_from_value(&self.q)?,
            r: exponent_from_value(&self.r)?,
            alpha: alpha_from_value(&self.alpha)?,
            n: self.n,
        })
    }
}

/// Resolves a matrix reference: an inline JSON object, or a string path
/// relative to `base_dir`.
pub fn load_matrix(reference: &Value, base_dir: &Path) -> Result<InputMatrix, CliError> {
    match reference {
        Value::Object(_) => {
            InputMatrix::from_json_value(reference).map_err(CliError::from)
        }
        Value::String(path) => {
            let full = base_dir.join(path);
            let text = std::fs::read_to_string(&full)
                .map_err(|e| CliError::io(format!("cannot read matrix {}: {e}", full.display())))?;
            InputMatrix::from_json(&text).map_err(CliError::from)
        }
        other => Err(CliError::parse(format!("invalid matrix reference {other}"))),
    }
}

/// A matrix given on the command line: inline JSON if it looks like an
/// object, otherwise a file path.
pub fn load_matrix_arg(arg: &str) -> Result<InputMatrix, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        InputMatrix::from_json(trimmed).map_err(CliError::from)
    } else {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| CliError::io(format!("cannot read matrix {arg}: {e}")))?;
        InputMatrix::from_json(&text).map_err(CliError::from)
    }
}

/// Parses one JSONL line into a case record.
pub fn parse_case_line(line: &str) -> Result<CaseRecord, CliError> {
    serde_json::from_str(line).map_err(|e| CliError::parse(format!("invalid case record: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_case_record() {
        let line = r#"{"id": "c-A", "matrix": {"dim": 2, "rows": [["sqrt(2)", 0], [0, "sqrt(2)"]]},
            "params": {"p": 2, "q": 3, "r": 1, "alpha": "5/3", "n": 3},
            "variant": "inhomogeneous", "route": "both"}"#;
        let case = parse_case_line(line).unwrap();
        assert_eq!(case.id, "c-A");
        assert_eq!(case.route, RouteChoice::Both);
        let params = case.params.to_params().unwrap();
        assert_eq!(params.n, 3);
        assert_eq!(params.p, ExtReal::from_int(2));
        let m = load_matrix(&case.matrix, Path::new(".")).unwrap();
        assert_eq!(m.dim(), 2);
    }

    #[test]
    fn exponent_forms() {
        assert_eq!(
            exponent_from_value(&serde_json::json!("inf")).unwrap(),
            ExtReal::Infinity
        );
        assert_eq!(
            exponent_from_value(&serde_json::json!("3/2")).unwrap(),
            ExtReal::parse("3/2").unwrap()
        );
        assert_eq!(
            exponent_from_value(&serde_json::json!(2)).unwrap(),
            ExtReal::from_int(2)
        );
        assert!(exponent_from_value(&serde_json::json!(-1)).is_err());
        assert!(exponent_from_value(&serde_json::json!([])).is_err());
    }

    #[test]
    fn alpha_forms() {
        assert!(alpha_from_value(&serde_json::json!("sqrt(2)")).unwrap().to_f64() > 1.41);
        assert!(alpha_from_value(&serde_json::json!("-sqrt(2)")).unwrap().to_f64() < -1.41);
        assert_eq!(alpha_from_value(&serde_json::json!(0.5)).unwrap().to_f64(), 0.5);
    }

    #[test]
    fn bad_records_rejected() {
        assert!(parse_case_line("{").is_err());
        assert!(parse_case_line(r#"{"id": "x"}"#).is_err());
        // Unknown field.
        assert!(parse_case_line(
            r#"{"id": "x", "matrixx": {}, "params": {"p":1,"q":1,"r":1,"alpha":0,"n":0}}"#
        )
        .is_err());
    }
}
