//! Execution: single cases, JSONL batches, and probe trace emission.

use std::io::Write;
use std::path::Path;

use besov_embed::{
    build_sequence_spec, decide_homogeneous, decide_inhomogeneous, decide_via_summability,
    matrix_power_norm_log, spectral_analyze, AnalyzedMatrix, Domain, EmbeddingParams, ExtReal,
    Outcome, Variant, Verdict,
};

use crate::cases::{load_matrix, CaseRecord, RouteChoice};
use crate::config::RunConfig;
use crate::report::{BatchSummary, CaseReport, ErrorReport};
use crate::CliError;

/// Verdicts produced by the requested route(s), with the headline outcome.
pub struct RouteOutcome {
    pub closed_form: Option<Verdict>,
    pub summability: Option<Verdict>,
    pub consistency: Option<bool>,
    pub outcome: Outcome,
}

/// Runs the requested route(s) on an analyzed matrix. With both routes, the
/// closed-form outcome is the headline and the consistency flag records
/// whether the routes contradict.
pub fn decide_routes(
    config: &RunConfig,
    analyzed: &AnalyzedMatrix,
    params: &EmbeddingParams,
    variant: Variant,
    route: RouteChoice,
) -> Result<RouteOutcome, CliError> {
    let closed = |a: &AnalyzedMatrix| -> Result<Verdict, CliError> {
        Ok(match variant {
            Variant::Homogeneous => decide_homogeneous(a, params, config.boundary_tol)?,
            Variant::Inhomogeneous => decide_inhomogeneous(a, params, config.boundary_tol)?,
        })
    };
    match route {
        RouteChoice::ClosedForm => {
            let v = closed(analyzed)?;
            let outcome = v.outcome;
            Ok(RouteOutcome {
                closed_form: Some(v),
                summability: None,
                consistency: None,
                outcome,
            })
        }
        RouteChoice::Summability => {
            let v = decide_via_summability(analyzed, params, variant, config.boundary_tol)?;
            let outcome = v.outcome;
            Ok(RouteOutcome {
                closed_form: None,
                summability: Some(v),
                consistency: None,
                outcome,
            })
        }
        RouteChoice::Both => {
            let vc = closed(analyzed)?;
            let vs = decide_via_summability(analyzed, params, variant, config.boundary_tol)?;
            let consistent = !matches!(
                (vc.outcome, vs.outcome),
                (Outcome::Embeds, Outcome::DoesNotEmbed)
                    | (Outcome::DoesNotEmbed, Outcome::Embeds)
            );
            let outcome = vc.outcome;
            Ok(RouteOutcome {
                closed_form: Some(vc),
                summability: Some(vs),
                consistency: Some(consistent),
                outcome,
            })
        }
    }
}

/// Runs one case; all failures are captured inside the report.
pub fn run_case(config: &RunConfig, case: &CaseRecord, base_dir: &Path) -> CaseReport {
    let mut report = CaseReport {
        id: case.id.clone(),
        outcome: None,
        closed_form: None,
        summability: None,
        consistency: None,
        error: None,
    };
    let result = (|| -> Result<(), CliError> {
        let matrix = load_matrix(&case.matrix, base_dir)?;
        let params = case.params.to_params()?;
        let analyzed = spectral_analyze(&matrix, config.cluster_tol)?;
        let routes =
            decide_routes(config, &analyzed, &params, case.variant.into(), case.route)?;
        report.outcome = Some(routes.outcome);
        report.closed_form = routes.closed_form;
        report.summability = routes.summability;
        report.consistency = routes.consistency;
        Ok(())
    })();
    if let Err(e) = result {
        report.error = Some(ErrorReport { kind: e.kind.as_str().into(), message: e.message });
    }
    report
}

/// Runs a line-delimited JSON batch. Per-case errors are isolated; the batch
/// continues. Reports come back sorted by id.
pub fn run_batch(
    config: &RunConfig,
    path: &Path,
) -> Result<(Vec<CaseReport>, BatchSummary), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read batch {}: {e}", path.display())))?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let mut reports = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match crate::cases::parse_case_line(line) {
            Ok(case) => {
                if !seen.insert(case.id.clone()) {
                    reports.push(CaseReport {
                        id: format!("{}@line-{}", case.id, lineno + 1),
                        outcome: None,
                        closed_form: None,
                        summability: None,
                        consistency: None,
                        error: Some(ErrorReport {
                            kind: "parse_error".into(),
                            message: format!("duplicate case id {:?}", case.id),
                        }),
                    });
                    continue;
                }
                reports.push(run_case(config, &case, base_dir));
            }
            Err(e) => reports.push(CaseReport {
                id: format!("line-{}", lineno + 1),
                outcome: None,
                closed_form: None,
                summability: None,
                consistency: None,
                error: Some(ErrorReport { kind: e.kind.as_str().into(), message: e.message }),
            }),
        }
    }
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary = BatchSummary::default();
    for r in &reports {
        summary.absorb(r);
    }
    Ok((reports, summary))
}

/// Which criterion sequence a probe runs on.
#[derive(Clone, Debug)]
pub enum SequenceChoice {
    Q,
    P,
    Explicit(ExtReal),
}

impl SequenceChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "q" => Ok(SequenceChoice::Q),
            "p" => Ok(SequenceChoice::P),
            other => Ok(SequenceChoice::Explicit(
                ExtReal::parse(other).map_err(|e| CliError::parse(e.to_string()))?,
            )),
        }
    }

    fn resolve(&self, params: &EmbeddingParams) -> ExtReal {
        match self {
            SequenceChoice::Q => params.q.clone(),
            SequenceChoice::P => params.p.clone(),
            SequenceChoice::Explicit(t) => t.clone(),
        }
    }
}

/// Writes rows `(j, a_j, partial_sum)` with 17 significant digits. The
/// partial sum accumulates `a_j^s` (or tracks the running maximum for
/// `s = inf`) in emission order.
pub fn emit_probe_rows<W: Write>(
    mut out: W,
    terms: impl Iterator<Item = (i64, f64)>,
    s: &ExtReal,
) -> Result<(), CliError> {
    writeln!(out, "j,a_j,partial_sum")?;
    let s_pow = (!s.is_infinite()).then(|| s.to_f64());
    let mut acc: f64 = match s_pow {
        Some(_) => 0.0,
        None => f64::NEG_INFINITY,
    };
    for (j, log_a) in terms {
        let a_j = log_a.exp();
        match s_pow {
            Some(s_f) => acc += (s_f * log_a).exp(),
            None => acc = acc.max(log_a.exp()),
        }
        writeln!(out, "{j},{a_j:.16e},{acc:.16e}")?;
    }
    Ok(())
}

/// Emits the probe trace of a case's criterion sequence to `out`.
pub fn emit_probe_trace<W: Write>(
    analyzed: &AnalyzedMatrix,
    params: &EmbeddingParams,
    variant: Variant,
    choice: &SequenceChoice,
    s: &ExtReal,
    j_max: u32,
    out: W,
) -> Result<(), CliError> {
    let domain = match variant {
        Variant::Homogeneous => Domain::Integers,
        Variant::Inhomogeneous => Domain::NonNegative,
    };
    let t = choice.resolve(params);
    let spec = build_sequence_spec(analyzed, params, &t, domain)?;
    let lo = match domain {
        Domain::Integers => -(j_max as i64),
        Domain::NonNegative => 0,
    };
    let mut rows = Vec::with_capacity((j_max as usize) + 1);
    for j in lo..=(j_max as i64) {
        let log_norm = matrix_power_norm_log(analyzed.matrix(), j)?;
        rows.push((j, spec.term_log_from_norm(j, log_norm)));
    }
    emit_probe_rows(out, rows.into_iter(), s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_rows_constant_sequence() {
        // Constant a_j = 2, s = 1: partial sums 2, 4, ..., 12.
        let terms = (0..=5i64).map(|j| (j, std::f64::consts::LN_2));
        let mut buf = Vec::new();
        emit_probe_rows(&mut buf, terms, &ExtReal::from_int(1)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "j,a_j,partial_sum");
        assert_eq!(lines.len(), 7);
        let sums: Vec<f64> = lines[1..]
            .iter()
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert_eq!(sums, vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0]);
    }

    #[test]
    fn probe_rows_geometric_series() {
        // a_j = 2^-j, s = 1: the partial sum converges to 2.
        let terms = (0..=50i64).map(|j| (j, -(j as f64) * std::f64::consts::LN_2));
        let mut buf = Vec::new();
        emit_probe_rows(&mut buf, terms, &ExtReal::from_int(1)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let last = text.lines().last().unwrap();
        let sum: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
        assert!((sum - 2.0).abs() < 1e-12, "sum {sum}");
    }

    #[test]
    fn rendering_has_17_significant_digits() {
        let terms = std::iter::once((0i64, std::f64::consts::LN_2));
        let mut buf = Vec::new();
        emit_probe_rows(&mut buf, terms, &ExtReal::from_int(1)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let field = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
        let mantissa = field.split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17, "field {field}");
    }
}
