//! Report shapes and renderers (JSON, text, CSV).

use serde::{Deserialize, Serialize};

use besov_embed::{AnalyzedMatrix, Outcome, Verdict};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
}

/// Per-case result: one or both verdicts, or an isolated error.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseReport {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<Outcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summability: Option<Verdict>,
    /// Present when both routes ran: true unless one says embeds while the
    /// other says does-not-embed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BatchSummary {
    pub total: usize,
    pub embeds: usize,
    pub does_not_embed: usize,
    pub undecided: usize,
    pub errors: usize,
    pub disagreements: usize,
    pub warnings: usize,
}

impl BatchSummary {
    pub fn absorb(&mut self, report: &CaseReport) {
        self.total += 1;
        match (&report.error, report.outcome) {
            (Some(_), _) => self.errors += 1,
            (None, Some(Outcome::Embeds)) => self.embeds += 1,
            (None, Some(Outcome::DoesNotEmbed)) => self.does_not_embed += 1,
            (None, Some(Outcome::Undecided)) => self.undecided += 1,
            (None, None) => {}
        }
        if report.consistency == Some(false) {
            self.disagreements += 1;
        }
        let warned = |v: &Option<Verdict>| v.as_ref().is_some_and(|v| !v.warnings.is_empty());
        if warned(&report.closed_form) || warned(&report.summability) {
            self.warnings += 1;
        }
    }
}

pub fn outcome_exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Embeds => 0,
        Outcome::DoesNotEmbed => 1,
        Outcome::Undecided => 2,
    }
}

fn outcome_str(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Embeds => "embeds",
        Outcome::DoesNotEmbed => "does_not_embed",
        Outcome::Undecided => "undecided",
    }
}

fn render_verdict_text(out: &mut String, v: &Verdict) {
    out.push_str(&format!(
        "  route {:?}: {}\n",
        v.route,
        outcome_str(v.outcome)
    ));
    out.push_str(&format!(
        "    n* = {}  q_nabla = {}  iso_degree = {}  threshold = {}\n",
        v.derived.n_star, v.derived.q_nabla, v.derived.iso_degree, v.derived.threshold
    ));
    for c in &v.trace {
        out.push_str(&format!(
            "    [{:<14}] {} ({}): {}\n",
            format!("{:?}", c.status).to_lowercase(),
            c.label,
            c.clause_ref,
            c.detail
        ));
    }
    if !v.warnings.is_empty() {
        let warned: Vec<String> = v.warnings.iter().map(|w| format!("{w:?}")).collect();
        out.push_str(&format!("    warnings: {}\n", warned.join(", ")));
    }
}

pub fn render_case_text(report: &CaseReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("case {}\n", report.id));
    if let Some(err) = &report.error {
        out.push_str(&format!("  error [{}]: {}\n", err.kind, err.message));
        return out;
    }
    if let Some(o) = report.outcome {
        out.push_str(&format!("  outcome: {}\n", outcome_str(o)));
    }
    if let Some(v) = &report.closed_form {
        render_verdict_text(&mut out, v);
    }
    if let Some(v) = &report.summability {
        render_verdict_text(&mut out, v);
    }
    if let Some(consistent) = report.consistency {
        out.push_str(&format!("  routes consistent: {consistent}\n"));
    }
    out
}

pub const CSV_HEADER: &str =
    "id,outcome,n_star,q_nabla,iso_degree,threshold,consistency,warnings,error";

pub fn render_case_csv(report: &CaseReport) -> String {
    let verdict = report.closed_form.as_ref().or(report.summability.as_ref());
    let outcome = report.outcome.map(outcome_str).unwrap_or("");
    let (n_star, q_nabla, iso, threshold) = verdict
        .map(|v| {
            (
                format!("{:.17e}", v.derived.n_star),
                format!("{:.17e}", v.derived.q_nabla),
                format!("{:.17e}", v.derived.iso_degree),
                format!("{:.17e}", v.derived.threshold),
            )
        })
        .unwrap_or_default();
    let consistency = report
        .consistency
        .map(|c| c.to_string())
        .unwrap_or_default();
    let warnings = verdict
        .map(|v| {
            v.warnings
                .iter()
                .map(|w| format!("{w:?}"))
                .collect::<Vec<_>>()
                .join(";")
        })
        .unwrap_or_default();
    let error = report
        .error
        .as_ref()
        .map(|e| e.kind.clone())
        .unwrap_or_default();
    format!(
        "{},{outcome},{n_star},{q_nabla},{iso},{threshold},{consistency},{warnings},{error}",
        report.id
    )
}

pub fn render_summary_text(summary: &BatchSummary) -> String {
    format!(
        "summary: {} cases | embeds {} | does_not_embed {} | undecided {} | errors {} | disagreements {} | warned {}\n",
        summary.total,
        summary.embeds,
        summary.does_not_embed,
        summary.undecided,
        summary.errors,
        summary.disagreements,
        summary.warnings
    )
}

/// Spectral report for the analyze verb.
pub fn spectral_report_json(a: &AnalyzedMatrix) -> serde_json::Value {
    let clusters: Vec<serde_json::Value> = a
        .clusters
        .iter()
        .map(|c| {
            let reps: Vec<serde_json::Value> = c
                .representatives
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "re": r.value.re,
                        "im": r.value.im,
                        "conjugate_pair": r.conjugate_pair,
                        "algebraic": r.algebraic,
                        "geometric": r.geometric,
                        "max_jordan_block": r.max_jordan_block,
                    })
                })
                .collect();
            serde_json::json!({
                "modulus": c.modulus,
                "algebraic_multiplicity": c.algebraic_multiplicity,
                "geometric_multiplicity": c.geometric_multiplicity,
                "max_jordan_block": c.max_jordan_block,
                "representatives": reps,
            })
        })
        .collect();
    let warnings: Vec<String> = a
        .warnings
        .iter()
        .map(|w| match w {
            besov_embed::AnalysisWarning::ClusterAmbiguity { detail } => {
                format!("cluster_ambiguity: {detail}")
            }
        })
        .collect();
    let mut report = serde_json::json!({
        "dim": a.dim(),
        "det_abs": a.det_abs,
        "lambda_max": a.lambda_max,
        "is_expansive": a.is_expansive,
        "clusters": clusters,
        "warnings": warnings,
    });
    if let Some(and) = a.is_and() {
        report["is_and"] = serde_json::json!(and);
        let iso = besov_embed::isotropy_degree(a).unwrap();
        report["isotropy_degree"] = serde_json::json!(iso);
        if let Ok(nf) = besov_embed::expansive_normal_form(a) {
            let eigen: Vec<serde_json::Value> = nf
                .eigenvalue_map
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "original_modulus": e.original_modulus,
                        "value": e.value,
                        "algebraic": e.algebraic,
                        "geometric": e.geometric,
                        "max_jordan_block": e.max_jordan_block,
                    })
                })
                .collect();
            report["normal_form"] = serde_json::json!({
                "scaling_exponent": nf.scaling_exponent,
                "det_check": nf.det_check,
                "eigenvalues": eigen,
            });
        }
    }
    report
}
