//! Tri-state embedding decisions with full condition traces.
//!
//! Two independent routes produce verdicts: the closed-form tables over
//! derived exponents, and the generic summability criterion evaluated through
//! the sequence classifier. They must never contradict each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::{
    composite_exponent, conjugate, DerivedExponents, EmbeddingParams, ExtReal, SignOutcome,
    Threshold,
};
use crate::matrix::{isotropy, AnalyzedMatrix};
use crate::sequence::{build_sequence_spec, classify_membership, Domain, Membership};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Embeds,
    DoesNotEmbed,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Homogeneous,
    Inhomogeneous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedForm,
    Summability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Satisfied,
    Violated,
    NotApplicable,
    Boundary,
}

/// Role of a condition within the decision table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Necessary,
    Sufficient,
}

/// One evaluated condition, with the clause identifier and the operands that
/// produced the status.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub label: String,
    pub clause_ref: String,
    pub kind: CheckKind,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictWarning {
    ClusterAmbiguity,
    Boundary,
    NormalFormMergeAffectsAnd,
}

/// Float snapshot of the derived exponents, as reported alongside verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivedReport {
    pub n_star: f64,
    pub q_nabla: f64,
    pub iso_degree: f64,
    pub threshold: f64,
}

/// Decision result: outcome, the route that produced it, the ordered trace
/// of all evaluated conditions, and any warnings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub variant: Variant,
    pub route: Route,
    pub trace: Vec<ConditionCheck>,
    pub warnings: Vec<VerdictWarning>,
    pub derived: DerivedReport,
}

fn derived_report(d: &DerivedExponents) -> DerivedReport {
    DerivedReport {
        n_star: d.n_star.to_f64(),
        q_nabla: d.q_nabla.to_f64(),
        iso_degree: d.iso_degree.value,
        threshold: d.threshold.to_f64(),
    }
}

struct TraceBuilder {
    checks: Vec<ConditionCheck>,
    warnings: Vec<VerdictWarning>,
}

impl TraceBuilder {
    fn new() -> Self {
        TraceBuilder { checks: Vec::new(), warnings: Vec::new() }
    }

    fn push(
        &mut self,
        label: &str,
        clause_ref: &str,
        kind: CheckKind,
        status: CheckStatus,
        detail: String,
    ) -> CheckStatus {
        self.checks.push(ConditionCheck {
            label: label.to_string(),
            clause_ref: clause_ref.to_string(),
            kind,
            status,
            detail,
        });
        status
    }

    fn bool_check(
        &mut self,
        label: &str,
        clause_ref: &str,
        kind: CheckKind,
        holds: bool,
        detail: String,
    ) -> CheckStatus {
        let status = if holds { CheckStatus::Satisfied } else { CheckStatus::Violated };
        self.push(label, clause_ref, kind, status, detail)
    }

    fn warn(&mut self, w: VerdictWarning) {
        if !self.warnings.contains(&w) {
            self.warnings.push(w);
        }
    }

    fn any_necessary_violated(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.kind == CheckKind::Necessary && c.status == CheckStatus::Violated)
    }

    fn any_boundary(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Boundary)
    }
}

fn carry_matrix_warnings(tb: &mut TraceBuilder, a: &AnalyzedMatrix) {
    if a.has_cluster_ambiguity() {
        tb.warn(VerdictWarning::ClusterAmbiguity);
    }
}

/// True when the modulus-class merge behind the normal form could by itself
/// change the AND verdict: the top class mixes several distinct eigenvalues
/// and is defective.
fn merge_could_affect_and(a: &AnalyzedMatrix) -> bool {
    let top = a.max_cluster();
    top.representatives.len() > 1 && top.geometric_multiplicity < top.algebraic_multiplicity
}

/// Homogeneous decision table. The verdict depends on the matrix only
/// through expansiveness.
pub fn decide_homogeneous(
    a: &AnalyzedMatrix,
    params: &EmbeddingParams,
    _boundary_tol: f64,
) -> Result<Verdict> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let derived = DerivedExponents::compute(params, isotropy(a)?);
    let mut tb = TraceBuilder::new();
    carry_matrix_warnings(&mut tb, a);

    let n_star = &derived.n_star;
    let smooth_zero = params.n == 0 && n_star.is_zero();
    tb.bool_check(
        "n = 0 and n* = 0",
        "hom.nec.smoothness_zero",
        CheckKind::Necessary,
        smooth_zero,
        format!("n = {}, n* = {}", params.n, n_star),
    );
    tb.bool_check(
        "p <= q",
        "hom.nec.p_le_q",
        CheckKind::Necessary,
        params.p <= params.q,
        format!("p = {}, q = {}", params.p, params.q),
    );
    tb.bool_check(
        "r <= q",
        "hom.nec.r_le_q",
        CheckKind::Necessary,
        params.r <= params.q,
        format!("r = {}, q = {}", params.r, params.q),
    );
    if params.q.is_infinite() {
        tb.bool_check(
            "q = inf requires r <= 1",
            "hom.nec.q_inf_r_le_1",
            CheckKind::Necessary,
            params.r <= ExtReal::from_int(1),
            format!("r = {}", params.r),
        );
    } else {
        tb.push(
            "q = inf requires r <= 1",
            "hom.nec.q_inf_r_le_1",
            CheckKind::Necessary,
            CheckStatus::NotApplicable,
            format!("q = {} is finite", params.q),
        );
    }
    if params.p == params.q {
        tb.bool_check(
            "p = q requires r <= 2",
            "hom.nec.p_eq_q_r_le_2",
            CheckKind::Necessary,
            params.r <= ExtReal::from_int(2),
            format!("r = {}", params.r),
        );
    } else {
        tb.push(
            "p = q requires r <= 2",
            "hom.nec.p_eq_q_r_le_2",
            CheckKind::Necessary,
            CheckStatus::NotApplicable,
            format!("p = {} differs from q = {}", params.p, params.q),
        );
    }
    let sufficient = tb.bool_check(
        "r <= q_nabla",
        "hom.suf.r_le_q_nabla",
        CheckKind::Sufficient,
        params.r <= derived.q_nabla,
        format!("r = {}, q_nabla = {}", params.r, derived.q_nabla),
    );

    let outcome = if tb.any_necessary_violated() {
        Outcome::DoesNotEmbed
    } else if smooth_zero && sufficient == CheckStatus::Satisfied {
        Outcome::Embeds
    } else {
        Outcome::Undecided
    };
    Ok(Verdict {
        outcome,
        variant: Variant::Homogeneous,
        route: Route::ClosedForm,
        trace: tb.checks,
        warnings: tb.warnings,
        derived: derived_report(&derived),
    })
}

/// Inhomogeneous decision table. Decides on the spectral data of the
/// expansive normal form, which the modulus clusters already carry.
pub fn decide_inhomogeneous(
    a: &AnalyzedMatrix,
    params: &EmbeddingParams,
    boundary_tol: f64,
) -> Result<Verdict> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let derived = DerivedExponents::compute(params, isotropy(a)?);
    let is_and = a.is_and().unwrap();
    let mut tb = TraceBuilder::new();
    carry_matrix_warnings(&mut tb, a);
    if merge_could_affect_and(a) {
        tb.warn(VerdictWarning::NormalFormMergeAffectsAnd);
    }

    tb.bool_check(
        "p <= q",
        "inhom.nec.p_le_q",
        CheckKind::Necessary,
        params.p <= params.q,
        format!("p = {}, q = {}", params.p, params.q),
    );

    let n_star = &derived.n_star;
    let threshold = &derived.threshold;
    let t_detail = match threshold {
        Threshold::Exact(t) => format!("n = {}, threshold = {} (exact)", params.n, t),
        Threshold::Approx(t) => format!("n = {}, threshold = {:.17} (approximate)", params.n, t),
    };
    // For n = 0 the comparison against iso_degree * n* reduces to the sign
    // of n*, which is exact even when the isotropy degree is not.
    let n_cmp = if params.n == 0 {
        match n_star.sign() {
            0 => SignOutcome::Zero,
            1 => SignOutcome::Negative,
            _ => SignOutcome::Positive,
        }
    } else {
        threshold.cmp_int(params.n, boundary_tol)
    };
    let nec_n_status = match n_cmp {
        SignOutcome::Positive => CheckStatus::Violated,
        SignOutcome::Ambiguous => CheckStatus::Boundary,
        _ => CheckStatus::Satisfied,
    };
    tb.push(
        "n <= iso_degree * n*",
        "inhom.nec.n_le_threshold",
        CheckKind::Necessary,
        nec_n_status,
        t_detail.clone(),
    );

    // Equality-regime necessary checks; NotApplicable off the boundary.
    let on_equality = n_cmp == SignOutcome::Zero;
    let and_ok = is_and || n_star.is_zero();
    let na = |tb: &mut TraceBuilder, label: &str, clause: &str, kind, why: String| {
        tb.push(label, clause, kind, CheckStatus::NotApplicable, why);
    };
    let off_eq = "n is not at the threshold".to_string();
    if on_equality {
        tb.bool_check(
            "at equality, non-AND forces n = n* = 0",
            "inhom.nec.eq.and_or_smoothness_zero",
            CheckKind::Necessary,
            and_ok,
            format!("AND = {is_and}, n* = {n_star}"),
        );
        tb.bool_check(
            "at equality, r <= q",
            "inhom.nec.eq.r_le_q",
            CheckKind::Necessary,
            params.r <= params.q,
            format!("r = {}, q = {}", params.r, params.q),
        );
        if params.q.is_infinite() {
            tb.bool_check(
                "at equality with q = inf, r <= 1",
                "inhom.nec.eq.q_inf_r_le_1",
                CheckKind::Necessary,
                params.r <= ExtReal::from_int(1),
                format!("r = {}", params.r),
            );
        } else {
            na(
                &mut tb,
                "at equality with q = inf, r <= 1",
                "inhom.nec.eq.q_inf_r_le_1",
                CheckKind::Necessary,
                format!("q = {} is finite", params.q),
            );
        }
        if params.p == params.q {
            tb.bool_check(
                "at equality with p = q, r <= 2",
                "inhom.nec.eq.p_eq_q_r_le_2",
                CheckKind::Necessary,
                params.r <= ExtReal::from_int(2),
                format!("r = {}", params.r),
            );
        } else {
            na(
                &mut tb,
                "at equality with p = q, r <= 2",
                "inhom.nec.eq.p_eq_q_r_le_2",
                CheckKind::Necessary,
                format!("p = {} differs from q = {}", params.p, params.q),
            );
        }
    } else {
        na(&mut tb, "at equality, non-AND forces n = n* = 0", "inhom.nec.eq.and_or_smoothness_zero", CheckKind::Necessary, off_eq.clone());
        na(&mut tb, "at equality, r <= q", "inhom.nec.eq.r_le_q", CheckKind::Necessary, off_eq.clone());
        na(&mut tb, "at equality with q = inf, r <= 1", "inhom.nec.eq.q_inf_r_le_1", CheckKind::Necessary, off_eq.clone());
        na(&mut tb, "at equality with p = q, r <= 2", "inhom.nec.eq.p_eq_q_r_le_2", CheckKind::Necessary, off_eq.clone());
    }

    // Sufficient checks follow the necessary battery.
    let suf_n_status = match n_cmp {
        SignOutcome::Negative => CheckStatus::Satisfied,
        SignOutcome::Zero => CheckStatus::NotApplicable,
        SignOutcome::Ambiguous => CheckStatus::Boundary,
        SignOutcome::Positive => CheckStatus::Violated,
    };
    tb.push(
        "n < iso_degree * n*",
        "inhom.suf.n_lt_threshold",
        CheckKind::Sufficient,
        suf_n_status,
        t_detail,
    );
    let mut equality_sufficient = CheckStatus::NotApplicable;
    if on_equality && and_ok {
        equality_sufficient = tb.bool_check(
            "at equality, r <= q_nabla",
            "inhom.suf.eq.r_le_q_nabla",
            CheckKind::Sufficient,
            params.r <= derived.q_nabla,
            format!("r = {}, q_nabla = {}", params.r, derived.q_nabla),
        );
    } else if on_equality {
        na(
            &mut tb,
            "at equality, r <= q_nabla",
            "inhom.suf.eq.r_le_q_nabla",
            CheckKind::Sufficient,
            "a necessary condition already failed".to_string(),
        );
    } else {
        na(
            &mut tb,
            "at equality, r <= q_nabla",
            "inhom.suf.eq.r_le_q_nabla",
            CheckKind::Sufficient,
            off_eq,
        );
    }

    let outcome = if tb.any_necessary_violated() {
        Outcome::DoesNotEmbed
    } else if n_cmp == SignOutcome::Ambiguous {
        tb.warn(VerdictWarning::Boundary);
        Outcome::Undecided
    } else if n_cmp == SignOutcome::Negative || equality_sufficient == CheckStatus::Satisfied {
        Outcome::Embeds
    } else {
        Outcome::Undecided
    };

    Ok(Verdict {
        outcome,
        variant: Variant::Inhomogeneous,
        route: Route::ClosedForm,
        trace: tb.checks,
        warnings: tb.warnings,
        derived: derived_report(&derived),
    })
}

fn membership_status(m: Membership) -> CheckStatus {
    match m {
        Membership::In => CheckStatus::Satisfied,
        Membership::Out => CheckStatus::Violated,
        Membership::BoundaryUncertain => CheckStatus::Boundary,
    }
}

/// Generic summability route: sufficiency and the necessary battery are both
/// evaluated through the sequence classifier.
pub fn decide_via_summability(
    a: &AnalyzedMatrix,
    params: &EmbeddingParams,
    variant: Variant,
    boundary_tol: f64,
) -> Result<Verdict> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let derived = DerivedExponents::compute(params, isotropy(a)?);
    let mut tb = TraceBuilder::new();
    carry_matrix_warnings(&mut tb, a);
    if variant == Variant::Inhomogeneous && merge_could_affect_and(a) {
        tb.warn(VerdictWarning::NormalFormMergeAffectsAnd);
    }

    let domain = match variant {
        Variant::Homogeneous => Domain::Integers,
        Variant::Inhomogeneous => Domain::NonNegative,
    };
    let seq_name = match variant {
        Variant::Homogeneous => "a^(q) over Z",
        Variant::Inhomogeneous => "a_+^(q) over N0",
    };

    tb.bool_check(
        "p <= q",
        "sum.nec.p_le_q",
        CheckKind::Necessary,
        params.p <= params.q,
        format!("p = {}, q = {}", params.p, params.q),
    );

    let spec_q = build_sequence_spec(a, params, &params.q.clone(), domain)?;

    let s_nec = composite_exponent(&params.q, &params.r);
    let nec = classify_membership(&spec_q, &s_nec, boundary_tol);
    tb.push(
        "criterion sequence summable at the q composite exponent",
        "sum.nec.membership_q",
        CheckKind::Necessary,
        membership_status(nec.status),
        format!("{seq_name} in l^{s_nec}: {:?}", nec.status),
    );

    if params.q.is_infinite() {
        let s_conj = conjugate(&params.r);
        let m = classify_membership(&spec_q, &s_conj, boundary_tol);
        tb.push(
            "q = inf requires summability at the conjugate of r",
            "sum.nec.membership_r_conj",
            CheckKind::Necessary,
            membership_status(m.status),
            format!("{seq_name} in l^{s_conj}: {:?}", m.status),
        );
    } else {
        tb.push(
            "q = inf requires summability at the conjugate of r",
            "sum.nec.membership_r_conj",
            CheckKind::Necessary,
            CheckStatus::NotApplicable,
            format!("q = {} is finite", params.q),
        );
    }

    let s_two = composite_exponent(&ExtReal::from_int(2), &params.r);
    if !params.q.is_infinite() {
        let spec_p = build_sequence_spec(a, params, &params.p.clone(), Domain::NonNegative)?;
        let m = classify_membership(&spec_p, &s_two, boundary_tol);
        tb.push(
            "positive tail of a^(p) summable at the 2-composite exponent",
            "sum.nec.membership_p_tail",
            CheckKind::Necessary,
            membership_status(m.status),
            format!("a_+^(p) in l^{s_two}: {:?}", m.status),
        );
    } else {
        tb.push(
            "positive tail of a^(p) summable at the 2-composite exponent",
            "sum.nec.membership_p_tail",
            CheckKind::Necessary,
            CheckStatus::NotApplicable,
            "q = inf".to_string(),
        );
    }

    let q_in_two_inf = !params.q.is_infinite() && params.q >= ExtReal::from_int(2);
    if variant == Variant::Inhomogeneous && q_in_two_inf {
        let spec_two =
            build_sequence_spec(a, params, &ExtReal::from_int(2), Domain::NonNegative)?;
        let m = classify_membership(&spec_two, &s_two, boundary_tol);
        tb.push(
            "positive tail of a^(2) summable at the 2-composite exponent",
            "sum.nec.membership_2_tail",
            CheckKind::Necessary,
            membership_status(m.status),
            format!("a_+^(2) in l^{s_two}: {:?}", m.status),
        );
    } else {
        tb.push(
            "positive tail of a^(2) summable at the 2-composite exponent",
            "sum.nec.membership_2_tail",
            CheckKind::Necessary,
            CheckStatus::NotApplicable,
            "applies to the inhomogeneous case with 2 <= q < inf".to_string(),
        );
    }

    let s_suf = composite_exponent(&derived.q_nabla, &params.r);
    let suf = classify_membership(&spec_q, &s_suf, boundary_tol);
    let sufficient = tb.push(
        "criterion sequence summable at the q_nabla composite exponent",
        "sum.suf.membership_q_nabla",
        CheckKind::Sufficient,
        membership_status(suf.status),
        format!("{seq_name} in l^{s_suf}: {:?}", suf.status),
    );

    if tb.any_boundary() {
        tb.warn(VerdictWarning::Boundary);
    }
    let outcome = if tb.any_necessary_violated() {
        Outcome::DoesNotEmbed
    } else if sufficient == CheckStatus::Satisfied {
        Outcome::Embeds
    } else {
        Outcome::Undecided
    };

    Ok(Verdict {
        outcome,
        variant,
        route: Route::Summability,
        trace: tb.checks,
        warnings: tb.warnings,
        derived: derived_report(&derived),
    })
}

/// True when the criteria are provably complete for these parameters, so
/// Undecided cannot occur.
pub fn sharpness_region(
    a: &AnalyzedMatrix,
    params: &EmbeddingParams,
    variant: Variant,
    boundary_tol: f64,
) -> Result<bool> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let q_sharp = params.q.is_infinite() || params.q <= ExtReal::from_int(2);
    if variant == Variant::Homogeneous {
        return Ok(q_sharp);
    }
    if q_sharp {
        return Ok(true);
    }
    let derived = DerivedExponents::compute(params, isotropy(a)?);
    if derived.threshold.is_nonneg_integer(boundary_tol) == Some(false) {
        return Ok(true);
    }
    let not_and = !a.is_and().unwrap();
    Ok(not_and && !derived.n_star.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, Surd};
    use crate::exponent::DEFAULT_BOUNDARY_TOL;
    use crate::matrix::{spectral_analyze, InputMatrix, DEFAULT_CLUSTER_TOL};

    fn analyze(rows: &[Vec<f64>]) -> AnalyzedMatrix {
        let m = InputMatrix::from_rows(rows).unwrap();
        spectral_analyze(&m, DEFAULT_CLUSTER_TOL).unwrap()
    }

    fn mat_a() -> AnalyzedMatrix {
        let s2 = 2.0f64.sqrt();
        analyze(&[vec![s2, 0.0], vec![0.0, s2]])
    }

    fn mat_b() -> AnalyzedMatrix {
        let s2 = 2.0f64.sqrt();
        analyze(&[vec![s2, 1.0], vec![0.0, s2]])
    }

    fn params(p: i64, q: i64, r: (i64, i64), alpha: (i64, i64), n: u32) -> EmbeddingParams {
        EmbeddingParams {
            p: ExtReal::from_int(p),
            q: ExtReal::from_int(q),
            r: ExtReal::Finite(ratio(r.0, r.1)),
            alpha: Surd::from_rational(ratio(alpha.0, alpha.1)),
            n,
        }
    }

    #[test]
    fn homogeneous_embeds_case() {
        // n* = 1/2 + 1/2 - 1 = 0, r <= q_nabla = 2.
        let p = params(1, 2, (1, 1), (1, 2), 0);
        let v = decide_homogeneous(&mat_a(), &p, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::Embeds);
        assert!(v
            .trace
            .iter()
            .all(|c| c.status != CheckStatus::Violated));
    }

    #[test]
    fn homogeneous_rejects_large_r_at_p_eq_q() {
        let p = params(2, 2, (3, 1), (0, 1), 0);
        let v = decide_homogeneous(&mat_a(), &p, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::DoesNotEmbed);
        assert!(v
            .trace
            .iter()
            .any(|c| c.clause_ref == "hom.nec.p_eq_q_r_le_2" && c.status == CheckStatus::Violated));
    }

    #[test]
    fn homogeneous_undecided_gap() {
        // n* = 1/4 + 1/4 - 1/2 = 0; q_nabla = 4/3 < r = 3 <= q = 4.
        let p = params(2, 4, (3, 1), (1, 4), 0);
        let v = decide_homogeneous(&mat_a(), &p, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided);
    }

    #[test]
    fn worked_example_all_cases() {
        let a = mat_a();
        let b = mat_b();
        let tol = DEFAULT_BOUNDARY_TOL;
        // (a) n in {0,1,2}: embeds for both, any r.
        for n in [0u32, 1, 2] {
            for r in [(1i64, 2i64), (1, 1), (2, 1), (10, 1)] {
                let p = params(2, 3, r, (5, 3), n);
                assert_eq!(decide_inhomogeneous(&a, &p, tol).unwrap().outcome, Outcome::Embeds);
                assert_eq!(decide_inhomogeneous(&b, &p, tol).unwrap().outcome, Outcome::Embeds);
            }
        }
        // (b) n > 3: neither embeds.
        for n in [4u32, 5] {
            let p = params(2, 3, (2, 1), (5, 3), n);
            assert_eq!(
                decide_inhomogeneous(&a, &p, tol).unwrap().outcome,
                Outcome::DoesNotEmbed
            );
            assert_eq!(
                decide_inhomogeneous(&b, &p, tol).unwrap().outcome,
                Outcome::DoesNotEmbed
            );
        }
        // (c) n = 3, r = 1 < 3/2.
        let p = params(2, 3, (1, 1), (5, 3), 3);
        assert_eq!(decide_inhomogeneous(&a, &p, tol).unwrap().outcome, Outcome::Embeds);
        assert_eq!(
            decide_inhomogeneous(&b, &p, tol).unwrap().outcome,
            Outcome::DoesNotEmbed
        );
        // (d) n = 3, r = 2 in (3/2, 3].
        let p = params(2, 3, (2, 1), (5, 3), 3);
        assert_eq!(decide_inhomogeneous(&a, &p, tol).unwrap().outcome, Outcome::Undecided);
        assert_eq!(
            decide_inhomogeneous(&b, &p, tol).unwrap().outcome,
            Outcome::DoesNotEmbed
        );
        // (e) n = 0, alpha = 1/6, r = 2: undecided for both.
        let p = params(2, 3, (2, 1), (1, 6), 0);
        assert_eq!(decide_inhomogeneous(&a, &p, tol).unwrap().outcome, Outcome::Undecided);
        assert_eq!(decide_inhomogeneous(&b, &p, tol).unwrap().outcome, Outcome::Undecided);
    }

    #[test]
    fn summability_route_agrees_on_worked_example() {
        let a = mat_a();
        let b = mat_b();
        let tol = DEFAULT_BOUNDARY_TOL;
        let cases: Vec<(EmbeddingParams, Outcome, Outcome)> = vec![
            (params(2, 3, (2, 1), (5, 3), 1), Outcome::Embeds, Outcome::Embeds),
            (params(2, 3, (2, 1), (5, 3), 4), Outcome::DoesNotEmbed, Outcome::DoesNotEmbed),
            (params(2, 3, (1, 1), (5, 3), 3), Outcome::Embeds, Outcome::DoesNotEmbed),
            (params(2, 3, (2, 1), (5, 3), 3), Outcome::Undecided, Outcome::DoesNotEmbed),
            (params(2, 3, (2, 1), (1, 6), 0), Outcome::Undecided, Outcome::Undecided),
        ];
        for (p, expect_a, expect_b) in cases {
            let va = decide_via_summability(&a, &p, Variant::Inhomogeneous, tol).unwrap();
            let vb = decide_via_summability(&b, &p, Variant::Inhomogeneous, tol).unwrap();
            assert_eq!(va.outcome, expect_a, "params {p:?} on diagonal matrix");
            assert_eq!(vb.outcome, expect_b, "params {p:?} on Jordan matrix");
        }
    }

    #[test]
    fn summability_homogeneous_unbounded_tail() {
        // n* = 1: the negative tail of a^(q) blows up, so a necessary
        // membership fails.
        let p = params(2, 2, (1, 1), (1, 1), 0);
        let v =
            decide_via_summability(&mat_a(), &p, Variant::Homogeneous, DEFAULT_BOUNDARY_TOL)
                .unwrap();
        assert_eq!(v.outcome, Outcome::DoesNotEmbed);
    }

    #[test]
    fn summability_homogeneous_constant_embeds() {
        let p = params(1, 2, (1, 1), (1, 2), 0);
        let v =
            decide_via_summability(&mat_a(), &p, Variant::Homogeneous, DEFAULT_BOUNDARY_TOL)
                .unwrap();
        assert_eq!(v.outcome, Outcome::Embeds);
    }

    #[test]
    fn sharpness_cases() {
        let a = mat_a();
        let b = mat_b();
        let tol = DEFAULT_BOUNDARY_TOL;
        // q = 3, threshold 3 integer, AND: not sharp.
        let p = params(2, 3, (2, 1), (5, 3), 3);
        assert!(!sharpness_region(&a, &p, Variant::Inhomogeneous, tol).unwrap());
        // Non-AND with n* != 0: sharp.
        assert!(sharpness_region(&b, &p, Variant::Inhomogeneous, tol).unwrap());
        // q = 2 always sharp.
        let p2 = params(2, 2, (2, 1), (5, 3), 3);
        assert!(sharpness_region(&a, &p2, Variant::Homogeneous, tol).unwrap());
        assert!(sharpness_region(&a, &p2, Variant::Inhomogeneous, tol).unwrap());
    }

    #[test]
    fn verdict_json_schema_roundtrip() {
        let p = params(2, 3, (1, 1), (5, 3), 3);
        let v = decide_inhomogeneous(&mat_a(), &p, DEFAULT_BOUNDARY_TOL).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["outcome"], "embeds");
        assert_eq!(json["variant"], "inhomogeneous");
        assert_eq!(json["route"], "closed_form");
        assert!(json["trace"].as_array().unwrap().len() >= 4);
        assert!(json["trace"][0]["clause_ref"].is_string());
        assert!(json["derived"]["n_star"].is_number());
        let back: Verdict = serde_json::from_value(json).unwrap();
        assert_eq!(back.outcome, v.outcome);
    }

    #[test]
    fn ambiguous_threshold_yields_boundary_undecided() {
        // diag(2, 3) has an irrational isotropy degree, so the threshold is
        // only known as a float. Pick n* so that iso * n* lands within the
        // tolerance of n = 1: the engine must refuse to guess.
        let a = analyze(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let iso = crate::matrix::isotropy_degree(&a).unwrap();
        let alpha = crate::exact::rational_from_f64(1.0 / iso).unwrap();
        let p = EmbeddingParams {
            p: ExtReal::from_int(2),
            q: ExtReal::from_int(2),
            r: ExtReal::from_int(1),
            alpha: Surd::from_rational(alpha),
            n: 1,
        };
        let v = decide_inhomogeneous(&a, &p, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(v.outcome, Outcome::Undecided);
        assert!(v.warnings.contains(&VerdictWarning::Boundary));
        // The summability route must not contradict it.
        let vs =
            decide_via_summability(&a, &p, Variant::Inhomogeneous, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(vs.outcome, Outcome::Undecided);
        assert!(vs.warnings.contains(&VerdictWarning::Boundary));
    }

    #[test]
    fn not_expansive_errors() {
        let bad = analyze(&[vec![0.5, 0.0], vec![0.0, 3.0]]);
        let p = params(2, 3, (1, 1), (5, 3), 0);
        assert!(matches!(
            decide_homogeneous(&bad, &p, DEFAULT_BOUNDARY_TOL),
            Err(Error::NotExpansive)
        ));
        assert!(matches!(
            decide_inhomogeneous(&bad, &p, DEFAULT_BOUNDARY_TOL),
            Err(Error::NotExpansive)
        ));
    }
}
