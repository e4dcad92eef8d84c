//! The criterion sequence `a_j = |det A|^(j(1/p - 1/t - alpha)) * (1 + ||A^j||^n)`
//! and its closed-form l^s classification from growth envelopes.
//!
//! Each tail of the sequence is bounded above and below by constant multiples
//! of `rate^|j| * |j|^degree` terms; membership depends only on those rates
//! and degrees, never on the constants.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{ratio, Surd};
use crate::exponent::{EmbeddingParams, ExactOrApprox, ExtReal, SignOutcome};
use crate::matrix::{matrix_power_norm_log, AnalyzedMatrix};

/// Index domain of the sequence: all integers for the homogeneous scale,
/// nonnegative integers for the inhomogeneous one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Integers,
    NonNegative,
}

/// Growth descriptor for one tail: `||A^j||` behaves like
/// `|j|^poly_degree * rate^|j|` along it.
#[derive(Clone, Debug)]
pub struct TailGrowth {
    pub rate: f64,
    pub poly_degree: u32,
}

/// Symbolic description of a criterion sequence.
#[derive(Clone, Debug)]
pub struct SequenceSpec {
    pub det_abs: f64,
    /// `1/p - 1/t - alpha`, exact.
    pub exponent_coeff: Surd,
    pub norm_power: u32,
    pub plus_tail: TailGrowth,
    pub minus_tail: TailGrowth,
    pub domain: Domain,
    /// Exact `ln(rate)/ln(det_abs)` per tail when the spectrum admits it.
    log_ratio_plus: Option<BigRational>,
    log_ratio_minus: Option<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    BoundaryUncertain,
}

/// Dominant growth data per tail, recorded with the decision.
#[derive(Clone, Debug)]
pub struct TailWitness {
    pub tail: &'static str,
    pub rate: f64,
    pub poly_degree: u32,
}

#[derive(Clone, Debug)]
pub struct MembershipResult {
    pub status: Membership,
    pub witness: Vec<TailWitness>,
}

/// Builds the spec of `a^(t)` for an expansive matrix and query parameters.
pub fn build_sequence_spec(
    a: &AnalyzedMatrix,
    params: &EmbeddingParams,
    t: &ExtReal,
    domain: Domain,
) -> Result<SequenceSpec> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let rational_part = params.p.inv_or_zero() - t.inv_or_zero();
    let exponent_coeff = params
        .alpha
        .neg()
        .add_rational(&rational_part);
    let n = params.n;
    let max_c = a.max_cluster();
    let min_c = a.min_cluster();
    Ok(SequenceSpec {
        det_abs: a.det_abs,
        exponent_coeff,
        norm_power: n,
        plus_tail: TailGrowth {
            rate: max_c.modulus,
            poly_degree: n * (max_c.max_jordan_block as u32 - 1),
        },
        minus_tail: TailGrowth {
            rate: min_c.modulus,
            poly_degree: n * (min_c.max_jordan_block as u32 - 1),
        },
        domain,
        log_ratio_plus: a.log_ratios.as_ref().map(|r| r[0].clone()),
        log_ratio_minus: a.log_ratios.as_ref().and_then(|r| r.last().cloned()),
    })
}

impl SequenceSpec {
    pub fn contains(&self, j: i64) -> bool {
        match self.domain {
            Domain::Integers => true,
            Domain::NonNegative => j >= 0,
        }
    }

    /// `ln(1 + e^y)` without overflow.
    fn softplus(y: f64) -> f64 {
        y.max(0.0) + (-y.abs()).exp().ln_1p()
    }

    /// `ln a_j` given `ln ||A^j||`.
    pub fn term_log_from_norm(&self, j: i64, log_norm: f64) -> f64 {
        let c = self.exponent_coeff.to_f64();
        j as f64 * c * self.det_abs.ln() + Self::softplus(self.norm_power as f64 * log_norm)
    }
}

/// `ln a_j`, evaluated through the matrix power norm.
pub fn term_log(spec: &SequenceSpec, a: &AnalyzedMatrix, j: i64) -> Result<f64> {
    if !spec.contains(j) {
        return Err(Error::InvalidParameter(format!(
            "index {j} lies outside the sequence domain"
        )));
    }
    let log_norm = matrix_power_norm_log(a.matrix(), j)?;
    Ok(spec.term_log_from_norm(j, log_norm))
}

/// `a_j` in the linear domain.
pub fn term_value(spec: &SequenceSpec, a: &AnalyzedMatrix, j: i64) -> Result<f64> {
    let lg = term_log(spec, a, j)?;
    if lg > 709.78 {
        return Err(Error::Overflow);
    }
    Ok(lg.exp())
}

/// One envelope term: its rate exponent (as a multiple of `ln det_abs`) and
/// polynomial degree.
struct EnvelopeTerm {
    tail: &'static str,
    exponent: ExactOrApprox,
    poly_degree: u32,
    rate_approx: f64,
}

fn envelope_terms(spec: &SequenceSpec) -> Vec<EnvelopeTerm> {
    let ln_det = spec.det_abs.ln();
    let n = spec.norm_power;
    let c = &spec.exponent_coeff;
    let c_f = c.to_f64();
    let mut terms = Vec::with_capacity(4);

    let plus_ratio_f = spec.plus_tail.rate.ln() / ln_det;
    let plus_exponent = |mult: &Option<BigRational>| {
        if n == 0 {
            return ExactOrApprox::exact(c.clone());
        }
        match mult {
            Some(r) => ExactOrApprox::exact(c.add_rational(&(r * ratio(n as i64, 1)))),
            None => ExactOrApprox::approx(c_f + n as f64 * plus_ratio_f),
        }
    };
    terms.push(EnvelopeTerm {
        tail: "plus",
        exponent: ExactOrApprox {
            exact: Some(c.clone()),
            approx: c_f,
        },
        poly_degree: 0,
        rate_approx: (c_f * ln_det).exp(),
    });
    terms.push(EnvelopeTerm {
        tail: "plus",
        exponent: plus_exponent(&spec.log_ratio_plus),
        poly_degree: spec.plus_tail.poly_degree,
        rate_approx: ((c_f + n as f64 * plus_ratio_f) * ln_det).exp(),
    });

    if spec.domain == Domain::Integers {
        let minus_ratio_f = spec.minus_tail.rate.ln() / ln_det;
        let minus_exponent = if n == 0 {
            ExactOrApprox::exact(c.neg())
        } else {
            match &spec.log_ratio_minus {
                Some(r) => {
                    ExactOrApprox::exact(c.neg().add_rational(&(-(r * ratio(n as i64, 1)))))
                }
                None => ExactOrApprox::approx(-c_f - n as f64 * minus_ratio_f),
            }
        };
        terms.push(EnvelopeTerm {
            tail: "minus",
            exponent: ExactOrApprox {
                exact: Some(c.neg()),
                approx: -c_f,
            },
            poly_degree: 0,
            rate_approx: (-c_f * ln_det).exp(),
        });
        terms.push(EnvelopeTerm {
            tail: "minus",
            exponent: minus_exponent,
            poly_degree: spec.minus_tail.poly_degree,
            rate_approx: ((-c_f - n as f64 * minus_ratio_f) * ln_det).exp(),
        });
    }
    terms
}

/// Closed-form l^s membership decision from the growth envelopes.
///
/// For finite `s` the sequence lies in l^s exactly when every envelope term
/// has rate < 1; boundedness additionally tolerates rate 1 with polynomial
/// degree 0.
pub fn classify_membership(spec: &SequenceSpec, s: &ExtReal, boundary_tol: f64) -> MembershipResult {
    let terms = envelope_terms(spec);
    let finite = !s.is_infinite();
    let mut saw_out = false;
    let mut saw_boundary = false;
    for term in &terms {
        match term.exponent.sign(boundary_tol) {
            SignOutcome::Negative => {}
            SignOutcome::Positive => saw_out = true,
            SignOutcome::Zero => {
                if finite || term.poly_degree > 0 {
                    saw_out = true;
                }
            }
            SignOutcome::Ambiguous => saw_boundary = true,
        }
    }
    let status = if saw_out {
        Membership::Out
    } else if saw_boundary {
        Membership::BoundaryUncertain
    } else {
        Membership::In
    };

    let mut witness = Vec::new();
    for tail in ["plus", "minus"] {
        let dominant = terms
            .iter()
            .filter(|t| t.tail == tail)
            .max_by(|x, y| x.rate_approx.partial_cmp(&y.rate_approx).unwrap());
        if let Some(t) = dominant {
            witness.push(TailWitness {
                tail: t.tail,
                rate: t.rate_approx,
                poly_degree: t.poly_degree,
            });
        }
    }
    MembershipResult { status, witness }
}

/// Exponent of `s` as f64 for probe use.
pub fn s_to_f64(s: &ExtReal) -> f64 {
    s.as_rational().and_then(|r| r.to_f64()).unwrap_or(f64::INFINITY)
}
