//! Numeric partial-sum probe: an independent check on the closed-form
//! sequence classifier. Works entirely in the log domain; divergence is
//! called from windowed term ratios, convergence from a certified geometric
//! tail bound.

use crate::error::{Error, Result};
use crate::exponent::ExtReal;
use crate::matrix::{PowerNormWalker, DEFAULT_CONDITION_CAP};
use crate::sequence::{s_to_f64, Domain, SequenceSpec};
use crate::matrix::AnalyzedMatrix;

/// Outcome of probing the partial sums of `(a_j)^s`.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbeOutcome {
    /// The geometric tail bound fell below 1e-12 of the partial sum (finite
    /// s), or the sequence was certified bounded (s = inf). Carries the
    /// partial sum (resp. the sup estimate).
    ConvergentEstimate(f64),
    /// Terms stopped decaying while above the floor.
    DivergenceDetected { at_j: i64 },
    Inconclusive,
}

/// Terms below this log-magnitude are considered negligible for the
/// divergence test.
const FLOOR_LOG: f64 = -690.0;

/// A windowed term ratio of at least `1 - RATIO_EPS` counts as "not
/// decaying".
const RATIO_EPS: f64 = 1e-6;

/// Relative tail-bound target for certified convergence.
const TAIL_CERT_LOG: f64 = -27.631021; // ln(1e-12)

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Probes one tail given an iterator of `(j, ln a_j)` in tail order.
/// `s_power` is `None` for the sup-norm (s = inf) test.
pub fn probe_term_logs(
    terms: impl Iterator<Item = (i64, f64)>,
    s_power: Option<f64>,
    window: usize,
) -> ProbeOutcome {
    match s_power {
        Some(s) => probe_sum(terms, s, window),
        None => probe_sup(terms, window),
    }
}

fn probe_sum(terms: impl Iterator<Item = (i64, f64)>, s: f64, window: usize) -> ProbeOutcome {
    let mut sum_log = f64::NEG_INFINITY;
    let mut recent: Vec<f64> = Vec::with_capacity(window + 1);
    for (j, log_a) in terms {
        let lt = s * log_a;
        sum_log = log_add_exp(sum_log, lt);
        recent.push(lt);
        if recent.len() > window + 1 {
            recent.remove(0);
        }
        if recent.len() == window + 1 {
            let all_flat = recent.windows(2).all(|w| w[1] - w[0] >= -RATIO_EPS);
            if all_flat && lt > FLOOR_LOG {
                return ProbeOutcome::DivergenceDetected { at_j: j };
            }
            // Certified geometric tail: every recent ratio at most rho < 1
            // bounds the remainder by t_last * rho / (1 - rho).
            let rho_log = recent
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::NEG_INFINITY, f64::max);
            if rho_log < 0.0 {
                let rho = rho_log.exp();
                let bound_log = lt + rho_log - (-rho).ln_1p();
                if bound_log <= sum_log + TAIL_CERT_LOG {
                    return ProbeOutcome::ConvergentEstimate(sum_log.exp());
                }
            }
        }
    }
    ProbeOutcome::Inconclusive
}

fn probe_sup(terms: impl Iterator<Item = (i64, f64)>, window: usize) -> ProbeOutcome {
    // Window slopes below this are indistinguishable from accumulated
    // rounding in the log-norm walk.
    const NOISE_SLOPE: f64 = 1e-9;
    let mut peak = f64::NEG_INFINITY;
    let mut recent: Vec<f64> = Vec::with_capacity(window + 1);
    let mut grew = false;
    for (j, log_a) in terms {
        peak = peak.max(log_a);
        recent.push(log_a);
        if recent.len() > window + 1 {
            recent.remove(0);
        }
        if recent.len() == window + 1 {
            let slope = recent[window] - recent[0];
            if slope >= window as f64 * RATIO_EPS && log_a > -100.0 {
                return ProbeOutcome::DivergenceDetected { at_j: j };
            }
            grew = slope > NOISE_SLOPE;
        }
    }
    if recent.len() == window + 1 && !grew {
        ProbeOutcome::ConvergentEstimate(peak.exp())
    } else {
        ProbeOutcome::Inconclusive
    }
}

/// Probes the partial sums of `(a_j)^s` over the truncated domain.
///
/// Divergence is declared when terms fail to decay over `ratio_window`
/// consecutive indices while above the floor; convergence when the windowed
/// ratio stays below 1 and the geometric tail bound drops under 1e-12 of the
/// partial sum. For s = inf, boundedness is probed via window maxima.
pub fn numeric_probe(
    spec: &SequenceSpec,
    a: &AnalyzedMatrix,
    s: &ExtReal,
    j_max: u32,
    ratio_window: u32,
) -> Result<ProbeOutcome> {
    if ratio_window < 2 || j_max < ratio_window {
        return Err(Error::InvalidParameter(
            "probe requires j_max >= ratio_window >= 2".into(),
        ));
    }
    let window = ratio_window as usize;
    let s_power = (!s.is_infinite()).then(|| s_to_f64(s));

    let plus = {
        let mut walker = PowerNormWalker::forward(a.matrix());
        let spec = spec.clone();
        let logs = (0..=j_max as i64).map(move |j| {
            let log_norm = if j == 0 { 0.0 } else { walker.next_log_norm() };
            (j, spec.term_log_from_norm(j, log_norm))
        });
        probe_term_logs(logs, s_power, window)
    };

    let minus = if spec.domain == Domain::Integers {
        let mut walker = PowerNormWalker::backward(a.matrix(), DEFAULT_CONDITION_CAP)?;
        let spec = spec.clone();
        let logs = (1..=j_max as i64).map(move |k| {
            let log_norm = walker.next_log_norm();
            (-k, spec.term_log_from_norm(-k, log_norm))
        });
        Some(probe_term_logs(logs, s_power, window))
    } else {
        None
    };

    Ok(combine_tails(plus, minus, s_power.is_some()))
}

fn combine_tails(plus: ProbeOutcome, minus: Option<ProbeOutcome>, finite: bool) -> ProbeOutcome {
    let minus = match minus {
        None => return plus,
        Some(m) => m,
    };
    match (plus, minus) {
        (d @ ProbeOutcome::DivergenceDetected { .. }, _) => d,
        (_, d @ ProbeOutcome::DivergenceDetected { .. }) => d,
        (ProbeOutcome::ConvergentEstimate(a), ProbeOutcome::ConvergentEstimate(b)) => {
            if finite {
                ProbeOutcome::ConvergentEstimate(a + b)
            } else {
                ProbeOutcome::ConvergentEstimate(a.max(b))
            }
        }
        _ => ProbeOutcome::Inconclusive,
    }
}
