//! Extended-real exponent algebra: conjugate exponents, q-nabla, the
//! smoothness offset n*, and the composite summability exponents.
//!
//! All arithmetic here is exact. Infinity follows the usual conventions
//! `1/inf = 0` and `q' = inf` for `q <= 1`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, ratio, Surd};

/// Default absolute tolerance for boundary comparisons that cannot be
/// resolved exactly.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

/// A positive extended real: a positive rational or infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtReal {
    Finite(BigRational),
    Infinity,
}

impl ExtReal {
    pub fn finite(r: BigRational) -> Result<Self> {
        if r <= BigRational::zero() {
            return Err(Error::InvalidParameter(format!("exponent must be positive, got {r}")));
        }
        Ok(ExtReal::Finite(r))
    }

    pub fn from_int(n: i64) -> Self {
        ExtReal::Finite(ratio(n, 1))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::Infinity => None,
        }
    }

    /// `1/x` with the convention `1/inf = 0`.
    pub fn inv_or_zero(&self) -> BigRational {
        match self {
            ExtReal::Finite(r) => r.recip(),
            ExtReal::Infinity => BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(r) => exact::rational_to_f64(r),
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    /// Parses "inf", "p/q", or a decimal literal; the value must be positive.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(ExtReal::Infinity);
        }
        ExtReal::finite(exact::parse_rational(t)?)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write!(f, "{r}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

/// Conjugate exponent: the solution of `1/q + 1/q' = 1` for `q > 1`,
/// infinity for `q <= 1`, and 1 for `q = inf`.
pub fn conjugate(q: &ExtReal) -> ExtReal {
    match q {
        ExtReal::Infinity => ExtReal::from_int(1),
        ExtReal::Finite(r) => {
            if *r <= BigRational::one() {
                ExtReal::Infinity
            } else {
                ExtReal::Finite(r / (r - BigRational::one()))
            }
        }
    }
}

/// `min(q, q')`; always at most 2, with equality exactly at `q = 2`.
pub fn q_nabla(q: &ExtReal) -> ExtReal {
    let c = conjugate(q);
    if *q <= c {
        q.clone()
    } else {
        c
    }
}

/// The composite exponent `t * (r/t)'`. Infinite exactly when `r <= t`.
pub fn composite_exponent(t: &ExtReal, r: &ExtReal) -> ExtReal {
    let t_val = match t {
        ExtReal::Infinity => return ExtReal::Infinity,
        ExtReal::Finite(v) => v,
    };
    match r {
        // (inf/t)' = 1, so the composite collapses to t itself.
        ExtReal::Infinity => t.clone(),
        ExtReal::Finite(r_val) => {
            if r_val <= t_val {
                ExtReal::Infinity
            } else {
                ExtReal::Finite(t_val * r_val / (r_val - t_val))
            }
        }
    }
}

/// Query parameters of an embedding question: integrability exponents
/// `p, q, r`, smoothness `alpha`, and derivative order `n`.
#[derive(Clone, Debug)]
pub struct EmbeddingParams {
    pub p: ExtReal,
    pub q: ExtReal,
    pub r: ExtReal,
    pub alpha: Surd,
    pub n: u32,
}

impl EmbeddingParams {
    /// The smoothness offset `n* = alpha + 1/q - 1/p`.
    pub fn n_star(&self) -> Surd {
        let shift = self.q.inv_or_zero() - self.p.inv_or_zero();
        self.alpha.add_rational(&shift)
    }
}

/// Degree of isotropy `ln|det A| / ln(lambda_max)`, with an exact rational
/// form when the spectrum admits one.
#[derive(Clone, Debug)]
pub struct IsotropyDegree {
    pub value: f64,
    pub exact: Option<BigRational>,
}

/// The decision threshold `iso_degree * n*`, exact whenever the operands
/// permit.
#[derive(Clone, Debug)]
pub enum Threshold {
    Exact(Surd),
    Approx(f64),
}

impl Threshold {
    pub fn compute(iso: &IsotropyDegree, n_star: &Surd) -> Threshold {
        if n_star.is_zero() {
            return Threshold::Exact(Surd::zero());
        }
        match &iso.exact {
            Some(a) => Threshold::Exact(n_star.scale(a)),
            None => Threshold::Approx(iso.value * n_star.to_f64()),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::Exact(s) => s.to_f64(),
            Threshold::Approx(v) => *v,
        }
    }

    /// Sign of `n - threshold`; `Ambiguous` when only a float is available
    /// and the gap is inside the boundary tolerance.
    pub fn cmp_int(&self, n: u32, boundary_tol: f64) -> SignOutcome {
        match self {
            Threshold::Exact(t) => match t.neg().sign_minus_int(-(n as i64)) {
                // sign of (n - t)
                -1 => SignOutcome::Negative,
                0 => SignOutcome::Zero,
                _ => SignOutcome::Positive,
            },
            Threshold::Approx(t) => {
                let diff = n as f64 - t;
                if diff.abs() <= boundary_tol {
                    SignOutcome::Ambiguous
                } else if diff < 0.0 {
                    SignOutcome::Negative
                } else {
                    SignOutcome::Positive
                }
            }
        }
    }

    /// Whether the threshold is a nonnegative integer; `None` when a float
    /// value sits within tolerance of one and cannot be resolved.
    pub fn is_nonneg_integer(&self, boundary_tol: f64) -> Option<bool> {
        match self {
            Threshold::Exact(t) => Some(t.is_nonneg_integer()),
            Threshold::Approx(v) => {
                let nearest = v.round();
                if nearest >= 0.0 && (v - nearest).abs() <= boundary_tol {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }
}

/// Result of a sign query that may rest on exact or approximate operands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignOutcome {
    Negative,
    Zero,
    Positive,
    Ambiguous,
}

/// A scalar known either exactly or only as a float; signs within the
/// tolerance band are reported as ambiguous rather than guessed.
#[derive(Clone, Debug)]
pub struct ExactOrApprox {
    pub exact: Option<Surd>,
    pub approx: f64,
}

impl ExactOrApprox {
    pub fn exact(s: Surd) -> Self {
        let approx = s.to_f64();
        ExactOrApprox { exact: Some(s), approx }
    }

    pub fn approx(v: f64) -> Self {
        ExactOrApprox { exact: None, approx: v }
    }

    pub fn sign(&self, boundary_tol: f64) -> SignOutcome {
        if let Some(e) = &self.exact {
            return match e.sign() {
                -1 => SignOutcome::Negative,
                0 => SignOutcome::Zero,
                _ => SignOutcome::Positive,
            };
        }
        if self.approx.abs() <= boundary_tol {
            SignOutcome::Ambiguous
        } else if self.approx < 0.0 {
            SignOutcome::Negative
        } else {
            SignOutcome::Positive
        }
    }
}

/// All derived scalars the decision tables consume.
#[derive(Clone, Debug)]
pub struct DerivedExponents {
    pub q_conj: ExtReal,
    pub q_nabla: ExtReal,
    pub n_star: Surd,
    pub iso_degree: IsotropyDegree,
    pub threshold: Threshold,
}

impl DerivedExponents {
    pub fn compute(params: &EmbeddingParams, iso: IsotropyDegree) -> Self {
        let n_star = params.n_star();
        let threshold = Threshold::compute(&iso, &n_star);
        DerivedExponents {
            q_conj: conjugate(&params.q),
            q_nabla: q_nabla(&params.q),
            n_star,
            iso_degree: iso,
            threshold,
        }
    }
}

/// Exact order test for extended reals; plain `Ord` is already total.
pub fn ext_cmp(a: &ExtReal, b: &ExtReal) -> Ordering {
    a.cmp(b)
}
