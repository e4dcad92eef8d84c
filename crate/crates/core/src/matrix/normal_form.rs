//! The expansive normal form (all eigenvalues real > 1, determinant 2)
//! and the degree of isotropy.

use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::exact::detect_rational;
use crate::exponent::IsotropyDegree;
use crate::matrix::AnalyzedMatrix;

/// One modulus class mapped into the normal form.
#[derive(Clone, Debug)]
pub struct NormalFormEigen {
    pub original_modulus: f64,
    /// The normal-form eigenvalue `modulus^s`, real and > 1.
    pub value: f64,
    pub algebraic: usize,
    pub geometric: usize,
    pub max_jordan_block: usize,
}

/// Spectral description of the unique normal-form representative generating
/// the same Besov scale. Downstream consumers only read spectral data, so no
/// explicit matrix is materialized.
#[derive(Clone, Debug)]
pub struct NormalForm {
    /// `s = ln 2 / ln|det A|`; moduli map to `modulus^s`.
    pub scaling_exponent: f64,
    /// Sorted by original modulus, descending.
    pub eigenvalue_map: Vec<NormalFormEigen>,
    /// Product of mapped eigenvalues with multiplicity; must be 2.
    pub det_check: f64,
}

pub fn expansive_normal_form(a: &AnalyzedMatrix) -> Result<NormalForm> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    let s = std::f64::consts::LN_2 / a.det_abs.ln();
    let eigenvalue_map: Vec<NormalFormEigen> = a
        .clusters
        .iter()
        .map(|c| NormalFormEigen {
            original_modulus: c.modulus,
            value: c.modulus.powf(s),
            algebraic: c.algebraic_multiplicity,
            geometric: c.geometric_multiplicity,
            max_jordan_block: c.max_jordan_block,
        })
        .collect();
    let log_det: f64 = a
        .clusters
        .iter()
        .map(|c| c.algebraic_multiplicity as f64 * c.modulus.ln())
        .sum();
    let det_check = (s * log_det).exp();
    Ok(NormalForm { scaling_exponent: s, eigenvalue_map, det_check })
}

/// Degree of isotropy `ln|det A| / ln(lambda_max)`. Lies in (1, d] for
/// d >= 2; for d = 1 it is exactly 1 (the range above presumes d >= 2).
pub fn isotropy_degree(a: &AnalyzedMatrix) -> Result<f64> {
    if !a.is_expansive {
        return Err(Error::NotExpansive);
    }
    if a.dim() == 1 {
        return Ok(1.0);
    }
    Ok(a.det_abs.ln() / a.lambda_max.ln())
}

/// Exact rational value of the degree of isotropy, when the spectrum admits
/// one (all moduli integer powers of a common base).
pub fn exact_isotropy_degree(a: &AnalyzedMatrix) -> Option<BigRational> {
    let ratios = a.log_ratios.as_ref()?;
    let top = ratios.first()?;
    if top.is_positive() {
        Some(top.recip())
    } else {
        None
    }
}

/// Both views of the degree of isotropy at once.
pub fn isotropy(a: &AnalyzedMatrix) -> Result<IsotropyDegree> {
    Ok(IsotropyDegree { value: isotropy_degree(a)?, exact: exact_isotropy_degree(a) })
}

/// Log-ratio recognition used for the whole spectrum; denominators stay
/// small because the intended inputs are matrices whose moduli are roots of
/// small integers.
pub(crate) fn detect_log_ratio(x: f64) -> Option<BigRational> {
    let r = detect_rational(x, 48, 1e-10)?;
    r.is_positive().then_some(r)
}
