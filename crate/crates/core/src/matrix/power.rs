//! Spectral norms of integer matrix powers, computed by repeated squaring
//! with renormalization so that large |j| stays representable.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::InputMatrix;

/// Condition-estimate cap for negative powers.
pub const DEFAULT_CONDITION_CAP: f64 = 1e12;

const MAX_FINITE_LOG: f64 = 709.78; // ln(f64::MAX)

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().fold(0.0, |a, &s| a.max(s))
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

fn renormalize(m: &mut DMatrix<f64>, log_scale: &mut f64) {
    let s = max_abs(m);
    if s > 0.0 {
        *m /= s;
        *log_scale += s.ln();
    }
}

fn positive_power_norm_log(a: &DMatrix<f64>, j: u64) -> f64 {
    debug_assert!(j > 0);
    let mut base = a.clone();
    let mut base_log = 0.0;
    renormalize(&mut base, &mut base_log);
    let mut acc: Option<(DMatrix<f64>, f64)> = None;
    let mut e = j;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => (base.clone(), base_log),
                Some((m, lg)) => {
                    let mut p = &m * &base;
                    let mut plg = lg + base_log;
                    renormalize(&mut p, &mut plg);
                    (p, plg)
                }
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = &base * &base;
        base_log *= 2.0;
        renormalize(&mut base, &mut base_log);
    }
    let (m, lg) = acc.unwrap();
    lg + spectral_norm(&m).ln()
}

fn invert_checked(a: &DMatrix<f64>, cond_cap: f64) -> Result<DMatrix<f64>> {
    let svs = a.singular_values();
    let smax = svs.iter().fold(0.0f64, |m, &s| m.max(s));
    let smin = svs.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    if smin <= 0.0 {
        return Err(Error::SingularMatrix);
    }
    let cond = smax / smin;
    if cond > cond_cap {
        return Err(Error::IllConditioned { cond, cap: cond_cap });
    }
    a.clone().try_inverse().ok_or(Error::SingularMatrix)
}

pub(crate) fn power_norm_log_of(a: &DMatrix<f64>, j: i64, cond_cap: f64) -> Result<f64> {
    if j == 0 {
        return Ok(0.0);
    }
    if j > 0 {
        Ok(positive_power_norm_log(a, j as u64))
    } else {
        let inv = invert_checked(a, cond_cap)?;
        Ok(positive_power_norm_log(&inv, j.unsigned_abs()))
    }
}

/// `ln ||A^j||` for any integer j; never overflows.
pub fn matrix_power_norm_log(m: &InputMatrix, j: i64) -> Result<f64> {
    power_norm_log_of(m.values(), j, DEFAULT_CONDITION_CAP)
}

/// `||A^j||` in the linear domain; errors out instead of returning infinity.
pub fn matrix_power_norm(m: &InputMatrix, j: i64) -> Result<f64> {
    let lg = matrix_power_norm_log(m, j)?;
    if lg > MAX_FINITE_LOG {
        return Err(Error::Overflow);
    }
    Ok(lg.exp())
}

/// Incremental walker producing `ln ||A^j||` for j = 0, 1, 2, ... in one
/// direction; probes use one walker per tail.
pub struct PowerNormWalker {
    step: DMatrix<f64>,
    current: DMatrix<f64>,
    log_scale: f64,
}

impl PowerNormWalker {
    pub fn forward(m: &InputMatrix) -> Self {
        Self::new(m.values().clone())
    }

    /// Walks powers of the inverse; the condition estimate gates inversion.
    pub fn backward(m: &InputMatrix, cond_cap: f64) -> Result<Self> {
        Ok(Self::new(invert_checked(m.values(), cond_cap)?))
    }

    fn new(step: DMatrix<f64>) -> Self {
        let current = DMatrix::identity(step.nrows(), step.ncols());
        PowerNormWalker { step, current, log_scale: 0.0 }
    }

    /// Advances one power and returns `ln` of its spectral norm.
    pub fn next_log_norm(&mut self) -> f64 {
        self.current = &self.current * &self.step;
        renormalize(&mut self.current, &mut self.log_scale);
        self.log_scale + spectral_norm(&self.current).ln()
    }
}
