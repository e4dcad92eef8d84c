//! Exact scalar arithmetic: rationals, quadratic surds of the form
//! `a + b*sqrt(k)`, and recovery of small rationals from floating-point data.
//!
//! Decision boundaries downstream are equalities, so anything that can be
//! kept rational is kept rational. Floating point only enters through
//! eigenvalue moduli and logarithms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for a rational from machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binary expansion of a finite float.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or(Error::NonFiniteEntry)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses "p/q", an integer, or a plain decimal literal like "1.625".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("empty numeric literal {s:?}")));
    }
    let digits_ok = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !(int_part.is_empty() || digits_ok(int_part)) || !(frac_part.is_empty() || digits_ok(frac_part)) {
        return Err(Error::Parse(format!("invalid numeric literal {s:?}")));
    }
    let mut num: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().unwrap()
    };
    let mut den = BigInt::one();
    for b in frac_part.bytes() {
        num = num * 10 + (b - b'0');
        den *= 10;
    }
    Ok(BigRational::new(num * sign, den))
}

/// Continued-fraction search for a small-denominator rational close to `x`.
///
/// Returns `Some(p/q)` with `q <= max_den` and `|x - p/q| <= tol * max(1, |x|)`,
/// or `None` if no convergent of that quality exists.
pub fn detect_rational(x: f64, max_den: u64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let scale = x.abs().max(1.0);
    let (mut h0, mut k0): (i128, i128) = (1, 0);
    let (mut h1, mut k1): (i128, i128) = (x.floor() as i128, 1);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let approx = h1 as f64 / k1 as f64;
        if (x - approx).abs() <= tol * scale {
            return Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        if frac.abs() < 1e-18 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a >= 1e18 {
            break;
        }
        let a_i = a as i128;
        let h2 = a_i * h1 + h0;
        let k2 = a_i * k1 + k0;
        if k2 as u128 > max_den as u128 {
            break;
        }
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
        frac = inv - a;
    }
    None
}

fn is_perfect_square(k: u64) -> Option<u64> {
    let r = (k as f64).sqrt().round() as u64;
    (r.saturating_sub(1)..=r + 1).find(|&c| c * c == k)
}

/// Pulls square factors out of `k`, returning `(m, k')` with `k = m^2 * k'`
/// and `k'` square-free.
fn square_free(k: u64) -> (u64, u64) {
    let mut m = 1u64;
    let mut rest = k;
    let mut f = 2u64;
    while f * f <= rest {
        while rest.is_multiple_of(f * f) {
            rest /= f * f;
            m *= f;
        }
        f += 1;
    }
    (m, rest)
}

/// A quadratic surd `rational + coeff * sqrt(radicand)` with exact sign and
/// comparison tests. The radicand is kept square-free; purely rational values
/// carry radicand 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    rational: BigRational,
    coeff: BigRational,
    radicand: u64,
}

impl Surd {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn from_rational(rational: BigRational) -> Self {
        Surd {
            rational,
            coeff: BigRational::zero(),
            radicand: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(ratio(n, 1))
    }

    /// `c * sqrt(k)`, normalized. `sqrt(0)` and perfect squares collapse to
    /// rationals.
    pub fn sqrt(k: u64, c: BigRational) -> Self {
        if k == 0 || c.is_zero() {
            return Self::zero();
        }
        if let Some(r) = is_perfect_square(k) {
            return Self::from_rational(c * BigInt::from(r));
        }
        let (m, kf) = square_free(k);
        Surd {
            rational: BigRational::zero(),
            coeff: c * BigInt::from(m),
            radicand: kf,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rational)
    }

    /// Whether the value is a nonnegative integer.
    pub fn is_nonneg_integer(&self) -> bool {
        self.is_rational() && self.rational.is_integer() && !self.rational.is_negative()
    }

    pub fn add_rational(&self, r: &BigRational) -> Surd {
        Surd {
            rational: &self.rational + r,
            coeff: self.coeff.clone(),
            radicand: self.radicand,
        }
    }

    /// Sum of two surds; fails when both carry distinct irrational parts.
    pub fn try_add(&self, other: &Surd) -> Option<Surd> {
        let radicand = match (self.coeff.is_zero(), other.coeff.is_zero()) {
            (true, _) => other.radicand,
            (_, true) => self.radicand,
            _ if self.radicand == other.radicand => self.radicand,
            _ => return None,
        };
        let mut out = Surd {
            rational: &self.rational + &other.rational,
            coeff: &self.coeff + &other.coeff,
            radicand,
        };
        if out.coeff.is_zero() {
            out.radicand = 0;
        }
        Some(out)
    }

    pub fn neg(&self) -> Surd {
        Surd {
            rational: -self.rational.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Surd {
        if r.is_zero() {
            return Surd::zero();
        }
        Surd {
            rational: &self.rational * r,
            coeff: &self.coeff * r,
            radicand: self.radicand,
        }
    }

    /// Exact sign: -1, 0, or +1.
    pub fn sign(&self) -> i8 {
        let sr = rational_sign(&self.rational);
        let sc = rational_sign(&self.coeff);
        if sc == 0 {
            return sr;
        }
        if sr == 0 {
            return sc;
        }
        if sr == sc {
            return sr;
        }
        // Opposite signs: compare |rational|^2 against coeff^2 * radicand.
        let lhs = &self.rational * &self.rational;
        let rhs = &self.coeff * &self.coeff * BigInt::from(self.radicand);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sr,
            std::cmp::Ordering::Less => sc,
            std::cmp::Ordering::Equal => 0,
        }
    }

    /// Sign of `self - n`.
    pub fn sign_minus_int(&self, n: i64) -> i8 {
        self.add_rational(&ratio(-n, 1)).sign()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }
}

fn rational_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        if self.rational.is_zero() {
            if self.coeff.is_one() {
                return write!(f, "sqrt({})", self.radicand);
            }
            return write!(f, "{}*sqrt({})", self.coeff, self.radicand);
        }
        write!(f, "{} + {}*sqrt({})", self.rational, self.coeff, self.radicand)
    }
}

/// Parses a scalar that may be rational, a decimal, or `[-]sqrt(k)`.
pub fn parse_surd(s: &str) -> Result<Surd> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest.trim()),
        None => (1, t),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|b| b.strip_suffix(')')) {
        let k: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
        return Ok(Surd::sqrt(k, ratio(sign, 1)));
    }
    parse_rational(t).map(Surd::from_rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal() {
        assert_eq!(parse_rational("5/3").unwrap(), ratio(5, 3));
        assert_eq!(parse_rational("1.625").unwrap(), ratio(13, 8));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), ratio(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn float_expansion_is_exact() {
        assert_eq!(rational_from_f64(0.5).unwrap(), ratio(1, 2));
        assert_eq!(rational_from_f64(0.1).unwrap(), BigRational::new(BigInt::from(3602879701896397i64), BigInt::from(36028797018963968i64)));
    }

    #[test]
    fn detects_half_from_noisy_log_ratio() {
        let x = (2.0f64.sqrt()).ln() / (2.0f64 * (1.0 + 2.0 * f64::EPSILON)).ln();
        assert_eq!(detect_rational(x, 64, 1e-10).unwrap(), ratio(1, 2));
    }

    #[test]
    fn rejects_irrational_ratio() {
        let x = 3.0f64.ln() / 2.0f64.ln();
        assert!(detect_rational(x, 64, 1e-10).is_none());
    }

    #[test]
    fn detects_integers_and_small_fractions() {
        assert_eq!(detect_rational(2.0 - 1e-15, 64, 1e-10).unwrap(), ratio(2, 1));
        assert_eq!(detect_rational(0.6 + 3e-16, 64, 1e-10).unwrap(), ratio(3, 5));
    }

    #[test]
    fn surd_normalizes_square_factors() {
        let s = Surd::sqrt(8, ratio(1, 1));
        assert_eq!(s, Surd::sqrt(2, ratio(2, 1)));
        assert_eq!(Surd::sqrt(9, ratio(1, 3)), Surd::from_int(1));
    }

    #[test]
    fn surd_sign_is_exact() {
        // 3/2 - sqrt(2) > 0 since 9/4 > 2
        let s = Surd::sqrt(2, ratio(-1, 1)).add_rational(&ratio(3, 2));
        assert_eq!(s.sign(), 1);
        // 7/5 - sqrt(2) < 0 since 49/25 < 2
        let t = Surd::sqrt(2, ratio(-1, 1)).add_rational(&ratio(7, 5));
        assert_eq!(t.sign(), -1);
        assert_eq!(Surd::zero().sign(), 0);
        // sqrt(2) - 1 > 0 with both parts present and opposite signs
        let u = Surd::sqrt(2, ratio(1, 1)).add_rational(&ratio(-1, 1));
        assert_eq!(u.sign(), 1);
    }

    #[test]
    fn surd_parse_forms() {
        assert_eq!(parse_surd("sqrt(2)").unwrap(), Surd::sqrt(2, ratio(1, 1)));
        assert_eq!(parse_surd("-sqrt(3)").unwrap(), Surd::sqrt(3, ratio(-1, 1)));
        assert_eq!(parse_surd("5/3").unwrap(), Surd::from_rational(ratio(5, 3)));
        assert!(parse_surd("sqrt(x)").is_err());
    }

    #[test]
    fn surd_arithmetic() {
        let a = Surd::sqrt(2, ratio(1, 1));
        let b = a.scale(&ratio(3, 1));
        assert!((b.to_f64() - 3.0 * 2.0f64.sqrt()).abs() < 1e-12);
        let c = a.try_add(&a.neg()).unwrap();
        assert!(c.is_zero());
        let d = Surd::sqrt(2, ratio(1, 1)).try_add(&Surd::sqrt(3, ratio(1, 1)));
        assert!(d.is_none());
    }
}
