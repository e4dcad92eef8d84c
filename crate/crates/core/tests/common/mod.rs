//! Shared test-corpus generators: random expansive matrices in several
//! structural flavors, and parameter tuples on rational grids.

#![allow(dead_code)]

use besov_embed::{EmbeddingParams, ExtReal, InputMatrix, Surd};
use nalgebra::DMatrix;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StdRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn ext(n: i64, d: i64) -> ExtReal {
    ExtReal::Finite(ratio(n, d))
}

/// Random orthogonal matrix from the QR factorization of a random matrix.
pub fn random_orthogonal(rng: &mut StdRng, d: usize) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0f64..1.0));
        let qr = g.qr();
        let q = qr.q();
        if q.determinant().abs() > 0.5 {
            return q;
        }
    }
}

fn to_input(m: &DMatrix<f64>) -> InputMatrix {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    InputMatrix::from_rows(&rows).unwrap()
}

/// Moduli in [1.15, 2.6] with pairwise relative separation of at least 3%.
fn separated_moduli(rng: &mut StdRng, count: usize) -> Vec<f64> {
    'outer: loop {
        let mut m: Vec<f64> = (0..count).map(|_| rng.random_range(1.15..2.6)).collect();
        m.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in m.windows(2) {
            if (w[1] - w[0]) / w[1] < 0.03 {
                continue 'outer;
            }
        }
        return m;
    }
}

/// Random expansive matrix in (block) triangular form: eigenvalues are exact,
/// defective blocks allowed, no conjugation.
pub fn random_expansive_triangular(rng: &mut StdRng, d: usize) -> InputMatrix {
    let mut t = DMatrix::<f64>::zeros(d, d);
    let mut pos = 0usize;
    let moduli = separated_moduli(rng, d);
    let mut mod_iter = moduli.into_iter();
    while pos < d {
        let remaining = d - pos;
        let modulus = mod_iter.next().unwrap();
        let choice = rng.random_range(0..4);
        match choice {
            // 2x2 rotation block (complex pair).
            0 if remaining >= 2 => {
                let theta: f64 = rng.random_range(0.3..2.8);
                let (s, c) = theta.sin_cos();
                t[(pos, pos)] = modulus * c;
                t[(pos, pos + 1)] = -modulus * s;
                t[(pos + 1, pos)] = modulus * s;
                t[(pos + 1, pos + 1)] = modulus * c;
                pos += 2;
                let _ = mod_iter.next();
            }
            // Defective 2x2 Jordan block.
            1 if remaining >= 2 => {
                let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
                t[(pos, pos)] = sign * modulus;
                t[(pos, pos + 1)] = 1.0;
                t[(pos + 1, pos + 1)] = sign * modulus;
                pos += 2;
                let _ = mod_iter.next();
            }
            // Repeated diagonalizable eigenvalue.
            2 if remaining >= 2 => {
                let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
                t[(pos, pos)] = sign * modulus;
                t[(pos + 1, pos + 1)] = sign * modulus;
                pos += 2;
                let _ = mod_iter.next();
            }
            // Simple real eigenvalue.
            _ => {
                let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
                t[(pos, pos)] = sign * modulus;
                pos += 1;
            }
        }
    }
    to_input(&t)
}

/// Random expansive matrix with diagonalizable spectrum, conjugated by a
/// random orthogonal matrix. Analysis stays warning-free.
pub fn random_expansive_conjugated(rng: &mut StdRng, d: usize) -> InputMatrix {
    let mut t = DMatrix::<f64>::zeros(d, d);
    let moduli = separated_moduli(rng, d);
    let mut pos = 0usize;
    let mut mod_iter = moduli.into_iter();
    while pos < d {
        let remaining = d - pos;
        let modulus = mod_iter.next().unwrap();
        if remaining >= 2 && rng.random_range(0..3) == 0 {
            let theta: f64 = rng.random_range(0.3..2.8);
            let (s, c) = theta.sin_cos();
            t[(pos, pos)] = modulus * c;
            t[(pos, pos + 1)] = -modulus * s;
            t[(pos + 1, pos)] = modulus * s;
            t[(pos + 1, pos + 1)] = modulus * c;
            pos += 2;
            let _ = mod_iter.next();
        } else {
            let sign = if rng.random_range(0..2) == 0 { 1.0 } else { -1.0 };
            t[(pos, pos)] = sign * modulus;
            pos += 1;
        }
    }
    // Couplings above the diagonal blocks keep the spectrum but mix the basis.
    for i in 0..d {
        for j in (i + 2)..d {
            if rng.random_range(0..2) == 0 {
                t[(i, j)] = rng.random_range(-0.4..0.4);
            }
        }
    }
    let q = random_orthogonal(rng, d);
    to_input(&(&q * t * q.transpose()))
}

pub fn random_expansive(rng: &mut StdRng, d: usize) -> InputMatrix {
    if rng.random_range(0..2) == 0 {
        random_expansive_triangular(rng, d)
    } else {
        random_expansive_conjugated(rng, d)
    }
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// Upper bound on ln ||J_m(mu)^j|| via the binomial expansion of the power.
fn jordan_power_norm_bound_log(mu: f64, m: usize, j: u64) -> f64 {
    let mut total = f64::NEG_INFINITY;
    let mut log_binom = 0.0;
    for i in 0..m as u64 {
        if i > 0 {
            log_binom += ((j - i + 1) as f64).ln() - (i as f64).ln();
        }
        total = log_add(total, log_binom + (j - i) as f64 * mu.ln());
    }
    total
}

/// Whether a sub-block J_m(mu) stays strictly below lambda^j for all
/// j in [32, 64], so the top eigenvalue rules the norm on that window.
fn envelope_dominated(lambda: f64, mu: f64, m: usize) -> bool {
    if m <= 1 {
        return true;
    }
    (32..=64u64).all(|j| jordan_power_norm_bound_log(mu, m, j) < (j as f64) * lambda.ln() - 1e-6)
}

/// Random AND matrix in expansive Jordan normal form (eigenvalues real and
/// greater than 1, det = 2, top eigenvalue diagonalizable), constructed so
/// the norm reaches its asymptotic regime within the test window.
pub fn random_and_normal_form(rng: &mut StdRng, d: usize) -> DMatrix<f64> {
    loop {
        match d {
            2 => {
                let lam = rng.random_range(1.43..1.95);
                return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![lam, 2.0 / lam]));
            }
            3 => {
                let style = rng.random_range(0..3);
                if style == 0 {
                    let c = 2.0f64.powf(1.0 / 3.0);
                    return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c, c, c]));
                }
                if style == 1 {
                    // lam simple max, mu repeated diagonalizable below it.
                    let mu: f64 = rng.random_range(1.05..1.25);
                    let lam = 2.0 / (mu * mu);
                    if lam > mu * 1.05 {
                        return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                            lam, mu, mu,
                        ]));
                    }
                } else {
                    // lam simple max over a defective pair; needs envelope
                    // domination inside the window.
                    let mu: f64 = rng.random_range(1.02..1.2);
                    let lam = 2.0 / (mu * mu);
                    if lam > mu && envelope_dominated(lam, mu, 2) {
                        let mut t = DMatrix::zeros(3, 3);
                        t[(0, 0)] = lam;
                        t[(1, 1)] = mu;
                        t[(1, 2)] = 1.0;
                        t[(2, 2)] = mu;
                        return t;
                    }
                }
            }
            _ => {
                let style = rng.random_range(0..3);
                if style == 0 {
                    let c = 2.0f64.powf(0.25);
                    return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c, c, c, c]));
                }
                if style == 1 {
                    let mu: f64 = rng.random_range(1.02..1.15);
                    let nu: f64 = rng.random_range(1.02..1.15);
                    let lam = 2.0 / (mu * mu * nu);
                    if lam > mu.max(nu) * 1.05 {
                        return DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
                            lam, mu, mu, nu,
                        ]));
                    }
                } else {
                    let mu: f64 = rng.random_range(1.02..1.12);
                    let nu: f64 = rng.random_range(1.02..1.12);
                    let lam = 2.0 / (mu * mu * nu);
                    if lam > mu.max(nu) && envelope_dominated(lam, mu, 2) {
                        let mut t = DMatrix::zeros(4, 4);
                        t[(0, 0)] = lam;
                        t[(1, 1)] = mu;
                        t[(1, 2)] = 1.0;
                        t[(2, 2)] = mu;
                        t[(3, 3)] = nu;
                        return t;
                    }
                }
            }
        }
    }
}

/// Random non-AND matrix in expansive Jordan normal form: the top eigenvalue
/// carries a Jordan block of size >= 2.
pub fn random_non_and_normal_form(rng: &mut StdRng, d: usize) -> DMatrix<f64> {
    let jordan = |lam: f64, m: usize| {
        let mut b = DMatrix::zeros(m, m);
        for i in 0..m {
            b[(i, i)] = lam;
            if i + 1 < m {
                b[(i, i + 1)] = 1.0;
            }
        }
        b
    };
    loop {
        match d {
            2 => return jordan(2.0f64.sqrt(), 2),
            3 => {
                if rng.random_range(0..4) == 0 {
                    return jordan(2.0f64.powf(1.0 / 3.0), 3);
                }
                let lam: f64 = rng.random_range(1.27..1.4);
                let mu = 2.0 / (lam * lam);
                if mu > 1.0 && lam > mu {
                    let mut t = DMatrix::zeros(3, 3);
                    t.view_mut((0, 0), (2, 2)).copy_from(&jordan(lam, 2));
                    t[(2, 2)] = mu;
                    return t;
                }
            }
            _ => {
                let style = rng.random_range(0..3);
                if style == 0 {
                    return jordan(2.0f64.powf(0.25), 4);
                }
                if style == 1 {
                    let lam: f64 = rng.random_range(1.2..1.4);
                    let mu = 2.0f64.sqrt() / lam;
                    if mu > 1.0 && lam >= mu {
                        let mut t = DMatrix::zeros(4, 4);
                        t.view_mut((0, 0), (2, 2)).copy_from(&jordan(lam, 2));
                        t.view_mut((2, 2), (2, 2)).copy_from(&jordan(mu, 2));
                        return t;
                    }
                } else {
                    let lam: f64 = rng.random_range(1.22..1.38);
                    let mu = 2.0 / lam.powi(3);
                    if mu > 1.0 && lam > mu {
                        let mut t = DMatrix::zeros(4, 4);
                        t.view_mut((0, 0), (3, 3)).copy_from(&jordan(lam, 3));
                        t[(3, 3)] = mu;
                        return t;
                    }
                }
            }
        }
    }
}

pub fn input_from(m: &DMatrix<f64>) -> InputMatrix {
    to_input(m)
}

const EXP_GRID: [(i64, i64); 11] = [
    (1, 3),
    (1, 2),
    (2, 3),
    (1, 1),
    (4, 3),
    (3, 2),
    (2, 1),
    (3, 1),
    (4, 1),
    (8, 1),
    (0, 0), // sentinel for infinity
];

pub fn random_exponent(rng: &mut StdRng) -> ExtReal {
    let (n, d) = EXP_GRID[rng.random_range(0..EXP_GRID.len())];
    if d == 0 {
        ExtReal::Infinity
    } else {
        ext(n, d)
    }
}

const ALPHA_SHIFTS: [(i64, i64); 9] = [
    (-1, 1),
    (-1, 2),
    (-1, 6),
    (0, 1),
    (1, 6),
    (1, 2),
    (1, 1),
    (3, 2),
    (5, 3),
];

/// Random parameter tuple on a rational grid; alpha is chosen so that n*
/// lands exactly on grid values straddling zero.
pub fn random_params(rng: &mut StdRng) -> EmbeddingParams {
    let p = random_exponent(rng);
    let q = random_exponent(rng);
    let (sn, sd) = ALPHA_SHIFTS[rng.random_range(0..ALPHA_SHIFTS.len())];
    let alpha = p.inv_or_zero() - q.inv_or_zero() + ratio(sn, sd);
    EmbeddingParams {
        p,
        q,
        r: random_exponent(rng),
        alpha: Surd::from_rational(alpha),
        n: rng.random_range(0..=5),
    }
}
