//! Eigenvalue extraction, modulus clustering, and Jordan structure via rank
//! chains on (A - lambda*I)^k.

use nalgebra::{Complex, DMatrix, Schur};
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::matrix::{normal_form, AnalysisWarning, InputMatrix};

type Complex64 = Complex<f64>;

/// Default relative tolerance for merging eigenvalue moduli into clusters.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Merges closer than the tolerance but farther than this floor are flagged:
/// the two moduli may be genuinely distinct.
const MERGE_REPORT_FLOOR: f64 = 1e-12;

/// Unmerged moduli closer than STRADDLE_FACTOR * tol are flagged as
/// straddling the tolerance band.
const STRADDLE_FACTOR: f64 = 100.0;

/// Imaginary parts below this relative band are treated as spurious:
/// defective real eigenvalues split under rounding by about sqrt(epsilon),
/// which can exceed the cluster tolerance.
const NEAR_REAL_BAND: f64 = 1e-6;

/// One distinct eigenvalue inside a modulus cluster. Conjugate pairs are
/// listed once with the flag set; their multiplicities count both members.
#[derive(Clone, Debug)]
pub struct Representative {
    pub value: Complex64,
    pub conjugate_pair: bool,
    pub algebraic: usize,
    pub geometric: usize,
    pub max_jordan_block: usize,
}

/// All eigenvalues sharing one modulus, with aggregated multiplicities.
#[derive(Clone, Debug)]
pub struct EigenCluster {
    pub modulus: f64,
    pub representatives: Vec<Representative>,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub max_jordan_block: usize,
}

/// A matrix together with all spectral data the embedding criteria consume.
#[derive(Clone, Debug)]
pub struct AnalyzedMatrix {
    matrix: InputMatrix,
    /// Clusters sorted by modulus, descending.
    pub clusters: Vec<EigenCluster>,
    pub det_abs: f64,
    pub lambda_max: f64,
    pub is_expansive: bool,
    is_and: bool,
    pub warnings: Vec<AnalysisWarning>,
    /// Exact values of ln(modulus_i) / ln(det_abs) per cluster, when the
    /// whole spectrum admits them. Present only for expansive matrices.
    pub log_ratios: Option<Vec<BigRational>>,
}

impl AnalyzedMatrix {
    pub fn matrix(&self) -> &InputMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// AND status; defined only for expansive matrices.
    pub fn is_and(&self) -> Option<bool> {
        self.is_expansive.then_some(self.is_and)
    }

    pub fn lambda_min(&self) -> f64 {
        self.clusters.last().map(|c| c.modulus).unwrap_or(self.lambda_max)
    }

    pub fn max_cluster(&self) -> &EigenCluster {
        &self.clusters[0]
    }

    pub fn min_cluster(&self) -> &EigenCluster {
        self.clusters.last().unwrap()
    }

    pub fn has_cluster_ambiguity(&self) -> bool {
        self.warnings
            .iter()
            .any(|w| matches!(w, AnalysisWarning::ClusterAmbiguity { .. }))
    }
}

fn spectral_norm_real(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().fold(0.0, |a, &s| a.max(s))
}

fn singular_values_complex(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().singular_values().iter().copied().collect()
}

/// Ranks of ((A - lambda*I)/s)^k for k = 1..=max_pow, with per-step
/// renormalization so that rank thresholds stay scale-free.
fn ranks_of_powers(
    a: &DMatrix<f64>,
    lambda: Complex64,
    tol: f64,
    max_pow: usize,
) -> Vec<usize> {
    let d = a.nrows();
    let mut base: DMatrix<Complex64> = a.map(|x| Complex64::new(x, 0.0));
    for i in 0..d {
        base[(i, i)] -= lambda;
    }
    let parent_scale = spectral_norm_real(a) + lambda.norm();
    let svs = singular_values_complex(&base);
    let smax = svs.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax <= tol * parent_scale {
        // A - lambda*I vanishes at the working scale.
        return vec![0; max_pow];
    }
    base /= Complex64::new(smax, 0.0);
    let mut current = base.clone();
    let mut out = Vec::with_capacity(max_pow);
    for _ in 0..max_pow {
        let svs = singular_values_complex(&current);
        let top = svs.iter().fold(0.0f64, |m, &s| m.max(s));
        if top <= tol {
            out.push(0);
            while out.len() < max_pow {
                out.push(0);
            }
            return out;
        }
        out.push(svs.iter().filter(|&&s| s > tol * top).count());
        current = &current * &base;
        let top_next = singular_values_complex(&current)
            .iter()
            .fold(0.0f64, |m, &s| m.max(s));
        if top_next > 0.0 {
            current /= Complex64::new(top_next, 0.0);
        }
    }
    out
}

/// Geometric multiplicity `d - rank(A - lambda*I)` with singular values
/// thresholded relative to the matrix scale.
pub fn geometric_multiplicity(m: &InputMatrix, lambda: Complex64, tol: f64) -> Result<usize> {
    let ranks = ranks_of_powers(m.values(), lambda, tol, 1);
    let d = m.dim();
    if ranks[0] == d {
        return Err(Error::NotAnEigenvalue { value: format!("{lambda}") });
    }
    Ok(d - ranks[0])
}

/// Largest Jordan block at `lambda`: the smallest k with
/// rank((A - lambda*I)^k) = rank((A - lambda*I)^(k+1)).
pub fn max_jordan_block_size(m: &InputMatrix, lambda: Complex64, tol: f64) -> Result<usize> {
    let d = m.dim();
    let ranks = ranks_of_powers(m.values(), lambda, tol, d + 1);
    if ranks[0] == d {
        return Err(Error::NotAnEigenvalue { value: format!("{lambda}") });
    }
    for k in 1..=d {
        if ranks[k - 1] == ranks[k] {
            return Ok(k);
        }
    }
    Ok(d)
}

/// Full spectral analysis: eigenvalues, modulus clusters, multiplicities,
/// Jordan data, expansiveness, and AND status.
pub fn spectral_analyze(m: &InputMatrix, tol: f64) -> Result<AnalyzedMatrix> {
    let values = m.values();
    let d = m.dim();

    let svs = values.singular_values();
    let sigma_max = svs.iter().fold(0.0f64, |a, &s| a.max(s));
    let sigma_min = svs.iter().fold(f64::INFINITY, |a, &s| a.min(s));
    if sigma_max == 0.0 || sigma_min <= tol * sigma_max {
        return Err(Error::SingularMatrix);
    }

    let schur =
        Schur::try_new(values.clone(), f64::EPSILON, 100_000).ok_or(Error::EigenSolverFailure)?;
    let mut eigenvalues: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();

    let mut warnings = Vec::new();

    // A 2x2 Schur block at the brink of defectivity can report a NaN
    // imaginary part; the block is then numerically a repeated real
    // eigenvalue.
    for ev in eigenvalues.iter_mut() {
        if ev.im.is_nan() && ev.re.is_finite() {
            warnings.push(AnalysisWarning::ClusterAmbiguity {
                detail: format!(
                    "eigenvalue near {} came from a degenerate 2x2 block; treated as real",
                    ev.re
                ),
            });
            ev.im = 0.0;
        }
        if !ev.re.is_finite() || !ev.im.is_finite() {
            return Err(Error::EigenSolverFailure);
        }
    }

    // Canonicalize: drop spurious imaginary parts, fold conjugates onto the
    // upper half plane.
    let mut canonical: Vec<(Complex64, bool)> = Vec::with_capacity(d); // (value, counts_twice)
    let near_real = tol.max(NEAR_REAL_BAND);
    for &ev in &eigenvalues {
        let scale = ev.norm().max(1.0);
        if ev.im.abs() <= near_real * scale {
            if ev.im != 0.0 {
                warnings.push(AnalysisWarning::ClusterAmbiguity {
                    detail: format!(
                        "eigenvalue {ev} has a near-zero imaginary part; treated as real"
                    ),
                });
            }
            canonical.push((Complex64::new(ev.re, 0.0), false));
        } else if ev.im > 0.0 {
            canonical.push((ev, true));
        }
        // Negative-imaginary members are represented by their conjugates.
    }

    // Cluster by modulus.
    canonical.sort_by(|a, b| a.0.norm().partial_cmp(&b.0.norm()).unwrap());
    let mut groups: Vec<Vec<(Complex64, bool)>> = Vec::new();
    for item in canonical {
        let modulus = item.0.norm();
        match groups.last_mut() {
            Some(group) => {
                let prev = group.last().unwrap().0.norm();
                let scale = modulus.max(prev);
                let gap = modulus - prev;
                if gap <= tol * scale {
                    if gap > MERGE_REPORT_FLOOR * scale {
                        warnings.push(AnalysisWarning::ClusterAmbiguity {
                            detail: format!(
                                "moduli {prev:.17} and {modulus:.17} merged at relative distance {:.3e}",
                                gap / scale
                            ),
                        });
                    }
                    group.push(item);
                } else {
                    if gap <= STRADDLE_FACTOR * tol * scale {
                        warnings.push(AnalysisWarning::ClusterAmbiguity {
                            detail: format!(
                                "moduli {prev:.17} and {modulus:.17} straddle the tolerance band (relative distance {:.3e})",
                                gap / scale
                            ),
                        });
                    }
                    groups.push(vec![item]);
                }
            }
            None => groups.push(vec![item]),
        }
    }

    let mut clusters = Vec::with_capacity(groups.len());
    for group in groups {
        let modulus = group.iter().map(|(v, _)| v.norm()).sum::<f64>() / group.len() as f64;
        // Deduplicate values within the cluster.
        let mut reps: Vec<(Complex64, bool, usize)> = Vec::new(); // (value, pair, root_count)
        'outer: for (value, pair) in group {
            let scale = value.norm().max(1.0);
            for rep in reps.iter_mut() {
                if rep.1 == pair && (rep.0 - value).norm() <= tol * scale {
                    rep.2 += 1;
                    continue 'outer;
                }
            }
            reps.push((value, pair, 1));
        }

        let mut representatives = Vec::with_capacity(reps.len());
        let mut algebraic = 0usize;
        let mut geometric = 0usize;
        let mut max_block = 1usize;
        for (value, pair, count) in reps {
            let mult = if pair { 2 * count } else { count };
            let ranks = ranks_of_powers(values, value, tol, count + 1);
            let geom_single = d.saturating_sub(ranks[0]);
            let mut block = count;
            for k in 1..=count {
                if ranks[k - 1] == ranks[k] {
                    block = k;
                    break;
                }
            }
            let geom = if pair { 2 * geom_single } else { geom_single };
            algebraic += mult;
            geometric += geom;
            max_block = max_block.max(block);
            representatives.push(Representative {
                value,
                conjugate_pair: pair,
                algebraic: mult,
                geometric: geom,
                max_jordan_block: block,
            });
        }
        clusters.push(EigenCluster {
            modulus,
            representatives,
            algebraic_multiplicity: algebraic,
            geometric_multiplicity: geometric,
            max_jordan_block: max_block,
        });
    }

    clusters.sort_by(|a, b| b.modulus.partial_cmp(&a.modulus).unwrap());
    debug_assert_eq!(
        clusters.iter().map(|c| c.algebraic_multiplicity).sum::<usize>(),
        d
    );

    let det_abs = values.determinant().abs();
    let product: f64 = clusters
        .iter()
        .map(|c| c.modulus.powi(c.algebraic_multiplicity as i32))
        .product();
    if (product - det_abs).abs() > 1e-6 * det_abs.max(1.0) {
        warnings.push(AnalysisWarning::ClusterAmbiguity {
            detail: format!(
                "modulus product {product:.17} disagrees with |det| {det_abs:.17}"
            ),
        });
    }

    let lambda_max = clusters[0].modulus;
    let is_expansive = clusters.iter().all(|c| c.modulus > 1.0);
    let is_and = clusters[0].algebraic_multiplicity == clusters[0].geometric_multiplicity;

    let log_ratios = if is_expansive {
        detect_log_ratios(&clusters, det_abs)
    } else {
        None
    };

    Ok(AnalyzedMatrix {
        matrix: m.clone(),
        clusters,
        det_abs,
        lambda_max,
        is_expansive,
        is_and,
        warnings,
        log_ratios,
    })
}

/// Tries to recognize every `ln(modulus) / ln(det_abs)` as a small rational.
/// The detected family must reproduce `sum(alg_i * ratio_i) = 1` exactly,
/// which is what `det = product of moduli^alg` demands.
fn detect_log_ratios(clusters: &[EigenCluster], det_abs: f64) -> Option<Vec<BigRational>> {
    let ln_det = det_abs.ln();
    if !ln_det.is_finite() || ln_det <= 0.0 {
        return None;
    }
    let ratios: Option<Vec<BigRational>> = clusters
        .iter()
        .map(|c| normal_form::detect_log_ratio(c.modulus.ln() / ln_det))
        .collect();
    let ratios = ratios?;
    let total: BigRational = clusters
        .iter()
        .zip(&ratios)
        .map(|(c, r)| r * ratio(c.algebraic_multiplicity as i64, 1))
        .sum();
    if total != BigRational::one() {
        return None;
    }
    Some(ratios)
}
