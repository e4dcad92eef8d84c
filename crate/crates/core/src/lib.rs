//! Decides whether an anisotropic Besov space (homogeneous or inhomogeneous,
//! generated by an expansive matrix with parameters p, r, alpha) embeds into
//! the isotropic Sobolev space W^(n,q).
//!
//! The answer is a tri-state verdict (embeds / does not embed / undecided)
//! with a full trace of every condition consulted. Two independent routes are
//! available: closed-form decision tables over derived exponents, and a
//! generic summability criterion on the sequence
//! `a_j = |det A|^(j(1/p - 1/t - alpha)) (1 + ||A^j||^n)`,
//! cross-checked by a numeric partial-sum probe.

pub mod decision;
pub mod error;
pub mod exact;
pub mod exponent;
pub mod matrix;
pub mod probe;
pub mod sequence;

pub use decision::{
    decide_homogeneous, decide_inhomogeneous, decide_via_summability, sharpness_region,
    CheckKind, CheckStatus, ConditionCheck, DerivedReport, Outcome, Route, Variant, Verdict,
    VerdictWarning,
};
pub use error::{Error, Result};
pub use exact::Surd;
pub use exponent::{
    composite_exponent, conjugate, q_nabla, DerivedExponents, EmbeddingParams, ExtReal,
    IsotropyDegree, Threshold, DEFAULT_BOUNDARY_TOL,
};
pub use matrix::{
    expansive_normal_form, geometric_multiplicity, isotropy, isotropy_degree,
    matrix_power_norm, matrix_power_norm_log, max_jordan_block_size, spectral_analyze,
    AnalysisWarning, AnalyzedMatrix, EigenCluster, InputMatrix, NormalForm, PowerNormWalker,
    DEFAULT_CLUSTER_TOL, DEFAULT_CONDITION_CAP,
};
pub use probe::{numeric_probe, probe_term_logs, ProbeOutcome};
pub use sequence::{
    build_sequence_spec, classify_membership, term_log, term_value, Domain, Membership,
    MembershipResult, SequenceSpec, TailGrowth,
};
