//! Error types shared across the crate.
//!
//! Every fallible operation returns [`Error`]. Validation failures carry
//! enough structure for a caller to report which rule was broken, not just
//! that one was: model defects and nondegeneracy failures are enumerated
//! rather than stringified.

use thiserror::Error;

/// A way a candidate model polynomial can fail validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelDefect {
    /// Support contains monomials of more than one total degree.
    NotHomogeneous,
    /// Coefficient at (m, n) does not equal the conjugate of the one at (n, m).
    NotRealValued,
    /// A pure term z^k or zbar^k has a nonzero coefficient.
    PureTermPresent,
    /// The coefficient of z zbar^(k0-1) is not 1.
    LeadingMixedCoefficientNotOne,
}

impl std::fmt::Display for ModelDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelDefect::NotHomogeneous => write!(f, "not homogeneous"),
            ModelDefect::NotRealValued => write!(f, "not real-valued"),
            ModelDefect::PureTermPresent => write!(f, "pure term present"),
            ModelDefect::LeadingMixedCoefficientNotOne => {
                write!(f, "coefficient of z*zbar^(k0-1) is not 1")
            }
        }
    }
}

/// A way a surface can fail the nondegeneracy conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NondegeneracyFailure {
    /// No nonzero zbar-pure tail coefficient exists within the truncation order.
    NoSWithinTruncation,
    /// The model invariant alpha is zero.
    AlphaZero,
    /// alpha equals the tail invariant s.
    AlphaEqualsS,
    /// alpha squared equals the tail invariant s.
    AlphaSquaredEqualsS,
}

impl NondegeneracyFailure {
    /// Stable machine-readable tag for reports and CLI output.
    pub fn tag(&self) -> &'static str {
        match self {
            NondegeneracyFailure::NoSWithinTruncation => "NO_S_WITHIN_TRUNCATION",
            NondegeneracyFailure::AlphaZero => "ALPHA_ZERO",
            NondegeneracyFailure::AlphaEqualsS => "ALPHA_EQUALS_S",
            NondegeneracyFailure::AlphaSquaredEqualsS => "ALPHA_SQUARED_EQUALS_S",
        }
    }
}

impl std::fmt::Display for NondegeneracyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NondegeneracyFailure::NoSWithinTruncation => {
                write!(f, "no nonzero zbar-pure coefficient within truncation")
            }
            NondegeneracyFailure::AlphaZero => write!(f, "alpha = 0"),
            NondegeneracyFailure::AlphaEqualsS => write!(f, "alpha = s"),
            NondegeneracyFailure::AlphaSquaredEqualsS => write!(f, "alpha^2 = s"),
        }
    }
}

fn join_defects<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Unified error type for the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A polynomial expected to be homogeneous has mixed total degrees.
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    /// The model polynomial (or a divisor) is identically zero.
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    /// A degree or order argument falls outside the valid range.
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),

    /// The singularity degree k0 must be at least 3.
    #[error("k0 must be at least 3, got {k0}")]
    DegreeViolation { k0: u32 },

    /// A map expected to be tangent to the identity has forbidden low-order terms.
    #[error("map is not tangent to the identity: {0}")]
    NotTangentToIdentity(String),

    /// A map component contains a monomial outside its admissible support.
    #[error("inadmissible monomial z^{k} w^{l} in map component")]
    InadmissibleMonomial { k: u32, l: u32 },

    /// The candidate model polynomial failed validation.
    #[error("invalid model polynomial: {}", join_defects(.0))]
    ModelInvalid(Vec<ModelDefect>),

    /// A transformation moved terms below degree k0 or changed the model part.
    #[error("transformation does not preserve the model: {0}")]
    ModelNotPreserved(String),

    /// The surface violates the nondegeneracy conditions required for normalization.
    #[error("nondegeneracy violated: {}", join_defects(.0))]
    NondegeneracyViolated(Vec<NondegeneracyFailure>),

    /// The linear system at one degree of the normalization has no solution.
    #[error("degree {degree} system inconsistent: {detail}")]
    DegreeSystemInconsistent { degree: u32, detail: String },

    /// The linear system at one degree has a positive-dimensional solution set.
    #[error("degree {degree} system underdetermined")]
    DegreeSystemUnderdetermined { degree: u32 },

    /// Probing a resonant coefficient did not produce an affine dependence.
    #[error("resonance at degree {degree}: probed action is not affine ({probes})")]
    ResonanceNonAffine { degree: u32, probes: String },

    /// The affine dependence at a resonant degree has a singular linear part.
    #[error("resonance at degree {degree}: linear part of probed action is singular")]
    ResonanceSingular { degree: u32 },

    /// A normalization step changed coefficients it was required to leave alone.
    #[error("step at degree {degree} disturbed lower-degree data: {detail}")]
    LowerDegreeDisturbed { degree: u32, detail: String },

    /// Two jets that must share a truncation order do not.
    #[error("truncation orders differ")]
    OrderMismatch,

    /// Input data failed structural validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Wrapped I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Wrapped JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
