//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building states or evaluating
/// metrological quantities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A matrix has the wrong dimension for the requested operation.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation requiring a Hermitian matrix received one that is not.
    #[error("matrix is not Hermitian (max |H - H^dag| = {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    /// A matrix fails one of the density-matrix invariants
    /// (Hermiticity, unit trace, positive semidefiniteness).
    #[error("not a density matrix: {reason}")]
    NotAState { reason: String },

    /// A nominally positive-semidefinite matrix has an eigenvalue below
    /// the tolerated floor.
    #[error("eigenvalue {value:.3e} is negative beyond tolerance")]
    NegativeEigenvalue { value: f64 },

    /// A scalar parameter lies outside its documented domain.
    #[error("parameter {name} = {value} outside its range {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// The left qubit's marginal is (numerically) pure, so the steering
    /// geometry degenerates: the 1 - |a|^2 denominators vanish.
    #[error("left marginal is pure; steering geometry is undefined")]
    SingularMarginal,

    /// A conditional state is requested for an outcome of (numerically)
    /// zero probability.
    #[error("measurement outcome has vanishing probability ({value:.3e})")]
    ZeroProbability { value: f64 },

    /// The supplied qubit basis is not orthonormal.
    #[error("basis is not orthonormal (max deviation {deviation:.3e})")]
    NonOrthonormalBasis { deviation: f64 },

    /// An input that must be strictly positive is zero or negative.
    #[error("input must be strictly positive, got {value}")]
    NonPositiveInput { value: f64 },

    /// Every eigenvalue pair of the state falls below the spectral support
    /// threshold, so the Fisher-information sum is empty.
    #[error("state has no spectral support above threshold")]
    DegenerateSupport,

    /// A block with a determinant above the singularity threshold could
    /// not be inverted.
    #[error("non-singular block failed inversion")]
    SingularBlock,

    /// The phase parameter carries no information at the poles of the
    /// initial state, where the closed form is singular.
    #[error("phase quantity undefined at theta = 0 or theta = pi")]
    SingularTheta,

    /// No measurement strength in [0, 1) attains the optimum.
    #[error("no optimal strength exists in [0,1) for these parameters")]
    NoOptimum,

    /// The post-selected state has (numerically) vanishing weight.
    #[error("state normalization vanishes")]
    ZeroNormalization,

    /// The observable handed to the skew information is not Hermitian.
    #[error("observable is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitianObservable { deviation: f64 },

    /// An X-state marginal block has vanishing weight, so the steered
    /// coherence formula divides by zero.
    #[error("marginal block has vanishing weight")]
    DegenerateMarginal,
}
