use thiserror::Error;

/// Errors produced by construction and by operations whose preconditions fail.
///
/// Numerical "soft" outcomes (infeasible probes, unknown verdicts) are not
/// errors; they are encoded in the result types of the operations concerned.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian: max asymmetry {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("state vector is not normalized: |norm - 1| = {residual:e}")]
    NotNormalized { residual: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("generator {index} is numerically zero")]
    ZeroGenerator { index: usize },

    #[error("generator index {index} out of range (cone has {count} generators)")]
    BadGeneratorIndex { index: usize, count: usize },

    #[error("cone is not simplicial: {reason}")]
    NotSimplicial { reason: String },

    #[error("identity operator is not in the span of the subspace (residual {residual:e})")]
    IdentityNotInSpan { residual: f64 },

    #[error("operation requires the quantum realization of the cone-pair")]
    NotQuantumPair,

    #[error("subspace is not closed under the Lie bracket (residual {residual:e})")]
    NotLieClosed { residual: f64 },

    #[error("subspace does not act irreducibly (commutant dimension {commutant_dim})")]
    NotIrreducible { commutant_dim: usize },

    #[error("persistent ground-state degeneracy after {attempts} resamples")]
    PersistentDegeneracy { attempts: usize },

    #[error("purity landscape is inconsistent: observed purity {observed} exceeds p_star {p_star}")]
    InconsistentLandscape { observed: f64, p_star: f64 },

    #[error("decomposition length {m} is below the state rank {rank}")]
    RoofLengthTooSmall { m: usize, rank: usize },

    #[error("branch '{label}' has no follower map")]
    MissingFollower { label: String },

    #[error("map is not liftable to the reduced cone")]
    NotLiftable,

    #[error("unknown verification suite '{0}'")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
