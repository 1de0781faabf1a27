/// Numerical tolerances used across the crate.
///
/// Every threshold is a configuration value so that verification suites can
/// tighten (or relax) them; the defaults are the contract.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Entrywise Hermiticity tolerance for accepting a matrix as-is.
    pub hermiticity: f64,
    /// Hermiticity rejection threshold: symmetrization repairs smaller
    /// asymmetries, larger ones are an error.
    pub hermiticity_reject: f64,
    /// Allowed negative part of the spectrum of a density matrix.
    pub psd: f64,
    /// Allowed trace deviation of a density matrix from 1.
    pub trace: f64,
    /// Allowed norm deviation of a pure-state vector from 1.
    pub unit_norm: f64,
    /// Pairwise orthonormality tolerance for operator bases.
    pub ortho: f64,
    /// Gram-Schmidt drop threshold, relative to the largest input norm.
    pub gs_drop_rel: f64,
    /// Relative reconstruction residual for eigendecompositions.
    pub eig_residual: f64,
    /// Span-membership residual (identity detection, mutual projections).
    pub span: f64,
    /// Default residual threshold for cone membership (relative).
    pub membership: f64,
    /// Constraint residual below which a point counts as feasible.
    pub feasibility: f64,
    /// Trace-distance spread below which a preimage probe reports "unique".
    pub uniqueness: f64,
    /// Maximum bracket-closure residual of a Lie basis.
    pub lie_closure: f64,
    /// Spectral gap below which a ground state counts as degenerate.
    pub degeneracy_gap: f64,
    /// Residual threshold for liftability of a map.
    pub lift: f64,
    /// Relative second-eigenvalue threshold for the rank-1 probe.
    pub extremality_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-10,
            hermiticity_reject: 1e-8,
            psd: 1e-9,
            trace: 1e-9,
            unit_norm: 1e-10,
            ortho: 1e-9,
            gs_drop_rel: 1e-8,
            eig_residual: 1e-9,
            span: 1e-8,
            membership: 1e-8,
            feasibility: 1e-7,
            uniqueness: 1e-6,
            lie_closure: 1e-8,
            degeneracy_gap: 1e-8,
            lift: 1e-8,
            extremality_rel: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn new() -> Self {
        Self::default()
    }
}
