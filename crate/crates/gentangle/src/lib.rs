//! Generalized entanglement relative to a distinguished subspace of
//! observables, in the ordered-linear-spaces (convex cones) formulation.
//!
//! The crate provides:
//!
//! - dense Hermitian operator algebra ([`operator`]);
//! - finitely generated cones, dual cones, effects, and the cone-pair induced
//!   by restricting states to an observable subspace ([`cone`]);
//! - reduction maps, projection superoperators, relative purity, and
//!   preimage-uniqueness probes ([`observables`]);
//! - Lie-algebraic settings: bracket closure, irreducibility, coherent-state
//!   sampling, purity maximization, and unentanglement certification
//!   ([`lie`]);
//! - entanglement measures: purity deficit, convex-roof extension to mixed
//!   states, a Wootters concurrence oracle, and hull-membership sampling
//!   ([`measures`]);
//! - completely positive maps in Hellwig-Kraus form, explicitly decomposed
//!   maps, conditional composition, and liftability analysis ([`maps`]);
//! - runnable verification suites for the above ([`verify`]).
//!
//! All stochastic routines take explicit seeds and are deterministic.

pub mod config;
pub mod cone;
pub mod error;
pub mod lie;
pub mod maps;
pub mod measures;
pub mod nnls;
pub mod observables;
pub mod operator;
pub mod random;
pub mod systems;
pub mod verify;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use operator::{DensityMatrix, HermitianOp, PureState};

// Re-exported so callers can name the RNG traits behind the sampling APIs.
pub use rand;
