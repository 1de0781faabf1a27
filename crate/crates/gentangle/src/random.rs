//! Seeded random generators for operators and states.
//!
//! All stochastic operations in the crate draw from a ChaCha stream seeded
//! explicitly, so identical seeds reproduce identical results.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, CVector, DensityMatrix, HermitianOp, PureState};

/// Deterministic RNG for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent RNG for subtask `stream` of a seed (restarts, trials, samples).
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn normal(r: &mut impl Rng) -> f64 {
    r.sample(StandardNormal)
}

/// Complex Ginibre matrix: independent standard-normal real and imaginary parts.
pub fn ginibre(rows: usize, cols: usize, r: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(normal(r), normal(r)))
}

/// Random Hermitian operator (G + G†)/2 from a Ginibre sample.
pub fn random_hermitian(dim: usize, r: &mut impl Rng) -> HermitianOp {
    let g = ginibre(dim, dim, r);
    HermitianOp::new((&g + g.adjoint()).map(|z| z * 0.5)).expect("symmetrized matrix is Hermitian")
}

/// Haar-random pure state.
pub fn random_pure(dim: usize, r: &mut impl Rng) -> PureState {
    loop {
        let v = CVector::from_fn(dim, |_, _| C64::new(normal(r), normal(r)));
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Random full-rank density matrix GG†/tr(GG†) (Hilbert-Schmidt ensemble).
pub fn random_density(dim: usize, r: &mut impl Rng) -> DensityMatrix {
    loop {
        let g = ginibre(dim, dim, r);
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        if tr > 1e-12 {
            let op = HermitianOp::new(m.map(|z| z / tr)).expect("GG† is Hermitian");
            if let Ok(rho) = DensityMatrix::new(op) {
                return rho;
            }
        }
    }
}

/// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
pub fn random_unitary(dim: usize, r: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, dim, r);
    let qr = g.qr();
    let q = qr.q();
    let rm = qr.r();
    let mut u = q;
    for k in 0..dim {
        let z = rm[(k, k)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            u[(i, k)] *= phase;
        }
    }
    u
}

/// Random direction for probes: a Hermitian operator with unit Frobenius norm.
pub fn random_direction(dim: usize, r: &mut impl Rng) -> HermitianOp {
    let h = random_hermitian(dim, r);
    let n = h.norm();
    h.scale(1.0 / n.max(1e-300))
}

/// Random vector with standard-normal entries.
pub fn random_vector(dim: usize, r: &mut impl Rng) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| normal(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_rng_is_reproducible() {
        let a = random_hermitian(3, &mut rng(42));
        let b = random_hermitian(3, &mut rng(42));
        assert!(a.sub(&b).norm() == 0.0);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(4, &mut rng(1));
        let gram = u.adjoint() * &u;
        assert!((gram - CMatrix::identity(4, 4)).norm() < 1e-10);
    }

    #[test]
    fn streams_are_independent() {
        let a = random_vector(4, &mut rng_stream(7, 0));
        let b = random_vector(4, &mut rng_stream(7, 1));
        assert!((a - b).norm() > 1e-6);
    }
}
