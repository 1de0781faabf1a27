//! Generalized-entanglement measures: the pure-state purity deficit
//! P* − P_S, its convex-roof extension to mixed states over isometry-indexed
//! decompositions, a Wootters concurrence oracle for two qubits, and a
//! sampling probe for membership in the hull of coherent states.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{sample_coherent_state, LieBasis};
use crate::nnls::nnls;
use crate::observables::{purity_pure, ObservableSubspace};
use crate::operator::{
    eig_herm, herm_to_coords, kron, CMatrix, CVector, DensityMatrix, HermitianOp, PureState,
};
use crate::random;
use crate::systems::pauli_y;

/// A pure-state functional with enough structure for roof optimization:
/// a value and the Wirtinger gradient g = ∂μ/∂ψ̄ (so dμ = 2 Re g†dψ).
pub trait PureMeasure {
    fn value(&self, psi: &PureState) -> f64;
    fn grad(&self, psi: &PureState) -> CVector;
}

/// The purity deficit μ(ψ) = p_star − P_S(ψ), nonnegative when p_star is the
/// maximal relative purity.
#[derive(Debug, Clone)]
pub struct PurityDeficit {
    pub subspace: ObservableSubspace,
    pub p_star: f64,
}

impl PureMeasure for PurityDeficit {
    fn value(&self, psi: &PureState) -> f64 {
        self.p_star - purity_pure(&self.subspace, psi).expect("dimension checked by caller")
    }

    fn grad(&self, psi: &PureState) -> CVector {
        let v = psi.amplitudes();
        let mut g = CVector::zeros(v.len());
        for x in self.subspace.ortho_basis() {
            let xv = x.matrix() * v;
            let e = v.dotc(&xv).re;
            g += xv.map(|z| z * (-2.0 * e));
        }
        g
    }
}

/// Pure-state generalized-entanglement measure p_star − P_S(ψ).
///
/// `p_star` must dominate the observed purity (up to 1e-9); otherwise the
/// landscape that produced it is inconsistent with the state.
pub fn ge_measure_pure(s: &ObservableSubspace, psi: &PureState, p_star: f64) -> Result<f64> {
    let p = purity_pure(s, psi)?;
    if p_star < p - 1e-9 {
        return Err(Error::InconsistentLandscape {
            observed: p,
            p_star,
        });
    }
    Ok((p_star - p).max(0.0))
}

/// A convex decomposition ρ = Σᵢ pᵢ |ψᵢ⟩⟨ψᵢ|.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl Decomposition {
    pub fn reconstruct(&self, dim: usize) -> HermitianOp {
        let mut acc = HermitianOp::zeros(dim);
        for (w, psi) in self.weights.iter().zip(&self.states) {
            let term = DensityMatrix::from_pure(psi).op().scale(*w);
            acc = acc.add(&term);
        }
        acc
    }

    pub fn average<M: PureMeasure>(&self, measure: &M) -> f64 {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(w, psi)| w * measure.value(psi))
            .sum()
    }
}

/// Result of a convex-roof minimization: an upper bound on the true roof.
#[derive(Debug, Clone)]
pub struct RoofOutcome {
    /// Best decomposition-averaged measure found (an upper bound).
    pub value: f64,
    pub decomposition: Decomposition,
    /// Converged value of each restart, in restart order.
    pub restart_values: Vec<f64>,
}

/// Convex-roof upper bound: minimize Σᵢ pᵢ μ(ψᵢ) over length-`m`
/// decompositions of ρ, parameterized by isometries U (m×r, U†U = I) applied
/// to the eigen-ensemble, by gradient descent with orthonormalization
/// retraction and `restarts` starts (the first start is the eigen-ensemble
/// itself). Returns the best value found and its decomposition.
pub fn convex_roof<M: PureMeasure>(
    measure: &M,
    rho: &DensityMatrix,
    m: usize,
    restarts: usize,
    seed: u64,
) -> Result<RoofOutcome> {
    let d = rho.dim();
    let (vals, vecs) = eig_herm(rho.op());
    let vmax = vals.max().max(0.0);
    let support: Vec<usize> = (0..d).filter(|&k| vals[k] > 1e-10 * vmax.max(1.0)).collect();
    let rank = support.len().max(1);
    if m < rank {
        return Err(Error::RoofLengthTooSmall { m, rank });
    }
    // Columns √q_k |e_k⟩ of the eigen-ensemble.
    let ensemble = CMatrix::from_fn(d, rank, |i, k| {
        let idx = support[rank - 1 - k];
        vecs[(i, idx)] * C64::new(vals[idx].max(0.0).sqrt(), 0.0)
    });

    let mut best: Option<(f64, CMatrix)> = None;
    let mut restart_values = Vec::with_capacity(restarts.max(1));
    for restart in 0..restarts.max(1) {
        let u0 = if restart == 0 {
            CMatrix::from_fn(m, rank, |i, k| {
                if i == k {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        } else {
            let mut r = random::rng_stream(seed, restart as u64);
            polar_retract(&random::ginibre(m, rank, &mut r))
        };
        let (value, u) = descend(measure, &ensemble, u0);
        restart_values.push(value);
        if best.as_ref().is_none_or(|(bv, _)| value < *bv) {
            best = Some((value, u));
        }
    }
    let (value, u) = best.expect("restarts >= 1");
    let decomposition = decomposition_from(&ensemble, &u);
    Ok(RoofOutcome {
        value,
        decomposition,
        restart_values,
    })
}

fn decomposition_from(ensemble: &CMatrix, u: &CMatrix) -> Decomposition {
    let m = u.nrows();
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for i in 0..m {
        let phi = member_vector(ensemble, u, i);
        let p = phi.norm_squared();
        if p > 1e-12 {
            weights.push(p);
            states.push(PureState::normalized(phi).expect("nonzero member"));
        }
    }
    Decomposition { weights, states }
}

fn member_vector(ensemble: &CMatrix, u: &CMatrix, i: usize) -> CVector {
    let d = ensemble.nrows();
    let r = ensemble.ncols();
    CVector::from_fn(d, |row, _| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..r {
            acc += u[(i, k)] * ensemble[(row, k)];
        }
        acc
    })
}

/// Unit-normalize a member without fixing its global phase: the measure is
/// phase-invariant but its gradient is not, and the chain rule below needs
/// the gradient at φ/‖φ‖ itself.
fn unit_member(phi: &CVector) -> PureState {
    let n = phi.norm();
    PureState::with_tol(phi.map(|z| z / n), &crate::config::Tolerances::default())
        .expect("normalized member")
}

fn roof_objective<M: PureMeasure>(measure: &M, ensemble: &CMatrix, u: &CMatrix) -> f64 {
    let m = u.nrows();
    let mut total = 0.0;
    for i in 0..m {
        let phi = member_vector(ensemble, u, i);
        let p = phi.norm_squared();
        if p > 1e-14 {
            total += p * measure.value(&unit_member(&phi));
        }
    }
    total
}

fn roof_gradient<M: PureMeasure>(measure: &M, ensemble: &CMatrix, u: &CMatrix) -> CMatrix {
    let m = u.nrows();
    let r = u.ncols();
    let mut grad = CMatrix::zeros(m, r);
    for i in 0..m {
        let phi = member_vector(ensemble, u, i);
        let p = phi.norm_squared();
        if p <= 1e-14 {
            continue;
        }
        let sqrt_p = p.sqrt();
        let psi = unit_member(&phi);
        let mu = measure.value(&psi);
        let g = measure.grad(&psi);
        let g_dot_psi = g.dotc(psi.amplitudes()).re;
        // dF = 2 Re Γᵢ†dφᵢ with Γᵢ = μφᵢ + √p (g − Re(g†ψ)ψ).
        let gamma = phi.map(|z| z * mu)
            + (&g - psi.amplitudes().map(|z| z * g_dot_psi)).map(|z| z * sqrt_p);
        let row = ensemble.adjoint() * gamma;
        for k in 0..r {
            grad[(i, k)] = row[k];
        }
    }
    grad
}

fn polar_retract(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd with u");
    let vt = svd.v_t.expect("svd with v_t");
    u * vt
}

/// Project a Euclidean gradient onto the tangent space of the Stiefel
/// manifold at U: G − U·(U†G + G†U)/2. Stepping along the unprojected
/// gradient stalls, since the retraction annihilates its normal component.
fn stiefel_tangent(u: &CMatrix, grad: &CMatrix) -> CMatrix {
    let utg = u.adjoint() * grad;
    let sym = (&utg + utg.adjoint()).map(|z| z * 0.5);
    grad - u * sym
}

fn descend<M: PureMeasure>(
    measure: &M,
    ensemble: &CMatrix,
    mut u: CMatrix,
) -> (f64, CMatrix) {
    let mut value = roof_objective(measure, ensemble, &u);
    let mut eta = 0.5;
    let mut stall = 0;
    for _ in 0..2000 {
        let grad = roof_gradient(measure, ensemble, &u);
        let rgrad = stiefel_tangent(&u, &grad);
        let gnorm = rgrad.norm();
        if gnorm < 1e-10 {
            break;
        }
        let mut accepted = false;
        while eta > 1e-13 {
            let cand = polar_retract(&(&u - rgrad.map(|z| z * eta)));
            let cv = roof_objective(measure, ensemble, &cand);
            if cv <= value - 1e-4 * eta * gnorm * gnorm {
                let gain = value - cv;
                u = cand;
                value = cv;
                accepted = true;
                // Let the step length carry over and grow again.
                eta = (eta * 2.0).min(4.0);
                if gain < 1e-12 {
                    stall += 1;
                } else {
                    stall = 0;
                }
                break;
            }
            eta *= 0.35;
        }
        if !accepted || stall > 3 {
            break;
        }
    }
    (value, u)
}

/// Wootters concurrence of a two-qubit density matrix:
/// max(0, μ₁ − μ₂ − μ₃ − μ₄) with μᵢ the descending square roots of the
/// eigenvalues of ρ(σy⊗σy)ρ*(σy⊗σy), computed through the Hermitian form
/// √ρ ρ̃ √ρ.
pub fn concurrence_oracle(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    let yy = kron(&pauli_y(), &pauli_y());
    let conj = rho.matrix().map(|z| z.conj());
    let rho_tilde = HermitianOp::new(yy.matrix() * conj * yy.matrix())?;
    // √ρ from the spectral decomposition.
    let (vals, vecs) = eig_herm(rho.op());
    let mut sqrt_rho = CMatrix::zeros(4, 4);
    for k in 0..4 {
        let w = vals[k].max(0.0).sqrt();
        let col = vecs.column(k);
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho[(i, j)] += col[i] * col[j].conj() * C64::new(w, 0.0);
            }
        }
    }
    let inner = HermitianOp::new(&sqrt_rho * rho_tilde.matrix() * &sqrt_rho)?;
    let (ivals, _) = eig_herm(&inner);
    // Eigenvalues below solver noise would enter the subtraction as ~√ε;
    // flush them to zero first.
    let floor = 1e-14 + 1e-12 * ivals.max().max(0.0);
    let mut mus: Vec<f64> = ivals
        .iter()
        .map(|v| if *v < floor { 0.0 } else { v.sqrt() })
        .collect();
    mus.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((mus[0] - mus[1] - mus[2] - mus[3]).max(0.0))
}

/// Reconstruct ρ as a nonnegative combination of sampled coherent-state
/// projectors and return the trace-norm residual.
///
/// A small residual certifies approximate generalized unentanglement; a large
/// residual is evidence only, limited by sampling coverage.
pub fn gue_hull_membership(
    lie: &LieBasis,
    rho: &DensityMatrix,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !crate::lie::is_irreducible(lie.subspace()) {
        return Err(Error::NotIrreducible { commutant_dim: 0 });
    }
    let d = lie.subspace().ambient_dim();
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rho.dim(),
        });
    }
    let mut master = random::rng(seed);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(samples);
    let mut projectors: Vec<DensityMatrix> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let sub_seed: u64 = master.random();
        let psi = sample_coherent_state(lie, sub_seed)?;
        let proj = DensityMatrix::from_pure(&psi);
        columns.push(herm_to_coords(proj.op()));
        projectors.push(proj);
    }
    let mut a = DMatrix::zeros(d * d, samples);
    for (j, col) in columns.iter().enumerate() {
        a.set_column(j, col);
    }
    let b = herm_to_coords(rho.op());
    let sol = nnls(&a, &b);
    let mut rec = HermitianOp::zeros(d);
    for (j, proj) in projectors.iter().enumerate() {
        if sol.x[j] > 0.0 {
            rec = rec.add(&proj.op().scale(sol.x[j]));
        }
    }
    Ok(rho.op().sub(&rec).trace_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::max_purity;
    use crate::observables::ObservableSubspace;
    use crate::systems::{bell_state, two_qubit_local_ops, werner_state};

    fn local_subspace() -> ObservableSubspace {
        ObservableSubspace::new(two_qubit_local_ops()).unwrap()
    }

    #[test]
    fn ge_measure_examples() {
        let s = local_subspace();
        let bell = bell_state();
        assert!((ge_measure_pure(&s, &bell, 0.75).unwrap() - 0.5).abs() < 1e-12);
        let zz = PureState::basis_state(4, 0);
        assert!(ge_measure_pure(&s, &zz, 0.75).unwrap().abs() < 1e-12);
        let full = ObservableSubspace::new(crate::systems::full_algebra_ops(4)).unwrap();
        assert!(ge_measure_pure(&full, &bell, 1.0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn ge_measure_rejects_low_p_star() {
        let s = local_subspace();
        let zz = PureState::basis_state(4, 0);
        assert!(matches!(
            ge_measure_pure(&s, &zz, 0.5),
            Err(Error::InconsistentLandscape { .. })
        ));
    }

    #[test]
    fn purity_deficit_gradient_matches_finite_differences() {
        let s = local_subspace();
        let measure = PurityDeficit {
            subspace: s,
            p_star: 0.75,
        };
        let mut rng = crate::random::rng(3);
        let psi = crate::random::random_pure(4, &mut rng);
        let g = measure.grad(&psi);
        let f0 = measure.value(&psi);
        let eps = 1e-6;
        for idx in 0..4 {
            for reim in 0..2 {
                let mut v = psi.amplitudes().clone();
                v[idx] += if reim == 0 {
                    C64::new(eps, 0.0)
                } else {
                    C64::new(0.0, eps)
                };
                // Do not renormalize: compare against the raw functional
                // μ(v/|v|)·1 expanded to first order via the chain rule the
                // gradient formula assumes a normalized argument, so project.
                let vn = v.map(|z| z / v.norm());
                let f1 = measure.value(&PureState::new(vn).unwrap());
                let pred = if reim == 0 {
                    2.0 * g[idx].re
                } else {
                    2.0 * g[idx].im
                };
                // Tangent-projected prediction.
                let along = psi.amplitudes().dotc(&g).re;
                let delta = if reim == 0 {
                    psi.amplitudes()[idx].re
                } else {
                    psi.amplitudes()[idx].im
                };
                let pred = pred - 2.0 * along * delta;
                assert!(
                    ((f1 - f0) / eps - pred).abs() < 1e-4,
                    "fd {} vs pred {}",
                    (f1 - f0) / eps,
                    pred
                );
            }
        }
    }

    #[test]
    fn roof_of_pure_state_is_pure_measure() {
        let s = local_subspace();
        let measure = PurityDeficit {
            subspace: s.clone(),
            p_star: 0.75,
        };
        let bell_rho = DensityMatrix::from_pure(&bell_state());
        let out = convex_roof(&measure, &bell_rho, 4, 4, 5).unwrap();
        let (value, decomp) = (out.value, out.decomposition);
        assert!((value - 0.5).abs() < 1e-9, "roof {value}");
        let rec = decomp.reconstruct(4);
        assert!(rec.sub(bell_rho.op()).norm() < 1e-7);
        let wsum: f64 = decomp.weights.iter().sum();
        assert!((wsum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn roof_rejects_short_decompositions() {
        let s = local_subspace();
        let measure = PurityDeficit {
            subspace: s,
            p_star: 0.75,
        };
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            convex_roof(&measure, &rho, 2, 2, 0),
            Err(Error::RoofLengthTooSmall { .. })
        ));
    }

    #[test]
    fn roof_of_maximally_mixed_two_qubit_vanishes() {
        let s = local_subspace();
        let measure = PurityDeficit {
            subspace: s,
            p_star: 0.75,
        };
        let rho = DensityMatrix::maximally_mixed(4);
        let out = convex_roof(&measure, &rho, 16, 24, 11).unwrap();
        let (value, decomp) = (out.value, out.decomposition);
        assert!(value <= 1e-3, "roof {value}");
        let rec = decomp.reconstruct(4);
        assert!(rec.sub(rho.op()).norm() < 1e-7);
    }

    #[test]
    fn concurrence_examples() {
        let bell = DensityMatrix::from_pure(&bell_state());
        assert!((concurrence_oracle(&bell).unwrap() - 1.0).abs() < 1e-10);
        let product = DensityMatrix::from_pure(&PureState::basis_state(4, 1));
        assert!(concurrence_oracle(&product).unwrap() < 1e-10);
        for p in [0.0, 0.4, 0.6, 0.8, 1.0] {
            let expect = (0.0_f64).max((3.0 * p - 1.0) / 2.0);
            let c = concurrence_oracle(&werner_state(p)).unwrap();
            assert!((c - expect).abs() < 1e-10, "p={p}: {c} vs {expect}");
        }
        assert!(concurrence_oracle(&DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn two_qubit_measure_matches_half_squared_concurrence() {
        // For pure two-qubit states, 3/4 − P_S = 1 − tr ρ_A² = C²/2.
        let s = local_subspace();
        let mut rng = crate::random::rng(13);
        for _ in 0..20 {
            let psi = crate::random::random_pure(4, &mut rng);
            let measure = ge_measure_pure(&s, &psi, 0.75).unwrap();
            let c = concurrence_oracle(&DensityMatrix::from_pure(&psi)).unwrap();
            assert!((measure - c * c / 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn hull_membership_of_included_projector() {
        let lie = LieBasis::new(local_subspace()).unwrap();
        // The first sampled projector for this seed.
        let mut master = crate::random::rng(21);
        let first_seed: u64 = master.random();
        let psi = sample_coherent_state(&lie, first_seed).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let residual = gue_hull_membership(&lie, &rho, 10, 21).unwrap();
        assert!(residual <= 1e-8, "residual {residual}");
    }

    #[test]
    fn roof_upper_bounded_by_eigen_average() {
        let s = local_subspace();
        let p_star = max_purity(&s, 8, 23).unwrap().max_value;
        let measure = PurityDeficit {
            subspace: s,
            p_star,
        };
        let mut rng = crate::random::rng(29);
        for _ in 0..5 {
            let rho = crate::random::random_density(4, &mut rng);
            let (vals, vecs) = eig_herm(rho.op());
            let mut eigen_avg = 0.0;
            for k in 0..4 {
                if vals[k] > 1e-12 {
                    let col = crate::operator::CVector::from_fn(4, |i, _| vecs[(i, k)]);
                    let psi = PureState::normalized(col).unwrap();
                    eigen_avg += vals[k] * measure.value(&psi);
                }
            }
            let value = convex_roof(&measure, &rho, 8, 6, 31).unwrap().value;
            assert!(value <= eigen_avg + 1e-9, "{value} > {eigen_avg}");
            assert!(value >= -1e-12);
        }
    }
}
