//! Lie-algebraically distinguished observables: bracket-closure and
//! irreducibility checks, ground states, coherent-state sampling, purity
//! maximization over the sphere, and unentanglement certification.

use rand::Rng;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::observables::{purity_pure, ObservableSubspace};
use crate::operator::{eig_herm, trace_inner, CMatrix, CVector, HermitianOp, PureState};
use crate::random;

/// An observable subspace certified closed under the bracket
/// [X, Y] := i(XY − YX) and containing the identity.
#[derive(Debug, Clone)]
pub struct LieBasis {
    subspace: ObservableSubspace,
    structure_residual: f64,
}

impl LieBasis {
    pub fn new(subspace: ObservableSubspace) -> Result<Self> {
        Self::with_tol(subspace, &Tolerances::default())
    }

    pub fn with_tol(subspace: ObservableSubspace, tol: &Tolerances) -> Result<Self> {
        if !subspace.includes_identity() {
            return Err(Error::IdentityNotInSpan { residual: f64::NAN });
        }
        let residual = check_lie_closure(subspace.ortho_basis())?;
        if residual > tol.lie_closure {
            return Err(Error::NotLieClosed { residual });
        }
        Ok(LieBasis {
            subspace,
            structure_residual: residual,
        })
    }

    pub fn subspace(&self) -> &ObservableSubspace {
        &self.subspace
    }

    pub fn structure_residual(&self) -> f64 {
        self.structure_residual
    }
}

/// Maximum, over pairs, of the residual of i[X_α, X_β] against the span of
/// the input operators (norm from the trace inner product). Zero (within
/// tolerance) iff the span is closed under the bracket.
pub fn check_lie_closure(ops: &[HermitianOp]) -> Result<f64> {
    if ops.is_empty() {
        return Err(Error::EmptyInput("check_lie_closure"));
    }
    let basis = crate::operator::orthonormalize(ops)?;
    let mut worst = 0.0_f64;
    for (a, x) in ops.iter().enumerate() {
        for y in ops.iter().skip(a + 1) {
            let mut c = x.commutator_i(y);
            for q in &basis {
                let coeff = trace_inner(q, &c)?;
                c = c.sub(&q.scale(coeff));
            }
            worst = worst.max(c.norm());
        }
    }
    Ok(worst)
}

/// True iff the commutant {M : [M, X_α] = 0 ∀α} consists of scalars only.
///
/// The commutant is computed as the null space of the stacked linear system
/// (I ⊗ X_α − X_αᵀ ⊗ I) vec(M) = 0.
pub fn is_irreducible(s: &ObservableSubspace) -> bool {
    let d = s.ambient_dim();
    let k = s.len();
    let id = CMatrix::identity(d, d);
    let mut stacked = CMatrix::zeros(k * d * d, d * d);
    for (a, x) in s.ortho_basis().iter().enumerate() {
        let block = id.kronecker(x.matrix()) - x.matrix().transpose().kronecker(&id);
        stacked.view_mut((a * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    let svd = stacked.svd(false, false);
    let smax = svd.singular_values.max().max(1.0);
    let nullity = svd
        .singular_values
        .iter()
        .filter(|&&sv| sv <= 1e-8 * smax)
        .count()
        + (d * d - svd.singular_values.len());
    nullity == 1
}

/// Lowest eigenvector of a Hamiltonian, its spectral gap, and whether the
/// ground level is nondegenerate at the given gap tolerance.
pub fn ground_state(h: &HermitianOp, gap_tol: f64) -> (PureState, f64, bool) {
    let (vals, vecs) = eig_herm(h);
    let d = h.dim();
    let psi = PureState::normalized(CVector::from_fn(d, |i, _| vecs[(i, 0)]))
        .expect("eigenvector has unit norm");
    let gap = if d > 1 { vals[1] - vals[0] } else { f64::INFINITY };
    (psi, gap, gap > gap_tol)
}

/// Sample a generalized coherent state: the unique ground state of a random
/// Hamiltonian Σ_α r_α X_α with standard-normal coefficients.
///
/// Resamples on ground-level degeneracy, up to 20 times.
pub fn sample_coherent_state(lie: &LieBasis, seed: u64) -> Result<PureState> {
    let tols = Tolerances::default();
    let s = lie.subspace();
    let attempts = 20;
    for attempt in 0..attempts {
        let mut r = random::rng_stream(seed, attempt as u64);
        let mut h = HermitianOp::zeros(s.ambient_dim());
        for x in s.ortho_basis() {
            let w: f64 = r.sample(rand_distr::StandardNormal);
            h = h.add(&x.scale(w));
        }
        let (psi, _gap, unique) = ground_state(&h, tols.degeneracy_gap);
        if unique {
            return Ok(psi);
        }
    }
    Err(Error::PersistentDegeneracy { attempts })
}

/// Outcome of purity maximization over the unit sphere.
#[derive(Debug, Clone)]
pub struct PurityLandscape {
    pub max_value: f64,
    pub argmax: PureState,
    pub restart_values: Vec<f64>,
}

/// Maximize P_S(|ψ⟩⟨ψ|) = Σ_α ⟨ψ|X_α|ψ⟩² over the unit sphere by projected
/// gradient ascent with Armijo backtracking, best over `restarts` random
/// starts. Deterministic for a fixed seed.
pub fn max_purity(s: &ObservableSubspace, restarts: usize, seed: u64) -> Result<PurityLandscape> {
    extremal_purity(s, restarts, seed, 1.0)
}

/// Minimize P_S over the unit sphere: the mirrored problem, run by descending
/// the same objective. The returned landscape's `max_value` field carries the
/// minimal purity found and `argmax` its minimizer.
pub fn min_purity(s: &ObservableSubspace, restarts: usize, seed: u64) -> Result<PurityLandscape> {
    extremal_purity(s, restarts, seed, -1.0)
}

fn extremal_purity(
    s: &ObservableSubspace,
    restarts: usize,
    seed: u64,
    sign: f64,
) -> Result<PurityLandscape> {
    if restarts == 0 {
        return Err(Error::EmptyInput("restarts"));
    }
    let d = s.ambient_dim();
    let mut best: Option<(f64, PureState)> = None;
    let mut restart_values = Vec::with_capacity(restarts);
    for k in 0..restarts {
        let mut r = random::rng_stream(seed, k as u64);
        let psi0 = random::random_pure(d, &mut r);
        let (value, psi) = ascend_purity(s, psi0, sign);
        restart_values.push(value);
        if best.as_ref().is_none_or(|(bv, _)| sign * value > sign * *bv) {
            best = Some((value, psi));
        }
    }
    let (max_value, argmax) = best.expect("restarts >= 1");
    Ok(PurityLandscape {
        max_value,
        argmax,
        restart_values,
    })
}

fn purity_and_grad(s: &ObservableSubspace, psi: &CVector) -> (f64, CVector) {
    let d = psi.len();
    let mut value = 0.0;
    let mut grad = CVector::zeros(d);
    for x in s.ortho_basis() {
        let xpsi = x.matrix() * psi;
        let e = psi.dotc(&xpsi).re;
        value += e * e;
        grad += xpsi.map(|z| z * (2.0 * e));
    }
    (value, grad)
}

fn ascend_purity(s: &ObservableSubspace, start: PureState, sign: f64) -> (f64, PureState) {
    let mut psi = start.amplitudes().clone();
    let (mut value, mut grad) = purity_and_grad(s, &psi);
    let max_iters = 5000;
    for _ in 0..max_iters {
        // Tangent component of the (signed) gradient on the sphere.
        let along = psi.dotc(&grad);
        let tangent = (&grad - psi.map(|z| z * along)).map(|z| z * sign);
        let tnorm = tangent.norm();
        if tnorm < 1e-14 {
            break;
        }
        let mut eta = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let cand = &psi + tangent.map(|z| z * eta);
            let cand = cand.map(|z| z / cand.norm());
            let (cv, cg) = purity_and_grad(s, &cand);
            if sign * cv >= sign * value + 1e-4 * eta * tnorm * tnorm {
                let gain = sign * (cv - value);
                psi = cand;
                value = cv;
                grad = cg;
                improved = gain >= 1e-12;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
    }
    let psi = PureState::normalized(psi).expect("iterate stays normalized");
    (value, psi)
}

/// Verdict of the generalized-unentanglement certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GueVerdict {
    Gue,
    Entangled,
    Unknown,
}

impl GueVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            GueVerdict::Gue => "GUE",
            GueVerdict::Entangled => "entangled",
            GueVerdict::Unknown => "unknown",
        }
    }
}

/// Certify a pure state against the maximal relative purity of an irreducible
/// Lie setting: GUE iff P_S(ψ) ≥ P* − tol, entangled iff P_S(ψ) < P* − 10·tol,
/// unknown in the margin band.
///
/// Refuses to certify reducible settings, where maximal purity and
/// unentanglement are not equivalent.
pub fn gue_certify(
    lie: &LieBasis,
    psi: &PureState,
    landscape: &PurityLandscape,
    tol: f64,
) -> Result<GueVerdict> {
    if !is_irreducible(lie.subspace()) {
        return Err(Error::NotIrreducible { commutant_dim: 0 });
    }
    let p = purity_pure(lie.subspace(), psi)?;
    let p_star = landscape.max_value;
    if p >= p_star - tol {
        Ok(GueVerdict::Gue)
    } else if p < p_star - 10.0 * tol {
        Ok(GueVerdict::Entangled)
    } else {
        Ok(GueVerdict::Unknown)
    }
}

/// Sufficient unentanglement certificate via the mean-field Hamiltonian
/// H_ψ = −Σ_α ⟨ψ|X_α|ψ⟩ X_α (identity component dropped): true iff ψ is its
/// unique ground state.
pub fn mean_field_test(s: &ObservableSubspace, psi: &PureState) -> Result<bool> {
    if psi.dim() != s.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim(),
            got: psi.dim(),
        });
    }
    let tols = Tolerances::default();
    let d = s.ambient_dim();
    let mut h = HermitianOp::zeros(d);
    for x in s.ortho_basis() {
        let e = x.expectation(psi.amplitudes());
        h = h.add(&x.scale(-e));
    }
    // Dropping the identity component only shifts the spectrum.
    let shift = h.trace() / d as f64;
    h = h.sub(&HermitianOp::identity(d).scale(shift));
    if h.norm() < 1e-12 {
        return Ok(false);
    }
    let (gs, _gap, unique) = ground_state(&h, tols.degeneracy_gap);
    Ok(unique && gs.overlap(psi) >= 1.0 - 1e-8)
}

/// Conjugate a pure state by exp(iθH).
pub fn transport(psi: &PureState, h: &HermitianOp, theta: f64) -> Result<PureState> {
    let u = crate::operator::exp_i_herm(h, theta);
    PureState::normalized(&u * psi.amplitudes())
}

/// Random Hamiltonian in the span of the subspace.
pub fn random_span_hamiltonian(s: &ObservableSubspace, r: &mut impl Rng) -> HermitianOp {
    let mut h = HermitianOp::zeros(s.ambient_dim());
    for x in s.ortho_basis() {
        let w: f64 = r.sample(rand_distr::StandardNormal);
        h = h.add(&x.scale(w));
    }
    h
}

/// Closed-form maximal purity of the identity-free spin-J su(2) setting:
/// 3J/((J+1)(2J+1)), attained by spin-coherent states.
pub fn su2_max_purity_no_identity(two_j: u32) -> f64 {
    let j = two_j as f64 / 2.0;
    3.0 * j / ((j + 1.0) * (2.0 * j + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::ObservableSubspace;
    use crate::systems::{
        bell_state, full_algebra_ops, pauli_basis_with_identity, pauli_x, pauli_y, pauli_z,
        su2_spin_ops, two_qubit_local_ops,
    };

    fn local_lie() -> LieBasis {
        LieBasis::new(ObservableSubspace::new(two_qubit_local_ops()).unwrap()).unwrap()
    }

    #[test]
    fn closure_su2() {
        let res = check_lie_closure(&[pauli_x(), pauli_y(), pauli_z()]).unwrap();
        assert!(res <= 1e-12, "residual {res}");
    }

    #[test]
    fn closure_single_operator() {
        let res = check_lie_closure(&[pauli_x()]).unwrap();
        assert!(res == 0.0);
    }

    #[test]
    fn closure_fails_for_x_z() {
        // i[σx, σz] = 2σy leaves span{σx, σz}; HS norm of 2σy is 2√2.
        let res = check_lie_closure(&[pauli_x(), pauli_z()]).unwrap();
        assert!(res > 1.0, "residual {res}");
        assert!((res - 2.0 * 2.0_f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn irreducibility_examples() {
        let su2 = ObservableSubspace::new(pauli_basis_with_identity()).unwrap();
        assert!(is_irreducible(&su2));
        let scalars = ObservableSubspace::new(vec![HermitianOp::identity(2)]).unwrap();
        assert!(!is_irreducible(&scalars));
        let local = ObservableSubspace::new(two_qubit_local_ops()).unwrap();
        assert!(is_irreducible(&local));
        // Reducible: diagonal algebra on one qubit.
        let diag = ObservableSubspace::new(crate::systems::span_i_z_ops()).unwrap();
        assert!(!is_irreducible(&diag));
    }

    #[test]
    fn ground_state_examples() {
        let (psi, gap, unique) = ground_state(&pauli_z(), 1e-8);
        assert!(psi.overlap(&PureState::basis_state(2, 1)) > 1.0 - 1e-12);
        assert!((gap - 2.0).abs() < 1e-12);
        assert!(unique);

        let (psi, gap, unique) = ground_state(&pauli_z().scale(-1.0), 1e-8);
        assert!(psi.overlap(&PureState::basis_state(2, 0)) > 1.0 - 1e-12);
        assert!((gap - 2.0).abs() < 1e-12);
        assert!(unique);

        let (_psi, _gap, unique) = ground_state(&HermitianOp::identity(2), 1e-8);
        assert!(!unique);
    }

    #[test]
    fn lie_basis_requires_closure_and_identity() {
        let not_closed = ObservableSubspace::new(vec![
            HermitianOp::identity(2),
            pauli_x(),
            pauli_z(),
        ])
        .unwrap();
        assert!(matches!(
            LieBasis::new(not_closed),
            Err(Error::NotLieClosed { .. })
        ));
        let no_id = ObservableSubspace::new(vec![pauli_x(), pauli_y(), pauli_z()]).unwrap();
        assert!(matches!(
            LieBasis::new(no_id),
            Err(Error::IdentityNotInSpan { .. })
        ));
    }

    #[test]
    fn coherent_sample_is_deterministic() {
        let lie = LieBasis::new(ObservableSubspace::new(su2_spin_ops(1)).unwrap()).unwrap();
        let a = sample_coherent_state(&lie, 5).unwrap();
        let b = sample_coherent_state(&lie, 5).unwrap();
        assert!(a.overlap(&b) > 1.0 - 1e-14);
        assert!((a.amplitudes() - b.amplitudes()).norm() == 0.0);
    }

    #[test]
    fn coherent_sample_of_local_algebra_is_product() {
        let lie = local_lie();
        for seed in 0..10 {
            let psi = sample_coherent_state(&lie, seed).unwrap();
            let coeffs = crate::operator::schmidt_coefficients(&psi, (2, 2)).unwrap();
            assert!(coeffs[1] <= 1e-8, "second Schmidt coefficient {}", coeffs[1]);
        }
    }

    #[test]
    fn max_purity_su2_qubit_no_identity() {
        let s = ObservableSubspace::new(vec![pauli_x(), pauli_y(), pauli_z()]).unwrap();
        let landscape = max_purity(&s, 8, 3).unwrap();
        assert!((landscape.max_value - 0.5).abs() < 1e-9, "{}", landscape.max_value);
        assert_eq!(landscape.restart_values.len(), 8);
        let best = landscape
            .restart_values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, landscape.max_value);
    }

    #[test]
    fn max_purity_two_qubit_local() {
        let s = ObservableSubspace::new(two_qubit_local_ops()).unwrap();
        let landscape = max_purity(&s, 16, 7).unwrap();
        assert!((landscape.max_value - 0.75).abs() < 1e-6, "{}", landscape.max_value);
        assert!(landscape.max_value <= 1.0 + 1e-9);
    }

    #[test]
    fn min_purity_two_qubit_local() {
        // Bell states are the purity minimizers: only the identity coordinate
        // survives, P = 1/4.
        let s = ObservableSubspace::new(two_qubit_local_ops()).unwrap();
        let landscape = min_purity(&s, 12, 5).unwrap();
        assert!((landscape.max_value - 0.25).abs() < 1e-6, "{}", landscape.max_value);
    }

    #[test]
    fn max_purity_full_space() {
        let s = ObservableSubspace::new(full_algebra_ops(3)).unwrap();
        let landscape = max_purity(&s, 4, 11).unwrap();
        assert!((landscape.max_value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn certify_examples() {
        let lie = local_lie();
        let landscape = max_purity(lie.subspace(), 16, 13).unwrap();
        let bell = bell_state();
        assert_eq!(
            gue_certify(&lie, &bell, &landscape, 1e-6).unwrap(),
            GueVerdict::Entangled
        );
        let zz = PureState::basis_state(4, 0);
        assert_eq!(
            gue_certify(&lie, &zz, &landscape, 1e-6).unwrap(),
            GueVerdict::Gue
        );
        let sample = sample_coherent_state(&lie, 17).unwrap();
        assert_eq!(
            gue_certify(&lie, &sample, &landscape, 1e-6).unwrap(),
            GueVerdict::Gue
        );
    }

    #[test]
    fn certify_refuses_reducible() {
        let s = ObservableSubspace::new(crate::systems::span_i_z_ops()).unwrap();
        let lie = LieBasis::new(s).unwrap();
        let landscape = max_purity(lie.subspace(), 4, 19).unwrap();
        let psi = PureState::basis_state(2, 0);
        assert!(matches!(
            gue_certify(&lie, &psi, &landscape, 1e-6),
            Err(Error::NotIrreducible { .. })
        ));
    }

    #[test]
    fn mean_field_examples() {
        let su2 = ObservableSubspace::new(pauli_basis_with_identity()).unwrap();
        let zero = PureState::basis_state(2, 0);
        assert!(mean_field_test(&su2, &zero).unwrap());

        let local = ObservableSubspace::new(two_qubit_local_ops()).unwrap();
        assert!(!mean_field_test(&local, &bell_state()).unwrap());
        assert!(mean_field_test(&local, &PureState::basis_state(4, 0)).unwrap());
    }

    #[test]
    fn su2_closed_form_matches_coherent_purity() {
        for two_j in [1u32, 2, 3, 4] {
            let (jx, jy, jz) = crate::systems::spin_ops(two_j);
            let s = ObservableSubspace::new(vec![jx, jy, jz]).unwrap();
            // |J, J⟩ is the ground state of −Jz.
            let psi = PureState::basis_state((two_j + 1) as usize, 0);
            let p = purity_pure(&s, &psi).unwrap();
            let closed = su2_max_purity_no_identity(two_j);
            assert!((p - closed).abs() < 1e-12, "two_j={two_j}: {p} vs {closed}");
        }
    }
}
