//! Distinguished observable subspaces: the reduction map π, the projection
//! superoperator Π_S, relative purity, and preimage-uniqueness probes.

use nalgebra::DVector;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::operator::{
    clip_psd, eig_herm, orthonormalize_with_tol, trace_distance, trace_inner, CMatrix,
    DensityMatrix, HermitianOp, PureState,
};
use crate::random;

/// A †-closed operator subspace S with a cached trace-orthonormal basis.
#[derive(Debug, Clone)]
pub struct ObservableSubspace {
    ambient_dim: usize,
    raw_basis: Vec<HermitianOp>,
    ortho_basis: Vec<HermitianOp>,
    includes_identity: bool,
}

impl ObservableSubspace {
    pub fn new(raw_basis: Vec<HermitianOp>) -> Result<Self> {
        Self::with_tol(raw_basis, &Tolerances::default())
    }

    pub fn with_tol(raw_basis: Vec<HermitianOp>, tol: &Tolerances) -> Result<Self> {
        if raw_basis.is_empty() {
            return Err(Error::EmptyInput("observable subspace basis"));
        }
        let d = raw_basis[0].dim();
        for op in &raw_basis {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: op.dim(),
                });
            }
        }
        let ortho_basis = orthonormalize_with_tol(&raw_basis, tol)?;
        let id = HermitianOp::identity(d);
        let mut resid = id.clone();
        for x in &ortho_basis {
            let c = trace_inner(x, &resid)?;
            resid = resid.sub(&x.scale(c));
        }
        let includes_identity = resid.norm() <= tol.span * id.norm();
        Ok(ObservableSubspace {
            ambient_dim: d,
            raw_basis,
            ortho_basis,
            includes_identity,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.ortho_basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ortho_basis.is_empty()
    }

    pub fn raw_basis(&self) -> &[HermitianOp] {
        &self.raw_basis
    }

    /// The cached trace-orthonormal basis {X_α}.
    pub fn ortho_basis(&self) -> &[HermitianOp] {
        &self.ortho_basis
    }

    pub fn includes_identity(&self) -> bool {
        self.includes_identity
    }

    /// Coordinates of I/√d in the orthonormal basis, when the identity lies
    /// in the span.
    pub fn identity_coords(&self) -> Option<DVector<f64>> {
        if !self.includes_identity {
            return None;
        }
        let d = self.ambient_dim as f64;
        let id = HermitianOp::identity(self.ambient_dim).scale(1.0 / d.sqrt());
        let coords = DVector::from_fn(self.len(), |a, _| {
            trace_inner(&self.ortho_basis[a], &id).unwrap()
        });
        Some(coords)
    }
}

/// The expectation vector λ_α = tr(ρ X_α): the restriction of a state to S.
#[derive(Debug, Clone)]
pub struct ReducedState {
    coords: DVector<f64>,
}

impl ReducedState {
    pub fn new(coords: DVector<f64>) -> Self {
        ReducedState { coords }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Restriction of a state to the subspace: coords_α = tr(ρ X_α).
pub fn reduce(s: &ObservableSubspace, rho: &DensityMatrix) -> Result<ReducedState> {
    reduce_op(s, rho.op())
}

/// Same map applied to an arbitrary Hermitian operator.
pub fn reduce_op(s: &ObservableSubspace, x: &HermitianOp) -> Result<ReducedState> {
    if x.dim() != s.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim,
            got: x.dim(),
        });
    }
    let coords = DVector::from_fn(s.len(), |a, _| {
        trace_inner(&s.ortho_basis[a], x).unwrap()
    });
    Ok(ReducedState::new(coords))
}

/// Projection superoperator Π_S(x) = Σ_α ⟨X_α, x⟩ X_α.
///
/// The result need not be a positive operator even for density-matrix input.
pub fn project_superop(s: &ObservableSubspace, x: &HermitianOp) -> Result<HermitianOp> {
    let red = reduce_op(s, x)?;
    let mut out = HermitianOp::zeros(s.ambient_dim);
    for (a, basis_op) in s.ortho_basis.iter().enumerate() {
        out = out.add(&basis_op.scale(red.coords()[a]));
    }
    Ok(out)
}

/// Relative purity P_S(ρ) = Σ_α (tr ρ X_α)², equal to tr[Π_S(ρ)²].
pub fn purity(s: &ObservableSubspace, rho: &DensityMatrix) -> Result<f64> {
    let red = reduce(s, rho)?;
    Ok(red.coords().norm_squared())
}

pub fn purity_pure(s: &ObservableSubspace, psi: &PureState) -> Result<f64> {
    if psi.dim() != s.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: s.ambient_dim,
            got: psi.dim(),
        });
    }
    let mut acc = 0.0;
    for x in &s.ortho_basis {
        let e = x.expectation(psi.amplitudes());
        acc += e * e;
    }
    Ok(acc)
}

/// True iff the pure state has unit relative purity (within tolerance), in
/// which case Π_S fixes its density matrix and the reduced state has a unique
/// preimage.
pub fn unit_purity_check(s: &ObservableSubspace, psi: &PureState) -> Result<bool> {
    Ok((purity_pure(s, psi)? - 1.0).abs() <= 1e-8)
}

/// Outcome of a preimage-uniqueness probe.
///
/// `Nonunique` is sound (both witnesses are checked feasible); `Unique` is a
/// randomized certificate only; `Infeasible` flags targets with no density
/// matrix preimage found.
#[derive(Debug, Clone)]
pub enum PreimageOutcome {
    Unique,
    Nonunique {
        witness_a: DensityMatrix,
        witness_b: DensityMatrix,
        spread: f64,
    },
    Infeasible,
}

/// Probe whether the preimage π⁻¹(target) within the density matrices is a
/// single point.
///
/// For `trials` random Hermitian directions G the probe maximizes and
/// minimizes tr(ρ G) over the feasible spectrahedron {ρ ⪰ 0, tr ρ = 1,
/// tr(ρ X_α) = target_α} and compares the optimizers in trace distance.
pub fn preimage_probe(
    s: &ObservableSubspace,
    target: &ReducedState,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<PreimageOutcome> {
    if target.len() != s.len() {
        return Err(Error::DimensionMismatch {
            expected: s.len(),
            got: target.len(),
        });
    }
    let tols = Tolerances::default();
    let d = s.ambient_dim;
    let cons = Constraints::for_target(s, target)?;

    let Some(base) = cons.feasible_point(d, &tols) else {
        return Ok(PreimageOutcome::Infeasible);
    };

    for trial in 0..trials.max(1) {
        let mut r = random::rng_stream(seed, trial as u64);
        let g = random::random_direction(d, &mut r);
        // Movement is only possible along the tangent component of G.
        let tangent = cons.tangent_component(&g)?;
        if tangent.norm() < 1e-12 {
            continue;
        }
        let hi = cons.optimize(&base, &tangent, 1.0, &tols);
        let lo = cons.optimize(&base, &tangent, -1.0, &tols);
        if let (Some(a), Some(b)) = (hi, lo) {
            let spread = trace_distance(a.op(), b.op())?;
            if spread > tol {
                return Ok(PreimageOutcome::Nonunique {
                    witness_a: a,
                    witness_b: b,
                    spread,
                });
            }
        }
    }
    Ok(PreimageOutcome::Unique)
}

/// Affine constraints tr(ρ Y_j) = c_j plus unit trace, with an orthonormalized
/// copy for projections.
pub(crate) struct Constraints {
    dim: usize,
    /// Raw rows (for residuals and Gauss-Newton refinement).
    rows: Vec<(HermitianOp, f64)>,
    /// Orthonormal rows spanning the same constraint space, with matching
    /// right-hand sides, used for orthogonal projection onto the affine set.
    ortho_rows: Vec<(HermitianOp, f64)>,
}

impl Constraints {
    pub(crate) fn for_target(s: &ObservableSubspace, target: &ReducedState) -> Result<Self> {
        let d = s.ambient_dim;
        let mut rows: Vec<(HermitianOp, f64)> = s
            .ortho_basis
            .iter()
            .cloned()
            .zip(target.coords().iter().cloned())
            .collect();
        rows.push((HermitianOp::identity(d), 1.0));
        Self::new(d, rows)
    }

    pub(crate) fn new(dim: usize, rows: Vec<(HermitianOp, f64)>) -> Result<Self> {
        // Orthonormalize the rows; track right-hand sides through the same
        // linear combinations by Gram-Schmidt bookkeeping.
        let mut ortho_rows: Vec<(HermitianOp, f64)> = Vec::new();
        for (op, c) in &rows {
            let mut v = op.clone();
            let mut cv = *c;
            for _ in 0..2 {
                for (q, qc) in &ortho_rows {
                    let coeff = trace_inner(q, &v)?;
                    v = v.sub(&q.scale(coeff));
                    cv -= coeff * qc;
                }
            }
            let n = v.norm();
            if n > 1e-10 * op.norm().max(1.0) {
                ortho_rows.push((v.scale(1.0 / n), cv / n));
            }
            // A dependent row with inconsistent rhs will surface as a
            // persistent residual in feasibility; nothing to do here.
        }
        Ok(Constraints {
            dim,
            rows,
            ortho_rows,
        })
    }

    pub(crate) fn residual(&self, x: &HermitianOp) -> f64 {
        self.rows
            .iter()
            .map(|(y, c)| {
                let v = trace_inner(y, x).unwrap() - c;
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Orthogonal projection onto the affine set.
    fn project_affine(&self, x: &HermitianOp) -> HermitianOp {
        let mut out = x.clone();
        for (q, c) in &self.ortho_rows {
            let delta = c - trace_inner(q, &out).unwrap();
            out = out.add(&q.scale(delta));
        }
        out
    }

    /// Component of a direction orthogonal to every constraint row.
    pub(crate) fn tangent_component(&self, g: &HermitianOp) -> Result<HermitianOp> {
        let mut out = g.clone();
        for _ in 0..2 {
            for (q, _) in &self.ortho_rows {
                let c = trace_inner(q, &out)?;
                out = out.sub(&q.scale(c));
            }
        }
        Ok(out)
    }

    /// Find a feasible density matrix by alternating projections followed by
    /// a Gauss-Newton polish on a low-rank factorization.
    pub(crate) fn feasible_point(&self, d: usize, tols: &Tolerances) -> Option<DensityMatrix> {
        let mut m = self.project_affine(&HermitianOp::identity(d).scale(1.0 / d as f64));
        let mut best: Option<(f64, HermitianOp)> = None;
        for _ in 0..400 {
            let clipped = clip_psd(&m);
            let res = self.residual(&clipped);
            if best.as_ref().is_none_or(|(b, _)| res < *b) {
                best = Some((res, clipped.clone()));
            }
            if res <= 1e-12 {
                break;
            }
            m = self.project_affine(&clipped);
        }
        let (_, coarse) = best?;
        let polished = self.polish(&coarse, tols)?;
        (self.residual(polished.op()) <= tols.feasibility).then_some(polished)
    }

    /// Maximize sign·tr(ρ G) over the feasible set by projected ascent with
    /// PSD clipping, then polish the optimizer back onto the constraints.
    pub(crate) fn optimize(
        &self,
        start: &DensityMatrix,
        tangent: &HermitianOp,
        sign: f64,
        tols: &Tolerances,
    ) -> Option<DensityMatrix> {
        let dir = tangent.scale(sign / tangent.norm());
        let objective = |x: &HermitianOp| trace_inner(x, &dir).unwrap();
        let mut current = start.op().clone();
        let mut value = objective(&current);
        let mut step = 0.25;
        for _ in 0..160 {
            let mut cand = current.add(&dir.scale(step));
            for _ in 0..8 {
                cand = self.project_affine(&clip_psd(&cand));
            }
            let cand = clip_psd(&cand);
            let v = objective(&cand);
            if v > value + 1e-14 && self.residual(&cand) < 1e-3 {
                current = cand;
                value = v;
            } else {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
        }
        self.polish(&current, tols)
            .filter(|rho| self.residual(rho.op()) <= tols.feasibility)
    }

    /// Gauss-Newton refinement of ρ = LL† toward exact constraint
    /// satisfaction, trying increasing factor ranks if needed.
    pub(crate) fn polish(&self, x: &HermitianOp, _tols: &Tolerances) -> Option<DensityMatrix> {
        let d = self.dim;
        let (vals, vecs) = eig_herm(x);
        let vmax = vals.max().max(1e-12);
        let mut rank = (0..d).filter(|&k| vals[k] > 1e-7 * vmax).count().max(1);
        let mut best: Option<(f64, HermitianOp)> = None;
        loop {
            let l0 = factor_start(&vals, &vecs, rank);
            let (res, refined) = self.gauss_newton(l0);
            if best.as_ref().is_none_or(|(b, _)| res < *b) {
                best = Some((res, refined));
            }
            if best.as_ref().is_some_and(|(b, _)| *b <= 1e-10) || rank == d {
                break;
            }
            rank = (rank + 1).max(rank * 2).min(d);
        }
        let (_, op) = best?;
        // LL† is PSD by construction; admit the trace residue the polish
        // leaves behind.
        let t = Tolerances {
            trace: 1e-7,
            ..Tolerances::default()
        };
        DensityMatrix::with_tol(op, &t).ok()
    }

    fn gauss_newton(&self, mut l: CMatrix) -> (f64, HermitianOp) {
        let d = self.dim;
        let r = l.ncols();
        let m = self.rows.len();
        let nvar = 2 * d * r;
        let mut lambda_lm = 1e-9;
        let herm_of = |l: &CMatrix| HermitianOp::new(l * l.adjoint()).unwrap();
        let mut current = herm_of(&l);
        let mut res = self.residual(&current);
        for _ in 0..60 {
            if res <= 1e-12 {
                break;
            }
            // Residuals and Jacobian: F_j = ⟨Y_j, LL†⟩ − c_j,
            // ∂F_j/∂Re L_{ab} = 2 Re (Y_j L)_{ab}, ∂F_j/∂Im L_{ab} = −2 Im (Y_j L)_{ab}.
            let mut jac = nalgebra::DMatrix::<f64>::zeros(m, nvar);
            let mut f = DVector::<f64>::zeros(m);
            for (j, (y, c)) in self.rows.iter().enumerate() {
                f[j] = trace_inner(y, &current).unwrap() - c;
                let yl = y.matrix() * &l;
                for a in 0..d {
                    for b in 0..r {
                        jac[(j, a * r + b)] = 2.0 * yl[(a, b)].re;
                        jac[(j, d * r + a * r + b)] = -2.0 * yl[(a, b)].im;
                    }
                }
            }
            // Levenberg-Marquardt step on the normal equations.
            let jt = jac.transpose();
            let mut h = &jt * &jac;
            for k in 0..nvar {
                h[(k, k)] += lambda_lm;
            }
            let gvec = &jt * &f;
            let Some(step) = h.lu().solve(&gvec) else { break };
            let mut l_new = l.clone();
            for a in 0..d {
                for b in 0..r {
                    let dre = step[a * r + b];
                    let dim_ = step[d * r + a * r + b];
                    l_new[(a, b)] -= num_complex::Complex64::new(dre, dim_);
                }
            }
            let cand = herm_of(&l_new);
            let cand_res = self.residual(&cand);
            if cand_res < res {
                l = l_new;
                current = cand;
                res = cand_res;
                lambda_lm = (lambda_lm * 0.3).max(1e-12);
            } else {
                lambda_lm *= 10.0;
                if lambda_lm > 1e6 {
                    break;
                }
            }
        }
        (res, current)
    }
}

fn factor_start(vals: &DVector<f64>, vecs: &CMatrix, rank: usize) -> CMatrix {
    let d = vals.len();
    // Use the top-`rank` eigenpairs, flooring tiny eigenvalues so the factor
    // has full column rank for the first Gauss-Newton Jacobian.
    let vmax = vals.max().max(1e-12);
    CMatrix::from_fn(d, rank, |i, k| {
        let idx = d - 1 - k;
        let w = vals[idx].max(1e-8 * vmax).sqrt();
        vecs[(i, idx)] * w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::kron;
    use crate::systems::{
        bell_state, full_algebra_ops, pauli_z, span_i_z_ops, two_qubit_local_ops,
    };

    fn local_subspace() -> ObservableSubspace {
        ObservableSubspace::new(two_qubit_local_ops()).unwrap()
    }

    #[test]
    fn subspace_detects_identity() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        assert!(s.includes_identity());
        let s2 = ObservableSubspace::new(vec![pauli_z()]).unwrap();
        assert!(!s2.includes_identity());
    }

    #[test]
    fn reduce_i_over_2_in_iz() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let red = reduce(&s, &rho).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((red.coords()[0] - inv_sqrt2).abs() < 1e-12);
        assert!(red.coords()[1].abs() < 1e-12);
    }

    #[test]
    fn reduce_bell_locally() {
        let s = local_subspace();
        let rho = DensityMatrix::from_pure(&bell_state());
        let red = reduce(&s, &rho).unwrap();
        assert!((red.coords()[0] - 0.5).abs() < 1e-12);
        for a in 1..7 {
            assert!(red.coords()[a].abs() < 1e-12, "coord {a}");
        }
    }

    #[test]
    fn identity_coordinate_is_inv_sqrt_d() {
        let s = local_subspace();
        let mut rng = crate::random::rng(41);
        for _ in 0..10 {
            let rho = crate::random::random_density(4, &mut rng);
            let red = reduce(&s, &rho).unwrap();
            assert!((red.coords()[0] - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let s = local_subspace();
        let mut rng = crate::random::rng(43);
        for _ in 0..10 {
            let x = crate::random::random_hermitian(4, &mut rng);
            let p = project_superop(&s, &x).unwrap();
            let pp = project_superop(&s, &p).unwrap();
            assert!(p.sub(&pp).norm() < 1e-9);
            let resid = x.sub(&p);
            for basis_op in s.ortho_basis() {
                assert!(trace_inner(basis_op, &resid).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn projection_examples() {
        // Full space: projection is the identity map.
        let full = ObservableSubspace::new(full_algebra_ops(2)).unwrap();
        let mut rng = crate::random::rng(47);
        let x = crate::random::random_hermitian(2, &mut rng);
        assert!(project_superop(&full, &x).unwrap().sub(&x).norm() < 1e-10);

        // I/d is fixed whenever I ∈ S.
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let rho = HermitianOp::identity(2).scale(0.5);
        assert!(project_superop(&s, &rho).unwrap().sub(&rho).norm() < 1e-12);

        // |+⟩⟨+| projects to I/2 in span{I, σz}.
        let plus = PureState::normalized(crate::operator::CVector::from_fn(2, |_, _| {
            num_complex::Complex64::new(1.0, 0.0)
        }))
        .unwrap();
        let rho_plus = DensityMatrix::from_pure(&plus);
        let p = project_superop(&s, rho_plus.op()).unwrap();
        assert!(p.sub(&HermitianOp::identity(2).scale(0.5)).norm() < 1e-12);
    }

    #[test]
    fn purity_frozen_values() {
        let s = local_subspace();
        // coords of |00⟩ on (I⊗I, σz⊗I, I⊗σz)/2 are (1/2, 1/2, 1/2): P = 3/4.
        let zz = DensityMatrix::from_pure(&PureState::basis_state(4, 0));
        assert!((purity(&s, &zz).unwrap() - 0.75).abs() < 1e-12);
        let bell = DensityMatrix::from_pure(&bell_state());
        assert!((purity(&s, &bell).unwrap() - 0.25).abs() < 1e-12);
        let full = ObservableSubspace::new(full_algebra_ops(4)).unwrap();
        let mut rng = crate::random::rng(53);
        let psi = crate::random::random_pure(4, &mut rng);
        assert!((purity_pure(&full, &psi).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn purity_two_routes_agree() {
        let s = local_subspace();
        let mut rng = crate::random::rng(59);
        for _ in 0..20 {
            let rho = crate::random::random_density(4, &mut rng);
            let via_coords = purity(&s, &rho).unwrap();
            let p = project_superop(&s, rho.op()).unwrap();
            let via_proj = trace_inner(&p, &p).unwrap();
            assert!((via_coords - via_proj).abs() < 1e-9);
        }
    }

    #[test]
    fn unit_purity_examples() {
        let full = ObservableSubspace::new(full_algebra_ops(3)).unwrap();
        let mut rng = crate::random::rng(61);
        let psi = crate::random::random_pure(3, &mut rng);
        assert!(unit_purity_check(&full, &psi).unwrap());

        let s = local_subspace();
        let zz = PureState::basis_state(4, 0);
        assert!(!unit_purity_check(&s, &zz).unwrap());

        let iz = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let zero = PureState::basis_state(2, 0);
        assert!(unit_purity_check(&iz, &zero).unwrap());
        // Projection fixity when the check passes.
        let rho = DensityMatrix::from_pure(&zero);
        let p = project_superop(&iz, rho.op()).unwrap();
        assert!(p.sub(rho.op()).norm() < 1e-8);
    }

    #[test]
    fn preimage_full_space_unique() {
        let full = ObservableSubspace::new(full_algebra_ops(2)).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::basis_state(2, 0));
        let target = reduce(&full, &rho).unwrap();
        let out = preimage_probe(&full, &target, 4, 1e-6, 7).unwrap();
        assert!(matches!(out, PreimageOutcome::Unique));
    }

    #[test]
    fn preimage_identity_span_nonunique() {
        let s = ObservableSubspace::new(vec![HermitianOp::identity(2)]).unwrap();
        let target = ReducedState::new(DVector::from_vec(vec![1.0 / 2.0_f64.sqrt()]));
        let out = preimage_probe(&s, &target, 6, 1e-6, 11).unwrap();
        match out {
            PreimageOutcome::Nonunique {
                witness_a,
                witness_b,
                spread,
            } => {
                assert!(spread > 1e-3);
                // Both witnesses reduce to the same target.
                let ra = reduce(&s, &witness_a).unwrap();
                let rb = reduce(&s, &witness_b).unwrap();
                assert!((ra.coords()[0] - target.coords()[0]).abs() < 1e-6);
                assert!((rb.coords()[0] - target.coords()[0]).abs() < 1e-6);
            }
            other => panic!("expected nonunique, got {other:?}"),
        }
    }

    #[test]
    fn preimage_unit_purity_unique() {
        // S = span{I, σz⊗I, ρ_ψ} style: any state in the span has a unique
        // preimage; use span{I,σz} with |0⟩.
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let rho = DensityMatrix::from_pure(&PureState::basis_state(2, 0));
        let target = reduce(&s, &rho).unwrap();
        let out = preimage_probe(&s, &target, 6, 1e-6, 13).unwrap();
        assert!(matches!(out, PreimageOutcome::Unique), "{out:?}");
    }

    #[test]
    fn preimage_infeasible_target() {
        // σz expectation of 3 is outside D̂.
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let target = ReducedState::new(DVector::from_vec(vec![1.0 / 2.0_f64.sqrt(), 3.0]));
        let out = preimage_probe(&s, &target, 3, 1e-6, 17).unwrap();
        assert!(matches!(out, PreimageOutcome::Infeasible));
    }

    #[test]
    fn reduce_is_linear() {
        let s = local_subspace();
        let mut rng = crate::random::rng(67);
        for _ in 0..10 {
            let r1 = crate::random::random_density(4, &mut rng);
            let r2 = crate::random::random_density(4, &mut rng);
            let lam = 0.3;
            let mix = DensityMatrix::mixture(&[(lam, r1.clone()), (1.0 - lam, r2.clone())]).unwrap();
            let lhs = reduce(&s, &mix).unwrap();
            let rhs = reduce(&s, &r1).unwrap().coords() * lam
                + reduce(&s, &r2).unwrap().coords() * (1.0 - lam);
            assert!((lhs.coords() - rhs).norm() < 1e-9);
        }
    }

    #[test]
    fn purity_monotone_in_subspace() {
        let mut rng = crate::random::rng(71);
        let small = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let big = ObservableSubspace::new(vec![
            HermitianOp::identity(2),
            pauli_z(),
            crate::systems::pauli_x(),
        ])
        .unwrap();
        for _ in 0..20 {
            let rho = crate::random::random_density(2, &mut rng);
            let p_small = purity(&small, &rho).unwrap();
            let p_big = purity(&big, &rho).unwrap();
            assert!(p_small <= p_big + 1e-9);
        }
    }

    #[test]
    fn segment_range_of_iz_reductions() {
        // D̂ for span{I,σz}: σz/√2 coordinate ranges over [−1/√2, 1/√2].
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let lo = reduce(&s, &DensityMatrix::from_pure(&PureState::basis_state(2, 1))).unwrap();
        let hi = reduce(&s, &DensityMatrix::from_pure(&PureState::basis_state(2, 0))).unwrap();
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((lo.coords()[1] + inv_sqrt2).abs() < 1e-12);
        assert!((hi.coords()[1] - inv_sqrt2).abs() < 1e-12);
    }

    #[test]
    fn local_reduction_matches_partial_trace() {
        // Reduced coordinates of σᵢ⊗I are Bloch components of the partial trace.
        let s = local_subspace();
        let mut rng = crate::random::rng(73);
        let rho = crate::random::random_density(4, &mut rng);
        let red = reduce(&s, &rho).unwrap();
        let rho_a = crate::operator::partial_trace(&rho, &[2, 2], &[0]).unwrap();
        let sx = trace_inner(&crate::systems::pauli_x(), rho_a.op()).unwrap();
        // X_1 = σx⊗I / 2, so coord = tr(ρ σx⊗I)/2 = tr(ρ_A σx)/2.
        assert!((red.coords()[1] - sx / 2.0).abs() < 1e-10);
        let _ = kron(&pauli_z(), &HermitianOp::identity(2));
    }
}
