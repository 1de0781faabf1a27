//! Finitely generated cones, dual cones, extreme rays, adjoint maps,
//! effects and resolutions, and the cone-pair obtained by restricting
//! quantum states to a distinguished observable subspace.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::nnls::nnls;
use crate::observables::ObservableSubspace;
use crate::operator::{
    coords_to_herm, eig_herm, herm_to_coords, CMatrix, DensityMatrix, HermitianOp,
};

/// A cone given by finitely many generating rays in ℝⁿ.
#[derive(Debug, Clone)]
pub struct GeneratedCone {
    ambient_dim: usize,
    generators: Vec<DVector<f64>>,
}

impl GeneratedCone {
    pub fn new(ambient_dim: usize, generators: Vec<DVector<f64>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    got: g.len(),
                });
            }
            if g.norm() <= 1e-12 {
                return Err(Error::ZeroGenerator { index: i });
            }
        }
        Ok(GeneratedCone {
            ambient_dim,
            generators,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[DVector<f64>] {
        &self.generators
    }

    fn generator_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.ambient_dim, self.generators.len());
        for (j, g) in self.generators.iter().enumerate() {
            m.set_column(j, g);
        }
        m
    }

    /// Membership by nonnegative least squares: x ∈ cone iff nonnegative
    /// coefficients reproduce x within tol·max(1, ‖x‖).
    pub fn member(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: x.len(),
            });
        }
        let sol = nnls(&self.generator_matrix(), x);
        Ok(sol.residual <= tol * x.norm().max(1.0))
    }

    /// True iff generator `i` is outside the cone of the remaining generators.
    pub fn is_extreme_generator(&self, i: usize) -> Result<bool> {
        if i >= self.generators.len() {
            return Err(Error::BadGeneratorIndex {
                index: i,
                count: self.generators.len(),
            });
        }
        if self.generators.len() == 1 {
            return Ok(true);
        }
        let rest: Vec<DVector<f64>> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let sub = GeneratedCone::new(self.ambient_dim, rest)?;
        Ok(!sub.member(&self.generators[i], Tolerances::default().membership)?)
    }

    /// A strictly separating functional λ with λ·g > 0 for every generator,
    /// when one exists (i.e. when the cone is pointed).
    ///
    /// The certificate is the minimal-norm point of the convex hull of the
    /// normalized generators; for a pointed cone it is nonzero and the
    /// projection inequality makes it strictly positive on every generator.
    pub fn pointedness_certificate(&self) -> Option<DVector<f64>> {
        let n = self.generators.len();
        let d = self.ambient_dim;
        let weight = 1e4;
        let mut a = DMatrix::zeros(d + 1, n);
        for (j, g) in self.generators.iter().enumerate() {
            let gn = g / g.norm();
            for i in 0..d {
                a[(i, j)] = gn[i];
            }
            a[(d, j)] = weight;
        }
        let mut b = DVector::zeros(d + 1);
        b[d] = weight;
        let sol = nnls(&a, &b);
        let z = DVector::from_fn(d, |i, _| {
            self.generators
                .iter()
                .enumerate()
                .map(|(j, g)| sol.x[j] * g[i] / g.norm())
                .sum()
        });
        if z.norm() < 1e-6 {
            return None;
        }
        let ok = self.generators.iter().all(|g| z.dot(g) > 0.0);
        ok.then_some(z)
    }
}

/// Dual of a simplicial cone (linearly independent generators spanning the
/// ambient space): the cone generated by the dual basis.
pub fn dual_cone_simplicial(cone: &GeneratedCone) -> Result<GeneratedCone> {
    let n = cone.ambient_dim();
    if cone.generators().len() != n {
        return Err(Error::NotSimplicial {
            reason: format!(
                "{} generators in ambient dimension {n}",
                cone.generators().len()
            ),
        });
    }
    let g = cone.generator_matrix();
    let svd = g.clone().svd(false, false);
    let smin = svd.singular_values.min();
    let smax = svd.singular_values.max();
    if smin <= 1e-10 * smax.max(1.0) {
        return Err(Error::NotSimplicial {
            reason: "generators are numerically rank deficient".into(),
        });
    }
    let inv = g.try_inverse().ok_or_else(|| Error::NotSimplicial {
        reason: "generator matrix is singular".into(),
    })?;
    // Row i of G⁻¹ pairs to δ_ij with generator j.
    let duals: Vec<DVector<f64>> = (0..n).map(|i| inv.row(i).transpose()).collect();
    GeneratedCone::new(n, duals)
}

/// Adjoint of a linear map in the standard pairing: φ*(α)[x] = α[φ(x)].
pub fn adjoint_map(phi: &DMatrix<f64>) -> DMatrix<f64> {
    phi.transpose()
}

/// Minimal tensor product of two generated cones: all Kronecker products of
/// the generators.
pub fn min_tensor_cone(a: &GeneratedCone, b: &GeneratedCone) -> GeneratedCone {
    let dim = a.ambient_dim() * b.ambient_dim();
    let mut gens = Vec::with_capacity(a.generators().len() * b.generators().len());
    for ga in a.generators() {
        for gb in b.generators() {
            let mut v = DVector::zeros(dim);
            for i in 0..ga.len() {
                for j in 0..gb.len() {
                    v[i * gb.len() + j] = ga[i] * gb[j];
                }
            }
            gens.push(v);
        }
    }
    GeneratedCone::new(dim, gens).expect("products of nonzero generators are nonzero")
}

/// The cone C of a cone-pair: either explicit generators or the PSD cone of
/// d×d Hermitian operators, represented by its eigenvalue oracle.
#[derive(Debug, Clone)]
pub enum ConeSpec {
    Generated(GeneratedCone),
    Psd { dim: usize },
}

/// Quantum realization data of a cone-pair built from an observable subspace.
#[derive(Debug, Clone)]
pub struct QuantumRealization {
    pub dim: usize,
    pub subspace: ObservableSubspace,
}

/// The tuple (V, W, C, D, λ, λ̃, π): an ambient space of unnormalized states,
/// a reduced space, the map between them, and the two trace functionals.
///
/// `D` is not stored explicitly: it is the image π(C), queried by feasibility.
#[derive(Debug, Clone)]
pub struct ConePair {
    pub v_dim: usize,
    pub w_dim: usize,
    pub cone_c: ConeSpec,
    /// π as a w_dim × v_dim real matrix over the coordinates of V.
    pub pi: DMatrix<f64>,
    /// λ ∈ V*, the trace on C.
    pub lambda: DVector<f64>,
    /// λ̃ ∈ W*, recovering λ through π.
    pub lambda_tilde: DVector<f64>,
    pub quantum: Option<QuantumRealization>,
}

impl ConePair {
    pub fn pi_apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.pi * x
    }

    pub fn lambda_value(&self, x: &DVector<f64>) -> f64 {
        self.lambda.dot(x)
    }

    pub fn lambda_tilde_value(&self, y: &DVector<f64>) -> f64 {
        self.lambda_tilde.dot(y)
    }

    /// Membership of a V-coordinate vector in C.
    pub fn member_c(&self, x: &DVector<f64>, tol: f64) -> Result<bool> {
        match &self.cone_c {
            ConeSpec::Generated(c) => c.member(x, tol),
            ConeSpec::Psd { dim } => {
                let op = coords_to_herm(x, *dim)?;
                let (vals, _) = eig_herm(&op);
                Ok(vals.min() >= -tol)
            }
        }
    }

    /// Membership of a W-coordinate vector in the image cone D = π(C),
    /// decided by searching for a preimage: nonnegative least squares over
    /// the pushed-forward generators, or spectrahedron feasibility for the
    /// quantum realization.
    pub fn member_d(&self, y: &DVector<f64>, tol: f64) -> Result<bool> {
        if y.len() != self.w_dim {
            return Err(Error::DimensionMismatch {
                expected: self.w_dim,
                got: y.len(),
            });
        }
        if y.norm() <= tol {
            return Ok(true);
        }
        match &self.cone_c {
            ConeSpec::Generated(c) => {
                let gens: Vec<DVector<f64>> = c
                    .generators()
                    .iter()
                    .map(|g| &self.pi * g)
                    .filter(|v| v.norm() > 1e-12)
                    .collect();
                if gens.is_empty() {
                    return Ok(false);
                }
                GeneratedCone::new(self.w_dim, gens)?.member(y, tol)
            }
            ConeSpec::Psd { dim } => {
                let q = self.quantum.as_ref().ok_or(Error::NotQuantumPair)?;
                // Normalize onto the λ̃ = 1 plane; nonzero D elements have
                // strictly positive trace.
                let scale = self.lambda_tilde_value(y);
                if scale <= 0.0 {
                    return Ok(false);
                }
                let target = crate::observables::ReducedState::new(y / scale);
                let cons =
                    crate::observables::Constraints::for_target(&q.subspace, &target)?;
                Ok(cons.feasible_point(*dim, &Tolerances::default()).is_some())
            }
        }
    }

    /// Max |λ̃(π(x)) − λ(x)| over sampled cone elements.
    pub fn trace_preservation_residual(&self, samples: usize, seed: u64) -> Result<f64> {
        let mut worst = 0.0_f64;
        let mut r = crate::random::rng(seed);
        for _ in 0..samples {
            let x = self.sample_cone_element(&mut r)?;
            let lhs = self.lambda_tilde_value(&self.pi_apply(&x));
            let rhs = self.lambda_value(&x);
            worst = worst.max((lhs - rhs).abs());
        }
        Ok(worst)
    }

    /// λ must be strictly positive on nonzero cone elements.
    pub fn lambda_positivity_ok(&self, samples: usize, seed: u64) -> Result<bool> {
        let mut r = crate::random::rng(seed);
        for _ in 0..samples {
            let x = self.sample_cone_element(&mut r)?;
            if x.norm() > 1e-9 && self.lambda_value(&x) <= 0.0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn sample_cone_element(&self, r: &mut impl rand::Rng) -> Result<DVector<f64>> {
        match &self.cone_c {
            ConeSpec::Generated(c) => {
                let mut x = DVector::zeros(c.ambient_dim());
                for g in c.generators() {
                    let w: f64 = crate::random::random_vector(1, r)[0].abs();
                    x += g * w;
                }
                Ok(x)
            }
            ConeSpec::Psd { dim } => {
                let rho = crate::random::random_density(*dim, r);
                let scale: f64 = crate::random::random_vector(1, r)[0].abs() + 0.1;
                Ok(herm_to_coords(&rho.op().scale(scale)))
            }
        }
    }
}

/// Build the cone-pair of the distinguished-observables setting: V is the
/// space of Hermitian d×d operators, C the PSD cone, W = ℝ^{dim S} in the
/// orthonormal-basis coordinates of S, π the reduction map, λ the trace and
/// λ̃ its expression through the identity coordinates.
///
/// The subspace must contain the identity operator.
pub fn build_cone_pair_from_subspace(s: &ObservableSubspace) -> Result<ConePair> {
    let d = s.ambient_dim();
    let Some(id_coords) = s.identity_coords() else {
        return Err(Error::IdentityNotInSpan { residual: f64::NAN });
    };
    let v_dim = d * d;
    let w_dim = s.len();
    let mut pi = DMatrix::zeros(w_dim, v_dim);
    for (a, x) in s.ortho_basis().iter().enumerate() {
        let row = herm_to_coords(x);
        for j in 0..v_dim {
            pi[(a, j)] = row[j];
        }
    }
    let lambda = herm_to_coords(&HermitianOp::identity(d));
    let lambda_tilde = id_coords * (d as f64).sqrt();
    Ok(ConePair {
        v_dim,
        w_dim,
        cone_c: ConeSpec::Psd { dim: d },
        pi,
        lambda,
        lambda_tilde,
        quantum: Some(QuantumRealization {
            dim: d,
            subspace: s.clone(),
        }),
    })
}

/// An element of the order interval [0, λ] in the dual cone.
#[derive(Debug, Clone)]
pub struct Effect {
    functional: DVector<f64>,
}

impl Effect {
    pub fn new(functional: DVector<f64>) -> Self {
        Effect { functional }
    }

    pub fn from_op(op: &HermitianOp) -> Self {
        Effect {
            functional: herm_to_coords(op),
        }
    }

    pub fn functional(&self) -> &DVector<f64> {
        &self.functional
    }

    /// Expectation ω(x) of the effect in a quantum state.
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        self.functional.dot(&herm_to_coords(rho.op()))
    }

    pub fn to_op(&self, dim: usize) -> Result<HermitianOp> {
        coords_to_herm(&self.functional, dim)
    }
}

/// True iff 0 ⪯ X ⪯ I for the operator behind the dual vector.
pub fn is_effect(x: &DVector<f64>, pair: &ConePair) -> Result<bool> {
    let q = pair.quantum.as_ref().ok_or(Error::NotQuantumPair)?;
    let op = coords_to_herm(x, q.dim)?;
    let (vals, _) = eig_herm(&op);
    let tol = Tolerances::default().psd;
    Ok(vals.min() >= -tol && vals.max() <= 1.0 + tol)
}

/// True iff the effects sum to the order unit λ.
pub fn is_resolution(xs: &[Effect], pair: &ConePair) -> Result<bool> {
    if xs.is_empty() {
        return Ok(false);
    }
    let mut sum = DVector::zeros(pair.v_dim);
    for e in xs {
        if e.functional.len() != pair.v_dim {
            return Err(Error::DimensionMismatch {
                expected: pair.v_dim,
                got: e.functional.len(),
            });
        }
        sum += &e.functional;
    }
    Ok((sum - &pair.lambda).norm() <= 1e-9)
}

/// Spectral realization of an observable: the resolution of λ made of its
/// spectral projectors together with the distinct eigenvalues, so that
/// ω(A) = Σᵢ ω(xᵢ) vᵢ for every state ω.
pub fn realize_observable(a: &HermitianOp) -> Result<(Vec<Effect>, Vec<f64>)> {
    let d = a.dim();
    let (vals, vecs) = eig_herm(a);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let ctol = 1e-8 * scale;
    let mut effects = Vec::new();
    let mut values = Vec::new();
    let mut k = 0;
    while k < d {
        let mut l = k + 1;
        while l < d && vals[l] - vals[l - 1] <= ctol {
            l += 1;
        }
        let mut proj = CMatrix::zeros(d, d);
        for c in k..l {
            let col = vecs.column(c);
            for i in 0..d {
                for j in 0..d {
                    proj[(i, j)] += col[i] * col[j].conj();
                }
            }
        }
        let mean = vals.as_slice()[k..l].iter().sum::<f64>() / (l - k) as f64;
        effects.push(Effect::from_op(&HermitianOp::new(proj)?));
        values.push(mean);
        k = l;
    }
    Ok((effects, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::reduce;
    use crate::operator::{trace_inner, PureState};
    use crate::systems::{pauli_z, span_i_z_ops, two_qubit_local_ops};

    fn vec2(x: f64, y: f64) -> DVector<f64> {
        DVector::from_vec(vec![x, y])
    }

    fn orthant2() -> GeneratedCone {
        GeneratedCone::new(2, vec![vec2(1.0, 0.0), vec2(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn member_orthant() {
        let c = orthant2();
        assert!(c.member(&vec2(2.0, 3.0), 1e-8).unwrap());
        assert!(!c.member(&vec2(-1.0, 0.0), 1e-8).unwrap());
    }

    #[test]
    fn member_skew_cone() {
        let c = GeneratedCone::new(2, vec![vec2(1.0, 0.0), vec2(1.0, 1.0)]).unwrap();
        // (2,1) = 1·(1,0) + 1·(1,1).
        assert!(c.member(&vec2(2.0, 1.0), 1e-8).unwrap());
        assert!(!c.member(&vec2(0.0, 1.0), 1e-8).unwrap());
    }

    #[test]
    fn member_dimension_mismatch() {
        let c = orthant2();
        assert!(c.member(&DVector::from_vec(vec![1.0]), 1e-8).is_err());
    }

    #[test]
    fn extreme_generators() {
        let c = GeneratedCone::new(
            2,
            vec![vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0)],
        )
        .unwrap();
        assert!(c.is_extreme_generator(0).unwrap());
        assert!(c.is_extreme_generator(1).unwrap());
        assert!(!c.is_extreme_generator(2).unwrap());
        assert!(c.is_extreme_generator(5).is_err());
        let ray = GeneratedCone::new(2, vec![vec2(1.0, 2.0)]).unwrap();
        assert!(ray.is_extreme_generator(0).unwrap());
    }

    #[test]
    fn dual_of_orthant_is_orthant() {
        let dual = dual_cone_simplicial(&orthant2()).unwrap();
        assert!(dual.member(&vec2(1.0, 0.0), 1e-9).unwrap());
        assert!(dual.member(&vec2(0.0, 1.0), 1e-9).unwrap());
        for (dg, g) in dual.generators().iter().zip(orthant2().generators()) {
            assert!((dg.dot(g) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dual_of_skew_cone() {
        let c = GeneratedCone::new(2, vec![vec2(1.0, 0.0), vec2(1.0, 1.0)]).unwrap();
        let dual = dual_cone_simplicial(&c).unwrap();
        // Dual generators up to positive scale: (1,−1) and (0,1).
        let d0 = &dual.generators()[0];
        let d1 = &dual.generators()[1];
        assert!((d0 / d0[0].abs() - vec2(1.0, -1.0)).norm() < 1e-9);
        assert!((d1 / d1[1].abs() - vec2(0.0, 1.0)).norm() < 1e-9);
        // δ_ij pairing.
        for (i, dg) in dual.generators().iter().enumerate() {
            for (j, g) in c.generators().iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dg.dot(g) - expect).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dual_rejects_overgenerated() {
        let c = GeneratedCone::new(
            2,
            vec![vec2(1.0, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0)],
        )
        .unwrap();
        assert!(matches!(
            dual_cone_simplicial(&c),
            Err(Error::NotSimplicial { .. })
        ));
    }

    #[test]
    fn adjoint_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(adjoint_map(&id), id);
        let phi = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let adj = adjoint_map(&phi);
        assert_eq!(adj, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]));
        // Pairing identity on random vectors.
        let mut rng = crate::random::rng(83);
        for _ in 0..20 {
            let alpha = crate::random::random_vector(2, &mut rng);
            let x = crate::random::random_vector(2, &mut rng);
            let lhs = (&adj * &alpha).dot(&x);
            let rhs = alpha.dot(&(&phi * &x));
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn min_tensor_orthants() {
        let t = min_tensor_cone(&orthant2(), &orthant2());
        assert_eq!(t.generators().len(), 4);
        assert_eq!(t.ambient_dim(), 4);
        // The products of standard basis vectors are the standard basis of R⁴.
        for k in 0..4 {
            let mut e = DVector::zeros(4);
            e[k] = 1.0;
            assert!(t.member(&e, 1e-9).unwrap());
        }
        let ray = GeneratedCone::new(1, vec![DVector::from_vec(vec![2.0])]).unwrap();
        let rr = min_tensor_cone(&ray, &ray);
        assert_eq!(rr.generators().len(), 1);
    }

    #[test]
    fn pointedness() {
        assert!(orthant2().pointedness_certificate().is_some());
        let line = GeneratedCone::new(2, vec![vec2(1.0, 0.0), vec2(-1.0, 0.0)]).unwrap();
        assert!(line.pointedness_certificate().is_none());
    }

    #[test]
    fn cone_pair_full_subspace_is_bijective() {
        let s = ObservableSubspace::new(crate::systems::full_algebra_ops(2)).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        assert_eq!(pair.v_dim, 4);
        assert_eq!(pair.w_dim, 4);
        let svd = pair.pi.clone().svd(false, false);
        assert!(svd.singular_values.min() > 1e-9);
    }

    #[test]
    fn cone_pair_rejects_missing_identity() {
        let s = ObservableSubspace::new(vec![pauli_z()]).unwrap();
        assert!(build_cone_pair_from_subspace(&s).is_err());
    }

    #[test]
    fn cone_pair_two_qubit_dims() {
        let s = ObservableSubspace::new(two_qubit_local_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        assert_eq!(pair.w_dim, 7);
        assert_eq!(pair.v_dim, 16);
    }

    #[test]
    fn cone_pair_trace_preservation() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        assert!(pair.trace_preservation_residual(100, 5).unwrap() < 1e-9);
        assert!(pair.lambda_positivity_ok(100, 6).unwrap());
        // λ̃(π(ρ)) = 1 on density matrices.
        let mut rng = crate::random::rng(7);
        for _ in 0..20 {
            let rho = crate::random::random_density(2, &mut rng);
            let x = herm_to_coords(rho.op());
            let y = pair.pi_apply(&x);
            assert!((pair.lambda_tilde_value(&y) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn member_d_of_quantum_pair() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        let mut rng = crate::random::rng(29);
        for _ in 0..5 {
            let rho = crate::random::random_density(2, &mut rng);
            let y = pair.pi_apply(&herm_to_coords(rho.op()));
            assert!(pair.member_d(&y, 1e-6).unwrap());
            // Scale invariance of the cone.
            assert!(pair.member_d(&(y * 2.5), 1e-6).unwrap());
        }
        // σz expectation beyond ±1 has no state preimage.
        let outside = DVector::from_vec(vec![1.0 / 2.0_f64.sqrt(), 3.0]);
        assert!(!pair.member_d(&outside, 1e-6).unwrap());
        let negative_trace = DVector::from_vec(vec![-1.0, 0.0]);
        assert!(!pair.member_d(&negative_trace, 1e-6).unwrap());
        assert!(pair.member_d(&DVector::zeros(2), 1e-6).unwrap());
    }

    #[test]
    fn member_d_of_generated_pair() {
        // Project the orthant in R³ onto its first two coordinates.
        let gens = vec![
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0, 0.0]),
            DVector::from_vec(vec![0.0, 0.0, 1.0]),
        ];
        let cone = GeneratedCone::new(3, gens).unwrap();
        let pi = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.5]);
        let pair = ConePair {
            v_dim: 3,
            w_dim: 2,
            cone_c: ConeSpec::Generated(cone),
            pi,
            lambda: DVector::from_vec(vec![1.0, 1.0, 1.0]),
            lambda_tilde: DVector::from_vec(vec![1.0, 1.0]),
            quantum: None,
        };
        assert!(pair.member_d(&vec2(1.0, 2.0), 1e-8).unwrap());
        assert!(!pair.member_d(&vec2(-1.0, 1.0), 1e-8).unwrap());
    }

    #[test]
    fn cone_pair_iz_segment() {
        // D̂ for span{I,σz} is the segment with σz-coordinate in [−1/√2, 1/√2].
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        let top = DensityMatrix::from_pure(&PureState::basis_state(2, 0));
        let bot = DensityMatrix::from_pure(&PureState::basis_state(2, 1));
        let y_top = pair.pi_apply(&herm_to_coords(top.op()));
        let y_bot = pair.pi_apply(&herm_to_coords(bot.op()));
        let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
        assert!((y_top[1] - inv_sqrt2).abs() < 1e-12);
        assert!((y_bot[1] + inv_sqrt2).abs() < 1e-12);
        // Agreement with the reduction map.
        let red = reduce(&s, &top).unwrap();
        assert!((red.coords() - y_top).norm() < 1e-12);
    }

    #[test]
    fn effect_examples() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        let p0 = DensityMatrix::from_pure(&PureState::basis_state(2, 0));
        assert!(is_effect(&herm_to_coords(p0.op()), &pair).unwrap());
        let two_i = HermitianOp::identity(2).scale(2.0);
        assert!(!is_effect(&herm_to_coords(&two_i), &pair).unwrap());
        assert!(!is_effect(&herm_to_coords(&pauli_z()), &pair).unwrap());
    }

    #[test]
    fn resolution_examples() {
        let s = ObservableSubspace::new(span_i_z_ops()).unwrap();
        let pair = build_cone_pair_from_subspace(&s).unwrap();
        let p0 = Effect::from_op(
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)).op(),
        );
        let p1 = Effect::from_op(
            DensityMatrix::from_pure(&PureState::basis_state(2, 1)).op(),
        );
        assert!(is_resolution(&[p0, p1], &pair).unwrap());
        let id = Effect::from_op(&HermitianOp::identity(2));
        assert!(is_resolution(&[id], &pair).unwrap());
        let half = Effect::from_op(&HermitianOp::identity(2).scale(0.5));
        assert!(!is_resolution(&[half], &pair).unwrap());
    }

    #[test]
    fn realize_observable_sigma_z() {
        let (effects, values) = realize_observable(&pauli_z()).unwrap();
        assert_eq!(effects.len(), 2);
        assert!((values[0] + 1.0).abs() < 1e-12);
        assert!((values[1] - 1.0).abs() < 1e-12);
        // ω(A) = Σ ω(xᵢ) vᵢ on random states.
        let mut rng = crate::random::rng(91);
        for _ in 0..100 {
            let rho = crate::random::random_density(2, &mut rng);
            let direct = trace_inner(&pauli_z(), rho.op()).unwrap();
            let via: f64 = effects
                .iter()
                .zip(&values)
                .map(|(e, v)| e.expectation(&rho) * v)
                .sum();
            assert!((direct - via).abs() < 1e-8);
        }
    }

    #[test]
    fn realize_observable_degenerate() {
        let (effects, values) = realize_observable(&HermitianOp::identity(3)).unwrap();
        assert_eq!(effects.len(), 1);
        assert!((values[0] - 1.0).abs() < 1e-12);
        let proj = effects[0].to_op(3).unwrap();
        assert!(proj.sub(&HermitianOp::identity(3)).norm() < 1e-10);

        let (effects, values) = realize_observable(&HermitianOp::zeros(2)).unwrap();
        assert_eq!(effects.len(), 1);
        assert!(values[0].abs() < 1e-12);
    }

    #[test]
    fn member_random_nonneg_combinations() {
        let mut rng = crate::random::rng(97);
        let gens: Vec<DVector<f64>> = (0..5)
            .map(|_| crate::random::random_vector(3, &mut rng))
            .collect();
        let c = GeneratedCone::new(3, gens).unwrap();
        for _ in 0..100 {
            let mut x = DVector::zeros(3);
            for g in c.generators() {
                x += g * crate::random::random_vector(1, &mut rng)[0].abs();
            }
            assert!(c.member(&x, 1e-8).unwrap());
        }
    }
}
