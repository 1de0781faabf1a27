//! Hermitian operators, density matrices, pure states, and the linear algebra
//! on them: trace inner product, Gram-Schmidt orthonormalization, Hermitian
//! eigendecomposition, Kronecker products and partial traces.
//!
//! Everything is dense and desk-scale (dimensions up to a few dozen); values
//! are immutable after construction and safe to share across threads.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// A d×d complex Hermitian matrix.
///
/// Construction symmetrizes (a + a†)/2 to scrub rounding noise and rejects
/// inputs whose asymmetry exceeds the rejection tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOp {
    mat: CMatrix,
}

impl HermitianOp {
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tol(mat, &Tolerances::default())
    }

    pub fn with_tol(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows().max(1),
                got: mat.ncols(),
            });
        }
        let adj = mat.adjoint();
        let residual = (&mat - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if residual > tol.hermiticity_reject {
            return Err(Error::NotHermitian {
                residual,
                tol: tol.hermiticity_reject,
            });
        }
        let sym = (&mat + &adj).map(|z| z * 0.5);
        Ok(HermitianOp { mat: sym })
    }

    /// Build from a closure over (row, col). The result is symmetrized.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        Self::new(CMatrix::from_fn(dim, dim, f))
    }

    /// Build from a real diagonal.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mat = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        HermitianOp { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        HermitianOp {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOp {
            mat: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Frobenius norm (the norm induced by the trace inner product).
    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOp {
            mat: self.mat.map(|z| z * s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOp {
            mat: &self.mat + &other.mat,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianOp {
            mat: &self.mat - &other.mat,
        }
    }

    /// i[A, B] = i(AB − BA); Hermitian whenever A and B are.
    pub fn commutator_i(&self, other: &Self) -> Self {
        let ab = &self.mat * &other.mat;
        let ba = &other.mat * &self.mat;
        let m = (ab - ba).map(|z| z * C64::new(0.0, 1.0));
        // i(AB - BA) is exactly Hermitian up to rounding; symmetrize quietly.
        let adj = m.adjoint();
        HermitianOp {
            mat: (m + adj).map(|z| z * 0.5),
        }
    }

    /// ⟨ψ|A|ψ⟩ for a unit vector ψ.
    pub fn expectation(&self, psi: &CVector) -> f64 {
        let apsi = &self.mat * psi;
        psi.dotc(&apsi).re
    }

    /// Nuclear norm Σ|λ_i| of the operator.
    pub fn trace_norm(&self) -> f64 {
        let (vals, _) = eig_herm(self);
        vals.iter().map(|v| v.abs()).sum()
    }
}

/// A unit-trace positive semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: HermitianOp,
}

impl DensityMatrix {
    pub fn new(op: HermitianOp) -> Result<Self> {
        Self::with_tol(op, &Tolerances::default())
    }

    pub fn with_tol(op: HermitianOp, tol: &Tolerances) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() > tol.trace {
            return Err(Error::NotDensity {
                reason: format!("trace = {tr}, expected 1"),
            });
        }
        let (vals, _) = eig_herm(&op);
        let min = vals.min();
        if min < -tol.psd {
            return Err(Error::NotDensity {
                reason: format!("minimum eigenvalue {min:e} below -{:e}", tol.psd),
            });
        }
        Ok(DensityMatrix { op })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        let d = v.len();
        let mat = CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj());
        DensityMatrix {
            op: HermitianOp { mat },
        }
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: HermitianOp::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Convex mixture Σ wᵢ ρᵢ; weights must be a probability vector.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyInput("mixture"));
        }
        let d = parts[0].1.dim();
        let mut acc = HermitianOp::zeros(d);
        for (w, rho) in parts {
            acc = acc.add(&rho.op.scale(*w));
        }
        DensityMatrix::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOp {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    /// tr ρ² — ordinary (full-algebra) purity.
    pub fn purity_full(&self) -> f64 {
        trace_inner(&self.op, &self.op).unwrap_or(0.0)
    }
}

/// A normalized state vector.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        Self::with_tol(amplitudes, &Tolerances::default())
    }

    pub fn with_tol(amplitudes: CVector, tol: &Tolerances) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol.unit_norm {
            return Err(Error::NotNormalized {
                residual: (norm - 1.0).abs(),
            });
        }
        Ok(PureState { amplitudes })
    }

    /// Normalize a nonzero vector and fix the global phase so the largest
    /// amplitude is real and nonnegative.
    pub fn normalized(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if norm < 1e-14 {
            return Err(Error::NotNormalized { residual: 1.0 });
        }
        let mut w = v.map(|z| z / norm);
        let mut best = 0usize;
        for (i, z) in w.iter().enumerate() {
            if z.norm() > w[best].norm() + 1e-15 {
                best = i;
            }
        }
        let phase = w[best] / w[best].norm();
        w = w.map(|z| z * phase.conj());
        Ok(PureState { amplitudes: w })
    }

    /// Computational basis state |k⟩.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[k] = C64::new(1.0, 0.0);
        PureState { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// |⟨self|other⟩|².
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }
}

/// Trace inner product ⟨A, B⟩ = tr AB of two Hermitian operators.
///
/// The value is real for Hermitian inputs; the (rounding-level) imaginary
/// residue is discarded.
pub fn trace_inner(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    // tr(AB) = Σ_ij A_ij B_ji without forming the product.
    let mut acc = C64::new(0.0, 0.0);
    let (am, bm) = (a.matrix(), b.matrix());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            acc += am[(i, j)] * bm[(j, i)];
        }
    }
    Ok(acc.re)
}

/// Gram-Schmidt in the trace inner product.
///
/// Output operators are pairwise trace-orthonormal and span the same real
/// subspace as the input; near-dependent inputs are dropped (threshold scales
/// with the largest input norm). A list of zero operators yields an empty
/// list.
pub fn orthonormalize(ops: &[HermitianOp]) -> Result<Vec<HermitianOp>> {
    orthonormalize_with_tol(ops, &Tolerances::default())
}

pub fn orthonormalize_with_tol(ops: &[HermitianOp], tol: &Tolerances) -> Result<Vec<HermitianOp>> {
    if ops.is_empty() {
        return Err(Error::EmptyInput("orthonormalize"));
    }
    let dim = ops[0].dim();
    for op in ops {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: op.dim(),
            });
        }
    }
    let max_norm = ops.iter().map(|o| o.norm()).fold(0.0, f64::max);
    let drop = tol.gs_drop_rel * max_norm.max(1e-300);
    let mut basis: Vec<HermitianOp> = Vec::new();
    for op in ops {
        let mut v = op.clone();
        // Two passes of modified Gram-Schmidt for numerical stability.
        for _ in 0..2 {
            for q in &basis {
                let c = trace_inner(q, &v)?;
                v = v.sub(&q.scale(c));
            }
        }
        let n = v.norm();
        if n > drop {
            basis.push(v.scale(1.0 / n));
        }
    }
    Ok(basis)
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
///
/// Returns (values, vectors); column k of `vectors` is the unit eigenvector
/// for `values[k]`, with a fixed phase convention (largest component real
/// nonnegative) so repeated runs agree bit-for-bit.
pub fn eig_herm(a: &HermitianOp) -> (DVector<f64>, CMatrix) {
    let se = a.matrix().clone().symmetric_eigen();
    let d = a.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals = DVector::from_fn(d, |k, _| se.eigenvalues[order[k]]);
    let mut vecs = CMatrix::zeros(d, d);
    for (k, &src) in order.iter().enumerate() {
        let col = se.eigenvectors.column(src);
        let mut best = 0usize;
        for i in 0..d {
            if col[i].norm() > col[best].norm() + 1e-15 {
                best = i;
            }
        }
        let phase = if col[best].norm() > 0.0 {
            col[best].conj() / col[best].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            vecs[(i, k)] = col[i] * phase;
        }
    }
    (vals, vecs)
}

/// Kronecker product a ⊗ b; Hermiticity is preserved.
pub fn kron(a: &HermitianOp, b: &HermitianOp) -> HermitianOp {
    HermitianOp {
        mat: a.matrix().kronecker(b.matrix()),
    }
}

/// Partial trace of a multipartite density matrix.
///
/// `dims` are the factor dimensions (their product must match the state) and
/// `keep` lists the factor indices to retain, in ascending order of factor.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: total,
        });
    }
    if keep.is_empty() {
        return Err(Error::EmptyInput("keep"));
    }
    let mut keep_sorted: Vec<usize> = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || *keep_sorted.last().unwrap() >= dims.len() {
        return Err(Error::BadGeneratorIndex {
            index: *keep_sorted.last().unwrap(),
            count: dims.len(),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let kept_dim: usize = keep_sorted.iter().map(|&i| dims[i]).product();
    let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();

    // Row-major strides of each factor in the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let unrank = |mut x: usize, factors: &[usize]| -> usize {
        // Map a multi-index ranked over `factors` to a full-space offset.
        let mut offset = 0usize;
        for &f in factors.iter().rev() {
            offset += (x % dims[f]) * strides[f];
            x /= dims[f];
        }
        offset
    };

    let src = rho.matrix();
    let mat = CMatrix::from_fn(kept_dim, kept_dim, |r, c| {
        let ro = unrank(r, &keep_sorted);
        let co = unrank(c, &keep_sorted);
        let mut acc = C64::new(0.0, 0.0);
        for t in 0..traced_dim {
            let to = unrank(t, &traced);
            acc += src[(ro + to, co + to)];
        }
        acc
    });
    DensityMatrix::new(HermitianOp::new(mat)?)
}

/// Orthonormal Hermitian basis of the full d×d operator space, d² elements:
/// diagonal units E_kk, then for each k < l the pair (E_kl + E_lk)/√2 and
/// i(E_kl − E_lk)/√2.
pub fn hermitian_basis(d: usize) -> Vec<HermitianOp> {
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        out.push(HermitianOp {
            mat: CMatrix::from_fn(d, d, |i, j| {
                if i == k && j == k {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        });
    }
    let s = 1.0 / 2.0_f64.sqrt();
    for k in 0..d {
        for l in (k + 1)..d {
            out.push(HermitianOp {
                mat: CMatrix::from_fn(d, d, |i, j| {
                    if (i, j) == (k, l) || (i, j) == (l, k) {
                        C64::new(s, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }),
            });
            out.push(HermitianOp {
                mat: CMatrix::from_fn(d, d, |i, j| {
                    if (i, j) == (k, l) {
                        C64::new(0.0, s)
                    } else if (i, j) == (l, k) {
                        C64::new(0.0, -s)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                }),
            });
        }
    }
    out
}

/// Coordinates of a Hermitian operator in the `hermitian_basis` ordering.
pub fn herm_to_coords(a: &HermitianOp) -> DVector<f64> {
    let d = a.dim();
    let m = a.matrix();
    let mut out = DVector::zeros(d * d);
    for k in 0..d {
        out[k] = m[(k, k)].re;
    }
    let mut idx = d;
    let r2 = 2.0_f64.sqrt();
    for k in 0..d {
        for l in (k + 1)..d {
            out[idx] = r2 * m[(k, l)].re;
            out[idx + 1] = r2 * m[(k, l)].im;
            idx += 2;
        }
    }
    out
}

/// Inverse of [`herm_to_coords`].
pub fn coords_to_herm(coords: &DVector<f64>, d: usize) -> Result<HermitianOp> {
    if coords.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: coords.len(),
        });
    }
    let mut mat = CMatrix::zeros(d, d);
    for k in 0..d {
        mat[(k, k)] = C64::new(coords[k], 0.0);
    }
    let mut idx = d;
    let s = 1.0 / 2.0_f64.sqrt();
    for k in 0..d {
        for l in (k + 1)..d {
            let re = coords[idx] * s;
            let im = coords[idx + 1] * s;
            mat[(k, l)] = C64::new(re, im);
            mat[(l, k)] = C64::new(re, -im);
            idx += 2;
        }
    }
    Ok(HermitianOp { mat })
}

/// Project onto the PSD cone by clipping negative eigenvalues to zero.
pub fn clip_psd(a: &HermitianOp) -> HermitianOp {
    let (vals, vecs) = eig_herm(a);
    let d = a.dim();
    let mut mat = CMatrix::zeros(d, d);
    for k in 0..d {
        if vals[k] > 0.0 {
            let col = vecs.column(k);
            for i in 0..d {
                for j in 0..d {
                    mat[(i, j)] += col[i] * col[j].conj() * vals[k];
                }
            }
        }
    }
    HermitianOp { mat }
}

/// Trace distance ½‖ρ − σ‖₁ between two Hermitian operators.
pub fn trace_distance(a: &HermitianOp, b: &HermitianOp) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(0.5 * a.sub(b).trace_norm())
}

/// Unitary exp(iθH) for Hermitian H, via the spectral decomposition.
pub fn exp_i_herm(h: &HermitianOp, theta: f64) -> CMatrix {
    let (vals, vecs) = eig_herm(h);
    let d = h.dim();
    let phases = CVector::from_fn(d, |k, _| C64::from_polar(1.0, theta * vals[k]));
    let mut out = CMatrix::zeros(d, d);
    for k in 0..d {
        let col = vecs.column(k);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += col[i] * col[j].conj() * phases[k];
            }
        }
    }
    out
}

/// Normalized e^(−tH)|φ⟩, the imaginary-time propagation of a state.
pub fn propagate_imaginary(h: &HermitianOp, t: f64, phi: &PureState) -> Result<PureState> {
    let (vals, vecs) = eig_herm(h);
    let d = h.dim();
    // Shift so the smallest eigenvalue maps to weight 1; avoids underflow.
    let shift = vals.min();
    let coeff = vecs.adjoint() * phi.amplitudes();
    let mut out = CVector::zeros(d);
    for k in 0..d {
        let w = (-(t) * (vals[k] - shift)).exp();
        let col = vecs.column(k);
        for i in 0..d {
            out[i] += col[i] * coeff[k] * w;
        }
    }
    PureState::normalized(out)
}

/// Schmidt coefficients of a bipartite pure state, descending: the singular
/// values of the amplitude matrix for the split dims.0 × dims.1.
pub fn schmidt_coefficients(psi: &PureState, dims: (usize, usize)) -> Result<Vec<f64>> {
    let (da, db) = dims;
    if da * db != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: da * db,
        });
    }
    let v = psi.amplitudes();
    let m = CMatrix::from_fn(da, db, |i, j| v[i * db + j]);
    let svd = m.svd(false, false);
    let mut coeffs: Vec<f64> = svd.singular_values.iter().cloned().collect();
    coeffs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Pad so callers can always index the second coefficient.
    while coeffs.len() < da.min(db).max(2) {
        coeffs.push(0.0);
    }
    Ok(coeffs)
}

/// Conjugate a Hermitian operator by a (unitary) matrix: U A U†.
pub fn conjugate(a: &HermitianOp, u: &CMatrix) -> Result<HermitianOp> {
    if u.nrows() != a.dim() || u.ncols() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: u.nrows(),
        });
    }
    HermitianOp::new(u * a.matrix() * u.adjoint())
}
