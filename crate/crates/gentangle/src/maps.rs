//! Completely positive maps in Hellwig-Kraus form, explicitly decomposed maps
//! with labeled branches, conditional composition, liftability of maps to the
//! reduced cone of an observable subspace, and extremality-preservation
//! probes.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::cone::ConePair;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::observables::reduce_op;
use crate::operator::{
    eig_herm, herm_to_coords, orthonormalize, CMatrix, DensityMatrix, HermitianOp,
};
use crate::random;

/// Anything that acts linearly on Hermitian operators.
pub trait HermOpMap {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn apply_herm(&self, a: &HermitianOp) -> Result<HermitianOp>;
}

/// A completely positive map ρ ↦ Σᵢ AᵢρAᵢ† given by its HK operators.
#[derive(Debug, Clone)]
pub struct HKMap {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMatrix>,
}

impl HKMap {
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyInput("HK operators"));
        }
        let (rows, cols) = (ops[0].nrows(), ops[0].ncols());
        for op in &ops {
            if op.nrows() != rows || op.ncols() != cols {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: op.nrows(),
                });
            }
        }
        Ok(HKMap {
            dim_in: cols,
            dim_out: rows,
            ops,
        })
    }

    pub fn from_unitary(u: CMatrix) -> Result<Self> {
        HKMap::new(vec![u])
    }

    pub fn identity(dim: usize) -> Self {
        HKMap {
            dim_in: dim,
            dim_out: dim,
            ops: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// Random trace-preserving CP map with `k` HK operators.
    pub fn random_tp(dim: usize, k: usize, r: &mut impl rand::Rng) -> Self {
        let raw: Vec<CMatrix> = (0..k.max(1)).map(|_| random::ginibre(dim, dim, r)).collect();
        let mut acc = CMatrix::zeros(dim, dim);
        for a in &raw {
            acc += a.adjoint() * a;
        }
        // Right-multiply by (ΣA†A)^(−1/2) to normalize.
        let herm = HermitianOp::new(acc).expect("ΣA†A is Hermitian");
        let (vals, vecs) = eig_herm(&herm);
        let mut inv_sqrt = CMatrix::zeros(dim, dim);
        for kk in 0..dim {
            let w = C64::new(1.0 / vals[kk].max(1e-14).sqrt(), 0.0);
            let col = vecs.column(kk);
            for i in 0..dim {
                for j in 0..dim {
                    inv_sqrt[(i, j)] += col[i] * col[j].conj() * w;
                }
            }
        }
        let ops = raw.into_iter().map(|a| a * &inv_sqrt).collect();
        HKMap {
            dim_in: dim,
            dim_out: dim,
            ops,
        }
    }

    /// Extend to act on the first factor of a bipartite system: Aᵢ ⊗ I.
    pub fn tensor_identity_right(&self, d2: usize) -> HKMap {
        let id = CMatrix::identity(d2, d2);
        HKMap {
            dim_in: self.dim_in * d2,
            dim_out: self.dim_out * d2,
            ops: self.ops.iter().map(|a| a.kronecker(&id)).collect(),
        }
    }

    pub fn hk_ops(&self) -> &[CMatrix] {
        &self.ops
    }

    /// Σᵢ Aᵢ†Aᵢ.
    pub fn kraus_sum(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.ops {
            acc += a.adjoint() * a;
        }
        acc
    }

    /// Apply to a density matrix: Σᵢ AᵢρAᵢ†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<HermitianOp> {
        self.apply_herm(rho.op())
    }
}

impl HermOpMap for HKMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn apply_herm(&self, a: &HermitianOp) -> Result<HermitianOp> {
        if a.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: a.dim(),
            });
        }
        let mut acc = CMatrix::zeros(self.dim_out, self.dim_out);
        for op in &self.ops {
            acc += op * a.matrix() * op.adjoint();
        }
        HermitianOp::new(acc)
    }
}

/// A finite family of CP branches {M_k}, labeled by measurement outcome,
/// summing to one overall map.
#[derive(Debug, Clone)]
pub struct ExplicitlyDecomposedMap {
    branches: Vec<(String, HKMap)>,
}

impl ExplicitlyDecomposedMap {
    pub fn new(branches: Vec<(String, HKMap)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::EmptyInput("branches"));
        }
        let din = branches[0].1.dim_in();
        let dout = branches[0].1.dim_out();
        for (_, m) in &branches {
            if m.dim_in() != din || m.dim_out() != dout {
                return Err(Error::DimensionMismatch {
                    expected: din,
                    got: m.dim_in(),
                });
            }
        }
        Ok(ExplicitlyDecomposedMap { branches })
    }

    pub fn single(label: impl Into<String>, m: HKMap) -> Self {
        ExplicitlyDecomposedMap {
            branches: vec![(label.into(), m)],
        }
    }

    pub fn branches(&self) -> &[(String, HKMap)] {
        &self.branches
    }

    /// Σ over all branches and HK operators of A†A equals I within tolerance.
    pub fn is_trace_preserving(&self) -> bool {
        let din = self.branches[0].1.dim_in();
        let mut acc = CMatrix::zeros(din, din);
        for (_, m) in &self.branches {
            acc += m.kraus_sum();
        }
        let resid = (&acc - CMatrix::identity(din, din))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        resid <= 1e-9
    }

    /// Branch-wise composition on outcome labels: the branches of the result
    /// are N_nk ∘ M_k with pair labels "(k,n)".
    pub fn conditional_compose(
        &self,
        followers: &BTreeMap<String, ExplicitlyDecomposedMap>,
    ) -> Result<ExplicitlyDecomposedMap> {
        let mut branches = Vec::new();
        for (k, m_k) in &self.branches {
            let follower = followers
                .get(k)
                .ok_or_else(|| Error::MissingFollower { label: k.clone() })?;
            for (n, n_nk) in &follower.branches {
                if n_nk.dim_in() != m_k.dim_out() {
                    return Err(Error::DimensionMismatch {
                        expected: m_k.dim_out(),
                        got: n_nk.dim_in(),
                    });
                }
                let mut ops = Vec::with_capacity(n_nk.ops.len() * m_k.ops.len());
                for b in &n_nk.ops {
                    for a in &m_k.ops {
                        ops.push(b * a);
                    }
                }
                branches.push((format!("({k},{n})"), HKMap::new(ops)?));
            }
        }
        ExplicitlyDecomposedMap::new(branches)
    }
}

impl HermOpMap for ExplicitlyDecomposedMap {
    fn dim_in(&self) -> usize {
        self.branches[0].1.dim_in()
    }

    fn dim_out(&self) -> usize {
        self.branches[0].1.dim_out()
    }

    fn apply_herm(&self, a: &HermitianOp) -> Result<HermitianOp> {
        let mut acc = HermitianOp::zeros(self.dim_out());
        for (_, m) in &self.branches {
            acc = acc.add(&m.apply_herm(a)?);
        }
        Ok(acc)
    }
}

/// A general (not necessarily completely positive) linear map on Hermitian
/// operators, stored as its real matrix over `hermitian_basis` coordinates.
#[derive(Debug, Clone)]
pub struct HermLinearMap {
    dim_in: usize,
    dim_out: usize,
    mat: DMatrix<f64>,
}

impl HermLinearMap {
    pub fn from_matrix(dim_in: usize, dim_out: usize, mat: DMatrix<f64>) -> Result<Self> {
        if mat.nrows() != dim_out * dim_out || mat.ncols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch {
                expected: dim_out * dim_out,
                got: mat.nrows(),
            });
        }
        Ok(HermLinearMap {
            dim_in,
            dim_out,
            mat,
        })
    }

    /// Coordinate form of any Hermitian-operator map.
    pub fn from_map(m: &impl HermOpMap) -> Result<Self> {
        let din = m.dim_in();
        let dout = m.dim_out();
        let basis = crate::operator::hermitian_basis(din);
        let mut mat = DMatrix::zeros(dout * dout, din * din);
        for (j, b) in basis.iter().enumerate() {
            let img = herm_to_coords(&m.apply_herm(b)?);
            mat.set_column(j, &img);
        }
        Ok(HermLinearMap {
            dim_in: din,
            dim_out: dout,
            mat,
        })
    }

    /// The transpose map ρ ↦ ρᵀ (positive but not completely positive).
    pub fn transpose_map(dim: usize) -> Self {
        let basis = crate::operator::hermitian_basis(dim);
        let mut mat = DMatrix::zeros(dim * dim, dim * dim);
        for (j, b) in basis.iter().enumerate() {
            let t = HermitianOp::new(b.matrix().transpose()).expect("transpose stays Hermitian");
            mat.set_column(j, &herm_to_coords(&t));
        }
        HermLinearMap {
            dim_in: dim,
            dim_out: dim,
            mat,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &HermLinearMap) -> Result<HermLinearMap> {
        if inner.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: inner.dim_out,
            });
        }
        Ok(HermLinearMap {
            dim_in: inner.dim_in,
            dim_out: self.dim_out,
            mat: &self.mat * &inner.mat,
        })
    }
}

impl HermOpMap for HermLinearMap {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn apply_herm(&self, a: &HermitianOp) -> Result<HermitianOp> {
        if a.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: a.dim(),
            });
        }
        let coords = herm_to_coords(a);
        crate::operator::coords_to_herm(&(&self.mat * coords), self.dim_out)
    }
}

/// Orthonormal basis of null(π): operators trace-orthogonal to the subspace.
fn null_basis(pair: &ConePair) -> Result<Vec<HermitianOp>> {
    let q = pair.quantum.as_ref().ok_or(Error::NotQuantumPair)?;
    let d = q.dim;
    let mut combined: Vec<HermitianOp> = q.subspace.ortho_basis().to_vec();
    let w = combined.len();
    combined.extend(crate::operator::hermitian_basis(d));
    let full = orthonormalize(&combined)?;
    Ok(full.into_iter().skip(w).collect())
}

/// Nullspace-preservation test: a map is liftable iff π kills the image of
/// every null(π) direction. Cross-checked on `samples` random pairs with
/// equal reductions.
pub fn is_liftable(
    m: &impl HermOpMap,
    pair: &ConePair,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let q = pair.quantum.as_ref().ok_or(Error::NotQuantumPair)?;
    let tol = Tolerances::default().lift;
    if m.dim_in() != q.dim || m.dim_out() != q.dim {
        return Err(Error::DimensionMismatch {
            expected: q.dim,
            got: m.dim_in(),
        });
    }
    let nulls = null_basis(pair)?;
    for n in &nulls {
        let img = m.apply_herm(n)?;
        let red = reduce_op(&q.subspace, &img)?;
        if red.coords().norm() > tol {
            return Ok(false);
        }
    }
    // Randomized cross-validation guards a rank-deficient null basis.
    let mut r = random::rng(seed);
    for _ in 0..samples {
        let x1 = random::random_hermitian(q.dim, &mut r);
        let mut shift = HermitianOp::zeros(q.dim);
        for n in &nulls {
            let w: f64 = random::random_vector(1, &mut r)[0];
            shift = shift.add(&n.scale(w));
        }
        let x2 = x1.add(&shift);
        let r1 = reduce_op(&q.subspace, &m.apply_herm(&x1)?)?;
        let r2 = reduce_op(&q.subspace, &m.apply_herm(&x2)?)?;
        if (r1.coords() - r2.coords()).norm() > tol * shift.norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The induced map A' on W with π∘m = A'∘π, as a w×w real matrix.
///
/// Exists exactly when the map preserves null(π); columns are the reduced
/// images of the basis observables.
pub fn lift(m: &impl HermOpMap, pair: &ConePair) -> Result<DMatrix<f64>> {
    let q = pair.quantum.as_ref().ok_or(Error::NotQuantumPair)?;
    if !is_liftable(m, pair, 8, 0x11f7)? {
        return Err(Error::NotLiftable);
    }
    let w = pair.w_dim;
    let mut out = DMatrix::zeros(w, w);
    for (alpha, x) in q.subspace.ortho_basis().iter().enumerate() {
        let img = reduce_op(&q.subspace, &m.apply_herm(x)?)?;
        out.set_column(alpha, img.coords());
    }
    Ok(out)
}

/// Sampled evidence that a map sends rank-1 operators to rank-1 operators:
/// for `samples` random pure inputs the output's second-largest eigenvalue
/// magnitude must be ≤ 1e-8 of the largest.
pub fn extremality_preserving_probe(
    m: &impl HermOpMap,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let rel = Tolerances::default().extremality_rel;
    let mut r = random::rng(seed);
    for _ in 0..samples.max(1) {
        let psi = random::random_pure(m.dim_in(), &mut r);
        let out = m.apply_herm(DensityMatrix::from_pure(&psi).op())?;
        let (vals, _) = eig_herm(&out);
        let mut mags: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
        mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if mags[1] > rel * mags[0] {
            return Ok(false);
        }
    }
    Ok(true)
}
