//! Stock observable sets and states used by the verification suites, the CLI
//! data files, and tests: Pauli operators, su(2) spin-J generators, local
//! algebras of qubit pairs, Bell and Werner states.

use num_complex::Complex64 as C64;

use crate::operator::{kron, CMatrix, CVector, DensityMatrix, HermitianOp, PureState};

pub fn pauli_x() -> HermitianOp {
    HermitianOp::from_fn(2, |i, j| {
        if i != j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .unwrap()
}

pub fn pauli_y() -> HermitianOp {
    HermitianOp::from_fn(2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    })
    .unwrap()
}

pub fn pauli_z() -> HermitianOp {
    HermitianOp::from_diagonal(&[1.0, -1.0])
}

/// {I, σx, σy, σz}.
pub fn pauli_basis_with_identity() -> Vec<HermitianOp> {
    vec![HermitianOp::identity(2), pauli_x(), pauli_y(), pauli_z()]
}

/// Spin-J angular momentum operators (Jx, Jy, Jz) for 2J = `two_j`,
/// acting on dimension 2J+1 with basis |J⟩, |J−1⟩, …, |−J⟩.
pub fn spin_ops(two_j: u32) -> (HermitianOp, HermitianOp, HermitianOp) {
    let d = (two_j + 1) as usize;
    let j = two_j as f64 / 2.0;
    let m_of = |k: usize| j - k as f64;
    // ⟨m+1|J₊|m⟩ = √(J(J+1) − m(m+1)): row k-1 (m+1), column k (m).
    let mut jp = CMatrix::zeros(d, d);
    for k in 1..d {
        let m = m_of(k);
        jp[(k - 1, k)] = C64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = HermitianOp::new((&jp + &jm).map(|z| z * 0.5)).unwrap();
    let jy = HermitianOp::new((&jp - &jm).map(|z| z * C64::new(0.0, -0.5))).unwrap();
    let jz = HermitianOp::from_diagonal(&(0..d).map(m_of).collect::<Vec<_>>());
    (jx, jy, jz)
}

/// su(2) spin-J observables including the identity: {I, Jx, Jy, Jz}.
pub fn su2_spin_ops(two_j: u32) -> Vec<HermitianOp> {
    let d = (two_j + 1) as usize;
    let (jx, jy, jz) = spin_ops(two_j);
    vec![HermitianOp::identity(d), jx, jy, jz]
}

/// Local observables of a pair of qubits: {I⊗I, σᵢ⊗I, I⊗σⱼ} (7 operators).
pub fn two_qubit_local_ops() -> Vec<HermitianOp> {
    let i2 = HermitianOp::identity(2);
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let mut out = vec![kron(&i2, &i2)];
    for p in &paulis {
        out.push(kron(p, &i2));
    }
    for p in &paulis {
        out.push(kron(&i2, p));
    }
    out
}

/// The full operator algebra on dimension d (a trace-orthonormal basis).
pub fn full_algebra_ops(d: usize) -> Vec<HermitianOp> {
    crate::operator::hermitian_basis(d)
}

/// {I, σz} on one qubit.
pub fn span_i_z_ops() -> Vec<HermitianOp> {
    vec![HermitianOp::identity(2), pauli_z()]
}

/// |Φ+⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> PureState {
    let s = 1.0 / 2.0_f64.sqrt();
    let mut v = CVector::zeros(4);
    v[0] = C64::new(s, 0.0);
    v[3] = C64::new(s, 0.0);
    PureState::new(v).unwrap()
}

/// Werner state p·|Φ+⟩⟨Φ+| + (1−p)·I/4.
pub fn werner_state(p: f64) -> DensityMatrix {
    let bell = DensityMatrix::from_pure(&bell_state());
    DensityMatrix::mixture(&[(p, bell), (1.0 - p, DensityMatrix::maximally_mixed(4))]).unwrap()
}

/// Computational basis state |k⟩ on `dim` levels.
pub fn basis_state(dim: usize, k: usize) -> PureState {
    PureState::basis_state(dim, k)
}
