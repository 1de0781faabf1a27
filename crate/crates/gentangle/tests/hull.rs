//! Sampling-based hull membership: separable states reconstruct from coherent
//! samples of the local algebra, entangled states stay measurably outside.

use gentangle::lie::LieBasis;
use gentangle::measures::gue_hull_membership;
use gentangle::observables::ObservableSubspace;
use gentangle::operator::DensityMatrix;
use gentangle::systems::{bell_state, two_qubit_local_ops};

fn local_lie() -> LieBasis {
    LieBasis::new(ObservableSubspace::new(two_qubit_local_ops()).unwrap()).unwrap()
}

#[test]
fn maximally_mixed_is_inside_the_hull() {
    let lie = local_lie();
    let rho = DensityMatrix::maximally_mixed(4);
    let residual = gue_hull_membership(&lie, &rho, 200, 33).unwrap();
    assert!(residual <= 1e-2, "residual {residual}");
}

#[test]
fn bell_state_stays_outside_the_hull() {
    let lie = local_lie();
    let rho = DensityMatrix::from_pure(&bell_state());
    let residual = gue_hull_membership(&lie, &rho, 500, 35).unwrap();
    assert!(residual >= 0.2, "residual {residual}");
}

#[test]
fn hull_membership_requires_irreducibility() {
    let s = ObservableSubspace::new(gentangle::systems::span_i_z_ops()).unwrap();
    let lie = LieBasis::new(s).unwrap();
    let rho = DensityMatrix::maximally_mixed(2);
    assert!(gue_hull_membership(&lie, &rho, 10, 1).is_err());
}
