//! Runnable verification suites covering the structural properties of every
//! module: cone duality and adjoints, purity identities, preimage convexity
//! and uniqueness, the coherent-state characterization, roof bounds, and
//! liftability. The CLI `verify` command and the integration tests both call
//! into these.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::cone::{adjoint_map, build_cone_pair_from_subspace, dual_cone_simplicial, GeneratedCone};
use crate::error::{Error, Result};
use crate::lie::{
    ground_state, gue_certify, max_purity, mean_field_test, random_span_hamiltonian,
    sample_coherent_state, GueVerdict, LieBasis,
};
use crate::maps::{is_liftable, lift, ExplicitlyDecomposedMap, HKMap, HermOpMap};
use crate::measures::{concurrence_oracle, convex_roof, ge_measure_pure, PurityDeficit};
use crate::observables::{
    preimage_probe, project_superop, purity, purity_pure, reduce, unit_purity_check,
    ObservableSubspace, PreimageOutcome,
};
use crate::operator::{
    conjugate, exp_i_herm, herm_to_coords, trace_inner, DensityMatrix, HermitianOp, PureState,
};
use crate::random;
use crate::systems;

/// One verified property: pass/fail with case count and worst residual.
#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub worst_residual: f64,
}

impl PropertyResult {
    fn new(name: &str, pass: bool, cases: usize, worst_residual: f64) -> Self {
        PropertyResult {
            name: name.to_string(),
            pass,
            cases,
            worst_residual,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(|p| p.pass)
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    pub restarts: usize,
    pub samples: usize,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            restarts: 32,
            samples: 100,
            tol: 1e-6,
        }
    }
}

pub const SUITE_NAMES: [&str; 6] = [
    "cone-duality",
    "purity",
    "preimage",
    "thm-stchar",
    "roof",
    "liftability",
];

/// Run a named suite. `system`, when given, selects the observable subspace
/// for the suites that take one (currently "thm-stchar"); the default is the
/// spin-1 su(2) setting.
pub fn run_suite(
    name: &str,
    system: Option<&ObservableSubspace>,
    cfg: &VerifyConfig,
) -> Result<SuiteReport> {
    match name {
        "cone-duality" => Ok(cone_duality_suite(cfg)),
        "purity" => Ok(purity_suite(cfg)),
        "preimage" => preimage_suite(cfg),
        "thm-stchar" => thm_stchar_suite(system, cfg),
        "roof" => roof_suite(cfg),
        "liftability" => liftability_suite(cfg),
        "all" => {
            let mut properties = Vec::new();
            for suite in SUITE_NAMES {
                properties.extend(run_suite(suite, system, cfg)?.properties);
            }
            Ok(SuiteReport {
                suite: "all".into(),
                properties,
            })
        }
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

fn cone_duality_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut props = Vec::new();
    let mut r = random::rng(cfg.seed ^ 0xc0de);

    // Membership of random nonnegative combinations.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        let gens: Vec<DVector<f64>> = (0..6).map(|_| random::random_vector(4, &mut r)).collect();
        let cone = GeneratedCone::new(4, gens).unwrap();
        for _ in 0..100 {
            let mut x = DVector::zeros(4);
            for g in cone.generators() {
                x += g * random::random_vector(1, &mut r)[0].abs();
            }
            if !cone.member(&x, 1e-8).unwrap() {
                pass = false;
            }
        }
        let _ = &mut worst;
        props.push(PropertyResult::new("member-nonneg-combinations", pass, 100, 0.0));
    }

    // Dual of dual returns the original simplicial cone up to positive scale.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        let mut done = 0;
        while done < 100 {
            let n = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 5;
            let mut g = DMatrix::<f64>::zeros(n, n);
            for j in 0..n {
                g.set_column(j, &random::random_vector(n, &mut r));
            }
            let svd = g.clone().svd(false, false);
            if svd.singular_values.min() < 1e-3 * svd.singular_values.max() {
                continue;
            }
            let gens: Vec<DVector<f64>> = (0..n).map(|j| g.column(j).into_owned()).collect();
            let cone = GeneratedCone::new(n, gens).unwrap();
            let dd = dual_cone_simplicial(&dual_cone_simplicial(&cone).unwrap()).unwrap();
            for (a, b) in dd.generators().iter().zip(cone.generators()) {
                let scale = b.norm() / a.norm();
                let resid = (a * scale - b).norm() / b.norm().max(1.0);
                worst = worst.max(resid);
                if resid > 1e-8 || scale <= 0.0 {
                    pass = false;
                }
            }
            done += 1;
        }
        props.push(PropertyResult::new("dual-of-dual-identity", pass, 100, worst));
    }

    // Prop: positive maps of the orthant have adjoints positive on the dual.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..100 {
            let m = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 5;
            let n = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 5;
            let phi = DMatrix::from_fn(m, n, |_, _| random::random_vector(1, &mut r)[0].abs());
            let adj = adjoint_map(&phi);
            let alpha = DVector::from_fn(m, |_, _| random::random_vector(1, &mut r)[0].abs());
            let pulled = &adj * &alpha;
            let min = pulled.iter().cloned().fold(f64::INFINITY, f64::min);
            worst = worst.max((-min).max(0.0));
            if min < -1e-12 {
                pass = false;
            }
            // Pairing identity ⟨φ*α, x⟩ = ⟨α, φx⟩.
            let x = random::random_vector(n, &mut r);
            let resid = (pulled.dot(&x) - alpha.dot(&(&phi * &x))).abs();
            worst = worst.max(resid);
            if resid > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("adjoint-maps-dual-into-dual", pass, 100, worst));
    }

    // Prop: adjoints of surjective cone maps are injective.
    {
        let mut worst = f64::INFINITY;
        let mut pass = true;
        for _ in 0..100 {
            let m = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 4;
            let extra = (random::random_vector(1, &mut r)[0].abs() as usize) % 4;
            let n = m + extra;
            // Surjective onto the orthant: scaled permutation block plus
            // arbitrary nonnegative columns.
            let mut phi = DMatrix::<f64>::zeros(m, n);
            for i in 0..m {
                phi[(i, i)] = random::random_vector(1, &mut r)[0].abs() + 0.1;
            }
            for j in m..n {
                for i in 0..m {
                    phi[(i, j)] = random::random_vector(1, &mut r)[0].abs();
                }
            }
            let adj = adjoint_map(&phi);
            let svd = adj.svd(false, false);
            let smin = svd.singular_values.min();
            worst = worst.min(smin);
            if smin <= 1e-10 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("adjoint-of-surjection-injective", pass, 100, worst));
    }

    // Cone-pair trace preservation on random density matrices.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for ops in [systems::span_i_z_ops(), systems::two_qubit_local_ops()] {
            let s = ObservableSubspace::new(ops).unwrap();
            let pair = build_cone_pair_from_subspace(&s).unwrap();
            let mut rr = random::rng(cfg.seed ^ 0xfeed);
            for _ in 0..100 {
                let rho = random::random_density(s.ambient_dim(), &mut rr);
                let y = pair.pi_apply(&herm_to_coords(rho.op()));
                let resid = (pair.lambda_tilde_value(&y) - 1.0).abs();
                worst = worst.max(resid);
                if resid > 1e-9 {
                    pass = false;
                }
            }
        }
        props.push(PropertyResult::new("cone-pair-trace-preservation", pass, 200, worst));
    }

    SuiteReport {
        suite: "cone-duality".into(),
        properties: props,
    }
}

fn random_subspace(d: usize, count: usize, r: &mut impl rand::Rng) -> ObservableSubspace {
    let mut ops = vec![HermitianOp::identity(d)];
    for _ in 0..count {
        ops.push(random::random_hermitian(d, r));
    }
    ObservableSubspace::new(ops).unwrap()
}

fn purity_suite(cfg: &VerifyConfig) -> SuiteReport {
    let mut props = Vec::new();
    let mut r = random::rng(cfg.seed ^ 0x9u64);

    // Two purity routes agree: coordinate sum vs tr[Π_S(ρ)²].
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..200 {
            let d = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 3;
            let s = random_subspace(d, 1 + (d % 3), &mut r);
            let rho = random::random_density(d, &mut r);
            let via_coords = purity(&s, &rho).unwrap();
            let p = project_superop(&s, rho.op()).unwrap();
            let via_proj = trace_inner(&p, &p).unwrap();
            let resid = (via_coords - via_proj).abs();
            worst = worst.max(resid);
            if resid > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("purity-two-routes-agree", pass, 200, worst));
    }

    // Monotonicity under subspace inclusion.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..100 {
            let d = 2 + (random::random_vector(1, &mut r)[0].abs() as usize) % 3;
            let small = random_subspace(d, 1, &mut r);
            let mut ops = small.raw_basis().to_vec();
            ops.push(random::random_hermitian(d, &mut r));
            ops.push(random::random_hermitian(d, &mut r));
            let big = ObservableSubspace::new(ops).unwrap();
            let rho = random::random_density(d, &mut r);
            let gap = purity(&small, &rho).unwrap() - purity(&big, &rho).unwrap();
            worst = worst.max(gap.max(0.0));
            if gap > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("purity-monotone-in-subspace", pass, 100, worst));
    }

    // Linearity of the reduction map.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..100 {
            let d = 3;
            let s = random_subspace(d, 2, &mut r);
            let r1 = random::random_density(d, &mut r);
            let r2 = random::random_density(d, &mut r);
            let lam = 0.5 + 0.4 * random::random_vector(1, &mut r)[0].tanh();
            let mix =
                DensityMatrix::mixture(&[(lam, r1.clone()), (1.0 - lam, r2.clone())]).unwrap();
            let lhs = reduce(&s, &mix).unwrap();
            let rhs = reduce(&s, &r1).unwrap().coords() * lam
                + reduce(&s, &r2).unwrap().coords() * (1.0 - lam);
            let resid = (lhs.coords() - rhs).norm();
            worst = worst.max(resid);
            if resid > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("reduce-is-linear", pass, 100, worst));
    }

    SuiteReport {
        suite: "purity".into(),
        properties: props,
    }
}

fn preimage_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut props = Vec::new();

    // Preimage sets are convex: interior mixtures of nonunique witnesses stay
    // feasible for the same target.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        let s = ObservableSubspace::new(vec![HermitianOp::identity(2)])?;
        let rho = DensityMatrix::maximally_mixed(2);
        let target = reduce(&s, &rho)?;
        match preimage_probe(&s, &target, 4, cfg.tol, cfg.seed ^ 0x35)? {
            PreimageOutcome::Nonunique {
                witness_a,
                witness_b,
                ..
            } => {
                for k in 1..=5 {
                    let lam = k as f64 / 6.0;
                    let mix = DensityMatrix::mixture(&[
                        (lam, witness_a.clone()),
                        (1.0 - lam, witness_b.clone()),
                    ])?;
                    let red = reduce(&s, &mix)?;
                    let resid = (red.coords() - target.coords()).norm();
                    worst = worst.max(resid);
                    if resid > 1e-7 {
                        pass = false;
                    }
                }
            }
            _ => pass = false,
        }
        props.push(PropertyResult::new("preimage-set-convex", pass, 5, worst));
    }

    // Unit relative purity implies a unique preimage.
    {
        let mut pass = true;
        let mut cases = 0;
        let mut r = random::rng(cfg.seed ^ 0x45);
        for trial in 0..50 {
            let d = 2 + trial % 2;
            let psi = random::random_pure(d, &mut r);
            let rho = DensityMatrix::from_pure(&psi);
            let mut ops = vec![HermitianOp::identity(d), rho.op().clone()];
            for _ in 0..(trial % 3) {
                ops.push(random::random_hermitian(d, &mut r));
            }
            let s = ObservableSubspace::new(ops)?;
            if !unit_purity_check(&s, &psi)? {
                pass = false;
                continue;
            }
            let target = reduce(&s, &rho)?;
            let out = preimage_probe(&s, &target, 4, cfg.tol, cfg.seed ^ (trial as u64))?;
            if !matches!(out, PreimageOutcome::Unique) {
                pass = false;
            }
            cases += 1;
        }
        props.push(PropertyResult::new("unit-purity-unique-preimage", pass, cases, 0.0));
    }

    Ok(SuiteReport {
        suite: "preimage".into(),
        properties: props,
    })
}

fn thm_stchar_suite(system: Option<&ObservableSubspace>, cfg: &VerifyConfig) -> Result<SuiteReport> {
    let subspace = match system {
        Some(s) => s.clone(),
        None => ObservableSubspace::new(systems::su2_spin_ops(2))?,
    };
    let lie = LieBasis::new(subspace)?;
    let s = lie.subspace().clone();
    let d = s.ambient_dim();
    let mut props = Vec::new();

    let landscape = max_purity(&s, cfg.restarts, cfg.seed ^ 0x57a2)?;

    // Coherent samples attain maximal purity (items 2 ⟹ 4).
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for k in 0..cfg.samples {
            let psi = sample_coherent_state(&lie, cfg.seed.wrapping_add(k as u64))?;
            let p = purity_pure(&s, &psi)?;
            let gap = landscape.max_value - p;
            worst = worst.max(gap);
            if gap > cfg.tol {
                pass = false;
            }
            if gue_certify(&lie, &psi, &landscape, cfg.tol)? != GueVerdict::Gue {
                pass = false;
            }
        }
        props.push(PropertyResult::new(
            "coherent-samples-attain-max-purity",
            pass,
            cfg.samples,
            worst,
        ));
    }

    // Group covariance of purity under exp(iH), H in the span.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        let mut r = random::rng(cfg.seed ^ 0xcafe);
        for _ in 0..cfg.samples {
            let h = random_span_hamiltonian(&s, &mut r);
            let rho = random::random_density(d, &mut r);
            let u = exp_i_herm(&h, 1.0);
            let moved = DensityMatrix::new(conjugate(rho.op(), &u)?)?;
            let resid = (purity(&s, &rho)? - purity(&s, &moved)?).abs();
            worst = worst.max(resid);
            if resid > 1e-8 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("purity-group-covariance", pass, cfg.samples, worst));
    }

    // Certified-GUE states stay certified after transport by exp(iH).
    {
        let mut pass = true;
        let mut r = random::rng(cfg.seed ^ 0xbead);
        for k in 0..20 {
            let psi = sample_coherent_state(&lie, cfg.seed.wrapping_add(1000 + k))?;
            let h = random_span_hamiltonian(&s, &mut r);
            let moved = crate::lie::transport(&psi, &h, 1.0)?;
            if gue_certify(&lie, &moved, &landscape, cfg.tol)? != GueVerdict::Gue {
                pass = false;
            }
        }
        props.push(PropertyResult::new("gue-invariant-under-transport", pass, 20, 0.0));
    }

    // Projector limit: exp(−tH) drives a random state to the unique ground
    // state of H for t ≫ 1/gap.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        let mut r = random::rng(cfg.seed ^ 0x600d);
        let mut done = 0;
        while done < 20 {
            let h = random_span_hamiltonian(&s, &mut r);
            let (psi, gap, unique) = ground_state(&h, 1e-8);
            if !unique {
                continue;
            }
            let start = random::random_pure(d, &mut r);
            if start.overlap(&psi) < 1e-6 {
                continue;
            }
            let evolved = crate::operator::propagate_imaginary(&h, 50.0 / gap, &start)?;
            let overlap = evolved.overlap(&psi);
            worst = worst.max(1.0 - overlap);
            if overlap < 1.0 - 1e-6 {
                pass = false;
            }
            done += 1;
        }
        props.push(PropertyResult::new("imaginary-time-projector-limit", pass, 20, worst));
    }

    // The purity argmax is itself certified unentangled.
    {
        let verdict = gue_certify(&lie, &landscape.argmax, &landscape, cfg.tol)?;
        let mean_field = mean_field_test(&s, &landscape.argmax)?;
        props.push(PropertyResult::new(
            "argmax-certified-gue",
            verdict == GueVerdict::Gue && mean_field,
            1,
            0.0,
        ));
    }

    Ok(SuiteReport {
        suite: "thm-stchar".into(),
        properties: props,
    })
}

fn roof_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut props = Vec::new();
    let s = ObservableSubspace::new(systems::two_qubit_local_ops())?;
    let measure = PurityDeficit {
        subspace: s.clone(),
        p_star: 0.75,
    };
    let mut r = random::rng(cfg.seed ^ 0x100f);

    // Roof never exceeds the eigen-ensemble average, and pure inputs
    // reproduce the pure measure.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..10 {
            let rho = random::random_density(4, &mut r);
            let (vals, vecs) = crate::operator::eig_herm(rho.op());
            let mut eigen_avg = 0.0;
            for k in 0..4 {
                if vals[k] > 1e-12 {
                    let col = crate::operator::CVector::from_fn(4, |i, _| vecs[(i, k)]);
                    let psi = PureState::normalized(col).unwrap();
                    eigen_avg += vals[k] * measure_value(&measure, &psi);
                }
            }
            let out = convex_roof(&measure, &rho, 8, 8, cfg.seed ^ 0x2222)?;
            let (value, decomp) = (out.value, out.decomposition);
            let excess = (value - eigen_avg).max(0.0);
            worst = worst.max(excess);
            if value > eigen_avg + 1e-9 || value < -1e-12 {
                pass = false;
            }
            let rec = decomp.reconstruct(4);
            if rec.sub(rho.op()).trace_norm() > 1e-7 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("roof-bounded-by-eigen-average", pass, 10, worst));
    }

    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for k in 0..5 {
            let psi = random::random_pure(4, &mut r);
            let rho = DensityMatrix::from_pure(&psi);
            let value = convex_roof(&measure, &rho, 4, 4, cfg.seed ^ k)?.value;
            let resid = (value - measure_value(&measure, &psi)).abs();
            worst = worst.max(resid);
            if resid > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("roof-of-pure-equals-measure", pass, 5, worst));
    }

    // Approximate convexity of the roof value.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for k in 0..3 {
            let r1 = random::random_density(4, &mut r);
            let r2 = random::random_density(4, &mut r);
            let v1 = convex_roof(&measure, &r1, 16, cfg.restarts.min(16), cfg.seed ^ (3 * k))?.value;
            let v2 =
                convex_roof(&measure, &r2, 16, cfg.restarts.min(16), cfg.seed ^ (3 * k + 1))?.value;
            for lam in [0.25, 0.5, 0.75] {
                let mix =
                    DensityMatrix::mixture(&[(lam, r1.clone()), (1.0 - lam, r2.clone())])?;
                let vm =
                    convex_roof(&measure, &mix, 16, cfg.restarts.min(16), cfg.seed ^ (3 * k + 2))?.value;
                let excess = vm - (lam * v1 + (1.0 - lam) * v2);
                worst = worst.max(excess.max(0.0));
                if excess > 5e-3 {
                    pass = false;
                }
            }
        }
        props.push(PropertyResult::new("roof-approximately-convex", pass, 9, worst));
    }

    // Pure two-qubit states: purity deficit equals C²/2.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..20 {
            let psi = random::random_pure(4, &mut r);
            let m = ge_measure_pure(&s, &psi, 0.75)?;
            let c = concurrence_oracle(&DensityMatrix::from_pure(&psi))?;
            let resid = (m - c * c / 2.0).abs();
            worst = worst.max(resid);
            if resid > 1e-8 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("deficit-equals-half-tangle", pass, 20, worst));
    }

    Ok(SuiteReport {
        suite: "roof".into(),
        properties: props,
    })
}

fn measure_value(measure: &PurityDeficit, psi: &PureState) -> f64 {
    use crate::measures::PureMeasure;
    measure.value(psi)
}

fn liftability_suite(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut props = Vec::new();
    let s = ObservableSubspace::new(systems::two_qubit_local_ops())?;
    let pair = build_cone_pair_from_subspace(&s)?;
    let mut r = random::rng(cfg.seed ^ 0x11f7);

    // Unilocal CP maps are liftable and the lift satisfies its identity on
    // fresh states.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..20 {
            let a = HKMap::random_tp(2, 2, &mut r);
            let m = a.tensor_identity_right(2);
            if !is_liftable(&m, &pair, 10, cfg.seed ^ 0x77)? {
                pass = false;
                continue;
            }
            let lifted = lift(&m, &pair)?;
            for _ in 0..10 {
                let rho = random::random_density(4, &mut r);
                let lhs = reduce(&s, &DensityMatrix::new(m.apply_herm(rho.op())?)?)?;
                let rhs = &lifted * reduce(&s, &rho)?.coords();
                let resid = (lhs.coords() - rhs).norm();
                worst = worst.max(resid);
                if resid > 1e-8 {
                    pass = false;
                }
            }
        }
        props.push(PropertyResult::new("unilocal-maps-liftable", pass, 20, worst));
    }

    // Composition of liftable maps is liftable and lifts compose.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..10 {
            let a = HKMap::random_tp(2, 2, &mut r).tensor_identity_right(2);
            let b = HKMap::random_tp(2, 2, &mut r).tensor_identity_right(2);
            // b ∘ a as one HK map.
            let mut ops = Vec::new();
            for bo in b.hk_ops() {
                for ao in a.hk_ops() {
                    ops.push(bo * ao);
                }
            }
            let ba = HKMap::new(ops)?;
            if !is_liftable(&ba, &pair, 5, cfg.seed ^ 0x88)? {
                pass = false;
                continue;
            }
            let la = lift(&a, &pair)?;
            let lb = lift(&b, &pair)?;
            let lba = lift(&ba, &pair)?;
            let resid = (&lb * &la - &lba).norm();
            worst = worst.max(resid);
            if resid > 1e-8 {
                pass = false;
            }
        }
        props.push(PropertyResult::new("lift-of-composition-composes", pass, 10, worst));
    }

    // Conditional composition of trace-preserving maps stays trace
    // preserving; single trace-preserving branches preserve the trace of
    // states.
    {
        let mut worst = 0.0_f64;
        let mut pass = true;
        for _ in 0..100 {
            let m = random_tp_decomposed(2, &mut r)?;
            let mut followers = BTreeMap::new();
            for (label, _) in m.branches() {
                followers.insert(label.clone(), random_tp_decomposed(2, &mut r)?);
            }
            let composed = m.conditional_compose(&followers)?;
            if !composed.is_trace_preserving() {
                pass = false;
            }
            let rho = random::random_density(2, &mut r);
            let out = composed.apply_herm(rho.op())?;
            let resid = (out.trace() - 1.0).abs();
            worst = worst.max(resid);
            if resid > 1e-9 {
                pass = false;
            }
        }
        props.push(PropertyResult::new(
            "conditional-composition-trace-preserving",
            pass,
            100,
            worst,
        ));
    }

    Ok(SuiteReport {
        suite: "liftability".into(),
        properties: props,
    })
}

/// Random explicitly decomposed trace-preserving map: a random projective
/// measurement followed by random unitaries on each branch.
fn random_tp_decomposed(dim: usize, r: &mut impl rand::Rng) -> Result<ExplicitlyDecomposedMap> {
    let u = random::random_unitary(dim, r);
    let mut branches = Vec::new();
    for k in 0..dim {
        let col = u.column(k);
        let proj = crate::operator::CMatrix::from_fn(dim, dim, |i, j| col[i] * col[j].conj());
        let v = random::random_unitary(dim, r);
        branches.push((format!("{k}"), HKMap::new(vec![v * proj])?));
    }
    ExplicitlyDecomposedMap::new(branches)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("no-such-suite", None, &VerifyConfig::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn suite_names_round_trip() {
        let cfg = VerifyConfig {
            samples: 10,
            restarts: 8,
            ..VerifyConfig::default()
        };
        for name in SUITE_NAMES {
            let report = run_suite(name, None, &cfg).unwrap();
            assert_eq!(report.suite, name);
            assert!(!report.properties.is_empty());
        }
    }
}
