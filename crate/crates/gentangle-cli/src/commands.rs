//! Command implementations: each builds a [`Report`] or classifies its
//! failure as a validation error (exit 2) or a numerical failure (exit 1).

use std::path::Path;

use serde_json::Value;

use gentangle::cone::build_cone_pair_from_subspace;
use gentangle::lie::{gue_certify, max_purity, mean_field_test, min_purity, GueVerdict};
use gentangle::maps::{extremality_preserving_probe, is_liftable, lift};
use gentangle::measures::{convex_roof, PurityDeficit};
use gentangle::observables::{project_superop, purity, reduce};
use gentangle::operator::{eig_herm, herm_to_coords, trace_inner};
use gentangle::verify::{run_suite, SuiteReport, VerifyConfig};

use crate::io::{self, LoadedMap, LoadedState, ValidatedSystem};
use crate::report::{complex_vec, num, num_vec, real_matrix, DigestBuilder, Report};
use crate::{CliError, RunOpts};

fn numerical(e: gentangle::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn digest(command: &str, files: &[&[u8]], opts: &RunOpts, extra: &[(&str, String)]) -> String {
    let mut d = DigestBuilder::new(command);
    for f in files {
        d = d.file(f);
    }
    d = d
        .option("tol", &format!("{:e}", opts.tol))
        .option("seed", &opts.seed.to_string())
        .option("restarts", &format!("{:?}", opts.restarts))
        .option("samples", &format!("{:?}", opts.samples));
    for (k, v) in extra {
        d = d.option(k, v);
    }
    d.finish()
}

pub fn cmd_purity(system_path: &Path, state_path: &Path, opts: &RunOpts) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let state_bytes = io::read_file(state_path)?;
    let system = io::load_system(system_path)?;
    let state = io::load_state(state_path, system.file.dim)?;
    let rho = state.to_density();

    let mut report = Report::new(
        "purity",
        digest("purity", &[&system_bytes, &state_bytes], opts, &[]),
    );

    let p = purity(&system.subspace, &rho).map_err(numerical)?;
    let red = reduce(&system.subspace, &rho).map_err(numerical)?;
    let proj = project_superop(&system.subspace, rho.op()).map_err(numerical)?;
    let (proj_eigs, _) = eig_herm(&proj);
    let via_proj = trace_inner(&proj, &proj).map_err(numerical)?;
    let reproj = project_superop(&system.subspace, &proj).map_err(numerical)?;

    report
        .result("p_s", num(p))
        .result(
            "reduced_coords",
            num_vec(red.coords().as_slice()),
        )
        .diagnostic("projection_min_eigenvalue", num(proj_eigs.min()))
        .diagnostic(
            "projection_non_psd",
            Value::from(proj_eigs.min() < -1e-9),
        )
        .diagnostic("subspace_dim", Value::from(system.subspace.len()))
        .diagnostic(
            "includes_identity",
            Value::from(system.subspace.includes_identity()),
        )
        .residual("purity_two_route", (p - via_proj).abs())
        .residual("projection_idempotency", reproj.sub(&proj).norm());
    Ok(report)
}

pub fn cmd_gue_test(
    system_path: &Path,
    state_path: &Path,
    opts: &RunOpts,
) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let state_bytes = io::read_file(state_path)?;
    let system = io::load_system(system_path)?;
    let state = io::load_state(state_path, system.file.dim)?;
    let LoadedState::Pure(psi) = &state else {
        return Err(CliError::Validation(
            "gue-test certifies pure states; provide a state file with kind \"pure\"".into(),
        ));
    };

    let restarts = opts.restarts.unwrap_or(32);
    let mut report = Report::new(
        "gue-test",
        digest("gue-test", &[&system_bytes, &state_bytes], opts, &[]),
    );

    let rho = state.to_density();
    let p_s = purity(&system.subspace, &rho).map_err(numerical)?;
    report.result("p_s", num(p_s));

    let supported = system
        .lie
        .as_ref()
        .is_some_and(|l| gentangle::lie::is_irreducible(l.subspace()));
    if !supported {
        report.result("verdict", Value::from("unsupported-setting"));
        report.diagnostic(
            "reason",
            Value::from(if system.lie.is_some() {
                "subspace does not act irreducibly"
            } else {
                "system is not flagged as a Lie setting"
            }),
        );
        return Ok(report);
    }
    let lie = system.lie.as_ref().expect("checked above");

    let landscape = if let Some(p_star) = opts.p_star {
        gentangle::lie::PurityLandscape {
            max_value: p_star,
            argmax: psi.clone(),
            restart_values: vec![p_star],
        }
    } else {
        max_purity(&system.subspace, restarts, opts.seed).map_err(numerical)?
    };
    let verdict = gue_certify(lie, psi, &landscape, opts.tol).map_err(numerical)?;
    let mean_field = mean_field_test(&system.subspace, psi).map_err(numerical)?;

    report
        .result("p_star", num(landscape.max_value))
        .result("verdict", Value::from(verdict.as_str()))
        .result("mean_field_certificate", Value::from(mean_field))
        .diagnostic("restarts", Value::from(restarts))
        .residual("purity_gap", landscape.max_value - p_s);
    if verdict == GueVerdict::Gue && !mean_field {
        report.diagnostic(
            "note",
            Value::from("purity certificate passed; mean-field sufficient check did not"),
        );
    }
    Ok(report)
}

pub fn cmd_max_purity(system_path: &Path, opts: &RunOpts) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let system = io::load_system(system_path)?;
    let restarts = opts.restarts.unwrap_or(32);
    let landscape = max_purity(&system.subspace, restarts, opts.seed).map_err(numerical)?;

    let mut report = Report::new(
        "max-purity",
        digest("max-purity", &[&system_bytes], opts, &[]),
    );
    report
        .result("p_star", num(landscape.max_value))
        .result("restart_values", num_vec(&landscape.restart_values))
        .result("argmax", complex_vec(landscape.argmax.amplitudes()))
        .diagnostic("restarts", Value::from(restarts))
        .residual(
            "bound_excess",
            (landscape.max_value - 1.0).max(0.0),
        );
    Ok(report)
}

pub fn cmd_roof(
    system_path: &Path,
    state_path: &Path,
    opts: &RunOpts,
) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let state_bytes = io::read_file(state_path)?;
    let system = io::load_system(system_path)?;
    let state = io::load_state(state_path, system.file.dim)?;
    let rho = state.to_density();

    let restarts = opts.restarts.unwrap_or(64);
    let extra = [
        ("p_star", format!("{:?}", opts.p_star)),
        ("roof_length", format!("{:?}", opts.roof_length)),
        ("rescaled", format!("{}", opts.rescaled)),
    ];
    let mut report = Report::new(
        "roof",
        digest("roof", &[&system_bytes, &state_bytes], opts, &extra),
    );

    let p_star = match opts.p_star {
        Some(v) => v,
        None => {
            max_purity(&system.subspace, 32, opts.seed ^ 0x5041)
                .map_err(numerical)?
                .max_value
        }
    };
    let (rank, _) = {
        let (vals, _) = eig_herm(rho.op());
        let vmax = vals.max().max(1.0);
        ((0..rho.dim()).filter(|&k| vals[k] > 1e-10 * vmax).count(), 0)
    };
    let m = opts.roof_length.unwrap_or(rank * rank);
    let measure = PurityDeficit {
        subspace: system.subspace.clone(),
        p_star,
    };
    let outcome = convex_roof(&measure, &rho, m, restarts, opts.seed).map_err(numerical)?;
    if outcome.value < -1e-9 {
        return Err(CliError::Numerical(format!(
            "roof of the purity deficit is negative ({:.3e}): p_star {} lies below the purity \
             actually attained (inconsistent landscape)",
            outcome.value, p_star
        )));
    }
    let rec = outcome.decomposition.reconstruct(rho.dim());

    report
        .result("roof_upper_bound", num(outcome.value))
        .result("p_star", num(p_star))
        .result("weights", num_vec(&outcome.decomposition.weights))
        .result(
            "states",
            Value::from(
                outcome
                    .decomposition
                    .states
                    .iter()
                    .map(|s| complex_vec(s.amplitudes()))
                    .collect::<Vec<_>>(),
            ),
        )
        .result("restart_values", num_vec(&outcome.restart_values))
        .diagnostic("decomposition_length", Value::from(m))
        .diagnostic("rank", Value::from(rank))
        .diagnostic("restarts", Value::from(restarts))
        .diagnostic(
            "semantics",
            Value::from("upper bound; global optimality is not certified"),
        )
        .residual(
            "reconstruction_trace_distance",
            gentangle::operator::trace_distance(&rec, rho.op()).map_err(numerical)?,
        );
    if opts.rescaled {
        let p_min = min_purity(&system.subspace, 32, opts.seed ^ 0x504e)
            .map_err(numerical)?
            .max_value;
        let denom = p_star - p_min;
        report.result(
            "roof_rescaled",
            if denom.abs() > 1e-12 {
                num(outcome.value / denom)
            } else {
                Value::Null
            },
        );
        report.diagnostic("p_min", num(p_min));
    }
    Ok(report)
}

pub fn cmd_cone(system_path: &Path, opts: &RunOpts) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let system = io::load_system(system_path)?;
    let samples = opts.samples.unwrap_or(100);
    let pair = build_cone_pair_from_subspace(&system.subspace)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let trace_residual = pair
        .trace_preservation_residual(samples, opts.seed)
        .map_err(numerical)?;
    let positive = pair
        .lambda_positivity_ok(samples, opts.seed ^ 1)
        .map_err(numerical)?;

    // Sampled bounding box of the normalized reduced body.
    let w = pair.w_dim;
    let mut lo = vec![f64::INFINITY; w];
    let mut hi = vec![f64::NEG_INFINITY; w];
    let mut r = gentangle::random::rng(opts.seed ^ 2);
    for _ in 0..samples {
        let rho = gentangle::random::random_density(system.subspace.ambient_dim(), &mut r);
        let y = pair.pi_apply(&herm_to_coords(rho.op()));
        for a in 0..w {
            lo[a] = lo[a].min(y[a]);
            hi[a] = hi[a].max(y[a]);
        }
    }

    let mut report = Report::new("cone", digest("cone", &[&system_bytes], opts, &[]));
    report
        .result("v_dim", Value::from(pair.v_dim))
        .result("w_dim", Value::from(pair.w_dim))
        .result("reduced_coord_min", num_vec(&lo))
        .result("reduced_coord_max", num_vec(&hi))
        .result("lambda_strictly_positive", Value::from(positive))
        .diagnostic("samples", Value::from(samples))
        .residual("trace_preservation", trace_residual);
    Ok(report)
}

pub fn cmd_maps(
    system_path: &Path,
    map_path: &Path,
    opts: &RunOpts,
) -> Result<Report, CliError> {
    let system_bytes = io::read_file(system_path)?;
    let map_bytes = io::read_file(map_path)?;
    let system = io::load_system(system_path)?;
    let map = io::load_map(map_path, system.file.dim)?;
    let samples = opts.samples.unwrap_or(50);
    let pair = build_cone_pair_from_subspace(&system.subspace)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let mut report = Report::new(
        "maps",
        digest("maps", &[&system_bytes, &map_bytes], opts, &[]),
    );

    let (liftable, lifted, extremal) = match &map {
        LoadedMap::Decomposed(m) => {
            report.result("kind", Value::from("hk"));
            report.result("trace_preserving", Value::from(m.is_trace_preserving()));
            report.result(
                "branches",
                Value::from(
                    m.branches()
                        .iter()
                        .map(|(label, hk)| {
                            let mut obj = serde_json::Map::new();
                            obj.insert("label".into(), Value::from(label.clone()));
                            obj.insert("hk_count".into(), Value::from(hk.hk_ops().len()));
                            Value::Object(obj)
                        })
                        .collect::<Vec<_>>(),
                ),
            );
            let liftable = is_liftable(m, &pair, samples, opts.seed).map_err(numerical)?;
            let lifted = if liftable {
                Some(lift(m, &pair).map_err(numerical)?)
            } else {
                None
            };
            let extremal =
                extremality_preserving_probe(m, samples, opts.seed ^ 3).map_err(numerical)?;
            (liftable, lifted, extremal)
        }
        LoadedMap::Transpose(t) => {
            report.result("kind", Value::from("transpose"));
            let liftable = is_liftable(t, &pair, samples, opts.seed).map_err(numerical)?;
            let lifted = if liftable {
                Some(lift(t, &pair).map_err(numerical)?)
            } else {
                None
            };
            let extremal =
                extremality_preserving_probe(t, samples, opts.seed ^ 3).map_err(numerical)?;
            (liftable, lifted, extremal)
        }
    };

    report
        .result("liftable", Value::from(liftable))
        .result("extremality_preserving_probe", Value::from(extremal))
        .diagnostic("samples", Value::from(samples))
        .diagnostic(
            "probe_semantics",
            Value::from("extremality result is sampled evidence, not proof"),
        );
    if let Some(a) = lifted {
        report.result("lifted_matrix", real_matrix(&a));
    }
    Ok(report)
}

pub fn cmd_verify(
    suite: &str,
    system_path: Option<&Path>,
    opts: &RunOpts,
) -> Result<Report, CliError> {
    let mut file_bytes: Vec<Vec<u8>> = Vec::new();
    let system = match system_path {
        Some(p) => {
            file_bytes.push(io::read_file(p)?);
            Some(io::load_system(p)?)
        }
        None => None,
    };
    let cfg = VerifyConfig {
        seed: opts.seed,
        restarts: opts.restarts.unwrap_or(32),
        samples: opts.samples.unwrap_or(100),
        tol: opts.tol,
    };
    let subspace = system.as_ref().map(|s: &ValidatedSystem| &s.subspace);
    let outcome = run_suite(suite, subspace, &cfg);
    let suite_report = match outcome {
        Ok(r) => r,
        Err(gentangle::Error::UnknownSuite(name)) => {
            return Err(CliError::Validation(format!(
                "unknown verification suite '{name}'"
            )));
        }
        Err(e) => return Err(numerical(e)),
    };

    let refs: Vec<&[u8]> = file_bytes.iter().map(|b| b.as_slice()).collect();
    let extra = [("suite", suite.to_string())];
    let mut report = Report::new("verify", digest("verify", &refs, opts, &extra));
    fill_verify_report(&mut report, &suite_report);
    if suite_report.all_pass() {
        Ok(report)
    } else {
        Err(CliError::Property(Box::new(report)))
    }
}

fn fill_verify_report(report: &mut Report, suite: &SuiteReport) {
    report
        .result("suite", Value::from(suite.suite.clone()))
        .result("all_pass", Value::from(suite.all_pass()))
        .result(
            "properties",
            Value::from(
                suite
                    .properties
                    .iter()
                    .map(|p| {
                        let mut obj = serde_json::Map::new();
                        obj.insert("name".into(), Value::from(p.name.clone()));
                        obj.insert("pass".into(), Value::from(p.pass));
                        obj.insert("cases".into(), Value::from(p.cases));
                        obj.insert("worst_residual".into(), num(p.worst_residual));
                        Value::Object(obj)
                    })
                    .collect::<Vec<_>>(),
            ),
        );
    let worst = suite
        .properties
        .iter()
        .map(|p| p.worst_residual)
        .fold(0.0, f64::max);
    report.residual("worst_property_residual", worst);
}
