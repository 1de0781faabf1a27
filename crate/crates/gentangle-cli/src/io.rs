//! JSON schemas for system, state, and map files, and their validation into
//! library types. Complex matrices are nested arrays of [re, im] pairs,
//! row-major.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use gentangle::lie::LieBasis;
use gentangle::observables::ObservableSubspace;
use gentangle::operator::{CMatrix, CVector, DensityMatrix, HermitianOp, PureState};

use crate::CliError;

pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
pub struct SettingFlags {
    #[serde(default)]
    pub lie: bool,
    #[serde(default)]
    pub associative: bool,
    #[serde(default)]
    pub plain_subspace: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Vec<Vec<ComplexPair>>,
}

/// On-disk description of a distinguished-observables system.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SystemFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsystem_dims: Option<Vec<usize>>,
    pub observables: Vec<NamedMatrix>,
    #[serde(default)]
    pub flags: SettingFlags,
    #[serde(default)]
    pub include_identity: bool,
}

/// On-disk description of a state.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum StateFile {
    Pure(Vec<ComplexPair>),
    Density(Vec<Vec<ComplexPair>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapBranch {
    pub label: String,
    pub hk: Vec<Vec<Vec<ComplexPair>>>,
}

/// On-disk description of a map: branches of HK operators, or the transpose
/// map for non-CP probes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapFile {
    Hk { branches: Vec<MapBranch> },
    Transpose,
}

/// A parsed and validated system: the observable subspace plus its setting.
pub struct ValidatedSystem {
    pub file: SystemFile,
    pub subspace: ObservableSubspace,
    pub lie: Option<LieBasis>,
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn parse_matrix(raw: &[Vec<ComplexPair>], dim: usize, name: &str) -> Result<CMatrix, CliError> {
    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
        return Err(CliError::Validation(format!(
            "observable '{name}' is not a {dim}x{dim} matrix"
        )));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        num_complex(raw[i][j])
    }))
}

fn num_complex(pair: ComplexPair) -> nalgebra::Complex<f64> {
    nalgebra::Complex::new(pair[0], pair[1])
}

pub fn load_system(path: &Path) -> Result<ValidatedSystem, CliError> {
    let bytes = read_file(path)?;
    let file: SystemFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    validate_system(file)
}

pub fn validate_system(file: SystemFile) -> Result<ValidatedSystem, CliError> {
    if file.dim == 0 {
        return Err(CliError::Validation("dim must be positive".into()));
    }
    if let Some(dims) = &file.subsystem_dims {
        let prod: usize = dims.iter().product();
        if prod != file.dim {
            return Err(CliError::Validation(format!(
                "subsystem_dims product {prod} does not match dim {}",
                file.dim
            )));
        }
    }
    if file.observables.is_empty() {
        return Err(CliError::Validation("no observables given".into()));
    }
    let mut ops = Vec::with_capacity(file.observables.len());
    for named in &file.observables {
        let mat = parse_matrix(&named.matrix, file.dim, &named.name)?;
        let op = HermitianOp::new(mat).map_err(|e| {
            CliError::Validation(format!("observable '{}': {e}", named.name))
        })?;
        ops.push(op);
    }
    let subspace = ObservableSubspace::new(ops)
        .map_err(|e| CliError::Validation(format!("invalid subspace: {e}")))?;
    if file.include_identity && !subspace.includes_identity() {
        return Err(CliError::Validation(
            "include_identity is set but the identity is not in the span".into(),
        ));
    }
    let lie = if file.flags.lie {
        Some(
            LieBasis::new(subspace.clone())
                .map_err(|e| CliError::Validation(format!("lie flag set but: {e}")))?,
        )
    } else {
        None
    };
    Ok(ValidatedSystem {
        file,
        subspace,
        lie,
    })
}

pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(psi) => DensityMatrix::from_pure(psi),
            LoadedState::Density(rho) => rho.clone(),
        }
    }
}

pub fn load_state(path: &Path, dim: usize) -> Result<LoadedState, CliError> {
    let bytes = read_file(path)?;
    let file: StateFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    validate_state(file, dim)
}

pub fn validate_state(file: StateFile, dim: usize) -> Result<LoadedState, CliError> {
    match file {
        StateFile::Pure(amps) => {
            if amps.len() != dim {
                return Err(CliError::Validation(format!(
                    "pure state has {} amplitudes, system dimension is {dim}",
                    amps.len()
                )));
            }
            let v = CVector::from_fn(dim, |i, _| num_complex(amps[i]));
            let psi = PureState::new(v)
                .map_err(|e| CliError::Validation(format!("invalid pure state: {e}")))?;
            Ok(LoadedState::Pure(psi))
        }
        StateFile::Density(raw) => {
            let mat = parse_matrix(&raw, dim, "state")?;
            let op = HermitianOp::new(mat)
                .map_err(|e| CliError::Validation(format!("invalid density matrix: {e}")))?;
            let rho = DensityMatrix::new(op)
                .map_err(|e| CliError::Validation(format!("invalid density matrix: {e}")))?;
            Ok(LoadedState::Density(rho))
        }
    }
}

pub enum LoadedMap {
    Decomposed(gentangle::maps::ExplicitlyDecomposedMap),
    Transpose(gentangle::maps::HermLinearMap),
}

pub fn load_map(path: &Path, dim: usize) -> Result<LoadedMap, CliError> {
    let bytes = read_file(path)?;
    let file: MapFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    match file {
        MapFile::Transpose => Ok(LoadedMap::Transpose(
            gentangle::maps::HermLinearMap::transpose_map(dim),
        )),
        MapFile::Hk { branches } => {
            let mut parsed = Vec::new();
            for branch in &branches {
                let mut ops = Vec::new();
                for (k, raw) in branch.hk.iter().enumerate() {
                    let name = format!("branch '{}' operator {k}", branch.label);
                    if raw.len() != dim || raw.iter().any(|row| row.len() != dim) {
                        return Err(CliError::Validation(format!(
                            "{name} is not a {dim}x{dim} matrix"
                        )));
                    }
                    ops.push(CMatrix::from_fn(dim, dim, |i, j| num_complex(raw[i][j])));
                }
                let hk = gentangle::maps::HKMap::new(ops)
                    .map_err(|e| CliError::Validation(format!("branch '{}': {e}", branch.label)))?;
                parsed.push((branch.label.clone(), hk));
            }
            let map = gentangle::maps::ExplicitlyDecomposedMap::new(parsed)
                .map_err(|e| CliError::Validation(format!("invalid map: {e}")))?;
            Ok(LoadedMap::Decomposed(map))
        }
    }
}
