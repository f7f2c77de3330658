//! Problem files: a dimension plus named operators, states and density
//! matrices, with every complex number written as `[re, im]`.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "operators": { "sx": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]] },
//!   "states": { "up": [[1, 0], [0, 0]] },
//!   "density_matrices": { "mixed": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] }
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use uncertainty_core::quantum::{DensityMatrix, HermitianOperator, StateVector};
use uncertainty_core::{CMatrix, Tolerances, C64};

use crate::CliError;

type RawMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dim: usize,
    operators: BTreeMap<String, RawMatrix>,
    states: BTreeMap<String, Vec<[f64; 2]>>,
    #[serde(default)]
    density_matrices: BTreeMap<String, RawMatrix>,
}

/// A fully validated problem file.
#[derive(Debug)]
pub struct Problem {
    pub operators: BTreeMap<String, HermitianOperator>,
    pub states: BTreeMap<String, StateVector>,
    pub density_matrices: BTreeMap<String, DensityMatrix>,
}

impl Problem {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation("Io", format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawProblem =
            serde_json::from_str(text).map_err(|e| CliError::validation("ParseError", e.to_string()))?;
        let tol = Tolerances::default();
        if raw.dim == 0 || raw.dim > tol.max_dim {
            return Err(CliError::validation(
                "InvalidDimension",
                format!("dim: {} not in 1..={}", raw.dim, tol.max_dim),
            ));
        }
        let dim = raw.dim;

        let mut operators = BTreeMap::new();
        for (name, m) in raw.operators {
            let path = format!("operators.{name}");
            let matrix = to_matrix(&path, dim, &m)?;
            let op = HermitianOperator::new_with(matrix, &tol).map_err(|e| CliError::at(&path, e))?;
            operators.insert(name, op);
        }

        let mut states = BTreeMap::new();
        for (name, v) in raw.states {
            let path = format!("states.{name}");
            if v.len() != dim {
                return Err(shape_error(&path, dim, v.len()));
            }
            let psi = StateVector::new_with(to_complex(&v), &tol).map_err(|e| CliError::at(&path, e))?;
            states.insert(name, psi);
        }

        let mut density_matrices = BTreeMap::new();
        for (name, m) in raw.density_matrices {
            let path = format!("density_matrices.{name}");
            let matrix = to_matrix(&path, dim, &m)?;
            let rho = DensityMatrix::new_with(matrix, &tol).map_err(|e| CliError::at(&path, e))?;
            density_matrices.insert(name, rho);
        }

        Ok(Self { operators, states, density_matrices })
    }

    pub fn operator(&self, name: &str) -> Result<&HermitianOperator, CliError> {
        self.operators.get(name).ok_or_else(|| missing("operators", name))
    }

    pub fn state(&self, name: &str) -> Result<&StateVector, CliError> {
        self.states.get(name).ok_or_else(|| missing("states", name))
    }

    pub fn density_matrix(&self, name: &str) -> Result<&DensityMatrix, CliError> {
        self.density_matrices.get(name).ok_or_else(|| missing("density_matrices", name))
    }
}

fn missing(section: &str, name: &str) -> CliError {
    CliError::validation("UnknownName", format!("{section}.{name}: not defined in the problem file"))
}

fn shape_error(path: &str, dim: usize, found: usize) -> CliError {
    CliError::validation("DimensionMismatch", format!("{path}: expected {dim} entries, found {found}"))
}

fn to_complex(v: &[[f64; 2]]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn to_matrix(path: &str, dim: usize, rows: &RawMatrix) -> Result<CMatrix, CliError> {
    if rows.len() != dim {
        return Err(shape_error(path, dim, rows.len()));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(shape_error(&format!("{path}[{i}]"), dim, row.len()));
        }
        data.extend(to_complex(row));
    }
    CMatrix::from_vec(dim, data).map_err(|e| CliError::at(path, e))
}
