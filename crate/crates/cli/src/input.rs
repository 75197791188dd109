//! State files: JSON in, validated library types out.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use slocc_core::bell::{density_to_weights, weights_to_density, WeightVector};
use slocc_core::normal_form::validate_state;
use slocc_core::numerics::{ComplexMatrix, Tolerances, C64};
use slocc_core::symmetric::RMatrix;

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum StateFile {
    Density { matrix: Vec<Vec<[f64; 2]>> },
    Weights { lambda: Vec<f64> },
    Rmatrix { r: Vec<Vec<f64>> },
}

/// A parsed and validated input.
#[derive(Debug, Clone)]
pub enum Input {
    Density(ComplexMatrix),
    Weights(WeightVector),
    RMatrix(RMatrix),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Density(_) => "density",
            Self::Weights(_) => "weights",
            Self::RMatrix(_) => "rmatrix",
        }
    }

    /// Bell weights, for weight files and Bell-diagonal density matrices.
    pub fn weights(&self, tol: &Tolerances) -> Result<WeightVector> {
        match self {
            Self::Weights(w) => Ok(*w),
            Self::Density(rho) => Ok(density_to_weights(rho, tol)?),
            Self::RMatrix(_) => bail!("expected a two-qubit state, got an rmatrix"),
        }
    }

    pub fn density(&self) -> Result<ComplexMatrix> {
        match self {
            Self::Weights(w) => Ok(weights_to_density(w)),
            Self::Density(rho) => Ok(rho.clone()),
            Self::RMatrix(_) => bail!("expected a two-qubit state, got an rmatrix"),
        }
    }

    pub fn rmatrix(&self) -> Result<RMatrix> {
        match self {
            Self::RMatrix(r) => Ok(*r),
            other => bail!("expected an rmatrix, got {}", other.kind()),
        }
    }
}

/// Read a file, or stdin when the path is `-`.
pub fn read_source(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

pub fn load(path: &Path, tol: &Tolerances) -> Result<Input> {
    let text = read_source(path)?;
    parse(&text, tol).with_context(|| format!("in {}", path.display()))
}

fn finite(x: f64, at: impl FnOnce() -> String) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        bail!("{}: non-finite value {x}", at())
    }
}

pub fn parse(text: &str, tol: &Tolerances) -> Result<Input> {
    let file: StateFile = serde_json::from_str(text).context("malformed state file")?;
    match file {
        StateFile::Density { matrix } => {
            if matrix.len() != 4 {
                bail!("matrix: expected 4 rows, got {}", matrix.len());
            }
            let mut rho = ComplexMatrix::zeros(4, 4);
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != 4 {
                    bail!("matrix[{i}]: expected 4 entries, got {}", row.len());
                }
                for (j, &[re, im]) in row.iter().enumerate() {
                    let re = finite(re, || format!("matrix[{i}][{j}] real part"))?;
                    let im = finite(im, || format!("matrix[{i}][{j}] imaginary part"))?;
                    rho[(i, j)] = C64::new(re, im);
                }
            }
            validate_state(&rho, tol).context("matrix")?;
            Ok(Input::Density(rho))
        }
        StateFile::Weights { lambda } => {
            let w: [f64; 4] = lambda
                .as_slice()
                .try_into()
                .map_err(|_| anyhow::anyhow!("lambda: expected 4 weights, got {}", lambda.len()))?;
            for (i, &x) in w.iter().enumerate() {
                finite(x, || format!("lambda[{i}]"))?;
            }
            Ok(Input::Weights(WeightVector::with_tolerance(w, tol).context("lambda")?))
        }
        StateFile::Rmatrix { r } => {
            if r.len() != 4 {
                bail!("r: expected 4 rows, got {}", r.len());
            }
            let mut entries = [[0.0; 4]; 4];
            for (i, row) in r.iter().enumerate() {
                if row.len() != 4 {
                    bail!("r[{i}]: expected 4 entries, got {}", row.len());
                }
                for (j, &x) in row.iter().enumerate() {
                    entries[i][j] = finite(x, || format!("r[{i}][{j}]"))?;
                }
            }
            Ok(Input::RMatrix(RMatrix::state(entries, tol).context("r")?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn parses_each_kind() {
        let w = parse(r#"{"kind":"weights","lambda":[0.7,0.1,0.1,0.1]}"#, &tol()).unwrap();
        assert_eq!(w.kind(), "weights");
        let r = parse(r#"{"kind":"rmatrix","r":[[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#, &tol()).unwrap();
        assert_eq!(r.rmatrix().unwrap(), RMatrix::unit(0, 0));
        let d = parse(
            r#"{"kind":"density","matrix":[
                [[0.25,0],[0,0],[0,0],[0,0]],
                [[0,0],[0.25,0],[0,0],[0,0]],
                [[0,0],[0,0],[0.25,0],[0,0]],
                [[0,0],[0,0],[0,0],[0.25,0]]]}"#,
            &tol(),
        )
        .unwrap();
        assert!(d.weights(&tol()).unwrap().max_abs_diff(&WeightVector::uniform()) <= 1e-12);
    }

    #[test]
    fn rejects_with_locations() {
        let e = parse(r#"{"kind":"weights","lambda":[0.7,0.1,0.1]}"#, &tol()).unwrap_err();
        assert!(format!("{e:#}").contains("lambda"));
        let e = parse(r#"{"kind":"rmatrix","r":[[1,0,0,0],[0,0,0],[0,0,0,0],[0,0,0,0]]}"#, &tol()).unwrap_err();
        assert!(format!("{e:#}").contains("r[1]"));
        let e = parse(r#"{"kind":"weights","lambda":[0.7,0.1,0.1,1e999]}"#, &tol()).unwrap_err();
        assert!(format!("{e:#}").contains("malformed") || format!("{e:#}").contains("lambda[3]"));
        assert!(parse(r#"{"kind":"weights","lambda":[0.7,0.1,0.1,NaN]}"#, &tol()).is_err());
        assert!(parse(r#"{"kind":"ket","psi":[]}"#, &tol()).is_err());
        assert!(parse(r#"{"kind":"weights","lambda":[0.8,0.1,0.1,0.1]}"#, &tol()).is_err());
    }
}
