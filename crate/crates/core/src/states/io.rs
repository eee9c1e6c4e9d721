//! Density-matrix files.
//!
//! JSON: `{"n_qubits": 2, "entries": [[re, im], ...]}` with `4^n_qubits`
//! entries in row-major order.
//!
//! CSV: one `i,j,re,im` row per nonzero entry (0-based indices). Missing
//! entries are zero. An optional `i,j,re,im` header, blank lines and lines
//! starting with `#` are skipped. The qubit count is the smallest one whose
//! dimension covers every index.

use std::collections::HashSet;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, Repair};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    pub repair: Repair,
    pub tolerances: Option<Tolerances>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    n_qubits: usize,
    entries: Vec<[f64; 2]>,
}

/// Read a JSON or CSV matrix file and validate it as a density matrix.
pub fn load_density_matrix(source: impl Read) -> Result<DensityMatrix> {
    load_density_matrix_with(source, LoadOptions::default())
}

pub fn load_density_matrix_with(mut source: impl Read, opts: LoadOptions) -> Result<DensityMatrix> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse(format!("could not read input: {e}")))?;
    let tol = opts.tolerances.unwrap_or_default();
    let matrix = if text.trim_start().starts_with('{') {
        parse_json(&text, &tol)?
    } else {
        parse_csv(&text, &tol)?
    };
    DensityMatrix::with_options(matrix, opts.repair, &tol)
}

fn dim_for(n_qubits: usize, tol: &Tolerances) -> Result<usize> {
    if n_qubits == 0 {
        return Err(Error::Parse("n_qubits must be positive".into()));
    }
    let dim = 1usize
        .checked_shl(n_qubits as u32)
        .filter(|&d| d <= tol.dense_dim_cap && n_qubits < 32)
        .ok_or(Error::DimensionOverflow {
            dim: usize::MAX,
            cap: tol.dense_dim_cap,
        })?;
    Ok(dim)
}

fn parse_json(text: &str, tol: &Tolerances) -> Result<ComplexMatrix> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let dim = dim_for(file.n_qubits, tol)?;
    if file.entries.len() != dim * dim {
        return Err(Error::Parse(format!(
            "expected {} entries for {} qubits, found {}",
            dim * dim,
            file.n_qubits,
            file.entries.len()
        )));
    }
    let data = file
        .entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::from_vec(dim, data)
}

fn parse_csv(text: &str, tol: &Tolerances) -> Result<ComplexMatrix> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "line {}: expected 4 fields i,j,re,im, found {}",
                lineno + 1,
                fields.len()
            )));
        }
        if rows.is_empty() && fields == ["i", "j", "re", "im"] {
            continue;
        }
        let bad = |what: &str| Error::Parse(format!("line {}: invalid {what}", lineno + 1));
        let i: usize = fields[0].parse().map_err(|_| bad("row index"))?;
        let j: usize = fields[1].parse().map_err(|_| bad("column index"))?;
        let re: f64 = fields[2].parse().map_err(|_| bad("real part"))?;
        let im: f64 = fields[3].parse().map_err(|_| bad("imaginary part"))?;
        rows.push((i, j, Complex64::new(re, im)));
    }
    let max_index = rows
        .iter()
        .map(|&(i, j, _)| i.max(j))
        .max()
        .ok_or_else(|| Error::Parse("no matrix entries".into()))?;
    let dim_needed = (max_index + 1).next_power_of_two().max(2);
    let n_qubits = dim_needed.trailing_zeros() as usize;
    let dim = dim_for(n_qubits, tol)?;

    let mut seen = HashSet::new();
    let mut m = ComplexMatrix::zeros(dim);
    for (i, j, z) in rows {
        if !seen.insert((i, j)) {
            return Err(Error::Parse(format!("duplicate entry ({i}, {j})")));
        }
        m[(i, j)] = z;
    }
    Ok(m)
}

/// Write `rho` in the JSON matrix format.
pub fn write_json(rho: &DensityMatrix, mut sink: impl Write) -> Result<()> {
    let file = MatrixFile {
        n_qubits: rho.n_qubits(),
        entries: rho.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_writer(&mut sink, &file).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

/// Write `rho` in the CSV matrix format, one row per entry.
pub fn write_csv(rho: &DensityMatrix, mut sink: impl Write) -> Result<()> {
    let m = rho.matrix();
    writeln!(sink, "i,j,re,im")?;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let z = m[(i, j)];
            // `{:?}` prints the shortest string that round-trips exactly.
            writeln!(sink, "{i},{j},{:?},{:?}", z.re, z.im)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Invariant;
    use crate::states::{white_noise_mix, w_state};

    #[test]
    fn json_bell_state() {
        let text = r#"{"n_qubits": 2, "entries": [
            [0.5,0],[0,0],[0,0],[0.5,0],
            [0,0],[0,0],[0,0],[0,0],
            [0,0],[0,0],[0,0],[0,0],
            [0.5,0],[0,0],[0,0],[0.5,0]]}"#;
        let rho = load_density_matrix(text.as_bytes()).unwrap();
        assert_eq!(rho.n_qubits(), 2);
        assert_eq!(rho.matrix()[(0, 3)], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn csv_with_header_and_comments() {
        let text = "# maximally mixed qubit\ni,j,re,im\n0,0,0.5,0\n1,1,0.5,0\n";
        let rho = load_density_matrix(text.as_bytes()).unwrap();
        assert_eq!(rho.n_qubits(), 1);
        assert_eq!(rho.matrix()[(1, 1)], Complex64::new(0.5, 0.0));
    }

    #[test]
    fn round_trip_is_exact() {
        let rho = white_noise_mix(&w_state(3).unwrap(), 0.37).unwrap();
        let mut json = Vec::new();
        write_json(&rho, &mut json).unwrap();
        assert_eq!(load_density_matrix(json.as_slice()).unwrap(), rho);
        let mut csv = Vec::new();
        write_csv(&rho, &mut csv).unwrap();
        assert_eq!(load_density_matrix(csv.as_slice()).unwrap(), rho);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            load_density_matrix("{\"n_qubits\": 1, \"entries\": [[1,0]]}".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_density_matrix("0,0,1\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_density_matrix("0,0,x,0\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_density_matrix("0,0,0.5,0\n0,0,0.5,0\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            load_density_matrix("".as_bytes()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn invariant_violation_names_the_invariant() {
        let err = load_density_matrix("0,0,0.7,0\n1,1,0.5,0\n".as_bytes()).unwrap_err();
        match err {
            Error::InvariantViolation {
                invariant,
                magnitude,
            } => {
                assert_eq!(invariant, Invariant::UnitTrace);
                assert!((magnitude - 0.2).abs() < 1e-12);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn repair_flag() {
        let text = "0,0,1.000000001,0\n1,1,-0.000000001,0\n";
        assert!(load_density_matrix(text.as_bytes()).is_err());
        let opts = LoadOptions {
            repair: Repair::ClampEigenvalues,
            tolerances: None,
        };
        let rho = load_density_matrix_with(text.as_bytes(), opts).unwrap();
        assert_eq!(rho.matrix()[(1, 1)].re, 0.0);
    }
}
