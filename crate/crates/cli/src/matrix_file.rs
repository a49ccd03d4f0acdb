//! JSON matrix files: `{"n": 2, "data": [[[re, im], [re, im]], [[re, im], [re, im]]]}`.

use isonear_core::{Complex64, ComplexMatrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    /// Row-major, every entry a `[re, im]` pair.
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let data = (0..n).map(|i| (0..n).map(|j| { let z = m.get(i, j); [z.re, z.im] }).collect()).collect();
        Self { n, data }
    }

    /// Checks shape and finiteness, naming the offending field.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        let n = self.n;
        if n == 0 {
            return Err(CliError::input("n: must be at least 1"));
        }
        if self.data.len() != n {
            return Err(CliError::input(format!("data: expected {n} rows for n = {n}, found {}", self.data.len())));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in self.data.iter().enumerate() {
            if row.len() != n {
                return Err(CliError::input(format!(
                    "data[{i}]: expected {n} entries (matrix must be square), found {}",
                    row.len()
                )));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(CliError::input(format!("data[{i}][{j}]: entries must be finite")));
                }
                entries.push(Complex64::new(re, im));
            }
        }
        ComplexMatrix::from_row_major(n, &entries).map_err(|e| CliError::input(e.to_string()))
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path == "?" {
                CliError::input(format!("matrix file: {inner}"))
            } else {
                CliError::input(format!("{path}: {inner}"))
            }
        })
    }

    pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
        Self::parse(text)?.to_matrix()
    }
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
