//! JSON problem files and extension reports.
//!
//! A problem file is a single UTF-8 JSON object:
//!
//! ```json
//! {
//!   "dim": 2,
//!   "mode": "skew",
//!   "conjugation": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
//!   "domain_basis": [[[1.0, 0.0], [0.0, 0.0]]],
//!   "action": [[[0.0, 0.0], [1.0, 0.0]]]
//! }
//! ```
//!
//! Every complex scalar is a two-element array `[re, im]`; matrices are
//! row-major arrays of rows; `domain_basis` and `action` are lists of
//! `dim`-vectors of equal length. `mode` is `"skew"` or `"isometric"`.
//! Doubled-space vectors are ordered x-block first, matching the in-memory
//! layout. Report files mirror the field names of
//! [`ExtensionReport`](crate::engine::ExtensionReport). Serialization uses
//! shortest round-trip decimals, so parse → serialize → parse is the
//! identity and equal inputs produce byte-identical files.

use serde::{Deserialize, Serialize};

use crate::conjugation::{Conjugation, ToleranceConfig};
use crate::engine::{ExtensionReport, Mode, Problem};
use crate::error::{Error, Result};
use crate::graph::PartialOperator;
use crate::{C64, CMatrix, CVector};

pub fn pair_to_complex(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

pub fn complex_to_pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn vector_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|&z| complex_to_pair(z)).collect()
}

pub fn pairs_to_vector(pairs: &[[f64; 2]]) -> CVector {
    CVector::from_iterator(pairs.len(), pairs.iter().map(|&p| pair_to_complex(p)))
}

/// Row-major rows of `[re, im]` pairs.
pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| complex_to_pair(m[(r, c)])).collect())
        .collect()
}

pub fn rows_to_matrix(rows: &[Vec<[f64; 2]>], nrows: usize, ncols: usize) -> Result<CMatrix> {
    if rows.len() != nrows {
        return Err(Error::Parse(format!(
            "expected {nrows} rows, got {}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {ncols}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| {
        pair_to_complex(rows[r][c])
    }))
}

/// On-disk form of a problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub dim: usize,
    pub mode: Mode,
    pub conjugation: Vec<Vec<[f64; 2]>>,
    pub domain_basis: Vec<Vec<[f64; 2]>>,
    pub action: Vec<Vec<[f64; 2]>>,
}

impl ProblemFile {
    pub fn from_problem(p: &Problem) -> Self {
        Self {
            dim: p.dim(),
            mode: p.mode,
            conjugation: matrix_to_rows(p.conjugation.coeff()),
            domain_basis: p.op.domain().iter().map(vector_to_pairs).collect(),
            action: p.op.action().iter().map(vector_to_pairs).collect(),
        }
    }

    /// Shape checks are parse errors; an invalid conjugation is a
    /// mathematical error and surfaces as [`Error::ConjugationInvalid`].
    pub fn into_problem(&self, cfg: ToleranceConfig) -> Result<Problem> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let n = self.dim;
        let coeff = rows_to_matrix(&self.conjugation, n, n)?;
        if self.domain_basis.len() != self.action.len() {
            return Err(Error::Parse(format!(
                "domain_basis has {} vectors but action has {}",
                self.domain_basis.len(),
                self.action.len()
            )));
        }
        let parse_vectors = |rows: &[Vec<[f64; 2]>], what: &str| -> Result<Vec<CVector>> {
            rows.iter()
                .enumerate()
                .map(|(i, pairs)| {
                    if pairs.len() != n {
                        return Err(Error::Parse(format!(
                            "{what} vector {i} has length {}, expected {n}",
                            pairs.len()
                        )));
                    }
                    Ok(pairs_to_vector(pairs))
                })
                .collect()
        };
        let domain = parse_vectors(&self.domain_basis, "domain_basis")?;
        let action = parse_vectors(&self.action, "action")?;
        let conjugation = Conjugation::new(coeff, &cfg)?;
        Problem::new(conjugation, self.mode, PartialOperator::new(n, domain, action)?, cfg)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("problem files always serialize");
        out.push('\n');
        out
    }
}

/// On-disk form of an extension report; fields mirror
/// [`ExtensionReport`](crate::engine::ExtensionReport).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub extended_dim: usize,
    pub doubled: bool,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub extended_conjugation: Vec<Vec<[f64; 2]>>,
    pub defect_dim: usize,
    pub retries_used: u32,
    pub residual_extension: f64,
    pub residual_structure: f64,
    pub residual_split: f64,
}

impl ReportFile {
    pub fn from_report(r: &ExtensionReport) -> Self {
        Self {
            extended_dim: r.extended_dim,
            doubled: r.doubled,
            matrix: matrix_to_rows(&r.matrix),
            extended_conjugation: matrix_to_rows(r.extended_conjugation.coeff()),
            defect_dim: r.defect_dim,
            retries_used: r.retries_used,
            residual_extension: r.residual_extension,
            residual_structure: r.residual_structure,
            residual_split: r.residual_split,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report files always serialize");
        out.push('\n');
        out
    }
}

/// Minimal view of any file that carries a conjugation (extra fields are
/// ignored, so problem files work too).
#[derive(Debug, Clone, Deserialize)]
pub struct ConjugationFile {
    pub dim: usize,
    pub conjugation: Vec<Vec<[f64; 2]>>,
}

impl ConjugationFile {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn into_conjugation(&self, cfg: &ToleranceConfig) -> Result<Conjugation> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        let coeff = rows_to_matrix(&self.conjugation, self.dim, self.dim)?;
        Conjugation::new(coeff, cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::gen_case_a;

    #[test]
    fn problem_round_trip_is_exact() {
        for seed in 0..10 {
            let p = gen_case_a(4, 2, seed).unwrap();
            let file = ProblemFile::from_problem(&p);
            let json = file.to_json_pretty();
            let reparsed = ProblemFile::from_json(&json).unwrap();
            assert_eq!(file, reparsed);
            let again = ProblemFile::from_problem(
                &reparsed.into_problem(ToleranceConfig::default()).unwrap(),
            );
            assert_eq!(file, again);
        }
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = ProblemFile::from_problem(&gen_case_a(3, 1, 11).unwrap()).to_json_pretty();
        let b = ProblemFile::from_problem(&gen_case_a(3, 1, 11).unwrap()).to_json_pretty();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(
            ProblemFile::from_json("{ not json"),
            Err(Error::Parse(_))
        ));
        let wrong_shape = r#"{
            "dim": 2,
            "mode": "skew",
            "conjugation": [[[1.0, 0.0]]],
            "domain_basis": [],
            "action": []
        }"#;
        let f = ProblemFile::from_json(wrong_shape).unwrap();
        assert!(matches!(
            f.into_problem(ToleranceConfig::default()),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn invalid_conjugation_is_a_math_error() {
        let bad = r#"{
            "dim": 1,
            "mode": "skew",
            "conjugation": [[[2.0, 0.0]]],
            "domain_basis": [],
            "action": []
        }"#;
        let f = ProblemFile::from_json(bad).unwrap();
        assert!(matches!(
            f.into_problem(ToleranceConfig::default()),
            Err(Error::ConjugationInvalid(_))
        ));
    }

    #[test]
    fn conjugation_file_accepts_problem_files() {
        let p = gen_case_a(2, 1, 3).unwrap();
        let json = ProblemFile::from_problem(&p).to_json_pretty();
        let cf = ConjugationFile::from_json(&json).unwrap();
        let j = cf.into_conjugation(&ToleranceConfig::default()).unwrap();
        assert_eq!(j.coeff(), p.conjugation.coeff());
    }
}
