//! The single output document shared by every command, and the input
//! documents read by `reconstruct` and `verify`.
//!
//! Floats are written in shortest round-trip form, so parsing a document
//! and writing it again reproduces it byte for byte.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::StateSpec;
use crate::error::{Result, SpinError};
use crate::general::{HalfInteger, SignConvention, ValidationReportJ};
use crate::quasiprob::{AdmissibilityReport, MarginalValue, QuasiProbTable, VertexIndex};
use crate::radon::ConsistencyReport;
use crate::spin::{ComplexValue, Matrix2, ValidationReport};
use crate::tomography::AxisTriple;

pub const SCHEMA_VERSION: &str = "1.0";

/// One entry p(c, b, a).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PRecord {
    pub c: i8,
    pub b: i8,
    pub a: i8,
    pub re: f64,
    pub im: f64,
}

pub fn table_records(t: &QuasiProbTable) -> Vec<PRecord> {
    t.iter()
        .map(|(v, p)| PRecord { c: v.c.value(), b: v.b.value(), a: v.a.value(), re: p.re, im: p.im })
        .collect()
}

/// Rebuilds a table; each of the eight vertices must appear exactly once.
pub fn table_from_records(records: &[PRecord]) -> Result<QuasiProbTable> {
    if records.len() != 8 {
        return Err(SpinError::InvalidArgument(format!("p table needs 8 entries, got {}", records.len())));
    }
    let mut seen = [false; 8];
    let mut t = QuasiProbTable::from_entries([Complex64::new(0.0, 0.0); 8]);
    for r in records {
        let v = VertexIndex::from_values(r.c.into(), r.b.into(), r.a.into())
            .ok_or_else(|| SpinError::IndexOutOfRange(format!("vertex ({}, {}, {})", r.c, r.b, r.a)))?;
        if std::mem::replace(&mut seen[v.slot()], true) {
            return Err(SpinError::InvalidArgument(format!("vertex {v} listed twice")));
        }
        t.set(v, Complex64::new(r.re, r.im));
    }
    Ok(t)
}

/// w(±½) along one direction; `theta` and `phi` echo the requested angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WSample {
    pub theta: f64,
    pub phi: f64,
    pub w_plus: f64,
    pub w_minus: f64,
}

/// Row-major matrix of {re, im} entries.
pub type MatrixRows = Vec<Vec<ComplexValue>>;

pub fn matrix2_rows(m: &Matrix2) -> MatrixRows {
    m.entries.iter().map(|row| row.iter().map(|&z| z.into()).collect()).collect()
}

pub fn dmatrix_rows(m: &DMatrix<Complex64>) -> MatrixRows {
    m.row_iter().map(|row| row.iter().map(|&z| z.into()).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionSummary {
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_convention: Option<SignConvention>,
    /// (−1)^{2j}: what reading the sign factors as complex exponentials
    /// would multiply the result by.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub literal_phase_factor: Option<f64>,
    /// Node counts (θ, φ, ψ).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_sizes: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization_max_deviation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReportJ>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepDeviations {
    pub p_round_trip: f64,
    pub w_axes_round_trip: f64,
    pub radon_consistency: f64,
    pub oracle: f64,
    pub w_bloch_agreement: f64,
    pub radon_total: f64,
}

impl SweepDeviations {
    pub fn max(&self) -> f64 {
        [
            self.p_round_trip,
            self.w_axes_round_trip,
            self.radon_consistency,
            self.oracle,
            self.w_bloch_agreement,
            self.radon_total,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub trials: u64,
    pub seed: u64,
    pub max_deviations: SweepDeviations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub schema_version: String,
    pub command: String,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<MatrixRows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_table: Option<Vec<PRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginals: Option<Vec<MarginalValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<AdmissibilityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_samples: Option<Vec<WSample>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_axes: Option<AxisTriple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<ReconstructionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
    pub passed: bool,
}

impl OutputDocument {
    pub fn new(command: &str, tol: f64) -> Self {
        OutputDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            tol,
            state: None,
            rho: None,
            p_table: None,
            marginals: None,
            admissibility: None,
            w_samples: None,
            w_axes: None,
            reconstruction: None,
            validation: None,
            consistency: None,
            sweep: None,
            errors: Vec::new(),
            passed: true,
        }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document is always serializable");
        s.push('\n');
        s
    }
}

/// Spin given either as a number (`0.5`, `1`) or a string (`"1/2"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinValue {
    Number(f64),
    Text(String),
}

impl SpinValue {
    pub fn to_half_integer(&self) -> Result<HalfInteger> {
        match self {
            SpinValue::Number(x) => x.to_string().parse(),
            SpinValue::Text(s) => s.parse(),
        }
    }
}

/// A tabulated tomogram sample: `w` lists w(m) for m = j, ..., −j.
/// Spin-1/2 samples may give `w_plus`/`w_minus` instead, as emitted by `w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub theta: f64,
    pub phi: f64,
    #[serde(default)]
    pub w: Option<Vec<f64>>,
    #[serde(default)]
    pub w_plus: Option<f64>,
    #[serde(default)]
    pub w_minus: Option<f64>,
}

impl SampleRecord {
    pub fn values(&self) -> Result<Vec<f64>> {
        match (&self.w, self.w_plus, self.w_minus) {
            (Some(w), None, None) => Ok(w.clone()),
            (None, Some(p), Some(m)) => Ok(vec![p, m]),
            _ => Err(SpinError::InvalidArgument(format!(
                "sample at θ={}, φ={} needs either `w` or both `w_plus` and `w_minus`",
                self.theta, self.phi
            ))),
        }
    }
}

/// Fields read by `reconstruct` and `verify`. Unknown fields are ignored, so
/// any output document can be fed back in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    #[serde(default)]
    pub p_table: Option<Vec<PRecord>>,
    #[serde(default)]
    pub w_axes: Option<AxisTriple>,
    #[serde(default)]
    pub j: Option<SpinValue>,
    #[serde(default)]
    pub twice_j: Option<i32>,
    /// State whose exact tomogram is sampled (spin 1/2 only).
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default, alias = "w_samples")]
    pub samples: Option<Vec<SampleRecord>>,
    #[serde(default)]
    pub oversample: Option<usize>,
    #[serde(default)]
    pub sign_convention: Option<SignConvention>,
}

impl InputDocument {
    pub fn spin(&self) -> Result<Option<HalfInteger>> {
        match (&self.j, self.twice_j) {
            (Some(_), Some(_)) => Err(SpinError::InvalidArgument("give either `j` or `twice_j`, not both".into())),
            (Some(j), None) => j.to_half_integer().map(Some),
            (None, Some(t)) => Ok(Some(HalfInteger::from_twice(t))),
            (None, None) => Ok(None),
        }
    }
}
