use thiserror::Error;

use crate::general::ValidationReportJ;
use crate::quasiprob::AdmissibilityReport;
use crate::spin::ValidationReport;

#[derive(Debug, Clone, Error)]
pub enum SpinError {
    #[error("nonphysical Bloch vector: |b| = {norm} exceeds 1/2")]
    NonphysicalBloch { norm: f64 },

    #[error("nonphysical mean-value vector: |m| = {norm} exceeds 1")]
    NonphysicalMeanValues { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(ValidationReport),

    #[error("quasiprobability table is not admissible: {0}")]
    Inadmissible(Box<AdmissibilityReport>),

    #[error("nonphysical axis triple: {reason}")]
    NonphysicalTriple {
        reason: String,
        report: Option<ValidationReport>,
    },

    #[error("invalid spin-j density matrix: {0}")]
    InvalidDensityJ(ValidationReportJ),

    #[error("invalid tomogram: {0}")]
    InvalidTomogram(String),

    #[error("inconsistent tomographic samples at theta={theta}, phi={phi}: {reason}")]
    InconsistentSamples { theta: f64, phi: f64, reason: String },

    #[error("angular momentum index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, SpinError>;
