//! The complex quasiprobability table p(c,b,a).
//!
//! P(s) is supported on the eight cube vertices (c,b,a) ∈ {±1}³, where c, b
//! and a are σ_x, σ_y and σ_z eigenvalues. The table stores the eight
//! weights in the order (1,1,1), (−1,1,1), (1,−1,1), (−1,−1,1), (1,1,−1),
//! ... with c varying fastest and a slowest.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::spin::{
    overlap, validate_density, Axis, AxisSign, ComplexValue, DensityMatrix, Matrix2, Sign, ValidationReport,
    DEFAULT_TOL,
};

/// A cube vertex (c, b, a): eigenvalues of σ_x, σ_y, σ_z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexIndex {
    pub c: Sign,
    pub b: Sign,
    pub a: Sign,
}

impl VertexIndex {
    pub const fn new(c: Sign, b: Sign, a: Sign) -> Self {
        VertexIndex { c, b, a }
    }

    /// Builds a vertex from ±1 integers.
    pub fn from_values(c: i64, b: i64, a: i64) -> Option<Self> {
        Some(VertexIndex::new(Sign::from_value(c)?, Sign::from_value(b)?, Sign::from_value(a)?))
    }

    /// All eight vertices in table order.
    pub fn all() -> [VertexIndex; 8] {
        let mut out = [VertexIndex::new(Sign::Plus, Sign::Plus, Sign::Plus); 8];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = VertexIndex::from_slot(k);
        }
        out
    }

    pub fn slot(self) -> usize {
        let bit = |s: Sign| usize::from(s == Sign::Minus);
        bit(self.c) | (bit(self.b) << 1) | (bit(self.a) << 2)
    }

    fn from_slot(k: usize) -> Self {
        let sign = |bit: usize| if bit == 0 { Sign::Plus } else { Sign::Minus };
        VertexIndex::new(sign(k & 1), sign((k >> 1) & 1), sign((k >> 2) & 1))
    }

    pub fn component(self, axis: Axis) -> Sign {
        match axis {
            Axis::X => self.c,
            Axis::Y => self.b,
            Axis::Z => self.a,
        }
    }
}

impl fmt::Display for VertexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.c.value(), self.b.value(), self.a.value())
    }
}

/// The eight complex weights p(c,b,a).
///
/// Construction does not enforce admissibility; see [`check_admissibility`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuasiProbTable {
    entries: [Complex64; 8],
}

impl QuasiProbTable {
    /// Entries in table order (see [`VertexIndex::all`]).
    pub fn from_entries(entries: [Complex64; 8]) -> Self {
        QuasiProbTable { entries }
    }

    pub fn from_fn(mut f: impl FnMut(VertexIndex) -> Complex64) -> Self {
        let mut entries = [Complex64::new(0.0, 0.0); 8];
        for v in VertexIndex::all() {
            entries[v.slot()] = f(v);
        }
        QuasiProbTable { entries }
    }

    pub fn get(&self, v: VertexIndex) -> Complex64 {
        self.entries[v.slot()]
    }

    /// Lookup by ±1 integers. Panics on any other value.
    pub fn at(&self, c: i64, b: i64, a: i64) -> Complex64 {
        let v = VertexIndex::from_values(c, b, a).expect("vertex components must be ±1");
        self.get(v)
    }

    pub fn set(&mut self, v: VertexIndex, value: Complex64) {
        self.entries[v.slot()] = value;
    }

    pub fn entries(&self) -> &[Complex64; 8] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexIndex, Complex64)> + '_ {
        VertexIndex::all().into_iter().map(move |v| (v, self.get(v)))
    }

    pub fn total(&self) -> Complex64 {
        self.entries.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &QuasiProbTable) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// λ·self + μ·other, entrywise.
    pub fn combine(&self, lambda: f64, other: &QuasiProbTable, mu: f64) -> QuasiProbTable {
        let mut entries = self.entries;
        for (e, o) in entries.iter_mut().zip(other.entries.iter()) {
            *e = *e * lambda + o * mu;
        }
        QuasiProbTable { entries }
    }
}

/// Closed-form map ρ ↦ p(c,b,a).
pub fn p_from_density(rho: &DensityMatrix) -> QuasiProbTable {
    let q_plus = Complex64::new(0.25, 0.25);
    let q_minus = Complex64::new(0.25, -0.25);
    let (pp, pm, mp, mm) = (rho.pp(), rho.pm(), rho.mp(), rho.mm());
    QuasiProbTable::from_entries([
        q_plus * (pp + pm),   // (1,1,1)
        q_minus * (pp - pm),  // (-1,1,1)
        q_minus * (pp + pm),  // (1,-1,1)
        q_plus * (pp - pm),   // (-1,-1,1)
        q_minus * (mm + mp),  // (1,1,-1)
        q_plus * (mm - mp),   // (-1,1,-1)
        q_plus * (mm + mp),   // (1,-1,-1)
        q_minus * (mm - mp),  // (-1,-1,-1)
    ])
}

/// p(c,b,a) = ⟨c_x|b_y⟩⟨b_y|a_z⟩⟨a_z|ρ|c_x⟩, expanding ⟨a_z|ρ|c_x⟩ over the
/// z basis. Uses only eigenket overlaps and matrix elements of ρ.
pub fn p_oracle(rho: &DensityMatrix) -> QuasiProbTable {
    let m = rho.matrix();
    let row = |s: Sign| usize::from(s == Sign::Minus);
    QuasiProbTable::from_fn(|v| {
        let cx = AxisSign::new(Axis::X, v.c);
        let by = AxisSign::new(Axis::Y, v.b);
        let az = AxisSign::new(Axis::Z, v.a);
        let neg_az = AxisSign::new(Axis::Z, v.a.flip());
        let element = overlap(az, cx) * m[(row(v.a), row(v.a))] + overlap(neg_az, cx) * m[(row(v.a), row(v.a.flip()))];
        overlap(cx, by) * overlap(by, az) * element
    })
}

/// The 2×2 matrix rebuilt from p(1,1,1) and p(−1,1,1) alone, without checks.
pub fn reconstruct_matrix(t: &QuasiProbTable) -> Matrix2 {
    let p111 = t.at(1, 1, 1);
    let pm11 = t.at(-1, 1, 1);
    let one_minus_i = Complex64::new(1.0, -1.0);
    let one_plus_i = Complex64::new(1.0, 1.0);
    let pp = one_minus_i * p111 + one_plus_i * pm11;
    let pm = one_minus_i * p111 - one_plus_i * pm11;
    Matrix2::from_rows(pp, pm, pm.conj(), Complex64::new(1.0, 0.0) - pp)
}

/// Inverts the table back to ρ using the two defining entries; the other six
/// are redundant and are not consulted.
pub fn density_from_p(t: &QuasiProbTable) -> Result<DensityMatrix> {
    density_from_p_with_tol(t, DEFAULT_TOL)
}

pub fn density_from_p_with_tol(t: &QuasiProbTable, tol: f64) -> Result<DensityMatrix> {
    let m = reconstruct_matrix(t);
    let report = validate_density(&m, tol);
    if report.passed {
        Ok(DensityMatrix::from_matrix_unchecked(m))
    } else {
        Err(SpinError::Inadmissible(Box::new(check_admissibility(t, tol))))
    }
}

/// Sum of the four entries with `axis` fixed to `sign`.
pub fn marginal(t: &QuasiProbTable, axis: Axis, sign: Sign) -> Complex64 {
    t.iter().filter(|(v, _)| v.component(axis) == sign).map(|(_, p)| p).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalValue {
    pub axis: Axis,
    pub sign: Sign,
    pub re: f64,
    pub im: f64,
}

/// All six single-axis marginals, x then y then z, +1 before −1.
pub fn marginals(t: &QuasiProbTable) -> Vec<MarginalValue> {
    let mut out = Vec::with_capacity(6);
    for axis in Axis::ALL {
        for sign in Sign::BOTH {
            let m = marginal(t, axis, sign);
            out.push(MarginalValue { axis, sign, re: m.re, im: m.im });
        }
    }
    out
}

/// Constraint check for a candidate table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub tol: f64,
    pub total: ComplexValue,
    /// |Σ p − 1|.
    pub total_deviation: f64,
    pub marginals: Vec<MarginalValue>,
    /// Largest |Im| among the six marginals.
    pub max_marginal_imag: f64,
    /// Largest distance of a marginal's real part outside [0, 1].
    pub max_marginal_range_violation: f64,
    /// Checks on ρ rebuilt from p(1,1,1) and p(−1,1,1).
    pub reconstruction: ValidationReport,
    /// max |p − p_from_density(ρ)| over all eight entries.
    pub redundancy_mismatch: f64,
    pub passed: bool,
}

impl AdmissibilityReport {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.total_deviation <= self.tol) {
            out.push(format!("total weight off by {:e}", self.total_deviation));
        }
        if !(self.max_marginal_imag <= self.tol) {
            out.push(format!("complex marginal (|Im| up to {:e})", self.max_marginal_imag));
        }
        if !(self.max_marginal_range_violation <= self.tol) {
            out.push(format!("marginal outside [0,1] by {:e}", self.max_marginal_range_violation));
        }
        for v in self.reconstruction.violations() {
            out.push(format!("reconstructed density: {v}"));
        }
        if !(self.redundancy_mismatch <= self.tol) {
            out.push(format!("redundant entries mismatch by {:e}", self.redundancy_mismatch));
        }
        out
    }
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "admissible")
        } else {
            write!(f, "{}", self.violations().join("; "))
        }
    }
}

pub fn check_admissibility(t: &QuasiProbTable, tol: f64) -> AdmissibilityReport {
    let total = t.total();
    let total_deviation = (total - Complex64::new(1.0, 0.0)).norm();
    let marginals = marginals(t);
    let max_marginal_imag = marginals.iter().map(|m| m.im.abs()).fold(0.0, f64::max);
    let max_marginal_range_violation = marginals
        .iter()
        .map(|m| (-m.re).max(m.re - 1.0).max(0.0))
        .fold(0.0, f64::max);
    let m = reconstruct_matrix(t);
    let reconstruction = validate_density(&m, tol);
    // Recompute all eight entries from the rebuilt matrix, valid or not.
    let redundancy_mismatch = t.max_abs_diff(&p_from_density(&DensityMatrix::from_matrix_unchecked(m)));
    let passed = total_deviation <= tol
        && max_marginal_imag <= tol
        && max_marginal_range_violation <= tol
        && reconstruction.passed
        && redundancy_mismatch <= tol;
    AdmissibilityReport {
        tol,
        total: total.into(),
        total_deviation,
        marginals,
        max_marginal_imag,
        max_marginal_range_violation,
        reconstruction,
        redundancy_mismatch,
        passed,
    }
}
