//! Spin-1/2 primitives: 2×2 complex matrices, spinors, the Pauli algebra,
//! the fixed eigenket phase conventions and the density-matrix type.
//!
//! Matrices are written in the σ_z eigenbasis with index 0 ↔ |+z⟩ and
//! index 1 ↔ |−z⟩ everywhere in the crate.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};

pub type ComplexScalar = Complex64;

/// Default tolerance for physicality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

/// Serialized form of a complex number, `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// A Pauli eigenvalue, ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1` first, matching the order tables are listed in.
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {v}")))
    }
}

/// Label of one of the six eigenkets |±x⟩, |±y⟩, |±z⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AxisSign {
    pub axis: Axis,
    pub sign: Sign,
}

impl AxisSign {
    pub const fn new(axis: Axis, sign: Sign) -> Self {
        AxisSign { axis, sign }
    }
}

/// Two-component spinor (χ₊, χ₋) in the σ_z eigenbasis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spinor {
    pub up: Complex64,
    pub down: Complex64,
}

impl Spinor {
    pub const fn new(up: Complex64, down: Complex64) -> Self {
        Spinor { up, down }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// ⟨self|other⟩, antilinear in `self`.
    pub fn inner(&self, other: &Spinor) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    pub fn scale(&self, k: Complex64) -> Spinor {
        Spinor::new(self.up * k, self.down * k)
    }
}

/// General 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2 {
    pub entries: [[Complex64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Matrix2 { entries }
    }

    pub fn from_rows(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Matrix2::new([[a, b], [c, d]])
    }

    /// Convenience constructor for real matrices.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Matrix2::from_rows(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Matrix2::from_rows(ONE, ZERO, ZERO, ONE)
    }

    pub fn zero() -> Self {
        Matrix2::from_rows(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        Matrix2::from_rows(e[0][0].conj(), e[1][0].conj(), e[0][1].conj(), e[1][1].conj())
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let e = &self.entries;
        Matrix2::from_rows(e[0][0] * k, e[0][1] * k, e[1][0] * k, e[1][1] * k)
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let e = &self.entries;
        Spinor::new(e[0][0] * v.up + e[0][1] * v.down, e[1][0] * v.up + e[1][1] * v.down)
    }

    /// ⟨bra|M|ket⟩.
    pub fn sandwich(&self, bra: &Spinor, ket: &Spinor) -> Complex64 {
        bra.inner(&self.apply(ket))
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix2 {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r][c]
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;

    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, slot) in row.iter_mut().enumerate() {
                *slot = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Matrix2::new(out)
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;

    fn add(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        Matrix2::from_rows(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;

    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;

    fn neg(self) -> Matrix2 {
        self.scale(-ONE)
    }
}

/// The Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli_matrix(axis: Axis) -> Matrix2 {
    match axis {
        Axis::X => Matrix2::from_rows(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::from_rows(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::from_rows(ONE, ZERO, ZERO, -ONE),
    }
}

/// Eigenket of σ_axis with eigenvalue `sign`.
///
/// Phases are fixed: |±x⟩ = (|z⟩ ± |−z⟩)/√2 and |±y⟩ = (|z⟩ ± i|−z⟩)/√2.
/// Every p(c,b,a) value depends on this choice.
pub fn eigenket(label: AxisSign) -> Spinor {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = label.sign.as_f64();
    match label.axis {
        Axis::X => Spinor::new(Complex64::new(h, 0.0), Complex64::new(s * h, 0.0)),
        Axis::Y => Spinor::new(Complex64::new(h, 0.0), Complex64::new(0.0, s * h)),
        Axis::Z => match label.sign {
            Sign::Plus => Spinor::new(ONE, ZERO),
            Sign::Minus => Spinor::new(ZERO, ONE),
        },
    }
}

/// ⟨a|b⟩ for two eigenkets.
pub fn overlap(a: AxisSign, b: AxisSign) -> Complex64 {
    eigenket(a).inner(&eigenket(b))
}

/// ⟨cx·x | by·y⟩⟨by·y | az·z⟩⟨az2·z | cx·x⟩.
pub fn overlap_triple(cx: Sign, by: Sign, az: Sign, az2: Sign) -> Complex64 {
    let x = AxisSign::new(Axis::X, cx);
    let y = AxisSign::new(Axis::Y, by);
    overlap(x, y) * overlap(y, AxisSign::new(Axis::Z, az)) * overlap(AxisSign::new(Axis::Z, az2), x)
}

/// Bloch vector with the convention b = ½⟨σ⟩, so pure states sit at |b| = ½.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
}

impl BlochVector {
    pub const fn new(bx: f64, by: f64, bz: f64) -> Self {
        BlochVector { bx, by, bz }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.bx * self.bx + self.by * self.by + self.bz * self.bz
    }

    pub fn dot(&self, u: [f64; 3]) -> f64 {
        self.bx * u[0] + self.by * u[1] + self.bz * u[2]
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.bx - other.bx)
            .abs()
            .max((self.by - other.by).abs())
            .max((self.bz - other.bz).abs())
    }

    /// Checks |b| ≤ ½ + tol.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let norm = self.norm();
        if !norm.is_finite() || norm > 0.5 + tol {
            return Err(SpinError::NonphysicalBloch { norm });
        }
        Ok(())
    }
}

/// Outcome of checking a 2×2 matrix against the density-matrix axioms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// max of |Im ρ₊₊|, |Im ρ₋₋| and |ρ₋₊ − ρ₊₋*|.
    pub hermiticity_deviation: f64,
    /// |Tr ρ − 1|.
    pub trace_deviation: f64,
    /// Real diagonal entries (ρ₊₊, ρ₋₋) of the Hermitian part.
    pub diagonal: [f64; 2],
    /// Determinant of the Hermitian part.
    pub determinant: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.hermiticity_deviation <= self.tol) {
            out.push(format!("not Hermitian (deviation {:e})", self.hermiticity_deviation));
        }
        if !(self.trace_deviation <= self.tol) {
            out.push(format!("trace off by {:e}", self.trace_deviation));
        }
        if !(self.diagonal[0] >= -self.tol && self.diagonal[1] >= -self.tol && self.determinant >= -self.tol) {
            out.push(format!("negative eigenvalue {:e}", self.min_eigenvalue));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations().join("; "))
        }
    }
}

/// Reports hermiticity, trace and positivity of `m`.
///
/// Positivity uses the 2×2 criterion ρ₊₊ ≥ 0, ρ₋₋ ≥ 0, det ≥ 0 on the
/// Hermitian part; the eigenvalue is reported for diagnostics only.
pub fn validate_density(m: &Matrix2, tol: f64) -> ValidationReport {
    let e = &m.entries;
    let herm_dev = if m.is_finite() {
        e[0][0].im.abs().max(e[1][1].im.abs()).max((e[1][0] - e[0][1].conj()).norm())
    } else {
        f64::INFINITY
    };
    let trace_dev = (m.trace() - ONE).norm();
    let a = e[0][0].re;
    let d = e[1][1].re;
    let off = (e[0][1] + e[1][0].conj()) * 0.5;
    let det = a * d - off.norm_sqr();
    let half_gap = (((a - d) * 0.5).powi(2) + off.norm_sqr()).sqrt();
    let min_eig = 0.5 * (a + d) - half_gap;
    let passed = herm_dev <= tol && trace_dev <= tol && a >= -tol && d >= -tol && det >= -tol;
    ValidationReport {
        hermiticity_deviation: herm_dev,
        trace_deviation: trace_dev,
        diagonal: [a, d],
        determinant: det,
        min_eigenvalue: min_eig,
        tol,
        passed,
    }
}

/// Hermitian, unit-trace, positive-semidefinite 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    m: Matrix2,
}

impl DensityMatrix {
    /// Validates `m` at tolerance `tol`.
    pub fn new(m: Matrix2, tol: f64) -> Result<Self> {
        let report = validate_density(&m, tol);
        if report.passed {
            Ok(DensityMatrix { m })
        } else {
            Err(SpinError::InvalidDensity(report))
        }
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix2) -> Self {
        DensityMatrix { m }
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn pp(&self) -> Complex64 {
        self.m.entries[0][0]
    }

    pub fn pm(&self) -> Complex64 {
        self.m.entries[0][1]
    }

    pub fn mp(&self) -> Complex64 {
        self.m.entries[1][0]
    }

    pub fn mm(&self) -> Complex64 {
        self.m.entries[1][1]
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// ⟨v|ρ|v⟩.
    pub fn expectation(&self, v: &Spinor) -> Complex64 {
        self.m.sandwich(v, v)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.m.max_abs_diff(&other.m)
    }

    /// Spin up along z, [[1,0],[0,0]].
    pub fn up_z() -> Self {
        DensityMatrix::from_matrix_unchecked(Matrix2::real(1.0, 0.0, 0.0, 0.0))
    }

    /// Spin up along x, all entries ½.
    pub fn up_x() -> Self {
        DensityMatrix::from_matrix_unchecked(Matrix2::real(0.5, 0.5, 0.5, 0.5))
    }

    /// Spin up along y, [[½, −i/2],[i/2, ½]].
    pub fn up_y() -> Self {
        DensityMatrix::from_matrix_unchecked(Matrix2::from_rows(
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, -0.5),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.0),
        ))
    }

    /// The maximally mixed state ½·1.
    pub fn unpolarized() -> Self {
        DensityMatrix::from_matrix_unchecked(Matrix2::real(0.5, 0.0, 0.0, 0.5))
    }
}

/// ρ = ½·1 + b·σ.
pub fn density_from_bloch(b: &BlochVector) -> Result<DensityMatrix> {
    b.check_physical(DEFAULT_TOL)?;
    Ok(DensityMatrix::from_matrix_unchecked(Matrix2::from_rows(
        Complex64::new(0.5 + b.bz, 0.0),
        Complex64::new(b.bx, -b.by),
        Complex64::new(b.bx, b.by),
        Complex64::new(0.5 - b.bz, 0.0),
    )))
}

/// b = ½(Tr ρσ_x, Tr ρσ_y, Tr ρσ_z).
pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    let comp = |axis| 0.5 * (*rho.matrix() * pauli_matrix(axis)).trace().re;
    BlochVector::new(comp(Axis::X), comp(Axis::Y), comp(Axis::Z))
}

/// ρ = ½(1 + m_x σ_x + m_y σ_y + m_z σ_z) from the three spin mean values.
pub fn density_from_mean_values(mx: f64, my: f64, mz: f64) -> Result<DensityMatrix> {
    let norm = (mx * mx + my * my + mz * mz).sqrt();
    if !norm.is_finite() || norm > 1.0 + DEFAULT_TOL {
        return Err(SpinError::NonphysicalMeanValues { norm });
    }
    let m = (Matrix2::identity()
        + pauli_matrix(Axis::X).scale(mx.into())
        + pauli_matrix(Axis::Y).scale(my.into())
        + pauli_matrix(Axis::Z).scale(mz.into()))
    .scale(0.5.into());
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
