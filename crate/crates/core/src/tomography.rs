//! Tomographic probabilities w(±½, u) of spin-1/2 states.
//!
//! A rotation u = (φ, θ, ψ) acts on the state through the 2×2 matrix
//! D(u); w(i, u) is the i-th diagonal element of D ρ D†, which depends only
//! on the rotated quantization axis (θ, φ).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::spin::{validate_density, Axis, BlochVector, DensityMatrix, Matrix2, DEFAULT_TOL};

/// Reduces (θ, φ) to θ ∈ [0, π], φ ∈ [0, 2π). A θ outside [0, π] is
/// reflected and φ shifted by π, which keeps the unit vector unchanged.
fn normalize_polar(theta: f64, phi: f64) -> (f64, f64, bool) {
    let mut t = theta.rem_euclid(TAU);
    let mut p = phi;
    let reflected = t > PI;
    if reflected {
        t = TAU - t;
        p += PI;
    }
    (t, wrap_angle(p), reflected)
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Euler angles u = (φ, θ, ψ), kept in 0 ≤ φ, ψ < 2π, 0 ≤ θ ≤ π.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    /// Normalizes the angles into their canonical ranges.
    ///
    /// Reflecting θ maps (φ, θ, ψ) to (φ + π, 2π − θ, ψ − π), the same
    /// rotation up to the overall spinor sign.
    pub fn new(phi: f64, theta: f64, psi: f64) -> Self {
        let (theta, phi, reflected) = normalize_polar(theta, phi);
        let psi = if reflected { wrap_angle(psi - PI) } else { wrap_angle(psi) };
        EulerAngles { phi, theta, psi }
    }

    pub fn identity() -> Self {
        EulerAngles { phi: 0.0, theta: 0.0, psi: 0.0 }
    }

    pub fn direction(&self) -> Direction {
        Direction { theta: self.theta, phi: self.phi }
    }
}

/// Quantization axis given by polar angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (theta, phi, _) = normalize_polar(theta, phi);
        Direction { theta, phi }
    }

    /// The measurement direction of a Cartesian axis: x = (π/2, 0),
    /// y = (π/2, π/2), z = (0, 0).
    pub fn axis(axis: Axis) -> Self {
        match axis {
            Axis::X => Direction { theta: FRAC_PI_2, phi: 0.0 },
            Axis::Y => Direction { theta: FRAC_PI_2, phi: FRAC_PI_2 },
            Axis::Z => Direction { theta: 0.0, phi: 0.0 },
        }
    }

    /// (sin θ cos φ, sin θ sin φ, cos θ).
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Rotation used to measure along this direction, ψ = 0.
    pub fn euler(&self) -> EulerAngles {
        EulerAngles { phi: self.phi, theta: self.theta, psi: 0.0 }
    }
}

impl From<Direction> for EulerAngles {
    fn from(d: Direction) -> Self {
        d.euler()
    }
}

/// The pair (w(+½, u), w(−½, u)) for one direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tomogram {
    w_plus: f64,
    w_minus: f64,
    direction: Direction,
}

impl Tomogram {
    /// Checks both values lie in [0, 1] and sum to 1, within `tol`.
    pub fn new(w_plus: f64, w_minus: f64, direction: Direction, tol: f64) -> Result<Self> {
        let in_range = |w: f64| w >= -tol && w <= 1.0 + tol;
        if !in_range(w_plus) || !in_range(w_minus) {
            return Err(SpinError::InvalidTomogram(format!(
                "probabilities ({w_plus}, {w_minus}) outside [0, 1]"
            )));
        }
        if !((w_plus + w_minus - 1.0).abs() <= tol) {
            return Err(SpinError::InvalidTomogram(format!(
                "probabilities sum to {}",
                w_plus + w_minus
            )));
        }
        Ok(Tomogram { w_plus, w_minus, direction })
    }

    pub fn w_plus(&self) -> f64 {
        self.w_plus
    }

    pub fn w_minus(&self) -> f64 {
        self.w_minus
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

/// D(u) = [[cos(θ/2) e^{i(φ+ψ)/2},  sin(θ/2) e^{−i(φ−ψ)/2}],
///         [−sin(θ/2) e^{i(φ−ψ)/2}, cos(θ/2) e^{−i(φ+ψ)/2}]].
pub fn rotation_matrix(u: &EulerAngles) -> Matrix2 {
    let (s, c) = (0.5 * u.theta).sin_cos();
    let sum = 0.5 * (u.phi + u.psi);
    let diff = 0.5 * (u.phi - u.psi);
    Matrix2::from_rows(
        Complex64::from_polar(c, sum),
        Complex64::from_polar(s, -diff),
        Complex64::from_polar(-s, diff),
        Complex64::from_polar(c, -sum),
    )
}

/// ρ(u) = D(u) ρ D(u)†.
pub fn rotate_density(rho: &DensityMatrix, u: &EulerAngles) -> DensityMatrix {
    let d = rotation_matrix(u);
    DensityMatrix::from_matrix_unchecked(d * *rho.matrix() * d.adjoint())
}

/// w(±½, u): diagonal of the rotated density matrix.
pub fn w_value(rho: &DensityMatrix, u: impl Into<EulerAngles>) -> Tomogram {
    let u = u.into();
    let r = rotate_density(rho, &u);
    Tomogram {
        w_plus: r.pp().re,
        w_minus: r.mm().re,
        direction: u.direction(),
    }
}

/// w(±½, u) = ½ ± b·u.
pub fn w_from_bloch(b: &BlochVector, d: &Direction) -> Result<Tomogram> {
    b.check_physical(DEFAULT_TOL)?;
    let proj = b.dot(d.unit_vector());
    Ok(Tomogram {
        w_plus: 0.5 + proj,
        w_minus: 0.5 - proj,
        direction: *d,
    })
}

/// ⟨σ_u⟩ = 2 w(+½, u) − 1.
pub fn mean_from_w(t: &Tomogram) -> f64 {
    2.0 * t.w_plus - 1.0
}

/// w(+½, ·) along x, y and z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisTriple {
    pub wx_plus: f64,
    pub wy_plus: f64,
    pub wz_plus: f64,
}

impl AxisTriple {
    pub const fn new(wx_plus: f64, wy_plus: f64, wz_plus: f64) -> Self {
        AxisTriple { wx_plus, wy_plus, wz_plus }
    }

    /// Measures `rho` along the three Cartesian directions.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let w = |axis| w_value(rho, Direction::axis(axis)).w_plus;
        AxisTriple::new(w(Axis::X), w(Axis::Y), w(Axis::Z))
    }

    /// (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩).
    pub fn mean_values(&self) -> [f64; 3] {
        [2.0 * self.wx_plus - 1.0, 2.0 * self.wy_plus - 1.0, 2.0 * self.wz_plus - 1.0]
    }

    /// Checks (2w_x − 1)² + (2w_y − 1)² + (2w_z − 1)² ≤ 1 + tol.
    pub fn check_physical(&self, tol: f64) -> Result<()> {
        let m = self.mean_values();
        if m.iter().any(|v| !v.is_finite()) {
            return Err(SpinError::NonphysicalTriple { reason: "non-finite probability".into(), report: None });
        }
        let norm_sqr: f64 = m.iter().map(|v| v * v).sum();
        if norm_sqr > 1.0 + tol {
            let report = validate_density(&self.raw_matrix(), tol);
            return Err(SpinError::NonphysicalTriple {
                reason: format!("mean-value vector has squared length {norm_sqr}"),
                report: Some(report),
            });
        }
        Ok(())
    }

    fn raw_matrix(&self) -> Matrix2 {
        let re = self.wx_plus - 0.5;
        let im = self.wy_plus - 0.5;
        Matrix2::from_rows(
            Complex64::new(self.wz_plus, 0.0),
            Complex64::new(re, -im),
            Complex64::new(re, im),
            Complex64::new(1.0 - self.wz_plus, 0.0),
        )
    }
}

/// ρ = [[w⁺_z, (w⁺_x − ½) − i(w⁺_y − ½)], [(w⁺_x − ½) + i(w⁺_y − ½), w⁻_z]].
pub fn density_from_w_axes(t: &AxisTriple) -> Result<DensityMatrix> {
    density_from_w_axes_with_tol(t, DEFAULT_TOL)
}

pub fn density_from_w_axes_with_tol(t: &AxisTriple, tol: f64) -> Result<DensityMatrix> {
    t.check_physical(tol)?;
    let m = t.raw_matrix();
    let report = validate_density(&m, tol);
    if !report.passed {
        return Err(SpinError::NonphysicalTriple { reason: report.to_string(), report: Some(report) });
    }
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
