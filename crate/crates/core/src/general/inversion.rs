//! Spin-j density matrices from their tomograms.
//!
//! The inversion is
//!
//! ```text
//! ρ_{m'1 m'2} = Σ_{j3=0}^{2j} Σ_{m3} (2j3+1)² Σ_{m1} (−1)^{m1−m'2}
//!               ∫ w(m1, θ, φ) D^{j3}_{0 m3}(φ, θ, ψ) dΩ
//!               · (j j j3; m1 −m1 0) (j j j3; m'1 −m'2 m3)
//! ```
//!
//! with D in this crate's convention, where D^{j3}_{0 m3} does not depend on ψ.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::QuadratureGrid;
use super::wigner::{rotation_matrix_j, wigner_3j, wigner_d, HalfInteger};
use crate::error::{Result, SpinError};
use crate::spin::{DensityMatrix, DEFAULT_TOL};
use crate::tomography::EulerAngles;

/// Largest supported spin, as twice its value.
pub const MAX_TWICE_J: i32 = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReportJ {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub tol: f64,
    pub passed: bool,
}

impl std::fmt::Display for ValidationReportJ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity deviation {:e}, trace deviation {:e}, min eigenvalue {:e} (tol {:e})",
            self.hermiticity_deviation, self.trace_deviation, self.min_eigenvalue, self.tol
        )
    }
}

pub fn validate_density_j(m: &DMatrix<Complex64>, tol: f64) -> ValidationReportJ {
    let herm_dev = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let trace_dev = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eig = if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        let hermitian = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        hermitian.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        f64::NAN
    };
    let passed = herm_dev <= tol && trace_dev <= tol && min_eig >= -tol;
    ValidationReportJ {
        hermiticity_deviation: herm_dev,
        trace_deviation: trace_dev,
        min_eigenvalue: min_eig,
        tol,
        passed,
    }
}

/// Density matrix of a spin j in the basis m = j, j − 1, ..., −j.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrixJ {
    spin: HalfInteger,
    m: DMatrix<Complex64>,
}

impl DensityMatrixJ {
    pub fn new(spin: HalfInteger, m: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        check_spin(spin)?;
        let n = spin.multiplicity();
        if m.nrows() != n || m.ncols() != n {
            return Err(SpinError::InvalidArgument(format!(
                "spin {spin} needs a {n}×{n} matrix, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let report = validate_density_j(&m, tol);
        if !report.passed {
            return Err(SpinError::InvalidDensityJ(report));
        }
        Ok(DensityMatrixJ { spin, m })
    }

    pub fn maximally_mixed(spin: HalfInteger) -> Result<Self> {
        check_spin(spin)?;
        let n = spin.multiplicity();
        Ok(DensityMatrixJ {
            spin,
            m: DMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0),
        })
    }

    pub fn from_spin_half(rho: &DensityMatrix) -> Self {
        let e = &rho.matrix().entries;
        DensityMatrixJ {
            spin: HalfInteger::HALF,
            m: DMatrix::from_row_slice(2, 2, &[e[0][0], e[0][1], e[1][0], e[1][1]]),
        }
    }

    pub fn spin(&self) -> HalfInteger {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn max_abs_diff(&self, other: &DMatrix<Complex64>) -> f64 {
        max_abs_diff(&self.m, other)
    }
}

pub(crate) fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn check_spin(spin: HalfInteger) -> Result<()> {
    if spin.twice() < 0 || spin.twice() > MAX_TWICE_J {
        return Err(SpinError::InvalidArgument(format!("spin j = {spin} outside 0..=10")));
    }
    Ok(())
}

/// w(m, u) for every m = j, ..., −j: the diagonal of D(u) ρ D(u)†.
pub fn w_value_j(rho: &DensityMatrixJ, u: &EulerAngles) -> Vec<f64> {
    let d = rotation_matrix_j(rho.spin, u).expect("spin validated on construction");
    let rotated = &d * &rho.m * d.adjoint();
    rotated.diagonal().iter().map(|z| z.re).collect()
}

/// How the half-integer powers (−1)^{m1} and (−1)^{m'2} are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignConvention {
    /// (−1)^{m1 − m'2}, an integer power. Recovers ρ for every j.
    #[default]
    IntegerExponent,
    /// e^{iπ m1} e^{iπ m'2}. Equals the integer form times (−1)^{2j},
    /// so it yields −ρ for half-integer j.
    ComplexExponential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructOptions {
    /// Tolerance for the sample checks and for validating the result.
    pub tol: f64,
    pub sign_convention: SignConvention,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { tol: DEFAULT_TOL, sign_convention: SignConvention::IntegerExponent }
    }
}

/// Raw output of the inversion before it is accepted as a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub spin: HalfInteger,
    pub matrix: DMatrix<Complex64>,
    pub sign_convention: SignConvention,
    /// Factor relating the complex-exponential reading of the sign
    /// factors to the integer-exponent one: (−1)^{2j}.
    pub literal_phase_factor: f64,
    /// Largest |Σ_m w(m, θ, φ) − 1| seen on the grid.
    pub normalization_max_deviation: f64,
    pub grid_sizes: [usize; 3],
    pub validation: ValidationReportJ,
}

impl Reconstruction {
    pub fn into_density(self) -> Result<DensityMatrixJ> {
        if self.validation.passed {
            Ok(DensityMatrixJ { spin: self.spin, m: self.matrix })
        } else {
            Err(SpinError::InvalidDensityJ(self.validation))
        }
    }
}

/// Recovers ρ^{(j)} from w(m1, θ, φ) by quadrature on `grid`.
pub fn reconstruct_density_j<F>(w: F, j: HalfInteger, grid: &QuadratureGrid) -> Result<DensityMatrixJ>
where
    F: Fn(HalfInteger, f64, f64) -> f64,
{
    reconstruct_with(w, j, grid, &ReconstructOptions::default())?.into_density()
}

pub fn reconstruct_with<F>(w: F, j: HalfInteger, grid: &QuadratureGrid, opts: &ReconstructOptions) -> Result<Reconstruction>
where
    F: Fn(HalfInteger, f64, f64) -> f64,
{
    check_spin(j)?;
    let tol = opts.tol;
    let ms: Vec<HalfInteger> = j.projections().collect();
    let n = ms.len();
    let tj = j.twice();

    // Sample the tomogram on the (θ, φ) nodes and check it first.
    let mut samples = Vec::with_capacity(grid.n_theta() * grid.n_phi());
    let mut normalization_max_deviation = 0.0f64;
    for &(theta, _) in grid.thetas() {
        for &phi in grid.phis() {
            let values: Vec<f64> = ms.iter().map(|&m| w(m, theta, phi)).collect();
            if let Some(bad) = values.iter().find(|v| !(**v >= -tol && **v <= 1.0 + tol)) {
                return Err(SpinError::InconsistentSamples {
                    theta,
                    phi,
                    reason: format!("probability {bad} outside [0, 1]"),
                });
            }
            let dev = (values.iter().sum::<f64>() - 1.0).abs();
            if !(dev <= tol) {
                return Err(SpinError::InconsistentSamples {
                    theta,
                    phi,
                    reason: format!("probabilities sum to {}", values.iter().sum::<f64>()),
                });
            }
            normalization_max_deviation = normalization_max_deviation.max(dev);
            samples.push(values);
        }
    }

    // Sign attached to m1, and to m'2 at the end.
    let sign_of = |m: HalfInteger| -> Complex64 {
        match opts.sign_convention {
            SignConvention::IntegerExponent => {
                // (−1)^{j+m}; the product over m1 and m'2 is (−1)^{m1−m'2}.
                if ((tj + m.twice()) / 2).rem_euclid(2) == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(-1.0, 0.0)
                }
            }
            SignConvention::ComplexExponential => Complex64::from_polar(1.0, std::f64::consts::PI * m.value()),
        }
    };

    let j3_values: Vec<HalfInteger> = (0..=tj).map(HalfInteger::from_int).collect();

    // a[j3][m1] = (−1)^{m1} (j j j3; m1 −m1 0)
    let a: Vec<Vec<Complex64>> = j3_values
        .iter()
        .map(|&j3| ms.iter().map(|&m1| sign_of(m1) * wigner_3j(j, j, j3, m1, -m1, HalfInteger::ZERO)).collect())
        .collect();

    // integrals[j3][k] = ∫ Σ_m1 a[j3][m1] w(m1) D^{j3}_{0, m3} dΩ with m3 = j3 − k.
    let mut integrals: Vec<Vec<Complex64>> =
        j3_values.iter().map(|j3| vec![Complex64::new(0.0, 0.0); j3.multiplicity()]).collect();
    // D^{j3}_{0 m3}(φ, θ, ψ) = d^{j3}_{0 m3}(θ) e^{i m3 φ}: with m' = 0 the ψ
    // phase is 1, so the sum over the n_ψ uniform ψ nodes is exactly n_ψ.
    let psi_sum = grid.n_psi() as f64;
    let mut sample_iter = samples.iter();
    for &(theta, wt) in grid.thetas() {
        let weight = grid.weight(wt) * psi_sum;
        let d_row: Vec<Vec<f64>> = j3_values
            .iter()
            .map(|&j3| j3.projections().map(|m3| wigner_d(j3, HalfInteger::ZERO, m3, theta)).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        for &phi in grid.phis() {
            let values = sample_iter.next().expect("one sample per (θ, φ) node");
            for (k3, &j3) in j3_values.iter().enumerate() {
                let radial: Complex64 = a[k3].iter().zip(values.iter()).map(|(c, v)| c * v).sum();
                if radial == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (km, m3) in j3.projections().enumerate() {
                    let d = Complex64::from_polar(d_row[k3][km], m3.value() * phi);
                    integrals[k3][km] += radial * d * weight;
                }
            }
        }
    }

    let mut matrix = DMatrix::zeros(n, n);
    for (r, &m1p) in ms.iter().enumerate() {
        for (c, &m2p) in ms.iter().enumerate() {
            let m3 = HalfInteger::from_twice(m2p.twice() - m1p.twice());
            let mut acc = Complex64::new(0.0, 0.0);
            for (k3, &j3) in j3_values.iter().enumerate() {
                if m3.twice().abs() > j3.twice() {
                    continue;
                }
                let km = ((j3.twice() - m3.twice()) / 2) as usize;
                let coupling = wigner_3j(j, j, j3, m1p, -m2p, m3);
                let mult = f64::from(j3.twice() + 1);
                acc += integrals[k3][km] * (mult * mult * coupling);
            }
            matrix[(r, c)] = sign_of(m2p) * acc;
        }
    }

    let validation = validate_density_j(&matrix, tol);
    Ok(Reconstruction {
        spin: j,
        matrix,
        sign_convention: opts.sign_convention,
        literal_phase_factor: if tj % 2 == 0 { 1.0 } else { -1.0 },
        normalization_max_deviation,
        grid_sizes: [grid.n_theta(), grid.n_phi(), grid.n_psi()],
        validation,
    })
}

/// Tomogram family of a known state, usable as the `w` argument of
/// [`reconstruct_density_j`].
pub fn tomogram_of(rho: &DensityMatrixJ) -> impl Fn(HalfInteger, f64, f64) -> f64 + '_ {
    move |m, theta, phi| {
        let values = w_value_j(rho, &EulerAngles { phi, theta, psi: 0.0 });
        let k = ((rho.spin.twice() - m.twice()) / 2) as usize;
        values[k]
    }
}
