//! Product quadrature for ∫dΩ = (1/8π²) ∫dφ ∫sinθ dθ ∫dψ over the rotation group.
//!
//! θ uses Gauss-Legendre nodes in x = cos θ; φ and ψ use uniform nodes,
//! which integrate trigonometric polynomials of degree < n exactly.

use std::f64::consts::TAU;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use super::wigner::HalfInteger;
use crate::error::{Result, SpinError};
use crate::tomography::EulerAngles;

pub const DEFAULT_OVERSAMPLE: usize = 2;

/// Gauss-Legendre nodes mapped to polar angles, with weights summing to 2.
/// Nodes are returned with θ ascending.
pub fn gauss_legendre_thetas(n: NonZeroUsize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(n);
    let mut out: Vec<(f64, f64)> = rule.as_node_weight_pairs().iter().map(|&(x, w)| (x.acos(), w)).collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `n` uniform nodes 2πk/n on the circle.
pub fn uniform_angles(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureNode {
    pub angles: EulerAngles,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    thetas: Vec<(f64, f64)>,
    phis: Vec<f64>,
    psis: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(n_theta: usize, n_phi: usize, n_psi: usize) -> Result<Self> {
        let n_theta = NonZeroUsize::new(n_theta)
            .ok_or_else(|| SpinError::InvalidArgument("quadrature needs at least one θ node".into()))?;
        if n_phi == 0 || n_psi == 0 {
            return Err(SpinError::InvalidArgument("quadrature needs at least one φ and ψ node".into()));
        }
        Ok(QuadratureGrid {
            thetas: gauss_legendre_thetas(n_theta),
            phis: uniform_angles(n_phi),
            psis: uniform_angles(n_psi),
        })
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    pub fn n_psi(&self) -> usize {
        self.psis.len()
    }

    /// (θ, Gauss-Legendre weight) pairs.
    pub fn thetas(&self) -> &[(f64, f64)] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn psis(&self) -> &[f64] {
        &self.psis
    }

    /// Same grid with every node count doubled.
    pub fn refined(&self) -> QuadratureGrid {
        QuadratureGrid::new(2 * self.n_theta(), 2 * self.n_phi(), 2 * self.n_psi())
            .expect("doubling a valid grid keeps it valid")
    }

    /// Combined weight of a node; the 1/8π² normalization is included.
    pub fn weight(&self, theta_weight: f64) -> f64 {
        theta_weight / (2.0 * self.phis.len() as f64 * self.psis.len() as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = QuadratureNode> + '_ {
        self.thetas.iter().flat_map(move |&(theta, wt)| {
            let weight = self.weight(wt);
            self.phis.iter().flat_map(move |&phi| {
                self.psis.iter().map(move |&psi| QuadratureNode {
                    angles: EulerAngles { phi, theta, psi },
                    weight,
                })
            })
        })
    }

    /// Nested sums (ψ innermost) keep rounding error near machine precision
    /// even on large grids.
    pub fn integrate(&self, mut f: impl FnMut(&EulerAngles) -> Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for &(theta, wt) in &self.thetas {
            let mut ring = Complex64::new(0.0, 0.0);
            for &phi in &self.phis {
                let line: Complex64 = self.psis.iter().map(|&psi| f(&EulerAngles { phi, theta, psi })).sum();
                ring += line / self.psis.len() as f64;
            }
            total += ring * (wt / (2.0 * self.phis.len() as f64));
        }
        total
    }
}

/// Grid exact for the reconstruction integrand at spin `j`:
/// n_φ = n_ψ = max(8, 4j + 2)·oversample and n_θ = max(8, 2j + 2)·oversample.
pub fn build_quadrature(j: HalfInteger, oversample: usize) -> Result<QuadratureGrid> {
    if oversample == 0 {
        return Err(SpinError::InvalidArgument("oversample must be at least 1".into()));
    }
    if j.twice() < 0 {
        return Err(SpinError::InvalidArgument(format!("negative spin j = {j}")));
    }
    let tj = j.twice() as usize;
    let n_angle = 8.max(2 * tj + 2) * oversample;
    let n_theta = 8.max(tj + 2) * oversample;
    QuadratureGrid::new(n_theta, n_angle, n_angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::general::wigner::wigner_D;

    #[test]
    fn spin_half_grid_sizes() {
        let g = build_quadrature(HalfInteger::HALF, 1).unwrap();
        assert_eq!((g.n_theta(), g.n_phi(), g.n_psi()), (8, 8, 8));
        let g = build_quadrature(HalfInteger::from_int(5), 2).unwrap();
        assert_eq!((g.n_theta(), g.n_phi(), g.n_psi()), (24, 44, 44));
        assert!(build_quadrature(HalfInteger::HALF, 0).is_err());
    }

    #[test]
    fn constant_integrates_to_one() {
        for twice in 0..=6 {
            let g = build_quadrature(HalfInteger::from_twice(twice), DEFAULT_OVERSAMPLE).unwrap();
            let total = g.integrate(|_| Complex64::new(1.0, 0.0));
            assert!((total.re - 1.0).abs() < 1e-14 && total.im == 0.0, "{total}");
        }
    }

    #[test]
    fn d_matrix_orthogonality_on_grid() {
        let g = build_quadrature(HalfInteger::ONE, DEFAULT_OVERSAMPLE).unwrap();
        let two = HalfInteger::from_int(2);
        let zero = HalfInteger::ZERO;
        let v = g.integrate(|u| {
            let d = wigner_D(two, zero, zero, u).unwrap();
            d * d.conj()
        });
        assert!((v.re - 0.2).abs() < 1e-12 && v.im.abs() < 1e-12);

        // Different rows are orthogonal.
        let one = HalfInteger::from_int(1);
        let v = g.integrate(|u| wigner_D(two, one, zero, u).unwrap() * wigner_D(two, zero, zero, u).unwrap().conj());
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn theta_nodes_sorted_and_weighted() {
        let nodes = gauss_legendre_thetas(NonZeroUsize::new(9).unwrap());
        assert!(nodes.windows(2).all(|w| w[0].0 < w[1].0));
        let total: f64 = nodes.iter().map(|n| n.1).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }
}
