//! Arbitrary spin j: 3j symbols, rotation matrices, rotation-group
//! quadrature and the integral inversion of tomograms.

pub mod inversion;
pub mod quadrature;
pub mod wigner;

pub use inversion::{
    reconstruct_density_j, reconstruct_with, tomogram_of, validate_density_j, w_value_j, DensityMatrixJ,
    ReconstructOptions, Reconstruction, SignConvention, ValidationReportJ,
};
pub use quadrature::{build_quadrature, QuadratureGrid, DEFAULT_OVERSAMPLE};
pub use wigner::{rotation_matrix_j, wigner_3j, wigner_D, wigner_d, HalfInteger};
