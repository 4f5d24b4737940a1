//! Spin-1/2 states in three representations: the density matrix, the
//! complex quasiprobability table p(c,b,a) on the vertices of the cube, and
//! the tomographic probability w(±½, u) of spin measurements along rotated
//! axes. The crate implements every map between them, including the affine
//! map that reads p directly off three axis measurements, and the
//! integral inversion of w for arbitrary spin j.


// `!(x <= tol)` is deliberate throughout: a NaN deviation must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod cli;
pub mod error;
pub mod general;
pub mod quasiprob;
pub mod radon;
pub mod spin;
pub mod tomography;

pub use error::{Result, SpinError};
pub use quasiprob::{
    check_admissibility, density_from_p, marginal, p_from_density, p_oracle, AdmissibilityReport, QuasiProbTable,
    VertexIndex,
};
pub use radon::{p_from_w, verify_radon_consistency, ConsistencyReport};
pub use spin::{
    bloch_from_density, density_from_bloch, density_from_mean_values, eigenket, overlap, overlap_triple,
    pauli_matrix, validate_density, Axis, AxisSign, BlochVector, ComplexScalar, DensityMatrix, Matrix2, Sign,
    Spinor, ValidationReport, DEFAULT_TOL,
};
pub use tomography::{
    density_from_w_axes, mean_from_w, rotate_density, rotation_matrix, w_from_bloch, w_value, AxisTriple,
    Direction, EulerAngles, Tomogram,
};
