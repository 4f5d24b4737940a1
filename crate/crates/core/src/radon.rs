//! The affine map from three axis measurements to the quasiprobability
//! table, the spin-1/2 analogue of reconstructing a Wigner function from
//! its tomographic marginals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quasiprob::{p_from_density, QuasiProbTable};
use crate::spin::{DensityMatrix, DEFAULT_TOL};
use crate::tomography::AxisTriple;

/// The eight affine formulas, applied to any triple without physicality
/// checks. Entries always sum to 1: the constant terms cancel.
pub fn p_from_w_unchecked(t: &AxisTriple) -> QuasiProbTable {
    let (wx, wy, wz) = (t.wx_plus, t.wy_plus, t.wz_plus);
    let wz_minus = 1.0 - wz;
    let i = Complex64::i();
    let q_plus = Complex64::new(0.25, 0.25);
    let q_minus = Complex64::new(0.25, -0.25);
    let quarter = Complex64::new(0.25, 0.0);
    let i_quarter = Complex64::new(0.0, 0.25);

    // Bracketed combinations shared between pairs of vertices.
    let up_same = wx - i * wy + wz; //  w⁺x − i w⁺y + w⁺z
    let up_flip = -wx + i * wy + wz; // −w⁺x + i w⁺y + w⁺z
    let down_same = wx + i * wy + wz_minus; //  w⁺x + i w⁺y + w⁻z
    let down_flip = -wx - i * wy + wz_minus; // −w⁺x − i w⁺y + w⁻z

    QuasiProbTable::from_entries([
        q_plus * up_same - quarter,       // (1,1,1)
        q_minus * up_flip - i_quarter,    // (-1,1,1)
        q_minus * up_same + i_quarter,    // (1,-1,1)
        q_plus * up_flip + quarter,       // (-1,-1,1)
        q_minus * down_same - quarter,    // (1,1,-1)
        q_plus * down_flip + i_quarter,   // (-1,1,-1)
        q_plus * down_same - i_quarter,   // (1,-1,-1)
        q_minus * down_flip + quarter,    // (-1,-1,-1)
    ])
}

/// p(c,b,a) from w⁺_x, w⁺_y, w⁺_z, rejecting nonphysical triples.
pub fn p_from_w(t: &AxisTriple) -> Result<QuasiProbTable> {
    t.check_physical(DEFAULT_TOL)?;
    Ok(p_from_w_unchecked(t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub triple: AxisTriple,
    /// |p_from_w − p_from_density| per entry, in table order.
    pub deltas: [f64; 8],
    pub max_abs_delta: f64,
}

impl ConsistencyReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_abs_delta <= tol
    }
}

/// Measures `rho` along x, y, z, maps the triple through [`p_from_w`] and
/// compares with the closed-form table of `rho`.
pub fn verify_radon_consistency(rho: &DensityMatrix) -> ConsistencyReport {
    let triple = AxisTriple::from_density(rho);
    let via_w = p_from_w_unchecked(&triple);
    compare(triple, &via_w, &p_from_density(rho))
}

/// Compares a table against the table implied by a measured triple.
pub fn compare_table_with_triple(t: &QuasiProbTable, triple: &AxisTriple) -> ConsistencyReport {
    compare(*triple, &p_from_w_unchecked(triple), t)
}

fn compare(triple: AxisTriple, a: &QuasiProbTable, b: &QuasiProbTable) -> ConsistencyReport {
    let mut deltas = [0.0; 8];
    for (d, (x, y)) in deltas.iter_mut().zip(a.entries().iter().zip(b.entries().iter())) {
        *d = (x - y).norm();
    }
    let max_abs_delta = deltas.iter().copied().fold(0.0, f64::max);
    ConsistencyReport { triple, deltas, max_abs_delta }
}
