//! Command-line state specifications.
//!
//! Accepted forms: a named state (`up_z`, `up_x`, `up_y`, `unpolarized`),
//! `bloch=bx,by,bz`, `rho=re00,im00,re01,im01,re10,im10,re11,im11` and
//! `w_axes=wx,wy,wz`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::spin::{density_from_bloch, BlochVector, DensityMatrix, Matrix2};
use crate::tomography::{density_from_w_axes_with_tol, AxisTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    UpZ,
    UpX,
    UpY,
    Unpolarized,
}

impl NamedState {
    pub const ALL: [NamedState; 4] = [NamedState::UpZ, NamedState::UpX, NamedState::UpY, NamedState::Unpolarized];

    pub fn name(self) -> &'static str {
        match self {
            NamedState::UpZ => "up_z",
            NamedState::UpX => "up_x",
            NamedState::UpY => "up_y",
            NamedState::Unpolarized => "unpolarized",
        }
    }

    pub fn density(self) -> DensityMatrix {
        match self {
            NamedState::UpZ => DensityMatrix::up_z(),
            NamedState::UpX => DensityMatrix::up_x(),
            NamedState::UpY => DensityMatrix::up_y(),
            NamedState::Unpolarized => DensityMatrix::unpolarized(),
        }
    }
}

/// Exactly one way of describing a spin-1/2 state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    Named(NamedState),
    Bloch([f64; 3]),
    /// Row-major (re, im) pairs.
    Rho([f64; 8]),
    WAxes([f64; 3]),
}

impl StateSpec {
    /// The density matrix, after the physicality check that fits the form.
    pub fn density(&self, tol: f64) -> Result<DensityMatrix> {
        match self {
            StateSpec::Named(n) => Ok(n.density()),
            StateSpec::Bloch([x, y, z]) => {
                let b = BlochVector::new(*x, *y, *z);
                b.check_physical(tol)?;
                density_from_bloch(&b)
            }
            StateSpec::Rho(v) => {
                let c = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
                DensityMatrix::new(Matrix2::from_rows(c(0), c(1), c(2), c(3)), tol)
            }
            StateSpec::WAxes([x, y, z]) => density_from_w_axes_with_tol(&AxisTriple::new(*x, *y, *z), tol),
        }
    }
}

fn parse_reals<const N: usize>(kind: &str, body: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = body.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(SpinError::InvalidArgument(format!("{kind} needs {N} comma-separated numbers, got {}", parts.len())));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        let x: f64 = p.parse().map_err(|_| SpinError::InvalidArgument(format!("{kind}: not a number: {p:?}")))?;
        if !x.is_finite() {
            return Err(SpinError::InvalidArgument(format!("{kind}: non-finite value {p:?}")));
        }
        *slot = x;
    }
    Ok(out)
}

impl FromStr for StateSpec {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((kind, body)) = s.split_once('=') {
            return match kind.trim() {
                "bloch" => Ok(StateSpec::Bloch(parse_reals("bloch", body)?)),
                "rho" => Ok(StateSpec::Rho(parse_reals("rho", body)?)),
                "w_axes" => Ok(StateSpec::WAxes(parse_reals("w_axes", body)?)),
                other => Err(SpinError::InvalidArgument(format!("unknown state form {other:?}"))),
            };
        }
        NamedState::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .map(StateSpec::Named)
            .ok_or_else(|| SpinError::InvalidArgument(format!("unknown named state {s:?}")))
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        match self {
            StateSpec::Named(n) => write!(f, "{}", n.name()),
            StateSpec::Bloch(v) => write!(f, "bloch={}", join(v)),
            StateSpec::Rho(v) => write!(f, "rho={}", join(v)),
            StateSpec::WAxes(v) => write!(f, "w_axes={}", join(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::DEFAULT_TOL;

    #[test]
    fn parses_every_form() {
        assert_eq!("up_y".parse::<StateSpec>().unwrap(), StateSpec::Named(NamedState::UpY));
        assert_eq!("bloch=0.1, 0,-0.2".parse::<StateSpec>().unwrap(), StateSpec::Bloch([0.1, 0.0, -0.2]));
        assert!(matches!("rho=1,0,0,0,0,0,0,0".parse::<StateSpec>().unwrap(), StateSpec::Rho(_)));
        assert!(matches!("w_axes=0.5,0.5,1".parse::<StateSpec>().unwrap(), StateSpec::WAxes(_)));
        for bad in ["down_z", "bloch=1,2", "rho=1,0", "w_axes=a,b,c", "spin=1,2,3", "bloch=nan,0,0"] {
            assert!(bad.parse::<StateSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["up_x", "bloch=0.1,0,-0.2", "w_axes=0.5,0.75,0.5", "rho=0.5,0,0.5,0,0.5,0,0.5,0"] {
            assert_eq!(s.parse::<StateSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn forms_agree_on_up_x() {
        let expected = DensityMatrix::up_x();
        for s in ["up_x", "bloch=0.5,0,0", "rho=0.5,0,0.5,0,0.5,0,0.5,0", "w_axes=1,0.5,0.5"] {
            let rho = s.parse::<StateSpec>().unwrap().density(DEFAULT_TOL).unwrap();
            assert!(rho.max_abs_diff(&expected) <= 1e-15, "{s}");
        }
    }

    #[test]
    fn physicality_is_checked() {
        for s in ["bloch=0.6,0,0", "rho=1,0,0,0,0,0,1,0", "w_axes=1,1,0.5"] {
            assert!(s.parse::<StateSpec>().unwrap().density(DEFAULT_TOL).is_err(), "{s}");
        }
    }
}
