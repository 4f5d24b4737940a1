//! Wigner 3j symbols and rotation matrices for arbitrary spin.
//!
//! Rotation matrices follow the spin-1/2 matrix of [`crate::tomography::rotation_matrix`]:
//! D_{m'm}(φ,θ,ψ) = e^{i m' ψ} d_{m'm}(θ) e^{i m φ} with d_{½,−½}(θ) = +sin(θ/2).
//! This is the adjoint of the common active-rotation convention
//! e^{−iφJz} e^{−iθJy} e^{−iψJz}.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::tomography::EulerAngles;

/// An integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInteger(i32);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);
    pub const HALF: HalfInteger = HalfInteger(1);
    pub const ONE: HalfInteger = HalfInteger(2);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInteger(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInteger(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Number of projections 2j + 1 when `self` is a spin.
    pub fn multiplicity(self) -> usize {
        (self.0 + 1).max(0) as usize
    }

    /// m = j, j − 1, ..., −j.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInteger(j - 2 * k)).take_while(move |_| j >= 0)
    }
}

impl std::ops::Neg for HalfInteger {
    type Output = HalfInteger;

    fn neg(self) -> HalfInteger {
        HalfInteger(-self.0)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInteger {
    type Err = SpinError;

    /// Accepts "3", "-1", "1/2", "-3/2" and decimals such as "1.5".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || SpinError::InvalidArgument(format!("not an integer or half-integer: {s:?}"));
        if let Some(num) = s.strip_suffix("/2") {
            let n: i32 = num.trim().parse().map_err(|_| bad())?;
            return if n % 2 != 0 { Ok(HalfInteger(n)) } else { Err(bad()) };
        }
        if let Ok(n) = s.parse::<i32>() {
            return n.checked_mul(2).map(HalfInteger).ok_or_else(bad);
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if twice.is_finite() && twice == twice.round() && twice.abs() < f64::from(i32::MAX) {
            Ok(HalfInteger(twice as i32))
        } else {
            Err(bad())
        }
    }
}

fn factorial(n: i64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Wigner 3j symbol by the Racah sum in exact rational arithmetic.
/// Arguments violating a selection rule give 0.
pub fn wigner_3j(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> f64 {
    let (tj1, tj2, tj3) = (i64::from(j1.0), i64::from(j2.0), i64::from(j3.0));
    let (tm1, tm2, tm3) = (i64::from(m1.0), i64::from(m2.0), i64::from(m3.0));

    for (tj, tm) in [(tj1, tm1), (tj2, tm2), (tj3, tm3)] {
        if tj < 0 || tm.abs() > tj || (tj - tm) % 2 != 0 {
            return 0.0;
        }
    }
    if tm1 + tm2 + tm3 != 0 {
        return 0.0;
    }
    if tj3 < (tj1 - tj2).abs() || tj3 > tj1 + tj2 || (tj1 + tj2 + tj3) % 2 != 0 {
        return 0.0;
    }

    let half = |x: i64| x / 2;
    let a = half(tj1 + tj2 - tj3);
    let b = half(tj1 - tj2 + tj3);
    let c = half(-tj1 + tj2 + tj3);
    let big_j = half(tj1 + tj2 + tj3);

    // Triangle coefficient times the projection factorials.
    let mut numer = factorial(a) * factorial(b) * factorial(c);
    for (tj, tm) in [(tj1, tm1), (tj2, tm2), (tj3, tm3)] {
        numer *= factorial(half(tj + tm)) * factorial(half(tj - tm));
    }
    let prefactor = BigRational::new(numer, factorial(big_j + 1));

    let j3_minus_j2_plus_m1 = half(tj3 - tj2 + tm1);
    let j3_minus_j1_minus_m2 = half(tj3 - tj1 - tm2);
    let j1_minus_m1 = half(tj1 - tm1);
    let j2_plus_m2 = half(tj2 + tm2);
    let k_min = 0.max(-j3_minus_j2_plus_m1).max(-j3_minus_j1_minus_m2);
    let k_max = a.min(j1_minus_m1).min(j2_plus_m2);

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial(j3_minus_j2_plus_m1 + k)
            * factorial(j3_minus_j1_minus_m2 + k)
            * factorial(a - k)
            * factorial(j1_minus_m1 - k)
            * factorial(j2_plus_m2 - k);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return 0.0;
    }

    let magnitude_sqr = prefactor * &sum * &sum;
    let magnitude = magnitude_sqr.to_f64().unwrap_or(f64::NAN).sqrt();
    let phase_odd = half(tj1 - tj2 - tm3).rem_euclid(2) == 1;
    let negative = sum.is_negative() != phase_odd;
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

fn check_projection(j: HalfInteger, m: HalfInteger) -> Result<()> {
    if j.0 < 0 {
        return Err(SpinError::IndexOutOfRange(format!("negative spin j = {j}")));
    }
    if m.0.abs() > j.0 || (j.0 - m.0) % 2 != 0 {
        return Err(SpinError::IndexOutOfRange(format!("projection m = {m} is not valid for j = {j}")));
    }
    Ok(())
}

fn factorial_f64(n: i32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Textbook small-d element d^j_{m'm}(β) (d^{1/2}_{½,−½} = −sin(β/2)).
fn small_d_textbook(tj: i32, tmp: i32, tm: i32, beta: f64) -> f64 {
    let (s, c) = (0.5 * beta).sin_cos();
    let jpmp = (tj + tmp) / 2;
    let jmmp = (tj - tmp) / 2;
    let jpm = (tj + tm) / 2;
    let jmm = (tj - tm) / 2;
    let mp_minus_m = (tmp - tm) / 2;
    let norm = (factorial_f64(jpmp) * factorial_f64(jmmp) * factorial_f64(jpm) * factorial_f64(jmm)).sqrt();
    let k_min = 0.max(-mp_minus_m);
    let k_max = jpm.min(jmmp);
    let mut total = 0.0;
    for k in k_min..=k_max {
        let denom = factorial_f64(jpm - k) * factorial_f64(k) * factorial_f64(jmmp - k) * factorial_f64(k + mp_minus_m);
        let sign = if (k + mp_minus_m).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let cos_pow = tj - 2 * k - mp_minus_m;
        let sin_pow = 2 * k + mp_minus_m;
        total += sign * norm / denom * c.powi(cos_pow) * s.powi(sin_pow);
    }
    total
}

/// Small-d element in this crate's convention: d_{m'm}(θ) equals the
/// textbook d_{m m'}(θ), so that d^{1/2} = [[cos, sin], [−sin, cos]](θ/2).
pub fn wigner_d(j: HalfInteger, mp: HalfInteger, m: HalfInteger, theta: f64) -> Result<f64> {
    check_projection(j, mp)?;
    check_projection(j, m)?;
    Ok(small_d_textbook(j.0, m.0, mp.0, theta))
}

/// D^j_{m'm}(φ,θ,ψ) = e^{i m' ψ} d_{m'm}(θ) e^{i m φ}.
#[allow(non_snake_case)]
pub fn wigner_D(j: HalfInteger, mp: HalfInteger, m: HalfInteger, u: &EulerAngles) -> Result<Complex64> {
    let d = wigner_d(j, mp, m, u.theta)?;
    Ok(Complex64::from_polar(d, mp.value() * u.psi + m.value() * u.phi))
}

/// Full (2j+1)×(2j+1) rotation matrix, rows m' and columns m ordered j, ..., −j.
pub fn rotation_matrix_j(j: HalfInteger, u: &EulerAngles) -> Result<DMatrix<Complex64>> {
    if j.0 < 0 {
        return Err(SpinError::IndexOutOfRange(format!("negative spin j = {j}")));
    }
    let ms: Vec<HalfInteger> = j.projections().collect();
    let n = ms.len();
    let mut out = DMatrix::zeros(n, n);
    for (r, &mp) in ms.iter().enumerate() {
        for (c, &m) in ms.iter().enumerate() {
            out[(r, c)] = wigner_D(j, mp, m, u)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn h(twice: i32) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    #[test]
    fn half_integer_parsing_and_display() {
        assert_eq!("1/2".parse::<HalfInteger>().unwrap(), HalfInteger::HALF);
        assert_eq!("-3/2".parse::<HalfInteger>().unwrap(), h(-3));
        assert_eq!("2".parse::<HalfInteger>().unwrap(), h(4));
        assert_eq!("1.5".parse::<HalfInteger>().unwrap(), h(3));
        assert!("2/2".parse::<HalfInteger>().is_err());
        assert!("0.3".parse::<HalfInteger>().is_err());
        assert_eq!(h(3).to_string(), "3/2");
        assert_eq!(h(-4).to_string(), "-2");
        let ms: Vec<i32> = h(3).projections().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![3, 1, -1, -3]);
        assert_eq!(h(-1).projections().count(), 0);
    }

    #[test]
    fn three_j_examples() {
        let v = wigner_3j(h(1), h(1), h(0), h(1), h(-1), h(0));
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let v = wigner_3j(h(2), h(2), h(0), h(0), h(0), h(0));
        assert!((v + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        // 2j3 odd with two spin-½ partners: no integer total.
        assert_eq!(wigner_3j(h(1), h(1), h(1), h(1), h(-1), h(0)), 0.0);
    }

    #[test]
    fn three_j_selection_rules() {
        assert_eq!(wigner_3j(h(2), h(2), h(2), h(2), h(0), h(0)), 0.0); // Σm ≠ 0
        assert_eq!(wigner_3j(h(2), h(2), h(6), h(0), h(0), h(0)), 0.0); // triangle
        assert_eq!(wigner_3j(h(2), h(2), h(2), h(4), h(-4), h(0)), 0.0); // |m| > j
        assert_eq!(wigner_3j(h(2), h(2), h(2), h(1), h(-1), h(0)), 0.0); // parity of j − m
        assert_eq!(wigner_3j(h(2), h(2), h(2), h(0), h(0), h(0)), 0.0); // odd J with all m = 0
    }

    #[test]
    #[allow(clippy::excessive_precision, clippy::approx_constant)]
    fn three_j_reference_values() {
        // Exact values, evaluated independently with a computer-algebra system.
        let cases: [([i32; 6], f64); 9] = [
            ([1, 1, 0, 1, -1, 0], 7.07106781186547573e-01),
            ([2, 2, 0, 0, 0, 0], -5.77350269189625731e-01),
            ([2, 2, 2, 2, -2, 0], 4.08248290463863017e-01),
            ([3, 1, 2, 1, 1, -2], -2.88675134594812866e-01),
            ([3, 3, 2, 3, -1, -2], -3.16227766016837941e-01),
            ([2, 2, 4, 0, 0, 0], 3.65148371670110716e-01),
            ([4, 4, 4, 2, -4, 2], -2.92770021884559972e-01),
            ([3, 2, 1, -1, 2, -1], -2.88675134594812866e-01),
            ([4, 2, 2, 2, 0, -2], -3.16227766016837941e-01),
        ];
        for (args, expected) in cases {
            let [a, b, c, d, e, f] = args.map(h);
            let v = wigner_3j(a, b, c, d, e, f);
            assert!((v - expected).abs() < 1e-15, "{args:?}: {v} vs {expected}");
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn three_j_large_arguments_are_finite() {
        // j = 10 with j3 = 20 exceeds 128-bit factorials; big integers keep it exact.
        let cases: [([i32; 6], f64); 3] = [
            ([20, 20, 40, 20, -20, 0], 4.20639598704362275e-07),
            ([20, 20, 40, 6, -6, 0], 3.26079816915621629e-02),
            ([20, 20, 14, 6, -2, -4], -6.69312777428356237e-02),
        ];
        for (args, expected) in cases {
            let [a, b, c, d, e, f] = args.map(h);
            let v = wigner_3j(a, b, c, d, e, f);
            assert!((v - expected).abs() <= 1e-15 * expected.abs().max(1e-3), "{args:?}: {v}");
        }
    }

    #[test]
    fn small_d_examples() {
        for &theta in &[0.0, 0.4, 1.7, PI] {
            let d = wigner_d(h(1), h(1), h(1), theta).unwrap();
            assert!((d - (0.5 * theta).cos()).abs() < 1e-15);
            let d = wigner_d(h(1), h(1), h(-1), theta).unwrap();
            assert!((d - (0.5 * theta).sin()).abs() < 1e-15);
            let d = wigner_d(h(2), h(0), h(0), theta).unwrap();
            assert!((d - theta.cos()).abs() < 1e-15);
        }
        for tj in 0..=6 {
            for tmp in (-tj..=tj).step_by(2) {
                for tm in (-tj..=tj).step_by(2) {
                    let d = wigner_d(h(tj), h(tmp), h(tm), 0.0).unwrap();
                    let expected = if tmp == tm { 1.0 } else { 0.0 };
                    assert_eq!(d, expected);
                }
            }
        }
    }

    #[test]
    fn out_of_range_projection_is_an_error() {
        assert!(wigner_d(h(1), h(3), h(1), 0.2).is_err());
        assert!(wigner_d(h(2), h(1), h(0), 0.2).is_err());
        assert!(wigner_D(h(-2), h(0), h(0), &EulerAngles::identity()).is_err());
    }

    #[test]
    fn big_d_j1_zero_zero_is_cos_theta() {
        for &(phi, theta, psi) in &[(0.2, 0.9, 4.0), (5.0, 2.5, 1.0)] {
            let v = wigner_D(h(2), h(0), h(0), &EulerAngles::new(phi, theta, psi)).unwrap();
            assert!((v - Complex64::new(theta.cos(), 0.0)).norm() < 1e-15);
        }
    }
}
