//! Log-magnitude/phase representation for quantities far outside the
//! floating-point exponent range.

use std::ops::{Div, Mul};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// `exp(log_magnitude) * exp(i * phase)`, with phase in `(-pi, pi]`.
///
/// Zero is encoded by `log_magnitude == -inf` (phase 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex<T> {
    pub log_magnitude: T,
    pub phase: T,
}

fn wrap_phase<T: Real>(phase: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut p = phase % two_pi;
    if p <= -T::PI() {
        p += two_pi;
    } else if p > T::PI() {
        p -= two_pi;
    }
    p
}

impl<T: Real> ScaledComplex<T> {
    pub fn new(log_magnitude: T, phase: T) -> Self {
        if log_magnitude == T::neg_infinity() {
            return Self::zero();
        }
        Self {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    pub fn zero() -> Self {
        Self {
            log_magnitude: T::neg_infinity(),
            phase: T::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            log_magnitude: T::zero(),
            phase: T::zero(),
        }
    }

    pub fn from_complex(z: Complex<T>) -> Self {
        if z.re == T::zero() && z.im == T::zero() {
            return Self::zero();
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == T::neg_infinity()
    }

    /// Back to a plain complex number; may overflow or underflow.
    pub fn to_complex(&self) -> Complex<T> {
        if self.is_zero() {
            return Complex::new(T::zero(), T::zero());
        }
        Complex::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_magnitude, -self.phase)
    }

    pub fn powi(&self, k: i32) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::one() } else { Self::zero() };
        }
        let kk = T::from_i32(k).unwrap();
        Self::new(self.log_magnitude * kk, self.phase * kk)
    }

    /// `|z|^2` as a log-magnitude.
    pub fn log_norm_sqr(&self) -> T {
        self.log_magnitude + self.log_magnitude
    }
}

impl<T: Real> Mul for ScaledComplex<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_magnitude + rhs.log_magnitude, self.phase + rhs.phase)
    }
}

impl<T: Real> Div for ScaledComplex<T> {
    type Output = Self;

    /// Division by zero yields `log_magnitude = +inf`.
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::new(self.log_magnitude - rhs.log_magnitude, self.phase - rhs.phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_is_absorbing() {
        let z = ScaledComplex::<f64>::zero();
        let a = ScaledComplex::from_complex(Complex::new(3.0, -4.0));
        assert!((z * a).is_zero());
        assert!((z / a).is_zero());
        assert_eq!(z.to_complex(), Complex::new(0.0, 0.0));
    }

    #[test]
    fn represents_values_beyond_f64_range() {
        let big = ScaledComplex::<f64>::new(1000.0, 0.5);
        let sq = big * big;
        assert_eq!(sq.log_magnitude, 2000.0);
        assert!((sq.phase - 1.0).abs() < 1e-15);
        let back = sq / big / big;
        assert!((back.log_magnitude).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn product_matches_complex_product(
            ar in -10.0..10.0f64, ai in -10.0..10.0f64,
            br in -10.0..10.0f64, bi in -10.0..10.0f64,
        ) {
            let a = Complex::new(ar, ai);
            let b = Complex::new(br, bi);
            prop_assume!(a.norm() > 1e-6 && b.norm() > 1e-6);
            let p = (ScaledComplex::from_complex(a) * ScaledComplex::from_complex(b)).to_complex();
            prop_assert!((p - a * b).norm() <= 1e-12 * (a * b).norm());
            let s = ScaledComplex::from_complex(a);
            prop_assert!(s.phase > -std::f64::consts::PI && s.phase <= std::f64::consts::PI);
        }
    }
}
