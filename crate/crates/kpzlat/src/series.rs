//! Truncated formal power series with exact coefficient arithmetic.
//!
//! All operations truncate to the order of the left operand. Coefficients are
//! generic; `f64` for long expansions and `BigRational` for exact identity
//! checks.

use crate::num::Coeff;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> PowerSeries<T> {
    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of z^k; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c = c.clone() + other.coeff(k);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in out.coeffs.iter_mut().enumerate() {
            *c = c.clone() - other.coeff(k);
        }
        out
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = c.clone() * factor.clone();
        }
        out
    }

    /// Cauchy product truncated to the order of `self`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order();
        let mut out = Self::zeros(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                let term = self.coeffs[i].clone() * other.coeff(j);
                out.coeffs[i + j] = out.coeffs[i + j].clone() + term;
            }
        }
        out
    }

    /// Multiply by z^k, shifting coefficients up and truncating.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zeros(n);
        for i in 0..=n.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }

    /// Divide by z^k. The k leading coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        for i in 0..k.min(self.coeffs.len()) {
            assert!(
                self.coeffs[i].is_zero(),
                "shift_down: nonzero coefficient below z^{k}"
            );
        }
        let mut coeffs: Vec<T> = self.coeffs[k..].to_vec();
        for _ in 0..k {
            coeffs.push(T::zero());
        }
        Self { coeffs }
    }

    /// Reciprocal series; the constant term must be nonzero.
    pub fn recip(&self) -> Self {
        let a0 = self.coeffs[0].clone();
        assert!(!a0.is_zero(), "recip: constant term is zero");
        let n = self.order();
        let mut out = Self::zeros(n);
        out.coeffs[0] = T::one() / a0.clone();
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out.coeffs[k - j].clone();
            }
            out.coeffs[k] = -acc / a0.clone();
        }
        out
    }

    /// Series of sqrt(1 - z): coefficients (-1)^k C(1/2, k).
    pub fn sqrt_one_minus_z(order: usize) -> Self {
        let mut out = Self::zeros(order);
        out.coeffs[0] = T::one();
        for k in 1..=order {
            // c_k = c_{k-1} * (2k - 3) / (2k)
            let f = T::from_ratio(2 * k as i64 - 3, 2 * k as i64);
            out.coeffs[k] = out.coeffs[k - 1].clone() * f;
        }
        out
    }

    /// Series of 1/sqrt(1 - z): coefficients (-1)^k C(-1/2, k).
    pub fn inv_sqrt_one_minus_z(order: usize) -> Self {
        let mut out = Self::zeros(order);
        out.coeffs[0] = T::one();
        for k in 1..=order {
            let f = T::from_ratio(2 * k as i64 - 1, 2 * k as i64);
            out.coeffs[k] = out.coeffs[k - 1].clone() * f;
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..=self.order().max(other.order()))
            .map(|k| (self.coeff(k) - other.coeff(k)).abs().to_f64())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    #[test]
    fn sqrt_series_leading_terms() {
        let s = PowerSeries::<f64>::sqrt_one_minus_z(4);
        assert_eq!(s.coeff(0), 1.0);
        assert_eq!(s.coeff(1), -0.5);
        assert_eq!(s.coeff(2), -0.125);
        assert_eq!(s.coeff(3), -1.0 / 16.0);
    }

    #[test]
    fn recip_times_self_is_one() {
        let s = PowerSeries::<BigRational>::sqrt_one_minus_z(12);
        let prod = s.mul(&s.recip());
        assert_eq!(prod.coeff(0), BigRational::from_ratio(1, 1));
        for k in 1..=12 {
            assert!(prod.coeff(k).is_zero(), "coefficient {k} not cancelled");
        }
    }

    #[test]
    fn sqrt_squared_recovers_one_minus_z() {
        let s = PowerSeries::<BigRational>::sqrt_one_minus_z(16);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(0), BigRational::from_ratio(1, 1));
        assert_eq!(sq.coeff(1), BigRational::from_ratio(-1, 1));
        for k in 2..=16 {
            assert!(sq.coeff(k).is_zero());
        }
    }

    #[test]
    fn inv_sqrt_is_reciprocal_of_sqrt() {
        let a = PowerSeries::<BigRational>::sqrt_one_minus_z(10);
        let b = PowerSeries::<BigRational>::inv_sqrt_one_minus_z(10);
        assert_eq!(a.recip(), b);
    }

    #[test]
    fn shift_round_trip() {
        let s = PowerSeries::<f64>::from_coeffs(vec![0.0, 0.0, 3.0, 4.0]);
        let down = s.shift_down(2);
        assert_eq!(down.coeffs(), &[3.0, 4.0, 0.0, 0.0]);
        assert_eq!(down.shift_up(2).coeffs(), &[0.0, 0.0, 3.0, 4.0]);
    }
}
