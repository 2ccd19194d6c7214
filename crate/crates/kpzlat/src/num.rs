//! Scalar abstraction for the exact-arithmetic core.
//!
//! Kernel tables, power series and the small enumeration oracles are generic
//! over their coefficient type: `f64` for production horizons, `BigRational`
//! when a test wants identities to hold exactly.

use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Coeff:
    Clone + PartialEq + PartialOrd + Num + Signed + std::fmt::Debug + Send + Sync
{
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Lossy view for reports and tolerance checks.
    fn to_f64(&self) -> f64;
}

impl Coeff for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Coeff for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
