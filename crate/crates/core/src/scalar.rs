//! Numeric abstraction used by the LP oracle and the bound arithmetic.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

pub trait Scalar:
    NumAssign + Signed + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive
{
    /// Whether comparisons against zero are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_pos(&self) -> bool {
        if Self::EXACT {
            self.is_positive()
        } else {
            self.to_f64().unwrap_or(0.0) > 1e-9
        }
    }

    fn is_neg(&self) -> bool {
        if Self::EXACT {
            self.is_negative()
        } else {
            self.to_f64().unwrap_or(0.0) < -1e-9
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }
}

impl Scalar for Ratio<i128> {
    const EXACT: bool = true;
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}
