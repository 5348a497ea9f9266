//! Numeric substrate shared by the float and exact-rational code paths.

use num_traits::{One, Zero};
use std::ops::{Add, Mul, Neg, Sub};

/// Scalar types the state recursion runs on.
///
/// `f64` is the working representation; `num_rational::BigRational` gives the
/// exact mode. Sign tests go through `PartialOrd`, so exact types decide
/// positivity without tolerances.
pub trait Scalar:
    Clone
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialOrd
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + Send
        + Sync
{
}

pub(crate) fn abs_of<T: Scalar>(x: &T) -> T {
    if *x < T::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}
