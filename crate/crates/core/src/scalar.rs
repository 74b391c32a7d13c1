use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num, NumCast, Signed};

/// A number usable as a capacity, flow value or region bound.
///
/// Implemented for the exact [`Rational`](crate::Rational) as well as for
/// `f32`/`f64` and signed primitive integers.
pub trait Scalar: Num + Signed + Copy + PartialOrd + Debug + Send + Sync + 'static {
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `max(self, 0)`.
    fn positive_part(self) -> Self {
        self.max_of(Self::zero())
    }
}

impl<T> Scalar for T where T: Num + Signed + Copy + PartialOrd + Debug + Send + Sync + 'static {}

/// Floating scalar for entropy computations: `f32` or `f64`.
pub trait RealScalar: Scalar + Float + FromPrimitive + NumCast {}

impl<T> RealScalar for T where T: Scalar + Float + FromPrimitive + NumCast {}

/// Converts an exact rational into a floating scalar.
pub fn ratio_to_real<F: RealScalar>(r: &crate::Rational) -> F {
    let num = F::from(*r.numer()).expect("numerator representable");
    let den = F::from(*r.denom()).expect("denominator representable");
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn positive_part_works_for_exact_and_float() {
        assert_eq!(Rational::new(-1, 2).positive_part(), Rational::from_integer(0));
        assert_eq!(Rational::new(3, 2).positive_part(), Rational::new(3, 2));
        assert_eq!((-0.5f64).positive_part(), 0.0);
        assert_eq!(7i64.min_of(3), 3);
    }

    #[test]
    fn ratio_conversion() {
        let x: f32 = ratio_to_real(&Rational::new(1, 4));
        assert_eq!(x, 0.25);
    }
}
