use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the numerics are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// A tolerance no tighter than a fixed multiple of machine epsilon.
    ///
    /// Tolerances in this crate are stated for `f64`; in `f32` they are
    /// widened to `factor * epsilon` so they stay reachable.
    fn tol(requested: f64, factor: f64) -> Self {
        Self::lit(requested).max(Self::lit(factor) * Self::epsilon())
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `e^{iθ}`.
pub fn unit<T: Scalar>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Principal argument mapped into `[0, 2π)`.
pub fn arg_2pi<T: Scalar>(z: Complex<T>) -> T {
    let two_pi = T::TAU();
    let a = z.arg();
    if a < T::zero() {
        let w = a + two_pi;
        if w >= two_pi {
            T::zero()
        } else {
            w
        }
    } else {
        a
    }
}

/// Angle reduced into `[0, 2π)`.
pub fn wrap_angle<T: Scalar>(theta: T) -> T {
    let two_pi = T::TAU();
    let mut t = theta % two_pi;
    if t < T::zero() {
        t = t + two_pi;
    }
    if t >= two_pi {
        t = T::zero();
    }
    t
}

/// Whether `|z|` is within `tol` of one.
pub fn on_unit_circle<T: Scalar>(z: Complex<T>, tol: T) -> bool {
    (z.norm() - T::one()).abs() <= tol
}
