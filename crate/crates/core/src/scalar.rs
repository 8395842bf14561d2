//! Real scalar abstraction for amplitudes.
//!
//! Every simulator type is generic over `F: Scalar`; amplitudes are
//! `Complex<F>`. Reports are always emitted in `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// floating point: f32 or f64
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Admission tolerance for `U U^† = I`, entrywise.
    const UNITARY_TOL: f64;
    /// Allowed drift of a state norm away from 1.
    const NORM_TOL: f64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    const UNITARY_TOL: f64 = 1e-9;
    const NORM_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const UNITARY_TOL: f64 = 1e-5;
    const NORM_TOL: f64 = 1e-4;
}

pub type Amplitude<F> = Complex<F>;

pub(crate) fn czero<F: Scalar>() -> Complex<F> {
    Complex::new(F::zero(), F::zero())
}

pub(crate) fn cone<F: Scalar>() -> Complex<F> {
    Complex::new(F::one(), F::zero())
}
