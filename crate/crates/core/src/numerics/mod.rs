//! Exact and arbitrary-precision arithmetic.
//!
//! [`GaussianRational`] is the exact input field. [`BigComplex`] carries
//! approximate zeros and everything computed from them.

mod complex;
mod gaussian;
mod real;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use complex::BigComplex;
pub use gaussian::GaussianRational;
pub use real::{word_precision, BigReal, MIN_PRECISION};

pub(crate) use real::parse_decimal_rational;

/// Whether input coefficients are meant exactly or as approximations of
/// unknown true values. Approximate inputs are still stored exactly (every
/// double is a dyadic rational) but take numeric paths where exact tests
/// would be meaningless, such as multiplicity detection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    #[default]
    Exact,
    Approximate,
}

/// Working precision used when none is given.
pub const DEFAULT_PRECISION: usize = 256;

/// Correctly rounded conversion of an exact value.
pub fn to_big_complex(x: &GaussianRational, precision: usize) -> BigComplex {
    assert!(precision >= MIN_PRECISION, "precision below {MIN_PRECISION} bits");
    BigComplex::from_gaussian(x, precision)
}

pub fn complex_modulus(z: &BigComplex) -> BigReal {
    z.modulus()
}

/// Field operations shared by the exact and the approximate number types,
/// so that recurrence-level code can run over either.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds an exact value at the precision of `self` (ignored for exact types).
    fn lift(&self, x: &GaussianRational) -> Self;
    fn is_zero_value(&self) -> bool;

    fn zero_like(&self) -> Self {
        self.lift(&GaussianRational::zero())
    }

    fn one_like(&self) -> Self {
        self.lift(&GaussianRational::one())
    }
}

impl Scalar for GaussianRational {
    fn lift(&self, x: &GaussianRational) -> Self {
        x.clone()
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigComplex {
    fn lift(&self, x: &GaussianRational) -> Self {
        BigComplex::from_gaussian(x, self.prec())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}
