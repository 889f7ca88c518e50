//! Arbitrary-precision complex numbers.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::gaussian::GaussianRational;
use super::real::{exact_add, exact_sub, BigReal};

/// `re + im·i` at an explicit working precision.
///
/// Products and quotients form the exact real-part and imaginary-part
/// numerators first and round once, so each component is correctly rounded.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    re: BigReal,
    im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        let p = re.prec().max(im.prec());
        Self {
            re: re.with_precision(p),
            im: im.with_precision(p),
        }
    }

    pub fn zero(prec: usize) -> Self {
        Self {
            re: BigReal::zero(prec),
            im: BigReal::zero(prec),
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_real(BigReal::one(prec))
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        Self {
            re,
            im: BigReal::zero(p),
        }
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::from_real(BigReal::from_i64(n, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Self {
            re: BigReal::from_f64(re, prec),
            im: BigReal::from_f64(im, prec),
        }
    }

    pub fn from_gaussian(x: &GaussianRational, prec: usize) -> Self {
        Self {
            re: BigReal::from_rational(x.re(), prec),
            im: BigReal::from_rational(x.im(), prec),
        }
    }

    /// The exact (dyadic) value of this number.
    pub fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::new(self.re.to_rational(), self.im.to_rational())
    }

    pub fn re(&self) -> &BigReal {
        &self.re
    }

    pub fn im(&self) -> &BigReal {
        &self.im
    }

    pub fn prec(&self) -> usize {
        self.re.prec()
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Self {
            re: self.re.with_precision(prec),
            im: self.im.with_precision(prec),
        }
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `re² + im²`, rounded once.
    pub fn norm_sqr(&self) -> BigReal {
        let exact = exact_add(&self.re.exact_mul(&self.re), &self.im.exact_mul(&self.im));
        BigReal::from_raw_rounded(&exact, self.prec())
    }

    /// `sqrt(re² + im²)` with the radicand formed exactly; within one ulp.
    pub fn modulus(&self) -> BigReal {
        let exact = exact_add(&self.re.exact_mul(&self.re), &self.im.exact_mul(&self.im));
        let p = self.prec();
        let mut wide = BigReal::from_raw_rounded(&exact, 2 * p + 128);
        if wide.is_zero() {
            return BigReal::zero(p);
        }
        wide = wide.sqrt();
        wide.with_precision(p)
    }

    /// Exact squared modulus as a rational.
    pub fn norm_sqr_exact(&self) -> BigRational {
        let r = self.re.to_rational();
        let i = self.im.to_rational();
        &r * &r + &i * &i
    }

    /// Argument in `(-π, π]`, as a double; used for ordering only.
    pub fn arg_f64(&self) -> f64 {
        let (re, im) = self.to_c64();
        im.atan2(re)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::one(self.prec()) / self)
    }

    pub fn powi(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one(self.prec());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Some(acc)
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        Self {
            re: self.re.mul(k),
            im: self.im.mul(k),
        }
    }

    /// Distance `|self - other|`.
    pub fn dist(&self, other: &Self) -> BigReal {
        (self - other).modulus()
    }

    /// Ordering by modulus (descending) then argument (ascending).
    pub fn cmp_dominance(&self, other: &Self) -> Ordering {
        other
            .modulus()
            .cmp_value(&self.modulus())
            .then_with(|| self.arg_f64().total_cmp(&other.arg_f64()))
    }

    /// `re[+-]im i` in scientific notation with the given digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re.to_decimal(digits);
        if self.im.is_zero() {
            return re;
        }
        let im = self.im.abs().to_decimal(digits);
        let sign = if self.im.is_negative() { '-' } else { '+' };
        format!("{re}{sign}{im} i")
    }
}

impl<'b> Add<&'b BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'b BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }
}

impl<'b> Sub<&'b BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'b BigComplex) -> BigComplex {
        BigComplex {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }
}

impl<'b> Mul<&'b BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'b BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        let ac = self.re.exact_mul(&rhs.re);
        let bd = self.im.exact_mul(&rhs.im);
        let ad = self.re.exact_mul(&rhs.im);
        let bc = self.im.exact_mul(&rhs.re);
        BigComplex {
            re: BigReal::from_raw_rounded(&exact_sub(&ac, &bd), p),
            im: BigReal::from_raw_rounded(&exact_add(&ad, &bc), p),
        }
    }
}

/// Panics on division by zero.
impl<'b> Div<&'b BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &'b BigComplex) -> BigComplex {
        assert!(!rhs.is_zero(), "BigComplex division by zero");
        let p = self.prec().max(rhs.prec());
        let den = exact_add(&rhs.re.exact_mul(&rhs.re), &rhs.im.exact_mul(&rhs.im));
        let ac = self.re.exact_mul(&rhs.re);
        let bd = self.im.exact_mul(&rhs.im);
        let bc = self.im.exact_mul(&rhs.re);
        let ad = self.re.exact_mul(&rhs.im);
        let re_num = exact_add(&ac, &bd);
        let im_num = exact_sub(&bc, &ad);
        let re = if re_num.is_zero() {
            BigReal::zero(p)
        } else {
            BigReal::from_raw_div(&re_num, &den, p)
        };
        let im = if im_num.is_zero() {
            BigReal::zero(p)
        } else {
            BigReal::from_raw_div(&im_num, &den, p)
        };
        BigComplex { re, im }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        -&self
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}b]", self.to_decimal(20), self.prec())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(17)))
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    re: String,
    im: String,
    bits: usize,
}

impl Serialize for BigComplex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ComplexRepr {
            re: self.re.to_round_trip_string(),
            im: self.im.to_round_trip_string(),
            bits: self.prec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ComplexRepr::deserialize(d)?;
        let re = BigReal::parse_decimal(&r.re, r.bits).map_err(serde::de::Error::custom)?;
        let im = BigReal::parse_decimal(&r.im, r.bits).map_err(serde::de::Error::custom)?;
        Ok(BigComplex { re, im })
    }
}
