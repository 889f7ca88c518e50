//! Arbitrary-precision reals backed by `astro-float`.
//!
//! Every value carries the precision it was rounded to. Binary operations
//! round to the larger of the two operand precisions with round-half-even.
//! `astro-float` rounds arithmetic at whole 64-bit words, so requested
//! precisions are rounded up to a multiple of 64 bits; every result is
//! correctly rounded at that effective precision.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, RoundingMode, Sign, Word, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseNumberError;

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PRECISION: usize = 53;

/// Effective precision for a requested bit count.
pub fn word_precision(prec: usize) -> usize {
    prec.max(MIN_PRECISION).div_ceil(WORD_BIT_SIZE) * WORD_BIT_SIZE
}

#[derive(Clone)]
pub struct BigReal {
    value: BigFloat,
    prec: usize,
}

fn bigint_to_float(n: &BigInt) -> BigFloat {
    if n.is_zero() {
        return BigFloat::from_word(0, WORD_BIT_SIZE);
    }
    let words: Vec<Word> = n.magnitude().to_u64_digits();
    let sign = if n.is_negative() { Sign::Neg } else { Sign::Pos };
    let e = (words.len() * WORD_BIT_SIZE) as i32;
    BigFloat::from_words(&words, sign, e)
}

// astro-float's full-precision add/sub mishandle zero operands

pub(crate) fn exact_add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else {
        a.add_full_prec(b)
    }
}

pub(crate) fn exact_sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    if b.is_zero() {
        a.clone()
    } else if a.is_zero() {
        b.neg()
    } else {
        a.sub_full_prec(b)
    }
}

fn float_to_rational(x: &BigFloat) -> BigRational {
    let Some((words, _, sign, e, _)) = x.as_raw_parts() else {
        panic!("non-finite BigFloat has no rational value");
    };
    if x.is_zero() {
        return BigRational::zero();
    }
    let mut mag = BigUint::zero();
    for &w in words.iter().rev() {
        mag = (mag << WORD_BIT_SIZE) + BigUint::from(w);
    }
    let shift = e as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let sign = if sign == Sign::Neg { BigSign::Minus } else { BigSign::Plus };
    let num = BigInt::from_biguint(sign, mag);
    if shift >= 0 {
        BigRational::from_integer(num << shift as usize)
    } else {
        BigRational::new(num, BigInt::one() << (-shift) as usize)
    }
}

impl BigReal {
    fn wrap(value: BigFloat, prec: usize) -> Self {
        debug_assert!(!value.is_nan() && !value.is_inf(), "non-finite BigReal");
        Self {
            value,
            prec: word_precision(prec),
        }
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, word_precision(prec)), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::from_bigint(&BigInt::from(n), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        let mut v = bigint_to_float(n);
        v.set_precision(word_precision(prec), RM).expect("precision within astro-float limits");
        Self::wrap(v, prec)
    }

    /// Rounds a finite double to `prec` bits; exact whenever `prec >= 53`.
    pub fn from_f64(x: f64, prec: usize) -> Self {
        assert!(x.is_finite(), "BigReal::from_f64 on non-finite input");
        Self::from_rational(&BigRational::from_float(x).expect("finite"), prec)
    }

    /// Correctly rounded value of `q` at `prec` bits.
    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let num = bigint_to_float(q.numer());
        if q.denom().is_one() {
            let mut v = num;
            v.set_precision(word_precision(prec), RM).expect("precision within astro-float limits");
            return Self::wrap(v, prec);
        }
        let den = bigint_to_float(q.denom());
        Self::wrap(num.div(&den, word_precision(prec), RM), prec)
    }

    /// Smallest representable value at `prec` bits that is `>= q` (up to one ulp slack).
    pub fn from_rational_upper(q: &BigRational, prec: usize) -> Self {
        let x = Self::from_rational(q, prec);
        if x.to_rational() < *q {
            x.next_up()
        } else {
            x
        }
    }

    /// An upper bound on `sqrt(q)` for `q >= 0`.
    pub fn sqrt_upper(q: &BigRational, prec: usize) -> Self {
        assert!(!q.is_negative(), "sqrt of a negative rational");
        let mut s = Self::from_rational(q, prec).sqrt();
        loop {
            let r = s.to_rational();
            if &r * &r >= *q {
                return s;
            }
            s = s.next_up();
        }
    }

    /// `2^exp` at `prec` bits, exact.
    pub fn pow2(exp: i64, prec: usize) -> Self {
        let v = BigFloat::from_words(&[1 << (WORD_BIT_SIZE - 1)], Sign::Pos, (exp + 1) as i32);
        let mut v = v;
        v.set_precision(word_precision(prec), RM).expect("precision within limits");
        Self::wrap(v, prec)
    }

    /// Exact value as a dyadic rational.
    pub fn to_rational(&self) -> BigRational {
        float_to_rational(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        if self.value.is_zero() {
            return 0.0;
        }
        let (words, _, sign, e, _) = self.value.as_raw_parts().expect("finite");
        let top = *words.last().expect("nonempty mantissa") as f64;
        let shift = e - WORD_BIT_SIZE as i32;
        let mag = if shift < -1100 {
            0.0
        } else if shift > 1100 {
            f64::INFINITY
        } else {
            // split the scaling so the intermediate never over/underflows early
            let half = shift / 2;
            top * 2f64.powi(half) * 2f64.powi(shift - half)
        };
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Number of significant bits values are rounded to.
    pub fn mantissa_bits(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        let mut v = self.value.clone();
        v.set_precision(word_precision(prec), RM).expect("precision within limits");
        Self::wrap(v, prec)
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.value.exponent().map(i64::from)
        }
    }

    /// Unit in the last place at this value's precision.
    pub fn ulp(&self) -> Self {
        match self.exponent() {
            Some(e) => Self::pow2(e - self.mantissa_bits() as i64, self.prec),
            None => Self::pow2(-(self.prec as i64) * 4, self.prec),
        }
    }

    fn next_up(&self) -> Self {
        let bumped = exact_add(&self.value, &self.ulp().value);
        Self::wrap(bumped, self.prec).with_precision(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    fn p2(&self, other: &Self) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.add(&other.value, p, RM), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.sub(&other.value, p, RM), p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.p2(other);
        Self::wrap(self.value.mul(&other.value, p, RM), p)
    }

    /// Panics when `other` is zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "BigReal division by zero");
        let p = self.p2(other);
        Self::wrap(self.value.div(&other.value, p, RM), p)
    }

    /// Panics on negative input.
    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative BigReal");
        if self.is_zero() {
            return self.clone();
        }
        Self::wrap(self.value.sqrt(self.prec, RM), self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn neg(&self) -> Self {
        Self::wrap(self.value.neg(), self.prec)
    }

    pub fn max(&self, other: &Self) -> Self {
        if self.cmp_value(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.value.cmp(&other.value) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            Some(_) => Ordering::Greater,
            None => unreachable!("BigReal values are finite"),
        }
    }

    pub(crate) fn exact_mul(&self, other: &Self) -> BigFloat {
        if self.is_zero() || other.is_zero() {
            return BigFloat::from_word(0, WORD_BIT_SIZE);
        }
        self.value.mul_full_prec(&other.value)
    }

    pub(crate) fn from_raw_rounded(value: &BigFloat, prec: usize) -> Self {
        let mut v = value.clone();
        v.set_precision(word_precision(prec), RM).expect("precision within limits");
        Self::wrap(v, prec)
    }

    pub(crate) fn from_raw_div(num: &BigFloat, den: &BigFloat, prec: usize) -> Self {
        Self::wrap(num.div(den, word_precision(prec), RM), prec)
    }

    /// Scientific notation with `digits` significant decimal digits, correctly rounded.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_decimal(&self.to_rational(), digits.max(1))
    }

    /// Enough digits that `parse_decimal(to_round_trip_string(), prec)` restores the value.
    pub fn to_round_trip_string(&self) -> String {
        let bits = self.mantissa_bits() as f64;
        self.to_decimal((bits * std::f64::consts::LOG10_2).ceil() as usize + 1)
    }

    pub fn parse_decimal(s: &str, prec: usize) -> Result<Self, ParseNumberError> {
        Ok(Self::from_rational(&parse_decimal_rational(s)?, prec))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.cmp_value(other) == Ordering::Equal
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}b]", self.to_decimal(20), self.prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(17);
        f.write_str(&self.to_decimal(digits))
    }
}

#[derive(Serialize, Deserialize)]
struct RealRepr {
    value: String,
    bits: usize,
}

impl Serialize for BigReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RealRepr {
            value: self.to_round_trip_string(),
            bits: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RealRepr::deserialize(d)?;
        BigReal::parse_decimal(&r.value, r.bits).map_err(serde::de::Error::custom)
    }
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Exact floor(log10(|q|)) for nonzero `q`.
fn decimal_exponent(q: &BigRational) -> i64 {
    let a = q.abs();
    let guess = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e = (guess * std::f64::consts::LOG10_2).floor() as i64;
    let scaled = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(pow10(e as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-e) as u32))
        }
    };
    while scaled(e) > a {
        e -= 1;
    }
    while scaled(e + 1) <= a {
        e += 1;
    }
    e
}

fn round_half_even(q: &BigRational) -> BigInt {
    let fl = q.floor();
    let frac = q - &fl;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let base = fl.to_integer();
    match frac.cmp(&half) {
        Ordering::Less => base,
        Ordering::Greater => base + 1,
        Ordering::Equal => {
            if (&base % 2u32).is_zero() {
                base
            } else {
                base + 1
            }
        }
    }
}

pub(crate) fn format_decimal(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_owned();
    }
    let mut e = decimal_exponent(q);
    let shift = digits as i64 - 1 - e;
    let scale = |s: i64| -> BigRational {
        if s >= 0 {
            q.abs() * BigRational::from_integer(pow10(s as u32))
        } else {
            q.abs() / BigRational::from_integer(pow10((-s) as u32))
        }
    };
    let mut n = round_half_even(&scale(shift));
    if n >= pow10(digits as u32) {
        // rounding carried into a new digit
        e += 1;
        n = round_half_even(&scale(digits as i64 - 1 - e));
    }
    let s = n.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if q.is_negative() { "-" } else { "" };
    let tail = tail.trim_end_matches('0');
    if tail.is_empty() {
        format!("{sign}{head}e{e}")
    } else {
        format!("{sign}{head}.{tail}e{e}")
    }
}

/// Parses `[-+]ddd[.ddd][e[-+]ddd]` exactly.
pub(crate) fn parse_decimal_rational(input: &str) -> Result<BigRational, ParseNumberError> {
    let bad = |why: &str| ParseNumberError::new(input, why.to_owned());
    let s = input.trim();
    let (neg, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("missing digits"));
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad("invalid decimal digits"));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad("invalid decimal digits"))?
    };
    if neg {
        n = -n;
    }
    let mut e10: i64 = -(frac_part.len() as i64);
    if let Some(exp) = exp {
        let v: i64 = exp.parse().map_err(|_| bad("invalid exponent"))?;
        if v.abs() > 100_000 {
            return Err(bad("exponent out of range"));
        }
        e10 += v;
    }
    Ok(if e10 >= 0 {
        BigRational::from_integer(n * pow10(e10 as u32))
    } else {
        BigRational::new(n, pow10((-e10) as u32))
    })
}

impl ToPrimitive for BigReal {
    fn to_i64(&self) -> Option<i64> {
        self.to_rational().to_integer().to_i64()
    }

    fn to_u64(&self) -> Option<u64> {
        self.to_rational().to_integer().to_u64()
    }

    fn to_f64(&self) -> Option<f64> {
        Some(BigReal::to_f64(self))
    }
}
