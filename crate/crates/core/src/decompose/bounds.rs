//! Magnitude arithmetic for error bounds. Bounds are carried as 64-bit
//! floats with an unbounded exponent so that tiny radii never underflow.

use num_bigint::BigInt;

use crate::numerics::{BigComplex, BigReal};

pub(crate) const BOUND_PREC: usize = 64;

pub(crate) fn mag(z: &BigComplex) -> BigReal {
    z.modulus().with_precision(BOUND_PREC)
}

pub(crate) fn num(x: f64) -> BigReal {
    BigReal::from_f64(x, BOUND_PREC)
}

pub(crate) fn zero() -> BigReal {
    BigReal::zero(BOUND_PREC)
}

/// `2^-prec`, the unit roundoff at `prec` bits.
pub(crate) fn unit_roundoff(prec: usize) -> BigReal {
    BigReal::pow2(-(prec as i64), BOUND_PREC)
}

/// `|k|^j` with `0⁰ = 1`.
pub(crate) fn int_pow(k: i64, j: usize) -> BigReal {
    BigReal::from_bigint(&BigInt::from(k.unsigned_abs()).pow(j as u32), BOUND_PREC)
}

/// `x^e` for a positive `x`.
pub(crate) fn powi(x: &BigReal, e: i64) -> BigReal {
    let base = if e < 0 { BigReal::one(BOUND_PREC).div(x) } else { x.clone() };
    let mut acc = BigReal::one(BOUND_PREC);
    let mut b = base;
    let mut e = e.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b);
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b);
        }
    }
    acc
}

/// Bound on `|μ^k − λ^k|` over `|μ − λ| ≤ ρ`, given `|λ| > ρ` when `k < 0`.
pub(crate) fn power_perturbation(modulus: &BigReal, radius: &BigReal, k: i64) -> BigReal {
    if k == 0 || radius.is_zero() {
        return zero();
    }
    let far = if k > 0 { modulus.add(radius) } else { modulus.sub(radius) };
    num(k.unsigned_abs() as f64).mul(radius).mul(&powi(&far, k - 1))
}
