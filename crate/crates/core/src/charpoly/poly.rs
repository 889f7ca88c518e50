use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, GaussianRational, Scalar};

/// Dense univariate polynomial over the Gaussian rationals, constant term first.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// `λ - r`
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    /// `Π (λ - r)^m`
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = (&'a GaussianRational, usize)>) -> Self {
        roots.into_iter().fold(Self::one(), |acc, (r, m)| {
            (0..m).fold(acc, |acc, _| acc.mul(&Self::linear(r)))
        })
    }

    /// `λⁿ − b₁λⁿ⁻¹ − ⋯ − bₙ` for the signature `(b₁, …, bₙ)`.
    pub fn characteristic(signature: &[GaussianRational]) -> Result<Self> {
        let n = signature.len();
        let last = signature.last().ok_or(Error::EmptySignature)?;
        if last.is_zero() {
            return Err(Error::ZeroTrailingCoefficient);
        }
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[n] = GaussianRational::one();
        for (k, b) in signature.iter().enumerate() {
            // b_{k+1} multiplies λ^{n-k-1}
            coeffs[n - k - 1] = -b;
        }
        Ok(Self::new(coeffs))
    }

    /// Recovers `(b₁, …, bₙ)` from a monic polynomial with nonzero constant term.
    pub fn to_signature(&self) -> Vec<GaussianRational> {
        let monic = self.monic();
        let n = monic.degree();
        (1..=n).map(|k| -&monic.coeffs[n - k]).collect()
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_integer(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let d = divisor.degree();
        if rem.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let lead_inv = divisor.leading().inv().expect("nonzero leading coefficient");
        let mut quot = vec![GaussianRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient; callers guarantee divisibility.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Horner evaluation in any scalar type; `at` fixes the working precision.
    pub fn eval<S: Scalar>(&self, at: &S) -> S {
        let mut acc = at.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc * at.clone() + at.lift(c);
        }
        acc
    }

    pub fn to_complex(&self, prec: usize) -> Vec<BigComplex> {
        self.coeffs
            .iter()
            .map(|c| BigComplex::from_gaussian(c, prec))
            .collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let show_coeff = k == 0 || *c != GaussianRational::one();
            if show_coeff {
                if c.is_real() {
                    write!(f, "{c}")?;
                } else {
                    write!(f, "({c})")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("λ")?,
                _ => write!(f, "λ^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::new(c.iter().map(|&x| g(x)).collect())
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(Polynomial::characteristic(&[g(1), g(1)]).unwrap(), p(&[-1, -1, 1]));
        assert_eq!(Polynomial::characteristic(&[g(2), g(-1)]).unwrap(), p(&[1, -2, 1]));
        assert_eq!(Polynomial::characteristic(&[g(0), g(1)]).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(
            Polynomial::characteristic(&[g(1), g(0)]),
            Err(Error::ZeroTrailingCoefficient)
        );
        assert_eq!(Polynomial::characteristic(&[]), Err(Error::EmptySignature));
    }

    #[test]
    fn signature_round_trip() {
        let sig = vec![g(3), g(-2), GaussianRational::i()];
        assert_eq!(Polynomial::characteristic(&sig).unwrap().to_signature(), sig);
    }

    #[test]
    fn division_and_gcd() {
        let a = Polynomial::from_roots([(&g(1), 2), (&g(-3), 1)]);
        let b = Polynomial::from_roots([(&g(1), 1), (&g(2), 1)]);
        assert_eq!(a.gcd(&b), Polynomial::linear(&g(1)));
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
        assert_eq!(a.gcd(&Polynomial::zero()), a.monic());
    }

    #[test]
    fn evaluation_matches_in_both_fields() {
        let q = Polynomial::from_roots([(&GaussianRational::i(), 1), (&g(2), 2)]);
        assert!(q.eval(&GaussianRational::i()).is_zero());
        assert_eq!(q.eval(&g(0)), -&(GaussianRational::i() * g(4)));
        let z = BigComplex::from_gaussian(&g(2), 128);
        assert!(q.eval(&z).is_zero());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[1, -2, 1]).to_string(), "λ^2 + -2λ + 1");
    }
}
