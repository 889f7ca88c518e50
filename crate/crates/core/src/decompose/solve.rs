use serde::{Deserialize, Serialize};

use super::bounds::{self, mag, num, unit_roundoff};
use super::matrix::{spectral_norm_estimate, Lu, Matrix};
use crate::charpoly::RootSet;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigReal, GaussianRational};

/// Coefficients `c_{ij}` of a solution in the basis `k^j λᵢ^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    roots: RootSet,
    /// `coefficients[i][j]` multiplies `k^j λᵢ^k`.
    coefficients: Vec<Vec<BigComplex>>,
    /// Bound on `|c_{ij} − c̃_{ij}|` for the true coefficients `c̃`.
    coefficient_error: Vec<Vec<BigReal>>,
    condition_estimate: f64,
}

impl Decomposition {
    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    pub fn coefficients(&self) -> &[Vec<BigComplex>] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize, j: usize) -> &BigComplex {
        &self.coefficients[i][j]
    }

    pub fn coefficient_error(&self) -> &[Vec<BigReal>] {
        &self.coefficient_error
    }

    pub fn error(&self, i: usize, j: usize) -> &BigReal {
        &self.coefficient_error[i][j]
    }

    /// Power-iteration estimate of the 2-norm condition number of `C`.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn precision(&self) -> usize {
        self.roots.precision()
    }

    /// Number of coefficients, which equals the recurrence order.
    pub fn len(&self) -> usize {
        self.coefficients.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(i, j, c_{ij})` in column order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigComplex)> {
        self.coefficients
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, c)| (i, j, c)))
    }
}

/// Solves `C·c = a` for the decomposition of the solution with initial
/// conditions `initial` (ascending, `a₋ₙ₊₁` first). The right-hand side is
/// reordered internally to `(a₀, a₋₁, …)` to match the rows of `C`.
///
/// Uses partial-pivoting elimination with one refinement step. Errors with
/// `IllConditioned` when the condition estimate exceeds `2^{p/2}`.
pub fn solve_coefficients(roots: &RootSet, c: &Matrix, initial: &[GaussianRational]) -> Result<Decomposition> {
    let n = c.dim();
    if initial.len() != n {
        return Err(Error::LengthMismatch {
            signature: n,
            initial: initial.len(),
        });
    }
    let prec = c.prec();
    let half = prec / 2;
    let ill = |estimate: f64| Error::IllConditioned {
        estimate,
        half_precision: half,
    };
    let a: Vec<BigComplex> = initial
        .iter()
        .rev()
        .map(|x| BigComplex::from_gaussian(x, prec))
        .collect();

    let lu = Lu::factor(c).ok_or_else(|| ill(f64::INFINITY))?;
    let mut x = lu.solve(&a);
    let residual = |x: &[BigComplex]| -> Vec<BigComplex> {
        c.mul_vec(x).iter().zip(&a).map(|(cx, ai)| ai - cx).collect()
    };
    let correction = lu.solve(&residual(&x));
    x = x.iter().zip(&correction).map(|(xi, di)| xi + di).collect();
    let r = residual(&x);

    let inv = lu.inverse();
    let condition = spectral_norm_estimate(c) * spectral_norm_estimate(&inv);
    if !condition.is_finite() || condition > 2f64.powi(half as i32) {
        return Err(ill(condition));
    }

    // Componentwise bound on the right-hand side of C̃(c̃ − c) = r − δC·c,
    // where δC covers root radii and the rounding of the entries of C.
    let u = unit_roundoff(prec);
    let x_mag: Vec<BigReal> = x.iter().map(mag).collect();
    let col_perturbation = column_perturbations(roots, prec)?;
    let rhs_err: Vec<BigReal> = (0..n)
        .map(|row| {
            let mut rounding = bounds::zero();
            let mut delta = bounds::zero();
            for col in 0..n {
                rounding = rounding.add(&mag(c.get(row, col)).mul(&x_mag[col]));
                delta = delta.add(&col_perturbation[col][row].mul(&x_mag[col]));
            }
            mag(&r[row])
                .add(&num((n + 2) as f64).mul(&u).mul(&rounding))
                .add(&u.mul(&mag(&a[row])))
                .add(&delta)
        })
        .collect();
    let flat_err: Vec<BigReal> = (0..n)
        .map(|i| {
            let s = (0..n).fold(bounds::zero(), |acc, j| acc.add(&mag(inv.get(i, j)).mul(&rhs_err[j])));
            num(4.0).mul(&s)
        })
        .collect();

    let mut coefficients = Vec::with_capacity(roots.len());
    let mut coefficient_error = Vec::with_capacity(roots.len());
    let mut col = 0;
    for entry in roots.entries() {
        let m = entry.multiplicity;
        coefficients.push(x[col..col + m].to_vec());
        coefficient_error.push(flat_err[col..col + m].to_vec());
        col += m;
    }
    Ok(Decomposition {
        roots: roots.clone(),
        coefficients,
        coefficient_error,
        condition_estimate: condition,
    })
}

/// For each column of `C`, a bound per row on the difference between the
/// stored entry and the entry built from the true zero.
fn column_perturbations(roots: &RootSet, prec: usize) -> Result<Vec<Vec<BigReal>>> {
    let n = roots.order();
    let u = unit_roundoff(prec);
    let mut out = Vec::with_capacity(n);
    for entry in roots.entries() {
        let modulus = mag(&entry.value);
        let radius = entry.radius.with_precision(bounds::BOUND_PREC);
        if modulus.cmp_value(&radius).is_le() {
            return Err(Error::IllConditioned {
                estimate: f64::INFINITY,
                half_precision: prec / 2,
            });
        }
        for j in 0..entry.multiplicity {
            let col = (0..n)
                .map(|r| {
                    let k = -(r as i64);
                    let kj = bounds::int_pow(k, j);
                    let moved = bounds::power_perturbation(&modulus, &radius, k);
                    let rounding = num((r + 2) as f64).mul(&u).mul(&bounds::powi(&modulus, k));
                    kj.mul(&moved.add(&rounding))
                })
                .collect();
            out.push(col);
        }
    }
    Ok(out)
}

/// A reconstructed term with a bound on its distance to the exact term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reconstructed {
    pub value: BigComplex,
    pub error: BigReal,
}

/// `F_k = Σᵢ Σⱼ c_{ij} k^j λᵢ^k`.
pub fn reconstruct_term(d: &Decomposition, k: i64) -> Reconstructed {
    let prec = d.precision();
    let n = d.len();
    let u = unit_roundoff(prec);
    let mut value = BigComplex::zero(prec);
    let mut err = bounds::zero();
    let mut size = bounds::zero();
    for (i, entry) in d.roots.entries().iter().enumerate() {
        let power = entry.value.powi(k).expect("zero of P is nonzero");
        let modulus = mag(&entry.value);
        let radius = entry.radius.with_precision(bounds::BOUND_PREC);
        let power_mag = bounds::powi(&modulus, k);
        let moved = bounds::power_perturbation(&modulus, &radius, k);
        for (j, c) in d.coefficients[i].iter().enumerate() {
            let kj = bounds::int_pow(k, j);
            let kj_exact = BigReal::from_bigint(&num_bigint::BigInt::from(k).pow(j as u32), prec);
            value = &value + &(c * &power).scale(&kj_exact);
            let c_mag = mag(c);
            err = err
                .add(&d.coefficient_error[i][j].mul(&kj).mul(&power_mag))
                .add(&c_mag.mul(&kj).mul(&moved));
            size = size.add(&c_mag.mul(&kj).mul(&power_mag));
        }
    }
    let rounding = num((k.unsigned_abs() as usize + 2 * n + 4) as f64).mul(&u).mul(&size);
    Reconstructed {
        value,
        error: num(2.0).mul(&err.add(&rounding)),
    }
}
