
use num_bigint::BigInt;

use crate::charpoly::RootSet;
use crate::numerics::{BigComplex, BigReal};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<BigComplex>,
}

impl Matrix {
    /// Panics unless `rows` is square and nonempty.
    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let n = rows.len();
        assert!(n > 0 && rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> usize {
        self.data[0].prec()
    }

    pub fn get(&self, r: usize, c: usize) -> &BigComplex {
        &self.data[r * self.n + c]
    }

    fn get_mut(&mut self, r: usize, c: usize) -> &mut BigComplex {
        &mut self.data[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[BigComplex] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigComplex]> {
        self.data.chunks(self.n)
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.with_precision(prec)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let data = (0..n * n).map(|k| self.get(k % n, k / n).conj()).collect();
        Self { n, data }
    }

    pub fn mul_vec(&self, x: &[BigComplex]) -> Vec<BigComplex> {
        assert_eq!(x.len(), self.n, "dimension mismatch");
        self.rows().map(|row| dot(row, x)).collect()
    }
}

pub(crate) fn dot(a: &[BigComplex], b: &[BigComplex]) -> BigComplex {
    a.iter()
        .zip(b)
        .fold(BigComplex::zero(a[0].prec()), |acc, (x, y)| &acc + &(x * y))
}

/// Partial-pivoting LU factorization `P·C = L·U` stored in place.
#[derive(Clone, Debug)]
pub(crate) struct Lu {
    lu: Matrix,
    perm: Vec<usize>,
}

impl Lu {
    /// `None` when a pivot column is exactly zero.
    pub fn factor(m: &Matrix) -> Option<Self> {
        let n = m.n;
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let (best, _) = (col..n)
                .map(|r| (r, lu.get(r, col).norm_sqr()))
                .max_by(|a, b| a.1.cmp_value(&b.1))?;
            if lu.get(best, col).is_zero() {
                return None;
            }
            if best != col {
                for c in 0..n {
                    lu.data.swap(best * n + c, col * n + c);
                }
                perm.swap(best, col);
            }
            let pivot_inv = lu.get(col, col).inv()?;
            for r in col + 1..n {
                let factor = lu.get(r, col) * &pivot_inv;
                for c in col + 1..n {
                    let v = lu.get(r, c) - &(&factor * lu.get(col, c));
                    *lu.get_mut(r, c) = v;
                }
                *lu.get_mut(r, col) = factor;
            }
        }
        Some(Self { lu, perm })
    }

    pub fn solve(&self, b: &[BigComplex]) -> Vec<BigComplex> {
        let n = self.lu.n;
        let mut y: Vec<BigComplex> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for r in 1..n {
            let s = dot(&self.lu.row(r)[..r], &y[..r]);
            y[r] = &y[r] - &s;
        }
        for r in (0..n).rev() {
            let s = if r + 1 < n {
                dot(&self.lu.row(r)[r + 1..], &y[r + 1..])
            } else {
                BigComplex::zero(y[r].prec())
            };
            y[r] = &(&y[r] - &s) / self.lu.get(r, r);
        }
        y
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.lu.n;
        let prec = self.lu.prec();
        let cols: Vec<Vec<BigComplex>> = (0..n)
            .map(|k| {
                let e: Vec<BigComplex> = (0..n)
                    .map(|i| if i == k { BigComplex::one(prec) } else { BigComplex::zero(prec) })
                    .collect();
                self.solve(&e)
            })
            .collect();
        let data = (0..n * n).map(|k| cols[k % n][k / n].clone()).collect();
        Matrix { n, data }
    }
}

/// Power-iteration estimate of the spectral norm, run at low precision.
pub(crate) fn spectral_norm_estimate(m: &Matrix) -> f64 {
    const PREC: usize = 64;
    const STEPS: usize = 30;
    let m = m.with_precision(PREC);
    let adj = m.adjoint();
    let n = m.dim();
    let mut v: Vec<BigComplex> = (0..n)
        .map(|k| BigComplex::from_f64(1.0, k as f64 / (n as f64 + 1.0), PREC))
        .collect();
    let mut estimate = 0.0;
    for _ in 0..STEPS {
        let w = adj.mul_vec(&m.mul_vec(&v));
        let norm = vec_norm(&w);
        if norm.is_zero() {
            return 0.0;
        }
        let v_norm = vec_norm(&v);
        estimate = norm.div(&v_norm).sqrt().to_f64();
        let inv = BigReal::one(PREC).div(&norm);
        v = w.iter().map(|z| z.scale(&inv)).collect();
    }
    estimate
}

pub(crate) fn vec_norm(v: &[BigComplex]) -> BigReal {
    v.iter()
        .fold(BigReal::zero(v[0].prec()), |acc, z| acc.add(&z.norm_sqr()))
        .sqrt()
}

/// The matrix whose column for zero `λᵢ` and power `j` holds `k^j λᵢ^k` in the
/// row for `k = 0, −1, …, −n+1` (with `0⁰ = 1`).
pub fn build_basis_matrix(roots: &RootSet) -> Matrix {
    let n = roots.order();
    let prec = roots.precision();
    let mut rows = vec![Vec::with_capacity(n); n];
    for entry in roots.entries() {
        let inv = entry.value.inv().expect("zero of P is nonzero");
        let mut power = BigComplex::one(prec);
        for (r, row) in rows.iter_mut().enumerate() {
            let k = -BigInt::from(r);
            for j in 0..entry.multiplicity {
                let kj = if j == 0 { BigInt::from(1) } else { k.pow(j as u32) };
                row.push(power.scale(&BigReal::from_bigint(&kj, prec)));
            }
            power = &power * &inv;
        }
    }
    Matrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{root_set, RootOptions};
    use crate::numerics::{Exactness, GaussianRational};

    fn sig(v: &[i64]) -> Vec<GaussianRational> {
        v.iter().map(|&x| GaussianRational::from_integer(x)).collect()
    }

    fn c64_rows(m: &Matrix) -> Vec<Vec<(f64, f64)>> {
        m.rows().map(|r| r.iter().map(BigComplex::to_c64).collect()).collect()
    }

    #[test]
    fn double_root_basis() {
        let rs = root_set(&sig(&[2, -1]), Exactness::Exact, &RootOptions::default()).unwrap();
        let m = build_basis_matrix(&rs);
        assert_eq!(c64_rows(&m), vec![vec![(1.0, 0.0), (0.0, 0.0)], vec![(1.0, 0.0), (-1.0, 0.0)]]);
    }

    #[test]
    fn distinct_roots_basis() {
        let rs = root_set(&sig(&[0, 1]), Exactness::Exact, &RootOptions::default()).unwrap();
        let m = build_basis_matrix(&rs);
        let rows = c64_rows(&m);
        assert_eq!(rows[0], vec![(1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(rows[1], vec![(1.0, 0.0), (-1.0, 0.0)]);
    }

    #[test]
    fn order_one_basis() {
        let rs = root_set(&sig(&[2]), Exactness::Exact, &RootOptions::default()).unwrap();
        assert_eq!(c64_rows(&build_basis_matrix(&rs)), vec![vec![(1.0, 0.0)]]);
    }

    #[test]
    fn lu_solves_and_inverts() {
        let prec = 128;
        let z = |a: f64, b: f64| BigComplex::from_f64(a, b, prec);
        let m = Matrix::from_rows(vec![
            vec![z(0.0, 0.0), z(2.0, 1.0), z(1.0, 0.0)],
            vec![z(1.0, 0.0), z(0.0, 0.0), z(3.0, 0.0)],
            vec![z(4.0, -1.0), z(1.0, 0.0), z(0.0, 2.0)],
        ]);
        let lu = Lu::factor(&m).unwrap();
        let x_true = vec![z(1.0, 0.0), z(-2.0, 0.5), z(0.25, 3.0)];
        let b = m.mul_vec(&x_true);
        let x = lu.solve(&b);
        for (a, e) in x.iter().zip(&x_true) {
            assert!(a.dist(e).to_f64() < 1e-35);
        }
        let inv = lu.inverse();
        let id = m.mul_vec(&inv.mul_vec(&b));
        for (a, e) in id.iter().zip(&b) {
            assert!(a.dist(e).to_f64() < 1e-35);
        }
        let norm = spectral_norm_estimate(&Matrix::from_rows(vec![
            vec![z(3.0, 0.0), z(0.0, 0.0)],
            vec![z(0.0, 0.0), z(0.0, 2.0)],
        ]));
        assert!((norm - 3.0).abs() < 1e-3);
    }
}
