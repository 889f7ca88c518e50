//! Simultaneous root iteration with certified inclusion radii.
//!
//! Approximations come from the Aberth–Ehrlich iteration run directly in
//! [`BigComplex`]. Radii come from Smith's theorem: with Weierstrass
//! corrections `Wᵢ = p(zᵢ) / (lead · Π_{j≠i}(zᵢ − zⱼ))`, every root lies in
//! the union of the disks `|z − zᵢ| ≤ d·|Wᵢ|`, and a connected component made
//! of `m` disks holds exactly `m` roots. The corrections are evaluated in exact
//! rational arithmetic (the approximations are dyadic), so radii are true
//! upper bounds rather than estimates.

use std::f64::consts::TAU;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::poly::Polynomial;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigReal, GaussianRational};

/// Default ceiling of the precision-escalation schedule.
pub const DEFAULT_PRECISION_CAP: usize = 1024;

/// An approximate zero and a certified bound on its distance to a true zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxRoot {
    pub value: BigComplex,
    pub radius: BigReal,
}

/// Precisions tried in order: `start, 2·start, …` up to and including `cap`.
pub fn escalation_schedule(start: usize, cap: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut p = start;
    while p * 2 <= cap {
        p *= 2;
        out.push(p);
    }
    out
}

/// All zeros of a square-free polynomial, escalating precision up to `cap`
/// until the inclusion disks are pairwise disjoint.
pub fn find_roots(p: &Polynomial, precision: usize, cap: usize) -> Result<Vec<ApproxRoot>> {
    assert!(p.degree() >= 1, "find_roots on a constant polynomial");
    for prec in escalation_schedule(precision, cap.max(precision)) {
        if let Some(roots) = find_roots_once(p, prec) {
            return Ok(roots);
        }
    }
    Err(Error::PrecisionExhausted { cap })
}

/// One attempt at a fixed precision; `None` when the iteration stalls or the
/// disks overlap.
pub fn find_roots_once(p: &Polynomial, prec: usize) -> Option<Vec<ApproxRoot>> {
    if p.degree() == 1 {
        return Some(vec![linear_root(p, prec)]);
    }
    let approx = aberth(p, prec)?;
    let radii = smith_radii(p, &approx, prec);
    let roots: Vec<ApproxRoot> = approx
        .into_iter()
        .zip(radii)
        .map(|(value, radius)| ApproxRoot { value, radius })
        .collect();
    disks_disjoint(&roots).then_some(roots)
}

fn linear_root(p: &Polynomial, prec: usize) -> ApproxRoot {
    let exact = -&(&p.coeff(0) / &p.coeff(1));
    let value = BigComplex::from_gaussian(&exact, prec);
    let radius = BigReal::sqrt_upper(&(&value.to_gaussian() - &exact).norm_sqr(), prec);
    ApproxRoot { value, radius }
}

/// True when `|zᵢ − zⱼ| > rᵢ + rⱼ` for every pair, decided exactly.
pub fn disks_disjoint(roots: &[ApproxRoot]) -> bool {
    let exact: Vec<(GaussianRational, BigRational)> = roots
        .iter()
        .map(|r| (r.value.to_gaussian(), r.radius.to_rational()))
        .collect();
    for (i, (zi, ri)) in exact.iter().enumerate() {
        for (zj, rj) in &exact[i + 1..] {
            let reach = ri + rj;
            if (zi - zj).norm_sqr() <= &reach * &reach {
                return false;
            }
        }
    }
    true
}

/// Smith radii `d·|Wᵢ|`, rounded upward.
pub fn smith_radii(p: &Polynomial, approx: &[BigComplex], prec: usize) -> Vec<BigReal> {
    let d = p.degree();
    let lead = p.leading();
    let exact: Vec<GaussianRational> = approx.iter().map(BigComplex::to_gaussian).collect();
    (0..exact.len())
        .into_par_iter()
        .map(|i| {
            let num = p.eval(&exact[i]);
            if num.is_zero() {
                return BigReal::zero(prec);
            }
            let den = exact
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(lead.clone(), |acc, (_, zj)| &acc * &(&exact[i] - zj));
            if den.is_zero() {
                // coincident approximations certify nothing
                return BigReal::from_i64(1, prec).mul(&BigReal::pow2(4096, prec));
            }
            let w2 = num.norm_sqr() / den.norm_sqr();
            let dd = BigRational::from_integer((d as i64).into());
            BigReal::sqrt_upper(&(w2 * &dd * &dd), prec)
        })
        .collect()
}

/// Cauchy-style bound `1 + max|cₖ|/|lead|` used for the starting circle.
fn initial_radius(coeffs: &[BigComplex]) -> f64 {
    let lead = coeffs.last().expect("nonempty").modulus().to_f64();
    let m = coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.modulus().to_f64())
        .fold(0.0, f64::max);
    1.0 + m / lead
}

fn horner(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = z.prec();
    let mut val = BigComplex::zero(prec);
    let mut der = BigComplex::zero(prec);
    for c in coeffs.iter().rev() {
        der = &(&der * z) + &val;
        val = &(&val * z) + c;
    }
    (val, der)
}

/// log₂ of `|w| / max(1, |z|)`, or `None` when `w` is zero.
fn relative_step_exponent(w: &BigComplex, z: &BigComplex) -> Option<i64> {
    let ew = w.modulus().exponent()?;
    let ez = z.modulus().exponent().unwrap_or(0).max(0);
    Some(ew - ez)
}

/// Aberth–Ehrlich iteration with in-place (Gauss–Seidel) updates.
pub fn aberth(p: &Polynomial, prec: usize) -> Option<Vec<BigComplex>> {
    aberth_with_floor(p, prec, -(prec as i64) / 2)
}

/// Aberth iteration that accepts a stall once the largest relative step has
/// fallen to `2^stall_floor`. Repeated zeros only resolve to a fraction of
/// the working precision, so clustering uses a much laxer floor.
fn aberth_with_floor(p: &Polynomial, prec: usize, stall_floor: i64) -> Option<Vec<BigComplex>> {
    let d = p.degree();
    let coeffs = p.to_complex(prec);
    let r0 = initial_radius(&coeffs);
    let mut z: Vec<BigComplex> = (0..d)
        .map(|k| {
            let theta = TAU * k as f64 / d as f64 + 0.4;
            BigComplex::from_f64(r0 * theta.cos(), r0 * theta.sin(), prec)
        })
        .collect();

    let target = -(prec as i64) + 8;
    let max_iter = 200 + 4 * prec;
    let mut best = i64::MAX;
    let mut stalled = 0;
    for _ in 0..max_iter {
        let mut worst = i64::MIN;
        for i in 0..d {
            let (val, der) = horner(&coeffs, &z[i]);
            if val.is_zero() {
                continue;
            }
            let w = if der.is_zero() {
                // nudge off a critical point
                z[i].scale(&BigReal::from_f64(1e-3, prec))
            } else {
                let ratio = &val / &der;
                let mut s = BigComplex::zero(prec);
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        let diff = &z[i] - zj;
                        if !diff.is_zero() {
                            s = &s + &diff.inv().expect("nonzero");
                        }
                    }
                }
                let denom = &BigComplex::one(prec) - &(&ratio * &s);
                if denom.is_zero() {
                    ratio
                } else {
                    &ratio / &denom
                }
            };
            if let Some(e) = relative_step_exponent(&w, &z[i]) {
                worst = worst.max(e);
            }
            z[i] = &z[i] - &w;
        }
        if worst <= target {
            return Some(z);
        }
        // certification decides whether a stalled result is usable
        if worst < best {
            best = worst;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 6 && best <= stall_floor {
                return Some(z);
            }
        }
    }
    None
}

/// Zeros of a polynomial that may have repeated roots: approximations are
/// computed at a higher working precision, then grouped when closer than
/// `tol` (by default [`cluster_tolerance`] at `prec`). Each group's center is
/// the mean of its members and its multiplicity the group size.
///
/// A zero of multiplicity `m` computed at `w` bits is only accurate to about
/// `w/m` bits, so `w` grows with the degree to keep every possible cluster
/// inside the tolerance.
pub fn clustered_roots(
    p: &Polynomial,
    prec: usize,
    tol: Option<&BigReal>,
) -> Option<Vec<(ApproxRoot, usize)>> {
    let work = (2 * prec).max(p.degree() * prec / 2 + 64);
    let (approx, radii) = if p.degree() == 1 {
        let r = linear_root(p, work);
        (vec![r.value], vec![r.radius])
    } else {
        let approx = aberth_with_floor(p, work, -16)?;
        let radii = smith_radii(p, &approx, work);
        (approx, radii)
    };
    let tol = match tol {
        Some(t) => t.clone(),
        None => {
            let max_mod = approx.iter().map(|z| z.modulus().to_f64()).fold(0.0, f64::max);
            cluster_tolerance(prec, max_mod)
        }
    };
    let tol = &tol;
    let n = approx.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if approx[i].dist(&approx[j]).cmp_value(tol).is_le() {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a.max(b)] = a.min(b);
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut label = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut group, i);
        if label[root] == usize::MAX {
            label[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[label[root]].push(i);
    }
    let out: Vec<(ApproxRoot, usize)> = clusters
        .into_iter()
        .map(|members| {
            let m = members.len();
            let sum = members
                .iter()
                .fold(GaussianRational::zero(), |acc, &i| &acc + &approx[i].to_gaussian());
            let center_exact = &sum / &GaussianRational::from_integer(m as i64);
            let value = BigComplex::from_gaussian(&center_exact, prec);
            let center = value.to_gaussian();
            let reach = members
                .iter()
                .map(|&i| {
                    let gap = BigReal::sqrt_upper(&(&approx[i].to_gaussian() - &center).norm_sqr(), work);
                    BigReal::from_rational_upper(
                        &(gap.to_rational() + radii[i].to_rational()),
                        prec,
                    )
                })
                .fold(BigReal::zero(prec), |a, b| a.max(&b));
            (ApproxRoot { value, radius: reach }, m)
        })
        .collect();
    let disks: Vec<ApproxRoot> = out.iter().map(|(r, _)| r.clone()).collect();
    disks_disjoint(&disks).then_some(out)
}

/// Default clustering tolerance `2^(-p/2) · (1 + max modulus)`.
pub fn cluster_tolerance(prec: usize, max_modulus: f64) -> BigReal {
    BigReal::pow2(-(prec as i64) / 2, prec).mul(&BigReal::from_f64(1.0 + max_modulus, prec))
}
