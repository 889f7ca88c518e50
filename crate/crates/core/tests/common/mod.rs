//! Planted-root instances: the characteristic polynomial is expanded from
//! known zeros, so zeros and multiplicities are ground truth.

#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ratio_limit::numerics::GaussianRational;
use ratio_limit::recurrence::RecurrenceInstance;

pub fn gi(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_parts((re, 1), (im, 1))
}

pub const INTEGER_ROOTS: [(i64, i64); 8] = [(1, 0), (-1, 0), (2, 0), (-2, 0), (3, 0), (-3, 0), (4, 0), (-4, 0)];

pub const GAUSSIAN_ROOTS: [(i64, i64); 10] =
    [(0, 1), (0, -1), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1), (2, 1), (1, -2)];

#[derive(Clone, Debug)]
pub struct Planted {
    /// Distinct zeros with multiplicities.
    pub roots: Vec<(GaussianRational, usize)>,
    pub instance: RecurrenceInstance,
}

/// `(b₁, …, bₙ)` with `λⁿ − b₁λⁿ⁻¹ − ⋯ − bₙ = Π (λ − r)^m`, expanded by
/// repeated multiplication by linear factors.
pub fn signature_from_roots(roots: &[(GaussianRational, usize)]) -> Vec<GaussianRational> {
    // coefficients, highest power first
    let mut poly = vec![GaussianRational::one()];
    for (r, m) in roots {
        for _ in 0..*m {
            let mut next = poly.clone();
            next.push(GaussianRational::zero());
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = &next[k + 1] - &(c * r);
            }
            poly = next;
        }
    }
    poly[1..].iter().map(|c| -c).collect()
}

/// `Σ c_{ij} k^j r_i^k` evaluated exactly at `k = −n+1, …, 0`.
pub fn initial_from_terms(terms: &[(GaussianRational, usize, GaussianRational)], n: usize) -> Vec<GaussianRational> {
    (-(n as i64) + 1..=0)
        .map(|k| {
            terms.iter().fold(GaussianRational::zero(), |acc, (r, j, c)| {
                let kj = GaussianRational::from_integer(k.pow(*j as u32));
                acc + c * &kj * r.powi(k).expect("nonzero root")
            })
        })
        .collect()
}

fn pick_roots(rng: &mut ChaCha8Rng, n: usize, gaussian: bool) -> Vec<(GaussianRational, usize)> {
    let pool: Vec<(i64, i64)> = if gaussian {
        INTEGER_ROOTS.iter().chain(GAUSSIAN_ROOTS.iter()).copied().collect()
    } else {
        INTEGER_ROOTS.to_vec()
    };
    let distinct = rng.gen_range(1..=n);
    let chosen: Vec<(i64, i64)> = pool.choose_multiple(rng, distinct).copied().collect();
    let mut mult = vec![1; distinct];
    for _ in distinct..n {
        let i = rng.gen_range(0..distinct);
        mult[i] += 1;
    }
    chosen.into_iter().zip(mult).map(|((a, b), m)| (gi(a, b), m)).collect()
}

fn small_int(rng: &mut ChaCha8Rng) -> GaussianRational {
    GaussianRational::from_integer(rng.gen_range(-5..=5))
}

/// Initial conditions that excite only part of the basis: a random
/// combination of `k^j r^k` over a random subset of (zero, power) pairs.
fn partial_initial(rng: &mut ChaCha8Rng, roots: &[(GaussianRational, usize)], n: usize) -> Vec<GaussianRational> {
    loop {
        let mut terms = Vec::new();
        for (r, m) in roots {
            for j in 0..*m {
                if rng.gen_bool(0.5) {
                    let c = GaussianRational::from_integer(*[-3, -2, -1, 1, 2, 3].choose(rng).unwrap());
                    terms.push((r.clone(), j, c));
                }
            }
        }
        if !terms.is_empty() {
            return initial_from_terms(&terms, n);
        }
    }
}

/// The mixed corpus: orders 1–5, mostly integer zeros, a quarter with
/// Gaussian-integer zeros; initial conditions random, unit, or partial.
pub fn corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<Planted> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let gaussian = rng.gen_bool(0.25);
            let roots = pick_roots(rng, n, gaussian);
            let initial = match rng.gen_range(0..4) {
                0 => {
                    let mut v = vec![GaussianRational::zero(); n];
                    v[n - 1] = GaussianRational::one();
                    v
                }
                1 => partial_initial(rng, &roots, n),
                _ => loop {
                    let v: Vec<_> = (0..n).map(|_| small_int(rng)).collect();
                    if v.iter().any(|x| !x.is_zero()) {
                        break v;
                    }
                },
            };
            let instance = RecurrenceInstance::new(signature_from_roots(&roots), initial).expect("valid planted instance");
            Planted { roots, instance }
        })
        .collect()
}

/// A planted instance whose characteristic polynomial has a dominant zero of
/// maximal multiplicity, returned alongside that zero; initial `(0,…,0,1)`.
pub fn simple_dominant(rng: &mut ChaCha8Rng) -> (Planted, GaussianRational) {
    let n = rng.gen_range(1..=5);
    let mut roots: Vec<(GaussianRational, usize)> = Vec::new();
    let dominant;
    if n >= 3 && rng.gen_bool(0.25) {
        // a tie in modulus broken by multiplicity
        let (a, b) = *[(2, 0), (-2, 0), (0, 2), (0, -2)].choose(rng).unwrap();
        dominant = gi(a, b);
        roots.push((dominant.clone(), 2));
        roots.push((gi(-a, -b), 1));
    } else {
        let (a, b) = *[(3, 0), (-3, 0), (4, 0), (-4, 0), (0, 3), (0, -3), (2, 2), (-2, 2)].choose(rng).unwrap();
        dominant = gi(a, b);
        roots.push((dominant.clone(), if n >= 2 && rng.gen_bool(0.3) { 2 } else { 1 }));
    }
    let small: [(i64, i64); 10] = [(1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (0, 2)];
    let mut used: usize = roots.iter().map(|r| r.1).sum();
    let mut pool: Vec<(i64, i64)> = small
        .iter()
        .copied()
        .filter(|&(a, b)| roots.iter().all(|(r, _)| *r != gi(a, b)) && a * a + b * b < 4)
        .collect();
    pool.shuffle(rng);
    while used < n {
        let (a, b) = pool.pop().expect("pool large enough");
        let m = rng.gen_range(1..=n - used);
        roots.push((gi(a, b), m));
        used += m;
    }
    let mut initial = vec![GaussianRational::zero(); n];
    initial[n - 1] = GaussianRational::one();
    let instance = RecurrenceInstance::new(signature_from_roots(&roots), initial).expect("valid planted instance");
    (Planted { roots, instance }, dominant)
}

/// Distance as a double between an approximation and an exact value.
pub fn distance(z: &ratio_limit::numerics::BigComplex, exact: &GaussianRational) -> f64 {
    let e = ratio_limit::numerics::BigComplex::from_gaussian(exact, z.prec());
    z.dist(&e).to_f64()
}
