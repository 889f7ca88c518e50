//! Forward iteration, empirical ratio limits and the ratio map.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Exactness, GaussianRational, Scalar, DEFAULT_PRECISION};

/// Precision used for the tolerance comparisons of the empirical test.
const SPREAD_PRECISION: usize = 128;

/// A linear recurrence together with one of its solutions.
///
/// `initial` lists `a₋ₙ₊₁, …, a₀` in ascending index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceInstance {
    signature: Vec<GaussianRational>,
    initial: Vec<GaussianRational>,
    #[serde(default)]
    exactness: Exactness,
}

impl RecurrenceInstance {
    pub fn new(signature: Vec<GaussianRational>, initial: Vec<GaussianRational>) -> Result<Self> {
        Self::with_exactness(signature, initial, Exactness::Exact)
    }

    pub fn with_exactness(
        signature: Vec<GaussianRational>,
        initial: Vec<GaussianRational>,
        exactness: Exactness,
    ) -> Result<Self> {
        let last = signature.last().ok_or(Error::EmptySignature)?;
        if last.is_zero() {
            return Err(Error::ZeroTrailingCoefficient);
        }
        if signature.len() != initial.len() {
            return Err(Error::LengthMismatch {
                signature: signature.len(),
                initial: initial.len(),
            });
        }
        Ok(Self {
            signature,
            initial,
            exactness,
        })
    }

    /// Shorthand for integer signatures and initial conditions.
    pub fn from_integers(signature: &[i64], initial: &[i64]) -> Result<Self> {
        let conv = |v: &[i64]| v.iter().map(|&x| GaussianRational::from_integer(x)).collect();
        Self::new(conv(signature), conv(initial))
    }

    pub fn order(&self) -> usize {
        self.signature.len()
    }

    pub fn signature(&self) -> &[GaussianRational] {
        &self.signature
    }

    pub fn initial(&self) -> &[GaussianRational] {
        &self.initial
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// `a₋ᵢ` for `0 ≤ i < n`.
    pub fn a_minus(&self, i: usize) -> &GaussianRational {
        &self.initial[self.order() - 1 - i]
    }

    pub fn is_zero_solution(&self) -> bool {
        self.initial.iter().all(Zero::is_zero)
    }

    /// The same recurrence with every initial condition multiplied by `k`.
    pub fn scaled(&self, k: &GaussianRational) -> Self {
        Self {
            initial: self.initial.iter().map(|a| a * k).collect(),
            ..self.clone()
        }
    }
}

/// Exact terms `F₋ₙ₊₁, …, F_{k_max}`; entry `t` holds `F_{t−n+1}`.
pub fn iterate(inst: &RecurrenceInstance, k_max: usize) -> Vec<GaussianRational> {
    let n = inst.order();
    let mut terms = inst.initial.clone();
    terms.reserve(k_max);
    for t in n..n + k_max {
        let next = inst
            .signature
            .iter()
            .enumerate()
            .filter(|(_, b)| !b.is_zero())
            .fold(GaussianRational::zero(), |acc, (i, b)| acc + b * &terms[t - 1 - i]);
        terms.push(next);
    }
    terms
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RatioStatus {
    Converged(BigComplex),
    Oscillating,
    ZeroTermsPersist,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimate {
    pub status: RatioStatus,
    /// Largest index `k` with `F_k = 0`.
    pub k0: Option<i64>,
    /// Number of terms generated, initial conditions included.
    pub samples_used: usize,
}

/// Number of consecutive ratios that must agree before convergence is declared.
pub fn convergence_window(n: usize) -> usize {
    (2 * n).max(8)
}

/// Estimates `lim F_{k+1}/F_k` from exact terms up to `k_max`.
///
/// `k_max` is raised to `n + window` when smaller. Ratios are formed exactly
/// and only rounded for the tolerance test.
pub fn empirical_ratio(inst: &RecurrenceInstance, k_max: usize, tol: f64) -> RatioEstimate {
    let n = inst.order();
    let window = convergence_window(n);
    let k_max = k_max.max(n + window);
    let terms = iterate(inst, k_max);
    let offset = n as i64 - 1;
    let k0 = terms.iter().rposition(Zero::is_zero).map(|t| t as i64 - offset);
    let samples_used = terms.len();
    let last = terms.len() - 1;

    let status = match window_ratios(&terms, last, window) {
        None => RatioStatus::ZeroTermsPersist,
        Some(ratios) => {
            let spread = spread(&ratios);
            if spread < tol {
                let value = ratios.last().expect("nonempty window");
                RatioStatus::Converged(BigComplex::from_gaussian(value, DEFAULT_PRECISION))
            } else {
                let half = (last / 2).max(window);
                match window_ratios(&terms, half, window) {
                    Some(earlier) if spread > 0.9 * self::spread(&earlier) => RatioStatus::Oscillating,
                    _ => RatioStatus::Undecided,
                }
            }
        }
    };
    RatioEstimate {
        status,
        k0,
        samples_used,
    }
}

/// The `window` exact ratios ending at term position `end`, or `None` when a
/// denominator vanishes.
fn window_ratios(terms: &[GaussianRational], end: usize, window: usize) -> Option<Vec<GaussianRational>> {
    (end - window + 1..=end)
        .map(|t| terms[t].checked_div(&terms[t - 1]))
        .collect()
}

/// Largest pairwise distance among the values.
fn spread(ratios: &[GaussianRational]) -> f64 {
    let approx: Vec<BigComplex> = ratios
        .iter()
        .map(|r| BigComplex::from_gaussian(r, SPREAD_PRECISION))
        .collect();
    let mut worst = 0.0f64;
    for (i, a) in approx.iter().enumerate() {
        for b in &approx[i + 1..] {
            worst = worst.max(a.dist(b).to_f64());
        }
    }
    worst
}

/// One application of the ratio map
/// `f(z₁,…,zₙ) = (z₂,…,zₙ, b₁ + b₂/zₙ + b₃/(zₙ₋₁zₙ) + ⋯ + bₙ/(z₂⋯zₙ))`.
pub fn ratio_map_step<S: Scalar>(signature: &[GaussianRational], z: &[S]) -> Result<Vec<S>> {
    let n = signature.len();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z.len(),
        });
    }
    if n == 0 {
        return Err(Error::EmptySignature);
    }
    if let Some(i) = z.iter().position(Scalar::is_zero_value) {
        return Err(Error::ZeroComponent(i));
    }
    let mut prod = z[0].one_like();
    let mut last = z[0].lift(&signature[0]);
    for m in 2..=n {
        prod = prod * z[n + 1 - m].clone();
        last = last + z[0].lift(&signature[m - 1]) / prod.clone();
    }
    let mut out: Vec<S> = z[1..].to_vec();
    out.push(last);
    Ok(out)
}

/// Whether `(Ψ,…,Ψ)` is a fixed point of the ratio map to within `tol` in
/// every component.
pub fn fixed_point_check(signature: &[GaussianRational], psi: &BigComplex, tol: f64) -> bool {
    let n = signature.len();
    let z = vec![psi.clone(); n];
    match ratio_map_step(signature, &z) {
        Ok(image) => image.iter().all(|w| (w - psi).modulus().to_f64() < tol),
        Err(_) => false,
    }
}

/// The exact ratio vector `(F_{k+2}/F_{k+1}, …, F_{k+n+1}/F_{k+n})` at term
/// position `start` (so that its first ratio is `terms[start+1]/terms[start]`).
pub fn ratio_vector(terms: &[GaussianRational], start: usize, n: usize) -> Option<Vec<GaussianRational>> {
    (start..start + n)
        .map(|t| terms.get(t + 1)?.checked_div(&terms[t]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_integer(n)
    }

    fn ints(v: &[GaussianRational]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            RecurrenceInstance::from_integers(&[1, 0], &[1, 1]),
            Err(Error::ZeroTrailingCoefficient)
        );
        assert_eq!(
            RecurrenceInstance::from_integers(&[1, 1], &[1]),
            Err(Error::LengthMismatch {
                signature: 2,
                initial: 1
            })
        );
        assert_eq!(RecurrenceInstance::from_integers(&[], &[]), Err(Error::EmptySignature));
    }

    #[test]
    fn iterate_examples() {
        let fib = RecurrenceInstance::from_integers(&[1, 1], &[0, 1]).unwrap();
        assert_eq!(ints(&iterate(&fib, 6)), ["0", "1", "1", "2", "3", "5", "8", "13"]);
        let constant = RecurrenceInstance::from_integers(&[2, -1], &[1, 1]).unwrap();
        assert_eq!(ints(&iterate(&constant, 4)), ["1"; 6]);
        let linear = RecurrenceInstance::from_integers(&[2, -1], &[0, 1]).unwrap();
        assert_eq!(ints(&iterate(&linear, 3)), ["0", "1", "2", "3", "4"]);
    }

    #[test]
    fn empirical_examples() {
        let fib = RecurrenceInstance::from_integers(&[1, 1], &[0, 1]).unwrap();
        let est = empirical_ratio(&fib, 200, 1e-12);
        let RatioStatus::Converged(v) = &est.status else {
            panic!("{est:?}")
        };
        assert!((v.to_c64().0 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert_eq!(est.k0, Some(-1));

        let constant = RecurrenceInstance::from_integers(&[2, -1], &[1, 1]).unwrap();
        let est = empirical_ratio(&constant, 200, 1e-12);
        assert_eq!(est.status, RatioStatus::Converged(BigComplex::one(DEFAULT_PRECISION)));
        assert_eq!(est.k0, None);

        let alt = RecurrenceInstance::from_integers(&[0, 1], &[1, 2]).unwrap();
        assert_eq!(empirical_ratio(&alt, 200, 1e-12).status, RatioStatus::Oscillating);
    }

    #[test]
    fn slow_convergence_is_undecided() {
        // F_k = k + 1: ratios approach 1 only like 1/k
        let linear = RecurrenceInstance::from_integers(&[2, -1], &[0, 1]).unwrap();
        assert_eq!(empirical_ratio(&linear, 200, 1e-12).status, RatioStatus::Undecided);
    }

    #[test]
    fn vanishing_terms_persist() {
        // 1, 0, -1, 0, 1, ...
        let rot = RecurrenceInstance::from_integers(&[0, -1], &[1, 0]).unwrap();
        let est = empirical_ratio(&rot, 50, 1e-12);
        assert_eq!(est.status, RatioStatus::ZeroTermsPersist);
        assert!(est.k0.unwrap() >= 49);
    }

    #[test]
    fn ratio_map_examples() {
        let prec = 256;
        let phi = BigComplex::from_real(
            crate::numerics::BigReal::from_i64(5, prec)
                .sqrt()
                .add(&crate::numerics::BigReal::one(prec))
                .div(&crate::numerics::BigReal::from_i64(2, prec)),
        );
        let out = ratio_map_step(&[g(1), g(1)], &[phi.clone(), phi.clone()]).unwrap();
        assert!((&out[1] - &phi).modulus().to_f64() < 1e-70);

        assert_eq!(ratio_map_step(&[g(2), g(-1)], &[g(1), g(1)]).unwrap(), vec![g(1), g(1)]);
        assert_eq!(ratio_map_step(&[g(1), g(1)], &[g(1), g(1)]).unwrap(), vec![g(1), g(2)]);
        assert_eq!(
            ratio_map_step(&[g(1), g(1)], &[g(1), g(0)]),
            Err(Error::ZeroComponent(1))
        );
        assert_eq!(
            ratio_map_step(&[g(1), g(1)], &[g(1)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
        assert_eq!(ratio_map_step(&[g(3)], &[g(7)]).unwrap(), vec![g(3)]);
    }

    #[test]
    fn fixed_point_examples() {
        let prec = 256;
        let five = crate::numerics::BigReal::from_i64(5, prec);
        let phi = BigComplex::from_real(
            five.sqrt()
                .add(&crate::numerics::BigReal::one(prec))
                .div(&crate::numerics::BigReal::from_i64(2, prec)),
        );
        assert!(fixed_point_check(&[g(1), g(1)], &phi, 1e-20));
        assert!(!fixed_point_check(&[g(1), g(1)], &BigComplex::one(prec), 1e-20));
        assert!(fixed_point_check(&[g(0), g(1)], &BigComplex::from_i64(-1, prec), 1e-20));
    }

    #[test]
    fn shift_identity_on_tribonacci_like() {
        let inst = RecurrenceInstance::new(
            vec![g(1), "1/2+1 i".parse().unwrap(), g(-3)],
            vec![g(2), g(-1), "1 i".parse().unwrap()],
        )
        .unwrap();
        let terms = iterate(&inst, 30);
        for start in 0..20 {
            let z = ratio_vector(&terms, start, 3).unwrap();
            let next = ratio_vector(&terms, start + 1, 3).unwrap();
            assert_eq!(ratio_map_step(inst.signature(), &z).unwrap(), next);
        }
    }
}
