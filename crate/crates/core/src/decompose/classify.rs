use serde::{Deserialize, Serialize};

use super::bounds::{self, mag, num};
use super::solve::Decomposition;
use crate::charpoly::{RootEntry, RootSet};
use crate::numerics::{BigComplex, BigReal};

/// Tolerances for deciding that a computed quantity is zero and that two
/// moduli are equal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroPolicy {
    /// A coefficient is zero when at most `rel_tol` times the largest one
    /// (or within its own error bound).
    pub rel_tol: f64,
    /// Moduli tie when within their radii plus `abs_tol · R`.
    pub abs_tol: f64,
}

impl ZeroPolicy {
    /// `10⁻³⁰` at 256 bits, scaled so that the exponent grows with precision.
    pub fn for_precision(prec: usize) -> Self {
        let tol = 10f64.powf(-30.0 * prec as f64 / 256.0);
        Self {
            rel_tol: tol,
            abs_tol: tol,
        }
    }
}

/// Outcome of a zero test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ZeroTest {
    Zero,
    Nonzero,
}

/// Zero test of `value` against `max(err, rel·scale)`; the flag is set when
/// the value lies within a factor of ten of that threshold.
pub(crate) fn zero_test(value: &BigReal, err: &BigReal, scale: &BigReal, rel_tol: f64) -> (ZeroTest, bool) {
    let threshold = err.max(&num(rel_tol).mul(scale));
    let test = if value.cmp_value(&threshold).is_le() {
        ZeroTest::Zero
    } else {
        ZeroTest::Nonzero
    };
    let lo = threshold.div(&num(10.0));
    let hi = threshold.mul(&num(10.0));
    let borderline = !threshold.is_zero() && value.cmp_value(&lo).is_gt() && value.cmp_value(&hi).is_le();
    (test, borderline)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    /// A unique zero of maximal modulus attains the largest top power.
    AsymptoticallySimple { dominant: usize, top_power: usize },
    /// Zeros of maximal modulus sharing the largest top power.
    NotAsymptoticallySimple { witnesses: Vec<usize> },
    /// Coefficients `(i, j)` whose zero test was too close to call.
    Borderline { entries: Vec<(usize, usize)> },
}

/// A zero of `P` that appears in the solution, with the largest power `j`
/// whose coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivingZero {
    pub zero_index: usize,
    pub value: BigComplex,
    pub top_power: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionCharPoly {
    pub surviving: Vec<SurvivingZero>,
    pub classification: Classification,
    /// Tied zeros of maximal modulus carry different top powers.
    pub mixed_top_powers: bool,
}

impl SolutionCharPoly {
    pub fn is_asymptotically_simple(&self) -> bool {
        matches!(self.classification, Classification::AsymptoticallySimple { .. })
    }
}

/// The zeros that survive in the solution and the simplicity classification.
pub fn solution_char_poly(d: &Decomposition, policy: &ZeroPolicy) -> SolutionCharPoly {
    let scale = d
        .iter()
        .map(|(_, _, c)| mag(c))
        .fold(bounds::zero(), |acc, m| acc.max(&m));
    let mut surviving = Vec::new();
    let mut borderline = Vec::new();
    for (i, entry) in d.roots().entries().iter().enumerate() {
        let mut top = None;
        for (j, c) in d.coefficients()[i].iter().enumerate() {
            let (test, close) = zero_test(&mag(c), d.error(i, j), &scale, policy.rel_tol);
            if close {
                borderline.push((i, j));
            }
            if test == ZeroTest::Nonzero {
                top = Some(j);
            }
        }
        if let Some(top_power) = top {
            surviving.push(SurvivingZero {
                zero_index: i,
                value: entry.value.clone(),
                top_power,
            });
        }
    }
    if surviving.is_empty() && borderline.is_empty() {
        // nothing cleared the threshold: every coefficient is in doubt
        borderline = d.iter().map(|(i, j, _)| (i, j)).collect();
    }
    let candidates: Vec<(usize, usize)> = surviving.iter().map(|s| (s.zero_index, s.top_power)).collect();
    let (classification, mixed_top_powers) = if borderline.is_empty() {
        classify(d.roots(), &candidates, policy)
    } else {
        let mixed = !candidates.is_empty() && classify(d.roots(), &candidates, policy).1;
        (Classification::Borderline { entries: borderline }, mixed)
    };
    SolutionCharPoly {
        surviving,
        classification,
        mixed_top_powers,
    }
}

/// Classifies `P` itself, where every zero takes top power `μᵢ − 1`.
pub fn classify_char_poly(roots: &RootSet, policy: &ZeroPolicy) -> Classification {
    let candidates: Vec<(usize, usize)> = roots
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.multiplicity - 1))
        .collect();
    classify(roots, &candidates, policy).0
}

/// Whether `P` has a unique zero of maximal multiplicity among its zeros of
/// maximal modulus.
pub fn is_asymptotically_simple(roots: &RootSet, policy: &ZeroPolicy) -> bool {
    matches!(classify_char_poly(roots, policy), Classification::AsymptoticallySimple { .. })
}

/// Dominance among `(zero index, top power)` candidates. The second value
/// reports whether the tied zeros of maximal modulus have mixed top powers.
fn classify(roots: &RootSet, candidates: &[(usize, usize)], policy: &ZeroPolicy) -> (Classification, bool) {
    if candidates.is_empty() {
        return (Classification::NotAsymptoticallySimple { witnesses: Vec::new() }, false);
    }
    let moduli: Vec<BigReal> = candidates.iter().map(|&(i, _)| mag(&roots.get(i).value)).collect();
    let lead = (0..candidates.len())
        .max_by(|&a, &b| moduli[a].cmp_value(&moduli[b]).then(b.cmp(&a)))
        .expect("nonempty");
    let r = &moduli[lead];
    let lead_entry = roots.get(candidates[lead].0);
    let tied: Vec<usize> = (0..candidates.len())
        .filter(|&c| {
            let other = roots.get(candidates[c].0);
            moduli_tie(r, lead_entry, &moduli[c], other, policy)
        })
        .collect();
    let top = tied.iter().map(|&c| candidates[c].1).max().expect("lead ties itself");
    let winners: Vec<usize> = tied.iter().copied().filter(|&c| candidates[c].1 == top).collect();
    let mixed = tied.iter().any(|&c| candidates[c].1 != top);
    let classification = match winners.as_slice() {
        [only] => Classification::AsymptoticallySimple {
            dominant: candidates[*only].0,
            top_power: top,
        },
        _ => Classification::NotAsymptoticallySimple {
            witnesses: winners.iter().map(|&c| candidates[c].0).collect(),
        },
    };
    (classification, mixed)
}

fn moduli_tie(r: &BigReal, lead: &RootEntry, m: &BigReal, other: &RootEntry, policy: &ZeroPolicy) -> bool {
    let gap = r.sub(m).abs();
    let allowance = lead
        .radius
        .with_precision(bounds::BOUND_PREC)
        .add(&other.radius.with_precision(bounds::BOUND_PREC))
        .add(&num(policy.abs_tol).mul(r));
    gap.cmp_value(&allowance).is_le()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::{root_set, RootOptions};
    use crate::decompose::{build_basis_matrix, solve_coefficients};
    use crate::numerics::Exactness;
    use crate::recurrence::RecurrenceInstance;

    fn analyse(sig: &[i64], init: &[i64]) -> SolutionCharPoly {
        let inst = RecurrenceInstance::from_integers(sig, init).unwrap();
        let rs = root_set(inst.signature(), Exactness::Exact, &RootOptions::default()).unwrap();
        let d = solve_coefficients(&rs, &build_basis_matrix(&rs), inst.initial()).unwrap();
        solution_char_poly(&d, &ZeroPolicy::for_precision(rs.precision()))
    }

    fn summary(s: &SolutionCharPoly) -> Vec<(f64, usize)> {
        s.surviving.iter().map(|z| (z.value.to_c64().0, z.top_power)).collect()
    }

    #[test]
    fn constant_sequence_is_simple() {
        let s = analyse(&[2, -1], &[1, 1]);
        assert_eq!(summary(&s), vec![(1.0, 0)]);
        assert_eq!(
            s.classification,
            Classification::AsymptoticallySimple {
                dominant: 0,
                top_power: 0
            }
        );
    }

    #[test]
    fn alternating_sequence_ties() {
        let s = analyse(&[0, 1], &[1, 2]);
        assert_eq!(summary(&s), vec![(1.0, 0), (-1.0, 0)]);
        assert_eq!(
            s.classification,
            Classification::NotAsymptoticallySimple { witnesses: vec![0, 1] }
        );
        assert!(!s.mixed_top_powers);
    }

    #[test]
    fn linear_growth_keeps_top_power() {
        let s = analyse(&[2, -1], &[0, 1]);
        assert_eq!(summary(&s), vec![(1.0, 1)]);
        assert!(s.is_asymptotically_simple());
    }

    #[test]
    fn vanishing_coefficient_drops_a_zero() {
        let s = analyse(&[0, 1], &[1, 1]);
        assert_eq!(summary(&s), vec![(1.0, 0)]);
        assert!(s.is_asymptotically_simple());
    }

    #[test]
    fn mixed_top_powers_are_flagged() {
        // (λ-1)^2 (λ+1): F_k = k + (-1)^k
        let s = analyse(&[1, 1, -1], &[-1, -2, 1]);
        assert!(s.is_asymptotically_simple(), "{s:?}");
        assert!(s.mixed_top_powers);
    }

    #[test]
    fn char_poly_simplicity() {
        let policy = ZeroPolicy::for_precision(256);
        let rs = |v: &[i64]| {
            let sig: Vec<_> = v.iter().map(|&x| crate::numerics::GaussianRational::from_integer(x)).collect();
            root_set(&sig, Exactness::Exact, &RootOptions::default()).unwrap()
        };
        assert!(is_asymptotically_simple(&rs(&[2, -1]), &policy));
        assert!(is_asymptotically_simple(&rs(&[1, 1]), &policy));
        assert!(!is_asymptotically_simple(&rs(&[0, 1]), &policy));
        // λ² + 1: conjugate pair of equal modulus
        assert!(!is_asymptotically_simple(&rs(&[0, -1]), &policy));
    }

    #[test]
    fn policy_scales_with_precision() {
        assert!((ZeroPolicy::for_precision(256).rel_tol / 1e-30 - 1.0).abs() < 1e-9);
        assert!((ZeroPolicy::for_precision(512).rel_tol / 1e-60 - 1.0).abs() < 1e-9);
    }
}
