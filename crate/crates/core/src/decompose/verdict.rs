use serde::{Deserialize, Serialize};

use super::bounds::{self, mag, num, unit_roundoff};
use super::classify::{classify_char_poly, solution_char_poly, zero_test, Classification, SolutionCharPoly, ZeroPolicy, ZeroTest};
use super::matrix::build_basis_matrix;
use super::solve::{solve_coefficients, Decomposition};
use crate::charpoly::{cluster_tolerance, root_set, RootOptions, RootSet, DEFAULT_PRECISION_CAP};
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, DEFAULT_PRECISION};
use crate::recurrence::RecurrenceInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Starting precision in bits.
    pub precision: usize,
    /// Largest precision tried before giving up.
    pub cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            cap: DEFAULT_PRECISION_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    LimitExists { value: BigComplex, zero_index: usize },
    NoLimit,
    Indeterminate { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Precision of the final attempt.
    pub precision: usize,
    pub cap: usize,
    pub policy: ZeroPolicy,
    pub condition_estimate: Option<f64>,
    /// Number of times the precision was doubled after the root stage.
    pub escalations: usize,
    pub mixed_top_powers: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// `None` when `P` has no dominant zero of maximal multiplicity.
    pub dubeau_holds: Option<bool>,
    pub diagnostics: Diagnostics,
}

impl Verdict {
    pub fn limit(&self) -> Option<&BigComplex> {
        match &self.outcome {
            Outcome::LimitExists { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Everything computed on the way to a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub verdict: Verdict,
    pub roots: Option<RootSet>,
    pub decomposition: Option<Decomposition>,
    pub solution: Option<SolutionCharPoly>,
}

/// Decides whether `F_{k+1}/F_k` converges and to which zero of `P`.
pub fn predict_ratio_limit(inst: &RecurrenceInstance, config: &Config) -> Result<Verdict> {
    analyze(inst, config).map(|a| a.verdict)
}

/// Runs the full pipeline: zeros of `P`, basis matrix, coefficients, the
/// zeros that survive in the solution and their classification. Borderline
/// zero tests and ill-conditioned solves are retried at doubled precision
/// up to `config.cap`.
pub fn analyze(inst: &RecurrenceInstance, config: &Config) -> Result<Analysis> {
    let cap = config.cap.max(config.precision);
    let mut prec = config.precision;
    let mut escalations = 0;
    let mut condition = None;
    loop {
        let opts = RootOptions { precision: prec, cap };
        let roots = match root_set(inst.signature(), inst.exactness(), &opts) {
            Ok(r) => r,
            Err(Error::PrecisionExhausted { .. }) => {
                let diagnostics = Diagnostics {
                    precision: cap,
                    cap,
                    policy: ZeroPolicy::for_precision(cap),
                    condition_estimate: condition,
                    escalations,
                    mixed_top_powers: false,
                };
                return Ok(indeterminate("zeros of P could not be separated", None, diagnostics, None, None));
            }
            Err(e) => return Err(e),
        };
        let p = roots.precision();
        let policy = ZeroPolicy::for_precision(p);
        let dubeau = dubeau_with_roots(inst, &roots, &policy);
        let mut diagnostics = Diagnostics {
            precision: p,
            cap,
            policy,
            condition_estimate: condition,
            escalations,
            mixed_top_powers: false,
        };
        if inst.is_zero_solution() {
            return Ok(indeterminate("zero solution", dubeau, diagnostics, Some(roots), None));
        }
        let can_escalate = p * 2 <= cap;
        let matrix = build_basis_matrix(&roots);
        let d = match solve_coefficients(&roots, &matrix, inst.initial()) {
            Ok(d) => d,
            Err(Error::IllConditioned { estimate, .. }) => {
                condition = Some(estimate);
                if can_escalate {
                    prec = p * 2;
                    escalations += 1;
                    continue;
                }
                diagnostics.condition_estimate = condition;
                return Ok(indeterminate("basis matrix too ill-conditioned", dubeau, diagnostics, Some(roots), None));
            }
            Err(e) => return Err(e),
        };
        condition = Some(d.condition_estimate());
        diagnostics.condition_estimate = condition;
        let solution = solution_char_poly(&d, &policy);
        diagnostics.mixed_top_powers = solution.mixed_top_powers;
        let outcome = match &solution.classification {
            Classification::Borderline { .. } if can_escalate => {
                prec = p * 2;
                escalations += 1;
                continue;
            }
            Classification::Borderline { entries } => Outcome::Indeterminate {
                reason: format!("zero test undecided for coefficients {entries:?}"),
            },
            Classification::AsymptoticallySimple { dominant, .. } => Outcome::LimitExists {
                value: roots.get(*dominant).value.clone(),
                zero_index: *dominant,
            },
            Classification::NotAsymptoticallySimple { .. } => Outcome::NoLimit,
        };
        return Ok(Analysis {
            verdict: Verdict {
                outcome,
                dubeau_holds: dubeau,
                diagnostics,
            },
            roots: Some(roots),
            decomposition: Some(d),
            solution: Some(solution),
        });
    }
}

fn indeterminate(
    reason: &str,
    dubeau: Option<bool>,
    diagnostics: Diagnostics,
    roots: Option<RootSet>,
    decomposition: Option<Decomposition>,
) -> Analysis {
    Analysis {
        verdict: Verdict {
            outcome: Outcome::Indeterminate {
                reason: reason.to_owned(),
            },
            dubeau_holds: dubeau,
            diagnostics,
        },
        roots,
        decomposition,
        solution: None,
    }
}

/// Whether the initial conditions satisfy the sufficient condition
/// `a₀λ₀ⁿ⁻¹ + Σᵢ a₋ᵢ Σⱼ b_{i+j} λ₀^{n−j−1} ≠ 0` at the dominant zero `λ₀`.
///
/// Errors with `NotApplicable` when `P` has no dominant zero of maximal
/// multiplicity or `lambda0` is not that zero.
pub fn dubeau_condition(inst: &RecurrenceInstance, lambda0: &BigComplex) -> Result<bool> {
    let prec = lambda0.prec().max(DEFAULT_PRECISION);
    let roots = root_set(
        inst.signature(),
        inst.exactness(),
        &RootOptions {
            precision: prec,
            cap: DEFAULT_PRECISION_CAP.max(prec),
        },
    )?;
    let policy = ZeroPolicy::for_precision(roots.precision());
    let Classification::AsymptoticallySimple { dominant, .. } = classify_char_poly(&roots, &policy) else {
        return Err(Error::NotApplicable(
            "characteristic polynomial has no dominant zero of maximal multiplicity".into(),
        ));
    };
    let entry = roots.get(dominant);
    let gap = lambda0.with_precision(roots.precision()).dist(&entry.value);
    let allowed = cluster_tolerance(lambda0.prec(), mag(&entry.value).to_f64());
    if gap.cmp_value(&allowed).is_gt() {
        return Err(Error::NotApplicable("λ₀ is not the dominant zero of P".into()));
    }
    let radius = entry.radius.with_precision(bounds::BOUND_PREC).max(&gap.with_precision(bounds::BOUND_PREC));
    Ok(dubeau_expression_nonzero(inst, lambda0, &radius, &policy))
}

fn dubeau_with_roots(inst: &RecurrenceInstance, roots: &RootSet, policy: &ZeroPolicy) -> Option<bool> {
    match classify_char_poly(roots, policy) {
        Classification::AsymptoticallySimple { dominant, .. } => {
            let e = roots.get(dominant);
            Some(dubeau_expression_nonzero(inst, &e.value, &e.radius, policy))
        }
        _ => None,
    }
}

/// Zero test of the expression at `λ₀`, known to within `radius`.
fn dubeau_expression_nonzero(
    inst: &RecurrenceInstance,
    lambda0: &BigComplex,
    radius: &crate::numerics::BigReal,
    policy: &ZeroPolicy,
) -> bool {
    let n = inst.order();
    let prec = lambda0.prec();
    let b = inst.signature();
    let powers: Vec<BigComplex> = (0..n)
        .scan(BigComplex::one(prec), |acc, _| {
            let cur = acc.clone();
            *acc = &*acc * lambda0;
            Some(cur)
        })
        .collect();
    let lift = |x| BigComplex::from_gaussian(x, prec);
    let mut terms = vec![&lift(inst.a_minus(0)) * &powers[n - 1]];
    for i in 1..n {
        let a = lift(inst.a_minus(i));
        for j in 1..=n - i {
            terms.push(&(&a * &lift(&b[i + j - 1])) * &powers[n - j - 1]);
        }
    }
    let value = terms.iter().fold(BigComplex::zero(prec), |acc, t| &acc + t);
    let scale = terms.iter().fold(bounds::zero(), |acc, t| acc.add(&mag(t)));
    if scale.is_zero() {
        return false;
    }
    // each term moves by at most a relative (1 + ρ/(|λ₀|−ρ))^{n-1} − 1
    let modulus = mag(lambda0);
    let near = modulus.sub(radius);
    let moved = if radius.is_zero() {
        bounds::zero()
    } else if near.is_negative() || near.is_zero() {
        scale.clone()
    } else {
        let growth = bounds::powi(&num(1.0).add(&radius.div(&near)), n as i64 - 1);
        growth.sub(&num(1.0)).mul(&scale)
    };
    let rounding = num((3 * n + 4) as f64).mul(&unit_roundoff(prec)).mul(&scale);
    let err = num(2.0).mul(&moved.add(&rounding));
    zero_test(&mag(&value), &err, &scale, policy.rel_tol).0 == ZeroTest::Nonzero
}
