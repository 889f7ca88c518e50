use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::decompose::{Analysis, Classification, Outcome, SolutionCharPoly, Verdict};
use crate::numerics::{BigComplex, BigReal, Exactness, GaussianRational};
use crate::recurrence::{RatioEstimate, RatioStatus, RecurrenceInstance};

/// Largest distance at which a predicted and an observed limit agree.
pub const AGREEMENT_TOL: f64 = 1e-6;

const DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceEcho {
    pub signature: Vec<GaussianRational>,
    pub initial: Vec<GaussianRational>,
    pub exactness: Exactness,
}

impl From<&RecurrenceInstance> for InstanceEcho {
    fn from(inst: &RecurrenceInstance) -> Self {
        Self {
            signature: inst.signature().to_vec(),
            initial: inst.initial().to_vec(),
            exactness: inst.exactness(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub value: BigComplex,
    pub multiplicity: usize,
    pub radius: BigReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub zero_index: usize,
    pub power: usize,
    pub value: BigComplex,
    pub error: BigReal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSection {
    pub k_max: usize,
    pub tol: f64,
    pub estimate: RatioEstimate,
    /// Fixed-point test of the converged value, when there is one.
    pub fixed_point: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub instance: InstanceEcho,
    pub roots: Vec<RootRow>,
    pub coefficients: Vec<CoefficientRow>,
    pub solution: Option<SolutionCharPoly>,
    pub verdict: Verdict,
    pub empirical: Option<EmpiricalSection>,
    /// Whether verdict and empirical status are consistent; `None` unless
    /// both are decisive.
    pub agreement: Option<bool>,
    pub elapsed_ms: f64,
}

impl AnalysisReport {
    pub fn new(inst: &RecurrenceInstance, analysis: Analysis, empirical: Option<EmpiricalSection>, elapsed_ms: f64) -> Self {
        let roots = analysis
            .roots
            .iter()
            .flat_map(|rs| rs.entries())
            .map(|e| RootRow {
                value: e.value.clone(),
                multiplicity: e.multiplicity,
                radius: e.radius.clone(),
            })
            .collect();
        let coefficients = analysis
            .decomposition
            .iter()
            .flat_map(|d| {
                d.iter().map(|(i, j, c)| CoefficientRow {
                    zero_index: i,
                    power: j,
                    value: c.clone(),
                    error: d.error(i, j).clone(),
                })
            })
            .collect();
        let agreement = empirical
            .as_ref()
            .and_then(|e| agreement(&analysis.verdict.outcome, &e.estimate.status));
        Self {
            instance: inst.into(),
            roots,
            coefficients,
            solution: analysis.solution,
            verdict: analysis.verdict,
            empirical,
            agreement,
            elapsed_ms,
        }
    }

    /// Exit status: 0 decisive, 2 indeterminate, 3 prediction contradicted
    /// by the empirical check.
    pub fn exit_code(&self) -> i32 {
        if self.agreement == Some(false) {
            3
        } else if matches!(self.verdict.outcome, Outcome::Indeterminate { .. }) {
            2
        } else {
            0
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |v: &[GaussianRational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        let _ = writeln!(out, "signature: [{}]", join(&self.instance.signature));
        let _ = writeln!(out, "initial:   [{}]", join(&self.instance.initial));
        if self.instance.exactness == Exactness::Approximate {
            let _ = writeln!(out, "input:     approximate (multiplicities by clustering)");
        }
        let _ = writeln!(out, "zeros of P:");
        for (i, r) in self.roots.iter().enumerate() {
            let _ = writeln!(
                out,
                "  λ{} = {}  multiplicity {}  radius {}",
                i + 1,
                r.value.to_decimal(DIGITS),
                r.multiplicity,
                r.radius.to_decimal(3)
            );
        }
        if !self.coefficients.is_empty() {
            let _ = writeln!(out, "coefficients:");
            for c in &self.coefficients {
                let _ = writeln!(
                    out,
                    "  c[{},{}] = {}  ± {}",
                    c.zero_index + 1,
                    c.power,
                    c.value.to_decimal(DIGITS),
                    c.error.to_decimal(3)
                );
            }
        }
        if let Some(sol) = &self.solution {
            let zeros: Vec<String> = sol
                .surviving
                .iter()
                .map(|z| format!("λ{} (top power {})", z.zero_index + 1, z.top_power))
                .collect();
            let _ = writeln!(out, "zeros in solution: {}", zeros.join(", "));
            let class = match &sol.classification {
                Classification::AsymptoticallySimple { dominant, .. } => {
                    format!("asymptotically simple, dominant λ{}", dominant + 1)
                }
                Classification::NotAsymptoticallySimple { witnesses } => {
                    let w: Vec<String> = witnesses.iter().map(|i| format!("λ{}", i + 1)).collect();
                    format!("not asymptotically simple, tied {}", w.join(", "))
                }
                Classification::Borderline { entries } => format!("borderline at {entries:?}"),
            };
            let _ = writeln!(out, "classification: {class}");
            if sol.mixed_top_powers {
                let _ = writeln!(out, "note: tied zeros of maximal modulus have different top powers");
            }
        }
        let verdict = match &self.verdict.outcome {
            Outcome::LimitExists { value, .. } => format!("limit exists, {}", value.to_decimal(DIGITS)),
            Outcome::NoLimit => "no limit".to_owned(),
            Outcome::Indeterminate { reason } => format!("indeterminate ({reason})"),
        };
        let _ = writeln!(out, "verdict: {verdict}");
        let dubeau = match self.verdict.dubeau_holds {
            Some(b) => b.to_string(),
            None => "not applicable".to_owned(),
        };
        let _ = writeln!(out, "dubeau condition: {dubeau}");
        let d = &self.verdict.diagnostics;
        let cond = d.condition_estimate.map_or("n/a".to_owned(), |c| format!("{c:.3e}"));
        let _ = writeln!(
            out,
            "precision: {} bits (cap {}), rel_tol {:.1e}, condition {}",
            d.precision, d.cap, d.policy.rel_tol, cond
        );
        if let Some(e) = &self.empirical {
            let status = match &e.estimate.status {
                RatioStatus::Converged(v) => format!("converged to {}", v.to_decimal(DIGITS)),
                RatioStatus::Oscillating => "oscillating".to_owned(),
                RatioStatus::ZeroTermsPersist => "zero terms persist".to_owned(),
                RatioStatus::Undecided => "undecided".to_owned(),
            };
            let k0 = e.estimate.k0.map_or("none".to_owned(), |k| k.to_string());
            let _ = writeln!(out, "empirical (k_max {}, tol {:e}): {status}, last zero term {k0}", e.k_max, e.tol);
            if let Some(fp) = e.fixed_point {
                let _ = writeln!(out, "fixed point of ratio map: {fp}");
            }
            let agree = self.agreement.map_or("n/a".to_owned(), |a| a.to_string());
            let _ = writeln!(out, "agreement: {agree}");
        }
        let _ = writeln!(out, "time: {:.1} ms", self.elapsed_ms);
        out
    }
}

/// Consistency of a prediction with the observed ratios; `None` when either
/// side is undecided.
pub fn agreement(outcome: &Outcome, status: &RatioStatus) -> Option<bool> {
    match (outcome, status) {
        (Outcome::Indeterminate { .. }, _) | (_, RatioStatus::Undecided) => None,
        (Outcome::LimitExists { value, .. }, RatioStatus::Converged(v)) => {
            Some(value.dist(&v.with_precision(value.prec())).to_f64() < AGREEMENT_TOL)
        }
        (Outcome::LimitExists { .. }, _) => Some(false),
        (Outcome::NoLimit, RatioStatus::Converged(_)) => Some(false),
        (Outcome::NoLimit, _) => Some(true),
    }
}
