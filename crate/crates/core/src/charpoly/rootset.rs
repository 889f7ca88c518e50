use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::roots::{clustered_roots, disks_disjoint, escalation_schedule, find_roots_once, ApproxRoot};
use super::squarefree::square_free_decompose;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, BigReal, Exactness, GaussianRational, DEFAULT_PRECISION};

use super::roots::DEFAULT_PRECISION_CAP;

/// A distinct zero of the characteristic polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootEntry {
    pub value: BigComplex,
    pub multiplicity: usize,
    /// Certified bound on the distance from `value` to the true zero.
    pub radius: BigReal,
}

/// The distinct zeros of `P` with multiplicities, ordered by modulus
/// (descending) and then argument (ascending).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    entries: Vec<RootEntry>,
    order: usize,
    precision: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOptions {
    pub precision: usize,
    pub cap: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            precision: DEFAULT_PRECISION,
            cap: DEFAULT_PRECISION_CAP,
        }
    }
}

impl RootSet {
    fn new(mut entries: Vec<RootEntry>, order: usize, precision: usize) -> Self {
        entries.sort_by(|a, b| a.value.cmp_dominance(&b.value));
        Self {
            entries,
            order,
            precision,
        }
    }

    pub fn entries(&self) -> &[RootEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Precision at which the zeros were certified.
    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn get(&self, i: usize) -> &RootEntry {
        &self.entries[i]
    }

    /// Index of the zero nearest to `z`.
    pub fn nearest(&self, z: &BigComplex) -> Option<(usize, BigReal)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.value.dist(z)))
            .min_by(|a, b| a.1.cmp_value(&b.1))
    }
}

/// Distinct zeros of the characteristic polynomial of `signature`.
///
/// Exact signatures get multiplicities from square-free decomposition and
/// zeros from each square-free factor; approximate signatures cluster the
/// zeros of `P` itself. Precision doubles from `opts.precision` up to
/// `opts.cap` until all inclusion disks are disjoint.
pub fn root_set(
    signature: &[GaussianRational],
    exactness: Exactness,
    opts: &RootOptions,
) -> Result<RootSet> {
    let p = Polynomial::characteristic(signature)?;
    let n = p.degree();
    let factors = match exactness {
        Exactness::Exact => square_free_decompose(&p),
        Exactness::Approximate => Vec::new(),
    };
    for prec in escalation_schedule(opts.precision, opts.cap.max(opts.precision)) {
        let attempt = match exactness {
            Exactness::Exact => exact_attempt(&factors, prec),
            Exactness::Approximate => clustered_roots(&p, prec, None).map(|found| {
                found
                    .into_iter()
                    .map(|(r, m)| RootEntry {
                        value: r.value,
                        multiplicity: m,
                        radius: r.radius,
                    })
                    .collect()
            }),
        };
        let Some(entries) = attempt else { continue };
        let disks: Vec<ApproxRoot> = entries
            .iter()
            .map(|e| ApproxRoot {
                value: e.value.clone(),
                radius: e.radius.clone(),
            })
            .collect();
        if disks_disjoint(&disks) {
            debug_assert_eq!(entries.iter().map(|e| e.multiplicity).sum::<usize>(), n);
            return Ok(RootSet::new(entries, n, prec));
        }
    }
    Err(Error::PrecisionExhausted { cap: opts.cap })
}

fn exact_attempt(factors: &[super::squarefree::SquareFreeFactor], prec: usize) -> Option<Vec<RootEntry>> {
    let per_factor: Option<Vec<Vec<RootEntry>>> = factors
        .par_iter()
        .map(|sf| {
            find_roots_once(&sf.factor, prec).map(|roots| {
                roots
                    .into_iter()
                    .map(|r| RootEntry {
                        value: r.value,
                        multiplicity: sf.multiplicity,
                        radius: r.radius,
                    })
                    .collect()
            })
        })
        .collect();
    Some(per_factor?.into_iter().flatten().collect())
}
