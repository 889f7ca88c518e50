//! The characteristic polynomial of a recurrence and its distinct zeros.

mod poly;
mod roots;
mod rootset;
mod squarefree;

pub use poly::Polynomial;
pub use roots::{
    aberth, cluster_tolerance, clustered_roots, disks_disjoint, escalation_schedule, find_roots,
    find_roots_once, smith_radii, ApproxRoot, DEFAULT_PRECISION_CAP,
};
pub use rootset::{root_set, RootEntry, RootOptions, RootSet};
pub use squarefree::{square_free_decompose, SquareFreeFactor};

use crate::error::Result;
use crate::numerics::GaussianRational;

/// `λⁿ − b₁λⁿ⁻¹ − ⋯ − bₙ`.
pub fn build_char_poly(signature: &[GaussianRational]) -> Result<Polynomial> {
    Polynomial::characteristic(signature)
}
