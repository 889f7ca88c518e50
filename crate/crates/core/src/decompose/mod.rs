//! Coefficients of a solution in the basis `k^j λᵢ^k`, the zeros that
//! survive in it, and the resulting verdict on the ratio limit.

mod bounds;
mod classify;
mod matrix;
mod solve;
mod verdict;

pub use classify::{
    classify_char_poly, is_asymptotically_simple, solution_char_poly, Classification, SolutionCharPoly,
    SurvivingZero, ZeroPolicy,
};
pub use matrix::{build_basis_matrix, Matrix};
pub use solve::{reconstruct_term, solve_coefficients, Decomposition, Reconstructed};
pub use verdict::{analyze, dubeau_condition, predict_ratio_limit, Analysis, Config, Diagnostics, Outcome, Verdict};
