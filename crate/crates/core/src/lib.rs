//! Ratio limits of sequences generated by linear recurrences.

pub mod charpoly;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod numerics;
pub mod recurrence;

pub use error::{Error, Result};
