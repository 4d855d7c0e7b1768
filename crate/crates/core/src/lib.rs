//! Centers, chain groups and central subobjects of compact quantum groups,
//! computed from fusion rules alone.

pub mod automorph;
pub mod catalog;
pub mod central;
pub mod cli;
pub mod error;
pub mod group;
pub mod ring;
pub mod subgroups;
pub mod unionfind;

pub use error::{FusionError, Result};
pub use ring::{BasisElement, FusionRing, Mult, Subobject, Truncation};

/// Node cap for enumeration and backtracking searches.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// `FUSIONRING_SEARCH_BUDGET` if set to a positive integer, else the default.
pub fn search_budget() -> u64 {
    std::env::var("FUSIONRING_SEARCH_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &u64| n > 0)
        .unwrap_or(DEFAULT_SEARCH_BUDGET)
}
