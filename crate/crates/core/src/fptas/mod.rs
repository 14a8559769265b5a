//! Approximation scheme over geometric profit regions.
//!
//! Partial solutions are antichains. Each subtree produces a list with at most
//! one entry per profit region; sibling lists are combined by recursive
//! halving with a prune after every merge, and the subtree root is offered as
//! one more candidate before the final prune.

mod list;
mod params;
mod sketch;

pub use list::{merge, prune, union, ListTrace, Partial, SolutionList};
pub use params::{make_params, region_of, Epsilon, FptasParams, MAX_REGIONS};
pub use sketch::{approximate, approximate_traced, merge_and_prune, sketch, Approximation};
