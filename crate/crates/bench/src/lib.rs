//! Shared benchmark inputs.

use viewsel_core::genbench::{generate, Family, GenSpec, Span};
use viewsel_core::Instance;

/// Heap-shaped tree with default value ranges and half the total size as budget.
pub fn balanced(n: usize) -> Instance {
    generate(&GenSpec::new(Family::BalancedBinary, n, 8)).expect("valid spec")
}

/// Small random tree that both exact solvers handle.
pub fn small_random(n: usize, seed: u64) -> Instance {
    let mut spec = GenSpec::new(Family::Random, n, seed);
    spec.size = Span::new(1, 20);
    generate(&spec).expect("valid spec")
}
