//! Test-only oracles. They share nothing with the library solvers beyond the
//! tree type: closure, profit and optimum are recomputed from parent links
//! by plain subset enumeration.
#![allow(dead_code)]

use std::collections::BTreeMap;

use viewsel_core::{AdTree, Instance};

/// Ancestors-or-self test by walking parent links.
fn covered(parent: &BTreeMap<u32, Option<u32>>, mut v: u32, selected: &[u32]) -> bool {
    loop {
        if selected.contains(&v) {
            return true;
        }
        match parent[&v] {
            Some(p) => v = p,
            None => return false,
        }
    }
}

/// `(lambda, mu)` of an arbitrary selection: profit over the closure, size
/// over the selected nodes.
pub fn evaluate(tree: &AdTree, selected: &[u32]) -> (u64, u64) {
    let parent: BTreeMap<u32, Option<u32>> = tree.nodes().iter().map(|n| (n.id.0, n.parent.map(|p| p.0))).collect();
    let mut lambda = 0;
    let mut mu = 0;
    for n in tree.nodes() {
        if covered(&parent, n.id.0, selected) {
            lambda += n.freq * (n.cost_r - n.cost_a);
        }
        if selected.contains(&n.id.0) {
            mu += n.size;
        }
    }
    (lambda, mu)
}

/// Every subset of the selectable nodes with its `(lambda, mu)`.
pub fn all_subsets(tree: &AdTree) -> Vec<(Vec<u32>, u64, u64)> {
    let ids: Vec<u32> = tree.nodes().iter().filter(|n| n.selectable).map(|n| n.id.0).collect();
    assert!(ids.len() <= 20, "oracle enumeration limited to 20 selectable nodes");
    (0u32..1 << ids.len())
        .map(|mask| {
            let sel: Vec<u32> = (0..ids.len()).filter(|&i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
            let (l, m) = evaluate(tree, &sel);
            (sel, l, m)
        })
        .collect()
}

pub fn optimum(inst: &Instance) -> u64 {
    all_subsets(&inst.tree)
        .into_iter()
        .filter(|&(_, _, m)| m <= inst.budget)
        .map(|(_, l, _)| l)
        .max()
        .unwrap_or(0)
}

/// Best total profit choosing one subset per tree under a shared budget.
pub fn forest_optimum(trees: &[AdTree], budget: u64) -> u64 {
    // size -> best profit over the trees seen so far
    let mut frontier: BTreeMap<u64, u64> = BTreeMap::from([(0, 0)]);
    for t in trees {
        let options = all_subsets(t);
        let mut next: BTreeMap<u64, u64> = BTreeMap::new();
        for (&m0, &l0) in &frontier {
            for (_, l, m) in &options {
                let size = m0 + m;
                if size <= budget {
                    let slot = next.entry(size).or_insert(0);
                    *slot = (*slot).max(l0 + l);
                }
            }
        }
        frontier = next;
    }
    frontier.values().copied().max().unwrap_or(0)
}

/// Whole-subset knapsack optimum.
pub fn knapsack_optimum(items: &[(u64, u64)], capacity: u64) -> u64 {
    (0u32..1 << items.len())
        .filter_map(|mask| {
            let (p, c) = (0..items.len())
                .filter(|&i| mask >> i & 1 == 1)
                .fold((0, 0), |(p, c), i| (p + items[i].0, c + items[i].1));
            (c <= capacity).then_some(p)
        })
        .max()
        .unwrap_or(0)
}

/// `(1 + num/den) * approx >= opt`, in integers.
pub fn within(approx: u64, opt: u64, num: u64, den: u64) -> bool {
    u128::from(approx) * u128::from(den + num) >= u128::from(opt) * u128::from(den)
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
