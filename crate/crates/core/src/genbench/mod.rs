//! Instance generators, the knapsack reduction, and solver comparison.

mod report;

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::KnapsackInstance;
use crate::model::{AdNode, AdTree, Instance, NodeId, SizeCheck};

pub use report::{compare, compare_with, Report, ReportRow};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Uniform attachment: node `i` hangs under a uniformly chosen earlier node.
    Random,
    Path,
    Star,
    /// Heap-shaped: node `i` hangs under `i / 2`.
    BalancedBinary,
    /// A random knapsack pushed through [`knapsack_to_tree`].
    KnapsackReduction,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "random" => Family::Random,
            "path" => Family::Path,
            "star" => Family::Star,
            "balanced-binary" | "balanced" => Family::BalancedBinary,
            "knapsack-reduction" => Family::KnapsackReduction,
            _ => return Err(Error::InvalidInput(format!("unknown family {s:?}"))),
        })
    }
}

/// Inclusive integer range.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub min: u64,
    pub max: u64,
}

impl Span {
    pub const fn new(min: u64, max: u64) -> Self {
        Span { min, max }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(self.min..=self.max)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum BudgetRule {
    /// `floor(total selectable size * num / den)`.
    Fraction { num: u64, den: u64 },
    Explicit(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub size: Span,
    pub freq: Span,
    pub saving: Span,
    pub cost_a: Span,
    pub budget: BudgetRule,
    /// Make each size its own draw plus the sizes of its children, so sizes
    /// strictly shrink going down the tree.
    pub monotone_sizes: bool,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            seed,
            size: Span::new(1, 20),
            freq: Span::new(0, 5),
            saving: Span::new(0, 5),
            cost_a: Span::new(0, 3),
            budget: BudgetRule::Fraction { num: 1, den: 2 },
            monotone_sizes: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > u32::MAX as usize - 1 {
            return Err(Error::InvalidInput(format!("n must be in 1..2^32-1, got {}", self.n)));
        }
        for (what, s) in [("size", self.size), ("freq", self.freq), ("saving", self.saving), ("cost_a", self.cost_a)] {
            if s.min > s.max {
                return Err(Error::InvalidInput(format!("{what} range {}..={} is empty", s.min, s.max)));
            }
        }
        if self.size.min == 0 {
            return Err(Error::InvalidInput("sizes must be positive".into()));
        }
        if let BudgetRule::Fraction { den: 0, .. } = self.budget {
            return Err(Error::InvalidInput("budget fraction has zero denominator".into()));
        }
        Ok(())
    }

    fn budget_for(&self, total: u64) -> u64 {
        match self.budget {
            BudgetRule::Explicit(b) => b,
            BudgetRule::Fraction { num, den } => (u128::from(total) * u128::from(num) / u128::from(den)) as u64,
        }
    }
}

/// Deterministic for a fixed spec.
pub fn generate(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    if spec.family == Family::KnapsackReduction {
        let items: Vec<(u64, u64)> = (0..spec.n)
            .map(|_| {
                let p = spec.freq.sample(&mut rng).max(1) * spec.saving.sample(&mut rng);
                (p, spec.size.sample(&mut rng))
            })
            .collect();
        let total: u64 = items.iter().map(|&(_, c)| c).sum();
        return knapsack_to_tree(&KnapsackInstance::new(items, spec.budget_for(total)));
    }

    let n = spec.n as u32;
    let parents: Vec<Option<u32>> = (1..=n)
        .map(|i| match (i, spec.family) {
            (1, _) => None,
            (_, Family::Path) => Some(i - 1),
            (_, Family::Star) => Some(1),
            (_, Family::BalancedBinary) => Some(i / 2),
            (_, _) => Some(rng.gen_range(1..i)),
        })
        .collect();

    let mut nodes: Vec<AdNode> = (1..=n)
        .map(|i| {
            let size = spec.size.sample(&mut rng);
            let freq = spec.freq.sample(&mut rng);
            let cost_a = spec.cost_a.sample(&mut rng);
            let cost_r = cost_a + spec.saving.sample(&mut rng);
            AdNode::new(i, parents[i as usize - 1], format!("e{i}"))
                .with_size(size)
                .with_costs(freq, cost_r, cost_a)
        })
        .collect();
    if spec.monotone_sizes {
        // Parents precede children in id order.
        for i in (1..nodes.len()).rev() {
            let p = nodes[i].parent.expect("non-root").0 as usize - 1;
            nodes[p].size += nodes[i].size;
        }
    }
    let total: u64 = nodes.iter().map(|n| n.size).sum();
    let budget = spec.budget_for(total);
    Ok(Instance::new(AdTree::new(nodes, SizeCheck::Lenient)?, budget))
}

/// Encodes a knapsack as a tree instance: items become the leaves of a
/// balanced binary tree (leaf `i`: frequency 1, saving `p_i`, size `c_i`),
/// internal nodes are unselectable with sentinel size `C + 1`, and the
/// budget is `C`.
///
/// Leaves must have positive size, so when some `c_i` is 0 every size becomes
/// `(n + 1) c_i + 1` and the budget `(n + 1) C + n`; a subset fits the new
/// budget exactly when it fits the old one.
pub fn knapsack_to_tree(k: &KnapsackInstance) -> Result<Instance> {
    let n = k.items.len();
    if n == 0 {
        return Err(Error::InvalidInput("knapsack has no items".into()));
    }
    let overflow = || Error::InvalidInput("knapsack values overflow u64".into());
    let scale = k.items.iter().any(|&(_, c)| c == 0);
    let (sizes, capacity) = if scale {
        let m = n as u64 + 1;
        let sizes = k
            .items
            .iter()
            .map(|&(_, c)| c.checked_mul(m).and_then(|v| v.checked_add(1)).ok_or_else(overflow))
            .collect::<Result<Vec<u64>>>()?;
        let cap = k.capacity.checked_mul(m).and_then(|v| v.checked_add(n as u64)).ok_or_else(overflow)?;
        (sizes, cap)
    } else {
        (k.items.iter().map(|&(_, c)| c).collect(), k.capacity)
    };
    let sentinel = capacity.checked_add(1).ok_or_else(overflow)?;

    let mut nodes = Vec::with_capacity(2 * n);
    let mut next = 1u32;
    // (lo, hi, parent) ranges over item indices; preorder id assignment.
    let mut stack = vec![(0usize, n, None::<u32>)];
    while let Some((lo, hi, parent)) = stack.pop() {
        let id = next;
        next += 1;
        if hi - lo == 1 {
            nodes.push(AdNode {
                id: NodeId(id),
                parent: parent.map(NodeId),
                name: format!("item{lo}"),
                size: sizes[lo],
                freq: 1,
                cost_r: k.items[lo].0,
                cost_a: 0,
                selectable: true,
            });
        } else {
            nodes.push(AdNode {
                id: NodeId(id),
                parent: parent.map(NodeId),
                name: "#join".into(),
                size: sentinel,
                freq: 0,
                cost_r: 0,
                cost_a: 0,
                selectable: false,
            });
            let mid = lo + (hi - lo).div_ceil(2);
            stack.push((mid, hi, Some(id)));
            stack.push((lo, mid, Some(id)));
        }
    }
    Ok(Instance::new(AdTree::new(nodes, SizeCheck::Lenient)?, capacity))
}
