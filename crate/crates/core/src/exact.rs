//! Exact solvers used as ground truth: exhaustive antichain enumeration, a
//! budget-indexed dynamic program, and a plain subset-enumeration knapsack.

use std::cmp::Ordering;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::semantics::subtree_profits;
use crate::model::{Instance, NodeId, Selection, Solution};

pub const DEFAULT_BRUTE_CAP: usize = 22;

/// Largest DP table (rows × budget columns) [`dp_exact`] will allocate.
pub const DEFAULT_DP_CELLS: usize = 1 << 23;

pub fn brute_force(inst: &Instance) -> Result<Solution> {
    brute_force_capped(inst, DEFAULT_BRUTE_CAP)
}

/// Enumerates every antichain within budget. At each preorder position the
/// node is either selected (skipping its subtree) or passed over.
pub fn brute_force_capped(inst: &Instance, cap: usize) -> Result<Solution> {
    let tree = &inst.tree;
    let count = tree.selectable_count();
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    let profits = subtree_profits(tree);
    let mut search = Search {
        inst,
        profits: &profits,
        chosen: Vec::new(),
        best: Best::default(),
    };
    search.walk(0, 0, 0);
    let Best {
        profit,
        matsize,
        ids,
    } = search.best;
    Ok(Solution::from_parts(ids.into_iter().collect(), profit, matsize))
}

#[derive(Default)]
struct Best {
    profit: u64,
    matsize: u64,
    ids: Vec<NodeId>,
}

struct Search<'a> {
    inst: &'a Instance,
    profits: &'a [u64],
    chosen: Vec<usize>,
    best: Best,
}

impl Search<'_> {
    fn walk(&mut self, pos: usize, profit: u64, matsize: u64) {
        let tree = &self.inst.tree;
        if pos == tree.len() {
            self.offer(profit, matsize);
            return;
        }
        let node = &tree.nodes()[pos];
        if node.selectable && matsize + node.size <= self.inst.budget {
            self.chosen.push(pos);
            self.walk(
                tree.subtree_end(pos),
                profit + self.profits[pos],
                matsize + node.size,
            );
            self.chosen.pop();
        }
        self.walk(pos + 1, profit, matsize);
    }

    fn offer(&mut self, profit: u64, matsize: u64) {
        let order = profit
            .cmp(&self.best.profit)
            .then(self.best.matsize.cmp(&matsize));
        let take = match order {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                let ids = self.sorted_ids();
                ids < self.best.ids
            }
        };
        if take {
            self.best = Best {
                profit,
                matsize,
                ids: self.sorted_ids(),
            };
        }
    }

    fn sorted_ids(&self) -> Vec<NodeId> {
        let nodes = self.inst.tree.nodes();
        let mut ids: Vec<NodeId> = self.chosen.iter().map(|&i| nodes[i].id).collect();
        ids.sort_unstable();
        ids
    }
}

pub fn dp_exact(inst: &Instance) -> Result<Solution> {
    dp_exact_limited(inst, DEFAULT_DP_CELLS)
}

/// Pseudo-polynomial DP over the preorder sequence. `best[i][b]` is the best
/// (saving, size) pair using nodes `i..` with at most `b` units of budget;
/// selecting node `i` jumps to the end of its subtree.
pub fn dp_exact_limited(inst: &Instance, max_cells: usize) -> Result<Solution> {
    let tree = &inst.tree;
    let n = tree.len();
    // Budget beyond the total selectable size buys nothing.
    let budget = inst.budget.min(tree.total_size());
    let width = usize::try_from(budget)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::ResourceLimit(format!("budget {budget} too large for DP")))?;
    let cells = (n + 1)
        .checked_mul(width)
        .filter(|&c| c <= max_cells)
        .ok_or_else(|| {
            Error::ResourceLimit(format!(
                "DP table of {} x {width} exceeds {max_cells} cells",
                n + 1
            ))
        })?;

    let profits = subtree_profits(tree);
    let mut profit = vec![0u64; cells];
    let mut size = vec![0u64; cells];
    let at = |i: usize, b: usize| i * width + b;
    for i in (0..n).rev() {
        let node = &tree.nodes()[i];
        let jump = tree.subtree_end(i);
        for b in 0..width {
            let (mut p, mut s) = (profit[at(i + 1, b)], size[at(i + 1, b)]);
            if node.selectable && node.size <= b as u64 {
                let rest = b - node.size as usize;
                let cp = profit[at(jump, rest)] + profits[i];
                let cs = size[at(jump, rest)] + node.size;
                if cp > p || (cp == p && cs < s) {
                    p = cp;
                    s = cs;
                }
            }
            profit[at(i, b)] = p;
            size[at(i, b)] = s;
        }
    }

    let mut picked = Vec::new();
    let (mut i, mut b) = (0usize, width - 1);
    while i < n {
        let same = profit[at(i, b)] == profit[at(i + 1, b)] && size[at(i, b)] == size[at(i + 1, b)];
        if same {
            i += 1;
        } else {
            let node = &tree.nodes()[i];
            picked.push(node.id);
            b -= node.size as usize;
            i = tree.subtree_end(i);
        }
    }
    Ok(Solution::from_parts(
        picked.into_iter().collect::<Selection>(),
        profit[at(0, width - 1)],
        size[at(0, width - 1)],
    ))
}

/// Flat 0/1 knapsack: items are `(profit, size)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub capacity: u64,
    pub items: Vec<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<u64>,
}

impl KnapsackInstance {
    pub fn new(items: Vec<(u64, u64)>, capacity: u64) -> Self {
        KnapsackInstance {
            capacity,
            items,
            goal: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Best total profit over all item subsets that fit the capacity.
pub fn knapsack_brute(k: &KnapsackInstance) -> Result<u64> {
    if k.items.len() > DEFAULT_BRUTE_CAP {
        return Err(Error::TooLarge {
            count: k.items.len(),
            cap: DEFAULT_BRUTE_CAP,
        });
    }
    fn go(items: &[(u64, u64)], room: u64, acc: u64) -> u64 {
        match items.split_first() {
            None => acc,
            Some((&(p, c), rest)) => {
                let skip = go(rest, room, acc);
                if c <= room {
                    skip.max(go(rest, room - c, acc + p))
                } else {
                    skip
                }
            }
        }
    }
    Ok(go(&k.items, k.capacity, 0))
}
