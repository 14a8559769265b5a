use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;

use super::{AdNode, AdTree, NodeId, Selection, SizeCheck};
use crate::error::{Error, Result};

/// Which per-node factor [`chi`] multiplies along a root-leaf path.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ChiMode {
    /// Child count of every internal node.
    Degree,
    /// Child count plus one, which tracks how many prunes a partial
    /// solution passes through on its way to the root.
    Padded,
}

/// Largest product of per-node degree factors over all root-leaf paths.
pub fn chi(tree: &AdTree, mode: ChiMode) -> BigUint {
    let mut best: Vec<BigUint> = vec![BigUint::one(); tree.len()];
    for i in (0..tree.len()).rev() {
        let kids = tree.child_indices(i);
        if kids.is_empty() {
            continue;
        }
        let factor = match mode {
            ChiMode::Degree => kids.len(),
            ChiMode::Padded => kids.len() + 1,
        };
        let max_child = kids.iter().map(|&c| &best[c]).max().expect("internal node");
        best[i] = max_child * BigUint::from(factor);
    }
    best.swap_remove(0)
}

/// A normalized tree and the ids of the padding leaves added to it.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub tree: AdTree,
    pub dummies: BTreeSet<NodeId>,
}

impl Normalized {
    /// Maps a selection on the normalized tree back onto the original ids.
    pub fn to_original(&self, sel: &Selection) -> Selection {
        sel.iter().filter(|id| !self.dummies.contains(id)).collect()
    }
}

/// Pads every internal node's child count up to a power of two with
/// zero-cost, unselectable leaves. Original ids are kept; padding leaves get
/// fresh ids above the current maximum.
pub fn normalize(tree: &AdTree) -> Result<Normalized> {
    let mut nodes: Vec<AdNode> = tree.nodes().to_vec();
    let mut next = tree.max_id().0;
    let mut dummies = BTreeSet::new();
    for n in tree.nodes() {
        let k = tree.children_of(n.id).count();
        if k == 0 {
            continue;
        }
        for _ in k..k.next_power_of_two() {
            next = next
                .checked_add(1)
                .ok_or_else(|| Error::InvalidTree("node ids exhausted while normalizing".into()))?;
            let id = NodeId(next);
            dummies.insert(id);
            nodes.push(AdNode {
                id,
                parent: Some(n.id),
                name: "#pad".into(),
                size: 0,
                freq: 0,
                cost_r: 0,
                cost_a: 0,
                selectable: false,
            });
        }
    }
    Ok(Normalized {
        tree: AdTree::new(nodes, SizeCheck::Lenient)?,
        dummies,
    })
}

/// Several trees joined under one unselectable root with id 0.
#[derive(Clone, Debug)]
pub struct JoinedForest {
    pub tree: AdTree,
    /// New id → (index of the source tree, id within that tree).
    pub origin: BTreeMap<NodeId, (usize, NodeId)>,
}

impl JoinedForest {
    /// Splits a selection on the joined tree into one selection per source tree.
    pub fn split(&self, sel: &Selection, trees: usize) -> Result<Vec<Selection>> {
        let mut parts: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); trees];
        for id in sel.iter() {
            let &(t, orig) = self
                .origin
                .get(&id)
                .ok_or_else(|| Error::InvalidSelection(format!("node {id} is not from any source tree")))?;
            parts[t].insert(orig);
        }
        Ok(parts.into_iter().map(Selection::from).collect())
    }
}

/// Joins `trees` under a fresh root. Nodes are renumbered from 1 in the
/// order trees are given, preorder within each. The root carries no workload
/// and a sentinel size of `budget + 1`.
pub fn forest_to_tree(trees: &[AdTree], budget: u64) -> Result<JoinedForest> {
    if trees.is_empty() {
        return Err(Error::InvalidInput("cannot join an empty forest".into()));
    }
    let root = NodeId(0);
    let mut nodes = vec![AdNode {
        id: root,
        parent: None,
        name: "#forest".into(),
        size: budget.saturating_add(1),
        freq: 0,
        cost_r: 0,
        cost_a: 0,
        selectable: false,
    }];
    let mut origin = BTreeMap::new();
    let mut next: u32 = 1;
    for (t, tree) in trees.iter().enumerate() {
        let mut renamed: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for n in tree.nodes() {
            let id = NodeId(next);
            next = next
                .checked_add(1)
                .ok_or_else(|| Error::InvalidInput("forest has too many nodes".into()))?;
            renamed.insert(n.id, id);
            origin.insert(id, (t, n.id));
            nodes.push(AdNode {
                id,
                parent: Some(n.parent.map_or(root, |p| renamed[&p])),
                ..n.clone()
            });
        }
    }
    Ok(JoinedForest {
        tree: AdTree::new(nodes, SizeCheck::Lenient)?,
        origin,
    })
}
