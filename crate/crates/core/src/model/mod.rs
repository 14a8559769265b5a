//! Element trees, selections and the access-cost semantics they are scored by.
//!
//! An [`AdTree`] stores its nodes in preorder with children ordered by id, so
//! every subtree occupies a contiguous index range. Most operations in this
//! module and in the solvers lean on that layout.

pub(crate) mod semantics;
mod shape;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use semantics::{
    base_cost_w, cost_tau, decide, is_antichain, m_plus, minimalize, profit_lambda,
    subtree_aggregates, Aggregate,
};
pub use shape::{chi, forest_to_tree, normalize, ChiMode, JoinedForest, Normalized};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// One XML element with its storage size, workload frequency and access costs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub name: String,
    pub size: u64,
    pub freq: u64,
    pub cost_r: u64,
    pub cost_a: u64,
    pub selectable: bool,
}

impl AdNode {
    pub fn new(id: u32, parent: Option<u32>, name: impl Into<String>) -> Self {
        AdNode {
            id: NodeId(id),
            parent: parent.map(NodeId),
            name: name.into(),
            size: 1,
            freq: 0,
            cost_r: 0,
            cost_a: 0,
            selectable: true,
        }
    }

    pub fn with_size(mut self, size: u64) -> Self {
        self.size = size;
        self
    }

    pub fn with_costs(mut self, freq: u64, cost_r: u64, cost_a: u64) -> Self {
        self.freq = freq;
        self.cost_r = cost_r;
        self.cost_a = cost_a;
        self
    }

    pub fn unselectable(mut self) -> Self {
        self.selectable = false;
        self
    }

    /// Per-access saving from materialization, `cost_r - cost_a`.
    pub fn saving(&self) -> u64 {
        self.cost_r - self.cost_a
    }
}

/// How strictly [`AdTree::new`] enforces that a selectable node is smaller
/// than every selectable ancestor.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SizeCheck {
    /// Violations are errors (ingested documents).
    Strict,
    /// Violations are logged (synthetic and reduced instances).
    Lenient,
}

#[derive(Clone, Debug)]
pub struct AdTree {
    nodes: Vec<AdNode>,
    index: HashMap<NodeId, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    end: Vec<usize>,
}

impl PartialEq for AdTree {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for AdTree {}

impl AdTree {
    pub fn new(nodes: Vec<AdNode>, check: SizeCheck) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidTree("tree has no nodes".into()));
        }

        let mut by_id: HashMap<NodeId, usize> = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if by_id.insert(n.id, i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate node id {}", n.id)));
            }
            if n.cost_a > n.cost_r {
                return Err(Error::InvalidCostModel {
                    node: n.id,
                    cost_r: n.cost_r,
                    cost_a: n.cost_a,
                });
            }
            if n.selectable && n.size == 0 {
                return Err(Error::InvalidTree(format!(
                    "selectable node {} has size 0",
                    n.id
                )));
            }
        }

        let mut roots = Vec::new();
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            match n.parent {
                None => roots.push(i),
                Some(p) => match by_id.get(&p) {
                    Some(&pi) => kids[pi].push(i),
                    None => {
                        return Err(Error::InvalidTree(format!(
                            "node {} references unknown parent {}",
                            n.id, p
                        )))
                    }
                },
            }
        }
        if roots.len() > 1 {
            let ids: Vec<String> = roots.iter().map(|&i| nodes[i].id.to_string()).collect();
            return Err(Error::InvalidTree(format!(
                "multiple roots: {}",
                ids.join(", ")
            )));
        }
        for k in &mut kids {
            k.sort_by_key(|&c| nodes[c].id);
        }

        // Preorder walk from the root; anything left over sits on a cycle.
        let mut order = Vec::with_capacity(nodes.len());
        if let Some(&r) = roots.first() {
            let mut stack = vec![r];
            while let Some(i) = stack.pop() {
                order.push(i);
                stack.extend(kids[i].iter().rev());
            }
        }
        if order.len() < nodes.len() {
            let mut seen = vec![false; nodes.len()];
            for &i in &order {
                seen[i] = true;
            }
            let start = (0..nodes.len())
                .filter(|&i| !seen[i])
                .min_by_key(|&i| nodes[i].id)
                .expect("unvisited node");
            let mut on_path = vec![false; nodes.len()];
            let mut cur = start;
            while !on_path[cur] {
                on_path[cur] = true;
                cur = by_id[&nodes[cur].parent.expect("non-root has a parent")];
            }
            return Err(Error::Cycle(nodes[cur].id));
        }

        let mut pos = vec![0usize; nodes.len()];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p;
        }
        let mut slots: Vec<Option<AdNode>> = nodes.into_iter().map(Some).collect();
        let nodes: Vec<AdNode> = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        let children: Vec<Vec<usize>> = order
            .iter()
            .map(|&i| kids[i].iter().map(|&c| pos[c]).collect())
            .collect();
        let mut parent = vec![None; nodes.len()];
        for (p, cs) in children.iter().enumerate() {
            for &c in cs {
                parent[c] = Some(p);
            }
        }
        let mut end = vec![0usize; nodes.len()];
        for i in (0..nodes.len()).rev() {
            end[i] = children[i].last().map_or(i + 1, |&c| end[c]);
        }
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();

        let tree = AdTree {
            nodes,
            index,
            parent,
            children,
            end,
        };
        tree.check_totals()?;
        tree.check_sizes(check)?;
        Ok(tree)
    }

    fn check_totals(&self) -> Result<()> {
        let mut w: u64 = 0;
        let mut s: u64 = 0;
        for n in &self.nodes {
            w = n
                .freq
                .checked_mul(n.cost_r)
                .and_then(|t| w.checked_add(t))
                .ok_or_else(|| Error::InvalidTree("total access cost overflows u64".into()))?;
            if n.selectable {
                s = s
                    .checked_add(n.size)
                    .ok_or_else(|| Error::InvalidTree("total size overflows u64".into()))?;
            }
        }
        Ok(())
    }

    fn check_sizes(&self, check: SizeCheck) -> Result<()> {
        let mut violations = 0usize;
        for i in 0..self.nodes.len() {
            if !self.nodes[i].selectable {
                continue;
            }
            let mut up = self.parent[i];
            while let Some(p) = up {
                if self.nodes[p].selectable {
                    if self.nodes[i].size >= self.nodes[p].size {
                        if check == SizeCheck::Strict {
                            return Err(Error::InvalidTree(format!(
                                "node {} (size {}) is not smaller than its ancestor {} (size {})",
                                self.nodes[i].id,
                                self.nodes[i].size,
                                self.nodes[p].id,
                                self.nodes[p].size
                            )));
                        }
                        violations += 1;
                    }
                    break;
                }
                up = self.parent[p];
            }
        }
        if violations > 0 {
            log::warn!("{violations} node(s) are not smaller than their nearest selectable ancestor");
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in preorder, children visited in ascending id order.
    pub fn nodes(&self) -> &[AdNode] {
        &self.nodes
    }

    pub fn root(&self) -> &AdNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> Option<&AdNode> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn children_of(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let kids: &[usize] = match self.index.get(&id) {
            Some(&i) => &self.children[i],
            None => &[],
        };
        kids.iter().map(|&c| self.nodes[c].id)
    }

    pub fn max_id(&self) -> NodeId {
        self.nodes.iter().map(|n| n.id).max().expect("non-empty")
    }

    pub fn selectable_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.selectable).count()
    }

    /// Total size of all selectable nodes.
    pub fn total_size(&self) -> u64 {
        self.nodes.iter().filter(|n| n.selectable).map(|n| n.size).sum()
    }

    pub(crate) fn child_indices(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub(crate) fn parent_index(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    /// Exclusive end of the preorder range covered by the subtree at `i`.
    pub(crate) fn subtree_end(&self, i: usize) -> usize {
        self.end[i]
    }

    #[cfg(test)]
    pub(crate) fn is_proper_ancestor(&self, a: usize, b: usize) -> bool {
        a < b && b < self.end[a]
    }

    /// Resolves every member to its preorder index, rejecting unknown or
    /// unselectable nodes.
    pub(crate) fn resolve(&self, sel: &Selection) -> Result<Vec<usize>> {
        sel.iter()
            .map(|id| match self.index.get(&id) {
                None => Err(Error::InvalidSelection(format!("unknown node {id}"))),
                Some(&i) if !self.nodes[i].selectable => Err(Error::InvalidSelection(
                    format!("node {id} is not selectable"),
                )),
                Some(&i) => Ok(i),
            })
            .collect()
    }
}

/// A set of node ids chosen for materialization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selection(BTreeSet<NodeId>);

impl Selection {
    pub fn empty() -> Self {
        Selection(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.0.contains(&id)
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().copied()
    }

    pub fn ids(&self) -> Vec<u32> {
        self.0.iter().map(|n| n.0).collect()
    }

    pub fn as_set(&self) -> &BTreeSet<NodeId> {
        &self.0
    }
}

impl FromIterator<NodeId> for Selection {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        Selection(iter.into_iter().collect())
    }
}

impl FromIterator<u32> for Selection {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Selection(iter.into_iter().map(NodeId).collect())
    }
}

impl From<BTreeSet<NodeId>> for Selection {
    fn from(s: BTreeSet<NodeId>) -> Self {
        Selection(s)
    }
}

/// A selection with its cached saving `profit` and materialized size `matsize`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    selection: Selection,
    profit: u64,
    matsize: u64,
}

impl Solution {
    pub fn empty() -> Self {
        Solution {
            selection: Selection::empty(),
            profit: 0,
            matsize: 0,
        }
    }

    /// Scores `selection` on `tree` using closure semantics.
    pub fn evaluate(tree: &AdTree, selection: Selection) -> Result<Self> {
        let profit = profit_lambda(tree, &selection)?;
        let matsize = tree
            .resolve(&selection)?
            .iter()
            .map(|&i| tree.nodes[i].size)
            .sum();
        Ok(Solution {
            selection,
            profit,
            matsize,
        })
    }

    pub(crate) fn from_parts(selection: Selection, profit: u64, matsize: u64) -> Self {
        Solution {
            selection,
            profit,
            matsize,
        }
    }

    pub fn selection(&self) -> &Selection {
        &self.selection
    }

    pub fn into_selection(self) -> Selection {
        self.selection
    }

    pub fn profit(&self) -> u64 {
        self.profit
    }

    pub fn matsize(&self) -> u64 {
        self.matsize
    }
}

/// A tree plus the storage budget available for materialized views.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub tree: AdTree,
    pub budget: u64,
}

impl Instance {
    pub fn new(tree: AdTree, budget: u64) -> Self {
        Instance { tree, budget }
    }

    pub fn with_budget(&self, budget: u64) -> Self {
        Instance {
            tree: self.tree.clone(),
            budget,
        }
    }

    pub fn is_feasible(&self, sol: &Solution) -> bool {
        sol.matsize <= self.budget
    }
}
