use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::xml::XmlTree;
use crate::error::{Error, Result};
use crate::model::{AdNode, AdTree, NodeId, SizeCheck};

/// Access frequency of one element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkloadEntry {
    pub node_id: u32,
    pub freq: u64,
}

/// Explicit per-element access costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostEntry {
    pub node_id: u32,
    pub cost_r: u64,
    pub cost_a: u64,
}

/// Source of the reconstruction and materialized access costs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum CostModel {
    /// `cost_r` is the element count of the subtree, `cost_a` is 1.
    #[default]
    SubtreeCount,
    Constant { cost_r: u64, cost_a: u64 },
    Explicit(BTreeMap<u32, (u64, u64)>),
}

impl CostModel {
    pub fn explicit(entries: &[CostEntry]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for e in entries {
            if map.insert(e.node_id, (e.cost_r, e.cost_a)).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate cost entry for node {}",
                    e.node_id
                )));
            }
        }
        Ok(CostModel::Explicit(map))
    }
}

/// `subtree-count` or `constant:R,A`. Explicit models come from a file.
impl FromStr for CostModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "subtree-count" {
            return Ok(CostModel::SubtreeCount);
        }
        if let Some(rest) = s.strip_prefix("constant:") {
            let (r, a) = rest
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("expected constant:R,A, got {s:?}")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad cost value {v:?}")))
            };
            return Ok(CostModel::Constant {
                cost_r: parse(r)?,
                cost_a: parse(a)?,
            });
        }
        Err(Error::InvalidInput(format!("unknown cost model {s:?}")))
    }
}

/// Combines a sized element tree with a workload and cost model into an
/// [`AdTree`]. Unlisted elements get frequency 0.
pub fn attach_workload(tree: &XmlTree, entries: &[WorkloadEntry], cm: &CostModel) -> Result<AdTree> {
    let mut freq = vec![0u64; tree.len()];
    let mut seen = vec![false; tree.len()];
    for e in entries {
        let slot = e
            .node_id
            .checked_sub(1)
            .map(|i| i as usize)
            .filter(|&i| i < tree.len())
            .ok_or_else(|| Error::InvalidInput(format!("workload names unknown element {}", e.node_id)))?;
        if std::mem::replace(&mut seen[slot], true) {
            return Err(Error::InvalidInput(format!(
                "duplicate workload entry for element {}",
                e.node_id
            )));
        }
        freq[slot] = e.freq;
    }

    let mut nodes = Vec::with_capacity(tree.len());
    for (el, &a) in tree.elements().iter().zip(&freq) {
        if el.size == 0 {
            return Err(Error::InvalidInput("element sizes have not been computed".into()));
        }
        let (cost_r, cost_a) = match cm {
            CostModel::SubtreeCount => (tree.subtree_count(el.id) as u64, 1),
            CostModel::Constant { cost_r, cost_a } => (*cost_r, *cost_a),
            CostModel::Explicit(map) => *map.get(&el.id).ok_or_else(|| {
                Error::InvalidInput(format!("explicit cost model has no entry for element {}", el.id))
            })?,
        };
        if cost_a > cost_r {
            return Err(Error::InvalidCostModel {
                node: NodeId(el.id),
                cost_r,
                cost_a,
            });
        }
        nodes.push(AdNode {
            id: NodeId(el.id),
            parent: el.parent.map(NodeId),
            name: el.name.clone(),
            size: el.size,
            freq: a,
            cost_r,
            cost_a,
            selectable: true,
        });
    }
    AdTree::new(nodes, SizeCheck::Strict)
}
