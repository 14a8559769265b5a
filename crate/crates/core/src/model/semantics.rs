use std::collections::{BTreeMap, BTreeSet};

use super::{AdTree, Instance, NodeId, Selection};
use crate::error::{Error, Result};
use crate::exact;

/// Sorted preorder indices of the members, validated.
fn sorted_members(tree: &AdTree, sel: &Selection) -> Result<Vec<usize>> {
    let mut idx = tree.resolve(sel)?;
    idx.sort_unstable();
    Ok(idx)
}

/// Preorder indices covered by the members' subtrees.
fn covered(tree: &AdTree, members: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut reach = 0usize;
    for &m in members {
        let end = tree.subtree_end(m);
        if end <= reach {
            continue;
        }
        out.extend(m.max(reach)..end);
        reach = end;
    }
    out
}

/// Selected nodes together with all of their descendants.
pub fn m_plus(tree: &AdTree, sel: &Selection) -> Result<BTreeSet<NodeId>> {
    let members = sorted_members(tree, sel)?;
    Ok(covered(tree, &members)
        .into_iter()
        .map(|i| tree.nodes[i].id)
        .collect())
}

/// Total saving over the closure of `sel`: each covered node contributes
/// `freq * (cost_r - cost_a)` exactly once.
pub fn profit_lambda(tree: &AdTree, sel: &Selection) -> Result<u64> {
    let members = sorted_members(tree, sel)?;
    Ok(covered(tree, &members)
        .into_iter()
        .map(|i| tree.nodes[i].freq * tree.nodes[i].saving())
        .sum())
}

/// Total access cost: covered nodes pay `cost_a`, the rest pay `cost_r`.
pub fn cost_tau(tree: &AdTree, sel: &Selection) -> Result<u64> {
    let members = sorted_members(tree, sel)?;
    let mut in_closure = vec![false; tree.len()];
    for i in covered(tree, &members) {
        in_closure[i] = true;
    }
    Ok(tree
        .nodes
        .iter()
        .zip(in_closure)
        .map(|(n, c)| n.freq * if c { n.cost_a } else { n.cost_r })
        .sum())
}

/// Cost of the empty selection, an upper bound on any saving.
pub fn base_cost_w(tree: &AdTree) -> u64 {
    tree.nodes.iter().map(|n| n.freq * n.cost_r).sum()
}

pub fn is_antichain(tree: &AdTree, sel: &Selection) -> Result<bool> {
    let members = sorted_members(tree, sel)?;
    let mut reach = 0usize;
    for m in members {
        if m < reach {
            return Ok(false);
        }
        reach = tree.subtree_end(m);
    }
    Ok(true)
}

/// Drops every member that has a selected ancestor.
pub fn minimalize(tree: &AdTree, sel: &Selection) -> Result<Selection> {
    let members = sorted_members(tree, sel)?;
    let mut reach = 0usize;
    let mut keep = BTreeSet::new();
    for m in members {
        if m < reach {
            continue;
        }
        reach = tree.subtree_end(m);
        keep.insert(tree.nodes[m].id);
    }
    Ok(Selection(keep))
}

/// Subtree saving and own size of one node.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Aggregate {
    pub profit: u64,
    pub size: u64,
}

pub(crate) fn subtree_profits(tree: &AdTree) -> Vec<u64> {
    let mut p: Vec<u64> = tree.nodes.iter().map(|n| n.freq * n.saving()).collect();
    for i in (1..tree.len()).rev() {
        let parent = tree.parent_index(i).expect("non-root");
        p[parent] += p[i];
    }
    p
}

/// Maps every node to the saving of its whole subtree and its own size.
pub fn subtree_aggregates(tree: &AdTree) -> BTreeMap<NodeId, Aggregate> {
    subtree_profits(tree)
        .into_iter()
        .zip(&tree.nodes)
        .map(|(profit, n)| {
            (
                n.id,
                Aggregate {
                    profit,
                    size: n.size,
                },
            )
        })
        .collect()
}

/// Is there a selection within budget whose saving reaches `goal`?
pub fn decide(inst: &Instance, goal: i64) -> Result<bool> {
    if goal < 0 {
        return Err(Error::InvalidInput(format!("negative goal {goal}")));
    }
    if goal == 0 {
        return Ok(true);
    }
    let best = match exact::dp_exact(inst) {
        Ok(s) => s,
        Err(e) if e.is_resource_limit() => exact::brute_force(inst)?,
        Err(e) => return Err(e),
    };
    Ok(best.profit() >= goal as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{bookstore, r1};
    use crate::model::{AdNode, SizeCheck};

    fn sel(ids: &[u32]) -> Selection {
        ids.iter().copied().collect()
    }

    #[test]
    fn closure_examples() {
        let t = bookstore();
        let got: Vec<u32> = m_plus(&t, &sel(&[2])).unwrap().iter().map(|n| n.0).collect();
        assert_eq!(got, (2..=12).collect::<Vec<_>>());
        assert!(m_plus(&t, &Selection::empty()).unwrap().is_empty());
        let r = r1();
        assert_eq!(m_plus(&r.tree, &sel(&[1])).unwrap().len(), 3);
        assert!(matches!(m_plus(&t, &sel(&[99])), Err(Error::InvalidSelection(_))));
    }

    #[test]
    fn r1_profit_and_cost() {
        let t = r1().tree;
        assert_eq!(profit_lambda(&t, &sel(&[2, 3])).unwrap(), 11);
        assert_eq!(profit_lambda(&t, &sel(&[1])).unwrap(), 12);
        assert_eq!(profit_lambda(&t, &Selection::empty()).unwrap(), 0);
        assert_eq!(cost_tau(&t, &Selection::empty()).unwrap(), 12);
        assert_eq!(cost_tau(&t, &sel(&[2, 3])).unwrap(), 1);
        assert_eq!(cost_tau(&t, &sel(&[1])).unwrap(), 0);
        assert_eq!(base_cost_w(&t), 12);
        // Overlap is not double counted.
        assert_eq!(profit_lambda(&t, &sel(&[1, 2, 3])).unwrap(), 12);
    }

    #[test]
    fn base_cost_edge_cases() {
        let one = AdTree::new(vec![AdNode::new(1, None, "a").with_costs(3, 4, 0)], SizeCheck::Strict).unwrap();
        assert_eq!(base_cost_w(&one), 12);
        let idle = AdTree::new(vec![AdNode::new(1, None, "a").with_costs(0, 4, 0)], SizeCheck::Strict).unwrap();
        assert_eq!(base_cost_w(&idle), 0);
    }

    #[test]
    fn antichains_and_minimalize() {
        let t = bookstore();
        assert!(is_antichain(&t, &sel(&[2, 13])).unwrap());
        assert!(!is_antichain(&t, &sel(&[2, 4])).unwrap());
        assert!(is_antichain(&t, &Selection::empty()).unwrap());
        assert_eq!(minimalize(&t, &sel(&[2, 4, 13])).unwrap(), sel(&[2, 13]));
        assert_eq!(minimalize(&t, &sel(&[3, 5, 14])).unwrap(), sel(&[3, 5, 14]));
        assert_eq!(minimalize(&t, &sel(&[1, 9])).unwrap(), sel(&[1]));
    }

    #[test]
    fn aggregates() {
        let t = r1().tree;
        let agg = subtree_aggregates(&t);
        let got: Vec<(u32, u64, u64)> = agg.iter().map(|(k, a)| (k.0, a.profit, a.size)).collect();
        assert_eq!(got, vec![(1, 12, 6), (2, 4, 2), (3, 7, 3)]);

        let dummy = AdTree::new(
            vec![
                AdNode::new(1, None, "r").with_size(5).with_costs(1, 2, 0),
                AdNode::new(2, Some(1), "d").with_size(0).unselectable(),
            ],
            SizeCheck::Strict,
        )
        .unwrap();
        assert_eq!(subtree_aggregates(&dummy)[&NodeId(2)], Aggregate { profit: 0, size: 0 });
    }

    #[test]
    fn decide_on_r1() {
        let inst = r1();
        assert!(decide(&inst, 11).unwrap());
        assert!(!decide(&inst, 12).unwrap());
        assert!(decide(&inst, 0).unwrap());
        assert!(matches!(decide(&inst, -1), Err(Error::InvalidInput(_))));
    }
}
