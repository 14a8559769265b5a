use super::list::{best_order, merge_prune, prune_unchecked, union_unchecked, ListTrace, Partial, SolutionList};
use super::params::{make_params, Epsilon, FptasParams};
use crate::error::{Error, Result};
use crate::model::semantics::subtree_profits;
use crate::model::{base_cost_w, normalize, Instance, NodeId, Selection, Solution};

/// Candidate list for the subtree rooted at `node`: the union of the
/// children's lists, plus selecting `node` itself when it fits, pruned.
/// Leaves return `[{node}, ∅]` unpruned.
pub fn sketch(inst: &Instance, node: NodeId, params: &FptasParams) -> Result<SolutionList> {
    let start = inst
        .tree
        .index_of(node)
        .ok_or_else(|| Error::InvalidInput(format!("unknown node {node}")))?;
    if base_cost_w(&inst.tree) > params.w() {
        return Err(Error::InvalidInput(
            "parameters were built for a tree with smaller total cost".into(),
        ));
    }
    let mut trace = ListTrace::new(params.list_bound());
    Ok(sketch_from(inst, start, params, &mut trace))
}

/// Bottom-up over the preorder range of `start`'s subtree; children always
/// sit at larger indices than their parent, so a reverse scan sees them first.
pub(crate) fn sketch_from(
    inst: &Instance,
    start: usize,
    params: &FptasParams,
    trace: &mut ListTrace,
) -> SolutionList {
    let tree = &inst.tree;
    let profits = subtree_profits(tree);
    let end = tree.subtree_end(start);
    let mut lists: Vec<Option<SolutionList>> = vec![None; end - start];

    for i in (start..end).rev() {
        let node = &tree.nodes()[i];
        let own = (node.selectable && node.size <= inst.budget)
            .then(|| Partial::single(node.id, profits[i], node.size));
        let kids = tree.child_indices(i);
        let list = if kids.is_empty() {
            own.into_iter().chain([Partial::empty()]).collect()
        } else {
            let child_lists: Vec<SolutionList> = kids
                .iter()
                .map(|&c| lists[c - start].take().expect("child sketched"))
                .collect();
            let merged = union_unchecked(child_lists, params, inst.budget, trace);
            prune_unchecked(merged.iter().cloned().chain(own), params)
        };
        trace.record(list.len());
        lists[i - start] = Some(list);
    }
    lists[0].take().expect("root sketched")
}

/// Result of one approximation run with its instrumentation.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub solution: Solution,
    pub params: FptasParams,
    pub trace: ListTrace,
}

/// Returns a budget-feasible solution whose saving is at least
/// `OPT / (1 + epsilon)`.
pub fn approximate(inst: &Instance, epsilon: Epsilon) -> Result<Solution> {
    approximate_traced(inst, epsilon).map(|a| a.solution)
}

pub fn approximate_traced(inst: &Instance, epsilon: Epsilon) -> Result<Approximation> {
    let normalized = normalize(&inst.tree)?;
    let params = make_params(&normalized.tree, epsilon)?;
    let work = Instance::new(normalized.tree.clone(), inst.budget);
    let mut trace = ListTrace::new(params.list_bound());
    let list = sketch_from(&work, 0, &params, &mut trace);
    let best = list
        .iter()
        .min_by(|a, b| best_order(a, b))
        .cloned()
        .unwrap_or_else(Partial::empty);
    let picked: Selection = best.members().into_iter().collect();
    let selection = normalized.to_original(&picked);
    Ok(Approximation {
        solution: Solution::from_parts(selection, best.profit(), best.matsize()),
        params,
        trace,
    })
}

/// `prune(merge(l1, l2))` computed without the full cross product; exposed
/// for benchmarks and equivalence tests.
pub fn merge_and_prune(l1: &SolutionList, l2: &SolutionList, params: &FptasParams, budget: u64) -> SolutionList {
    merge_prune(l1, l2, params, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force;
    use crate::model::fixtures::{bookstore, path, r1, star};
    use crate::model::{is_antichain, profit_lambda};

    fn eps(s: &str) -> Epsilon {
        s.parse().unwrap()
    }

    fn values(l: &SolutionList) -> Vec<(u64, u64)> {
        l.iter().map(|p| (p.profit(), p.matsize())).collect()
    }

    #[test]
    fn leaf_sketch() {
        let inst = r1();
        let p = make_params(&inst.tree, eps("0.5")).unwrap();
        let l = sketch(&inst, NodeId(2), &p).unwrap();
        assert_eq!(values(&l), vec![(4, 2), (0, 0)]);
    }

    #[test]
    fn root_sketch_r1() {
        let inst = r1();
        let p = make_params(&inst.tree, eps("0.05")).unwrap();
        let l = sketch(&inst, NodeId(1), &p).unwrap();
        assert!(l.iter().any(|s| s.profit() == 11 && s.members() == vec![NodeId(2), NodeId(3)]));
        assert!(l.iter().all(|s| s.members() != vec![NodeId(1)]));
        assert!(l.contains_empty());

        let wide = inst.with_budget(6);
        let l6 = sketch(&wide, NodeId(1), &p).unwrap();
        assert!(l6.iter().any(|s| s.profit() == 12 && s.members() == vec![NodeId(1)]));
    }

    #[test]
    fn approximate_r1() {
        let inst = r1();
        let s = approximate(&inst, eps("0.5")).unwrap();
        assert_eq!((s.profit(), s.matsize()), (11, 5));
        assert_eq!(s.selection().ids(), vec![2, 3]);
        let zero = approximate(&inst.with_budget(0), eps("0.5")).unwrap();
        assert_eq!((zero.profit(), zero.matsize()), (0, 0));
    }

    #[test]
    fn approximate_within_bound_on_fixtures() {
        for tree in [bookstore(), path(7), star(9), r1().tree] {
            let total = tree.total_size();
            for budget in [0, 1, 3, 7, total / 3, total / 2, total] {
                let inst = Instance::new(tree.clone(), budget);
                let opt = brute_force(&inst).unwrap().profit();
                for e in ["0.05", "0.25", "0.5", "1"] {
                    let eps = eps(e);
                    let run = approximate_traced(&inst, eps).unwrap();
                    let s = &run.solution;
                    assert!(s.matsize() <= budget);
                    assert!(is_antichain(&tree, s.selection()).unwrap());
                    assert_eq!(profit_lambda(&tree, s.selection()).unwrap(), s.profit());
                    assert!(
                        (s.profit() as u128) * (eps.denom() + eps.numer()) as u128
                            >= opt as u128 * eps.denom() as u128,
                        "eps {e} budget {budget}: {} vs {opt}",
                        s.profit()
                    );
                    assert_eq!(run.trace.over_bound, 0);
                }
            }
        }
    }

    #[test]
    fn fast_merge_prune_matches_slow_path() {
        let inst = Instance::new(star(6), 9);
        let p = make_params(&inst.tree, eps("0.25")).unwrap();
        let kids: Vec<SolutionList> = inst
            .tree
            .children_of(NodeId(1))
            .map(|c| sketch(&inst, c, &p).unwrap())
            .collect();
        let mut acc = kids[0].clone();
        for k in &kids[1..] {
            let fast = merge_and_prune(&acc, k, &p, inst.budget);
            let slow = crate::fptas::prune(&crate::fptas::merge(&acc, k, &inst).unwrap(), &p).unwrap();
            let members = |l: &SolutionList| l.iter().map(|x| x.members()).collect::<Vec<_>>();
            assert_eq!(members(&fast), members(&slow));
            acc = fast;
        }
    }

    #[test]
    fn sketch_rejects_mismatched_params() {
        let inst = r1();
        let p = FptasParams::new(eps("1"), 2, 3).unwrap();
        assert!(sketch(&inst, NodeId(1), &p).is_err());
        assert!(sketch(&inst, NodeId(9), &make_params(&inst.tree, eps("1")).unwrap()).is_err());
    }
}
