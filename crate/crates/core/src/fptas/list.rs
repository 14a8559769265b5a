use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use super::params::{region_of, FptasParams};
use crate::error::{Error, Result};
use crate::model::{Instance, NodeId, Selection, Solution};

/// Members of a partial solution, shared between the links built from it.
#[derive(Debug)]
enum Picks {
    Empty,
    One(NodeId),
    Link(Arc<Picks>, Arc<Picks>),
}

impl Picks {
    fn collect(&self, out: &mut Vec<NodeId>) {
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            match p {
                Picks::Empty => {}
                Picks::One(id) => out.push(*id),
                Picks::Link(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
            }
        }
    }
}

/// A partial solution: an antichain of node ids with its additive saving and
/// size. Links share structure, so building one is O(1).
#[derive(Clone, Debug)]
pub struct Partial {
    profit: u64,
    matsize: u64,
    count: u32,
    picks: Arc<Picks>,
}

impl Partial {
    pub fn empty() -> Self {
        Partial {
            profit: 0,
            matsize: 0,
            count: 0,
            picks: Arc::new(Picks::Empty),
        }
    }

    /// A partial with the given members and cached values. The caller vouches
    /// that `profit` and `matsize` belong to `members`.
    pub fn new(members: &[NodeId], profit: u64, matsize: u64) -> Self {
        let picks = members.iter().fold(Arc::new(Picks::Empty), |acc, &id| {
            Arc::new(Picks::Link(acc, Arc::new(Picks::One(id))))
        });
        Partial {
            profit,
            matsize,
            count: members.len() as u32,
            picks,
        }
    }

    pub fn from_solution(sol: &Solution) -> Self {
        let ids: Vec<NodeId> = sol.selection().iter().collect();
        Partial::new(&ids, sol.profit(), sol.matsize())
    }

    pub(crate) fn single(id: NodeId, profit: u64, matsize: u64) -> Self {
        Partial {
            profit,
            matsize,
            count: 1,
            picks: Arc::new(Picks::One(id)),
        }
    }

    /// Concatenation `self ∘ other`; both must come from disjoint subtrees.
    pub fn link(&self, other: &Partial) -> Partial {
        if other.count == 0 {
            return self.clone();
        }
        if self.count == 0 {
            return other.clone();
        }
        Partial {
            profit: self.profit + other.profit,
            matsize: self.matsize + other.matsize,
            count: self.count + other.count,
            picks: Arc::new(Picks::Link(self.picks.clone(), other.picks.clone())),
        }
    }

    pub fn profit(&self) -> u64 {
        self.profit
    }

    pub fn matsize(&self) -> u64 {
        self.matsize
    }

    pub fn len(&self) -> usize {
        self.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Member ids in ascending order.
    pub fn members(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.count as usize);
        self.picks.collect(&mut out);
        out.sort_unstable();
        out
    }

    pub fn to_solution(&self) -> Solution {
        let sel: Selection = self.members().into_iter().collect();
        Solution::from_parts(sel, self.profit, self.matsize)
    }
}

/// Prune order inside one region: smaller size, then fewer members, then the
/// lexicographically smaller id list.
fn survivor_order(a: &Partial, b: &Partial) -> Ordering {
    a.matsize
        .cmp(&b.matsize)
        .then(a.count.cmp(&b.count))
        .then_with(|| a.members().cmp(&b.members()))
}

/// Final pick: larger saving first, then the prune order.
pub(crate) fn best_order(a: &Partial, b: &Partial) -> Ordering {
    b.profit.cmp(&a.profit).then_with(|| survivor_order(a, b))
}

#[derive(Clone, Debug, Default)]
pub struct SolutionList {
    items: Vec<Partial>,
}

impl SolutionList {
    pub fn new() -> Self {
        SolutionList::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partial> {
        self.items.iter()
    }

    pub fn push(&mut self, p: Partial) {
        self.items.push(p);
    }

    pub fn contains_empty(&self) -> bool {
        self.items.iter().any(Partial::is_empty)
    }

    /// The highest-saving partial under the final tie-break.
    pub fn best(&self) -> Option<&Partial> {
        self.items.iter().min_by(|a, b| best_order(a, b))
    }

    pub fn to_solutions(&self) -> Vec<Solution> {
        self.items.iter().map(Partial::to_solution).collect()
    }
}

impl From<Vec<Partial>> for SolutionList {
    fn from(items: Vec<Partial>) -> Self {
        SolutionList { items }
    }
}

impl FromIterator<Partial> for SolutionList {
    fn from_iter<I: IntoIterator<Item = Partial>>(iter: I) -> Self {
        SolutionList {
            items: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a SolutionList {
    type Item = &'a Partial;
    type IntoIter = std::slice::Iter<'a, Partial>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

/// Lengths seen at every list-producing step of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ListTrace {
    pub max_len: usize,
    pub returns: u64,
    /// Returns whose length exceeded `bound`.
    pub over_bound: u64,
    pub bound: usize,
}

impl ListTrace {
    pub fn new(bound: usize) -> Self {
        ListTrace {
            bound,
            ..ListTrace::default()
        }
    }

    pub(crate) fn record(&mut self, len: usize) {
        self.returns += 1;
        self.max_len = self.max_len.max(len);
        if len > self.bound {
            self.over_bound += 1;
        }
    }
}

/// Keeps one partial per occupied profit region: the one with least size
/// (ties: fewer members, then smaller id list). Output is ordered by region.
pub fn prune(list: &SolutionList, params: &FptasParams) -> Result<SolutionList> {
    for p in list {
        region_of(p.profit, params)?;
    }
    Ok(prune_unchecked(list.items.iter().cloned(), params))
}

pub(crate) fn prune_unchecked(
    items: impl IntoIterator<Item = Partial>,
    params: &FptasParams,
) -> SolutionList {
    let mut slots: Vec<Option<Partial>> = vec![None; params.list_bound()];
    for p in items {
        let slot = &mut slots[params.region_unchecked(p.profit)];
        match slot {
            Some(cur) if survivor_order(&p, cur) != Ordering::Less => {}
            _ => *slot = Some(p),
        }
    }
    slots.into_iter().flatten().collect()
}

fn member_set(list: &SolutionList) -> HashSet<NodeId> {
    list.iter().flat_map(|p| p.members()).collect()
}

fn check_disjoint(lists: &[&SolutionList]) -> Result<()> {
    let mut seen: HashSet<NodeId> = HashSet::new();
    for l in lists {
        let here = member_set(l);
        if let Some(id) = here.iter().find(|id| seen.contains(id)) {
            return Err(Error::Internal(format!(
                "node {id} appears in more than one list being linked"
            )));
        }
        seen.extend(here);
    }
    Ok(())
}

/// Every pairwise link `a ∘ b` that fits the budget.
pub fn merge(l1: &SolutionList, l2: &SolutionList, inst: &Instance) -> Result<SolutionList> {
    check_disjoint(&[l1, l2])?;
    let mut out = SolutionList::new();
    for a in l1 {
        for b in l2 {
            if a.matsize + b.matsize <= inst.budget {
                out.push(a.link(b));
            }
        }
    }
    Ok(out)
}

/// Recursive halving: `prune(merge(union(first half), union(second half)))`.
pub fn union(lists: &[SolutionList], params: &FptasParams, inst: &Instance) -> Result<SolutionList> {
    if lists.is_empty() {
        return Err(Error::InvalidInput("union of zero lists".into()));
    }
    let refs: Vec<&SolutionList> = lists.iter().collect();
    check_disjoint(&refs)?;
    for l in lists {
        for p in l {
            region_of(p.profit, params)?;
        }
    }
    let mut trace = ListTrace::new(params.list_bound());
    Ok(union_unchecked(lists.to_vec(), params, inst.budget, &mut trace))
}

pub(crate) fn union_unchecked(
    mut lists: Vec<SolutionList>,
    params: &FptasParams,
    budget: u64,
    trace: &mut ListTrace,
) -> SolutionList {
    if lists.len() == 1 {
        return lists.pop().expect("one list");
    }
    let right = lists.split_off(lists.len() / 2);
    let l = union_unchecked(lists, params, budget, trace);
    let r = union_unchecked(right, params, budget, trace);
    let out = merge_prune(&l, &r, params, budget);
    trace.record(out.len());
    out
}

/// `prune(merge(l1, l2))` without materializing the full cross product:
/// candidates are compared by (region, size, count) and only the survivors
/// are linked.
pub(crate) fn merge_prune(
    l1: &SolutionList,
    l2: &SolutionList,
    params: &FptasParams,
    budget: u64,
) -> SolutionList {
    let mut slots: Vec<Option<(usize, usize)>> = vec![None; params.list_bound()];
    for (i, a) in l1.items.iter().enumerate() {
        if a.matsize > budget {
            continue;
        }
        let room = budget - a.matsize;
        for (j, b) in l2.items.iter().enumerate() {
            if b.matsize > room {
                continue;
            }
            let slot = &mut slots[params.region_unchecked(a.profit + b.profit)];
            let replace = match *slot {
                None => true,
                Some((ci, cj)) => {
                    let (ca, cb) = (&l1.items[ci], &l2.items[cj]);
                    let size = a.matsize + b.matsize;
                    let cur_size = ca.matsize + cb.matsize;
                    match size.cmp(&cur_size).then((a.count + b.count).cmp(&(ca.count + cb.count))) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => {
                            let mut new_ids = a.members();
                            new_ids.extend(b.members());
                            new_ids.sort_unstable();
                            let mut cur_ids = ca.members();
                            cur_ids.extend(cb.members());
                            cur_ids.sort_unstable();
                            new_ids < cur_ids
                        }
                    }
                }
            };
            if replace {
                *slot = Some((i, j));
            }
        }
    }
    slots
        .into_iter()
        .flatten()
        .map(|(i, j)| l1.items[i].link(&l2.items[j]))
        .collect()
}
