//! Exhaustive feasibility oracle: does a fixed instance admit an MMS^p
//! allocation, and what is the smallest `p` for which it does?
//!
//! Items are assigned depth-first in descending order of their largest
//! utility, groups in index order. A branch dies as soon as some agent's
//! current bundle plus every unassigned item falls short of her MMS^p.
//! Groups whose agents coincide as multisets are interchangeable, so such a
//! group may only receive items once its earlier twin has some.

use std::cmp::Reverse;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::mms::{exact_mms_weights, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::rational::{IntegerWeights, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Search nodes allowed per top-level branch.
    pub max_allocations: u64,
    /// Largest `m` for the exact MMS computations.
    pub mms_limit: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_allocations: 100_000_000, mms_limit: DEFAULT_EXHAUSTIVE_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    /// Lexicographically smallest feasible assignment in search order.
    pub allocation: Option<Allocation>,
    /// Search nodes visited over all branches.
    pub nodes: u64,
}

struct Agent {
    group: usize,
    weights: Vec<u128>,
    mms: u128,
}

struct Search {
    agents: Vec<Agent>,
    order: Vec<usize>,
    g: usize,
    /// Nearest earlier group with the same agent multiset.
    twin: Vec<Option<usize>>,
    limit: u64,
}

#[derive(Clone)]
struct State {
    owners: Vec<usize>,
    filled: Vec<usize>,
    current: Vec<u128>,
    remaining: Vec<u128>,
    nodes: u64,
}

impl Search {
    fn new(inst: &Instance, p: usize, budget: &OracleBudget) -> Result<Self> {
        if p == 0 {
            return Err(Error::Config("p must be positive".into()));
        }
        let m = inst.m();
        if m > budget.mms_limit {
            return Err(Error::TooLarge(format!("m = {m} exceeds the exact MMS limit {}", budget.mms_limit)));
        }
        let all: Vec<usize> = (0..m).collect();
        let agents = inst
            .agents()
            .map(|id| {
                let weights = IntegerWeights::from_rationals(inst.utilities(id))?.weights;
                let (mms, _) = exact_mms_weights(&weights, p, &all);
                Ok(Agent { group: id.group, weights, mms })
            })
            .collect::<Result<Vec<_>>>()?;

        let mut order = all;
        let peak = |i: usize| inst.agents().map(|id| inst.utilities(id)[i].clone()).max().expect("instance has agents");
        let keys: Vec<Rational> = order.iter().map(|&i| peak(i)).collect();
        order.sort_by_key(|&i| (Reverse(keys[i].clone()), i));

        let g = inst.group_count();
        let signatures: Vec<Vec<&[Rational]>> = inst
            .groups()
            .iter()
            .map(|group| {
                let mut agents: Vec<&[Rational]> = group.iter().map(Vec::as_slice).collect();
                agents.sort();
                agents
            })
            .collect();
        let twin = (0..g).map(|k| (0..k).rev().find(|&j| signatures[j] == signatures[k])).collect();

        Ok(Search { agents, order, g, twin, limit: budget.max_allocations })
    }

    fn initial_state(&self) -> State {
        State {
            owners: vec![usize::MAX; self.order.len()],
            filled: vec![0; self.g],
            current: vec![0; self.agents.len()],
            remaining: self.agents.iter().map(|a| a.weights.iter().sum()).collect(),
            nodes: 0,
        }
    }

    fn allowed(&self, state: &State, group: usize) -> bool {
        self.twin[group].is_none_or(|j| state.filled[j] > 0)
    }

    /// Gives `item` to `group`; returns whether every agent can still reach her share.
    fn assign(&self, state: &mut State, item: usize, group: usize) -> bool {
        state.owners[item] = group;
        state.filled[group] += 1;
        let mut alive = true;
        for (a, agent) in self.agents.iter().enumerate() {
            let w = agent.weights[item];
            state.remaining[a] -= w;
            if agent.group == group {
                state.current[a] += w;
            } else if state.current[a] + state.remaining[a] < agent.mms {
                alive = false;
            }
        }
        alive
    }

    fn unassign(&self, state: &mut State, item: usize, group: usize) {
        state.owners[item] = usize::MAX;
        state.filled[group] -= 1;
        for (a, agent) in self.agents.iter().enumerate() {
            let w = agent.weights[item];
            state.remaining[a] += w;
            if agent.group == group {
                state.current[a] -= w;
            }
        }
    }

    fn dfs(&self, state: &mut State, pos: usize) -> Result<bool> {
        state.nodes += 1;
        if state.nodes > self.limit {
            return Err(Error::TooLarge(format!("search exceeded {} nodes", self.limit)));
        }
        let Some(&item) = self.order.get(pos) else {
            return Ok(true);
        };
        for group in 0..self.g {
            if !self.allowed(state, group) {
                continue;
            }
            if self.assign(state, item, group) && self.dfs(state, pos + 1)? {
                return Ok(true);
            }
            self.unassign(state, item, group);
        }
        Ok(false)
    }

    /// Explores the first item's branches in parallel; picks the lowest branch with a witness.
    fn run(&self) -> Result<OracleOutcome> {
        let Some(&first) = self.order.first() else {
            return Ok(OracleOutcome { allocation: Some(Allocation::new(vec![Default::default(); self.g])), nodes: 1 });
        };
        let root = self.initial_state();
        let branches: Vec<Result<(Option<Vec<usize>>, u64)>> = (0..self.g)
            .into_par_iter()
            .map(|group| {
                let mut state = root.clone();
                if !self.allowed(&state, group) {
                    return Ok((None, 0));
                }
                let found = self.assign(&mut state, first, group) && self.dfs(&mut state, 1)?;
                Ok((found.then(|| state.owners.clone()), state.nodes))
            })
            .collect();
        let mut nodes = 1;
        for branch in branches {
            let (owners, visited) = branch?;
            nodes += visited;
            if let Some(owners) = owners {
                return Ok(OracleOutcome { allocation: Some(Allocation::from_owners(&owners, self.g)), nodes });
            }
        }
        Ok(OracleOutcome { allocation: None, nodes })
    }
}

/// Searches for an allocation giving every agent her exact MMS^p.
pub fn exists_mms_allocation(inst: &Instance, p: usize, budget: &OracleBudget) -> Result<OracleOutcome> {
    Search::new(inst, p, budget)?.run()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinFeasible {
    pub p: usize,
    pub allocation: Allocation,
    /// Nodes visited over every `p` tried.
    pub nodes: u64,
}

/// Smallest `p` admitting an MMS^p allocation, with its witness.
pub fn min_feasible(inst: &Instance, budget: &OracleBudget) -> Result<MinFeasible> {
    let mut nodes = 0;
    // MMS^p is 0 once p exceeds m, so the scan stops by p = m + 1
    for p in 1..=inst.m() + 1 {
        let out = exists_mms_allocation(inst, p, budget)?;
        nodes += out.nodes;
        if let Some(allocation) = out.allocation {
            return Ok(MinFeasible { p, allocation, nodes });
        }
    }
    unreachable!("every allocation is MMS^(m+1)")
}

pub fn min_feasible_p(inst: &Instance, budget: &OracleBudget) -> Result<usize> {
    min_feasible(inst, budget).map(|r| r.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::{equal_two_group_params, footnote_instance, generic_instance, identical_items_instance, materialize, DesignMethod, GenericLbParams, GroupMode};
    use crate::alloc::{all_true, verify_exact};
    use crate::covering::reference_design_5_3_2;

    fn budget() -> OracleBudget {
        OracleBudget::default()
    }

    #[test]
    fn footnote_needs_three() {
        let inst = footnote_instance();
        assert!(exists_mms_allocation(&inst, 2, &budget()).unwrap().allocation.is_none());
        let alloc = exists_mms_allocation(&inst, 3, &budget()).unwrap().allocation.unwrap();
        assert!(all_true(&verify_exact(&inst, &alloc, 3).unwrap()));
        assert_eq!(min_feasible_p(&inst, &budget()).unwrap(), 3);
    }

    #[test]
    fn table_instance_is_infeasible_at_three() {
        let d = reference_design_5_3_2();
        let params = GenericLbParams { m: 5, p: 3, t: vec![2, 2], sizes: vec![4, 4], modes: vec![GroupMode::Covering; 2] };
        let gen = generic_instance(&params, &[Some(d.clone()), Some(d)]).unwrap();
        assert!(exists_mms_allocation(&gen.instance, 3, &budget()).unwrap().allocation.is_none());
    }

    #[test]
    fn equal_groups_of_four() {
        let gen = materialize(&equal_two_group_params(4).unwrap(), DesignMethod::Greedy).unwrap();
        assert!(exists_mms_allocation(&gen.instance, 2, &budget()).unwrap().allocation.is_none());
    }

    #[test]
    fn identical_items_need_g() {
        for g in 2..=4 {
            let gen = identical_items_instance(g).unwrap();
            assert_eq!(min_feasible_p(&gen.instance, &budget()).unwrap(), g);
        }
    }

    #[test]
    fn single_valued_item_two_groups() {
        let inst = Instance::from_integers(&[vec![vec![1]], vec![vec![1]]]).unwrap();
        assert_eq!(min_feasible_p(&inst, &budget()).unwrap(), 2);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = OracleBudget { max_allocations: 2, ..budget() };
        let d = reference_design_5_3_2();
        let params = GenericLbParams { m: 5, p: 3, t: vec![2, 2], sizes: vec![4, 4], modes: vec![GroupMode::Covering; 2] };
        let gen = generic_instance(&params, &[Some(d.clone()), Some(d)]).unwrap();
        assert!(matches!(exists_mms_allocation(&gen.instance, 3, &tight), Err(Error::TooLarge(_))));
    }

    #[test]
    fn witness_is_lexicographically_first() {
        // identical singleton groups: the first group takes item 1
        let inst = Instance::from_integers(&[vec![vec![1, 1]], vec![vec![1, 1]]]).unwrap();
        let alloc = exists_mms_allocation(&inst, 2, &budget()).unwrap().allocation.unwrap();
        assert_eq!(alloc.to_document(), r#"{"bundles":[[1],[2]]}"#);
    }
}
