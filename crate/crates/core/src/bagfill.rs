//! Bag filling for individually thresholded agents.
//!
//! Every agent's utilities are normalized so that her threshold is 1 and no
//! single item is worth more than 1. Items are poured into a bag, most
//! valuable first; as soon as some unserved agent values the bag at 1 or more
//! the bag goes to the lowest-indexed such agent and a fresh bag starts. A
//! closed bag is worth less than 2 to every agent still waiting, which is what
//! bounds the loss each assignment inflicts on the others.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{AgentId, Bundle};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdedAgent {
    pub id: AgentId,
    /// Capped utilities in `[0, 1]`, threshold normalized to 1.
    pub capped: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagFillOutcome {
    /// Closed bags in the order they were handed out.
    pub bags: Vec<(AgentId, Bundle)>,
    /// Items never put into a closed bag.
    pub leftover: Bundle,
}

impl BagFillOutcome {
    pub fn bundle_of(&self, id: AgentId) -> Option<&Bundle> {
        self.bags.iter().find(|(a, _)| *a == id).map(|(_, b)| b)
    }
}

pub fn bag_fill(agents: &[ThresholdedAgent], items: &Bundle) -> Result<BagFillOutcome> {
    let zero = Rational::zero();
    let one = Rational::one();
    for agent in agents {
        for &i in items.items() {
            let v = agent
                .capped
                .get(i)
                .ok_or_else(|| Error::OutOfRange(format!("item {} outside agent {}'s utilities", i + 1, agent.id)))?;
            if *v > one || *v < zero {
                return Err(Error::CapViolation { item: i + 1 });
            }
        }
    }

    let mut unserved: Vec<usize> = (0..agents.len()).collect();
    let mut queue = ordered_items(agents, &unserved, items.items());
    let mut bags = Vec::with_capacity(agents.len());
    let mut bag = Bundle::new();
    let mut bag_values = vec![Rational::zero(); agents.len()];

    while !unserved.is_empty() {
        // queue is sorted ascending by priority, so the best item is last
        let Some(item) = queue.pop() else {
            return Err(Error::Exhausted { unserved: unserved.len() });
        };
        bag.insert(item);
        for &a in &unserved {
            bag_values[a] += &agents[a].capped[item];
        }
        if let Some(pos) = unserved.iter().position(|&a| bag_values[a] >= one) {
            let winner = unserved.remove(pos);
            bags.push((agents[winner].id, std::mem::take(&mut bag)));
            for v in &mut bag_values {
                *v = Rational::zero();
            }
            if !unserved.is_empty() {
                queue = ordered_items(agents, &unserved, &queue);
            }
        }
    }

    let mut leftover: Bundle = queue.into_iter().collect();
    leftover.extend_from(&bag);
    Ok(BagFillOutcome { bags, leftover })
}

/// Items ordered so that `pop()` yields the largest maximum capped value over
/// `unserved`, ties broken toward the lower item index.
fn ordered_items(agents: &[ThresholdedAgent], unserved: &[usize], items: &[usize]) -> Vec<usize> {
    let mut keyed: Vec<(Rational, usize)> = items
        .iter()
        .map(|&i| {
            let key = unserved
                .iter()
                .map(|&a| &agents[a].capped[i])
                .max()
                .cloned()
                .unwrap_or_else(Rational::zero);
            (key, i)
        })
        .collect();
    keyed.sort_by(|(ka, ia), (kb, ib)| ka.cmp(kb).then(ib.cmp(ia)));
    keyed.into_iter().map(|(_, i)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};

    fn agent(g: usize, capped: Vec<Rational>) -> ThresholdedAgent {
        ThresholdedAgent { id: AgentId::new(g, 0), capped }
    }

    #[test]
    fn single_agent_single_item() {
        let out = bag_fill(&[agent(0, vec![from_int(1)])], &Bundle::all(1)).unwrap();
        assert_eq!(out.bags, vec![(AgentId::new(0, 0), Bundle::from_items([0]))]);
        assert!(out.leftover.is_empty());
    }

    #[test]
    fn two_agents_share_four_halves() {
        let halves = vec![from_frac(1, 2); 4];
        let out = bag_fill(&[agent(0, halves.clone()), agent(1, halves)], &Bundle::all(4)).unwrap();
        assert_eq!(out.bags[0], (AgentId::new(0, 0), Bundle::from_items([0, 1])));
        assert_eq!(out.bags[1], (AgentId::new(1, 0), Bundle::from_items([2, 3])));
        assert!(out.leftover.is_empty());
    }

    #[test]
    fn runs_out_of_items() {
        let half = vec![from_frac(1, 2)];
        let err = bag_fill(&[agent(0, half.clone()), agent(1, half)], &Bundle::all(1)).unwrap_err();
        assert!(matches!(err, Error::Exhausted { unserved: 2 }));
    }

    #[test]
    fn rejects_uncapped_values() {
        let err = bag_fill(&[agent(0, vec![from_frac(3, 2)])], &Bundle::all(1)).unwrap_err();
        assert!(matches!(err, Error::CapViolation { item: 1 }));
    }

    #[test]
    fn leftover_is_returned() {
        let v = vec![from_int(1), from_frac(1, 4), from_frac(1, 4)];
        let out = bag_fill(&[agent(0, v)], &Bundle::all(3)).unwrap();
        assert_eq!(out.bags[0].1, Bundle::from_items([0]));
        assert_eq!(out.leftover, Bundle::from_items([1, 2]));
    }

    #[test]
    fn prefers_items_valued_by_waiting_agents() {
        // agent 0 only likes item 1, agent 1 only likes item 0
        let a = agent(0, vec![from_int(0), from_int(1)]);
        let b = agent(1, vec![from_int(1), from_int(0)]);
        let out = bag_fill(&[a, b], &Bundle::all(2)).unwrap();
        assert_eq!(out.bundle_of(AgentId::new(0, 0)), Some(&Bundle::from_items([1])));
        assert_eq!(out.bundle_of(AgentId::new(1, 0)), Some(&Bundle::from_items([0])));
    }
}
