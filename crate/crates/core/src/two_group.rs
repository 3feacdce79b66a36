//! Concrete bounds and exact success fractions for two groups.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Allocation, Instance};
use crate::mms::{exact_mms_weights, subset_sums, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::rational::{IntegerWeights, Rational};

/// Smallest `p` with `(1 - 2^(1-p))^n1 + (1 - 2^(1-p))^n2 >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoGroupBound {
    pub n1: u64,
    pub n2: u64,
    pub p: u64,
}

/// `1 - 2^(1-p)`: probability a uniform random subset gives one agent her
/// MMS^p, as guaranteed for every agent.
fn single_agent_rate(p: u64) -> Rational {
    let denom = BigInt::one() << (p - 1);
    Rational::one() - Rational::new(BigInt::one(), denom)
}

/// `(1 - 2^(1-p))^n1 + (1 - 2^(1-p))^n2 - 1`, the guaranteed lower bound on
/// the fraction of MMS^p allocations.
pub fn fraction_lower_bound(n1: u64, n2: u64, p: u64) -> Rational {
    let rate = single_agent_rate(p.max(1));
    Pow::pow(&rate, BigInt::from(n1)) + Pow::pow(&rate, BigInt::from(n2)) - Rational::one()
}

pub fn two_group_p(n1: u64, n2: u64) -> Result<TwoGroupBound> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Config("group sizes must be positive".into()));
    }
    let mut p = 1;
    while fraction_lower_bound(n1, n2, p) < Rational::zero() {
        p += 1;
    }
    Ok(TwoGroupBound { n1, n2, p })
}

/// `1 + ceil(log2(n1 + n2))`.
pub fn corollary_p(n1: u64, n2: u64) -> Result<u64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::Config("group sizes must be positive".into()));
    }
    let total = n1 + n2;
    let ceil_log = 64 - (total - 1).leading_zeros() as u64;
    Ok(1 + ceil_log)
}

/// Per-agent integer weights and exact MMS^p, for the enumerations below.
fn agent_targets(inst: &Instance, p: usize) -> Result<Vec<(usize, Vec<u128>, u128)>> {
    let all: Vec<usize> = (0..inst.m()).collect();
    inst.agents()
        .map(|id| {
            let w = IntegerWeights::from_rationals(inst.utilities(id))?;
            let (mms, _) = exact_mms_weights(&w.weights, p, &all);
            Ok((id.group, w.weights, mms))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub allocation: Option<Allocation>,
    /// Samples drawn, including the successful one.
    pub trials: u64,
}

/// Samples uniform allocations (each item to a uniformly random group) until
/// one gives every agent her exact MMS^p, or the budget runs out.
pub fn random_allocation_search(inst: &Instance, p: usize, trials: u64, seed: u64) -> Result<SearchOutcome> {
    if p == 0 {
        return Err(Error::Config("p must be positive".into()));
    }
    if inst.m() > DEFAULT_EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!("m = {} exceeds the exhaustive limit", inst.m())));
    }
    let g = inst.group_count();
    let targets = agent_targets(inst, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owners = vec![0usize; inst.m()];
    for trial in 1..=trials {
        for o in owners.iter_mut() {
            *o = rng.gen_range(0..g);
        }
        let ok = targets.iter().all(|(group, w, mms)| {
            let have: u128 = owners.iter().zip(w).filter(|(o, _)| **o == *group).map(|(_, v)| *v).sum();
            have >= *mms
        });
        if ok {
            return Ok(SearchOutcome { allocation: Some(Allocation::from_owners(&owners, g)), trials: trial });
        }
    }
    Ok(SearchOutcome { allocation: None, trials })
}

/// Exact fraction of the `2^m` two-group allocations that are MMS^p.
pub fn exact_allocation_fraction(inst: &Instance, p: usize) -> Result<Rational> {
    const MAX_ITEMS: usize = 20;
    if inst.group_count() != 2 {
        return Err(Error::Config(format!("fraction needs exactly 2 groups, got {}", inst.group_count())));
    }
    if p == 0 {
        return Err(Error::Config("p must be positive".into()));
    }
    let m = inst.m();
    if m > MAX_ITEMS {
        return Err(Error::TooLarge(format!("{m} items exceed the enumeration limit {MAX_ITEMS}")));
    }
    let full = (1usize << m) - 1;
    // bit i of a mask set: item i goes to group 1
    let mut alive = vec![true; full + 1];
    for (group, weights, mms) in agent_targets(inst, p)? {
        let sums = subset_sums(&weights);
        for (mask, ok) in alive.iter_mut().enumerate() {
            if *ok {
                let own = if group == 0 { mask } else { full ^ mask };
                *ok = sums[own] >= mms;
            }
        }
    }
    let hits = alive.iter().filter(|&&ok| ok).count();
    Ok(Rational::new(BigInt::from(hits), BigInt::one() << m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::footnote_instance;
    use crate::rational::from_frac;

    #[test]
    fn two_group_p_examples() {
        assert_eq!(two_group_p(1, 1).unwrap().p, 2);
        assert_eq!(two_group_p(2, 2).unwrap().p, 3);
        assert_eq!(two_group_p(4, 4).unwrap().p, 4);
        assert_eq!(two_group_p(5, 5).unwrap().p, 4);
    }

    #[test]
    fn one_one_is_exactly_tight() {
        assert_eq!(fraction_lower_bound(1, 1, 2), Rational::zero());
    }

    #[test]
    fn log_bound_examples() {
        assert_eq!(corollary_p(1, 1).unwrap(), 2);
        assert_eq!(corollary_p(4, 4).unwrap(), 4);
        assert_eq!(corollary_p(5, 5).unwrap(), 5);
        assert_eq!(corollary_p(2, 1).unwrap(), 3);
    }

    #[test]
    fn footnote_fractions() {
        let inst = footnote_instance();
        assert_eq!(exact_allocation_fraction(&inst, 3).unwrap(), Rational::one());
        assert_eq!(exact_allocation_fraction(&inst, 2).unwrap(), Rational::zero());
    }

    #[test]
    fn search_footnote_never_succeeds_at_two() {
        let inst = footnote_instance();
        let out = random_allocation_search(&inst, 2, 500, 3).unwrap();
        assert!(out.allocation.is_none());
        assert_eq!(out.trials, 500);
        let out = random_allocation_search(&inst, 3, 10, 3).unwrap();
        assert_eq!(out.trials, 1);
    }

    #[test]
    fn single_pair_fraction() {
        // one agent per group, two identical items: only splits work at p = 2
        let inst = Instance::from_integers(&[vec![vec![1, 1]], vec![vec![1, 1]]]).unwrap();
        assert_eq!(exact_allocation_fraction(&inst, 2).unwrap(), from_frac(1, 2));
    }
}
