//! 1-out-of-p maximin shares: exact search, the LPT approximation, capped
//! normalization, and the greedy sufficiency witness for capped agents.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{bundle_value, Bundle};
use crate::rational::{self, IntegerWeights, Rational};

/// Largest item set the exhaustive solver accepts unless told otherwise.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 16;

/// A maximin-share value with a partition attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsResult {
    pub value: Rational,
    /// Exactly `p` bundles; empty bundles are allowed.
    pub witness: Vec<Bundle>,
    /// `true` for the exhaustive solver, `false` for the LPT lower bound.
    pub exact: bool,
}

#[derive(Serialize)]
struct MmsResultDoc {
    value: String,
    exact: bool,
    witness: Vec<Vec<usize>>,
}

impl MmsResult {
    pub fn to_document(&self) -> String {
        let doc = MmsResultDoc {
            value: rational::format(&self.value),
            exact: self.exact,
            witness: self.witness.iter().map(Bundle::one_based).collect(),
        };
        serde_json::to_string(&doc).expect("mms result serializes")
    }
}

/// Sum of the agent's utilities over `bundle`.
pub fn utility(values: &[Rational], bundle: &Bundle) -> Rational {
    bundle_value(values, bundle)
}

fn check_items(values: &[Rational], items: &Bundle) -> Result<()> {
    match items.items().last() {
        Some(&last) if last >= values.len() => {
            Err(Error::OutOfRange(format!("item {} exceeds m = {}", last + 1, values.len())))
        }
        _ => Ok(()),
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Config("p must be positive".into()));
    }
    Ok(())
}

pub fn exact_mms(values: &[Rational], p: usize, items: &Bundle) -> Result<MmsResult> {
    exact_mms_with_limit(values, p, items, DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Exact MMS by depth-first search over item-to-bundle assignments.
pub fn exact_mms_with_limit(values: &[Rational], p: usize, items: &Bundle, limit: usize) -> Result<MmsResult> {
    check_p(p)?;
    check_items(values, items)?;
    if items.len() > limit {
        return Err(Error::TooLarge(format!("{} items exceed the exhaustive limit {}", items.len(), limit)));
    }
    let weights = IntegerWeights::from_rationals(values)?;
    let (value, parts) = exact_mms_weights(&weights.weights, p, items.items());
    Ok(MmsResult {
        value: weights.to_rational(value),
        witness: parts.into_iter().map(Bundle::from_items).collect(),
        exact: true,
    })
}

/// Exact MMS on integer weights. Returns the value and `p` parts.
pub(crate) fn exact_mms_weights(weights: &[u128], p: usize, items: &[usize]) -> (u128, Vec<Vec<usize>>) {
    let mut order: Vec<usize> = items.iter().copied().filter(|&i| weights[i] > 0).collect();
    let zeros: Vec<usize> = items.iter().copied().filter(|&i| weights[i] == 0).collect();
    order.sort_by_key(|&i| (Reverse(weights[i]), i));

    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); p];
    let value = if order.len() < p {
        for (k, &i) in order.iter().enumerate() {
            parts[k].push(i);
        }
        0
    } else {
        let mut search = ExactSearch::new(weights, &order, p);
        search.run();
        for (k, &bin) in search.best_assignment.iter().enumerate() {
            parts[bin].push(order[k]);
        }
        search.best
    };
    parts[0].extend(zeros);
    for part in &mut parts {
        part.sort_unstable();
    }
    (value, parts)
}

struct ExactSearch<'a> {
    values: Vec<u128>,
    suffix: Vec<u128>,
    p: usize,
    loads: Vec<u128>,
    assignment: Vec<usize>,
    best: u128,
    best_assignment: Vec<usize>,
    ceiling: u128,
    _weights: &'a [u128],
}

impl<'a> ExactSearch<'a> {
    fn new(weights: &'a [u128], order: &[usize], p: usize) -> Self {
        let values: Vec<u128> = order.iter().map(|&i| weights[i]).collect();
        let mut suffix = vec![0u128; values.len() + 1];
        for k in (0..values.len()).rev() {
            suffix[k] = suffix[k + 1] + values[k];
        }
        // LPT incumbent; the search only has to beat it.
        let (lpt_value, lpt_bins) = lpt_bins(&values, p);
        ExactSearch {
            ceiling: suffix[0] / p as u128,
            suffix,
            p,
            loads: vec![0; p],
            assignment: vec![0; values.len()],
            best: lpt_value,
            best_assignment: lpt_bins,
            values,
            _weights: weights,
        }
    }

    fn run(&mut self) {
        if self.best < self.ceiling {
            self.descend(0, 0);
        }
    }

    /// Water-filling bound: the best minimum reachable by spreading the
    /// remaining value over the lightest bundles.
    fn bound(&self, remaining: u128) -> u128 {
        let mut loads = self.loads.clone();
        loads.sort_unstable();
        let mut acc = remaining;
        for k in 0..loads.len() {
            acc += loads[k];
            let level = acc / (k as u128 + 1);
            if k + 1 == loads.len() || level <= loads[k + 1] {
                return level;
            }
        }
        unreachable!("loads is non-empty")
    }

    fn descend(&mut self, k: usize, opened: usize) {
        if self.best >= self.ceiling {
            return;
        }
        if k == self.values.len() {
            let min = *self.loads.iter().min().expect("p >= 1");
            if min > self.best {
                self.best = min;
                self.best_assignment.clone_from(&self.assignment);
            }
            return;
        }
        if self.bound(self.suffix[k]) <= self.best {
            return;
        }
        let limit = (opened + 1).min(self.p);
        for bin in 0..limit {
            // bundles with equal loads are interchangeable from here on
            if (0..bin).any(|b| self.loads[b] == self.loads[bin]) {
                continue;
            }
            self.loads[bin] += self.values[k];
            self.assignment[k] = bin;
            self.descend(k + 1, opened.max(bin + 1));
            self.loads[bin] -= self.values[k];
        }
    }
}

/// LPT over values already sorted in non-increasing order.
fn lpt_bins(sorted_values: &[u128], p: usize) -> (u128, Vec<usize>) {
    let mut heap: BinaryHeap<Reverse<(u128, usize)>> = (0..p).map(|b| Reverse((0, b))).collect();
    let mut bins = Vec::with_capacity(sorted_values.len());
    for &v in sorted_values {
        let Reverse((load, bin)) = heap.pop().expect("p >= 1");
        bins.push(bin);
        heap.push(Reverse((load + v, bin)));
    }
    let min = heap.iter().map(|Reverse((load, _))| *load).min().unwrap_or(0);
    (min, bins)
}

/// LPT on integer weights: returns the minimum bundle load and `p` parts.
pub(crate) fn lpt_weights(weights: &[u128], p: usize, items: &[usize]) -> (u128, Vec<Vec<usize>>) {
    let mut order: Vec<usize> = items.to_vec();
    order.sort_by_key(|&i| (Reverse(weights[i]), i));
    let values: Vec<u128> = order.iter().map(|&i| weights[i]).collect();
    let (min, bins) = lpt_bins(&values, p);
    let mut parts = vec![Vec::new(); p];
    for (k, bin) in bins.into_iter().enumerate() {
        parts[bin].push(order[k]);
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    (min, parts)
}

/// Longest-processing-time greedy: a value in `[3/4 MMS^p, MMS^p]`.
///
/// Items go in non-increasing value order (ties by index) to the currently
/// lightest bundle (ties by lowest bundle index).
pub fn lpt_mms(values: &[Rational], p: usize, items: &Bundle) -> Result<MmsResult> {
    check_p(p)?;
    check_items(values, items)?;
    match IntegerWeights::from_rationals(values) {
        Ok(weights) => {
            let (value, parts) = lpt_weights(&weights.weights, p, items.items());
            Ok(MmsResult {
                value: weights.to_rational(value),
                witness: parts.into_iter().map(Bundle::from_items).collect(),
                exact: false,
            })
        }
        Err(Error::Overflow(_)) => Ok(lpt_rational(values, p, items)),
        Err(e) => Err(e),
    }
}

fn lpt_rational(values: &[Rational], p: usize, items: &Bundle) -> MmsResult {
    let mut order: Vec<usize> = items.items().to_vec();
    order.sort_by(|&a, &b| values[b].cmp(&values[a]).then(a.cmp(&b)));
    let mut heap: BinaryHeap<Reverse<(Rational, usize)>> = (0..p).map(|b| Reverse((Rational::zero(), b))).collect();
    let mut parts = vec![Vec::new(); p];
    for i in order {
        let Reverse((load, bin)) = heap.pop().expect("p >= 1");
        parts[bin].push(i);
        heap.push(Reverse((load + &values[i], bin)));
    }
    let value = heap.into_iter().map(|Reverse((load, _))| load).min().unwrap_or_else(Rational::zero);
    MmsResult { value, witness: parts.into_iter().map(Bundle::from_items).collect(), exact: false }
}

/// Utilities rescaled so that the threshold maps to 3/4, then capped at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedAgent {
    pub scale: Rational,
    pub capped: Vec<Rational>,
}

impl NormalizedAgent {
    pub fn value(&self, bundle: &Bundle) -> Rational {
        bundle_value(&self.capped, bundle)
    }
}

pub fn normalize(values: &[Rational], threshold: &Rational) -> Result<NormalizedAgent> {
    if *threshold <= Rational::zero() {
        return Err(Error::NonpositiveThreshold);
    }
    let scale = Rational::new(BigInt::from(3), BigInt::from(4)) / threshold;
    let one = Rational::one();
    let capped = values
        .iter()
        .map(|v| {
            let s = v * &scale;
            if s > one {
                one.clone()
            } else {
                s
            }
        })
        .collect();
    Ok(NormalizedAgent { scale, capped })
}

/// Integer form of a normalized agent: capped value of item `i` is
/// `values[i] / unit`, and "capped utility at least 1" is `sum >= unit`.
#[derive(Debug, Clone)]
pub(crate) struct CappedWeights {
    pub values: Vec<u128>,
    pub unit: u128,
}

impl CappedWeights {
    /// `threshold` is in the same integer units as `weights`.
    pub fn new(weights: &[u128], threshold: u128) -> Self {
        debug_assert!(threshold > 0);
        let unit = 4 * threshold;
        CappedWeights { values: weights.iter().map(|&w| (3 * w).min(unit)).collect(), unit }
    }

    pub fn sum(&self, items: &[usize]) -> u128 {
        items.iter().map(|&i| self.values[i]).sum()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        let unit = BigInt::from(self.unit);
        self.values.iter().map(|&v| Rational::new(BigInt::from(v), unit.clone())).collect()
    }
}

/// Greedy certificate that a capped agent with total at least `2p` has
/// capped MMS^p at least 1: fill bundles in index order until each reaches 1,
/// then append what is left to the last one.
pub fn sufficiency_witness(agent: &NormalizedAgent, p: usize, items: &Bundle) -> Result<Vec<Bundle>> {
    check_p(p)?;
    check_items(&agent.capped, items)?;
    let one = Rational::one();
    if let Some(item) = items.items().iter().copied().find(|&i| agent.capped[i] > one) {
        return Err(Error::CapViolation { item: item + 1 });
    }
    let total = agent.value(items);
    if total < rational::from_int(2 * p as i64) {
        return Err(Error::NotApplicable { total: rational::format(&total), needed: 2 * p as u64 });
    }
    let mut bundles: Vec<Bundle> = Vec::with_capacity(p);
    let mut current = Bundle::new();
    let mut current_value = Rational::zero();
    for &i in items.items() {
        current.insert(i);
        current_value += &agent.capped[i];
        if bundles.len() + 1 < p && current_value >= one {
            bundles.push(std::mem::take(&mut current));
            current_value = Rational::zero();
        }
    }
    bundles.push(current);
    debug_assert_eq!(bundles.len(), p);
    Ok(bundles)
}

/// Exact fraction of the `2^m` subsets an agent values at least her MMS^p.
pub fn subset_success_fraction(values: &[Rational], p: usize) -> Result<Rational> {
    const MAX_ITEMS: usize = 20;
    check_p(p)?;
    let m = values.len();
    if m > MAX_ITEMS {
        return Err(Error::TooLarge(format!("{m} items exceed the subset enumeration limit {MAX_ITEMS}")));
    }
    let weights = IntegerWeights::from_rationals(values)?;
    let (mms, _) = exact_mms_weights(&weights.weights, p, &(0..m).collect::<Vec<_>>());
    let sums = subset_sums(&weights.weights);
    let hits = sums.iter().filter(|&&s| s >= mms).count();
    Ok(Rational::new(BigInt::from(hits), BigInt::from(1u64) << m))
}

/// `sums[mask]` is the total weight of the items in `mask`.
pub(crate) fn subset_sums(weights: &[u128]) -> Vec<u128> {
    let n = 1usize << weights.len();
    let mut sums = vec![0u128; n];
    for mask in 1..n {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + weights[low];
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_frac, from_int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| from_int(x)).collect()
    }

    #[test]
    fn utility_is_additive() {
        assert_eq!(utility(&ints(&[1, 1, 0]), &Bundle::from_items([0, 2])), from_int(1));
        assert_eq!(utility(&ints(&[4, 5]), &Bundle::new()), from_int(0));
        let covering = vec![from_frac(1, 3), from_frac(1, 3), from_frac(1, 3), from_int(1), from_int(1)];
        assert_eq!(utility(&covering, &Bundle::from_items([0, 1, 2])), from_int(1));
    }

    #[test]
    fn exact_identical_items() {
        let r = exact_mms(&ints(&[1, 1, 1]), 3, &Bundle::all(3)).unwrap();
        assert_eq!(r.value, from_int(1));
        assert!(r.exact);
        let mut w = r.witness.clone();
        w.sort();
        assert_eq!(w, vec![Bundle::from_items([0]), Bundle::from_items([1]), Bundle::from_items([2])]);
    }

    #[test]
    fn exact_footnote_agent_and_sparse_agent() {
        assert_eq!(exact_mms(&ints(&[1, 1, 0]), 2, &Bundle::all(3)).unwrap().value, from_int(1));
        let sparse = exact_mms(&ints(&[1, 1]), 3, &Bundle::all(2)).unwrap();
        assert_eq!(sparse.value, from_int(0));
        assert_eq!(sparse.witness.len(), 3);
    }

    #[test]
    fn exact_rejects_large_sets() {
        let v = ints(&[1; 17]);
        assert!(matches!(exact_mms(&v, 2, &Bundle::all(17)), Err(Error::TooLarge(_))));
        assert!(exact_mms_with_limit(&v, 2, &Bundle::all(17), 17).is_ok());
    }

    #[test]
    fn exact_p_one_is_total() {
        let v = vec![from_frac(1, 2), from_int(3), from_frac(5, 7)];
        assert_eq!(exact_mms(&v, 1, &Bundle::all(3)).unwrap().value, rational::sum(&v));
    }

    #[test]
    fn lpt_examples() {
        assert_eq!(lpt_mms(&ints(&[1, 1, 1, 1]), 2, &Bundle::all(4)).unwrap().value, from_int(2));
        let r = lpt_mms(&ints(&[1, 1, 0]), 2, &Bundle::all(3)).unwrap();
        assert_eq!(r.value, from_int(1));
        assert!(!r.exact);
    }

    #[test]
    fn lpt_tie_breaking_is_by_index() {
        let r = lpt_mms(&ints(&[2, 2, 1, 1]), 2, &Bundle::all(4)).unwrap();
        assert_eq!(r.witness, vec![Bundle::from_items([0, 2]), Bundle::from_items([1, 3])]);
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&[from_frac(4, 3)], &from_int(1)).unwrap();
        assert_eq!(n.capped, vec![from_int(1)]);
        let n = normalize(&ints(&[2, 2]), &from_frac(3, 2)).unwrap();
        assert_eq!(n.capped, vec![from_int(1), from_int(1)]);
        assert_eq!(n.scale, from_frac(1, 2));
        assert!(matches!(normalize(&ints(&[1]), &from_int(0)), Err(Error::NonpositiveThreshold)));
    }

    #[test]
    fn capped_weights_match_rational_normalization() {
        let values = ints(&[5, 1, 9, 0, 3]);
        let w = IntegerWeights::from_rationals(&values).unwrap();
        let capped = CappedWeights::new(&w.weights, 4);
        assert_eq!(capped.to_rationals(), normalize(&values, &from_int(4)).unwrap().capped);
    }

    #[test]
    fn sufficiency_witness_examples() {
        for p in 1..5 {
            let agent = NormalizedAgent { scale: from_int(1), capped: vec![from_int(1); 2 * p] };
            let bundles = sufficiency_witness(&agent, p, &Bundle::all(2 * p)).unwrap();
            assert_eq!(bundles.len(), p);
            assert!(bundles.iter().all(|b| agent.value(b) >= from_int(1)));
        }
        let p = 3;
        let agent = NormalizedAgent { scale: from_int(1), capped: vec![from_frac(1, 2); 4 * p] };
        let bundles = sufficiency_witness(&agent, p, &Bundle::all(4 * p)).unwrap();
        assert!(bundles.iter().all(|b| agent.value(b) >= from_int(1)));

        let mut short = vec![from_int(1); 2 * p];
        short[0] = from_frac(99, 100);
        let agent = NormalizedAgent { scale: from_int(1), capped: short };
        assert!(matches!(sufficiency_witness(&agent, p, &Bundle::all(2 * p)), Err(Error::NotApplicable { .. })));

        let agent = NormalizedAgent { scale: from_int(1), capped: vec![from_int(2)] };
        assert!(matches!(sufficiency_witness(&agent, 1, &Bundle::all(1)), Err(Error::CapViolation { item: 1 })));
    }

    #[test]
    fn subset_fraction_footnote_agent() {
        assert_eq!(subset_success_fraction(&ints(&[1, 1, 0]), 2).unwrap(), from_frac(3, 4));
        let f = subset_success_fraction(&ints(&[0, 2, 0, 1]), 1).unwrap();
        // only subsets containing both positive items reach the full total
        assert_eq!(f, from_frac(1, 4));
    }
}
