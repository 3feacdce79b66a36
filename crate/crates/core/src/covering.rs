//! `(m, s, t)` covering designs: `s`-subsets of `[m]` such that every
//! `t`-subset lies inside at least one of them.
//!
//! Subsets are `u64` bitmasks internally (so `m <= 64`); blocks are exposed
//! as sorted 0-based index lists and serialized 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::json_error;

/// Enumeration budget shared by verification and greedy construction.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Largest `m` the exhaustive minimum search accepts.
pub const EXHAUSTIVE_MAX_M: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringDesign {
    pub m: usize,
    pub s: usize,
    pub t: usize,
    blocks: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct DesignDoc {
    m: usize,
    s: usize,
    t: usize,
    blocks: Vec<Vec<usize>>,
}

impl CoveringDesign {
    /// Checks the shape (parameters, block sizes, ranges); coverage is
    /// [`verify`]'s job.
    pub fn new(m: usize, s: usize, t: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        check_params(m, s, t)?;
        let mut sorted = Vec::with_capacity(blocks.len());
        for (k, block) in blocks.into_iter().enumerate() {
            let mut b = block;
            b.sort_unstable();
            b.dedup();
            if b.len() != s {
                return Err(Error::DesignInvalid(format!("block {} has {} distinct items, expected {s}", k + 1, b.len())));
            }
            if b.last().is_some_and(|&x| x >= m) {
                return Err(Error::DesignInvalid(format!("block {} has an item outside [{m}]", k + 1)));
            }
            sorted.push(b);
        }
        Ok(CoveringDesign { m, s, t, blocks: sorted })
    }

    /// Builds a design from 1-based blocks, as written in documents.
    pub fn from_one_based(m: usize, s: usize, t: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if blocks.iter().flatten().any(|&x| x == 0) {
            return Err(Error::DesignInvalid("items are 1-based".into()));
        }
        CoveringDesign::new(m, s, t, blocks.iter().map(|b| b.iter().map(|x| x - 1).collect()).collect())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Same blocks, read as a design for a different `t <= s`.
    pub fn with_t(&self, t: usize) -> Result<Self> {
        check_params(self.m, self.s, t)?;
        Ok(CoveringDesign { t, ..self.clone() })
    }

    /// Blocks sorted, each block sorted, 1-based.
    pub fn to_document(&self) -> String {
        let mut blocks: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect();
        blocks.sort();
        let doc = DesignDoc { m: self.m, s: self.s, t: self.t, blocks };
        serde_json::to_string(&doc).expect("design serializes")
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: DesignDoc = serde_json::from_str(text).map_err(json_error)?;
        CoveringDesign::from_one_based(doc.m, doc.s, doc.t, &doc.blocks)
    }

    fn masks(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| b.iter().fold(0u64, |acc, &x| acc | 1 << x)).collect()
    }
}

fn check_params(m: usize, s: usize, t: usize) -> Result<()> {
    if t == 0 || s < t || m < s {
        return Err(Error::Config(format!("need m >= s >= t >= 1, got ({m},{s},{t})")));
    }
    if m > 64 {
        return Err(Error::TooLarge(format!("m = {m} exceeds 64")));
    }
    Ok(())
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Upper bound on the greedy design size:
/// `C(m,t) / C(s,t) * (1 + ln C(s,t))`.
pub fn greedy_size_bound(m: usize, s: usize, t: usize) -> f64 {
    let cst = binomial(s, t) as f64;
    binomial(m, t) as f64 / cst * (1.0 + cst.ln())
}

fn check_budget(what: &str, count: u128, budget: u64) -> Result<()> {
    if count > budget as u128 {
        return Err(Error::TooLarge(format!("{what} needs {count} steps, budget {budget}")));
    }
    Ok(())
}

/// All `k`-subsets of `[n]` as masks, in lexicographic order of their sorted
/// element lists.
fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.iter().fold(0u64, |acc, &x| acc | 1 << x));
        let Some(pos) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Colex rank of a `t`-subset among all `t`-subsets of `[m]`.
struct Ranker {
    table: Vec<Vec<u128>>,
}

impl Ranker {
    fn new(m: usize, t: usize) -> Self {
        Ranker { table: (0..=m).map(|n| (0..=t).map(|k| binomial(n, k)).collect()).collect() }
    }

    fn rank(&self, mask: u64) -> usize {
        elements(mask).iter().enumerate().map(|(i, &c)| self.table[c][i + 1] as usize).sum()
    }
}

/// Ranks of the `t`-subsets inside `block`.
fn inner_ranks(block: u64, t: usize, ranker: &Ranker) -> Vec<usize> {
    let elems = elements(block);
    subsets(elems.len(), t)
        .into_iter()
        .map(|local| ranker.rank(elements(local).iter().fold(0u64, |acc, &i| acc | 1 << elems[i])))
        .collect()
}

pub fn verify(design: &CoveringDesign) -> Result<bool> {
    verify_with_budget(design, DEFAULT_BUDGET)
}

/// `true` iff every `t`-subset of `[m]` lies in some block.
pub fn verify_with_budget(design: &CoveringDesign, budget: u64) -> Result<bool> {
    check_budget("verification", binomial(design.m, design.t), budget)?;
    let masks = design.masks();
    Ok(subsets(design.m, design.t).into_iter().all(|t| masks.iter().any(|b| b & t == t)))
}

/// Every `s`-subset of `[m]`; covers every `t <= s`. Returned with `t = s`.
pub fn trivial_design(m: usize, s: usize) -> Result<CoveringDesign> {
    trivial_design_with_budget(m, s, DEFAULT_BUDGET)
}

pub fn trivial_design_with_budget(m: usize, s: usize, budget: u64) -> Result<CoveringDesign> {
    check_params(m, s, s.max(1))?;
    check_budget("trivial design", binomial(m, s), budget)?;
    let blocks = subsets(m, s).into_iter().map(elements).collect();
    CoveringDesign::new(m, s, s, blocks)
}

pub fn greedy_design(m: usize, s: usize, t: usize) -> Result<CoveringDesign> {
    greedy_design_with_budget(m, s, t, DEFAULT_BUDGET)
}

/// Greedy set cover: repeatedly take the block covering the most uncovered
/// `t`-subsets, ties to the lexicographically smallest block.
pub fn greedy_design_with_budget(m: usize, s: usize, t: usize, budget: u64) -> Result<CoveringDesign> {
    check_params(m, s, t)?;
    check_budget("greedy candidate scan", binomial(m, s) * binomial(s, t), budget)?;
    let ranker = Ranker::new(m, t);
    let candidates = subsets(m, s);
    let covers: Vec<Vec<usize>> = candidates.iter().map(|&b| inner_ranks(b, t, &ranker)).collect();
    let mut uncovered = vec![true; binomial(m, t) as usize];
    let mut remaining = uncovered.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best = (0usize, 0usize);
        for (k, ranks) in covers.iter().enumerate() {
            let gain = ranks.iter().filter(|&&r| uncovered[r]).count();
            if gain > best.0 {
                best = (gain, k);
            }
        }
        for &r in &covers[best.1] {
            uncovered[r] = false;
        }
        remaining -= best.0;
        chosen.push(elements(candidates[best.1]));
    }
    CoveringDesign::new(m, s, t, chosen)
}

/// A minimum-size design, by iterative deepening on the number of blocks.
pub fn min_design_exhaustive(m: usize, s: usize, t: usize) -> Result<CoveringDesign> {
    check_params(m, s, t)?;
    if m > EXHAUSTIVE_MAX_M {
        return Err(Error::TooLarge(format!("exhaustive search needs m <= {EXHAUSTIVE_MAX_M}, got {m}")));
    }
    let ranker = Ranker::new(m, t);
    let candidates = subsets(m, s);
    let covers: Vec<Vec<usize>> = candidates.iter().map(|&b| inner_ranks(b, t, &ranker)).collect();
    let n_targets = binomial(m, t) as usize;
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n_targets];
    for (k, ranks) in covers.iter().enumerate() {
        for &r in ranks {
            containing[r].push(k);
        }
    }
    let per_block = binomial(s, t) as usize;
    let mut search = MinCover { covers: &covers, containing: &containing, per_block, count: vec![0; n_targets], uncovered: n_targets, chosen: Vec::new() };
    let mut depth = n_targets.div_ceil(per_block).max(1);
    loop {
        if search.descend(depth) {
            let blocks = search.chosen.iter().map(|&k| elements(candidates[k])).collect();
            let mut design = CoveringDesign::new(m, s, t, blocks)?;
            design.blocks.sort();
            return Ok(design);
        }
        depth += 1;
    }
}

struct MinCover<'a> {
    covers: &'a [Vec<usize>],
    containing: &'a [Vec<usize>],
    per_block: usize,
    count: Vec<u32>,
    uncovered: usize,
    chosen: Vec<usize>,
}

impl MinCover<'_> {
    fn descend(&mut self, left: usize) -> bool {
        if self.uncovered == 0 {
            return true;
        }
        if self.uncovered > left * self.per_block {
            return false;
        }
        let target = self.count.iter().position(|&c| c == 0).expect("something is uncovered");
        for &k in &self.containing[target] {
            self.apply(k, true);
            self.chosen.push(k);
            if self.descend(left - 1) {
                return true;
            }
            self.chosen.pop();
            self.apply(k, false);
        }
        false
    }

    fn apply(&mut self, block: usize, add: bool) {
        for &r in &self.covers[block] {
            if add {
                if self.count[r] == 0 {
                    self.uncovered -= 1;
                }
                self.count[r] += 1;
            } else {
                self.count[r] -= 1;
                if self.count[r] == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }
}

/// The four-block `(5,3,2)` design {123, 345, 245, 145}.
pub fn reference_design_5_3_2() -> CoveringDesign {
    CoveringDesign::from_one_based(5, 3, 2, &[vec![1, 2, 3], vec![3, 4, 5], vec![2, 4, 5], vec![1, 4, 5]])
        .expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_verifies_and_breaks_without_first_block() {
        let d = reference_design_5_3_2();
        assert!(verify(&d).unwrap());
        let without = CoveringDesign::new(5, 3, 2, d.blocks()[1..].to_vec()).unwrap();
        assert!(!verify(&without).unwrap());
    }

    #[test]
    fn whole_set_block_covers_everything() {
        for t in 1..=4 {
            let d = CoveringDesign::new(4, 4, t, vec![vec![0, 1, 2, 3]]).unwrap();
            assert!(verify(&d).unwrap());
        }
    }

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_design(3, 2).unwrap().len(), 3);
        let d = trivial_design(5, 3).unwrap();
        assert_eq!(d.len(), 10);
        assert!(verify(&d.with_t(2).unwrap()).unwrap());
        assert!(verify(&d.with_t(3).unwrap()).unwrap());
        assert_eq!(trivial_design(6, 6).unwrap().len(), 1);
    }

    #[test]
    fn greedy_examples() {
        let d = greedy_design(5, 3, 2).unwrap();
        assert!(verify(&d).unwrap());
        assert!(d.len() <= 7);
        for m in 1..=8 {
            for s in 1..=m {
                assert_eq!(greedy_design(m, s, 1).unwrap().len(), m.div_ceil(s), "({m},{s},1)");
            }
        }
        assert_eq!(greedy_design(6, 6, 3).unwrap().len(), 1);
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(min_design_exhaustive(5, 3, 2).unwrap().len(), 4);
        assert_eq!(min_design_exhaustive(4, 3, 2).unwrap().len(), 3);
        assert_eq!(min_design_exhaustive(5, 5, 3).unwrap().len(), 1);
        assert!(matches!(min_design_exhaustive(8, 4, 2), Err(Error::TooLarge(_))));
    }

    #[test]
    fn malformed_blocks_are_rejected() {
        assert!(CoveringDesign::new(5, 3, 2, vec![vec![0, 1]]).is_err());
        assert!(CoveringDesign::new(5, 3, 2, vec![vec![0, 1, 5]]).is_err());
        assert!(CoveringDesign::new(3, 4, 2, vec![]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(verify_with_budget(&reference_design_5_3_2(), 5), Err(Error::TooLarge(_))));
        assert!(matches!(greedy_design_with_budget(10, 5, 3, 100), Err(Error::TooLarge(_))));
    }

    #[test]
    fn document_is_sorted_and_one_based() {
        let doc = reference_design_5_3_2().to_document();
        assert_eq!(doc, r#"{"m":5,"s":3,"t":2,"blocks":[[1,2,3],[1,4,5],[2,4,5],[3,4,5]]}"#);
        assert_eq!(CoveringDesign::from_document(&doc).unwrap().len(), 4);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(3, 5), 0);
    }
}
