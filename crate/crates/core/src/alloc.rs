//! Randomized group allocation.
//!
//! [`allocate_ub1`] hands each group a random share of roughly half the
//! items and repairs the few agents left short with bag filling on the other
//! half. [`allocate_ub2`] targets one dominant group: nearly every item goes
//! to group 1, and the small remainder is split among the other groups by the
//! first algorithm.
//!
//! Both algorithms work on normalized agents: the threshold `t_a` (LPT by
//! default) is mapped to 3/4 and every item is capped at 1, so "capped
//! utility at least 1" certifies a raw utility of at least `4/3 * t_a`, which
//! is at least the agent's MMS^p.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bagfill::{bag_fill, ThresholdedAgent};
use crate::error::{Error, Result};
use crate::instance::{beta_profile, AgentId, Allocation, Bundle, Instance};
use crate::mms::{exact_mms_weights, lpt_weights, CappedWeights, DEFAULT_EXHAUSTIVE_LIMIT};
use crate::rational::{self, IntegerWeights, Rational};

/// Generator used for item routing; recorded in every report.
pub const RNG_NAME: &str = "ChaCha8Rng";

/// Per-agent thresholds, indexed like the instance: `[group][agent]`.
pub type Thresholds = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ub1Config {
    pub c1: u64,
    pub seed: u64,
    /// Use exact MMS values instead of LPT as thresholds (small instances only).
    pub exact_thresholds: bool,
}

impl Ub1Config {
    pub fn new(seed: u64) -> Self {
        Ub1Config { c1: 80, seed, exact_thresholds: false }
    }

    pub fn with_c1(mut self, c1: u64) -> Self {
        self.c1 = c1;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ub2Config {
    pub c2: u64,
    pub retries: u32,
    pub seed: u64,
    pub exact_thresholds: bool,
}

impl Ub2Config {
    pub fn new(seed: u64) -> Self {
        Ub2Config { c2: 320_000, retries: 10, seed, exact_thresholds: false }
    }

    pub fn with_c2(mut self, c2: u64) -> Self {
        self.c2 = c2;
        self
    }

    /// Constant for the inner run on groups `2..g`. Chosen so that the inner
    /// `p` equals `q * p / 4`, the share size the remaining-groups check
    /// guarantees.
    pub fn inner_c1(&self) -> u64 {
        self.c2 / 4000
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FailedCondition {
    SmallSet,
    RemainingValue,
    FirstGroup,
    RemainingGroups,
    InnerRetries,
}

impl FailedCondition {
    pub fn tag(self) -> &'static str {
        match self {
            FailedCondition::SmallSet => "SMALL_SET",
            FailedCondition::RemainingValue => "REMAINING_VALUE",
            FailedCondition::FirstGroup => "FIRST_GROUP",
            FailedCondition::RemainingGroups => "REMAINING_GROUPS",
            FailedCondition::InnerRetries => "INNER_RETRIES",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub algorithm: &'static str,
    pub seed: u64,
    pub rng: &'static str,
    pub p: u64,
    pub success: bool,
    pub allocation: Option<Allocation>,
    pub thresholds: Thresholds,
    pub failed_condition: Option<FailedCondition>,
    /// Agents whose random share fell short and went through bag filling.
    pub repair_set: Vec<AgentId>,
    /// Bags in the order bag filling closed them (original item indices).
    pub bags: Vec<(AgentId, Bundle)>,
    /// Inner runs attempted by the second algorithm.
    pub inner_attempts: u32,
}

#[derive(Serialize)]
struct RunReportDoc<'a> {
    algorithm: &'a str,
    seed: u64,
    rng: &'a str,
    p: u64,
    success: bool,
    failed_condition: Option<&'a str>,
    allocation: Option<Vec<Vec<usize>>>,
    thresholds: Vec<Vec<String>>,
    repair_set: &'a [AgentId],
    inner_attempts: u32,
}

impl RunReport {
    pub fn to_document(&self) -> String {
        let doc = RunReportDoc {
            algorithm: self.algorithm,
            seed: self.seed,
            rng: self.rng,
            p: self.p,
            success: self.success,
            failed_condition: self.failed_condition.map(FailedCondition::tag),
            allocation: self.allocation.as_ref().map(|a| a.bundles.iter().map(Bundle::one_based).collect()),
            thresholds: self.thresholds.iter().map(|g| g.iter().map(rational::format).collect()).collect(),
            repair_set: &self.repair_set,
            inner_attempts: self.inner_attempts,
        };
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }
}

/// `ceil(log2(n + 1))` for `n >= 1`.
pub fn ceil_log2_succ(n: u64) -> u64 {
    let x = n as u128 + 1;
    let floor = 127 - x.leading_zeros() as u64;
    if x.is_power_of_two() {
        floor
    } else {
        floor + 1
    }
}

fn check_sizes(sizes: &[u64], min_groups: usize) -> Result<()> {
    if sizes.len() < min_groups {
        return Err(Error::Config(format!("need at least {min_groups} groups, got {}", sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(Error::Config("group sizes must be positive".into()));
    }
    Ok(())
}

/// `c1 * sum_i ceil(log2(n_i + 1))`.
pub fn p_ub1(sizes: &[u64], c1: u64) -> Result<u64> {
    check_sizes(sizes, 2)?;
    Ok(c1 * sizes.iter().map(|&n| ceil_log2_succ(n)).sum::<u64>())
}

/// `c2 * (ceil(log2(n_1 + 1) / log2(beta_1)) + sum_{i >= 2} ceil(log2(n_i + 1)))`.
pub fn p_ub2(sizes: &[u64], c2: u64) -> Result<u64> {
    check_sizes(sizes, 2)?;
    let beta1 = beta_profile(sizes)[0];
    if beta1 <= 1.0 {
        return Err(Error::BetaTooSmall(beta1));
    }
    let head = (((sizes[0] as f64) + 1.0).log2() / beta1.log2()).ceil() as u64;
    let tail: u64 = sizes[1..].iter().map(|&n| ceil_log2_succ(n)).sum();
    Ok(c2 * (head + tail))
}

fn sizes_of(inst: &Instance) -> Vec<u64> {
    inst.group_sizes().into_iter().map(|n| n as u64).collect()
}

/// Integer view of one agent plus her threshold in the same units.
struct PreparedAgent {
    id: AgentId,
    weights: IntegerWeights,
    threshold: u128,
    /// `None` when the threshold is 0: any bundle satisfies her.
    capped: Option<CappedWeights>,
}

fn prepare(inst: &Instance, p: u64, exact: bool) -> Result<Vec<PreparedAgent>> {
    let all: Vec<usize> = (0..inst.m()).collect();
    let p = usize::try_from(p).map_err(|_| Error::TooLarge(format!("p = {p}")))?;
    inst.agents()
        .map(|id| {
            let weights = IntegerWeights::from_rationals(inst.utilities(id))?;
            let threshold = if exact {
                if inst.m() > DEFAULT_EXHAUSTIVE_LIMIT {
                    return Err(Error::TooLarge(format!("exact thresholds need m <= {DEFAULT_EXHAUSTIVE_LIMIT}")));
                }
                exact_mms_weights(&weights.weights, p, &all).0
            } else {
                lpt_weights(&weights.weights, p, &all).0
            };
            let capped = (threshold > 0).then(|| CappedWeights::new(&weights.weights, threshold));
            Ok(PreparedAgent { id, weights, threshold, capped })
        })
        .collect()
}

fn thresholds_of(inst: &Instance, prepared: &[PreparedAgent]) -> Thresholds {
    let mut out: Thresholds = inst.group_sizes().iter().map(|&n| Vec::with_capacity(n)).collect();
    for a in prepared {
        out[a.id.group].push(a.weights.to_rational(a.threshold));
    }
    out
}

/// Outcome of one randomized pass of the first algorithm.
struct Ub1Attempt {
    allocation: Option<Allocation>,
    failed: Option<FailedCondition>,
    repair_set: Vec<AgentId>,
    bags: Vec<(AgentId, Bundle)>,
}

fn attempt_ub1(inst: &Instance, prepared: &[PreparedAgent], rng: &mut ChaCha8Rng) -> Result<Ub1Attempt> {
    let g = inst.group_count();
    // q_i = ceil(log2(n_i+1)) / (2 * sum), q = 1/2; one draw per item, in index order
    let logs: Vec<u64> = inst.group_sizes().iter().map(|&n| ceil_log2_succ(n as u64)).collect();
    let total: u64 = logs.iter().sum();
    let mut cumulative = Vec::with_capacity(g);
    let mut acc = 0;
    for &l in &logs {
        acc += l;
        cumulative.push(acc);
    }
    let mut shares: Vec<Vec<usize>> = vec![Vec::new(); g];
    let mut rest: Vec<usize> = Vec::new();
    for item in 0..inst.m() {
        let draw = rng.gen_range(0..2 * total);
        match cumulative.iter().position(|&c| draw < c) {
            Some(group) => shares[group].push(item),
            None => rest.push(item),
        }
    }

    let repair: Vec<&PreparedAgent> = prepared
        .iter()
        .filter(|a| a.capped.as_ref().is_some_and(|c| c.sum(&shares[a.id.group]) < c.unit))
        .collect();
    let repair_set: Vec<AgentId> = repair.iter().map(|a| a.id).collect();
    let fail = |failed| Ub1Attempt { allocation: None, failed: Some(failed), repair_set: repair_set.clone(), bags: Vec::new() };

    if repair.len() > 2 * g {
        return Ok(fail(FailedCondition::SmallSet));
    }
    let needed = 8 * g as u128;
    for a in &repair {
        let c = a.capped.as_ref().expect("repair agents have a threshold");
        if c.sum(&rest) < needed * c.unit {
            return Ok(fail(FailedCondition::RemainingValue));
        }
    }

    let bag_agents: Vec<ThresholdedAgent> = repair
        .iter()
        .map(|a| ThresholdedAgent { id: a.id, capped: a.capped.as_ref().expect("threshold").to_rationals() })
        .collect();
    let rest_bundle = Bundle::from_items(rest.iter().copied());
    let filled = bag_fill(&bag_agents, &rest_bundle)?;

    let mut bundles: Vec<Bundle> = shares.into_iter().map(Bundle::from_items).collect();
    for (id, bag) in &filled.bags {
        bundles[id.group].extend_from(bag);
    }
    // leftovers go to the lowest-indexed group
    bundles[0].extend_from(&filled.leftover);
    Ok(Ub1Attempt { allocation: Some(Allocation::new(bundles)), failed: None, repair_set, bags: filled.bags })
}

/// Randomized allocation for arbitrary group sizes at `p = p_ub1(sizes)`.
pub fn allocate_ub1(inst: &Instance, config: &Ub1Config) -> Result<RunReport> {
    let p = p_ub1(&sizes_of(inst), config.c1)?;
    let prepared = prepare(inst, p, config.exact_thresholds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let attempt = attempt_ub1(inst, &prepared, &mut rng)?;
    Ok(RunReport {
        algorithm: "ub1",
        seed: config.seed,
        rng: RNG_NAME,
        p,
        success: attempt.allocation.is_some(),
        allocation: attempt.allocation,
        thresholds: thresholds_of(inst, &prepared),
        failed_condition: attempt.failed,
        repair_set: attempt.repair_set,
        bags: attempt.bags,
        inner_attempts: 0,
    })
}

/// Routing probability of the small share: `q = (c2 / 1000) * tail / p`,
/// returned as `(numerator, denominator)`.
fn ub2_split(sizes: &[u64], c2: u64, p: u64) -> (u128, u128) {
    let tail: u64 = sizes[1..].iter().map(|&n| ceil_log2_succ(n)).sum();
    (c2 as u128 * tail as u128, 1000 * p as u128)
}

/// Randomized allocation for one dominant group at `p = p_ub2(sizes)`.
pub fn allocate_ub2(inst: &Instance, config: &Ub2Config) -> Result<RunReport> {
    let sizes = sizes_of(inst);
    let p = p_ub2(&sizes, config.c2)?;
    let inner_c1 = config.inner_c1();
    if inner_c1 == 0 {
        return Err(Error::Config(format!("c2 = {} is below 4000; the inner constant would be 0", config.c2)));
    }
    let (q_num, q_den) = ub2_split(&sizes, config.c2, p);
    if q_num == 0 || q_num >= q_den {
        return Err(Error::Config(format!("split probability {q_num}/{q_den} outside (0,1)")));
    }

    let prepared = prepare(inst, p, config.exact_thresholds)?;
    let thresholds = thresholds_of(inst, &prepared);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let report = |success, allocation, failed, inner_attempts, bags| RunReport {
        algorithm: "ub2",
        seed: config.seed,
        rng: RNG_NAME,
        p,
        success,
        allocation,
        thresholds: thresholds.clone(),
        failed_condition: failed,
        repair_set: Vec::new(),
        bags,
        inner_attempts,
    };

    let mut first: Vec<usize> = Vec::new();
    let mut rest: Vec<usize> = Vec::new();
    for item in 0..inst.m() {
        if rng.gen_range(0..q_den) < q_num {
            rest.push(item);
        } else {
            first.push(item);
        }
    }

    for a in prepared.iter().filter(|a| a.id.group == 0) {
        if let Some(c) = &a.capped {
            if c.sum(&first) < c.unit {
                return Ok(report(false, None, Some(FailedCondition::FirstGroup), 0, Vec::new()));
            }
        }
    }
    // capped u_a(rest) >= q p / 2, i.e. 2000 * sum >= c2 * tail * unit
    let qp_num = BigInt::from(q_num) * BigInt::from(p);
    for a in prepared.iter().filter(|a| a.id.group > 0) {
        if let Some(c) = &a.capped {
            let lhs = BigInt::from(c.sum(&rest)) * BigInt::from(2 * q_den);
            let rhs = &qp_num * BigInt::from(c.unit);
            if lhs < rhs {
                return Ok(report(false, None, Some(FailedCondition::RemainingGroups), 0, Vec::new()));
            }
        }
    }

    let rest_bundle = Bundle::from_items(rest.iter().copied());
    let groups: Vec<usize> = (1..inst.group_count()).collect();
    let sub = inst.select_groups(&groups).restrict_items(&rest_bundle);
    let inner_p = inner_c1 * sub.group_sizes().iter().map(|&n| ceil_log2_succ(n as u64)).sum::<u64>();
    let inner_prepared = prepare(&sub, inner_p, config.exact_thresholds)?;

    for attempt in 1..=config.retries {
        let outcome = attempt_ub1(&sub, &inner_prepared, &mut rng)?;
        if let Some(inner) = outcome.allocation {
            let lift = |b: &Bundle| Bundle::from_items(b.items().iter().map(|&i| rest[i]));
            let mut bundles = vec![Bundle::from_items(first.iter().copied())];
            bundles.extend(inner.bundles.iter().map(lift));
            let bags = outcome
                .bags
                .iter()
                .map(|(id, b)| (AgentId::new(id.group + 1, id.agent), lift(b)))
                .collect();
            return Ok(report(true, Some(Allocation::new(bundles)), None, attempt, bags));
        }
    }
    Ok(report(false, None, Some(FailedCondition::InnerRetries), config.retries, Vec::new()))
}

/// LPT thresholds for every agent at the given `p`.
pub fn lpt_thresholds(inst: &Instance, p: u64) -> Result<Thresholds> {
    let prepared = prepare(inst, p, false)?;
    Ok(thresholds_of(inst, &prepared))
}

/// `true` for agent `a` iff `u_a(A_{group(a)}) >= 4/3 * t_a`.
pub fn verify_sufficient(inst: &Instance, allocation: &Allocation, thresholds: &Thresholds) -> Result<Vec<Vec<bool>>> {
    allocation.check(inst.m(), inst.group_count())?;
    if thresholds.len() != inst.group_count()
        || thresholds.iter().zip(inst.groups()).any(|(t, g)| t.len() != g.len())
    {
        return Err(Error::OutOfRange("threshold shape does not match the instance".into()));
    }
    let four_thirds = rational::from_frac(4, 3);
    Ok(inst
        .groups()
        .iter()
        .enumerate()
        .map(|(g, agents)| {
            agents
                .iter()
                .enumerate()
                .map(|(a, _)| {
                    let id = AgentId::new(g, a);
                    inst.value(id, &allocation.bundles[g]) >= &four_thirds * &thresholds[g][a]
                })
                .collect()
        })
        .collect())
}

/// `true` for agent `a` iff her bundle is worth at least her exact MMS^p.
pub fn verify_exact(inst: &Instance, allocation: &Allocation, p: usize) -> Result<Vec<Vec<bool>>> {
    allocation.check(inst.m(), inst.group_count())?;
    if inst.m() > DEFAULT_EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!("m = {} exceeds the exhaustive limit", inst.m())));
    }
    if p == 0 {
        return Err(Error::Config("p must be positive".into()));
    }
    let all: Vec<usize> = (0..inst.m()).collect();
    let mut out: Vec<Vec<bool>> = Vec::with_capacity(inst.group_count());
    for (g, agents) in inst.groups().iter().enumerate() {
        let mut row = Vec::with_capacity(agents.len());
        for utilities in agents {
            let weights = IntegerWeights::from_rationals(utilities)?;
            let (mms, _) = exact_mms_weights(&weights.weights, p, &all);
            let have: u128 = allocation.bundles[g].items().iter().map(|&i| weights.weights[i]).sum();
            row.push(have >= mms);
        }
        out.push(row);
    }
    Ok(out)
}

pub fn all_true(rows: &[Vec<bool>]) -> bool {
    rows.iter().flatten().all(|&b| b)
}
