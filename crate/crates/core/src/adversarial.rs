//! Lower-bound instance generators.
//!
//! The generic construction gives every group `i` a threshold `t_i` and makes
//! sure that group can only be satisfied with more than `t_i` items. Groups
//! come in two flavours:
//!
//! - **identical**: every agent values every item at 1, and
//!   `t_i <= floor(m/p) - 1`, so the group needs `floor(m/p)` items;
//! - **covering**: agent `(i, j)` values the items of block `S_{i,j}` of an
//!   `(m, m-(p-1), t_i)` covering design at `1/(m-(p-1))` and everything else
//!   at 1. Her MMS^p is exactly 1 (her block as one bundle, the other `p-1`
//!   items alone), and any `t_i` items sit inside some member's block, worth
//!   `t_i/(m-(p-1)) < 1` to her.
//!
//! When `t_1 + ... + t_g + g > m` the groups jointly need more items than
//! exist, so no MMS^p allocation exists.

use std::fmt;

use serde::Serialize;

use crate::covering::{greedy_design, min_design_exhaustive, trivial_design, verify, CoveringDesign};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::{exists_mms_allocation, OracleBudget};
use crate::rational::{self, Rational};

/// Largest agent count the generators will materialize by default.
pub const DEFAULT_MAX_AGENTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GroupMode {
    Identical,
    Covering,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericLbParams {
    pub m: usize,
    pub p: usize,
    pub t: Vec<usize>,
    pub sizes: Vec<usize>,
    pub modes: Vec<GroupMode>,
}

impl GenericLbParams {
    pub fn g(&self) -> usize {
        self.sizes.len()
    }

    /// Block size of the covering groups' designs.
    pub fn block_size(&self) -> usize {
        self.m + 1 - self.p
    }

    /// Checks the counting condition and every group's side condition that
    /// does not involve a design.
    pub fn check(&self) -> Result<()> {
        let g = self.g();
        if g == 0 || self.t.len() != g || self.modes.len() != g {
            return Err(Error::ConditionViolation("t, sizes and modes must have one entry per group".into()));
        }
        if self.m == 0 || self.p == 0 || self.p > self.m {
            return Err(Error::ConditionViolation(format!("need 1 <= p <= m, got p = {}, m = {}", self.p, self.m)));
        }
        if self.sizes.contains(&0) {
            return Err(Error::ConditionViolation("group sizes must be positive".into()));
        }
        let demand: usize = self.t.iter().sum::<usize>() + g;
        if demand <= self.m {
            return Err(Error::ConditionViolation(format!("t_1 + ... + t_g + g = {demand} does not exceed m = {}", self.m)));
        }
        for (i, (&t, mode)) in self.t.iter().zip(&self.modes).enumerate() {
            match mode {
                GroupMode::Identical if t + 1 > self.m / self.p => {
                    return Err(Error::ConditionViolation(format!(
                        "group {}: t = {t} exceeds floor(m/p) - 1 = {}",
                        i + 1,
                        (self.m / self.p) as i64 - 1
                    )))
                }
                GroupMode::Covering if t == 0 || self.block_size() <= t => {
                    return Err(Error::ConditionViolation(format!(
                        "group {}: need 1 <= t = {t} < m - (p - 1) = {}",
                        i + 1,
                        self.block_size()
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub params: GenericLbParams,
    /// `true` only once the oracle has found no MMS^p allocation.
    pub checked: bool,
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    claim: String,
    checked: bool,
    status: &'a str,
    params: &'a GenericLbParams,
}

impl Certificate {
    pub fn claim(&self) -> String {
        format!("no MMS^{} allocation exists", self.params.p)
    }

    /// Runs the oracle; marks the certificate checked when it finds nothing.
    /// Returns `Ok(false)` if an allocation exists, which would refute the claim.
    pub fn check(&mut self, inst: &Instance, budget: &OracleBudget) -> Result<bool> {
        let found = exists_mms_allocation(inst, self.params.p, budget)?;
        self.checked = found.allocation.is_none();
        Ok(self.checked)
    }

    pub fn to_document(&self) -> String {
        let status = if self.checked { "verified by exhaustive oracle" } else { "claimed by the generic construction, unverified at this size" };
        let doc = CertificateDoc { claim: self.claim(), checked: self.checked, status, params: &self.params };
        serde_json::to_string_pretty(&doc).expect("certificate serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub instance: Instance,
    pub certificate: Certificate,
}

/// Builds the generic lower-bound instance. `designs[i]` must be present for
/// every covering group (and is ignored for identical ones).
pub fn generic_instance(params: &GenericLbParams, designs: &[Option<CoveringDesign>]) -> Result<Generated> {
    generic_instance_capped(params, designs, DEFAULT_MAX_AGENTS)
}

pub fn generic_instance_capped(params: &GenericLbParams, designs: &[Option<CoveringDesign>], max_agents: usize) -> Result<Generated> {
    params.check()?;
    let agents: usize = params.sizes.iter().sum();
    if agents > max_agents {
        return Err(Error::TooLarge(format!("{agents} agents exceed the materialization cap {max_agents}")));
    }
    if designs.len() != params.g() {
        return Err(Error::DesignInvalid(format!("expected {} design slots, got {}", params.g(), designs.len())));
    }
    let m = params.m;
    let s = params.block_size();
    let low = Rational::new(1.into(), (s as i64).into());
    let one = rational::from_int(1);

    let mut groups = Vec::with_capacity(params.g());
    for (i, slot) in designs.iter().enumerate() {
        let n = params.sizes[i];
        let group = match params.modes[i] {
            GroupMode::Identical => vec![vec![one.clone(); m]; n],
            GroupMode::Covering => {
                let design = slot
                    .as_ref()
                    .ok_or_else(|| Error::DesignInvalid(format!("group {} is covering but has no design", i + 1)))?;
                if design.m != m || design.s != s || design.t != params.t[i] {
                    return Err(Error::DesignInvalid(format!(
                        "group {} needs an ({m},{s},{}) design, got ({},{},{})",
                        i + 1,
                        params.t[i],
                        design.m,
                        design.s,
                        design.t
                    )));
                }
                if design.is_empty() || !verify(design)? {
                    return Err(Error::DesignInvalid(format!("group {}'s design does not cover every {}-subset", i + 1, design.t)));
                }
                if design.len() > n {
                    return Err(Error::DesignTooBig { group: i + 1, size: design.len(), limit: n });
                }
                // fewer blocks than agents: blocks are reused cyclically
                (0..n)
                    .map(|j| {
                        let block = &design.blocks()[j % design.len()];
                        let mut u = vec![one.clone(); m];
                        for &item in block {
                            u[item] = low.clone();
                        }
                        u
                    })
                    .collect()
            }
        };
        groups.push(group);
    }
    let instance = Instance::new(m, groups)?;
    Ok(Generated { instance, certificate: Certificate { params: params.clone(), checked: false } })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignMethod {
    Trivial,
    Greedy,
    Exhaustive,
}

/// Constructs a design for every covering group with the given method.
pub fn build_designs(params: &GenericLbParams, method: DesignMethod) -> Result<Vec<Option<CoveringDesign>>> {
    let s = params.block_size();
    params
        .modes
        .iter()
        .zip(&params.t)
        .map(|(mode, &t)| match mode {
            GroupMode::Identical => Ok(None),
            GroupMode::Covering => {
                let design = match method {
                    DesignMethod::Trivial => trivial_design(params.m, s)?.with_t(t)?,
                    DesignMethod::Greedy => greedy_design(params.m, s, t)?,
                    DesignMethod::Exhaustive => min_design_exhaustive(params.m, s, t)?,
                };
                Ok(Some(design))
            }
        })
        .collect()
}

/// Builds designs with `method` and materializes the instance.
pub fn materialize(params: &GenericLbParams, method: DesignMethod) -> Result<Generated> {
    let designs = build_designs(params, method)?;
    generic_instance(params, &designs)
}

fn floor_log2_succ(n: u64) -> u32 {
    (n as u128 + 1).ilog2()
}

/// Balanced family: `t_i = 2 floor(log2(n_i + 1) / 6)`, `p = sum_i t_i / 2`,
/// `m = 2p`, all groups covering.
pub fn lb1_params(sizes: &[u64]) -> Result<GenericLbParams> {
    if sizes.len() < 2 {
        return Err(Error::HypothesisViolation("need at least two groups".into()));
    }
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::HypothesisViolation("sizes must be non-increasing".into()));
    }
    if let Some(&small) = sizes.iter().find(|&&n| n < 63) {
        return Err(Error::HypothesisViolation(format!("every group needs at least 63 agents, got {small}")));
    }
    let k: Vec<usize> = sizes.iter().map(|&n| (floor_log2_succ(n) / 6) as usize).collect();
    let tail: usize = k[1..].iter().sum();
    if k[0] > tail {
        return Err(Error::HypothesisViolation(format!("floor(log2(n_1+1)/6) = {} exceeds the others' sum {tail}", k[0])));
    }
    let p: usize = k.iter().sum();
    Ok(GenericLbParams {
        m: 2 * p,
        p,
        t: k.iter().map(|&x| 2 * x).collect(),
        sizes: sizes.iter().map(|&n| n as usize).collect(),
        modes: vec![GroupMode::Covering; sizes.len()],
    })
}

/// Parameter calculation for regimes too large to materialize.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolicBound {
    /// `p` is small enough that the statement is trivially true.
    Trivial { p: u64 },
    Parameters { p: u64, m: f64, t: Vec<f64>, hypothesis_holds: bool },
}

impl fmt::Display for SymbolicBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicBound::Trivial { p } => write!(f, "TRIVIAL_BOUND p={p}"),
            SymbolicBound::Parameters { p, m, t, hypothesis_holds } => {
                let t: Vec<String> = t.iter().map(|x| format!("{x}")).collect();
                write!(f, "p={p} m={m} t=[{}] hypothesis={}", t.join(","), if *hypothesis_holds { "holds" } else { "violated" })
            }
        }
    }
}

/// Unbalanced family with large small groups, from `log2(n_i + 1)` values:
/// `p = floor(L_1 / (10 log2 beta_1))`, `m = floor(2^(L_1/p) / e) * p`,
/// `t_1 = m - p`, `t_i = ceil(beta_i p)`.
pub fn lb2_symbolic(log_sizes: &[f64]) -> Result<SymbolicBound> {
    if log_sizes.len() < 2 || log_sizes.iter().any(|&l| l.is_nan() || l < 1.0) {
        return Err(Error::HypothesisViolation("need at least two groups with log2(n_i + 1) >= 1".into()));
    }
    let rest: f64 = log_sizes[1..].iter().sum();
    let betas: Vec<f64> = log_sizes.iter().map(|l| l / rest).collect();
    let l1 = log_sizes[0];
    if betas[0] <= 1.0 {
        return Err(Error::HypothesisViolation(format!("beta_1 = {} must exceed 1", betas[0])));
    }
    let p = (l1 / (10.0 * betas[0].log2())).floor() as u64;
    if p == 0 {
        return Ok(SymbolicBound::Trivial { p });
    }
    let pf = p as f64;
    let m = ((l1 / pf).exp2() / std::f64::consts::E).floor() * pf;
    let mut t = vec![m - pf];
    t.extend(betas[1..].iter().map(|b| (b * pf).ceil()));
    let min_log = (4.0 * l1.powi(4) + 1.0).log2();
    let hypothesis_holds = betas[0] >= 1000.0
        && log_sizes.windows(2).all(|w| w[0] >= w[1])
        && log_sizes.iter().all(|&l| l >= min_log);
    Ok(SymbolicBound::Parameters { p, m, t, hypothesis_holds })
}

pub fn lb2_params(sizes: &[u64]) -> Result<GenericLbParams> {
    let logs: Vec<f64> = sizes.iter().map(|&n| ((n as f64) + 1.0).log2()).collect();
    let violation = || Error::HypothesisViolation("needs beta_1 >= 1000 and n_i >= 4 log2(n_1+1)^4 for every group".into());
    match lb2_symbolic(&logs).map_err(|_| violation())? {
        SymbolicBound::Trivial { .. } | SymbolicBound::Parameters { hypothesis_holds: false, .. } => Err(violation()),
        SymbolicBound::Parameters { p, m, t, hypothesis_holds: true } => {
            let to_usize = |x: f64| if x.is_finite() && x < usize::MAX as f64 { Ok(x as usize) } else { Err(Error::TooLarge(format!("{x}"))) };
            Ok(GenericLbParams {
                m: to_usize(m)?,
                p: p as usize,
                t: t.into_iter().map(to_usize).collect::<Result<_>>()?,
                sizes: sizes.iter().map(|&n| n as usize).collect(),
                modes: vec![GroupMode::Covering; sizes.len()],
            })
        }
    }
}

/// One huge group plus `g - 1` arbitrary ones, from `L = log2(n_1 + 1)`:
/// `p = floor(L / (10 log2(L / (g-1))))`, `m = ceil(p/(g-1) + 1) * p`,
/// `t_1 = m - p`, `t_i = ceil(p/(g-1))`.
pub fn lb3_symbolic(log_n1: f64, g: usize) -> Result<SymbolicBound> {
    if g < 2 {
        return Err(Error::HypothesisViolation("need at least two groups".into()));
    }
    let rest = (g - 1) as f64;
    if log_n1.is_nan() || log_n1 / rest <= 1.0 {
        return Err(Error::HypothesisViolation("log2(n_1 + 1) must exceed g - 1".into()));
    }
    let p = (log_n1 / (10.0 * (log_n1 / rest).log2())).floor() as u64;
    if p <= g as u64 {
        return Ok(SymbolicBound::Trivial { p });
    }
    let (m, t) = lb3_integers(p, g);
    let mut tf = vec![(m - p) as f64];
    tf.extend(std::iter::repeat_n(t as f64, g - 1));
    Ok(SymbolicBound::Parameters { p, m: m as f64, t: tf, hypothesis_holds: log_n1 >= 1000.0 * rest })
}

/// `(m, t_i)` for the identical groups: `m = (ceil(p/(g-1)) + 1) p`.
fn lb3_integers(p: u64, g: usize) -> (u64, u64) {
    let share = p.div_ceil(g as u64 - 1);
    ((share + 1) * p, share)
}

pub fn lb3_params(n1: u64, g: usize) -> Result<GenericLbParams> {
    let log_n1 = ((n1 as f64) + 1.0).log2();
    if g < 2 || log_n1 < 1000.0 * (g - 1) as f64 {
        return Err(Error::HypothesisViolation(format!("needs g >= 2 and log2(n_1 + 1) >= 1000 (g - 1), got {log_n1:.2}")));
    }
    match lb3_symbolic(log_n1, g)? {
        SymbolicBound::Trivial { p } => Err(Error::TrivialRegime(format!("p = {p} <= g"))),
        SymbolicBound::Parameters { hypothesis_holds: false, .. } => unreachable!("hypothesis checked above"),
        SymbolicBound::Parameters { p, .. } => {
            let (m, t) = lb3_integers(p, g);
            let mut ts = vec![(m - p) as usize];
            ts.extend(std::iter::repeat_n(t as usize, g - 1));
            let mut modes = vec![GroupMode::Covering];
            modes.extend(std::iter::repeat_n(GroupMode::Identical, g - 1));
            let mut sizes = vec![n1 as usize];
            sizes.extend(std::iter::repeat_n(1, g - 1));
            Ok(GenericLbParams { m: m as usize, p: p as usize, t: ts, sizes, modes })
        }
    }
}

/// `g` singleton groups and `g - 1` identical items: no MMS^(g-1) allocation.
pub fn identical_items_instance(g: usize) -> Result<Generated> {
    if g < 2 {
        return Err(Error::Config("need at least two groups".into()));
    }
    let params = GenericLbParams { m: g - 1, p: g - 1, t: vec![0; g], sizes: vec![1; g], modes: vec![GroupMode::Identical; g] };
    generic_instance(&params, &vec![None; g])
}

/// Two groups of three agents over three items; agent `j` of each group
/// values a different pair of items at 1 and the third at 0. Every agent's
/// MMS^2 is 1, yet one group always ends up with at most one item.
pub fn footnote_instance() -> Instance {
    let agents = vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
    Instance::from_integers(&[agents.clone(), agents]).expect("fixture is valid")
}

/// Two equal groups of `n'` agents: `p = 1 + floor(log2(n') / 2)`,
/// `t = p - 1`, `m = 2t + 1`.
pub fn equal_two_group_params(n: u64) -> Result<GenericLbParams> {
    if n < 4 {
        return Err(Error::TrivialRegime(format!("n' = {n} < 4")));
    }
    let p = 1 + (n.ilog2() / 2) as usize;
    let t = p - 1;
    Ok(GenericLbParams { m: 2 * t + 1, p, t: vec![t, t], sizes: vec![n as usize; 2], modes: vec![GroupMode::Covering; 2] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::reference_design_5_3_2;
    use crate::instance::{AgentId, Bundle};
    use crate::mms::exact_mms;

    fn table_params() -> GenericLbParams {
        GenericLbParams { m: 5, p: 3, t: vec![2, 2], sizes: vec![4, 4], modes: vec![GroupMode::Covering; 2] }
    }

    #[test]
    fn table_instance_shape() {
        let d = reference_design_5_3_2();
        let gen = generic_instance(&table_params(), &[Some(d.clone()), Some(d)]).unwrap();
        assert_eq!(gen.instance.group_sizes(), vec![4, 4]);
        let u = gen.instance.utilities(AgentId::new(0, 0));
        assert_eq!(u[0], rational::from_frac(1, 3));
        assert_eq!(u[3], rational::from_int(1));
        assert!(!gen.certificate.checked);
    }

    #[test]
    fn covering_agents_have_mms_one() {
        let d = reference_design_5_3_2();
        let gen = generic_instance(&table_params(), &[Some(d.clone()), Some(d)]).unwrap();
        for id in gen.instance.agents() {
            let r = exact_mms(gen.instance.utilities(id), 3, &Bundle::all(5)).unwrap();
            assert_eq!(r.value, rational::from_int(1), "agent {id}");
        }
    }

    #[test]
    fn counting_condition_is_enforced() {
        let mut p = table_params();
        p.t = vec![1, 1];
        assert!(matches!(p.check(), Err(Error::ConditionViolation(_))));
    }

    #[test]
    fn design_problems_are_reported() {
        let d = reference_design_5_3_2();
        let mut small = table_params();
        small.sizes = vec![3, 4];
        let err = generic_instance(&small, &[Some(d.clone()), Some(d.clone())]).unwrap_err();
        assert!(matches!(err, Error::DesignTooBig { group: 1, size: 4, limit: 3 }));
        let broken = CoveringDesign::new(5, 3, 2, d.blocks()[1..].to_vec()).unwrap();
        let err = generic_instance(&table_params(), &[Some(broken), Some(d)]).unwrap_err();
        assert!(matches!(err, Error::DesignInvalid(_)));
    }

    #[test]
    fn blocks_are_recycled() {
        let d = reference_design_5_3_2();
        let mut big = table_params();
        big.sizes = vec![6, 4];
        let gen = generic_instance(&big, &[Some(d.clone()), Some(d)]).unwrap();
        assert_eq!(gen.instance.utilities(AgentId::new(0, 4)), gen.instance.utilities(AgentId::new(0, 0)));
    }

    #[test]
    fn lb1_examples() {
        let p = lb1_params(&[63, 63]).unwrap();
        assert_eq!((p.p, p.m, p.t.clone()), (2, 4, vec![2, 2]));
        assert_eq!(crate::covering::greedy_design(4, 3, 2).unwrap().len(), 3);
        let p = lb1_params(&[63, 63, 63]).unwrap();
        assert_eq!((p.p, p.m), (3, 6));
        assert!(matches!(lb1_params(&[63, 62]), Err(Error::HypothesisViolation(_))));
        assert!(matches!(lb1_params(&[4095, 63]), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn lb2_symbolic_example() {
        match lb2_symbolic(&[10_000.0, 10.0]).unwrap() {
            SymbolicBound::Parameters { p, t, .. } => {
                assert_eq!(p, 100);
                assert_eq!(t[1], 100.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(lb2_params(&[u64::MAX, 1_000_000]), Err(Error::HypothesisViolation(_))));
        assert_eq!(lb2_symbolic(&[8.0, 1.0]).unwrap(), SymbolicBound::Trivial { p: 0 });
    }

    #[test]
    fn lb3_symbolic_example() {
        match lb3_symbolic(2000.0, 2).unwrap() {
            SymbolicBound::Parameters { p, m, t, hypothesis_holds } => {
                assert_eq!((p, m), (18, 342.0));
                assert_eq!(t, vec![324.0, 18.0]);
                assert!(hypothesis_holds);
                // identical groups sit exactly at floor(m/p) - 1
                assert_eq!(t[1] as u64, (m as u64 / p) - 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(lb3_params(u64::MAX, 2), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn identical_items_shape() {
        let gen = identical_items_instance(3).unwrap();
        assert_eq!(gen.instance.m(), 2);
        assert_eq!(gen.instance.group_sizes(), vec![1, 1, 1]);
        assert_eq!(gen.certificate.params.p, 2);
    }

    #[test]
    fn footnote_shape() {
        let inst = footnote_instance();
        assert_eq!(inst.group_sizes(), vec![3, 3]);
        for id in inst.agents() {
            assert_eq!(exact_mms(inst.utilities(id), 2, &Bundle::all(3)).unwrap().value, rational::from_int(1));
        }
    }

    #[test]
    fn equal_two_group_examples() {
        let p = equal_two_group_params(4).unwrap();
        assert_eq!((p.p, p.t[0], p.m), (2, 1, 3));
        let p = equal_two_group_params(16).unwrap();
        assert_eq!((p.p, p.t[0], p.m), (3, 2, 5));
        let d = crate::covering::greedy_design(5, 3, 2).unwrap();
        assert!((3..=4).contains(&d.len()) || d.len() <= 16);
        assert!(matches!(equal_two_group_params(3), Err(Error::TrivialRegime(_))));
    }
}
