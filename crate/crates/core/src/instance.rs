//! Instances, bundles, and allocations, plus the canonical instance document.
//!
//! Items are `0..m` internally. Documents and human-facing output use the
//! 1-based numbering `1..=m`, and agents are addressed as `(group, agent)`.

use std::fmt;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::rational::{self, Rational};

/// Agent `(group, agent)`, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId {
    pub group: usize,
    pub agent: usize,
}

impl AgentId {
    pub fn new(group: usize, agent: usize) -> Self {
        AgentId { group, agent }
    }

    /// Parses the 1-based `"g,a"` form used on the command line.
    pub fn parse_one_based(text: &str) -> Result<Self> {
        let parse_err = || Error::Parse { context: "agent".into(), message: format!("expected \"group,agent\", got {text:?}") };
        let (g, a) = text.split_once(',').ok_or_else(parse_err)?;
        let g: usize = g.trim().parse().map_err(|_| parse_err())?;
        let a: usize = a.trim().parse().map_err(|_| parse_err())?;
        if g == 0 || a == 0 {
            return Err(parse_err());
        }
        Ok(AgentId::new(g - 1, a - 1))
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.group + 1, self.agent + 1)
    }
}

impl Serialize for AgentId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.group + 1, self.agent + 1].serialize(s)
    }
}

/// A set of item indices, kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle(Vec<usize>);

impl Bundle {
    pub fn new() -> Self {
        Bundle(Vec::new())
    }

    pub fn all(m: usize) -> Self {
        Bundle((0..m).collect())
    }

    pub fn from_items(items: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Bundle(v)
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn insert(&mut self, item: usize) {
        if let Err(pos) = self.0.binary_search(&item) {
            self.0.insert(pos, item);
        }
    }

    pub fn extend_from(&mut self, other: &Bundle) {
        self.0.extend_from_slice(&other.0);
        self.0.sort_unstable();
        self.0.dedup();
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl FromIterator<usize> for Bundle {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Bundle::from_items(iter)
    }
}

/// Ordered partition of the items: bundle `i` goes to group `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub bundles: Vec<Bundle>,
}

#[derive(Serialize, Deserialize)]
struct AllocationDoc {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    pub fn new(bundles: Vec<Bundle>) -> Self {
        Allocation { bundles }
    }

    /// Builds an allocation from an owner per item.
    pub fn from_owners(owners: &[usize], g: usize) -> Self {
        let mut bundles = vec![Vec::new(); g];
        for (item, &owner) in owners.iter().enumerate() {
            bundles[owner].push(item);
        }
        Allocation { bundles: bundles.into_iter().map(Bundle).collect() }
    }

    /// Checks that the bundles partition `0..m` and that there is one per group.
    pub fn check(&self, m: usize, g: usize) -> Result<()> {
        if self.bundles.len() != g {
            return Err(Error::OutOfRange(format!("allocation has {} bundles for {} groups", self.bundles.len(), g)));
        }
        let mut seen = vec![false; m];
        for bundle in &self.bundles {
            for &item in bundle.items() {
                if item >= m {
                    return Err(Error::OutOfRange(format!("item {} exceeds m = {}", item + 1, m)));
                }
                if std::mem::replace(&mut seen[item], true) {
                    return Err(Error::OutOfRange(format!("item {} assigned twice", item + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::OutOfRange(format!("item {} is not assigned", missing + 1)));
        }
        Ok(())
    }

    pub fn to_document(&self) -> String {
        let doc = AllocationDoc { bundles: self.bundles.iter().map(Bundle::one_based).collect() };
        serde_json::to_string(&doc).expect("allocation serializes")
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let doc: AllocationDoc = serde_json::from_str(text).map_err(json_error)?;
        let mut bundles = Vec::with_capacity(doc.bundles.len());
        for (g, items) in doc.bundles.into_iter().enumerate() {
            if items.contains(&0) {
                return Err(Error::Parse { context: format!("bundles[{g}]"), message: "items are 1-based".into() });
            }
            bundles.push(Bundle::from_items(items.into_iter().map(|i| i - 1)));
        }
        Ok(Allocation { bundles })
    }
}

/// A validated fair-division instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    m: usize,
    groups: Vec<Vec<Vec<Rational>>>,
}

/// Utility entry as written in a document: a string, or a bare JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawUtility {
    Text(String),
    Int(i64),
}

/// Unvalidated instance description, straight from a document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawInstance {
    pub m: usize,
    pub groups: Vec<Vec<Vec<RawUtility>>>,
}

impl Instance {
    /// Validates an already-numeric description, collecting every violation.
    pub fn new(m: usize, groups: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let mut violations = Vec::new();
        if m == 0 {
            violations.push(Violation::NoItems);
        }
        if groups.is_empty() {
            violations.push(Violation::NoGroups);
        }
        for (gi, group) in groups.iter().enumerate() {
            if group.is_empty() {
                violations.push(Violation::EmptyGroup { group: gi });
            }
            for (ai, utilities) in group.iter().enumerate() {
                if utilities.len() != m {
                    violations.push(Violation::LengthMismatch { group: gi, agent: ai, expected: m, found: utilities.len() });
                }
                for (item, u) in utilities.iter().enumerate() {
                    if u.is_negative() {
                        violations.push(Violation::NegativeUtility { group: gi, agent: ai, item });
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(Instance { m, groups })
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn from_raw(raw: &RawInstance) -> Result<Self> {
        let mut groups = Vec::with_capacity(raw.groups.len());
        for (gi, group) in raw.groups.iter().enumerate() {
            let mut agents = Vec::with_capacity(group.len());
            for (ai, utilities) in group.iter().enumerate() {
                let mut parsed = Vec::with_capacity(utilities.len());
                for (item, u) in utilities.iter().enumerate() {
                    let value = match u {
                        RawUtility::Text(t) => rational::parse(t),
                        RawUtility::Int(i) => Ok(rational::from_int(*i)),
                    }
                    .map_err(|message| Error::Parse {
                        context: format!("group {} agent {} item {}", gi + 1, ai + 1, item + 1),
                        message,
                    })?;
                    parsed.push(value);
                }
                agents.push(parsed);
            }
            groups.push(agents);
        }
        Instance::new(raw.m, groups)
    }

    /// Convenience constructor from integer utilities.
    pub fn from_integers(groups: &[Vec<Vec<i64>>]) -> Result<Self> {
        let m = groups.first().and_then(|g| g.first()).map_or(0, Vec::len);
        let groups = groups
            .iter()
            .map(|g| g.iter().map(|a| a.iter().map(|&u| rational::from_int(u)).collect()).collect())
            .collect();
        Instance::new(m, groups)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn agent_count(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn groups(&self) -> &[Vec<Vec<Rational>>] {
        &self.groups
    }

    pub fn utilities(&self, id: AgentId) -> &[Rational] {
        &self.groups[id.group][id.agent]
    }

    pub fn try_utilities(&self, id: AgentId) -> Result<&[Rational]> {
        self.groups
            .get(id.group)
            .and_then(|g| g.get(id.agent))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::OutOfRange(format!("agent {id} does not exist")))
    }

    /// All agents in group-major order.
    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(g, agents)| (0..agents.len()).map(move |a| AgentId::new(g, a)))
    }

    pub fn value(&self, id: AgentId, bundle: &Bundle) -> Rational {
        bundle_value(self.utilities(id), bundle)
    }

    /// Instance with the same items restricted to the given groups, in order.
    pub fn select_groups(&self, keep: &[usize]) -> Instance {
        Instance { m: self.m, groups: keep.iter().map(|&g| self.groups[g].clone()).collect() }
    }

    /// Instance with only the listed items, renumbered in the given order.
    pub fn restrict_items(&self, items: &Bundle) -> Instance {
        let groups = self
            .groups
            .iter()
            .map(|g| g.iter().map(|a| items.items().iter().map(|&i| a[i].clone()).collect()).collect())
            .collect();
        Instance { m: items.len(), groups }
    }

    /// Removes one agent from a group that keeps at least one member.
    pub fn drop_agent(&self, group: usize, agent: usize) -> Result<Instance> {
        let members = self
            .groups
            .get(group)
            .ok_or_else(|| Error::OutOfRange(format!("group {} does not exist", group + 1)))?;
        if agent >= members.len() {
            return Err(Error::OutOfRange(format!("agent ({},{}) does not exist", group + 1, agent + 1)));
        }
        if members.len() == 1 {
            return Err(Error::LastAgent { group: group + 1 });
        }
        let mut out = self.clone();
        out.groups[group].remove(agent);
        Ok(out)
    }

    pub fn drop_group(&self, group: usize) -> Result<Instance> {
        if group >= self.groups.len() {
            return Err(Error::OutOfRange(format!("group {} does not exist", group + 1)));
        }
        if self.groups.len() == 1 {
            return Err(Error::LastGroup);
        }
        let mut out = self.clone();
        out.groups.remove(group);
        Ok(out)
    }

    /// Canonical document: fixed key order, one agent per line, `num/den` strings.
    pub fn to_document(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{");
        let _ = writeln!(out, "  \"m\": {},", self.m);
        let _ = writeln!(out, "  \"groups\": [");
        for (gi, group) in self.groups.iter().enumerate() {
            let _ = writeln!(out, "    [");
            for (ai, agent) in group.iter().enumerate() {
                let cells: Vec<String> = agent.iter().map(|u| format!("\"{}\"", rational::format(u))).collect();
                let sep = if ai + 1 < group.len() { "," } else { "" };
                let _ = writeln!(out, "      [{}]{}", cells.join(", "), sep);
            }
            let sep = if gi + 1 < self.groups.len() { "," } else { "" };
            let _ = writeln!(out, "    ]{sep}");
        }
        let _ = writeln!(out, "  ]");
        let _ = writeln!(out, "}}");
        out
    }

    pub fn from_document(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text).map_err(json_error)?;
        Instance::from_raw(&raw)
    }
}

pub(crate) fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { context: format!("line {} column {}", e.line(), e.column()), message: e.to_string() }
}

/// Additive utility of a bundle.
pub fn bundle_value(utilities: &[Rational], bundle: &Bundle) -> Rational {
    bundle.items().iter().fold(Rational::zero(), |acc, &i| acc + &utilities[i])
}

/// `beta_i = log2(n_i + 1) / log2(prod_{j >= 2} (n_j + 1))`.
///
/// Floating point: only used to pick parameters in the bound formulas.
pub fn beta_profile(sizes: &[u64]) -> Vec<f64> {
    let denom: f64 = sizes.iter().skip(1).map(|&n| ((n as f64) + 1.0).log2()).sum();
    sizes.iter().map(|&n| ((n as f64) + 1.0).log2() / denom).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_one() -> Instance {
        Instance::from_integers(&[vec![vec![1, 1, 0]], vec![vec![0, 1, 1]]]).unwrap()
    }

    #[test]
    fn validates_well_formed_input() {
        let inst = two_by_one();
        assert_eq!(inst.m(), 3);
        assert_eq!(inst.group_sizes(), vec![1, 1]);
    }

    #[test]
    fn reports_every_violation() {
        let groups = vec![
            vec![vec![rational::from_int(1), rational::from_int(-1), rational::from_int(0)]],
            vec![vec![rational::from_int(1), rational::from_int(1)]],
            vec![],
        ];
        match Instance::new(3, groups) {
            Err(Error::InvalidInstance(v)) => {
                assert!(v.contains(&Violation::NegativeUtility { group: 0, agent: 0, item: 1 }));
                assert!(v.contains(&Violation::LengthMismatch { group: 1, agent: 0, expected: 3, found: 2 }));
                assert!(v.contains(&Violation::EmptyGroup { group: 2 }));
            }
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn drop_agent_and_group() {
        let inst = Instance::from_integers(&[vec![vec![1, 0], vec![0, 1]], vec![vec![1, 1], vec![2, 2]]]).unwrap();
        let dropped = inst.drop_agent(0, 1).unwrap();
        assert_eq!(dropped.group_sizes(), vec![1, 2]);
        assert_eq!(dropped.utilities(AgentId::new(0, 0)), inst.utilities(AgentId::new(0, 0)));
        assert!(matches!(dropped.drop_agent(0, 0), Err(Error::LastAgent { .. })));

        let single = inst.drop_group(1).unwrap();
        assert_eq!(single.group_count(), 1);
        assert_eq!(single.m(), 2);
        assert!(matches!(single.drop_group(0), Err(Error::LastGroup)));
    }

    #[test]
    fn document_round_trip_is_byte_identical() {
        let inst = Instance::new(
            2,
            vec![vec![vec![rational::from_frac(1, 3), rational::from_int(2)]], vec![vec![rational::from_int(0), rational::from_frac(7, 2)]]],
        )
        .unwrap();
        let doc = inst.to_document();
        let back = Instance::from_document(&doc).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_document(), doc);
        assert!(doc.contains("\"2/1\""));
    }

    #[test]
    fn parse_errors_carry_context() {
        let err = Instance::from_document(r#"{"m": 1, "groups": [[["3/0"]]]}"#).unwrap_err();
        assert!(err.to_string().contains("group 1 agent 1 item 1"), "{err}");
        let err = Instance::from_document("{\"m\": 1,\n \"groups\": [[[\"1\"]]").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn integer_shorthand_and_bare_numbers() {
        let inst = Instance::from_document(r#"{"m": 2, "groups": [[["5", 3]]]}"#).unwrap();
        assert_eq!(inst.utilities(AgentId::new(0, 0)), &[rational::from_int(5), rational::from_int(3)]);
    }

    #[test]
    fn allocation_check() {
        let ok = Allocation::new(vec![Bundle::from_items([0, 2]), Bundle::from_items([1])]);
        ok.check(3, 2).unwrap();
        let missing = Allocation::new(vec![Bundle::from_items([0]), Bundle::from_items([1])]);
        assert!(missing.check(3, 2).is_err());
        let doubled = Allocation::new(vec![Bundle::from_items([0, 1]), Bundle::from_items([1, 2])]);
        assert!(doubled.check(3, 2).is_err());
        assert_eq!(Allocation::from_document(&ok.to_document()).unwrap(), ok);
    }

    #[test]
    fn beta_of_balanced_pair() {
        let b = beta_profile(&[3, 3]);
        assert!((b[0] - 1.0).abs() < 1e-12 && (b[1] - 1.0).abs() < 1e-12);
    }
}
