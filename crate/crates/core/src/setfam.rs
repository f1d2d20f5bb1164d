//! Crossing families, lattice families in compact form, and crossing
//! submodular value oracles.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{check_cap, Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::ENUMERATION_CAP;

/// Largest vertex count for the quadratic submodularity check.
pub const SUBMODULAR_CHECK_CAP: usize = 18;

/// A family closed under union and intersection, stored as its minimal member,
/// maximal member and the preorder `u ⪯ v` ("every member containing v contains u").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeFamily {
    pub lower: VertexSet,
    pub upper: VertexSet,
    /// `below[v]` is the set of all `u` with `u ⪯ v`.
    pub below: Vec<VertexSet>,
}

impl LatticeFamily {
    /// Compact description of the lattice family generated by `members`.
    /// Returns `None` for an empty list. The caller is responsible for the
    /// list actually being closed under union and intersection.
    pub fn from_members(n: usize, members: &[VertexSet]) -> Option<LatticeFamily> {
        let first = *members.first()?;
        let lower = members.iter().fold(first, |acc, m| acc.intersection(*m));
        let upper = members.iter().fold(first, |acc, m| acc.union(*m));
        let below = (0..n)
            .map(|v| {
                members
                    .iter()
                    .filter(|m| m.contains(v))
                    .fold(VertexSet::full(n), |acc, m| acc.intersection(*m))
            })
            .collect();
        Some(LatticeFamily {
            lower,
            upper,
            below,
        })
    }

    pub fn contains(&self, u: VertexSet) -> bool {
        self.lower.is_subset(u)
            && u.is_subset(self.upper)
            && u.iter().all(|v| self.below[v].is_subset(u))
    }

    /// Reflexivity and transitivity of the preorder, and `L`, `M` being ideals.
    pub fn is_consistent(&self, n: usize) -> bool {
        if self.below.len() != n || !self.lower.is_subset(self.upper) {
            return false;
        }
        let reflexive = (0..n).all(|v| self.below[v].contains(v));
        let transitive = (0..n).all(|v| self.below[v].iter().all(|u| self.below[u].is_subset(self.below[v])));
        let ideal = |s: VertexSet| s.iter().all(|v| self.below[v].is_subset(s));
        reflexive && transitive && ideal(self.lower) && ideal(self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyRepr {
    /// Sorted, duplicate-free list of proper non-empty sets.
    Explicit(Vec<VertexSet>),
    /// `C_uv = {C ∈ C : u ∈ C, v ∉ C}` for each ordered pair; absent keys are empty.
    WellProvided(BTreeMap<(usize, usize), LatticeFamily>),
}

/// Family of proper non-empty subsets of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingFamily {
    n: usize,
    repr: FamilyRepr,
}

impl CrossingFamily {
    /// Explicit family. Members must be proper non-empty subsets of `0..n`;
    /// crossing closure is not checked here (see [`check_crossing_family`]).
    pub fn explicit(n: usize, members: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let mut list: Vec<VertexSet> = members.into_iter().collect();
        for u in &list {
            if !u.within(n) {
                return Err(Error::input(format!("family member {u} is not a subset of 0..{n}")));
            }
            if !u.is_proper(n) {
                return Err(Error::input(format!("family member {u} is empty or the whole ground set")));
            }
        }
        list.sort();
        list.dedup();
        Ok(CrossingFamily {
            n,
            repr: FamilyRepr::Explicit(list),
        })
    }

    /// Explicit family that must pass the crossing-closure check.
    pub fn explicit_checked(n: usize, members: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let fam = Self::explicit(n, members)?;
        if let FamilyRepr::Explicit(list) = &fam.repr {
            if let Some((u, w)) = check_crossing_family(list, n)? {
                return Err(Error::input(format!(
                    "not a crossing family: {u} and {w} cross but their intersection or union is missing"
                )));
            }
        }
        Ok(fam)
    }

    pub fn well_provided(n: usize, lattices: BTreeMap<(usize, usize), LatticeFamily>) -> Result<Self> {
        for (&(u, v), lat) in &lattices {
            if u == v || u >= n || v >= n {
                return Err(Error::input(format!("invalid lattice key ({u},{v})")));
            }
            if !lat.is_consistent(n) || !lat.upper.within(n) {
                return Err(Error::input(format!("lattice family for ({u},{v}) is malformed")));
            }
            if !lat.lower.contains(u) || lat.upper.contains(v) {
                return Err(Error::input(format!(
                    "lattice family for ({u},{v}) must contain {u} and avoid {v} in every member"
                )));
            }
        }
        Ok(CrossingFamily {
            n,
            repr: FamilyRepr::WellProvided(lattices),
        })
    }

    pub fn empty(n: usize) -> Self {
        CrossingFamily {
            n,
            repr: FamilyRepr::Explicit(Vec::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &FamilyRepr {
        &self.repr
    }

    /// Membership test; `∅` and the ground set are rejected.
    pub fn contains(&self, u: VertexSet) -> Result<bool> {
        if !u.within(self.n) || !u.is_proper(self.n) {
            return Err(Error::input(format!("{u} is not a proper non-empty subset of 0..{}", self.n)));
        }
        Ok(self.contains_proper(u))
    }

    pub(crate) fn contains_proper(&self, u: VertexSet) -> bool {
        match &self.repr {
            FamilyRepr::Explicit(list) => list.binary_search(&u).is_ok(),
            FamilyRepr::WellProvided(map) => u.iter().any(|a| {
                u.complement(self.n).iter().any(|b| map.get(&(a, b)).is_some_and(|lat| lat.contains(u)))
            }),
        }
    }

    /// All members in ascending bitmask order.
    pub fn members(&self) -> Result<Vec<VertexSet>> {
        match &self.repr {
            FamilyRepr::Explicit(list) => Ok(list.clone()),
            FamilyRepr::WellProvided(_) => {
                check_cap("vertex count", self.n, ENUMERATION_CAP)?;
                Ok(VertexSet::proper_subsets(self.n)
                    .filter(|&u| self.contains_proper(u))
                    .collect())
            }
        }
    }

    /// Same family in well-provided form: one lattice family per ordered pair.
    pub fn to_well_provided(&self) -> Result<CrossingFamily> {
        let members = self.members()?;
        let mut map = BTreeMap::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if u == v {
                    continue;
                }
                let cuv: Vec<VertexSet> = members
                    .iter()
                    .copied()
                    .filter(|m| m.contains(u) && !m.contains(v))
                    .collect();
                if let Some(lat) = LatticeFamily::from_members(self.n, &cuv) {
                    map.insert((u, v), lat);
                }
            }
        }
        CrossingFamily::well_provided(self.n, map)
    }
}

/// All proper non-empty subsets of `0..n`.
pub fn all_proper(n: usize) -> Result<CrossingFamily> {
    check_cap("vertex count", n, ENUMERATION_CAP)?;
    CrossingFamily::explicit(n, VertexSet::proper_subsets(n))
}

/// Sets `U` with `δ⁻(U) = ∅`, i.e. the sets inducing dicuts.
pub fn dicut_family(d: &Digraph) -> Result<CrossingFamily> {
    CrossingFamily::explicit(d.n(), d.enumerate_dicuts()?)
}

/// `{v}` and `V∖{v}` for every vertex.
pub fn singletons_and_complements(n: usize) -> Result<CrossingFamily> {
    let sets = (0..n).flat_map(|v| {
        let s = VertexSet::singleton(v);
        [s, s.complement(n)]
    });
    CrossingFamily::explicit(n, sets.filter(move |s| s.is_proper(n)))
}

/// Value rule of an oracle; evaluated only on family members.
#[derive(Clone)]
pub enum ValueRule {
    Table(BTreeMap<VertexSet, i64>),
    Constant(i64),
    /// `d⁺(U) − offset` in the given digraph.
    OutdegMinus { digraph: Digraph, offset: i64 },
    /// `⌈(d⁺(U) − d⁻(U)) / 2⌉`.
    CeilHalfImbalance { digraph: Digraph },
    /// `w(δ⁺(U)) − w(δ⁻(U))` for integer arc weights.
    CutModular { digraph: Digraph, weights: Vec<i64> },
    Custom(Arc<dyn Fn(VertexSet) -> i64 + Send + Sync>),
}

impl fmt::Debug for ValueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueRule::Table(t) => f.debug_tuple("Table").field(t).finish(),
            ValueRule::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            ValueRule::OutdegMinus { offset, .. } => write!(f, "OutdegMinus({offset})"),
            ValueRule::CeilHalfImbalance { .. } => write!(f, "CeilHalfImbalance"),
            ValueRule::CutModular { weights, .. } => write!(f, "CutModular({weights:?})"),
            ValueRule::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Integer value oracle for a crossing submodular function. Sets outside
/// the family have value +∞, which callers realize by omitting the constraint.
#[derive(Debug, Clone)]
pub struct SubmodularOracle {
    family: CrossingFamily,
    rule: ValueRule,
    tag: String,
}

impl SubmodularOracle {
    pub fn new(family: CrossingFamily, rule: ValueRule, tag: impl Into<String>) -> Result<Self> {
        if let ValueRule::Table(table) = &rule {
            for u in table.keys() {
                if !u.within(family.n()) || !u.is_proper(family.n()) || !family.contains_proper(*u) {
                    return Err(Error::input(format!("table entry {u} is not a family member")));
                }
            }
            for u in family.members()? {
                if !table.contains_key(&u) {
                    return Err(Error::input(format!("table has no value for member {u}")));
                }
            }
        }
        let n = family.n();
        let graph_n = match &rule {
            ValueRule::OutdegMinus { digraph, .. } | ValueRule::CeilHalfImbalance { digraph } => Some(digraph.n()),
            ValueRule::CutModular { digraph, weights } => {
                if weights.len() != digraph.arc_count() {
                    return Err(Error::input("cut-modular weights need one entry per arc"));
                }
                Some(digraph.n())
            }
            _ => None,
        };
        if graph_n.is_some_and(|g| g != n) {
            return Err(Error::input("value rule digraph and family have different ground sets"));
        }
        Ok(SubmodularOracle {
            family,
            rule,
            tag: tag.into(),
        })
    }

    pub fn family(&self) -> &CrossingFamily {
        &self.family
    }

    pub fn rule(&self) -> &ValueRule {
        &self.rule
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    /// `f(U)`, or `None` when `U` is not a member (the +∞ convention).
    pub fn value(&self, u: VertexSet) -> Option<i64> {
        if !u.within(self.n()) || !u.is_proper(self.n()) || !self.family.contains_proper(u) {
            return None;
        }
        Some(self.eval(u))
    }

    fn eval(&self, u: VertexSet) -> i64 {
        match &self.rule {
            ValueRule::Table(t) => t[&u],
            ValueRule::Constant(c) => *c,
            ValueRule::OutdegMinus { digraph, offset } => digraph.out_degree(u) as i64 - offset,
            ValueRule::CeilHalfImbalance { digraph } => {
                let diff = digraph.out_degree(u) as i64 - digraph.in_degree(u) as i64;
                num_integer::Integer::div_ceil(&diff, &2)
            }
            ValueRule::CutModular { digraph, weights } => digraph.net_out(weights, u),
            ValueRule::Custom(g) => g(u),
        }
    }

    /// Members with their values, ascending by bitmask.
    pub fn entries(&self) -> Result<Vec<(VertexSet, i64)>> {
        Ok(self.family.members()?.into_iter().map(|u| (u, self.eval(u))).collect())
    }

    /// Same values, listed as a table over the same family.
    pub fn to_table(&self) -> Result<SubmodularOracle> {
        let table = self.entries()?.into_iter().collect();
        SubmodularOracle::new(self.family.clone(), ValueRule::Table(table), self.tag.clone())
    }
}

/// `f(U) = d⁺(U) − k` on all proper non-empty sets.
pub fn outdeg_minus_k(d: &Digraph, k: i64) -> Result<SubmodularOracle> {
    SubmodularOracle::new(
        all_proper(d.n())?,
        ValueRule::OutdegMinus {
            digraph: d.clone(),
            offset: k,
        },
        format!("outdeg-minus:{k}"),
    )
}

/// `f(U) = d⁺(U) − t` on the dicut family.
pub fn dicut_slack(d: &Digraph, t: i64) -> Result<SubmodularOracle> {
    SubmodularOracle::new(
        dicut_family(d)?,
        ValueRule::OutdegMinus {
            digraph: d.clone(),
            offset: t,
        },
        format!("dicut-slack:{t}"),
    )
}

/// `f(U) = ⌈(d⁺(U) − d⁻(U))/2⌉` on singletons and their complements.
pub fn ceil_half_imbalance(d: &Digraph) -> Result<SubmodularOracle> {
    SubmodularOracle::new(
        singletons_and_complements(d.n())?,
        ValueRule::CeilHalfImbalance { digraph: d.clone() },
        "ceil-half-imbalance",
    )
}

/// `f(U) = w(δ⁺(U)) − w(δ⁻(U))` on the given family; crossing modular.
pub fn cut_modular(family: CrossingFamily, d: &Digraph, weights: Vec<i64>) -> Result<SubmodularOracle> {
    SubmodularOracle::new(
        family,
        ValueRule::CutModular {
            digraph: d.clone(),
            weights,
        },
        "cut-modular",
    )
}

pub fn constant(family: CrossingFamily, c: i64) -> Result<SubmodularOracle> {
    SubmodularOracle::new(family, ValueRule::Constant(c), format!("constant:{c}"))
}

pub fn table(family: CrossingFamily, entries: BTreeMap<VertexSet, i64>) -> Result<SubmodularOracle> {
    SubmodularOracle::new(family, ValueRule::Table(entries), "table")
}

/// Returns a crossing pair whose intersection or union is missing, if any.
/// Pairs are scanned in ascending order of their members.
pub fn check_crossing_family(members: &[VertexSet], n: usize) -> Result<Option<(VertexSet, VertexSet)>> {
    check_cap("vertex count", n, ENUMERATION_CAP)?;
    let mut sorted = members.to_vec();
    sorted.sort();
    sorted.dedup();
    let set: HashSet<VertexSet> = sorted.iter().copied().collect();
    for (i, &u) in sorted.iter().enumerate() {
        for &w in &sorted[i + 1..] {
            if u.crosses(w, n) && !(set.contains(&u.intersection(w)) && set.contains(&u.union(w))) {
                return Ok(Some((u, w)));
            }
        }
    }
    Ok(None)
}

/// Returns a crossing pair `(U, W)` with `f(U∩W) + f(U∪W) > f(U) + f(W)`, if any.
pub fn check_crossing_submodular(f: &SubmodularOracle) -> Result<Option<(VertexSet, VertexSet)>> {
    let n = f.n();
    check_cap("vertex count", n, SUBMODULAR_CHECK_CAP)?;
    let entries = f.entries()?;
    let values: std::collections::HashMap<VertexSet, i64> = entries.iter().copied().collect();
    for (i, &(u, fu)) in entries.iter().enumerate() {
        for &(w, fw) in &entries[i + 1..] {
            if !u.crosses(w, n) {
                continue;
            }
            if let (Some(a), Some(b)) = (values.get(&u.intersection(w)), values.get(&u.union(w))) {
                if a + b > fu + fw {
                    return Ok(Some((u, w)));
                }
            }
        }
    }
    Ok(None)
}

/// Minimum of `g` over the members of `family`; ties go to the smallest bitmask.
pub fn minimize<T: Ord>(family: &CrossingFamily, mut g: impl FnMut(VertexSet) -> T) -> Result<(T, VertexSet)> {
    let mut best: Option<(T, VertexSet)> = None;
    for u in family.members()? {
        let val = g(u);
        if best.as_ref().is_none_or(|(b, _)| val < *b) {
            best = Some((val, u));
        }
    }
    best.ok_or_else(|| Error::Domain("minimization over an empty family".into()))
}

/// Exact minimum of the oracle over its family with the smallest argmin.
pub fn minimize_over_family(f: &SubmodularOracle) -> Result<(i64, VertexSet)> {
    minimize(f.family(), |u| f.eval(u))
}
