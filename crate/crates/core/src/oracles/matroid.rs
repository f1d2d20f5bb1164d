//! Tiny matroids given by rank tables, and the encoding of a three-matroid
//! common basis question as a pair of submodular flow systems.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::setfam::{table, CrossingFamily, SubmodularOracle};
use crate::solvers::TwoSystemInstance;

/// Largest ground set with a tabulated rank function.
pub const MATROID_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatroidOracle {
    m: usize,
    /// Rank of every subset, indexed by bitmask.
    rank: Vec<i64>,
    name: String,
}

impl MatroidOracle {
    /// Tabulates `rank` and checks the rank axioms.
    pub fn from_fn(m: usize, name: impl Into<String>, rank: impl Fn(u32) -> i64) -> Result<Self> {
        check_cap("matroid ground set", m, MATROID_CAP)?;
        let table: Vec<i64> = (0..1u32 << m).map(rank).collect();
        let name = name.into();
        if table[0] != 0 {
            return Err(Error::input(format!("{name}: rank of the empty set is {}", table[0])));
        }
        for x in 0..1u32 << m {
            for e in (0..m).filter(|&e| x & (1 << e) == 0) {
                let step = table[(x | 1 << e) as usize] - table[x as usize];
                if !(0..=1).contains(&step) {
                    return Err(Error::input(format!("{name}: adding {e} to {x:#b} changes the rank by {step}")));
                }
                for f in (e + 1..m).filter(|&f| x & (1 << f) == 0) {
                    let both = table[(x | 1 << e | 1 << f) as usize];
                    if both + table[x as usize] > table[(x | 1 << e) as usize] + table[(x | 1 << f) as usize] {
                        return Err(Error::input(format!("{name}: rank is not submodular at {x:#b} with {e}, {f}")));
                    }
                }
            }
        }
        Ok(MatroidOracle { m, rank: table, name })
    }

    pub fn uniform(k: usize, m: usize) -> Result<Self> {
        Self::from_fn(m, format!("U{k},{m}"), |x| (x.count_ones() as usize).min(k) as i64)
    }

    /// Partition matroid: at most `cap` elements from each part.
    pub fn partition(m: usize, parts: &[(Vec<usize>, usize)]) -> Result<Self> {
        let mut seen = 0u32;
        let mut masks = Vec::new();
        for (part, cap) in parts {
            let mask = part.iter().fold(0u32, |acc, &e| acc | 1 << e);
            if part.iter().any(|&e| e >= m) || mask & seen != 0 {
                return Err(Error::input("partition parts must be disjoint subsets of the ground set"));
            }
            seen |= mask;
            masks.push((mask, *cap));
        }
        if seen.count_ones() as usize != m {
            return Err(Error::input("partition parts must cover the ground set"));
        }
        let name = parts
            .iter()
            .map(|(p, c)| format!("{}:{c}", p.iter().map(|e| e.to_string()).collect::<String>()))
            .collect::<Vec<_>>()
            .join("|");
        Self::from_fn(m, format!("P[{name}]"), |x| {
            masks.iter().map(|&(mask, cap)| ((x & mask).count_ones() as usize).min(cap) as i64).sum()
        })
    }

    /// Cycle matroid of a multigraph; element `i` is edge `i`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a >= vertices || b >= vertices) {
            return Err(Error::input("edge endpoint out of range"));
        }
        let label = edges.iter().map(|(a, b)| format!("{a}{b}")).collect::<Vec<_>>().join(",");
        Self::from_fn(edges.len(), format!("G[{label}]"), |x| {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], v: usize) -> usize {
                let mut r = v;
                while p[r] != r {
                    r = p[r];
                }
                p[v] = r;
                r
            }
            let mut rank = 0;
            for (i, &(a, b)) in edges.iter().enumerate() {
                if x & (1 << i) != 0 {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                        rank += 1;
                    }
                }
            }
            rank
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank_of(&self, mask: u32) -> i64 {
        self.rank[mask as usize]
    }

    pub fn rank(&self) -> i64 {
        self.rank_of(self.full())
    }

    fn full(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    pub fn is_basis(&self, mask: u32) -> bool {
        mask.count_ones() as i64 == self.rank() && self.rank_of(mask) == self.rank()
    }

    pub fn bases(&self) -> Vec<u32> {
        (0..=self.full()).filter(|&x| self.is_basis(x)).collect()
    }
}

/// Smallest-mask common basis of the three matroids, by exhaustive search.
pub fn common_basis(ms: [&MatroidOracle; 3]) -> Result<Option<u32>> {
    if ms[1].m != ms[0].m || ms[2].m != ms[0].m {
        return Err(Error::input("matroids have different ground sets"));
    }
    Ok(ms[0].bases().into_iter().find(|&b| ms[1].is_basis(b) && ms[2].is_basis(b)))
}

/// Two-system encoding over the digraph with vertices `V ∪ V*` (element `u` is
/// vertex `u`, its copy is `u + m`) and arcs `(u, u*)`.
#[derive(Debug, Clone)]
pub struct MatroidReduction {
    pub instance: TwoSystemInstance,
    pub m: usize,
    pub rank: i64,
}

impl MatroidReduction {
    /// Elements whose arc carries one unit.
    pub fn decode(&self, y: &[i64]) -> u32 {
        y.iter()
            .enumerate()
            .filter(|(_, &v)| v == 1)
            .fold(0u32, |acc, (u, _)| acc | 1 << u)
    }

    /// Integral solutions with every entry in `lo..=hi`, by exhaustive search.
    pub fn integral_solutions(&self, lo: i64, hi: i64) -> Result<Vec<Vec<i64>>> {
        let width = (hi - lo + 1).max(0) as u64;
        let total = width
            .checked_pow(self.m as u32)
            .filter(|&t| t <= 1 << 20)
            .ok_or(Error::Capacity {
                what: "integral solution search space",
                limit: 1 << 20,
                actual: usize::MAX,
            })?;
        let mut found = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let y: Vec<i64> = (0..self.m)
                .map(|_| {
                    let v = lo + (rest % width) as i64;
                    rest /= width;
                    v
                })
                .collect();
            if self.instance.system_violation(&y)?.is_none() {
                found.push(y);
            }
        }
        Ok(found)
    }
}

/// Builds the two systems whose common integral solutions are the common
/// bases of `m1`, `m2`, `m3`.
pub fn reduce_matroids_to_two_systems(
    m1: &MatroidOracle,
    m2: &MatroidOracle,
    m3: &MatroidOracle,
) -> Result<MatroidReduction> {
    let m = m1.m;
    if m2.m != m || m3.m != m {
        return Err(Error::input("matroids have different ground sets"));
    }
    if m == 0 {
        return Err(Error::ReductionInapplicable("empty ground set".into()));
    }
    let r = m1.rank();
    for (i, mat) in [m2, m3].into_iter().enumerate() {
        if mat.rank() != r {
            return Err(Error::ReductionInapplicable(format!(
                "matroid {} has rank {} but the first has rank {r}",
                i + 2,
                mat.rank()
            )));
        }
    }
    let full = m1.full();
    for u in 0..m {
        if m1.rank_of(1 << u) != 1 {
            return Err(Error::ReductionInapplicable(format!("element {u} is a loop of the first matroid")));
        }
        if m1.rank_of(full & !(1 << u)) != r {
            return Err(Error::ReductionInapplicable(format!("element {u} is a coloop of the first matroid")));
        }
    }

    let n = 2 * m;
    let arcs: Vec<(usize, usize)> = (0..m).map(|u| (u, u + m)).collect();
    let d = Digraph::new(n, arcs)?;
    let lower = |mask: u32| VertexSet::from_bits(mask as u64);
    let copies = VertexSet::from_bits((full as u64) << m);
    let with_missing_copies = |mask: u32| lower(full).union(VertexSet::from_bits(((full & !mask) as u64) << m));

    let build = |second: &MatroidOracle, name: &str| -> Result<SubmodularOracle> {
        let mut values: BTreeMap<VertexSet, i64> = BTreeMap::new();
        for mask in 1..=full {
            values.insert(lower(mask), m1.rank_of(mask));
            values.insert(with_missing_copies(mask), second.rank_of(mask));
        }
        values.insert(copies, -r);
        let family = CrossingFamily::explicit(n, values.keys().copied())?;
        let oracle = table(family, values)?;
        SubmodularOracle::new(oracle.family().clone(), oracle.rule().clone(), name)
    };
    let f = build(m2, "matroid-f")?;
    let g = build(m3, "matroid-g")?;
    let instance = TwoSystemInstance::unbounded(d, f, g)?;
    Ok(MatroidReduction { instance, m, rank: r })
}

#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub matroids: [MatroidOracle; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub name: String,
    pub common_basis: Option<u32>,
    pub solutions: usize,
    /// Every decoded solution is a common basis.
    pub decoded_ok: bool,
    pub agree: bool,
}

/// Catalogue names accepted by [`catalogue`].
pub const CATALOGUES: [&str; 4] = ["tiny", "uniform", "partition", "graphic"];

/// Small triples that satisfy the reduction's preconditions, both with and
/// without a common basis.
pub fn catalogue(name: &str) -> Result<Vec<CatalogueEntry>> {
    let entry = |label: &str, a: MatroidOracle, b: MatroidOracle, c: MatroidOracle| CatalogueEntry {
        name: label.to_string(),
        matroids: [a, b, c],
    };
    let p = MatroidOracle::partition;
    let mut uniform = vec![
        entry("U13 x3", MatroidOracle::uniform(1, 3)?, MatroidOracle::uniform(1, 3)?, MatroidOracle::uniform(1, 3)?),
        entry("U23 x3", MatroidOracle::uniform(2, 3)?, MatroidOracle::uniform(2, 3)?, MatroidOracle::uniform(2, 3)?),
        entry("U24 x3", MatroidOracle::uniform(2, 4)?, MatroidOracle::uniform(2, 4)?, MatroidOracle::uniform(2, 4)?),
        entry("U35 x3", MatroidOracle::uniform(3, 5)?, MatroidOracle::uniform(3, 5)?, MatroidOracle::uniform(3, 5)?),
    ];
    let mut partition = vec![
        entry(
            "U24, {01|23}, {02|13}",
            MatroidOracle::uniform(2, 4)?,
            p(4, &[(vec![0, 1], 1), (vec![2, 3], 1)])?,
            p(4, &[(vec![0, 2], 1), (vec![1, 3], 1)])?,
        ),
        entry(
            "U24, {01|23}, {01:2|23:0}",
            MatroidOracle::uniform(2, 4)?,
            p(4, &[(vec![0, 1], 1), (vec![2, 3], 1)])?,
            p(4, &[(vec![0, 1], 2), (vec![2, 3], 0)])?,
        ),
        entry(
            "{01|23}, {02|13}, {03|12}",
            p(4, &[(vec![0, 1], 1), (vec![2, 3], 1)])?,
            p(4, &[(vec![0, 2], 1), (vec![1, 3], 1)])?,
            p(4, &[(vec![0, 3], 1), (vec![1, 2], 1)])?,
        ),
        entry(
            "U13, U13, {0:1|12:0}",
            MatroidOracle::uniform(1, 3)?,
            MatroidOracle::uniform(1, 3)?,
            p(3, &[(vec![0], 1), (vec![1, 2], 0)])?,
        ),
        entry(
            "U25, {012:1|34:1}, {03:1|124:1}",
            MatroidOracle::uniform(2, 5)?,
            p(5, &[(vec![0, 1, 2], 1), (vec![3, 4], 1)])?,
            p(5, &[(vec![0, 3], 1), (vec![1, 2, 4], 1)])?,
        ),
    ];
    let mut graphic = vec![
        entry(
            "U34, C4, {01:1|23:2}",
            MatroidOracle::uniform(3, 4)?,
            MatroidOracle::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])?,
            p(4, &[(vec![0, 1], 1), (vec![2, 3], 2)])?,
        ),
        entry(
            "U24, triangle+parallel, {01|23}",
            MatroidOracle::uniform(2, 4)?,
            MatroidOracle::graphic(3, &[(0, 1), (0, 1), (1, 2), (0, 2)])?,
            p(4, &[(vec![0, 1], 1), (vec![2, 3], 1)])?,
        ),
        entry(
            "U24, triangle+parallel, {01:2|23:0}",
            MatroidOracle::uniform(2, 4)?,
            MatroidOracle::graphic(3, &[(0, 1), (0, 1), (1, 2), (0, 2)])?,
            p(4, &[(vec![0, 1], 2), (vec![2, 3], 0)])?,
        ),
        entry(
            "triangle x3",
            MatroidOracle::graphic(3, &[(0, 1), (1, 2), (2, 0)])?,
            MatroidOracle::graphic(3, &[(0, 1), (1, 2), (2, 0)])?,
            MatroidOracle::graphic(3, &[(0, 1), (1, 2), (2, 0)])?,
        ),
    ];
    Ok(match name {
        "uniform" => uniform,
        "partition" => partition,
        "graphic" => graphic,
        "tiny" => {
            uniform.append(&mut partition);
            uniform.append(&mut graphic);
            uniform
        }
        other => return Err(Error::input(format!("unknown matroid catalogue {other:?}; expected one of {CATALOGUES:?}"))),
    })
}

/// Compares exhaustive common-basis search with exhaustive search for
/// integral solutions with entries in `{−1, 0, 1, 2}`.
pub fn check_equivalence(entry: &CatalogueEntry) -> Result<EquivalenceReport> {
    let [a, b, c] = &entry.matroids;
    let basis = common_basis([a, b, c])?;
    let reduction = reduce_matroids_to_two_systems(a, b, c)?;
    let solutions = reduction.integral_solutions(-1, 2)?;
    let decoded_ok = solutions.iter().all(|y| {
        let set = reduction.decode(y);
        y.iter().all(|&v| v == 0 || v == 1) && a.is_basis(set) && b.is_basis(set) && c.is_basis(set)
    });
    Ok(EquivalenceReport {
        name: entry.name.clone(),
        common_basis: basis,
        solutions: solutions.len(),
        decoded_ok,
        agree: decoded_ok && basis.is_some() == !solutions.is_empty(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_axioms() {
        assert_eq!(MatroidOracle::uniform(2, 4).unwrap().bases().len(), 6);
        assert_eq!(MatroidOracle::graphic(3, &[(0, 1), (1, 2), (2, 0)]).unwrap().rank(), 2);
        assert!(MatroidOracle::from_fn(3, "bad", |x| 2 * x.count_ones() as i64).is_err());
        assert!(MatroidOracle::from_fn(3, "not-sub", |x| match x {
            0b011 | 0b101 => 1,
            _ => x.count_ones().min(2) as i64,
        })
        .is_err());
    }

    #[test]
    fn uniform_triple_reduces() {
        let u = MatroidOracle::uniform(2, 3).unwrap();
        let red = reduce_matroids_to_two_systems(&u, &u, &u).unwrap();
        let sols = red.integral_solutions(-1, 2).unwrap();
        assert_eq!(sols.len(), 3);
        assert!(sols.iter().all(|y| red.decode(y).count_ones() == 2));
    }

    #[test]
    fn total_above_rank_is_infeasible() {
        let u = MatroidOracle::uniform(2, 3).unwrap();
        let red = reduce_matroids_to_two_systems(&u, &u, &u).unwrap();
        assert!(red.instance.system_violation(&[1, 1, 1]).unwrap().is_some());
        assert!(red.instance.system_violation(&[1, 1, 0]).unwrap().is_none());
        assert!(red.instance.system_violation(&[1, 0, 0]).unwrap().is_some());
    }

    #[test]
    fn preconditions_enforced() {
        let u = MatroidOracle::uniform(2, 4).unwrap();
        let low = MatroidOracle::uniform(1, 4).unwrap();
        assert!(matches!(reduce_matroids_to_two_systems(&u, &low, &u), Err(Error::ReductionInapplicable(_))));
        let full = MatroidOracle::uniform(4, 4).unwrap();
        assert!(matches!(reduce_matroids_to_two_systems(&full, &full, &full), Err(Error::ReductionInapplicable(_))));
        let loopy = MatroidOracle::partition(3, &[(vec![0, 1], 1), (vec![2], 0)]).unwrap();
        assert!(matches!(reduce_matroids_to_two_systems(&loopy, &loopy, &loopy), Err(Error::ReductionInapplicable(_))));
    }

    #[test]
    fn catalogue_agrees() {
        let entries = catalogue("tiny").unwrap();
        let reports: Vec<_> = entries.iter().map(|e| check_equivalence(e).unwrap()).collect();
        assert!(reports.iter().all(|r| r.agree), "{reports:?}");
        assert!(reports.iter().any(|r| r.common_basis.is_none()));
        assert!(reports.iter().any(|r| r.common_basis.is_some()));
    }
}
