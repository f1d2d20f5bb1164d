//! Digraphs, vertex and arc subsets, cut arithmetic and connectivity.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::transshipment::maxflow::{max_flow, FlowNetwork};
use crate::{ENUMERATION_CAP, MAX_VERTICES};

/// Subset of the vertex ids `0..n` stored as a bitmask (n ≤ 63).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The whole vertex set `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// True when the set is neither empty nor all of `0..n`.
    pub fn is_proper(self, n: usize) -> bool {
        !self.is_empty() && self != Self::full(n)
    }

    /// Members below `n`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset(Self::full(n))
    }

    /// Two sets cross when they meet and do not cover `0..n`.
    pub fn crosses(self, other: Self, n: usize) -> bool {
        !self.intersection(other).is_empty() && self.union(other) != Self::full(n)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// All proper non-empty subsets of `0..n` in ascending bitmask order.
    pub fn proper_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        let full = if n == 0 { 0 } else { Self::full(n).0 };
        (1..full).map(VertexSet)
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Set of arc ids.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArcSet(BTreeSet<usize>);

impl ArcSet {
    pub fn new() -> Self {
        ArcSet(BTreeSet::new())
    }

    /// Arc set from the low bits of a mask.
    pub fn from_mask(mask: u64) -> Self {
        (0..64).filter(|&i| mask >> i & 1 == 1).collect()
    }

    pub fn all(m: usize) -> Self {
        (0..m).collect()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: usize) -> bool {
        self.0.insert(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Arc ids in `0..m` not in the set.
    pub fn complement(&self, m: usize) -> Self {
        (0..m).filter(|a| !self.contains(*a)).collect()
    }

    pub fn intersection(&self, other: &ArcSet) -> ArcSet {
        self.0.intersection(&other.0).copied().collect()
    }

    /// 0/1 incidence vector of length `m`.
    pub fn incidence(&self, m: usize) -> Vec<i64> {
        (0..m).map(|a| i64::from(self.contains(a))).collect()
    }
}

impl FromIterator<usize> for ArcSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ArcSet(iter.into_iter().collect())
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Directed multigraph on vertices `0..n`. Arc ids are positions in `arcs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    weights: Vec<u8>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        let weights = vec![1; arcs.len()];
        Self::with_weights(n, arcs, weights)
    }

    pub fn with_weights(n: usize, arcs: Vec<(usize, usize)>, weights: Vec<u8>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::Capacity {
                what: "vertex count",
                limit: MAX_VERTICES,
                actual: n,
            });
        }
        if weights.len() != arcs.len() {
            return Err(Error::input("one weight per arc is required"));
        }
        for (id, &(t, h)) in arcs.iter().enumerate() {
            if t >= n || h >= n {
                return Err(Error::input(format!("arc {id} ({t},{h}) has an endpoint >= n={n}")));
            }
            if t == h {
                return Err(Error::input(format!("arc {id} is a self-loop at {t}")));
            }
        }
        if let Some(w) = weights.iter().find(|&&w| w > 1) {
            return Err(Error::input(format!("arc weight {w} is not 0/1")));
        }
        Ok(Digraph { n, arcs, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, id: usize) -> (usize, usize) {
        self.arcs[id]
    }

    pub fn weights(&self) -> &[u8] {
        &self.weights
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Arcs leaving and entering `u`.
    pub fn delta(&self, u: VertexSet) -> (ArcSet, ArcSet) {
        let mut out = ArcSet::new();
        let mut inc = ArcSet::new();
        for (id, &(t, h)) in self.arcs.iter().enumerate() {
            match (u.contains(t), u.contains(h)) {
                (true, false) => {
                    out.insert(id);
                }
                (false, true) => {
                    inc.insert(id);
                }
                _ => {}
            }
        }
        (out, inc)
    }

    pub fn out_degree(&self, u: VertexSet) -> usize {
        self.arcs
            .iter()
            .filter(|&&(t, h)| u.contains(t) && !u.contains(h))
            .count()
    }

    pub fn in_degree(&self, u: VertexSet) -> usize {
        self.arcs
            .iter()
            .filter(|&&(t, h)| !u.contains(t) && u.contains(h))
            .count()
    }

    /// `y(δ⁺(U)) − y(δ⁻(U))` for an arbitrary arc vector.
    pub fn net_out<T>(&self, y: &[T], u: VertexSet) -> T
    where
        T: Clone + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + num_traits::Zero,
    {
        let mut acc = T::zero();
        for (id, &(t, h)) in self.arcs.iter().enumerate() {
            match (u.contains(t), u.contains(h)) {
                (true, false) => acc = acc + y[id].clone(),
                (false, true) => acc = acc - y[id].clone(),
                _ => {}
            }
        }
        acc
    }

    /// Net outflow `d⁺(U) − d⁻(U)` counting only arcs in `j`.
    pub fn net_out_of(&self, j: &ArcSet, u: VertexSet) -> i64 {
        j.iter()
            .map(|a| {
                let (t, h) = self.arcs[a];
                match (u.contains(t), u.contains(h)) {
                    (true, false) => 1,
                    (false, true) => -1,
                    _ => 0,
                }
            })
            .sum()
    }

    /// Reverses every arc of `j` in place; arc ids are preserved.
    pub fn flip(&self, j: &ArcSet) -> Result<Digraph> {
        if let Some(a) = j.iter().find(|&a| a >= self.arcs.len()) {
            return Err(Error::input(format!("unknown arc id {a}")));
        }
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .map(|(id, &(t, h))| if j.contains(id) { (h, t) } else { (t, h) })
            .collect();
        Ok(Digraph {
            n: self.n,
            arcs,
            weights: self.weights.clone(),
        })
    }

    /// Subdigraph on the same vertex set keeping the listed arcs, renumbered in
    /// ascending order of their original ids.
    pub fn subdigraph(&self, keep: &ArcSet) -> Digraph {
        let arcs = keep.iter().map(|a| self.arcs[a]).collect::<Vec<_>>();
        let weights = keep.iter().map(|a| self.weights[a]).collect();
        Digraph {
            n: self.n,
            arcs,
            weights,
        }
    }

    /// Out-degree minus in-degree of a single vertex.
    pub fn imbalance(&self, v: usize) -> i64 {
        self.net_out_of(&ArcSet::all(self.arc_count()), VertexSet::singleton(v))
    }

    /// Weakly connected components, each as a vertex set, ordered by smallest member.
    pub fn weak_components(&self) -> Vec<VertexSet> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(t, h) in &self.arcs {
            let (a, b) = (find(&mut parent, t), find(&mut parent, h));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<VertexSet> = Vec::new();
        let mut index = vec![usize::MAX; self.n];
        for v in 0..self.n {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(VertexSet::EMPTY);
            }
            comps[index[r]].insert(v);
        }
        comps
    }

    /// Proper non-empty sets with no arc leaving or entering them, i.e. unions of
    /// some but not all weak components, in ascending bitmask order.
    pub fn isolated_cut_sets(&self) -> Result<Vec<VertexSet>> {
        let comps = self.weak_components();
        check_cap("weak component count", comps.len(), ENUMERATION_CAP)?;
        let mut sets: Vec<VertexSet> = (1..(1u64 << comps.len()) - 1)
            .map(|mask| {
                comps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(VertexSet::EMPTY, |acc, (_, c)| acc.union(*c))
            })
            .collect();
        sets.sort();
        Ok(sets)
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() <= 1
    }

    /// Minimum of `d⁺(U)` over proper non-empty `U`, with a set attaining it.
    /// Uses 2(n−1) max-flow computations from a fixed root. `None` when n = 1.
    pub fn arc_connectivity(&self) -> Result<Option<(usize, VertexSet)>> {
        if self.n == 0 {
            return Err(Error::input("connectivity of the empty digraph is undefined"));
        }
        let mut best: Option<(usize, VertexSet)> = None;
        for v in 1..self.n {
            for (s, t) in [(0, v), (v, 0)] {
                let (value, side) = self.unit_min_cut(s, t, false);
                if best.is_none_or(|(b, _)| value < b) {
                    best = Some((value, side));
                }
            }
        }
        Ok(best)
    }

    pub fn is_k_arc_connected(&self, k: usize) -> Result<bool> {
        if self.n == 0 {
            return Err(Error::input("connectivity of the empty digraph is undefined"));
        }
        for v in 1..self.n {
            for (s, t) in [(0, v), (v, 0)] {
                if self.unit_min_cut(s, t, false).0 < k {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Edge connectivity of the underlying undirected multigraph with a minimum cut.
    pub fn underlying_edge_connectivity(&self) -> Result<(usize, VertexSet)> {
        if self.n < 2 {
            return Err(Error::input("edge connectivity needs at least two vertices"));
        }
        let mut best = (usize::MAX, VertexSet::EMPTY);
        for v in 1..self.n {
            let (value, side) = self.unit_min_cut(0, v, true);
            if value < best.0 {
                best = (value, side);
            }
        }
        Ok(best)
    }

    pub fn edge_connectivity_underlying(&self) -> Result<usize> {
        Ok(self.underlying_edge_connectivity()?.0)
    }

    fn unit_min_cut(&self, s: usize, t: usize, undirected: bool) -> (usize, VertexSet) {
        let mut net = FlowNetwork::new(self.n, s, t);
        for &(a, b) in &self.arcs {
            net.add_arc(a, b, 1);
            if undirected {
                net.add_arc(b, a, 1);
            }
        }
        let mf = max_flow(&net);
        let side = (0..self.n).filter(|&v| mf.source_side[v]).collect();
        (mf.value as usize, side)
    }

    /// Proper non-empty `U` with `δ⁻(U) = ∅`, ascending by bitmask.
    pub fn enumerate_dicuts(&self) -> Result<Vec<VertexSet>> {
        check_cap("vertex count", self.n, ENUMERATION_CAP)?;
        let masks = self.arc_masks();
        Ok(VertexSet::proper_subsets(self.n)
            .filter(|u| masks.iter().all(|&(t, h)| !(u.0 & h != 0 && u.0 & t == 0)))
            .collect())
    }

    /// Whether `j` meets every dicut at least `k` times.
    pub fn is_k_dijoin(&self, j: &ArcSet, k: usize) -> Result<bool> {
        Ok(self.dijoin_violation(j, k)?.is_none())
    }

    /// First dicut-inducing set whose dicut meets `j` fewer than `k` times.
    pub fn dijoin_violation(&self, j: &ArcSet, k: usize) -> Result<Option<VertexSet>> {
        for u in self.enumerate_dicuts()? {
            let hits = j.iter().filter(|&a| {
                let (t, h) = self.arcs[a];
                u.contains(t) && !u.contains(h)
            });
            if hits.count() < k {
                return Ok(Some(u));
            }
        }
        Ok(None)
    }

    /// Whether reversing `j` makes the digraph k-arc-connected.
    pub fn is_k_flip(&self, j: &ArcSet, k: usize) -> Result<bool> {
        self.flip(j)?.is_k_arc_connected(k)
    }

    fn arc_masks(&self) -> Vec<(u64, u64)> {
        self.arcs.iter().map(|&(t, h)| (1u64 << t, 1u64 << h)).collect()
    }

    /// Directed cycle 0→1→…→n−1→0.
    pub fn directed_cycle(n: usize) -> Digraph {
        Digraph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("valid cycle")
    }

    /// Directed cycle with both orientations of every edge.
    pub fn bidirected_cycle(n: usize) -> Digraph {
        let mut arcs = Vec::new();
        for i in 0..n {
            arcs.push((i, (i + 1) % n));
            arcs.push(((i + 1) % n, i));
        }
        if n == 2 {
            arcs.truncate(2);
        }
        Digraph::new(n, arcs).expect("valid bidirected cycle")
    }

    /// Digraph with vertices 1,2,3,1′,2′,3′ (ids 0..6) and arcs 1→1′, 2→2′, 3→3′.
    pub fn three_matching() -> Digraph {
        Digraph::new(6, vec![(0, 3), (1, 4), (2, 5)]).expect("valid")
    }
}
