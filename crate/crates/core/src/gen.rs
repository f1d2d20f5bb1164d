//! Seeded random instance generators.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_cap, Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::setfam::{table, CrossingFamily, SubmodularOracle};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Largest ground set for which generated families are closed by brute force.
pub const FAMILY_GEN_CAP: usize = 10;

/// `m` arcs between distinct random endpoints; a random spanning tree comes
/// first when `connected` is set.
pub fn random_digraph(rng: &mut GenRng, n: usize, m: usize, connected: bool) -> Result<Digraph> {
    if n < 2 && m > 0 {
        return Err(Error::input("arcs need at least two vertices"));
    }
    if connected && m + 1 < n {
        return Err(Error::input(format!("a connected digraph on {n} vertices needs at least {} arcs", n - 1)));
    }
    let mut arcs = Vec::with_capacity(m);
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for i in 1..n {
            let other = order[rng.gen_range(0..i)];
            arcs.push(orient(rng, order[i], other));
        }
    }
    while arcs.len() < m {
        let t = rng.gen_range(0..n);
        let h = rng.gen_range(0..n - 1);
        let h = if h >= t { h + 1 } else { h };
        arcs.push((t, h));
    }
    arcs.shuffle(rng);
    Digraph::new(n, arcs)
}

fn orient(rng: &mut GenRng, a: usize, b: usize) -> (usize, usize) {
    if rng.gen_bool(0.5) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Random orientation of a multigraph whose underlying edge connectivity is at
/// least `target`: the union of `⌈target/2⌉` random Hamiltonian cycles (a
/// spanning tree when `target` is 1) plus `extra` random edges.
pub fn random_ec_orientation(rng: &mut GenRng, n: usize, target: usize, extra: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::input("need at least two vertices"));
    }
    if target == 0 {
        return random_digraph(rng, n, extra, false);
    }
    let mut edges = Vec::new();
    if target == 1 {
        edges.extend(random_digraph(rng, n, n - 1, true)?.arcs().iter().copied());
    } else {
        for _ in 0..target.div_ceil(2) {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            for i in 0..n {
                edges.push((order[i], order[(i + 1) % n]));
            }
        }
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        edges.push((a, b));
    }
    let mut arcs: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| orient(rng, a, b)).collect();
    arcs.shuffle(rng);
    let d = Digraph::new(n, arcs)?;
    let (value, _) = d.underlying_edge_connectivity()?;
    if value < target {
        return Err(Error::internal("generated multigraph misses its connectivity target"));
    }
    Ok(d)
}

/// Random digraph with at least one dicut and every dicut of size at least
/// `tau`: a random acyclic digraph whose small dicuts are padded with forward
/// arcs. `None` when the arc budget runs out first.
pub fn random_dicut_heavy(rng: &mut GenRng, n: usize, tau: usize, max_arcs: usize) -> Result<Option<Digraph>> {
    if n < 2 {
        return Err(Error::input("need at least two vertices"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        if rng.gen_bool(0.8) {
            arcs.push((order[j], order[i]));
        } else {
            arcs.push((order[i], order[j]));
        }
    }
    loop {
        if arcs.len() > max_arcs {
            return Ok(None);
        }
        let d = Digraph::new(n, arcs.clone())?;
        let dicuts = d.enumerate_dicuts()?;
        if dicuts.is_empty() {
            return Ok(None);
        }
        let Some(small) = dicuts.into_iter().find(|&u| d.out_degree(u) < tau) else {
            return Ok(Some(d));
        };
        let inside: Vec<usize> = small.iter().collect();
        let outside: Vec<usize> = small.complement(n).iter().collect();
        let t = *inside.choose(rng).expect("dicut side is non-empty");
        let h = *outside.choose(rng).expect("dicut side is non-empty");
        arcs.push((t, h));
    }
}

/// Closure of random seed sets under intersection and union of crossing pairs.
pub fn random_crossing_family(rng: &mut GenRng, n: usize, seeds: usize) -> Result<CrossingFamily> {
    check_cap("vertex count", n, FAMILY_GEN_CAP)?;
    if n < 2 {
        return Ok(CrossingFamily::empty(n));
    }
    let full = VertexSet::full(n).bits();
    let mut members: BTreeSet<VertexSet> = BTreeSet::new();
    for _ in 0..seeds {
        members.insert(VertexSet::from_bits(rng.gen_range(1..full)));
    }
    loop {
        let list: Vec<VertexSet> = members.iter().copied().collect();
        let mut added = false;
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if a.crosses(b, n) {
                    added |= members.insert(a.intersection(b));
                    added |= members.insert(a.union(b));
                }
            }
        }
        if !added {
            break;
        }
    }
    CrossingFamily::explicit(n, members)
}

/// Fully submodular set function: random modular part, a random non-negative
/// cut function and a concave function of the cardinality.
pub fn random_submodular_fn(rng: &mut GenRng, n: usize) -> impl Fn(VertexSet) -> i64 {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
    let cut_arcs: Vec<(usize, usize, i64)> = if n < 2 {
        Vec::new()
    } else {
        (0..n)
            .map(|_| {
                let t = rng.gen_range(0..n);
                let h = (t + rng.gen_range(1..n)) % n;
                (t, h, rng.gen_range(0..=2))
            })
            .collect()
    };
    let cap = rng.gen_range(0..=n as i64);
    move |u: VertexSet| {
        let modular: i64 = u.iter().map(|v| weights[v]).sum();
        let cut: i64 = cut_arcs
            .iter()
            .filter(|&&(t, h, _)| u.contains(t) && !u.contains(h))
            .map(|&(_, _, w)| w)
            .sum();
        modular + cut + (u.len() as i64).min(cap)
    }
}

/// Table oracle over `family` with values of a random submodular function.
pub fn random_submodular_table(rng: &mut GenRng, family: CrossingFamily) -> Result<SubmodularOracle> {
    let f = random_submodular_fn(rng, family.n());
    let values: BTreeMap<VertexSet, i64> = family.members()?.into_iter().map(|u| (u, f(u))).collect();
    table(family, values)
}

/// Family bound satisfying `f(U) ≥ (k/τ)(d⁺(U) − d⁻(U))`: the modular
/// function `Σ_{v∈U} ⌈(k/τ)(d⁺(v) − d⁻(v))⌉` plus a random non-negative cut
/// function, over a random crossing family.
pub fn random_flip_bound(rng: &mut GenRng, d: &Digraph, tau: i64, k: i64, seeds: usize) -> Result<SubmodularOracle> {
    if tau < 1 || k < 1 {
        return Err(Error::Domain("need tau >= 1 and k >= 1".into()));
    }
    let n = d.n();
    let family = random_crossing_family(rng, n, seeds)?;
    let base: Vec<i64> = (0..n).map(|v| (k * d.imbalance(v)).div_euclid(tau) + ((k * d.imbalance(v)).rem_euclid(tau) != 0) as i64).collect();
    let extra: Vec<(usize, usize, i64)> = (0..n.saturating_sub(1))
        .map(|_| {
            let t = rng.gen_range(0..n);
            let h = (t + rng.gen_range(1..n)) % n;
            (t, h, rng.gen_range(0..=1))
        })
        .collect();
    let values: BTreeMap<VertexSet, i64> = family
        .members()?
        .into_iter()
        .map(|u| {
            let modular: i64 = u.iter().map(|v| base[v]).sum();
            let cut: i64 = extra.iter().filter(|&&(t, h, _)| u.contains(t) && !u.contains(h)).map(|e| e.2).sum();
            (u, modular + cut)
        })
        .collect();
    let oracle = table(family, values)?;
    SubmodularOracle::new(oracle.family().clone(), oracle.rule().clone(), "random-flip-bound")
}

/// Random 0/1 arc weights with each arc weighted one with probability `p`.
pub fn random_weights(rng: &mut GenRng, m: usize, p: f64) -> Vec<u8> {
    (0..m).map(|_| rng.gen_bool(p) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{check_crossing_family, check_crossing_submodular};

    #[test]
    fn deterministic_given_seed() {
        let a = random_digraph(&mut rng(7), 5, 8, true).unwrap();
        let b = random_digraph(&mut rng(7), 5, 8, true).unwrap();
        assert_eq!(a, b);
        assert!(a.is_weakly_connected());
    }

    #[test]
    fn connectivity_target_met() {
        let mut r = rng(1);
        for target in 1..=4 {
            let d = random_ec_orientation(&mut r, 5, target, 2).unwrap();
            assert!(d.underlying_edge_connectivity().unwrap().0 >= target);
        }
        assert!(random_ec_orientation(&mut r, 1, 2, 0).is_err());
    }

    #[test]
    fn families_and_tables_are_valid() {
        let mut r = rng(3);
        for _ in 0..20 {
            let fam = random_crossing_family(&mut r, 5, 4).unwrap();
            assert_eq!(check_crossing_family(&fam.members().unwrap(), 5).unwrap(), None);
            let f = random_submodular_table(&mut r, fam).unwrap();
            assert_eq!(check_crossing_submodular(&f).unwrap(), None);
        }
    }

    #[test]
    fn dicut_heavy_digraphs() {
        let mut r = rng(5);
        let mut hits = 0;
        for _ in 0..20 {
            if let Some(d) = random_dicut_heavy(&mut r, 4, 3, 16).unwrap() {
                let dicuts = d.enumerate_dicuts().unwrap();
                assert!(!dicuts.is_empty());
                assert!(dicuts.iter().all(|&u| d.out_degree(u) >= 3));
                hits += 1;
            }
        }
        assert!(hits > 0);
    }
}
