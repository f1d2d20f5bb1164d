//! k-arc-connected flips and dijoin decompositions.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::graph::{ArcSet, Digraph, VertexSet};
use crate::lp::{int, Rational};
use crate::setfam::{self, minimize, SubmodularOracle, ValueRule};
use crate::ENUMERATION_CAP;

use super::{solve_two_systems, TwoSystemInstance, TwoSystemOutcome};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    Holds,
    /// `slack = w(δ⁺(U)) + (τ/k − 1)·w(δ⁻(U)) − τ < 0`.
    Violated { set: VertexSet, slack: Rational },
}

impl Hypothesis {
    pub fn holds(&self) -> bool {
        matches!(self, Hypothesis::Holds)
    }

    fn into_result(self, reason: &str) -> Result<()> {
        match self {
            Hypothesis::Holds => Ok(()),
            Hypothesis::Violated { set, slack } => Err(Error::HypothesisViolated {
                set,
                slack,
                reason: reason.to_string(),
            }),
        }
    }
}

fn check_params(tau: i64, k: i64) -> Result<()> {
    if tau < 1 || k < 1 {
        return Err(Error::Domain(format!("need tau >= 1 and k >= 1, got tau={tau}, k={k}")));
    }
    Ok(())
}

fn weighted_degrees(d: &Digraph, w: Option<&[u8]>, u: VertexSet) -> (i64, i64) {
    let (out, inn) = d.delta(u);
    let weight = |a: usize| w.map_or(1, |w| w[a] as i64);
    (out.iter().map(weight).sum(), inn.iter().map(weight).sum())
}

/// `w(δ⁺(U)) + (τ/k − 1)·w(δ⁻(U)) − τ`, unit weights when `w` is `None`.
pub fn hypothesis_slack(d: &Digraph, w: Option<&[u8]>, tau: i64, k: i64, u: VertexSet) -> Rational {
    let (out, inn) = weighted_degrees(d, w, u);
    int(out) + (Rational::new(tau.into(), k.into()) - int(1)) * int(inn) - int(tau)
}

fn weighted_hypothesis(d: &Digraph, w: Option<&[u8]>, tau: i64, k: i64) -> Result<Hypothesis> {
    check_params(tau, k)?;
    let n = d.n();
    check_cap("vertex count", n, ENUMERATION_CAP)?;
    if n < 2 {
        return Ok(Hypothesis::Holds);
    }
    let ratio = Rational::new(k.into(), tau.into());
    let all = setfam::all_proper(n)?;
    // g(U) = d⁺(U) − k − (k/τ)(d⁺(U) − d⁻(U)) equals (k/τ)·slack(V∖U).
    let (g, u) = minimize(&all, |u| {
        let (out, inn) = weighted_degrees(d, w, u);
        int(out - k) - &ratio * int(out - inn)
    })?;
    if !g.is_negative() {
        return Ok(Hypothesis::Holds);
    }
    let set = u.complement(n);
    Ok(Hypothesis::Violated {
        set,
        slack: hypothesis_slack(d, w, tau, k, set),
    })
}

/// Checks `d⁺(U) + (τ/k − 1)·d⁻(U) ≥ τ` on every proper non-empty `U`.
pub fn verify_hypothesis(d: &Digraph, tau: i64, k: i64) -> Result<Hypothesis> {
    weighted_hypothesis(d, None, tau, k)
}

/// Weighted form with 0/1 arc weights.
pub fn verify_weighted_hypothesis(d: &Digraph, w: &[u8], tau: i64, k: i64) -> Result<Hypothesis> {
    if w.len() != d.arc_count() {
        return Err(Error::input("weights need one entry per arc"));
    }
    weighted_hypothesis(d, Some(w), tau, k)
}

/// Whether every dicut has at least `τ` arcs; the returned set is the first
/// dicut-inducing set that is too small.
pub fn dicuts_at_least(d: &Digraph, tau: i64) -> Result<Option<VertexSet>> {
    Ok(d.enumerate_dicuts()?.into_iter().find(|&u| (d.out_degree(u) as i64) < tau))
}

/// Every cut has at least `τ − 1` arcs and a cut of exactly `τ − 1` arcs has
/// as many arcs leaving as entering. Returns the first failing set.
pub fn balanced_cut_condition(d: &Digraph, tau: i64) -> Result<Option<VertexSet>> {
    check_cap("vertex count", d.n(), ENUMERATION_CAP)?;
    Ok(VertexSet::proper_subsets(d.n()).find(|&u| {
        let (out, inn) = (d.out_degree(u) as i64, d.in_degree(u) as i64);
        out + inn < tau - 1 || (out + inn == tau - 1 && out != inn)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipCertificate {
    pub j: ArcSet,
    pub k: i64,
    pub tau: i64,
    pub k_flip: bool,
    pub family_ok: bool,
}

impl FlipCertificate {
    pub fn verified(&self) -> bool {
        self.k_flip && self.family_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    Flip(i64),
    Dijoin(i64),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Flip(k) => write!(f, "{k}-arc-connected flip"),
            Role::Dijoin(k) => write!(f, "{k}-dijoin"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    pub part1: ArcSet,
    pub part2: ArcSet,
    pub roles: (Role, Role),
    pub verified: (bool, bool),
}

impl DecompositionResult {
    pub fn is_verified(&self) -> bool {
        self.verified.0 && self.verified.1
    }
}

/// `d_J⁺(U) − d_J⁻(U) ≤ f(U)` on every member; returns the first violation.
fn family_violation(d: &Digraph, j: &ArcSet, f: &SubmodularOracle) -> Result<Option<VertexSet>> {
    Ok(f.entries()?.into_iter().find(|&(u, v)| d.net_out_of(j, u) > v).map(|(u, _)| u))
}

/// Flip `J` making the digraph k-arc-connected with `d_J⁺(U) − d_J⁻(U) ≤ f(U)`
/// on the family of `f`.
pub fn find_k_flip(d: &Digraph, tau: i64, k: i64, f: &SubmodularOracle) -> Result<FlipCertificate> {
    if f.n() != d.n() {
        return Err(Error::input("family and digraph have different ground sets"));
    }
    verify_hypothesis(d, tau, k)?.into_result("flip hypothesis")?;
    let ratio = Rational::new(k.into(), tau.into());
    for (u, value) in f.entries()? {
        let (out, inn) = (d.out_degree(u) as i64, d.in_degree(u) as i64);
        let slack = int(value) - &ratio * int(out - inn);
        if slack.is_negative() {
            return Err(Error::HypothesisViolated {
                set: u,
                slack,
                reason: "family bound below (k/tau)(out - in)".into(),
            });
        }
    }
    let f2 = setfam::outdeg_minus_k(d, k)?;
    let inst = TwoSystemInstance::unit_box(d.clone(), f.clone(), f2)?;
    let y = match solve_two_systems(&inst)? {
        TwoSystemOutcome::Integral(y) => y,
        other => return Err(Error::internal(format!("flip system has no integral point: {other:?}"))),
    };
    let j: ArcSet = y.iter().enumerate().filter(|(_, &v)| v == 1).map(|(a, _)| a).collect();
    let cert = FlipCertificate {
        k_flip: d.is_k_flip(&j, k as usize)?,
        family_ok: family_violation(d, &j, f)?.is_none(),
        j,
        k,
        tau,
    };
    if !cert.verified() {
        return Err(Error::internal("flip certificate failed re-verification"));
    }
    Ok(cert)
}

fn check_split(tau: i64, k: i64) -> Result<()> {
    check_params(tau, k)?;
    if k > tau - 1 {
        return Err(Error::Domain(format!("need 1 <= k <= tau - 1, got tau={tau}, k={k}")));
    }
    Ok(())
}

/// Partition of the arcs into a k-arc-connected flip and a (τ−k)-dijoin.
pub fn decompose_flip_dijoin(d: &Digraph, tau: i64, k: i64) -> Result<DecompositionResult> {
    check_split(tau, k)?;
    let f = setfam::dicut_slack(d, tau - k)?;
    let cert = find_k_flip(d, tau, k, &f)?;
    let rest = cert.j.complement(d.arc_count());
    let result = DecompositionResult {
        verified: (d.is_k_flip(&cert.j, k as usize)?, d.is_k_dijoin(&rest, (tau - k) as usize)?),
        part1: cert.j,
        part2: rest,
        roles: (Role::Flip(k), Role::Dijoin(tau - k)),
    };
    if !result.is_verified() {
        return Err(Error::internal("flip/dijoin decomposition failed re-verification"));
    }
    Ok(result)
}

/// Flip making the digraph k-arc-connected with in- and out-degree differing
/// by at most one at every vertex.
pub fn near_eulerian_flip(d: &Digraph, k: i64) -> Result<FlipCertificate> {
    check_params(1, k)?;
    let (value, witness) = d.underlying_edge_connectivity()?;
    if (value as i64) < 2 * k {
        return Err(Error::ConnectivityTooLow {
            value,
            required: (2 * k) as usize,
            witness,
        });
    }
    let f = setfam::ceil_half_imbalance(d)?;
    let cert = find_k_flip(d, 2 * k, k, &f)?;
    let flipped = d.flip(&cert.j)?;
    if (0..d.n()).any(|v| flipped.imbalance(v).abs() > 1) {
        return Err(Error::internal("flip is not near-Eulerian"));
    }
    Ok(cert)
}

/// Partition of the weight-one arcs into a k-arc-connected flip of the
/// weight-one subdigraph and a (τ−k)-dijoin of the whole digraph.
pub fn weighted_decompose(d: &Digraph, w: &[u8], tau: i64, k: i64) -> Result<DecompositionResult> {
    check_split(tau, k)?;
    verify_weighted_hypothesis(d, w, tau, k)?.into_result("weighted flip hypothesis")?;
    let ones: Vec<usize> = (0..d.arc_count()).filter(|&a| w[a] == 1).collect();
    let keep: ArcSet = ones.iter().copied().collect();
    let sub = d.subdigraph(&keep);
    let f = SubmodularOracle::new(
        setfam::dicut_family(d)?,
        ValueRule::OutdegMinus {
            digraph: sub.clone(),
            offset: tau - k,
        },
        format!("weighted-dicut-slack:{}", tau - k),
    )?;
    let cert = find_k_flip(&sub, tau, k, &f)?;
    let part1: ArcSet = cert.j.iter().map(|a| ones[a]).collect();
    let part2: ArcSet = ones.iter().copied().filter(|&a| !part1.contains(a)).collect();
    let result = DecompositionResult {
        verified: (sub.is_k_flip(&cert.j, k as usize)?, d.is_k_dijoin(&part2, (tau - k) as usize)?),
        part1,
        part2,
        roles: (Role::Flip(k), Role::Dijoin(tau - k)),
    };
    if !result.is_verified() {
        return Err(Error::internal("weighted decomposition failed re-verification"));
    }
    Ok(result)
}

/// Partition of the arcs into a k-dijoin and a (τ−k)-dijoin when the
/// underlying graph is τ-edge-connected.
pub fn dijoin_pair_decompose(d: &Digraph, tau: i64, k: i64) -> Result<DecompositionResult> {
    check_split(tau, k)?;
    let (value, witness) = d.underlying_edge_connectivity()?;
    if (value as i64) < tau {
        return Err(Error::ConnectivityTooLow {
            value,
            required: tau as usize,
            witness,
        });
    }
    let small = k.min(tau - k);
    let inner = decompose_flip_dijoin(d, tau, small)?;
    let (part1, part2) = if small == k {
        (inner.part1, inner.part2)
    } else {
        (inner.part2, inner.part1)
    };
    let result = DecompositionResult {
        verified: (d.is_k_dijoin(&part1, k as usize)?, d.is_k_dijoin(&part2, (tau - k) as usize)?),
        part1,
        part2,
        roles: (Role::Dijoin(k), Role::Dijoin(tau - k)),
    };
    if !result.is_verified() {
        return Err(Error::internal("dijoin pair failed re-verification"));
    }
    Ok(result)
}
