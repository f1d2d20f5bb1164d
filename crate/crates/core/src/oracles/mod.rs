//! Independent brute-force checks, integral dual extraction and fractional
//! vertex detection at desk scale.

pub mod matroid;
pub mod search;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::graph::{ArcSet, Digraph, VertexSet};
use crate::lp::{self, int, is_integral, linalg, LinearProgram, LpOutcome, Rational, Relation, RowTag, VertexPoint};
use crate::setfam::{constant, CrossingFamily, SubmodularOracle};
use crate::solvers::TwoSystemInstance;

pub use matroid::*;
pub use search::*;

/// Largest arc count for exhaustive searches over arc subsets.
pub const ARC_SUBSET_CAP: usize = 20;
/// Largest vertex count for which all cuts are tabulated.
pub const CUT_TABLE_CAP: usize = 12;

/// Out- and in-arc masks of every proper non-empty vertex set, smallest cuts first.
pub(crate) fn cut_masks(d: &Digraph) -> Result<Vec<(u32, u32)>> {
    check_cap("vertex count", d.n(), CUT_TABLE_CAP)?;
    check_cap("arc count", d.arc_count(), ARC_SUBSET_CAP)?;
    let mut cuts: Vec<(u32, u32)> = VertexSet::proper_subsets(d.n())
        .map(|u| {
            let (out, inn) = d.delta(u);
            (mask_of(&out), mask_of(&inn))
        })
        .collect();
    cuts.sort_by_key(|&(o, i)| (o | i).count_ones());
    Ok(cuts)
}

pub(crate) fn mask_of(s: &ArcSet) -> u32 {
    s.iter().fold(0u32, |m, a| m | (1 << a))
}

pub(crate) fn arcs_of(mask: u32) -> ArcSet {
    ArcSet::from_mask(mask as u64)
}

/// Exhaustive search for `J` that makes the digraph k-arc-connected and keeps
/// `d_J⁺(U) − d_J⁻(U) ≤ f(U)` on the family of `f`. Returns the valid `J` with
/// the smallest bitmask. No hypothesis is assumed.
pub fn brute_force_flip(d: &Digraph, k: i64, f: &SubmodularOracle) -> Result<Option<ArcSet>> {
    let m = d.arc_count();
    let cuts = cut_masks(d)?;
    let family: Vec<(u32, u32, i64)> = f
        .entries()?
        .into_iter()
        .map(|(u, v)| {
            let (out, inn) = d.delta(u);
            (mask_of(&out), mask_of(&inn), v)
        })
        .collect();
    for mask in 0u32..(1u32 << m) {
        let family_ok = family
            .iter()
            .all(|&(o, i, v)| ((mask & o).count_ones() as i64) - ((mask & i).count_ones() as i64) <= v);
        if !family_ok {
            continue;
        }
        let connected = cuts
            .iter()
            .all(|&(o, i)| ((o & !mask).count_ones() + (i & mask).count_ones()) as i64 >= k);
        if connected {
            return Ok(Some(arcs_of(mask)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualEntry {
    pub system: u8,
    pub set: VertexSet,
    pub z: i64,
}

/// Integral optimal dual: `Σ z·(χδ⁺(U) − χδ⁻(U)) = c` and `Σ fᵢ(U)·z = value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualSolution {
    pub z: Vec<DualEntry>,
    /// Multiplier of a balance row; the arc system has none.
    pub mu: Option<i64>,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdiOutcome {
    Dual(DualSolution),
    NoIntegralDual { primal_value: Rational, point: VertexPoint },
    Unbounded,
}

/// Branch-and-bound nodes allowed per cap level.
const DUAL_NODE_LIMIT: usize = 20_000;
/// Number of times the dual cap is doubled before giving up.
const DUAL_CAP_ROUNDS: u32 = 3;

/// Solves `max cᵀy` over `P` exactly and searches for an integral optimal
/// dual supported on the rows tight at the optimum found.
pub fn check_tdi_at(c: &[i64], inst: &TwoSystemInstance) -> Result<TdiOutcome> {
    if c.len() != inst.d.arc_count() {
        return Err(Error::input("objective needs one entry per arc"));
    }
    let mut primal = inst.lp(false)?;
    primal.set_objective(c.iter().map(|&v| int(v)).collect())?;
    let (point, value, duals) = match lp::solve(&primal)? {
        LpOutcome::Unbounded => return Ok(TdiOutcome::Unbounded),
        LpOutcome::Infeasible => return Err(Error::Domain("the polyhedron is empty".into())),
        LpOutcome::Optimal { point, value, duals } => (point, value, duals),
    };
    if !value.is_integer() {
        return Ok(TdiOutcome::NoIntegralDual { primal_value: value, point });
    }
    let tight: Vec<usize> = primal.tight_rows(&point.values);
    let max_dual = tight.iter().map(|&r| duals[r].abs()).max().unwrap_or_else(Rational::zero);
    let base_cap = max_dual.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4) + 1;

    let rows: Vec<&lp::Row> = tight.iter().map(|&r| &primal.rows()[r]).collect();
    for round in 0..DUAL_CAP_ROUNDS {
        let cap = base_cap.saturating_mul(1 << round);
        if let Some(z) = integral_dual_search(&rows, c, cap)? {
            let target = value.to_integer().to_i64().ok_or_else(|| Error::internal("dual value overflow"))?;
            let dual = package_dual(&rows, &z, c, target)?;
            return Ok(TdiOutcome::Dual(dual));
        }
    }
    Ok(TdiOutcome::NoIntegralDual { primal_value: value, point })
}

fn package_dual(rows: &[&lp::Row], z: &[i64], c: &[i64], target: i64) -> Result<DualSolution> {
    let mut combo = vec![0i64; c.len()];
    let mut value = 0i64;
    let mut entries = Vec::new();
    for (row, &zr) in rows.iter().zip(z) {
        if zr == 0 {
            continue;
        }
        for (j, a) in &row.coeffs {
            combo[*j] += zr * a.to_integer().to_i64().unwrap_or(0);
        }
        value += zr * row.rhs.to_integer().to_i64().unwrap_or(0);
        if let RowTag::Family { system, set } = row.tag {
            entries.push(DualEntry { system, set, z: zr });
        }
    }
    if combo != c || value != target {
        return Err(Error::internal("integral dual failed re-verification"));
    }
    Ok(DualSolution {
        z: entries,
        mu: None,
        value,
    })
}

/// Integer `z ≥ 0`, `z ≤ cap`, with `Σ z_r·row_r = c`, by depth-first branching
/// on the first fractional coordinate of an exact basic solution.
fn integral_dual_search(rows: &[&lp::Row], c: &[i64], cap: i64) -> Result<Option<Vec<i64>>> {
    let t = rows.len();
    let mut stack: Vec<(Vec<i64>, Vec<i64>)> = vec![(vec![0; t], vec![cap; t])];
    let mut nodes = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        nodes += 1;
        if nodes > DUAL_NODE_LIMIT {
            return Err(Error::Capacity {
                what: "dual search nodes",
                limit: DUAL_NODE_LIMIT,
                actual: nodes,
            });
        }
        let mut lp = LinearProgram::new(t);
        lp.set_objective(vec![int(-1); t])?;
        for (j, &cj) in c.iter().enumerate() {
            let coeffs: Vec<(usize, Rational)> = rows
                .iter()
                .enumerate()
                .filter_map(|(r, row)| row.coeffs.iter().find(|(v, _)| *v == j).map(|(_, a)| (r, a.clone())))
                .collect();
            lp.add_row(coeffs, Relation::Eq, int(cj), RowTag::Named(format!("arc{j}")))?;
        }
        for r in 0..t {
            lp.add_int_row(&[(r, 1)], Relation::Ge, lo[r], RowTag::Lower(r))?;
            lp.add_int_row(&[(r, 1)], Relation::Le, hi[r], RowTag::Upper(r))?;
        }
        let LpOutcome::Optimal { point, .. } = lp::solve(&lp)? else {
            continue;
        };
        match point.values.iter().position(|v| !v.is_integer()) {
            None => return Ok(point.to_integers()),
            Some(r) => {
                let v = &point.values[r];
                let floor = v.floor().to_integer().to_i64().unwrap_or(0);
                let mut up = (lo.clone(), hi.clone());
                up.0[r] = floor + 1;
                let mut down = (lo, hi);
                down.1[r] = floor;
                stack.push(up);
                stack.push(down);
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalVertex {
    pub point: VertexPoint,
    /// Rank of the tight rows, equal to the number of arcs.
    pub rank: usize,
}

/// All fractional vertices of `P ∩ [ℓ, u]`.
pub fn fractional_vertex_search(inst: &TwoSystemInstance) -> Result<Vec<FractionalVertex>> {
    fractional_vertex_search_capped(inst, lp::vertices::DEFAULT_MAX_VARS, lp::vertices::DEFAULT_MAX_ROWS)
}

pub fn fractional_vertex_search_capped(
    inst: &TwoSystemInstance,
    max_vars: usize,
    max_rows: usize,
) -> Result<Vec<FractionalVertex>> {
    let lp = inst.lp(true)?;
    let m = lp.num_vars();
    let mut found = Vec::new();
    for point in lp::vertices::enumerate_vertices_capped(&lp, max_vars, max_rows)? {
        if is_integral(&point) {
            continue;
        }
        let tight: Vec<Vec<Rational>> = lp.tight_rows(&point.values).into_iter().map(|r| lp.rows()[r].dense(m)).collect();
        let rank = linalg::rank(&tight);
        if rank != m || !lp.is_feasible(&point.values) {
            return Err(Error::internal("enumerated vertex failed its rank certificate"));
        }
        found.push(FractionalVertex { point, rank });
    }
    Ok(found)
}

/// Three disjoint arcs `(0,3)`, `(1,4)`, `(2,5)` with the two systems
/// reducing to the pairwise sums `y_a + y_b ≤ 1` over the unit box.
pub fn pairwise_sum_example() -> Result<TwoSystemInstance> {
    let d = Digraph::three_matching();
    let s = |ids: &[usize]| ids.iter().copied().collect::<VertexSet>();
    let f1 = constant(CrossingFamily::explicit(6, [s(&[0, 1]), s(&[0, 1, 2, 3])])?, 1)?;
    let f2 = constant(CrossingFamily::explicit(6, [s(&[0, 1]), s(&[0, 1, 2, 4])])?, 1)?;
    TwoSystemInstance::unit_box(d, f1, f2)
}

/// Rational `1/2`, handy for reporting half-integral points.
pub fn half() -> Rational {
    Rational::new(One::one(), 2.into())
}

/// Whether every coordinate is a non-negative multiple of `1/2`.
pub fn is_half_integral(p: &VertexPoint) -> bool {
    p.values.iter().all(|v| (v * int(2)).is_integer() && !v.is_negative())
}
