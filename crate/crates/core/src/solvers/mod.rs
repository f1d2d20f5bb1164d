//! Integral points of the intersection of two submodular flow systems, and the
//! orientation and dijoin results built on them.

pub mod flips;
pub mod tu;

pub use flips::*;
pub use tu::*;

use std::collections::VecDeque;

use crate::base_point::{integral_base_point, zero_in_face, BaseIntersectionInstance, BasePointOutcome};
use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::lp::{int, LinearProgram, Relation, RowTag};
use crate::setfam::SubmodularOracle;
use crate::transshipment::{solve_transshipment, TransshipmentInstance, TransshipmentOutcome};

/// `P = {y : y(δ⁺(U)) − y(δ⁻(U)) ≤ fᵢ(U), U ∈ Cᵢ}` with bounds `ℓ ≤ y ≤ u`
/// and an optional arc objective whose optimal face is the target.
#[derive(Debug, Clone)]
pub struct TwoSystemInstance {
    pub d: Digraph,
    pub f1: SubmodularOracle,
    pub f2: SubmodularOracle,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
    pub objective: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoSystemOutcome {
    Integral(Vec<i64>),
    /// `U` with `min(f1(U), f2(U)) > u(δ⁺(U)) − ℓ(δ⁻(U))`.
    ViolatingSet(VertexSet),
    Infeasible,
    /// The objective is unbounded over `P`, so the face is empty.
    Unbounded,
}

impl TwoSystemInstance {
    pub fn new(
        d: Digraph,
        f1: SubmodularOracle,
        f2: SubmodularOracle,
        lower: Vec<Option<i64>>,
        upper: Vec<Option<i64>>,
    ) -> Result<Self> {
        let inst = TwoSystemInstance {
            d,
            f1,
            f2,
            lower,
            upper,
            objective: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Bounds `0 ≤ y ≤ 1` on every arc.
    pub fn unit_box(d: Digraph, f1: SubmodularOracle, f2: SubmodularOracle) -> Result<Self> {
        let m = d.arc_count();
        Self::new(d, f1, f2, vec![Some(0); m], vec![Some(1); m])
    }

    /// No bounds at all.
    pub fn unbounded(d: Digraph, f1: SubmodularOracle, f2: SubmodularOracle) -> Result<Self> {
        let m = d.arc_count();
        Self::new(d, f1, f2, vec![None; m], vec![None; m])
    }

    pub fn with_objective(mut self, c: Vec<i64>) -> Result<Self> {
        if c.len() != self.d.arc_count() {
            return Err(Error::input("arc objective needs one entry per arc"));
        }
        self.objective = Some(c);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.d.n(), self.d.arc_count());
        if self.f1.n() != n || self.f2.n() != n {
            return Err(Error::input("families and digraph have different ground sets"));
        }
        if self.lower.len() != m || self.upper.len() != m {
            return Err(Error::input(format!("bounds need one entry per arc ({m})")));
        }
        for a in 0..m {
            if let (Some(l), Some(u)) = (self.lower[a], self.upper[a]) {
                if l > u {
                    return Err(Error::input(format!("arc {a} has lower bound {l} > upper bound {u}")));
                }
            }
        }
        Ok(())
    }

    pub fn min_value(&self, u: VertexSet) -> Option<i64> {
        match (self.f1.value(u), self.f2.value(u)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// `u(δ⁺(U)) − ℓ(δ⁻(U))`, `None` for +∞.
    pub fn cut_capacity(&self, u: VertexSet) -> Option<i64> {
        let (out, inn) = self.d.delta(u);
        let mut cap = 0i64;
        for a in out.iter() {
            cap += self.upper[a]?;
        }
        for a in inn.iter() {
            cap -= self.lower[a]?;
        }
        Some(cap)
    }

    pub fn violates_cut_condition(&self, u: VertexSet) -> bool {
        match (self.min_value(u), self.cut_capacity(u)) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(f), Some(c)) => f > c,
        }
    }

    /// First set violating the cut condition, by enumeration.
    pub fn cut_condition_violation(&self) -> Result<Option<VertexSet>> {
        crate::error::check_cap("vertex count", self.d.n(), crate::ENUMERATION_CAP)?;
        Ok(VertexSet::proper_subsets(self.d.n()).find(|&u| self.violates_cut_condition(u)))
    }

    /// First `(system, U)` whose inequality `y` violates.
    pub fn system_violation(&self, y: &[i64]) -> Result<Option<(u8, VertexSet)>> {
        for (system, f) in [(1u8, &self.f1), (2u8, &self.f2)] {
            for (u, value) in f.entries()? {
                if self.d.net_out(y, u) > value {
                    return Ok(Some((system, u)));
                }
            }
        }
        Ok(None)
    }

    pub fn within_bounds(&self, y: &[i64]) -> bool {
        y.len() == self.d.arc_count()
            && (0..y.len()).all(|a| self.lower[a].is_none_or(|l| l <= y[a]) && self.upper[a].is_none_or(|u| y[a] <= u))
    }

    /// The exact program over arc variables: one row per family member, box
    /// rows for finite bounds when `with_box`, objective `c` (or zero).
    pub fn lp(&self, with_box: bool) -> Result<LinearProgram> {
        let m = self.d.arc_count();
        let mut lp = LinearProgram::new(m);
        for (system, f) in [(1u8, &self.f1), (2u8, &self.f2)] {
            for (set, value) in f.entries()? {
                let (out, inn) = self.d.delta(set);
                let coeffs: Vec<(usize, i64)> = out.iter().map(|a| (a, 1)).chain(inn.iter().map(|a| (a, -1))).collect();
                lp.add_int_row(&coeffs, Relation::Le, value, RowTag::Family { system, set })?;
            }
        }
        if with_box {
            for a in 0..m {
                if let Some(l) = self.lower[a] {
                    lp.add_int_row(&[(a, 1)], Relation::Ge, l, RowTag::Lower(a))?;
                }
                if let Some(u) = self.upper[a] {
                    lp.add_int_row(&[(a, 1)], Relation::Le, u, RowTag::Upper(a))?;
                }
            }
        }
        if let Some(c) = &self.objective {
            lp.set_objective(c.iter().map(|&v| int(v)).collect())?;
        }
        Ok(lp)
    }
}

/// Integer vertex potentials `w` with `w_tail − w_head = c_a` on every arc,
/// zero at the smallest vertex of each weak component.
pub fn potentials(d: &Digraph, c: &[i64]) -> Result<Vec<i64>> {
    if c.len() != d.arc_count() {
        return Err(Error::input("arc objective needs one entry per arc"));
    }
    let n = d.n();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (a, &(t, h)) in d.arcs().iter().enumerate() {
        adj[t].push((a, h));
        adj[h].push((a, t));
    }
    let mut w: Vec<Option<i64>> = vec![None; n];
    for root in 0..n {
        if w[root].is_some() {
            continue;
        }
        w[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let wv = w[v].expect("queued vertices have potentials");
            for &(a, other) in &adj[v] {
                let (t, _) = d.arc(a);
                let want = if t == v { wv - c[a] } else { wv + c[a] };
                match w[other] {
                    None => {
                        w[other] = Some(want);
                        queue.push_back(other);
                    }
                    Some(x) if x != want => return Err(Error::ObjectiveNotRealizable { arc: a }),
                    Some(_) => {}
                }
            }
        }
    }
    Ok(w.into_iter().map(|x| x.expect("every vertex visited")).collect())
}

/// Integral point of the (optimal face of the) intersection within the bounds,
/// or a set violating the cut condition.
pub fn solve_two_systems(inst: &TwoSystemInstance) -> Result<TwoSystemOutcome> {
    inst.validate()?;
    let n = inst.d.n();
    let w = match &inst.objective {
        Some(c) if c.iter().any(|&x| x != 0) => Some(potentials(&inst.d, c)?),
        _ => None,
    };
    let mut base = BaseIntersectionInstance::new(inst.f1.clone(), inst.f2.clone())?.with_digraph(inst.d.clone())?;
    if let Some(w) = &w {
        base = base.with_objective(w.clone())?;
    }
    if let Some(set) = base.precondition_violation()? {
        return Err(Error::PreconditionViolated { set });
    }
    let b = if zero_in_face(&base)? {
        vec![0; n]
    } else {
        match integral_base_point(&base)? {
            BasePointOutcome::Point(p) => p.to_integers().ok_or_else(|| Error::internal("base point not integral"))?,
            BasePointOutcome::Infeasible => return Ok(TwoSystemOutcome::Infeasible),
            BasePointOutcome::ObjectiveUnbounded => return Ok(TwoSystemOutcome::Unbounded),
        }
    };

    let flow = TransshipmentInstance::new(inst.d.clone(), b.clone(), inst.lower.clone(), inst.upper.clone())?;
    match solve_transshipment(&flow)? {
        TransshipmentOutcome::Flow(y) => {
            if !inst.within_bounds(&y) {
                return Err(Error::internal("solution violates the bounds"));
            }
            if let Some((system, u)) = inst.system_violation(&y)? {
                return Err(Error::internal(format!("solution violates system {system} at {u}")));
            }
            if let (Some(c), Some(w)) = (&inst.objective, &w) {
                let cy: i64 = c.iter().zip(&y).map(|(a, b)| a * b).sum();
                let wb: i64 = w.iter().zip(&b).map(|(a, b)| a * b).sum();
                if cy != wb {
                    return Err(Error::internal("solution is not on the optimal face"));
                }
            }
            Ok(TwoSystemOutcome::Integral(y))
        }
        TransshipmentOutcome::ViolatingSet(u) => {
            if !inst.violates_cut_condition(u) {
                return Err(Error::internal(format!("transshipment cut {u} does not violate the cut condition")));
            }
            Ok(TwoSystemOutcome::ViolatingSet(u))
        }
    }
}
