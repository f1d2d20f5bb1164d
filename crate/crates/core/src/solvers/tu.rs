//! The same pipeline with the incidence matrix replaced by an arbitrary totally
//! unimodular matrix whose columns sum to zero.

use crate::base_point::{integral_base_point, zero_in_face, BaseIntersectionInstance, BasePointOutcome};
use crate::error::{check_cap, Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::lp::{self, linalg, LinearProgram, LpOutcome, Relation, RowTag};
use crate::setfam::SubmodularOracle;
use crate::ENUMERATION_CAP;

use super::TwoSystemOutcome;

/// Largest square submatrix inspected by the determinant check.
pub const TU_CHECK_CAP: usize = 6;

/// Rows of `m` are indexed by the ground set, columns by the variables.
#[derive(Debug, Clone)]
pub struct TuInstance {
    pub m: Vec<Vec<i64>>,
    pub trust_tu: bool,
    pub f1: SubmodularOracle,
    pub f2: SubmodularOracle,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
}

impl TuInstance {
    pub fn rows(&self) -> usize {
        self.m.len()
    }

    pub fn cols(&self) -> usize {
        self.m.first().map_or(0, |r| r.len())
    }

    pub fn validate(&self) -> Result<()> {
        let (n, p) = (self.rows(), self.cols());
        if self.m.iter().any(|r| r.len() != p) {
            return Err(Error::input("matrix rows have different lengths"));
        }
        if self.f1.n() != n || self.f2.n() != n {
            return Err(Error::input("families and matrix rows have different ground sets"));
        }
        if self.lower.len() != p || self.upper.len() != p {
            return Err(Error::input(format!("bounds need one entry per column ({p})")));
        }
        for j in 0..p {
            if let (Some(l), Some(u)) = (self.lower[j], self.upper[j]) {
                if l > u {
                    return Err(Error::input(format!("column {j} has lower bound {l} > upper bound {u}")));
                }
            }
            if (0..n).map(|i| self.m[i][j]).sum::<i64>() != 0 {
                return Err(Error::input(format!("column {j} does not sum to zero")));
            }
        }
        Ok(())
    }

    /// `Mᵀχ_U`.
    pub fn cut_vector(&self, u: VertexSet) -> Vec<i64> {
        (0..self.cols()).map(|j| u.iter().map(|i| self.m[i][j]).sum()).collect()
    }

    /// `u·(Mᵀχ_U)⁺ − ℓ·(Mᵀχ_U)⁻` with `r⁻ = max(−r, 0)`; `None` for +∞.
    pub fn cut_capacity(&self, u: VertexSet) -> Option<i64> {
        let mut cap = 0i64;
        for (j, r) in self.cut_vector(u).into_iter().enumerate() {
            if r > 0 {
                cap += r * self.upper[j]?;
            } else if r < 0 {
                cap += r * self.lower[j]?;
            }
        }
        Some(cap)
    }

    pub fn min_value(&self, u: VertexSet) -> Option<i64> {
        match (self.f1.value(u), self.f2.value(u)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn violates_cut_condition(&self, u: VertexSet) -> bool {
        match (self.min_value(u), self.cut_capacity(u)) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(f), Some(c)) => f > c,
        }
    }

    /// Sets with `Mᵀχ_U = 0` and `min(f1, f2) > 0`.
    pub fn precondition_violation(&self) -> Result<Option<VertexSet>> {
        check_cap("vertex count", self.rows(), ENUMERATION_CAP)?;
        Ok(VertexSet::proper_subsets(self.rows())
            .find(|&u| self.cut_vector(u).iter().all(|&r| r == 0) && self.min_value(u).is_none_or(|v| v > 0)))
    }
}

/// Node-arc incidence matrix: `+1` at the tail, `−1` at the head.
pub fn incidence_matrix(d: &Digraph) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; d.arc_count()]; d.n()];
    for (a, &(t, h)) in d.arcs().iter().enumerate() {
        m[t][a] = 1;
        m[h][a] = -1;
    }
    m
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// First square submatrix of size at most `max_size` whose determinant is
/// outside `{−1, 0, 1}`, scanning sizes in increasing order.
pub fn find_non_tu_submatrix(m: &[Vec<i64>], max_size: usize) -> Option<(Vec<usize>, Vec<usize>, i64)> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    for size in 1..=max_size.min(rows).min(cols) {
        let col_sets = combinations(cols, size);
        for rs in combinations(rows, size) {
            for cs in &col_sets {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                let det = linalg::det_i64(&sub);
                if det.abs() > 1 {
                    return Some((rs.clone(), cs.clone(), det));
                }
            }
        }
    }
    None
}

/// Refuses matrices that are not TU, or too large to check unless trusted.
pub fn check_tu(m: &[Vec<i64>], trust: bool) -> Result<()> {
    if trust {
        return Ok(());
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if let Some((i, j)) = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).find(|&(i, j)| m[i][j].abs() > 1) {
        return Err(Error::NotTu {
            rows: vec![i],
            cols: vec![j],
            det: m[i][j],
        });
    }
    check_cap("matrix order for the determinant check", rows.min(cols), TU_CHECK_CAP)?;
    match find_non_tu_submatrix(m, TU_CHECK_CAP) {
        Some((rows, cols, det)) => Err(Error::NotTu { rows, cols, det }),
        None => Ok(()),
    }
}

/// Integral `y` with `ℓ ≤ y ≤ u` and `(My)(U) ≤ fᵢ(U)` on both families, or a
/// set violating the generalized cut condition.
pub fn solve_tu_generalization(inst: &TuInstance) -> Result<TwoSystemOutcome> {
    inst.validate()?;
    check_tu(&inst.m, inst.trust_tu)?;
    if let Some(set) = inst.precondition_violation()? {
        return Err(Error::PreconditionViolated { set });
    }
    let (n, p) = (inst.rows(), inst.cols());
    let base = BaseIntersectionInstance::new(inst.f1.clone(), inst.f2.clone())?;
    let b = if zero_in_face(&base)? {
        vec![0; n]
    } else {
        match integral_base_point(&base)? {
            BasePointOutcome::Point(pt) => pt.to_integers().ok_or_else(|| Error::internal("base point not integral"))?,
            BasePointOutcome::Infeasible => return Ok(TwoSystemOutcome::Infeasible),
            BasePointOutcome::ObjectiveUnbounded => return Ok(TwoSystemOutcome::Unbounded),
        }
    };

    let mut lp = LinearProgram::new(p);
    for (i, row) in inst.m.iter().enumerate() {
        let coeffs: Vec<(usize, i64)> = row.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect();
        lp.add_int_row(&coeffs, Relation::Eq, b[i], RowTag::Named(format!("row{i}")))?;
    }
    for j in 0..p {
        if let Some(l) = inst.lower[j] {
            lp.add_int_row(&[(j, 1)], Relation::Ge, l, RowTag::Lower(j))?;
        }
        if let Some(u) = inst.upper[j] {
            lp.add_int_row(&[(j, 1)], Relation::Le, u, RowTag::Upper(j))?;
        }
    }
    match lp::solve(&lp)? {
        LpOutcome::Optimal { point, .. } => {
            let y = point
                .to_integers()
                .ok_or_else(|| Error::internal("basic solution of a TU system is fractional"))?;
            for (system, f) in [(1u8, &inst.f1), (2u8, &inst.f2)] {
                for (u, value) in f.entries()? {
                    let lhs: i64 = inst.cut_vector(u).iter().zip(&y).map(|(r, v)| r * v).sum();
                    if lhs > value {
                        return Err(Error::internal(format!("solution violates system {system} at {u}")));
                    }
                }
            }
            Ok(TwoSystemOutcome::Integral(y))
        }
        LpOutcome::Unbounded => Err(Error::internal("zero objective reported unbounded")),
        LpOutcome::Infeasible => {
            check_cap("vertex count", n, ENUMERATION_CAP)?;
            let found = VertexSet::proper_subsets(n).find(|&u| {
                let bu: i64 = u.iter().map(|v| b[v]).sum();
                inst.cut_capacity(u).is_some_and(|cap| bu > cap)
            });
            match found {
                Some(u) if inst.violates_cut_condition(u) => Ok(TwoSystemOutcome::ViolatingSet(u)),
                _ => Err(Error::internal("infeasible TU system without a violated cut")),
            }
        }
    }
}
