//! Integral points of `{x : 1ᵀx = 0, x(U) ≤ fᵢ(U) for U ∈ Cᵢ, i = 1, 2}` and of
//! its faces.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexSet};
use crate::lp::{self, int, is_integral, LexOutcome, LinearProgram, LpOutcome, Relation, RowTag, VertexPoint};
use crate::setfam::SubmodularOracle;

#[derive(Debug, Clone)]
pub struct BaseIntersectionInstance {
    pub f1: SubmodularOracle,
    pub f2: SubmodularOracle,
    /// Members of the first family whose constraint is forced to equality.
    pub d1: Vec<VertexSet>,
    pub d2: Vec<VertexSet>,
    /// Integer vertex weights; the face is the set of maximizers.
    pub objective: Option<Vec<i64>>,
    /// Supplies the isolated cut sets for the precondition check.
    pub digraph: Option<Digraph>,
    /// Lexicographic order; ascending vertex ids when absent.
    pub order: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasePointOutcome {
    Point(VertexPoint),
    Infeasible,
    ObjectiveUnbounded,
}

impl BaseIntersectionInstance {
    pub fn new(f1: SubmodularOracle, f2: SubmodularOracle) -> Result<Self> {
        if f1.n() != f2.n() {
            return Err(Error::input("the two systems have different ground sets"));
        }
        Ok(BaseIntersectionInstance {
            f1,
            f2,
            d1: Vec::new(),
            d2: Vec::new(),
            objective: None,
            digraph: None,
            order: None,
        })
    }

    pub fn n(&self) -> usize {
        self.f1.n()
    }

    pub fn with_face(mut self, d1: Vec<VertexSet>, d2: Vec<VertexSet>) -> Result<Self> {
        for (d, f) in [(&d1, &self.f1), (&d2, &self.f2)] {
            if let Some(u) = d.iter().find(|&&u| f.value(u).is_none()) {
                return Err(Error::input(format!("face set {u} is not a member of its family")));
            }
        }
        self.d1 = d1;
        self.d2 = d2;
        Ok(self)
    }

    pub fn with_objective(mut self, w: Vec<i64>) -> Result<Self> {
        if w.len() != self.n() {
            return Err(Error::input("vertex objective needs one entry per vertex"));
        }
        self.objective = Some(w);
        Ok(self)
    }

    pub fn with_digraph(mut self, d: Digraph) -> Result<Self> {
        if d.n() != self.n() {
            return Err(Error::input("digraph and families have different ground sets"));
        }
        self.digraph = Some(d);
        Ok(self)
    }

    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..self.n()).collect::<Vec<_>>() {
            return Err(Error::input("order must be a permutation of the vertices"));
        }
        self.order = Some(order);
        Ok(self)
    }

    /// `min(f1(U), f2(U))`, `None` when `U` is in neither family.
    pub fn min_value(&self, u: VertexSet) -> Option<i64> {
        match (self.f1.value(u), self.f2.value(u)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// First isolated cut set with `min(f1, f2) > 0`, if any.
    pub fn precondition_violation(&self) -> Result<Option<VertexSet>> {
        let Some(d) = &self.digraph else {
            return Ok(None);
        };
        Ok(d.isolated_cut_sets()?
            .into_iter()
            .find(|&u| self.min_value(u).is_none_or(|v| v > 0)))
    }

    /// Largest absolute function value over both families.
    pub fn max_abs_value(&self) -> Result<i64> {
        let mut m = 0i64;
        for f in [&self.f1, &self.f2] {
            for (_, v) in f.entries()? {
                m = m.max(v.abs());
            }
        }
        Ok(m)
    }
}

/// One row per family member (equality on the face sets) plus `1ᵀx = 0`.
pub fn build_lp(inst: &BaseIntersectionInstance) -> Result<LinearProgram> {
    let n = inst.n();
    let mut lp = LinearProgram::new(n);
    for (system, f, face) in [(1u8, &inst.f1, &inst.d1), (2u8, &inst.f2, &inst.d2)] {
        for (set, value) in f.entries()? {
            let relation = if face.contains(&set) { Relation::Eq } else { Relation::Le };
            let coeffs: Vec<(usize, i64)> = set.iter().map(|v| (v, 1)).collect();
            lp.add_int_row(&coeffs, relation, value, RowTag::Family { system, set })?;
        }
    }
    let all: Vec<(usize, i64)> = (0..n).map(|v| (v, 1)).collect();
    lp.add_int_row(&all, Relation::Eq, 0, RowTag::Balance)?;
    Ok(lp)
}

/// Box half-width used when a lexicographic stage is unbounded.
pub fn box_bound(inst: &BaseIntersectionInstance) -> Result<i64> {
    let scale = 1i64.checked_shl(inst.n() as u32).unwrap_or(i64::MAX);
    Ok(inst.max_abs_value()?.saturating_mul(scale).saturating_add(1))
}

/// Integral point of the base polyhedron (or of the requested face), found as
/// the lexicographic maximum.
pub fn integral_base_point(inst: &BaseIntersectionInstance) -> Result<BasePointOutcome> {
    if let Some(set) = inst.precondition_violation()? {
        return Err(Error::PreconditionViolated { set });
    }
    let n = inst.n();
    let base = build_lp(inst)?;
    let mut lp = base.clone();
    if let Some(w) = &inst.objective {
        lp.set_objective(w.iter().map(|&v| int(v)).collect())?;
        let best = match lp::solve(&lp)? {
            LpOutcome::Infeasible => return Ok(BasePointOutcome::Infeasible),
            LpOutcome::Unbounded => return Ok(BasePointOutcome::ObjectiveUnbounded),
            LpOutcome::Optimal { value, .. } => value,
        };
        let coeffs = w.iter().enumerate().filter(|(_, &c)| c != 0).map(|(v, &c)| (v, int(c))).collect();
        lp.add_row(coeffs, Relation::Eq, best, RowTag::Objective)?;
    }
    let order = inst.order.clone().unwrap_or_else(|| (0..n).collect());

    let mut outcome = lp::lex_maximize(&lp, &order)?;
    if let LexOutcome::Unbounded { .. } = outcome {
        let b = box_bound(inst)?;
        for v in 0..n {
            lp.add_int_row(&[(v, 1)], Relation::Ge, -b, RowTag::Lower(v))?;
            lp.add_int_row(&[(v, 1)], Relation::Le, b, RowTag::Upper(v))?;
        }
        outcome = lp::lex_maximize(&lp, &order)?;
    }
    let point = match outcome {
        LexOutcome::Point(p) => p,
        LexOutcome::Infeasible { .. } => return Ok(BasePointOutcome::Infeasible),
        LexOutcome::Unbounded { stage } => {
            return Err(Error::internal(format!("lexicographic stage {stage} unbounded inside a box")))
        }
    };
    if !is_integral(&point) {
        return Err(Error::internal(format!(
            "base polyhedron face has a fractional lexicographic maximum {:?}",
            point.values.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        )));
    }
    if !base.is_feasible(&point.values) {
        return Err(Error::internal("base point violates a family row"));
    }
    Ok(BasePointOutcome::Point(base.point(point.values)))
}

/// Whether the zero vector lies in the requested face of the base polyhedron.
pub fn zero_in_face(inst: &BaseIntersectionInstance) -> Result<bool> {
    let zero = vec![lp::Rational::zero(); inst.n()];
    if !build_lp(inst)?.is_feasible(&zero) {
        return Ok(false);
    }
    let Some(w) = &inst.objective else {
        return Ok(true);
    };
    let mut lp = build_lp(inst)?;
    lp.set_objective(w.iter().map(|&v| int(v)).collect())?;
    Ok(matches!(lp::solve(&lp)?, LpOutcome::Optimal { value, .. } if value.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::{all_proper, constant, table, CrossingFamily};

    fn both_all_proper_one(n: usize) -> BaseIntersectionInstance {
        let f = constant(all_proper(n).unwrap(), 1).unwrap();
        BaseIntersectionInstance::new(f.clone(), f).unwrap()
    }

    fn point(out: BasePointOutcome) -> Vec<i64> {
        match out {
            BasePointOutcome::Point(p) => p.to_integers().unwrap(),
            other => panic!("expected a point, got {other:?}"),
        }
    }

    #[test]
    fn two_vertex_rows() {
        let lp = build_lp(&both_all_proper_one(2)).unwrap();
        assert_eq!(lp.rows().len(), 5);
        assert_eq!(lp.rows()[4].tag, RowTag::Balance);
    }

    #[test]
    fn empty_families_give_balance_only() {
        let f = constant(CrossingFamily::empty(3), 0).unwrap();
        let inst = BaseIntersectionInstance::new(f.clone(), f).unwrap();
        assert_eq!(build_lp(&inst).unwrap().rows().len(), 1);
        let b = point(integral_base_point(&inst).unwrap());
        assert_eq!(b.iter().sum::<i64>(), 0);
    }

    #[test]
    fn lex_max_segment() {
        assert_eq!(point(integral_base_point(&both_all_proper_one(2)).unwrap()), vec![1, -1]);
        let fam = all_proper(2).unwrap();
        let f1 = table(
            fam.clone(),
            [(VertexSet::singleton(0), 0), (VertexSet::singleton(1), 1)].into_iter().collect(),
        )
        .unwrap();
        let f2 = constant(fam, 1).unwrap();
        let inst = BaseIntersectionInstance::new(f1, f2).unwrap();
        assert_eq!(point(integral_base_point(&inst).unwrap()), vec![0, 0]);
    }

    #[test]
    fn isolated_components_violate_precondition() {
        let d = Digraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let comp: VertexSet = [0, 1].into_iter().collect();
        let fam = CrossingFamily::explicit(4, [comp, comp.complement(4)]).unwrap();
        let f = constant(fam, 1).unwrap();
        let inst = BaseIntersectionInstance::new(f.clone(), f).unwrap().with_digraph(d).unwrap();
        assert!(matches!(integral_base_point(&inst), Err(Error::PreconditionViolated { .. })));
    }

    #[test]
    fn face_and_objective() {
        let inst = both_all_proper_one(3)
            .with_face(vec![VertexSet::singleton(2)], vec![])
            .unwrap();
        let b = point(integral_base_point(&inst).unwrap());
        assert_eq!(b[2], 1);
        let inst = both_all_proper_one(3).with_objective(vec![0, 0, -1]).unwrap();
        let b = point(integral_base_point(&inst).unwrap());
        assert_eq!(b[2], -1);
        let f = constant(CrossingFamily::empty(2), 0).unwrap();
        let free = BaseIntersectionInstance::new(f.clone(), f).unwrap().with_objective(vec![1, 0]).unwrap();
        assert_eq!(integral_base_point(&free).unwrap(), BasePointOutcome::ObjectiveUnbounded);
    }

    #[test]
    fn other_order_still_feasible() {
        let inst = both_all_proper_one(3).with_order(vec![2, 1, 0]).unwrap();
        let b = point(integral_base_point(&inst).unwrap());
        assert_eq!(b.iter().sum::<i64>(), 0);
        assert!(b.iter().all(|&x| x <= 1));
        assert_eq!(b[2], 1);
    }
}
