//! Exact rational linear programming.

pub mod linalg;
mod simplex;
pub mod vertices;

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::VertexSet;

pub use vertices::enumerate_vertices;

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// Where a row came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowTag {
    Family { system: u8, set: VertexSet },
    Balance,
    Lower(usize),
    Upper(usize),
    Objective,
    Named(String),
}

impl fmt::Display for RowTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowTag::Family { system, set } => write!(f, "f{system}{set}"),
            RowTag::Balance => write!(f, "balance"),
            RowTag::Lower(j) => write!(f, "lower[{j}]"),
            RowTag::Upper(j) => write!(f, "upper[{j}]"),
            RowTag::Objective => write!(f, "objective"),
            RowTag::Named(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
    pub tag: RowTag,
}

impl Row {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn satisfied(&self, x: &[Rational]) -> bool {
        let v = self.lhs(x);
        match self.relation {
            Relation::Le => v <= self.rhs,
            Relation::Ge => v >= self.rhs,
            Relation::Eq => v == self.rhs,
        }
    }

    pub fn is_tight(&self, x: &[Rational]) -> bool {
        self.lhs(x) == self.rhs
    }

    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (j, a) in &self.coeffs {
            v[*j] += a;
        }
        v
    }
}

/// `max objective·x` subject to the rows; variables are free.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Row>,
    objective: Vec<Rational>,
    tags: HashSet<RowTag>,
}

impl Eq for LinearProgram {}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            rows: Vec::new(),
            objective: vec![Rational::zero(); num_vars],
            tags: HashSet::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational, tag: RowTag) -> Result<()> {
        if let Some((j, _)) = coeffs.iter().find(|(j, _)| *j >= self.num_vars) {
            return Err(Error::input(format!("row {tag} references undeclared variable {j}")));
        }
        if !self.tags.insert(tag.clone()) {
            return Err(Error::input(format!("duplicate row tag {tag}")));
        }
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
            tag,
        });
        Ok(())
    }

    /// Integer-coefficient convenience wrapper around [`add_row`](Self::add_row).
    pub fn add_int_row(&mut self, coeffs: &[(usize, i64)], relation: Relation, rhs: i64, tag: RowTag) -> Result<()> {
        self.add_row(coeffs.iter().map(|&(j, a)| (j, int(a))).collect(), relation, int(rhs), tag)
    }

    pub fn set_objective(&mut self, c: Vec<Rational>) -> Result<()> {
        if c.len() != self.num_vars {
            return Err(Error::input("objective length differs from the number of variables"));
        }
        self.objective = c;
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars && self.rows.iter().all(|r| r.satisfied(x))
    }

    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.rows.len()).filter(|&i| self.rows[i].is_tight(x)).collect()
    }

    /// Rank of the coefficient vectors of the rows tight at `x`.
    pub fn tight_rank(&self, x: &[Rational]) -> usize {
        let dense: Vec<Vec<Rational>> = self.tight_rows(x).into_iter().map(|i| self.rows[i].dense(self.num_vars)).collect();
        linalg::rank(&dense)
    }

    /// Packages `x` as a point of this program.
    pub fn point(&self, x: Vec<Rational>) -> VertexPoint {
        let tight = self.tight_rows(&x);
        let dense: Vec<Vec<Rational>> = tight.iter().map(|&i| self.rows[i].dense(self.num_vars)).collect();
        VertexPoint {
            basis_rank: linalg::rank(&dense),
            tight_rows: tight.into_iter().map(|i| self.rows[i].tag.clone()).collect(),
            values: x,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPoint {
    pub values: Vec<Rational>,
    pub tight_rows: Vec<RowTag>,
    pub basis_rank: usize,
}

impl VertexPoint {
    pub fn is_vertex(&self) -> bool {
        self.basis_rank == self.values.len()
    }

    /// Coordinates as integers when all are integral.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| if v.is_integer() { i64::try_from(v.to_integer()).ok() } else { None })
            .collect()
    }
}

pub fn is_integral(p: &VertexPoint) -> bool {
    p.values.iter().all(|v| v.denom().is_one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// `duals[i]` belongs to row `i`: non-negative on `≤` rows, non-positive on
    /// `≥` rows, free on `=` rows, with `Σ duals[i]·row_i = objective`.
    Optimal {
        point: VertexPoint,
        value: Rational,
        duals: Vec<Rational>,
    },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn point(&self) -> Option<&VertexPoint> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Solves the program with Bland's rule. The optimum is a basic solution and a
/// vertex whenever the feasible region is pointed.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    simplex::solve(lp, None)
}

/// Like [`solve`], also returning the sequence of bases visited per phase.
pub fn solve_logged(lp: &LinearProgram) -> Result<(LpOutcome, Vec<Vec<Vec<usize>>>)> {
    let mut log = Vec::new();
    let out = simplex::solve(lp, Some(&mut log))?;
    Ok((out, log))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexOutcome {
    Point(VertexPoint),
    Infeasible { stage: usize },
    Unbounded { stage: usize },
}

/// Lexicographically maximal feasible point for the given variable order:
/// maximize the first variable, fix it, and continue.
pub fn lex_maximize(lp: &LinearProgram, order: &[usize]) -> Result<LexOutcome> {
    if let Some(&j) = order.iter().find(|&&j| j >= lp.num_vars()) {
        return Err(Error::input(format!("order names undeclared variable {j}")));
    }
    let mut work = lp.clone();
    let mut last = None;
    for (stage, &j) in order.iter().enumerate() {
        let mut c = vec![Rational::zero(); lp.num_vars()];
        c[j] = Rational::one();
        work.set_objective(c)?;
        match solve(&work)? {
            LpOutcome::Infeasible => return Ok(LexOutcome::Infeasible { stage }),
            LpOutcome::Unbounded => return Ok(LexOutcome::Unbounded { stage }),
            LpOutcome::Optimal { point, value, .. } => {
                work.add_row(vec![(j, Rational::one())], Relation::Eq, value, RowTag::Named(format!("lex:{stage}")))?;
                last = Some(point.values);
            }
        }
    }
    let x = match last {
        Some(x) => x,
        None => {
            work.set_objective(vec![Rational::zero(); lp.num_vars()])?;
            match solve(&work)? {
                LpOutcome::Optimal { point, .. } => point.values,
                _ => return Ok(LexOutcome::Infeasible { stage: 0 }),
            }
        }
    };
    if !lp.is_feasible(&x) {
        return Err(Error::internal("lexicographic maximum is infeasible"));
    }
    Ok(LexOutcome::Point(lp.point(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_sums() -> LinearProgram {
        let mut lp = LinearProgram::new(3);
        for (i, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            lp.add_int_row(&[(a, 1), (b, 1)], Relation::Le, 1, RowTag::Named(format!("pair{i}"))).unwrap();
        }
        for j in 0..3 {
            lp.add_int_row(&[(j, 1)], Relation::Ge, 0, RowTag::Lower(j)).unwrap();
        }
        lp
    }

    #[test]
    fn half_integral_optimum() {
        let mut lp = pair_sums();
        lp.set_objective(vec![int(1), int(1), int(1)]).unwrap();
        let LpOutcome::Optimal { point, value, duals } = solve(&lp).unwrap() else {
            panic!("expected optimum");
        };
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(value, &half * int(3));
        assert_eq!(point.values, vec![half.clone(), half.clone(), half.clone()]);
        assert!(point.is_vertex());
        assert!(!is_integral(&point));
        let dual_value: Rational = duals.iter().zip(lp.rows()).map(|(z, r)| z * &r.rhs).sum();
        assert_eq!(dual_value, value);
    }

    #[test]
    fn trivial_outcomes() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![int(1)]).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
        lp.add_int_row(&[(0, 1)], Relation::Le, 0, RowTag::Upper(0)).unwrap();
        let out = solve(&lp).unwrap();
        assert_eq!(out.point().unwrap().values, vec![int(0)]);
        lp.add_int_row(&[(0, 1)], Relation::Ge, 1, RowTag::Lower(0)).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn zero_objective_without_rows() {
        let lp = LinearProgram::new(2);
        assert_eq!(solve(&lp).unwrap().point().unwrap().values, vec![int(0), int(0)]);
    }

    #[test]
    fn duplicate_tags_rejected() {
        let mut lp = LinearProgram::new(1);
        lp.add_int_row(&[(0, 1)], Relation::Le, 0, RowTag::Upper(0)).unwrap();
        assert!(lp.add_int_row(&[(0, 1)], Relation::Le, 1, RowTag::Upper(0)).is_err());
        assert!(lp.add_int_row(&[(3, 1)], Relation::Le, 1, RowTag::Upper(3)).is_err());
    }

    #[test]
    fn lex_on_segment() {
        let mut lp = LinearProgram::new(2);
        lp.add_int_row(&[(0, 1), (1, 1)], Relation::Eq, 0, RowTag::Balance).unwrap();
        lp.add_int_row(&[(0, 1)], Relation::Le, 1, RowTag::Upper(0)).unwrap();
        lp.add_int_row(&[(1, 1)], Relation::Le, 1, RowTag::Upper(1)).unwrap();
        let LexOutcome::Point(p) = lex_maximize(&lp, &[0, 1]).unwrap() else {
            panic!("expected point");
        };
        assert_eq!(p.values, vec![int(1), int(-1)]);
        assert!(p.is_vertex());
        assert_eq!(lex_maximize(&lp, &[0, 1]).unwrap(), LexOutcome::Point(p));
    }

    #[test]
    fn lex_on_pair_sums_box() {
        let mut lp = pair_sums();
        for j in 0..3 {
            lp.add_int_row(&[(j, 1)], Relation::Le, 1, RowTag::Upper(j)).unwrap();
        }
        let LexOutcome::Point(p) = lex_maximize(&lp, &[0, 1, 2]).unwrap() else {
            panic!("expected point");
        };
        assert_eq!(p.values, vec![int(1), int(0), int(0)]);
        assert!(p.is_vertex());
    }

    #[test]
    fn lex_reports_stage() {
        let mut lp = LinearProgram::new(2);
        lp.add_int_row(&[(0, 1)], Relation::Le, 1, RowTag::Upper(0)).unwrap();
        assert_eq!(lex_maximize(&lp, &[0, 1]).unwrap(), LexOutcome::Unbounded { stage: 1 });
    }

    #[test]
    fn bland_never_repeats_a_basis() {
        let mut lp = pair_sums();
        lp.set_objective(vec![int(1), int(2), int(1)]).unwrap();
        let (_, log) = solve_logged(&lp).unwrap();
        for phase in log {
            let mut seen = HashSet::new();
            for b in phase {
                assert!(seen.insert(b));
            }
        }
    }
}
