//! Two-phase simplex on the dual `min bᵀz, Aᵀz = c, z ≥ 0` of `max cᵀx, Ax ≤ b`.
//! The tableau has one row per primal variable, so it stays small when the
//! program has many constraints and few variables. The primal solution is read
//! off as the simplex multipliers of the final basis.

use num_traits::{One, Signed, Zero};

use super::{LinearProgram, LpOutcome, Rational, Relation};
use crate::error::{Error, Result};

type Log<'a> = Option<&'a mut Vec<Vec<Vec<usize>>>>;

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let lead = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x / &lead;
            }
        }
        self.rhs[r] = &self.rhs[r] / &lead;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                d -= &cost[b] * &self.rows[i][j];
            }
        }
        d
    }

    /// Minimizes `cost` over columns `< allowed`; Bland's rule for both choices.
    fn run(&mut self, cost: &[Rational], allowed: usize, mut log: Option<&mut Vec<Vec<usize>>>) -> Phase {
        loop {
            if let Some(l) = log.as_deref_mut() {
                let mut b = self.basis.clone();
                b.sort_unstable();
                l.push(b);
            }
            let entering = (0..allowed).find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative());
            let Some(c) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Phase::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

enum Inner {
    Optimal { x: Vec<Rational>, z: Vec<Rational> },
    DualInfeasible,
    DualUnbounded,
}

/// `cols[k]` is the k-th `≤` row as a dense vector, `costs[k]` its right-hand side.
fn solve_dual(cols: &[Vec<Rational>], costs: &[Rational], c: &[Rational], mut log: Log) -> Inner {
    let n = c.len();
    let k = cols.len();
    let sign: Vec<Rational> = c.iter().map(|v| if v.is_negative() { -Rational::one() } else { Rational::one() }).collect();
    let rows: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let mut row: Vec<Rational> = cols.iter().map(|col| &col[j] * &sign[j]).collect();
            row.extend((0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut t = Tableau {
        rows,
        rhs: c.iter().zip(&sign).map(|(v, s)| v * s).collect(),
        basis: (k..k + n).collect(),
    };

    let mut phase1_cost = vec![Rational::zero(); k];
    phase1_cost.extend((0..n).map(|_| Rational::one()));
    let phase1_log = log.as_deref_mut().map(|l| {
        l.push(Vec::new());
        l.last_mut().expect("just pushed")
    });
    t.run(&phase1_cost, k + n, phase1_log);
    let infeasibility: Rational = t.basis.iter().zip(&t.rhs).filter(|(&b, _)| b >= k).map(|(_, v)| v.clone()).sum();
    if infeasibility.is_positive() {
        return Inner::DualInfeasible;
    }
    // Drive zero-level artificials out where a real column can replace them.
    for r in 0..n {
        if t.basis[r] >= k {
            if let Some(c) = (0..k).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, c);
            }
        }
    }

    let mut phase2_cost = costs.to_vec();
    phase2_cost.extend((0..n).map(|_| Rational::zero()));
    let phase2_log = log.map(|l| {
        l.push(Vec::new());
        l.last_mut().expect("just pushed")
    });
    if let Phase::Unbounded = t.run(&phase2_cost, k, phase2_log) {
        return Inner::DualUnbounded;
    }

    let mut z = vec![Rational::zero(); k];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < k {
            z[b] = t.rhs[r].clone();
        }
    }
    // Multipliers: the artificial block of the tableau holds the basis inverse.
    let x = (0..n)
        .map(|j| {
            let s: Rational = t
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b < k && !phase2_cost[b].is_zero())
                .map(|(r, &b)| &phase2_cost[b] * &t.rows[r][k + j])
                .sum();
            s * &sign[j]
        })
        .collect();
    Inner::Optimal { x, z }
}

pub(super) fn solve(lp: &LinearProgram, log: Log) -> Result<LpOutcome> {
    let n = lp.num_vars();
    let mut cols = Vec::new();
    let mut costs = Vec::new();
    let mut origin: Vec<(usize, i8)> = Vec::new();
    for (i, row) in lp.rows().iter().enumerate() {
        let a = row.dense(n);
        let neg: Vec<Rational> = a.iter().map(|v| -v).collect();
        if matches!(row.relation, Relation::Le | Relation::Eq) {
            cols.push(a.clone());
            costs.push(row.rhs.clone());
            origin.push((i, 1));
        }
        if matches!(row.relation, Relation::Ge | Relation::Eq) {
            cols.push(neg);
            costs.push(-&row.rhs);
            origin.push((i, -1));
        }
    }

    match solve_dual(&cols, &costs, lp.objective(), log) {
        Inner::DualUnbounded => Ok(LpOutcome::Infeasible),
        Inner::DualInfeasible => {
            let zero = vec![Rational::zero(); n];
            match solve_dual(&cols, &costs, &zero, None) {
                Inner::DualUnbounded => Ok(LpOutcome::Infeasible),
                Inner::Optimal { .. } => Ok(LpOutcome::Unbounded),
                Inner::DualInfeasible => Err(Error::internal("zero-objective dual reported infeasible")),
            }
        }
        Inner::Optimal { x, z } => {
            let mut duals = vec![Rational::zero(); lp.rows().len()];
            for (zk, &(i, s)) in z.iter().zip(&origin) {
                if s > 0 {
                    duals[i] += zk;
                } else {
                    duals[i] -= zk;
                }
            }
            let value = lp.objective_value(&x);
            verify(lp, &x, &duals, &value)?;
            Ok(LpOutcome::Optimal {
                point: lp.point(x),
                value,
                duals,
            })
        }
    }
}

/// Exact re-check of primal feasibility, dual feasibility and equal values.
fn verify(lp: &LinearProgram, x: &[Rational], duals: &[Rational], value: &Rational) -> Result<()> {
    if !lp.is_feasible(x) {
        return Err(Error::internal("simplex optimum violates a row"));
    }
    let n = lp.num_vars();
    let mut combo = vec![Rational::zero(); n];
    let mut dual_value = Rational::zero();
    for (row, y) in lp.rows().iter().zip(duals) {
        let ok = match row.relation {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(Error::internal("dual multiplier has the wrong sign"));
        }
        for (j, a) in &row.coeffs {
            combo[*j] += a * y;
        }
        dual_value += &row.rhs * y;
    }
    if combo != lp.objective() || dual_value != *value {
        return Err(Error::internal("simplex duality certificate failed"));
    }
    Ok(())
}
