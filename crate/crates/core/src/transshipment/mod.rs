//! Integral b-transshipments with lower and upper arc bounds.

pub mod maxflow;

use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexSet};

use maxflow::{max_flow, FlowNetwork};

/// `None` in `lower` means −∞, `None` in `upper` means +∞.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransshipmentInstance {
    pub d: Digraph,
    pub b: Vec<i64>,
    pub lower: Vec<Option<i64>>,
    pub upper: Vec<Option<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransshipmentOutcome {
    Flow(Vec<i64>),
    /// Proper non-empty `U` with `b(U) > u(δ⁺(U)) − ℓ(δ⁻(U))`.
    ViolatingSet(VertexSet),
}

impl TransshipmentInstance {
    pub fn new(d: Digraph, b: Vec<i64>, lower: Vec<Option<i64>>, upper: Vec<Option<i64>>) -> Result<Self> {
        let inst = TransshipmentInstance { d, b, lower, upper };
        inst.validate()?;
        Ok(inst)
    }

    /// Bounds `lo ≤ y ≤ hi` on every arc.
    pub fn uniform(d: Digraph, b: Vec<i64>, lo: Option<i64>, hi: Option<i64>) -> Result<Self> {
        let m = d.arc_count();
        Self::new(d, b, vec![lo; m], vec![hi; m])
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.d.n(), self.d.arc_count());
        if self.b.len() != n {
            return Err(Error::input(format!("b has {} entries, expected {n}", self.b.len())));
        }
        if self.b.iter().sum::<i64>() != 0 {
            return Err(Error::input("b must sum to zero"));
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

    /// `u(δ⁺(U)) − ℓ(δ⁻(U)) − b(U)`; `None` when the bound side is +∞.
    pub fn hoffman_slack(&self, u: VertexSet) -> Option<i64> {
        let (out, inn) = self.d.delta(u);
        let mut cap = 0i64;
        for a in out.iter() {
            cap += self.upper[a]?;
        }
        for a in inn.iter() {
            cap -= self.lower[a]?;
        }
        let demand: i64 = u.iter().map(|v| self.b[v]).sum();
        Some(cap - demand)
    }

    /// Exact check of bounds and conservation.
    pub fn is_feasible_flow(&self, y: &[i64]) -> bool {
        if y.len() != self.d.arc_count() {
            return false;
        }
        let within = (0..y.len()).all(|a| {
            self.lower[a].is_none_or(|l| l <= y[a]) && self.upper[a].is_none_or(|u| y[a] <= u)
        });
        within && (0..self.d.n()).all(|v| self.d.net_out(y, VertexSet::singleton(v)) == self.b[v])
    }
}

/// One network arc standing for (part of) an original arc: `y_arc += sign · z`,
/// with `z ≥ lo` and `z ≤ hi` when finite.
struct Piece {
    arc: usize,
    from: usize,
    to: usize,
    lo: i64,
    hi: Option<i64>,
    sign: i64,
}

fn pieces(inst: &TransshipmentInstance) -> Vec<Piece> {
    let mut out = Vec::new();
    for (a, &(t, h)) in inst.d.arcs().iter().enumerate() {
        match (inst.lower[a], inst.upper[a]) {
            (Some(lo), hi) => out.push(Piece { arc: a, from: t, to: h, lo, hi, sign: 1 }),
            (None, Some(hi)) => out.push(Piece { arc: a, from: h, to: t, lo: -hi, hi: None, sign: -1 }),
            (None, None) => {
                out.push(Piece { arc: a, from: t, to: h, lo: 0, hi: None, sign: 1 });
                out.push(Piece { arc: a, from: h, to: t, lo: 0, hi: None, sign: -1 });
            }
        }
    }
    out
}

/// Feasible flow, or the violating set read off the source side of a minimum cut.
pub fn solve_transshipment(inst: &TransshipmentInstance) -> Result<TransshipmentOutcome> {
    inst.validate()?;
    let n = inst.d.n();
    let parts = pieces(inst);

    // Shift z = z' + lo and move the lower-bound flow into the supplies.
    let mut supply = inst.b.clone();
    for p in &parts {
        supply[p.from] -= p.lo;
        supply[p.to] += p.lo;
    }
    let total: i64 = supply.iter().filter(|&&s| s > 0).sum();
    // Any cut through an unbounded arc then costs more than the whole supply.
    let unbounded_cap = total + 1;

    let (source, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, source, sink);
    let ids: Vec<usize> = parts
        .iter()
        .map(|p| {
            let cap = p.hi.map_or(unbounded_cap, |hi| hi - p.lo);
            net.add_arc(p.from, p.to, cap)
        })
        .collect();
    for (v, &s) in supply.iter().enumerate() {
        if s > 0 {
            net.add_arc(source, v, s);
        } else if s < 0 {
            net.add_arc(v, sink, -s);
        }
    }

    let mf = max_flow(&net);
    if mf.value == total {
        let mut y = vec![0i64; inst.d.arc_count()];
        for (p, &id) in parts.iter().zip(&ids) {
            y[p.arc] += p.sign * (mf.flow[id] + p.lo);
        }
        if !inst.is_feasible_flow(&y) {
            return Err(Error::internal("transshipment flow failed re-verification"));
        }
        return Ok(TransshipmentOutcome::Flow(y));
    }

    let set: VertexSet = (0..n).filter(|&v| mf.source_side[v]).collect();
    match inst.hoffman_slack(set) {
        Some(s) if s < 0 && set.is_proper(n) => Ok(TransshipmentOutcome::ViolatingSet(set)),
        _ => Err(Error::internal(format!("min cut {set} does not violate the cut condition"))),
    }
}
