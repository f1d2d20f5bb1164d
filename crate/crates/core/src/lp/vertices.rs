//! Vertex enumeration by the double description method on the homogenized cone
//! `{(x, t) : a·x − b·t ≤ 0, t ≥ 0}`, with exact integer rays.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg;
use super::{LinearProgram, Rational, Relation, VertexPoint};
use crate::error::{check_cap, Result};

pub const DEFAULT_MAX_VARS: usize = 12;
pub const DEFAULT_MAX_ROWS: usize = 40;

/// Upper bound on homogenized constraints, set by the zero-set bitmask width.
const MAX_CONSTRAINTS: usize = 128;

struct Ray {
    v: Vec<BigInt>,
    zeros: u128,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// All vertices of the feasible region, sorted by coordinates.
pub fn enumerate_vertices(lp: &LinearProgram) -> Result<Vec<VertexPoint>> {
    enumerate_vertices_capped(lp, DEFAULT_MAX_VARS, DEFAULT_MAX_ROWS)
}

pub fn enumerate_vertices_capped(lp: &LinearProgram, max_vars: usize, max_rows: usize) -> Result<Vec<VertexPoint>> {
    let n = lp.num_vars();
    check_cap("variable count", n, max_vars)?;
    check_cap("row count", lp.rows().len(), max_rows)?;

    let mut cons: Vec<Vec<BigInt>> = Vec::new();
    let mut plain: Vec<Vec<Rational>> = Vec::new();
    for row in lp.rows() {
        let a = row.dense(n);
        let mut hom = a.clone();
        hom.push(-&row.rhs);
        let neg: Vec<Rational> = hom.iter().map(|v| -v).collect();
        if matches!(row.relation, Relation::Le | Relation::Eq) {
            cons.push(linalg::primitive(&hom));
        }
        if matches!(row.relation, Relation::Ge | Relation::Eq) {
            cons.push(linalg::primitive(&neg));
        }
        plain.push(a);
    }
    if n == 0 || linalg::rank(&plain) < n {
        // Either a single point with no coordinates or a region containing a line.
        return Ok(if n == 0 && lp.is_feasible(&[]) { vec![lp.point(Vec::new())] } else { Vec::new() });
    }
    let mut t_row = vec![BigInt::zero(); n + 1];
    t_row[n] = BigInt::from(-1);
    cons.insert(0, t_row);
    check_cap("homogenized constraint count", cons.len(), MAX_CONSTRAINTS)?;

    let d = n + 1;
    let as_rat: Vec<Vec<Rational>> = cons.iter().map(|c| c.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let start = linalg::independent_subset(&as_rat);
    debug_assert_eq!(start.len(), d);
    let basis_rows: Vec<Vec<Rational>> = start.iter().map(|&i| as_rat[i].clone()).collect();
    let inv = linalg::inverse(&basis_rows).expect("independent rows form an invertible matrix");

    let start_mask: u128 = start.iter().fold(0, |m, &i| m | (1u128 << i));
    let mut rays: Vec<Ray> = (0..d)
        .map(|col| {
            let v: Vec<Rational> = (0..d).map(|r| -&inv[r][col]).collect();
            Ray {
                v: linalg::primitive(&v),
                zeros: start_mask & !(1u128 << start[col]),
            }
        })
        .collect();

    for (h, con) in cons.iter().enumerate() {
        if start_mask & (1u128 << h) != 0 {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot(con, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, s) in rays.iter().zip(&vals) {
            if s.is_negative() {
                next.push(Ray { v: r.v.clone(), zeros: r.zeros });
            } else if s.is_zero() {
                next.push(Ray { v: r.v.clone(), zeros: r.zeros | (1u128 << h) });
            }
        }
        for (i, (rp, sp)) in rays.iter().zip(&vals).enumerate() {
            if !sp.is_positive() {
                continue;
            }
            for (j, (rm, sm)) in rays.iter().zip(&vals).enumerate() {
                if !sm.is_negative() {
                    continue;
                }
                let common = rp.zeros & rm.zeros;
                if (common.count_ones() as usize) + 2 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(l, r3)| l != i && l != j && r3.zeros & common == common);
                if blocked {
                    continue;
                }
                let neg_sm = -sm;
                let v: Vec<BigInt> = rm.v.iter().zip(&rp.v).map(|(a, b)| sp * a + &neg_sm * b).collect();
                next.push(Ray {
                    v: linalg::normalize(v),
                    zeros: common | (1u128 << h),
                });
            }
        }
        rays = next;
    }

    let mut points: Vec<Vec<Rational>> = rays
        .iter()
        .filter(|r| r.v[n].is_positive())
        .map(|r| {
            let t = Rational::from_integer(r.v[n].clone());
            r.v[..n].iter().map(|x| Rational::from_integer(x.clone()) / &t).collect()
        })
        .collect();
    points.sort();
    points.dedup();
    Ok(points.into_iter().map(|x| lp.point(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{int, RowTag};

    #[test]
    fn unit_square() {
        let mut lp = LinearProgram::new(2);
        for j in 0..2 {
            lp.add_int_row(&[(j, 1)], Relation::Ge, 0, RowTag::Lower(j)).unwrap();
            lp.add_int_row(&[(j, 1)], Relation::Le, 1, RowTag::Upper(j)).unwrap();
        }
        let vs = enumerate_vertices(&lp).unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.iter().all(|p| p.is_vertex()));
    }

    #[test]
    fn line_has_no_vertices() {
        let mut lp = LinearProgram::new(2);
        lp.add_int_row(&[(0, 1), (1, 1)], Relation::Eq, 0, RowTag::Balance).unwrap();
        assert!(enumerate_vertices(&lp).unwrap().is_empty());
    }

    #[test]
    fn pair_sums_has_half_vertex() {
        let mut lp = LinearProgram::new(3);
        for (i, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            lp.add_int_row(&[(a, 1), (b, 1)], Relation::Le, 1, RowTag::Named(format!("p{i}"))).unwrap();
        }
        for j in 0..3 {
            lp.add_int_row(&[(j, 1)], Relation::Ge, 0, RowTag::Lower(j)).unwrap();
            lp.add_int_row(&[(j, 1)], Relation::Le, 1, RowTag::Upper(j)).unwrap();
        }
        let vs = enumerate_vertices(&lp).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert!(vs.iter().any(|p| p.values == vec![half.clone(), half.clone(), half.clone()]));
        // 0, three unit vectors, and the half point.
        assert_eq!(vs.len(), 5);
        assert!(vs.iter().any(|p| p.values == vec![int(0), int(0), int(0)]));
    }

    #[test]
    fn caps() {
        let lp = LinearProgram::new(13);
        assert!(enumerate_vertices(&lp).is_err());
    }
}
