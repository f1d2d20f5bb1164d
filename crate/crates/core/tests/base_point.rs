use flipkit::base_point::{build_lp, integral_base_point, BaseIntersectionInstance, BasePointOutcome};
use flipkit::gen::{self, rng, GenRng};
use flipkit::setfam::{self, SubmodularOracle};
use flipkit::{Digraph, Error, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

fn random_table(r: &mut GenRng, n: usize) -> SubmodularOracle {
    let seeds = r.gen_range(1..=5);
    let family = gen::random_crossing_family(r, n, seeds).unwrap();
    gen::random_submodular_table(r, family).unwrap()
}

fn check_point(inst: &BaseIntersectionInstance, b: &[i64]) {
    assert_eq!(b.iter().sum::<i64>(), 0);
    for f in [&inst.f1, &inst.f2] {
        for (u, v) in f.entries().unwrap() {
            let bu: i64 = u.iter().map(|x| b[x]).sum();
            assert!(bu <= v, "b({u}) = {bu} > {v}");
        }
    }
}

#[test]
fn lexicographic_maxima_are_integral() {
    let mut r = rng(2718);
    let (mut points, mut empty) = (0, 0);
    for trial in 0..500 {
        let n = 2 + trial % 6;
        let inst = BaseIntersectionInstance::new(random_table(&mut r, n), random_table(&mut r, n)).unwrap();
        match integral_base_point(&inst).unwrap_or_else(|e| panic!("trial {trial}: {e}")) {
            BasePointOutcome::Point(p) => {
                let b = p.to_integers().unwrap();
                check_point(&inst, &b);
                points += 1;
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut r);
                let other = inst.clone().with_order(order).unwrap();
                match integral_base_point(&other).unwrap() {
                    BasePointOutcome::Point(q) => check_point(&other, &q.to_integers().unwrap()),
                    o => panic!("reordered run returned {o:?}"),
                }
            }
            BasePointOutcome::Infeasible => empty += 1,
            BasePointOutcome::ObjectiveUnbounded => panic!("no objective was given"),
        }
    }
    assert!(points > 100 && empty > 0, "{points} points, {empty} empty");
}

#[test]
fn two_vertex_segment() {
    let f = setfam::constant(setfam::all_proper(2).unwrap(), 1).unwrap();
    let inst = BaseIntersectionInstance::new(f.clone(), f).unwrap();
    match integral_base_point(&inst).unwrap() {
        BasePointOutcome::Point(p) => assert_eq!(p.to_integers(), Some(vec![1, -1])),
        o => panic!("{o:?}"),
    }
}

#[test]
fn segment_endpoint_at_zero() {
    let family = setfam::all_proper(2).unwrap();
    let values = [(VertexSet::singleton(0), 0), (VertexSet::singleton(1), 1)].into_iter().collect();
    let f1 = setfam::table(family.clone(), values).unwrap();
    let f2 = setfam::constant(family, 1).unwrap();
    let inst = BaseIntersectionInstance::new(f1, f2).unwrap();
    match integral_base_point(&inst).unwrap() {
        BasePointOutcome::Point(p) => assert_eq!(p.to_integers(), Some(vec![0, 0])),
        o => panic!("{o:?}"),
    }
}

#[test]
fn isolated_components_refuse() {
    let d = Digraph::new(4, vec![(0, 1), (2, 3)]).unwrap();
    let family = setfam::all_proper(4).unwrap();
    let f = setfam::constant(family, 1).unwrap();
    let inst = BaseIntersectionInstance::new(f.clone(), f).unwrap().with_digraph(d).unwrap();
    assert!(matches!(integral_base_point(&inst), Err(Error::PreconditionViolated { .. })));
}

#[test]
fn face_rows_are_equalities() {
    let family = setfam::all_proper(3).unwrap();
    let f = setfam::constant(family, 1).unwrap();
    let face = vec![VertexSet::singleton(2)];
    let inst = BaseIntersectionInstance::new(f.clone(), f).unwrap().with_face(face, Vec::new()).unwrap();
    let lp = build_lp(&inst).unwrap();
    match integral_base_point(&inst).unwrap() {
        BasePointOutcome::Point(p) => {
            assert!(lp.is_feasible(&p.values));
            assert_eq!(p.to_integers().unwrap()[2], 1);
        }
        o => panic!("{o:?}"),
    }
}
