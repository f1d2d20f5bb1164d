use flipkit::gen::{self, rng, GenRng};
use flipkit::oracles;
use flipkit::setfam::{self, SubmodularOracle};
use flipkit::solvers::{self, Role, TwoSystemInstance, TwoSystemOutcome};
use flipkit::{Digraph, Error};
use rand::Rng;

fn ec_digraph(r: &mut GenRng, target: usize) -> Option<Digraph> {
    let n = r.gen_range(3..=6);
    let extra = r.gen_range(0..=2);
    let d = gen::random_ec_orientation(r, n, target, extra).ok()?;
    (d.arc_count() <= 14).then_some(d)
}

fn random_table(r: &mut GenRng, n: usize) -> SubmodularOracle {
    let seeds = r.gen_range(1..=4);
    let family = gen::random_crossing_family(r, n, seeds).unwrap();
    gen::random_submodular_table(r, family).unwrap()
}

#[test]
fn flip_finder_agrees_with_brute_force() {
    let mut r = rng(1);
    let mut checked = 0;
    while checked < 60 {
        let (tau, k) = (2, 1);
        let Some(d) = ec_digraph(&mut r, 2) else { continue };
        let f = setfam::dicut_slack(&d, tau - k).unwrap();
        let brute = oracles::brute_force_flip(&d, k, &f).unwrap();
        let found = solvers::find_k_flip(&d, tau, k, &f);
        match (brute, found) {
            (Some(_), Ok(cert)) => assert!(cert.verified()),
            (None, Err(Error::HypothesisViolated { .. })) => {}
            (b, f) => panic!("brute force {b:?} vs solver {f:?} on {d:?}"),
        }
        checked += 1;
    }
}

#[test]
fn returned_flips_are_dijoins() {
    let mut r = rng(2);
    for _ in 0..80 {
        let Some(d) = ec_digraph(&mut r, 4) else { continue };
        let k = r.gen_range(1..=3);
        if !solvers::verify_hypothesis(&d, 4, k).unwrap().holds() {
            continue;
        }
        let res = solvers::decompose_flip_dijoin(&d, 4, k).unwrap();
        assert!(d.is_k_flip(&res.part1, k as usize).unwrap());
        assert!(d.is_k_dijoin(&res.part1, k as usize).unwrap());
        assert!(d.is_k_flip(&res.part2, k as usize).unwrap());
    }
}

#[test]
fn hypothesis_at_twice_k_implies_edge_connectivity() {
    let mut r = rng(3);
    let mut holds = 0;
    for _ in 0..300 {
        let n = r.gen_range(3..=6);
        let m = r.gen_range(n..=3 * n);
        let d = gen::random_digraph(&mut r, n, m, true).unwrap();
        for k in 1..=2 {
            if solvers::verify_hypothesis(&d, 2 * k, k).unwrap().holds() {
                holds += 1;
                assert!(d.edge_connectivity_underlying().unwrap() >= 2 * k as usize);
            }
        }
    }
    assert!(holds > 20);
}

#[test]
fn swapped_split_swaps_roles() {
    let mut r = rng(4);
    let mut done = 0;
    while done < 20 {
        let Some(d) = ec_digraph(&mut r, 3) else { continue };
        let a = solvers::dijoin_pair_decompose(&d, 3, 1).unwrap();
        let b = solvers::dijoin_pair_decompose(&d, 3, 2).unwrap();
        assert_eq!(a.roles, (Role::Dijoin(1), Role::Dijoin(2)));
        assert_eq!(b.roles, (Role::Dijoin(2), Role::Dijoin(1)));
        assert_eq!((a.part1, a.part2), (b.part2, b.part1));
        done += 1;
    }
}

#[test]
fn integral_solutions_satisfy_both_systems() {
    let mut r = rng(5);
    let (mut integral, mut cuts) = (0, 0);
    for _ in 0..150 {
        let n = r.gen_range(2..=5);
        let m = r.gen_range(n - 1..=n + 2);
        let d = gen::random_digraph(&mut r, n, m, true).unwrap();
        let spread = if r.gen_bool(0.5) { 0 } else { 2 };
        let c: Vec<i64> = (0..m).map(|_| r.gen_range(-spread..=spread)).collect();
        let inst = TwoSystemInstance::unit_box(d.clone(), random_table(&mut r, n), random_table(&mut r, n))
            .unwrap()
            .with_objective(c)
            .unwrap();
        match solvers::solve_two_systems(&inst) {
            Ok(TwoSystemOutcome::Integral(y)) => {
                assert!(inst.within_bounds(&y));
                assert_eq!(inst.system_violation(&y).unwrap(), None);
                integral += 1;
            }
            Ok(TwoSystemOutcome::ViolatingSet(u)) => {
                assert!(inst.violates_cut_condition(u));
                cuts += 1;
            }
            // The objective selects a face of the unbounded polyhedron.
            Ok(TwoSystemOutcome::Unbounded) | Ok(TwoSystemOutcome::Infeasible) => {}
            Err(e) => assert_eq!(e.class(), flipkit::ErrorClass::Verdict, "{e}"),
        }
    }
    assert!(integral > 15 && cuts > 0, "{integral} integral, {cuts} cuts");
}

#[test]
fn bidirected_triangle_splits_into_two_dijoins() {
    let d = Digraph::bidirected_cycle(3);
    let res = solvers::dijoin_pair_decompose(&d, 4, 2).unwrap();
    assert!(res.is_verified());
}

#[test]
fn pairwise_sum_example_has_a_half_vertex() {
    let inst = oracles::pairwise_sum_example().unwrap();
    let found = oracles::fractional_vertex_search(&inst).unwrap();
    assert!(found.iter().any(|v| oracles::is_half_integral(&v.point) && v.rank == 3));
}
