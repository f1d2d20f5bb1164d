use flipkit::gen::{self, rng};
use flipkit::transshipment::{solve_transshipment, TransshipmentInstance, TransshipmentOutcome};
use flipkit::VertexSet;
use rand::Rng;

#[test]
fn flows_conserve_and_cuts_violate() {
    let mut r = rng(99);
    let (mut flows, mut cuts) = (0, 0);
    for _ in 0..400 {
        let n = r.gen_range(2..=6);
        let m = r.gen_range(1..=2 * n);
        let connected = m + 1 >= n && r.gen_bool(0.5);
        let d = gen::random_digraph(&mut r, n, m, connected).unwrap();
        let mut b: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        let total: i64 = b.iter().sum();
        b[0] -= total;
        let lower = (0..m).map(|_| if r.gen_bool(0.2) { None } else { Some(r.gen_range(-1..=1)) }).collect::<Vec<_>>();
        let upper = lower
            .iter()
            .map(|l| if r.gen_bool(0.2) { None } else { Some(l.unwrap_or(0) + r.gen_range(0..=2)) })
            .collect();
        let inst = TransshipmentInstance::new(d.clone(), b.clone(), lower, upper).unwrap();
        match solve_transshipment(&inst).unwrap() {
            TransshipmentOutcome::Flow(y) => {
                assert!(inst.is_feasible_flow(&y));
                for (v, &bv) in b.iter().enumerate() {
                    assert_eq!(d.net_out(&y, VertexSet::singleton(v)), bv);
                }
                flows += 1;
            }
            TransshipmentOutcome::ViolatingSet(u) => {
                assert!(inst.hoffman_slack(u).is_some_and(|s| s < 0), "{u} on {inst:?}");
                cuts += 1;
            }
        }
    }
    assert!(flows > 50 && cuts > 50, "{flows} flows, {cuts} cuts");
}

#[test]
fn unbalanced_supply_is_rejected() {
    let d = flipkit::Digraph::directed_cycle(3);
    assert!(TransshipmentInstance::uniform(d, vec![1, 0, 0], Some(0), Some(1)).is_err());
}
