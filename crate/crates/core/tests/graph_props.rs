use flipkit::gen::{self, rng};
use flipkit::{ArcSet, Digraph, VertexSet};
use proptest::prelude::*;

fn digraph() -> impl Strategy<Value = Digraph> {
    (2usize..=6).prop_flat_map(|n| {
        let arc = (0..n, 0..n).prop_filter("no loops", |(t, h)| t != h);
        prop::collection::vec(arc, 0..=12).prop_map(move |arcs| Digraph::new(n, arcs).unwrap())
    })
}

fn with_subset() -> impl Strategy<Value = (Digraph, ArcSet)> {
    digraph().prop_flat_map(|d| {
        let m = d.arc_count();
        (Just(d), 0u64..(1u64 << m)).prop_map(|(d, mask)| (d, ArcSet::from_mask(mask)))
    })
}

fn brute_connectivity(d: &Digraph) -> usize {
    VertexSet::proper_subsets(d.n()).map(|u| d.out_degree(u)).min().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn out_cut_is_in_cut_of_complement(d in digraph()) {
        for u in VertexSet::proper_subsets(d.n()) {
            let (out, inn) = d.delta(u);
            let (out_c, in_c) = d.delta(u.complement(d.n()));
            prop_assert_eq!(&out, &in_c);
            prop_assert_eq!(&inn, &out_c);
        }
    }

    #[test]
    fn flip_is_an_involution((d, j) in with_subset()) {
        let back = d.flip(&j).unwrap().flip(&j).unwrap();
        prop_assert_eq!(back.arcs(), d.arcs());
    }

    #[test]
    fn incidence_net_flow_counts_arcs((d, j) in with_subset()) {
        let y = j.incidence(d.arc_count());
        for u in VertexSet::proper_subsets(d.n()) {
            let (out, inn) = d.delta(u);
            let expected = out.intersection(&j).len() as i64 - inn.intersection(&j).len() as i64;
            prop_assert_eq!(d.net_out(&y, u), expected);
            prop_assert_eq!(d.net_out_of(&j, u), expected);
        }
    }

    #[test]
    fn flow_connectivity_matches_enumeration(d in digraph()) {
        let brute = brute_connectivity(&d);
        for k in 0..=brute + 1 {
            prop_assert_eq!(d.is_k_arc_connected(k).unwrap(), k <= brute);
        }
    }

    #[test]
    fn flips_are_dijoins_and_complements_flip((d, j) in with_subset()) {
        for k in 1..=2 {
            if d.is_k_flip(&j, k).unwrap() {
                prop_assert!(d.is_k_dijoin(&j, k).unwrap());
                prop_assert!(d.is_k_flip(&j.complement(d.arc_count()), k).unwrap());
            }
        }
    }
}

#[test]
fn connectivity_agrees_up_to_ten_vertices() {
    let mut r = rng(17);
    for n in 7..=10 {
        for _ in 0..10 {
            let d = gen::random_ec_orientation(&mut r, n, 2, 2).unwrap();
            let brute = brute_connectivity(&d);
            assert!(d.is_k_arc_connected(brute).unwrap());
            assert!(!d.is_k_arc_connected(brute + 1).unwrap());
        }
    }
}

#[test]
fn pre_reversed_triangle_arc_flips_back() {
    let d = Digraph::new(3, vec![(0, 1), (2, 1), (2, 0)]).unwrap();
    assert!(!d.is_k_arc_connected(1).unwrap());
    assert!(d.is_k_flip(&ArcSet::from_mask(0b010), 1).unwrap());
}

#[test]
fn dicuts_come_in_ascending_order() {
    let d = Digraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    let cuts = d.enumerate_dicuts().unwrap();
    assert!(cuts.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(cuts.len(), 3);
}
