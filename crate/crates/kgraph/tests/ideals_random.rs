//! Randomised checks of the saturation lemma and the quotient/restriction
//! constructions over generated locally convex 2-graphs.

use std::collections::BTreeSet;

use kgraph::ideals::{
    enumerate_sat_hered, hereditary_closure, is_hereditary, is_saturated, quotient_graph,
    restriction_graph, saturate,
};
use kgraph::pathspace::is_locally_convex;
use kgraph::random::sample_graphs;
use kgraph::skeleton::VertexIx;

fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<VertexIx>> {
    (0u32..(1 << n)).map(move |mask| (0..n).filter(|v| mask & (1 << v) != 0).collect())
}

#[test]
fn saturation_of_hereditary_is_hereditary_when_convex() {
    let graphs = sample_graphs(1000, 60, 100_000, |g| is_locally_convex(g).0);
    for g in &graphs {
        let n = g.skeleton().vertex_count();
        for set in subsets(n) {
            let h = hereditary_closure(g, &set);
            let sat = saturate(g, &h);
            assert!(
                is_hereditary(g, &sat),
                "saturation broke hereditarity on a locally convex graph"
            );
            assert!(is_saturated(g, &sat));
            // closure laws
            assert!(h.is_subset(&sat));
            assert_eq!(saturate(g, &sat), sat);
        }
    }
}

#[test]
fn quotients_and_restrictions_stay_valid_and_convex() {
    let graphs = sample_graphs(2000, 60, 100_000, |g| is_locally_convex(g).0);
    for g in &graphs {
        let n = g.skeleton().vertex_count();
        for set in subsets(n) {
            if is_hereditary(g, &set) {
                let r = restriction_graph(g, &set).expect("hereditary set accepted");
                assert!(is_locally_convex(&r).0, "restriction lost convexity");
                if is_saturated(g, &set) {
                    let q = quotient_graph(g, &set).expect("saturated hereditary set accepted");
                    assert!(is_locally_convex(&q).0, "quotient lost convexity");
                }
            }
        }
    }
}

#[test]
fn lattice_closure_under_meet_and_join() {
    let graphs = sample_graphs(3000, 40, 100_000, |g| is_locally_convex(g).0);
    for g in &graphs {
        let lattice = enumerate_sat_hered(g).unwrap();
        assert!(lattice.sets.contains(&BTreeSet::new()));
        let all: BTreeSet<VertexIx> = (0..g.skeleton().vertex_count()).collect();
        assert!(lattice.sets.contains(&all));
        for a in &lattice.sets {
            for b in &lattice.sets {
                assert!(lattice.sets.contains(&lattice.meet(a, b)));
                assert!(lattice.sets.contains(&lattice.join(g, a, b)));
            }
        }
    }
}

#[test]
fn sigma_stabilises_within_vertex_count() {
    let graphs = sample_graphs(4000, 60, 100_000, |_| true);
    for g in &graphs {
        let n = g.skeleton().vertex_count();
        for set in subsets(n) {
            // saturate by bounded iteration; must reach the fixpoint in <= n
            // steps beyond the start
            let mut current = set.clone();
            for _ in 0..=n {
                let next = saturate(g, &current);
                if next == current {
                    break;
                }
                current = next;
            }
            assert_eq!(saturate(g, &current), current);
        }
    }
}
