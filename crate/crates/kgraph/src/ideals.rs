//! Hereditary and saturated vertex sets: closure operators, the lattice of
//! saturated hereditary subsets, and the quotient/restriction graph
//! constructions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::KGraph;
use crate::skeleton::{EdgeSpec, Skeleton, Square, SquareTable, VertexIx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdealsError {
    #[error("graph has {vertices} vertices; exhaustive lattice enumeration is guarded at {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("vertex set is not saturated: vertex {0:?} is forced in")]
    NotSaturated(String),
    #[error("vertex set is not hereditary: vertex {0:?} is reachable but absent")]
    NotHereditary(String),
}

/// Exhaustive-enumeration guard.
pub const LATTICE_GUARD: usize = 20;

/// A vertex set with its computed structural tags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    pub members: BTreeSet<VertexIx>,
    pub hereditary: bool,
    pub saturated: bool,
}

impl VertexSet {
    pub fn analyse(g: &KGraph, members: BTreeSet<VertexIx>) -> Self {
        let hereditary = is_hereditary(g, &members);
        let saturated = is_saturated(g, &members);
        VertexSet {
            members,
            hereditary,
            saturated,
        }
    }
}

/// The reachability order: `v >= w` iff some path has range `v` and source
/// `w`. Returned as, for each `v`, the set of `w` below it.
pub fn reachability_geq(g: &KGraph) -> BTreeMap<VertexIx, BTreeSet<VertexIx>> {
    let sk = g.skeleton();
    let mut below = BTreeMap::new();
    for v in 0..sk.vertex_count() {
        // walk backwards: from range to source
        let mut seen: BTreeSet<VertexIx> = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if !seen.insert(u) {
                continue;
            }
            for colour in 0..g.k() {
                for &e in sk.in_edges(u, colour) {
                    stack.push(sk.edge(e).source);
                }
            }
        }
        below.insert(v, seen);
    }
    below
}

pub fn is_hereditary(g: &KGraph, set: &BTreeSet<VertexIx>) -> bool {
    hereditary_defect(g, set).is_none()
}

/// A vertex reachable from the set but missing from it, if any.
fn hereditary_defect(g: &KGraph, set: &BTreeSet<VertexIx>) -> Option<VertexIx> {
    let below = reachability_geq(g);
    for v in set {
        for w in &below[v] {
            if !set.contains(w) {
                return Some(*w);
            }
        }
    }
    None
}

/// Downward closure under reachability: the smallest hereditary superset.
pub fn hereditary_closure(g: &KGraph, set: &BTreeSet<VertexIx>) -> BTreeSet<VertexIx> {
    let below = reachability_geq(g);
    let mut out = BTreeSet::new();
    for v in set {
        out.extend(below[v].iter().copied());
    }
    out
}

/// One application of the saturation step: every vertex all of whose
/// maximal colour-`i` extensions (for some `i`) land in `set`. A vertex
/// receiving no colour-`i` edge contributes itself as the only extension,
/// so that clause fires only if the vertex is already in the set.
fn sigma(g: &KGraph, set: &BTreeSet<VertexIx>) -> BTreeSet<VertexIx> {
    let sk = g.skeleton();
    let mut out = BTreeSet::new();
    for v in 0..sk.vertex_count() {
        let forced = (0..g.k()).any(|i| {
            let edges = sk.in_edges(v, i);
            if edges.is_empty() {
                set.contains(&v)
            } else {
                edges.iter().all(|&e| set.contains(&sk.edge(e).source))
            }
        });
        if forced {
            out.insert(v);
        }
    }
    out
}

pub fn is_saturated(g: &KGraph, set: &BTreeSet<VertexIx>) -> bool {
    sigma(g, set).is_subset(set)
}

/// The saturation: the smallest saturated superset, computed as the
/// fixpoint of adding the saturation step. Stabilises in at most one step
/// per vertex. Accepts arbitrary inputs; the result is hereditary when the
/// graph is locally convex and the input hereditary, but not in general.
pub fn saturate(g: &KGraph, set: &BTreeSet<VertexIx>) -> BTreeSet<VertexIx> {
    let mut current = set.clone();
    loop {
        let mut next = current.clone();
        next.extend(sigma(g, &current));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Smallest saturated *and* hereditary superset: alternate the two closures
/// to a joint fixpoint. Used as the lattice join, where a single saturation
/// pass suffices only under local convexity.
pub fn sat_hered_closure(g: &KGraph, set: &BTreeSet<VertexIx>) -> BTreeSet<VertexIx> {
    let mut current = set.clone();
    loop {
        let next = saturate(g, &hereditary_closure(g, &current));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// The lattice of saturated hereditary vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatHeredLattice {
    pub sets: Vec<BTreeSet<VertexIx>>,
}

impl SatHeredLattice {
    pub fn meet(&self, a: &BTreeSet<VertexIx>, b: &BTreeSet<VertexIx>) -> BTreeSet<VertexIx> {
        a.intersection(b).copied().collect()
    }

    pub fn join(
        &self,
        g: &KGraph,
        a: &BTreeSet<VertexIx>,
        b: &BTreeSet<VertexIx>,
    ) -> BTreeSet<VertexIx> {
        sat_hered_closure(g, &a.union(b).copied().collect())
    }
}

/// All saturated hereditary subsets by exhaustive filtering, sorted. Guarded
/// to at most [`LATTICE_GUARD`] vertices.
pub fn enumerate_sat_hered(g: &KGraph) -> Result<SatHeredLattice, IdealsError> {
    let n = g.skeleton().vertex_count();
    if n > LATTICE_GUARD {
        return Err(IdealsError::TooLarge {
            vertices: n,
            limit: LATTICE_GUARD,
        });
    }
    let sk = g.skeleton();
    // bitmask version of the two predicates
    let below = reachability_geq(g);
    let below_mask: Vec<u32> = (0..n)
        .map(|v| below[&v].iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    // per vertex and colour: the mask of edge sources, or None when the
    // colour is not received
    let mut source_masks: Vec<Vec<Option<u32>>> = vec![vec![None; g.k()]; n];
    for (v, row) in source_masks.iter_mut().enumerate() {
        for (i, slot) in row.iter_mut().enumerate() {
            let edges = sk.in_edges(v, i);
            if !edges.is_empty() {
                let m = edges.iter().fold(0u32, |m, &e| m | (1 << sk.edge(e).source));
                *slot = Some(m);
            }
        }
    }

    let mut sets = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let hereditary = (0..n)
            .filter(|v| mask & (1 << v) != 0)
            .all(|v| below_mask[v] & !mask == 0);
        if !hereditary {
            continue;
        }
        let saturated = (0..n).all(|v| {
            let forced = (0..g.k()).any(|i| match source_masks[v][i] {
                Some(m) => m & !mask == 0,
                None => mask & (1 << v) != 0,
            });
            !forced || mask & (1 << v) != 0
        });
        if !saturated {
            continue;
        }
        let set: BTreeSet<VertexIx> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
        sets.push(set);
    }
    sets.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
    Ok(SatHeredLattice { sets })
}

/// Rebuild a k-graph on a subset of vertices, keeping the edges selected by
/// `keep_edge` and the squares all of whose edges survive, and re-running
/// full validation.
fn subgraph(
    g: &KGraph,
    keep_vertex: impl Fn(VertexIx) -> bool,
    keep_edge: impl Fn(usize) -> bool,
) -> KGraph {
    let sk = g.skeleton();
    let vertices: Vec<String> = (0..sk.vertex_count())
        .filter(|&v| keep_vertex(v))
        .map(|v| sk.vertex_id(v).to_string())
        .collect();
    let edges: Vec<EdgeSpec> = (0..sk.edge_count())
        .filter(|&e| keep_edge(e))
        .map(|e| {
            let data = sk.edge(e);
            EdgeSpec::new(
                &data.id,
                data.colour + 1,
                sk.vertex_id(data.source),
                sk.vertex_id(data.range),
            )
        })
        .collect();
    let skeleton = Skeleton::new(g.k(), vertices, edges).expect("subgraph ids stay unique");
    let ix = |e: usize| skeleton.edge_by_id(sk.edge_id(e)).unwrap();
    let squares: Vec<Square> = g
        .squares()
        .squares()
        .iter()
        .filter(|sq| {
            keep_edge(sq.outer_lo)
                && keep_edge(sq.inner_lo)
                && keep_edge(sq.outer_hi)
                && keep_edge(sq.inner_hi)
        })
        .map(|sq| Square {
            outer_lo: ix(sq.outer_lo),
            inner_lo: ix(sq.inner_lo),
            outer_hi: ix(sq.outer_hi),
            inner_hi: ix(sq.inner_hi),
        })
        .collect();
    KGraph::validate(skeleton, SquareTable::new(squares))
        .expect("hereditarity keeps the square table exactly-once")
}

/// The graph on the complement of a saturated hereditary set: keep the
/// paths whose source avoids the set.
pub fn quotient_graph(g: &KGraph, set: &BTreeSet<VertexIx>) -> Result<KGraph, IdealsError> {
    let sk = g.skeleton();
    if let Some(w) = hereditary_defect(g, set) {
        return Err(IdealsError::NotHereditary(sk.vertex_id(w).to_string()));
    }
    if let Some(&v) = sigma(g, set).difference(set).next() {
        return Err(IdealsError::NotSaturated(sk.vertex_id(v).to_string()));
    }
    Ok(subgraph(
        g,
        |v| !set.contains(&v),
        |e| !set.contains(&sk.edge(e).source),
    ))
}

/// The graph on a hereditary set: keep the paths whose range lies in the
/// set (hereditarity keeps their sources inside too).
pub fn restriction_graph(g: &KGraph, set: &BTreeSet<VertexIx>) -> Result<KGraph, IdealsError> {
    let sk = g.skeleton();
    if let Some(w) = hereditary_defect(g, set) {
        return Err(IdealsError::NotHereditary(sk.vertex_id(w).to_string()));
    }
    Ok(subgraph(
        g,
        |v| set.contains(&v),
        |e| set.contains(&sk.edge(e).range),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn vset(g: &KGraph, ids: &[&str]) -> BTreeSet<VertexIx> {
        ids.iter().map(|id| g.skeleton().vertex(id).unwrap()).collect()
    }

    fn graphs_equal(a: &KGraph, b: &KGraph) -> bool {
        let (sa, sb) = (a.skeleton(), b.skeleton());
        let edge_tuple = |g: &KGraph, e: usize| {
            let d = g.skeleton().edge(e);
            (
                d.id.clone(),
                d.colour,
                g.skeleton().vertex_id(d.source).to_string(),
                g.skeleton().vertex_id(d.range).to_string(),
            )
        };
        sa.vertex_ids() == sb.vertex_ids()
            && sa.edge_count() == sb.edge_count()
            && (0..sa.edge_count()).all(|e| edge_tuple(a, e) == edge_tuple(b, e))
            && a.squares().len() == b.squares().len()
    }

    #[test]
    fn reachability_on_grid() {
        let g4 = fixtures::g4();
        let below = reachability_geq(&g4);
        // v >= w iff v <= w as grid points
        let v = |id: &str| g4.skeleton().vertex(id).unwrap();
        assert_eq!(below[&v("0_0")], vset(&g4, &["0_0", "0_1", "1_0", "1_1"]));
        assert_eq!(below[&v("1_0")], vset(&g4, &["1_0", "1_1"]));
        assert_eq!(below[&v("1_1")], vset(&g4, &["1_1"]));
    }

    #[test]
    fn reachability_on_concave_graph() {
        let g2 = fixtures::g2();
        let below = reachability_geq(&g2);
        let v = |id: &str| g2.skeleton().vertex(id).unwrap();
        assert_eq!(below[&v("v")], vset(&g2, &["v", "w", "z"]));
        assert_eq!(below[&v("w")], vset(&g2, &["w"]));
        assert_eq!(below[&v("z")], vset(&g2, &["z"]));
    }

    #[test]
    fn hereditary_closure_examples() {
        let g2 = fixtures::g2();
        assert_eq!(hereditary_closure(&g2, &vset(&g2, &["w"])), vset(&g2, &["w"]));
        assert_eq!(
            hereditary_closure(&g2, &vset(&g2, &["v"])),
            vset(&g2, &["v", "w", "z"])
        );
        // idempotent on hereditary inputs
        let h = vset(&g2, &["w", "z"]);
        assert_eq!(hereditary_closure(&g2, &h), h);
    }

    #[test]
    fn saturate_grid_corner() {
        let g4 = fixtures::g4();
        let all: BTreeSet<VertexIx> = (0..4).collect();
        assert_eq!(saturate(&g4, &vset(&g4, &["1_1"])), all);
    }

    #[test]
    fn saturate_on_concave_graph_breaks_hereditarity() {
        let g2 = fixtures::g2();
        let sat = saturate(&g2, &vset(&g2, &["w"]));
        assert_eq!(sat, vset(&g2, &["v", "w"]));
        assert!(!is_hereditary(&g2, &sat));
        let tagged = VertexSet::analyse(&g2, sat);
        assert!(tagged.saturated && !tagged.hereditary);
    }

    #[test]
    fn saturate_fixpoint_on_saturated_sets() {
        let g4 = fixtures::g4();
        let all: BTreeSet<VertexIx> = (0..4).collect();
        assert_eq!(saturate(&g4, &all), all);
        let empty = BTreeSet::new();
        assert_eq!(saturate(&g4, &empty), empty);
    }

    #[test]
    fn lattice_of_grid_is_trivial() {
        let g4 = fixtures::g4();
        let lattice = enumerate_sat_hered(&g4).unwrap();
        let all: BTreeSet<VertexIx> = (0..4).collect();
        assert_eq!(lattice.sets, vec![BTreeSet::new(), all]);
    }

    #[test]
    fn lattice_of_edgeless_graph_is_full_power_set() {
        let g = crate::graph::build_from_directed_graph(
            vec!["a".into(), "b".into(), "c".into()],
            vec![],
        )
        .unwrap();
        let lattice = enumerate_sat_hered(&g).unwrap();
        assert_eq!(lattice.sets.len(), 8);
    }

    #[test]
    fn lattice_of_concave_graph() {
        // saturation forces v from either {w} or {z}, so only the trivial
        // sets survive
        let g2 = fixtures::g2();
        let lattice = enumerate_sat_hered(&g2).unwrap();
        let all: BTreeSet<VertexIx> = (0..3).collect();
        assert_eq!(lattice.sets, vec![BTreeSet::new(), all]);
    }

    #[test]
    fn lattice_guard() {
        let vertices: Vec<String> = (0..21).map(|i| format!("v{i:02}")).collect();
        let g = crate::graph::build_from_directed_graph(vertices, vec![]).unwrap();
        assert!(matches!(
            enumerate_sat_hered(&g),
            Err(IdealsError::TooLarge { .. })
        ));
    }

    #[test]
    fn lattice_laws_on_fixtures() {
        for g in [fixtures::g1(), fixtures::g2(), fixtures::g4()] {
            let lattice = enumerate_sat_hered(&g).unwrap();
            for a in &lattice.sets {
                for b in &lattice.sets {
                    let m = lattice.meet(a, b);
                    let j = lattice.join(&g, a, b);
                    assert!(lattice.sets.contains(&m));
                    assert!(lattice.sets.contains(&j));
                    // absorption
                    assert_eq!(lattice.join(&g, a, &m), *a);
                    assert_eq!(lattice.meet(a, &j), *a);
                    for c in &lattice.sets {
                        let left = lattice.meet(&lattice.meet(a, b), c);
                        let right = lattice.meet(a, &lattice.meet(b, c));
                        assert_eq!(left, right);
                        let left = lattice.join(&g, &lattice.join(&g, a, b), c);
                        let right = lattice.join(&g, a, &lattice.join(&g, b, c));
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_by_empty_and_full() {
        let g4 = fixtures::g4();
        let empty = BTreeSet::new();
        let q = quotient_graph(&g4, &empty).unwrap();
        assert!(graphs_equal(&q, &g4));
        let all: BTreeSet<VertexIx> = (0..4).collect();
        let q = quotient_graph(&g4, &all).unwrap();
        assert_eq!(q.skeleton().vertex_count(), 0);
    }

    #[test]
    fn quotient_rejects_bad_sets() {
        let g4 = fixtures::g4();
        // {1_1} is hereditary but not saturated
        let err = quotient_graph(&g4, &vset(&g4, &["1_1"])).unwrap_err();
        assert!(matches!(err, IdealsError::NotSaturated(_)));
        // {0_0} is not hereditary
        let err = quotient_graph(&g4, &vset(&g4, &["0_0"])).unwrap_err();
        assert!(matches!(err, IdealsError::NotHereditary(_)));
    }

    #[test]
    fn restriction_examples() {
        let g2 = fixtures::g2();
        let r = restriction_graph(&g2, &vset(&g2, &["w"])).unwrap();
        assert_eq!(r.skeleton().vertex_count(), 1);
        assert_eq!(r.skeleton().edge_count(), 0);

        let g4 = fixtures::g4();
        let all: BTreeSet<VertexIx> = (0..4).collect();
        let r = restriction_graph(&g4, &all).unwrap();
        assert!(graphs_equal(&r, &g4));
        let err = restriction_graph(&g4, &vset(&g4, &["0_0"])).unwrap_err();
        assert!(matches!(err, IdealsError::NotHereditary(_)));
    }

    #[test]
    fn closure_operator_laws() {
        let g1 = fixtures::g1();
        let n = g1.skeleton().vertex_count();
        // a couple of sample sets
        let samples: Vec<BTreeSet<VertexIx>> = vec![
            BTreeSet::new(),
            (0..n).step_by(3).collect(),
            (0..n / 2).collect(),
        ];
        for s in &samples {
            let hc = hereditary_closure(&g1, s);
            assert!(s.is_subset(&hc));
            assert_eq!(hereditary_closure(&g1, &hc), hc);
            let sat = saturate(&g1, s);
            assert!(s.is_subset(&sat));
            assert_eq!(saturate(&g1, &sat), sat);
        }
        // monotone
        let small = vset(&g1, &["3_2"]);
        let large = vset(&g1, &["3_2", "2_2"]);
        assert!(saturate(&g1, &small).is_subset(&saturate(&g1, &large)));
        assert!(hereditary_closure(&g1, &small).is_subset(&hereditary_closure(&g1, &large)));
    }
}
