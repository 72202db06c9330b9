//! Path-space queries: `Λ^m(v)`, the maximally-extended sets `Λ^{<=q}(v)`,
//! common extensions, and the structural predicates built on them.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::degree::Degree;
use crate::graph::KGraph;
use crate::path::Path;
use crate::skeleton::{EdgeIx, VertexIx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathSpaceError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// All paths with range `v`, any degree `<= bound`, visited through their
/// normal-form words. `emit` receives each path exactly once together with
/// its source; enumeration order is word-lexicographic.
pub(crate) fn walk_paths<F: FnMut(&Path, VertexIx)>(
    g: &KGraph,
    v: VertexIx,
    bound: &Degree,
    mut emit: F,
) {
    let sk = g.skeleton();
    let k = g.k();
    #[allow(clippy::too_many_arguments)]
    fn rec<F: FnMut(&Path, VertexIx)>(
        g: &KGraph,
        word: &mut Vec<EdgeIx>,
        counts: &mut Vec<u32>,
        at: VertexIx,
        min_colour: usize,
        bound: &Degree,
        range: VertexIx,
        emit: &mut F,
    ) {
        let sk = g.skeleton();
        let path = {
            let mut blocks = vec![Vec::new(); g.k()];
            for &e in word.iter() {
                blocks[sk.edge(e).colour].push(e);
            }
            Path::from_blocks(sk, range, blocks)
        };
        emit(&path, at);
        for colour in min_colour..g.k() {
            if counts[colour] >= bound.get(colour) {
                continue;
            }
            for &e in sk.in_edges(at, colour) {
                word.push(e);
                counts[colour] += 1;
                rec(g, word, counts, sk.edge(e).source, colour, bound, range, emit);
                counts[colour] -= 1;
                word.pop();
            }
        }
    }
    let mut word = Vec::new();
    let mut counts = vec![0u32; k];
    debug_assert!(v < sk.vertex_count());
    rec(g, &mut word, &mut counts, v, 0, bound, v, &mut emit);
}

/// `Λ^m(v)`: all paths with range `v` and degree exactly `m`, sorted.
pub fn paths_of_degree(g: &KGraph, v: VertexIx, m: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    walk_paths(g, v, m, |path, _| {
        if &path.degree() == m {
            out.push(path.clone());
        }
    });
    out.sort();
    out
}

/// Membership test for `Λ^{<=q}`: degree at most `q` and no extension stays
/// within `q`.
pub fn is_le_path(g: &KGraph, path: &Path, q: &Degree) -> bool {
    let d = path.degree();
    if !d.partial_le(q) {
        return false;
    }
    let s = path.source(g.skeleton());
    (0..g.k()).all(|i| d.get(i) == q.get(i) || !g.skeleton().receives_colour(s, i))
}

/// `Λ^{<=q}(v)`: paths of degree at most `q` with range `v` that cannot be
/// extended within `q`. Never empty; sorted.
pub fn le_paths(g: &KGraph, v: VertexIx, q: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    walk_paths(g, v, q, |path, source| {
        let d = path.degree();
        let maximal =
            (0..g.k()).all(|i| d.get(i) == q.get(i) || !g.skeleton().receives_colour(source, i));
        if maximal {
            out.push(path.clone());
        }
    });
    out.sort();
    debug_assert!(!out.is_empty());
    out
}

/// Memoised `Λ^{<=q}(v)` lookups for the verification suites, which query
/// the same vertex-degree combinations many times over.
#[derive(Default)]
pub struct LePathCache {
    map: std::collections::HashMap<(VertexIx, Degree), Vec<Path>>,
}

impl LePathCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, g: &KGraph, v: VertexIx, q: &Degree) -> &[Path] {
        self.map
            .entry((v, q.clone()))
            .or_insert_with(|| le_paths(g, v, q))
    }
}

/// All pairs `(alpha, beta)` with `lambda alpha = mu beta` landing in
/// `Λ^{<=q}(r(lambda))`, sorted.
pub fn common_extensions(
    g: &KGraph,
    lambda: &Path,
    mu: &Path,
    q: &Degree,
) -> Result<Vec<(Path, Path)>, PathSpaceError> {
    if lambda.range() != mu.range() {
        return Err(PathSpaceError::PreconditionViolated(
            "paths must have a common range".into(),
        ));
    }
    let (dl, dm) = (lambda.degree(), mu.degree());
    if !dl.partial_le(q) || !dm.partial_le(q) {
        return Err(PathSpaceError::PreconditionViolated(
            "both degrees must be bounded by q".into(),
        ));
    }
    let mut cache = LePathCache::new();
    Ok(common_extensions_cached(g, lambda, mu, q, &mut cache))
}

/// Preconditions already checked by the caller.
pub(crate) fn common_extensions_cached(
    g: &KGraph,
    lambda: &Path,
    mu: &Path,
    q: &Degree,
    cache: &mut LePathCache,
) -> Vec<(Path, Path)> {
    let (dl, dm) = (lambda.degree(), mu.degree());
    let mut out = Vec::new();
    for tau in cache.get(g, lambda.range(), q).to_vec() {
        let dt = tau.degree();
        if !dl.partial_le(&dt) || !dm.partial_le(&dt) {
            continue;
        }
        let (head, alpha) = g
            .factorise(&tau, &dl, &dt.checked_sub(&dl).unwrap())
            .expect("degrees fit");
        if &head != lambda {
            continue;
        }
        let (head, beta) = g
            .factorise(&tau, &dm, &dt.checked_sub(&dm).unwrap())
            .expect("degrees fit");
        if &head != mu {
            continue;
        }
        out.push((alpha, beta));
    }
    out.sort();
    out
}

/// A failure of local convexity: perpendicular edges at `vertex` where one
/// target does not receive the other colour. Colours are 0-based here and
/// 1-based in display output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConvexityWitness {
    pub vertex: VertexIx,
    pub colour_lo: usize,
    pub colour_hi: usize,
    pub edge_lo: EdgeIx,
    pub edge_hi: EdgeIx,
}

impl ConvexityWitness {
    pub fn display(&self, g: &KGraph) -> String {
        let sk = g.skeleton();
        format!(
            "({}, {}, {}, {}, {})",
            sk.vertex_id(self.vertex),
            self.colour_lo + 1,
            self.colour_hi + 1,
            sk.edge_id(self.edge_lo),
            sk.edge_id(self.edge_hi),
        )
    }
}

/// Local convexity: whenever a vertex receives edges of two colours, the
/// source of each still receives the other colour. Returns all violating
/// edge pairs.
pub fn is_locally_convex(g: &KGraph) -> (bool, Vec<ConvexityWitness>) {
    let sk = g.skeleton();
    let mut witnesses = Vec::new();
    for v in 0..sk.vertex_count() {
        for i in 0..g.k() {
            for j in (i + 1)..g.k() {
                for &lo in sk.in_edges(v, i) {
                    for &hi in sk.in_edges(v, j) {
                        let lo_ok = sk.receives_colour(sk.edge(lo).source, j);
                        let hi_ok = sk.receives_colour(sk.edge(hi).source, i);
                        if !(lo_ok && hi_ok) {
                            witnesses.push(ConvexityWitness {
                                vertex: v,
                                colour_lo: i,
                                colour_hi: j,
                                edge_lo: lo,
                                edge_hi: hi,
                            });
                        }
                    }
                }
            }
        }
    }
    witnesses.sort();
    (witnesses.is_empty(), witnesses)
}

/// For each vertex, the set of colours it receives no edge of. The graph
/// has no sources iff every set is empty.
pub fn source_report(g: &KGraph) -> BTreeMap<VertexIx, BTreeSet<usize>> {
    let sk = g.skeleton();
    (0..sk.vertex_count())
        .map(|v| {
            let missing = (0..g.k()).filter(|&i| !sk.receives_colour(v, i)).collect();
            (v, missing)
        })
        .collect()
}

/// Failures found by [`check_le_lemmas`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LeLemmaCounterexample {
    /// `lambda` in `Λ^{<=m}` and `alpha` in `Λ^{<=n}(s(lambda))`, but the
    /// composite is not in `Λ^{<=(m+n)}`.
    Extension {
        m: Degree,
        n: Degree,
        lambda: Path,
        alpha: Path,
    },
    /// `path` lies in `Λ^{<=m}(v)` but is not of the form
    /// `lambda' lambda''` with `lambda'` in `Λ^{<=(m-e_j)}(v)` and
    /// `lambda''` in `Λ^{<=e_j}(s(lambda'))`. `j` is 0-based.
    MissingFactorisation {
        v: VertexIx,
        m: Degree,
        j: usize,
        path: Path,
    },
    /// A composite of that form which escapes `Λ^{<=m}(v)`; cannot occur.
    ExtraFactorisation {
        v: VertexIx,
        m: Degree,
        j: usize,
        path: Path,
    },
}

/// Exhaustively test, for all `m, n <= cap`:
/// (a) composing `Λ^{<=m}` with `Λ^{<=n}` lands in `Λ^{<=(m+n)}`, and
/// (b) the one-edge-at-a-time factorisation of `Λ^{<=m}(v)` through each
///     coordinate `j` with `m_j >= 1`.
///
/// (a) holds in every k-graph; (b) can fail when the graph is not locally
/// convex, and the returned counterexamples say exactly where.
pub fn check_le_lemmas(g: &KGraph, cap: &Degree) -> Vec<LeLemmaCounterexample> {
    let sk = g.skeleton();
    let mut out = Vec::new();
    let degrees = Degree::all_below(cap);

    // (a) composition stays maximally extended
    for m in &degrees {
        let lambdas: Vec<Path> = (0..sk.vertex_count())
            .flat_map(|v| le_paths(g, v, m))
            .collect();
        for n in &degrees {
            let sum = m.add(n);
            for lambda in &lambdas {
                for alpha in le_paths(g, lambda.source(sk), n) {
                    let composite = g.compose(lambda, &alpha).expect("ranges match");
                    if !is_le_path(g, &composite, &sum) {
                        out.push(LeLemmaCounterexample::Extension {
                            m: m.clone(),
                            n: n.clone(),
                            lambda: lambda.clone(),
                            alpha,
                        });
                    }
                }
            }
        }
    }

    // (b) factorisation through a single coordinate
    for v in 0..sk.vertex_count() {
        for m in &degrees {
            if m.is_zero() {
                continue;
            }
            let lhs: BTreeSet<Path> = le_paths(g, v, m).into_iter().collect();
            for j in 0..g.k() {
                if m.get(j) == 0 {
                    continue;
                }
                let e_j = Degree::unit(g.k(), j);
                let m_minus = m.checked_sub(&e_j).unwrap();
                let mut rhs = BTreeSet::new();
                for head in le_paths(g, v, &m_minus) {
                    for tail in le_paths(g, head.source(sk), &e_j) {
                        rhs.insert(g.compose(&head, &tail).expect("ranges match"));
                    }
                }
                for path in lhs.difference(&rhs) {
                    out.push(LeLemmaCounterexample::MissingFactorisation {
                        v,
                        m: m.clone(),
                        j,
                        path: path.clone(),
                    });
                }
                for path in rhs.difference(&lhs) {
                    out.push(LeLemmaCounterexample::ExtraFactorisation {
                        v,
                        m: m.clone(),
                        j,
                        path: path.clone(),
                    });
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn vx(g: &KGraph, id: &str) -> VertexIx {
        g.skeleton().vertex(id).unwrap()
    }

    #[test]
    fn grid_paths_are_unique() {
        let g1 = fixtures::g1();
        let v = vx(&g1, "0_0");
        assert_eq!(paths_of_degree(&g1, v, &Degree::new(vec![3, 2])).len(), 1);
        assert_eq!(paths_of_degree(&g1, v, &Degree::new(vec![1, 1])).len(), 1);
        // nothing of that degree leaves the grid
        assert!(paths_of_degree(&g1, v, &Degree::new(vec![4, 0])).is_empty());
    }

    #[test]
    fn degree_zero_paths_are_vertices() {
        let g3 = fixtures::g3();
        let u = vx(&g3, "u");
        let paths = paths_of_degree(&g3, u, &Degree::zero(2));
        assert_eq!(paths, vec![g3.vertex_path(u)]);
    }

    #[test]
    fn loop_graph_single_path_per_length() {
        let g5 = fixtures::g5();
        let v = vx(&g5, "v");
        for n in 0..=10 {
            assert_eq!(paths_of_degree(&g5, v, &Degree::new(vec![n])).len(), 1);
        }
    }

    #[test]
    fn two_cycle_single_path_per_length() {
        let g = crate::graph::build_from_directed_graph(
            vec!["a".into(), "b".into()],
            vec![
                ("x".into(), "a".into(), "b".into()),
                ("y".into(), "b".into(), "a".into()),
            ],
        )
        .unwrap();
        for v in 0..2 {
            for n in 0..=6 {
                assert_eq!(paths_of_degree(&g, v, &Degree::new(vec![n])).len(), 1);
            }
        }
    }

    #[test]
    fn le_paths_g2() {
        let g2 = fixtures::g2();
        let v = vx(&g2, "v");
        let got = le_paths(&g2, v, &Degree::new(vec![1, 1]));
        let ids: Vec<String> = got
            .iter()
            .map(|p| p.display(g2.skeleton()))
            .collect();
        // degree-lex order puts the dashed edge (degree (0,1)) first
        assert_eq!(ids, vec!["f".to_string(), "e".to_string()]);
        // a vertex receiving nothing is its own maximal extension
        let w = vx(&g2, "w");
        for q in [Degree::zero(2), Degree::new(vec![2, 3])] {
            assert_eq!(le_paths(&g2, w, &q), vec![g2.vertex_path(w)]);
        }
    }

    #[test]
    fn le_paths_grid_corner() {
        let g4 = fixtures::g4();
        let v = vx(&g4, "0_0");
        let got = le_paths(&g4, v, &Degree::new(vec![1, 1]));
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].degree(), Degree::new(vec![1, 1]));
    }

    #[test]
    fn no_source_graphs_match_exact_degree() {
        let g3 = fixtures::g3();
        for v in 0..2 {
            for q in Degree::all_below(&Degree::new(vec![2, 2])) {
                let le: BTreeSet<Path> = le_paths(&g3, v, &q).into_iter().collect();
                let exact: BTreeSet<Path> = paths_of_degree(&g3, v, &q).into_iter().collect();
                assert_eq!(le, exact);
            }
        }
    }

    #[test]
    fn common_extension_of_paper_square() {
        let g1 = fixtures::g1();
        let v = vx(&g1, "2_1");
        let e = g1.path_from_word(v, &[fixtures::g1_edge(&g1, "e")]);
        let f = g1.path_from_word(v, &[fixtures::g1_edge(&g1, "f")]);
        let q = Degree::new(vec![1, 1]);
        let pairs = common_extensions(&g1, &e, &f, &q).unwrap();
        assert_eq!(pairs.len(), 1);
        let (alpha, beta) = &pairs[0];
        assert_eq!(alpha.word(), vec![fixtures::g1_edge(&g1, "g")]);
        assert_eq!(beta.word(), vec![fixtures::g1_edge(&g1, "h")]);
    }

    #[test]
    fn common_extension_empty_for_concave_pair() {
        let g2 = fixtures::g2();
        let v = vx(&g2, "v");
        let e = g2.path_from_word(v, &[g2.skeleton().edge_by_id("e").unwrap()]);
        let f = g2.path_from_word(v, &[g2.skeleton().edge_by_id("f").unwrap()]);
        let pairs = common_extensions(&g2, &e, &f, &Degree::new(vec![1, 1])).unwrap();
        assert!(pairs.is_empty());
    }

    #[test]
    fn common_extension_diagonal_reduces_to_le_paths() {
        let g1 = fixtures::g1();
        let v = vx(&g1, "2_1");
        let e = g1.path_from_word(v, &[fixtures::g1_edge(&g1, "e")]);
        let q = Degree::new(vec![3, 2]);
        let pairs = common_extensions(&g1, &e, &e, &q).unwrap();
        let expected: Vec<(Path, Path)> = le_paths(&g1, e.source(g1.skeleton()), &q.checked_sub(&e.degree()).unwrap())
            .into_iter()
            .map(|a| (a.clone(), a))
            .collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn common_extension_precondition() {
        let g2 = fixtures::g2();
        let v = vx(&g2, "v");
        let w = vx(&g2, "w");
        let err = common_extensions(
            &g2,
            &g2.vertex_path(v),
            &g2.vertex_path(w),
            &Degree::zero(2),
        )
        .unwrap_err();
        assert!(matches!(err, PathSpaceError::PreconditionViolated(_)));
    }

    #[test]
    fn convexity_of_fixtures() {
        let (ok, witnesses) = is_locally_convex(&fixtures::g2());
        assert!(!ok);
        let g2 = fixtures::g2();
        assert_eq!(witnesses.len(), 1);
        assert_eq!(witnesses[0].display(&g2), "(v, 1, 2, e, f)");
        for g in [fixtures::g1(), fixtures::g3(), fixtures::g4(), fixtures::g5()] {
            assert!(is_locally_convex(&g).0);
        }
    }

    #[test]
    fn source_reports() {
        let g3 = fixtures::g3();
        assert!(source_report(&g3).values().all(|s| s.is_empty()));

        let g1 = fixtures::g1();
        let report = source_report(&g1);
        let corner = vx(&g1, "3_2");
        assert_eq!(report[&corner], BTreeSet::from([0, 1]));
        let origin = vx(&g1, "0_0");
        assert!(report[&origin].is_empty());

        let g2 = fixtures::g2();
        let report = source_report(&g2);
        assert_eq!(report[&vx(&g2, "w")], BTreeSet::from([0, 1]));
        assert_eq!(report[&vx(&g2, "z")], BTreeSet::from([0, 1]));
        assert!(report[&vx(&g2, "v")].is_empty());
    }

    #[test]
    fn le_lemmas_hold_on_convex_fixtures() {
        for g in [fixtures::g1(), fixtures::g4()] {
            assert!(check_le_lemmas(&g, &Degree::new(vec![2, 2])).is_empty());
        }
    }

    #[test]
    fn le_lemma_counterexample_on_g2() {
        let g2 = fixtures::g2();
        let v = vx(&g2, "v");
        let f = g2.path_from_word(v, &[g2.skeleton().edge_by_id("f").unwrap()]);
        let out = check_le_lemmas(&g2, &Degree::new(vec![1, 1]));
        assert!(out.contains(&LeLemmaCounterexample::MissingFactorisation {
            v,
            m: Degree::new(vec![1, 1]),
            j: 1,
            path: f,
        }));
        // part (a) never fails
        assert!(!out
            .iter()
            .any(|c| matches!(c, LeLemmaCounterexample::Extension { .. })));
    }
}
