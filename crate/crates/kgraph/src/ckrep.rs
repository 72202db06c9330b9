//! The boundary-path representation: one sparse 0/1 matrix per path, acting
//! on the basis of complete boundary paths, together with exact verification
//! of the Cuntz-Krieger relations, the spanning formula, forced zeros, the
//! gauge projection, and the fixed-point-algebra block structure.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::boundary::{boundary_paths, BoundaryPath};
use crate::degree::Degree;
use crate::graph::KGraph;
use crate::matrix::{matrix_as_vector, rational_rank, IntMatrix};
use crate::path::Path;
use crate::pathspace::{is_locally_convex, LePathCache};
#[cfg(test)]
use crate::pathspace::le_paths;
use crate::skeleton::VertexIx;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("graph is not locally convex; every Cuntz-Krieger family on it degenerates")]
    NotLocallyConvex,
    #[error("skeleton has a directed cycle, so the complete boundary-path space is infinite")]
    InfiniteBoundary,
}

/// The concrete Cuntz-Krieger family on the space spanned by the complete
/// boundary paths of an acyclic, locally convex graph. Each generator
/// `S_lambda` maps the basis path `x` with `r(x) = s(lambda)` to
/// `lambda x` and kills the rest.
#[derive(Debug)]
pub struct CKRep<'g> {
    graph: &'g KGraph,
    basis: Vec<BoundaryPath>,
    paths: Vec<Path>,
    path_ix: HashMap<Path, usize>,
    mats: Vec<IntMatrix>,
    by_range: Vec<Vec<usize>>,
    by_source: Vec<Vec<usize>>,
}

/// Build the boundary-path representation. Fails on graphs that are not
/// locally convex (no nonzero family exists) and on cyclic skeletons (the
/// space is infinite and is never silently truncated).
pub fn build_rep(g: &KGraph) -> Result<CKRep<'_>, RepError> {
    if !is_locally_convex(g).0 {
        return Err(RepError::NotLocallyConvex);
    }
    let Some(max_degree) = g.max_path_degree() else {
        return Err(RepError::InfiniteBoundary);
    };
    let sk = g.skeleton();

    let mut basis: Vec<BoundaryPath> = Vec::new();
    for v in 0..sk.vertex_count() {
        for x in boundary_paths(g, v, &max_degree) {
            debug_assert!(x.is_complete(), "acyclic enumeration cannot truncate");
            basis.push(x);
        }
    }
    basis.sort();
    let basis_ix: HashMap<Path, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, x)| (x.prefix.clone(), i))
        .collect();
    let mut basis_by_range: Vec<Vec<usize>> = vec![Vec::new(); sk.vertex_count()];
    for (i, x) in basis.iter().enumerate() {
        basis_by_range[x.range()].push(i);
    }

    let mut paths: Vec<Path> = Vec::new();
    for v in 0..sk.vertex_count() {
        crate::pathspace::walk_paths(g, v, &max_degree, |p, _| paths.push(p.clone()));
    }
    paths.sort();
    let path_ix: HashMap<Path, usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();

    let dim = basis.len();
    let mut mats = Vec::with_capacity(paths.len());
    let mut by_range: Vec<Vec<usize>> = vec![Vec::new(); sk.vertex_count()];
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); sk.vertex_count()];
    for (i, lambda) in paths.iter().enumerate() {
        let source = lambda.source(sk);
        by_range[lambda.range()].push(i);
        by_source[source].push(i);
        let mut entries = Vec::new();
        for &col in &basis_by_range[source] {
            let image = g
                .compose(lambda, &basis[col].prefix)
                .expect("source matches basis range");
            let row = *basis_ix
                .get(&image)
                .expect("composite of a path with a complete boundary path is complete");
            entries.push((row, col));
        }
        mats.push(IntMatrix::from_entries(dim, entries));
    }

    Ok(CKRep {
        graph: g,
        basis,
        paths,
        path_ix,
        mats,
        by_range,
        by_source,
    })
}

impl<'g> CKRep<'g> {
    pub fn graph(&self) -> &'g KGraph {
        self.graph
    }

    /// Basis of complete boundary paths, in canonical order.
    pub fn basis(&self) -> &[BoundaryPath] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every path of the (finite) path category, sorted.
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn matrix(&self, path: &Path) -> Option<&IntMatrix> {
        self.path_ix.get(path).map(|&i| &self.mats[i])
    }

    pub fn vertex_matrix(&self, v: VertexIx) -> &IntMatrix {
        self.matrix(&self.graph.vertex_path(v))
            .expect("vertex paths are always present")
    }

    fn mat(&self, i: usize) -> &IntMatrix {
        &self.mats[i]
    }

    /// Path indices grouped by range vertex.
    pub fn paths_with_range(&self, v: VertexIx) -> &[usize] {
        &self.by_range[v]
    }

    pub fn paths_with_source(&self, v: VertexIx) -> &[usize] {
        &self.by_source[v]
    }
}

/// One failed identity among the relations that define a Cuntz-Krieger
/// family. Paths are rendered with edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CkViolation {
    VertexProjections { detail: String },
    Composition { outer: String, inner: String },
    SourceProjection { path: String },
    VertexSum { vertex: String, m: Degree },
}

/// Check the four defining relations with exact integer arithmetic:
/// (1) the vertex matrices are mutually orthogonal projections,
/// (2) composition is multiplicative on pairs with degrees at most `cap`,
/// (3) each generator's source projection is its vertex projection, and
/// (4) at every vertex the maximally-extended paths of each degree at most
///     `cap` resolve the vertex projection.
pub fn verify_ck_relations(rep: &CKRep<'_>, cap: &Degree) -> Vec<CkViolation> {
    let g = rep.graph();
    let sk = g.skeleton();
    let mut out = Vec::new();

    // (1)
    for u in 0..sk.vertex_count() {
        let mu = rep.vertex_matrix(u);
        if mu.mul(mu) != *mu || mu.transpose() != *mu {
            out.push(CkViolation::VertexProjections {
                detail: format!("S_[{}] is not a projection", sk.vertex_id(u)),
            });
        }
        for v in (u + 1)..sk.vertex_count() {
            if !mu.mul(rep.vertex_matrix(v)).is_zero() {
                out.push(CkViolation::VertexProjections {
                    detail: format!(
                        "S_[{}] S_[{}] is nonzero",
                        sk.vertex_id(u),
                        sk.vertex_id(v)
                    ),
                });
            }
        }
    }

    // (2)
    for (i, inner) in rep.paths().iter().enumerate() {
        if !inner.degree().partial_le(cap) {
            continue;
        }
        for &o in rep.paths_with_source(inner.range()) {
            let outer = &rep.paths()[o];
            if !outer.degree().partial_le(cap) {
                continue;
            }
            let composite = g.compose(outer, inner).expect("composable by construction");
            let expected = rep
                .matrix(&composite)
                .expect("all paths have matrices");
            if rep.mat(o).mul(rep.mat(i)) != *expected {
                out.push(CkViolation::Composition {
                    outer: outer.display(sk),
                    inner: inner.display(sk),
                });
            }
        }
    }

    // (3)
    for (i, lambda) in rep.paths().iter().enumerate() {
        if !lambda.degree().partial_le(cap) {
            continue;
        }
        let s = rep.mat(i);
        if s.transpose().mul(s) != *rep.vertex_matrix(lambda.source(sk)) {
            out.push(CkViolation::SourceProjection {
                path: lambda.display(sk),
            });
        }
    }

    // (4)
    let mut cache = LePathCache::new();
    for v in 0..sk.vertex_count() {
        for m in Degree::all_below(cap) {
            let mut sum = IntMatrix::zero(rep.dim());
            for lambda in cache.get(g, v, &m) {
                let s = rep.matrix(lambda).expect("all paths have matrices");
                sum = sum.add(&s.mul(&s.transpose()));
            }
            if sum != *rep.vertex_matrix(v) {
                out.push(CkViolation::VertexSum {
                    vertex: sk.vertex_id(v).to_string(),
                    m,
                });
            }
        }
    }

    out.sort();
    out
}

/// Check that the edge-level resolutions (one relation per vertex and
/// received colour) hold, and that the degree-indexed relation (4) holds for
/// every `m <= cap`; returns whether the two verdicts agree. On locally
/// convex graphs the two families of relations are equivalent.
pub fn verify_edge_level_equivalence(rep: &CKRep<'_>, cap: &Degree) -> bool {
    let g = rep.graph();
    let sk = g.skeleton();

    let mut edge_ok = true;
    for v in 0..sk.vertex_count() {
        for colour in 0..g.k() {
            let edges = sk.in_edges(v, colour);
            if edges.is_empty() {
                continue;
            }
            let mut sum = IntMatrix::zero(rep.dim());
            for &e in edges {
                let path = g.path_from_word(v, &[e]);
                let s = rep.matrix(&path).expect("edge paths have matrices");
                sum = sum.add(&s.mul(&s.transpose()));
            }
            if sum != *rep.vertex_matrix(v) {
                edge_ok = false;
            }
        }
    }

    let mut cache = LePathCache::new();
    let mut rel4_ok = true;
    for v in 0..sk.vertex_count() {
        for m in Degree::all_below(cap) {
            let mut sum = IntMatrix::zero(rep.dim());
            for lambda in cache.get(g, v, &m) {
                let s = rep.matrix(lambda).expect("all paths have matrices");
                sum = sum.add(&s.mul(&s.transpose()));
            }
            if sum != *rep.vertex_matrix(v) {
                rel4_ok = false;
            }
        }
    }

    edge_ok == rel4_ok
}

/// A failed spanning identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SpanningViolation {
    /// `S_lambda* S_mu` differs from the sum over common extensions at `q`.
    Expansion {
        lambda: String,
        mu: String,
        q: Degree,
    },
    /// For `lambda, mu` maximally extended within `q`, `S_lambda* S_mu` is
    /// not `delta_{lambda,mu}` times the source projection.
    Orthogonality {
        lambda: String,
        mu: String,
        q: Degree,
    },
}

/// Verify the spanning formula: for every pair with a common range and
/// degrees at most `cap`, the product `S_lambda* S_mu` expands as the sum of
/// `S_alpha S_beta*` over common extensions, checked at `q = d(lambda) v
/// d(mu)` and at `q = cap`. Also verifies that distinct maximally-extended
/// paths at a common vertex have orthogonal ranges, for every `q <= cap`.
/// Pairs with distinct ranges multiply to zero by relation (1) and are not
/// re-enumerated here.
pub fn verify_spanning_formula(rep: &CKRep<'_>, cap: &Degree) -> Vec<SpanningViolation> {
    let g = rep.graph();
    let sk = g.skeleton();
    let mut out = Vec::new();
    let mut cache = LePathCache::new();

    for v in 0..sk.vertex_count() {
        for &il in rep.paths_with_range(v) {
            let lambda = &rep.paths()[il];
            if !lambda.degree().partial_le(cap) {
                continue;
            }
            for &im in rep.paths_with_range(v) {
                let mu = &rep.paths()[im];
                if !mu.degree().partial_le(cap) {
                    continue;
                }
                let lhs = rep.mat(il).transpose().mul(rep.mat(im));
                let mut qs = vec![lambda.degree().join(&mu.degree())];
                if !qs.contains(cap) {
                    qs.push(cap.clone());
                }
                for q in qs {
                    let mut rhs = IntMatrix::zero(rep.dim());
                    for (alpha, beta) in
                        crate::pathspace::common_extensions_cached(g, lambda, mu, &q, &mut cache)
                    {
                        let sa = rep.matrix(&alpha).expect("all paths have matrices");
                        let sb = rep.matrix(&beta).expect("all paths have matrices");
                        rhs = rhs.add(&sa.mul(&sb.transpose()));
                    }
                    if lhs != rhs {
                        out.push(SpanningViolation::Expansion {
                            lambda: lambda.display(sk),
                            mu: mu.display(sk),
                            q,
                        });
                    }
                }
            }
        }
    }

    // orthogonal range projections within each maximally-extended set
    for q in Degree::all_below(cap) {
        for v in 0..sk.vertex_count() {
            let paths = cache.get(g, v, &q).to_vec();
            for lambda in &paths {
                let sl = rep.matrix(lambda).expect("all paths have matrices");
                for mu in &paths {
                    let sm = rep.matrix(mu).expect("all paths have matrices");
                    let product = sl.transpose().mul(sm);
                    let expected = if lambda == mu {
                        rep.vertex_matrix(lambda.source(sk)).clone()
                    } else {
                        IntMatrix::zero(rep.dim())
                    };
                    if product != expected {
                        out.push(SpanningViolation::Orthogonality {
                            lambda: lambda.display(sk),
                            mu: mu.display(sk),
                            q: q.clone(),
                        });
                    }
                }
            }
        }
    }

    out.sort();
    out.dedup();
    out
}

/// The generators provably zero in every Cuntz-Krieger family, as paths:
/// an edge is killed when a perpendicular colour exists at its range but
/// not at its source; a vertex is killed when some received colour consists
/// entirely of killed edges; killed endpoints kill their edges. Iterated to
/// a fixpoint. Empty exactly when the graph is locally convex.
pub fn forced_zero_generators(g: &KGraph) -> BTreeSet<Path> {
    let sk = g.skeleton();
    let mut dead_edges: HashSet<usize> = HashSet::new();
    let mut dead_vertices: HashSet<VertexIx> = HashSet::new();

    for v in 0..sk.vertex_count() {
        for i in 0..g.k() {
            for &e in sk.in_edges(v, i) {
                let s = sk.edge(e).source;
                let lethal = (0..g.k()).any(|j| {
                    j != i && sk.receives_colour(v, j) && !sk.receives_colour(s, j)
                });
                if lethal {
                    dead_edges.insert(e);
                }
            }
        }
    }

    loop {
        let mut changed = false;
        for v in 0..sk.vertex_count() {
            if dead_vertices.contains(&v) {
                continue;
            }
            for i in 0..g.k() {
                let edges = sk.in_edges(v, i);
                if !edges.is_empty() && edges.iter().all(|e| dead_edges.contains(e)) {
                    dead_vertices.insert(v);
                    changed = true;
                    break;
                }
            }
        }
        for e in 0..sk.edge_count() {
            if dead_edges.contains(&e) {
                continue;
            }
            let data = sk.edge(e);
            if dead_vertices.contains(&data.range) || dead_vertices.contains(&data.source) {
                dead_edges.insert(e);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut out = BTreeSet::new();
    for v in dead_vertices {
        out.insert(g.vertex_path(v));
    }
    for e in dead_edges {
        out.insert(g.path_from_word(sk.edge(e).range, &[e]));
    }
    out
}

/// Exact complex-rational scalars for span elements.
pub type Coefficient = Complex<BigRational>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpanError {
    #[error("term ({left}, {right}) does not have a common source")]
    SourceMismatch { left: String, right: String },
}

/// A finite linear combination of `S_alpha S_beta*` words with common
/// sources per term. Terms are kept normalised: merged by `(alpha, beta)`
/// and purged of zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanElement {
    terms: Vec<(Path, Path, Coefficient)>,
}

impl SpanElement {
    pub fn new(
        g: &KGraph,
        terms: Vec<(Path, Path, Coefficient)>,
    ) -> Result<Self, SpanError> {
        let sk = g.skeleton();
        let mut merged: BTreeMap<(Path, Path), Coefficient> = BTreeMap::new();
        for (alpha, beta, coeff) in terms {
            if alpha.source(sk) != beta.source(sk) {
                return Err(SpanError::SourceMismatch {
                    left: alpha.display(sk),
                    right: beta.display(sk),
                });
            }
            let slot = merged
                .entry((alpha, beta))
                .or_insert_with(Coefficient::zero);
            *slot = slot.clone() + coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b), c)| (a, b, c))
            .collect();
        Ok(SpanElement { terms })
    }

    pub fn terms(&self) -> &[(Path, Path, Coefficient)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Evaluate in a representation, as a dense-keyed sparse complex matrix.
    pub fn evaluate(&self, rep: &CKRep<'_>) -> BTreeMap<(usize, usize), Coefficient> {
        let mut out: BTreeMap<(usize, usize), Coefficient> = BTreeMap::new();
        for (alpha, beta, coeff) in &self.terms {
            let sa = rep.matrix(alpha).expect("span paths live in the graph");
            let sb = rep.matrix(beta).expect("span paths live in the graph");
            for (r, c, v) in sa.mul(&sb.transpose()).entries() {
                let slot = out.entry((r, c)).or_insert_with(Coefficient::zero);
                *slot = slot.clone()
                    + coeff.clone() * Coefficient::from(BigRational::from_integer(v.into()));
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// The combinatorial shadow of averaging over the gauge action: keep
/// exactly the terms whose two legs have equal degree. Idempotent.
pub fn gauge_project(e: &SpanElement) -> SpanElement {
    SpanElement {
        terms: e
            .terms
            .iter()
            .filter(|(a, b, _)| a.degree() == b.degree())
            .cloned()
            .collect(),
    }
}

/// Block structure of the degree-zero part of the span at level `q`: for
/// each degree `p <= q` and source vertex, the dimension of the matrix
/// block carried by the maximally-extended paths of degree `p`, plus the
/// multiplicities with which lower levels include into level `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreBlockReport {
    pub q: Degree,
    /// `(p, source vertex) -> |{lambda in Λ^{<=q} : d = p, s = v}|`,
    /// zero entries omitted.
    pub blocks: BTreeMap<(Degree, VertexIx), usize>,
    pub inclusions: Vec<CoreInclusion>,
}

/// How the level-`from_level` blocks sit inside the level-`q` blocks: a
/// block with source `v` maps into the block at `(p + d(alpha), s(alpha))`
/// with multiplicity the number of maximally-extended `alpha` of that
/// degree and source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreInclusion {
    pub from_level: Degree,
    pub per_vertex: BTreeMap<VertexIx, BTreeMap<(Degree, VertexIx), usize>>,
}

pub fn core_report(g: &KGraph, q: &Degree) -> CoreBlockReport {
    let sk = g.skeleton();
    let mut cache = LePathCache::new();

    let level_blocks = |cache: &mut LePathCache, level: &Degree| {
        let mut blocks: BTreeMap<(Degree, VertexIx), usize> = BTreeMap::new();
        for v in 0..sk.vertex_count() {
            for lambda in cache.get(g, v, level) {
                *blocks
                    .entry((lambda.degree(), lambda.source(sk)))
                    .or_insert(0) += 1;
            }
        }
        blocks
    };

    let blocks = level_blocks(&mut cache, q);

    let mut inclusions = Vec::new();
    for from_level in Degree::all_below(q) {
        if &from_level == q {
            continue;
        }
        let diff = q.checked_sub(&from_level).unwrap();
        let from_blocks = level_blocks(&mut cache, &from_level);
        let sources: BTreeSet<VertexIx> = from_blocks.keys().map(|(_, v)| *v).collect();
        let mut per_vertex = BTreeMap::new();
        for v in sources {
            let mut mult: BTreeMap<(Degree, VertexIx), usize> = BTreeMap::new();
            for alpha in cache.get(g, v, &diff) {
                *mult
                    .entry((alpha.degree(), alpha.source(sk)))
                    .or_insert(0) += 1;
            }
            per_vertex.insert(v, mult);
        }
        inclusions.push(CoreInclusion {
            from_level,
            per_vertex,
        });
    }

    CoreBlockReport {
        q: q.clone(),
        blocks,
        inclusions,
    }
}

/// Linear dimension over the rationals of the span of all `S_alpha S_beta*`
/// with a common source.
pub fn span_dimension(rep: &CKRep<'_>) -> usize {
    let mut seen: HashSet<Vec<(usize, i64)>> = HashSet::new();
    let mut vectors = Vec::new();
    for v in 0..rep.graph().skeleton().vertex_count() {
        let group = rep.paths_with_source(v);
        for &ia in group {
            for &ib in group {
                let m = rep.mat(ia).mul(&rep.mat(ib).transpose());
                let vec = matrix_as_vector(&m);
                let key: Vec<(usize, i64)> = vec.iter().map(|(&k, &x)| (k, x)).collect();
                if seen.insert(key) {
                    vectors.push(vec);
                }
            }
        }
    }
    rational_rank(vectors)
}
