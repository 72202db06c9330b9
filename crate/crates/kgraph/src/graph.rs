//! Validated k-graphs and the operations that define the path category:
//! composition, factorisation, spellings, and square-set enumeration.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::degree::Degree;
use crate::path::Path;
use crate::skeleton::{EdgeIx, EdgeSpec, Skeleton, SkeletonError, Square, SquareTable, VertexIx};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidateError {
    #[error("bi-coloured pair ({outer}, {inner}) occurs in no square")]
    MissingSquare { outer: String, inner: String },
    #[error("bi-coloured pair ({outer}, {inner}) occurs in more than one square slot")]
    DuplicateSquare { outer: String, inner: String },
    #[error("square ({outer_lo}, {inner_lo}, {outer_hi}, {inner_hi}) is malformed: {reason}")]
    EndpointMismatch {
        outer_lo: String,
        inner_lo: String,
        outer_hi: String,
        inner_hi: String,
        reason: String,
    },
    #[error("cube condition fails for tri-coloured triple ({0}, {1}, {2})")]
    CubeViolation(String, String, String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("paths are not composable: outer has source {outer_source}, inner has range {inner_range}")]
    NotComposable {
        outer_source: String,
        inner_range: String,
    },
    #[error("degree split {m} + {n} does not match path degree {actual}")]
    DegreeMismatch { m: String, n: String, actual: String },
}

/// A tri-coloured triple whose two rewrites to reversed colour order
/// disagree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CubeViolation {
    pub edges: (EdgeIx, EdgeIx, EdgeIx),
}

/// A validated higher-rank graph: skeleton plus square table, with the
/// square bijection indexed for rewriting. Immutable after construction.
#[derive(Debug, Clone)]
pub struct KGraph {
    skeleton: Skeleton,
    squares: SquareTable,
    /// Maps each ordered composable bi-coloured pair `(outer, inner)` to the
    /// other factorisation of the same degree-(e_i + e_j) path.
    swap: HashMap<(EdgeIx, EdgeIx), (EdgeIx, EdgeIx)>,
}

impl KGraph {
    /// Check every square-table invariant against the skeleton and, for
    /// k >= 3, the cube condition.
    pub fn validate(skeleton: Skeleton, squares: SquareTable) -> Result<KGraph, ValidateError> {
        let sk = &skeleton;
        let nice = |e: EdgeIx| sk.edge_id(e).to_string();

        let mut swap: HashMap<(EdgeIx, EdgeIx), (EdgeIx, EdgeIx)> = HashMap::new();
        for sq in squares.squares() {
            let (ol, il, oh, ih) = (sq.outer_lo, sq.inner_lo, sq.outer_hi, sq.inner_hi);
            let mismatch = |reason: &str| ValidateError::EndpointMismatch {
                outer_lo: nice(ol),
                inner_lo: nice(il),
                outer_hi: nice(oh),
                inner_hi: nice(ih),
                reason: reason.to_string(),
            };
            let (ci, cj) = (sk.edge(ol).colour, sk.edge(il).colour);
            if ci >= cj {
                return Err(mismatch("lo pair colours must be increasing"));
            }
            if sk.edge(oh).colour != cj || sk.edge(ih).colour != ci {
                return Err(mismatch("hi pair must use the same colour pair, swapped"));
            }
            if sk.edge(ol).source != sk.edge(il).range {
                return Err(mismatch("lo pair is not composable"));
            }
            if sk.edge(oh).source != sk.edge(ih).range {
                return Err(mismatch("hi pair is not composable"));
            }
            if sk.edge(ol).range != sk.edge(oh).range {
                return Err(mismatch("the two factorisations have different ranges"));
            }
            if sk.edge(il).source != sk.edge(ih).source {
                return Err(mismatch("the two factorisations have different sources"));
            }
            for (a, b, a2, b2) in [(ol, il, oh, ih), (oh, ih, ol, il)] {
                if swap.insert((a, b), (a2, b2)).is_some() {
                    return Err(ValidateError::DuplicateSquare {
                        outer: nice(a),
                        inner: nice(b),
                    });
                }
            }
        }

        // exactly-once: every composable bi-coloured ordered pair must be a
        // slot of some square
        for (outer, inner) in composable_bicoloured_pairs(sk) {
            if !swap.contains_key(&(outer, inner)) {
                return Err(ValidateError::MissingSquare {
                    outer: nice(outer),
                    inner: nice(inner),
                });
            }
        }

        if sk.k() >= 3 {
            let violations = check_cube_condition(sk, &squares);
            if let Some(v) = violations.first() {
                return Err(ValidateError::CubeViolation(
                    nice(v.edges.0),
                    nice(v.edges.1),
                    nice(v.edges.2),
                ));
            }
        }

        Ok(KGraph {
            skeleton,
            squares,
            swap,
        })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn squares(&self) -> &SquareTable {
        &self.squares
    }

    pub fn k(&self) -> usize {
        self.skeleton.k()
    }

    /// Apply the square bijection to an ordered composable bi-coloured pair.
    /// Applying it twice returns the original pair.
    pub fn square_swap(&self, outer: EdgeIx, inner: EdgeIx) -> Option<(EdgeIx, EdgeIx)> {
        self.swap.get(&(outer, inner)).copied()
    }

    fn swap_at(&self, word: &mut [EdgeIx], pos: usize) {
        let key = (word[pos], word[pos + 1]);
        let (a, b) = *self
            .swap
            .get(&key)
            .expect("validated graph has a square for every composable bi-coloured pair");
        word[pos] = a;
        word[pos + 1] = b;
    }

    /// Rewrite a composable edge word into colour-sorted order, always
    /// resolving the leftmost wrongly-ordered adjacent pair first. The
    /// square and cube invariants make the result independent of strategy.
    fn normalize_word(&self, word: &mut [EdgeIx]) {
        let colour = |e: EdgeIx| self.skeleton.edge(e).colour;
        let mut t = 0;
        while t + 1 < word.len() {
            if colour(word[t]) > colour(word[t + 1]) {
                self.swap_at(word, t);
                t = t.saturating_sub(1);
            } else {
                t += 1;
            }
        }
    }

    /// Build the path with the given range from a composable edge word
    /// (outermost first), normalising it.
    pub fn path_from_word(&self, range: VertexIx, word: &[EdgeIx]) -> Path {
        let mut word = word.to_vec();
        self.normalize_word(&mut word);
        let mut blocks = vec![Vec::new(); self.k()];
        for e in word {
            blocks[self.skeleton.edge(e).colour].push(e);
        }
        Path::from_blocks(&self.skeleton, range, blocks)
    }

    /// Identity path at `v`.
    pub fn vertex_path(&self, v: VertexIx) -> Path {
        Path::vertex(v, self.k())
    }

    /// Category composition: `inner` is traversed first, then `outer`.
    pub fn compose(&self, outer: &Path, inner: &Path) -> Result<Path, PathError> {
        let s = outer.source(&self.skeleton);
        if s != inner.range() {
            return Err(PathError::NotComposable {
                outer_source: self.skeleton.vertex_id(s).to_string(),
                inner_range: self.skeleton.vertex_id(inner.range()).to_string(),
            });
        }
        let mut word = outer.word();
        word.extend(inner.word_iter());
        Ok(self.path_from_word(outer.range(), &word))
    }

    /// The unique factorisation `path = (mu, nu)` with `d(mu) = m` and
    /// `d(nu) = n`.
    pub fn factorise(&self, path: &Path, m: &Degree, n: &Degree) -> Result<(Path, Path), PathError> {
        let actual = path.degree();
        if m.rank() != self.k() || n.rank() != self.k() || m.add(n) != actual {
            return Err(PathError::DegreeMismatch {
                m: m.to_string(),
                n: n.to_string(),
                actual: actual.to_string(),
            });
        }
        let mut word = path.word();
        let mut prefix = Vec::new();
        for colour in 0..self.k() {
            for _ in 0..m.get(colour) {
                prefix.push(self.extract_front(&mut word, colour));
            }
        }
        let mu = self.path_from_word(path.range(), &prefix);
        let nu_range = mu.source(&self.skeleton);
        let nu = self.path_from_word(nu_range, &word);
        Ok((mu, nu))
    }

    /// Pull the first edge of the given colour to the front of the word via
    /// square swaps and remove it.
    fn extract_front(&self, word: &mut Vec<EdgeIx>, colour: usize) -> EdgeIx {
        let t = word
            .iter()
            .position(|&e| self.skeleton.edge(e).colour == colour)
            .expect("degree accounting guarantees an edge of each required colour");
        for pos in (0..t).rev() {
            self.swap_at(word, pos);
        }
        word.remove(0)
    }

    /// All edge words (outermost first) that compose to the given path:
    /// the closure of its normal form under single square swaps.
    pub fn edge_spellings(&self, path: &Path) -> Vec<Vec<EdgeIx>> {
        let colour = |e: EdgeIx| self.skeleton.edge(e).colour;
        let start = path.word();
        let mut seen: HashSet<Vec<EdgeIx>> = HashSet::new();
        let mut stack = vec![start];
        while let Some(word) = stack.pop() {
            if !seen.insert(word.clone()) {
                continue;
            }
            for pos in 0..word.len().saturating_sub(1) {
                if colour(word[pos]) != colour(word[pos + 1]) {
                    let mut next = word.clone();
                    self.swap_at(&mut next, pos);
                    stack.push(next);
                }
            }
        }
        let mut out: Vec<Vec<EdgeIx>> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// The vertex at grid point `p` of a path: the source of its degree-`p`
    /// initial segment.
    pub fn grid_vertex(&self, path: &Path, p: &Degree) -> VertexIx {
        let d = path.degree();
        let rest = d.checked_sub(p).expect("grid point within path degree");
        let (mu, _) = self
            .factorise(path, p, &rest)
            .expect("degrees add up by construction");
        mu.source(&self.skeleton)
    }

    /// All grid vertices of a path, keyed by grid point, computed by peeling
    /// single edges; cheaper than calling [`KGraph::grid_vertex`] per point.
    pub fn vertex_grid(&self, path: &Path) -> BTreeMap<Degree, VertexIx> {
        let d = path.degree();
        let mut tails: HashMap<Degree, Path> = HashMap::new();
        tails.insert(Degree::zero(self.k()), path.clone());
        let mut grid = BTreeMap::new();
        for p in Degree::all_below(&d) {
            if !tails.contains_key(&p) {
                let c = (0..self.k()).find(|&c| p.get(c) > 0).unwrap();
                let prev = p.checked_sub(&Degree::unit(self.k(), c)).unwrap();
                let tail_prev = tails.get(&prev).unwrap();
                let e_c = Degree::unit(self.k(), c);
                let rest = tail_prev.degree().checked_sub(&e_c).unwrap();
                let (_, tail) = self.factorise(tail_prev, &e_c, &rest).unwrap();
                tails.insert(p.clone(), tail);
            }
            grid.insert(p.clone(), tails[&p].range());
        }
        grid
    }

    /// Largest degree with a path realising it in each coordinate
    /// separately: entry `i` is the longest colour-`i` block over all paths.
    /// Only meaningful for graphs whose skeleton is acyclic; loops make path
    /// degrees unbounded.
    pub fn max_path_degree(&self) -> Option<Degree> {
        if self.skeleton.has_cycle() {
            return None;
        }
        // longest monochromatic chain per colour via DFS with memoisation
        let mut entries = Vec::with_capacity(self.k());
        for colour in 0..self.k() {
            let mut memo: HashMap<VertexIx, u32> = HashMap::new();
            fn longest(
                sk: &Skeleton,
                colour: usize,
                v: VertexIx,
                memo: &mut HashMap<VertexIx, u32>,
            ) -> u32 {
                if let Some(&d) = memo.get(&v) {
                    return d;
                }
                let mut best = 0;
                for &e in sk.in_edges(v, colour) {
                    best = best.max(1 + longest(sk, colour, sk.edge(e).source, memo));
                }
                memo.insert(v, best);
                best
            }
            let mut best = 0;
            for v in 0..self.skeleton.vertex_count() {
                best = best.max(longest(&self.skeleton, colour, v, &mut memo));
            }
            entries.push(best);
        }
        Some(Degree::new(entries))
    }
}

/// All ordered composable pairs `(outer, inner)` of edges of distinct
/// colours, i.e. `s(outer) = r(inner)`.
fn composable_bicoloured_pairs(sk: &Skeleton) -> Vec<(EdgeIx, EdgeIx)> {
    let mut out = Vec::new();
    for (outer_ix, outer) in sk.edges().iter().enumerate() {
        for colour in 0..sk.k() {
            if colour == outer.colour {
                continue;
            }
            for &inner_ix in sk.in_edges(outer.source, colour) {
                out.push((outer_ix, inner_ix));
            }
        }
    }
    out.sort();
    out
}

/// Rewrite each composable tri-coloured triple to reversed colour order via
/// the two extreme swap sequences and report every triple where the results
/// differ. An empty list means the square table is cube-coherent.
///
/// Requires a table that already passes the exactly-once and endpoint
/// checks.
pub fn check_cube_condition(sk: &Skeleton, squares: &SquareTable) -> Vec<CubeViolation> {
    let mut swap: HashMap<(EdgeIx, EdgeIx), (EdgeIx, EdgeIx)> = HashMap::new();
    for sq in squares.squares() {
        swap.insert((sq.outer_lo, sq.inner_lo), (sq.outer_hi, sq.inner_hi));
        swap.insert((sq.outer_hi, sq.inner_hi), (sq.outer_lo, sq.inner_lo));
    }
    let apply = |word: &mut [EdgeIx; 3], pos: usize| {
        let (a, b) = swap[&(word[pos], word[pos + 1])];
        word[pos] = a;
        word[pos + 1] = b;
    };

    let mut violations = Vec::new();
    for (a, ea) in sk.edges().iter().enumerate() {
        for colour_b in 0..sk.k() {
            if colour_b == ea.colour {
                continue;
            }
            for &b in sk.in_edges(ea.source, colour_b) {
                let eb = sk.edge(b);
                for colour_c in 0..sk.k() {
                    if colour_c == ea.colour || colour_c == colour_b {
                        continue;
                    }
                    for &c in sk.in_edges(eb.source, colour_c) {
                        // route through the leading pair first
                        let mut front = [a, b, c];
                        apply(&mut front, 0);
                        apply(&mut front, 1);
                        apply(&mut front, 0);
                        // route through the trailing pair first
                        let mut back = [a, b, c];
                        apply(&mut back, 1);
                        apply(&mut back, 0);
                        apply(&mut back, 1);
                        if front != back {
                            violations.push(CubeViolation { edges: (a, b, c) });
                        }
                    }
                }
            }
        }
    }
    violations.sort();
    violations
}

/// All square tables on a skeleton satisfying exactly-once, endpoint and
/// (for k >= 3) cube constraints, in a deterministic order. The empty list
/// means the skeleton extends to no k-graph.
pub fn enumerate_square_sets(sk: &Skeleton) -> Vec<SquareTable> {
    let mut tables = enumerate_square_sets_raw(sk);
    if sk.k() >= 3 {
        tables.retain(|t| check_cube_condition(sk, t).is_empty());
    }
    tables
}

/// Exactly-once and endpoint constraints only; cube-incoherent tables are
/// kept so they can be inspected.
pub(crate) fn enumerate_square_sets_raw(sk: &Skeleton) -> Vec<SquareTable> {
    // group composable bi-coloured paths by (colour pair, overall range,
    // overall source); each group needs a bijection between its colour-i-
    // outer and colour-j-outer factorisations
    type Key = (usize, usize, VertexIx, VertexIx);
    let mut lo: BTreeMap<Key, Vec<(EdgeIx, EdgeIx)>> = BTreeMap::new();
    let mut hi: BTreeMap<Key, Vec<(EdgeIx, EdgeIx)>> = BTreeMap::new();
    for (outer, inner) in composable_bicoloured_pairs(sk) {
        let co = sk.edge(outer).colour;
        let ci = sk.edge(inner).colour;
        let range = sk.edge(outer).range;
        let source = sk.edge(inner).source;
        if co < ci {
            lo.entry((co, ci, range, source))
                .or_default()
                .push((outer, inner));
        } else {
            hi.entry((ci, co, range, source))
                .or_default()
                .push((outer, inner));
        }
    }

    let keys: Vec<Key> = lo.keys().chain(hi.keys()).cloned().collect::<HashSet<_>>()
        .into_iter()
        .collect::<Vec<_>>();
    let mut keys = keys;
    keys.sort();

    // per-group choices: all bijections lo <-> hi
    let mut group_options: Vec<Vec<Vec<Square>>> = Vec::new();
    for key in &keys {
        let lo_paths = lo.get(key).cloned().unwrap_or_default();
        let hi_paths = hi.get(key).cloned().unwrap_or_default();
        if lo_paths.len() != hi_paths.len() {
            return Vec::new();
        }
        let n = lo_paths.len();
        let mut options = Vec::new();
        for perm in permutations(n) {
            let squares: Vec<Square> = (0..n)
                .map(|t| {
                    let (ol, il) = lo_paths[t];
                    let (oh, ih) = hi_paths[perm[t]];
                    Square {
                        outer_lo: ol,
                        inner_lo: il,
                        outer_hi: oh,
                        inner_hi: ih,
                    }
                })
                .collect();
            options.push(squares);
        }
        group_options.push(options);
    }

    let mut tables = Vec::new();
    let mut current: Vec<Square> = Vec::new();
    fn assemble(
        group_options: &[Vec<Vec<Square>>],
        depth: usize,
        current: &mut Vec<Square>,
        tables: &mut Vec<SquareTable>,
    ) {
        if depth == group_options.len() {
            tables.push(SquareTable::new(current.clone()));
            return;
        }
        for option in &group_options[depth] {
            let before = current.len();
            current.extend(option.iter().copied());
            assemble(group_options, depth + 1, current, tables);
            current.truncate(before);
        }
    }
    assemble(&group_options, 0, &mut current, &mut tables);
    tables
}

/// Permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    let mut chosen = Vec::new();
    fn rec(items: &mut Vec<usize>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if items.is_empty() {
            out.push(chosen.clone());
            return;
        }
        for i in 0..items.len() {
            let x = items.remove(i);
            chosen.push(x);
            rec(items, chosen, out);
            chosen.pop();
            items.insert(i, x);
        }
    }
    rec(&mut items, &mut chosen, &mut out);
    out
}

/// The grid k-graph on the vertex set `{p : p <= shape}`: one colour-`i`
/// edge from `p + e_i` down to `p` for every fitting `p`, with the uniquely
/// determined squares. Vertices are named `p1_p2_..._pk`.
pub fn build_omega(k: usize, shape: &Degree) -> KGraph {
    assert!(k >= 1, "rank must be positive");
    assert_eq!(shape.rank(), k, "shape must have k entries");
    let name = |p: &Degree| -> String {
        p.entries()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join("_")
    };
    let edge_name = |colour: usize, src: &Degree| format!("e{}_{}", colour + 1, name(src));

    let points = Degree::all_below(shape);
    let vertices: Vec<String> = points.iter().map(name).collect();
    let mut edges = Vec::new();
    for p in &points {
        for c in 0..k {
            let q = p.add(&Degree::unit(k, c));
            if q.partial_le(shape) {
                edges.push(EdgeSpec::new(&edge_name(c, &q), c + 1, &name(&q), &name(p)));
            }
        }
    }
    let skeleton = Skeleton::new(k, vertices, edges).expect("grid skeleton is well-formed");

    let mut squares = Vec::new();
    for p in &points {
        for i in 0..k {
            for j in (i + 1)..k {
                let pi = p.add(&Degree::unit(k, i));
                let pj = p.add(&Degree::unit(k, j));
                let pij = pi.add(&Degree::unit(k, j));
                if !pij.partial_le(shape) {
                    continue;
                }
                let ix = |id: String| skeleton.edge_by_id(&id).unwrap();
                squares.push(Square {
                    outer_lo: ix(edge_name(i, &pi)),
                    inner_lo: ix(edge_name(j, &pij)),
                    outer_hi: ix(edge_name(j, &pj)),
                    inner_hi: ix(edge_name(i, &pij)),
                });
            }
        }
    }
    KGraph::validate(skeleton, SquareTable::new(squares)).expect("grid squares are coherent")
}

/// The 1-graph of a directed graph: its path category with the length
/// functor. No squares exist for k = 1.
pub fn build_from_directed_graph(
    vertices: Vec<String>,
    edges: Vec<(String, String, String)>,
) -> Result<KGraph, SkeletonError> {
    let specs = edges
        .into_iter()
        .map(|(id, source, range)| EdgeSpec::new(&id, 1, &source, &range))
        .collect();
    let skeleton = Skeleton::new(1, vertices, specs)?;
    Ok(KGraph::validate(skeleton, SquareTable::empty()).expect("no squares exist for k = 1"))
}
