//! Coloured skeletons: the degree-`e_i` edges of a higher-rank graph,
//! plus the square tables that pair off bi-coloured factorisations.

use std::collections::HashMap;

use thiserror::Error;

/// Index of a vertex in its [`Skeleton`].
pub type VertexIx = usize;
/// Index of an edge in its [`Skeleton`].
pub type EdgeIx = usize;

/// One coloured edge. `colour` is 0-based internally; constructors and all
/// I/O use the 1-based convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub id: String,
    pub colour: usize,
    pub source: VertexIx,
    pub range: VertexIx,
}

/// Specification of an edge by identifier, with a 1-based colour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub colour: usize,
    pub source: String,
    pub range: String,
}

impl EdgeSpec {
    pub fn new(id: &str, colour: usize, source: &str, range: &str) -> Self {
        EdgeSpec {
            id: id.to_string(),
            colour,
            source: source.to_string(),
            range: range.to_string(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SkeletonError {
    #[error("rank k must be at least 1")]
    ZeroRank,
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references unknown vertex {vertex:?}")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge {edge:?} has colour {colour}, expected 1..={k}")]
    ColourOutOfRange { edge: String, colour: usize, k: usize },
}

/// A finite coloured directed multigraph: the 1-skeleton of a k-graph.
///
/// Vertices and edges are stored sorted by id, so index order coincides with
/// lexicographic id order; this is what makes all downstream enumeration
/// output reproducible.
#[derive(Debug, Clone)]
pub struct Skeleton {
    k: usize,
    vertices: Vec<String>,
    edges: Vec<EdgeData>,
    vertex_ix: HashMap<String, VertexIx>,
    edge_ix: HashMap<String, EdgeIx>,
    /// `in_by_colour[v][c]` = edges of colour `c` with range `v`.
    in_by_colour: Vec<Vec<Vec<EdgeIx>>>,
    /// `out_edges[v]` = edges with source `v`.
    out_edges: Vec<Vec<EdgeIx>>,
}

impl Skeleton {
    pub fn new(
        k: usize,
        vertices: Vec<String>,
        edges: Vec<EdgeSpec>,
    ) -> Result<Self, SkeletonError> {
        if k == 0 {
            return Err(SkeletonError::ZeroRank);
        }
        let mut vertices = vertices;
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(SkeletonError::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_ix: HashMap<String, VertexIx> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut specs = edges;
        specs.sort_by(|a, b| a.id.cmp(&b.id));
        for w in specs.windows(2) {
            if w[0].id == w[1].id {
                return Err(SkeletonError::DuplicateEdge(w[0].id.clone()));
            }
        }
        let mut edge_list = Vec::with_capacity(specs.len());
        for spec in &specs {
            if spec.colour == 0 || spec.colour > k {
                return Err(SkeletonError::ColourOutOfRange {
                    edge: spec.id.clone(),
                    colour: spec.colour,
                    k,
                });
            }
            let source = *vertex_ix
                .get(&spec.source)
                .ok_or_else(|| SkeletonError::UnknownVertex {
                    edge: spec.id.clone(),
                    vertex: spec.source.clone(),
                })?;
            let range = *vertex_ix
                .get(&spec.range)
                .ok_or_else(|| SkeletonError::UnknownVertex {
                    edge: spec.id.clone(),
                    vertex: spec.range.clone(),
                })?;
            edge_list.push(EdgeData {
                id: spec.id.clone(),
                colour: spec.colour - 1,
                source,
                range,
            });
        }
        let edge_ix: HashMap<String, EdgeIx> = edge_list
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), i))
            .collect();

        let mut in_by_colour = vec![vec![Vec::new(); k]; vertices.len()];
        let mut out_edges = vec![Vec::new(); vertices.len()];
        for (ix, e) in edge_list.iter().enumerate() {
            in_by_colour[e.range][e.colour].push(ix);
            out_edges[e.source].push(ix);
        }

        Ok(Skeleton {
            k,
            vertices,
            edges: edge_list,
            vertex_ix,
            edge_ix,
            in_by_colour,
            out_edges,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: VertexIx) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, id: &str) -> Option<VertexIx> {
        self.vertex_ix.get(id).copied()
    }

    pub fn edges(&self) -> &[EdgeData] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> &EdgeData {
        &self.edges[e]
    }

    pub fn edge_id(&self, e: EdgeIx) -> &str {
        &self.edges[e].id
    }

    pub fn edge_by_id(&self, id: &str) -> Option<EdgeIx> {
        self.edge_ix.get(id).copied()
    }

    /// Edges of the given 0-based colour with range `v`, i.e. `Λ^{e_c}(v)`
    /// at the edge level.
    pub fn in_edges(&self, v: VertexIx, colour: usize) -> &[EdgeIx] {
        &self.in_by_colour[v][colour]
    }

    pub fn receives_colour(&self, v: VertexIx, colour: usize) -> bool {
        !self.in_by_colour[v][colour].is_empty()
    }

    pub fn out_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.out_edges[v]
    }

    pub fn edges_of_colour(&self, colour: usize) -> impl Iterator<Item = EdgeIx> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].colour == colour)
    }

    /// True if some nontrivial path returns to its own range, i.e. the
    /// skeleton digraph (edges read source -> range) has a directed cycle.
    pub fn has_cycle(&self) -> bool {
        // iterative three-colour DFS
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let mut state = vec![WHITE; self.vertices.len()];
        for start in 0..self.vertices.len() {
            if state[start] != WHITE {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = GREY;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                // follow edges from source v to range
                if *next < self.out_edges[v].len() {
                    let e = self.out_edges[v][*next];
                    *next += 1;
                    let w = self.edges[e].range;
                    match state[w] {
                        GREY => return true,
                        WHITE => {
                            state[w] = GREY;
                            stack.push((w, 0));
                        }
                        _ => {}
                    }
                } else {
                    state[v] = BLACK;
                    stack.pop();
                }
            }
        }
        false
    }
}

/// A commuting square: the two factorisations of one degree-`e_i + e_j` path.
///
/// With `i < j` the colours of the four edges, the "lo" pair is the
/// factorisation with the colour-`i` edge outermost and the "hi" pair the one
/// with the colour-`j` edge outermost; in both, the inner edge is traversed
/// first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Square {
    pub outer_lo: EdgeIx,
    pub inner_lo: EdgeIx,
    pub outer_hi: EdgeIx,
    pub inner_hi: EdgeIx,
}

/// A set of squares, canonically sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SquareTable {
    squares: Vec<Square>,
}

impl SquareTable {
    pub fn new(mut squares: Vec<Square>) -> Self {
        squares.sort();
        squares.dedup();
        SquareTable { squares }
    }

    pub fn empty() -> Self {
        SquareTable::default()
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}
