//! Paths in colour-block normal form.

use std::cmp::Ordering;

use crate::degree::Degree;
use crate::skeleton::{EdgeIx, Skeleton, VertexIx};

/// A path (morphism), stored in its canonical normal form: one block of
/// edges per colour, blocks in increasing colour order, block 1 outermost.
///
/// Edges within a block and the blocks themselves are written range-first:
/// the last edge of the last nonempty block is the first one traversed, and
/// carries the source of the whole path. Degree-0 paths are vertices.
///
/// Two paths are equal iff their normal forms are identical, so derived
/// equality and hashing are the categorical ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexIx,
    blocks: Vec<Vec<EdgeIx>>,
}

impl Path {
    /// The identity path at a vertex.
    pub fn vertex(v: VertexIx, k: usize) -> Self {
        Path {
            range: v,
            blocks: vec![Vec::new(); k],
        }
    }

    /// Assemble a path from pre-sorted colour blocks. Callers must ensure
    /// the blocks are composable and colour-homogeneous; this is checked in
    /// debug builds only.
    pub(crate) fn from_blocks(sk: &Skeleton, range: VertexIx, blocks: Vec<Vec<EdgeIx>>) -> Self {
        debug_assert_eq!(blocks.len(), sk.k());
        #[cfg(debug_assertions)]
        {
            let mut at = range;
            for (colour, block) in blocks.iter().enumerate() {
                for &e in block {
                    debug_assert_eq!(sk.edge(e).colour, colour);
                    debug_assert_eq!(sk.edge(e).range, at);
                    at = sk.edge(e).source;
                }
            }
        }
        Path { range, blocks }
    }

    pub fn range(&self) -> VertexIx {
        self.range
    }

    pub fn source(&self, sk: &Skeleton) -> VertexIx {
        match self.word_iter().last() {
            Some(e) => sk.edge(e).source,
            None => self.range,
        }
    }

    pub fn blocks(&self) -> &[Vec<EdgeIx>] {
        &self.blocks
    }

    pub fn degree(&self) -> Degree {
        Degree::new(self.blocks.iter().map(|b| b.len() as u32).collect())
    }

    pub fn is_vertex(&self) -> bool {
        self.blocks.iter().all(|b| b.is_empty())
    }

    /// Edge word of the normal form, outermost (range side) first.
    pub fn word(&self) -> Vec<EdgeIx> {
        self.word_iter().collect()
    }

    pub fn word_iter(&self) -> impl Iterator<Item = EdgeIx> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_vertex()
    }

    /// Render as edge ids, identity paths as `[v]`.
    pub fn display(&self, sk: &Skeleton) -> String {
        if self.is_vertex() {
            format!("[{}]", sk.vertex_id(self.range))
        } else {
            let ids: Vec<&str> = self.word_iter().map(|e| sk.edge_id(e)).collect();
            ids.join(" ")
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    /// Deterministic enumeration order: degree (lexicographic), then the
    /// edge word (indices follow id order), then the range vertex.
    fn cmp(&self, other: &Self) -> Ordering {
        let da: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        let db: Vec<usize> = other.blocks.iter().map(|b| b.len()).collect();
        da.cmp(&db)
            .then_with(|| self.word_iter().cmp(other.word_iter()))
            .then_with(|| self.range.cmp(&other.range))
    }
}
