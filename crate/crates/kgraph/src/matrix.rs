//! Sparse exact matrices: integer arithmetic for the relation checks and
//! rational Gaussian elimination for rank computations.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// A square sparse matrix over the integers, indexed by a fixed basis.
/// Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = IntMatrix::zero(dim);
        for (r, c) in entries {
            m.add_at(r, c, 1);
        }
        m
    }

    /// Projection onto the given basis rows.
    pub fn diagonal_on(dim: usize, rows: impl IntoIterator<Item = usize>) -> Self {
        let mut m = IntMatrix::zero(dim);
        for r in rows {
            m.add_at(r, r, 1);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries.get(&(r, c)).copied().unwrap_or(0)
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.dim && c < self.dim);
        if v == 0 {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, v);
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, -v);
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        debug_assert_eq!(self.dim, other.dim);
        // index the right factor by row
        let mut rows: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        for (r, c, v) in other.entries() {
            rows.entry(r).or_default().push((c, v));
        }
        let mut out = IntMatrix::zero(self.dim);
        for (r, c, v) in self.entries() {
            if let Some(row) = rows.get(&c) {
                for &(c2, v2) in row {
                    out.add_at(r, c2, v * v2);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.dim);
        for (r, c, v) in self.entries() {
            out.add_at(c, r, v);
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(r, c)| r == c)
    }

    /// 0/1 matrices with at most one entry per row and per column are
    /// exactly the partial permutation matrices; every generator of a
    /// boundary-path representation must be one.
    pub fn is_partial_permutation(&self) -> bool {
        let mut seen_rows = std::collections::HashSet::new();
        let mut seen_cols = std::collections::HashSet::new();
        self.entries.iter().all(|(&(r, c), &v)| {
            v == 1 && seen_rows.insert(r) && seen_cols.insert(c)
        })
    }
}

/// Rank over the rationals of a family of sparse integer vectors, by
/// fraction-exact row reduction. Vector keys may be arbitrary coordinates.
pub fn rational_rank(vectors: impl IntoIterator<Item = BTreeMap<usize, i64>>) -> usize {
    // echelon basis: leading coordinate -> normalised row
    let mut pivots: BTreeMap<usize, BTreeMap<usize, BigRational>> = BTreeMap::new();
    let mut rank = 0;
    for vec in vectors {
        let mut row: BTreeMap<usize, BigRational> = vec
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(k, v)| (k, BigRational::from(BigInt::from(v))))
            .collect();
        while let Some((&lead, _)) = row.iter().next() {
            let Some(pivot) = pivots.get(&lead) else {
                // normalise so the leading entry is 1
                let factor = row[&lead].clone();
                for v in row.values_mut() {
                    *v /= factor.clone();
                }
                pivots.insert(lead, row);
                rank += 1;
                break;
            };
            let factor = row[&lead].clone();
            for (k, pv) in pivot.iter() {
                let delta = pv.clone() * factor.clone();
                let slot = row.entry(*k).or_insert_with(BigRational::zero);
                *slot -= delta;
                if slot.is_zero() {
                    row.remove(k);
                }
            }
        }
    }
    rank
}

/// Flatten a matrix into a coordinate vector for rank computations.
pub fn matrix_as_vector(m: &IntMatrix) -> BTreeMap<usize, i64> {
    m.entries().map(|(r, c, v)| (r * m.dim() + c, v)).collect()
}
