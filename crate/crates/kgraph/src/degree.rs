//! Degrees: the `N^k`-valued path lengths of a higher-rank graph.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A vector in `N^k`, ordered componentwise.
///
/// Degrees are compared with the componentwise partial order (`partial_le`),
/// not with the derived `Ord`, which is the lexicographic order used only to
/// make enumeration output deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(Vec<u32>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DegreeError {
    #[error("degree has {found} entries, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("cannot parse degree entry {0:?}")]
    BadEntry(String),
    #[error("degree must have at least one entry")]
    Empty,
}

impl Degree {
    pub fn new(entries: Vec<u32>) -> Self {
        Degree(entries)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The standard basis vector `e_i` (0-based coordinate).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        Degree(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Total length `m_1 + ... + m_k`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// Componentwise `self <= other`.
    pub fn partial_le(&self, other: &Degree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Degree) -> Degree {
        assert_eq!(self.0.len(), other.0.len());
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; defined only when `other <= self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        if !other.partial_le(self) {
            return None;
        }
        Some(Degree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Componentwise maximum.
    pub fn join(&self, other: &Degree) -> Degree {
        assert_eq!(self.0.len(), other.0.len());
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// Componentwise minimum.
    pub fn meet(&self, other: &Degree) -> Degree {
        assert_eq!(self.0.len(), other.0.len());
        Degree(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// All degrees `m <= bound`, in lexicographic order.
    pub fn all_below(bound: &Degree) -> Vec<Degree> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; bound.rank()];
        loop {
            out.push(Degree(cur.clone()));
            // odometer increment
            let mut i = bound.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < bound.get(i) {
                    cur[i] += 1;
                    for slot in cur.iter_mut().skip(i + 1) {
                        *slot = 0;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for Degree {
    type Err = DegreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(DegreeError::Empty);
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            entries.push(
                part.parse::<u32>()
                    .map_err(|_| DegreeError::BadEntry(part.to_string()))?,
            );
        }
        Ok(Degree(entries))
    }
}
