#![forbid(unsafe_code)]

//! Finite higher-rank graphs (k-graphs) and their combinatorics.
//!
//! A k-graph is a category whose morphisms ("paths") carry degrees in `N^k`
//! subject to unique factorisation. This crate builds them from coloured
//! skeletons and square tables, enumerates their path spaces, constructs
//! boundary-path representations by sparse 0/1 matrices, verifies the
//! Cuntz-Krieger relations exactly, and computes the lattice of saturated
//! hereditary vertex sets together with quotient and restriction graphs.
//!
//! Everything is exact: no floating point is used anywhere, and every
//! enumeration is emitted in a deterministic order.

pub mod boundary;
pub mod ckrep;
pub mod degree;
pub mod fixtures;
pub mod graph;
pub mod ideals;
pub mod io;
pub mod matrix;
pub mod path;
pub mod pathspace;
pub mod random;
pub mod skeleton;

pub use degree::Degree;
pub use graph::{build_from_directed_graph, build_omega, enumerate_square_sets, KGraph};
pub use path::Path;
pub use skeleton::{EdgeSpec, Skeleton, Square, SquareTable};
