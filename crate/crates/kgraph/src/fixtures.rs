//! Small worked examples: the graphs used across the test suites and
//! shipped as `.kgraph` files.
//!
//! * `g1`: the 2-graph on the 4x3 grid (all squares forced).
//! * `g2`: the locally concave 2-graph — a vertex receiving one edge of each
//!   colour whose targets receive nothing. Not locally convex; admits no
//!   nonzero Cuntz-Krieger family.
//! * `g3`: two vertices joined by counter-rotating solid edges with a dashed
//!   loop at each end; its skeleton admits exactly one square table.
//! * `g3_extended`: `g3` plus one parallel solid edge, making the square
//!   table a genuine choice (two tables).
//! * `g4`: the unit square 2-graph.
//! * `g5`: a single vertex with a single loop (1-graph).

use crate::degree::Degree;
use crate::graph::{build_from_directed_graph, build_omega, KGraph};
use crate::path::Path;
use crate::skeleton::{EdgeIx, EdgeSpec, Skeleton, Square, SquareTable};

/// The grid 2-graph with shape (3,2): 12 vertices, 9 + 8 edges, 6 squares.
pub fn g1() -> KGraph {
    build_omega(2, &Degree::new(vec![3, 2]))
}

/// The paper-style edge names near the vertex `2_1` of [`g1`]: `e` and `h`
/// are solid (colour 1), `f` and `g` dashed (colour 2), with `e g` and `f h`
/// spelling the same degree-(1,1) path at `2_1`.
pub fn g1_edge(g: &KGraph, name: &str) -> EdgeIx {
    let id = match name {
        "e" => "e1_3_1",
        "g" => "e2_3_2",
        "f" => "e2_2_2",
        "h" => "e1_3_2",
        _ => panic!("unknown G1 edge name {name:?}"),
    };
    g.skeleton().edge_by_id(id).unwrap()
}

/// The locally concave 2-graph: `e: w -> v` solid, `f: z -> v` dashed,
/// written source -> range. No squares exist (or are needed).
pub fn g2() -> KGraph {
    let skeleton = Skeleton::new(
        2,
        vec!["v".into(), "w".into(), "z".into()],
        vec![
            EdgeSpec::new("e", 1, "w", "v"),
            EdgeSpec::new("f", 2, "z", "v"),
        ],
    )
    .unwrap();
    KGraph::validate(skeleton, SquareTable::empty()).unwrap()
}

fn g3_skeleton(extra_edge: bool) -> Skeleton {
    let mut edges = vec![
        EdgeSpec::new("e", 1, "u", "v"),
        EdgeSpec::new("g", 1, "v", "u"),
        EdgeSpec::new("f", 2, "u", "u"),
        EdgeSpec::new("h", 2, "v", "v"),
    ];
    if extra_edge {
        edges.push(EdgeSpec::new("k", 1, "u", "v"));
    }
    Skeleton::new(2, vec!["u".into(), "v".into()], edges).unwrap()
}

/// Two vertices, solid edges `e: u -> v` and `g: v -> u` (source -> range),
/// dashed loops `f` at `u` and `h` at `v`. The unique square table pairs
/// `f g = g h` and `h e = e f`.
pub fn g3() -> KGraph {
    let sk = g3_skeleton(false);
    let ix = |id: &str| sk.edge_by_id(id).unwrap();
    let squares = SquareTable::new(vec![
        Square {
            outer_lo: ix("g"),
            inner_lo: ix("h"),
            outer_hi: ix("f"),
            inner_hi: ix("g"),
        },
        Square {
            outer_lo: ix("e"),
            inner_lo: ix("f"),
            outer_hi: ix("h"),
            inner_hi: ix("e"),
        },
    ]);
    KGraph::validate(sk, squares).unwrap()
}

/// [`g3`] plus a second solid edge `k: u -> v` parallel to `e`. Of the two
/// possible tables this one pairs `h e = e f` and `h k = k f`.
pub fn g3_extended() -> KGraph {
    let sk = g3_skeleton(true);
    let ix = |id: &str| sk.edge_by_id(id).unwrap();
    let squares = SquareTable::new(vec![
        Square {
            outer_lo: ix("g"),
            inner_lo: ix("h"),
            outer_hi: ix("f"),
            inner_hi: ix("g"),
        },
        Square {
            outer_lo: ix("e"),
            inner_lo: ix("f"),
            outer_hi: ix("h"),
            inner_hi: ix("e"),
        },
        Square {
            outer_lo: ix("k"),
            inner_lo: ix("f"),
            outer_hi: ix("h"),
            inner_hi: ix("k"),
        },
    ]);
    KGraph::validate(sk, squares).unwrap()
}

/// The degree-(3,1) path of [`g3`] from `v` to `u` with the four spellings
/// `gegh`, `gefg`, `gheg`, `fgeg`.
pub fn g3_paper_path(g: &KGraph) -> Path {
    let sk = g.skeleton();
    let ix = |id: &str| sk.edge_by_id(id).unwrap();
    let u = sk.vertex("u").unwrap();
    g.path_from_word(u, &[ix("g"), ix("e"), ix("g"), ix("h")])
}

/// The unit square 2-graph: 4 vertices, 2 + 2 edges, 1 square.
pub fn g4() -> KGraph {
    build_omega(2, &Degree::new(vec![1, 1]))
}

/// One vertex, one loop: the 1-graph with a path of every length.
pub fn g5() -> KGraph {
    build_from_directed_graph(
        vec!["v".into()],
        vec![("a".into(), "v".into(), "v".into())],
    )
    .unwrap()
}

/// A 3-coloured skeleton admitting both cube-coherent and cube-violating
/// square tables: the unit square crossed with a doubled third-direction
/// edge (`z`/`w` parallel pairs). Returns the skeleton, the product table,
/// and a table twisted in the colour-(1,3) class at `b = 0`, which breaks
/// the cube condition.
pub fn doubled_cube() -> (Skeleton, SquareTable, SquareTable) {
    let mut vertices = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                vertices.push(format!("{a}_{b}_{c}"));
            }
        }
    }
    let mut edges = Vec::new();
    for b in 0..2 {
        for c in 0..2 {
            edges.push(EdgeSpec::new(
                &format!("e1_1_{b}_{c}"),
                1,
                &format!("1_{b}_{c}"),
                &format!("0_{b}_{c}"),
            ));
        }
    }
    for a in 0..2 {
        for c in 0..2 {
            edges.push(EdgeSpec::new(
                &format!("e2_{a}_1_{c}"),
                2,
                &format!("{a}_1_{c}"),
                &format!("{a}_0_{c}"),
            ));
        }
    }
    for a in 0..2 {
        for b in 0..2 {
            for letter in ["z", "w"] {
                edges.push(EdgeSpec::new(
                    &format!("{letter}3_{a}_{b}"),
                    3,
                    &format!("{a}_{b}_1"),
                    &format!("{a}_{b}_0"),
                ));
            }
        }
    }
    let sk = Skeleton::new(3, vertices, edges).unwrap();
    let ix = |id: String| sk.edge_by_id(&id).unwrap();

    let mut shared = Vec::new();
    for c in 0..2 {
        shared.push(Square {
            outer_lo: ix(format!("e1_1_0_{c}")),
            inner_lo: ix(format!("e2_1_1_{c}")),
            outer_hi: ix(format!("e2_0_1_{c}")),
            inner_hi: ix(format!("e1_1_1_{c}")),
        });
    }
    for a in 0..2 {
        for letter in ["z", "w"] {
            shared.push(Square {
                outer_lo: ix(format!("e2_{a}_1_0")),
                inner_lo: ix(format!("{letter}3_{a}_1")),
                outer_hi: ix(format!("{letter}3_{a}_0")),
                inner_hi: ix(format!("e2_{a}_1_1")),
            });
        }
    }
    // colour-(1,3) squares at b = 1 keep the product pairing in both tables
    for letter in ["z", "w"] {
        shared.push(Square {
            outer_lo: ix("e1_1_1_0".to_string()),
            inner_lo: ix(format!("{letter}3_1_1")),
            outer_hi: ix(format!("{letter}3_0_1")),
            inner_hi: ix("e1_1_1_1".to_string()),
        });
    }

    let square_13_b0 = |inner: &str, outer: &str| Square {
        outer_lo: ix("e1_1_0_0".to_string()),
        inner_lo: ix(format!("{inner}3_1_0")),
        outer_hi: ix(format!("{outer}3_0_0")),
        inner_hi: ix("e1_1_0_1".to_string()),
    };
    let mut product = shared.clone();
    product.push(square_13_b0("z", "z"));
    product.push(square_13_b0("w", "w"));
    let mut twisted = shared;
    twisted.push(square_13_b0("z", "w"));
    twisted.push(square_13_b0("w", "z"));

    (sk, SquareTable::new(product), SquareTable::new(twisted))
}
