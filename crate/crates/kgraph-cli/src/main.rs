//! Command-line surface over the k-graph library: validation, path-space
//! queries, boundary paths, Cuntz-Krieger verification, core reports, and
//! the saturated hereditary lattice with its quotient/restriction graphs.
//!
//! Exit codes: 0 success (or property holds), 1 a checked property fails,
//! 2 malformed input, 3 a size guard refused the computation.

use std::collections::BTreeSet;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use kgraph::boundary::{boundary_paths, condition_b_check, ConditionBVerdict};
use kgraph::ckrep::{
    build_rep, core_report, forced_zero_generators, span_dimension, verify_ck_relations,
    verify_edge_level_equivalence, verify_spanning_formula, RepError,
};
use kgraph::degree::Degree;
use kgraph::ideals::{
    enumerate_sat_hered, quotient_graph, restriction_graph, IdealsError, VertexSet,
};
use kgraph::pathspace::{is_locally_convex, le_paths, paths_of_degree};
use kgraph::skeleton::VertexIx;
use kgraph::{enumerate_square_sets, KGraph};

const SCHEMA: &str = "kgraph-cli/v1";

#[derive(Parser)]
#[command(name = "kgraph", version, about = "Finite higher-rank graph analysis")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the square table and cube condition, then report local convexity
    Validate { file: PathBuf },
    /// Paths with the given range vertex and exact degree
    Paths {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        degree: String,
    },
    /// Maximally-extended paths within a degree bound
    LePaths {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        cap: String,
    },
    /// Boundary paths from a vertex, truncated at a cap
    Boundary {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        cap: String,
    },
    /// Square tables of the file's skeleton
    Squares {
        file: PathBuf,
        /// Enumerate all square tables the skeleton admits
        #[arg(long)]
        enumerate: bool,
    },
    /// Build the boundary-path representation and verify all relation suites
    CkVerify {
        file: PathBuf,
        #[arg(long)]
        cap: String,
    },
    /// Generators provably zero in every Cuntz-Krieger family
    ForcedZeros { file: PathBuf },
    /// Block structure of the degree-zero span at a level
    Core {
        file: PathBuf,
        #[arg(long)]
        q: String,
    },
    /// Bounded separation certificates at every vertex
    ConditionB {
        file: PathBuf,
        #[arg(long)]
        depth: String,
    },
    /// The lattice of saturated hereditary vertex sets
    Ideals {
        file: PathBuf,
        /// List every set in the lattice
        #[arg(long)]
        list: bool,
    },
    /// Quotient graph by a saturated hereditary vertex set
    Quotient {
        file: PathBuf,
        /// Comma-separated vertex ids
        #[arg(long)]
        set: String,
    },
    /// Restriction graph to a hereditary vertex set
    Restrict {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Graphviz rendering of the skeleton
    ExportDot { file: PathBuf },
}

/// Hard failures; property failures print their report and return code 1
/// directly.
enum CliError {
    Input(String),
    Guard(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Guard(m) => m,
        }
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn load(file: &FsPath) -> Result<KGraph, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    let (skeleton, squares) = kgraph::io::parse(&text).map_err(input_err)?;
    KGraph::validate(skeleton, squares).map_err(input_err)
}

fn load_skeleton(file: &FsPath) -> Result<kgraph::Skeleton, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    let (skeleton, _) = kgraph::io::parse(&text).map_err(input_err)?;
    Ok(skeleton)
}

fn parse_degree(g: &KGraph, text: &str) -> Result<Degree, CliError> {
    let d: Degree = text.parse().map_err(input_err)?;
    if d.rank() != g.k() {
        return Err(CliError::Input(format!(
            "degree {d} has {} entries, graph has rank {}",
            d.rank(),
            g.k()
        )));
    }
    Ok(d)
}

fn resolve_vertex(g: &KGraph, id: &str) -> Result<VertexIx, CliError> {
    g.skeleton()
        .vertex(id)
        .ok_or_else(|| CliError::Input(format!("unknown vertex {id:?}")))
}

fn resolve_set(g: &KGraph, spec: &str) -> Result<BTreeSet<VertexIx>, CliError> {
    let mut out = BTreeSet::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        out.insert(resolve_vertex(g, part.trim())?);
    }
    Ok(out)
}

fn path_json(g: &KGraph, p: &kgraph::Path) -> serde_json::Value {
    let sk = g.skeleton();
    json!({
        "range": sk.vertex_id(p.range()),
        "source": sk.vertex_id(p.source(sk)),
        "degree": p.degree().to_string(),
        "edges": p.word_iter().map(|e| sk.edge_id(e)).collect::<Vec<_>>(),
    })
}

fn emit(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { file } => {
            let g = load(&file)?;
            let sk = g.skeleton();
            let (convex, witnesses) = is_locally_convex(&g);
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "validate",
                    "k": g.k(),
                    "vertices": sk.vertex_count(),
                    "edges": sk.edge_count(),
                    "squares": g.squares().len(),
                    "locally_convex": convex,
                    "witnesses": witnesses.iter().map(|w| w.display(&g)).collect::<Vec<_>>(),
                }));
            } else {
                println!(
                    "valid: k={}, {} vertices, {} edges, {} squares",
                    g.k(),
                    sk.vertex_count(),
                    sk.edge_count(),
                    g.squares().len()
                );
                if convex {
                    println!("locally convex");
                } else {
                    println!("not locally convex");
                    for w in &witnesses {
                        println!("witness {}", w.display(&g));
                    }
                }
            }
            Ok(if convex { 0 } else { 1 })
        }
        Command::Paths {
            file,
            vertex,
            degree,
        } => {
            let g = load(&file)?;
            let v = resolve_vertex(&g, &vertex)?;
            let m = parse_degree(&g, &degree)?;
            let paths = paths_of_degree(&g, v, &m);
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "paths",
                    "vertex": vertex,
                    "degree": m.to_string(),
                    "count": paths.len(),
                    "paths": paths.iter().map(|p| path_json(&g, p)).collect::<Vec<_>>(),
                }));
            } else {
                println!("{} path(s) of degree {} at {}", paths.len(), m, vertex);
                for p in &paths {
                    println!("{}", p.display(g.skeleton()));
                }
            }
            Ok(0)
        }
        Command::LePaths { file, vertex, cap } => {
            let g = load(&file)?;
            let v = resolve_vertex(&g, &vertex)?;
            let q = parse_degree(&g, &cap)?;
            let paths = le_paths(&g, v, &q);
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "le-paths",
                    "vertex": vertex,
                    "cap": q.to_string(),
                    "count": paths.len(),
                    "paths": paths.iter().map(|p| path_json(&g, p)).collect::<Vec<_>>(),
                }));
            } else {
                println!(
                    "{} maximally-extended path(s) within {} at {}",
                    paths.len(),
                    q,
                    vertex
                );
                for p in &paths {
                    println!("degree {}: {}", p.degree(), p.display(g.skeleton()));
                }
            }
            Ok(0)
        }
        Command::Boundary { file, vertex, cap } => {
            let g = load(&file)?;
            let v = resolve_vertex(&g, &vertex)?;
            let q = parse_degree(&g, &cap)?;
            let paths = boundary_paths(&g, v, &q);
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "boundary",
                    "vertex": vertex,
                    "cap": q.to_string(),
                    "count": paths.len(),
                    "paths": paths
                        .iter()
                        .map(|x| json!({
                            "prefix": path_json(&g, &x.prefix),
                            "complete": x.is_complete(),
                            "exhausted": x.exhausted,
                        }))
                        .collect::<Vec<_>>(),
                }));
            } else {
                println!("{} boundary path(s) at {} within {}", paths.len(), vertex, q);
                for x in &paths {
                    let kind = if x.is_complete() { "complete" } else { "truncated" };
                    println!(
                        "{} degree {}: {}",
                        kind,
                        x.degree(),
                        x.prefix.display(g.skeleton())
                    );
                }
            }
            Ok(0)
        }
        Command::Squares { file, enumerate } => {
            // enumeration works from the skeleton alone; the document's own
            // square table is only consulted (and checked) otherwise
            let (sk, tables) = if enumerate {
                let sk = load_skeleton(&file)?;
                let tables = enumerate_square_sets(&sk);
                (sk, tables)
            } else {
                let g = load(&file)?;
                (g.skeleton().clone(), vec![g.squares().clone()])
            };
            let sk = &sk;
            let render = |t: &kgraph::SquareTable| {
                t.squares()
                    .iter()
                    .map(|sq| {
                        [
                            sk.edge_id(sq.outer_lo).to_string(),
                            sk.edge_id(sq.inner_lo).to_string(),
                            sk.edge_id(sq.outer_hi).to_string(),
                            sk.edge_id(sq.inner_hi).to_string(),
                        ]
                    })
                    .collect::<Vec<_>>()
            };
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "squares",
                    "enumerated": enumerate,
                    "count": tables.len(),
                    "tables": tables.iter().map(render).collect::<Vec<_>>(),
                }));
            } else if enumerate {
                println!("{} square set(s)", tables.len());
                for (i, t) in tables.iter().enumerate() {
                    println!("table {}:", i + 1);
                    for sq in render(t) {
                        println!("  [{}]", sq.join(", "));
                    }
                }
            } else {
                println!("{} square(s) in the document table", tables[0].len());
                for sq in render(&tables[0]) {
                    println!("[{}]", sq.join(", "));
                }
            }
            Ok(0)
        }
        Command::CkVerify { file, cap } => {
            let g = load(&file)?;
            let q = parse_degree(&g, &cap)?;
            let rep = match build_rep(&g) {
                Ok(rep) => rep,
                Err(RepError::InfiniteBoundary) => {
                    return Err(CliError::Guard(RepError::InfiniteBoundary.to_string()))
                }
                Err(RepError::NotLocallyConvex) => {
                    if cli.json {
                        emit(json!({
                            "schema": SCHEMA,
                            "command": "ck-verify",
                            "buildable": false,
                            "reason": RepError::NotLocallyConvex.to_string(),
                        }));
                    } else {
                        println!("{}", RepError::NotLocallyConvex);
                    }
                    return Ok(1);
                }
            };
            let violations = verify_ck_relations(&rep, &q);
            let edge_level = verify_edge_level_equivalence(&rep, &q);
            let spanning = verify_spanning_formula(&rep, &q);
            let dimension = span_dimension(&rep);
            let ok = violations.is_empty() && edge_level && spanning.is_empty();
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "ck-verify",
                    "buildable": true,
                    "basis": rep.dim(),
                    "cap": q.to_string(),
                    "relation_violations": violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
                    "edge_level_equivalence": edge_level,
                    "spanning_violations": spanning.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
                    "span_dimension": dimension,
                }));
            } else if ok {
                println!(
                    "relations (1)-(4) verified; spanning formula verified; span dimension {dimension}"
                );
            } else {
                for v in &violations {
                    println!("relation violation: {v:?}");
                }
                if !edge_level {
                    println!("edge-level equivalence failed");
                }
                for v in &spanning {
                    println!("spanning violation: {v:?}");
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::ForcedZeros { file } => {
            let g = load(&file)?;
            let forced = forced_zero_generators(&g);
            let rendered: Vec<String> = forced.iter().map(|p| p.display(g.skeleton())).collect();
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "forced-zeros",
                    "count": rendered.len(),
                    "forced": rendered,
                }));
            } else if rendered.is_empty() {
                println!("no forced zeros");
            } else {
                println!("{} forced zero generator(s)", rendered.len());
                for r in &rendered {
                    println!("{r}");
                }
            }
            Ok(if rendered.is_empty() { 0 } else { 1 })
        }
        Command::Core { file, q } => {
            let g = load(&file)?;
            let level = parse_degree(&g, &q)?;
            let report = core_report(&g, &level);
            let sk = g.skeleton();
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "core",
                    "q": level.to_string(),
                    "blocks": report.blocks.iter().map(|((p, v), dim)| json!({
                        "degree": p.to_string(),
                        "source": sk.vertex_id(*v),
                        "dimension": dim,
                    })).collect::<Vec<_>>(),
                    "inclusions": report.inclusions.iter().map(|inc| json!({
                        "from_level": inc.from_level.to_string(),
                        "per_vertex": inc.per_vertex.iter().map(|(v, mult)| json!({
                            "vertex": sk.vertex_id(*v),
                            "multiplicities": mult.iter().map(|((d, w), n)| json!({
                                "degree": d.to_string(),
                                "source": sk.vertex_id(*w),
                                "count": n,
                            })).collect::<Vec<_>>(),
                        })).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                }));
            } else {
                println!("core blocks at level {level}:");
                for ((p, v), dim) in &report.blocks {
                    println!("degree {} source {} dimension {}", p, sk.vertex_id(*v), dim);
                }
                let total: usize = report.blocks.values().sum();
                println!("total dimension {total}");
            }
            Ok(0)
        }
        Command::ConditionB { file, depth } => {
            let g = load(&file)?;
            let d = parse_degree(&g, &depth)?;
            let sk = g.skeleton();
            let mut refuted = false;
            let mut rows = Vec::new();
            for v in 0..sk.vertex_count() {
                let verdict = condition_b_check(&g, v, &d);
                let (label, witness) = match &verdict {
                    ConditionBVerdict::Proven { witness } => {
                        ("PROVEN", Some(witness.prefix.display(sk)))
                    }
                    ConditionBVerdict::WitnessToDepth { witness } => {
                        ("WITNESS_TO_DEPTH", Some(witness.prefix.display(sk)))
                    }
                    ConditionBVerdict::RefutedToDepth => {
                        refuted = true;
                        ("REFUTED_TO_DEPTH", None)
                    }
                };
                rows.push((sk.vertex_id(v).to_string(), label, witness));
            }
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "condition-b",
                    "depth": d.to_string(),
                    "verdicts": rows.iter().map(|(v, label, witness)| json!({
                        "vertex": v,
                        "verdict": label,
                        "witness": witness,
                    })).collect::<Vec<_>>(),
                }));
            } else {
                for (v, label, witness) in &rows {
                    match witness {
                        Some(w) => println!("{v}: {label} via {w}"),
                        None => println!("{v}: {label}"),
                    }
                }
            }
            Ok(if refuted { 1 } else { 0 })
        }
        Command::Ideals { file, list } => {
            let g = load(&file)?;
            let lattice = match enumerate_sat_hered(&g) {
                Ok(l) => l,
                Err(e @ IdealsError::TooLarge { .. }) => {
                    return Err(CliError::Guard(e.to_string()))
                }
                Err(e) => return Err(input_err(e)),
            };
            let sk = g.skeleton();
            let render = |s: &BTreeSet<VertexIx>| {
                s.iter().map(|&v| sk.vertex_id(v).to_string()).collect::<Vec<_>>()
            };
            if cli.json {
                emit(json!({
                    "schema": SCHEMA,
                    "command": "ideals",
                    "count": lattice.sets.len(),
                    "sets": lattice.sets.iter().map(render).collect::<Vec<_>>(),
                }));
            } else {
                println!("{} saturated hereditary set(s)", lattice.sets.len());
                if list {
                    for s in &lattice.sets {
                        println!("{{{}}}", render(s).join(", "));
                    }
                }
            }
            Ok(0)
        }
        Command::Quotient { file, set } => {
            let g = load(&file)?;
            let h = resolve_set(&g, &set)?;
            match quotient_graph(&g, &h) {
                Ok(q) => {
                    if cli.json {
                        emit(json!({
                            "schema": SCHEMA,
                            "command": "quotient",
                            "graph": kgraph::io::document(&q),
                        }));
                    } else {
                        print!("{}", kgraph::io::serialise(&q));
                    }
                    Ok(0)
                }
                Err(e) => {
                    if cli.json {
                        emit(json!({
                            "schema": SCHEMA,
                            "command": "quotient",
                            "error": e.to_string(),
                        }));
                    } else {
                        println!("{e}");
                    }
                    Ok(1)
                }
            }
        }
        Command::Restrict { file, set } => {
            let g = load(&file)?;
            let h = resolve_set(&g, &set)?;
            match restriction_graph(&g, &h) {
                Ok(r) => {
                    if cli.json {
                        emit(json!({
                            "schema": SCHEMA,
                            "command": "restrict",
                            "graph": kgraph::io::document(&r),
                        }));
                    } else {
                        print!("{}", kgraph::io::serialise(&r));
                    }
                    Ok(0)
                }
                Err(e) => {
                    let tags = VertexSet::analyse(&g, h);
                    if cli.json {
                        emit(json!({
                            "schema": SCHEMA,
                            "command": "restrict",
                            "error": e.to_string(),
                            "hereditary": tags.hereditary,
                            "saturated": tags.saturated,
                        }));
                    } else {
                        println!("{e}");
                    }
                    Ok(1)
                }
            }
        }
        Command::ExportDot { file } => {
            let g = load(&file)?;
            print!("{}", kgraph::io::export_dot(&g));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
