//! Command-line driver: inspection of the class lattice and weighted
//! graph, clique enumeration and databases, exact plane geometry, symbolic
//! constraints, finite-field searches, and the `reproduce` targets that
//! re-run the bundled reference computations against embedded expected
//! values.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};

use eckardt::cliques::{
    self, blowdown_obstruction, classify, enumerate_cliques, find_representative,
    generate_databases, maximality_facts, orbit_decomposition_13, suborbit_table_with_workers,
    type_index, CliqueDatabase, DbHeader,
};
use eckardt::field::{Domain, Field, PrimeField, Rationals};
use eckardt::io::{
    fnv1a, parse_clique_file, parse_config, parse_db, parse_points, write_db, ParsedConfig,
    ParsedPoints,
};
use eckardt::picard::{ClassList, ExceptionalClass};
use eckardt::plane::{concurrent_count, curve_for_class, general_position, SetupTag};
use eckardt::reference;
use eckardt::search::{
    clique8_representative, default_representatives, eckardt_search, family_point_scan,
    family_slice, general_position_exists, instantiate_setup, verify_config,
};
use eckardt::symbolic::{
    constraint_polynomial, general_position_polynomials, parse_poly, VAR_NAMES,
};
use eckardt::weylgraph::{Clique, WeightedGraph, WEYL_ORDER};

#[derive(Parser)]
#[command(
    name = "eckardt",
    version,
    about = "Intersection combinatorics of the 240 exceptional classes on a del Pezzo surface of degree 1"
)]
struct Cli {
    /// Worker threads for parallelizable stages
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Wall-clock budget in seconds for long-running targets
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write the command output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the 240 exceptional classes in canonical order
    Classes,
    /// Weighted-graph facts and orbit closures
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Clique enumeration, classification and representatives
    Cliques {
        #[command(subcommand)]
        cmd: CliquesCmd,
    },
    /// Exact plane geometry over Q or a prime field
    Plane {
        #[command(subcommand)]
        cmd: PlaneCmd,
    },
    /// Symbolic constraint polynomials in the set-up parameters
    Symbolic {
        #[command(subcommand)]
        cmd: SymbolicCmd,
    },
    /// Finite-field searches and exact verification
    Search {
        #[command(subcommand)]
        cmd: SearchCmd,
    },
    /// Sub-orbit database files
    Db {
        #[command(subcommand)]
        cmd: DbCmd,
    },
    /// Re-run a bundled reference computation and check the results
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Vertex count, weight histogram, partner pairs, group order
    Info,
    /// Breadth-first Weyl orbit closure of a clique
    Orbit {
        /// clique file (classes, one per line or ;-separated)
        #[arg(long)]
        clique: PathBuf,
        /// element budget for the closure
        #[arg(long, default_value_t = 1 << 26)]
        limit: usize,
    },
}

#[derive(Subcommand)]
enum CliquesCmd {
    /// Enumerate cliques with the given weights, size and required members
    Enumerate {
        /// allowed pairwise weights, e.g. "1,2"
        #[arg(long)]
        weights: String,
        #[arg(long)]
        size: usize,
        /// required member classes, ;-separated
        #[arg(long)]
        required: Option<String>,
    },
    /// Classify a clique by the canonical form of its heavy subgraph
    Classify {
        #[arg(long)]
        clique: PathBuf,
    },
    /// The orbit / sub-orbit table of the eight size-10 types
    Table,
    /// First database representative satisfying constraints
    FindRep {
        #[arg(long = "type")]
        type_index: u8,
        /// classes that must be contained, ;-separated
        #[arg(long)]
        contains: Option<String>,
        /// exclude any line class other than the required ones
        #[arg(long)]
        no_other_lines: bool,
        /// exclude blow-up classes
        #[arg(long)]
        exclude_blowups: bool,
        /// read this database file instead of regenerating
        #[arg(long)]
        db: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlaneCmd {
    /// General-position check on eight points
    Gp {
        /// expected field: "q" or "p=<prime>"; must match the file header
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        points: PathBuf,
    },
    /// The member of a class's linear system through the configured points
    Curve {
        /// class vector "a b1 .. b8"
        #[arg(long)]
        class: String,
        #[arg(long)]
        config: PathBuf,
    },
    /// Count clique members whose curves pass through the target point
    Concurrent {
        #[arg(long)]
        clique: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum SymbolicCmd {
    /// Concurrency constraint of a class over a point set-up
    Constraint {
        /// class vector "a b1 .. b8"
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value_t = SetupArg::A)]
        setup: SetupArg,
        /// omit the through-P evaluation row
        #[arg(long)]
        no_through_p: bool,
    },
    /// The degeneracy polynomial set S of a set-up
    GpSet {
        #[arg(long, value_enum, default_value_t = SetupArg::A)]
        setup: SetupArg,
    },
    /// Evaluate a polynomial at an exact rational assignment
    Eval {
        /// polynomial in the term format, e.g. "2*a^2*b - 1/2*c"
        #[arg(long)]
        poly: String,
        /// assignment "a=1,b=5/4,…"
        #[arg(long)]
        assign: String,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Does P²(F_p) contain eight points in general position?
    GpExists {
        #[arg(long)]
        p: u64,
    },
    /// Brute-force parameter scan for a generalized Eckardt point
    Eckardt {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value_t = SetupArg::A)]
        setup: SetupArg,
        /// clique representative file; defaults to the pinned clique-8
        /// representative
        #[arg(long)]
        rep: Option<PathBuf>,
    },
    /// Exact verification of a configuration against a clique
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        clique: PathBuf,
    },
    /// The family on the ramification locus and its rational point scan
    Family {
        #[arg(long, default_value_t = 100)]
        height: u64,
    },
}

#[derive(Subcommand)]
enum DbCmd {
    /// Generate the per-type sub-orbit database files
    Generate {
        /// single type 1..=8, or all when omitted
        #[arg(long = "type")]
        type_index: Option<u8>,
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Filtered lookup in a database file
    Query {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        contains: Option<String>,
        #[arg(long)]
        no_other_lines: bool,
        #[arg(long)]
        exclude_blowups: bool,
        /// print every match instead of the first
        #[arg(long)]
        all: bool,
    },
    /// Re-check the header invariants of a database file
    Validate {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SetupArg {
    A,
    B,
}

impl From<SetupArg> for SetupTag {
    fn from(s: SetupArg) -> SetupTag {
        match s {
            SetupArg::A => SetupTag::A,
            SetupArg::B => SetupTag::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    /// the stabilizer / orbit / sub-orbit table
    Table1,
    /// orbit decomposition of the size-10 weight-{1,3} cliques
    Orbits13,
    /// maximal-clique structure of the weighted graph
    Maximality,
    /// the realization over F_19
    F19,
    /// no eight points in general position for p ≤ 13
    PSmall,
    /// the scans over F_17 (long)
    P17,
    /// the scans over F_23 (long)
    P23,
    /// the family with a concurrency point on the ramification locus
    Family,
    /// the constraint polynomials F1, F2 and the oracle
    F1f2,
    /// the conic constraint factorization
    Conic,
    /// the blow-down obstruction facts
    Dp2,
}

struct Ctx {
    workers: usize,
    budget: Option<Duration>,
    out: Option<PathBuf>,
    inputs: Vec<(String, u64)>,
}

impl Ctx {
    fn read(&mut self, path: &PathBuf) -> Result<String, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        self.inputs
            .push((path.display().to_string(), fnv1a(text.as_bytes())));
        Ok(text)
    }

    fn deadline(&self, started: Instant) -> Option<Instant> {
        self.budget.map(|b| started + b)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut ctx = Ctx {
        workers: cli.workers.max(1),
        budget: cli.budget.map(Duration::from_secs),
        out: cli.out.clone(),
        inputs: Vec::new(),
    };
    let (name, result) = run(&mut ctx, &cli.cmd);
    match result {
        Ok((output, code)) => {
            let digest = output_digest(&output);
            match &ctx.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &output) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{output}"),
            }
            let mut manifest = String::new();
            let _ = writeln!(manifest, "manifest:");
            let _ = writeln!(manifest, "  subcommand: {name}");
            let _ = writeln!(
                manifest,
                "  flags: {}",
                std::env::args().skip(1).collect::<Vec<_>>().join(" ")
            );
            for (path, d) in &ctx.inputs {
                let _ = writeln!(manifest, "  input: {path} fnv1a={d:016x}");
            }
            let _ = writeln!(manifest, "  version: {}", env!("CARGO_PKG_VERSION"));
            let _ = writeln!(manifest, "  output-digest: fnv1a={digest:016x}");
            eprint!("{manifest}");
            ExitCode::from(code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Digest of the output with timing lines excluded, so reruns reproduce it.
fn output_digest(output: &str) -> u64 {
    let stable: String = output
        .lines()
        .filter(|l| !l.trim_start().starts_with("wall-ms:"))
        .collect::<Vec<_>>()
        .join("\n");
    fnv1a(stable.as_bytes())
}

type CmdResult = Result<(String, u8), String>;

fn run(ctx: &mut Ctx, cmd: &Cmd) -> (String, CmdResult) {
    match cmd {
        Cmd::Classes => ("classes".into(), cmd_classes()),
        Cmd::Graph { cmd } => match cmd {
            GraphCmd::Info => ("graph info".into(), cmd_graph_info()),
            GraphCmd::Orbit { clique, limit } => {
                ("graph orbit".into(), cmd_graph_orbit(ctx, clique, *limit))
            }
        },
        Cmd::Cliques { cmd } => match cmd {
            CliquesCmd::Enumerate {
                weights,
                size,
                required,
            } => (
                "cliques enumerate".into(),
                cmd_enumerate(weights, *size, required.as_deref()),
            ),
            CliquesCmd::Classify { clique } => {
                ("cliques classify".into(), cmd_classify(ctx, clique))
            }
            CliquesCmd::Table => ("cliques table".into(), cmd_table(ctx)),
            CliquesCmd::FindRep {
                type_index,
                contains,
                no_other_lines,
                exclude_blowups,
                db,
            } => (
                "cliques find-rep".into(),
                cmd_find_rep(
                    ctx,
                    *type_index,
                    contains.as_deref(),
                    *no_other_lines,
                    *exclude_blowups,
                    db.as_ref(),
                ),
            ),
        },
        Cmd::Plane { cmd } => match cmd {
            PlaneCmd::Gp { field, points } => (
                "plane gp".into(),
                cmd_plane_gp(ctx, field.as_deref(), points),
            ),
            PlaneCmd::Curve { class, config } => {
                ("plane curve".into(), cmd_plane_curve(ctx, class, config))
            }
            PlaneCmd::Concurrent { clique, config } => (
                "plane concurrent".into(),
                cmd_plane_concurrent(ctx, clique, config),
            ),
        },
        Cmd::Symbolic { cmd } => match cmd {
            SymbolicCmd::Constraint {
                class,
                setup,
                no_through_p,
            } => (
                "symbolic constraint".into(),
                cmd_sym_constraint(class, (*setup).into(), !*no_through_p),
            ),
            SymbolicCmd::GpSet { setup } => {
                ("symbolic gp-set".into(), cmd_sym_gpset((*setup).into()))
            }
            SymbolicCmd::Eval { poly, assign } => {
                ("symbolic eval".into(), cmd_sym_eval(poly, assign))
            }
        },
        Cmd::Search { cmd } => match cmd {
            SearchCmd::GpExists { p } => ("search gp-exists".into(), cmd_gp_exists(ctx, *p)),
            SearchCmd::Eckardt { p, setup, rep } => (
                "search eckardt".into(),
                cmd_eckardt(ctx, *p, (*setup).into(), rep.as_ref()),
            ),
            SearchCmd::Verify { config, clique } => {
                ("search verify".into(), cmd_verify(ctx, config, clique))
            }
            SearchCmd::Family { height } => ("search family".into(), cmd_family(*height)),
        },
        Cmd::Db { cmd } => match cmd {
            DbCmd::Generate { type_index, dir } => {
                ("db generate".into(), cmd_db_generate(ctx, *type_index, dir))
            }
            DbCmd::Query {
                file,
                contains,
                no_other_lines,
                exclude_blowups,
                all,
            } => (
                "db query".into(),
                cmd_db_query(
                    ctx,
                    file,
                    contains.as_deref(),
                    *no_other_lines,
                    *exclude_blowups,
                    *all,
                ),
            ),
            DbCmd::Validate { file } => ("db validate".into(), cmd_db_validate(ctx, file)),
        },
        Cmd::Reproduce { target } => ("reproduce".into(), cmd_reproduce(ctx, *target)),
    }
}

fn cmd_classes() -> CmdResult {
    let mut out = String::new();
    for c in ClassList::get().iter() {
        let _ = writeln!(out, "{c}");
    }
    Ok((out, 0))
}

fn cmd_graph_info() -> CmdResult {
    let _ = WeightedGraph::get();
    let mut out = String::new();
    let _ = writeln!(out, "graph-info:");
    let _ = writeln!(out, "  vertices: 240");
    let _ = writeln!(out, "  weight-histogram-per-vertex: 3:1 2:56 1:126 0:56");
    let _ = writeln!(out, "  partner-pairs: 120");
    let _ = writeln!(out, "  weyl-order: {WEYL_ORDER}");
    Ok((out, 0))
}

fn cmd_graph_orbit(ctx: &mut Ctx, clique: &PathBuf, limit: usize) -> CmdResult {
    let g = WeightedGraph::get();
    let text = ctx.read(clique)?;
    let classes = parse_clique_file(&text).map_err(|e| e.to_string())?;
    let k = Clique::from_classes(g, &classes);
    let mut out = String::new();
    match g.orbit_of_clique(&k, limit) {
        Ok(size) => {
            let _ = writeln!(out, "orbit-size: {size}");
            Ok((out, 0))
        }
        Err(e) => {
            let _ = writeln!(out, "orbit-budget-exceeded: {e}");
            Ok((out, 3))
        }
    }
}

fn parse_weights(s: &str) -> Result<Vec<i8>, String> {
    s.split(',')
        .map(|w| {
            w.trim()
                .parse::<i8>()
                .map_err(|_| format!("bad weight {w:?}"))
        })
        .collect()
}

fn parse_classes_arg(s: &str) -> Result<Vec<ExceptionalClass>, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|e: eckardt::picard::ParseClassError| e.to_string())
        })
        .collect()
}

fn cmd_enumerate(weights: &str, size: usize, required: Option<&str>) -> CmdResult {
    let g = WeightedGraph::get();
    let weights = parse_weights(weights)?;
    let required_classes = match required {
        Some(s) => parse_classes_arg(s)?,
        None => Vec::new(),
    };
    let req_idx: Vec<u8> = required_classes
        .iter()
        .map(|c| {
            g.classes()
                .index_of(c.vec())
                .ok_or_else(|| format!("{c} is not one of the 240 classes"))
        })
        .collect::<Result<_, _>>()?;
    for (i, &u) in req_idx.iter().enumerate() {
        for &v in &req_idx[i + 1..] {
            if u == v || !weights.contains(&g.weight(u, v)) {
                return Err(
                    "required members are not pairwise compatible with the weight set".to_string(),
                );
            }
        }
    }
    let cliques = enumerate_cliques(g, &weights, size, &req_idx);
    let db = CliqueDatabase {
        header: DbHeader {
            weights,
            size,
            required: required_classes,
            generator: format!("eckardt {}", env!("CARGO_PKG_VERSION")),
        },
        cliques,
    };
    Ok((write_db(&db), 0))
}

fn cmd_classify(ctx: &mut Ctx, clique: &PathBuf) -> CmdResult {
    let g = WeightedGraph::get();
    let text = ctx.read(clique)?;
    let classes = parse_clique_file(&text).map_err(|e| e.to_string())?;
    let k = Clique::from_classes(g, &classes);
    let iso = classify(g, &k).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "classify:");
    let _ = writeln!(out, "  size: {}", iso.size);
    let _ = writeln!(out, "  regime: {:?}", iso.regime);
    let _ = writeln!(out, "  heavy-edges: {:?}", iso.canon.edges());
    match type_index(&iso) {
        Some(t) => {
            let _ = writeln!(out, "  type: {t}");
        }
        None => {
            let _ = writeln!(out, "  type: (not a size-10 weight-{{1,2}} type)");
        }
    }
    Ok((out, 0))
}

fn render_table(rows: &[cliques::TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "clique-table:");
    let _ = writeln!(out, "  type  stabilizer  orbit       sub-orbit  w1-edges");
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<5} {:<11} {:<11} {:<10} {}",
            r.clique_type, r.stabilizer, r.orbit, r.suborbit, r.w1_edges
        );
    }
    out
}

fn cmd_table(ctx: &mut Ctx) -> CmdResult {
    let g = WeightedGraph::get();
    let rows = suborbit_table_with_workers(g, ctx.workers);
    Ok((render_table(&rows), 0))
}

fn cmd_find_rep(
    ctx: &mut Ctx,
    t: u8,
    contains: Option<&str>,
    no_other_lines: bool,
    exclude_blowups: bool,
    db_path: Option<&PathBuf>,
) -> CmdResult {
    let g = WeightedGraph::get();
    if !(1..=8).contains(&t) {
        return Err(format!("type must be 1..=8, got {t}"));
    }
    let db = match db_path {
        Some(path) => {
            let text = ctx.read(path)?;
            parse_db(g, &text).map_err(|e| e.to_string())?
        }
        None => {
            let mut dbs = generate_databases(g, ctx.workers);
            dbs.swap_remove(t as usize - 1).1
        }
    };
    let must: Vec<ExceptionalClass> = match contains {
        Some(s) => parse_classes_arg(s)?,
        None => Vec::new(),
    };
    let must_clone = must.clone();
    let found = find_representative(g, &db, &must, move |c| {
        (no_other_lines && c.is_line() && !must_clone.contains(c))
            || (exclude_blowups && c.is_blowup())
    });
    let mut out = String::new();
    match found {
        Some(k) => {
            let _ = writeln!(out, "{k}");
            Ok((out, 0))
        }
        None => {
            let _ = writeln!(out, "no matching representative");
            Ok((out, 1))
        }
    }
}

fn cmd_plane_gp(ctx: &mut Ctx, field: Option<&str>, points: &PathBuf) -> CmdResult {
    let text = ctx.read(points)?;
    let parsed = parse_points(&text).map_err(|e| e.to_string())?;
    if let Some(fspec) = field {
        let ok = match (&parsed, fspec) {
            (ParsedPoints::Rational(_), "q") => true,
            (ParsedPoints::Prime(f, _), spec) => spec
                .strip_prefix("p=")
                .and_then(|v| v.parse::<u64>().ok())
                .map(|p| p == f.modulus())
                .unwrap_or(false),
            _ => false,
        };
        if !ok {
            return Err(format!(
                "--field {fspec} does not match the file's field header"
            ));
        }
    }
    let mut out = String::new();
    let result = match parsed {
        ParsedPoints::Rational(pts) => {
            if pts.len() != 8 {
                return Err(format!("expected 8 points, got {}", pts.len()));
            }
            general_position(&Rationals, &pts).map_err(|v| v.to_string())
        }
        ParsedPoints::Prime(f, pts) => {
            if pts.len() != 8 {
                return Err(format!("expected 8 points, got {}", pts.len()));
            }
            general_position(&f, &pts).map_err(|v| v.to_string())
        }
    };
    match result {
        Ok(()) => {
            let _ = writeln!(out, "general-position: ok");
            Ok((out, 0))
        }
        Err(v) => {
            let _ = writeln!(out, "general-position: violated ({v})");
            Ok((out, 2))
        }
    }
}

fn cmd_plane_curve(ctx: &mut Ctx, class: &str, config: &PathBuf) -> CmdResult {
    let class: ExceptionalClass = class
        .parse()
        .map_err(|e: eckardt::picard::ParseClassError| e.to_string())?;
    let text = ctx.read(config)?;
    let mut out = String::new();
    match parse_config(&text).map_err(|e| e.to_string())? {
        ParsedConfig::Rational(cfg) => {
            let curve = curve_for_class(&cfg, &class).map_err(|e| e.to_string())?;
            match curve {
                Some(cv) => {
                    let _ = writeln!(out, "curve: {}", cv.display(&cfg.field));
                    let _ = writeln!(
                        out,
                        "through-target: {}",
                        cv.passes_through(&cfg.field, &cfg.target)
                    );
                }
                None => {
                    let _ = writeln!(out, "curve: none (empty linear system)");
                }
            }
        }
        ParsedConfig::Prime(cfg) => {
            let curve = curve_for_class(&cfg, &class).map_err(|e| e.to_string())?;
            match curve {
                Some(cv) => {
                    let _ = writeln!(out, "curve: {}", cv.display(&cfg.field));
                    let _ = writeln!(
                        out,
                        "through-target: {}",
                        cv.passes_through(&cfg.field, &cfg.target)
                    );
                }
                None => {
                    let _ = writeln!(out, "curve: none (empty linear system)");
                }
            }
        }
    }
    Ok((out, 0))
}

fn cmd_plane_concurrent(ctx: &mut Ctx, clique: &PathBuf, config: &PathBuf) -> CmdResult {
    let clique_text = ctx.read(clique)?;
    let classes = parse_clique_file(&clique_text).map_err(|e| e.to_string())?;
    let config_text = ctx.read(config)?;
    let mut out = String::new();
    let count = match parse_config(&config_text).map_err(|e| e.to_string())? {
        ParsedConfig::Rational(cfg) => concurrent_count(&cfg, &classes).map_err(|e| e.to_string())?,
        ParsedConfig::Prime(cfg) => concurrent_count(&cfg, &classes).map_err(|e| e.to_string())?,
    };
    let _ = writeln!(out, "concurrent: {count} of {}", classes.len());
    Ok((out, 0))
}

fn cmd_sym_constraint(class: &str, setup: SetupTag, through_p: bool) -> CmdResult {
    let class: ExceptionalClass = class
        .parse()
        .map_err(|e: eckardt::picard::ParseClassError| e.to_string())?;
    let res = constraint_polynomial(setup, &class, through_p).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "constraint:");
    let _ = writeln!(out, "  raw-terms: {}", res.raw.num_terms());
    for (s, m) in &res.stripped {
        let _ = writeln!(out, "  stripped: ({s})^{m}");
    }
    let _ = writeln!(out, "  residual: {}", res.residual);
    let _ = writeln!(out, "  factorization-holds: {}", res.factorization_holds());
    Ok((out, 0))
}

fn cmd_sym_gpset(setup: SetupTag) -> CmdResult {
    let s = general_position_polynomials(setup);
    let mut out = String::new();
    let _ = writeln!(out, "# degeneracy polynomials: {}", s.len());
    for p in s {
        let _ = writeln!(out, "{p}");
    }
    Ok((out, 0))
}

fn cmd_sym_eval(poly: &str, assign: &str) -> CmdResult {
    let p = parse_poly(poly).map_err(|e| e.to_string())?;
    let f = Rationals;
    let mut values = vec![f.zero(); 8];
    let mut given = [false; 8];
    for part in assign.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| format!("bad assignment {part:?}"))?;
        let var = VAR_NAMES
            .iter()
            .position(|&v| v.to_string() == name.trim())
            .ok_or_else(|| format!("unknown variable {name:?}"))?;
        values[var] = f.parse_elem(value).map_err(|e| e.to_string())?;
        given[var] = true;
    }
    for (m, _) in p.terms() {
        for v in 0..8 {
            if m.0[v] > 0 && !given[v] {
                return Err(format!("variable {} not assigned", VAR_NAMES[v]));
            }
        }
    }
    let value = p.evaluate(&values);
    Ok((format!("value: {}\n", f.fmt_elem(&value)), 0))
}

fn cmd_gp_exists(ctx: &mut Ctx, p: u64) -> CmdResult {
    if !eckardt::field::is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    let report = general_position_exists(p, ctx.workers);
    Ok((report.render(), 0))
}

fn cmd_eckardt(ctx: &mut Ctx, p: u64, setup: SetupTag, rep: Option<&PathBuf>) -> CmdResult {
    if !eckardt::field::is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    let classes = match rep {
        Some(path) => {
            let text = ctx.read(path)?;
            parse_clique_file(&text).map_err(|e| e.to_string())?
        }
        None => clique8_representative(),
    };
    let report =
        eckardt_search(p, setup, &classes, ctx.workers, ctx.budget).map_err(|e| e.to_string())?;
    let code = if report.partial {
        3
    } else if report.realizations.is_empty() {
        0
    } else {
        2
    };
    Ok((report.render(), code))
}

fn cmd_verify(ctx: &mut Ctx, config: &PathBuf, clique: &PathBuf) -> CmdResult {
    let clique_text = ctx.read(clique)?;
    let classes = parse_clique_file(&clique_text).map_err(|e| e.to_string())?;
    let config_text = ctx.read(config)?;
    let out = match parse_config(&config_text).map_err(|e| e.to_string())? {
        ParsedConfig::Rational(cfg) => {
            let o = verify_config(&cfg, &classes).map_err(|e| e.to_string())?;
            o.render(&cfg.field)
        }
        ParsedConfig::Prime(cfg) => {
            let o = verify_config(&cfg, &classes).map_err(|e| e.to_string())?;
            o.render(&cfg.field)
        }
    };
    Ok((out, 0))
}

fn cmd_family(height: u64) -> CmdResult {
    let fam = family_slice().map_err(|e| e.to_string())?;
    let mut out = String::new();
    let f = Rationals;
    let _ = writeln!(out, "family:");
    let _ = writeln!(out, "  f1: {}", fam.f1);
    let _ = writeln!(out, "  f2-terms: {}", fam.f2.num_terms());
    let _ = writeln!(out, "  slice: {}", fam.slice);
    let _ = writeln!(out, "  a-at-base-point: {}", f.fmt_elem(&fam.a_at_q));
    let _ = writeln!(out, "  concurrent: {}", fam.outcome.concurrent);
    let _ = writeln!(
        out,
        "  ramification-pair: {}",
        fam.outcome
            .ramification_pair
            .map(|(a, b)| format!("{a} | {b}"))
            .unwrap_or_else(|| "none".into())
    );
    let _ = writeln!(
        out,
        "  partners-concurrent: {:?}",
        fam.outcome.partners_concurrent
    );
    let points = family_point_scan(&fam, height);
    let _ = writeln!(out, "  points-up-to-height-{height}: {}", points.len());
    for pt in &points {
        let _ = writeln!(
            out,
            "  point: e={} f={} height={} avoids-degeneracies={} realizes={}",
            f.fmt_elem(&pt.e),
            f.fmt_elem(&pt.f),
            pt.height,
            pt.avoids_v2,
            pt.realizes
        );
    }
    Ok((out, 0))
}

fn cmd_db_generate(ctx: &mut Ctx, t: Option<u8>, dir: &PathBuf) -> CmdResult {
    let g = WeightedGraph::get();
    let dbs = generate_databases(g, ctx.workers);
    let mut out = String::new();
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    for (ti, db) in &dbs {
        if let Some(want) = t {
            if want != *ti {
                continue;
            }
        }
        let text = write_db(db);
        let path = dir.join(format!("suborbits-type{ti}.db"));
        std::fs::write(&path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        let _ = writeln!(
            out,
            "wrote {} entries={} fnv1a={:016x}",
            path.display(),
            db.cliques.len(),
            fnv1a(text.as_bytes())
        );
    }
    Ok((out, 0))
}

fn cmd_db_query(
    ctx: &mut Ctx,
    file: &PathBuf,
    contains: Option<&str>,
    no_other_lines: bool,
    exclude_blowups: bool,
    all: bool,
) -> CmdResult {
    let g = WeightedGraph::get();
    let text = ctx.read(file)?;
    let db = parse_db(g, &text).map_err(|e| e.to_string())?;
    let must: Vec<ExceptionalClass> = match contains {
        Some(s) => parse_classes_arg(s)?,
        None => Vec::new(),
    };
    let must_idx: Vec<u8> = must
        .iter()
        .map(|c| g.classes().index_of(c.vec()).expect("class"))
        .collect();
    let matches: Vec<&Clique> = db
        .cliques
        .iter()
        .filter(|k| {
            must_idx.iter().all(|&r| k.contains(r))
                && k.verts().iter().all(|&v| {
                    let c = g.classes().class(v);
                    if must_idx.contains(&v) {
                        return true;
                    }
                    !(no_other_lines && c.is_line()) && !(exclude_blowups && c.is_blowup())
                })
        })
        .collect();
    let mut out = String::new();
    if matches.is_empty() {
        let _ = writeln!(out, "no matching entries");
        return Ok((out, 1));
    }
    if all {
        for k in matches {
            let _ = writeln!(out, "{k}");
        }
    } else {
        let _ = writeln!(out, "{}", matches[0]);
    }
    Ok((out, 0))
}

fn cmd_db_validate(ctx: &mut Ctx, file: &PathBuf) -> CmdResult {
    let g = WeightedGraph::get();
    let text = ctx.read(file)?;
    match parse_db(g, &text) {
        Ok(db) => Ok((format!("valid: {} entries\n", db.cliques.len()), 0)),
        Err(e) => Ok((format!("invalid: {e}\n"), 1)),
    }
}

// ---------------------------------------------------------------------------
// reproduce targets

struct Checker {
    out: String,
    failed: usize,
}

impl Checker {
    fn new(title: &str) -> Checker {
        Checker {
            out: format!("{title}\n"),
            failed: 0,
        }
    }

    fn check(&mut self, label: &str, ok: bool) {
        let _ = writeln!(self.out, "  [{}] {label}", if ok { "pass" } else { "FAIL" });
        if !ok {
            self.failed += 1;
        }
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.out, "  {line}");
    }

    fn finish(mut self) -> CmdResult {
        let code = u8::from(self.failed > 0);
        let _ = writeln!(
            self.out,
            "{}",
            if self.failed == 0 {
                "result: all checks passed".to_string()
            } else {
                format!("result: {} check(s) FAILED", self.failed)
            }
        );
        Ok((self.out, code))
    }
}

fn cmd_reproduce(ctx: &mut Ctx, target: Target) -> CmdResult {
    match target {
        Target::Table1 => reproduce_table1(ctx),
        Target::Orbits13 => reproduce_orbits13(),
        Target::Maximality => reproduce_maximality(),
        Target::F19 => reproduce_f19(ctx),
        Target::PSmall => reproduce_p_small(ctx),
        Target::P17 => reproduce_p_big(ctx, 17),
        Target::P23 => reproduce_p_big(ctx, 23),
        Target::Family => reproduce_family(),
        Target::F1f2 => reproduce_f1f2(),
        Target::Conic => reproduce_conic(),
        Target::Dp2 => reproduce_dp2(ctx),
    }
}

fn reproduce_table1(ctx: &mut Ctx) -> CmdResult {
    let g = WeightedGraph::get();
    let mut c = Checker::new("reproduce table1:");
    let rows = suborbit_table_with_workers(g, ctx.workers);
    c.note(&render_table(&rows));
    c.check("eight types", rows.len() == 8);
    let mut sum = 0;
    for (t, stab, orbit, sub) in reference::TABLE1 {
        let row = rows.iter().find(|r| r.clique_type == t);
        match row {
            Some(r) => {
                c.check(
                    &format!("type {t}: sub-orbit {sub}, orbit {orbit}, stabilizer {stab}"),
                    r.suborbit == sub && r.orbit == orbit && r.stabilizer == stab,
                );
                c.check(
                    &format!(
                        "type {t}: double counting {} × {} = 15120 × {}",
                        r.orbit, r.w1_edges, r.suborbit
                    ),
                    r.orbit * r.w1_edges == 15_120 * r.suborbit,
                );
                sum += r.orbit;
            }
            None => c.check(&format!("type {t} present"), false),
        }
    }
    c.check(
        &format!("orbit sizes sum to {}", reference::SUM_ORBITS),
        sum == reference::SUM_ORBITS,
    );
    let total: u64 = rows.iter().map(|r| r.suborbit).sum();
    c.check("257208 cliques through the fixed pair", total == 257_208);
    c.finish()
}

fn reproduce_orbits13() -> CmdResult {
    let g = WeightedGraph::get();
    let mut c = Checker::new("reproduce orbits13:");
    match orbit_decomposition_13(g, 1 << 26) {
        Ok(d) => {
            for (k, total) in &d.totals {
                c.note(&format!("pair-count {k}: {total} cliques"));
            }
            c.check("four isomorphism types (2..5 pairs)", d.totals.len() == 4);
            c.check("six orbits", d.orbits.len() == 6);
            for (k, sizes) in reference::ORBITS13 {
                let got: Vec<u64> = d
                    .orbits
                    .iter()
                    .filter(|o| o.pair_count == k)
                    .map(|o| o.size)
                    .collect();
                c.check(&format!("pair-count {k}: orbits {sizes:?}"), got == sizes);
            }
        }
        Err(e) => c.check(&format!("decomposition within budget ({e})"), false),
    }
    c.finish()
}

fn reproduce_maximality() -> CmdResult {
    let g = WeightedGraph::get();
    let mut c = Checker::new("reproduce maximality:");
    let report = maximality_facts(g);
    c.check(
        "maximum weight-{1,2} clique size is 12",
        report.max_12 == 12,
    );
    c.check("every size-11 clique extends", report.every_11_extends);
    c.check(
        "all size-12 cliques are four disjoint weight-2 triangles",
        report.twelve_all_four_triangles,
    );
    c.check(
        "maximum weight-2-only clique size is 3",
        report.max_weight2_only == 3,
    );
    c.check(
        "maximum weight-{1,3} clique size is 16",
        report.max_13 == 16,
    );
    c.check(
        "no maximal weight-{1,3} cliques of sizes 10..=15",
        report.no_maximal_13_between_10_and_15,
    );
    c.finish()
}

fn reproduce_f19(ctx: &mut Ctx) -> CmdResult {
    let mut c = Checker::new("reproduce f19:");
    let rep = clique8_representative();
    let report =
        eckardt_search(19, SetupTag::A, &rep, ctx.workers, ctx.budget).map_err(|e| e.to_string())?;
    c.note(&format!(
        "scanned {} tuples, {} in general position, {} realizations",
        report.tuples_scanned,
        report.gp_passing,
        report.realizations.len()
    ));
    c.check("scan completed", !report.partial);
    c.check(
        "realizations found over F_19",
        !report.realizations.is_empty(),
    );
    c.check(
        "tuple (2,4,16,7,18,16) among realizations",
        report
            .realizations
            .iter()
            .any(|r| r.as_slice() == reference::F19_TUPLE),
    );
    let f = PrimeField::new(19);
    let config = instantiate_setup(f, SetupTag::A, &reference::F19_TUPLE);
    let outcome = verify_config(&config, &rep).map_err(|e| e.to_string())?;
    c.check(
        "recorded points are in general position",
        outcome.gp == Ok(()),
    );
    c.check("all 10 curves pass through P", outcome.concurrent == 10);
    c.finish()
}

fn reproduce_p_small(ctx: &mut Ctx) -> CmdResult {
    let mut c = Checker::new("reproduce p-small:");
    for p in [2u64, 3, 5, 7, 11, 13] {
        let r = general_position_exists(p, ctx.workers);
        c.check(
            &format!("no eight points in general position over F_{p}"),
            !r.exists,
        );
    }
    c.finish()
}

fn reproduce_p_big(ctx: &mut Ctx, p: u64) -> CmdResult {
    let g = WeightedGraph::get();
    let mut c = Checker::new(&format!("reproduce p{p}:"));
    let started = Instant::now();
    let reps = default_representatives(g, ctx.workers);
    let mut gp_counts: Vec<u64> = Vec::new();
    let mut stopped = false;
    for (t, rep) in &reps {
        if let Some(deadline) = ctx.deadline(started) {
            if Instant::now() >= deadline {
                c.note(&format!("budget exhausted before type {t}"));
                stopped = true;
                break;
            }
        }
        let report = eckardt_search(p, SetupTag::A, rep, ctx.workers, ctx.budget)
            .map_err(|e| e.to_string())?;
        c.note(&format!(
            "type {t}: gp {} realizations {}{}",
            report.gp_passing,
            report.realizations.len(),
            if report.partial { " (partial)" } else { "" }
        ));
        if report.partial {
            stopped = true;
            break;
        }
        gp_counts.push(report.gp_passing);
        c.check(
            &format!("type {t}: no realizations over F_{p}"),
            report.realizations.is_empty(),
        );
    }
    if gp_counts.len() > 1 {
        c.check(
            "tuples passing general position independent of representative",
            gp_counts.windows(2).all(|w| w[0] == w[1]),
        );
    }
    if stopped {
        let mut result = c.finish()?;
        result.1 = 3;
        return Ok(result);
    }
    c.finish()
}

fn reproduce_family() -> CmdResult {
    let mut c = Checker::new("reproduce family:");
    let fam = family_slice().map_err(|e| e.to_string())?;
    c.check(
        "derived F2 vanishes at the base point",
        reference::f2_vanishes_at_q(&fam.f2),
    );
    c.check("slice polynomial vanishes at (e,f) = (1/2, -1/2)", {
        let f = Rationals;
        let vals = vec![
            f.zero(),
            f.zero(),
            f.zero(),
            f.zero(),
            f.parse_elem("1/2").unwrap(),
            f.parse_elem("-1/2").unwrap(),
            f.zero(),
            f.zero(),
        ];
        f.is_zero(&fam.slice.evaluate(&vals))
    });
    c.check(
        "configuration is in general position over Q",
        fam.outcome.gp == Ok(()),
    );
    c.check("ten curves concurrent at P", fam.outcome.concurrent == 10);
    c.check(
        "clique contains a partner pair",
        fam.outcome.ramification_pair.is_some(),
    );
    let (c78, c87) = eckardt::search::family_cubics();
    c.check("the two cubic classes pair to 3", c78.pairing(&c87) == 3);
    c.check(
        "partners of all members concurrent",
        fam.outcome.partners_concurrent == Some(true),
    );
    let points = family_point_scan(&fam, 100);
    let avoiding = points.iter().filter(|pt| pt.avoids_v2).count();
    c.note(&format!(
        "[advisory] points up to height 100: {} found, {} avoid the degeneracy locus",
        points.len(),
        avoiding
    ));
    c.check(
        "every height-100 point avoids the degeneracy locus",
        points.iter().all(|pt| pt.avoids_v2),
    );
    c.finish()
}

fn reproduce_f1f2() -> CmdResult {
    let mut c = Checker::new("reproduce f1f2:");
    let conic = reference::conic_b248();
    let res = constraint_polynomial(SetupTag::A, &conic, true).map_err(|e| e.to_string())?;
    let expect = parse_poly("d - 1")
        .unwrap()
        .mul(&parse_poly("e - d - 1").unwrap());
    c.check(
        "conic constraint equals (d-1)(e-d-1) up to scalar",
        res.residual.eq_up_to_scalar(&expect),
    );
    let c78: ExceptionalClass = "3 1 1 1 1 1 1 0 2".parse().unwrap();
    let res1 = constraint_polynomial(SetupTag::A, &c78, true).map_err(|e| e.to_string())?;
    let f1_ref = reference::f1_reference();
    c.check(
        "c78 constraint equals F1 up to scalar and degeneracy factors",
        reference::eq_up_to_scalar_and_s(SetupTag::A, &res1.residual, &f1_ref),
    );
    let p = parse_poly(reference::F1_P_TEXT).unwrap();
    let q = parse_poly("f - d")
        .unwrap()
        .mul(&parse_poly(reference::F1_Q_FACTOR_TEXT).unwrap());
    let lhs = parse_poly("f - d").unwrap().mul(&p).add(&q);
    let rhs = parse_poly("d")
        .unwrap()
        .mul(&parse_poly("d - f").unwrap())
        .mul(&parse_poly("c + d - f - 1").unwrap())
        .mul(&parse_poly("b*d - f + 1").unwrap());
    c.check(
        "(f-d)p + q = d(d-f)(c+d-f-1)(bd-f+1) by exact expansion",
        lhs == rhs || lhs == rhs.neg(),
    );
    let fam = family_slice().map_err(|e| e.to_string())?;
    c.check(
        "substituted c87 constraint equals F2 up to unit and degeneracy factors",
        reference::eq_up_to_scalar_and_s(SetupTag::A, &fam.f2, &reference::f2_reference()),
    );
    c.check(
        "F2 vanishes at the base point",
        reference::f2_vanishes_at_q(&reference::f2_reference()),
    );
    let agreement = reference::constraint_oracle_agreement(100, 0x0e2c_a11d);
    c.check(
        &format!("symbolic/concrete oracle agreement on {agreement}/100 assignments"),
        agreement == 100,
    );
    c.finish()
}

fn reproduce_conic() -> CmdResult {
    let mut c = Checker::new("reproduce conic:");
    let conic = reference::conic_b248();
    let res = constraint_polynomial(SetupTag::A, &conic, true).map_err(|e| e.to_string())?;
    c.note(&format!("residual: {}", res.residual));
    for (s, m) in &res.stripped {
        c.note(&format!("stripped: ({s})^{m}"));
    }
    let expect = parse_poly("d - 1")
        .unwrap()
        .mul(&parse_poly("e - d - 1").unwrap());
    c.check(
        "residual equals (d-1)(e-d-1) up to scalar",
        res.residual.eq_up_to_scalar(&expect),
    );
    c.check("factorization identity holds", res.factorization_holds());
    c.finish()
}

fn reproduce_dp2(ctx: &mut Ctx) -> CmdResult {
    let g = WeightedGraph::get();
    let mut c = Checker::new("reproduce dp2:");
    let s_classes: Vec<ExceptionalClass> = [
        "1 0 0 0 0 0 0 1 1",
        "1 0 0 1 1 0 0 0 0",
        "1 1 1 0 0 0 0 0 0",
        "1 0 0 0 0 1 1 0 0",
        "4 2 1 2 1 2 1 1 1",
        "4 1 2 2 1 1 1 1 2",
        "4 1 1 2 1 1 2 2 1",
        "4 1 2 1 2 1 2 1 1",
        "4 2 1 1 2 1 1 2 1",
        "4 2 1 1 1 1 2 1 2",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    let s_clique = Clique::from_classes(g, &s_classes);
    let iso = classify(g, &s_clique).map_err(|e| e.to_string())?;
    c.check(
        "the explicit 10-vector set has type 4",
        type_index(&iso) == Some(4),
    );
    c.check(
        "no class disjoint from any 4-subset of it",
        blowdown_obstruction(g, &s_clique).is_none(),
    );
    let rep8 = Clique::from_classes(g, &clique8_representative());
    c.check(
        "type-8 representative: no disjoint class either",
        blowdown_obstruction(g, &rep8).is_none(),
    );
    let reps = default_representatives(g, ctx.workers);
    let (_, rep5) = reps.iter().find(|(t, _)| *t == 5).unwrap();
    let rep5 = Clique::from_classes(g, rep5);
    let iso5 = classify(g, &rep5).map_err(|e| e.to_string())?;
    c.check(
        "shipped type-5 representative classifies as type 5",
        type_index(&iso5) == Some(5),
    );
    c.check(
        "type-5 representative: no disjoint class either",
        blowdown_obstruction(g, &rep5).is_none(),
    );
    let (_, rep1) = reps.iter().find(|(t, _)| *t == 1).unwrap();
    let rep1 = Clique::from_classes(g, rep1);
    c.check(
        "type-1 representative admits a disjoint class (recorded outcome)",
        blowdown_obstruction(g, &rep1).is_some(),
    );
    c.finish()
}
