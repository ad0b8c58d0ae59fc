//! `gsg`: solve, play, construct and reduce graph sharing games.

mod repl;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_sharing::constructions::{self, ExpanderParams, Family};
use graph_sharing::qbf::{self, Target};
use graph_sharing::reductions::{compile_canonical, compile_misere, compile_weighted_with, Compiled};
use graph_sharing::solver::{solve_with, DEFAULT_MEMO_CAP};
use graph_sharing::strategy::{strategy_by_name, STRATEGY_NAMES};
use graph_sharing::structure::BicliqueVerdict;
use graph_sharing::tr::{full_order, tr_classify};
use graph_sharing::weight;
use graph_sharing::{game, Error, Outcome, Player, Ruleset, Scoring, SolveOptions, Weight, WeightedGraph};

#[derive(Parser)]
#[command(name = "gsg", version, about = "Graph sharing games T, R and TR")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact value (or winner) and principal variation
    Solve(SolveArgs),
    /// Play against an engine on stdin
    Play(PlayArgs),
    /// Play two strategies against each other
    Simulate(SimulateArgs),
    /// Build a graph from one of the constructions
    Construct(ConstructArgs),
    /// Compile a QDIMACS formula into a game graph
    Reduce(ReduceArgs),
    /// Whether game TR can or must take every vertex
    CheckTr(GraphArg),
    /// Order a 2-connected graph so every prefix and suffix is connected
    Order(OrderArgs),
    /// Smallest share Alice can guarantee over cycles or trees
    Search(SearchArgs),
}

fn parse_game(s: &str) -> Result<Ruleset, String> {
    s.parse().map_err(|_| format!("expected one of t, r, tr, tr-canonical, tr-misere; got `{s}`"))
}

#[derive(Args)]
struct GraphArg {
    /// Graph in the `p graph` text format
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_game)]
    game: Ruleset,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Maximum transposition table entries
    #[arg(long, default_value_t = DEFAULT_MEMO_CAP)]
    memo_cap: usize,
    /// Disable twin merging
    #[arg(long)]
    no_twins: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Alice,
    Bob,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::Alice => Player::Alice,
            Side::Bob => Player::Bob,
        }
    }
}

#[derive(Args)]
struct PlayArgs {
    #[arg(long, value_parser = parse_game)]
    game: Ruleset,
    #[arg(long)]
    graph: PathBuf,
    /// Side played from stdin
    #[arg(long, value_enum, default_value_t = Side::Alice)]
    human: Side,
    /// Engine strategy; optimal on small graphs and greedy otherwise
    #[arg(long)]
    engine: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threshold for bob-expander
    #[arg(long, default_value_t = 1)]
    threshold: usize,
    /// Also write the transcript here
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_parser = parse_game)]
    game: Ruleset,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value = "greedy")]
    alice: String,
    #[arg(long, default_value = "greedy")]
    bob: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Threshold for bob-expander
    #[arg(long, default_value_t = 1)]
    threshold: usize,
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    family: Construction,
    /// Write the graph here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Construction {
    /// Cycle with the given weights, e.g. `--weights 1,0,2/3`
    Pizza {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<String>,
    },
    CliqueCycle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        blocks: usize,
    },
    Xyz {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    Hnk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Gnk {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    CenteredPath {
        #[arg(long)]
        t: usize,
    },
    /// Sparse random core with a leaf on every vertex
    Expander {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit the core without leaves
        #[arg(long)]
        core: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Canonical,
    Misere,
    Weighted,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    target: TargetArg,
    #[arg(long)]
    qbf: PathBuf,
    /// Write the graph here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sidecar file with one `<vertex> <role>` line per vertex
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Size of the hub set Z (weighted only)
    #[arg(long)]
    z_size: Option<usize>,
    /// Add dummy variables to fix the quantifier pattern
    #[arg(long)]
    pad: bool,
    /// Emit rational weights instead of integers (weighted only)
    #[arg(long)]
    unscaled: bool,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cycles,
    Trees,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    max_n: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    weights: Vec<String>,
    #[arg(long, value_parser = parse_game, default_value = "t")]
    game: Ruleset,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Domain(Error::Io(e))
    }
}

type CliResult = Result<(), CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<WeightedGraph, CliError> {
    Ok(WeightedGraph::parse(&read(path)?)?)
}

fn write_file(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_weights(tokens: &[String]) -> Result<Vec<Weight>, CliError> {
    tokens
        .iter()
        .map(|t| weight::parse(t.trim()).ok_or_else(|| CliError::Usage(format!("bad weight `{t}`"))))
        .collect()
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn outcome_lines(out: &mut String, outcome: &Outcome) {
    match outcome {
        Outcome::Value { alice, bob } => {
            writeln!(out, "alice_value {}", weight::format(alice)).unwrap();
            writeln!(out, "bob_value {}", weight::format(bob)).unwrap();
        }
        Outcome::Winner(p) => writeln!(out, "winner {}", p.to_string().to_lowercase()).unwrap(),
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> CliResult {
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let g = load_graph(&a.graph)?;
    let opts = SolveOptions {
        twins: !a.no_twins,
        memo_cap: a.memo_cap,
        threads: a.threads,
    };
    let r = solve_with(&g, a.game, &opts)?;
    let mut s = String::new();
    writeln!(s, "game {}", a.game).unwrap();
    writeln!(s, "vertices {}", g.n()).unwrap();
    writeln!(s, "total_weight {}", weight::format(&g.total_weight())).unwrap();
    outcome_lines(&mut s, &r.outcome);
    writeln!(s, "pv {}", join(&r.principal_variation)).unwrap();
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> CliResult {
    let g = load_graph(&a.graph)?;
    let mut alice = strategy_by_name(&a.alice, a.seed, a.threshold)?;
    let mut bob = strategy_by_name(&a.bob, a.seed, a.threshold)?;
    let t = game::simulate(&g, a.game, alice.as_mut(), bob.as_mut(), a.seed)?;
    let mut s = String::new();
    writeln!(s, "seed {}", a.seed).unwrap();
    writeln!(s, "alice_strategy {}", alice.name()).unwrap();
    writeln!(s, "bob_strategy {}", bob.name()).unwrap();
    s.push_str(&t.to_text());
    if a.game.scoring() != Scoring::Weight {
        let state = t.replay(&g, a.game)?;
        if let Some(w) = state.winner() {
            writeln!(s, "winner {}", w.to_string().to_lowercase()).unwrap();
        }
    }
    if let Some(p) = &a.transcript {
        write_file(p, &t.to_text())?;
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn verdict_text(v: &BicliqueVerdict) -> String {
    let how = if v.exhaustive() { "exhaustive" } else { "heuristic" };
    match v {
        BicliqueVerdict::Found { left, right, .. } => format!(
            "found {how} {{{}}} {{{}}}",
            join(&left.iter().collect::<Vec<_>>()),
            join(&right.iter().collect::<Vec<_>>())
        ),
        BicliqueVerdict::NotFound { .. } => format!("not_found {how}"),
    }
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> CliResult {
    let mut notes = Vec::new();
    let g = match a.family {
        Construction::Pizza { weights } => constructions::pizza_cycle(&parse_weights(&weights)?)?,
        Construction::CliqueCycle { k, blocks } => constructions::clique_cycle(k, blocks)?,
        Construction::Xyz { k, m } => constructions::xyz_graph(k, m)?,
        Construction::Hnk { n, k } => constructions::hnk_graph(n, k)?,
        Construction::Gnk { n, k } => constructions::gnk_graph(n, k)?,
        Construction::CenteredPath { t } => constructions::centered_path(t)?,
        Construction::Expander { n, epsilon, seed, core } => {
            let params = ExpanderParams::new(epsilon, n, seed)?;
            let inst = constructions::leafy_expander(&params)?;
            let r = &inst.report;
            notes.push(format!("seed {seed}"));
            notes.push(format!("c {:.4}", r.c));
            notes.push(format!("c_prime {:.4}", r.c_prime));
            notes.push(format!("sampled_edges {}", r.sampled_edges));
            notes.push(format!("removed_for_cycles {}", r.removed_for_cycles));
            notes.push(format!("removed_for_degree {}", r.removed_for_degree));
            notes.push(format!("removed_arbitrary {}", r.removed_arbitrary));
            notes.push(format!("connecting_edges {}", r.connecting_edges));
            notes.push(match r.girth {
                Some(g) => format!("girth {g}"),
                None => "girth none".to_string(),
            });
            notes.push(format!("girth_bound {:.4}", r.girth_bound));
            notes.push(format!("max_degree {}", r.max_degree));
            notes.push(format!("degree_bound {:.4}", r.degree_bound));
            notes.push(format!("connected {}", r.connected));
            notes.push(format!("biclique_s{} {}", r.biclique_side, verdict_text(&r.biclique)));
            notes.push(format!("biclique_s2 {}", verdict_text(&r.biclique_pairs)));
            if core {
                inst.h
            } else {
                inst.g
            }
        }
    };
    notes.push(format!("vertices {}", g.n()));
    notes.push(format!("edges {}", g.edges().len()));
    notes.push(format!("total_weight {}", weight::format(&g.total_weight())));
    let mut s = String::new();
    match &a.out {
        Some(path) => {
            write_file(path, &g.to_text())?;
            for n in &notes {
                writeln!(s, "{n}").unwrap();
            }
        }
        None => {
            for n in &notes {
                writeln!(s, "# {n}").unwrap();
            }
            s.push_str(&g.to_text());
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn reduce(a: ReduceArgs, out: &mut dyn Write) -> CliResult {
    let weighted = matches!(a.target, TargetArg::Weighted);
    if !weighted && a.z_size.is_some() {
        return Err(CliError::Usage("--z-size only applies to the weighted target".into()));
    }
    if !weighted && a.unscaled {
        return Err(CliError::Usage("--unscaled only applies to the weighted target".into()));
    }
    let target = match a.target {
        TargetArg::Canonical => Target::Canonical,
        TargetArg::Misere => Target::Misere,
        TargetArg::Weighted => Target::Weighted,
    };
    let mut f = qbf::parse_qdimacs(&read(&a.qbf)?)?;
    if a.pad {
        f = qbf::pad_parity(&f, target)?;
    }
    let c: Compiled = match a.target {
        TargetArg::Canonical => compile_canonical(&f)?,
        TargetArg::Misere => compile_misere(&f)?,
        TargetArg::Weighted => compile_weighted_with(&f, a.z_size)?,
    };
    let g = if a.unscaled { c.unscaled() } else { c.graph.clone() };
    let mut s = String::new();
    writeln!(s, "target {}", c.target).unwrap();
    writeln!(s, "variables {}", f.num_vars()).unwrap();
    writeln!(s, "clauses {}", f.num_clauses()).unwrap();
    writeln!(s, "vertices {}", g.n()).unwrap();
    writeln!(s, "edges {}", g.edges().len()).unwrap();
    writeln!(s, "scale {}", if a.unscaled { "1".to_string() } else { c.scale.to_string() }).unwrap();
    for w in &c.warnings {
        writeln!(s, "warning {w}").unwrap();
    }
    if let Some(p) = &a.labels {
        write_file(p, &c.map.to_sidecar())?;
    }
    match &a.out {
        Some(p) => write_file(p, &g.to_text())?,
        None => s.push_str(&g.to_text()),
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn check_tr(a: GraphArg, out: &mut dyn Write) -> CliResult {
    let g = load_graph(&a.graph)?;
    let v = tr_classify(&g)?;
    let mut s = String::new();
    writeln!(s, "completable {}", v.completable).unwrap();
    writeln!(s, "always_completes {}", v.always_completes).unwrap();
    if let Some(w) = &v.witness {
        writeln!(s, "witness {}", join(w)).unwrap();
    }
    if let Some(o) = &v.obstruction {
        writeln!(s, "obstruction {o}").unwrap();
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn order(a: OrderArgs, out: &mut dyn Write) -> CliResult {
    let g = load_graph(&a.graph)?;
    let o = full_order(&g, a.from, a.to)?;
    writeln!(out, "order {}", join(&o))?;
    Ok(())
}

fn search(a: SearchArgs, out: &mut dyn Write) -> CliResult {
    if a.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let ws = parse_weights(&a.weights)?;
    let family = match a.family {
        FamilyArg::Cycles => Family::Cycles,
        FamilyArg::Trees => Family::Trees,
    };
    if a.game.scoring() != Scoring::Weight {
        return Err(CliError::Usage(format!("search needs a weight-scored game, not {}", a.game)));
    }
    let r = constructions::search_extremal(family, a.max_n, &ws, a.game, a.threads)?;
    let mut s = String::new();
    match r {
        None => writeln!(s, "no instance with positive total weight").unwrap(),
        Some(r) => {
            writeln!(s, "examined {}", r.examined).unwrap();
            writeln!(s, "vertices {}", r.graph.n()).unwrap();
            writeln!(s, "alice_value {}", weight::format(&r.alice)).unwrap();
            writeln!(s, "total_weight {}", weight::format(&r.total)).unwrap();
            writeln!(s, "fraction {}", weight::format(&r.fraction())).unwrap();
            writeln!(s, "pv {}", join(&r.solve.principal_variation)).unwrap();
            s.push_str(&r.graph.to_text());
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

fn play(a: PlayArgs, out: &mut dyn Write) -> CliResult {
    let g = load_graph(&a.graph)?;
    let (name, announced) = match &a.engine {
        Some(n) => (n.clone(), "chosen"),
        None if g.n() <= repl::OPTIMAL_ENGINE_LIMIT => ("optimal".to_string(), "default"),
        None => ("greedy".to_string(), "default for large graphs"),
    };
    if !STRATEGY_NAMES.contains(&name.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown engine `{name}` (expected one of {})",
            STRATEGY_NAMES.join(", ")
        )));
    }
    let engine = strategy_by_name(&name, a.seed, a.threshold)?;
    let session = repl::Session {
        graph: &g,
        ruleset: a.game,
        human: a.human.into(),
        seed: a.seed,
        announce: format!("engine {name} ({announced})"),
    };
    let stdin = io::stdin();
    let result = session.run(engine, &mut stdin.lock(), out)?;
    if let Some(p) = &a.transcript {
        write_file(p, &result)?;
    }
    Ok(())
}

fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Play(a) => play(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Construct(a) => construct(a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::CheckTr(a) => check_tr(a, out),
        Command::Order(a) => order(a, out),
        Command::Search(a) => search(a, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let code = match run(cli, &mut out) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            if e.is_resource() {
                3
            } else {
                1
            }
        }
    };
    let _ = out.flush();
    ExitCode::from(code)
}
