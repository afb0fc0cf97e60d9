use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use mcps::flow::{check_all_pairs, max_pair_capacity, RetentionRatio};
use mcps::generators::{build_reduction, fixtures, gen_random_dsp, gen_random_lsp, LspParams, SetCoverInstance};
use mcps::graph::{parse_edge_list, to_dot, to_edge_list, DirectedGraph, EdgeSet};
use mcps::lsp::{find_w_subdivision, is_lsp, LspError};
use mcps::oracle::{brute_force_mcps, OracleError, DEFAULT_EDGE_BUDGET};
use mcps::solver::{approximation_bound, extract_mscs_or_hamiltonian, solve, solve_med, Mode, SolveError};
use mcps::spdecomp::{recognize_dsp, DspError};

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// Minimum capacity-preserving subgraphs of unit-capacity digraphs.
#[derive(Parser)]
#[command(name = "mcps", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a minimum edge set keeping every pair's capacity share.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Retention ratio p/q with 0 < p < q.
        #[arg(long)]
        alpha: RetentionRatio,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Also write a DOT rendering with the solution highlighted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Report DSP and LSP membership with witnesses.
    Recognize {
        #[command(flatten)]
        input: Input,
        /// Print the decomposition tree of a DSP.
        #[arg(long)]
        tree: bool,
    },
    /// Check an edge set against every ordered pair.
    Check {
        #[command(flatten)]
        input: Input,
        /// JSON with an "edges" list of [tail, head] pairs, or a bare list.
        #[arg(long)]
        solution: PathBuf,
        #[arg(long)]
        alpha: RetentionRatio,
        /// Also require the set to be as small as the brute-force optimum.
        #[arg(long)]
        against_oracle: bool,
    },
    /// Minimum equivalent digraph of an LSP or a DAG.
    Med {
        #[command(flatten)]
        input: Input,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
        /// Write the edge list here and metadata to PATH.meta.json.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Basic graph statistics.
    Stats {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Input {
    /// Edge-list file, `-` for stdin.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Reduction graph of a Set-Cover instance.
    Setcover {
        #[arg(long)]
        universe: usize,
        /// Sets as comma-separated items, separated by `;`, e.g. "0,1,2;2,3".
        #[arg(long)]
        sets: String,
        #[arg(long, default_value_t = 1)]
        p: usize,
    },
    /// Random directed series-parallel graph.
    Dsp {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        edges: usize,
    },
    /// Random laminar series-parallel graph.
    Lsp {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        blocks: usize,
        #[arg(long, default_value_t = 2)]
        min_block_edges: usize,
        #[arg(long, default_value_t = 8)]
        max_block_edges: usize,
        #[arg(long, default_value_t = 0.4)]
        cyclic_prob: f64,
        #[arg(long, default_value_t = 0.1)]
        bipartite_prob: f64,
    },
    /// A named fixture.
    Fixture { name: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Dsp,
    Lsp,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Dsp => Mode::Dsp,
            ModeArg::Lsp => Mode::Lsp,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

/// A failed command: exit code and message for stderr.
struct Failure(u8, String);

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve {
            input,
            alpha,
            mode,
            dot,
        } => cmd_solve(&input.input, alpha, mode.into(), dot.as_deref()),
        Command::Recognize { input, tree } => cmd_recognize(&input.input, tree),
        Command::Check {
            input,
            solution,
            alpha,
            against_oracle,
        } => cmd_check(&input.input, &solution, alpha, against_oracle),
        Command::Med { input } => cmd_med(&input.input),
        Command::Gen { what, out } => cmd_gen(what, out.as_deref()),
        Command::Stats { input } => cmd_stats(&input.input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("mcps: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
    }
}

fn read_graph(path: &Path) -> Result<DirectedGraph, Failure> {
    parse_edge_list(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| usage(format!("writing {}: {e}", path.display())))
}

fn emit(text: &str) -> CmdResult {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure(EXIT_USAGE, format!("writing stdout: {e}")))
}

fn emit_json<T: Serialize>(value: &T) -> CmdResult {
    let mut text = serde_json::to_string(value).expect("serializable");
    text.push('\n');
    emit(&text)
}

fn solve_failure(err: SolveError) -> Failure {
    let code = match &err {
        SolveError::Budget(_)
        | SolveError::NotLsp(LspError::Budget(_))
        | SolveError::Oracle(OracleError::Budget(_)) => EXIT_BUDGET,
        SolveError::SelfCheck(_) => EXIT_INFEASIBLE,
        _ => EXIT_PRECONDITION,
    };
    let detail = match &err {
        SolveError::NotLspOrDag(v) => format!(
            "{err} (P1 witness {:?}, P2 witness {:?})",
            v.p1_witness, v.p2_witness
        ),
        SolveError::SelfCheck(report) => {
            format!("{err}: {}", serde_json::to_string(report).expect("serializable"))
        }
        _ => err.to_string(),
    };
    Failure(code, detail)
}

fn cmd_solve(input: &Path, alpha: RetentionRatio, mode: Mode, dot: Option<&Path>) -> CmdResult {
    let g = read_graph(input)?;
    let sol = solve(&g, alpha, mode).map_err(solve_failure)?;
    if let Some(path) = dot {
        write_file(path, &to_dot(&g, &sol.edges))?;
    }
    eprintln!("solved with {} ({} of {} edges)", sol.algorithm.as_str(), sol.objective(), g.m());
    emit_json(&sol.report(&g))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_recognize(input: &Path, tree: bool) -> CmdResult {
    let g = read_graph(input)?;
    let mut out = format!("n: {}\nm: {}\n", g.n(), g.m());
    let dsp = recognize_dsp(&g);
    out += &format!("dsp: {}\n", yes_no(dsp.is_ok()));
    match &dsp {
        Err(DspError::NotDsp(w)) => out += &format!("dsp_witness: {w}\n"),
        Err(e @ DspError::Edgeless) => out += &format!("dsp_witness: {e}\n"),
        Ok(_) => {}
    }
    let verdict = is_lsp(&g).map_err(|e| Failure(EXIT_BUDGET, format!("LSP check: {e}")))?;
    out += &format!("p1: {}\n", yes_no(verdict.p1_witness.is_none()));
    if let Some((s, t)) = verdict.p1_witness {
        out += &format!("p1_witness: {s} {t}\n");
    }
    out += &format!("p2: {}\n", yes_no(verdict.p2_witness.is_none()));
    if let Some((e, f)) = verdict.p2_witness {
        out += &format!("p2_witness: {e} {f}\n");
    }
    out += &format!("lsp: {}\n", yes_no(verdict.is_lsp));
    if verdict.p1_witness.is_some() {
        match find_w_subdivision(&g) {
            Ok(Some(w)) => out += &format!("w_subdivision: {w}\n"),
            Ok(None) => out += "w_subdivision: none found\n",
            Err(e) => out += &format!("w_subdivision: {e}\n"),
        }
    }
    if tree {
        if let Ok(t) = &dsp {
            out += "tree:\n";
            out += &t.make_clean().dump();
        }
    }
    emit(&out)
}

/// Reads `{"edges": [[u, v], ...]}` or a bare `[[u, v], ...]`.
fn read_solution(g: &DirectedGraph, path: &Path) -> Result<EdgeSet, Failure> {
    let value: Value = serde_json::from_str(&read_text(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let list = match &value {
        Value::Array(_) => &value,
        Value::Object(map) => map
            .get("edges")
            .ok_or_else(|| usage(format!("{}: no \"edges\" field", path.display())))?,
        _ => return Err(usage(format!("{}: expected an object or a list", path.display()))),
    };
    let pairs: Vec<(usize, usize)> = serde_json::from_value(list.clone())
        .map_err(|e| usage(format!("{}: edges: {e}", path.display())))?;
    let mut set = g.empty_edge_set();
    for (u, v) in pairs {
        let e = g
            .find_edge(u, v)
            .ok_or_else(|| usage(format!("{}: {u} -> {v} is not an edge", path.display())))?;
        set.insert(e);
    }
    Ok(set)
}

fn cmd_check(input: &Path, solution: &Path, alpha: RetentionRatio, against_oracle: bool) -> CmdResult {
    let g = read_graph(input)?;
    let selected = read_solution(&g, solution)?;
    let report = check_all_pairs(&g, &selected, alpha);
    emit_json(&report)?;
    if !report.feasible {
        return Err(Failure(EXIT_INFEASIBLE, "infeasible".into()));
    }
    if against_oracle {
        let best = brute_force_mcps(&g, alpha, DEFAULT_EDGE_BUDGET).map_err(|e| match e {
            OracleError::TooLarge { .. } => Failure(EXIT_PRECONDITION, e.to_string()),
            OracleError::Budget(_) => Failure(EXIT_BUDGET, e.to_string()),
        })?;
        if selected.len() > best.objective() {
            return Err(Failure(
                EXIT_INFEASIBLE,
                format!("suboptimal: {} edges, optimum {}", selected.len(), best.objective()),
            ));
        }
        eprintln!("optimal: {} edges", best.objective());
    }
    Ok(())
}

fn cmd_med(input: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let sol = solve_med(&g).map_err(solve_failure)?;
    let mut value = serde_json::to_value(sol.report(&g)).expect("serializable");
    if let Ok((_, class)) = extract_mscs_or_hamiltonian(&g) {
        value["classification"] = serde_json::to_value(class).expect("serializable");
    }
    emit_json(&value)
}

fn cmd_stats(input: &Path) -> CmdResult {
    let g = read_graph(input)?;
    let bound = approximation_bound(&g).map(|r| format!("{}/{}", r.numer(), r.denom()));
    emit_json(&json!({
        "n": g.n(),
        "m": g.m(),
        "acyclic": g.is_acyclic(),
        "weakly_connected": g.is_weakly_connected(),
        "strongly_connected": g.n() > 0 && g.is_strongly_connected(),
        "sources": g.sources(),
        "sinks": g.sinks(),
        "max_pair_capacity": max_pair_capacity(&g),
        "approximation_bound": bound,
    }))
}

fn cmd_gen(what: GenCommand, out: Option<&Path>) -> CmdResult {
    let (g, mut meta) = match what {
        GenCommand::Setcover { universe, sets, p } => {
            let sc = SetCoverInstance::parse_sets(universe, &sets).map_err(usage)?;
            let art = build_reduction(&sc, p).map_err(|e| usage(e.to_string()))?;
            let meta = json!({
                "alpha": art.alpha.to_string(),
                "universe": universe,
                "sets": sc.sets(),
                "sink": art.sink,
                "item_vertices": art.item_vertex,
                "set_vertices": art.set_vertex,
                "green_edges": art.green,
                "red_edges": art.red,
                "med_size": art.med_edges().len(),
                "edge_roles": art.edge_roles.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            });
            (art.graph, meta)
        }
        GenCommand::Dsp { seed, edges } => {
            if edges == 0 {
                return Err(usage("--edges must be at least 1"));
            }
            (gen_random_dsp(seed, edges), json!({}))
        }
        GenCommand::Lsp {
            seed,
            blocks,
            min_block_edges,
            max_block_edges,
            cyclic_prob,
            bipartite_prob,
        } => {
            if blocks == 0 || min_block_edges == 0 || min_block_edges > max_block_edges {
                return Err(usage("need blocks >= 1 and 1 <= min-block-edges <= max-block-edges"));
            }
            let params = LspParams {
                blocks,
                min_block_edges,
                max_block_edges,
                cyclic_prob,
                bipartite_prob,
            };
            (gen_random_lsp(seed, &params), json!({}))
        }
        GenCommand::Fixture { name } => {
            let mut all = fixtures();
            let g = all.remove(name.as_str()).ok_or_else(|| {
                let names: Vec<&str> = fixtures().keys().copied().collect();
                usage(format!("unknown fixture {name:?}; known: {}", names.join(", ")))
            })?;
            (g.with_metadata("fixture", &name), json!({}))
        }
    };
    meta["n"] = json!(g.n());
    meta["m"] = json!(g.m());
    meta["params"] = json!(g.metadata());
    meta["labels"] = json!(g.labels());
    let text = to_edge_list(&g);
    match out {
        Some(path) => {
            write_file(path, &text)?;
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".meta.json");
            let body = serde_json::to_string_pretty(&meta).expect("serializable") + "\n";
            write_file(Path::new(&sidecar), &body)?;
            eprintln!("wrote {} ({} vertices, {} edges)", path.display(), g.n(), g.m());
            Ok(())
        }
        None => emit(&text),
    }
}
