//! `nbrw`: sample, erase, contract, enumerate and diagnose random walks.
//!
//! Every subcommand validates its whole configuration before computing and
//! writes its outputs only after the computation succeeded, so a rejected
//! run leaves no files behind. Exit codes: 0 on success, 2 on configuration
//! errors, 1 on runtime errors.

mod config;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser};
use nbrw_core::birthdeath::{chain_for_biregular_from, chain_for_regular, BirthDeathSpec};
use nbrw_core::contraction::{
    contract, induced_nbrw_prefix_distribution, induced_srw_prefix_distribution, ContractionMap,
};
use nbrw_core::erasure::{erase_backtracks, erased_prefix_distribution};
use nbrw_core::rational::{format_both, format_decimal, format_exact};
use nbrw_core::rng::{replica_stream, stream};
use nbrw_core::stats::{monte_carlo_with, return_statistics, total_variation, Execution};
use nbrw_core::walkers::{
    enumerate_prefix_distribution, enumerate_with, sample_walk, Network, NbrwEdge, PrefixDistribution,
    WalkKind, Wrw, WrwRule,
};
use nbrw_core::{Graph, VertexKey, WeightedMultigraph};

pub use config::{ExperimentConfig, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn runtime_err(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "nbrw", version, about = "Simple and non-backtracking random walks on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Sample walks and write per-walk return statistics as CSV
    Walk(WalkArgs),
    /// Erase backtracks from a token sequence or a freshly sampled SRW path
    Erase(EraseArgs),
    /// Analyze the birth-death chain of the erasure cursor
    Chain(ChainArgs),
    /// Contract degree-2 corridors into a weighted multigraph
    Contract(ContractArgs),
    /// Dump an exact prefix distribution as CSV
    Enumerate(EnumerateArgs),
    /// Exact total variation between prefix laws
    Compare(CompareArgs),
    /// Run seeded Monte Carlo replicas and write a CSV/JSON report
    Diagnose(DiagnoseArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct GraphArgs {
    /// Graph as JSON, e.g. '{"type":"lattice","d":2}', or @path to a JSON file
    #[arg(long)]
    graph: Option<String>,
    /// Start vertex: 7, (1,-2,0), r or r.0.1 (default: the graph's origin)
    #[arg(long)]
    start: Option<String>,
    /// Experiment config as JSON or @path; flags override its fields
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// srw, nbrw or wrw (wrw walks the contracted multigraph)
    #[arg(long)]
    walk: Option<WalkKind>,
    /// Steps per walk
    #[arg(long)]
    horizon: Option<u64>,
    /// Number of walks
    #[arg(long)]
    replicas: Option<u64>,
    /// Master seed (default 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Also print each sampled path, one per line
    #[arg(long)]
    show_paths: bool,
    /// CSV output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EraseArgs {
    /// Whitespace-separated tokens to erase; '-' or omitted reads standard
    /// input unless --graph is given
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    /// Length of the SRW path sampled on --graph
    #[arg(long)]
    horizon: Option<u64>,
    /// Seed for the sampled path (default 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// Degree of a regular graph
    #[arg(long, conflicts_with_all = ["k1", "k2"])]
    k: Option<u32>,
    /// Larger degree of a biregular graph
    #[arg(long, requires = "k2")]
    k1: Option<u32>,
    /// Smaller degree of a biregular graph
    #[arg(long, requires = "k1")]
    k2: Option<u32>,
    /// Degree of the start vertex on a biregular graph (default: k1)
    #[arg(long, requires = "k1")]
    start_degree: Option<u32>,
}

#[derive(Args, Debug)]
struct ContractArgs {
    /// Graph as JSON or @path; must be an explicit finite graph
    #[arg(long)]
    graph: Option<String>,
    /// Experiment config as JSON or @path
    #[arg(long)]
    config: Option<String>,
    /// Contracted multigraph JSON output (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corridor table CSV output (default: standard output, after the JSON)
    #[arg(long)]
    corridors: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
enum RuleArg {
    Conductance,
    Reflecting,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// srw, nbrw or wrw (wrw and nbrw --contracted use the contracted multigraph)
    #[arg(long)]
    walk: Option<WalkKind>,
    /// Prefix horizon: the law of the first m+1 vertices
    #[arg(long)]
    m: Option<usize>,
    /// Instead of a walk, enumerate erased SRW paths of length N
    #[arg(long = "N")]
    n: Option<usize>,
    /// Run nbrw as the edge-based walk on the contracted multigraph
    #[arg(long)]
    contracted: bool,
    /// Weighting used by wrw
    #[arg(long, value_enum, default_value = "conductance")]
    rule: RuleArg,
    /// CSV output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Length of the SRW paths fed to the eraser
    #[arg(long = "N")]
    n: Option<usize>,
    /// Prefix horizon
    #[arg(long)]
    m: Option<usize>,
    /// Compare walks watched at vertices of degree other than 2 with walks
    /// on the contracted multigraph instead
    #[arg(long)]
    induced: bool,
    /// Output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// srw, nbrw or wrw
    #[arg(long)]
    walk: Option<WalkKind>,
    /// Steps per replica
    #[arg(long)]
    horizon: Option<u64>,
    /// Number of replicas
    #[arg(long)]
    replicas: Option<u64>,
    /// Master seed (required)
    #[arg(long)]
    seed: Option<u64>,
    /// Run replicas on one thread
    #[arg(long)]
    serial: bool,
    /// Output stem: writes <stem>.csv and <stem>.json (default: JSON to
    /// standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs the subcommand against the
/// process's standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut stdout = io::stdout().lock();
    let mut stderr = io::stderr().lock();
    run_with(argv, &mut input, &mut stdout, &mut stderr)
}

/// [`run`] with explicit streams.
pub fn run_with<I, T>(
    argv: I,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                2
            } else {
                let _ = write!(stdout, "{}", e.render());
                0
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Walk(a) => walk(a),
        Command::Erase(a) => erase(a, stdin),
        Command::Chain(a) => chain(a),
        Command::Contract(a) => contract_cmd(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Compare(a) => compare(a),
        Command::Diagnose(a) => diagnose(a),
    };
    match result.and_then(|out| out.commit(stdout)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

/// Pending outputs, written only once the whole run has succeeded.
#[derive(Default)]
struct Output {
    files: Vec<(PathBuf, Vec<u8>)>,
    stdout: Vec<u8>,
}

impl Output {
    fn to(&mut self, path: Option<&Path>, bytes: Vec<u8>) {
        match path {
            Some(p) => self.files.push((p.to_path_buf(), bytes)),
            None => self.stdout.extend(bytes),
        }
    }

    fn commit(self, stdout: &mut dyn Write) -> Result<(), CliError> {
        for (path, bytes) in &self.files {
            std::fs::write(path, bytes)
                .map_err(|e| runtime_err(format!("cannot write {}: {e}", path.display())))?;
        }
        stdout.write_all(&self.stdout).map_err(runtime_err)
    }
}

struct Resolved {
    graph: Graph,
    start: VertexKey,
}

fn resolve_graph(args: &GraphArgs, cfg: &mut ExperimentConfig) -> Result<Resolved, CliError> {
    if let Some(g) = &args.graph {
        cfg.graph = Some(config::parse_graph(g)?);
    }
    let graph = cfg
        .graph
        .as_ref()
        .ok_or_else(|| CliError::Config("--graph is required".into()))?
        .build().map_err(config_err)?;
    if let Some(s) = &args.start {
        cfg.start = Some(s.parse().map_err(config_err)?);
    }
    let start = match cfg.start.clone().or_else(|| graph.origin()) {
        Some(s) => s,
        None => return Err(CliError::Config("graph has no vertices".into())),
    };
    if !graph.contains(&start) {
        return Err(CliError::Config(format!("start {start} is not a vertex of the graph")));
    }
    cfg.start = Some(start.clone());
    Ok(Resolved { graph, start })
}

/// Contracted multigraph for walks that need one; `start` must survive.
fn contracted(r: &Resolved) -> Result<(WeightedMultigraph, ContractionMap), CliError> {
    let (mg, map) = contract(&r.graph).map_err(config_err)?;
    if !mg.contains(&r.start) {
        return Err(CliError::Config(format!(
            "start {} is inside a corridor; pick a vertex of degree other than 2",
            r.start
        )));
    }
    Ok((mg, map))
}

fn walk(a: WalkArgs) -> Result<Output, CliError> {
    let mut cfg = ExperimentConfig::load(a.graph.config.as_deref(), Subcommand::Walk)?;
    let r = resolve_graph(&a.graph, &mut cfg)?;
    let kind = a.walk.or(cfg.walk).unwrap_or(WalkKind::Srw);
    let horizon = a
        .horizon
        .or(cfg.horizon)
        .ok_or_else(|| CliError::Config("--horizon is required".into()))?;
    let replicas = a.replicas.or(cfg.replicas).unwrap_or(1);
    let seed = a.seed.or(cfg.seed).unwrap_or(0);
    let out = a.out.or(cfg.out);
    if replicas == 0 {
        return Err(CliError::Config("--replicas must be at least 1".into()));
    }
    let contraction = if kind == WalkKind::Wrw { Some(contracted(&r)?) } else { None };
    let network = match &contraction {
        Some((mg, _)) => Network::Weighted(mg),
        None => Network::Simple(&r.graph),
    };

    let mut paths = String::new();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["replica", "steps", "returns", "last_return", "displacement"])
        .map_err(runtime_err)?;
    for i in 0..replicas {
        let path = sample_walk(kind, network, &r.start, horizon as usize, &mut replica_stream(seed, i))
            .map_err(runtime_err)?;
        let s = return_statistics(&path, &r.start).map_err(runtime_err)?;
        if a.show_paths {
            let _ = writeln!(paths, "{}", join(&path));
        }
        w.write_record([
            i.to_string(),
            s.steps.to_string(),
            s.returns_to_origin.to_string(),
            s.last_return_time.map(|t| t.to_string()).unwrap_or_default(),
            s.end_displacement.to_string(),
        ])
        .map_err(runtime_err)?;
    }
    let mut output = Output::default();
    output.stdout.extend(paths.into_bytes());
    output.to(out.as_deref(), w.into_inner().map_err(runtime_err)?);
    Ok(output)
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn erase(a: EraseArgs, stdin: &mut dyn BufRead) -> Result<Output, CliError> {
    let tokens: Vec<String> = if a.graph.graph.is_some() || a.graph.config.is_some() {
        let mut cfg = ExperimentConfig::load(a.graph.config.as_deref(), Subcommand::Erase)?;
        let r = resolve_graph(&a.graph, &mut cfg)?;
        let horizon = a
            .horizon
            .or(cfg.horizon)
            .ok_or_else(|| CliError::Config("--horizon is required with --graph".into()))?;
        let seed = a.seed.or(cfg.seed).unwrap_or(0);
        let path = sample_walk(WalkKind::Srw, Network::Simple(&r.graph), &r.start, horizon as usize, &mut stream(seed))
            .map_err(runtime_err)?;
        path.iter().map(ToString::to_string).collect()
    } else {
        let mut text = String::new();
        match a.input.as_deref() {
            Some(p) if p != Path::new("-") => {
                text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            }
            _ => {
                stdin.read_to_string(&mut text).map_err(runtime_err)?;
            }
        }
        text.split_whitespace().map(str::to_string).collect()
    };
    let result = erase_backtracks(&tokens).map_err(config_err)?;
    let body = format!("{}\n{}\n", result.output.join(" "), result.trace.move_string());
    let mut output = Output::default();
    output.to(a.out.as_deref(), body.into_bytes());
    Ok(output)
}

fn chain(a: ChainArgs) -> Result<Output, CliError> {
    let (label, spec) = match (a.k, a.k1, a.k2) {
        (Some(k), _, _) => (format!("regular k={k}"), chain_for_regular(k).map_err(config_err)?),
        (None, Some(k1), Some(k2)) => {
            let d = a.start_degree.unwrap_or(k1);
            (
                format!("biregular k1={k1} k2={k2} start_degree={d}"),
                chain_for_biregular_from(k1, k2, d).map_err(config_err)?,
            )
        }
        _ => return Err(CliError::Config("give --k, or --k1 and --k2".into())),
    };
    let mut out = Output::default();
    out.stdout = chain_report(&label, &spec).into_bytes();
    Ok(out)
}

fn chain_report(label: &str, spec: &BirthDeathSpec) -> String {
    let list = |xs: &[nbrw_core::Rational]| {
        xs.iter().map(format_exact).collect::<Vec<_>>().join(", ")
    };
    let mut s = String::new();
    let _ = writeln!(s, "chain: {label}");
    let _ = writeln!(s, "right probabilities: prefix [{}] period [{}]", list(spec.prefix()), list(spec.period()));
    let _ = writeln!(s, "period ratio product: {}", format_both(&spec.period_ratio_product()));
    let verdict = if spec.is_transient() { "transient" } else { "recurrent" };
    let _ = writeln!(s, "verdict: {verdict}");
    let _ = writeln!(s, "escape probability: {}", format_both(&spec.escape_probability()));
    s
}

fn contract_cmd(a: ContractArgs) -> Result<Output, CliError> {
    let mut cfg = ExperimentConfig::load(a.config.as_deref(), Subcommand::Contract)?;
    let args = GraphArgs {
        graph: a.graph.clone(),
        ..Default::default()
    };
    let r = resolve_graph(&args, &mut cfg)?;
    let (mg, map) = contract(&r.graph).map_err(config_err)?;
    let json = serde_json::json!({
        "vertices": mg.vertices(),
        "edges": mg.edges().iter().map(|e| serde_json::json!({
            "a": e.a, "b": e.b, "r": e.resistance, "id": e.id,
        })).collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&json).map_err(runtime_err)?;
    text.push('\n');

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["endpoint_a", "endpoint_b", "length"]).map_err(runtime_err)?;
    for c in map.corridors() {
        w.write_record([c.endpoints.0.to_string(), c.endpoints.1.to_string(), c.length.to_string()])
            .map_err(runtime_err)?;
    }
    let mut output = Output::default();
    output.to(a.out.or(cfg.out).as_deref(), text.into_bytes());
    output.to(a.corridors.as_deref(), w.into_inner().map_err(runtime_err)?);
    Ok(output)
}

fn prefix_csv<T: Ord + Clone + std::fmt::Display>(d: &PrefixDistribution<T>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["prefix", "probability", "decimal"]).map_err(runtime_err)?;
    for (seq, p) in &d.entries {
        w.write_record([join(seq), format_exact(p), format_decimal(p)]).map_err(runtime_err)?;
    }
    w.write_record(["short", &format_exact(&d.short_mass), &format_decimal(&d.short_mass)])
        .map_err(runtime_err)?;
    w.into_inner().map_err(runtime_err)
}

fn enumerate(a: EnumerateArgs) -> Result<Output, CliError> {
    let mut cfg = ExperimentConfig::load(a.graph.config.as_deref(), Subcommand::Enumerate)?;
    let r = resolve_graph(&a.graph, &mut cfg)?;
    let m = a.m.or(cfg.m).ok_or_else(|| CliError::Config("--m is required".into()))?;
    let kind = a.walk.or(cfg.walk).unwrap_or(WalkKind::Srw);
    let n = a.n.or(cfg.n);
    let dist = match (n, kind) {
        (Some(n), WalkKind::Srw) => {
            check_horizons(n, m)?;
            erased_prefix_distribution(&r.graph, &r.start, n, m).map_err(runtime_err)?
        }
        (Some(_), other) => {
            return Err(CliError::Config(format!("--N erases SRW paths; --walk {other} does not apply")))
        }
        (None, WalkKind::Wrw) => {
            let (mg, _) = contracted(&r)?;
            check_horizons(m, m)?;
            let rule = match a.rule {
                RuleArg::Conductance => WrwRule::Conductance,
                RuleArg::Reflecting => WrwRule::ReflectingCorridors,
            };
            let k = Wrw { graph: &mg, rule };
            enumerate_prefix_distribution(&k, &r.start, m).map_err(runtime_err)?
        }
        (None, WalkKind::Nbrw) if a.contracted => {
            let (mg, _) = contracted(&r)?;
            check_horizons(m, m)?;
            enumerate_prefix_distribution(&NbrwEdge(&mg), &r.start, m).map_err(runtime_err)?
        }
        (None, kind) => {
            check_horizons(m, m)?;
            nbrw_core::walkers::enumerate_walk(kind, Network::Simple(&r.graph), &r.start, m)
                .map_err(runtime_err)?
        }
    };
    let mut output = Output::default();
    output.to(a.out.or(cfg.out).as_deref(), prefix_csv(&dist)?);
    Ok(output)
}

fn check_horizons(n: usize, m: usize) -> Result<(), CliError> {
    let max = nbrw_core::walkers::MAX_ENUMERATION_HORIZON;
    if n > max {
        return Err(CliError::Config(format!("horizon {n} exceeds the enumeration limit {max}")));
    }
    if m > n {
        return Err(CliError::Config(format!("--m {m} exceeds --N {n}")));
    }
    Ok(())
}

fn compare(a: CompareArgs) -> Result<Output, CliError> {
    let mut cfg = ExperimentConfig::load(a.graph.config.as_deref(), Subcommand::Compare)?;
    let r = resolve_graph(&a.graph, &mut cfg)?;
    let m = a.m.or(cfg.m).ok_or_else(|| CliError::Config("--m is required".into()))?;
    let mut s = String::new();
    if a.induced {
        let (mg, map) = contracted(&r)?;
        check_horizons(m, m)?;
        let srw = induced_srw_prefix_distribution(&r.graph, &mg, &map, &r.start, m).map_err(runtime_err)?;
        let wrw = enumerate_with(&Wrw::reflecting(&mg), &r.start, m, |s| s.clone()).map_err(runtime_err)?;
        let nb = induced_nbrw_prefix_distribution(&r.graph, &map, &r.start, m).map_err(runtime_err)?;
        let edge_nb = enumerate_with(&NbrwEdge(&mg), &r.start, m, |s| s.clone()).map_err(runtime_err)?;
        let tv1 = total_variation(&srw, &wrw).map_err(runtime_err)?;
        let tv2 = total_variation(&nb, &edge_nb).map_err(runtime_err)?;
        let _ = writeln!(s, "induced srw vs reflecting wrw: tv {}", format_both(&tv1));
        let _ = writeln!(s, "induced nbrw vs edge nbrw: tv {}", format_both(&tv2));
    } else {
        let n = a.n.or(cfg.n).ok_or_else(|| CliError::Config("--N is required".into()))?;
        check_horizons(n, m)?;
        let erased = erased_prefix_distribution(&r.graph, &r.start, n, m).map_err(runtime_err)?;
        let nb = nbrw_core::walkers::enumerate_walk(WalkKind::Nbrw, Network::Simple(&r.graph), &r.start, m)
            .map_err(runtime_err)?;
        let tv = total_variation(&erased, &nb).map_err(runtime_err)?;
        let _ = writeln!(s, "tv: {}", format_both(&tv));
        let _ = writeln!(s, "short mass: {}", format_both(&erased.short_mass));
    }
    let mut output = Output::default();
    output.to(a.out.as_deref(), s.into_bytes());
    Ok(output)
}

fn diagnose(a: DiagnoseArgs) -> Result<Output, CliError> {
    let mut cfg = ExperimentConfig::load(a.graph.config.as_deref(), Subcommand::Diagnose)?;
    let r = resolve_graph(&a.graph, &mut cfg)?;
    let kind = a.walk.or(cfg.walk).unwrap_or(WalkKind::Srw);
    let horizon = a
        .horizon
        .or(cfg.horizon)
        .ok_or_else(|| CliError::Config("--horizon is required".into()))?;
    let replicas = a
        .replicas
        .or(cfg.replicas)
        .ok_or_else(|| CliError::Config("--replicas is required".into()))?;
    let seed = a
        .seed
        .or(cfg.seed)
        .ok_or_else(|| CliError::Config("--seed is required".into()))?;
    if replicas == 0 {
        return Err(CliError::Config("--replicas must be at least 1".into()));
    }
    let out = a.out.or(cfg.out.take());
    cfg.walk = Some(kind);
    cfg.horizon = Some(horizon);
    cfg.replicas = Some(replicas);
    cfg.seed = Some(seed);

    let contraction = if kind == WalkKind::Wrw { Some(contracted(&r)?) } else { None };
    let network = match &contraction {
        Some((mg, _)) => Network::Weighted(mg),
        None => Network::Simple(&r.graph),
    };
    let execution = if a.serial { Execution::Serial } else { Execution::Parallel };
    let mut report = monte_carlo_with(kind, network, &r.start, horizon, replicas, seed, execution)
        .map_err(runtime_err)?;
    report.echo = Some(serde_json::to_value(&cfg).map_err(runtime_err)?);

    let mut output = Output::default();
    let json = report.to_json().into_bytes();
    match out {
        Some(stem) => {
            let mut csv = Vec::new();
            report.write_csv(&mut csv).map_err(runtime_err)?;
            output.files.push((with_suffix(&stem, "csv"), csv));
            output.files.push((with_suffix(&stem, "json"), json));
        }
        None => output.stdout = json,
    }
    Ok(output)
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("nbrw").chain(args.iter().copied());
        let code = run_with(argv, &mut io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn chain_reports() {
        let (code, out, _) = run_capture(&["chain", "--k", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: recurrent"));
        assert!(out.contains("escape probability: 0 (0)"));
        let (_, out, _) = run_capture(&["chain", "--k", "3"]);
        assert!(out.contains("escape probability: 1/2 (0.500000000000)"));
        let (code, _, err) = run_capture(&["chain", "--k1", "3", "--k2", "3"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
        assert_eq!(run_capture(&["diagnose", "--graph", r#"{"type":"lattice","d":1}"#, "--horizon", "5", "--replicas", "2"]).0, 2);
        let (code, out, _) = run_capture(&["walk", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--horizon"));
    }

    #[test]
    fn suffixes() {
        assert_eq!(with_suffix(Path::new("a/run"), "csv"), PathBuf::from("a/run.csv"));
    }
}
