use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use divorce::dot::{export_dot, matching_label, Highlight};
use divorce::json::{InstanceJson, MetaJson, VerdictJson};
use divorce::search::{search, SearchOptions};
use divorce::text::{self, FormatError};
use divorce_core::dynamics::{blocking_pairs, verify_sequence_with, InterchangeRule};
use divorce_core::explorer::{Budget, SearchVerdict, VerdictKind};
use divorce_core::graph::{build_divorce_graph, condensation, sinks, DEFAULT_NODE_LIMIT};
use divorce_core::reduction::{build_certificate, check_claim1, reduce, SourceGraph, CLAIM1_DESCRIPTIONS};
use divorce_core::{Instance, Matching, Pair};
use thiserror::Error;

/// Divorce dynamics for stable marriage with ties and incomplete lists.
///
/// Exit codes: 0 stable / reachable / verified, 1 not stable / not
/// reachable / rejected, 2 unreadable or malformed input, 3 inconclusive or
/// size limit hit, 4 well-formed but invalid input.
#[derive(Parser)]
#[command(name = "divorce", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a matching and list its blocking pairs.
    Check { instance: PathBuf, matching: PathBuf },
    /// Search for a stable matching reachable by b-interchanges.
    Reach(ReachArgs),
    /// Build the reduced instance of an Independent Set graph file.
    Reduce {
        graph: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build and verify the b-interchange certificate for an independent set.
    Certify {
        graph: PathBuf,
        /// Vertices as `v1`, `v_1` or `1`; commas or spaces separate them.
        #[arg(required = true, num_args = 1..)]
        vertices: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate from a matching.
    Verify {
        instance: PathBuf,
        matching: PathBuf,
        certificate: PathBuf,
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Whole divorce-graph analytics: sinks, components, stable reachability.
    Atlas(AtlasArgs),
    /// Evaluate the six structural properties on a matching of a reduced instance.
    Claim1 { graph: PathBuf, matching: PathBuf },
    /// Print an instance (and optionally a matching) as JSON.
    ExportJson { instance: PathBuf, matching: Option<PathBuf> },
}

#[derive(Args)]
struct RuleArg {
    /// Only allow b-interchanges where both members of the pair are matched.
    #[arg(long)]
    both_matched: bool,
}

impl RuleArg {
    fn rule(&self) -> InterchangeRule {
        if self.both_matched {
            InterchangeRule::BothMatched
        } else {
            InterchangeRule::SetSemantics
        }
    }
}

#[derive(Args)]
struct ReachArgs {
    instance: PathBuf,
    matching: PathBuf,
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: usize,
    #[arg(long)]
    max_millis: Option<u64>,
    /// Print the verdict as JSON.
    #[arg(long)]
    json: bool,
    /// Write the sub-graph reachable from the matching as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Search with this many worker threads.
    #[arg(long)]
    parallel: Option<usize>,
    #[command(flatten)]
    rule: RuleArg,
}

#[derive(Args)]
struct AtlasArgs {
    instance: PathBuf,
    /// Restrict to matchings reachable from this one.
    #[arg(long)]
    root: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Also print component sizes and condensation arcs.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    limit: usize,
    #[command(flatten)]
    rule: RuleArg,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Format { source, .. } if source.is_syntax() => 2,
            CliError::Format { .. } | CliError::Invalid(_) => 4,
            CliError::Limit(_) => 3,
        }
    }
}

type Outcome = Result<u8, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn parsed<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Format { path: path.to_owned(), source })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    parsed(path, text::parse_instance(&read(path)?))
}

fn load_matching(inst: &Instance, path: &Path) -> Result<Matching, CliError> {
    parsed(path, text::parse_matching(inst, &read(path)?))
}

fn load_graph(path: &Path) -> Result<SourceGraph, CliError> {
    parsed(path, text::parse_graph(&read(path)?))
}

fn pair_text(inst: &Instance, p: Pair) -> String {
    format!("{{{},{}}}", inst.name(p.left_agent()), inst.name(p.right_agent()))
}

fn check(instance: &Path, matching: &Path) -> Outcome {
    let inst = load_instance(instance)?;
    let m = load_matching(&inst, matching)?;
    println!("valid matching with {} pairs", m.len());
    let bp = blocking_pairs(&inst, &m);
    if bp.is_empty() {
        println!("stable");
        Ok(0)
    } else {
        let list: Vec<String> = bp.iter().map(|&p| pair_text(&inst, p)).collect();
        println!("not stable; blocking: {}", list.join(","));
        Ok(1)
    }
}

fn verdict_code(kind: VerdictKind) -> u8 {
    match kind {
        VerdictKind::ReachableStable => 0,
        VerdictKind::NotReachable => 1,
        VerdictKind::Inconclusive => 3,
    }
}

fn reach(args: &ReachArgs) -> Outcome {
    let inst = load_instance(&args.instance)?;
    let m0 = load_matching(&inst, &args.matching)?;
    let opts = SearchOptions {
        budget: Budget { max_nodes: Some(args.max_nodes), max_millis: args.max_millis },
        rule: args.rule.rule(),
        threads: args.parallel,
    };
    let v = search(&inst, &m0, &opts);
    if args.json {
        let json = serde_json::to_string_pretty(&VerdictJson::new(&inst, &v)).expect("verdict serializes");
        println!("{json}");
    } else {
        print_verdict(&inst, &v);
    }
    if let Some(path) = &args.dot {
        let g = build_divorce_graph(&inst, Some(std::slice::from_ref(&m0)), args.max_nodes, opts.rule)
            .map_err(|e| CliError::Limit(format!("cannot draw the reachable graph: {e}")))?;
        let hl = Highlight { stable: true, root: Some(&m0), witness: v.witness.as_deref() };
        write(path, &export_dot(&inst, &g, &hl))?;
    }
    Ok(verdict_code(v.kind))
}

fn print_verdict(inst: &Instance, v: &SearchVerdict) {
    println!("{}", v.kind.code());
    if let Some(w) = &v.witness {
        let steps: Vec<String> =
            w.iter().map(|p| format!("{} {}", inst.name(p.left_agent()), inst.name(p.right_agent()))).collect();
        let unit = if w.len() == 1 { "step" } else { "steps" };
        println!("witness ({} {unit}): {}", w.len(), steps.join("; "));
    }
    println!("explored: {}", v.explored);
    println!("frontier peak: {}", v.frontier_peak);
}

fn reduce_cmd(graph: &Path, out_dir: &Path) -> Outcome {
    let g = load_graph(graph)?;
    let art = reduce(&g);
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_owned(), source })?;
    write(&out_dir.join("instance.txt"), &text::serialize_instance(&art.instance))?;
    write(&out_dir.join("m0.txt"), &text::serialize_matching(&art.instance, &art.m0))?;
    let meta = serde_json::to_string_pretty(&MetaJson::new(&art)).expect("meta serializes");
    write(&out_dir.join("meta.json"), &format!("{meta}\n"))?;
    println!("{} agents per side (n = {}, m = {}, k = {})", art.instance.num_left(), g.n(), g.edges().len(), g.k());
    println!("wrote instance.txt, m0.txt, meta.json to {}", out_dir.display());
    Ok(0)
}

/// `v3`, `v_3` or `3`, 1-based.
fn parse_vertex(s: &str, n: usize) -> Result<usize, CliError> {
    let digits = s.strip_prefix("v_").or_else(|| s.strip_prefix('v')).unwrap_or(s);
    match digits.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        Ok(_) => Err(CliError::Invalid(format!("vertex `{s}` out of range 1..={n}"))),
        Err(_) => Err(CliError::Invalid(format!("cannot read vertex `{s}`"))),
    }
}

fn certify(graph: &Path, vertices: &[String], out: Option<&Path>) -> Outcome {
    let g = load_graph(graph)?;
    let mut vset = Vec::new();
    for word in vertices.iter().flat_map(|v| v.split(|c: char| c == ',' || c.is_whitespace())) {
        if !word.is_empty() {
            vset.push(parse_vertex(word, g.n())?);
        }
    }
    let art = reduce(&g);
    let cert = build_certificate(&art, &vset).map_err(|e| CliError::Invalid(e.to_string()))?;
    let body = text::serialize_certificate(&art.instance, &cert.steps);
    match out {
        Some(path) => write(path, &body)?,
        None => print!("{body}"),
    }
    match verify_sequence_with(&art.instance, &art.m0, &cert.steps, InterchangeRule::default()) {
        Ok(replay) if replay.final_stable => {
            println!("VERIFIED stable, length {}", cert.steps.len());
            Ok(0)
        }
        Ok(_) => {
            println!("replayed, length {}, but the final matching is not stable", cert.steps.len());
            Ok(1)
        }
        Err(r) => {
            println!("rejected at step {}: {} {}", r.index, r.reason.code(), pair_text(&art.instance, r.pair));
            Ok(1)
        }
    }
}

fn verify(instance: &Path, matching: &Path, certificate: &Path, rule: InterchangeRule) -> Outcome {
    let inst = load_instance(instance)?;
    let m0 = load_matching(&inst, matching)?;
    let steps = parsed(certificate, text::parse_certificate(&inst, &read(certificate)?))?;
    match verify_sequence_with(&inst, &m0, &steps, rule) {
        Ok(replay) => {
            for (i, rec) in replay.steps.iter().enumerate() {
                let after = Matching::from_key(&inst, &rec.after);
                println!("step {i}: {} -> {}", pair_text(&inst, rec.pair), matching_label(&inst, &after));
            }
            if replay.final_stable {
                println!("accepted; final matching is stable");
                Ok(0)
            } else {
                let bp: Vec<String> =
                    blocking_pairs(&inst, &replay.final_matching).iter().map(|&p| pair_text(&inst, p)).collect();
                println!("accepted; final matching is not stable; blocking: {}", bp.join(","));
                Ok(1)
            }
        }
        Err(r) => {
            println!("rejected at step {}: {} {}", r.index, r.reason.code(), pair_text(&inst, r.pair));
            Ok(1)
        }
    }
}

fn atlas(args: &AtlasArgs) -> Outcome {
    let inst = load_instance(&args.instance)?;
    let root = args.root.as_deref().map(|p| load_matching(&inst, p)).transpose()?;
    let rule = args.rule.rule();
    let g = build_divorce_graph(&inst, root.as_ref().map(std::slice::from_ref), args.limit, rule)
        .map_err(|e| CliError::Limit(e.to_string()))?;
    let cond = condensation(&g);
    let sink_ids = sinks(&g);
    let reaching = cond.nodes_reaching_stable();

    println!("nodes: {}", g.node_count());
    println!("arcs: {}", g.arc_count());
    println!("stable nodes: {}", (0..g.node_count()).filter(|&v| g.is_stable_node(v)).count());
    println!("sinks: {}", sink_ids.len());
    for &s in &sink_ids {
        let flag = if g.is_stable_node(s) { "stable" } else { "NOT stable" };
        println!("  {} [{flag}]", matching_label(&inst, g.node(s)));
    }
    println!("strongly connected components: {}", cond.components.len());
    println!("nodes with path to stable: {reaching}");
    println!("nodes without path to stable: {}", g.node_count() - reaching);
    if args.stats {
        let cyclic = cond.components.iter().filter(|c| c.len() > 1).count();
        let largest = cond.components.iter().map(Vec::len).max().unwrap_or(0);
        println!("components with a cycle: {cyclic}");
        println!("largest component: {largest}");
        println!("condensation arcs: {}", cond.dag_arcs.len());
        println!("perfect matchings: {}", g.nodes().iter().filter(|m| m.is_perfect()).count());
    }
    if let Some(path) = &args.dot {
        write(path, &export_dot(&inst, &g, &Highlight { stable: true, root: root.as_ref(), witness: None }))?;
    }
    Ok(0)
}

fn claim1(graph: &Path, matching: &Path) -> Outcome {
    let art = reduce(&load_graph(graph)?);
    let m = load_matching(&art.instance, matching)?;
    let report = check_claim1(&art, &m);
    for (i, (p, desc)) in report.properties.iter().zip(CLAIM1_DESCRIPTIONS).enumerate() {
        let status = if p.holds { "holds" } else { "FAILS" };
        let mut line = format!("{}. {desc}: {status}", i + 1);
        if !p.holds {
            let names: Vec<&str> = p.counterexamples.iter().map(|&a| art.instance.name(a)).collect();
            line.push_str(&format!(" ({})", names.join(", ")));
        }
        println!("{line}");
    }
    Ok(if report.all_hold() { 0 } else { 1 })
}

fn export_json(instance: &Path, matching: Option<&Path>) -> Outcome {
    let inst = load_instance(instance)?;
    let m = matching.map(|p| load_matching(&inst, p)).transpose()?;
    println!("{}", serde_json::to_string_pretty(&InstanceJson::new(&inst, m.as_ref())).expect("instance serializes"));
    Ok(0)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check { instance, matching } => check(instance, matching),
        Command::Reach(args) => reach(args),
        Command::Reduce { graph, out_dir } => reduce_cmd(graph, out_dir),
        Command::Certify { graph, vertices, out } => certify(graph, vertices, out.as_deref()),
        Command::Verify { instance, matching, certificate, rule } => {
            verify(instance, matching, certificate, rule.rule())
        }
        Command::Atlas(args) => atlas(args),
        Command::Claim1 { graph, matching } => claim1(graph, matching),
        Command::ExportJson { instance, matching } => export_json(instance, matching.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
