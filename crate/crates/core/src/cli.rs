//! The `pagset` command line.
//!
//! Exit codes: 0 on success, 1 when the answer is negative (a contradiction
//! in background knowledge, an exhausted budget, a failed oracle check), 2
//! on bad usage or unreadable input.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::adjustment::{determine_with_block_sets, determine_with_rules, AdjustmentReport, DeterminationOptions, Outcome};
use crate::bench::{ladder_row, strip_row};
use crate::gen::{generate, GenConfig};
use crate::graph::{Mark, MixedGraph};
use crate::io::{parse_bk, parse_graph_bytes, parse_pmg, serialize_graph, to_dot};
use crate::oracle::{brute_force_set_determination, enumerate_consistent_mags, DEFAULT_MAG_CAP};
use crate::rules::{close, incorporate_bk, Firing, RuleId};
use crate::vset::VertexSet;

#[derive(Parser, Debug)]
#[command(name = "pagset", version, about = "Orientation rules and adjustment-set determination for PAGs")]
pub struct Cli {
    /// Worker threads for the parallel parts; defaults to all cores.
    #[arg(long, global = true, env = "PAGSET_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Close a graph under the orientation rules.
    Orient {
        #[command(flatten)]
        out: Output,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleSet::R1R13)]
        rules: RuleSet,
        /// List every firing.
        #[arg(long)]
        log: bool,
    },
    /// Add background knowledge to a PAG and close it under the rules.
    Bk {
        #[command(flatten)]
        out: Output,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bk: PathBuf,
        #[arg(long, value_enum, default_value_t = RuleSet::R1R13)]
        rules: RuleSet,
        #[arg(long)]
        log: bool,
        /// Check every oriented mark against the MAGs that carry the
        /// background knowledge.
        #[arg(long)]
        validate_oracle: bool,
    },
    /// Adjustment sets for the effect of `x` on `y` across the class.
    Effects(EffectsArgs),
    /// Brute-force answers by enumerating MAGs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Draw a random DAG with latents and print its PAG, MAG and DAG.
    Gen {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        latents: usize,
        #[arg(long, default_value_t = 0.4)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Redraw while the class holds more MAGs than this.
        #[arg(long, default_value_t = 5_000)]
        mag_cap: usize,
        /// Write `pag.txt`, `mag.txt` and `dag.txt` here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Benchmark rows as CSV.
    Bench {
        #[arg(long, value_enum)]
        family: Family,
        /// Ladder rungs; one row per value from 1 up to this.
        #[arg(long, default_value_t = 8)]
        k: usize,
        /// Strip lengths, doubled from 4 up to this.
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Args, Debug)]
pub struct Output {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print the resulting graph in DOT.
    #[arg(long, conflicts_with = "json")]
    dot: bool,
}

#[derive(Args, Debug)]
pub struct EffectsArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    /// Decide each candidate set by walking its block sets.
    #[arg(long)]
    baseline: bool,
    /// Compare the answer with MAG enumeration.
    #[arg(long)]
    oracle_check: bool,
    /// Skip the answer read directly off the PAG.
    #[arg(long)]
    no_shortcut: bool,
    /// Most block sets the baseline may examine.
    #[arg(long, default_value_t = 1 << 24)]
    budget: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Every MAG of the class of `--pag` that carries the marks of `--in`,
    /// one JSON line each.
    Mags {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pag: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAG_CAP)]
        cap: usize,
    },
    /// Back-door sets of every MAG where `x` is an ancestor of `y`, one JSON
    /// line each.
    Effects {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = DEFAULT_MAG_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RuleSet {
    #[value(name = "r1-r11")]
    R1R11,
    #[value(name = "r1-r13")]
    R1R13,
}

impl RuleSet {
    fn rules(self) -> &'static [RuleId] {
        match self {
            RuleSet::R1R11 => &RuleId::CLASSIC,
            RuleSet::R1R13 => &RuleId::ALL,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Ladder,
    Strip,
}

/// A failure and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn negative(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

#[derive(Serialize)]
struct RunReport {
    version: &'static str,
    command: &'static str,
    input_digest: String,
    timings_ms: BTreeMap<&'static str, f64>,
    counters: BTreeMap<String, u64>,
    #[serde(flatten)]
    result: Value,
}

impl RunReport {
    fn new(command: &'static str, inputs: &[&[u8]]) -> Self {
        let mut h = Sha256::new();
        for bytes in inputs {
            h.update(bytes);
        }
        RunReport {
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_digest: hex::encode(h.finalize()),
            timings_ms: BTreeMap::new(),
            counters: BTreeMap::new(),
            result: Value::Null,
        }
    }

    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms.insert(phase, t.elapsed().as_secs_f64() * 1e3);
        out
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<(Vec<u8>, MixedGraph), Failure> {
    let bytes = read(path)?;
    let g = parse_graph_bytes(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((bytes, g))
}

fn vertex(g: &MixedGraph, label: &str) -> Result<usize, Failure> {
    g.index_of(label).ok_or_else(|| usage(format!("no vertex named {label:?}")))
}

fn names(g: &MixedGraph, s: &VertexSet) -> Vec<String> {
    g.names(s)
}

fn firing_counts(log: &[Firing]) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for f in log {
        *counts.entry(format!("firings.{}", f.rule)).or_insert(0) += 1;
    }
    counts
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| negative(format!("writing output: {e}")))
}

fn emit_report(out: &mut dyn Write, report: &RunReport) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    emit(out, &format!("{text}\n"))
}

fn emit_graph(out: &mut dyn Write, g: &MixedGraph, log: &[Firing], show_log: bool, dot: bool) -> Result<(), Failure> {
    let mut text = if dot { to_dot(g) } else { serialize_graph(g) };
    if show_log {
        for f in log {
            text.push_str(&format!("# {}\n", f.describe(g)));
        }
    }
    emit(out, &text)
}

fn orient(out: &mut dyn Write, o: &Output, input: &Path, rules: RuleSet, show_log: bool) -> Result<(), Failure> {
    let (bytes, g) = load_graph(input)?;
    let mut report = RunReport::new("orient", &[&bytes]);
    let (h, log) = report.time("rules", || close(&g, rules.rules())).map_err(|e| negative(e.to_string()))?;
    if !o.json {
        return emit_graph(out, &h, &log, show_log, o.dot);
    }
    report.counters = firing_counts(&log);
    report.result = json!({ "graph": serialize_graph(&h), "firings": log.iter().map(|f| f.describe(&h)).collect::<Vec<_>>() });
    emit_report(out, &report)
}

fn bk(out: &mut dyn Write, o: &Output, input: &Path, bk_path: &Path, rules: RuleSet, show_log: bool, validate: bool) -> Result<(), Failure> {
    let (bytes, p) = load_graph(input)?;
    let bk_bytes = read(bk_path)?;
    let bk_text = std::str::from_utf8(&bk_bytes).map_err(|_| usage(format!("{}: input is not valid UTF-8", bk_path.display())))?;
    let bk = parse_bk(bk_text, &p).map_err(|e| usage(format!("{}: {e}", bk_path.display())))?;
    let mut report = RunReport::new("bk", &[&bytes, &bk_bytes]);
    let (h, log) = report.time("rules", || incorporate_bk(&p, &bk, rules.rules())).map_err(|e| negative(e.to_string()))?;
    if validate {
        let class = report
            .time("oracle", || enumerate_consistent_mags(&p, &p, DEFAULT_MAG_CAP))
            .map_err(|e| negative(e.to_string()))?
            .consistent_mags;
        let agreeing: Vec<&MixedGraph> =
            class.iter().filter(|m| bk.commitments.iter().all(|c| m.mark_at(c.at, c.other) == Some(c.mark))).collect();
        report.counters.insert("oracle.agreeing_mags".into(), agreeing.len() as u64);
        for e in h.edges() {
            for (at, other) in [(e.u, e.v), (e.v, e.u)] {
                let mark = h.mark_at(at, other).expect("edge");
                if mark != Mark::Circle && agreeing.iter().any(|m| m.mark_at(at, other) != Some(mark)) {
                    return Err(negative(format!(
                        "mark {mark:?} at {} on {}-{} is not shared by every MAG carrying the background knowledge",
                        h.label(at),
                        h.label(at),
                        h.label(other)
                    )));
                }
            }
        }
    }
    if !o.json {
        return emit_graph(out, &h, &log, show_log, o.dot);
    }
    report.counters.extend(firing_counts(&log));
    report.result = json!({ "graph": serialize_graph(&h), "firings": log.iter().map(|f| f.describe(&h)).collect::<Vec<_>>() });
    emit_report(out, &report)
}

fn outcome_kind(o: &Outcome) -> &'static str {
    match o {
        Outcome::NoEffect => "no_effect",
        Outcome::GloballyIdentified(_) => "globally_identified",
        Outcome::SetOfSets(_) => "set_of_sets",
    }
}

fn effects(out: &mut dyn Write, a: &EffectsArgs) -> Result<(), Failure> {
    let (bytes, p) = load_graph(&a.input)?;
    let (x, y) = (vertex(&p, &a.x)?, vertex(&p, &a.y)?);
    if x == y {
        return Err(usage("--x and --y must differ"));
    }
    let opts = DeterminationOptions { global_shortcut: !a.no_shortcut, block_set_budget: a.budget, ..DeterminationOptions::default() };
    let mut report = RunReport::new("effects", &[&bytes]);
    let run = |opts: &DeterminationOptions| if a.baseline { determine_with_block_sets(&p, x, y, opts) } else { determine_with_rules(&p, x, y, opts) };
    let AdjustmentReport { outcome, diagnostics } = report.time("determination", || run(&opts)).map_err(|e| negative(e.to_string()))?;
    let sets: Vec<Vec<String>> = outcome.sets().iter().map(|s| names(&p, s)).collect();
    let mut oracle_agrees = None;
    if a.oracle_check {
        let truth = report.time("oracle", || brute_force_set_determination(&p, x, y, DEFAULT_MAG_CAP)).map_err(|e| negative(e.to_string()))?;
        // the shortcut names one set valid everywhere, the oracle lists them per MAG
        let agrees = match &outcome {
            Outcome::GloballyIdentified(w) => truth.contains(w),
            other => other.sets().into_iter().collect::<std::collections::BTreeSet<_>>() == truth,
        };
        oracle_agrees = Some(agrees);
        if !agrees {
            let want: Vec<Vec<String>> = truth.iter().map(|s| names(&p, s)).collect();
            return Err(negative(format!("oracle disagrees: found {sets:?}, enumeration gives {want:?}")));
        }
    }
    if !a.json {
        let mut text = format!("outcome: {}\n", outcome_kind(&outcome));
        for s in &sets {
            text.push_str(&format!("{{{}}}\n", s.join(", ")));
        }
        return emit(out, &text);
    }
    for (k, v) in [
        ("transformations", diagnostics.transformations as u64),
        ("valid_transformations", diagnostics.valid_transformations as u64),
        ("candidate_sets", diagnostics.candidate_sets),
        ("potential_sets", diagnostics.potential_sets),
        ("block_sets_tested", diagnostics.block_sets_tested),
        ("update_loops", diagnostics.update_loops),
        ("max_update_loops", diagnostics.max_update_loops as u64),
        ("r12_firings", diagnostics.r12_firings),
    ] {
        report.counters.insert(k.to_string(), v);
    }
    let per: Vec<Value> = diagnostics
        .per_transformation
        .iter()
        .map(|t| {
            json!({
                "arrow_at_x": names(&p, &t.arrow_at_x),
                "valid": t.valid,
                "dd_sep": names(&p, &t.dd_sep),
                "accepted": t.accepted.iter().map(|s| names(&p, s)).collect::<Vec<_>>(),
            })
        })
        .collect();
    report.result = json!({
        "outcome": outcome_kind(&outcome),
        "adjustment_sets": sets,
        "diagnostics": {
            "method": if a.baseline { "block_sets" } else { "rules" },
            "transformations": diagnostics.transformations,
            "potential_sets_tested": diagnostics.potential_sets,
            "block_sets_tested": diagnostics.block_sets_tested,
            "r12_firings": diagnostics.r12_firings,
            "per_transformation": per,
        },
        "oracle_agrees": oracle_agrees,
    });
    emit_report(out, &report)
}

fn oracle(out: &mut dyn Write, cmd: &OracleCommand) -> Result<(), Failure> {
    match cmd {
        OracleCommand::Mags { input, pag, cap } => {
            let bytes = read(input)?;
            let h = std::str::from_utf8(&bytes)
                .map_err(|_| usage(format!("{}: input is not valid UTF-8", input.display())))
                .and_then(|t| parse_pmg(t).map_err(|e| usage(format!("{}: {e}", input.display()))))?;
            let (_, p) = load_graph(pag)?;
            if h.labels() != p.labels() {
                return Err(usage("--in and --pag must declare the same vertices in the same order"));
            }
            let bundle = enumerate_consistent_mags(&h, &p, *cap).map_err(|e| negative(e.to_string()))?;
            let mut text = String::new();
            for m in &bundle.consistent_mags {
                text.push_str(&json!({ "mag": serialize_graph(m) }).to_string());
                text.push('\n');
            }
            emit(out, &text)
        }
        OracleCommand::Effects { input, x, y, cap } => {
            let (_, p) = load_graph(input)?;
            let (x, y) = (vertex(&p, x)?, vertex(&p, y)?);
            if x == y {
                return Err(usage("--x and --y must differ"));
            }
            let sets = brute_force_set_determination(&p, x, y, *cap).map_err(|e| negative(e.to_string()))?;
            let mut text = String::new();
            for s in &sets {
                text.push_str(&json!({ "adjustment_set": names(&p, s) }).to_string());
                text.push('\n');
            }
            emit(out, &text)
        }
    }
}

fn gen(out: &mut dyn Write, cfg: &GenConfig, out_dir: Option<&Path>) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&cfg.edge_prob) {
        return Err(usage("--edge-prob must lie in [0, 1]"));
    }
    if cfg.observed == 0 {
        return Err(usage("--n must be positive"));
    }
    let inst = generate(cfg).map_err(|e| negative(e.to_string()))?;
    let provenance = format!(
        "# seed {} observed {} latents {} edge-prob {} latent {}\n",
        cfg.seed,
        cfg.observed,
        cfg.latents,
        cfg.edge_prob,
        inst.dag.dag.names(&inst.dag.latent).join(" ")
    );
    let parts = [("pag", serialize_graph(&inst.pag)), ("mag", serialize_graph(&inst.mag)), ("dag", provenance + &serialize_graph(&inst.dag.dag))];
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            for (name, text) in parts {
                let path = dir.join(format!("{name}.txt"));
                std::fs::write(&path, text).map_err(|e| negative(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        None => {
            let text: Vec<String> = parts.iter().map(|(name, text)| format!("# {name}\n{text}")).collect();
            emit(out, &text.join("\n"))
        }
    }
}

fn bench(out: &mut dyn Write, family: Family, k: usize, n: usize, reps: usize) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match family {
        Family::Ladder => {
            for k in 1..=k {
                let row = ladder_row(k).map_err(|e| negative(e.to_string()))?;
                w.serialize(row).expect("in-memory CSV");
            }
        }
        Family::Strip => {
            let mut size = 4;
            while size <= n.max(4) {
                w.serialize(strip_row(size, reps)).expect("in-memory CSV");
                size *= 2;
            }
        }
    }
    let bytes = w.into_inner().expect("in-memory CSV");
    emit(out, &String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// Runs one parsed command line, writing results to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(t) = cli.threads {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match &cli.command {
        Command::Orient { out: o, input, rules, log } => orient(out, o, input, *rules, *log),
        Command::Bk { out: o, input, bk: b, rules, log, validate_oracle } => bk(out, o, input, b, *rules, *log, *validate_oracle),
        Command::Effects(a) => effects(out, a),
        Command::Oracle(cmd) => oracle(out, cmd),
        Command::Gen { n, latents, edge_prob, seed, mag_cap, out_dir } => {
            let cfg = GenConfig { observed: *n, latents: *latents, edge_prob: *edge_prob, seed: *seed, mag_cap: *mag_cap, ..GenConfig::default() };
            gen(out, &cfg, out_dir.as_deref())
        }
        Command::Bench { family, k, n, reps } => bench(out, *family, *k, *n, *reps),
    }
}

/// Entry point of the binary.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    match execute(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("pagset: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
