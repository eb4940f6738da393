//! Command-line front end: reproduce the headline numbers on demand, run
//! optimizations and simulations, and emit scenario/graph/report files.
//!
//! Exit codes: 0 success, 1 validation/infeasibility, 2 usage error or
//! unreadable input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use oddcycle::bounds::DEFAULT_OPT_TOL;
use oddcycle::graph::DEFAULT_EDGE_TOL;
use oddcycle::{
    build_graph, check_conditions, export_graph, hardy_family, hardy_max_bound, is_cycle,
    ks_block, label_cycle_vectors, load_scenario, nchv_closed_form, nchv_cycle_bound,
    nchv_implication_check, optimize_cycle_max, optimize_hardy_max, pentagon, quantum_cycle_bound,
    run_experiment, save_scenario, validate_scenario, CycleScenario, Error, HardyFamilyParams,
    OptimizationResult, OrthogonalityGraph, ENUMERATION_CAP,
};

#[derive(Parser)]
#[command(
    name = "oddcycle",
    version,
    about = "Hardy-like qutrit contextuality on odd measurement cycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Objective {
    /// Maximize P(0,1|n,1) with every condition sum pinned to 1.
    Hardy,
    /// Maximize the cycle sum with only the orthogonality constraints.
    Cycle,
}

/// Scenario source shared by check/simulate/graph.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Scenario file produced by `family --out` or `optimize --out`.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    /// The built-in five-box scenario.
    #[arg(long)]
    pentagon: bool,
    /// The closed-form family on 4k+1 boxes.
    #[arg(long, value_name = "K")]
    family: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Walk through the five-box argument: conditions, the noncontextual
    /// prediction, and the quantum value 1/9.
    Demo {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Build the closed-form family on 4k+1 boxes and report its numbers.
    Family {
        #[arg(long, value_parser = parse_k)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the scenario file here (report still goes to stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Classical and quantum cycle bounds for one or more n.
    Bounds {
        /// Odd cycle size; repeat for a sweep.
        #[arg(long = "n", value_parser = parse_odd_n, required = true)]
        ns: Vec<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Validate a scenario and evaluate its condition sums.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Multi-start maximization of the Hardy probability or the cycle sum.
    Optimize {
        #[arg(long, value_parser = parse_odd_n)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Simplex-diameter convergence tolerance.
        #[arg(long, default_value_t = DEFAULT_OPT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "hardy")]
        objective: Objective,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the best scenario here (report still goes to stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Orthogonality graph of a vector set.
    Graph {
        #[command(flatten)]
        source: GraphSource,
        /// Edge-detection tolerance, in (0, 0.1).
        #[arg(long, value_parser = parse_edge_tol, default_value_t = DEFAULT_EDGE_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// The eight-vector Kochen-Specker building block.
    KsBlock {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo sampling of every context of a scenario.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1_000_000, value_parser = parse_shots)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphSource {
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    #[arg(long)]
    pentagon: bool,
    #[arg(long, value_name = "K")]
    family: Option<usize>,
    /// The eight-vector block including eta, v6 and v7.
    #[arg(long)]
    ks_block: bool,
}

fn parse_odd_n(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if n < 5 || n.is_multiple_of(2) {
        return Err(format!("cycle size must be odd and at least 5, got {n}"));
    }
    Ok(n)
}

fn parse_k(s: &str) -> Result<usize, String> {
    let k: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if k == 0 {
        return Err("family index must be at least 1".into());
    }
    Ok(k)
}

fn parse_edge_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if t <= 0.0 || t >= 0.1 {
        return Err(format!("edge tolerance must lie in (0, 0.1), got {t}"));
    }
    Ok(t)
}

fn parse_shots(s: &str) -> Result<u64, String> {
    let v: u64 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if v == 0 {
        return Err("shots must be at least 1".into());
    }
    Ok(v)
}

enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Usage(_) => 2,
        CliError::Lib(err) => match err {
            Error::Io(_) | Error::Parse(_) | Error::UnsupportedFormat { .. } => 2,
            _ => 1,
        },
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

/// Rounds to 12 significant digits (machine formats).
fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("round-trip")
}

/// 6 decimal places (human tables). Negative zero prints as zero.
fn f6(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.6}")
}

/// Shortest decimal form of the 12-significant-digit rounding.
fn f12(x: f64) -> String {
    format!("{}", sig12(x))
}

/// Rounds every fractional number in a JSON tree to 12 significant digits.
/// Integers pass through unchanged.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let x = n.as_f64().expect("checked");
                if let Some(r) = serde_json::Number::from_f64(sig12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Lib(e.into())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(mut v: Value) -> String {
    round_json(&mut v);
    let mut text = serde_json::to_string_pretty(&v).expect("serializable");
    text.push('\n');
    text
}

fn reject_format(format: Format, supported: &str, command: &str) -> Result<(), CliError> {
    let name = match format {
        Format::Text => return Ok(()),
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Dot => "dot",
    };
    if supported.split(", ").any(|s| s == name) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "format `{name}` is not supported by `{command}` (supported: text, {supported})"
        )))
    }
}

fn load_source(source: &Source) -> Result<(CycleScenario, Vec<String>, String), CliError> {
    if let Some(path) = &source.scenario {
        let (s, warnings) = load_scenario(path)?;
        return Ok((s, warnings, path.display().to_string()));
    }
    if source.pentagon {
        return Ok((pentagon(), Vec::new(), "pentagon".into()));
    }
    let k = source.family.expect("clap group guarantees one source");
    Ok((hardy_family(k)?, Vec::new(), format!("family k={k}")))
}

fn scenario_json(s: &CycleScenario) -> Value {
    json!({
        "n": s.n(),
        "state": s.state().components(),
        "vectors": s.vectors().iter().map(|v| v.components()).collect::<Vec<_>>(),
        "tolerance": s.tolerance(),
    })
}

fn vector_row(v: [f64; 3]) -> String {
    format!("({}, {}, {})", f6(v[0]), f6(v[1]), f6(v[2]))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Demo { format, out } => cmd_demo(format, &out),
        Command::Family { k, format, out } => cmd_family(k, format, &out),
        Command::Bounds { ns, format, out } => cmd_bounds(&ns, format, &out),
        Command::Check {
            source,
            format,
            out,
        } => cmd_check(&source, format, &out),
        Command::Optimize {
            n,
            starts,
            seed,
            tol,
            objective,
            format,
            out,
        } => cmd_optimize(n, starts, seed, tol, objective, format, &out),
        Command::Graph {
            source,
            tol,
            format,
            out,
        } => cmd_graph(&source, tol, format, &out),
        Command::KsBlock { format, out } => cmd_ks_block(format, &out),
        Command::Simulate {
            source,
            shots,
            seed,
            format,
            out,
        } => cmd_simulate(&source, shots, seed, format, &out),
    }
}

fn cmd_demo(format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    reject_format(format, "json", "demo")?;
    let s = pentagon();
    let report = check_conditions(&s)?;
    let nchv = nchv_cycle_bound(5)? as f64;
    let quantum = quantum_cycle_bound(5)?;
    let implication = nchv_implication_check(5)?;
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "Five-box Hardy-like demonstration").unwrap();
            writeln!(t).unwrap();
            writeln!(t, "state eta: {}", vector_row(s.state().components())).unwrap();
            for i in 1..=5 {
                writeln!(t, "box {i}:     {}", vector_row(s.vector(i).components())).unwrap();
            }
            writeln!(t).unwrap();
            writeln!(t, "condition sums (each must equal 1):").unwrap();
            writeln!(
                t,
                "  P(0,1|1,2) + P(0,1|2,3) = {}",
                f6(report.condition_sums[0])
            )
            .unwrap();
            writeln!(
                t,
                "  P(0,1|3,4) + P(0,1|4,5) = {}",
                f6(report.condition_sums[1])
            )
            .unwrap();
            writeln!(t).unwrap();
            writeln!(
                t,
                "noncontextual models conclude:  P(0,1|5,1) = 0  (verified by enumeration: {})",
                if implication { "yes" } else { "NO" }
            )
            .unwrap();
            writeln!(
                t,
                "quantum value:                  P(0,1|5,1) = {}  (= 1/9)",
                f6(report.hardy_prob)
            )
            .unwrap();
            writeln!(t).unwrap();
            writeln!(
                t,
                "cycle sum {} exceeds the noncontextual bound {}; quantum maximum {}",
                f6(report.cycle_sum),
                nchv,
                f6(quantum)
            )
            .unwrap();
            t
        }
        _ => json_text(json!({
            "scenario": scenario_json(&s),
            "condition_sums": report.condition_sums,
            "hardy_prob": report.hardy_prob,
            "cycle_sum": report.cycle_sum,
            "all_satisfied": report.all_satisfied,
            "nchv_bound": nchv,
            "nchv_implication": implication,
            "quantum_bound": quantum,
        })),
    };
    emit(out, &text)
}

fn cmd_family(k: usize, format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    reject_format(format, "json", "family")?;
    let params = HardyFamilyParams::with_default_phis(k)?;
    let s = hardy_family(k)?;
    let report = check_conditions(&s)?;
    if let Some(path) = out {
        save_scenario(&s, path)?;
    }
    let closed = params.hardy_prob_closed_form();
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "Hardy family k={k}: n = {} boxes", s.n()).unwrap();
            writeln!(t, "azimuths phi:  {}", params.phis.iter().map(|&x| f6(x)).collect::<Vec<_>>().join(", ")).unwrap();
            writeln!(t, "polars theta:  {}", params.thetas.iter().map(|&x| f6(x)).collect::<Vec<_>>().join(", ")).unwrap();
            writeln!(t, "condition sums: {}", report.condition_sums.iter().map(|&x| f6(x)).collect::<Vec<_>>().join(", ")).unwrap();
            writeln!(t, "hardy probability (Born rule):  {}", f6(report.hardy_prob)).unwrap();
            writeln!(t, "hardy probability (closed form): {}", f6(closed)).unwrap();
            writeln!(t, "cycle sum: {}", f6(report.cycle_sum)).unwrap();
            if let Some(path) = out {
                writeln!(t, "scenario written to {}", path.display()).unwrap();
            }
            t
        }
        _ => json_text(json!({
            "k": k,
            "n": s.n(),
            "phis": params.phis,
            "thetas": params.thetas,
            "degenerate": params.degenerate,
            "condition_sums": report.condition_sums,
            "hardy_prob": report.hardy_prob,
            "hardy_prob_closed_form": closed,
            "cycle_sum": report.cycle_sum,
            "all_satisfied": report.all_satisfied,
            "scenario": scenario_json(&s),
        })),
    };
    // The scenario file goes to --out; the report always goes to stdout.
    emit(&None, &text)
}

fn bounds_row(n: usize) -> Result<(usize, usize, f64, f64, &'static str), CliError> {
    let (nchv, method) = if n <= ENUMERATION_CAP {
        (nchv_cycle_bound(n)?, "enumeration")
    } else {
        (nchv_closed_form(n)?, "closed form")
    };
    Ok((n, nchv, quantum_cycle_bound(n)?, hardy_max_bound(n)?, method))
}

fn cmd_bounds(ns: &[usize], format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    reject_format(format, "json, csv", "bounds")?;
    let rows: Vec<_> = ns.iter().map(|&n| bounds_row(n)).collect::<Result<_, _>>()?;
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(
                t,
                "{:>7}  {:>6}  {:>12}  {:>12}  method",
                "n", "nchv", "quantum", "hardy_max"
            )
            .unwrap();
            for (n, nchv, q, h, method) in &rows {
                writeln!(t, "{n:>7}  {nchv:>6}  {:>12}  {:>12}  {method}", f6(*q), f6(*h)).unwrap();
            }
            t
        }
        Format::Csv => {
            let mut t = String::from("n,nchv_bound,quantum_bound,hardy_max_bound\n");
            for (n, nchv, q, h, _) in &rows {
                writeln!(t, "{n},{nchv},{},{}", f12(*q), f12(*h)).unwrap();
            }
            t
        }
        _ => json_text(Value::Array(
            rows.iter()
                .map(|(n, nchv, q, h, method)| {
                    json!({
                        "n": n,
                        "nchv_bound": nchv,
                        "quantum_bound": q,
                        "hardy_max_bound": h,
                        "method": method,
                    })
                })
                .collect(),
        )),
    };
    emit(out, &text)
}

fn cmd_check(source: &Source, format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    reject_format(format, "json", "check")?;
    let (s, warnings, origin) = load_source(source)?;
    let violations = validate_scenario(&s);
    if !violations.is_empty() {
        // Report the violations on the requested channel, then fail.
        let text = match format {
            Format::Text => {
                let mut t = String::new();
                writeln!(t, "scenario: {} boxes ({origin})", s.n()).unwrap();
                for w in &warnings {
                    writeln!(t, "warning: {w}").unwrap();
                }
                writeln!(t, "validation: FAILED").unwrap();
                for v in &violations {
                    writeln!(t, "  {v}").unwrap();
                }
                t
            }
            _ => json_text(json!({
                "source": origin,
                "n": s.n(),
                "valid": false,
                "violations": violations,
                "warnings": warnings,
            })),
        };
        emit(out, &text)?;
        return Err(CliError::Lib(Error::InvalidScenario { violations }));
    }
    let report = check_conditions(&s)?;
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "scenario: {} boxes ({origin})", s.n()).unwrap();
            for w in &warnings {
                writeln!(t, "warning: {w}").unwrap();
            }
            writeln!(t, "validation: ok (tolerance {:e})", s.tolerance()).unwrap();
            writeln!(t, "condition sums:").unwrap();
            for (j, sum) in report.condition_sums.iter().enumerate() {
                writeln!(
                    t,
                    "  P(0,1|{},{}) + P(0,1|{},{}) = {}",
                    2 * j + 1,
                    2 * j + 2,
                    2 * j + 2,
                    2 * j + 3,
                    f6(*sum)
                )
                .unwrap();
            }
            writeln!(t, "hardy probability P(0,1|{},1): {}", s.n(), f6(report.hardy_prob)).unwrap();
            writeln!(t, "cycle sum: {}", f6(report.cycle_sum)).unwrap();
            writeln!(
                t,
                "all conditions satisfied: {}",
                if report.all_satisfied { "yes" } else { "no" }
            )
            .unwrap();
            t
        }
        _ => json_text(json!({
            "source": origin,
            "n": s.n(),
            "valid": true,
            "warnings": warnings,
            "condition_sums": report.condition_sums,
            "hardy_prob": report.hardy_prob,
            "cycle_sum": report.cycle_sum,
            "all_satisfied": report.all_satisfied,
        })),
    };
    emit(out, &text)
}

fn cmd_optimize(
    n: usize,
    starts: usize,
    seed: u64,
    tol: f64,
    objective: Objective,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    reject_format(format, "json", "optimize")?;
    let (result, kind, bound): (OptimizationResult, &str, f64) = match objective {
        Objective::Hardy => (
            optimize_hardy_max(n, starts, seed, tol)?,
            "hardy",
            hardy_max_bound(n)?,
        ),
        Objective::Cycle => (
            optimize_cycle_max(n, starts, seed)?,
            "cycle",
            quantum_cycle_bound(n)?,
        ),
    };
    if let Some(path) = out {
        save_scenario(&result.best_scenario, path)?;
    }
    let report = check_conditions(&result.best_scenario)?;
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(
                t,
                "objective: {} | n = {n}, starts = {starts}, seed = {seed}, tol = {tol:e}",
                match objective {
                    Objective::Hardy => "max P(0,1|n,1) under the conditions",
                    Objective::Cycle => "max cycle sum (conditions free)",
                }
            )
            .unwrap();
            writeln!(
                t,
                "best objective: {}  (upper bound {})",
                f6(result.objective),
                f6(bound)
            )
            .unwrap();
            writeln!(
                t,
                "best start: {} of {} (converged: {})",
                result.best_start_index,
                result.starts_run,
                if result.converged { "yes" } else { "no" }
            )
            .unwrap();
            if matches!(objective, Objective::Hardy) {
                let dev = report
                    .condition_sums
                    .iter()
                    .map(|s| (s - 1.0).abs())
                    .fold(0.0f64, f64::max);
                writeln!(t, "condition sums: all 1 (max deviation {dev:.2e})").unwrap();
            } else {
                writeln!(
                    t,
                    "condition sums: {}",
                    report
                        .condition_sums
                        .iter()
                        .map(|&x| f6(x))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
                .unwrap();
            }
            if let Some(path) = out {
                writeln!(t, "scenario written to {}", path.display()).unwrap();
            }
            t
        }
        _ => json_text(json!({
            "objective_kind": kind,
            "n": n,
            "starts": starts,
            "seed": seed,
            "tol": tol,
            "objective": result.objective,
            "upper_bound": bound,
            "best_start_index": result.best_start_index,
            "converged": result.converged,
            "objective_history": result.objective_history,
            "condition_sums": report.condition_sums,
            "scenario": scenario_json(&result.best_scenario),
        })),
    };
    emit(&None, &text)
}

fn graph_source(source: &GraphSource) -> Result<(Vec<(String, oddcycle::UnitVector3)>, String), CliError> {
    if source.ks_block {
        return Ok((ks_block(), "ks-block".into()));
    }
    if source.pentagon {
        return Ok((
            label_cycle_vectors(pentagon().vectors()),
            "pentagon".into(),
        ));
    }
    if let Some(k) = source.family {
        return Ok((
            label_cycle_vectors(hardy_family(k)?.vectors()),
            format!("family k={k}"),
        ));
    }
    let path = source.scenario.as_ref().expect("clap group guarantees one source");
    let (s, _warnings) = load_scenario(path)?;
    Ok((
        label_cycle_vectors(s.vectors()),
        path.display().to_string(),
    ))
}

fn graph_text(g: &OrthogonalityGraph, origin: &str) -> String {
    let mut t = String::new();
    writeln!(
        t,
        "orthogonality graph ({origin}): {} vertices, {} edges, tolerance {:e}",
        g.vertices().len(),
        g.edges().len(),
        g.tolerance()
    )
    .unwrap();
    for (label, v) in g.vertices() {
        writeln!(t, "  {label:<5} {}", vector_row(v.components())).unwrap();
    }
    writeln!(t, "edges:").unwrap();
    for (a, b) in g.labeled_edges() {
        writeln!(t, "  {a} -- {b}").unwrap();
    }
    let n = g.vertices().len();
    writeln!(t, "cycle C{n}: {}", if is_cycle(g, n) { "yes" } else { "no" }).unwrap();
    for w in g.warnings() {
        writeln!(t, "warning: {w}").unwrap();
    }
    t
}

fn cmd_graph(
    source: &GraphSource,
    tol: f64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    reject_format(format, "json, dot", "graph")?;
    let (labeled, origin) = graph_source(source)?;
    let g = build_graph(&labeled, tol);
    let text = match format {
        Format::Text => graph_text(&g, &origin),
        Format::Dot => export_graph(&g, "dot")?,
        _ => graph_json(&g)?,
    };
    emit(out, &text)
}

/// The library export re-rounded to the machine-format precision.
fn graph_json(g: &OrthogonalityGraph) -> Result<String, CliError> {
    let doc: Value = serde_json::from_str(&export_graph(g, "json")?)
        .expect("library export is valid JSON");
    Ok(json_text(doc))
}

fn cmd_ks_block(format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    reject_format(format, "json, dot", "ks-block")?;
    let block = ks_block();
    let g = build_graph(&block, DEFAULT_EDGE_TOL);
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "Kochen-Specker eight-vector block").unwrap();
            for (label, v) in &block {
                writeln!(t, "  {label:<4} {}", vector_row(v.components())).unwrap();
            }
            writeln!(t, "orthogonality edges ({}):", g.edges().len()).unwrap();
            for (a, b) in g.labeled_edges() {
                writeln!(t, "  {a} -- {b}").unwrap();
            }
            t
        }
        Format::Dot => export_graph(&g, "dot")?,
        _ => json_text(json!({
            "vectors": block
                .iter()
                .map(|(label, v)| json!({ "label": label, "vector": v.components() }))
                .collect::<Vec<_>>(),
            "edges": g.labeled_edges(),
            "edge_count": g.edges().len(),
        })),
    };
    emit(out, &text)
}

fn cmd_simulate(
    source: &Source,
    shots: u64,
    seed: u64,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    reject_format(format, "json", "simulate")?;
    let (s, warnings, origin) = load_source(source)?;
    let report = run_experiment(&s, shots, seed)?;
    let exact = check_conditions(&s)?;
    let text = match format {
        Format::Text => {
            let mut t = String::new();
            writeln!(
                t,
                "simulate: {} boxes ({origin}), shots = {shots}, seed = {seed}",
                s.n()
            )
            .unwrap();
            for w in &warnings {
                writeln!(t, "warning: {w}").unwrap();
            }
            writeln!(
                t,
                "{:>8}  {:>9} {:>9} {:>9} {:>9}   {:>9} {:>9} {:>9}",
                "context", "c00", "c01", "c10", "c11", "p00", "p01", "p10"
            )
            .unwrap();
            for ctx in &report.contexts {
                writeln!(
                    t,
                    "{:>8}  {:>9} {:>9} {:>9} {:>9}   {:>9} {:>9} {:>9}",
                    format!("({},{})", ctx.i, ctx.j),
                    ctx.counts[0],
                    ctx.counts[1],
                    ctx.counts[2],
                    ctx.counts[3],
                    f6(ctx.estimates[0]),
                    f6(ctx.estimates[1]),
                    f6(ctx.estimates[2]),
                )
                .unwrap();
            }
            writeln!(
                t,
                "empirical condition sums: {}",
                report
                    .empirical_condition_sums
                    .iter()
                    .map(|&x| f6(x))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
            writeln!(
                t,
                "empirical hardy probability: {} (exact {})",
                f6(report.empirical_hardy_prob),
                f6(exact.hardy_prob)
            )
            .unwrap();
            writeln!(
                t,
                "empirical cycle sum: {} (exact {})",
                f6(report.empirical_cycle_sum),
                f6(exact.cycle_sum)
            )
            .unwrap();
            let double_full: u64 = report.contexts.iter().map(|c| c.counts[3]).sum();
            writeln!(t, "(1,1) outcomes observed: {double_full}").unwrap();
            t
        }
        _ => {
            let mut v = serde_json::to_value(&report).expect("serializable");
            if let Value::Object(map) = &mut v {
                map.insert("source".into(), Value::String(origin));
                map.insert(
                    "exact_hardy_prob".into(),
                    json!(exact.hardy_prob),
                );
                map.insert("exact_cycle_sum".into(), json!(exact.cycle_sum));
                map.insert("warnings".into(), json!(warnings));
            }
            json_text(v)
        }
    };
    emit(out, &text)
}
