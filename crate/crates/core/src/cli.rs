//! The `happy` command line. Exit status: 0 yes, 1 no, 2 error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bench::{load_suite, run_suite, write_csv};
use crate::error::{HappyError, Result};
use crate::io::{generate_random, parse_instance, parse_set_system, serialize_instance};
use crate::model::{Color, Instance, ProblemKind};
use crate::reductions::{
    reduce_any_set_partitioning_to_mhe, reduce_brds_to_mhe,
    reduce_colored_graph_to_mhv_subdivision, reduce_set_packing_to_mhv,
    reduce_x3c_to_mhe_above_guarantee, unique_coloring, verify_equivalence, ReductionOutput,
};
use crate::runner::{run, Algo, RunConfig};
use crate::solve::{Limits, Outcome, DEFAULT_ENUMERATION_BUDGET, DEFAULT_MAX_DP_WIDTH};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "happy",
    version,
    about = "Maximum Happy Vertices / Edges solvers and gadgets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Build a gadget instance from a source problem.
    Reduce(ReduceArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct LimitArgs {
    /// Maximum number of extensions (or subsets) an exhaustive method may visit.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    /// Maximum number of uncolored vertices handed to the subset DP.
    #[arg(long, default_value_t = DEFAULT_MAX_DP_WIDTH)]
    max_dp_width: usize,
}

impl LimitArgs {
    fn limits(&self) -> Limits {
        Limits {
            enumeration_budget: self.budget,
            max_dp_width: self.max_dp_width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Brute,
    Randomized,
    Trivial,
    KernelDp,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Brute => Algo::Brute,
            AlgoArg::Randomized => Algo::Randomized,
            AlgoArg::Trivial => Algo::Trivial,
            AlgoArg::KernelDp => Algo::KernelDp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reps {
    Auto,
    Count(u64),
}

fn parse_reps(s: &str) -> std::result::Result<Reps, String> {
    if s == "auto" {
        return Ok(Reps::Auto);
    }
    match s.parse::<u64>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or `auto`, got {s:?}")),
        Ok(n) => Ok(Reps::Count(n)),
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions of the randomized solver, or `auto` for 3 * ell^k.
    #[arg(long, default_value = "auto", value_parser = parse_reps)]
    reps: Reps,
    /// Print a JSON report instead of text.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceArg {
    SetPacking,
    Brds,
    Is,
    X3c,
    SetPart,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    #[arg(long, value_enum)]
    from: SourceArg,
    #[arg(long)]
    input: PathBuf,
    /// Gadget instance path; the mapper goes to `<output>.map.json`.
    #[arg(long)]
    output: PathBuf,
    /// Source target: number of sets (set-packing, brds) or independent set
    /// size (is, overriding the header).
    #[arg(long)]
    k: Option<u64>,
    /// Solve both sides exactly and check that the answers agree.
    #[arg(long)]
    verify: bool,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    /// Output path; writes `<out>.csv` and `<out>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Mhv,
    Mhe,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: Color,
    #[arg(long, default_value_t = 0.3)]
    edge_p: f64,
    #[arg(long, default_value_t = 0.3)]
    precolor: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "mhv")]
    kind: KindArg,
    #[arg(long, default_value_t = 0)]
    k: u64,
    /// Destination file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Reduce(a) => reduce(&a),
        Command::Bench(a) => bench(&a),
        Command::Generate(a) => generate(&a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| HappyError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| HappyError::Io(format!("{}: {e}", path.display())))
}

fn solve(args: &SolveArgs) -> Result<i32> {
    let instance = parse_instance(&read(&args.input)?)?;
    let config = RunConfig {
        algo: args.algo.into(),
        seed: args.seed,
        repetitions: match args.reps {
            Reps::Auto => None,
            Reps::Count(n) => Some(n),
        },
        limits: args.limits.limits(),
    };
    let result = run(&instance, &config)?;
    let yes = result.is_yes(instance.k);
    let mut out = std::io::stdout().lock();
    if args.json {
        let report = json!({
            "schema": 1,
            "input": args.input.display().to_string(),
            "kind": instance.kind,
            "algo": config.algo,
            "n": instance.n(),
            "ell": instance.ell(),
            "k": instance.k,
            "decision": yes,
            "outcome": result.outcome,
            "value": result.value,
            "certificate": result.certificate,
            "stats": result.stats,
        });
        writeln!(out, "{report:#}")?;
    } else {
        writeln!(out, "decision: {}", if yes { "yes" } else { "no" })?;
        match result.outcome {
            Outcome::Optimum(v) => writeln!(out, "optimum: {v}")?,
            Outcome::Achieved(v) => writeln!(out, "achieved: {v}")?,
            Outcome::Decision(_) => {
                if let Some(v) = result.value {
                    writeln!(out, "value: {v}")?;
                }
            }
        }
        if let Some(c) = &result.certificate {
            let colors: Vec<String> = c.as_slice().iter().map(|c| c.to_string()).collect();
            writeln!(out, "coloring: {}", colors.join(" "))?;
        }
        let s = &result.stats;
        write!(
            out,
            "stats: calls={} depth={} millis={:.3}",
            s.calls,
            s.depth,
            s.elapsed.as_secs_f64() * 1e3
        )?;
        if let Some(seed) = s.seed {
            write!(out, " seed={seed}")?;
        }
        writeln!(out)?;
    }
    Ok(if yes { EXIT_YES } else { EXIT_NO })
}

fn need_k(k: Option<u64>, from: &str) -> Result<u64> {
    k.ok_or_else(|| HappyError::invalid(format!("--k is required for --from {from}")))
}

fn build_reduction(args: &ReduceArgs) -> Result<ReductionOutput> {
    let text = read(&args.input)?;
    match args.from {
        SourceArg::SetPacking => {
            reduce_set_packing_to_mhv(&parse_set_system(&text)?, need_k(args.k, "set-packing")?)
        }
        SourceArg::Brds => reduce_brds_to_mhe(&parse_set_system(&text)?, need_k(args.k, "brds")?),
        SourceArg::Is => {
            let source = parse_instance(&text)?;
            let coloring = source_coloring(&source)?;
            reduce_colored_graph_to_mhv_subdivision(
                &source.graph,
                &coloring,
                args.k.unwrap_or(source.k),
            )
        }
        SourceArg::X3c => {
            let system = parse_set_system(&text)?;
            if system.universe_size % 3 != 0 {
                return Err(HappyError::invalid(format!(
                    "universe size {} is not a multiple of 3",
                    system.universe_size
                )));
            }
            reduce_x3c_to_mhe_above_guarantee(system.universe_size / 3, &system.sets)
        }
        SourceArg::SetPart => reduce_any_set_partitioning_to_mhe(&parse_set_system(&text)?),
    }
}

/// Proper coloring of an independent-set source: its color records when
/// every vertex has one, a private color per vertex when none has.
fn source_coloring(source: &Instance) -> Result<Vec<Color>> {
    let p = &source.precoloring;
    match p.uncolored_count() {
        0 => Ok(p.slots().iter().map(|c| c.expect("total")).collect()),
        u if u == source.n() => Ok(unique_coloring(source.n())),
        _ => Err(HappyError::invalid(
            "independent-set source must color every vertex or none",
        )),
    }
}

fn sidecar_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".map.json");
    PathBuf::from(name)
}

fn reduce(args: &ReduceArgs) -> Result<i32> {
    let output = build_reduction(args)?;
    write(&args.output, &serialize_instance(&output.instance))?;
    let sidecar = sidecar_path(&args.output);
    write(&sidecar, &format!("{:#}\n", output.sidecar()))?;
    println!(
        "wrote {} ({} {} vertices, {} edges, ell {}, k {}) and {}",
        args.output.display(),
        output.instance.kind,
        output.instance.n(),
        output.instance.graph.m(),
        output.instance.ell(),
        output.instance.k,
        sidecar.display()
    );
    if !args.verify {
        return Ok(EXIT_YES);
    }
    match verify_equivalence(&output, &args.limits.limits()) {
        Ok(eq) if eq.agrees() => {
            println!(
                "verified: source {}, gadget {} (optimum {})",
                yes_no(eq.source_yes),
                yes_no(eq.gadget_yes),
                eq.gadget_optimum
            );
            Ok(EXIT_YES)
        }
        Ok(eq) => Err(HappyError::Internal(format!(
            "equivalence failure: source {}, gadget {} (optimum {})",
            yes_no(eq.source_yes),
            yes_no(eq.gadget_yes),
            eq.gadget_optimum
        ))),
        Err(HappyError::ResourceLimit(msg)) => {
            eprintln!("warning: verification skipped: {msg}");
            Ok(EXIT_YES)
        }
        Err(e) => Err(e),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn bench(args: &BenchArgs) -> Result<i32> {
    let suite = load_suite(&args.suite)?;
    let base = args.suite.parent().unwrap_or(Path::new("."));
    let report = run_suite(&suite, base);
    let csv_path = args.out.with_extension("csv");
    let file = std::fs::File::create(&csv_path)
        .map_err(|e| HappyError::Io(format!("{}: {e}", csv_path.display())))?;
    write_csv(&report, std::io::BufWriter::new(file))?;
    let json_path = args.out.with_extension("json");
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| HappyError::Internal(e.to_string()))?;
    write(&json_path, &(text + "\n"))?;
    let errors = report.records.iter().filter(|r| r.error.is_some()).count();
    println!(
        "{} records ({} errors) written to {} and {}",
        report.records.len(),
        errors,
        csv_path.display(),
        json_path.display()
    );
    Ok(EXIT_YES)
}

fn generate(args: &GenerateArgs) -> Result<i32> {
    let kind = match args.kind {
        KindArg::Mhv => ProblemKind::Mhv,
        KindArg::Mhe => ProblemKind::Mhe,
    };
    let instance = generate_random(
        args.n,
        args.ell,
        args.edge_p,
        args.precolor,
        args.seed,
        kind,
    )?
    .with_k(args.k);
    let text = serialize_instance(&instance);
    match &args.output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(EXIT_YES)
}
