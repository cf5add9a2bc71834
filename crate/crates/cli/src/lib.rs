//! Command-line surface over the threshold, oracle, percolation, and
//! de Bruijn subsystems. Exact values print as fractions; every stochastic
//! subcommand takes a seed and reports it, and identical invocations produce
//! byte-identical output.

pub mod checks;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use serde::Serialize;
use shiftperc::debruijn::{
    alpha_local_search, alpha_mis_exact, alpha_ratio_report, alpha_subset_exact, AlphaResult,
    DicutError,
};
use shiftperc::exact::{format_rational, parse_rational, Rational, RationalParts};
use shiftperc::graphs::{GraphError, TruncatedGraph};
use shiftperc::pattern_oracle::{
    argmax_mod_descent_measure, best_pattern_coloring, descent_measure_exact, descent_measure_mc,
    ColoringSpec, OracleError,
};
use shiftperc::pattern_oracle::{ExactProbability, McEstimate};
use shiftperc::percolation::{path_stats, sample_extremal, sweep, PercolationError};
use shiftperc::relations::{
    edge_threshold, finite_path_bounds, map_width, vertex_threshold, OrderRelation, RelationError,
    RelationSet, ThresholdReport,
};

use checks::{Budget, CheckStatus};

/// Default master seed, printed by every stochastic subcommand.
pub const DEFAULT_SEED: u64 = 1729;

/// Environment variable overriding the default reproduction budget.
pub const BUDGET_ENV_VAR: &str = "SHIFTPERC_BUDGET";

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_VALIDATION: i32 = 2;
const EXIT_BUDGET: i32 = 3;

const EXIT_CODE_HELP: &str = "Exit codes: 0 success, 1 failed reproduction check, \
2 validation or usage error, 3 budget exceeded.";

#[derive(Parser)]
#[command(
    name = "shiftperc",
    about = "Exact path-existence thresholds in random shift-like graphs, \
             pattern-probability oracles, percolation sweeps, and de Bruijn \
             independence numbers",
    after_help = EXIT_CODE_HELP,
    version
)]
pub struct Cli {
    /// Master seed for all stochastic subcommands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cap the worker thread count (exact outputs do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
pub enum Command {
    /// Vertex and edge thresholds of the shift graph on k-tuples.
    #[command(after_help = EXIT_CODE_HELP)]
    Thresholds {
        #[arg(long = "shift-k")]
        shift_k: usize,
    },
    /// Order-relation utilities.
    #[command(after_help = EXIT_CODE_HELP)]
    Relations {
        #[command(subcommand)]
        command: RelationsCommand,
    },
    /// Closed-form threshold bounds.
    #[command(after_help = EXIT_CODE_HELP)]
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Exact pattern-probability oracles.
    #[command(after_help = EXIT_CODE_HELP)]
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Monte Carlo percolation on truncated graphs.
    #[command(after_help = EXIT_CODE_HELP)]
    Percolate {
        #[command(subcommand)]
        command: PercolateCommand,
    },
    /// Independence numbers of de Bruijn graphs.
    #[command(after_help = EXIT_CODE_HELP)]
    Debruijn {
        #[command(subcommand)]
        command: DebruijnCommand,
    },
    /// Run every reproduction check and emit a pass/fail bundle.
    #[command(after_help = EXIT_CODE_HELP)]
    Reproduce {
        /// full: everything; tiny: skip the heavy Monte Carlo checks.
        #[arg(long)]
        budget: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum RelationsCommand {
    /// One canonical representative per equivalence class of length k.
    #[command(after_help = EXIT_CODE_HELP)]
    Enumerate {
        #[arg(short = 'k')]
        k: usize,
    },
    /// Widths and thresholds of a relation read from a JSON file.
    #[command(after_help = EXIT_CODE_HELP)]
    W {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum BoundsCommand {
    /// Bounds for the threshold of length-p paths in the shift graph on
    /// k-tuples.
    #[command(after_help = EXIT_CODE_HELP)]
    FinitePath {
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'k')]
        k: u64,
    },
}

#[derive(Subcommand)]
pub enum OracleCommand {
    /// Exact descent measure of a coloring against a relation.
    #[command(after_help = EXIT_CODE_HELP)]
    ZMeasure(ZMeasureArgs),
    /// Exact measure of the argmax-mod-p window construction.
    #[command(after_help = EXIT_CODE_HELP)]
    Construction {
        #[arg(short = 'p')]
        p: u8,
        #[arg(short = 'k')]
        k: usize,
        /// Also run the Monte Carlo companion with this many samples.
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Search explicit pattern tables for the best descent value.
    #[command(after_help = EXIT_CODE_HELP)]
    Search {
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'p')]
        p: u8,
    },
}

#[derive(Args)]
pub struct ZMeasureArgs {
    /// Use the shift orbit of this width with the lex-max coloring.
    #[arg(long = "shift-w", conflicts_with_all = ["spec", "coloring"])]
    pub shift_w: Option<u64>,
    /// Relation JSON file (mutually exclusive with --shift-w).
    #[arg(long, requires = "coloring")]
    pub spec: Option<PathBuf>,
    /// Coloring JSON file.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// Also run the Monte Carlo companion with this many samples.
    #[arg(long)]
    pub mc_samples: Option<u64>,
}

#[derive(Subcommand)]
pub enum PercolateCommand {
    /// Frequency of length->=p paths over a lambda grid.
    #[command(after_help = EXIT_CODE_HELP)]
    Sweep(SweepArgs),
    /// Replicated extremal sampling with its structural guarantee.
    #[command(after_help = EXIT_CODE_HELP)]
    Extremal {
        #[arg(long = "shift-k")]
        shift_k: usize,
        #[arg(short = 'n')]
        n: u32,
        #[arg(short = 'p')]
        p: u8,
        #[arg(long, default_value_t = 1000)]
        replicas: u64,
    },
}

#[derive(Args)]
pub struct SweepArgs {
    /// Shift graph tuple length (or use --spec for a relation family file).
    #[arg(long = "shift-k", conflicts_with = "spec")]
    pub shift_k: Option<usize>,
    /// RelationSet JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(short = 'n')]
    pub n: u32,
    #[arg(short = 'p')]
    pub p: usize,
    /// Comma-separated lambda grid; entries may be rationals or decimals.
    #[arg(long)]
    pub lambdas: String,
    #[arg(long, default_value_t = 1000)]
    pub replicas: u32,
}

#[derive(Subcommand)]
pub enum DebruijnCommand {
    /// Independence number of B(d, k).
    #[command(after_help = EXIT_CODE_HELP)]
    Alpha {
        #[arg(short = 'd')]
        d: u32,
        #[arg(short = 'k')]
        k: u32,
        #[arg(long, value_enum, default_value_t = AlphaMethodArg::Auto)]
        method: AlphaMethodArg,
        /// Iterations for the local-search method.
        #[arg(long, default_value_t = 100_000)]
        iterations: u64,
    },
    /// alpha(d, k)/d^k against the p=2 finite-path bounds over a d range.
    #[command(after_help = EXIT_CODE_HELP)]
    Ratios {
        #[arg(short = 'k')]
        k: u32,
        #[arg(long, default_value_t = 2)]
        d_min: u32,
        #[arg(long)]
        d_max: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphaMethodArg {
    Auto,
    Subset,
    Mis,
    Local,
}

// ---------------------------------------------------------------------------
// Error handling
// ---------------------------------------------------------------------------

pub struct CliError {
    pub message: String,
    pub code: i32,
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_VALIDATION,
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: EXIT_BUDGET,
        }
    }
}

impl From<RelationError> for CliError {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::TooLarge(..) => CliError::budget(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::TooLarge(_) => CliError::budget(e.to_string()),
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::ArityTooLarge(..) | OracleError::BudgetExceeded(_) => {
                CliError::budget(e.to_string())
            }
            _ => CliError::validation(e.to_string()),
        }
    }
}

impl From<PercolationError> for CliError {
    fn from(e: PercolationError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<DicutError> for CliError {
    fn from(e: DicutError) -> Self {
        match e {
            DicutError::BudgetExceeded(_) => CliError::budget(e.to_string()),
            DicutError::MethodDisagreement { .. } => CliError {
                message: e.to_string(),
                code: EXIT_CHECK_FAILED,
            },
            DicutError::InvalidParameters(_) => CliError::validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::validation(format!("json error: {e}"))
    }
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success.
            let code = if e.use_stderr() {
                EXIT_VALIDATION
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // Best-effort: the pool can only be sized once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli) {
        Ok((body, code)) => {
            let out = if body.ends_with('\n') {
                body
            } else {
                format!("{body}\n")
            };
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &out) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_VALIDATION;
                }
            } else {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                if let Err(e) = stdout
                    .write_all(out.as_bytes())
                    .and_then(|_| stdout.flush())
                {
                    // A consumer hanging up early (e.g. `| head`) is fine.
                    if e.kind() == std::io::ErrorKind::BrokenPipe {
                        return EXIT_OK;
                    }
                    eprintln!("error: cannot write to stdout: {e}");
                    return EXIT_VALIDATION;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    let body = match &cli.command {
        Command::Thresholds { shift_k } => cmd_thresholds(*shift_k, cli.format)?,
        Command::Relations { command } => match command {
            RelationsCommand::Enumerate { k } => cmd_enumerate(*k, cli.format)?,
            RelationsCommand::W { spec } => cmd_relation_width(spec, cli.format)?,
        },
        Command::Bounds { command } => match command {
            BoundsCommand::FinitePath { p, k } => cmd_finite_path(*p, *k, cli.format)?,
        },
        Command::Oracle { command } => match command {
            OracleCommand::ZMeasure(args) => cmd_z_measure(args, cli.seed, cli.format)?,
            OracleCommand::Construction { p, k, mc_samples } => {
                cmd_construction(*p, *k, *mc_samples, cli.seed, cli.format)?
            }
            OracleCommand::Search { k, p } => cmd_search(*k, *p, cli.format)?,
        },
        Command::Percolate { command } => match command {
            PercolateCommand::Sweep(args) => cmd_sweep(args, cli.seed, cli.format)?,
            PercolateCommand::Extremal {
                shift_k,
                n,
                p,
                replicas,
            } => cmd_extremal(*shift_k, *n, *p, *replicas, cli.seed, cli.format)?,
        },
        Command::Debruijn { command } => match command {
            DebruijnCommand::Alpha {
                d,
                k,
                method,
                iterations,
            } => cmd_alpha(*d, *k, *method, *iterations, cli.seed, cli.format)?,
            DebruijnCommand::Ratios { k, d_min, d_max } => {
                cmd_ratios(*k, *d_min, *d_max, cli.seed, cli.format)?
            }
        },
        Command::Reproduce { budget } => {
            return cmd_reproduce(budget.as_deref(), cli.seed, cli.format);
        }
    };
    Ok((body, EXIT_OK))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn report_fraction(report: &ThresholdReport) -> String {
    match report.exact() {
        Some(r) => format_rational(r),
        None => {
            let (lo, hi) = report.bounds();
            format!("[{}, {}]", format_rational(lo), format_rational(hi))
        }
    }
}

fn cmd_thresholds(k: usize, format: Format) -> Result<String, CliError> {
    if k == 0 {
        return Err(CliError::validation("--shift-k must be at least 1"));
    }
    if k > 10_000 {
        return Err(CliError::budget("--shift-k beyond 10000 is not supported"));
    }
    let shift = OrderRelation::shift(k);
    let vertex = vertex_threshold(&shift);
    let edge = edge_threshold(&shift);
    #[derive(Serialize)]
    struct ThresholdsJson {
        k: usize,
        vertex: ThresholdReport,
        edge: ThresholdReport,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&ThresholdsJson { k, vertex: vertex.clone(), edge: edge.clone() })?,
        Format::Csv => {
            let mut out = String::from("kind,num,den,w\n");
            for report in [&vertex, &edge] {
                let value = report.exact().expect("point thresholds");
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    match report.kind {
                        shiftperc::relations::ThresholdKind::Vertex => "vertex",
                        _ => "edge",
                    },
                    value.numer(),
                    value.denom(),
                    report.width.unwrap_or(0),
                ));
            }
            out
        }
        Format::Table => format!(
            "shift graph on {k}-tuples\nvertex threshold: {} (w = {})\nedge threshold:   {} (w = {})",
            report_fraction(&vertex),
            vertex.width.unwrap_or(0),
            report_fraction(&edge),
            edge.width.unwrap_or(0),
        ),
    })
}

fn cmd_enumerate(k: usize, format: Format) -> Result<String, CliError> {
    let classes = RelationSet::enumerate_classes(k)?;
    Ok(match format {
        Format::Json => serde_json::to_string(&classes.to_json())?,
        Format::Csv => {
            let mut out = String::from("index,domain,images\n");
            for (i, rel) in classes.members().iter().enumerate() {
                let join = |v: &[u64]| {
                    v.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                };
                out.push_str(&format!(
                    "{i},{},{}\n",
                    join(rel.domain()),
                    join(rel.images())
                ));
            }
            out
        }
        Format::Table => {
            let mut out = format!("{} classes of length {k}\n", classes.len());
            for rel in classes.members() {
                out.push_str(&format!("{:?} -> {:?}\n", rel.domain(), rel.images()));
            }
            out
        }
    })
}

fn cmd_relation_width(path: &PathBuf, format: Format) -> Result<String, CliError> {
    let text = fs::read_to_string(path)?;
    let rel: OrderRelation = serde_json::from_str(&text)?;
    let full_width = map_width(&rel.self_map())?;
    let core = rel.core();
    let vertex = vertex_threshold(&rel);
    let edge = edge_threshold(&rel);
    #[derive(Serialize)]
    struct WidthJson {
        k: usize,
        w: u64,
        w_core: u64,
        core_size: usize,
        vertex: ThresholdReport,
        edge: ThresholdReport,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&WidthJson {
            k: rel.len(),
            w: full_width,
            w_core: core.width(),
            core_size: core.len(),
            vertex: vertex.clone(),
            edge: edge.clone(),
        })?,
        Format::Csv => format!(
            "k,w,w_core,vertex,edge\n{},{},{},{},{}\n",
            rel.len(),
            full_width,
            core.width(),
            report_fraction(&vertex),
            report_fraction(&edge),
        ),
        Format::Table => format!(
            "relation of length {}\nw (full map):  {}\nw (core):      {}\nvertex threshold: {}\nedge threshold:   {}",
            rel.len(),
            full_width,
            core.width(),
            report_fraction(&vertex),
            report_fraction(&edge),
        ),
    })
}

fn cmd_finite_path(p: u64, k: u64, format: Format) -> Result<String, CliError> {
    let report = finite_path_bounds(p, k)?;
    let (lo, hi) = report.bounds();
    #[derive(Serialize)]
    struct BoundsJson {
        lo: RationalParts,
        hi: RationalParts,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&BoundsJson {
            lo: lo.into(),
            hi: hi.into(),
        })?,
        Format::Csv => format!(
            "p,k,lo,hi\n{p},{k},{},{}\n",
            format_rational(lo),
            format_rational(hi)
        ),
        Format::Table => {
            if lo == hi {
                format!(
                    "threshold for paths of length {p} in the shift graph on {k}-tuples: {}",
                    format_rational(lo)
                )
            } else {
                format!(
                    "threshold for paths of length {p} in the shift graph on {k}-tuples: [{}, {}]",
                    format_rational(lo),
                    format_rational(hi)
                )
            }
        }
    })
}

fn cmd_z_measure(args: &ZMeasureArgs, seed: u64, format: Format) -> Result<String, CliError> {
    let (rel, coloring) = match (args.shift_w, &args.spec, &args.coloring) {
        (Some(w), None, None) => {
            if w < 2 {
                return Err(CliError::validation("--shift-w must be at least 2"));
            }
            (OrderRelation::shift(w as usize - 1), ColoringSpec::LexMax)
        }
        (None, Some(spec), Some(coloring)) => {
            let rel: OrderRelation = serde_json::from_str(&fs::read_to_string(spec)?)?;
            let coloring: ColoringSpec = serde_json::from_str(&fs::read_to_string(coloring)?)?;
            (rel, coloring)
        }
        _ => {
            return Err(CliError::validation(
                "provide either --shift-w W or --spec FILE with --coloring FILE",
            ))
        }
    };
    let exact = descent_measure_exact(&rel, &coloring)?;
    let mc = match args.mc_samples {
        Some(samples) => {
            if samples < 1000 {
                return Err(CliError::validation("--mc-samples must be at least 1000"));
            }
            Some(descent_measure_mc(&rel, &coloring, samples, seed)?)
        }
        None => None,
    };
    #[derive(Serialize)]
    struct MeasureJson {
        num: u64,
        den: u64,
        #[serde(skip_serializing_if = "Option::is_none")]
        mc: Option<McEstimate>,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&MeasureJson {
            num: exact.num,
            den: exact.den,
            mc,
        })?,
        Format::Csv => {
            let mut out = String::from("num,den,value\n");
            out.push_str(&format!(
                "{},{},{:.6}\n",
                exact.num,
                exact.den,
                exact.as_f64()
            ));
            if let Some(mc) = mc {
                out.push_str(&format!(
                    "# mc seed={} samples={} mean={:.6} ci={:.6}\n",
                    mc.seed, mc.samples, mc.mean, mc.ci_halfwidth
                ));
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "descent measure: {}/{} = {}",
                exact.num,
                exact.den,
                format_rational(exact.ratio())
            );
            if let Some(mc) = mc {
                out.push_str(&format!(
                    "\nmonte carlo (seed {}): {:.6} +/- {:.6} over {} samples",
                    mc.seed, mc.mean, mc.ci_halfwidth, mc.samples
                ));
            }
            out
        }
    })
}

fn cmd_construction(
    p: u8,
    k: usize,
    mc_samples: Option<u64>,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    if p < 1 || k < 2 {
        return Err(CliError::validation("construction needs p >= 1 and k >= 2"));
    }
    let exact = argmax_mod_descent_measure(p, k)?;
    let bounds = finite_path_bounds(p as u64, k as u64)?.bounds();
    let mc = match mc_samples {
        Some(samples) => {
            if samples < 1000 {
                return Err(CliError::validation("--mc-samples must be at least 1000"));
            }
            let rel = OrderRelation::shift(k - 1);
            let spec = ColoringSpec::ArgmaxMod { arity: k - 1, p };
            Some(descent_measure_mc(&rel, &spec, samples, seed)?)
        }
        None => None,
    };
    #[derive(Serialize)]
    struct ConstructionJson {
        num: u64,
        den: u64,
        lower: RationalParts,
        upper: RationalParts,
        #[serde(skip_serializing_if = "Option::is_none")]
        mc: Option<McEstimate>,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&ConstructionJson {
            num: exact.num,
            den: exact.den,
            lower: bounds.0.into(),
            upper: bounds.1.into(),
            mc,
        })?,
        Format::Csv => format!(
            "p,k,num,den,value,lower,upper\n{p},{k},{},{},{:.6},{},{}\n",
            exact.num,
            exact.den,
            exact.as_f64(),
            format_rational(bounds.0),
            format_rational(bounds.1),
        ),
        Format::Table => {
            let mut out = format!(
                "construction measure for p = {p}, k = {k}: {} (bounds [{}, {}])",
                format_rational(exact.ratio()),
                format_rational(bounds.0),
                format_rational(bounds.1),
            );
            if let Some(mc) = mc {
                out.push_str(&format!(
                    "\nmonte carlo (seed {}): {:.6} +/- {:.6} over {} samples",
                    mc.seed, mc.mean, mc.ci_halfwidth, mc.samples
                ));
            }
            out
        }
    })
}

fn cmd_search(k: usize, p: u8, format: Format) -> Result<String, CliError> {
    if p < 1 || k < 2 {
        return Err(CliError::validation("search needs p >= 1 and k >= 2"));
    }
    let result = best_pattern_coloring(k, p)?;
    let bounds = finite_path_bounds(p as u64, k as u64)?.bounds();
    #[derive(Serialize)]
    struct SearchJson {
        value: ExactProbability,
        exhaustive: bool,
        coloring: ColoringSpec,
        lower: RationalParts,
        upper: RationalParts,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&SearchJson {
            value: result.value,
            exhaustive: result.exhaustive,
            coloring: result.coloring.clone(),
            lower: bounds.0.into(),
            upper: bounds.1.into(),
        })?,
        Format::Csv => format!(
            "k,p,num,den,value,exhaustive\n{k},{p},{},{},{:.6},{}\n",
            result.value.num,
            result.value.den,
            result.value.as_f64(),
            result.exhaustive,
        ),
        Format::Table => format!(
            "best pattern-table coloring for k = {k}, p = {p}: {}\nsearch: {} (restricted to order-pattern colorings)\nbounds: [{}, {}]",
            format_rational(result.value.ratio()),
            if result.exhaustive { "exhaustive" } else { "heuristic best-found" },
            format_rational(bounds.0),
            format_rational(bounds.1),
        ),
    })
}

fn parse_lambda_grid(text: &str) -> Result<Vec<Rational>, CliError> {
    let mut grid = Vec::new();
    for part in text.split(',') {
        let value = parse_rational(part)
            .ok_or_else(|| CliError::validation(format!("bad lambda {part:?}")))?;
        if value < Rational::new(0, 1) || value > Rational::new(1, 1) {
            return Err(CliError::validation(format!(
                "lambda {part:?} outside [0, 1]"
            )));
        }
        grid.push(value);
    }
    if grid.is_empty() {
        return Err(CliError::validation("empty lambda grid"));
    }
    Ok(grid)
}

fn cmd_sweep(args: &SweepArgs, seed: u64, format: Format) -> Result<String, CliError> {
    let graph = match (&args.shift_k, &args.spec) {
        (Some(k), None) => TruncatedGraph::shift(*k, args.n)?,
        (None, Some(path)) => {
            let value: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
            let set = RelationSet::from_json(&value)?;
            TruncatedGraph::build(set, args.n)?
        }
        _ => {
            return Err(CliError::validation(
                "provide exactly one of --shift-k or --spec",
            ))
        }
    };
    if args.replicas < 1 {
        return Err(CliError::validation("--replicas must be at least 1"));
    }
    let grid = parse_lambda_grid(&args.lambdas)?;
    let report = sweep(&graph, &grid, args.p, args.replicas, seed);
    Ok(match format {
        Format::Json => serde_json::to_string(&report)?,
        Format::Csv => format!("# seed: {seed}\n{}", report.to_csv()),
        Format::Table => {
            let mut out = format!(
                "sweep over {} (p = {}, replicas = {}, seed {seed})\n",
                match graph.spec() {
                    shiftperc::graphs::GraphSpec::Shift =>
                        format!("shift graph k = {}, n = {}", graph.k(), graph.n()),
                    shiftperc::graphs::GraphSpec::Relations(_) =>
                        format!("relation family k = {}, n = {}", graph.k(), graph.n()),
                },
                report.p,
                args.replicas
            );
            out.push_str("lambda      freq      ci        incl      bound\n");
            for row in &report.rows {
                out.push_str(&format!(
                    "{:<10} {:.4}    {:.4}    {:.4}    {}\n",
                    format_rational(row.lambda),
                    row.freq_path_ge_p,
                    row.ci_halfwidth,
                    row.mean_inclusion,
                    format_rational(row.corollary_bound),
                ));
            }
            out
        }
    })
}

fn cmd_extremal(
    k: usize,
    n: u32,
    p: u8,
    replicas: u64,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    if replicas < 1 {
        return Err(CliError::validation("--replicas must be at least 1"));
    }
    let graph = TruncatedGraph::shift(k, n)?;
    let mut rates = Vec::with_capacity(replicas as usize);
    let mut longest_seen = 0usize;
    let mut violations = 0u64;
    for r in 0..replicas {
        let replica_seed = shiftperc::rng::derive(seed, &[shiftperc::rng::STREAM_REPLICA, r]);
        let sample = sample_extremal(&graph, p, replica_seed)?;
        let stats = path_stats(&graph, &sample, p as usize);
        longest_seen = longest_seen.max(stats.longest);
        if stats.longest >= p as usize {
            violations += 1;
        }
        rates.push(sample.included_count() as f64 / graph.vertex_count() as f64);
    }
    let mean = rates.iter().sum::<f64>() / rates.len() as f64;
    let expected = argmax_mod_descent_measure(p, k)?;
    #[derive(Serialize)]
    struct ExtremalJson {
        k: usize,
        n: u32,
        p: u8,
        replicas: u64,
        seed: u64,
        mean_inclusion: f64,
        expected_inclusion: ExactProbability,
        longest_path_seen: usize,
        length_p_violations: u64,
    }
    Ok(match format {
        Format::Json => serde_json::to_string(&ExtremalJson {
            k,
            n,
            p,
            replicas,
            seed,
            mean_inclusion: mean,
            expected_inclusion: expected,
            longest_path_seen: longest_seen,
            length_p_violations: violations,
        })?,
        Format::Csv => format!(
            "# seed: {seed}\nk,n,p,replicas,mean_inclusion,expected,longest_seen,violations\n{k},{n},{p},{replicas},{mean:.6},{},{longest_seen},{violations}\n",
            format_rational(expected.ratio()),
        ),
        Format::Table => format!(
            "extremal sampler on shift k = {k}, n = {n}, p = {p} (seed {seed})\nreplicas: {replicas}\nmean inclusion: {mean:.5} (construction measure {})\nlongest path seen: {longest_seen} edges\npaths of length {p}: {violations} (structurally impossible)",
            format_rational(expected.ratio()),
        ),
    })
}

fn cmd_alpha(
    d: u32,
    k: u32,
    method: AlphaMethodArg,
    iterations: u64,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    let result: AlphaResult = match method {
        AlphaMethodArg::Subset => alpha_subset_exact(d, k)?,
        AlphaMethodArg::Mis => alpha_mis_exact(d, k)?,
        AlphaMethodArg::Local => alpha_local_search(d, k, seed, iterations)?,
        AlphaMethodArg::Auto => {
            let ground = (d as u64).saturating_pow(k.saturating_sub(1));
            if ground <= shiftperc::debruijn::SUBSET_GROUND_LIMIT as u64 {
                alpha_subset_exact(d, k)?
            } else if (d as u64).saturating_pow(k) <= 256 {
                alpha_mis_exact(d, k)?
            } else {
                alpha_local_search(d, k, seed, iterations)?
            }
        }
    };
    // Only the local search consumes randomness; exact methods are
    // seed-independent and omit the header.
    let seed_header = if result.exact {
        String::new()
    } else {
        format!("# seed: {seed}\n")
    };
    Ok(match format {
        Format::Json => serde_json::to_string(&result)?,
        Format::Csv => format!(
            "{seed_header}d,k,alpha,method,exact\n{},{},{},{},{}\n",
            result.d,
            result.k,
            result.alpha,
            serde_json::to_value(result.method)?.as_str().unwrap_or("?"),
            result.exact,
        ),
        Format::Table => format!(
            "{seed_header}alpha({d},{k}) {} {} [{}{}]\nwitness ({} strings): {}",
            if result.exact { "=" } else { ">=" },
            result.alpha,
            serde_json::to_value(result.method)?.as_str().unwrap_or("?"),
            if result.exact {
                ", exact"
            } else {
                ", best found (seed above)"
            },
            result.witness.len(),
            result.witness.join(" "),
        ),
    })
}

fn cmd_ratios(
    k: u32,
    d_min: u32,
    d_max: u32,
    seed: u64,
    format: Format,
) -> Result<String, CliError> {
    let report = alpha_ratio_report(d_min, d_max, k, seed)?;
    let any_heuristic = report.rows.iter().any(|r| !r.exact);
    let seed_header = if any_heuristic {
        format!("# seed: {seed}\n")
    } else {
        String::new()
    };
    Ok(match format {
        Format::Json => serde_json::to_string(&report)?,
        Format::Csv => format!("{seed_header}{}", report.to_csv()),
        Format::Table => {
            let mut out = format!("{seed_header}independence ratios for k = {k}\n");
            out.push_str("d     alpha     exact   ratio     lambda        gap\n");
            for row in &report.rows {
                let lambda = if row.lambda_lo == row.lambda_hi {
                    format_rational(row.lambda_lo)
                } else {
                    format!(
                        "[{}, {}]",
                        format_rational(row.lambda_lo),
                        format_rational(row.lambda_hi)
                    )
                };
                out.push_str(&format!(
                    "{:<5} {:<9} {:<7} {:<9.5} {:<13} {:.5}\n",
                    row.d, row.alpha, row.exact, row.ratio, lambda, row.gap
                ));
            }
            out
        }
    })
}

fn cmd_reproduce(
    budget_flag: Option<&str>,
    seed: u64,
    format: Format,
) -> Result<(String, i32), CliError> {
    let budget_text = match budget_flag {
        Some(text) => text.to_string(),
        None => std::env::var(BUDGET_ENV_VAR).unwrap_or_else(|_| "full".into()),
    };
    let budget = Budget::parse(&budget_text)
        .ok_or_else(|| CliError::validation(format!("unknown budget {budget_text:?}")))?;
    let results = checks::run_all(seed, budget);
    let passed = results
        .iter()
        .filter(|c| c.status == CheckStatus::Pass)
        .count();
    let failed = results
        .iter()
        .filter(|c| c.status == CheckStatus::Fail)
        .count();
    let skipped = results
        .iter()
        .filter(|c| c.status == CheckStatus::Skip)
        .count();
    #[derive(Serialize)]
    struct ReproduceJson<'a> {
        seed: u64,
        budget: &'a str,
        passed: usize,
        failed: usize,
        skipped: usize,
        checks: &'a [checks::Check],
    }
    let body = match format {
        Format::Json => serde_json::to_string(&ReproduceJson {
            seed,
            budget: &budget_text,
            passed,
            failed,
            skipped,
            checks: &results,
        })?,
        Format::Csv => {
            let mut out = String::from("id,name,status,millis,detail\n");
            for c in &results {
                out.push_str(&format!(
                    "{},{},{},{},\"{}\"\n",
                    c.id,
                    c.name,
                    match c.status {
                        CheckStatus::Pass => "pass",
                        CheckStatus::Fail => "fail",
                        CheckStatus::Skip => "skip",
                    },
                    c.millis,
                    c.detail.replace('"', "'"),
                ));
            }
            out
        }
        Format::Table => {
            let mut out = format!("reproduction run (seed {seed}, budget {budget_text})\n");
            for c in &results {
                out.push_str(&format!(
                    "{} {:>2}. {} ({} ms)\n      {}\n",
                    match c.status {
                        CheckStatus::Pass => "PASS",
                        CheckStatus::Fail => "FAIL",
                        CheckStatus::Skip => "SKIP",
                    },
                    c.id,
                    c.name,
                    c.millis,
                    c.detail,
                ));
            }
            out.push_str(&format!(
                "{passed} passed, {failed} failed, {skipped} skipped\n"
            ));
            out
        }
    };
    let code = if failed > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    };
    Ok((body, code))
}

pub use checks::{Check, CheckStatus as Status};
