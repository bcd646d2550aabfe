//! Command-line front end for `onng`: generators, order synthesis,
//! evaluation of a given order, and the exhaustive small-`n` search.

pub mod formats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use onng::line::ceil_log2;
use onng::random::{random_points, random_rank_metric, rng};
use onng::{
    best_order_exhaustive, build_onng, gen_hard_line, order_euclid, order_line, order_metric,
    path_order, problem1_search, InsertionOrder, OnngError, OrderedNNG, RankedMetric, VertexId,
};

use formats::PointsFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GUARD: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Guard(String),
    #[error(transparent)]
    Core(#[from] OnngError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Guard(_) | CliError::Core(OnngError::GuardExceeded { .. }) => EXIT_GUARD,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "onng", version, about = "Ordered nearest neighbor graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an input file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Synthesize an insertion order and report the resulting graph.
    Order(OrderArgs),
    /// Report the graph built by a given insertion order.
    Eval(EvalArgs),
    /// Check every rank metric on n points for a degree sum above 1.
    #[command(name = "search-problem1")]
    SearchProblem1(SearchArgs),
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// The doubling line set 0, 1, 3, 4, 9, 10, 12, 13, ... with 2^k points.
    HardLine {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=onng::line::MAX_HARD_LINE_K as i64))]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Points drawn uniformly from the unit cube.
    RandomPoints {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        d: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A uniformly random rank metric.
    RandomMetric {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Points file.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Metric file.
    #[arg(long)]
    pub metric: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Path,
    Line,
    Euclid,
    Ramsey,
    Brute,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::Path => "path",
            Strategy::Line => "line",
            Strategy::Euclid => "euclid",
            Strategy::Ramsey => "ramsey",
            Strategy::Brute => "brute",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct OrderArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_enum)]
    pub strategy: Strategy,
    /// Last vertex of the path (path strategy only; default 0).
    #[arg(long)]
    pub tail: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: Input,
    /// Order file, one vertex id per line.
    #[arg(long)]
    pub order: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    /// Worker threads (default: available cores). Does not affect the report.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    /// Only scan rank metrics that are minimal under relabeling.
    #[arg(long)]
    pub canonical: bool,
    /// Allow the full n = 5 scan (several million metrics).
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The graph an order produces, with what the strategy promised.
/// Fields serialize in key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub center: Option<VertexId>,
    pub guarantee: Option<u32>,
    pub indegrees: Vec<u32>,
    pub max_indegree: u32,
    pub order: Vec<VertexId>,
    pub strategy: String,
}

/// Output of a successful command.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub out: Option<PathBuf>,
    pub code: i32,
}

/// An input file after loading.
pub enum Space {
    Points(PointsFile),
    Metric(RankedMetric),
}

impl Space {
    pub fn load(input: &Input) -> Result<Self, CliError> {
        match (&input.points, &input.metric) {
            (Some(p), None) => Ok(Space::Points(PointsFile::parse(&read(p)?)?)),
            (None, Some(m)) => Ok(Space::Metric(formats::parse_metric(&read(m)?)?)),
            _ => Err(CliError::Usage(
                "give exactly one of --points and --metric".into(),
            )),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Space::Points(p) => p.len(),
            Space::Metric(m) => m.n(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The distance order. One-dimensional inputs are compared with exact
    /// rational arithmetic, so decimal coordinates never round into ties.
    pub fn metric(&self) -> Result<RankedMetric, CliError> {
        match self {
            Space::Metric(m) => Ok(m.clone()),
            Space::Points(p) if p.dim == 1 => {
                let (line, source) = p.to_line()?;
                Ok(line.metric().relabel(&source)?)
            }
            Space::Points(p) => Ok(p.to_point_set()?.metric()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Renders the graph as DOT: every vertex, then `child -> parent` edges in
/// order of the child id.
pub fn to_dot(g: &OrderedNNG) -> String {
    let mut out = String::from("digraph onng {\n");
    for v in 0..g.n() {
        writeln!(out, "  {v};").unwrap();
    }
    for (child, parent) in g.edges() {
        writeln!(out, "  {child} -> {parent};").unwrap();
    }
    out.push_str("}\n");
    out
}

fn report(
    metric: &RankedMetric,
    order: InsertionOrder,
    strategy: &str,
    center: Option<VertexId>,
    guarantee: Option<u32>,
    format: Format,
) -> Result<String, CliError> {
    // indegrees always come from a fresh build, not from the synthesizer
    let g = build_onng(metric, &order)?;
    Ok(match format {
        Format::Dot => to_dot(&g),
        Format::Json => {
            let r = EvalReport {
                center,
                guarantee,
                indegrees: g.indegrees().to_vec(),
                max_indegree: g.max_indegree(),
                order: order.into_vec(),
                strategy: strategy.to_owned(),
            };
            to_json(&r)
        }
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Order synthesis for one strategy, returning the report text.
pub fn order_command(
    space: &Space,
    strategy: Strategy,
    tail: Option<usize>,
    format: Format,
) -> Result<String, CliError> {
    let n = space.len();
    if tail.is_some() && strategy != Strategy::Path {
        return Err(CliError::Usage(
            "--tail only applies to the path strategy".into(),
        ));
    }
    let metric = space.metric()?;
    let (order, center, guarantee) = match strategy {
        Strategy::Path => (path_order(&metric, tail.unwrap_or(0))?, None, None),
        Strategy::Line => {
            let Space::Points(p) = space else {
                return Err(CliError::Input(
                    "the line strategy needs a points file".into(),
                ));
            };
            let (line, source) = p.to_line()?;
            let lo = order_line(&line)?;
            let ids = lo.order.as_slice().iter().map(|&v| source[v]).collect();
            (
                InsertionOrder::for_size(n, ids)?,
                Some(source[lo.center]),
                Some(ceil_log2(n)),
            )
        }
        Strategy::Euclid => {
            let Space::Points(p) = space else {
                return Err(CliError::Input(
                    "the euclid strategy needs a points file".into(),
                ));
            };
            let ps = p.to_point_set()?;
            let eo = order_euclid(&ps)?;
            let bound = eo.certified_bound(n, ps.dim());
            (eo.order, Some(eo.center), Some(bound))
        }
        Strategy::Ramsey => {
            let mo = order_metric(&metric)?;
            (mo.order, Some(mo.hub), Some(mo.k_achieved as u32 - 1))
        }
        Strategy::Brute => {
            let best = best_order_exhaustive(&metric)?;
            (best.order, None, Some(best.value))
        }
    };
    report(&metric, order, strategy.name(), center, guarantee, format)
}

pub fn eval_command(space: &Space, order_text: &str, format: Format) -> Result<String, CliError> {
    let metric = space.metric()?;
    let order = formats::parse_order(order_text, metric.n())?;
    report(&metric, order, "eval", None, None, format)
}

pub fn gen_command(cmd: &GenCommand) -> Result<(String, Option<PathBuf>), CliError> {
    let as_usize =
        |x: u64| usize::try_from(x).map_err(|_| CliError::Usage(format!("{x} is too large")));
    Ok(match cmd {
        GenCommand::HardLine { k, out } => {
            (formats::write_line_points(&gen_hard_line(*k)?), out.clone())
        }
        GenCommand::RandomPoints { n, d, seed, out } => {
            let ps = random_points(&mut rng(*seed), as_usize(*n)?, as_usize(*d)?)?;
            (formats::write_points(&ps), out.clone())
        }
        GenCommand::RandomMetric { n, seed, out } => {
            let m = random_rank_metric(&mut rng(*seed), as_usize(*n)?);
            (formats::write_metric(&m), out.clone())
        }
    })
}

pub fn search_command(args: &SearchArgs) -> Result<(String, i32), CliError> {
    let max = onng::problem1::MAX_METRIC_ENUM_N;
    if args.n > max {
        return Err(CliError::Guard(format!(
            "search-problem1 refuses n = {}: exhaustive enumeration is limited to n <= {max}",
            args.n
        )));
    }
    if args.n == max && !args.full {
        return Err(CliError::Guard(format!(
            "search-problem1 --n {max} scans millions of metrics; pass --full to run it"
        )));
    }
    let jobs = match args.jobs {
        Some(j) => j as usize,
        None => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    let r = problem1_search(args.n, args.canonical, jobs)?;
    let code = if r.counterexamples.is_empty() {
        EXIT_OK
    } else {
        EXIT_COUNTEREXAMPLE
    };
    Ok((to_json(&r), code))
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let (text, out, code) = match &cli.command {
        Command::Gen(g) => {
            let (text, out) = gen_command(g)?;
            (text, out, EXIT_OK)
        }
        Command::Order(a) => {
            let space = Space::load(&a.input)?;
            (
                order_command(&space, a.strategy, a.tail, a.format)?,
                a.out.clone(),
                EXIT_OK,
            )
        }
        Command::Eval(a) => {
            let space = Space::load(&a.input)?;
            (
                eval_command(&space, &read(&a.order)?, a.format)?,
                a.out.clone(),
                EXIT_OK,
            )
        }
        Command::SearchProblem1(a) => {
            let (text, code) = search_command(a)?;
            (text, a.out.clone(), code)
        }
    };
    Ok(Output { text, out, code })
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return EXIT_OK;
            }
            let text = e.to_string();
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return EXIT_USAGE;
        }
    };
    let result = execute(&cli).and_then(|o| {
        match &o.out {
            Some(path) => std::fs::write(path, &o.text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
            None => print!("{}", o.text),
        }
        Ok(o.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
