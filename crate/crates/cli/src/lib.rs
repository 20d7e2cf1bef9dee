//! Command-line adapter over `treesum-core`. Every subcommand parses flags, calls one
//! library entry point and writes its output; no scoring logic lives here.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use treesum_core::alignment::subtree_match_score;
use treesum_core::io::{load_tree_pair, parse_labeled_tree, tree_to_json};
use treesum_core::report::{self, Baseline, MetricSettings};
use treesum_core::{
    emit_summary_graph, evaluate, synth_generate, CandidatePool, Error, GreedyOptions, ScoreModel,
    SummaryDocument, WeightModel, WeightedTreePair,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

const DEFAULT_K: usize = 10;
const DEFAULT_BETA: usize = 50;
const SCALE_BETA: usize = 3;

#[derive(Parser, Debug)]
#[command(
    name = "treesum",
    version,
    about = "Summarize similarity and difference between two weighted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lazy greedy selection of similarity and difference representatives.
    Summarize(SelectArgs),
    /// Best k1/k2 split found by walking all combinations.
    SplitOpt(SelectArgs),
    /// Single-tree baseline on the common (minimum-weight) tree.
    Baseline(BaselineArgs),
    /// Exhaustive optimum (small trees only).
    Oracle(SelectArgs),
    /// Evaluation metrics for a saved summary.
    Metrics(MetricsArgs),
    /// Merge two one-weight trees, or score how a small tree embeds in a big one.
    Align(AlignArgs),
    /// Generate a synthetic tree pair.
    Gen(GenArgs),
    /// Render a summary as a DOT graph.
    Viz(VizArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// k = 10, beta = 3.
    Scale,
}

#[derive(Args, Debug)]
struct Common {
    /// Input file(s): one two-weight JSON tree, two one-weight JSON trees, or edges.csv weights.csv.
    #[arg(long = "input", short = 'i', required = true, num_args = 1..=2)]
    input: Vec<PathBuf>,
    /// Output path, `-` for standard output.
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct Budget {
    /// Number of representatives.
    #[arg(long)]
    k: Option<usize>,
    /// Entries kept per node in the similarity/difference distributions.
    #[arg(long)]
    beta: Option<usize>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

impl Budget {
    fn k(&self) -> usize {
        self.k.unwrap_or(DEFAULT_K)
    }

    fn beta(&self) -> usize {
        self.beta.unwrap_or(match self.preset {
            Some(Preset::Scale) => SCALE_BETA,
            None => DEFAULT_BETA,
        })
    }
}

#[derive(Args, Debug)]
struct Query {
    /// Seed for query sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of query nodes for the closeness metric.
    #[arg(long, default_value_t = 500)]
    queries: usize,
}

impl Query {
    fn settings(&self) -> MetricSettings {
        MetricSettings {
            seed: self.seed,
            queries: self.queries,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SummaryFormat {
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    budget: Budget,
    #[command(flatten)]
    query: Query,
    /// Only internal nodes may be representatives.
    #[arg(long)]
    internal_only: bool,
    /// Keep selecting zero-gain nodes until the budget is used.
    #[arg(long)]
    fill_budget: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: SummaryFormat,
}

impl SelectArgs {
    fn pool(&self) -> CandidatePool {
        if self.internal_only {
            CandidatePool::Internal
        } else {
            CandidatePool::All
        }
    }

    fn greedy_options(&self) -> GreedyOptions {
        GreedyOptions {
            pool: self.pool(),
            stop_at_zero_gain: !self.fill_budget,
            ..GreedyOptions::new(self.budget.k(), self.budget.beta())
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    Feq,
    Cagg,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    algo: Algo,
    #[arg(long, default_value_t = DEFAULT_K)]
    k: usize,
    #[command(flatten)]
    query: Query,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MetricFormat {
    Tsv,
    Json,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[command(flatten)]
    common: Common,
    /// Summary document produced by summarize, split-opt or oracle.
    #[arg(long)]
    summary: PathBuf,
    #[command(flatten)]
    query: Query,
    #[arg(long, value_enum, default_value = "tsv")]
    format: MetricFormat,
}

#[derive(Args, Debug)]
struct AlignArgs {
    #[command(flatten)]
    common: Common,
    /// Treat the second input as a small tree to locate inside the first.
    #[arg(long = "match")]
    match_subtree: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Uniform,
    Correlated,
    Hotspot,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 8)]
    branching: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    lo: u64,
    #[arg(long, default_value_t = 1000)]
    hi: u64,
    /// Correlation for the correlated model.
    #[arg(long, default_value_t = 0.8)]
    rho: f64,
    /// Number of diverging subtrees for the hotspot model.
    #[arg(long, default_value_t = 3)]
    hotspots: usize,
    /// Second-tree scale factor inside hotspots.
    #[arg(long, default_value_t = 0.1)]
    damp: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, short = 'o', default_value = "-")]
    output: String,
}

#[derive(Args, Debug)]
struct VizArgs {
    #[command(flatten)]
    common: Common,
    /// Summary document to render; without it a summary is computed with --k/--beta.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[command(flatten)]
    budget: Budget,
    #[arg(long)]
    internal_only: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn write_output(target: &str, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    if target == "-" {
        stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Data(Error::Io(e.to_string())))
    } else {
        fs::write(target, text).map_err(|e| Failure::Data(Error::Io(format!("{target}: {e}"))))
    }
}

fn read_summary(path: &PathBuf) -> Result<SummaryDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Data(Error::Io(format!("{}: {e}", path.display()))))?;
    Ok(SummaryDocument::from_json(&text)?)
}

fn load(common: &Common) -> Result<WeightedTreePair, Failure> {
    Ok(load_tree_pair(&common.input)?)
}

fn summary_to_dot(pair: &WeightedTreePair, doc: &SummaryDocument) -> Result<String, Failure> {
    let selection = doc.selection(pair)?;
    let model = ScoreModel::new(pair, doc.beta.max(1))?;
    Ok(emit_summary_graph(
        pair,
        &selection,
        model.simdif_scores(),
        &doc.gains(),
    )?)
}

fn emit_summary(
    args: &SelectArgs,
    pair: &WeightedTreePair,
    doc: &SummaryDocument,
    stdout: &mut dyn Write,
) -> Result<(), Failure> {
    let text = match args.format {
        SummaryFormat::Json => doc.to_json(),
        SummaryFormat::Dot => summary_to_dot(pair, doc)?,
    };
    write_output(&args.common.output, &text, stdout)
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Summarize(args) => {
            let pair = load(&args.common)?;
            let doc =
                report::summarize(&pair, &args.greedy_options(), Some(args.query.settings()))?;
            emit_summary(&args, &pair, &doc, stdout)
        }
        Command::SplitOpt(args) => {
            let pair = load(&args.common)?;
            let doc = report::split_opt(
                &pair,
                args.budget.k(),
                args.budget.beta(),
                args.pool(),
                Some(args.query.settings()),
            )?;
            emit_summary(&args, &pair, &doc, stdout)
        }
        Command::Oracle(args) => {
            let pair = load(&args.common)?;
            let doc = report::oracle(
                &pair,
                args.budget.k(),
                args.budget.beta(),
                Some(args.query.settings()),
            )?;
            emit_summary(&args, &pair, &doc, stdout)
        }
        Command::Baseline(args) => {
            let pair = load(&args.common)?;
            let algo = match args.algo {
                Algo::Feq => Baseline::Feq,
                Algo::Cagg => Baseline::Cagg,
            };
            let doc = report::baseline(&pair, algo, args.k, Some(args.query.settings()))?;
            write_output(&args.common.output, &doc.to_json(), stdout)
        }
        Command::Metrics(args) => {
            let pair = load(&args.common)?;
            let selection = read_summary(&args.summary)?.selection(&pair)?;
            let report = evaluate(&selection, &pair, args.query.seed, args.query.queries)?;
            let text = match args.format {
                MetricFormat::Tsv => report.to_tsv(),
                MetricFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&report).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            write_output(&args.common.output, &text, stdout)
        }
        Command::Align(args) => {
            if args.common.input.len() != 2 {
                return Err(Failure::Usage(
                    "align needs exactly two --input files".into(),
                ));
            }
            let text = if args.match_subtree {
                let read = |p: &PathBuf| -> Result<_, Failure> {
                    let t = fs::read_to_string(p)
                        .map_err(|e| Failure::Data(Error::Io(format!("{}: {e}", p.display()))))?;
                    Ok(parse_labeled_tree(&t, &p.display().to_string())?)
                };
                let big = read(&args.common.input[0])?;
                let small = read(&args.common.input[1])?;
                let m = subtree_match_score(&big, &small)?;
                format!(
                    "coverage\t{}\nweight_agreement\t{}\nlevel_offset\t{}\n",
                    m.coverage, m.weight_agreement, m.level_offset
                )
            } else {
                tree_to_json(&load(&args.common)?)
            };
            write_output(&args.common.output, &text, stdout)
        }
        Command::Gen(args) => {
            let model = match args.model {
                Model::Uniform => WeightModel::Uniform {
                    lo: args.lo,
                    hi: args.hi,
                },
                Model::Correlated => WeightModel::Correlated {
                    lo: args.lo,
                    hi: args.hi,
                    rho: args.rho,
                },
                Model::Hotspot => WeightModel::Hotspot {
                    lo: args.lo,
                    hi: args.hi,
                    hotspots: args.hotspots,
                    damp: args.damp,
                },
            };
            let pair = synth_generate(args.nodes, args.branching, model, args.seed)?;
            write_output(&args.output, &tree_to_json(&pair), stdout)
        }
        Command::Viz(args) => {
            let pair = load(&args.common)?;
            let doc = match &args.summary {
                Some(path) => read_summary(path)?,
                None => {
                    let opts = GreedyOptions {
                        pool: if args.internal_only {
                            CandidatePool::Internal
                        } else {
                            CandidatePool::All
                        },
                        ..GreedyOptions::new(args.budget.k(), args.budget.beta())
                    };
                    report::summarize(&pair, &opts, None)?
                }
            };
            let dot = summary_to_dot(&pair, &doc)?;
            write_output(&args.common.output, &dot, stdout)
        }
    }
}

/// Runs one command and returns the process exit code: 0 on success, 1 on usage errors,
/// 2 on data errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}
