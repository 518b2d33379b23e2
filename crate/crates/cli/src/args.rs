use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fragsat_core::corpus::Split;
use fragsat_core::decide::Method;
use fragsat_core::Fragment;

#[derive(Parser, Debug)]
#[command(name = "fragsat", version, about = "Satisfiability datasets for controlled-English fragments")]
pub struct Cli {
    /// Print the sentence grammar as markdown and exit.
    #[arg(long)]
    pub dump_grammar: bool,

    #[command(flatten)]
    pub shared: Shared,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Shared {
    /// Master seed for all randomness.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Prover command template containing `{file}` (default: $FRAGSAT_PROVER, then `vampire` on PATH).
    #[arg(long, global = true)]
    pub prover: Option<String>,

    /// Prover time limit in seconds.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub timeout: f64,

    /// Maximum number of concurrent prover processes.
    #[arg(long, global = true, default_value_t = 4)]
    pub jobs: usize,

    /// Output path (stdout when omitted; a directory for `tptp`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Vocabulary file for the train split.
    #[arg(long, global = true)]
    pub vocab_train: Option<PathBuf>,

    /// Vocabulary file for the eval split.
    #[arg(long, global = true)]
    pub vocab_eval: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a labelled random corpus.
    Gen(GenArgs),
    /// Build constructed instances of controlled difficulty.
    Construct(ConstructArgs),
    /// Re-decide the records of a corpus.
    Decide(DecideArgs),
    /// Print corpus statistics as JSON.
    Stats(InArgs),
    /// Write one TPTP problem per record.
    Tptp(InArgs),
    /// Parse English sentences into normal-form terms.
    Parse(TextArgs),
    /// Render normal-form terms as English.
    Realize(TextArgs),
    /// Print the sentence grammar as markdown.
    DumpGrammar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Graph,
    Monadic,
    Oracle,
    Atp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Graph => Method::Graph,
            MethodArg::Monadic => Method::Monadic,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Atp => Method::Atp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Train,
    Eval,
}

impl From<SplitArg> for Split {
    fn from(s: SplitArg) -> Split {
        match s {
            SplitArg::Train => Split::Train,
            SplitArg::Eval => Split::Eval,
        }
    }
}

fn fragment(s: &str) -> Result<Fragment, String> {
    s.parse()
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_parser = fragment)]
    pub fragment: Fragment,
    #[arg(long, default_value_t = 15)]
    pub min_s: usize,
    #[arg(long, default_value_t = 30)]
    pub max_s: usize,
    #[arg(long, default_value_t = 500)]
    pub per_size: usize,
    /// Labeller (default: graph for s/sdag, monadic for srel/srelneg, atp for r/rdag).
    #[arg(long, value_enum)]
    pub label_with: Option<MethodArg>,
    /// Domain bound for the oracle labeller (default: number of existential sentences).
    #[arg(long)]
    pub max_domain: Option<usize>,
    #[arg(long, value_enum, default_value_t = SplitArg::Train)]
    pub split: SplitArg,
    /// Keep only unsatisfiable instances with proof length at least this, rebalancing satisfiable ones.
    #[arg(long)]
    pub l_min: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub p_u: Option<f64>,
    #[arg(long)]
    pub p_sbar: Option<f64>,
    #[arg(long)]
    pub p_obar: Option<f64>,
    #[arg(long)]
    pub p_pbar: Option<f64>,
    #[arg(long)]
    pub p_r: Option<f64>,
    #[arg(long)]
    pub p_vbar: Option<f64>,
    #[arg(long)]
    pub p_uu: Option<f64>,
    #[arg(long)]
    pub p_rbar: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub v: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LabelArg {
    Sat,
    Unsat,
    Balanced,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// `sdag` (chains) or `r` (∀∀-configurations).
    #[arg(long, value_parser = fragment)]
    pub fragment: Fragment,
    #[arg(long)]
    pub d_min: usize,
    #[arg(long)]
    pub d_max: usize,
    #[arg(long, default_value_t = 20)]
    pub s: usize,
    #[arg(long)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = LabelArg::Balanced)]
    pub label: LabelArg,
    /// Also sample mutual-opposite configurations.
    #[arg(long)]
    pub mutual: bool,
    /// Emit satisfiable twins sharing the padding of each unsatisfiable instance.
    #[arg(long)]
    pub paired: bool,
    #[arg(long, value_enum, default_value_t = SplitArg::Train)]
    pub split: SplitArg,
}

#[derive(Args, Debug)]
pub struct DecideArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Domain bound for the oracle (default: number of existential sentences).
    #[arg(long)]
    pub max_domain: Option<usize>,
}

#[derive(Args, Debug)]
pub struct InArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct TextArgs {
    /// Input file (stdin when omitted); one sentence or term per line.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Inline input instead of a file.
    #[arg(long)]
    pub text: Option<String>,
    #[arg(long, value_enum, default_value_t = SplitArg::Train)]
    pub split: SplitArg,
}
