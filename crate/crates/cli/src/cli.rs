use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "gauss-sums",
    version,
    about = "Exact Gauss sums over GL_n(F_q) and SL_n(F_q)",
    long_about = "Evaluates Gauss sums over GL_n(F_q) and SL_n(F_q) from their closed forms,
counts invertible matrices of a given trace, and checks every formula against
brute-force enumeration.

Field elements are written as integers in [0, q): the element
c_0 + c_1 x + ... of F_p[x]/(f) is encoded as c_0 + c_1 p + ....
Brute-force enumeration is capped at GAUSS_SUMS_BUDGET candidate matrices
(default 20000000)."
)]
pub struct Cli {
    /// Write output here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sum of χ(det X) λ(tr(U^T X)) over GL_n(F_q)
    EvalGl(EvalGlArgs),
    /// Sum of λ(tr(U^T X)) over SL_n(F_q)
    EvalSl(EvalArgs),
    /// Number of X in GL_n(F_q) with tr(X) = β
    CountTrace(CountTraceArgs),
    /// Run closed forms against brute force over a grid of (n, q)
    Verify(VerifyArgs),
    /// Time closed forms, oracles and Kloosterman evaluation as CSV
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FieldArgs {
    /// Characteristic of the field
    #[arg(long)]
    pub p: u64,

    /// Degree over F_p
    #[arg(long, default_value_t = 1)]
    pub e: u32,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    /// Matrix size; defaults to the number of rows of --matrix
    #[arg(long)]
    pub n: Option<usize>,

    /// Row-major JSON matrix of element encodings, e.g. [[1,0],[0,1]]
    #[arg(long)]
    pub matrix: String,

    /// Encoding of a in λ_a(x) = λ_1(a x)
    #[arg(long = "lambda", default_value_t = 1)]
    pub lambda: u64,

    /// Also sum over the whole group and compare
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct EvalGlArgs {
    #[command(flatten)]
    pub eval: EvalArgs,

    /// Index j of χ_j, relative to the field's generator
    #[arg(long, default_value_t = 0)]
    pub chi: u64,
}

#[derive(Args, Debug)]
pub struct CountTraceArgs {
    #[command(flatten)]
    pub field: FieldArgs,

    #[arg(long)]
    pub n: usize,

    /// Encoding of β; every β when omitted
    #[arg(long)]
    pub beta: Option<u64>,

    /// Also count by enumeration
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    pub max_n: usize,

    /// Comma-separated field orders (prime powers)
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    pub fields: Vec<u64>,

    /// Comma-separated character indices
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub chi: Vec<u64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random matrices per nonzero rank
    #[arg(long, default_value_t = 5)]
    pub samples: usize,

    /// Random (U, P, Q) triples per grid point
    #[arg(long, default_value_t = 10)]
    pub invariance_trials: usize,

    /// Worker threads; defaults to the available parallelism
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,

    /// Comma-separated field orders (prime powers)
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub fields: Vec<u64>,

    /// Timings per operation; the fastest is reported
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
}
