use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "selfless",
    version,
    about = "Exact group-algebra norms, retraction checks and Cayley-tree geometry for free groups"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Group as a free product of free factors, e.g. `a|b` or `x|y|a`.
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Maximum number of terms or words any single operation may produce.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    pub budget: u64,

    /// Cap on coefficient numerator and denominator sizes, in bits.
    #[arg(long, global = true)]
    pub max_coeff_bits: Option<u64>,

    /// Largest power in the doubling schedule; a power of two.
    #[arg(long, global = true, default_value_t = 4)]
    pub m_max: u64,

    /// Binary digits kept in outward-rounded bounds.
    #[arg(long, global = true, default_value_t = 64)]
    pub precision_bits: u32,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory for cached powers.
    #[arg(long, global = true, env = "SELFLESS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Append wall-clock time and cache statistics (outside the hashed body).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Certified lower and upper bounds on the reduced operator norm.
    Norm(NormArgs),
    /// Retractions a -> h g h^-1: injectivity, fibers, growth, transfer, products.
    Selfless(SelflessArgs),
    /// Cayley-tree geometry: translation lengths, projections, constants, paths.
    Tree(TreeArgs),
    /// Size and optionally the words of a ball.
    Ball(BallArgs),
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    /// Element as `c1*w1 + c2*w2 + ...`.
    #[arg(long, allow_hyphen_values = true)]
    pub element: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelflessAction {
    Injectivity,
    Fibers,
    Growth,
    Transfer,
    Product,
}

#[derive(Debug, Clone, Args)]
pub struct SelflessArgs {
    /// Defaults to `injectivity`.
    #[arg(value_enum)]
    pub action: Option<SelflessAction>,

    /// The word g of the retraction.
    #[arg(long)]
    pub g: Option<String>,

    #[arg(long, default_value_t = 1)]
    pub n: u64,

    /// A generator of the factor H; defaults to the first factor other than those of g and a.
    #[arg(long)]
    pub h: Option<String>,

    /// The free letter a; defaults to the last single-generator factor.
    #[arg(long)]
    pub a: Option<String>,

    /// Arbitrary substitution `gen=word;...` instead of a retraction.
    #[arg(long, conflicts_with = "g")]
    pub map: Option<String>,

    /// Ball radius for injectivity and fibers; defaults to n.
    #[arg(long)]
    pub radius: Option<usize>,

    #[arg(long)]
    pub check_injectivity: bool,

    /// Largest n for the growth profile.
    #[arg(long, default_value_t = 8)]
    pub radius_max: usize,

    /// Element z with ||z||_1 = 1 for the transfer experiment.
    #[arg(long, allow_hyphen_values = true)]
    pub element: Option<String>,

    #[arg(long, default_value = "1/10")]
    pub epsilon: String,

    /// Powers m for the transfer experiment, with n = 2mR.
    #[arg(long, default_value = "1,2,4", value_delimiter = ',')]
    pub ms: Vec<u64>,

    /// Explicit (m, n) pairs `m:n,...`, overriding --ms.
    #[arg(long)]
    pub pairs: Option<String>,

    /// Words s_0,...,s_k of a product s_0 a^p_1 s_1 ... a^p_k s_k.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,

    /// Exponents p_1,...,p_k.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeAction {
    Length,
    Stable,
    Project,
    Cascade,
    Path,
    Search,
}

#[derive(Debug, Clone, Args)]
pub struct TreeArgs {
    #[arg(value_enum)]
    pub action: TreeAction,

    #[arg(long)]
    pub g: Option<String>,

    /// One word for `project`, a comma-separated list for `path`.
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,

    /// Exponents for `path`, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<String>,

    /// Powers sampled by `stable`.
    #[arg(long, default_value = "1,2,4,8,16,32", value_delimiter = ',')]
    pub samples: Vec<u64>,

    #[arg(long)]
    pub lambda: Option<String>,

    /// |g| for `cascade`.
    #[arg(long)]
    pub glen: Option<String>,

    /// [g] for `cascade`.
    #[arg(long, default_value = "1")]
    pub displacement: String,

    /// `default`, `trivial` or a path to a key=value provider file.
    #[arg(long, default_value = "default")]
    pub provider: String,

    #[arg(long, default_value_t = 2)]
    pub h_radius: usize,

    #[arg(long, default_value_t = 2)]
    pub m: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BallArgs {
    #[arg(long)]
    pub radius: usize,

    /// Include the words themselves.
    #[arg(long)]
    pub list: bool,
}
