use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Integral Value Transformations, p-th pre-images and IVT-routed networks.
///
/// All integers are read and written as decimal text of any size.
#[derive(Debug, Parser)]
#[command(name = "ivt", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Base-p digits of an integer, or the value of a digit string
    Digits(DigitsArgs),
    /// Census, enumeration, or classification of rules
    Rules(RulesArgs),
    /// One application of a rule
    Apply(ApplyArgs),
    /// k applications of a rule, listing every step
    Iterate(IterateArgs),
    /// Follow a value until it reaches 0
    Trajectory(TrajectoryArgs),
    /// p-th pre-image of N (k-fold with --k)
    Preimage(PreimageArgs),
    /// Build a network design
    Design(DesignArgs),
    /// Optimal node pairs of a design
    Pairs(PairsArgs),
    /// Route a scenario of messages over a design
    Simulate(SimulateArgs),
    /// Pre-image verification sweep, or validation of a design file
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignFormat {
    Text,
    Json,
    Dot,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    All,
    Bijective,
    CollatzLike,
    BijectiveCollatz,
    BijectiveNonCollatz,
    NonCollatz,
}

#[derive(Debug, Args)]
#[group(id = "rule_spec", required = true, multiple = false)]
pub struct RuleSpec {
    /// Rule index (decimal)
    #[arg(long)]
    pub rule: Option<String>,
    /// Digit map f(0),f(1),…,f(p-1)
    #[arg(long, value_delimiter = ',')]
    pub rule_map: Option<Vec<u8>>,
}

#[derive(Debug, Args)]
#[group(id = "rule_opt", required = false, multiple = false)]
pub struct OptRuleSpec {
    /// Rule index (decimal)
    #[arg(long)]
    pub rule: Option<String>,
    /// Digit map f(0),f(1),…,f(p-1)
    #[arg(long, value_delimiter = ',')]
    pub rule_map: Option<Vec<u8>>,
}

#[derive(Debug, Args)]
pub struct DigitsArgs {
    #[arg(long = "p")]
    pub p: u32,
    /// Decimal value to convert
    #[arg(long, conflicts_with = "parse", required_unless_present = "parse")]
    pub x: Option<String>,
    /// Base-p digit string (most significant first) to evaluate
    #[arg(long)]
    pub parse: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RulesArgs {
    #[arg(long = "p")]
    pub p: u32,
    /// List the indices of every rule in this class
    #[arg(long, value_enum, conflicts_with = "rule_opt")]
    pub class: Option<ClassArg>,
    #[command(flatten)]
    pub rule: OptRuleSpec,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[command(flatten)]
    pub rule: RuleSpec,
    #[arg(long)]
    pub x: String,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[command(flatten)]
    pub rule: RuleSpec,
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub k: usize,
    /// Also print base-p digits per step
    #[arg(long)]
    pub digits: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[command(flatten)]
    pub rule: RuleSpec,
    #[arg(long)]
    pub x: String,
    /// Step cap; defaults to p·|x|
    #[arg(long)]
    pub cap: Option<usize>,
    /// Also print base-p digits per step
    #[arg(long)]
    pub digits: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PreimageArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[command(flatten)]
    pub rule: RuleSpec,
    #[arg(long)]
    pub n: String,
    /// Number of chained pre-images
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Either a design file or the parameters to build one.
#[derive(Debug, Args)]
pub struct DesignSource {
    /// Design JSON written by `ivt design --format json`
    #[arg(long, conflicts_with_all = ["p", "rule_opt", "v", "phases", "root"])]
    pub design: Option<PathBuf>,
    #[arg(long = "p")]
    pub p: Option<u32>,
    #[command(flatten)]
    pub rule: OptRuleSpec,
    /// Parallel lines
    #[arg(long)]
    pub v: Option<usize>,
    /// Phases per line
    #[arg(long)]
    pub phases: Option<usize>,
    /// Explicit line roots (replaces --v)
    #[arg(long, value_delimiter = ',', conflicts_with = "v")]
    pub root: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[command(flatten)]
    pub rule: RuleSpec,
    /// Parallel lines
    #[arg(long, required_unless_present = "root")]
    pub v: Option<usize>,
    /// Phases per line
    #[arg(long)]
    pub phases: usize,
    /// Explicit line roots (replaces --v)
    #[arg(long, value_delimiter = ',', conflicts_with = "v")]
    pub root: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: DesignFormat,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[command(flatten)]
    pub source: DesignSource,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: DesignSource,
    /// Scenario JSON: {"sources": ["47", "15", ...]}
    #[arg(long, conflicts_with = "sources", required_unless_present = "sources")]
    pub scenario: Option<PathBuf>,
    /// Comma-separated source addresses
    #[arg(long, value_delimiter = ',')]
    pub sources: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Radix for the pre-image sweep
    #[arg(long = "p", required_unless_present = "design")]
    pub p: Option<u32>,
    /// Restrict the sweep to one rule; default is every bijective Collatz-like rule
    #[command(flatten)]
    pub rule: OptRuleSpec,
    /// Largest N of the sweep
    #[arg(long, default_value_t = 2000)]
    pub max: u64,
    /// Validate this design file instead of sweeping
    #[arg(long, conflicts_with_all = ["p", "rule_opt"])]
    pub design: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}
