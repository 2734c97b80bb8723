use clap::{Args, Parser, Subcommand, ValueEnum};
use xorbounds::boolean::MAX_ARITY;

#[derive(Parser, Debug)]
#[command(name = "xorbounds", version, about = "Exact polynomial-threshold measures and communication bounds for XOR functions")]
pub struct Cli {
    /// Output format [default: json, or csv for `sweep`].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized sweeps and sampled suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: available cores].
    #[arg(long, global = true, env = "XORBOUNDS_JOBS")]
    pub jobs: Option<usize>,
    /// Largest arity accepted; for `verify`, the largest arity a suite visits.
    #[arg(long, global = true, env = "XORBOUNDS_MAX_N")]
    pub max_n: Option<u32>,
    /// Largest LP size (constraint-matrix entries) given to the solver.
    #[arg(long, global = true, env = "XORBOUNDS_MAX_LP")]
    pub max_lp: Option<usize>,
    /// Add wall-clock times to reports, which makes output nondeterministic.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute measures and bounds of functions.
    Measure(MeasureArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Evaluate a measure or bound over a parameter grid.
    Sweep(SweepArgs),
    /// Build a lift or projection of a function.
    Lift(LiftArgs),
    /// Bounds for MOD functions from closed forms (no arity cap).
    Modbound(ModboundArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Full,
    Symmetric,
}

impl From<MethodArg> for xorbounds::measures::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => xorbounds::measures::Method::Auto,
            MethodArg::Full => xorbounds::measures::Method::Full,
            MethodArg::Symmetric => xorbounds::measures::Method::Symmetric,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    /// Function spec, e.g. `parity:3`, `mod:3,{0};12`, `pred:+-+-+`.
    #[arg(long = "fn", required = true)]
    pub functions: Vec<String>,
    /// Every measure that applies to the function.
    #[arg(long)]
    pub all: bool,
    /// Measure to compute (repeatable).
    #[arg(long)]
    pub measure: Vec<String>,
    /// Bound to compute (repeatable).
    #[arg(long)]
    pub bound: Vec<String>,
    /// Error for approximate measures.
    #[arg(long, default_value = "1/3")]
    pub eps: String,
    /// Degree for `eps-d` and `wt-deg`.
    #[arg(long)]
    pub degree: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Gate communication cost for `circuit`.
    #[arg(long)]
    pub cost: Option<u64>,
    /// Coefficients dropped by `sufficient`: `greedy` or a list of masks.
    #[arg(long, default_value = "greedy")]
    pub drop: String,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Suite to run.
    pub suite: String,
    /// Run only this arity where a suite takes one.
    #[arg(long)]
    pub n: Option<u32>,
    /// Largest modulus for modulus-indexed suites.
    #[arg(long)]
    pub max_m: Option<u32>,
    /// Number of random instances where a suite samples.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Emit only failing checks and the summary.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// Odd-modulus sign-rank bound over m × n.
    Oddm,
    /// UPP bound over m × every non-simple A × n.
    Upp,
    /// Measures of every symmetric predicate on n bits.
    Symmetric,
    /// Measures of random functions on n bits (uses --seed).
    Random,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub grid: Grid,
    /// Moduli: a list `3,5,7` or inclusive range `3..9`.
    #[arg(long, default_value = "")]
    pub m: String,
    /// Arities: a list or inclusive range.
    #[arg(long, default_value = "")]
    pub n: String,
    /// Measures for the symmetric and random grids.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<String>,
    /// Functions per arity for the random grid.
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value = "1/3")]
    pub eps: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LiftKind {
    /// Selector lift f^op on 3n variables.
    Kp,
    /// f(x ⊕ y) on 2n variables.
    Xor,
    /// Split a symmetric F on 4n bits into f with f^op a projection of F.
    Symm,
    /// Symmetric F on 4n bits with D_F(2b + n) = D_f(b).
    Extend,
    /// Restriction family of a symmetric function and its best member.
    Liftsym,
    /// Threshold function whose projection is the selector lift of an LTF.
    Thr,
    /// Embed an LTF into a universal threshold function.
    Embed,
}

#[derive(Args, Debug, Clone)]
pub struct LiftArgs {
    #[arg(value_enum)]
    pub kind: LiftKind,
    #[arg(long = "fn", required = true)]
    pub function: String,
}

#[derive(Args, Debug, Clone)]
pub struct ModboundArgs {
    /// `mod:<m>,{<A>};<n>`, `cq:<n>` or `parity:<n>`; n is not capped.
    #[arg(long = "fn", required = true)]
    pub functions: Vec<String>,
    /// upp, circuit, odd, chain, forster, sufficient, claim, simple (repeatable).
    #[arg(long, default_values_t = vec!["upp".to_string()])]
    pub bound: Vec<String>,
    /// Gate communication cost for `circuit`.
    #[arg(long, default_value_t = 1)]
    pub cost: u64,
    /// Pointwise verification arity for `chain` (0 for symbolic only).
    #[arg(long, default_value_t = xorbounds::modfn::DEFAULT_CHAIN_ARITY)]
    pub verify_arity: u32,
    #[arg(long, default_value = "greedy")]
    pub drop: String,
}

/// Global settings after validation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Option<Format>,
    pub seed: u64,
    pub jobs: usize,
    pub max_n: Option<u32>,
    pub max_lp: usize,
    pub timing: bool,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, String> {
        if let Some(n) = cli.max_n {
            if n == 0 || n > MAX_ARITY {
                return Err(format!("--max-n must lie in [1, {MAX_ARITY}]"));
            }
        }
        let jobs = cli
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            return Err("--jobs must be positive".into());
        }
        let max_lp = cli.max_lp.unwrap_or(xorbounds::lp::DEFAULT_CAPACITY);
        if max_lp == 0 {
            return Err("--max-lp must be positive".into());
        }
        Ok(RunConfig {
            format: cli.format,
            seed: cli.seed,
            jobs,
            max_n: cli.max_n,
            max_lp,
            timing: cli.timing,
        })
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn arity_cap(&self) -> u32 {
        self.max_n.unwrap_or(MAX_ARITY)
    }
}

/// Parses `a,b,c`, an inclusive range `a..b`, or a mix such as `1,4..6`.
pub fn parse_list(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| format!("bad range start in {part:?}"))?;
            let b = b.trim().trim_start_matches('=');
            let b: u32 = b.parse().map_err(|_| format!("bad range end in {part:?}"))?;
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| format!("bad integer {part:?}"))?);
        }
    }
    Ok(out)
}
