use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "relgor", version, about = "Relative Gorenstein computations for bound quiver algebras over prime fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Algebra file (JSON, or TOML), or `builtin:NAME` for A2, A3, A3/rad2, D4, Kronecker.
    #[arg(long, global = true, value_name = "FILE")]
    pub algebra: Option<String>,
    /// Subcategory file; `builtin:A3/C1` and `builtin:A3/C2` are bundled.
    #[arg(long, global = true, value_name = "FILE")]
    pub subcat: Option<String>,
    /// Atlas cache directory. Defaults to $RELGOR_CACHE_DIR when set.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache: Option<PathBuf>,
    #[arg(long = "mult-bound", global = true, value_name = "M", default_value_t = relgor::gorenstein::DEFAULT_MULT_BOUND)]
    pub mult_bound: usize,
    #[arg(long = "depth-bound", global = true, value_name = "D", default_value_t = relgor::gorenstein::DEFAULT_DEPTH_BOUND)]
    pub depth_bound: usize,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Gfp)]
    pub mode: ModeArg,
    /// Field characteristic, overriding the algebra file. Primes up to 97.
    #[arg(long, global = true, value_name = "INT", value_parser = parse_prime)]
    pub p: Option<u32>,
    /// Re-verify every certificate of the report from its JSON form.
    #[arg(long, global = true)]
    pub recheck: bool,
    /// Print a human-readable table on standard error.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Gfp,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    #[value(name = "rG")]
    RG,
    #[value(name = "lG")]
    LG,
    #[value(name = "G")]
    G,
    Cores,
    Res,
    /// `^⊥C`: Ext in every positive degree into C vanishes.
    Perp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Extensions,
    KerEpi,
    CokerMono,
    Summands,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    #[value(name = "example3.5")]
    Example35,
    #[value(name = "example3.2")]
    Example32,
    Section3,
    Section4,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the indecomposables with their tables.
    Indecs,
    /// Dimension of Hom(X, Y).
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Dimension of Ext^d(X, Y).
    Ext {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Membership of indecomposables in a class built from the subcategory.
    Member {
        #[arg(long, value_enum)]
        which: WhichArg,
        /// One object; every indecomposable when omitted.
        #[arg(long)]
        object: Option<String>,
    },
    /// Relative projective (or injective) dimension.
    Pd {
        #[arg(long)]
        object: Option<String>,
        /// Subcategory file to measure against; defaults to --subcat.
        #[arg(long = "relative-to", value_name = "FILE")]
        relative_to: Option<String>,
        /// Injective dimension instead.
        #[arg(long)]
        injective: bool,
        /// Claim `dim ≤ N` instead of finiteness.
        #[arg(long = "at-most", value_name = "N")]
        at_most: Option<usize>,
    },
    /// Closure of the subcategory under one operation.
    Closure {
        #[arg(long, value_enum)]
        property: PropertyArg,
    },
    /// Cotorsion pair checks for (U, V).
    Cotorsion {
        #[arg(long, value_name = "FILE")]
        u: String,
        #[arg(long, value_name = "FILE")]
        v: String,
    },
    /// Weak AB (or co-AB) context, given directly by (X, Y, ω) or built
    /// from a cotorsion pair (U, V).
    Abcontext {
        #[arg(long, value_name = "FILE")]
        x: Option<String>,
        #[arg(long, value_name = "FILE")]
        y: Option<String>,
        #[arg(long, value_name = "FILE")]
        omega: Option<String>,
        #[arg(long, value_name = "FILE")]
        u: Option<String>,
        #[arg(long, value_name = "FILE")]
        v: Option<String>,
        /// The dual (co-AB) version.
        #[arg(long)]
        co: bool,
    },
    /// Built-in regression suites on bundled algebras.
    VerifyPaper {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// Re-verify every certificate in a saved report.
    Recheck {
        #[arg(value_name = "REPORT")]
        report: PathBuf,
    },
}

fn parse_prime(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    let prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !prime || p > 97 {
        return Err(format!("{p} is not a prime ≤ 97"));
    }
    Ok(p)
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Indecs => "indecs",
            Command::Hom { .. } => "hom",
            Command::Ext { .. } => "ext",
            Command::Member { .. } => "member",
            Command::Pd { .. } => "pd",
            Command::Closure { .. } => "closure",
            Command::Cotorsion { .. } => "cotorsion",
            Command::Abcontext { .. } => "abcontext",
            Command::VerifyPaper { .. } => "verify-paper",
            Command::Recheck { .. } => "recheck",
        }
    }
}
