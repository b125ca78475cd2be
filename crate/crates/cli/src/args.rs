use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "logkernel", version, about = "Logarithmic class groups, wild kernel reports and Λ-module levels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// The prime ℓ.
    #[arg(long, global = true, default_value_t = 3)]
    pub ell: u64,
    /// Starting ℓ-adic precision.
    #[arg(long, global = true, default_value_t = 8)]
    pub precision: u32,
    /// Precision cap for the stabilization loop.
    #[arg(long, global = true, env = "LOGKERNEL_MAX_PRECISION", default_value_t = 64)]
    pub max_precision: u32,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV (scans only).
    #[arg(long, global = true)]
    pub csv: bool,
    /// Seed for sampled scans.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl GlobalOpts {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Logarithmic class group of Q(√d), or of Q when d = 1.
    Field {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Wild kernel quotient for Q(√d) and the twist i.
    Wk {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        i: i64,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// One row per squarefree d in a range.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        dmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        dmax: i64,
        #[arg(long, value_enum, default_value_t = ReportKind::Reflection)]
        report: ReportKind,
        /// Twist index for triviality reports.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        i: i64,
        /// Scan a random sample of this many d instead of the whole range.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Criteria for a cyclic cubic field of given conductor.
    Cubic {
        #[arg(long)]
        conductor: u64,
        /// Defining polynomial X^3 + aX^2 + bX + c given as "a,b,c".
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Which field of that conductor, when there are several.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
        i: i64,
    },
    /// Levels, invariants and twists of a presented Λ-module.
    Lambda {
        /// JSON presentation file.
        #[arg(long)]
        file: PathBuf,
        /// Highest level n.
        #[arg(long, default_value_t = 3)]
        levels: u32,
        /// Capitulation is measured from level n to level n + shift.
        #[arg(long, default_value_t = 1)]
        shift: u32,
        /// κ(γ) as an integer ≡ 1 mod ℓ; defaults to 1 + ℓ.
        #[arg(long)]
        kappa: Option<i64>,
        #[arg(long, allow_hyphen_values = true, default_value_t = -4)]
        twist_min: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 4)]
        twist_max: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Reflection,
    Triviality,
    Gross,
}
