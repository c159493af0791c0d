use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cli;

use cli::Outcome;

/// Workbench for finite residuated integral rigs with modal operators.
///
/// Exit status: 0 the property holds, 1 it fails (with a witness),
/// 2 usage or input error, 3 a search bound ran out.
#[derive(Parser, Debug)]
#[command(name = "ririg", version)]
pub struct Cli {
    /// Print a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel scans (output does not depend on it).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Seed for randomized runs; decimal or 0x-prefixed hex.
    #[arg(long, global = true, default_value = "0x8161", value_parser = parse_seed)]
    pub seed: u64,
    /// Replay the witness of a failing report and confirm it independently.
    #[arg(long, global = true)]
    pub verify_witness: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

#[derive(Args, Debug, Clone)]
pub struct CatalogArgs {
    /// Catalog file; built on the fly from --max-size/--modals when absent.
    #[arg(long, env = "RIRIG_CATALOG")]
    pub catalog: Option<PathBuf>,
    /// Largest algebra size when building a catalog.
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    /// Largest number of modal symbols (named m1, m2) when building.
    #[arg(long, default_value_t = 1)]
    pub modals: usize,
    /// Keep only algebras with this property: contractive, P, Cm or chain.
    #[arg(long, value_name = "PROPERTY")]
    pub require: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate an algebra file against the ririg and modal axioms.
    Check { file: PathBuf },
    /// List all I-filters.
    Filters { file: PathBuf },
    /// List all congruences, paired with their I-filters.
    Congruences {
        file: PathBuf,
        /// Cross-check against a scan of all partitions (size <= 5).
        #[arg(long)]
        direct: bool,
    },
    /// Generate the I-filter of a set by closure, block images and λ.
    GenFilter {
        file: PathBuf,
        /// Comma-separated elements (labels or indices).
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
    },
    /// Decide simplicity, with block and λ witnesses.
    Simple { file: PathBuf },
    /// Decide subdirect irreducibility, with block and λ witnesses.
    Si { file: PathBuf },
    /// Report structural properties and variety membership.
    Classify {
        file: PathBuf,
        #[arg(long, env = "RIRIG_CATALOG")]
        catalog: Option<PathBuf>,
    },
    /// Decide compatibility of a function by congruences, blocks and λ.
    Compatible {
        file: PathBuf,
        /// Function file `{"arity": k, "table": [...]}`.
        function: Option<PathBuf>,
        /// Block-length bound for the block route (unbounded by default).
        #[arg(long)]
        block_len: Option<usize>,
        /// Instead of a function file, test this many seeded random functions.
        #[arg(long, conflicts_with = "function")]
        random: Option<usize>,
        /// Arity of the random functions.
        #[arg(long, default_value_t = 1, requires = "random")]
        arity: usize,
    },
    /// Verify the join-of-terms representation of a compatible function.
    Laf {
        file: PathBuf,
        function: PathBuf,
        /// Points of B as `x,y;z,w`; all tuples by default.
        #[arg(long)]
        points: Option<String>,
    },
    /// Enumerate algebras up to isomorphism and optionally save a catalog.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        modals: usize,
        #[arg(long, value_name = "PROPERTY")]
        require: Vec<String>,
        /// Write the catalog here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a Hilbert proof and its soundness over a catalog.
    Prove {
        proof: PathBuf,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Decide Γ ⊨ φ over a catalog (countermodels are exact refutations).
    Entails {
        goal: String,
        /// A premise formula; repeatable.
        #[arg(long)]
        gamma: Vec<String>,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Search a deduction-detachment witness Γ ⊢ ∏ M_j(ψ_j) → ψ.
    Lddt {
        psi: String,
        #[arg(long)]
        gamma: Vec<String>,
        #[arg(long, required = true)]
        delta: Vec<String>,
        #[arg(long, default_value_t = 2)]
        block_len: usize,
        #[arg(long, default_value_t = 2)]
        product_len: usize,
        /// Search λ^l instead of blocks, with l up to --max-l.
        #[arg(long)]
        lambda: bool,
        #[arg(long, default_value_t = 1)]
        max_l: usize,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
    /// Check the congruence extension property of an algebra or a catalog.
    Cep {
        file: Option<PathBuf>,
        #[command(flatten)]
        catalog: CatalogArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(cli::USAGE);
        }
    }
    let outcome = cli::run(&cli).unwrap_or_else(Outcome::from_error);
    // A closed pipe (e.g. `| head`) is not an error worth a panic.
    let _ = if cli.json {
        writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&outcome.json).expect("serializable"))
    } else if outcome.code == cli::USAGE {
        writeln!(std::io::stderr(), "{}", outcome.text.trim_end())
    } else {
        writeln!(std::io::stdout(), "{}", outcome.text.trim_end())
    };
    ExitCode::from(outcome.code)
}
