//! `gridfree`: build, certify and inspect sparse linear hypergraphs.
//!
//! Exit codes: 0 every requested check passed, 1 a check failed (a witness
//! is emitted), 2 a search ran out of budget, 3 usage or input error.

mod args;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use args::Slopes;
use gridfree_core::{ConfigKind, Prob};

#[derive(Parser, Debug)]
#[command(name = "gridfree", version, about = "Constructions and exact certification for sparse linear hypergraphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Search budget in nodes: an integer, `10^8`, `1e8` or `unlimited`.
    #[arg(long, global = true, value_parser = args::node_count, default_value = "unlimited")]
    pub max_nodes: u64,
    /// Write the JSON certificate or report here (`-` for stdout).
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family and write it in the hypergraph text format.
    #[command(subcommand)]
    Construct(Construct),
    /// Certify properties of a hypergraph.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated: linear, gridfree:<a>[x<b>], trianglefree, paschfree,
        /// mitrefree, unionfree:<e>, coverfree:<e>, sparse:<e>:<v>, steinersparse:<e>.
        #[arg(long, value_delimiter = ',', required = true)]
        props: Vec<gridfree_core::Property>,
    },
    /// Count copies of a configuration.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        /// grid:<a>x<b>, triangle, pairi2, pasch, mitre, g6, g7, prstar:<r>.
        #[arg(long)]
        kind: ConfigKind,
    },
    /// Delete edges (or whole parallel classes) until no forbidden copy is left.
    Purge {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', required = true)]
        avoid: Vec<ConfigKind>,
        /// Delete parallel classes of a perfect-matching decomposition instead of edges.
        #[arg(long)]
        by_class: bool,
    },
    /// Slope sets and additive patterns.
    #[command(subcommand)]
    Numbers(Numbers),
    /// Compare the characteristic polynomial of the four-line matrix with its closed form.
    RankCheck {
        #[arg(long = "r", value_parser = args::int_range, default_value = "4..12")]
        range: std::ops::RangeInclusive<i64>,
        /// Also solve the three-line system and check its parametrization.
        #[arg(long)]
        eq17: bool,
    },
    /// Crossing polyline systems.
    #[command(subcommand)]
    Crossing(Crossing),
    /// Superimposed-code properties.
    #[command(subcommand)]
    Codes(Codes),
    /// Group testing over the OR channel.
    #[command(subcommand)]
    Gt(Gt),
}

#[derive(Args, Debug, Clone)]
pub struct OutArg {
    /// Output file (default: stdout).
    #[arg(long = "out")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Lines `{(j, y + j·m)}` over `Z_q` with slopes from a rule.
    Transversal {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        /// all, small, sumfree, restricted, sidon, list:<a,b,..> or file:<path>.
        #[arg(long, value_parser = args::slopes, default_value = "small")]
        slopes: Slopes,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// All r-subsets of [n] meeting a fixed (r−1)-set.
    Pencil {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Bipartite graph from a Sidon set modulo q.
    Sidon {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// The Steiner triple system of the lines of PG(3,2).
    Sts15 {
        #[command(flatten)]
        out: OutArg,
    },
    /// Six lines over `Z_q` forming a 3×3 grid.
    CrossingR3 {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        y: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        m: i64,
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Randomized recursive Grid(r,r)-free family.
    Recursive {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random union of parallel classes of the affine plane.
    RandomClasses {
        #[arg(long)]
        n: u64,
        /// Class probability: `a/b` or a decimal.
        #[arg(long)]
        p: Prob,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Random r-partite family with forbidden copies deleted.
    RandomPartite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: Prob,
        #[arg(long, value_delimiter = ',', default_value = "pairi2")]
        avoid: Vec<ConfigKind>,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum Numbers {
    /// Check a set (one integer per line, optional `mod=<q>`) for patterns.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated: ap<k>, sumfree<r>, a4, a6, sidon.
        #[arg(long, value_delimiter = ',', required = true)]
        patterns: Vec<gridfree_core::PatternKind>,
    },
    /// Digit-based progression-free set in `[0, q)`.
    Behrend {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
    },
    /// Greedy subset of `[0, q)` avoiding the patterns.
    Greedy {
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        patterns: Vec<gridfree_core::PatternKind>,
    },
    /// Random slope set avoiding AP3, A4 and A6.
    Restricted {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Multiplier bringing every coordinate close to 0 modulo a prime.
    Minkowski {
        #[arg(long)]
        q: u64,
        #[arg(long = "vec", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        vector: Vec<i64>,
    },
    /// Largest prime not above x.
    Prime {
        #[arg(long)]
        x: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Crossing {
    /// Check the axioms and the expected structure of a system.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Exhaustively enumerate all crossing systems for a small r.
    Enumerate {
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Codes {
    /// Superimposed-code report of a hypergraph.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum Gt {
    /// OR of the codewords of the defective edges, as hex.
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        defectives: Vec<usize>,
    },
    /// Edges whose codewords lie inside the outcome.
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        outcome: String,
    },
    /// Encode and decode random defective sets.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_defectives: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { commands::EXIT_USAGE } else { 0 });
        }
    };
    if let Some(t) = cli.global.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(commands::EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(commands::EXIT_USAGE);
        }
    }
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_USAGE)
        }
    }
}
