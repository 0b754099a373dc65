//! `hypleaf`: command-line front end for hypleaf-core.
//!
//! Reports go to standard output (JSON by default, `--tsv` for flat
//! key/value lines); diagnostics go to standard error. Exit status is 0 on
//! success, 1 for usage errors and 2 when a computation rejects its input.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

const AFTER_HELP: &str = "\
Environment:
  HYPLEAF_SEED     default seed for randomized holonomy runs (overridden by --seed)
  HYPLEAF_THREADS  worker threads for multi-cell orbit runs (default: available cores)

Randomness: generator choices come from a PCG32 stream (a 64-bit linear
congruential state with a permuted output) seeded by the seed, so runs are
bit-reproducible across platforms.";

#[derive(Parser, Debug)]
#[command(name = "hypleaf", version, about = "Minimal foliations by hyperbolic surfaces: exact certificates", after_help = AFTER_HELP)]
pub struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "tsv")]
    pub json: bool,
    /// Emit tab-separated key/value lines instead of JSON.
    #[arg(long, global = true)]
    pub tsv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace classification of an SL(2,Z) matrix, with optional periodic points.
    Classify(ClassifyArgs),
    /// Square-tiled surfaces.
    #[command(subcommand)]
    Origami(OrigamiCmd),
    /// Branched covers and Riemann–Hurwitz bookkeeping.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// First homology of origamis and induced actions.
    #[command(subcommand)]
    Homology(HomologyCmd),
    /// Mapping-torus geometry, Euler classes and period groups.
    #[command(subcommand)]
    Torus3(Torus3Cmd),
    /// Circle pseudogroup simulations.
    #[command(subcommand)]
    Holonomy(HolonomyCmd),
    /// End-to-end pipelines.
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    /// Print the JSON schema that every report satisfies.
    Schema,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Matrix entries "a b c d" for (a b; c d).
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: String,
    /// Also list the points fixed by A^n.
    #[arg(long)]
    pub periodic: Option<u32>,
}

/// An origami given by name or by two permutations in cycle notation.
#[derive(Args, Debug, Clone)]
pub struct OrigamiArgs {
    /// Built-in surface: "torus" or "wollmilchsau".
    #[arg(long, conflicts_with_all = ["h", "v"])]
    pub named: Option<String>,
    /// Right-neighbour permutation, e.g. "(1 2 3 4)(5 6 7 8)".
    #[arg(long)]
    pub h: Option<String>,
    /// Top-neighbour permutation.
    #[arg(long)]
    pub v: Option<String>,
    /// Number of squares (defaults to the largest square mentioned).
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum OrigamiCmd {
    /// Validate a gluing and report genus and stratum.
    Build(OrigamiArgs),
    /// Apply a word in S, T, T^-1, -I (last token acts first).
    Act {
        #[command(flatten)]
        origami: OrigamiArgs,
        /// Space-separated tokens, e.g. "S T T^-1".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Lift an Anosov matrix to an affine automorphism of the origami.
    Lift {
        #[command(flatten)]
        origami: OrigamiArgs,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CoverCmd {
    /// The surface w^d = prod (z - z_i)^{a_i}.
    Pillowcase {
        #[arg(long)]
        d: u32,
        /// Four exponents, e.g. "1,1,1,1".
        #[arg(long)]
        a: String,
        /// Include the square-tiled model when it exists.
        #[arg(long)]
        model: bool,
    },
    /// Double cover of the torus branched over n points.
    Double {
        #[arg(long)]
        n: usize,
    },
    /// Riemann–Hurwitz from fibre ramification indices.
    Rh {
        #[arg(long, value_enum)]
        base: BaseArg,
        #[arg(long)]
        degree: u32,
        /// Fibres separated by ';', indices by ',', e.g. "2,2,2,2;3,1".
        #[arg(long)]
        fibres: String,
    },
    /// Euler characteristics of lifted disks around k branch points.
    Growth {
        #[arg(long)]
        d: u32,
        /// "d_i,e_i": ramification points per branch point and their index.
        #[arg(long, default_value = "1,2")]
        pair: String,
        #[arg(long)]
        k: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum BaseArg {
    Torus,
    Sphere,
}

#[derive(Subcommand, Debug)]
pub enum HomologyCmd {
    /// Homology basis and intersection form.
    Basis(OrigamiArgs),
    /// Action of a lifted Anosov matrix on homology.
    Action {
        #[command(flatten)]
        origami: OrigamiArgs,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Torelli order of a matrix against a symplectic form.
    Torelli {
        /// JSON array of integer rows.
        #[arg(long)]
        m: String,
        /// JSON array of integer rows; defaults to the standard form.
        #[arg(long)]
        j: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ClassArg {
    Periodic,
    Reducible,
    Anosov,
    PseudoAnosov,
}

#[derive(Args, Debug)]
pub struct MonodromyArgs {
    /// Torus monodromy "a b c d"; determines genus 1, class and Torelli order.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["genus", "class"])]
    pub matrix: Option<String>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long, value_enum)]
    pub class: Option<ClassArg>,
    /// Stretch factor (p + q sqrt(D)) / r as "p,q,D,r".
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub torelli_k: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SourceArg {
    Suspension,
    Surgery,
}

#[derive(Subcommand, Debug)]
pub enum Torus3Cmd {
    /// Geometry of a mapping torus.
    Geometry(MonodromyArgs),
    /// Euler class and Milnor–Wood check for a circle bundle.
    Euler {
        #[arg(long)]
        genus: u32,
        #[arg(long, allow_hyphen_values = true)]
        e: i64,
        #[arg(long, value_enum, default_value = "suspension")]
        source: SourceArg,
    },
    /// Rank of a period group given in rational coordinates.
    Periods {
        /// One period per flag, e.g. --period 1,0 --period 1/2,3.
        #[arg(long = "period", required = true, allow_hyphen_values = true)]
        periods: Vec<String>,
    },
    /// Manifold report: geometry, b1 and optional Euler data.
    Report {
        #[command(flatten)]
        monodromy: MonodromyArgs,
        #[arg(long, allow_hyphen_values = true, requires = "base_genus")]
        euler: Option<i64>,
        #[arg(long)]
        base_genus: Option<u32>,
    },
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    /// Seed (falls back to HYPLEAF_SEED, then a fixed default).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum HolonomyCmd {
    /// Orbit gap statistics under randomly chosen generators.
    Orbit {
        /// Generators separated by ';': "rot:<a>", "dbl", "aff:k=<int>,b=<real>", "mob:a,b,c,d".
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        start: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        eps: f64,
        /// Run this many cells with seeds seed, seed+1, ...
        #[arg(long, default_value_t = 1)]
        cells: usize,
        #[command(flatten)]
        random: RandomArgs,
    },
    /// Words in affine generators fixing a point.
    Stabilizer {
        /// Affine generators "aff:k=<int>,b=<real>" separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// Rotation number of a composite circle map (first generator acts first).
    Rotnum {
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
    },
    /// Compare a product of commutators with a rotation.
    Commutator {
        /// A pair "mob:a,b,c,d|mob:a,b,c,d"; repeat for more pairs.
        #[arg(long = "pair", allow_hyphen_values = true)]
        pairs: Vec<String>,
        /// Target rotation in turns.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        target: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum PipelineCmd {
    /// Classify, lift to the origami, act on homology, and classify the mapping torus.
    Frw {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Origami name, or use --h/--v.
        #[arg(long)]
        origami: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        /// Number of branch points in the leaf-growth certificate.
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 1,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if matches!(cli.command, Command::Schema) {
        print!("{}", report::SCHEMA);
        return ExitCode::SUCCESS;
    }
    match commands::run(&cli.command) {
        Ok(report) => {
            let text = if cli.tsv {
                report.to_tsv()
            } else {
                report.to_json()
            };
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Domain(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
