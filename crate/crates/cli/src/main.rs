use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

use scg_cli::output::Format;
use scg_cli::run::{self, TransformKind};
use scg_core::ratpoly::Limits;

#[derive(Parser)]
#[command(name = "scg", about = "Exact cut strengthening over structured integer sets")]
struct Cli {
    /// Dimension cap for every exact computation.
    #[arg(long, global = true, default_value_t = 8)]
    max_dim: usize,

    /// Cap on lattice points enumerated per bounding box.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_enum: u64,

    /// Worker threads for closure rounds and verify suites.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Strengthen one inequality over the problem's set.
    Strengthen {
        file: PathBuf,
        /// Integral normal, comma separated.
        #[arg(long)]
        alpha: String,
    },
    /// Intersect all strengthened cuts with sup-norm bound K, round by round.
    Closure {
        file: PathBuf,
        #[arg(long = "K", default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        rounds: u32,
    },
    /// Reduce a multiplier until every cut intercept is at most M*.
    Dominate {
        file: PathBuf,
        /// Nonnegative multiplier, comma separated, one entry per row.
        #[arg(long)]
        lambda: String,
    },
    /// Rewrite the problem through a lattice-preserving map.
    Transform {
        #[arg(value_enum)]
        mode: TransformMode,
        file: PathBuf,
    },
    /// Run one seeded property suite.
    Verify {
        /// One of: lemma2.2, lemma3.5, lemma3.8, lemma3.11, thm5.1.
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TransformMode {
    Normalize,
    Split,
}

fn main() {
    let cli = Cli::parse();
    let limits = Limits {
        max_dim: cli.max_dim,
        max_enum: cli.max_enum,
    };
    let threads = cli.threads.max(1);
    let outcome = match cli.cmd {
        Cmd::Strengthen { file, alpha } => run::strengthen(&file, &alpha, &limits),
        Cmd::Closure { file, k, rounds } => run::closure(&file, k, rounds, threads, &limits),
        Cmd::Dominate { file, lambda } => run::dominate(&file, &lambda, &limits),
        Cmd::Transform { mode, file } => {
            let kind = match mode {
                TransformMode::Normalize => TransformKind::Normalize,
                TransformMode::Split => TransformKind::Split,
            };
            run::transform(&file, kind, &limits)
        }
        Cmd::Verify { suite, trials, seed } => {
            run::run_verify(&suite, trials, seed, threads, &limits)
        }
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.report.render(cli.format));
            exit(out.exit);
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit(e.exit_code());
        }
    }
}
