use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Build, simulate and analyze composite pulse sequences.
#[derive(Parser, Debug)]
#[command(name = "cpulse", version)]
struct Cli {
    /// Working precision in decimal digits; 16 runs in double precision.
    #[arg(long, global = true, env = "CPULSE_DIGITS", default_value_t = 16,
          value_parser = clap::value_parser!(u32).range(16..=200))]
    digits: u32,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SeqArgs {
    /// Builtin sequence name or path to a sequence file.
    #[arg(long, default_value = "naive")]
    seq: String,

    /// Target rotation for builtins: x-pi, y-pi/2, or nx,ny,nz:p/q (generator angle p/q·π).
    #[arg(long, default_value = "x-pi")]
    target: String,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Error model of the target pulses, e.g. "model=linear eps=0.01" or "linear".
    #[arg(long, default_value = "model=linear")]
    model: String,

    /// Separate error model for the π/3 and π/5 correction pulses.
    #[arg(long)]
    pi3_model: Option<String>,

    /// Treat π/3 and π/5 correction pulses as perfect.
    #[arg(long)]
    perfect_pi3: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Infidelity table of the π rotation about x under linear over-rotation.
    Table1 {
        /// Run below 50 digits anyway.
        #[arg(long)]
        force: bool,
    },
    /// Trace components and infidelity over a logarithmic ε grid, as CSV.
    Scan {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Grid lo:hi:per_decade.
        #[arg(long, default_value = "1e-4:1e-1:9")]
        grid: String,
        /// Explicit comma-separated scales; overrides --grid.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Power-law order of one scan column.
    Fit {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "1e-4:1e-2:9")]
        grid: String,
        /// cx, cy, cz or infidelity.
        #[arg(long, default_value = "infidelity")]
        column: String,
    },
    /// Taylor coefficient of a trace component by finite differences (needs 50 digits).
    Expand {
        #[command(flatten)]
        seq: SeqArgs,
        /// Parameter family: target, covariant or axisdep.
        #[arg(long, default_value = "target")]
        family: String,
        /// Monomial such as ey*ez^2.
        #[arg(long)]
        index: String,
        /// Trace component x, y or z.
        #[arg(long, default_value = "x")]
        component: String,
    },
    /// Greedy concatenation schedule from the order calculus.
    Plan {
        /// perfect, covariant or axisdep.
        #[arg(long, default_value = "perfect")]
        regime: String,
        /// Starting orders, e.g. inf,inf,1.
        #[arg(long)]
        start: String,
        /// Correction-pulse orders d,e,f for the covariant regime.
        #[arg(long, default_value = "1,1,1")]
        deltas: String,
        /// Number of corrections to apply.
        #[arg(long, conflicts_with = "goal")]
        depth: Option<usize>,
        /// Stop once every component reaches this order.
        #[arg(long)]
        goal: Option<u32>,
        #[arg(long, default_value_t = cpulse::order::DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Evaluate one sequence under one error model.
    Simulate {
        #[command(flatten)]
        seq: SeqArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Scale applied to the model.
        #[arg(long, default_value = "1")]
        eps: String,
    },
    /// Emit the sequence-file text of a builtin.
    Build {
        /// Builtin name, e.g. pi3:Y or pi3Y∘b2sym.
        name: String,
        #[arg(long, default_value = "x-pi")]
        target: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cpulse: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
