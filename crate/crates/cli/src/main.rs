use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbital_ac::commands::{self, Format, Options, Output, SweepArgs};
use orbital_ac::{CliError, EXIT_USAGE};
use orbital_ac_core::oracle::OracleConfig;

#[derive(Parser)]
#[command(name = "orbital-ac", version, about = "Absolute continuity of orbital-measure convolutions on SO(2n+1)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Rank n of SO(2n+1). Defaults to the largest rank in the tuple.
    #[arg(long, global = true)]
    rank: Option<usize>,
    /// Comma-separated labels (`D2,B1xSU(1)*3`), inline JSON, or `@file.json`.
    #[arg(long, global = true)]
    tuple: Option<String>,
    #[arg(long, global = true, default_value_t = 50)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Relative singular-value threshold and eigenvalue distance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, env = "ORBITAL_AC_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Output file for sweep records.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    allow_central: bool,
    #[arg(long, global = true)]
    parallel: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Jsonl,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Type decomposition, dominant class and orbit dimensions of each element.
    Classify,
    /// Eligibility verdict. Exits 3 when ineligible.
    Decide,
    /// Numerical rank test (plus probe when ineligible). Exits 4 on disagreement.
    Verify {
        /// Also check the inductive strategy hypotheses.
        #[arg(long)]
        strategy: bool,
    },
    /// Forced-eigenvalue probe, or a search for distinct eigenvalues when eligible.
    Probe,
    /// Root-space bracket structure of so(2n+1).
    Brackets,
    /// Cross-validate every multiset of canonical types at one rank.
    Sweep {
        #[arg(long, default_value_t = 2)]
        min_len: usize,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Resume into an existing --out file.
        #[arg(long)]
        skip_existing: bool,
        /// Add per-tuple wall time to records. Breaks byte-identical reruns.
        #[arg(long)]
        timings: bool,
    },
}

impl Global {
    fn options(&self) -> Options {
        Options {
            rank: self.rank,
            tuple: self.tuple.clone(),
            config: OracleConfig {
                trials: self.trials,
                samples: self.samples,
                tolerance: self.tol,
                eigen_tolerance: self.tol,
                seed: self.seed,
            },
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Jsonl => Format::Jsonl,
                FormatArg::Table => Format::Table,
            },
            out: self.out.clone(),
            allow_central: self.allow_central,
            parallel: self.parallel,
        }
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let opts = cli.global.options();
    match &cli.command {
        Command::Classify => commands::classify(&opts),
        Command::Decide => commands::decide(&opts),
        Command::Verify { strategy } => commands::verify(&opts, *strategy),
        Command::Probe => commands::probe(&opts),
        Command::Brackets => commands::brackets(&opts),
        Command::Sweep { min_len, max_len, skip_existing, timings } => {
            let args =
                SweepArgs { min_len: *min_len, max_len: *max_len, skip_existing: *skip_existing, timings: *timings };
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            let out = commands::sweep(&opts, &args, &mut lock)?;
            if opts.out.is_none() {
                // Records own stdout; keep the summary off it.
                eprint!("{}", out.text);
                return Ok(Output { text: String::new(), code: out.code });
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
