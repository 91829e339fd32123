mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use porac::classical::SearchMode;

use commands::{Method, Params};
use report::{write_csv, write_json, GameReport};

#[derive(Parser, Debug)]
#[command(name = "porac", version, about = "Bounds and strategies for parity-oblivious random access code games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Number of input bits.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u32).range(2..=16))]
    n: u32,
    /// Parity threshold; defaults to n.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..=16))]
    g: Option<u32>,
    /// Hilbert space dimension for the see-saw; defaults to 2^(n-1).
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long, global = true, default_value_t = 20)]
    restarts: usize,
    #[arg(long, global = true, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Classical search mode; exhaustive for n <= 3, local otherwise.
    #[arg(long, global = true)]
    mode: Option<ModeArg>,
    /// Evaluation budget for local search.
    #[arg(long, global = true, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noncontextual bound and classical PO strategy search.
    Bounds,
    /// Quantum success probability.
    Quantum {
        #[arg(long, value_enum, default_value_t = MethodArg::Explicit)]
        method: MethodArg,
    },
    /// Ontic maximum of the correlation operator.
    Ontic,
    /// Parity-obliviousness checks for the constructed strategies.
    VerifyPo,
    /// Bell value and entanglement-assisted message protocol.
    Entangled,
    /// Interferometer preparation settings matched to the encodings.
    Interferometer,
    /// Sweep 2 <= g <= n <= --n and emit one row per game.
    Table {
        /// Restrict quantum values to one method.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Explicit,
    Seesaw,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Explicit => Method::Explicit,
            MethodArg::Seesaw => Method::Seesaw,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Local,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn params(c: &Common) -> Params {
    let n = c.n as usize;
    Params {
        n,
        g: c.g.map_or(n, |g| g as usize),
        dim: c.dim,
        restarts: c.restarts,
        max_iter: c.max_iter,
        tol: c.tol,
        seed: c.seed,
        mode: c.mode.map(|m| match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::Local => SearchMode::Local,
        }),
        budget: c.budget,
    }
}

fn emit(reports: &[GameReport], single: bool, c: &Common) -> Result<()> {
    let mut sink: Box<dyn Write> = match &c.out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    match c.format {
        Format::Csv => {
            let rows: Vec<_> = reports.iter().map(GameReport::csv_row).collect();
            write_csv(&rows, &mut sink)?;
        }
        Format::Json if single => write_json(&reports[0], &mut sink)?,
        Format::Json => write_json(&reports, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let p = params(&cli.common);
    let (reports, single) = match cli.command {
        Command::Bounds => (vec![commands::bounds(&p)?], true),
        Command::Quantum { method } => (vec![commands::quantum(&p, method.into())?], true),
        Command::Ontic => (vec![commands::ontic(&p)?], true),
        Command::VerifyPo => (vec![commands::verify_po(&p)?], true),
        Command::Entangled => (vec![commands::entangled(&p)?], true),
        Command::Interferometer => (vec![commands::interferometer(&p)?], true),
        Command::Table { method } => (commands::table(&p, p.n, method.map(Into::into))?, false),
    };
    emit(&reports, single, &cli.common)?;
    Ok(reports.iter().any(GameReport::po_failed))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: a parity-obliviousness check exceeded {}", report::PO_FAIL_TOL);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
