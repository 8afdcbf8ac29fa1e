mod catalog;
mod estimates;
mod exchange;
mod table;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use kcx_protocols::{all_suites, suite_by_name, ProtocolSuite};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kcx", version, about = "Key-consensus key exchange: parameters, runs, error rates, attack costs")]
struct Cli {
    /// Emit JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameter catalog, or one suite.
    Params { suite: Option<String> },
    /// Check suite parameters, or a raw KC parameter set.
    Validate {
        suite: Option<String>,
        /// Variant name, e.g. okcn-simple.
        #[arg(long, requires_all = ["q", "m", "g", "d"], conflicts_with = "suite")]
        kc: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Run full key exchanges and report agreement.
    Kx {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Leave timings out, so the output depends only on the seed.
        #[arg(long)]
        no_timings: bool,
    },
    /// Per-phase timings for one suite or all.
    Bench {
        suite: Option<String>,
        #[arg(long, default_value_t = 100)]
        iters: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Failure probability from exact convolution.
    ErrorRate { suite: Option<String> },
    /// Primal and dual attack costs.
    SecEst { suite: Option<String> },
    /// Noise sampling tables with checksums.
    Tables,
}

/// Output of a subcommand; `ok` sets the exit status.
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    pub ok: bool,
}

impl Report {
    pub fn ok(json: serde_json::Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

fn select(name: Option<&str>) -> Result<Vec<&'static ProtocolSuite>> {
    match name {
        Some(n) => Ok(vec![suite_by_name(n)?]),
        None => Ok(all_suites().iter().collect()),
    }
}

fn dispatch(cmd: Command) -> Result<Report> {
    Ok(match cmd {
        Command::Params { suite } => catalog::params(&select(suite.as_deref())?),
        Command::Validate { suite, kc, q, m, g, d } => match (kc, q, m, g, d) {
            (Some(v), Some(q), Some(m), Some(g), Some(d)) => catalog::validate_kc(catalog::parse_variant(&v)?, q, m, g, d)?,
            (None, ..) => catalog::validate_suites(&select(suite.as_deref())?),
            _ => bail!("--kc needs --q, --m, --g and --d"),
        },
        Command::Kx { suite, seed, trials, no_timings } => {
            exchange::kx(suite_by_name(&suite)?, trials, seed, !no_timings)?
        }
        Command::Bench { suite, iters, seed } => exchange::bench(&select(suite.as_deref())?, iters, seed)?,
        Command::ErrorRate { suite } => estimates::error_rates(&select(suite.as_deref())?),
        Command::SecEst { suite } => estimates::sec_est(&select(suite.as_deref())?),
        Command::Tables => catalog::tables(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable"));
            } else {
                print!("{}", r.text);
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
