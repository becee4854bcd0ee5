use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use morava_core::verifier::{exit_code, render, run_suite, OutputFormat, RunConfig, Suite};

/// Cross-checks Morava K-theory ring presentations against Groebner-basis
/// computations and finite-group rank predictions.
#[derive(Parser, Debug)]
#[command(name = "morava-verify", version)]
struct Args {
    /// Suite to run; repeatable. `all` selects every suite.
    #[arg(long = "suite", default_value = "all")]
    suites: Vec<String>,
    #[arg(long, default_value_t = 2)]
    s_max: u32,
    /// Height bound for rank claims on Q8, cyclic and binary tetrahedral rings [default: max(3, s-max)]
    #[arg(long)]
    rank_s_max: Option<u32>,
    #[arg(long, default_value_t = 3)]
    m_max: u32,
    #[arg(long, default_value_t = 3)]
    k_max: u32,
    #[arg(long, default_value_t = 40)]
    degree_bound: u64,
    /// text or json
    #[arg(long, default_value = "text")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Do not fail the run on recorded comparisons that disagree.
    #[arg(long)]
    allow_discrepancies: bool,
    /// Include per-claim wall-clock time (makes reports nondeterministic).
    #[arg(long)]
    timings: bool,
}

fn config(args: &Args) -> Result<RunConfig, String> {
    let mut suites = BTreeSet::new();
    for name in &args.suites {
        if name == "all" {
            suites.extend(Suite::ALL);
        } else {
            suites.insert(name.parse::<Suite>().map_err(|e| e.to_string())?);
        }
    }
    let cfg = RunConfig {
        s_max: args.s_max,
        rank_s_max: args.rank_s_max.unwrap_or(args.s_max.max(3)),
        m_max: args.m_max,
        k_max: args.k_max,
        degree_bound: args.degree_bound,
        suites,
        output_format: args.format.parse::<OutputFormat>().map_err(|e| e.to_string())?,
        allow_discrepancies: args.allow_discrepancies,
        timings: args.timings,
        ..RunConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let reports = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&reports, cfg.output_format);
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(exit_code(&reports, cfg.allow_discrepancies) as u8)
}
