use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::{Emit, Failure};

/// Exact toolkit for Hirzebruch-Jung continued fractions, k-Wahl chains,
/// zero continued fractions and generalized Markov triples.
#[derive(Parser, Debug)]
#[command(name = "kwahl", version)]
struct Cli {
    /// One JSON object per result line.
    #[arg(long, global = true)]
    json: bool,

    /// Generation depth for verification corpora.
    #[arg(long, global = true, value_name = "N")]
    depth: Option<usize>,

    /// Size bound (maximum entry, numerator or GM number, depending on the command).
    #[arg(long, global = true, value_name = "N")]
    bound: Option<String>,

    /// A single k or an inclusive range "a..b".
    #[arg(long, global = true, value_name = "SPEC", value_parser = parse_k_spec)]
    k: Option<(u64, u64)>,

    /// Longest zero continued fraction for the catalan suite.
    #[arg(long, global = true, value_name = "N")]
    max_len: Option<usize>,

    /// Also write the JSON records to PATH, one per line.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Expand r/a: chain, remainders, dual, special indices, LESR.
    Expand { r: String, a: String },
    /// Classify a chain such as "[3,2,4,2]".
    Classify { chain: String },
    /// Zero continued fractions.
    Zerocf {
        #[command(subcommand)]
        action: ZeroAction,
    },
    /// Generalized Markov triples.
    Gm {
        #[command(subcommand)]
        action: GmAction,
    },
    /// Run a verification suite, or "all".
    Verify { suite: String },
}

#[derive(Subcommand, Debug)]
enum ZeroAction {
    /// K(W): zero continued fractions below the chain, with weights.
    KSet { chain: String },
    /// Minimal weight.
    Alpha { chain: String },
    /// Index pairs whose double decrement is zero.
    Extremal { chain: String },
    /// Every zero continued fraction of length E.
    AllOfLength { e: usize },
}

#[derive(Subcommand, Debug)]
enum GmAction {
    Tree,
    Numbers,
    SquareCheck,
    /// Denominators u with m/u a k-Wahl chain.
    WahlPartners {
        m: String,
    },
}

fn parse_k_spec(s: &str) -> Result<(u64, u64), String> {
    let num = |t: &str| {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid k {t:?}"));
        }
        t.parse::<u64>()
            .map_err(|e| format!("invalid k {t:?}: {e}"))
    };
    match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok((lo, hi))
        }
        None => num(s).map(|k| (k, k)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli);
    match result {
        Ok(emit) => match write(&cli, &emit) {
            Ok(()) if emit.failed => ExitCode::from(1),
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("kwahl: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("kwahl: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write(cli: &Cli, emit: &Emit) -> io::Result<()> {
    let stdout = io::stdout();
    let mut w = BufWriter::new(stdout.lock());
    if cli.json {
        for rec in &emit.records {
            writeln!(w, "{rec}")?;
        }
    } else {
        for line in &emit.text {
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    if let Some(path) = &cli.out {
        let mut f = BufWriter::new(File::create(path)?);
        for rec in &emit.records {
            writeln!(f, "{rec}")?;
        }
        f.flush()?;
    }
    Ok(())
}
