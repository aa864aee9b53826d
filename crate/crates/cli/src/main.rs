use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ehchan::config::{parse_count, FileConfig};
use ehchan::plot::plot;
use ehchan::trace_csv::write_trace_csv;
use ehchan::verify::verify;
use ehchan::{sweep, CliError};
use ehchan_core::channel::ChannelParams;
use ehchan_core::modulo::{best_scheme, best_ternary, encode, optimize_scheme, Pmf};
use ehchan_core::oiid::optimize_oiid;
use ehchan_core::rates::{cis_rate, optimize_czs, optimize_niid, optimize_ub};
use ehchan_core::rng::{derive_seed, sim_rng};

#[derive(Parser)]
#[command(name = "ehchan", version, about = "Rates and codecs for the unit-battery energy harvesting binary channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every rate over a grid of q and write the curve table as CSV.
    Sweep(SweepArgs),
    /// Draw a sweep CSV as an SVG chart.
    Plot {
        csv: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the modulo codec over a simulated channel and compare rates.
    Verify {
        #[arg(long)]
        q: f64,
        /// Frame length; defaults to the best one up to --n-max.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        symbols: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Print every rate at a single q.
    Rates {
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        /// OIID trace length; 0 skips the estimate.
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        oiid_slots: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Dump the slot trace of an encoded random message as `i,S,X,E` CSV.
    Trace {
        #[arg(long)]
        q: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        symbols: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file with the same keys as the long flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q_start: Option<f64>,
    #[arg(long)]
    q_end: Option<f64>,
    #[arg(long)]
    q_step: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    oiid_slots: Option<usize>,
    #[arg(long, value_parser = parse_count)]
    mc_symbols: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let flags = FileConfig {
        q_start: args.q_start,
        q_end: args.q_end,
        q_step: args.q_step,
        n_max: args.n_max,
        oiid_slots: args.oiid_slots,
        mc_symbols: args.mc_symbols,
        seed: args.seed,
        out: args.out.clone(),
    };
    let cfg = file.merge(&flags);
    let out = flags.out.or(file.out).unwrap_or_else(|| PathBuf::from("curves.csv"));
    let table = sweep(&cfg)?;
    table.write_csv(&out)?;
    for row in table.rows.iter().filter_map(|r| r.codec.map(|c| (r.q, r.n_star, c))) {
        eprintln!("codec q={:.6} N={}: {} symbols, {} errors", row.0, row.1, row.2.symbols, row.2.errors);
    }
    let violations = table.violations();
    if !violations.is_empty() {
        return Err(CliError::Ordering(violations));
    }
    eprintln!("wrote {} rows to {}", table.rows.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Plot { csv, out } => plot(&csv, &out),
        Command::Verify { q, n, n_max, symbols, seed } => {
            let report = verify(q, n, n_max, symbols, seed)?;
            println!("{report}");
            if report.errors > 0 {
                return Err(CliError::DecodeErrors { q, frame_len: report.frame_len, errors: report.errors, symbols: report.symbols });
            }
            Ok(())
        }
        Command::Rates { q, n_max, oiid_slots, seed } => {
            let scheme = best_scheme(q, n_max)?;
            println!("q        {q}");
            println!("C_ZS     {:.6}", optimize_czs(q)?.rate);
            println!("R_NIID   {:.6}", optimize_niid(q)?.rate);
            if oiid_slots > 0 {
                let r = optimize_oiid(q, oiid_slots, seed)?;
                println!("R_OIID   {:.6} ± {:.6} (p = {:.4})", r.rate, r.std_error, r.argmax);
            }
            println!("R_A      {:.6} (N = {})", scheme.rate, scheme.frame_len);
            println!("C_UB     {:.6}", optimize_ub(q)?.rate);
            println!("C_IS     {:.6}", cis_rate(q)?);
            let ternary = best_ternary(q, n_max)?;
            println!("ternary  {:.6} (N = {})", ternary.rate, ternary.frame_len);
            Ok(())
        }
        Command::Trace { q, n, symbols, seed, out } => {
            let pmf: Pmf = optimize_scheme(q, n)?.pmf;
            let mut rng = sim_rng(derive_seed(seed, 0));
            let message: Vec<usize> = (0..symbols).map(|_| pmf.sample(&mut rng)).collect();
            let trace = encode(&message, ChannelParams::new(q)?, n, derive_seed(seed, 1))?;
            match out {
                Some(path) => {
                    let file = std::fs::File::create(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    write_trace_csv(&trace, BufWriter::new(file)).map_err(|source| CliError::Io { path, source })
                }
                None => write_trace_csv(&trace, io::stdout().lock())
                    .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
