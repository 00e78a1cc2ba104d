use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expodiv_core::arith::factorize;
use expodiv_core::bench::{
    fit_power_model, fit_window, main_term_for, run_suite, ModelId, SuiteConfig, SuiteId,
};
use expodiv_core::constants::{preset_constant, PresetId, PresetOptions};
use expodiv_core::expfunc::{e_divisors, e_squarefree_e_divisors, ExpFunctionId};
use expodiv_core::format::{fmt_f64, to_json};
use expodiv_core::summatory::{
    build_table_segmented, geometric_checkpoints, summatory_segmented, FnId, DEFAULT_SEGMENT_SIZE,
};
use expodiv_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "expodiv",
    version,
    about = "Exponential-divisor arithmetic functions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Sieve segment length.
    #[arg(long, global = true, value_parser = parse_count, default_value_t = DEFAULT_SEGMENT_SIZE)]
    segment_size: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Value of a function at n.
    Eval {
        function: FnId,
        #[arg(value_parser = parse_count)]
        n: u64,
    },
    /// Exponential divisors of n, one per line.
    Edivisors {
        #[arg(value_parser = parse_count)]
        n: u64,
        /// Only e-divisors with squarefree exponents.
        #[arg(long)]
        squarefree: bool,
    },
    /// Table of values as CSV `n,value`.
    Table {
        function: FnId,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Partial sums as CSV `x,sum,main,residual`.
    Sum {
        function: FnId,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        /// `geometric` or a comma-separated list of x values.
        #[arg(long, default_value = "geometric")]
        checkpoints: String,
        /// Main-term model; defaults to the natural one for the function.
        #[arg(long)]
        model: Option<ModelId>,
    },
    /// Euler-product constants as a JSON report.
    Constants {
        #[arg(long)]
        id: Option<PresetId>,
        #[arg(long, default_value_t = 1e-10)]
        target: f64,
        #[arg(long, value_parser = parse_count, default_value_t = 1_000_000)]
        oracle_cutoff: u64,
    },
    /// Run a verification suite.
    Verify {
        suite: SuiteId,
        #[arg(long, value_parser = parse_count)]
        limit: Option<u64>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Allowed oracle gap in the constants suite.
        #[arg(long)]
        oracle_tolerance: Option<f64>,
        /// Prime cutoff for the constants oracle.
        #[arg(long, value_parser = parse_count, default_value_t = 1_000_000)]
        oracle_cutoff: u64,
        /// Record per-check runtimes in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Residual slope of a partial-sum series as JSON.
    Fit {
        function: FnId,
        #[arg(long, value_parser = parse_count)]
        limit: u64,
        #[arg(long)]
        model: ModelId,
    },
}

/// Accepts `100000`, `1e5` or `1_000_000`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let cleaned = s.replace('_', "");
    if let Ok(v) = cleaned.parse::<u64>() {
        return Ok(v);
    }
    match cleaned.to_ascii_lowercase().split_once('e') {
        Some((mantissa, exp)) => {
            let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {s}"))?;
            let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
            let digits = format!("{int}{frac}");
            let shift = exp
                .checked_sub(frac.len() as u32)
                .ok_or_else(|| format!("{s} is not an integer"))?;
            let base: u64 = digits.parse().map_err(|_| format!("bad number {s}"))?;
            10u64
                .checked_pow(shift)
                .and_then(|p| base.checked_mul(p))
                .ok_or_else(|| format!("{s} is too large"))
        }
        None => Err(format!("bad number {s}")),
    }
}

fn default_model(f: &FnId) -> Option<ModelId> {
    match f {
        FnId::Exp(ExpFunctionId::TE) | FnId::Tau12 => Some(ModelId::LinearSqrt),
        FnId::Exp(ExpFunctionId::KappaE) | FnId::Identity => Some(ModelId::QuadraticHalf),
        FnId::Exp(_) | FnId::One => Some(ModelId::Linear),
        _ => None,
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let seg = cli.global.segment_size.max(1);
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Eval { function, n } => {
            let f = factorize(n, None)?;
            writeln!(stdout, "{}", function.eval(&f)?)?;
        }
        Command::Edivisors { n, squarefree } => {
            let f = factorize(n, None)?;
            let ds = if squarefree {
                e_squarefree_e_divisors(&f)
            } else {
                e_divisors(&f)
            };
            for d in ds {
                writeln!(stdout, "{d}")?;
            }
        }
        Command::Table {
            function,
            limit,
            out,
        } => {
            let table = build_table_segmented(&function, limit, seg)?;
            let mut w = output(out.as_ref())?;
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Sum {
            function,
            limit,
            checkpoints,
            model,
        } => {
            let xs = if checkpoints == "geometric" {
                geometric_checkpoints(limit)
            } else {
                checkpoints
                    .split(',')
                    .map(|x| parse_count(x.trim()).map_err(Error::InvalidArgument))
                    .collect::<Result<Vec<_>>>()?
            };
            let mut series = summatory_segmented(&function, limit, &xs, seg)?;
            if let Some(m) = model.or_else(|| default_model(&function)) {
                series = series.with_main_term(main_term_for(&function, m)?);
            }
            series.write_csv(&mut stdout)?;
        }
        Command::Constants {
            id,
            target,
            oracle_cutoff,
        } => {
            let options = PresetOptions {
                target,
                oracle_cutoff,
                oracle_tolerance: None,
            };
            let json = match id {
                Some(id) => to_json(&preset_constant(id, options)?)?,
                None => to_json(
                    &PresetId::ALL
                        .iter()
                        .map(|&id| preset_constant(id, options))
                        .collect::<Result<Vec<_>>>()?,
                )?,
            };
            stdout.write_all(json.as_bytes())?;
        }
        Command::Verify {
            suite,
            limit,
            json,
            oracle_tolerance,
            oracle_cutoff,
            timings,
        } => {
            let config = SuiteConfig {
                limit,
                segment_size: seg,
                timings,
                constants: PresetOptions {
                    oracle_tolerance,
                    oracle_cutoff,
                    ..Default::default()
                },
            };
            let report = run_suite(suite, &config)?;
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                write!(
                    stdout,
                    "{status} {} measured={} bound={}",
                    c.name,
                    fmt_f64(c.measured),
                    fmt_f64(c.bound)
                )?;
                if let Some(d) = &c.detail {
                    write!(stdout, " ({d})")?;
                }
                writeln!(stdout)?;
            }
            writeln!(
                stdout,
                "{} {}",
                if report.passed { "PASS" } else { "FAIL" },
                suite
            )?;
            if let Some(path) = json {
                std::fs::write(path, to_json(&report)?)?;
            }
            return Ok(report.passed);
        }
        Command::Fit {
            function,
            limit,
            model,
        } => {
            let window = fit_window(limit)?;
            let series = summatory_segmented(&function, limit, &window, seg)?;
            let fit = fit_power_model(&series, main_term_for(&function, model)?)?;
            stdout.write_all(to_json(&fit)?.as_bytes())?;
        }
    }
    stdout.flush()?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
