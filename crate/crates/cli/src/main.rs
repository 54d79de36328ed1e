use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sunsieve_core::{
    d_closed, main_term_constant, make_weight_config, richert_integral, weighted_count,
    SieveFunctionTable, SiftedSequence, Variant,
};

use sunsieve_cli::report::Format;
use sunsieve_cli::scan::{scan_range, ScanConfig};
use sunsieve_cli::witness::WitnessKind;

#[derive(Parser)]
#[command(name = "sunsieve", version, about = "Sieve workbench for x+ny / x^2+ny^2 prime pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a range of n for witnesses, in parallel, with checkpointing
    Verify(VerifyArgs),
    /// Local densities rho(p) for p < z and their product G(z)
    Density {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        variant: u8,
        #[arg(long)]
        z: f64,
    },
    /// Linear-sieve function tables
    #[command(subcommand)]
    SieveFunctions(SieveFunctionsCmd),
    /// Run the weighted sieve for one (n, variant, r, delta)
    WeightedSieve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        variant: u8,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: f64,
    },
    /// Weight-calculus constants for an (r, delta, degree) configuration
    Weights {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        degree: u32,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    task: WitnessKind,
    #[arg(long)]
    from: u64,
    /// exclusive upper end of the n range
    #[arg(long)]
    to: u64,
    /// defaults to SUNSIEVE_WORKERS, then to the machine's parallelism
    #[arg(long)]
    workers: Option<usize>,
    /// report file; without it records go to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// checkpoint file for resumable scans (requires --out)
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// stop after this many blocks, leaving the checkpoint behind
    #[arg(long)]
    max_blocks: Option<u64>,
}

#[derive(Subcommand)]
enum SieveFunctionsCmd {
    /// Tabulate F, f, D, and the Richert integral over a u grid
    Eval {
        #[arg(long)]
        u_min: f64,
        #[arg(long)]
        u_max: f64,
        #[arg(long)]
        step: f64,
    },
}

fn default_workers() -> usize {
    if let Ok(v) = std::env::var("SUNSIEVE_WORKERS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k > 0 {
                return k;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |p| p.get())
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let cfg = ScanConfig {
        task: args.task,
        from: args.from,
        to: args.to,
        workers: args.workers.unwrap_or_else(default_workers),
        out: args.out,
        checkpoint: args.checkpoint,
        format: args.format,
        max_blocks: args.max_blocks,
    };
    let summary = scan_range(&cfg)?;
    let rendered = serde_json::to_string_pretty(&summary)?;
    if cfg.out.is_some() {
        println!("{rendered}");
    } else {
        eprintln!("{rendered}");
    }
    Ok(summary.exit_code())
}

fn run_density(n: u64, variant: u8, z: f64) -> Result<()> {
    let seq = SiftedSequence::new(n, Variant::from_index(variant)?)?;
    let profile = seq.density_profile(z);
    let doc = json!({
        "n": profile.n,
        "variant": profile.variant.index(),
        "z": profile.z,
        "rho": profile.rho,
        "g_z": profile.g_z,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn run_eval(u_min: f64, u_max: f64, step: f64) -> Result<()> {
    if !(u_min > 0.0 && u_max >= u_min && u_max <= 512.0) {
        bail!("need 0 < u-min <= u-max <= 512");
    }
    if step <= 0.0 {
        bail!("--step must be positive");
    }
    let table = SieveFunctionTable::new(u_max.max(6.0))?;
    let mut out = String::from("u,F,f,D,integral\n");
    let steps = ((u_max - u_min) / step).round() as u64;
    for i in 0..=steps {
        let u = (u_min + i as f64 * step).min(u_max);
        let upper = table.upper(u)?;
        let lower = table.lower(u)?;
        // the Richert forms live on (1, 4] only; leave them blank elsewhere
        let (d, integral) = match (d_closed(u), richert_integral(u)) {
            (Ok(d), Ok(q)) => (sig12(d), sig12(q)),
            _ => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(u),
            sig12(upper),
            sig12(lower),
            d,
            integral
        ));
    }
    print!("{out}");
    Ok(())
}

fn run_weighted_sieve(n: u64, variant: u8, r: u32, delta: f64) -> Result<()> {
    let variant = Variant::from_index(variant)?;
    let seq = SiftedSequence::new(n, variant)?;
    let cfg = make_weight_config(r, delta, variant.degree())?;
    let report = weighted_count(&seq, &cfg);
    let doc = json!({
        "n": report.n,
        "variant": report.variant.index(),
        "r": report.cfg.r,
        "delta": report.cfg.delta,
        "u": report.cfg.u,
        "big_lambda": report.cfg.big_lambda,
        "lambda": report.cfg.lambda,
        "admissible": report.cfg.admissible,
        "z": report.z,
        "y_bound": report.y_bound,
        "w_value": report.w_value,
        "almost_prime_count": report.almost_prime_count,
        "sifted_count": report.sifted_count,
        "excluded_square": report.excluded_square,
        "main_term": report.main_term,
        "comparable": report.comparable,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn run_weights(r: u32, delta: f64, degree: u32) -> Result<()> {
    let cfg = make_weight_config(r, delta, degree)?;
    let doc = json!({
        "r": cfg.r,
        "delta": cfg.delta,
        "degree": cfg.degree,
        "u": cfg.u,
        "big_lambda": cfg.big_lambda,
        "lambda": cfg.lambda,
        "admissible": cfg.admissible,
        "main_term_constant": main_term_constant(&cfg),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Density { n, variant, z } => run_density(n, variant, z).map(|()| 0),
        Command::SieveFunctions(SieveFunctionsCmd::Eval { u_min, u_max, step }) => {
            run_eval(u_min, u_max, step).map(|()| 0)
        }
        Command::WeightedSieve { n, variant, r, delta } => {
            run_weighted_sieve(n, variant, r, delta).map(|()| 0)
        }
        Command::Weights { r, delta, degree } => run_weights(r, delta, degree).map(|()| 0),
    }
}

fn main() -> ExitCode {
    // clap's default usage-error code is 2, which is reserved here for
    // scans that found failure records; usage problems are operational
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
