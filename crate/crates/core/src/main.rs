use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vofwave::harness::validate::all_checks;
use vofwave::harness::{benchmark_tables, field_samples, run_single, run_table, Experiment, Ladder, RunConfig};

/// Rothe / Legendre-Galerkin solver for wave equations with variable-order
/// fractional damping.
#[derive(Parser)]
#[command(name = "vofwave", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `key = value` run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (directory for `tables`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Single run; writes `x,t,phi` samples with --out.
    Solve,
    /// Sweep step sizes at fixed N.
    ConvTime,
    /// Sweep truncations at fixed n.
    ConvSpace,
    /// Run the oracle suites.
    Validate,
    /// Time and space ladders for all benchmarks.
    Tables,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> vofwave::Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().or_else(|| cfg.out.as_ref().map(PathBuf::from));
    if let Some(k) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| vofwave::Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Solve => {
            let exp = Experiment::from_config(&cfg)?;
            let outcome = run_single(&exp, cfg.n_modes, cfg.n_steps)?;
            println!("problem   {}", exp.tag);
            println!("N, n      {}, {}", cfg.n_modes, cfg.n_steps);
            println!("residual  {:.3e}", outcome.report.max_residual());
            println!("elapsed   {:.3} s", outcome.report.elapsed.as_secs_f64());
            if let Some(e) = outcome.error {
                println!("E         {e:.5e}");
            }
            if let Some(path) = out {
                let mut w = csv::Writer::from_path(&path)?;
                w.write_record(["x", "t", "phi"])?;
                for (x, t, phi) in field_samples(&outcome, &cfg.dump_times, cfg.dump_points)? {
                    w.write_record([x.to_string(), t.to_string(), phi.to_string()])?;
                }
                w.flush()?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ConvTime | Command::ConvSpace => {
            let ladder = if matches!(cli.command, Command::ConvTime) { Ladder::Time } else { Ladder::Space };
            let exp = Experiment::from_config(&cfg)?;
            let (table, elapsed) = run_table(&exp, &cfg, ladder);
            eprint!("{table}");
            eprintln!("wall time {:.2} s", elapsed.as_secs_f64());
            match out {
                Some(path) => table.write_csv(fs::File::create(path)?)?,
                None => table.write_csv(io::stdout().lock())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate => {
            let checks = all_checks()?;
            let mut stdout = io::stdout().lock();
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Tables => {
            let dir = out.unwrap_or_else(|| PathBuf::from("tables"));
            fs::create_dir_all(&dir)?;
            for table in benchmark_tables()? {
                print!("{table}");
                write_table(&dir, &table)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_table(dir: &Path, table: &vofwave::harness::ConvergenceTable) -> vofwave::Result<()> {
    let path = dir.join(format!("{}-{}.csv", table.problem, table.ladder.tag()));
    table.write_csv(fs::File::create(path)?)
}
