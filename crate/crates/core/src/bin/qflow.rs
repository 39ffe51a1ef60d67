use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qflow::harness::cfl::{cfl_search, loglog_slope, write_cfl_csv};
use qflow::harness::convergence::{converge_space, converge_time, write_convergence_csv, ConvergenceRow};
use qflow::harness::output::write_text;
use qflow::harness::{run_experiment, tactoid_run, ExperimentConfig, ExperimentKind};
use qflow::Result;

#[derive(Parser)]
#[command(name = "qflow", version, about = "Q-tensor gradient-flow experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single trajectory with energy trace and snapshots.
    Run(Common),
    /// Spatial refinement study.
    ConvergeSpace(Common),
    /// Temporal refinement study.
    ConvergeTime(Common),
    /// Largest convergent time step per mesh width.
    Cfl(Common),
    /// Decaying tactoid on the unit disk.
    Tactoid(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `[output] dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Use the long-running published study sizes.
    #[arg(long)]
    paper_scale: bool,
}

fn print_rows(name: &str, rows: &[ConvergenceRow]) {
    let o = |v: Option<f64>| v.map(|v| format!("{v:.4}")).unwrap_or_else(|| "-".into());
    println!("{name:>12} {:>12} {:>8} {:>12} {:>8}", "field_error", "order", "energy_error", "order");
    for r in rows {
        println!(
            "{:>12.5e} {:>12.4e} {:>8} {:>12.4e} {:>8}",
            r.param,
            r.field_error,
            o(r.field_order),
            r.energy_error,
            o(r.energy_order)
        );
    }
}

fn execute(kind: ExperimentKind, args: &Common) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if args.paper_scale {
        cfg = cfg.paper_scale(kind);
    }
    if let Some(out) = &args.out {
        cfg.output.dir = out.clone();
    }
    let cfg = cfg.resolve(kind)?;
    let out: &Path = &cfg.output.dir;
    write_text(out.join("config.toml"), &cfg.to_toml())?;
    let started = Instant::now();
    let mut report = |msg: &str| eprintln!("[{:>8.1}s] {msg}", started.elapsed().as_secs_f64());
    match kind {
        ExperimentKind::Run => {
            let o = run_experiment(&cfg, Some(out), &mut report)?;
            println!("final energy {:.12e} after {} steps", o.energies.last().unwrap().total, o.stats.len());
        }
        ExperimentKind::Tactoid => {
            let o = tactoid_run(&cfg, Some(out), &mut report)?;
            println!("final energy {:.12e} after {} steps", o.energies.last().unwrap().total, o.stats.len());
        }
        ExperimentKind::ConvergeSpace | ExperimentKind::ConvergeTime => {
            let (file, label) = if kind == ExperimentKind::ConvergeSpace {
                ("convergence_space.csv", "h")
            } else {
                ("convergence_time.csv", "dt")
            };
            let result = if kind == ExperimentKind::ConvergeSpace {
                converge_space(&cfg, &mut report)
            } else {
                converge_time(&cfg, &mut report)
            };
            let (rows, err) = match result {
                Ok(rows) => (rows, None),
                Err(f) => (f.rows, Some(f.error)),
            };
            write_convergence_csv(out.join(file), &rows)?;
            print_rows(label, &rows);
            if let Some(e) = err {
                return Err(e);
            }
        }
        ExperimentKind::Cfl => {
            let rows = cfl_search(&cfg, &mut report)?;
            write_cfl_csv(out.join("cfl.csv"), &rows)?;
            println!("{:>10} {:>12} {:>8}", "h", "dt_max", "order");
            for r in &rows {
                let o = r.order.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());
                println!("{:>10} {:>12.4e} {:>8}", r.h, r.dt_max, o);
            }
            if rows.len() > 1 {
                let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
                let dt: Vec<f64> = rows.iter().map(|r| r.dt_max).collect();
                println!("log-log slope {:.3}", loglog_slope(&h, &dt));
            }
        }
    }
    eprintln!("results in {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Run(a) => (ExperimentKind::Run, a),
        Command::ConvergeSpace(a) => (ExperimentKind::ConvergeSpace, a),
        Command::ConvergeTime(a) => (ExperimentKind::ConvergeTime, a),
        Command::Cfl(a) => (ExperimentKind::Cfl, a),
        Command::Tactoid(a) => (ExperimentKind::Tactoid, a),
    };
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
