use std::path::PathBuf;
use std::process::ExitCode;

use backstep_cli::config::CaseSpec;
use backstep_cli::error::{CliError, Result};
use backstep_cli::sweep::Axis;
use backstep_cli::{
    parse_config, run_experiment, run_preset, run_sweep, summary_csv, write_artifacts,
};
use backstep_core::kernels::{gain_row, KernelParams};
use backstep_core::schedule::{zeta, HORIZON_TOL};
use backstep_core::{Grid, Schedule};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "backstep",
    version,
    about = "Fixed-time backstepping experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
}

#[derive(Subcommand)]
enum Command {
    /// Riemann zeta function
    Zeta {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = HORIZON_TOL)]
        tol: f64,
    },
    /// Print segment times and gains
    Schedule {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, default_value_t = 1.9)]
        p: f64,
        #[arg(long, default_value_t = 1.5)]
        t0: f64,
        #[arg(long, default_value_t = 3.5)]
        lambda0: f64,
        #[arg(long, default_value_t = 2)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0)]
        gamma0: f64,
    },
    /// Write the gain row k(1, y) as CSV
    Kernel {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 201)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run an experiment file
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output.dir`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a reference experiment
    Preset {
        #[arg(long)]
        name: String,
        /// Output directory, default `out/<name>`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat an experiment over one parameter
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// A, N, dt_base, sigma or n_max
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
        /// Summary CSV path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Zeta { p, tol } => println!("{:.15}", zeta(p, tol)?),
        Command::Schedule {
            case,
            p,
            t0,
            lambda0,
            n_max,
            gamma0,
        } => {
            let s = match case {
                CaseArg::One => Schedule::case1(p, lambda0, n_max)?,
                CaseArg::Two => Schedule::case2(t0, lambda0, n_max)?,
            };
            println!("n,t_start,t_end,lambda,s");
            for n in 0..s.segment_count() {
                let (a, b) = s.segment_bounds(n);
                println!("{n},{a:.10},{b:.10},{:.10},{:.10}", s.lambda[n], s.s[n]);
            }
            let r = s.check_rapid_convergence(gamma0);
            eprintln!("T0 = {:.10}", s.horizon);
            eprintln!("r_n = {:?}", r.r);
            eprintln!("r_n >= {gamma0} for all n >= {:?}", r.satisfied_from);
        }
        Command::Kernel {
            lambda,
            c,
            a,
            n,
            out,
        } => {
            let row = gain_row(&KernelParams::new(lambda, a, c)?, &Grid::uniform(n)?)?;
            let file = std::fs::File::create(&out).map_err(|e| CliError::io(&out, e))?;
            row.write_csv(std::io::BufWriter::new(file))
                .map_err(|e| CliError::io(&out, e))?;
            eprintln!("wrote {}", out.display());
        }
        Command::Simulate { config, out } => {
            let cfg = parse_config(&config)?;
            let dir = out
                .or_else(|| cfg.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let outcome = run_experiment(&cfg)?;
            for path in write_artifacts(&outcome, &dir)? {
                eprintln!("wrote {}", path.display());
            }
            print!("{}", outcome.report_text());
        }
        Command::Preset { name, out } => {
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(&name));
            let outcome = run_preset(&name, &dir)?;
            if let CaseSpec::OpenLoop { .. } = outcome.config.case {
                eprintln!(
                    "open loop: ||u||_2 grows by {:.3e}",
                    outcome.trace.l2_u.last().unwrap() / outcome.trace.l2_u[0]
                );
            }
            eprintln!("wrote {}", dir.display());
            print!("{}", outcome.report_text());
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
        } => {
            let axis: Axis = axis.parse()?;
            let cfg = parse_config(&config)?;
            let rows = run_sweep(&cfg, axis, &values);
            let csv = summary_csv(axis, &rows);
            match out {
                Some(path) => std::fs::write(&path, csv).map_err(|e| CliError::io(&path, e))?,
                None => print!("{csv}"),
            }
            let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
            if failed > 0 {
                eprintln!("{failed} of {} runs failed", rows.len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
