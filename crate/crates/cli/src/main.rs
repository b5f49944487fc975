use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghzsim_core::scenario::{
    compare, parse_scenario, preset, read_csv, render_csv, run_preset, run_scenario, steady_scenario, write_csv,
};
use ghzsim_core::scheme1::gamma_eff_oracle;
use ghzsim_core::Error;

#[derive(Parser)]
#[command(
    name = "ghzsim",
    version,
    about = "Dissipative GHZ-state preparation in Rydberg registers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario file and write its CSV.
    Simulate {
        scenario: PathBuf,
        /// Output path; overrides the scenario's `output` key. Without either, CSV goes to stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a named figure preset and print its headline figures.
    Preset {
        name: String,
        /// CSV destination, default `<name>.csv`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the configuration and exit without running.
        #[arg(long)]
        show: bool,
    },
    /// Steady state of a time-independent scenario.
    Steady { scenario: PathBuf },
    /// Analytical cross-checks.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
    /// Maximum per-column deviation between two CSV files.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum Oracle {
    /// Fit the decay of |r> through the short-lived |e> and compare with 4*Omega0^2/Gamma.
    GammaEff {
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        gamma: f64,
        /// Integration horizon; default covers a few effective lifetimes.
        #[arg(long)]
        t_end: Option<f64>,
        /// Run even when Gamma < 5*Omega0.
        #[arg(long)]
        force: bool,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numerical { .. } | Error::NonUniqueSteadyState { .. } => 3,
        Error::Argument(_) | Error::DimensionMismatch { .. } | Error::Config { .. } | Error::Io(_) => 2,
    }
}

fn load_scenario(path: &Path) -> Result<ghzsim_core::scenario::Scenario, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate { scenario, output } => {
            let s = load_scenario(&scenario)?;
            let traj = run_scenario(&s)?;
            match output.or(s.output.map(PathBuf::from)) {
                Some(path) => {
                    write_csv(&traj.series, &path)?;
                    let d = traj.diagnostics;
                    eprintln!(
                        "{} samples, {} steps -> {} (max trace drift {:.1e}, min eigenvalue {:.1e})",
                        traj.series.len(),
                        d.steps,
                        path.display(),
                        d.max_trace_drift,
                        d.min_eigenvalue
                    );
                }
                None => print!("{}", render_csv(&traj.series)),
            }
        }
        Command::Preset { name, output, show } => {
            let p = preset(&name)?;
            if show {
                println!("# {}: {}", p.name, p.description);
                for (tag, s) in &p.runs {
                    println!("\n# run `{tag}`");
                    print!("{}", ghzsim_core::scenario::render_scenario(s));
                }
                return Ok(());
            }
            let result = run_preset(&name)?;
            let path = output.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
            write_csv(&result.series, &path)?;
            println!("{name}: {}", p.description);
            for h in &result.headlines {
                println!(
                    "  {:<44} {:.6}   reference {} ± {}   {}",
                    h.headline.description,
                    h.value,
                    h.headline.reference,
                    h.headline.tolerance,
                    if h.within_tolerance() { "ok" } else { "outside" }
                );
            }
            println!("  wrote {}", path.display());
        }
        Command::Steady { scenario } => {
            let s = load_scenario(&scenario)?;
            let r = steady_scenario(&s)?;
            println!("smallest |eigenvalue| {:.3e}", r.smallest.norm());
            println!("second   |eigenvalue| {:.3e}", r.second.norm());
            for (label, v) in &r.values {
                println!("{label} = {v:.12}");
            }
        }
        Command::Oracle {
            which:
                Oracle::GammaEff {
                    omega0,
                    gamma,
                    t_end,
                    force,
                },
        } => {
            let rate = 4.0 * omega0 * omega0 / gamma;
            let t_end = t_end.unwrap_or(if rate > 0.0 { 4.0 / rate } else { 10.0 });
            let fit = gamma_eff_oracle(omega0, gamma, t_end, force)?;
            let rel = (fit.fitted - fit.closed_form).abs() / fit.closed_form;
            println!("fitted      {:.10}", fit.fitted);
            println!("closed form {:.10}", fit.closed_form);
            println!("relative    {rel:.3e}");
        }
        Command::Compare { a, b } => {
            let report = compare(&read_csv(&a)?, &read_csv(&b)?)?;
            for e in &report.entries {
                println!("{:<16} max |Δ| = {:.6e} at t = {}", e.label, e.max_deviation, e.at_time);
            }
            println!("overall max |Δ| = {:.6e}", report.max_deviation());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
