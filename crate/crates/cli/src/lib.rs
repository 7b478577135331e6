//! `contactsim` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or configuration errors, 2 when the
//! simulation itself fails (non-converged solver, unsupported pairing, IO).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use contactsim::bench::{time_cell, time_narrow_phase, BenchReport, PAIRINGS};
use contactsim::export::{self, Format};
use contactsim::{plot, Backend, Error, Scenario, SolverSettings, SCENARIO_NAMES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "contactsim", version, about = "Rigid-body contact simulation with SAT and convex-optimization narrow phases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and export its trajectory.
    Simulate(SimulateArgs),
    /// Time every scenario under each backend.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value = "sat")]
    backend: Backend,
    /// Time step, s.
    #[arg(long)]
    dt: Option<f64>,
    /// Simulated time, s.
    #[arg(long)]
    duration: Option<f64>,
    /// JSON document overriding scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// SVG output path (planar scenarios only).
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    repeat: u64,
    #[arg(long, value_delimiter = ',')]
    scenarios: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', default_value = "sat,co")]
    backends: Vec<Backend>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Detect calls per (pairing, backend) in the narrow-phase timing.
    #[arg(long, default_value_t = 100_000)]
    calls: usize,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownScenario(_)
        | Error::InvalidConfig(_)
        | Error::InvalidSettings(_)
        | Error::InvalidBody(_)
        | Error::InvalidShape(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return EXIT_OK;
            }
            let text = e.render().to_string();
            eprint!("{text}");
            if !text.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == EXIT_USAGE {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            code
        }
    }
}

fn load_scenario(name: &str, config: Option<&Path>) -> contactsim::Result<Scenario> {
    let scenario = Scenario::named(name)?;
    let Some(path) = config else { return Ok(scenario) };
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    scenario.with_overrides(&value)
}

fn simulate(a: SimulateArgs) -> contactsim::Result<()> {
    let mut scenario = load_scenario(&a.scenario, a.config.as_deref())?;
    scenario.config.backend = a.backend;
    scenario.config.seed = a.seed;
    if let Some(dt) = a.dt {
        scenario.config.dt = dt;
    }
    if let Some(duration) = a.duration {
        scenario.config.duration = duration;
    }
    log::info!("simulating {} with {} for {} steps", scenario.name, a.backend, scenario.config.steps());
    let traj = scenario.run()?;

    if let Some(out) = &a.out {
        export::export_trajectory(&traj, a.format, out)?;
        log::info!("wrote {}", out.display());
    }
    if let Some(svg) = &a.plot {
        match plot::export_plot(&traj, svg) {
            Err(Error::Unsupported3D) => eprintln!("note: {} is a 3D scenario; skipping plot", scenario.name),
            other => other?,
        }
    }
    let saturated = traj.events.iter().filter(|e| e.saturated).count();
    println!(
        "{}: {} samples, {} contact events ({} saturated), t = {:.6} s",
        scenario.name,
        traj.samples.len(),
        traj.events.len(),
        saturated,
        traj.samples.last().map_or(0.0, |s| s.t)
    );
    Ok(())
}

fn bench(a: BenchArgs) -> contactsim::Result<()> {
    let names: Vec<String> = match a.scenarios {
        Some(list) => list.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => SCENARIO_NAMES.iter().map(|s| s.to_string()).collect(),
    };
    let scenarios = names.iter().map(|n| Scenario::named(n)).collect::<contactsim::Result<Vec<_>>>()?;
    let repeat = a.repeat as usize;

    let mut rows = Vec::new();
    for s in &scenarios {
        for &backend in &a.backends {
            log::info!("timing {} / {backend}", s.name);
            rows.push(time_cell(s, backend, repeat));
        }
    }
    let settings = SolverSettings::default();
    let narrow: Vec<_> = PAIRINGS
        .iter()
        .flat_map(|p| a.backends.iter().map(|&b| time_narrow_phase(p, b, a.calls, &settings)).collect::<Vec<_>>())
        .collect();
    let report = BenchReport::new(repeat, rows, narrow);

    let mut stdout = std::io::stdout().lock();
    let _ = print_report(&mut stdout, &report);
    if let Some(out) = &a.out {
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::Format { path: out.clone(), message: e.to_string() })?;
        std::fs::write(out, json + "\n").map_err(|e| Error::io(out, e))?;
    }
    Ok(())
}

fn print_report(w: &mut impl Write, r: &BenchReport) -> std::io::Result<()> {
    writeln!(w, "{:<16} {:<4} {:>12} {:>12} {:>7}", "scenario", "bk", "mean [s]", "std [s]", "steps")?;
    for row in &r.rows {
        match &row.error {
            None => writeln!(
                w,
                "{:<16} {:<4} {:>12.6} {:>12.6} {:>7}",
                row.scenario, row.backend, row.mean_s, row.std_s, row.steps
            )?,
            Some(e) => writeln!(w, "{:<16} {:<4} error: {e}", row.scenario, row.backend)?,
        }
    }
    writeln!(w)?;
    writeln!(w, "{:<16} {:<4} {:>10} {:>14}", "pairing", "bk", "calls", "ns/call")?;
    for row in &r.narrow_phase {
        match &row.error {
            None => writeln!(w, "{:<16} {:<4} {:>10} {:>14.1}", row.pairing, row.backend, row.calls, row.per_call_ns)?,
            Some(e) => writeln!(w, "{:<16} {:<4} error: {e}", row.pairing, row.backend)?,
        }
    }
    if let Some(ratio) = r.sphere_cuboid_co_over_sat {
        let verdict = if ratio <= 1.0 { "co no slower than sat" } else { "co slower than sat" };
        writeln!(w, "\nsphere-cuboid co/sat per-call ratio: {ratio:.3} ({verdict})")?;
    }
    Ok(())
}
