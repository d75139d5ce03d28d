//! Command-line front end for the intercept-probability library.
//!
//! Subcommands: `describe` (resolved configuration and derived parameters as
//! JSON), `point` (one operating point by the requested routes, JSON),
//! `sweep` (one- or two-axis CSV sweeps), `figure` (preset sweeps behind the
//! study figures), and `validate` (the self-check suite, JSON report).
//!
//! Exit codes: 0 success; 1 bad invocation or configuration; 2 validation
//! suite found failing checks; 3 runtime failure (computation or output).

pub mod args;
pub mod config_file;
pub mod figures;
pub mod point;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command, ComputeArgs, ConfigArgs, Methods};

/// Error classified by how the process should exit.
enum CliError {
    /// Bad invocation or configuration (exit 1).
    Usage(anyhow::Error),
    /// Computation or output failure (exit 3).
    Compute(anyhow::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(_) => 3,
        }
    }

    fn message(&self) -> &anyhow::Error {
        match self {
            CliError::Usage(e) | CliError::Compute(e) => e,
        }
    }
}

fn usage<T>(r: Result<T>) -> std::result::Result<T, CliError> {
    r.map_err(CliError::Usage)
}

fn compute<T>(r: Result<T>) -> std::result::Result<T, CliError> {
    r.map_err(CliError::Compute)
}

/// Entry point used by `main`: parse `argv`, run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    // Default to showing warnings (zero-hit Monte Carlo cells, quadrature
    // trouble) on stderr; RUST_LOG overrides. Re-initialisation fails when
    // tests call `run` repeatedly, which is fine.
    let _ = env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or("warn"),
    )
    .try_init();

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: Cli) -> std::result::Result<i32, CliError> {
    match cli.command {
        Command::Describe { config } => cmd_describe(&config),
        Command::Point { config, compute } => cmd_point(&config, &compute),
        Command::Sweep {
            config,
            compute,
            axes,
            out,
        } => cmd_sweep(&config, &compute, &axes, out.as_deref()),
        Command::Figure {
            name,
            list,
            config,
            compute,
            out,
        } => cmd_figure(name.as_deref(), list, &config, &compute, out.as_deref()),
        Command::Validate { seed } => cmd_validate(seed),
    }
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, value)?;
    stdout.write_all(b"\n")?;
    Ok(())
}

fn write_csv(output: &sweep::SweepOutput, out: Option<&Path>) -> Result<()> {
    let bytes = sweep::to_csv(output)?;
    match out {
        Some(path) => std::fs::write(path, &bytes)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

/// After the CSV is written: nonzero exit if any quadrature point failed to
/// converge, so scripts notice incomplete columns.
fn csv_exit(output: &sweep::SweepOutput) -> std::result::Result<i32, CliError> {
    if output.numeric_failures > 0 {
        Err(CliError::Compute(anyhow::anyhow!(
            "{} point(s) left empty because quadrature did not converge \
             (the CSV rows above are otherwise complete)",
            output.numeric_failures
        )))
    } else {
        Ok(0)
    }
}

fn resolve_methods(compute_args: &ComputeArgs) -> Result<Methods> {
    match &compute_args.methods {
        Some(raw) => Methods::parse(raw),
        None => Ok(Methods::ALL),
    }
}

fn check_samples(methods: Methods, samples: u64) -> Result<()> {
    if methods.mc && samples == 0 {
        anyhow::bail!("--samples must be positive when the Monte Carlo route runs");
    }
    Ok(())
}

fn cmd_describe(config: &ConfigArgs) -> std::result::Result<i32, CliError> {
    let cfg = usage(config.resolve())?;
    let value = compute(point::describe_json(&cfg))?;
    compute(print_json(&value))?;
    Ok(0)
}

fn cmd_point(
    config: &ConfigArgs,
    compute_args: &ComputeArgs,
) -> std::result::Result<i32, CliError> {
    let cfg = usage(config.resolve())?;
    let methods = usage(resolve_methods(compute_args))?;
    usage(check_samples(methods, compute_args.samples))?;
    let (value, produced) = compute(point::point_json(
        &cfg,
        methods,
        compute_args.samples,
        compute_args.seed,
    ))?;
    compute(print_json(&value))?;
    if produced == 0 {
        return Err(CliError::Usage(anyhow::anyhow!(
            "none of the requested routes supports this configuration \
             (see the `unsupported` entries above)"
        )));
    }
    Ok(0)
}

fn cmd_sweep(
    config: &ConfigArgs,
    compute_args: &ComputeArgs,
    axes: &[String],
    out: Option<&Path>,
) -> std::result::Result<i32, CliError> {
    let cfg = usage(config.resolve())?;
    let methods = usage(resolve_methods(compute_args))?;
    usage(check_samples(methods, compute_args.samples))?;
    let parsed = usage(axes.iter().map(|s| sweep::parse_axis(s)).collect::<Result<Vec<_>>>())?;
    let points = usage(sweep::build_points(&cfg, &parsed))?;
    let spec = sweep::SweepSpec {
        axes: parsed,
        methods,
        samples: compute_args.samples,
        seed: compute_args.seed,
    };
    let output = compute(sweep::compute_points(&points, &spec))?;
    compute(write_csv(&output, out))?;
    csv_exit(&output)
}

fn cmd_figure(
    name: Option<&str>,
    list: bool,
    config: &ConfigArgs,
    compute_args: &ComputeArgs,
    out: Option<&Path>,
) -> std::result::Result<i32, CliError> {
    if list {
        print!("{}", figures::listing());
        return Ok(0);
    }
    let Some(name) = name else {
        return Err(CliError::Usage(anyhow::anyhow!(
            "missing figure name (try --list)"
        )));
    };
    let Some(fig) = figures::lookup(name) else {
        return Err(CliError::Usage(anyhow::anyhow!(
            "unknown figure '{name}' (try --list)"
        )));
    };
    let cfg = usage(config.resolve())?;

    let output = if matches!(fig.kind, figures::Kind::DiversityTable) {
        compute(figures::diversity_table(&cfg))?
    } else {
        let methods_override = match &compute_args.methods {
            Some(raw) => Some(usage(Methods::parse(raw))?),
            None => None,
        };
        let (base, spec) = usage(figures::sweep_spec(
            fig,
            &cfg,
            compute_args.samples,
            compute_args.seed,
            methods_override,
        ))?;
        usage(check_samples(spec.methods, spec.samples))?;
        let points = usage(sweep::build_points(&base, &spec.axes))?;
        compute(sweep::compute_points(&points, &spec))?
    };
    compute(write_csv(&output, out))?;
    csv_exit(&output)
}

fn cmd_validate(seed: u64) -> std::result::Result<i32, CliError> {
    let report = validate::run_suite(seed);
    compute(print_json(&validate::report_json(&report)))?;
    Ok(validate::exit_code(&report))
}
