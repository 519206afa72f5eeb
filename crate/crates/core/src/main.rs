#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use riesz_sim::figure::{run_figure, FigureId, FigureWindow};
use riesz_sim::fracops::{riesz_finite, riesz_order_one, riesz_spectral};
use riesz_sim::io::{read_field_file, read_sidecar, sidecar_path, write_field_csv, write_json, write_profile};
use riesz_sim::profile::{refine_profile, ProfileSpec};
use riesz_sim::similarity::{reduced_ode_residual, PdeParams};
use riesz_sim::{ComplexField, Error, Grid1D, Result};

const THREADS_ENV: &str = "RIESZ_SIM_THREADS";
const PROFILE_TOL: f64 = 1e-2;
const RESIDUAL_TOL: f64 = 5e-2;
const MIN_POINTS: usize = 16;

#[derive(Parser)]
#[command(name = "riesz-sim", version, about = "Riesz-fractional operators and similarity profiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Spectral,
    Finite,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a Riesz derivative to a sampled field (CSV `x,re,im`).
    Operator {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "spectral")]
        method: Method,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file (standard output when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute a similarity profile and write it with a JSON sidecar.
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: f64,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        v_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        v_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Target for the convergence estimate.
        #[arg(long, default_value_t = PROFILE_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, default_value = "profile.csv")]
        output: PathBuf,
    },
    /// Residual of a profile file in the profile equation.
    Residual {
        input: PathBuf,
        /// Taken from the profile sidecar when omitted.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        /// Largest accepted relative residual.
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tol: f64,
        /// Report file (standard output when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the curves and manifest of one of the four profile figures.
    Figure {
        #[arg(long, allow_hyphen_values = true)]
        figure_id: i64,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        v_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        v_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Output directory.
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .map_err(|_| Error::Input(format!("{THREADS_ENV} must be a non-negative integer, got {text:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn check_window(v_min: f64, v_max: f64, points: usize) -> Result<Grid1D> {
    if !(v_min < v_max) || !v_min.is_finite() || !v_max.is_finite() {
        return Err(Error::Input(format!("need v_min < v_max, got [{v_min}, {v_max}]")));
    }
    if points < MIN_POINTS {
        return Err(Error::Input(format!("need at least {MIN_POINTS} points, got {points}")));
    }
    Grid1D::closed(v_min, v_max, points)
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn field_json(field: &ComplexField, axis: &str) -> serde_json::Value {
    let points: Vec<_> = field
        .grid()
        .coordinates()
        .zip(field.values())
        .map(|(x, z)| json!({ axis: x, "re": z.re, "im": z.im, "abs": z.norm() }))
        .collect();
    json!({ "points": points })
}

fn write_field(field: &ComplexField, axis: &str, format: Format, path: Option<&Path>) -> Result<()> {
    let mut out = output_writer(path)?;
    match format {
        Format::Csv => write_field_csv(&mut out, field, axis, false)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &field_json(field, axis))?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_operator(input: &Path, alpha: f64, method: Method, format: Format, output: Option<&Path>) -> Result<()> {
    let parsed = read_field_file(input)?;
    let result = match method {
        Method::Spectral if alpha == 1.0 => riesz_order_one(&parsed.field)?,
        Method::Spectral => {
            if !(alpha > 1.0 && alpha <= 2.0) {
                return Err(Error::Domain(format!("alpha = {alpha} outside [1, 2]")));
            }
            riesz_spectral(&parsed.field, alpha)?
        }
        Method::Finite => {
            let out = riesz_finite(&parsed.field, alpha)?;
            if let Some(w) = &out.warning {
                eprintln!("warning: {w}");
            }
            out.field
        }
    };
    write_field(&result, &parsed.axis, format, output)
}

#[allow(clippy::too_many_arguments)]
fn run_profile(
    alpha: f64,
    epsilon: f64,
    v_min: f64,
    v_max: f64,
    points: usize,
    tol: f64,
    format: Format,
    output: &Path,
) -> Result<()> {
    let spec = ProfileSpec::new(alpha, epsilon)?;
    let grid = check_window(v_min, v_max, points)?;
    let profile = refine_profile(&grid, &spec, tol)?;
    if profile.unconverged {
        eprintln!(
            "warning: profile unconverged: convergence estimate {:e} is not below {tol:e}",
            profile.convergence_estimate
        );
    }
    match format {
        Format::Csv => write_profile(output, &profile)?,
        Format::Json => {
            write_json(output, &field_json(&profile.field, "v"))?;
            write_json(&sidecar_path(output), &riesz_sim::io::ProfileSidecar::from(&profile))?;
        }
    }
    Ok(())
}

fn run_residual(
    input: &Path,
    alpha: Option<f64>,
    epsilon: Option<f64>,
    tol: f64,
    output: Option<&Path>,
) -> Result<()> {
    let parsed = read_field_file(input)?;
    let sidecar = read_sidecar(input)?;
    let pick = |flag: Option<f64>, from_sidecar: Option<f64>, name: &str| {
        flag.or(from_sidecar)
            .ok_or_else(|| Error::Input(format!("--{name} is required when the profile has no sidecar")))
    };
    let alpha = pick(alpha, sidecar.as_ref().map(|s| s.alpha), "alpha")?;
    let epsilon = pick(epsilon, sidecar.as_ref().map(|s| s.epsilon), "epsilon")?;
    let report = reduced_ode_residual(&parsed.field, &PdeParams::new(alpha, epsilon)?)?;
    let mut out = output_writer(output)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    out.write_all(b"\n")?;
    out.flush()?;
    if report.relative_linf < tol {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "relative residual {:e} is not below {tol:e}",
            report.relative_linf
        )))
    }
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Operator { input, alpha, method, format, output } => {
            run_operator(&input, alpha, method, format, output.as_deref())
        }
        Command::Profile { alpha, epsilon, v_min, v_max, points, tol, format, output } => {
            run_profile(alpha, epsilon, v_min, v_max, points, tol, format, &output)
        }
        Command::Residual { input, alpha, epsilon, tol, output } => {
            run_residual(&input, alpha, epsilon, tol, output.as_deref())
        }
        Command::Figure { figure_id, v_min, v_max, points, output } => {
            let id = FigureId::new(figure_id)?;
            check_window(v_min, v_max, points)?;
            let manifest = run_figure(id, &FigureWindow { v_min, v_max, points }, &output)?;
            eprintln!("wrote {}", manifest.display());
            Ok(())
        }
    }
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
