use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use finsler_harness::report::verdict_label;
use finsler_harness::spectrum::SpectrumArtifact;
use finsler_harness::tools::{GeodesicArtifact, VolumeArtifact};
use finsler_harness::{
    run_geodesic, run_killing, run_spectrum, run_verify, run_volume, Format, HarnessError, SuiteConfig,
    VerificationReport,
};

/// Verification campaigns for Finsler spacetimes.
///
/// Exit status: 0 when every check passes, 1 when any check fails or hits a
/// numerical error, 2 on a configuration or i/o problem. The worker thread
/// count is read from FINSLER_THREADS.
#[derive(Parser)]
#[command(name = "finsler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML suite configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Replaces the solution epsilon and the spectral epsilon list.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    #[arg(long, global = true)]
    lmax: Option<usize>,

    /// Tolerance override, repeatable.
    #[arg(long = "tol", global = true, value_name = "NAME=VAL")]
    tolerances: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Curvature, oracle, flag-curvature and Killing checks.
    Verify,
    /// Sphere Laplacian spectrum against perturbation theory.
    Spectrum,
    /// Killing residuals and the Killing null-space dimension.
    Killing,
    /// Holmes-Thompson and Busemann-Hausdorff areas.
    Volume,
    /// One geodesic and the conservation of F^2 along it.
    Geodesic,
}

fn configure(cli: &Cli) -> Result<SuiteConfig, HarnessError> {
    let mut config = match &cli.config {
        Some(path) => SuiteConfig::load(path)?,
        None => SuiteConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(eps) = cli.epsilon {
        config.solution.epsilon = eps;
        config.spectral.epsilons = vec![eps];
    }
    if let Some(l_max) = cli.lmax {
        config.spectral.l_max = l_max;
    }
    for t in &cli.tolerances {
        config.set_tolerance(t)?;
    }
    if let Some(format) = cli.format {
        config.output.format = format;
    }
    if let Some(out) = &cli.out {
        config.output.path = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn init_threads() -> Result<(), HarnessError> {
    let Ok(value) = std::env::var("FINSLER_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .map_err(|_| HarnessError::config(format!("FINSLER_THREADS={value:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| HarnessError::config(e.to_string()))
}

fn render<T: serde::Serialize>(value: &T, csv: impl FnOnce(&T) -> String, format: Format) -> Result<String, HarnessError> {
    Ok(match format {
        Format::Csv => csv(value),
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
    })
}

/// Runs the campaign and returns the report plus the rendered artifact.
fn execute(command: Command, config: &SuiteConfig) -> Result<(VerificationReport, String), HarnessError> {
    let format = config.output.format;
    Ok(match command {
        Command::Verify => {
            let r = run_verify(config)?;
            let text = render(&r, VerificationReport::to_csv, format)?;
            (r, text)
        }
        Command::Killing => {
            let r = run_killing(config)?;
            let text = render(&r, VerificationReport::to_csv, format)?;
            (r, text)
        }
        Command::Spectrum => {
            let a = run_spectrum(config)?;
            (a.report.clone(), render(&a, SpectrumArtifact::to_csv, format)?)
        }
        Command::Volume => {
            let a = run_volume(config)?;
            (a.report.clone(), render(&a, VolumeArtifact::to_csv, format)?)
        }
        Command::Geodesic => {
            let a = run_geodesic(config)?;
            (a.report.clone(), render(&a, GeodesicArtifact::to_csv, format)?)
        }
    })
}

fn emit(config: &SuiteConfig, text: &str) -> Result<(), HarnessError> {
    match &config.output.path {
        Some(path) => std::fs::write(path, text).map_err(|e| HarnessError::io(path.display().to_string(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| HarnessError::io("stdout", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = init_threads()
        .and_then(|_| configure(&cli))
        .and_then(|config| {
            let (report, text) = execute(cli.command, &config)?;
            emit(&config, &text)?;
            Ok(report)
        });
    match outcome {
        Ok(report) => {
            for c in &report.checks {
                eprintln!(
                    "{:<5} {:<20} max {:.3e}  tol {:.1e}{}",
                    verdict_label(c.verdict),
                    c.name,
                    c.max_residual,
                    c.tolerance,
                    c.note.as_ref().map(|n| format!("  ({n})")).unwrap_or_default()
                );
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
