use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use discernlab_cli::{
    dim_cap_from_env, exit, render_report, run_verify, write_atomically, CliError, FileConfig, OutputFormat,
};

/// Certify weak discernibility of similar quantum particles.
#[derive(Parser)]
#[command(name = "discernlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a certification and write its report
    Verify(VerifyArgs),
    /// Render a saved JSON report
    Render {
        /// Report written by `verify --format json`
        path: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: String,
        /// Write here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// C (commutator) or T (total spin)
    #[arg(long)]
    relation: Option<String>,
    /// Number of particles N
    #[arg(long)]
    particles: Option<usize>,
    /// Twice the spin, 2s
    #[arg(long)]
    two_s: Option<u32>,
    /// full, bose or fermi
    #[arg(long)]
    sector: Option<String>,
    #[arg(long)]
    pure_samples: Option<usize>,
    #[arg(long)]
    mixed_samples: Option<usize>,
    #[arg(long)]
    mixed_rank: Option<usize>,
    /// Per-variable polynomial degree of sampled wavefunctions (C only)
    #[arg(long)]
    max_degree: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Absolute tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Relative tolerance
    #[arg(long)]
    tol_rel: Option<f64>,
    /// Report path; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or markdown
    #[arg(long)]
    format: Option<String>,
    /// TOML file with the same keys as the flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl VerifyArgs {
    fn into_file_config(self) -> (Option<PathBuf>, FileConfig) {
        let flags = FileConfig {
            relation: self.relation,
            particles: self.particles,
            two_s: self.two_s,
            sector: self.sector,
            pure_samples: self.pure_samples,
            mixed_samples: self.mixed_samples,
            mixed_rank: self.mixed_rank,
            max_degree: self.max_degree,
            seed: self.seed,
            tol: self.tol,
            tol_rel: self.tol_rel,
            out: self.out,
            format: self.format,
        };
        (self.config, flags)
    }
}

fn verify(args: VerifyArgs) -> Result<i32, CliError> {
    let (config_path, flags) = args.into_file_config();
    let base = match config_path {
        Some(path) => FileConfig::load(&path)?,
        None => FileConfig::default(),
    };
    let config = base.overridden_by(flags).resolve(dim_cap_from_env()?)?;
    let outcome = run_verify(&config)?;
    if config.output.is_none() {
        print!("{}", outcome.document);
    }
    if outcome.exit_code != exit::CERTIFIED {
        eprintln!("verdict {}: weak discernibility not certified", outcome.report.verdict);
    }
    Ok(outcome.exit_code)
}

fn render(path: PathBuf, format: &str, out: Option<PathBuf>) -> Result<i32, CliError> {
    let format: OutputFormat = format.parse()?;
    let document = render_report(&path, format)?;
    match out {
        Some(target) => write_atomically(&target, &document)?,
        None => print!("{document}"),
    }
    Ok(exit::CERTIFIED)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Render { path, format, out } => render(path, &format, out),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("discernlab: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
