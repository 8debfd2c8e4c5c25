//! `verify` runs and atomic report output.

use std::io::Write as _;
use std::path::Path;

use discernlab_core::{certify_weak_discernibility, DiscernibilityReport, Relation};

use crate::config::RunConfig;
use crate::error::{verdict_exit_code, CliError};
use crate::render::render;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: DiscernibilityReport,
    pub exit_code: i32,
    /// The rendered document, in the configured format.
    pub document: String,
}

fn run(config: &RunConfig, relation: Relation) -> Result<RunOutcome, CliError> {
    if config.relation != relation {
        return Err(CliError::Usage(format!(
            "configuration is for relation {}, not {relation}",
            config.relation
        )));
    }
    config.validate()?;
    let mut report = certify_weak_discernibility(relation, &config.certify_config())?;
    report.timestamp = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let document = render(&report, config.format)?;
    if let Some(path) = &config.output {
        write_atomically(path, &document)?;
    }
    Ok(RunOutcome {
        exit_code: verdict_exit_code(report.verdict),
        report,
        document,
    })
}

/// Certifies the total-spin relation.
pub fn run_verify_t(config: &RunConfig) -> Result<RunOutcome, CliError> {
    run(config, Relation::T)
}

/// Certifies the commutator relation with exact arithmetic.
pub fn run_verify_c(config: &RunConfig) -> Result<RunOutcome, CliError> {
    run(config, Relation::C)
}

pub fn run_verify(config: &RunConfig) -> Result<RunOutcome, CliError> {
    run(config, config.relation)
}

/// Writes to a temporary file in the target directory, then renames it.
pub fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Internal(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
