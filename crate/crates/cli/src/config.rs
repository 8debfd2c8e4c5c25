//! Run configuration: defaults, then a TOML file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use discernlab_core::discern::CertifyConfig;
use discernlab_core::{Relation, Sector, SpinLabel, Tolerances, DEFAULT_DIM_CAP};
use serde::Deserialize;

use crate::error::CliError;

pub const DIM_CAP_ENV: &str = "DISCERNLAB_DIM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(CliError::Usage(format!(
                "unknown format `{other}` (expected json or markdown)"
            ))),
        }
    }
}

/// Every setting of a `verify` run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub relation: Relation,
    pub n_particles: usize,
    pub two_s: u32,
    pub sector: Sector,
    pub n_pure_samples: usize,
    pub n_mixed_samples: usize,
    pub mixed_rank: usize,
    pub max_degree: u32,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub dim_cap: usize,
}

impl RunConfig {
    pub fn new(relation: Relation) -> Self {
        Self {
            relation,
            n_particles: 2,
            two_s: 1,
            sector: Sector::Full,
            n_pure_samples: 1000,
            n_mixed_samples: 200,
            mixed_rank: 2,
            max_degree: 6,
            seed: 0,
            tolerances: Tolerances::default(),
            output: None,
            format: OutputFormat::Json,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_particles < 2 {
            return Err(CliError::Usage(format!(
                "--particles must be at least 2, got {}",
                self.n_particles
            )));
        }
        if self.relation == Relation::T && self.two_s == 0 {
            return Err(CliError::Usage("relation T needs --two-s at least 1".into()));
        }
        if self.mixed_rank == 0 {
            return Err(CliError::Usage("--mixed-rank must be at least 1".into()));
        }
        let tol = &self.tolerances;
        if !(tol.abs > 0.0 && tol.rel > 0.0 && tol.level_grouping > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn certify_config(&self) -> CertifyConfig {
        CertifyConfig {
            n_particles: self.n_particles,
            spin: SpinLabel::from_doubled(self.two_s),
            sector: self.sector,
            pure_samples: self.n_pure_samples,
            mixed_samples: self.n_mixed_samples,
            mixed_rank: self.mixed_rank,
            max_degree: self.max_degree,
            seed: self.seed,
            tolerances: self.tolerances,
            dim_cap: self.dim_cap,
        }
    }
}

/// Keys accepted in a config file; all optional, names match the flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub relation: Option<String>,
    pub particles: Option<usize>,
    pub two_s: Option<u32>,
    pub sector: Option<String>,
    pub pure_samples: Option<usize>,
    pub mixed_samples: Option<usize>,
    pub mixed_rank: Option<usize>,
    pub max_degree: Option<u32>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub tol_rel: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    /// Layers `over` on top of `self`: every key set in `over` wins.
    pub fn overridden_by(self, over: FileConfig) -> FileConfig {
        FileConfig {
            relation: over.relation.or(self.relation),
            particles: over.particles.or(self.particles),
            two_s: over.two_s.or(self.two_s),
            sector: over.sector.or(self.sector),
            pure_samples: over.pure_samples.or(self.pure_samples),
            mixed_samples: over.mixed_samples.or(self.mixed_samples),
            mixed_rank: over.mixed_rank.or(self.mixed_rank),
            max_degree: over.max_degree.or(self.max_degree),
            seed: over.seed.or(self.seed),
            tol: over.tol.or(self.tol),
            tol_rel: over.tol_rel.or(self.tol_rel),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    /// Fills defaults for absent keys and validates the result.
    pub fn resolve(self, dim_cap: usize) -> Result<RunConfig, CliError> {
        let relation_text = self
            .relation
            .ok_or_else(|| CliError::Usage("--relation is required (C or T)".into()))?;
        let relation = Relation::from_str(&relation_text).map_err(CliError::from)?;
        let mut config = RunConfig::new(relation);
        config.dim_cap = dim_cap;
        if let Some(v) = self.particles {
            config.n_particles = v;
        }
        if let Some(v) = self.two_s {
            config.two_s = v;
        } else if relation == Relation::C {
            config.two_s = 0;
        }
        if let Some(v) = self.sector {
            config.sector = Sector::from_str(&v).map_err(CliError::from)?;
        }
        if let Some(v) = self.pure_samples {
            config.n_pure_samples = v;
        }
        if let Some(v) = self.mixed_samples {
            config.n_mixed_samples = v;
        }
        if let Some(v) = self.mixed_rank {
            config.mixed_rank = v;
        }
        if let Some(v) = self.max_degree {
            config.max_degree = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.tol {
            config.tolerances.abs = v;
        }
        if let Some(v) = self.tol_rel {
            config.tolerances.rel = v;
        }
        config.output = self.out;
        if let Some(v) = self.format {
            config.format = v.parse()?;
        }
        config.validate()?;
        Ok(config)
    }
}

/// Dimension cap from the environment, or the default.
pub fn dim_cap_from_env() -> Result<usize, CliError> {
    match std::env::var(DIM_CAP_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_DIM_CAP),
        Err(e) => Err(CliError::Usage(format!("{DIM_CAP_ENV}: {e}"))),
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(cap) if cap > 0 => Ok(cap),
            _ => Err(CliError::Usage(format!(
                "{DIM_CAP_ENV} must be a positive integer, got `{text}`"
            ))),
        },
    }
}
