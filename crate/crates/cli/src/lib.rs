//! Command-line front end: configure, run and render discernibility
//! certifications.

pub mod config;
pub mod error;
pub mod render;
pub mod run;

pub use config::{dim_cap_from_env, FileConfig, OutputFormat, RunConfig, DIM_CAP_ENV};
pub use error::{exit, verdict_exit_code, CliError};
pub use render::{load_report, render, render_report, to_markdown};
pub use run::{run_verify, run_verify_c, run_verify_t, write_atomically, RunOutcome};
