//! Experiment harness for `prefmax-core`: a registry of worked examples,
//! a check runner producing JSON reports, and CSV/JSON trace emission.

pub mod config;
pub mod experiment;
pub mod fixtures;
pub mod trace_io;

use thiserror::Error;

pub use experiment::{run_experiment, run_vip, Check, DescentParams, Experiment, RunReport, Verdict, VipRequest};
pub use fixtures::{get_fixture, registry, Fixture};

#[derive(Debug, Clone, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("fixture {fixture} cannot run {check}: {reason}")]
    Capability { fixture: String, check: String, reason: String },

    #[error("unknown fixture {name:?}; available: {available}")]
    UnknownFixture { name: String, available: String },

    #[error("registry self-test failed: {0}")]
    SelfTest(String),

    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },

    #[error(transparent)]
    Core(#[from] prefmax_core::Error),
}

impl HarnessError {
    /// Process exit status for a run that ended in this error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
