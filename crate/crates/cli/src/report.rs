//! Versioned JSON envelope shared by every subcommand.

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA: &str = "hkr-report/1";

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub passed: Option<bool>,
    pub result: Value,
    pub timings: Timings,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub seconds: f64,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, passed: Option<bool>, result: Value, seconds: f64) -> Self {
        Self {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.clone(),
            passed,
            result,
            timings: Timings { seconds },
        }
    }
}
