// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! The `graphonlab` command-line driver.

pub mod app;
pub mod experiments;
pub mod inputs;

use std::fmt;

/// Failure of a subcommand, carrying its exit code class.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// A checked property failed (exit 1).
    Violation(String),
    /// Bad flags, unreadable input, or unwritable output (exit 2).
    Input(String),
    /// An exact computation was refused for exceeding its work limit (exit 3).
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Violation(m) => write!(f, "property violation: {m}"),
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Resource(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<graphonlab_core::Error> for CliError {
    fn from(e: graphonlab_core::Error) -> Self {
        match e {
            graphonlab_core::Error::WorkLimit { .. } => CliError::Resource(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Size the global thread pool from `GRAPHONLAB_THREADS`, if set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("GRAPHONLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("GRAPHONLAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))
}
