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

//! Command-line inputs: built-in patterns, graphon literals, and files.

use std::fs;
use std::path::Path;

use graphonlab_core::{bipartite_limit, constant_graphon, pixel_graphon, uniform_attachment_limit, Graph, StepGraphon};

use crate::CliError;

/// `vertex`, `edge`, `triangle`, `c4`, or a path to an edge-list file.
pub fn pattern(spec: &str) -> Result<Graph, CliError> {
    Ok(match spec {
        "vertex" => Graph::empty(1),
        "edge" => Graph::complete(2),
        "triangle" => Graph::complete(3),
        "c4" => Graph::cycle(4)?,
        path => graph_file(path)?,
    })
}

pub fn graph_file(path: impl AsRef<Path>) -> Result<Graph, CliError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    text.parse().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Graphon literal or file.
///
/// Literals: `constant:P`, `bipartite`, `ua-limit:M`, `pixel:FILE` (the
/// pixel picture of an edge-list file). Anything else is read as a graphon
/// text file.
pub fn graphon(spec: &str) -> Result<StepGraphon, CliError> {
    let bad = |what: &str| CliError::Input(format!("invalid graphon literal {spec:?}: {what}"));
    if spec == "bipartite" {
        return Ok(bipartite_limit());
    }
    if let Some(p) = spec.strip_prefix("constant:") {
        let c: f64 = p.parse().map_err(|_| bad("expected a number"))?;
        return Ok(constant_graphon(c)?);
    }
    if let Some(m) = spec.strip_prefix("ua-limit:") {
        let m: usize = m.parse().map_err(|_| bad("expected a positive integer"))?;
        return Ok(uniform_attachment_limit(m)?);
    }
    if let Some(path) = spec.strip_prefix("pixel:") {
        return Ok(pixel_graphon(&graph_file(path)?)?);
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    text.parse().map_err(|e| CliError::Input(format!("{spec}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(pattern("c4").unwrap().edge_count(), 4);
        assert_eq!(pattern("vertex").unwrap().vertex_count(), 1);
        assert_eq!(graphon("constant:0.5").unwrap(), constant_graphon(0.5).unwrap());
        assert_eq!(graphon("ua-limit:3").unwrap().block_count(), 3);
        assert!(matches!(graphon("constant:2"), Err(CliError::Input(_))));
        assert!(matches!(graphon("ua-limit:x"), Err(CliError::Input(_))));
        assert!(matches!(graphon("/nonexistent/file"), Err(CliError::Input(_))));
        assert!(matches!(pattern("/nonexistent/file"), Err(CliError::Input(_))));
    }
}
