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

//! Random graph models: W-random graphs, Erdős–Rényi graphs, and the
//! growing uniform-attachment process.
//!
//! Each generator draws from a single stream `(seed, model tag, 0)` in a
//! fixed order, so a `(model, n, seed)` triple always produces the same
//! graph.

use rand::Rng as _;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::graphon::StepGraphon;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub enum SampleModel {
    WRandom(StepGraphon),
    ErdosRenyi(f64),
    UniformAttachment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub n: usize,
    pub seed: u64,
    pub model: SampleModel,
}

impl SampleConfig {
    pub fn sample(&self) -> Result<Graph> {
        match &self.model {
            SampleModel::WRandom(w) => w_random_graph(w, self.n, self.seed),
            SampleModel::ErdosRenyi(p) => erdos_renyi(self.n, *p, self.seed),
            SampleModel::UniformAttachment => uniform_attachment(self.n, self.seed),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return invalid("vertex count must be at least 1");
    }
    Ok(())
}

/// Sample `n` uniform points, label them in increasing order, and join
/// `i < j` with probability `W(s_i, s_j)`.
///
/// Sorting only fixes the labeling; the unlabeled distribution is the usual
/// W-random graph.
pub fn w_random_graph(w: &StepGraphon, n: usize, seed: u64) -> Result<Graph> {
    check_n(n)?;
    let mut rng = rng::stream(seed, "w-random", 0);
    let mut points: Vec<f64> = (0..n).map(|_| rng.random()).collect();
    points.sort_by(f64::total_cmp);
    let blocks: Vec<usize> = points.iter().map(|&x| w.block_of(x)).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < w.weight(blocks[i], blocks[j]) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

/// `G(n, p)`: every pair independently, scanned in lexicographic order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_n(n)?;
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0,1]"));
    }
    let mut rng = rng::stream(seed, "erdos-renyi", 0);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

/// Growing uniform attachment up to `n` vertices.
///
/// Starting from one vertex, step `t = 2..=n` adds vertex `t - 1` and then
/// makes one lexicographic pass over the pairs that are non-adjacent at the
/// start of the step, joining each with probability `1/t`.
pub fn uniform_attachment(n: usize, seed: u64) -> Result<Graph> {
    check_n(n)?;
    let mut rng = rng::stream(seed, "uniform-attachment", 0);
    let mut adj = vec![false; n * n];
    for t in 2..=n {
        let p = 1.0 / t as f64;
        for u in 0..t {
            for v in u + 1..t {
                if !adj[u * n + v] && rng.random::<f64>() < p {
                    adj[u * n + v] = true;
                }
            }
        }
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| adj[u * n + v]);
    Graph::new(n, edges.collect::<Vec<_>>())
}
