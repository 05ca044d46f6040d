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

//! Homomorphism densities into finite graphs and step graphons.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{hom_count, Graph};
use crate::graphon::StepGraphon;
use crate::rng;

/// Default cap on weight multiplications for exact step densities.
pub const DEFAULT_WORK_LIMIT: f64 = 1e8;

/// Samples per Monte Carlo shard. Each shard owns one random stream.
pub const MC_SHARD_SIZE: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMethod {
    Exact,
    MonteCarlo,
}

impl DensityMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMethod::Exact => "exact",
            DensityMethod::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityEstimate {
    pub value: f64,
    pub method: DensityMethod,
    /// Number of samples; 0 for exact values.
    pub samples: u64,
    pub std_error: f64,
}

impl DensityEstimate {
    fn exact(value: f64) -> Self {
        Self { value: value.clamp(0.0, 1.0), method: DensityMethod::Exact, samples: 0, std_error: 0.0 }
    }
}

/// `t(H, G) = hom(H, G) / |V(G)|^|V(H)|`.
pub fn density_graph(pattern: &Graph, host: &Graph) -> Result<DensityEstimate> {
    if pattern.vertex_count() == 0 {
        return invalid("pattern graph must have at least one vertex");
    }
    if host.vertex_count() == 0 {
        return invalid("host graph must have at least one vertex");
    }
    let hom = hom_count(pattern, host)?;
    let n = host.vertex_count() as f64;
    // n^k can exceed u64 but is exactly representable as a product of f64
    // powers for the sizes we handle; divide stepwise to avoid overflow.
    let value = (0..pattern.vertex_count()).fold(hom as f64, |acc, _| acc / n);
    Ok(DensityEstimate::exact(value))
}

/// Exact `t(H, W)` for a step graphon, with the default work limit.
pub fn density_step(pattern: &Graph, w: &StepGraphon) -> Result<DensityEstimate> {
    density_step_with_limit(pattern, w, DEFAULT_WORK_LIMIT)
}

/// Exact `t(H, W)`: the sum over all block maps `phi: V(H) -> blocks` of
/// `prod_v measure[phi(v)] * prod_{uv in E(H)} weight[phi(u)][phi(v)]`.
pub fn density_step_with_limit(pattern: &Graph, w: &StepGraphon, work_limit: f64) -> Result<DensityEstimate> {
    let v = pattern.vertex_count();
    if v == 0 {
        return invalid("pattern graph must have at least one vertex");
    }
    let k = w.block_count();
    let required = (k as f64).powi(v as i32) * pattern.edge_count().max(1) as f64;
    if required > work_limit {
        return Err(Error::WorkLimit {
            required,
            limit: work_limit,
            hint: "use the Monte Carlo estimator instead",
        });
    }

    let measures = w.measures();
    let edges = pattern.edges();
    let mut map = vec![0usize; v];
    let mut total = 0.0;
    'odometer: loop {
        let mut term: f64 = map.iter().map(|&b| measures[b]).product();
        for &(a, b) in edges {
            term *= w.weight(map[a], map[b]);
        }
        total += term;
        for slot in map.iter_mut() {
            *slot += 1;
            if *slot < k {
                continue 'odometer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(DensityEstimate::exact(total))
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * (other.count as f64 / count as f64);
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64 / count as f64);
        Moments { count, mean, m2 }
    }
}

/// Monte Carlo estimate of `t(H, W)`.
///
/// Each sample draws one uniform point per pattern vertex and evaluates the
/// product of `W` over the pattern edges. Samples are split into shards of
/// [`MC_SHARD_SIZE`]; shard `s` uses stream `(seed, "density-mc", s)` and
/// shard statistics are merged in shard order, so the result does not depend
/// on the number of worker threads.
pub fn density_mc(pattern: &Graph, w: &StepGraphon, samples: u64, seed: u64) -> Result<DensityEstimate> {
    let v = pattern.vertex_count();
    if v == 0 {
        return invalid("pattern graph must have at least one vertex");
    }
    if samples < 2 {
        return invalid("Monte Carlo needs at least 2 samples");
    }
    let interior = {
        let b = w.boundaries();
        b[1..b.len() - 1].to_vec()
    };
    let edges = pattern.edges();
    let shards = samples.div_ceil(MC_SHARD_SIZE);

    let per_shard: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = rng::stream(seed, "density-mc", s);
            let len = MC_SHARD_SIZE.min(samples - s * MC_SHARD_SIZE);
            let mut blocks = vec![0usize; v];
            let mut acc = Moments::default();
            for _ in 0..len {
                for b in blocks.iter_mut() {
                    let x: f64 = rng.random();
                    *b = interior.partition_point(|&t| t <= x);
                }
                let prod: f64 = edges.iter().map(|&(a, c)| w.weight(blocks[a], blocks[c])).product();
                acc.push(prod);
            }
            acc
        })
        .collect();
    let m = per_shard.into_iter().fold(Moments::default(), Moments::merge);
    let var = if m.count > 1 { m.m2 / (m.count - 1) as f64 } else { 0.0 };
    Ok(DensityEstimate {
        value: m.mean.clamp(0.0, 1.0),
        method: DensityMethod::MonteCarlo,
        samples,
        std_error: (var.max(0.0) / samples as f64).sqrt(),
    })
}
