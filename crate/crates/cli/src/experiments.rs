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

//! Reproducible experiments: convergence traces, the extremal 4-cycle
//! check, and the two labelings of complete bipartite graphs.

use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;

use graphonlab_core::{
    bipartite_limit, cut_distance_with, density_graph, distance_to_constant_with, erdos_renyi, pixel_graphon, rng,
    uniform_attachment, uniform_attachment_limit, w_random_graph, CutConfig, Graph, StepGraphon,
};

use crate::CliError;

/// CSV header of convergence traces.
pub const CSV_HEADER: &str = "n,seed,edge_density,triangle_density,c4_density,cut_stat";

/// Which graph sequence a convergence run follows.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentKind {
    /// `G(n, p)`; the cut statistic is the cut norm of `pixel(G) - p`.
    ConvergeEr { p: f64 },
    /// Growing uniform attachment; compared with `1 - max(x,y)` at
    /// resolution `n`.
    ConvergeUa,
    /// W-random graphs of a step graphon, compared with the graphon itself.
    Custom(StepGraphon),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub cut: CutConfig,
    /// Hill-climbing starts for permutation searches.
    pub budget: usize,
}

/// One `(n, seed)` cell of a convergence run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub seed: u64,
    pub edge_density: f64,
    pub triangle_density: f64,
    pub c4_density: f64,
    pub cut_stat: f64,
    pub cut_exact: bool,
    pub graph: Graph,
}

/// 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

impl TraceRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.seed,
            fmt_num(self.edge_density),
            fmt_num(self.triangle_density),
            fmt_num(self.c4_density),
            fmt_num(self.cut_stat)
        )
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sizes.is_empty() || self.seeds.is_empty() {
            return Err(CliError::Input("sizes and seeds must be nonempty".into()));
        }
        if self.sizes.contains(&0) {
            return Err(CliError::Input("sizes must be positive".into()));
        }
        if self.budget == 0 {
            return Err(CliError::Input("search budget must be at least 1".into()));
        }
        if let ExperimentKind::ConvergeEr { p } = self.kind {
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Input(format!("edge probability {p} outside [0,1]")));
            }
        }
        Ok(())
    }

    fn cell(&self, n: usize, seed: u64) -> Result<TraceRow, CliError> {
        let (graph, cut) = match &self.kind {
            ExperimentKind::ConvergeEr { p } => {
                let g = erdos_renyi(n, *p, seed)?;
                let r = distance_to_constant_with(&pixel_graphon(&g)?, *p, &self.cut, seed)?;
                (g, r)
            }
            ExperimentKind::ConvergeUa => {
                let g = uniform_attachment(n, seed)?;
                let limit = uniform_attachment_limit(n)?;
                let r = cut_distance_with(&pixel_graphon(&g)?, &limit, n, self.budget, seed, &self.cut)?;
                (g, r)
            }
            ExperimentKind::Custom(w) => {
                let g = w_random_graph(w, n, seed)?;
                let m = common_resolution(w, n)?;
                let r = cut_distance_with(&pixel_graphon(&g)?, w, m, self.budget, seed, &self.cut)?;
                (g, r)
            }
        };
        let t = |h: &Graph| density_graph(h, &graph).map(|d| d.value);
        Ok(TraceRow {
            n,
            seed,
            edge_density: t(&Graph::complete(2))?,
            triangle_density: t(&Graph::complete(3))?,
            c4_density: t(&Graph::cycle(4)?)?,
            cut_stat: cut.value,
            cut_exact: cut.exact,
            graph,
        })
    }

    /// Run every `(n, seed)` cell; rows come back in grid order (sizes
    /// outer, seeds inner) whatever the thread count.
    pub fn run(&self) -> Result<Vec<TraceRow>, CliError> {
        self.validate()?;
        let grid: Vec<(usize, u64)> = self.sizes.iter().flat_map(|&n| self.seeds.iter().map(move |&s| (n, s))).collect();
        grid.par_iter().map(|&(n, s)| self.cell(n, s)).collect()
    }
}

/// Smallest multiple of `n` (up to `64 n`) at which `w` has equal blocks.
fn common_resolution(w: &StepGraphon, n: usize) -> Result<usize, CliError> {
    (1..=64)
        .map(|j| j * n)
        .find(|&m| w.equalize(m).is_ok())
        .ok_or_else(|| CliError::Input(format!("graphon blocks are not compatible with resolution {n}")))
}

pub fn csv(rows: &[TraceRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErTail {
    pub n: usize,
    pub accepted: usize,
    pub attempts: usize,
    pub min_c4: f64,
    pub mean_c4: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalReport {
    pub trials: usize,
    pub violations: usize,
    /// Minimum of `t(C4, G) - t(edge, G)^4` over all trials.
    pub min_gap: f64,
    pub tails: Vec<ErTail>,
}

/// `t(C4, G) - t(edge, G)^4`.
pub fn erdos_gap(g: &Graph) -> Result<f64, CliError> {
    let te = density_graph(&Graph::complete(2), g)?.value;
    let tc = density_graph(&Graph::cycle(4)?, g)?.value;
    Ok(tc - te.powi(4))
}

/// Check the 4-cycle inequality on `trials` random graphs with
/// `2 <= n <= max_n` and uniform edge probability, then track the minimum
/// 4-cycle density of `G(n, 1/2)` samples with edge density at least `1/2`.
pub fn extremal(
    trials: usize,
    max_n: usize,
    seed: u64,
    er_sizes: &[usize],
    er_samples: usize,
) -> Result<ExtremalReport, CliError> {
    if trials == 0 || max_n < 2 {
        return Err(CliError::Input("need trials >= 1 and max_n >= 2".into()));
    }
    let gaps: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(seed, "extremal", i as u64);
            let n = r.random_range(2..=max_n);
            let p: f64 = r.random();
            erdos_gap(&erdos_renyi(n, p, r.random())?)
        })
        .collect::<Result<_, CliError>>()?;
    let violations = gaps.iter().filter(|&&g| g < -graphonlab_core::graphon::TOL).count();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);

    let tails = er_sizes
        .par_iter()
        .map(|&n| {
            let mut r = rng::stream(seed, "extremal-er", n as u64);
            let (mut accepted, mut attempts) = (Vec::new(), 0);
            let edge = Graph::complete(2);
            let c4 = Graph::cycle(4)?;
            while accepted.len() < er_samples && attempts < 200 * er_samples.max(1) {
                attempts += 1;
                let g = erdos_renyi(n, 0.5, r.random())?;
                if density_graph(&edge, &g)?.value >= 0.5 {
                    accepted.push(density_graph(&c4, &g)?.value);
                }
            }
            let min_c4 = accepted.iter().copied().fold(f64::NAN, f64::min);
            let mean_c4 = accepted.iter().sum::<f64>() / accepted.len() as f64;
            Ok(ErTail { n, accepted: accepted.len(), attempts, min_c4, mean_c4 })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(ExtremalReport { trials, violations, min_gap, tails })
}

impl ExtremalReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trials {}", self.trials);
        let _ = writeln!(s, "violations {}", self.violations);
        let _ = writeln!(s, "min_gap {}", fmt_num(self.min_gap));
        let _ = writeln!(s, "target_c4 {}", fmt_num(1.0 / 16.0));
        for t in &self.tails {
            let _ = writeln!(
                s,
                "er n={} accepted={} attempts={} min_c4={} mean_c4={}",
                t.n,
                t.accepted,
                t.attempts,
                fmt_num(t.min_c4),
                fmt_num(t.mean_c4)
            );
        }
        s
    }
}

/// Vertex map taking `K_{n,n}` in block labeling to the alternating one:
/// part A goes to even labels, part B to odd labels.
pub fn interleaving(n: usize) -> Vec<usize> {
    (0..2 * n).map(|v| if v < n { 2 * v } else { 2 * (v - n) + 1 }).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteRow {
    pub n: usize,
    pub block_distance: f64,
    pub block_exact: bool,
    pub alternating_distance: f64,
    pub alternating_exact: bool,
    /// Densities of edge, triangle and C4 for the block labeling.
    pub densities: [f64; 3],
    pub densities_equal: bool,
}

/// Both labelings of `K_{n,n}` against the limit at resolution `2n`.
pub fn bipartite(sizes: &[usize], budget: usize, seed: u64, cut: &CutConfig) -> Result<Vec<BipartiteRow>, CliError> {
    if sizes.contains(&0) {
        return Err(CliError::Input("part sizes must be positive".into()));
    }
    let limit = bipartite_limit();
    let patterns = [Graph::complete(2), Graph::complete(3), Graph::cycle(4)?];
    sizes
        .iter()
        .map(|&n| {
            let block = Graph::complete_bipartite(n, n);
            let alt = block.relabel(&interleaving(n))?;
            let m = 2 * n;
            let db = cut_distance_with(&pixel_graphon(&block)?, &limit, m, budget, seed, cut)?;
            let da = cut_distance_with(&pixel_graphon(&alt)?, &limit, m, budget, seed, cut)?;
            let mut densities = [0.0; 3];
            let mut equal = true;
            for (d, h) in densities.iter_mut().zip(&patterns) {
                *d = density_graph(h, &block)?.value;
                equal &= *d == density_graph(h, &alt)?.value;
            }
            Ok(BipartiteRow {
                n,
                block_distance: db.value,
                block_exact: db.exact,
                alternating_distance: da.value,
                alternating_exact: da.exact,
                densities,
                densities_equal: equal,
            })
        })
        .collect()
}

impl BipartiteRow {
    pub fn render(&self) -> String {
        format!(
            "n={} m={} block_distance={} block_exact={} alternating_distance={} alternating_exact={} edge={} triangle={} c4={} densities_equal={}",
            self.n,
            2 * self.n,
            fmt_num(self.block_distance),
            self.block_exact,
            fmt_num(self.alternating_distance),
            self.alternating_exact,
            fmt_num(self.densities[0]),
            fmt_num(self.densities[1]),
            fmt_num(self.densities[2]),
            self.densities_equal
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: ExperimentKind, sizes: Vec<usize>) -> ExperimentSpec {
        ExperimentSpec { kind, sizes, seeds: (0..5).collect(), cut: CutConfig::default(), budget: 2 }
    }

    #[test]
    fn empty_graph_gap_is_zero() {
        assert_eq!(erdos_gap(&Graph::empty(5)).unwrap(), 0.0);
    }

    #[test]
    fn extremal_small_run_has_no_violations() {
        let r = extremal(200, 8, 1, &[16], 5).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.min_gap >= 0.0);
        assert_eq!(r.tails[0].accepted, 5);
        assert!(extremal(0, 8, 1, &[], 1).is_err());
        assert!(extremal(1, 1, 1, &[], 1).is_err());
    }

    #[test]
    fn bipartite_rows() {
        let rows = bipartite(&[2, 3], 1, 0, &CutConfig::default()).unwrap();
        for r in &rows {
            assert!(r.block_exact && r.alternating_exact);
            assert!(r.block_distance <= 1e-12 && r.alternating_distance <= 1e-12);
            assert_eq!(r.densities[0], 0.5);
            assert!(r.densities_equal);
        }
    }

    #[test]
    fn csv_layout() {
        let rows = spec(ExperimentKind::ConvergeEr { p: 0.5 }, vec![4, 6]).run().unwrap();
        let text = csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 11);
        assert!(lines[1].starts_with("4,0,"));
        assert!(lines[10].starts_with("6,4,"));
        assert_eq!(fmt_num(0.0625), "6.2500000000000000e-2");
    }

    #[test]
    fn custom_kind_finds_resolution() {
        let rows = spec(ExperimentKind::Custom(bipartite_limit()), vec![3]).run().unwrap();
        assert_eq!(rows.len(), 5);
        let bad = StepGraphon::new(vec![0.123456789, 0.876543211], vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(spec(ExperimentKind::Custom(bad), vec![4]).run().is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(spec(ExperimentKind::ConvergeUa, vec![]).run().is_err());
        assert!(spec(ExperimentKind::ConvergeEr { p: 1.5 }, vec![4]).run().is_err());
        let mut s = spec(ExperimentKind::ConvergeUa, vec![4]);
        s.budget = 0;
        assert!(s.run().is_err());
    }
}
