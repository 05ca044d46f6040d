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

//! Cut norm of step kernels and cut distance between step graphons.
//!
//! For a step kernel the supremum over measurable `S, T` is attained at
//! unions of blocks, so the cut norm is a maximum over block subsets of
//! `|sum_{i in S, j in T} w_ij m_i m_j|`. For a fixed `S` the best `T` takes
//! every column whose partial sum has the favorable sign; the exact routine
//! enumerates `S` in Gray-code order and the heuristic alternates between
//! the row and column choices.
//!
//! Distances minimize the cut norm of `W^pi - U` over block permutations
//! `pi` of a common equal-measure partition. Block permutations are a
//! subfamily of measure-preserving relabelings, so the result bounds the
//! true cut distance from above.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::graphon::{constant_graphon, subtract, Kernel, StepGraphon, TOL};
use crate::rng;

/// Tunables for the cut-norm and cut-distance routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutConfig {
    /// Largest block count for which the cut norm is enumerated exactly.
    pub exact_threshold: usize,
    /// Largest resolution for which all block permutations are tried.
    pub exhaustive_threshold: usize,
    /// Restarts of the alternating heuristic when it is used inside a
    /// distance computation.
    pub norm_restarts: usize,
    /// Cap on norm evaluations per hill-climbing start.
    pub max_swap_evals: usize,
}

impl Default for CutConfig {
    fn default() -> Self {
        Self { exact_threshold: 20, exhaustive_threshold: 10, norm_restarts: 20, max_swap_evals: 20_000 }
    }
}

/// Result of a cut-norm or cut-distance computation.
///
/// `s` and `t` are the block subsets witnessing the norm (for distances, of
/// the optimal difference kernel). `permutation` is set for distances:
/// block `i` of the relabeled `W` is block `permutation[i]` of the
/// equalized `W`. When `exact` is false the value is a lower bound for a
/// norm and an estimate of an upper bound for a distance.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub value: f64,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub permutation: Option<Vec<usize>>,
    pub exact: bool,
}

/// `w_ij * m_i * m_j`, row-major.
fn scaled(k: &Kernel) -> Vec<f64> {
    let n = k.block_count();
    let m = k.measures();
    let mut a = k.weights().to_vec();
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] *= m[i] * m[j];
        }
    }
    a
}

/// `sum_{i in S, j in T} w_ij m_i m_j`.
pub fn cut_value(k: &Kernel, s: &[usize], t: &[usize]) -> f64 {
    let m = k.measures();
    s.iter()
        .map(|&i| t.iter().map(|&j| k.weight(i, j) * m[i] * m[j]).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone)]
struct NormWitness {
    value: f64,
    s: Vec<bool>,
    t: Vec<bool>,
}

impl NormWitness {
    fn zero(n: usize) -> Self {
        Self { value: 0.0, s: vec![false; n], t: vec![false; n] }
    }

    fn into_result(self, exact: bool) -> CutResult {
        let idx = |v: &[bool]| v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        CutResult { value: self.value, s: idx(&self.s), t: idx(&self.t), permutation: None, exact }
    }
}

/// Best `T` for a fixed set of column sums, over both signs.
fn best_columns(cols: &[f64]) -> (f64, bool) {
    let (mut pos, mut neg) = (0.0, 0.0);
    for &c in cols {
        if c > 0.0 {
            pos += c;
        } else {
            neg -= c;
        }
    }
    if neg > pos {
        (neg, false)
    } else {
        (pos, true)
    }
}

/// Recompute the witness from `S` alone: column sums, the better sign, `T`.
fn witness_from_rows(a: &[f64], n: usize, s: Vec<bool>) -> NormWitness {
    let mut cols = vec![0.0; n];
    for i in (0..n).filter(|&i| s[i]) {
        for j in 0..n {
            cols[j] += a[i * n + j];
        }
    }
    let (_, positive) = best_columns(&cols);
    let t: Vec<bool> = cols.iter().map(|&c| if positive { c > 0.0 } else { c < 0.0 }).collect();
    let mut total = 0.0;
    for i in (0..n).filter(|&i| s[i]) {
        for j in (0..n).filter(|&j| t[j]) {
            total += a[i * n + j];
        }
    }
    NormWitness { value: total.abs(), s, t }
}

/// Exact cut norm of a scaled matrix by Gray-code enumeration of `S`.
///
/// For larger `n` the top bits of `S` are fixed per task and the tasks are
/// reduced in index order, keeping the earliest strict maximum.
fn exact_norm_scaled(a: &[f64], n: usize) -> NormWitness {
    let high = if n > 12 { 6.min(n) } else { 0 };
    let low = n - high;

    let chunk = |prefix: u64| -> (f64, u64) {
        let mut cols = vec![0.0; n];
        for b in 0..high {
            if prefix >> b & 1 == 1 {
                let row = low + b;
                for j in 0..n {
                    cols[j] += a[row * n + j];
                }
            }
        }
        let mut mask: u64 = prefix << low;
        let (mut best, mut best_mask) = (best_columns(&cols).0, mask);
        for step in 1u64..(1u64 << low) {
            let bit = step.trailing_zeros() as usize;
            mask ^= 1 << bit;
            let sign = if mask >> bit & 1 == 1 { 1.0 } else { -1.0 };
            for j in 0..n {
                cols[j] += sign * a[bit * n + j];
            }
            let (v, _) = best_columns(&cols);
            if v > best {
                best = v;
                best_mask = mask;
            }
        }
        (best, best_mask)
    };

    let results: Vec<(f64, u64)> = if high > 0 {
        (0..1u64 << high).into_par_iter().map(chunk).collect()
    } else {
        vec![chunk(0)]
    };
    let mut best = (0.0, 0u64);
    for r in results {
        if r.0 > best.0 {
            best = r;
        }
    }
    if best.0 <= 0.0 {
        return NormWitness::zero(n);
    }
    let s = (0..n).map(|i| best.1 >> i & 1 == 1).collect();
    witness_from_rows(a, n, s)
}

/// Alternating maximization from random starting rows.
fn heuristic_norm_scaled(a: &[f64], n: usize, restarts: usize, seed: u64) -> NormWitness {
    let mut best = NormWitness::zero(n);
    let mut sums = vec![0.0; n];
    for r in 0..restarts {
        let mut rng = rng::stream(seed, "cutnorm-heuristic", r as u64);
        let start: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        for sign in [1.0, -1.0] {
            let mut s = start.clone();
            let mut t = vec![false; n];
            let mut current = f64::NEG_INFINITY;
            for _ in 0..100 {
                // columns given rows
                sums.iter_mut().for_each(|x| *x = 0.0);
                for i in (0..n).filter(|&i| s[i]) {
                    for j in 0..n {
                        sums[j] += a[i * n + j];
                    }
                }
                for j in 0..n {
                    t[j] = sign * sums[j] > 0.0;
                }
                // rows given columns
                sums.iter_mut().for_each(|x| *x = 0.0);
                for i in 0..n {
                    for j in (0..n).filter(|&j| t[j]) {
                        sums[i] += a[i * n + j];
                    }
                }
                let mut value = 0.0;
                for i in 0..n {
                    s[i] = sign * sums[i] > 0.0;
                    if s[i] {
                        value += sign * sums[i];
                    }
                }
                if value <= current {
                    break;
                }
                current = value;
                if value > best.value {
                    best = NormWitness { value, s: s.clone(), t: t.clone() };
                }
            }
        }
    }
    best
}

/// Exact cut norm for kernels with at most 20 blocks.
pub fn cut_norm_exact(k: &Kernel) -> Result<CutResult> {
    cut_norm_exact_with_threshold(k, CutConfig::default().exact_threshold)
}

pub fn cut_norm_exact_with_threshold(k: &Kernel, threshold: usize) -> Result<CutResult> {
    let n = k.block_count();
    if n > threshold || n > 40 {
        return invalid(format!(
            "{n} blocks exceeds the exact cut-norm threshold of {threshold}; use cut_norm_heuristic"
        ));
    }
    Ok(exact_norm_scaled(&scaled(k), n).into_result(true))
}

/// Lower bound on the cut norm by alternating maximization over `restarts`
/// seeded random starts and both signs.
pub fn cut_norm_heuristic(k: &Kernel, restarts: usize, seed: u64) -> Result<CutResult> {
    if restarts == 0 {
        return invalid("restarts must be at least 1");
    }
    let n = k.block_count();
    Ok(heuristic_norm_scaled(&scaled(k), n, restarts, seed).into_result(false))
}

/// Cut norm of `W - c`. Every block permutation fixes a constant graphon,
/// so no relabeling search is needed.
pub fn distance_to_constant(w: &StepGraphon, c: f64) -> Result<CutResult> {
    distance_to_constant_with(w, c, &CutConfig::default(), 0)
}

pub fn distance_to_constant_with(w: &StepGraphon, c: f64, cfg: &CutConfig, seed: u64) -> Result<CutResult> {
    let diff = subtract(w, &constant_graphon(c)?);
    if diff.block_count() <= cfg.exact_threshold {
        cut_norm_exact_with_threshold(&diff, cfg.exact_threshold)
    } else {
        cut_norm_heuristic(&diff, cfg.norm_restarts.max(1), seed)
    }
}

/// Evaluates `||W^pi - U||` for permutations of a fixed resolution.
struct PermObjective<'a> {
    w: &'a [f64],
    u: &'a [f64],
    m: usize,
    exact: bool,
    restarts: usize,
    seed: u64,
}

impl PermObjective<'_> {
    fn matrix(&self, perm: &[usize]) -> Vec<f64> {
        let m = self.m;
        let scale = 1.0 / (m * m) as f64;
        let mut a = Vec::with_capacity(m * m);
        for (i, &pi) in perm.iter().enumerate() {
            for (j, &pj) in perm.iter().enumerate() {
                a.push((self.w[pi * m + pj] - self.u[i * m + j]) * scale);
            }
        }
        a
    }

    fn norm(&self, perm: &[usize]) -> NormWitness {
        let a = self.matrix(perm);
        if self.exact {
            exact_norm_scaled(&a, self.m)
        } else {
            heuristic_norm_scaled(&a, self.m, self.restarts, self.seed)
        }
    }

    fn value(&self, perm: &[usize]) -> f64 {
        self.norm(perm).value
    }
}

fn better(value: f64, perm: &[usize], best: &(f64, Vec<usize>)) -> bool {
    value < best.0 - TOL || ((value - best.0).abs() <= TOL && perm < best.1.as_slice())
}

/// Next permutation in lexicographic order; false when `xs` was the last.
fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs.iter().rposition(|&x| x > xs[i]).unwrap();
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn exhaustive_search(obj: &PermObjective) -> (f64, Vec<usize>) {
    let m = obj.m;
    let per_first: Vec<(f64, Vec<usize>)> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut rest: Vec<usize> = (0..m).filter(|&x| x != first).collect();
            let mut best = (f64::INFINITY, Vec::new());
            loop {
                let perm: Vec<usize> = std::iter::once(first).chain(rest.iter().copied()).collect();
                let v = obj.value(&perm);
                if best.1.is_empty() || better(v, &perm, &best) {
                    best = (v, perm);
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            best
        })
        .collect();
    reduce_best(per_first)
}

fn reduce_best(candidates: Vec<(f64, Vec<usize>)>) -> (f64, Vec<usize>) {
    let mut iter = candidates.into_iter();
    let mut best = iter.next().expect("at least one candidate");
    for c in iter {
        if better(c.0, &c.1, &best) {
            best = c;
        }
    }
    best
}

/// First-improvement descent over pairwise block swaps, scanned in
/// lexicographic order of `(i, j)`.
fn hill_climb(obj: &PermObjective, mut perm: Vec<usize>, max_evals: usize) -> (f64, Vec<usize>) {
    let m = obj.m;
    let mut current = obj.value(&perm);
    let mut evals = 1;
    'restart: loop {
        for i in 0..m {
            for j in i + 1..m {
                if evals >= max_evals {
                    break 'restart;
                }
                perm.swap(i, j);
                let v = obj.value(&perm);
                evals += 1;
                if v < current - TOL {
                    current = v;
                    continue 'restart;
                }
                perm.swap(i, j);
            }
        }
        break;
    }
    (current, perm)
}

/// Cut distance with the default configuration.
pub fn cut_distance(w: &StepGraphon, u: &StepGraphon, m: usize, budget: usize, seed: u64) -> Result<CutResult> {
    cut_distance_with(w, u, m, budget, seed, &CutConfig::default())
}

/// Minimum over block permutations `pi` of `||W^pi - U||` with both graphons
/// restated on `m` equal blocks.
///
/// Up to `cfg.exhaustive_threshold` every permutation is tried. Above it,
/// `budget` hill-climbing runs start from the identity and from
/// `budget - 1` seeded random permutations. The inner norm is exact up to
/// `cfg.exact_threshold` blocks and the alternating heuristic beyond.
pub fn cut_distance_with(
    w: &StepGraphon,
    u: &StepGraphon,
    m: usize,
    budget: usize,
    seed: u64,
    cfg: &CutConfig,
) -> Result<CutResult> {
    if budget == 0 {
        return invalid("search budget must be at least 1");
    }
    let we = w.equalize(m)?;
    let ue = u.equalize(m)?;
    let obj = PermObjective {
        w: we.weights(),
        u: ue.weights(),
        m,
        exact: m <= cfg.exact_threshold,
        restarts: cfg.norm_restarts.max(1),
        seed: rng::derive_seed(seed, "cutdist-norm"),
    };
    let exhaustive = m <= cfg.exhaustive_threshold;
    let (_, perm) = if exhaustive {
        exhaustive_search(&obj)
    } else {
        let runs: Vec<(f64, Vec<usize>)> = (0..budget)
            .into_par_iter()
            .map(|s| {
                let mut start: Vec<usize> = (0..m).collect();
                if s > 0 {
                    start.shuffle(&mut rng::stream(seed, "cutdist-start", s as u64));
                }
                hill_climb(&obj, start, cfg.max_swap_evals.max(1))
            })
            .collect();
        reduce_best(runs)
    };
    let witness = obj.norm(&perm);
    let mut result = witness.into_result(exhaustive && obj.exact);
    result.permutation = Some(perm);
    Ok(result)
}
