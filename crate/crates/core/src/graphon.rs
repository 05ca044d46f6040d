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

//! Step graphons, signed step kernels, and their partitions.
//!
//! A step function is described by a partition of `[0,1)` into `k` half-open
//! blocks `[cum_i, cum_i + measures[i])` and a symmetric `k x k` weight
//! matrix. Block 0 is the one nearest the origin.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::{check_permutation, Graph};

/// Absolute tolerance used for every partition and value comparison.
pub const TOL: f64 = 1e-12;

/// Symmetric step function on `[0,1)^2` with values in a declared range.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    measures: Vec<f64>,
    weights: Vec<f64>,
}

impl StepFunction {
    fn new(measures: Vec<f64>, weights: Vec<f64>, range: (f64, f64)) -> Result<Self> {
        let k = measures.len();
        if k == 0 {
            return invalid("a step function needs at least one block");
        }
        if weights.len() != k * k {
            return invalid(format!("expected {} weights for {k} blocks, got {}", k * k, weights.len()));
        }
        if let Some(m) = measures.iter().find(|m| **m <= 0.0 || !m.is_finite()) {
            return invalid(format!("block measures must be positive, found {m}"));
        }
        let total: f64 = measures.iter().sum();
        if (total - 1.0).abs() > TOL {
            return invalid(format!("block measures sum to {total}, not 1"));
        }
        let mut weights = weights;
        for i in 0..k {
            for j in i..k {
                let (a, b) = (weights[i * k + j], weights[j * k + i]);
                if !(a >= range.0 && a <= range.1) {
                    return invalid(format!("weight {a} at ({i},{j}) outside [{}, {}]", range.0, range.1));
                }
                if (a - b).abs() > TOL {
                    return invalid(format!("weights not symmetric at ({i},{j}): {a} vs {b}"));
                }
                weights[j * k + i] = a;
            }
        }
        Ok(Self { measures, weights })
    }

    pub fn block_count(&self) -> usize {
        self.measures.len()
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.block_count() + j]
    }

    /// Row-major weight matrix.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.block_count()).map(<[f64]>::to_vec).collect()
    }

    /// Block boundaries `0 = b_0 < b_1 < .. < b_k = 1`.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.measures.len() + 1);
        let mut acc = 0.0;
        b.push(0.0);
        for m in &self.measures[..self.measures.len() - 1] {
            acc += m;
            b.push(acc);
        }
        b.push(1.0);
        b
    }

    /// Index of the block containing `x`; blocks are left-closed.
    pub fn block_of(&self, x: f64) -> usize {
        let b = self.boundaries();
        // first interior boundary strictly greater than x
        b[1..self.block_count()].partition_point(|&t| t <= x)
    }

    pub fn evaluate(&self, x: f64, y: f64) -> Result<f64> {
        for (name, v) in [("x", x), ("y", y)] {
            if !(0.0..1.0).contains(&v) {
                return invalid(format!("{name} = {v} outside [0,1)"));
            }
        }
        Ok(self.weight(self.block_of(x), self.block_of(y)))
    }

    /// `perm[i]` is the source block placed at position `i`.
    fn permuted(&self, perm: &[usize]) -> Self {
        let k = self.block_count();
        let measures = perm.iter().map(|&p| self.measures[p]).collect();
        let mut weights = Vec::with_capacity(k * k);
        for &pi in perm {
            for &pj in perm {
                weights.push(self.weight(pi, pj));
            }
        }
        Self { measures, weights }
    }

    /// Restate on a finer partition given by its boundaries. Every boundary
    /// of `self` must appear in `bounds` (up to `TOL`).
    fn on_boundaries(&self, bounds: &[f64]) -> Self {
        let own = self.boundaries();
        let map: Vec<usize> = bounds
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                own[1..self.block_count()].partition_point(|&t| t <= mid)
            })
            .collect();
        let measures = bounds.windows(2).map(|w| w[1] - w[0]).collect();
        let mut weights = Vec::with_capacity(map.len() * map.len());
        for &a in &map {
            for &b in &map {
                weights.push(self.weight(a, b));
            }
        }
        Self { measures, weights }
    }

    fn equal_blocks(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return invalid("resolution must be at least 1");
        }
        for b in self.boundaries() {
            let scaled = b * m as f64;
            if (b - scaled.round() / m as f64).abs() > TOL {
                return invalid(format!("block boundary {b} is not a multiple of 1/{m}"));
            }
        }
        let bounds: Vec<f64> = (0..=m).map(|i| i as f64 / m as f64).collect();
        let mut out = self.on_boundaries(&bounds);
        out.measures = vec![1.0 / m as f64; m];
        Ok(out)
    }

    fn has_equal_blocks(&self) -> bool {
        let m = 1.0 / self.block_count() as f64;
        self.measures.iter().all(|&x| (x - m).abs() <= TOL)
    }
}

fn merged_boundaries(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(all.len());
    for x in all {
        match out.last() {
            Some(&last) if x - last <= TOL => {}
            _ => out.push(x),
        }
    }
    // the final boundary is always exactly 1
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

/// A labeled step graphon: symmetric, values in `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon(StepFunction);

/// A symmetric step kernel with values in `[-1,1]`, e.g. a difference of
/// two graphons.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel(StepFunction);

impl Deref for StepGraphon {
    type Target = StepFunction;
    fn deref(&self) -> &StepFunction {
        &self.0
    }
}

impl Deref for Kernel {
    type Target = StepFunction;
    fn deref(&self) -> &StepFunction {
        &self.0
    }
}

fn flatten(rows: Vec<Vec<f64>>, k: usize) -> Result<Vec<f64>> {
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return invalid(format!("weight matrix must be {k}x{k}"));
    }
    Ok(rows.into_iter().flatten().collect())
}

impl StepGraphon {
    pub fn new(measures: Vec<f64>, weights: Vec<Vec<f64>>) -> Result<Self> {
        let k = measures.len();
        StepFunction::new(measures, flatten(weights, k)?, (0.0, 1.0)).map(Self)
    }

    /// Equal-measure blocks with the given weights.
    pub fn uniform(weights: Vec<Vec<f64>>) -> Result<Self> {
        let k = weights.len();
        Self::new(vec![1.0 / k as f64; k], weights)
    }

    pub fn as_step_function(&self) -> &StepFunction {
        &self.0
    }

    /// Apply a block permutation: block `i` of the result is block
    /// `perm[i]` of `self`.
    pub fn permute_blocks(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.block_count())?;
        Ok(Self(self.0.permuted(perm)))
    }

    /// Restate on `m` equal-measure blocks. Every boundary must be a
    /// multiple of `1/m` within `TOL`.
    pub fn equalize(&self, m: usize) -> Result<Self> {
        self.0.equal_blocks(m).map(Self)
    }

    pub fn has_equal_blocks(&self) -> bool {
        self.0.has_equal_blocks()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Kernel {
    pub fn new(measures: Vec<f64>, weights: Vec<Vec<f64>>) -> Result<Self> {
        let k = measures.len();
        StepFunction::new(measures, flatten(weights, k)?, (-1.0, 1.0)).map(Self)
    }

    pub fn uniform(weights: Vec<Vec<f64>>) -> Result<Self> {
        let k = weights.len();
        Self::new(vec![1.0 / k as f64; k], weights)
    }

    pub fn as_step_function(&self) -> &StepFunction {
        &self.0
    }

    pub fn permute_blocks(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.block_count())?;
        Ok(Self(self.0.permuted(perm)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.weights.iter().all(|&w| w == 0.0)
    }
}

/// The constant graphon `c`.
pub fn constant_graphon(c: f64) -> Result<StepGraphon> {
    if !(0.0..=1.0).contains(&c) {
        return invalid(format!("constant {c} outside [0,1]"));
    }
    StepGraphon::new(vec![1.0], vec![vec![c]])
}

/// The pixel picture of a labeled graph: `n` equal blocks carrying the
/// adjacency matrix.
pub fn pixel_graphon(g: &Graph) -> Result<StepGraphon> {
    let n = g.vertex_count();
    if n == 0 {
        return invalid("pixel picture of a graph with no vertices");
    }
    let mut weights = vec![0.0; n * n];
    for &(u, v) in g.edges() {
        weights[u * n + v] = 1.0;
        weights[v * n + u] = 1.0;
    }
    Ok(StepGraphon(StepFunction { measures: vec![1.0 / n as f64; n], weights }))
}

/// The common limit of both labelings of `K_{n,n}`: two half blocks joined
/// by weight 1.
pub fn bipartite_limit() -> StepGraphon {
    StepGraphon(StepFunction {
        measures: vec![0.5, 0.5],
        weights: vec![0.0, 1.0, 1.0, 0.0],
    })
}

/// Block averages of `1 - max(x, y)` on an `m x m` equal grid.
///
/// Off the diagonal the average is `1 - (max(i,j) + 1/2)/m`; on a diagonal
/// block the expected maximum of two uniforms adds `2/3` of a block width.
pub fn uniform_attachment_limit(m: usize) -> Result<StepGraphon> {
    if m == 0 {
        return invalid("resolution must be at least 1");
    }
    let mf = m as f64;
    let mut weights = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            weights[i * m + j] = if i == j {
                1.0 - (i as f64 + 2.0 / 3.0) / mf
            } else {
                1.0 - (i.max(j) as f64 + 0.5) / mf
            };
        }
    }
    Ok(StepGraphon(StepFunction { measures: vec![1.0 / mf; m], weights }))
}

/// Restate both graphons on the overlay of their partitions.
pub fn common_refinement(w: &StepGraphon, u: &StepGraphon) -> (StepGraphon, StepGraphon) {
    let bounds = merged_boundaries(&w.boundaries(), &u.boundaries());
    (StepGraphon(w.0.on_boundaries(&bounds)), StepGraphon(u.0.on_boundaries(&bounds)))
}

/// The kernel `w - u` on the common refinement.
pub fn subtract(w: &StepGraphon, u: &StepGraphon) -> Kernel {
    let (a, b) = common_refinement(w, u);
    let weights = a.0.weights.iter().zip(&b.0.weights).map(|(x, y)| x - y).collect();
    Kernel(StepFunction { measures: a.0.measures, weights })
}

/// Binary PGM (P5, maxval 255) of `w` sampled at pixel centers; weight 1 is
/// black. Row `r` is the first coordinate, so `(0,0)` is the top-left.
pub fn render_pgm(w: &StepGraphon, px: usize) -> Result<Vec<u8>> {
    if px == 0 {
        return invalid("image side must be at least 1 pixel");
    }
    let header = format!("P5\n{px} {px}\n255\n");
    let mut out = Vec::with_capacity(header.len() + px * px);
    out.extend_from_slice(header.as_bytes());
    let blocks: Vec<usize> = (0..px).map(|i| w.block_of((i as f64 + 0.5) / px as f64)).collect();
    for &r in &blocks {
        for &c in &blocks {
            let level = (255.0 * (1.0 - w.weight(r, c))).round();
            out.push(level.clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}

impl fmt::Display for StepGraphon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.block_count();
        writeln!(f, "{k}")?;
        let join = |xs: &[f64]| xs.iter().map(f64::to_string).collect::<Vec<_>>().join(" ");
        writeln!(f, "{}", join(&self.0.measures))?;
        for row in self.0.weights.chunks(k) {
            writeln!(f, "{}", join(row))?;
        }
        Ok(())
    }
}

/// Parse the graphon text format: `k`, then a line of `k` measures, then
/// `k` rows of `k` weights.
pub fn parse_graphon(text: &str) -> Result<StepGraphon> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let err = |line, message: String| Error::Parse { line, message };
    let floats = |line: usize, s: &str, want: usize| -> Result<Vec<f64>> {
        let xs = s
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| err(line, format!("bad number {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if xs.len() != want {
            return Err(err(line, format!("expected {want} values, found {}", xs.len())));
        }
        Ok(xs)
    };

    let (l0, head) = lines.next().ok_or_else(|| err(1, "missing block count".into()))?;
    let k: usize = head.parse().map_err(|_| err(l0, format!("bad block count {head:?}")))?;
    if k == 0 {
        return Err(err(l0, "block count must be positive".into()));
    }
    let (l1, ms) = lines.next().ok_or_else(|| err(l0 + 1, "missing measures line".into()))?;
    let measures = floats(l1, ms, k)?;
    let mut rows = Vec::with_capacity(k);
    let mut last = l1;
    for _ in 0..k {
        let (l, row) = lines.next().ok_or_else(|| err(last + 1, format!("expected {k} weight rows")))?;
        rows.push(floats(l, row, k)?);
        last = l;
    }
    if let Some((l, _)) = lines.next() {
        return Err(err(l, "unexpected content after weight rows".into()));
    }
    StepGraphon::new(measures, rows).map_err(|e| match e {
        Error::InvalidArgument(m) => err(l0, m),
        other => other,
    })
}

impl FromStr for StepGraphon {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_graphon(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint-rule average of `1 - max(x,y)` over block `(i, j)`.
    fn quadrature_block_average(m: usize, i: usize, j: usize, grid: usize) -> f64 {
        let h = 1.0 / (m * grid) as f64;
        let mut acc = 0.0;
        for a in 0..grid {
            for b in 0..grid {
                let x = (i * grid + a) as f64 * h + h / 2.0;
                let y = (j * grid + b) as f64 * h + h / 2.0;
                acc += 1.0 - x.max(y);
            }
        }
        acc / (grid * grid) as f64
    }

    #[test]
    fn ua_limit_matches_quadrature() {
        for m in [1, 2, 3, 7] {
            let w = uniform_attachment_limit(m).unwrap();
            for i in 0..m {
                for j in 0..m {
                    let q = quadrature_block_average(m, i, j, 400);
                    assert!((w.weight(i, j) - q).abs() < 1e-5, "m={m} ({i},{j}) {} vs {q}", w.weight(i, j));
                }
            }
        }
        let one = uniform_attachment_limit(1).unwrap();
        assert!((one.weight(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(uniform_attachment_limit(2).unwrap().weight(0, 1), 0.25);
        let w = uniform_attachment_limit(5).unwrap();
        assert!(w.weight(4, 4) < w.weight(0, 0));
        assert!(uniform_attachment_limit(0).is_err());
    }

    #[test]
    fn constants_and_pixels() {
        assert!(constant_graphon(1.5).is_err());
        assert!(constant_graphon(-0.1).is_err());
        assert_eq!(constant_graphon(0.5).unwrap().evaluate(0.3, 0.9).unwrap(), 0.5);
        let p = pixel_graphon(&Graph::complete(2)).unwrap();
        assert_eq!(p.weight_rows(), vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert_eq!(p.evaluate(0.9, 0.9).unwrap(), 0.0);
        let alt = Graph::complete_bipartite(2, 2).relabel(&[0, 2, 1, 3]).unwrap();
        let pa = pixel_graphon(&alt).unwrap();
        let rows: Vec<Vec<f64>> = [[0., 1., 0., 1.], [1., 0., 1., 0.], [0., 1., 0., 1.], [1., 0., 1., 0.]]
            .iter()
            .map(|r| r.to_vec())
            .collect();
        assert_eq!(pa.weight_rows(), rows);
        assert_eq!(pa.measures(), &[0.25; 4]);
        let e3 = pixel_graphon(&Graph::empty(3)).unwrap();
        assert!(e3.weights().iter().all(|&w| w == 0.0));
        assert!(pixel_graphon(&Graph::empty(0)).is_err());
    }

    #[test]
    fn bipartite_limit_values() {
        let b = bipartite_limit();
        assert_eq!(b.evaluate(0.1, 0.9).unwrap(), 1.0);
        assert_eq!(b.evaluate(0.1, 0.2).unwrap(), 0.0);
        assert_eq!(b.evaluate(0.25, 0.75).unwrap(), 1.0);
        // boundary belongs to the right block
        assert_eq!(b.evaluate(0.5, 0.1).unwrap(), 1.0);
        assert!(b.evaluate(1.0, 0.1).is_err());
        assert!(b.evaluate(0.1, -0.0001).is_err());
    }

    #[test]
    fn constructor_validation() {
        assert!(StepGraphon::new(vec![0.5, 0.4], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![1.0, 0.0], vec![vec![0.0; 2]; 2]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0, 1.1], vec![1.1, 0.0]]).is_err());
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![vec![0.0; 3]; 2]).is_err());
        assert!(Kernel::uniform(vec![vec![-1.0, 0.5], vec![0.5, 1.0]]).is_ok());
        assert!(Kernel::uniform(vec![vec![-1.5]]).is_err());
    }

    #[test]
    fn refinement_and_equalize() {
        let b = bipartite_limit();
        let (x, y) = common_refinement(&b, &b);
        assert_eq!(x, b);
        assert_eq!(y, b);
        let c = constant_graphon(0.3).unwrap();
        let (c2, b2) = common_refinement(&c, &b);
        assert_eq!(c2.block_count(), 2);
        assert_eq!(b2, b);
        assert_eq!(c2.weights(), &[0.3; 4]);

        let e = b.equalize(4).unwrap();
        assert_eq!(e.block_count(), 4);
        for i in 0..4 {
            for j in 0..4 {
                let same = (i < 2) == (j < 2);
                assert_eq!(e.weight(i, j), if same { 0.0 } else { 1.0 });
            }
        }
        let p = pixel_graphon(&Graph::cycle(5).unwrap()).unwrap();
        assert_eq!(p.equalize(5).unwrap(), p);
        match b.equalize(3) {
            Err(Error::InvalidArgument(msg)) => assert!(msg.contains("0.5"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(b.equalize(0).is_err());
        let uneven = StepGraphon::new(vec![0.25, 0.75], vec![vec![1.0, 0.2], vec![0.2, 0.0]]).unwrap();
        let (u1, b1) = common_refinement(&uneven, &b);
        assert_eq!(u1.measures(), &[0.25, 0.25, 0.5]);
        assert_eq!(b1.weight(0, 2), 1.0);
        assert_eq!(u1.weight(1, 2), 0.0);
    }

    #[test]
    fn subtract_examples() {
        let b = bipartite_limit();
        assert!(subtract(&b, &b).is_zero());
        let k = subtract(&constant_graphon(1.0).unwrap(), &constant_graphon(0.0).unwrap());
        assert_eq!(k.weights(), &[1.0]);
        let k = subtract(&pixel_graphon(&Graph::complete(2)).unwrap(), &constant_graphon(0.5).unwrap());
        assert_eq!(k.weights(), &[-0.5, 0.5, 0.5, -0.5]);
        assert_eq!(k.measures(), &[0.5, 0.5]);
    }

    #[test]
    fn pgm_rendering() {
        let img = render_pgm(&constant_graphon(0.5).unwrap(), 4).unwrap();
        let header = b"P5\n4 4\n255\n";
        assert_eq!(&img[..header.len()], header);
        assert!(img[header.len()..].iter().all(|&p| p == 128));
        let black = render_pgm(&constant_graphon(1.0).unwrap(), 3).unwrap();
        assert!(black[black.len() - 9..].iter().all(|&p| p == 0));

        let px = 256;
        let img = render_pgm(&uniform_attachment_limit(32).unwrap(), px).unwrap();
        let body = &img[img.len() - px * px..];
        let diag: Vec<u8> = (0..px).map(|i| body[i * px + i]).collect();
        assert!(diag.windows(2).all(|w| w[0] <= w[1]));
        assert!(diag[0] < diag[px - 1]);
        assert_eq!(*body.iter().min().unwrap(), body[0]);
        assert!(render_pgm(&bipartite_limit(), 0).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let w = uniform_attachment_limit(3).unwrap();
        let back: StepGraphon = w.to_text().parse().unwrap();
        assert_eq!(back, w);
        assert!(parse_graphon("2\n0.5 0.5\n0 1\n0.9 0\n").is_err());
        assert!(parse_graphon("2\n0.5 0.6\n0 1\n1 0\n").is_err());
        match parse_graphon("2\n0.5 0.5\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }
}
