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

//! Finite simple graphs and exact homomorphism counting.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// A finite simple undirected graph on vertices `0..n`.
///
/// Edges are stored as sorted pairs `(u, v)` with `u < v`, in lexicographic
/// order and without duplicates. Values are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Build a graph, normalizing and deduplicating the edge list.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            if u >= n || v >= n {
                return invalid(format!("edge {{{u},{v}}} out of range for {n} vertices"));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self { n, edges: list })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self { n, edges }
    }

    /// The cycle on `n >= 3` vertices, `0-1-..-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return invalid(format!("a cycle needs at least 3 vertices, got {n}"));
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `K_{a,b}` in block labeling: part A is `0..a`, part B is `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
        Self { n: a + b, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let mut a = vec![vec![0u8; self.n]; self.n];
        for &(u, v) in &self.edges {
            a[u][v] = 1;
            a[v][u] = 1;
        }
        a
    }

    /// Apply a vertex permutation: edge `{u,v}` becomes `{perm[u], perm[v]}`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Self {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + shift, v + shift)));
        Self { n: self.n + other.n, edges }
    }

    /// Serialize in edge-list format: `n m` then one sorted edge per line.
    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }

    /// Connected components, each as an ascending vertex list, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &w in &nbrs[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return invalid(format!("permutation has length {}, expected {n}", perm.len()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return invalid(format!("not a bijection on 0..{n}: {perm:?}"));
        }
    }
    Ok(())
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_edge_list(s)
    }
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, message: message.into() })
}

fn parse_pair(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
        return parse_err(line_no, format!("expected two integers, found {line:?}"));
    };
    match (a.parse(), b.parse()) {
        (Ok(a), Ok(b)) => Ok((a, b)),
        _ => parse_err(line_no, format!("expected two nonnegative integers, found {line:?}")),
    }
}

/// Parse the edge-list format: a header `n m`, then `m` lines `u v`.
///
/// Blank lines are ignored. Endpoints are 0-indexed; duplicate edges in
/// either orientation collapse to one.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let Some((header_no, header)) = lines.next() else {
        return parse_err(1, "missing header line \"n m\"");
    };
    let (n, m) = parse_pair(header_no, header)?;

    let mut edges = Vec::with_capacity(m);
    let mut last = header_no;
    for _ in 0..m {
        let Some((no, line)) = lines.next() else {
            return parse_err(last + 1, format!("expected {m} edge lines, found {}", edges.len()));
        };
        let (u, v) = parse_pair(no, line)?;
        if u >= n || v >= n {
            return parse_err(no, format!("endpoint out of range for {n} vertices"));
        }
        if u == v {
            return parse_err(no, format!("self-loop at vertex {u}"));
        }
        edges.push((u, v));
        last = no;
    }
    if let Some((no, _)) = lines.next() {
        return parse_err(no, format!("unexpected content after {m} edge lines"));
    }
    Graph::new(n, edges)
}

/// Fixed-width bitset rows of an adjacency matrix.
struct BitAdjacency {
    words: usize,
    rows: Vec<u64>,
}

impl BitAdjacency {
    fn new(g: &Graph) -> Self {
        let words = g.n.div_ceil(64).max(1);
        let mut rows = vec![0u64; g.n * words];
        for &(u, v) in &g.edges {
            rows[u * words + v / 64] |= 1 << (v % 64);
            rows[v * words + u / 64] |= 1 << (u % 64);
        }
        Self { words, rows }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }
}

/// Backtracking state for one connected component of the pattern.
struct HomSearch<'a> {
    adj: &'a BitAdjacency,
    // for each position, the positions of earlier neighbors
    back: Vec<Vec<usize>>,
    image: Vec<usize>,
    // scratch candidate sets, one per depth
    scratch: Vec<Vec<u64>>,
    full: Vec<u64>,
}

impl HomSearch<'_> {
    fn count(&mut self, pos: usize) -> Result<u64> {
        let mut cand = std::mem::take(&mut self.scratch[pos]);
        cand.copy_from_slice(&self.full);
        for &b in &self.back[pos] {
            for (c, r) in cand.iter_mut().zip(self.adj.row(self.image[b])) {
                *c &= r;
            }
        }
        let result = if pos + 1 == self.back.len() {
            Ok(cand.iter().map(|w| u64::from(w.count_ones())).sum())
        } else {
            let mut total = 0u64;
            let mut res = Ok(());
            'outer: for (wi, &word) in cand.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let v = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    self.image[pos] = v;
                    match self.count(pos + 1).and_then(|c| total.checked_add(c).ok_or(Error::Overflow)) {
                        Ok(t) => total = t,
                        Err(e) => {
                            res = Err(e);
                            break 'outer;
                        }
                    }
                }
            }
            res.map(|_| total)
        };
        self.scratch[pos] = cand;
        result
    }
}

/// Count homomorphisms from `pattern` into `host`.
///
/// The pattern is split into connected components (the count is the product
/// over components). Within a component, vertices are assigned in index order
/// and each candidate set is the intersection of the host neighborhoods of
/// already-mapped pattern neighbors; the last vertex contributes the size of
/// its candidate set directly.
pub fn hom_count(pattern: &Graph, host: &Graph) -> Result<u64> {
    if pattern.n == 0 {
        return invalid("pattern graph must have at least one vertex");
    }
    if host.n == 0 {
        return Ok(0);
    }
    let adj = BitAdjacency::new(host);
    let mut full = vec![u64::MAX; adj.words];
    let tail = host.n % 64;
    if tail != 0 {
        *full.last_mut().unwrap() = (1u64 << tail) - 1;
    }

    let mut total = 1u64;
    for comp in pattern.components() {
        let mut pos_of = vec![usize::MAX; pattern.n];
        for (p, &v) in comp.iter().enumerate() {
            pos_of[v] = p;
        }
        let mut back = vec![Vec::new(); comp.len()];
        for &(u, v) in &pattern.edges {
            let (pu, pv) = (pos_of[u], pos_of[v]);
            if pu != usize::MAX {
                back[pu.max(pv)].push(pu.min(pv));
            }
        }
        let mut search = HomSearch {
            adj: &adj,
            image: vec![0; comp.len()],
            scratch: vec![vec![0; adj.words]; comp.len()],
            back,
            full: full.clone(),
        };
        let c = search.count(0)?;
        total = total.checked_mul(c).ok_or(Error::Overflow)?;
        if total == 0 {
            break;
        }
    }
    Ok(total)
}
