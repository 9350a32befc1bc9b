//! Weighted undirected simple graphs and their combinatorial Laplacian.

use std::collections::{HashSet, VecDeque};

use crate::error::{check_len, Error, Result};

/// An undirected weighted edge, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// A connected, weighted, undirected simple graph.
///
/// Construction validates every invariant, so any `Graph` value is safe to
/// hand to the spectral routines.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Build a graph from `(i, j, w)` triples.
    ///
    /// Fails on self-loops, repeated unordered pairs, non-positive (or
    /// non-finite) weights, out-of-range endpoints, and disconnected input.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewNodes(n));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut stored = Vec::with_capacity(edges.len());
        for &(i, j, w) in edges {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, len: n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop { node: i });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { i, j, weight: w });
            }
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge { i, j });
            }
            stored.push(Edge { i: a, j: b, weight: w });
        }
        let components = count_components(n, &stored);
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(Self { n, edges: stored })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degree of every node.
    pub fn degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.i] += e.weight;
            deg[e.j] += e.weight;
        }
        deg
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        LaplacianMatrix::new(self)
    }

    /// The Laplacian quadratic form, summed edge by edge.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        check_len(self.n, x.len())?;
        Ok(self
            .edges
            .iter()
            .map(|e| {
                let d = x[e.i] - x[e.j];
                e.weight * d * d
            })
            .sum())
    }
}

/// Number of connected components, by breadth-first traversal.
pub fn count_components(n: usize, edges: &[Edge]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.i].push(e.j);
        adj[e.j].push(e.i);
    }
    let mut visited = vec![false; n];
    let mut components = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        components += 1;
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    components
}

/// The combinatorial Laplacian `L = S - W` in compressed sparse row form.
///
/// Dense storage is only materialized on request through [`to_dense`].
///
/// [`to_dense`]: LaplacianMatrix::to_dense
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    n: usize,
    degree: Vec<f64>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl LaplacianMatrix {
    fn new(g: &Graph) -> Self {
        let n = g.n;
        let mut counts = vec![0usize; n];
        for e in &g.edges {
            counts[e.i] += 1;
            counts[e.j] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + counts[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        for e in &g.edges {
            neighbors[fill[e.i]] = e.j;
            weights[fill[e.i]] = e.weight;
            fill[e.i] += 1;
            neighbors[fill[e.j]] = e.i;
            weights[fill[e.j]] = e.weight;
            fill[e.j] += 1;
        }
        Self {
            n,
            degree: g.degrees(),
            offsets,
            neighbors,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degree
    }

    /// Entry `L[i][j]`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.degree[i];
        }
        self.row(i)
            .find(|&(k, _)| k == j)
            .map_or(0.0, |(_, w)| -w)
    }

    /// Off-diagonal neighbors of node `i` with their (positive) weights.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[i]..self.offsets[i + 1];
        self.neighbors[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    pub fn trace(&self) -> f64 {
        self.degree.iter().sum()
    }

    /// `out = L x`, evaluated as `sum_j w_ij (x_i - x_j)` so that
    /// near-constant inputs produce accurately small outputs.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let xi = x[i];
            *o = self.row(i).map(|(j, w)| w * (xi - x[j])).sum();
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply(x, &mut out);
        out
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = self.degree[i];
            for (j, w) in self.row(i) {
                a[i * n + j] -= w;
            }
        }
        a
    }
}
