#![allow(dead_code)]

use glr_core::Graph;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// Connected weighted graph: a random spanning tree plus extra edges.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let parents = proptest::collection::vec((any::<prop::sample::Index>(), 0.1..5.0f64), n - 1);
            let extra = proptest::collection::vec(
                (any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0.1..5.0f64),
                0..(2 * n),
            );
            (Just(n), parents, extra)
        })
        .prop_map(|(n, parents, extra)| {
            let mut seen = std::collections::HashSet::new();
            let mut edges = Vec::new();
            for (k, (p, w)) in parents.into_iter().enumerate() {
                let child = k + 1;
                let parent = p.index(child);
                seen.insert((parent, child));
                edges.push((parent, child, w));
            }
            for (a, b, w) in extra {
                let (i, j) = (a.index(n), b.index(n));
                let key = (i.min(j), i.max(j));
                if i != j && seen.insert(key) {
                    edges.push((key.0, key.1, w));
                }
            }
            Graph::from_edges(n, &edges).expect("spanning tree keeps the graph connected")
        })
}

pub fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut l = DMatrix::zeros(n, n);
    for e in g.edges() {
        l[(e.i, e.j)] -= e.weight;
        l[(e.j, e.i)] -= e.weight;
        l[(e.i, e.i)] += e.weight;
        l[(e.j, e.j)] += e.weight;
    }
    l
}

/// `(I + alpha L)^{-1}` by dense LU.
pub fn filter_matrix(g: &Graph, alpha: f64) -> DMatrix<f64> {
    let n = g.node_count();
    (DMatrix::identity(n, n) + dense_laplacian(g) * alpha)
        .try_inverse()
        .expect("I + alpha L is positive definite")
}

/// Bias, variance and MSE straight from their definitions with dense matrices.
pub fn brute_force_decomposition(g: &Graph, alpha: f64, x: &[f64], sigma: &[f64]) -> (f64, f64, f64) {
    let n = g.node_count();
    let h = filter_matrix(g, alpha);
    let xv = DVector::from_column_slice(x);
    let bias = (&h * &xv - &xv).norm_squared();
    let cov = DMatrix::from_diagonal(&DVector::from_iterator(n, sigma.iter().map(|s| s * s)));
    let var = (&h * cov * h.transpose()).trace();
    (bias, var, bias + var)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn vec_rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / norm.max(f64::MIN_POSITIVE)
}

pub fn signal(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, n)
}
