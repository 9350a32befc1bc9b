//! Seeded generators for complete, Erdős–Rényi and Watts–Strogatz graphs.
//!
//! Random families are conditioned on connectivity by rejection: attempt `a`
//! draws from the sub-seed `derive_seed(seed, GRAPH, a)` until a connected
//! sample appears or [`MAX_ATTEMPTS`] is exhausted.

use std::collections::BTreeSet;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{count_components, Edge, Graph};
use crate::rng::{derive_seed, rng_from_seed, stream, Rng};

pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Complete { weight: f64 },
    ErdosRenyi { p: f64 },
    /// Ring lattice of even degree `d`, each edge rewired with probability `q`.
    WattsStrogatz { d: usize, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

/// A generated graph with the number of draws it took to get a connected one.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub attempts: usize,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewNodes(self.n));
        }
        match self.family {
            Family::Complete { weight } if !(weight > 0.0 && weight.is_finite()) => Err(
                Error::InvalidParameter(format!("complete graph weight must be positive, got {weight}")),
            ),
            Family::ErdosRenyi { p } if !(p > 0.0 && p <= 1.0) => Err(Error::InvalidParameter(
                format!("edge probability must lie in (0, 1], got {p}"),
            )),
            Family::WattsStrogatz { d, q } => {
                if d < 2 || d % 2 != 0 || d >= self.n {
                    return Err(Error::InvalidParameter(format!(
                        "average degree must be even with 2 <= d < n, got d = {d}, n = {}",
                        self.n
                    )));
                }
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidParameter(format!(
                        "rewiring probability must lie in [0, 1], got {q}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn generate(&self) -> Result<Generated> {
        self.validate()?;
        match self.family {
            Family::Complete { weight } => Ok(Generated {
                graph: complete(self.n, weight)?,
                attempts: 1,
            }),
            Family::ErdosRenyi { p } => {
                resample(self.seed, self.n, |rng| er_edges(self.n, p, rng))
            }
            Family::WattsStrogatz { d, q } => {
                resample(self.seed, self.n, |rng| ws_edges(self.n, d, q, rng))
            }
        }
    }
}

pub fn complete(n: usize, weight: f64) -> Result<Graph> {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push((i, j, weight));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    GenSpec {
        family: Family::ErdosRenyi { p },
        n,
        seed,
    }
    .generate()
    .map(|g| g.graph)
}

pub fn watts_strogatz(n: usize, d: usize, q: f64, seed: u64) -> Result<Graph> {
    GenSpec {
        family: Family::WattsStrogatz { d, q },
        n,
        seed,
    }
    .generate()
    .map(|g| g.graph)
}

fn resample<F>(seed: u64, n: usize, mut draw: F) -> Result<Generated>
where
    F: FnMut(&mut Rng) -> Vec<(usize, usize)>,
{
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(seed, stream::GRAPH, attempt as u64));
        let pairs = draw(&mut rng);
        let edges: Vec<Edge> = pairs
            .iter()
            .map(|&(i, j)| Edge { i, j, weight: 1.0 })
            .collect();
        if count_components(n, &edges) == 1 {
            let triples: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
            return Ok(Generated {
                graph: Graph::from_edges(n, &triples)?,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::GenerationFailure {
        attempts: MAX_ATTEMPTS,
    })
}

fn er_edges(n: usize, p: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    edges
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Watts–Strogatz (1998): visit lattice edges `(i, i + k)` layer by layer
/// and move the far endpoint to a uniform node that is neither `i` nor an
/// existing neighbour of `i`.
fn ws_edges(n: usize, d: usize, q: f64, rng: &mut Rng) -> Vec<(usize, usize)> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        for k in 1..=d / 2 {
            let j = (i + k) % n;
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }
    if q > 0.0 {
        for k in 1..=d / 2 {
            for i in 0..n {
                let j = (i + k) % n;
                if !adj[i].contains(&j) || rng.random::<f64>() >= q {
                    continue;
                }
                if adj[i].len() >= n - 1 {
                    continue;
                }
                let target = loop {
                    let t = rng.random_range(0..n);
                    if t != i && !adj[i].contains(&t) {
                        break t;
                    }
                };
                adj[i].remove(&j);
                adj[j].remove(&i);
                adj[i].insert(target);
                adj[target].insert(i);
            }
        }
    }
    let mut set = BTreeSet::new();
    for (i, nb) in adj.iter().enumerate() {
        for &j in nb {
            set.insert(ordered(i, j));
        }
    }
    set.into_iter().collect()
}
