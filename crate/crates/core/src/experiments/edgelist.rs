//! Whitespace-separated edge lists: one `u v [w]` per line, `#` comments.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Indexing {
    #[default]
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadOptions {
    pub indexing: Indexing,
    /// Read the optional third column; otherwise every edge has weight 1.
    pub weighted: bool,
    /// Treat `u v` and `v u` as the same pair. When false, a reversed pair
    /// with a different weight is a parse error.
    pub symmetrize: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            indexing: Indexing::Zero,
            weighted: false,
            symmetrize: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Original node ID of each compacted index.
    pub node_ids: Vec<u64>,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_edge_list<R: BufRead>(input: R, opts: &LoadOptions) -> Result<LoadedGraph> {
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut node_ids = Vec::new();
    // Sorted pair -> (weight, whether it was read as u < v).
    let mut seen: HashMap<(usize, usize), (f64, bool)> = HashMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut self_loops = 0;
    let mut duplicates = 0;

    for (k, line) in input.lines().enumerate() {
        let lineno = k + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_err(lineno, format!("expected `u v [w]`, got {content:?}")));
        }
        let node = |s: &str| -> Result<u64> {
            let id: u64 = s
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid node id {s:?}")))?;
            match opts.indexing {
                Indexing::Zero => Ok(id),
                Indexing::One if id == 0 => Err(parse_err(lineno, "node id 0 in a 1-indexed list")),
                Indexing::One => Ok(id - 1),
            }
        };
        let (u, v) = (node(fields[0])?, node(fields[1])?);
        let w = match (opts.weighted, fields.get(2)) {
            (true, Some(s)) => {
                let w: f64 = s
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("invalid weight {s:?}")))?;
                if !(w > 0.0 && w.is_finite()) {
                    return Err(parse_err(lineno, format!("weight must be positive, got {w}")));
                }
                w
            }
            _ => 1.0,
        };
        let mut index = |id: u64| -> usize {
            *ids.entry(id).or_insert_with(|| {
                node_ids.push(id);
                node_ids.len() - 1
            })
        };
        let (a, b) = (index(u), index(v));
        if a == b {
            self_loops += 1;
            continue;
        }
        let forward = a < b;
        match seen.entry((a.min(b), a.max(b))) {
            Entry::Vacant(e) => {
                e.insert((w, forward));
                edges.push((a, b, w));
            }
            Entry::Occupied(e) => {
                let (w0, fwd0) = *e.get();
                if !opts.symmetrize && fwd0 != forward && w0 != w {
                    return Err(parse_err(
                        lineno,
                        format!("asymmetric weights {w0} and {w} for the same pair"),
                    ));
                }
                duplicates += 1;
            }
        }
    }

    let n = node_ids.len();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    Ok(LoadedGraph {
        graph: Graph::from_edges(n, &edges)?,
        node_ids,
        self_loops_dropped: self_loops,
        duplicates_dropped: duplicates,
    })
}

pub fn load_edge_list(path: &Path, opts: &LoadOptions) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path)?;
    parse_edge_list(std::io::BufReader::new(file), opts)
}
