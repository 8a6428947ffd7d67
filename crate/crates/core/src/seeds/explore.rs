//! Breadth-first enumeration of seeds up to isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Seed, SeedError, SeedKey};
use crate::laurent::LaurentPolynomial;
use crate::quiver::{Quiver, QuiverJson};

/// Exploration budget. Exceeding any limit truncates the graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub max_seeds: usize,
    /// Largest number of terms allowed in a single cluster variable.
    pub max_terms: usize,
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_seeds: 10_000, max_terms: 100_000, max_depth: 64 }
    }
}

#[derive(Clone, Debug)]
pub struct SeedNode {
    /// Representative seed, in the vertex order it was first reached with.
    pub seed: Seed,
    pub key: SeedKey,
    /// Mutation distance from the starting seed.
    pub depth: usize,
    /// False when some mutation of this seed was cut off by a limit.
    pub complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    /// Indices into [`ExchangeGraph::variables`] of the `n - 1` shared variables.
    pub shared: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub rank: usize,
    /// Nodes sorted by seed key.
    pub nodes: Vec<SeedNode>,
    pub edges: Vec<Edge>,
    /// Distinct cluster variables, sorted by canonical text.
    pub variables: Vec<LaurentPolynomial>,
    /// For every node, the sorted indices of its cluster variables.
    pub clusters: Vec<Vec<usize>>,
    pub initial: usize,
    pub truncated: bool,
    pub limits: Limits,
}

pub fn explore(quiver: &Quiver, limits: Limits) -> Result<ExchangeGraph, SeedError> {
    explore_from(&Seed::initial(quiver), limits)
}

struct Builder {
    nodes: Vec<SeedNode>,
    index: HashMap<SeedKey, usize>,
    edges: BTreeSet<(usize, usize)>,
    truncated: bool,
}

pub fn explore_from(start: &Seed, limits: Limits) -> Result<ExchangeGraph, SeedError> {
    let n = start.rank();
    let key = start.key();
    let mut b = Builder {
        nodes: vec![SeedNode { seed: start.clone(), key: key.clone(), depth: 0, complete: true }],
        index: HashMap::from([(key, 0)]),
        edges: BTreeSet::new(),
        truncated: false,
    };
    let mut frontier = vec![0usize];
    let mut depth = 0;
    while !frontier.is_empty() {
        let jobs: Vec<(usize, usize)> =
            frontier.iter().flat_map(|&i| (0..n).map(move |k| (i, k))).collect();
        let nodes = &b.nodes;
        let results: Vec<Result<(usize, Seed, SeedKey), SeedError>> = jobs
            .par_iter()
            .map(|&(i, k)| {
                let s = nodes[i].seed.mutate(k)?;
                let key = s.key();
                Ok((i, s, key))
            })
            .collect();
        let mut next = Vec::new();
        for r in results {
            let (from, seed, key) = r?;
            let target = match b.index.get(&key) {
                Some(&t) => Some(t),
                None => {
                    let too_big = seed.cluster().iter().any(|v| v.num_terms() > limits.max_terms);
                    if too_big || depth >= limits.max_depth || b.nodes.len() >= limits.max_seeds {
                        None
                    } else {
                        let t = b.nodes.len();
                        b.nodes.push(SeedNode { seed, key: key.clone(), depth: depth + 1, complete: true });
                        b.index.insert(key, t);
                        next.push(t);
                        Some(t)
                    }
                }
            };
            match target {
                Some(t) => {
                    b.edges.insert((from.min(t), from.max(t)));
                }
                None => {
                    b.nodes[from].complete = false;
                    b.truncated = true;
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    Ok(finish(b, n, limits))
}

fn finish(b: Builder, rank: usize, limits: Limits) -> ExchangeGraph {
    let mut order: Vec<usize> = (0..b.nodes.len()).collect();
    order.sort_by(|&x, &y| b.nodes[x].key.cmp(&b.nodes[y].key));
    let mut position = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut slots: Vec<Option<SeedNode>> = b.nodes.into_iter().map(Some).collect();
    let nodes: Vec<SeedNode> = order.iter().map(|&old| slots[old].take().unwrap()).collect();

    let mut by_text: BTreeMap<String, LaurentPolynomial> = BTreeMap::new();
    for node in &nodes {
        for v in node.seed.cluster() {
            by_text.entry(v.to_string()).or_insert_with(|| v.clone());
        }
    }
    let ids: HashMap<&str, usize> = by_text.keys().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let clusters: Vec<Vec<usize>> = nodes
        .iter()
        .map(|node| node.key.variables.iter().map(|s| ids[s.as_str()]).collect())
        .collect();

    let mut edges: Vec<Edge> = b
        .edges
        .iter()
        .map(|&(a, c)| {
            let (source, target) = (position[a].min(position[c]), position[a].max(position[c]));
            let other: BTreeSet<usize> = clusters[target].iter().copied().collect();
            let shared = clusters[source].iter().copied().filter(|v| other.contains(v)).collect();
            Edge { source, target, shared }
        })
        .collect();
    edges.sort_by_key(|e| (e.source, e.target));

    ExchangeGraph {
        rank,
        nodes,
        edges,
        variables: by_text.into_values().collect(),
        clusters,
        initial: position[0],
        truncated: b.truncated,
        limits,
    }
}

#[derive(Serialize)]
struct GraphJson<'a> {
    rank: usize,
    truncated: bool,
    initial: usize,
    variables: Vec<String>,
    seeds: Vec<NodeJson<'a>>,
    edges: &'a [Edge],
}

#[derive(Serialize)]
struct NodeJson<'a> {
    cluster: &'a [usize],
    quiver: QuiverJson,
    depth: usize,
    complete: bool,
}

impl ExchangeGraph {
    pub fn num_seeds(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn neighbors(&self, node: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| match (e.source == node, e.target == node) {
                (true, _) => Some(e.target),
                (_, true) => Some(e.source),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors(node).len()
    }

    pub fn variable_index(&self, v: &LaurentPolynomial) -> Option<usize> {
        let s = v.to_string();
        self.variables.binary_search_by(|w| w.to_string().cmp(&s)).ok()
    }

    /// Sorted list of distinct clusters, each a sorted list of variable indices.
    pub fn distinct_clusters(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.clusters.iter().cloned().collect();
        set.into_iter().collect()
    }

    /// Node whose seed is isomorphic to `seed`, if it was reached.
    pub fn find(&self, seed: &Seed) -> Option<usize> {
        let key = seed.key();
        self.nodes.binary_search_by(|n| n.key.cmp(&key)).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let g = GraphJson {
            rank: self.rank,
            truncated: self.truncated,
            initial: self.initial,
            variables: self.variables.iter().map(ToString::to_string).collect(),
            seeds: self
                .nodes
                .iter()
                .zip(&self.clusters)
                .map(|(node, cluster)| NodeJson {
                    cluster,
                    quiver: QuiverJson::from(&node.key.quiver),
                    depth: node.depth,
                    complete: node.complete,
                })
                .collect(),
            edges: &self.edges,
        };
        serde_json::to_value(g).expect("exchange graph serializes")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        for (i, cluster) in self.clusters.iter().enumerate() {
            let label: Vec<String> = cluster.iter().map(|&v| self.variables[v].to_string()).collect();
            let shape = if i == self.initial { ", shape=box" } else { "" };
            let _ = writeln!(out, "  s{i} [label=\"{}\"{shape}];", label.join("\\n"));
        }
        for e in &self.edges {
            let _ = writeln!(out, "  s{} -- s{};", e.source, e.target);
        }
        out.push_str("}\n");
        out
    }
}

/// Rebuilds the exchange graph from clusters alone: two clusters are
/// adjacent exactly when they share all but one variable.
pub fn reconstruct_exchange_graph(clusters: &[Vec<usize>]) -> Result<Vec<(usize, usize)>, SeedError> {
    let Some(first) = clusters.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    let sets: Vec<BTreeSet<usize>> = clusters.iter().map(|c| c.iter().copied().collect()).collect();
    if sets.iter().zip(clusters).any(|(s, c)| c.len() != n || s.len() != n) {
        return Err(SeedError::RaggedInput);
    }
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].intersection(&sets[j]).count() + 1 == n {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}
