//! Simple undirected graphs over dense node indices, plus node bijections
//! and edge-preservation checks.
//!
//! Graphs are immutable after construction and normalized: no self-loops,
//! no duplicate edges, adjacency lists sorted ascending. That normalization
//! makes every downstream iteration order deterministic.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node index {node} out of range for {num_nodes} nodes")]
    IndexOutOfRange { node: usize, num_nodes: usize },
    #[error("self-loop at node {node}")]
    SelfLoop { node: usize },
    #[error("node counts differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("mapping is not a bijection on [0, {len})")]
    NotBijective { len: usize },
}

/// A simple undirected graph. `M` nodes indexed `0..M`, `K` edges stored as
/// normalized `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Build a normalized graph from an edge list. Duplicate edges (in
    /// either orientation) collapse; self-loops and out-of-range endpoints
    /// are rejected.
    pub fn from_edges(num_nodes: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= num_nodes {
                return Err(GraphError::IndexOutOfRange { node: u, num_nodes });
            }
            if v >= num_nodes {
                return Err(GraphError::IndexOutOfRange { node: v, num_nodes });
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        let mut adjacency = vec![Vec::new(); num_nodes];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            num_nodes,
            edges: normalized,
            adjacency,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Normalized edge list: `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.num_nodes && v < self.num_nodes && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// BFS connectivity. Empty and single-node graphs count as connected.
    pub fn is_connected(&self) -> bool {
        if self.num_nodes <= 1 {
            return true;
        }
        let mut seen = vec![false; self.num_nodes];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push(v);
                }
            }
        }
        reached == self.num_nodes
    }

    /// Relabel nodes through a bijection: edge `(u, v)` becomes
    /// `(sigma(u), sigma(v))`.
    pub fn permute(&self, sigma: &NodeMapping) -> Result<Graph, GraphError> {
        if sigma.len() != self.num_nodes {
            return Err(GraphError::SizeMismatch {
                left: self.num_nodes,
                right: sigma.len(),
            });
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (sigma.map(u), sigma.map(v)))
            .collect();
        Graph::from_edges(self.num_nodes, &edges)
    }
}

/// A bijection on `[0, M)`: node `u` of the first graph corresponds to node
/// `forward[u]` of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMapping {
    forward: Vec<usize>,
}

impl NodeMapping {
    pub fn new(forward: Vec<usize>) -> Result<NodeMapping, GraphError> {
        let len = forward.len();
        let mut hit = vec![false; len];
        for &v in &forward {
            if v >= len || hit[v] {
                return Err(GraphError::NotBijective { len });
            }
            hit[v] = true;
        }
        Ok(NodeMapping { forward })
    }

    pub fn identity(len: usize) -> NodeMapping {
        NodeMapping {
            forward: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn map(&self, node: usize) -> usize {
        self.forward[node]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse(&self) -> NodeMapping {
        let mut back = vec![0; self.forward.len()];
        for (u, &v) in self.forward.iter().enumerate() {
            back[v] = u;
        }
        NodeMapping { forward: back }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(u, &v)| u == v)
    }
}

impl serde::Serialize for NodeMapping {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.forward.serialize(serializer)
    }
}

/// True iff `m` preserves the edge structure between `g1` and `g2`:
/// `(u, v)` is an edge of `g1` exactly when `(m(u), m(v))` is an edge of
/// `g2`.
pub fn validate_mapping(g1: &Graph, g2: &Graph, m: &NodeMapping) -> Result<bool, GraphError> {
    if g1.num_nodes() != g2.num_nodes() {
        return Err(GraphError::SizeMismatch {
            left: g1.num_nodes(),
            right: g2.num_nodes(),
        });
    }
    if m.len() != g1.num_nodes() {
        return Err(GraphError::SizeMismatch {
            left: g1.num_nodes(),
            right: m.len(),
        });
    }
    // m is bijective, so forward inclusion plus equal edge counts gives the
    // full equivalence.
    if g1.num_edges() != g2.num_edges() {
        return Ok(false);
    }
    Ok(g1
        .edges()
        .iter()
        .all(|&(u, v)| g2.has_edge(m.map(u), m.map(v))))
}
