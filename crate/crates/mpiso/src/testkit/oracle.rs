//! Brute-force isomorphism oracles. Deliberately independent of the
//! message-passing path: plain backtracking over adjacency consistency,
//! with cell pruning as the only shared ingredient — and a second,
//! partition-free variant for small graphs that shares nothing at all.

use thiserror::Error;

use crate::canonical::{canonicalize, cell_structures_match, CanonicalGraph};
use crate::graph::{validate_mapping, Graph, NodeMapping};

/// Default node cap for the cell-pruned oracle.
pub const DEFAULT_ORACLE_CAP: usize = 16;

/// Node cap for the partition-free enumeration oracles.
const ENUMERATION_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph too large for brute force: {nodes} nodes exceeds cap {cap}")]
    TooLarge { nodes: usize, cap: usize },
}

/// Adjacency bitmasks over canonical positions.
fn adjacency_masks(c: &CanonicalGraph) -> Vec<u64> {
    let g = c.reconstruct();
    let mut masks = vec![0u64; g.num_nodes()];
    for &(u, v) in g.edges() {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

struct Search<'a> {
    c1: &'a CanonicalGraph,
    c2: &'a CanonicalGraph,
    adj1: Vec<u64>,
    adj2: Vec<u64>,
    /// assigned[pos1] = pos2, usize::MAX while unassigned.
    assigned: Vec<usize>,
    used2: u64,
}

impl Search<'_> {
    /// Assign canonical positions of the first graph in order; candidates
    /// come from the analogous cell and must agree on adjacency to every
    /// already-assigned position.
    fn solve(&mut self, pos: usize) -> bool {
        let n = self.assigned.len();
        if pos == n {
            return true;
        }
        let cell = self.c1.partition().cell_of[pos];
        let candidates: Vec<usize> = self.c2.partition().cells[cell]
            .members
            .iter()
            .copied()
            .filter(|&j| self.used2 & (1 << j) == 0)
            .collect();
        'candidates: for j in candidates {
            for (prev, &image) in self.assigned.iter().enumerate().take(pos) {
                let edge1 = self.adj1[pos] & (1 << prev) != 0;
                let edge2 = self.adj2[j] & (1 << image) != 0;
                if edge1 != edge2 {
                    continue 'candidates;
                }
            }
            self.assigned[pos] = j;
            self.used2 |= 1 << j;
            if self.solve(pos + 1) {
                return true;
            }
            self.assigned[pos] = usize::MAX;
            self.used2 &= !(1 << j);
        }
        false
    }
}

/// Exhaustive search for an edge-preserving bijection, pruned by the cell
/// partition. Returns a witness mapping in original node indices if one
/// exists. Capped at [`DEFAULT_ORACLE_CAP`] nodes.
pub fn brute_force_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<NodeMapping>, OracleError> {
    brute_force_isomorphic_capped(g1, g2, DEFAULT_ORACLE_CAP)
}

/// [`brute_force_isomorphic`] with an explicit node cap (at most 64).
pub fn brute_force_isomorphic_capped(
    g1: &Graph,
    g2: &Graph,
    cap: usize,
) -> Result<Option<NodeMapping>, OracleError> {
    let cap = cap.min(64);
    let nodes = g1.num_nodes().max(g2.num_nodes());
    if nodes > cap {
        return Err(OracleError::TooLarge { nodes, cap });
    }
    if g1.num_nodes() != g2.num_nodes() || g1.num_edges() != g2.num_edges() {
        return Ok(None);
    }
    let c1 = canonicalize(g1);
    let c2 = canonicalize(g2);
    if !cell_structures_match(c1.partition(), c2.partition()) {
        return Ok(None);
    }
    let n = g1.num_nodes();
    let mut search = Search {
        c1: &c1,
        c2: &c2,
        adj1: adjacency_masks(&c1),
        adj2: adjacency_masks(&c2),
        assigned: vec![usize::MAX; n],
        used2: 0,
    };
    if !search.solve(0) {
        return Ok(None);
    }
    let mut forward = vec![0usize; n];
    for pos1 in 0..n {
        forward[c1.original_node(pos1)] = c2.original_node(search.assigned[pos1]);
    }
    let mapping = NodeMapping::new(forward).expect("assignment is a bijection");
    debug_assert!(validate_mapping(g1, g2, &mapping).expect("sizes match"));
    Ok(Some(mapping))
}

fn plain_masks(g: &Graph) -> Vec<u64> {
    let mut masks = vec![0u64; g.num_nodes()];
    for &(u, v) in g.edges() {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

/// Backtracking over all assignments with adjacency consistency as the
/// only pruning. No cell logic anywhere, so it cross-checks the pruned
/// oracle. Capped at 8 nodes.
pub fn enumerate_isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<NodeMapping>, OracleError> {
    let nodes = g1.num_nodes().max(g2.num_nodes());
    if nodes > ENUMERATION_CAP {
        return Err(OracleError::TooLarge {
            nodes,
            cap: ENUMERATION_CAP,
        });
    }
    if g1.num_nodes() != g2.num_nodes() {
        return Ok(None);
    }
    let n = g1.num_nodes();
    let adj1 = plain_masks(g1);
    let adj2 = plain_masks(g2);
    let mut assigned = vec![usize::MAX; n];
    let mut found = Vec::new();
    plain_solve(&adj1, &adj2, &mut assigned, 0, 0, &mut found, true);
    Ok(found.into_iter().next().map(|forward| {
        NodeMapping::new(forward).expect("assignment is a bijection")
    }))
}

/// Every automorphism of `g` (identity included) by full enumeration.
/// Capped at 8 nodes.
pub fn enumerate_automorphisms(g: &Graph) -> Result<Vec<NodeMapping>, OracleError> {
    if g.num_nodes() > ENUMERATION_CAP {
        return Err(OracleError::TooLarge {
            nodes: g.num_nodes(),
            cap: ENUMERATION_CAP,
        });
    }
    let adj = plain_masks(g);
    let mut assigned = vec![usize::MAX; g.num_nodes()];
    let mut found = Vec::new();
    plain_solve(&adj, &adj, &mut assigned, 0, 0, &mut found, false);
    Ok(found
        .into_iter()
        .map(|forward| NodeMapping::new(forward).expect("assignment is a bijection"))
        .collect())
}

fn plain_solve(
    adj1: &[u64],
    adj2: &[u64],
    assigned: &mut Vec<usize>,
    node: usize,
    used: u64,
    found: &mut Vec<Vec<usize>>,
    first_only: bool,
) {
    let n = assigned.len();
    if node == n {
        found.push(assigned.clone());
        return;
    }
    'candidates: for j in 0..n {
        if used & (1 << j) != 0 {
            continue;
        }
        for (prev, &image) in assigned.iter().enumerate().take(node) {
            let edge1 = adj1[node] & (1 << prev) != 0;
            let edge2 = adj2[j] & (1 << image) != 0;
            if edge1 != edge2 {
                continue 'candidates;
            }
        }
        assigned[node] = j;
        plain_solve(adj1, adj2, assigned, node + 1, used | (1 << j), found, first_only);
        assigned[node] = usize::MAX;
        if first_only && !found.is_empty() {
            return;
        }
    }
}
