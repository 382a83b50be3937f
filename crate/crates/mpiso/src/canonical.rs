//! The bipartite canonical representation and its cell partition.
//!
//! Every original node becomes a ν-node and every original edge a ξ-node;
//! each ξ is joined to exactly the two ν-nodes bounding the edge it
//! represents, so the bipartite graph carries 2K edges. ν-nodes are sorted
//! by degree (descending), ties broken by the descending sequence of
//! neighbor degrees compared lexicographically. Nodes that remain tied
//! share a *cell*; only nodes in analogous cells of two graphs are ever
//! candidates for matching. Ties inside a cell are placed by ascending
//! original index so that runs are reproducible, which does not affect
//! cell membership.
//!
//! This representation is an intermediate step, not a complete canonical
//! form: non-isomorphic graphs can share a cell structure, and the matching
//! loop is responsible for the residual ambiguity.

use serde::Serialize;

use crate::graph::{Graph, NodeMapping};

/// Refinement signature of a node: its degree plus the degrees of its
/// neighbors sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CellSignature {
    pub degree: usize,
    pub neighbor_degrees: Vec<usize>,
}

impl CellSignature {
    fn of(g: &Graph, node: usize) -> CellSignature {
        let mut neighbor_degrees: Vec<usize> =
            g.neighbors(node).iter().map(|&v| g.degree(v)).collect();
        neighbor_degrees.sort_unstable_by(|a, b| b.cmp(a));
        CellSignature {
            degree: g.degree(node),
            neighbor_degrees,
        }
    }
}

/// One cell: its signature and its members as canonical ν positions
/// (ascending, contiguous).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub signature: CellSignature,
    pub members: Vec<usize>,
}

impl Cell {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Ordered partition of the ν-nodes into cells of equal signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellPartition {
    pub cells: Vec<Cell>,
    /// Cell index of each canonical ν position.
    pub cell_of: Vec<usize>,
}

impl CellPartition {
    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// True iff positions `i` and `j` belong to the same cell.
    pub fn similar(&self, i: usize, j: usize) -> bool {
        self.cell_of[i] == self.cell_of[j]
    }
}

/// True iff the two partitions have the same number of cells and the i-th
/// cells agree in both signature and size. A necessary condition for
/// isomorphism, checked before any message passing runs.
pub fn cell_structures_match(p1: &CellPartition, p2: &CellPartition) -> bool {
    p1.cells.len() == p2.cells.len()
        && p1
            .cells
            .iter()
            .zip(&p2.cells)
            .all(|(a, b)| a.signature == b.signature && a.members.len() == b.members.len())
}

/// The bipartite canonical representation of a graph.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalGraph {
    nu_count: usize,
    xi_count: usize,
    /// Q(ν): bipartite-edge ids incident to each ν position, ascending.
    incidence: Vec<Vec<usize>>,
    /// Q(ξ): the two bipartite-edge ids incident to each ξ.
    xi_ends: Vec<[usize; 2]>,
    /// ν position each bipartite edge attaches to.
    edge_nu: Vec<usize>,
    /// The other bipartite edge at the same ξ.
    edge_mate: Vec<usize>,
    partition: CellPartition,
    /// Original node index → canonical ν position.
    nu_order: NodeMapping,
    /// Canonical ν position → original node index.
    nu_original: Vec<usize>,
}

impl CanonicalGraph {
    pub fn nu_count(&self) -> usize {
        self.nu_count
    }

    pub fn xi_count(&self) -> usize {
        self.xi_count
    }

    pub fn bipartite_edge_count(&self) -> usize {
        self.edge_nu.len()
    }

    pub fn incidence(&self, nu: usize) -> &[usize] {
        &self.incidence[nu]
    }

    pub fn xi_ends(&self, xi: usize) -> [usize; 2] {
        self.xi_ends[xi]
    }

    pub fn edge_nu(&self, edge: usize) -> usize {
        self.edge_nu[edge]
    }

    pub fn edge_mate(&self, edge: usize) -> usize {
        self.edge_mate[edge]
    }

    pub fn partition(&self) -> &CellPartition {
        &self.partition
    }

    pub fn nu_order(&self) -> &NodeMapping {
        &self.nu_order
    }

    /// Canonical position of an original node.
    pub fn position_of(&self, original: usize) -> usize {
        self.nu_order.map(original)
    }

    /// Original node at a canonical position.
    pub fn original_node(&self, position: usize) -> usize {
        self.nu_original[position]
    }

    /// Rebuild the original edge structure over canonical positions. The
    /// result equals the input graph relabeled through `nu_order`.
    pub fn reconstruct(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .xi_ends
            .iter()
            .map(|&[e1, e2]| (self.edge_nu[e1], self.edge_nu[e2]))
            .collect();
        Graph::from_edges(self.nu_count, &edges).expect("canonical incidence is a valid graph")
    }
}

/// Build the canonical representation of a graph.
pub fn canonicalize(g: &Graph) -> CanonicalGraph {
    let m = g.num_nodes();
    let signatures: Vec<CellSignature> = (0..m).map(|u| CellSignature::of(g, u)).collect();

    // Canonical position → original node: signature descending, ties by
    // ascending original index.
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| signatures[y].cmp(&signatures[x]).then(x.cmp(&y)));

    let mut forward = vec![0usize; m];
    for (pos, &orig) in order.iter().enumerate() {
        forward[orig] = pos;
    }
    let nu_order = NodeMapping::new(forward).expect("positions form a bijection");

    // Group contiguous equal signatures into cells.
    let mut cells: Vec<Cell> = Vec::new();
    let mut cell_of = vec![0usize; m];
    for (pos, &orig) in order.iter().enumerate() {
        let sig = &signatures[orig];
        match cells.last_mut() {
            Some(cell) if cell.signature == *sig => cell.members.push(pos),
            _ => cells.push(Cell {
                signature: sig.clone(),
                members: vec![pos],
            }),
        }
        cell_of[pos] = cells.len() - 1;
    }
    let partition = CellPartition { cells, cell_of };

    // One ξ per original edge, ordered by the cell pair of its endpoints,
    // then by endpoint positions. Messages are per-edge, so this order only
    // fixes iteration, not correctness.
    let mut xis: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (pu, pv) = (nu_order.map(u), nu_order.map(v));
            (pu.min(pv), pu.max(pv))
        })
        .collect();
    xis.sort_unstable_by_key(|&(a, b)| {
        (
            partition.cell_of[a],
            partition.cell_of[b],
            a,
            b,
        )
    });

    let mut incidence = vec![Vec::new(); m];
    let mut xi_ends = Vec::with_capacity(xis.len());
    let mut edge_nu = Vec::with_capacity(2 * xis.len());
    let mut edge_mate = Vec::with_capacity(2 * xis.len());
    for (xi, &(a, b)) in xis.iter().enumerate() {
        let e1 = 2 * xi;
        let e2 = 2 * xi + 1;
        edge_nu.push(a);
        edge_nu.push(b);
        edge_mate.push(e2);
        edge_mate.push(e1);
        xi_ends.push([e1, e2]);
        incidence[a].push(e1);
        incidence[b].push(e2);
    }

    CanonicalGraph {
        nu_count: m,
        xi_count: xis.len(),
        incidence,
        xi_ends,
        edge_nu,
        edge_mate,
        partition,
        nu_order,
        nu_original: order,
    }
}
