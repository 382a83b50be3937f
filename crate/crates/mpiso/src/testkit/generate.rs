//! Deterministic graph generators: random graphs, meshes, cycles, complete
//! graphs, disjoint unions, and the named hard-instance corpus.

use thiserror::Error;

use crate::graph::{Graph, NodeMapping};
use crate::rng::{derive_seed, CounterRng};

const MAX_CONNECT_ATTEMPTS: u64 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("unsatisfiable spec: {reason}")]
    UnsatisfiableSpec { reason: String },
}

fn unsatisfiable(reason: impl Into<String>) -> GenerateError {
    GenerateError::UnsatisfiableSpec {
        reason: reason.into(),
    }
}

/// Graphs with a known construction, used as hard-instance fixtures. All
/// of them survive the cell-structure check against their corpus partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    /// The Petersen graph: generalized Petersen (5, 2).
    Petersen,
    /// Generalized Petersen graph GP(outer, skip): outer cycle, spokes, and
    /// an inner star polygon. GP(n, 1) is the n-prism.
    GeneralizedPetersen { outer: usize, skip: usize },
    /// Cycle on `nodes` vertices plus all antipodal chords; 3-regular for
    /// even `nodes` >= 6.
    MoebiusLadder { nodes: usize },
    /// Cayley graph on Z4 x Z4 with connection set {±(1,0), ±(0,1),
    /// ±(1,1)}: strongly regular with parameters (16, 6, 2, 2).
    Shrikhande,
    /// The 4x4 rook's graph: same strongly regular parameters, not
    /// isomorphic to the Shrikhande graph.
    Rook4x4,
}

/// What to generate.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    /// Each of the M(M-1)/2 possible edges included independently with
    /// probability `edge_probability`.
    Random { nodes: usize, edge_probability: f64 },
    Mesh2d { rows: usize, cols: usize },
    Mesh3d { x: usize, y: usize, z: usize },
    Cycle { nodes: usize },
    Complete { nodes: usize },
    DisjointUnion(Vec<GraphFamily>),
    Named(NamedGraph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub family: GraphFamily,
    pub seed: u64,
    pub require_connected: bool,
}

impl GeneratorSpec {
    pub fn new(family: GraphFamily, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            family,
            seed,
            require_connected: false,
        }
    }

    pub fn connected(family: GraphFamily, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            family,
            seed,
            require_connected: true,
        }
    }
}

fn random_graph(nodes: usize, p: f64, seed: u64) -> Graph {
    let mut rng = CounterRng::new(seed);
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in (u + 1)..nodes {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(nodes, &edges).expect("generated edges are in range")
}

fn mesh2d(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges).expect("mesh edges are in range")
}

fn mesh3d(x: usize, y: usize, z: usize) -> Graph {
    let id = |i: usize, j: usize, k: usize| (i * y + j) * z + k;
    let mut edges = Vec::new();
    for i in 0..x {
        for j in 0..y {
            for k in 0..z {
                if i + 1 < x {
                    edges.push((id(i, j, k), id(i + 1, j, k)));
                }
                if j + 1 < y {
                    edges.push((id(i, j, k), id(i, j + 1, k)));
                }
                if k + 1 < z {
                    edges.push((id(i, j, k), id(i, j, k + 1)));
                }
            }
        }
    }
    Graph::from_edges(x * y * z, &edges).expect("mesh edges are in range")
}

fn cycle(nodes: usize) -> Result<Graph, GenerateError> {
    if nodes < 3 {
        return Err(unsatisfiable("a simple cycle needs at least 3 nodes"));
    }
    let edges: Vec<(usize, usize)> = (0..nodes).map(|i| (i, (i + 1) % nodes)).collect();
    Ok(Graph::from_edges(nodes, &edges).expect("cycle edges are in range"))
}

fn complete(nodes: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in (u + 1)..nodes {
            edges.push((u, v));
        }
    }
    Graph::from_edges(nodes, &edges).expect("complete edges are in range")
}

fn generalized_petersen(outer: usize, skip: usize) -> Result<Graph, GenerateError> {
    if outer < 3 || skip == 0 || 2 * skip == outer || skip >= outer {
        return Err(unsatisfiable(format!(
            "generalized Petersen graph needs outer >= 3 and 0 < skip < outer/2, got ({outer}, {skip})"
        )));
    }
    let mut edges = Vec::new();
    for i in 0..outer {
        edges.push((i, (i + 1) % outer)); // outer cycle
        edges.push((i, outer + i)); // spoke
        edges.push((outer + i, outer + (i + skip) % outer)); // inner star
    }
    Ok(Graph::from_edges(2 * outer, &edges).expect("edges are in range"))
}

fn moebius_ladder(nodes: usize) -> Result<Graph, GenerateError> {
    if nodes < 6 || !nodes.is_multiple_of(2) {
        return Err(unsatisfiable("a Moebius ladder needs an even node count >= 6"));
    }
    let mut edges: Vec<(usize, usize)> = (0..nodes).map(|i| (i, (i + 1) % nodes)).collect();
    for i in 0..nodes / 2 {
        edges.push((i, i + nodes / 2));
    }
    Ok(Graph::from_edges(nodes, &edges).expect("edges are in range"))
}

fn shrikhande() -> Graph {
    let id = |i: usize, j: usize| 4 * i + j;
    let deltas = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            for &(di, dj) in &deltas {
                edges.push((id(i, j), id((i + di) % 4, (j + dj) % 4)));
            }
        }
    }
    Graph::from_edges(16, &edges).expect("edges are in range")
}

fn rook4x4() -> Graph {
    let id = |i: usize, j: usize| 4 * i + j;
    let mut edges = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            for k in (j + 1)..4 {
                edges.push((id(i, j), id(i, k))); // same row
            }
            for k in (i + 1)..4 {
                edges.push((id(i, j), id(k, j))); // same column
            }
        }
    }
    Graph::from_edges(16, &edges).expect("edges are in range")
}

fn named(which: NamedGraph) -> Result<Graph, GenerateError> {
    match which {
        NamedGraph::Petersen => generalized_petersen(5, 2),
        NamedGraph::GeneralizedPetersen { outer, skip } => generalized_petersen(outer, skip),
        NamedGraph::MoebiusLadder { nodes } => moebius_ladder(nodes),
        NamedGraph::Shrikhande => Ok(shrikhande()),
        NamedGraph::Rook4x4 => Ok(rook4x4()),
    }
}

fn build(family: &GraphFamily, seed: u64) -> Result<Graph, GenerateError> {
    match family {
        GraphFamily::Random {
            nodes,
            edge_probability,
        } => {
            if !(0.0..=1.0).contains(edge_probability) {
                return Err(unsatisfiable("edge probability must be in [0, 1]"));
            }
            Ok(random_graph(*nodes, *edge_probability, seed))
        }
        GraphFamily::Mesh2d { rows, cols } => Ok(mesh2d(*rows, *cols)),
        GraphFamily::Mesh3d { x, y, z } => Ok(mesh3d(*x, *y, *z)),
        GraphFamily::Cycle { nodes } => cycle(*nodes),
        GraphFamily::Complete { nodes } => Ok(complete(*nodes)),
        GraphFamily::DisjointUnion(parts) => {
            let mut edges = Vec::new();
            let mut offset = 0;
            for (idx, part) in parts.iter().enumerate() {
                let g = build(part, derive_seed(seed, idx as u64))?;
                edges.extend(g.edges().iter().map(|&(u, v)| (u + offset, v + offset)));
                offset += g.num_nodes();
            }
            Ok(Graph::from_edges(offset, &edges).expect("offsets keep edges in range"))
        }
        GraphFamily::Named(which) => named(*which),
    }
}

/// Generate a graph. Deterministic in `(spec, seed)`; with
/// `require_connected` the random family retries with derived seeds until
/// connected, and deterministic families must already be connected.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GenerateError> {
    if !spec.require_connected {
        return build(&spec.family, spec.seed);
    }
    match &spec.family {
        GraphFamily::Random {
            nodes,
            edge_probability,
        } => {
            if *nodes > 1 && *edge_probability <= 0.0 {
                return Err(unsatisfiable(
                    "cannot draw a connected graph with zero edge probability",
                ));
            }
            for attempt in 0..MAX_CONNECT_ATTEMPTS {
                let g = random_graph(*nodes, *edge_probability, derive_seed(spec.seed, attempt));
                if g.is_connected() {
                    return Ok(g);
                }
            }
            // Sparse densities rarely draw connected: keep the last draw's
            // density and chain its components with seeded bridge edges.
            let g = random_graph(
                *nodes,
                *edge_probability,
                derive_seed(spec.seed, MAX_CONNECT_ATTEMPTS),
            );
            let mut rng = CounterRng::new(derive_seed(spec.seed, u64::MAX));
            Ok(join_components(&g, &mut rng))
        }
        family => {
            let g = build(family, spec.seed)?;
            if g.is_connected() {
                Ok(g)
            } else {
                Err(unsatisfiable("family produces a disconnected graph"))
            }
        }
    }
}

/// Chain the components of a graph with one random bridge edge between
/// each consecutive pair.
fn join_components(g: &Graph, rng: &mut CounterRng) -> Graph {
    let n = g.num_nodes();
    let mut label = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        label[start] = id;
        let mut members = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        components.push(members);
    }
    let mut edges = g.edges().to_vec();
    for k in 1..components.len() {
        let u = components[k - 1][rng.next_below(components[k - 1].len() as u64) as usize];
        let v = components[k][rng.next_below(components[k].len() as u64) as usize];
        edges.push((u, v));
    }
    Graph::from_edges(n, &edges).expect("bridges stay in range")
}

/// Seeded uniform random permutation via Fisher-Yates.
pub fn random_permutation(len: usize, seed: u64) -> NodeMapping {
    let mut forward: Vec<usize> = (0..len).collect();
    let mut rng = CounterRng::new(seed);
    for i in (1..len).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        forward.swap(i, j);
    }
    NodeMapping::new(forward).expect("shuffle preserves bijectivity")
}

/// Generate a graph and a relabeled copy, returning the ground-truth
/// mapping.
pub fn isomorphic_pair(
    spec: &GeneratorSpec,
    perm_seed: u64,
) -> Result<(Graph, Graph, NodeMapping), GenerateError> {
    let g1 = generate(spec)?;
    let sigma = random_permutation(g1.num_nodes(), perm_seed);
    let g2 = g1.permute(&sigma).expect("sizes match");
    Ok((g1, g2, sigma))
}

/// A named pair of graphs with identical cell structures whose isomorphism
/// status resists degree-based refinement.
#[derive(Debug, Clone)]
pub struct HardPair {
    pub name: &'static str,
    pub left: Graph,
    pub right: Graph,
}

/// The hard-instance corpus: a cycle versus two triangles, cubic pairs on
/// 10 to 16 nodes, and the strongly regular (16, 6, 2, 2) pair. None of
/// the pairs are isomorphic.
pub fn hard_pairs() -> Vec<HardPair> {
    let c6 = cycle(6).expect("valid");
    let two_c3 = build(
        &GraphFamily::DisjointUnion(vec![
            GraphFamily::Cycle { nodes: 3 },
            GraphFamily::Cycle { nodes: 3 },
        ]),
        0,
    )
    .expect("valid");
    vec![
        HardPair {
            name: "c6-vs-two-triangles",
            left: c6,
            right: two_c3,
        },
        HardPair {
            name: "petersen-vs-prism5",
            left: generalized_petersen(5, 2).expect("valid"),
            right: generalized_petersen(5, 1).expect("valid"),
        },
        HardPair {
            name: "moebius-ladder12-vs-prism6",
            left: moebius_ladder(12).expect("valid"),
            right: generalized_petersen(6, 1).expect("valid"),
        },
        HardPair {
            name: "gp7-2-vs-prism7",
            left: generalized_petersen(7, 2).expect("valid"),
            right: generalized_petersen(7, 1).expect("valid"),
        },
        HardPair {
            name: "moebius-kantor-vs-prism8",
            left: generalized_petersen(8, 3).expect("valid"),
            right: generalized_petersen(8, 1).expect("valid"),
        },
        HardPair {
            name: "shrikhande-vs-rook4x4",
            left: shrikhande(),
            right: rook4x4(),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_counts() {
        let spec = GeneratorSpec::new(GraphFamily::Complete { nodes: 4 }, 0);
        let g = generate(&spec).unwrap();
        assert_eq!(g.num_nodes(), 4);
        assert_eq!(g.num_edges(), 6);
    }

    #[test]
    fn mesh_counts() {
        let g = generate(&GeneratorSpec::new(
            GraphFamily::Mesh2d { rows: 3, cols: 3 },
            0,
        ))
        .unwrap();
        assert_eq!(g.num_nodes(), 9);
        assert_eq!(g.num_edges(), 12);

        let g = generate(&GeneratorSpec::new(
            GraphFamily::Mesh3d { x: 2, y: 2, z: 2 },
            0,
        ))
        .unwrap();
        assert_eq!(g.num_nodes(), 8);
        assert_eq!(g.num_edges(), 12);
    }

    #[test]
    fn connected_random_draw() {
        let spec = GeneratorSpec::connected(
            GraphFamily::Random {
                nodes: 20,
                edge_probability: 0.05,
            },
            7,
        );
        let g = generate(&spec).unwrap();
        assert_eq!(g.num_nodes(), 20);
        assert!(g.is_connected());
    }

    #[test]
    fn zero_probability_connected_is_unsatisfiable() {
        let spec = GeneratorSpec::connected(
            GraphFamily::Random {
                nodes: 5,
                edge_probability: 0.0,
            },
            0,
        );
        assert!(matches!(
            generate(&spec),
            Err(GenerateError::UnsatisfiableSpec { .. })
        ));
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GeneratorSpec::new(
            GraphFamily::Random {
                nodes: 30,
                edge_probability: 0.2,
            },
            99,
        );
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let (a1, b1, m1) = isomorphic_pair(&spec, 5).unwrap();
        let (a2, b2, m2) = isomorphic_pair(&spec, 5).unwrap();
        assert_eq!((a1, b1, m1.as_slice().to_vec()), (a2, b2, m2.as_slice().to_vec()));
    }

    #[test]
    fn isomorphic_pair_validates() {
        let spec = GeneratorSpec::new(
            GraphFamily::Random {
                nodes: 12,
                edge_probability: 0.3,
            },
            3,
        );
        let (g1, g2, sigma) = isomorphic_pair(&spec, 11).unwrap();
        assert!(crate::graph::validate_mapping(&g1, &g2, &sigma).unwrap());
    }

    #[test]
    fn identity_permutation_from_singleton() {
        let sigma = random_permutation(1, 4);
        assert!(sigma.is_identity());
    }

    #[test]
    fn named_graphs_are_regular() {
        for pair in hard_pairs() {
            for g in [&pair.left, &pair.right] {
                let d0 = g.degree(0);
                assert!((0..g.num_nodes()).all(|u| g.degree(u) == d0), "{}", pair.name);
            }
            assert_eq!(pair.left.num_nodes(), pair.right.num_nodes());
            assert_eq!(pair.left.num_edges(), pair.right.num_edges());
        }
    }

    #[test]
    fn strongly_regular_pair_parameters() {
        let s = shrikhande();
        let r = rook4x4();
        for g in [&s, &r] {
            assert_eq!(g.num_nodes(), 16);
            assert_eq!(g.num_edges(), 48);
            // Common-neighbor counts: 2 for adjacent pairs, 2 for
            // non-adjacent pairs.
            for u in 0..16 {
                for v in (u + 1)..16 {
                    let common = g
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| g.has_edge(v, w))
                        .count();
                    assert_eq!(common, 2);
                }
            }
        }
    }

    #[test]
    fn disjoint_union_offsets() {
        let g = generate(&GeneratorSpec::new(
            GraphFamily::DisjointUnion(vec![
                GraphFamily::Cycle { nodes: 3 },
                GraphFamily::Cycle { nodes: 3 },
            ]),
            0,
        ))
        .unwrap();
        assert_eq!(g.num_nodes(), 6);
        assert_eq!(g.num_edges(), 6);
        assert!(!g.is_connected());
    }
}
