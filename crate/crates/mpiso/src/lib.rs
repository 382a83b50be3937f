//! Graph isomorphism and automorphism testing by message passing.
//!
//! Two graphs are compared by converting each to a bipartite canonical
//! representation, injecting designed input patterns, and iterating a
//! message-passing update whose per-cell sorted outputs form a fingerprint.
//! Isomorphic graphs produce identical fingerprints under aligned patterns;
//! a progressive loop pairs nodes one cell at a time without backtracking
//! and returns a validated bijection. A brute-force oracle, graph
//! generators, and file-format support round out the crate.
//!
//! ```
//! use mpiso::{match_supervised, validate_mapping, Graph, MatchConfig};
//!
//! let g1 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2)])?;
//! let g2 = Graph::from_edges(4, &[(3, 2), (3, 1), (3, 0), (2, 1)])?;
//! let verdict = match_supervised(&g1, &g2, &MatchConfig::default())?;
//! assert!(verdict.isomorphic);
//! let mapping = verdict.mapping.unwrap();
//! assert!(validate_mapping(&g1, &g2, &mapping)?);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

#![forbid(unsafe_code)]

pub mod canonical;
pub mod field;
pub mod fingerprint;
pub mod graph;
pub mod io;
pub mod matcher;
pub mod pattern;
pub mod testkit;

mod rng;

#[cfg(doctest)]
mod book;

pub use canonical::{
    canonicalize, cell_structures_match, CanonicalGraph, Cell, CellPartition, CellSignature,
};
pub use field::{derive_constants, ConstantSchedule, FieldElement, RoundScalars, MODULUS};
pub use fingerprint::{
    fingerprints_equal, map_signature, map_signature_traced, message_round, sim_sort, Fingerprint,
    FingerprintError, MessageState,
};
pub use graph::{validate_mapping, Graph, GraphError, NodeMapping};
pub use matcher::{
    find_automorphism, find_automorphisms, match_exhaustive, match_supervised, MatchConfig,
    MatchError, MatchState, MatchStats, Verdict,
};
pub use pattern::{
    aligned_pattern, initial_pattern, mirrored_pattern, probe_pattern, InputPattern, PatternError,
    Role,
};
pub use testkit::{
    brute_force_isomorphic, brute_force_isomorphic_capped, enumerate_automorphisms,
    enumerate_isomorphism, generate, hard_pairs, isomorphic_pair, random_permutation,
    GenerateError, GeneratorSpec, GraphFamily, HardPair, NamedGraph, OracleError,
    DEFAULT_ORACLE_CAP,
};
