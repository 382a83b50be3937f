//! Graph generators and brute-force oracles for differential verification
//! and benchmarking.

mod generate;
mod oracle;

pub use generate::{
    generate, hard_pairs, isomorphic_pair, random_permutation, GenerateError, GeneratorSpec,
    GraphFamily, HardPair, NamedGraph,
};
pub use oracle::{
    brute_force_isomorphic, brute_force_isomorphic_capped, enumerate_automorphisms,
    enumerate_isomorphism, OracleError, DEFAULT_ORACLE_CAP,
};
