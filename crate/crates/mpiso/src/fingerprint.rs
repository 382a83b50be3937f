//! The mapping function: iterated message passing over the bipartite
//! representation, with a per-cell sort after every round.
//!
//! One round updates three message families in strict phase order, all in
//! field arithmetic with that round's scalars (a, b, c, d):
//!
//! 1. node-to-edge: `Ψ(E) = Γ(ν) + a · (Σ_{E'∈Q(ν)} λ(E') − λ(E))`,
//!    the extrinsic sum computed as node total minus own term so a round
//!    costs O(K) rather than O(Σ deg²);
//! 2. edge combination through each ξ: `λ(E) = b·Ψ(E) + c·Ψ(Ẽ)` where
//!    `Ẽ` is the other edge at that ξ;
//! 3. node aggregation: `Γ(ν) = d · Σ_{E∈Q(ν)} λ(E)`.
//!
//! After each round the Γ vector is sorted cell by cell (`sim_sort`) and
//! appended as a fingerprint row, which makes the fingerprint invariant to
//! the arbitrary node order inside each cell.

use thiserror::Error;

use crate::canonical::{CanonicalGraph, CellPartition};
use crate::field::{ConstantSchedule, FieldElement, RoundScalars};
use crate::pattern::InputPattern;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FingerprintError {
    #[error("fingerprint dimensions differ: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
}

/// Mutable message state of one run of the mapping function.
#[derive(Debug, Clone)]
pub struct MessageState {
    gamma: Vec<FieldElement>,
    lambda: Vec<FieldElement>,
    psi: Vec<FieldElement>,
    rounds_run: usize,
    edge_ops: u64,
}

impl MessageState {
    /// Initialize from a pattern: `Γ = p`, `λ = 0`.
    pub fn init(c: &CanonicalGraph, p: &InputPattern) -> MessageState {
        assert_eq!(p.len(), c.nu_count(), "pattern must cover every ν node");
        MessageState {
            gamma: p.values().to_vec(),
            lambda: vec![FieldElement::ZERO; c.bipartite_edge_count()],
            psi: vec![FieldElement::ZERO; c.bipartite_edge_count()],
            rounds_run: 0,
            edge_ops: 0,
        }
    }

    pub fn gamma(&self) -> &[FieldElement] {
        &self.gamma
    }

    pub fn rounds_run(&self) -> usize {
        self.rounds_run
    }

    /// Edge touches so far; exactly 4 per bipartite edge per round, so a
    /// round stays linear in the edge count.
    pub fn edge_ops(&self) -> u64 {
        self.edge_ops
    }
}

/// Run one message-passing round in place.
pub fn message_round(state: &mut MessageState, c: &CanonicalGraph, scalars: RoundScalars) {
    let m = c.nu_count();
    // Phase 1: node-to-edge messages.
    for nu in 0..m {
        let edges = c.incidence(nu);
        let mut sum = FieldElement::ZERO;
        for &e in edges {
            sum += state.lambda[e];
        }
        let g = state.gamma[nu];
        for &e in edges {
            state.psi[e] = g + scalars.a * (sum - state.lambda[e]);
        }
        state.edge_ops += 2 * edges.len() as u64;
    }
    // Phase 2: combine the two messages meeting at each ξ. λ is rewritten
    // entirely from Ψ, so in-place writes are safe.
    for e in 0..c.bipartite_edge_count() {
        let mate = c.edge_mate(e);
        state.lambda[e] = scalars.b * state.psi[e] + scalars.c * state.psi[mate];
    }
    state.edge_ops += c.bipartite_edge_count() as u64;
    // Phase 3: node aggregation.
    for nu in 0..m {
        let mut sum = FieldElement::ZERO;
        for &e in c.incidence(nu) {
            sum += state.lambda[e];
        }
        state.gamma[nu] = scalars.d * sum;
        state.edge_ops += c.incidence(nu).len() as u64;
    }
    state.rounds_run += 1;
}

/// Sort the Γ values of each cell ascending, concatenated in cell order.
pub fn sim_sort(gamma: &[FieldElement], p: &CellPartition) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(gamma.len());
    for cell in &p.cells {
        let start = out.len();
        out.extend(cell.members.iter().map(|&pos| gamma[pos]));
        out[start..].sort_unstable();
    }
    out
}

/// The L×M fingerprint: row `l` is the sim-sorted Γ vector after round
/// `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    rows: Vec<Vec<FieldElement>>,
}

impl Fingerprint {
    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row_len(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

/// Element-wise equality across all rows; errors if shapes differ.
pub fn fingerprints_equal(g1: &Fingerprint, g2: &Fingerprint) -> Result<bool, FingerprintError> {
    if g1.num_rows() != g2.num_rows() || g1.row_len() != g2.row_len() {
        return Err(FingerprintError::DimensionMismatch {
            left_rows: g1.num_rows(),
            left_cols: g1.row_len(),
            right_rows: g2.num_rows(),
            right_cols: g2.row_len(),
        });
    }
    Ok(g1.rows == g2.rows)
}

/// Run the full mapping function: `rounds` message-passing rounds from the
/// initialized state, appending the sim-sorted Γ after each.
pub fn map_signature(
    c: &CanonicalGraph,
    p: &InputPattern,
    s: &ConstantSchedule,
    rounds: usize,
) -> Fingerprint {
    map_signature_traced(c, p, s, rounds).0
}

/// Like [`map_signature`] but also returns the pre-sort Γ vector of every
/// round, which exposes per-node values for supervision and linearity
/// checks.
pub fn map_signature_traced(
    c: &CanonicalGraph,
    p: &InputPattern,
    s: &ConstantSchedule,
    rounds: usize,
) -> (Fingerprint, Vec<Vec<FieldElement>>) {
    assert!(
        s.num_rounds() >= rounds,
        "schedule covers {} rounds, {} requested",
        s.num_rounds(),
        rounds
    );
    let mut state = MessageState::init(c, p);
    let mut sorted_rows = Vec::with_capacity(rounds);
    let mut raw_rows = Vec::with_capacity(rounds);
    for l in 0..rounds {
        message_round(&mut state, c, s.round_scalars(l));
        raw_rows.push(state.gamma.clone());
        sorted_rows.push(sim_sort(&state.gamma, c.partition()));
    }
    (Fingerprint { rows: sorted_rows }, raw_rows)
}
