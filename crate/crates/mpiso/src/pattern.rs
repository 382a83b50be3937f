//! Designed input patterns that drive the mapping function.
//!
//! Three construction rules cover every entry of a pattern: the node under
//! investigation takes the probe value `beta`; an unmatched node takes the
//! default `alpha` of its cell; a matched node takes the `gamma` shared by
//! its pair. Because both graphs draw from one schedule, the two patterns
//! of a comparison agree at matched entries and at the probed entry, while
//! entries of different cells never collide.

use thiserror::Error;

use crate::canonical::CanonicalGraph;
use crate::field::{ConstantSchedule, FieldElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("probe node {node} is already matched")]
    ProbeAlreadyMatched { node: usize },
    #[error("candidate {candidate} in cell {candidate_cell} is not similar to the probe in cell {probe_cell}")]
    CellMismatch {
        candidate: usize,
        candidate_cell: usize,
        probe_cell: usize,
    },
}

/// How an entry got its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// The node under investigation (value beta).
    Probe,
    /// Unmatched node carrying the default of cell `r`.
    CellDefault(usize),
    /// Matched node carrying the shared value of pair `key`.
    Matched(usize),
}

/// A length-M vector of field elements indexed by canonical ν position,
/// with a parallel role tag per entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputPattern {
    values: Vec<FieldElement>,
    roles: Vec<Role>,
    probe: Option<(usize, usize)>, // (position, cell)
}

impl InputPattern {
    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn probe_position(&self) -> Option<usize> {
        self.probe.map(|(pos, _)| pos)
    }

    pub fn probe_cell(&self) -> Option<usize> {
        self.probe.map(|(_, cell)| cell)
    }

    /// Wrap raw values as a pattern. Useful for driving the mapping
    /// function directly with hand-picked inputs.
    pub fn from_values(values: Vec<FieldElement>) -> InputPattern {
        let roles = vec![Role::CellDefault(0); values.len()];
        InputPattern {
            values,
            roles,
            probe: None,
        }
    }
}

/// Fill every entry with its cell default.
fn cell_defaults(c: &CanonicalGraph, s: &ConstantSchedule) -> InputPattern {
    let m = c.nu_count();
    let mut values = Vec::with_capacity(m);
    let mut roles = Vec::with_capacity(m);
    for pos in 0..m {
        let cell = c.partition().cell_of[pos];
        values.push(s.alpha(cell));
        roles.push(Role::CellDefault(cell));
    }
    InputPattern {
        values,
        roles,
        probe: None,
    }
}

fn apply_matched(p: &mut InputPattern, matched: &[(usize, usize)], s: &ConstantSchedule) {
    for &(node, key) in matched {
        p.values[node] = s.gamma(key);
        p.roles[node] = Role::Matched(key);
    }
}

/// The initial pattern `p0`: every node takes the default of its cell; no
/// probe, no matched entries.
pub fn initial_pattern(c: &CanonicalGraph, s: &ConstantSchedule) -> InputPattern {
    assert!(
        s.num_alphas() >= c.partition().num_cells(),
        "schedule must cover every cell"
    );
    cell_defaults(c, s)
}

/// The probe pattern `p1` for investigating node `probe` of the first
/// graph. `matched` lists this graph's matched nodes with their pair keys.
pub fn probe_pattern(
    c: &CanonicalGraph,
    probe: usize,
    matched: &[(usize, usize)],
    s: &ConstantSchedule,
) -> Result<InputPattern, PatternError> {
    if matched.iter().any(|&(node, _)| node == probe) {
        return Err(PatternError::ProbeAlreadyMatched { node: probe });
    }
    let mut p = cell_defaults(c, s);
    apply_matched(&mut p, matched, s);
    let cell = c.partition().cell_of[probe];
    p.values[probe] = s.beta();
    p.roles[probe] = Role::Probe;
    p.probe = Some((probe, cell));
    Ok(p)
}

/// The mirrored pattern `p2` for testing `candidate` of the second graph
/// against the probe of `p1`. Matched entries take the same value as the
/// corresponding entry of `p1`, so `p2` is a permutation of `p1` whenever
/// the cell structures match.
pub fn mirrored_pattern(
    c2: &CanonicalGraph,
    candidate: usize,
    matched: &[(usize, usize)],
    p1: &InputPattern,
    s: &ConstantSchedule,
) -> Result<InputPattern, PatternError> {
    let candidate_cell = c2.partition().cell_of[candidate];
    let probe_cell = p1.probe_cell().expect("p1 must carry a probe");
    if candidate_cell != probe_cell {
        return Err(PatternError::CellMismatch {
            candidate,
            candidate_cell,
            probe_cell,
        });
    }
    if matched.iter().any(|&(node, _)| node == candidate) {
        return Err(PatternError::ProbeAlreadyMatched { node: candidate });
    }
    let mut p = cell_defaults(c2, s);
    apply_matched(&mut p, matched, s);
    p.values[candidate] = s.beta();
    p.roles[candidate] = Role::Probe;
    p.probe = Some((candidate, candidate_cell));
    Ok(p)
}

/// Pattern for lockstep supervision: matched nodes take their pair values,
/// everything else its cell default, no probe. With no matches this is
/// exactly `p0`.
pub fn aligned_pattern(
    c: &CanonicalGraph,
    matched: &[(usize, usize)],
    s: &ConstantSchedule,
) -> InputPattern {
    let mut p = cell_defaults(c, s);
    apply_matched(&mut p, matched, s);
    p
}
