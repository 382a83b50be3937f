//! Progressive matching: the exhaustive probe loop, the supervised
//! accelerator, and automorphism search.
//!
//! The exhaustive loop pairs one node at a time: pick an unmatched node of
//! the first graph, fingerprint it under its probe pattern, and try every
//! similar unmatched node of the second graph under the mirrored pattern
//! until the fingerprints agree. Matched pairs are never removed — there is
//! no backtracking. A node with no agreeing candidate ends the run with a
//! non-isomorphic verdict.
//!
//! The supervised variant runs both graphs' message passing in lockstep
//! under aligned patterns and inspects each unmatched cell after every
//! round: mismatching sub-fingerprints prove non-isomorphism, and values
//! that occur exactly once on both sides pin their nodes to each other
//! without any probing. After each batch of new pairs the patterns are
//! rebuilt (matched nodes pick up their pair values) and the lockstep
//! restarts; cells still ambiguous after the extraction stalls fall back to
//! probing.
//!
//! Every `isomorphic` verdict is gated by an exact edge-preservation check
//! of the assembled mapping, so a fingerprint coincidence can never produce
//! a false positive.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canonical::{canonicalize, cell_structures_match, CanonicalGraph};
use crate::field::{derive_constants, ConstantSchedule, FieldElement};
use crate::fingerprint::{map_signature, message_round, sim_sort, Fingerprint, MessageState};
use crate::graph::{validate_mapping, Graph, NodeMapping};
use crate::pattern::{aligned_pattern, initial_pattern, mirrored_pattern, probe_pattern};

/// Rounds of extraction-free lockstep before supervision falls back to
/// probing.
const STALL_ROUNDS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("search budget exceeded after {probes} probes ({elapsed:?})")]
    LimitExceeded { probes: u64, elapsed: Duration },
    #[error("every cell is a singleton; the graph is rigid at cell level")]
    NoMultiNodeCell,
}

/// Knobs for one matching run.
#[derive(Debug, Clone, Default)]
pub struct MatchConfig {
    /// Seed for the constant schedule shared by both graphs.
    pub seed: u64,
    /// Override for the round count L; defaults to M - 1.
    pub iterations: Option<usize>,
    /// Probe budget; exceeding it aborts with `LimitExceeded`.
    pub max_probes: Option<u64>,
    /// Wall-clock budget.
    pub timeout: Option<Duration>,
}

impl MatchConfig {
    pub fn with_seed(seed: u64) -> Self {
        MatchConfig {
            seed,
            ..MatchConfig::default()
        }
    }
}

/// Deterministic counters plus wall time for one run.
#[derive(Debug, Clone, Default)]
pub struct MatchStats {
    /// Candidate evaluations: one pattern construction plus fingerprinting.
    pub probes: u64,
    /// Message-passing rounds executed across both graphs.
    pub rounds: u64,
    pub wall_time: Duration,
}

/// Outcome of a matching run.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub isomorphic: bool,
    /// Original-index node bijection; present iff `isomorphic`.
    pub mapping: Option<NodeMapping>,
    pub stats: MatchStats,
}

/// The ordered set of matched pairs plus the unmatched remainder on each
/// side, all in canonical positions. Pairs are only ever added.
#[derive(Debug, Clone)]
pub struct MatchState {
    matched: Vec<(usize, usize)>,
    unmatched1: Vec<bool>,
    unmatched2: Vec<bool>,
}

impl MatchState {
    pub fn new(num_nodes: usize) -> MatchState {
        MatchState {
            matched: Vec::new(),
            unmatched1: vec![true; num_nodes],
            unmatched2: vec![true; num_nodes],
        }
    }

    pub fn matched(&self) -> &[(usize, usize)] {
        &self.matched
    }

    pub fn is_unmatched1(&self, pos: usize) -> bool {
        self.unmatched1[pos]
    }

    pub fn is_unmatched2(&self, pos: usize) -> bool {
        self.unmatched2[pos]
    }

    pub fn is_complete(&self) -> bool {
        self.matched.len() == self.unmatched1.len()
    }

    pub fn add_pair(&mut self, i: usize, j: usize) {
        debug_assert!(self.unmatched1[i] && self.unmatched2[j]);
        self.unmatched1[i] = false;
        self.unmatched2[j] = false;
        self.matched.push((i, j));
    }

    /// First-graph nodes with their pair keys.
    pub fn matched_side1(&self) -> Vec<(usize, usize)> {
        self.matched
            .iter()
            .enumerate()
            .map(|(key, &(i, _))| (i, key))
            .collect()
    }

    /// Second-graph nodes with their pair keys.
    pub fn matched_side2(&self) -> Vec<(usize, usize)> {
        self.matched
            .iter()
            .enumerate()
            .map(|(key, &(_, j))| (j, key))
            .collect()
    }
}

struct Engine<'a> {
    c1: &'a CanonicalGraph,
    c2: &'a CanonicalGraph,
    schedule: ConstantSchedule,
    rounds: usize,
    /// Cell indices sorted by (size, ordinal): smallest cells probe first.
    cell_order: Vec<usize>,
    max_probes: Option<u64>,
    deadline: Option<Instant>,
    started: Instant,
    probes: u64,
    rounds_executed: u64,
}

impl<'a> Engine<'a> {
    fn new(
        c1: &'a CanonicalGraph,
        c2: &'a CanonicalGraph,
        config: &MatchConfig,
        rounds: usize,
        started: Instant,
    ) -> Engine<'a> {
        let schedule = derive_constants(
            config.seed,
            c1.partition().num_cells(),
            rounds,
            c1.nu_count(),
        );
        let mut cell_order: Vec<usize> = (0..c1.partition().num_cells()).collect();
        cell_order.sort_by_key(|&r| (c1.partition().cells[r].len(), r));
        Engine {
            c1,
            c2,
            schedule,
            rounds,
            cell_order,
            max_probes: config.max_probes,
            deadline: config.timeout.map(|t| started + t),
            started,
            probes: 0,
            rounds_executed: 0,
        }
    }

    /// Wall-clock budget, checked on every round and probe.
    fn check_budget(&self) -> Result<(), MatchError> {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(MatchError::LimitExceeded {
                probes: self.probes,
                elapsed: self.started.elapsed(),
            });
        }
        Ok(())
    }

    /// Probe budget, checked before each candidate evaluation. Runs that
    /// resolve without probing complete even under a zero budget.
    fn check_probe_budget(&self) -> Result<(), MatchError> {
        if self.max_probes.is_some_and(|max| self.probes >= max) {
            return Err(MatchError::LimitExceeded {
                probes: self.probes,
                elapsed: self.started.elapsed(),
            });
        }
        Ok(())
    }

    fn stats(&self) -> MatchStats {
        MatchStats {
            probes: self.probes,
            rounds: self.rounds_executed,
            wall_time: self.started.elapsed(),
        }
    }

    /// Full fingerprint of a pattern on the first graph.
    fn signature1(&mut self, p: &crate::pattern::InputPattern) -> Fingerprint {
        self.rounds_executed += self.rounds as u64;
        map_signature(self.c1, p, &self.schedule, self.rounds)
    }

    /// Stream the second graph's rounds against a reference fingerprint,
    /// exiting at the first differing row.
    fn matches_streaming(
        &mut self,
        reference: &Fingerprint,
        p2: &crate::pattern::InputPattern,
    ) -> bool {
        let mut state = MessageState::init(self.c2, p2);
        for l in 0..self.rounds {
            message_round(&mut state, self.c2, self.schedule.round_scalars(l));
            self.rounds_executed += 1;
            let row = sim_sort(state.gamma(), self.c2.partition());
            if row != reference.rows()[l] {
                return false;
            }
        }
        true
    }

    /// The initial `p0` fingerprint comparison.
    fn initial_fingerprints_equal(&mut self) -> bool {
        let p0_1 = initial_pattern(self.c1, &self.schedule);
        let g1 = self.signature1(&p0_1);
        let p0_2 = initial_pattern(self.c2, &self.schedule);
        self.matches_streaming(&g1, &p0_2)
    }

    /// Pair up all singleton cells: they admit exactly one candidate each.
    fn init_singletons(&self, state: &mut MatchState) {
        for (r, cell) in self.c1.partition().cells.iter().enumerate() {
            if cell.len() == 1 {
                state.add_pair(cell.members[0], self.c2.partition().cells[r].members[0]);
            }
        }
    }

    /// Next node to probe: smallest cell first, lowest position within it.
    fn next_probe_node(&self, state: &MatchState) -> Option<usize> {
        for &r in &self.cell_order {
            for &i in &self.c1.partition().cells[r].members {
                if state.is_unmatched1(i) {
                    return Some(i);
                }
            }
        }
        None
    }

    /// Probe node `i`: fingerprint it on the first graph, then try every
    /// similar unmatched candidate until one agrees. Returns the accepted
    /// candidate, or `None` when every candidate disagrees.
    fn probe_step(
        &mut self,
        state: &MatchState,
        i: usize,
        forbidden: Option<&HashSet<usize>>,
    ) -> Result<Option<usize>, MatchError> {
        let matched1 = state.matched_side1();
        let p1 = probe_pattern(self.c1, i, &matched1, &self.schedule)
            .expect("probe node is unmatched");
        let g1 = self.signature1(&p1);
        let matched2 = state.matched_side2();
        let cell = self.c1.partition().cell_of[i];
        for &j in &self.c2.partition().cells[cell].members {
            if !state.is_unmatched2(j) || forbidden.is_some_and(|f| f.contains(&j)) {
                continue;
            }
            self.check_budget()?;
            self.check_probe_budget()?;
            self.probes += 1;
            let p2 = mirrored_pattern(self.c2, j, &matched2, &p1, &self.schedule)
                .expect("candidate shares the probe cell");
            if self.matches_streaming(&g1, &p2) {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }
}

/// Per-cell comparison of the unmatched sub-fingerprints after a lockstep
/// round.
enum Extraction {
    /// Some cell's sub-fingerprints disagree: the graphs cannot be
    /// isomorphic under the current forced matches.
    Mismatch,
    /// Node pairs pinned by values occurring exactly once on both sides.
    Pairs(Vec<(usize, usize)>),
}

fn extract_pairs(
    c1: &CanonicalGraph,
    c2: &CanonicalGraph,
    gamma1: &[FieldElement],
    gamma2: &[FieldElement],
    state: &MatchState,
) -> Extraction {
    use std::collections::HashMap;
    let mut pairs = Vec::new();
    for (r, cell1) in c1.partition().cells.iter().enumerate() {
        let cell2 = &c2.partition().cells[r];
        let un1: Vec<usize> = cell1
            .members
            .iter()
            .copied()
            .filter(|&i| state.is_unmatched1(i))
            .collect();
        if un1.is_empty() {
            continue;
        }
        let un2: Vec<usize> = cell2
            .members
            .iter()
            .copied()
            .filter(|&j| state.is_unmatched2(j))
            .collect();
        debug_assert_eq!(un1.len(), un2.len());
        let mut sub1: Vec<FieldElement> = un1.iter().map(|&i| gamma1[i]).collect();
        let mut sub2: Vec<FieldElement> = un2.iter().map(|&j| gamma2[j]).collect();
        sub1.sort_unstable();
        sub2.sort_unstable();
        if sub1 != sub2 {
            return Extraction::Mismatch;
        }
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for v in &sub1 {
            *counts.entry(v.value()).or_insert(0) += 1;
        }
        let by_value: HashMap<u64, usize> = un2.iter().map(|&j| (gamma2[j].value(), j)).collect();
        for &i in &un1 {
            let v = gamma1[i].value();
            if counts[&v] == 1 {
                pairs.push((i, by_value[&v]));
            }
        }
    }
    Extraction::Pairs(pairs)
}

enum MatchMode {
    Exhaustive,
    Supervised,
}

fn run_match(
    g1: &Graph,
    g2: &Graph,
    config: &MatchConfig,
    mode: MatchMode,
) -> Result<Verdict, MatchError> {
    let started = Instant::now();
    let non_iso = |stats: MatchStats| Verdict {
        isomorphic: false,
        mapping: None,
        stats,
    };
    if g1.num_nodes() != g2.num_nodes() || g1.num_edges() != g2.num_edges() {
        return Ok(non_iso(MatchStats {
            wall_time: started.elapsed(),
            ..MatchStats::default()
        }));
    }
    let c1 = canonicalize(g1);
    let c2 = canonicalize(g2);
    if !cell_structures_match(c1.partition(), c2.partition()) {
        return Ok(non_iso(MatchStats {
            wall_time: started.elapsed(),
            ..MatchStats::default()
        }));
    }
    let rounds = config
        .iterations
        .unwrap_or_else(|| g1.num_nodes().saturating_sub(1));
    let mut engine = Engine::new(&c1, &c2, config, rounds, started);
    let outcome = match mode {
        MatchMode::Exhaustive => run_exhaustive(&mut engine)?,
        MatchMode::Supervised => run_supervised(&mut engine)?,
    };
    let stats = engine.stats();
    Ok(match outcome {
        None => non_iso(stats),
        Some(state) => {
            let mapping = state_to_mapping(&c1, &c2, &state);
            // Exact soundness gate: the forced pairing must preserve edges.
            // A failure here means no bijection extends the forced matches,
            // i.e. the graphs are not isomorphic.
            if validate_mapping(g1, g2, &mapping).expect("sizes match") {
                Verdict {
                    isomorphic: true,
                    mapping: Some(mapping),
                    stats,
                }
            } else {
                non_iso(stats)
            }
        }
    })
}

fn run_exhaustive(engine: &mut Engine) -> Result<Option<MatchState>, MatchError> {
    engine.check_budget()?;
    if !engine.initial_fingerprints_equal() {
        return Ok(None);
    }
    let mut state = MatchState::new(engine.c1.nu_count());
    engine.init_singletons(&mut state);
    while !state.is_complete() {
        let i = engine
            .next_probe_node(&state)
            .expect("incomplete state leaves an unmatched node");
        match engine.probe_step(&state, i, None)? {
            Some(j) => state.add_pair(i, j),
            None => return Ok(None),
        }
    }
    Ok(Some(state))
}

fn run_supervised(engine: &mut Engine) -> Result<Option<MatchState>, MatchError> {
    let mut state = MatchState::new(engine.c1.nu_count());
    engine.init_singletons(&mut state);
    'outer: loop {
        if state.is_complete() {
            return Ok(Some(state));
        }
        let p1 = aligned_pattern(engine.c1, &state.matched_side1(), &engine.schedule);
        let p2 = aligned_pattern(engine.c2, &state.matched_side2(), &engine.schedule);
        let mut st1 = MessageState::init(engine.c1, &p1);
        let mut st2 = MessageState::init(engine.c2, &p2);
        let mut stalled = 0;
        for l in 0..engine.rounds {
            engine.check_budget()?;
            message_round(&mut st1, engine.c1, engine.schedule.round_scalars(l));
            message_round(&mut st2, engine.c2, engine.schedule.round_scalars(l));
            engine.rounds_executed += 2;
            match extract_pairs(engine.c1, engine.c2, st1.gamma(), st2.gamma(), &state) {
                Extraction::Mismatch => return Ok(None),
                Extraction::Pairs(pairs) if !pairs.is_empty() => {
                    for (i, j) in pairs {
                        state.add_pair(i, j);
                    }
                    // Rebuild patterns so the new pairs carry their shared
                    // values, then rerun the lockstep from round one.
                    continue 'outer;
                }
                Extraction::Pairs(_) => {
                    stalled += 1;
                    if stalled >= STALL_ROUNDS {
                        break;
                    }
                }
            }
        }
        // Extraction stabilized with ambiguity left: probe one node, then
        // re-engage the lockstep with the enriched pattern.
        let i = engine
            .next_probe_node(&state)
            .expect("incomplete state leaves an unmatched node");
        match engine.probe_step(&state, i, None)? {
            Some(j) => state.add_pair(i, j),
            None => return Ok(None),
        }
    }
}

fn state_to_mapping(c1: &CanonicalGraph, c2: &CanonicalGraph, state: &MatchState) -> NodeMapping {
    let mut forward = vec![0usize; c1.nu_count()];
    for &(p1, p2) in state.matched() {
        forward[c1.original_node(p1)] = c2.original_node(p2);
    }
    NodeMapping::new(forward).expect("matched pairs are disjoint and complete")
}

/// Decide isomorphism with the exhaustive probe loop.
pub fn match_exhaustive(g1: &Graph, g2: &Graph, config: &MatchConfig) -> Result<Verdict, MatchError> {
    run_match(g1, g2, config, MatchMode::Exhaustive)
}

/// Decide isomorphism with lockstep supervision, falling back to probing
/// only for cells the extraction cannot resolve. Verdicts agree with
/// [`match_exhaustive`]; probe counts are usually far smaller.
pub fn match_supervised(g1: &Graph, g2: &Graph, config: &MatchConfig) -> Result<Verdict, MatchError> {
    run_match(g1, g2, config, MatchMode::Supervised)
}

/// Search for a non-identity automorphism by matching the graph against
/// itself with the identity pairing forbidden for one multi-node cell's
/// first probe. Every multi-node cell is tried before reporting failure.
pub fn find_automorphism(g: &Graph, config: &MatchConfig) -> Result<Verdict, MatchError> {
    let started = Instant::now();
    let (found, mut stats) = automorphism_search(g, config, 1, started)?;
    stats.wall_time = started.elapsed();
    Ok(Verdict {
        isomorphic: !found.is_empty(),
        mapping: found.into_iter().next(),
        stats,
    })
}

/// Extract up to `max_count` distinct non-identity automorphisms by
/// repeatedly forbidding, for the restricted cell's first probe, the
/// candidates already used by earlier automorphisms.
pub fn find_automorphisms(
    g: &Graph,
    config: &MatchConfig,
    max_count: usize,
) -> Result<Vec<NodeMapping>, MatchError> {
    let started = Instant::now();
    let (found, _) = automorphism_search(g, config, max_count, started)?;
    Ok(found)
}

fn automorphism_search(
    g: &Graph,
    config: &MatchConfig,
    max_count: usize,
    started: Instant,
) -> Result<(Vec<NodeMapping>, MatchStats), MatchError> {
    let c = canonicalize(g);
    let multi_cells: Vec<usize> = c
        .partition()
        .cells
        .iter()
        .enumerate()
        .filter(|(_, cell)| cell.len() >= 2)
        .map(|(r, _)| r)
        .collect();
    if multi_cells.is_empty() {
        return Err(MatchError::NoMultiNodeCell);
    }
    let rounds = config
        .iterations
        .unwrap_or_else(|| g.num_nodes().saturating_sub(1));
    let mut engine = Engine::new(&c, &c, config, rounds, started);
    let mut found: Vec<NodeMapping> = Vec::new();
    'cells: for &r in &multi_cells {
        let first_node = c.partition().cells[r].members[0];
        loop {
            if found.len() >= max_count {
                break 'cells;
            }
            let mut forbidden: HashSet<usize> = HashSet::new();
            forbidden.insert(first_node);
            for auto in &found {
                forbidden.insert(c.position_of(auto.map(c.original_node(first_node))));
            }
            match run_restricted(&mut engine, first_node, &forbidden)? {
                Some(state) => {
                    let mapping = state_to_mapping(&c, &c, &state);
                    if validate_mapping(g, g, &mapping).expect("same graph")
                        && !mapping.is_identity()
                    {
                        found.push(mapping);
                    } else {
                        continue 'cells;
                    }
                }
                None => continue 'cells,
            }
        }
    }
    let stats = engine.stats();
    Ok((found, stats))
}

/// The exhaustive loop with a forbidden candidate set applied to the very
/// first probe of `first_node`.
fn run_restricted(
    engine: &mut Engine,
    first_node: usize,
    forbidden: &HashSet<usize>,
) -> Result<Option<MatchState>, MatchError> {
    let mut state = MatchState::new(engine.c1.nu_count());
    engine.init_singletons(&mut state);
    match engine.probe_step(&state, first_node, Some(forbidden))? {
        Some(j) => state.add_pair(first_node, j),
        None => return Ok(None),
    }
    while !state.is_complete() {
        let i = engine
            .next_probe_node(&state)
            .expect("incomplete state leaves an unmatched node");
        match engine.probe_step(&state, i, None)? {
            Some(j) => state.add_pair(i, j),
            None => return Ok(None),
        }
    }
    Ok(Some(state))
}
