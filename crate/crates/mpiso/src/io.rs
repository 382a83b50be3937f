//! File formats: the TC-15 binary graph format, plain edge lists, JSON
//! verdict reports, and CSV benchmark rows.
//!
//! TC-15 graphs are streams of 16-bit unsigned words: first the node count
//! N, then for each node in order a word with its target count followed by
//! that many target-node words. Edges are undirected; files that list both
//! orientations collapse to the same graph as files that list one.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::matcher::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("truncated stream: ran out of 16-bit words")]
    Truncated,
    #[error("target node {target} out of range for {num_nodes} nodes")]
    TargetOutOfRange { target: usize, num_nodes: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge count mismatch: header declares {declared}, found {actual} after normalization")]
    CountMismatch { declared: usize, actual: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endianness {
    Little,
    Big,
}

struct WordReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    endianness: Endianness,
}

impl<'a> WordReader<'a> {
    fn next(&mut self) -> Result<u16, FormatError> {
        if self.pos + 2 > self.bytes.len() {
            return Err(FormatError::Truncated);
        }
        let pair = [self.bytes[self.pos], self.bytes[self.pos + 1]];
        self.pos += 2;
        Ok(match self.endianness {
            Endianness::Little => u16::from_le_bytes(pair),
            Endianness::Big => u16::from_be_bytes(pair),
        })
    }
}

/// Parse a TC-15 binary graph with the given word order.
pub fn read_tc15_with(bytes: &[u8], endianness: Endianness) -> Result<Graph, FormatError> {
    let mut words = WordReader {
        bytes,
        pos: 0,
        endianness,
    };
    let num_nodes = words.next()? as usize;
    let mut edges = Vec::new();
    for source in 0..num_nodes {
        let count = words.next()? as usize;
        for _ in 0..count {
            let target = words.next()? as usize;
            if target >= num_nodes {
                return Err(FormatError::TargetOutOfRange { target, num_nodes });
            }
            edges.push((source, target));
        }
    }
    Ok(Graph::from_edges(num_nodes, &edges)?)
}

/// Parse a TC-15 binary graph (little-endian words, the database's native
/// layout).
pub fn read_tc15(bytes: &[u8]) -> Result<Graph, FormatError> {
    read_tc15_with(bytes, Endianness::Little)
}

/// Parse a TC-15 binary graph with big-endian words.
pub fn read_tc15_be(bytes: &[u8]) -> Result<Graph, FormatError> {
    read_tc15_with(bytes, Endianness::Big)
}

/// Parse a plain edge list: first line `M K`, then K lines `u v` with
/// 0-based node indices. The declared K is cross-checked against the edge
/// count after normalization.
pub fn read_edge_list(text: &str) -> Result<Graph, FormatError> {
    let parse_error = |line: usize, message: &str| FormatError::Parse {
        line,
        message: message.to_string(),
    };
    let mut lines = text.lines().enumerate();
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "empty input"))?;
    let mut parts = header.split_whitespace();
    let num_nodes: usize = parts
        .next()
        .ok_or_else(|| parse_error(line_no + 1, "missing node count"))?
        .parse()
        .map_err(|_| parse_error(line_no + 1, "invalid node count"))?;
    let declared: usize = parts
        .next()
        .ok_or_else(|| parse_error(line_no + 1, "missing edge count"))?
        .parse()
        .map_err(|_| parse_error(line_no + 1, "invalid edge count"))?;
    if parts.next().is_some() {
        return Err(parse_error(line_no + 1, "trailing tokens in header"));
    }
    let mut edges = Vec::with_capacity(declared);
    for (line_no, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let u: usize = parts
            .next()
            .ok_or_else(|| parse_error(line_no + 1, "missing endpoint"))?
            .parse()
            .map_err(|_| parse_error(line_no + 1, "invalid endpoint"))?;
        let v: usize = parts
            .next()
            .ok_or_else(|| parse_error(line_no + 1, "missing endpoint"))?
            .parse()
            .map_err(|_| parse_error(line_no + 1, "invalid endpoint"))?;
        if parts.next().is_some() {
            return Err(parse_error(line_no + 1, "trailing tokens on edge line"));
        }
        edges.push((u, v));
    }
    let graph = Graph::from_edges(num_nodes, &edges)?;
    if graph.num_edges() != declared {
        return Err(FormatError::CountMismatch {
            declared,
            actual: graph.num_edges(),
        });
    }
    Ok(graph)
}

/// Serialize a graph as the canonical edge-list text: header then the
/// normalized edges in ascending order. `read_edge_list` of the output
/// reproduces the graph exactly.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.num_nodes(), g.num_edges());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

#[derive(Serialize)]
struct Report<'a> {
    isomorphic: bool,
    mapping: Option<&'a [usize]>,
    probes: u64,
    rounds: u64,
    seed: u64,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    wall_time_us: u64,
}

/// JSON verdict report with stable key order. Everything except the
/// `timing` sub-object is deterministic for fixed inputs and seed.
pub fn write_report(v: &Verdict, seed: u64) -> String {
    let report = Report {
        isomorphic: v.isomorphic,
        mapping: v.mapping.as_ref().map(|m| m.as_slice()),
        probes: v.stats.probes,
        rounds: v.stats.rounds,
        seed,
        timing: Timing {
            wall_time_us: v.stats.wall_time.as_micros() as u64,
        },
    };
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    out
}

/// One benchmark row. `verdict: None` marks a failed pair; the sweep keeps
/// going.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub nodes: usize,
    pub pair_id: String,
    pub verdict: Option<bool>,
    pub probes: u64,
    pub rounds: u64,
    pub wall_time_us: u64,
}

pub const BENCH_CSV_HEADER: &str = "family,M,pair_id,verdict,probes,rounds,wall_time_us";

impl BenchRecord {
    pub fn to_csv_row(&self) -> String {
        let verdict = match self.verdict {
            Some(true) => "true",
            Some(false) => "false",
            None => "error",
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.family, self.nodes, self.pair_id, verdict, self.probes, self.rounds, self.wall_time_us
        )
    }
}

/// Median of a sample; the mean of the two middle values for even sizes.
pub fn median_us(times: &[u64]) -> u64 {
    assert!(!times.is_empty(), "median of an empty sample");
    let mut sorted = times.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2
    }
}

/// Summary row for a `(family, M)` group, formatted on the benchmark CSV
/// schema with `pair_id` set to `median`.
pub fn median_csv_row(family: &str, nodes: usize, times: &[u64]) -> String {
    format!("{},{},median,,,,{}", family, nodes, median_us(times))
}
