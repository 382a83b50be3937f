//! Command-line front end: isomorphism verdicts, automorphism search,
//! canonical-form dumps, benchmark sweeps, and test-pair generation.
//!
//! Exit codes: 0 = isomorphic / automorphism found / success, 1 = not
//! isomorphic / none found, 2 = error or exceeded budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mpiso::io::{
    median_csv_row, read_edge_list, read_tc15, read_tc15_be, write_edge_list, write_report,
    BenchRecord, BENCH_CSV_HEADER,
};
use mpiso::{
    canonicalize, find_automorphism, find_automorphisms, isomorphic_pair, match_exhaustive,
    match_supervised, Graph, GraphFamily, GeneratorSpec, MatchConfig, MatchError, NamedGraph,
    Verdict,
};

#[derive(Parser)]
#[command(name = "mpiso", version, about = "Graph isomorphism via message passing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two graph files are isomorphic.
    Iso {
        file1: PathBuf,
        file2: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Search a graph for a non-identity automorphism.
    Auto {
        file: PathBuf,
        /// How many distinct automorphisms to extract.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Dump the bipartite canonical representation as JSON.
    Canon {
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Benchmark a directory of graph pairs or a generated sweep; emits CSV
    /// with a median summary row per (family, M) group.
    Bench {
        /// Directory of TC-15 style pairs (matching .A* / .B* files).
        dir: Option<PathBuf>,
        /// Generated family to sweep instead of a directory:
        /// random | mesh2d | mesh3d | cycle | complete.
        #[arg(long)]
        family: Option<String>,
        /// Comma-separated node counts for the sweep.
        #[arg(long, default_value = "16,32,64")]
        sizes: String,
        /// Pairs per size.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        /// Edge probability for the random family.
        #[arg(long, default_value_t = 0.05)]
        rho: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Generate an isomorphic pair plus its ground-truth mapping.
    Gen {
        /// Family: random | mesh2d | mesh3d | cycle | complete | named.
        #[arg(long)]
        family: String,
        /// Node count (random, cycle, complete).
        #[arg(long)]
        nodes: Option<usize>,
        /// Edge probability (random).
        #[arg(long)]
        rho: Option<f64>,
        /// Mesh dimensions, e.g. "4,5" or "3,3,3".
        #[arg(long)]
        dims: Option<String>,
        /// Named graph id (e.g. petersen, shrikhande, rook4x4, prism6,
        /// gp7-2, moebius-ladder-12, moebius-kantor).
        #[arg(long)]
        name: Option<String>,
        /// Require the generated graph to be connected.
        #[arg(long)]
        connected: bool,
        /// Seed for the relabeling permutation.
        #[arg(long, default_value_t = 1)]
        perm_seed: u64,
        /// Output prefix: writes <prefix>.g1.txt, <prefix>.g2.txt,
        /// <prefix>.map.json.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Seed for the constant schedule (falls back to MPISO_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Override for the message-passing round count L (default M - 1).
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Supervised)]
    mode: Mode,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    /// Probe budget; exceeding it exits with code 2.
    #[arg(long)]
    max_probes: Option<u64>,
    /// Wall-clock budget in milliseconds.
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long, value_enum)]
    output: Option<OutputKind>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Supervised,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    Tc15,
    Tc15Be,
    Edgelist,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    Json,
    Csv,
    Quiet,
}

impl CommonOpts {
    fn seed(&self) -> u64 {
        self.seed
            .or_else(|| {
                std::env::var("MPISO_SEED")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(0)
    }

    fn match_config(&self) -> MatchConfig {
        MatchConfig {
            seed: self.seed(),
            iterations: self.iters,
            max_probes: self.max_probes,
            timeout: self.timeout_ms.map(Duration::from_millis),
        }
    }

    fn run_match(&self, g1: &Graph, g2: &Graph) -> Result<Verdict, MatchError> {
        let config = self.match_config();
        match self.mode {
            Mode::Supervised => match_supervised(g1, g2, &config),
            Mode::Exhaustive => match_exhaustive(g1, g2, &config),
        }
    }

    fn output(&self, default: OutputKind) -> OutputKind {
        self.output.unwrap_or(default)
    }
}

fn detect_format(path: &Path, requested: Option<FileFormat>) -> FileFormat {
    if let Some(f) = requested {
        return f;
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("txt") | Some("edges") | Some("edgelist") => FileFormat::Edgelist,
        _ => FileFormat::Tc15,
    }
}

fn load_graph(path: &Path, requested: Option<FileFormat>) -> Result<Graph> {
    let format = detect_format(path, requested);
    let graph = match format {
        FileFormat::Edgelist => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            read_edge_list(&text).with_context(|| format!("cannot parse {}", path.display()))?
        }
        FileFormat::Tc15 | FileFormat::Tc15Be => {
            let bytes =
                fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
            let parsed = if format == FileFormat::Tc15 {
                read_tc15(&bytes)
            } else {
                read_tc15_be(&bytes)
            };
            parsed.with_context(|| format!("cannot parse {}", path.display()))?
        }
    };
    if !graph.is_connected() {
        eprintln!(
            "notice: {} is disconnected; verdicts on disconnected graphs are oracle-validated but outside the engine's design envelope",
            path.display()
        );
    }
    Ok(graph)
}

fn cmd_iso(file1: &Path, file2: &Path, opts: &CommonOpts) -> Result<ExitCode> {
    let g1 = load_graph(file1, opts.format)?;
    let g2 = load_graph(file2, opts.format)?;
    let verdict = opts.run_match(&g1, &g2)?;
    match opts.output(OutputKind::Json) {
        OutputKind::Json => print!("{}", write_report(&verdict, opts.seed())),
        OutputKind::Csv => {
            println!("{BENCH_CSV_HEADER}");
            let record = BenchRecord {
                family: "files".into(),
                nodes: g1.num_nodes(),
                pair_id: format!("{}:{}", file1.display(), file2.display()),
                verdict: Some(verdict.isomorphic),
                probes: verdict.stats.probes,
                rounds: verdict.stats.rounds,
                wall_time_us: verdict.stats.wall_time.as_micros() as u64,
            };
            println!("{}", record.to_csv_row());
        }
        OutputKind::Quiet => {}
    }
    Ok(if verdict.isomorphic {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_auto(file: &Path, count: usize, opts: &CommonOpts) -> Result<ExitCode> {
    let g = load_graph(file, opts.format)?;
    let config = opts.match_config();
    if count <= 1 {
        let verdict = match find_automorphism(&g, &config) {
            Ok(v) => v,
            // All-singleton cells admit only the identity: report "none
            // found" rather than an error.
            Err(MatchError::NoMultiNodeCell) => {
                eprintln!("notice: every cell is a singleton; only the identity automorphism exists");
                return Ok(ExitCode::from(1));
            }
            Err(e) => return Err(e.into()),
        };
        if opts.output(OutputKind::Json) == OutputKind::Json {
            print!("{}", write_report(&verdict, opts.seed()));
        }
        return Ok(if verdict.isomorphic {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        });
    }
    let found = match find_automorphisms(&g, &config, count) {
        Ok(found) => found,
        Err(MatchError::NoMultiNodeCell) => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    if opts.output(OutputKind::Json) == OutputKind::Json {
        let arrays: Vec<&[usize]> = found.iter().map(|m| m.as_slice()).collect();
        println!("{}", serde_json::to_string_pretty(&arrays)?);
    }
    Ok(if found.is_empty() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_canon(file: &Path, opts: &CommonOpts) -> Result<ExitCode> {
    let g = load_graph(file, opts.format)?;
    let canonical = canonicalize(&g);
    if opts.output(OutputKind::Json) != OutputKind::Quiet {
        println!("{}", serde_json::to_string_pretty(&canonical)?);
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_family(
    family: &str,
    nodes: Option<usize>,
    rho: Option<f64>,
    dims: Option<&str>,
    name: Option<&str>,
) -> Result<GraphFamily> {
    let need_nodes = || nodes.ok_or_else(|| anyhow!("--nodes is required for this family"));
    match family {
        "random" => Ok(GraphFamily::Random {
            nodes: need_nodes()?,
            edge_probability: rho.unwrap_or(0.05),
        }),
        "cycle" => Ok(GraphFamily::Cycle {
            nodes: need_nodes()?,
        }),
        "complete" => Ok(GraphFamily::Complete {
            nodes: need_nodes()?,
        }),
        "mesh2d" => {
            let d = parse_dims(dims.ok_or_else(|| anyhow!("--dims is required for mesh2d"))?)?;
            if d.len() != 2 {
                bail!("mesh2d needs two dimensions");
            }
            Ok(GraphFamily::Mesh2d {
                rows: d[0],
                cols: d[1],
            })
        }
        "mesh3d" => {
            let d = parse_dims(dims.ok_or_else(|| anyhow!("--dims is required for mesh3d"))?)?;
            if d.len() != 3 {
                bail!("mesh3d needs three dimensions");
            }
            Ok(GraphFamily::Mesh3d {
                x: d[0],
                y: d[1],
                z: d[2],
            })
        }
        "named" => parse_named(name.ok_or_else(|| anyhow!("--name is required for named"))?),
        other => bail!("unknown family {other:?}"),
    }
}

fn parse_named(name: &str) -> Result<GraphFamily> {
    let named = match name {
        "petersen" => NamedGraph::Petersen,
        "shrikhande" => NamedGraph::Shrikhande,
        "rook4x4" => NamedGraph::Rook4x4,
        "moebius-kantor" => NamedGraph::GeneralizedPetersen { outer: 8, skip: 3 },
        other => {
            if let Some(n) = other.strip_prefix("prism") {
                NamedGraph::GeneralizedPetersen {
                    outer: n.parse().context("prism size")?,
                    skip: 1,
                }
            } else if let Some(rest) = other.strip_prefix("gp") {
                let (outer, skip) = rest
                    .split_once('-')
                    .ok_or_else(|| anyhow!("expected gp<outer>-<skip>"))?;
                NamedGraph::GeneralizedPetersen {
                    outer: outer.parse().context("outer size")?,
                    skip: skip.parse().context("skip")?,
                }
            } else if let Some(n) = other.strip_prefix("moebius-ladder-") {
                NamedGraph::MoebiusLadder {
                    nodes: n.parse().context("ladder size")?,
                }
            } else {
                bail!("unknown named graph {other:?}");
            }
        }
    };
    Ok(GraphFamily::Named(named))
}

fn parse_dims(dims: &str) -> Result<Vec<usize>> {
    dims.split(',')
        .map(|d| d.trim().parse::<usize>().context("invalid dimension"))
        .collect()
}

fn cmd_gen(
    family: GraphFamily,
    connected: bool,
    perm_seed: u64,
    out: &Path,
    opts: &CommonOpts,
) -> Result<ExitCode> {
    let spec = GeneratorSpec {
        family,
        seed: opts.seed(),
        require_connected: connected,
    };
    let (g1, g2, mapping) = isomorphic_pair(&spec, perm_seed)?;
    let base = out.display();
    fs::write(format!("{base}.g1.txt"), write_edge_list(&g1))?;
    fs::write(format!("{base}.g2.txt"), write_edge_list(&g2))?;
    fs::write(
        format!("{base}.map.json"),
        format!("{}\n", serde_json::to_string(&mapping.as_slice())?),
    )?;
    if opts.output(OutputKind::Quiet) == OutputKind::Json {
        println!(
            "{}",
            serde_json::json!({
                "nodes": g1.num_nodes(),
                "edges": g1.num_edges(),
                "files": [format!("{base}.g1.txt"), format!("{base}.g2.txt"), format!("{base}.map.json")],
            })
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// One benchmark unit of work: a pair of graphs to compare.
struct BenchPair {
    family: String,
    pair_id: String,
    graphs: Result<(Graph, Graph)>,
}

fn discover_pairs(dir: &Path, opts: &CommonOpts) -> Result<Vec<BenchPair>> {
    let mut pairs = Vec::new();
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    entries.sort();
    for path in entries {
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !ext.starts_with('A') {
            continue;
        }
        let partner = path.with_extension(format!("B{}", &ext[1..]));
        if !partner.exists() {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("pair")
            .to_string();
        let graphs = load_graph(&path, opts.format)
            .and_then(|g1| load_graph(&partner, opts.format).map(|g2| (g1, g2)));
        pairs.push(BenchPair {
            family: stem.clone(),
            pair_id: format!("{stem}.{}", &ext[1..]),
            graphs,
        });
    }
    Ok(pairs)
}

fn sweep_pairs(family: &str, sizes: &str, count: usize, rho: f64, opts: &CommonOpts) -> Result<Vec<BenchPair>> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse::<usize>().context("invalid size"))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for &m in &sizes {
        for k in 0..count {
            let fam = match family {
                "random" => GraphFamily::Random {
                    nodes: m,
                    edge_probability: rho,
                },
                "cycle" => GraphFamily::Cycle { nodes: m },
                "complete" => GraphFamily::Complete { nodes: m },
                "mesh2d" => {
                    let side = (m as f64).sqrt().round().max(1.0) as usize;
                    GraphFamily::Mesh2d {
                        rows: side,
                        cols: m.div_ceil(side),
                    }
                }
                "mesh3d" => {
                    let side = (m as f64).cbrt().round().max(1.0) as usize;
                    GraphFamily::Mesh3d {
                        x: side,
                        y: side,
                        z: ((m as f64) / (side * side) as f64).round().max(1.0) as usize,
                    }
                }
                other => bail!("unknown sweep family {other:?}"),
            };
            let spec = GeneratorSpec {
                family: fam,
                seed: opts.seed().wrapping_add((m * 1000 + k) as u64),
                require_connected: family == "random",
            };
            let graphs = isomorphic_pair(&spec, opts.seed().wrapping_add(k as u64))
                .map(|(g1, g2, _)| (g1, g2))
                .map_err(|e| anyhow!(e));
            pairs.push(BenchPair {
                family: family.to_string(),
                pair_id: format!("{m}-{k}"),
                graphs,
            });
        }
    }
    Ok(pairs)
}

fn cmd_bench(
    dir: Option<&Path>,
    family: Option<&str>,
    sizes: &str,
    count: usize,
    rho: f64,
    opts: &CommonOpts,
) -> Result<ExitCode> {
    let pairs = match (dir, family) {
        (Some(dir), None) => discover_pairs(dir, opts)?,
        (None, Some(family)) => sweep_pairs(family, sizes, count, rho, opts)?,
        _ => bail!("pass either a directory or --family, not both"),
    };
    let mut records = Vec::new();
    for pair in pairs {
        let record = match pair.graphs {
            Ok((g1, g2)) => match opts.run_match(&g1, &g2) {
                Ok(verdict) => BenchRecord {
                    family: pair.family,
                    nodes: g1.num_nodes(),
                    pair_id: pair.pair_id,
                    verdict: Some(verdict.isomorphic),
                    probes: verdict.stats.probes,
                    rounds: verdict.stats.rounds,
                    wall_time_us: verdict.stats.wall_time.as_micros() as u64,
                },
                Err(err) => {
                    eprintln!("error on {}: {err}", pair.pair_id);
                    BenchRecord {
                        family: pair.family,
                        nodes: g1.num_nodes(),
                        pair_id: pair.pair_id,
                        verdict: None,
                        probes: 0,
                        rounds: 0,
                        wall_time_us: 0,
                    }
                }
            },
            Err(err) => {
                eprintln!("error on {}: {err}", pair.pair_id);
                BenchRecord {
                    family: pair.family,
                    nodes: 0,
                    pair_id: pair.pair_id,
                    verdict: None,
                    probes: 0,
                    rounds: 0,
                    wall_time_us: 0,
                }
            }
        };
        records.push(record);
    }
    records.sort_by(|a, b| {
        (&a.family, a.nodes, &a.pair_id).cmp(&(&b.family, b.nodes, &b.pair_id))
    });
    match opts.output(OutputKind::Csv) {
        OutputKind::Csv => {
            println!("{BENCH_CSV_HEADER}");
            for r in &records {
                println!("{}", r.to_csv_row());
            }
            // Median summary per (family, M) over successful rows.
            let mut groups: Vec<(String, usize, Vec<u64>)> = Vec::new();
            for r in records.iter().filter(|r| r.verdict.is_some()) {
                match groups.iter_mut().find(|(f, m, _)| *f == r.family && *m == r.nodes) {
                    Some((_, _, times)) => times.push(r.wall_time_us),
                    None => groups.push((r.family.clone(), r.nodes, vec![r.wall_time_us])),
                }
            }
            for (family, nodes, times) in &groups {
                println!("{}", median_csv_row(family, *nodes, times));
            }
        }
        OutputKind::Json => println!("{}", serde_json::to_string_pretty(&records)?),
        OutputKind::Quiet => {}
    }
    Ok(ExitCode::SUCCESS)
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Iso { file1, file2, opts } => cmd_iso(file1, file2, opts),
        Command::Auto { file, count, opts } => cmd_auto(file, *count, opts),
        Command::Canon { file, opts } => cmd_canon(file, opts),
        Command::Bench {
            dir,
            family,
            sizes,
            pairs,
            rho,
            opts,
        } => cmd_bench(dir.as_deref(), family.as_deref(), sizes, *pairs, *rho, opts),
        Command::Gen {
            family,
            nodes,
            rho,
            dims,
            name,
            connected,
            perm_seed,
            out,
            opts,
        } => {
            let family = parse_family(family, *nodes, *rho, dims.as_deref(), name.as_deref())?;
            cmd_gen(family, *connected, *perm_seed, out, opts)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
