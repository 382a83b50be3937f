//! Acceptance suite: every release criterion in one target, one pass/fail
//! line each. Run with `cargo test -p mpiso-cli --test acceptance --
//! --nocapture` to see the table.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use mpiso::{
    brute_force_isomorphic, canonicalize, derive_constants, enumerate_automorphisms,
    find_automorphism, isomorphic_pair, map_signature_traced, match_exhaustive, match_supervised,
    mirrored_pattern, probe_pattern, random_permutation, validate_mapping, FieldElement, Graph,
    GraphFamily, GeneratorSpec, InputPattern, MatchConfig, Verdict,
};

/// Tiny deterministic generator for test-local choices.
struct TestRng(u64);

impl TestRng {
    fn new(seed: u64) -> TestRng {
        TestRng(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

/// Count of validated isomorphism mappings across every criterion, for the
/// soundness line.
static VALIDATED: AtomicUsize = AtomicUsize::new(0);

/// Assert the verdict's soundness contract and log the validation.
fn check_sound(g1: &Graph, g2: &Graph, verdict: &Verdict) {
    if verdict.isomorphic {
        let mapping = verdict
            .mapping
            .as_ref()
            .expect("isomorphic verdicts carry a mapping");
        assert!(
            validate_mapping(g1, g2, mapping).expect("sizes match"),
            "isomorphic verdict failed mapping validation"
        );
        VALIDATED.fetch_add(1, Ordering::Relaxed);
    } else {
        assert!(verdict.mapping.is_none());
    }
}

fn connected_random(nodes: usize, rho: f64, seed: u64) -> Graph {
    mpiso::generate(&GeneratorSpec::connected(
        GraphFamily::Random {
            nodes,
            edge_probability: rho,
        },
        seed,
    ))
    .expect("connected draw")
}

/// Degree-preserving double-edge swaps until the result is connected and
/// non-isomorphic to the base (oracle-checked).
fn rewired_non_isomorphic(base: &Graph, seed: u64) -> Option<Graph> {
    let mut rng = TestRng::new(seed);
    let mut current = base.clone();
    for _ in 0..500 {
        let edges = current.edges();
        if edges.len() < 2 {
            return None;
        }
        let a = rng.below(edges.len() as u64) as usize;
        let b = rng.below(edges.len() as u64) as usize;
        if a == b {
            continue;
        }
        let (u1, v1) = edges[a];
        let (mut u2, mut v2) = edges[b];
        if rng.below(2) == 1 {
            std::mem::swap(&mut u2, &mut v2);
        }
        if u1 == u2 || v1 == v2 {
            continue;
        }
        let e1 = (u1.min(u2), u1.max(u2));
        let e2 = (v1.min(v2), v1.max(v2));
        if e1 == e2 || current.has_edge(e1.0, e1.1) || current.has_edge(e2.0, e2.1) {
            continue;
        }
        let mut new_edges: Vec<(usize, usize)> = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a && i != b)
            .map(|(_, &e)| e)
            .collect();
        new_edges.push(e1);
        new_edges.push(e2);
        let candidate = Graph::from_edges(current.num_nodes(), &new_edges).expect("swap is valid");
        if !candidate.is_connected() {
            continue;
        }
        current = candidate;
        if brute_force_isomorphic(base, &current)
            .expect("within cap")
            .is_none()
        {
            return Some(current);
        }
    }
    None
}

fn degree_sequence(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.num_nodes()).map(|u| g.degree(u)).collect();
    d.sort_unstable();
    d
}

/// Criterion 1: 500 connected pairs on 4..=8 nodes, half isomorphic and
/// half degree-matched non-isomorphic; both matchers agree with the oracle
/// on every pair, within 60 seconds.
fn criterion_oracle_agreement() -> String {
    let started = Instant::now();
    let mut checked = 0usize;
    let mut pair_index = 0u64;
    while checked < 500 {
        let n = 4 + (pair_index as usize) % 5;
        let make_iso = checked.is_multiple_of(2);
        let spec = GeneratorSpec::connected(
            GraphFamily::Random {
                nodes: n,
                edge_probability: 0.5,
            },
            10_000 + pair_index,
        );
        let (g1, g2) = if make_iso {
            let (g1, g2, truth) = isomorphic_pair(&spec, 20_000 + pair_index).expect("valid spec");
            assert!(validate_mapping(&g1, &g2, &truth).expect("sizes match"));
            (g1, g2)
        } else {
            let base = connected_random(n, 0.5, 10_000 + pair_index);
            match rewired_non_isomorphic(&base, 30_000 + pair_index) {
                Some(other) => (base, other),
                None => {
                    pair_index += 1;
                    continue;
                }
            }
        };
        pair_index += 1;
        assert_eq!(degree_sequence(&g1), degree_sequence(&g2));
        assert!(g1.is_connected() && g2.is_connected());
        let expected = brute_force_isomorphic(&g1, &g2)
            .expect("within cap")
            .is_some();
        assert_eq!(expected, make_iso, "pair construction matches oracle");
        let cfg = MatchConfig::with_seed(pair_index);
        for verdict in [
            match_supervised(&g1, &g2, &cfg).expect("no budget set"),
            match_exhaustive(&g1, &g2, &cfg).expect("no budget set"),
        ] {
            assert_eq!(
                verdict.isomorphic, expected,
                "disagreement with oracle on a {}-node pair (seed path {})",
                n, pair_index
            );
            check_sound(&g1, &g2, &verdict);
        }
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "took {elapsed:?}, budget 60s"
    );
    format!("500/500 pairs agree in both modes ({elapsed:.2?})")
}

/// Criterion 3: 200 permuted pairs up to 64 nodes across random, mesh, and
/// cycle families, all declared isomorphic within 120 seconds.
fn criterion_permutation_completeness() -> String {
    let started = Instant::now();
    for k in 0..200u64 {
        let family = match k % 5 {
            0 => GraphFamily::Random {
                nodes: 16 + (k as usize % 7) * 8,
                edge_probability: 0.15,
            },
            1 => GraphFamily::Mesh2d {
                rows: 3 + (k as usize % 6),
                cols: 3 + (k as usize / 5 % 5),
            },
            2 => GraphFamily::Cycle {
                nodes: 8 + (k as usize % 57),
            },
            3 => GraphFamily::Mesh3d {
                x: 2 + (k as usize % 3),
                y: 2 + (k as usize / 5 % 3),
                z: 2 + (k as usize / 25 % 3),
            },
            _ => GraphFamily::Random {
                nodes: 64,
                edge_probability: 0.05,
            },
        };
        let require_connected = matches!(family, GraphFamily::Random { .. });
        let spec = GeneratorSpec {
            family,
            seed: 40_000 + k,
            require_connected,
        };
        let (g1, g2, _) = isomorphic_pair(&spec, 50_000 + k).expect("valid spec");
        assert!(g1.num_nodes() <= 64);
        let verdict =
            match_supervised(&g1, &g2, &MatchConfig::with_seed(k)).expect("no budget set");
        assert!(
            verdict.isomorphic,
            "permuted pair {k} not recognized ({} nodes)",
            g1.num_nodes()
        );
        check_sound(&g1, &g2, &verdict);
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "took {elapsed:?}, budget 120s"
    );
    format!("200/200 permuted pairs recognized ({elapsed:.2?})")
}

/// Criterion 4: the hard-instance corpus agrees with the 16-node oracle in
/// both modes; disagreements print the counterexample pair.
fn criterion_hard_corpus() -> String {
    let mut lines = Vec::new();
    for pair in mpiso::hard_pairs() {
        let expected = brute_force_isomorphic(&pair.left, &pair.right)
            .expect("corpus fits the oracle cap")
            .is_some();
        assert!(!expected, "{}: corpus pair must be non-isomorphic", pair.name);
        for (mode, verdict) in [
            (
                "supervised",
                match_supervised(&pair.left, &pair.right, &MatchConfig::default()),
            ),
            (
                "exhaustive",
                match_exhaustive(&pair.left, &pair.right, &MatchConfig::default()),
            ),
        ] {
            let verdict = verdict.expect("no budget set");
            if verdict.isomorphic != expected {
                panic!(
                    "counterexample on {} ({mode}): engine says {}, oracle says {}\nleft:\n{}right:\n{}",
                    pair.name,
                    verdict.isomorphic,
                    expected,
                    mpiso::io::write_edge_list(&pair.left),
                    mpiso::io::write_edge_list(&pair.right),
                );
            }
            check_sound(&pair.left, &pair.right, &verdict);
        }
        lines.push(pair.name);
    }
    format!("{} pairs agree with the oracle: {}", lines.len(), lines.join(", "))
}

fn fitted_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Criterion 5: supervised scaling on sparse random graphs; the log-log
/// slope of median wall time against node count stays at or below 2.5 and
/// the sweep finishes within 5 minutes.
fn criterion_scaling_shape() -> String {
    let started = Instant::now();
    let sizes = [16usize, 32, 64, 128, 256];
    let mut medians = Vec::new();
    for (si, &m) in sizes.iter().enumerate() {
        let mut times = Vec::new();
        for k in 0..20u64 {
            let spec = GeneratorSpec::connected(
                GraphFamily::Random {
                    nodes: m,
                    edge_probability: 0.05,
                },
                60_000 + (si as u64) * 100 + k,
            );
            let (g1, g2, _) = isomorphic_pair(&spec, 70_000 + k).expect("valid spec");
            let verdict =
                match_supervised(&g1, &g2, &MatchConfig::with_seed(k)).expect("no budget set");
            assert!(verdict.isomorphic, "sparse pair of {m} nodes not recognized");
            check_sound(&g1, &g2, &verdict);
            times.push(verdict.stats.wall_time.as_micros() as u64);
        }
        times.sort_unstable();
        let median = (times[9] + times[10]) / 2;
        medians.push((m, median));
    }
    let points: Vec<(f64, f64)> = medians
        .iter()
        .map(|&(m, t)| ((m as f64).ln(), (t.max(1) as f64).ln()))
        .collect();
    let slope = fitted_slope(&points);
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(300),
        "took {elapsed:?}, budget 5 minutes"
    );
    assert!(
        slope <= 2.5,
        "log-log slope {slope:.2} exceeds 2.5 (medians {medians:?})"
    );
    let summary: Vec<String> = medians
        .iter()
        .map(|(m, t)| format!("M={m}:{t}us"))
        .collect();
    format!("slope {slope:.2} <= 2.5 [{}] ({elapsed:.2?})", summary.join(", "))
}

fn collect_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let Ok(entries) = fs::read_dir(&d) else {
            continue;
        };
        for entry in entries.flatten() {
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path);
            }
        }
    }
    out.sort();
    out
}

/// Criterion 6: conditional TC-15 subset — at least 100 iso_r001 pairs with
/// at most 200 nodes, every one declared isomorphic with a validated
/// mapping. Skipped with a notice when the database is not available.
fn criterion_tc15_subset() -> String {
    let Some(dir) = std::env::var_os("MPISO_TC15_DIR") else {
        return "SKIPPED (set MPISO_TC15_DIR to a local TC-15 checkout to enable)".to_string();
    };
    let dir = PathBuf::from(dir);
    let mut pairs = Vec::new();
    for path in collect_files(&dir) {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if !name.contains("r001") {
            continue;
        }
        let Some(ext) = path.extension().and_then(|e| e.to_str()) else {
            continue;
        };
        if !ext.starts_with('A') {
            continue;
        }
        let partner = path.with_extension(format!("B{}", &ext[1..]));
        if partner.exists() {
            pairs.push((path, partner));
        }
    }
    let mut run = 0usize;
    for (a, b) in &pairs {
        if run >= 200 {
            break;
        }
        let g1 = mpiso::io::read_tc15(&fs::read(a).expect("readable")).expect("parses");
        if g1.num_nodes() > 200 {
            continue;
        }
        let g2 = mpiso::io::read_tc15(&fs::read(b).expect("readable")).expect("parses");
        let verdict =
            match_supervised(&g1, &g2, &MatchConfig::default()).expect("no budget set");
        assert!(
            verdict.isomorphic,
            "false negative on TC-15 pair {}",
            a.display()
        );
        check_sound(&g1, &g2, &verdict);
        run += 1;
    }
    if run < 100 {
        return format!("SKIPPED (only {run} iso_r001 pairs with M <= 200 found under {})", dir.display());
    }
    format!("{run} TC-15 iso_r001 pairs recognized, zero false negatives")
}

/// Criterion 7: named automorphisms — C5, K4, and P4 each yield a
/// validated non-identity automorphism, and P4's is the end reversal (its
/// unique non-identity automorphism per full enumeration).
fn criterion_automorphisms() -> String {
    let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).expect("valid");
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).expect("valid");
    let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).expect("valid");
    for (name, g) in [("C5", &c5), ("K4", &k4), ("P4", &p4)] {
        let verdict = find_automorphism(g, &MatchConfig::default()).expect("multi-node cells exist");
        assert!(verdict.isomorphic, "{name}: no automorphism found");
        let mapping = verdict.mapping.expect("mapping present");
        assert!(!mapping.is_identity(), "{name}: identity returned");
        assert!(validate_mapping(g, g, &mapping).expect("same graph"));
        VALIDATED.fetch_add(1, Ordering::Relaxed);
    }
    // Full enumeration confirms P4 has exactly one non-identity
    // automorphism, the end reversal, and ours equals it.
    let autos = enumerate_automorphisms(&p4).expect("within cap");
    let mut non_identity: Vec<Vec<usize>> = autos
        .iter()
        .filter(|m| !m.is_identity())
        .map(|m| m.as_slice().to_vec())
        .collect();
    non_identity.sort();
    assert_eq!(non_identity, vec![vec![3, 2, 1, 0]]);
    let ours = find_automorphism(&p4, &MatchConfig::default())
        .expect("multi-node cells exist")
        .mapping
        .expect("found");
    assert_eq!(ours.as_slice(), &[3, 2, 1, 0]);
    "C5, K4, P4 validated; P4 equals the end reversal".to_string()
}

/// Criterion 8: the three pattern requirements over 1000 random
/// (graph, match-state, probe) configurations.
fn criterion_pattern_requirements() -> String {
    let mut rng = TestRng::new(99);
    for case in 0..1000u64 {
        let n = 4 + (case as usize) % 7;
        let g = connected_random(n, 0.4, 80_000 + case);
        let sigma = random_permutation(n, 90_000 + case);
        let h = g.permute(&sigma).expect("sizes match");
        let c1 = canonicalize(&g);
        let c2 = canonicalize(&h);
        let s = derive_constants(case, c1.partition().num_cells(), 2, n);

        let take = (rng.below(n as u64)) as usize; // matched prefix, probe stays free
        let mut side1 = Vec::new();
        let mut side2 = Vec::new();
        for (key, orig) in (0..take).enumerate() {
            side1.push((c1.position_of(orig), key));
            side2.push((c2.position_of(sigma.map(orig)), key));
        }
        let probe_orig = take + (rng.below((n - take) as u64)) as usize;
        let probe1 = c1.position_of(probe_orig);
        let probe2 = c2.position_of(sigma.map(probe_orig));

        let p1 = probe_pattern(&c1, probe1, &side1, &s).expect("probe unmatched");
        let p2 = mirrored_pattern(&c2, probe2, &side2, &p1, &s).expect("similar candidate");

        // I1: matched pairs share a value unique within each pattern.
        for key in 0..take {
            let v = p1.values()[side1[key].0];
            assert_eq!(v, p2.values()[side2[key].0], "case {case}: I1 equality");
            assert_eq!(p1.values().iter().filter(|&&x| x == v).count(), 1);
            assert_eq!(p2.values().iter().filter(|&&x| x == v).count(), 1);
        }
        // I2: entries of different cells never share a value.
        for (pattern, canon) in [(&p1, &c1), (&p2, &c2)] {
            for i in 0..n {
                for j in (i + 1)..n {
                    if canon.partition().cell_of[i] != canon.partition().cell_of[j] {
                        assert_ne!(
                            pattern.values()[i],
                            pattern.values()[j],
                            "case {case}: I2 distinctness"
                        );
                    }
                }
            }
        }
        // I3: the probe entry is beta on both sides, exactly once each.
        assert_eq!(p1.values()[probe1], s.beta());
        assert_eq!(p2.values()[probe2], s.beta());
        assert_eq!(p1.values().iter().filter(|&&x| x == s.beta()).count(), 1);
        assert_eq!(p2.values().iter().filter(|&&x| x == s.beta()).count(), 1);
    }
    "1000/1000 configurations satisfy the pattern requirements".to_string()
}

/// Criterion 9: the one-round fingerprint of the single-edge graph equals
/// the hand-derived closed form in exact field arithmetic.
fn criterion_closed_form() -> String {
    let g = Graph::from_edges(2, &[(0, 1)]).expect("valid");
    let c = canonicalize(&g);
    let s = derive_constants(123, c.partition().num_cells(), 1, 0);
    let x1 = FieldElement::new(987_654_321);
    let x2 = FieldElement::new(123_456_789);
    let (fp, raw) = map_signature_traced(&c, &InputPattern::from_values(vec![x1, x2]), &s, 1);
    let sc = s.round_scalars(0);
    let expect = [sc.d * (sc.b * x1 + sc.c * x2), sc.d * (sc.b * x2 + sc.c * x1)];
    assert_eq!(raw[0], expect, "pre-sort node values match the closed form");
    let mut sorted = expect.to_vec();
    sorted.sort_unstable();
    assert_eq!(fp.rows()[0], sorted, "fingerprint row is the per-cell sort");
    "single-edge fingerprint matches the closed form exactly".to_string()
}

/// Criterion 10: two CLI runs with the same inputs and seed produce
/// byte-identical JSON reports outside the timing sub-object.
fn criterion_cli_determinism() -> String {
    let dir = tempfile::tempdir().expect("tempdir");
    let g = connected_random(12, 0.3, 4242);
    let sigma = random_permutation(12, 77);
    let h = g.permute(&sigma).expect("sizes match");
    let f1 = dir.path().join("a.txt");
    let f2 = dir.path().join("b.txt");
    fs::write(&f1, mpiso::io::write_edge_list(&g)).expect("writable");
    fs::write(&f2, mpiso::io::write_edge_list(&h)).expect("writable");
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_mpiso"))
            .arg("iso")
            .args([&f1, &f2])
            .args(["--seed", "123"])
            .output()
            .expect("binary runs");
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("valid JSON report");
        v.as_object_mut()
            .expect("object report")
            .remove("timing")
            .expect("timing present");
        serde_json::to_vec(&v).expect("serializes")
    };
    let (a, b) = (run(), run());
    assert_eq!(a, b, "reports differ outside the timing sub-object");
    "two seeded runs byte-identical outside timing".to_string()
}

struct Outcome {
    name: &'static str,
    result: Result<String, String>,
    elapsed: Duration,
}

fn run_criterion(name: &'static str, f: impl FnOnce() -> String) -> Outcome {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).map_err(|e| {
        e.downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".to_string())
    });
    Outcome {
        name,
        result,
        elapsed: started.elapsed(),
    }
}

#[test]
fn acceptance() {
    let outcomes = vec![
        run_criterion("01 oracle agreement", criterion_oracle_agreement),
        run_criterion("03 permutation completeness", criterion_permutation_completeness),
        run_criterion("04 hard-instance corpus", criterion_hard_corpus),
        run_criterion("05 scaling shape", criterion_scaling_shape),
        run_criterion("06 tc15 subset", criterion_tc15_subset),
        run_criterion("07 automorphisms", criterion_automorphisms),
        run_criterion("08 pattern requirements", criterion_pattern_requirements),
        run_criterion("09 fingerprint closed form", criterion_closed_form),
        run_criterion("10 cli determinism", criterion_cli_determinism),
    ];

    // Criterion 2 aggregates the soundness checks performed throughout: a
    // validation failure would have failed its host criterion already.
    let validated = VALIDATED.load(Ordering::Relaxed);
    let others_ok = outcomes.iter().all(|o| o.result.is_ok());
    let soundness = Outcome {
        name: "02 mapping soundness",
        result: if others_ok {
            Ok(format!("{validated} isomorphic verdicts validated, zero exceptions"))
        } else {
            Err("not all suites completed cleanly".to_string())
        },
        elapsed: Duration::ZERO,
    };

    let mut all = outcomes;
    all.insert(1, soundness);

    let mut failures = Vec::new();
    for o in &all {
        match &o.result {
            Ok(detail) => println!("criterion {:28} PASS ({:>8.2?}) {detail}", o.name, o.elapsed),
            Err(detail) => {
                println!("criterion {:28} FAIL ({:>8.2?}) {detail}", o.name, o.elapsed);
                failures.push(o.name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
