//! The acceptance gate: eight criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output;
//! exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anonle::constructions::*;
use anonle::election::com_bound;
use anonle::graph::{diameter, PortGraph};
use anonle::sim::{Decision, ElectionTranscript};
use anonle::view::{canonical_encode, view_at_depth, ViewEngine};
use anonle::{run_with_true_knowledge, verify_outcome, Algorithm};

type Outcome = Result<String, String>;
type Corpus = Vec<(String, PortGraph)>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("{what} took {spent:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn labeled(g: &PortGraph, alpha: &str) -> usize {
    g.nodes()
        .find(|&u| g.label(u).unwrap().parse::<TypeLabel>().unwrap().alpha == alpha)
        .unwrap_or_else(|| panic!("no node labeled {alpha}"))
}

fn explicit(g: &PortGraph, u: usize, t: u32) -> Vec<u8> {
    canonical_encode(&view_at_depth(g, u, t).unwrap())
}

fn clique_symmetry() -> Outcome {
    for k in 1..=5u32 {
        let start = Instant::now();
        let g = gen_q(k + 1).unwrap();
        let lambda = ViewEngine::new().level_of_symmetry(&g);
        ensure!(lambda == k as usize, "level of symmetry of Q_{} is {lambda}, expected {k}", k + 1);
        within(start, Duration::from_secs(10), &format!("Q_{}", k + 1))?;
    }
    let q3 = gen_q(3).unwrap();
    let (aa, ab) = (labeled(&q3, "aa"), labeled(&q3, "ab"));
    ensure!(explicit(&q3, aa, 1) == explicit(&q3, ab, 1), "aa and ab differ at depth 1");
    ensure!(explicit(&q3, aa, 2) != explicit(&q3, ab, 2), "aa and ab agree at depth 2");
    Ok("λ(Q_{k+1}) = k for k = 1..5; aa ~ ab at depth 1, not at depth 2".into())
}

fn ring_lower_bound() -> Outcome {
    let start = Instant::now();
    for (d, lambda) in [(2usize, 2u32), (2, 3), (3, 2)] {
        let g = gen_r(d, lambda).unwrap();
        let mut e = ViewEngine::new();
        let p = e.profile(&g);
        ensure!(p.solvable, "R({d},{lambda}) not solvable");
        ensure!(p.diameter == d, "R({d},{lambda}) diameter {}", p.diameter);
        ensure!(p.level_of_symmetry == lambda as usize, "R({d},{lambda}) λ = {}", p.level_of_symmetry);
        let t = d + lambda as usize;
        for x in 0..(1usize << lambda) {
            let (a, b) = r_antipodal_pair(d, lambda, x);
            ensure!(
                e.view_id(&g, a, t - 1) == e.view_id(&g, b, t - 1),
                "R({d},{lambda}) pair {x} differs at {}",
                t - 1
            );
            ensure!(e.view_id(&g, a, t) != e.view_id(&g, b, t), "R({d},{lambda}) pair {x} equal at {t}");
        }
        if (d, lambda) == (2, 2) {
            // explicit trees are small enough here to cross-check the engine
            let (a, b) = r_antipodal_pair(d, lambda, 0);
            ensure!(explicit(&g, a, 3) == explicit(&g, b, 3), "explicit views differ at depth 3");
            ensure!(explicit(&g, a, 4) != explicit(&g, b, 4), "explicit views agree at depth 4");
        }
    }
    within(start, Duration::from_secs(60), "ring checks")?;
    Ok("R(2,2), R(2,3), R(3,2): solvable, D and λ exact, antipodal views split exactly at D+λ".into())
}

fn torus_impossibility() -> Outcome {
    let start = Instant::now();
    for k in 3..=6 {
        let t = gen_t(k).unwrap();
        let m = gen_m(k).unwrap();
        let mut e = ViewEngine::new();
        ensure!(e.is_solvable(&t), "T_{k} not solvable");
        ensure!(!e.is_solvable(&m), "M_{k} solvable");
        ensure!(diameter(&t) == k + 1, "diameter(T_{k}) = {}", diameter(&t));
        ensure!(diameter(&m) == k + 1, "diameter(M_{k}) = {}", diameter(&m));
        let pi = e.stable_partition(&m);
        ensure!(pi.classes.iter().all(|c| c.len() == 2), "M_{k} has a class not of size 2");
    }
    within(start, Duration::from_secs(30), "torus checks")?;
    Ok("k = 3..6: T_k solvable, M_k not, both of diameter k+1, Π(M_k) classes of size 2".into())
}

fn strong_size_lower_bound() -> Outcome {
    let start = Instant::now();
    for k in 2..=3u32 {
        let n = 5 * (1usize << k) - 4;
        let g = gen_gk(k).unwrap();
        let gp = gen_gk_prime(k).unwrap();
        let mut e = ViewEngine::new();
        ensure!(e.stable_partition(&g).len() == 1, "G_{k} has more than one view class");
        ensure!(g.node_count() == n && gp.node_count() == n, "node counts differ from {n}");
        ensure!(e.is_solvable(&gp), "G'_{k} not solvable");
        let h = (1usize << k) - 1;
        let reference = e.view_id(&g, 0, h);
        let colors = e.colors_at_depth(&gp, h);
        let dist = gp.bfs_distances(gk_prime_pendant(k));
        let witness = gp.nodes().find(|&u| dist[u] >= (1 << k) + 3 && colors[u] == reference);
        ensure!(witness.is_some(), "no far node of G'_{k} shares G_{k}'s depth-{h} view");
        let d = diameter(&g);
        ensure!(d <= 4 * k as usize + 2, "diameter(G_{k}) = {d}");
    }
    within(start, Duration::from_secs(60), "G_k checks")?;
    Ok("k = 2,3: |Π(G_k)| = 1, G'_k solvable on the same n, far nodes look alike, diameter(G_k) <= 4k+2".into())
}

fn solvable_corpus() -> Corpus {
    let mut out = Vec::new();
    for k in 2..=6 {
        out.push((format!("Q_{k}"), gen_q(k).unwrap()));
    }
    for (d, l) in [(2, 2), (2, 3), (3, 2)] {
        out.push((format!("R({d},{l})"), gen_r(d, l).unwrap()));
    }
    for k in 3..=6 {
        out.push((format!("T_{k}"), gen_t(k).unwrap()));
    }
    for k in 2..=3 {
        out.push((format!("G'_{k}"), gen_gk_prime(k).unwrap()));
    }
    for d in 2..=4 {
        out.push((format!("case1({d})"), gen_small_case(SmallCase::SymmetryZero, d, 0).unwrap()));
        out.push((format!("case2({d})"), gen_small_case(SmallCase::SymmetryOne, d, 1).unwrap()));
    }
    for l in 1..=3 {
        out.push((format!("case3({l})"), gen_small_case(SmallCase::DiameterOne, 1, l).unwrap()));
    }
    out.push(("single".into(), PortGraph::single_node()));
    out
}

fn unsolvable_corpus() -> Corpus {
    let mut out = Vec::new();
    for k in 3..=6 {
        out.push((format!("M_{k}"), gen_m(k).unwrap()));
    }
    for k in 2..=3 {
        out.push((format!("G_{k}"), gen_gk(k).unwrap()));
    }
    for k in 1..=5 {
        out.push((format!("Q~_{k}"), gen_qtilde(k).unwrap()));
    }
    for n in [3, 4, 7, 10] {
        out.push((format!("C_{n}"), gen_uniform_cycle(n).unwrap()));
    }
    out
}

/// Random graphs with `n <= 20`, split by solvability: the first 200
/// solvable ones and every unsolvable one met along the way.
fn random_corpus() -> (Corpus, Corpus) {
    let mut solvable = Vec::new();
    let mut unsolvable = Vec::new();
    let mut seed = 0u64;
    while solvable.len() < 200 {
        seed += 1;
        let n = 1 + (seed as usize * 7) % 20;
        let density = [0.15, 0.3, 0.5, 0.8][seed as usize % 4];
        let Ok(g) = gen_random(n, density, seed) else { continue };
        let entry = (format!("random(n={n}, seed={seed})"), g);
        if ViewEngine::new().is_solvable(&entry.1) {
            solvable.push(entry);
        } else {
            unsolvable.push(entry);
        }
    }
    (solvable, unsolvable)
}

fn leader_of(t: &ElectionTranscript) -> Option<usize> {
    t.nodes.iter().position(|r| r.decision == Some(Decision::Leader))
}

fn algorithm_correctness(random: &[(String, PortGraph)]) -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for (name, g) in solvable_corpus().iter().chain(random) {
        let mut e = ViewEngine::new();
        let big_lambda = e.stabilization_depth(g);
        let (n, d) = (g.node_count(), diameter(g));
        let mut leaders = HashMap::new();
        for a in Algorithm::ALL {
            let t = run_with_true_knowledge(g, a).map_err(|e| format!("{name} {a}: {e}"))?;
            let report = verify_outcome(g, &t);
            ensure!(report.passed(), "{name} {a}:\n{report}");
            let bound = com_bound(a, n, d, big_lambda);
            ensure!(bound.admits(t.rounds), "{name} {a}: {} COM calls, bound {bound}", t.rounds);
            leaders.insert(a, leader_of(&t));
            runs += 1;
        }
        ensure!(
            leaders[&Algorithm::WleDiam] == leaders[&Algorithm::SleSizeDiam],
            "{name}: algorithms 2 and 5 elect different nodes"
        );
    }
    within(start, Duration::from_secs(300), "algorithm suite")?;
    Ok(format!("{runs} verified runs, all within their COM-call bounds"))
}

fn strong_soundness(random_solvable: &[(String, PortGraph)], random_unsolvable: &[(String, PortGraph)]) -> Outcome {
    let mut mismatches = Vec::new();
    let mut runs = 0;
    let all = solvable_corpus().into_iter().chain(unsolvable_corpus());
    for (name, g) in all.chain(random_solvable.iter().cloned()).chain(random_unsolvable.iter().cloned()) {
        let solvable = ViewEngine::new().is_solvable(&g);
        for a in [Algorithm::SleSize, Algorithm::SleSizeDiam] {
            let t = run_with_true_knowledge(&g, a).map_err(|e| format!("{name} {a}: {e}"))?;
            let impossible = t.nodes.iter().all(|r| r.decision == Some(Decision::Impossible));
            let elected = verify_outcome(&g, &t).passed() && !impossible;
            if elected != solvable || impossible == solvable {
                mismatches.push(format!("{name} {a}"));
            }
            runs += 1;
        }
    }
    ensure!(mismatches.is_empty(), "verdict mismatches: {mismatches:?}");
    Ok(format!("{runs} strong runs, zero verdict mismatches ({} unsolvable random graphs)", random_unsolvable.len()))
}

fn proposition_suite(random_solvable: &[(String, PortGraph)], random_unsolvable: &[(String, PortGraph)]) -> Outcome {
    let mut graphs: Corpus = solvable_corpus();
    graphs.extend(unsolvable_corpus());
    graphs.extend(random_solvable.iter().cloned());
    graphs.extend(random_unsolvable.iter().cloned());
    let mut oracle_checked = 0;
    for (name, g) in &graphs {
        let n = g.node_count();
        let mut e = ViewEngine::new();
        let p = e.profile(g);
        ensure!(p.stabilization_depth <= p.diameter + p.level_of_symmetry, "{name}: Λ > D + λ");
        let mut r = e.refinement(g);
        r.extend_to(e.table(), g, (p.stabilization_depth.max(n.saturating_sub(1)) + 3).max(4));
        for t in 0..r.computed_depth() {
            ensure!(r.class_count(t) <= r.class_count(t + 1), "{name}: |Π_t| decreases at {t}");
            if t >= p.stabilization_depth {
                ensure!(r.class_count(t) == p.classes, "{name}: partition changes after repeating");
            }
        }
        let solvable = e.is_solvable(g);
        ensure!(solvable == (r.class_count(n.saturating_sub(1)) == n), "{name}: solvable vs |Π_(n-1)|");
        ensure!(solvable == (p.sigma == 1), "{name}: solvable vs σ");
        if n <= 8 {
            for t in 0..=4usize {
                let ids = r.colors(t);
                let encs: Vec<Vec<u8>> = g.nodes().map(|u| explicit(g, u, t as u32)).collect();
                for u in g.nodes() {
                    for v in g.nodes() {
                        ensure!((ids[u] == ids[v]) == (encs[u] == encs[v]), "{name}: oracle mismatch at depth {t}");
                    }
                }
            }
            oracle_checked += 1;
        }
    }
    Ok(format!("{} graphs, zero violations, {oracle_checked} checked against explicit views", graphs.len()))
}

fn separation() -> Outcome {
    let g = gen_gk(3).unwrap();
    let gp = gen_gk_prime(3).unwrap();
    let mut calls = HashMap::new();
    for (name, graph) in [("G_3", &g), ("G'_3", &gp)] {
        let mut e = ViewEngine::new();
        let p = e.profile(graph);
        let sle = run_with_true_knowledge(graph, Algorithm::SleSize).map_err(|e| e.to_string())?;
        ensure!(sle.rounds == 70, "{name}: algorithm 4 used {} COM calls, expected 70", sle.rounds);
        let both = run_with_true_knowledge(graph, Algorithm::SleSizeDiam).map_err(|e| e.to_string())?;
        let limit = 2 * p.diameter + p.level_of_symmetry + 1;
        ensure!(both.rounds <= limit, "{name}: algorithm 5 used {} COM calls, limit {limit}", both.rounds);
        calls.insert((name, 4), sle.rounds);
        calls.insert((name, 5), both.rounds);
    }
    let p = ViewEngine::new().profile(&gp);
    let weak = run_with_true_knowledge(&gp, Algorithm::WleDiam).map_err(|e| e.to_string())?;
    ensure!(weak.rounds <= p.diameter + p.stabilization_depth + 1, "G'_3: algorithm 2 used {} COM calls", weak.rounds);
    // regression values for the measured gaps
    ensure!(calls[&("G_3", 5)] == 11, "G_3: algorithm 5 now uses {} calls (was 11)", calls[&("G_3", 5)]);
    ensure!(calls[&("G'_3", 5)] == 27, "G'_3: algorithm 5 now uses {} calls (was 27)", calls[&("G'_3", 5)]);
    ensure!(weak.rounds == 27, "G'_3: algorithm 2 now uses {} calls (was 27)", weak.rounds);
    Ok(format!(
        "algorithm 4: 70 calls on G_3 and G'_3; algorithm 5: {} and {} (gaps {:.2}x, {:.2}x); algorithm 2 on G'_3: {}",
        calls[&("G_3", 5)],
        calls[&("G'_3", 5)],
        70.0 / calls[&("G_3", 5)] as f64,
        70.0 / calls[&("G'_3", 5)] as f64,
        weak.rounds
    ))
}

fn run(number: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {number} ({name}, {secs:.2}s): {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL criterion {number} ({name}, {secs:.2}s): {detail}");
            false
        }
    }
}

fn main() -> ExitCode {
    // failures are reported through the criterion lines
    std::panic::set_hook(Box::new(|_| {}));
    let (random_solvable, random_unsolvable) = random_corpus();
    let results = [
        run(1, "clique level of symmetry", clique_symmetry),
        run(2, "ring of cliques", ring_lower_bound),
        run(3, "torus pair", torus_impossibility),
        run(4, "G_k and G'_k", strong_size_lower_bound),
        run(5, "algorithm correctness", || algorithm_correctness(&random_solvable)),
        run(6, "strong election soundness", || strong_soundness(&random_solvable, &random_unsolvable)),
        run(7, "partition propositions", || proposition_suite(&random_solvable, &random_unsolvable)),
        run(8, "separation evidence", separation),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
