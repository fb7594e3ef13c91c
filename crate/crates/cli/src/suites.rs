//! Named check suites behind `anonle verify`.

use anyhow::{bail, Result};

use anonle::constructions::*;
use anonle::election::com_bound;
use anonle::graph::{diameter, PortGraph};
use anonle::sim::Decision;
use anonle::view::{ViewClassId, ViewEngine};
use anonle::{run_with_true_knowledge, verify_outcome, Algorithm};

pub const SUITES: [&str; 7] =
    ["lemma-clique", "lemma-ring", "thm-weak-lb", "thm-impossibility", "thm-strong-lb", "propositions", "algorithms"];

struct Checks {
    passed: usize,
    failed: usize,
}

impl Checks {
    fn new() -> Self {
        Checks { passed: 0, failed: 0 }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl AsRef<str>) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        println!("{} {name}: {}", if ok { "ok  " } else { "FAIL" }, detail.as_ref());
    }
}

/// Runs `suite`, printing one line per check. Returns whether all passed.
pub fn run(suite: &str) -> Result<bool> {
    let mut c = Checks::new();
    match suite {
        "lemma-clique" => lemma_clique(&mut c)?,
        "lemma-ring" => lemma_ring(&mut c)?,
        "thm-weak-lb" => weak_lower_bound(&mut c)?,
        "thm-impossibility" => impossibility(&mut c)?,
        "thm-strong-lb" => strong_lower_bound(&mut c)?,
        "propositions" => propositions(&mut c)?,
        "algorithms" => algorithms(&mut c)?,
        _ => bail!("unknown suite {suite:?}; expected one of {}", SUITES.join(", ")),
    }
    println!("{suite}: {} passed, {} failed", c.passed, c.failed);
    Ok(c.failed == 0)
}

fn views(g: &PortGraph, max: usize) -> Vec<Vec<ViewClassId>> {
    let mut e = ViewEngine::new();
    let mut r = e.refinement(g);
    r.extend_to(e.table(), g, max);
    (0..=max).map(|t| r.colors(t).to_vec()).collect()
}

fn alpha(g: &PortGraph, u: usize) -> String {
    g.label(u).and_then(|l| l.parse::<TypeLabel>().ok()).map(|l| l.alpha).unwrap_or_default()
}

fn lemma_clique(c: &mut Checks) -> Result<()> {
    for k in 1..=5u32 {
        let g = gen_q(k + 1)?;
        let lambda = ViewEngine::new().level_of_symmetry(&g);
        c.check(
            &format!("level of symmetry of Q_{}", k + 1),
            lambda == k as usize,
            format!("λ = {lambda}, expected {k}"),
        );
    }
    // labels sharing a prefix of length 2^j (not 2^{j+1}) agree exactly up to depth j+1
    for k in 1..=4u32 {
        let g = gen_q(k + 1)?;
        let v = views(&g, k as usize + 1);
        let mut bad = 0;
        for x in g.nodes() {
            for y in g.nodes().filter(|&y| y > x) {
                let (ax, ay) = (alpha(&g, x), alpha(&g, y));
                let shared = ax.bytes().zip(ay.bytes()).take_while(|(p, q)| p == q).count();
                let ok = if shared == 0 {
                    v[1][x] != v[1][y]
                } else {
                    let j = shared.ilog2() as usize;
                    v[j + 1][x] == v[j + 1][y] && v[j + 2][x] != v[j + 2][y]
                };
                bad += usize::from(!ok);
            }
        }
        c.check(&format!("prefix refinement in Q_{}", k + 1), bad == 0, format!("{bad} violating pairs"));
    }
    for k in 2..=5 {
        let g = gen_qtilde(k)?;
        let p = ViewEngine::new().profile(&g);
        c.check(&format!("Qtilde_{k} unsolvable"), !p.solvable, format!("σ = {}", p.sigma));
    }
    Ok(())
}

fn lemma_ring(c: &mut Checks) -> Result<()> {
    for (d, lambda) in [(2, 2), (2, 3), (3, 2)] {
        let r = gen_r(d, lambda)?;
        let q = gen_q(lambda + 1)?;
        let m = q.node_count();
        let depth = d + lambda as usize;
        let vr = views(&r, depth);
        let vq = views(&q, depth);
        let mut bad = 0;
        for l in 0..=depth {
            for y in 0..m {
                for z in 0..m {
                    bad += usize::from(vq[l][y] == vq[l][z] && vr[l][y] != vr[l][z]);
                }
            }
        }
        c.check(
            &format!("R({d},{lambda}) keeps clique equalities"),
            bad == 0,
            format!("{bad} broken pairs up to depth {depth}"),
        );
        let p = ViewEngine::new().profile(&r);
        c.check(
            &format!("R({d},{lambda}) parameters"),
            p.diameter == d && p.level_of_symmetry == lambda as usize && p.solvable,
            format!("n = {}, D = {}, λ = {}", p.n, p.diameter, p.level_of_symmetry),
        );
    }
    Ok(())
}

fn weak_lower_bound(c: &mut Checks) -> Result<()> {
    for (d, lambda) in [(2, 2), (2, 3), (3, 2)] {
        let g = gen_r(d, lambda)?;
        let t = d + lambda as usize;
        let v = views(&g, t);
        let split = (0..(1usize << lambda)).all(|x| {
            let (a, b) = r_antipodal_pair(d, lambda, x);
            v[t - 1][a] == v[t - 1][b] && v[t][a] != v[t][b]
        });
        c.check(
            &format!("R({d},{lambda}) antipodal views"),
            split,
            format!("equal at depth {}, distinct at {t}", t - 1),
        );
        let run = run_with_true_knowledge(&g, Algorithm::WleDiam)?;
        c.check(
            &format!("R({d},{lambda}) wle-diam calls"),
            run.rounds >= t && verify_outcome(&g, &run).passed(),
            format!("{} COM calls, lower bound {t}", run.rounds),
        );
    }
    let mut e = ViewEngine::new();
    let cases = [
        (SmallCase::SymmetryZero, 3, 0),
        (SmallCase::SymmetryOne, 2, 1),
        (SmallCase::SymmetryOne, 4, 1),
        (SmallCase::DiameterOne, 1, 1),
        (SmallCase::DiameterOne, 1, 3),
    ];
    for (case, d, lambda) in cases {
        let g = gen_small_case(case, d, lambda)?;
        let p = e.profile(&g);
        c.check(
            &format!("small case {case:?} D={d} λ={lambda}"),
            p.diameter == d && p.level_of_symmetry == lambda as usize && p.solvable,
            format!("D = {}, λ = {}", p.diameter, p.level_of_symmetry),
        );
    }
    Ok(())
}

fn impossibility(c: &mut Checks) -> Result<()> {
    for k in 3..=6 {
        let t = gen_t(k)?;
        let m = gen_m(k)?;
        let mut e = ViewEngine::new();
        let (pt, pm) = (e.profile(&t), e.profile(&m));
        c.check(
            &format!("T_{k} and M_{k}"),
            pt.solvable && !pm.solvable && pt.diameter == k + 1 && pm.diameter == k + 1,
            format!("n = {}, D = {} / {}, σ = {} / {}", pt.n, pt.diameter, pm.diameter, pt.sigma, pm.sigma),
        );
        let half = 4 * k + 1;
        let twins = e.stable_partition(&m).classes.iter().all(|cl| cl.len() == 2 && cl[1] == cl[0] + half);
        c.check(&format!("M_{k} twins"), twins, "each node shares its view with its copy");
        // every view of M_k already occurs in T_k, so knowing D alone cannot
        // separate the two
        let depth = 2 * (k + 1) + 2;
        let vt = e.colors_at_depth(&t, depth);
        let vm = e.colors_at_depth(&m, depth);
        c.check(
            &format!("M_{k} views occur in T_{k}"),
            vm.iter().all(|v| vt.contains(v)),
            format!("compared at depth {depth}"),
        );
        let tt = run_with_true_knowledge(&t, Algorithm::SleSizeDiam)?;
        let tm = run_with_true_knowledge(&m, Algorithm::SleSizeDiam)?;
        let impossible = tm.nodes.iter().all(|r| r.decision == Some(Decision::Impossible));
        c.check(
            &format!("sle-size-diam on T_{k} / M_{k}"),
            verify_outcome(&t, &tt).passed() && verify_outcome(&m, &tm).passed() && impossible,
            format!("{} and {} COM calls", tt.rounds, tm.rounds),
        );
    }
    Ok(())
}

fn strong_lower_bound(c: &mut Checks) -> Result<()> {
    for k in 2..=3u32 {
        let g = gen_gk(k)?;
        let gp = gen_gk_prime(k)?;
        let mut e = ViewEngine::new();
        let uniform = (0..=g.node_count()).all(|t| e.partition_at_depth(&g, t).len() == 1);
        c.check(&format!("G_{k} views coincide"), uniform, format!("n = {}", g.node_count()));
        let h = (1usize << k) - 1;
        let reference = e.view_id(&g, 0, h);
        let colors = e.colors_at_depth(&gp, h);
        let dist = gp.bfs_distances(gk_prime_pendant(k));
        let far: Vec<usize> = gp.nodes().filter(|&u| dist[u] >= (1 << k) + 3).collect();
        c.check(
            &format!("G'_{k} far nodes"),
            !far.is_empty() && far.iter().all(|&u| colors[u] == reference) && e.is_solvable(&gp),
            format!("{} nodes look like G_{k} to depth {h}", far.len()),
        );
        for (name, graph) in [(format!("G_{k}"), &g), (format!("G'_{k}"), &gp)] {
            let p = e.profile(graph);
            for a in [Algorithm::SleSize, Algorithm::SleSizeDiam] {
                let t = run_with_true_knowledge(graph, a)?;
                let bound = com_bound(a, p.n, p.diameter, p.stabilization_depth);
                c.check(
                    &format!("{a} on {name}"),
                    verify_outcome(graph, &t).passed() && bound.admits(t.rounds),
                    format!("{} COM calls, bound {bound}", t.rounds),
                );
            }
        }
    }
    Ok(())
}

fn corpus() -> Result<Vec<(String, PortGraph)>> {
    let mut out = vec![
        ("single node".to_string(), PortGraph::single_node()),
        ("P3".to_string(), gen_path(3)?),
        ("C5".to_string(), gen_uniform_cycle(5)?),
        ("tadpole(5)".to_string(), gen_tadpole(5)?),
    ];
    for k in 2..=4 {
        out.push((format!("Q_{k}"), gen_q(k)?));
        out.push((format!("Qtilde_{k}"), gen_qtilde(k)?));
    }
    for k in 3..=4 {
        out.push((format!("T_{k}"), gen_t(k)?));
        out.push((format!("M_{k}"), gen_m(k)?));
    }
    out.push(("R(2,2)".to_string(), gen_r(2, 2)?));
    out.push(("G_2".to_string(), gen_gk(2)?));
    out.push(("G'_2".to_string(), gen_gk_prime(2)?));
    let mut seed = 0u64;
    while out.len() < 80 {
        let n = 2 + (seed as usize * 7) % 15;
        if let Ok(g) = gen_random(n, 0.3, seed) {
            out.push((format!("random n={n} seed={seed}"), g));
        }
        seed += 1;
    }
    Ok(out)
}

fn propositions(c: &mut Checks) -> Result<()> {
    let graphs = corpus()?;
    let mut bad: Vec<&str> = Vec::new();
    for (name, g) in &graphs {
        let mut e = ViewEngine::new();
        let p = e.profile(g);
        let n = p.n;
        let pi = e.stable_partition(g);
        let mut r = e.refinement(g);
        r.extend_to(e.table(), g, n.saturating_sub(1));
        let ok = p.stabilization_depth <= p.diameter + p.level_of_symmetry
            && p.level_of_symmetry <= p.stabilization_depth
            && n.is_multiple_of(p.sigma)
            && pi.classes.iter().all(|cl| cl.len() == p.sigma)
            && p.solvable == (p.sigma == 1)
            && p.solvable == (r.class_count(n.saturating_sub(1)) == n)
            && diameter(g) == p.diameter;
        if !ok {
            bad.push(name);
        }
    }
    c.check(
        "Λ ≤ D+λ, λ ≤ Λ, equal class sizes, solvability",
        bad.is_empty(),
        format!("{} graphs, violations: {bad:?}", graphs.len()),
    );
    Ok(())
}

fn algorithms(c: &mut Checks) -> Result<()> {
    let graphs = corpus()?;
    for a in Algorithm::ALL {
        let mut runs = 0;
        let mut bad: Vec<&str> = Vec::new();
        for (name, g) in &graphs {
            if !a.is_strong() && !ViewEngine::new().is_solvable(g) {
                continue;
            }
            runs += 1;
            let t = run_with_true_knowledge(g, a)?;
            if !verify_outcome(g, &t).passed() {
                bad.push(name);
            }
        }
        c.check(&format!("{a}"), bad.is_empty(), format!("{runs} runs, failures: {bad:?}"));
    }
    Ok(())
}
