//! Graph fixtures shared by the benchmarks.

use anonle::constructions::{gen_gk, gen_gk_prime, gen_q, gen_r, gen_random, gen_t};
use anonle::PortGraph;

/// Named solvable graphs of growing size.
pub fn fixtures() -> Vec<(String, PortGraph)> {
    let mut out = Vec::new();
    for k in 3..=5 {
        out.push((format!("Q_{k}"), gen_q(k).unwrap()));
    }
    out.push(("R(2,3)".into(), gen_r(2, 3).unwrap()));
    out.push(("T_6".into(), gen_t(6).unwrap()));
    out.push(("G'_3".into(), gen_gk_prime(3).unwrap()));
    out.push(("G_4".into(), gen_gk(4).unwrap()));
    for n in [50, 200] {
        out.push((format!("random_{n}"), gen_random(n, 0.05, 1).unwrap()));
    }
    out
}
