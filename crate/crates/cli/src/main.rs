use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use anonle::constructions::*;
use anonle::graph::{parse_graph, serialize_graph, PortGraph};
use anonle::sim::{Decision, Knowledge, MessageMode, RunOptions};
use anonle::{run_election, verify_outcome, Algorithm, ViewEngine};

mod suites;

#[derive(Parser)]
#[command(name = "anonle", version, about = "Leader election in anonymous port-labeled networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph of a named family in anongraph format.
    ///
    /// Families: Q k | Qtilde k | R D lambda | T k | M k | G k | Gprime k |
    /// small case D lambda | random n density | cycle n | path n | tadpole len
    Generate {
        family: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; the graph goes to stdout when omitted.
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Print n, D, λ, Λ, σ, |Π| and solvability of a graph file.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        csv: bool,
    },
    /// Run an election, verify it and write the transcript as CSV.
    Elect {
        file: PathBuf,
        /// wle-diam, wle-size, sle-size or sle-size-diam
        algorithm: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "D")]
        d: Option<usize>,
        #[arg(long)]
        round_cap: Option<usize>,
        /// Send canonical byte encodings instead of view references.
        #[arg(long)]
        explicit: bool,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Run a named check suite and report each check.
    Verify {
        /// lemma-clique, lemma-ring, thm-weak-lb, thm-impossibility,
        /// thm-strong-lb, propositions or algorithms
        suite: String,
    },
    /// Print a CSV table of COM calls per family, size and algorithm.
    Bench {
        #[arg(long, default_value_t = 4)]
        max_k: u32,
    },
}

fn param<T: std::str::FromStr>(params: &[String], i: usize, name: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = params.get(i).ok_or_else(|| anyhow!("missing parameter {name}"))?;
    raw.parse().map_err(|e| anyhow!("bad {name} {raw:?}: {e}"))
}

fn generate(family: &str, params: &[String], seed: u64) -> Result<PortGraph> {
    let expect = |count: usize| -> Result<()> {
        if params.len() != count {
            bail!("{family} takes {count} parameter(s), got {}", params.len());
        }
        Ok(())
    };
    let g = match family {
        "Q" => {
            expect(1)?;
            gen_q(param(params, 0, "k")?)?
        }
        "Qtilde" => {
            expect(1)?;
            gen_qtilde(param(params, 0, "k")?)?
        }
        "R" => {
            expect(2)?;
            gen_r(param(params, 0, "D")?, param(params, 1, "lambda")?)?
        }
        "T" => {
            expect(1)?;
            gen_t(param(params, 0, "k")?)?
        }
        "M" => {
            expect(1)?;
            gen_m(param(params, 0, "k")?)?
        }
        "G" => {
            expect(1)?;
            gen_gk(param(params, 0, "k")?)?
        }
        "Gprime" => {
            expect(1)?;
            gen_gk_prime(param(params, 0, "k")?)?
        }
        "small" => {
            expect(3)?;
            let case: SmallCase = params[0].parse().map_err(|e: String| anyhow!(e))?;
            gen_small_case(case, param(params, 1, "D")?, param(params, 2, "lambda")?)?
        }
        "random" => {
            expect(2)?;
            gen_random(param(params, 0, "n")?, param(params, 1, "density")?, seed)?
        }
        "cycle" => {
            expect(1)?;
            gen_uniform_cycle(param(params, 0, "n")?)?
        }
        "path" => {
            expect(1)?;
            gen_path(param(params, 0, "n")?)?
        }
        "tadpole" => {
            expect(1)?;
            gen_tadpole(param(params, 0, "cycle length")?)?
        }
        _ => bail!("unknown family {family:?}"),
    };
    Ok(g)
}

fn read_graph(path: &Path) -> Result<PortGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn analyze(path: &Path, csv: bool) -> Result<()> {
    let g = read_graph(path)?;
    let p = ViewEngine::new().profile(&g);
    if csv {
        println!("n,D,lambda,Lambda,sigma,classes,solvable");
        println!(
            "{},{},{},{},{},{},{}",
            p.n, p.diameter, p.level_of_symmetry, p.stabilization_depth, p.sigma, p.classes, p.solvable
        );
    } else {
        println!("n = {}", p.n);
        println!("D = {}", p.diameter);
        println!("λ = {}", p.level_of_symmetry);
        println!("Λ = {}", p.stabilization_depth);
        println!("σ = {}", p.sigma);
        println!("|Π| = {}", p.classes);
        println!("solvable = {}", p.solvable);
    }
    Ok(())
}

struct ElectArgs {
    algorithm: String,
    n: Option<usize>,
    d: Option<usize>,
    round_cap: Option<usize>,
    explicit: bool,
}

fn elect(path: &Path, args: ElectArgs, out: &Path) -> Result<bool> {
    let g = read_graph(path)?;
    let algorithm: Algorithm = args.algorithm.parse()?;
    if algorithm.needs_n() && args.n.is_none() {
        bail!("{algorithm} needs --n");
    }
    if algorithm.needs_d() && args.d.is_none() {
        bail!("{algorithm} needs --D");
    }
    let knowledge = Knowledge { n: args.n, d: args.d };
    knowledge.check(&g)?;
    let mode = if args.explicit { MessageMode::Explicit } else { MessageMode::Interned };
    let options = RunOptions { round_cap: args.round_cap, mode };
    let transcript = run_election(&g, algorithm, knowledge, options)?;
    let file = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    transcript.write_csv(file)?;

    let leader = transcript.nodes.iter().position(|r| r.decision == Some(Decision::Leader));
    let all_impossible = transcript.nodes.iter().all(|r| r.decision == Some(Decision::Impossible));
    let verdict = match (leader, all_impossible) {
        (_, true) => "LE impossible".to_string(),
        (Some(u), _) => format!("leader elected: node {u}"),
        (None, _) => "no leader".to_string(),
    };
    println!("{verdict}, {} COM calls ({})", transcript.rounds, transcript.status);
    let report = verify_outcome(&g, &transcript);
    if !report.passed() {
        eprint!("verification failed:\n{report}");
    }
    Ok(report.passed())
}

fn bench(max_k: u32) -> Result<()> {
    let mut graphs: Vec<(String, PortGraph)> = Vec::new();
    for k in 2..=max_k.min(5) {
        graphs.push((format!("Q_{k}"), gen_q(k)?));
        graphs.push((format!("G_{k}"), gen_gk(k)?));
        graphs.push((format!("G'_{k}"), gen_gk_prime(k)?));
    }
    for k in 3..=max_k.max(3) as usize {
        graphs.push((format!("T_{k}"), gen_t(k)?));
        graphs.push((format!("M_{k}"), gen_m(k)?));
    }
    for lambda in 2..=max_k.clamp(2, 3) {
        graphs.push((format!("R(2,{lambda})"), gen_r(2, lambda)?));
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "graph,n,D,lambda,Lambda,algorithm,com_calls,bound")?;
    for (name, g) in &graphs {
        let p = ViewEngine::new().profile(g);
        for a in Algorithm::ALL {
            if !a.is_strong() && !p.solvable {
                continue;
            }
            let t = run_election(g, a, a.knowledge_for(g), RunOptions::default())?;
            let bound = anonle::election::com_bound(a, p.n, p.diameter, p.stabilization_depth);
            writeln!(
                out,
                "{name},{},{},{},{},{a},{},{bound}",
                p.n, p.diameter, p.level_of_symmetry, p.stabilization_depth, t.rounds
            )?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate { family, params, seed, out } => {
            let g = generate(&family, &params, seed)?;
            let text = serialize_graph(&g);
            match out {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                    println!("n = {}, edges = {}", g.node_count(), g.edge_count());
                }
                None => {
                    print!("{text}");
                    eprintln!("n = {}, edges = {}", g.node_count(), g.edge_count());
                }
            }
            Ok(true)
        }
        Command::Analyze { file, csv } => analyze(&file, csv).map(|_| true),
        Command::Elect { file, algorithm, n, d, round_cap, explicit, out } => {
            elect(&file, ElectArgs { algorithm, n, d, round_cap, explicit }, &out)
        }
        Command::Verify { suite } => suites::run(&suite),
        Command::Bench { max_k } => bench(max_k).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
