//! Command-line front-end for the boundary-divisor calculus. Every command
//! is deterministic: identical inputs give byte-identical output regardless
//! of thread count (set RAYON_NUM_THREADS to control parallelism).

use clap::{Args, Parser, Subcommand};
use cuspidal_core::birational::{classify_chains_by_k, enumerate_contractible_chains};
use cuspidal_core::graph::{parse_graph, serialize_graph, weights_human, DivisorGraph};
use cuspidal_core::hn::{
    build_exceptional_graph, chain_weights_printed, cusp_invariants, CharPairSeq,
};
use cuspidal_core::peeling::{compute_peeling, inequality_suite, MmpParams};
use cuspidal_core::scenarios::{run_all, run_scenario, ScenarioResult};
use cuspidal_core::search::{
    enumerate, results_to_string, CandidateRecord, Record, Results,
};
use cuspidal_core::twig::{bark, discriminant, inductance, total_inductance, OrderedChain};
use cuspidal_core::{graph, rat_to_string, Error};
use std::collections::BTreeSet;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cuspidal", version, about = "Exact dual-graph calculus for cuspidal plane curve boundaries")]
struct Cli {
    /// Emit machine-readable JSON instead of the human form.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a cusp from its characteristic pairs: graph, multiplicity
    /// sequence, M and I.
    Resolve { pairs: String },
    /// Discriminant d(T) of a graph or of the subdivisor given by --sub.
    Disc {
        graph: String,
        /// Comma-separated component ids.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Total inductance of a boundary graph with the per-twig breakdown.
    Ind { graph: String },
    /// Bark of a boundary graph: coefficients, square, inductance.
    Bark { graph: String },
    /// Chain families with prescribed K.Q, or the brute-force enumeration.
    Chains(ChainsArgs),
    /// Peeling data (Delta, Upsilon, D-flat) of a boundary graph.
    Peel { graph: String },
    /// Evaluate the named identities and inequalities on a parameter file.
    Check {
        #[arg(long)]
        params: String,
    },
    /// Enumerate cusp configurations and report every candidate with its
    /// filter verdicts (results-file format on stdout).
    Search {
        #[arg(long)]
        cusps: usize,
        #[arg(long)]
        bound: usize,
        #[arg(long, default_value_t = 3)]
        p2: i64,
    },
    /// Run one named scenario, or all of them.
    Scenario {
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Canonicalize a graph (idempotent formatting).
    Fmt { graph: String },
}

#[derive(Args)]
struct ChainsArgs {
    #[arg(long, allow_hyphen_values = true)]
    kq: Option<i64>,
    #[arg(long, default_value_t = 5)]
    kmax: usize,
    #[arg(long)]
    enumerate: bool,
    #[arg(long, default_value_t = 10)]
    maxlen: usize,
    #[arg(long, default_value_t = 6)]
    maxweight: i64,
}

fn read_graph(arg: &str) -> Result<DivisorGraph, Error> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)?
    };
    parse_graph(&text)
}

fn parse_ids(s: &str) -> Result<BTreeSet<u32>, Error> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Format(format!("bad component id {t:?}")))
        })
        .collect()
}

fn mult_seq_human(mu: &[u64]) -> String {
    let strs: Vec<String> = mu.iter().map(|m| m.to_string()).collect();
    format!("({})", strs.join(","))
}

fn run_resolve(pairs: &str, json: bool) -> Result<(), Error> {
    let seq = CharPairSeq::parse(pairs)?;
    let inv = cusp_invariants(&seq)?;
    let res = build_exceptional_graph(&seq)?;
    let chain = chain_weights_printed(&res.graph).ok();
    if json {
        let doc = serde_json::json!({
            "pairs": seq.to_string(),
            "chain": chain,
            "graph": serde_json::from_str::<serde_json::Value>(&serialize_graph(&res.graph))?,
            "mult_seq": inv.mult_seq,
            "M": inv.m,
            "I": inv.i,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        println!("pairs: {seq}");
        match &chain {
            Some(w) => println!("chain: {}", weights_human(w)),
            None => println!("graph:\n{}", serialize_graph(&res.graph)),
        }
        println!("multiplicity sequence: {}", mult_seq_human(&inv.mult_seq));
        println!("M = {}", inv.m);
        println!("I = {}", inv.i);
    }
    Ok(())
}

fn run_disc(graph: &str, sub: Option<&str>, json: bool) -> Result<(), Error> {
    let g = read_graph(graph)?;
    let ids: BTreeSet<u32> = match sub {
        Some(s) => parse_ids(s)?,
        None => g.ids().collect(),
    };
    let d = discriminant(&g, &ids)?;
    if json {
        println!("{{\"disc\": \"{d}\"}}");
    } else {
        println!("d(T) = {d}");
    }
    Ok(())
}

fn run_ind(graph: &str, json: bool) -> Result<(), Error> {
    let g = read_graph(graph)?;
    let total = total_inductance(&g)?;
    let mut rows = Vec::new();
    for ids in graph::maximal_twigs(&g)? {
        let chain = OrderedChain::new(&g, ids.clone())?;
        let ind = inductance(&g, &chain)?;
        rows.push((ids, ind));
    }
    if json {
        let doc = serde_json::json!({
            "ind": rat_to_string(&total),
            "twigs": rows
                .iter()
                .map(|(ids, ind)| serde_json::json!({"ids": ids, "ind": rat_to_string(ind)}))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for (ids, ind) in &rows {
            let ws: Vec<i64> = ids
                .iter()
                .map(|id| -g.component(*id).unwrap().self_int)
                .collect();
            println!("twig {} ind = {}", weights_human(&ws), rat_to_string(ind));
        }
        println!("ind(D) = {}", rat_to_string(&total));
    }
    Ok(())
}

fn run_bark(graph: &str, json: bool) -> Result<(), Error> {
    let g = read_graph(graph)?;
    let b = bark(&g)?;
    let sq = graph::intersection_number(&g, &b, &b)?;
    let total = total_inductance(&g)?;
    if json {
        let doc = serde_json::json!({
            "coefficients": b
                .coeffs
                .iter()
                .map(|(id, c)| serde_json::json!({"id": id, "coeff": rat_to_string(c)}))
                .collect::<Vec<_>>(),
            "square": rat_to_string(&sq),
            "ind": rat_to_string(&total),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for (id, c) in &b.coeffs {
            println!("Bk[{id}] = {}", rat_to_string(c));
        }
        println!("(Bk D)^2 = {}", rat_to_string(&sq));
        println!("-ind(D)  = -{}", rat_to_string(&total));
    }
    Ok(())
}

fn run_chains(args: &ChainsArgs, json: bool) -> Result<(), Error> {
    if args.enumerate {
        let reports = enumerate_contractible_chains(args.maxlen, args.maxweight)?;
        if json {
            let doc: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "weights": r.weights,
                        "family_first": r.family.first,
                        "family_second": r.family.second,
                        "only_via_empty_convention": r.family.only_via_empty_convention,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        } else {
            for r in &reports {
                let fam = match (r.family.first, r.family.second) {
                    (true, true) => "families 1+2",
                    (true, false) => "family 1",
                    (false, true) => "family 2",
                    (false, false) => "UNMATCHED",
                };
                let conv = if r.family.only_via_empty_convention {
                    " (via [3,(2)_-1] = empty)"
                } else {
                    ""
                };
                println!("{} {}{}", weights_human(&r.weights), fam, conv);
            }
            println!("total: {}", reports.len());
        }
        return Ok(());
    }
    let kq = args.kq.ok_or(Error::MissingField("kq"))?;
    let chains = classify_chains_by_k(kq, args.kmax)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&chains).expect("json"));
    } else {
        for chain in &chains {
            println!("{}", weights_human(chain));
        }
    }
    Ok(())
}

fn run_peel(graph: &str, json: bool) -> Result<(), Error> {
    let g = read_graph(graph)?;
    let peel = compute_peeling(&g)?;
    if json {
        let doc = serde_json::json!({
            "delta": peel.delta,
            "upsilon": peel.upsilon.iter().collect::<Vec<_>>(),
            "delta_plus": peel.delta_plus.iter().collect::<Vec<_>>(),
            "delta_minus": peel.delta_minus.iter().collect::<Vec<_>>(),
            "d_flat": peel
                .d_flat
                .coeffs
                .iter()
                .map(|(id, c)| serde_json::json!({"id": id, "coeff": rat_to_string(c)}))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        println!("Delta twigs: {:?}", peel.delta);
        println!("Upsilon: {:?}", peel.upsilon.iter().collect::<Vec<_>>());
        println!("Delta+: {:?}", peel.delta_plus.iter().collect::<Vec<_>>());
        println!("Delta-: {:?}", peel.delta_minus.iter().collect::<Vec<_>>());
        for (id, c) in &peel.d_flat.coeffs {
            println!("D_flat[{id}] = {}", rat_to_string(c));
        }
    }
    Ok(())
}

fn run_check(path: &str, json: bool) -> Result<(), Error> {
    let text = std::fs::read_to_string(path)?;
    let params: MmpParams = serde_json::from_str(&text)?;
    let verdicts = inequality_suite(&params)?;
    if json {
        let doc: Vec<serde_json::Value> = verdicts
            .iter()
            .map(|v| {
                serde_json::json!({
                    "name": v.name,
                    "lhs": rat_to_string(&v.lhs),
                    "rhs": rat_to_string(&v.rhs),
                    "slack": rat_to_string(&v.slack),
                    "satisfied": v.satisfied,
                    "equality": v.is_equality,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        for v in &verdicts {
            let rel = if v.is_equality { "=" } else { "<=" };
            let mark = if v.satisfied { "ok" } else { "FAIL" };
            println!(
                "{:<16} {} {} {} (slack {}) {}",
                v.name,
                rat_to_string(&v.lhs),
                rel,
                rat_to_string(&v.rhs),
                rat_to_string(&v.slack),
                mark
            );
        }
    }
    Ok(())
}

fn run_search(cusps: usize, bound: usize, p2: i64) -> Result<(), Error> {
    let candidates = enumerate(cusps, bound, p2)?;
    let results = Results {
        records: candidates
            .iter()
            .map(|c| Record::Candidate(CandidateRecord::from_candidate(c)))
            .collect(),
    };
    println!("{}", results_to_string(&results));
    Ok(())
}

fn scenario_human(res: &ScenarioResult) -> String {
    let mut out = format!(
        "{}: {} solution(s) over ({}) [{}]\n",
        res.name,
        res.solutions.len(),
        res.coords.join(","),
        if res.passed { "PASS" } else { "FAIL" }
    );
    for s in &res.solutions {
        out.push_str(&format!("  {s:?}\n"));
    }
    out.push_str(&format!("  expected: {}\n", res.expected));
    for n in &res.notes {
        out.push_str(&format!("  note: {n}\n"));
    }
    out
}

fn run_scenarios(name: Option<&str>, all: bool, json: bool) -> Result<bool, Error> {
    let results: Vec<ScenarioResult> = if all {
        run_all()
    } else {
        let name = name.ok_or(Error::MissingField("scenario name"))?;
        vec![run_scenario(name)?]
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&results).expect("json"));
    } else {
        for r in &results {
            print!("{}", scenario_human(r));
        }
    }
    Ok(results.iter().all(|r| r.passed))
}

fn run_fmt(graph: &str) -> Result<(), Error> {
    let g = read_graph(graph)?;
    println!("{}", serialize_graph(&g));
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Resolve { pairs } => run_resolve(pairs, cli.json)?,
        Command::Disc { graph, sub } => run_disc(graph, sub.as_deref(), cli.json)?,
        Command::Ind { graph } => run_ind(graph, cli.json)?,
        Command::Bark { graph } => run_bark(graph, cli.json)?,
        Command::Chains(args) => run_chains(args, cli.json)?,
        Command::Peel { graph } => run_peel(graph, cli.json)?,
        Command::Check { params } => run_check(params, cli.json)?,
        Command::Search { cusps, bound, p2 } => run_search(*cusps, *bound, *p2)?,
        Command::Scenario { name, all } => {
            let ok = run_scenarios(name.as_deref(), *all, cli.json)?;
            if !ok {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Fmt { graph } => run_fmt(graph)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
