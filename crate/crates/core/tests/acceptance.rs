//! Acceptance checks, one line per criterion. Runs as a plain binary so the
//! lines show up under `cargo test`.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use softnet::assembly::{level_bound, minimize_level, minimize_reticulation, prefilter, MinimizeReport, Mode};
use softnet::generators::{enumerate_level_generators, enumerate_reticulation_generators};
use softnet::network::softwired_bound;
use softnet::oracle::{oracle_min_level, oracle_min_reticulation, oracle_simple_level, OracleConfig};
use softnet::random::{random_instance, RandomParams};
use softnet::solver::SolverConfig;
use softnet::{ClusterSet, TaxonSet, TaxonUniverse};

const NINE_TAXA: &str = "a,b,f,g,i\na,b,c,f,g,i\na,b,f,i\nb,c,f,i\nc,d,e,h\nd,e,h\n\
b,c,f,h,i\nb,c,d,f,h,i\nb,c,i\na,g\nb,i\nc,i\nd,h\n";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn generator_counts() -> Outcome {
    let t = Instant::now();
    let counts = [
        enumerate_level_generators(1).unwrap().len(),
        enumerate_level_generators(2).unwrap().len(),
        enumerate_reticulation_generators(1).unwrap().len(),
        enumerate_reticulation_generators(2).unwrap().len(),
    ];
    let elapsed = t.elapsed();
    outcome(
        counts == [1, 4, 1, 7] && elapsed < Duration::from_secs(1),
        format!("level 1/2: {}/{}, reticulation 1/2: {}/{} in {}", counts[0], counts[1], counts[2], counts[3], secs(elapsed)),
    )
}

fn size_bounds() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    for k in 1..=3 {
        for g in enumerate_level_generators(k).unwrap() {
            checked += 1;
            if g.node_count() > 3 * k - 1 || g.edges().len() > 4 * k - 2 {
                violations += 1;
            }
        }
        for g in enumerate_reticulation_generators(k).unwrap() {
            checked += 1;
            if g.node_count() > 3 * k || g.edges().len() > 4 * k - 1 || g.sides().len() > 7 * k - 1 {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{checked} generators, {violations} violations"))
}

fn nine_taxon_instance() -> Outcome {
    let cs = ClusterSet::parse(NINE_TAXA).unwrap();
    let t = Instant::now();
    let report = minimize_level(&cs, &SolverConfig::default()).unwrap();
    let solve_time = t.elapsed();
    let witness_ok = report
        .witness
        .as_ref()
        .is_some_and(|w| w.represents(&cs) && w.level() == 2 && w.is_binary());
    let t = Instant::now();
    let oracle = oracle_simple_level(&cs, 1, &OracleConfig::default()).unwrap();
    let oracle_time = t.elapsed();
    let pass = report.parameter == Some(2)
        && report.is_exact()
        && witness_ok
        && oracle.minimum.is_none()
        && solve_time < Duration::from_secs(60)
        && oracle_time < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "solver level {:?} in {}, oracle refutes level 1 over {} completions in {}",
            report.parameter,
            secs(solve_time),
            oracle.enumerated,
            secs(oracle_time)
        ),
    )
}

/// Answers recorded for the inequality check.
struct Answers {
    level: Option<usize>,
    reticulation: Option<usize>,
}

fn oracle_equivalence(answers: &mut Vec<Answers>) -> Outcome {
    let config = SolverConfig::default();
    let oracle = OracleConfig::default();
    let t = Instant::now();
    let (mut instances, mut disagreements, mut nontrivial) = (0, 0, 0);
    for seed in 0..240u64 {
        let n = 3 + (seed as usize % 4);
        let (_, cs) = random_instance(&RandomParams::new(n, 2), seed).unwrap();
        let l = minimize_level(&cs, &config).unwrap();
        let r = minimize_reticulation(&cs, &config).unwrap();
        let ol = oracle_min_level(&cs, 2, &oracle).unwrap();
        let or = oracle_min_reticulation(&cs, 2, &oracle).unwrap();
        instances += 1;
        if l.parameter.unwrap_or(0) > 0 {
            nontrivial += 1;
        }
        if l.parameter != ol.minimum || r.parameter != or.minimum || !l.is_exact() || !r.is_exact() {
            disagreements += 1;
            eprintln!("  disagreement at seed {seed}: level {:?}/{:?}, reticulation {:?}/{:?}", l.parameter, ol.minimum, r.parameter, or.minimum);
        }
        answers.push(Answers {
            level: l.parameter,
            reticulation: r.parameter,
        });
    }
    let elapsed = t.elapsed();
    outcome(
        disagreements == 0 && instances >= 200 && elapsed < Duration::from_secs(900),
        format!("{instances} instances ({nontrivial} with reticulations), {disagreements} disagreements in {}", secs(elapsed)),
    )
}

fn round_trips(answers: &mut Vec<Answers>, bound_violations: &mut usize) -> Outcome {
    let config = SolverConfig::default();
    let t = Instant::now();
    let (mut instances, mut failures) = (0, 0);
    for seed in 0..220u64 {
        let n = 4 + (seed as usize % 5);
        let (net, cs) = random_instance(&RandomParams::new(n, 2), 10_000 + seed).unwrap();
        if cs.len() as u128 > softwired_bound(net.reticulation_number(), n) {
            *bound_violations += 1;
        }
        let l = minimize_level(&cs, &config).unwrap();
        let r = minimize_reticulation(&cs, &config).unwrap();
        instances += 1;
        let ok = |rep: &MinimizeReport, limit: usize, measure: fn(&softnet::Network) -> usize| {
            rep.witness
                .as_ref()
                .is_some_and(|w| w.represents(&cs) && w.is_binary() && measure(w) <= limit)
        };
        let level_ok = ok(&l, net.level(), softnet::Network::level);
        let ret_ok = ok(&r, net.reticulation_number(), softnet::Network::reticulation_number);
        if !level_ok || !ret_ok {
            failures += 1;
            eprintln!("  round trip failed at seed {seed}: {}", net.to_enewick());
        }
        answers.push(Answers {
            level: l.parameter,
            reticulation: r.parameter,
        });
    }
    outcome(
        failures == 0 && instances >= 200,
        format!("{instances} networks on 4 to 8 taxa, {failures} failures in {}", secs(t.elapsed())),
    )
}

fn inequality(answers: &[Answers]) -> Outcome {
    let violations = answers
        .iter()
        .filter(|a| match (a.level, a.reticulation) {
            (Some(l), Some(r)) => r < l,
            _ => true,
        })
        .count();
    outcome(violations == 0, format!("{} instances, {violations} violations", answers.len()))
}

/// Maximal ST-sets by trying every subset, on bitmasks.
fn brute_st_partition(n: usize, clusters: &[u32]) -> Vec<u32> {
    let all = (1u32 << n) - 1;
    let compatible = |a: u32, b: u32| a & b == 0 || a & b == a || a & b == b;
    let pairwise = clusters
        .iter()
        .all(|&a| clusters.iter().all(|&b| compatible(a, b)));
    if pairwise {
        return vec![all];
    }
    let is_st = |s: u32| {
        if !clusters.iter().all(|&c| compatible(c, s)) {
            return false;
        }
        let restricted: Vec<u32> = clusters.iter().map(|&c| c & s).filter(|&c| c != 0).collect();
        restricted
            .iter()
            .all(|&a| restricted.iter().all(|&b| compatible(a, b)))
    };
    let st: Vec<u32> = (1..all).filter(|&s| is_st(s)).collect();
    let mut maximal: Vec<u32> = st
        .iter()
        .copied()
        .filter(|&s| !st.iter().any(|&t| t != s && t & s == s))
        .collect();
    maximal.sort_unstable();
    maximal
}

fn to_mask(s: &TaxonSet) -> u32 {
    s.iter().fold(0, |m, t| m | 1 << t)
}

fn st_machinery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut mismatches = 0;
    for i in 0..500u64 {
        let n = 3 + (i as usize % 5);
        let cs = if i % 2 == 0 {
            random_instance(&RandomParams::new(n, 2), 20_000 + i).unwrap().1
        } else {
            let names: Vec<String> = (0..n).map(|t| format!("x{t}")).collect();
            let universe = Arc::new(TaxonUniverse::new(names).unwrap());
            let mut clusters: Vec<TaxonSet> = (0..n).map(TaxonSet::singleton).collect();
            for _ in 0..rng.gen_range(1..=n) {
                let mask: u32 = rng.gen_range(1..(1u32 << n) - 1);
                clusters.push((0..n).filter(|t| mask >> t & 1 == 1).collect());
            }
            ClusterSet::new(universe, clusters).unwrap()
        };
        let masks: Vec<u32> = cs.clusters().iter().map(to_mask).collect();
        let mut ours: Vec<u32> = cs.maximal_st_sets().blocks.iter().map(to_mask).collect();
        ours.sort_unstable();
        if ours != brute_st_partition(cs.n(), &masks) {
            mismatches += 1;
            eprintln!("  ST mismatch on {:?}", cs);
        }
    }
    let example = ClusterSet::parse("a,b\nb,c\na,b,c,d\nd,e\n").unwrap();
    let example_ok = example.is_st_collapsed() && !example.is_separating();
    outcome(
        mismatches == 0 && example_ok,
        format!("500 cluster sets, {mismatches} mismatches; four-cluster example collapsed and not separating: {example_ok}"),
    )
}

/// The first `count` subsets of `0..n` (singletons first, then by size).
fn dense_clusters(n: usize, count: usize) -> ClusterSet {
    let names: Vec<String> = (0..n).map(|t| format!("x{t}")).collect();
    let universe = Arc::new(TaxonUniverse::new(names).unwrap());
    let mut masks: Vec<u32> = (1..(1u32 << n) - 1).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let clusters = masks
        .into_iter()
        .take(count)
        .map(|m| (0..n).filter(|t| m >> t & 1 == 1).collect())
        .collect();
    ClusterSet::new(universe, clusters).unwrap()
}

fn cluster_bounds(bound_violations: usize) -> Outcome {
    let mut wrong = Vec::new();
    for (mode, k, n) in [(Mode::Level, 0, 10), (Mode::Level, 1, 11), (Mode::Reticulation, 1, 5), (Mode::Reticulation, 2, 6)] {
        let bound = match mode {
            Mode::Level => level_bound(k, n),
            Mode::Reticulation => softwired_bound(k, n),
        } as usize;
        let at = dense_clusters(n, bound);
        let over = dense_clusters(n, bound + 1);
        if at.len() != bound || !prefilter(&at, k, mode) || prefilter(&over, k, mode) {
            wrong.push(format!("{mode:?} {k} on {n}"));
        }
    }
    outcome(
        bound_violations == 0 && wrong.is_empty(),
        format!("{bound_violations} networks over their cluster bound; prefilter boundary errors: {wrong:?}"),
    )
}

/// Witnesses and reports for a fixed corpus, as one string.
fn corpus_transcript(jobs: usize) -> String {
    let config = SolverConfig {
        jobs,
        ..SolverConfig::default()
    };
    let mut out = String::new();
    for seed in 0..40u64 {
        let (net, cs) = random_instance(&RandomParams::new(7, 2), 30_000 + seed).unwrap();
        out.push_str(&net.to_enewick());
        for report in [minimize_level(&cs, &config).unwrap(), minimize_reticulation(&cs, &config).unwrap()] {
            out.push_str(&serde_json::to_string(&report).unwrap());
            if let Some(w) = &report.witness {
                out.push_str(&w.to_enewick());
                out.push_str(&w.to_json());
            }
        }
        out.push('\n');
    }
    out
}

fn determinism() -> Outcome {
    let a = corpus_transcript(1);
    let b = corpus_transcript(1);
    let c = corpus_transcript(2);
    outcome(a == b && a == c, format!("40 instances, {} bytes, repeat identical: {}, two jobs identical: {}", a.len(), a == b, a == c))
}

fn main() -> ExitCode {
    let mut answers = Vec::new();
    let mut bound_violations = 0;
    let mut results = Vec::new();
    let mut record = |i: usize, name: &str, o: Outcome| {
        println!("criterion {i} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    record(1, "generator counts", generator_counts());
    record(2, "generator size bounds", size_bounds());
    record(3, "nine-taxon instance", nine_taxon_instance());
    record(4, "oracle equivalence", oracle_equivalence(&mut answers));
    record(5, "round trips", round_trips(&mut answers, &mut bound_violations));
    record(6, "reticulation at least level", inequality(&answers));
    record(7, "ST-sets", st_machinery());
    record(8, "cluster count bounds", cluster_bounds(bound_violations));
    record(9, "determinism", determinism());
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
