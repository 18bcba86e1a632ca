//! The nine acceptance criteria. Each prints one PASS/FAIL line; the test
//! fails if any criterion does.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use queasylab::complexity::{AcceptorTable, GeneratorTable, SearchLimits, UniverseSpec};
use queasylab::machine::ExecutionBudget;
use queasylab::metrics::{
    landscape, ric, spearman, utility_points, write_csv, LandscapeConfig, LandscapeInstance,
    Measured,
};
use queasylab::problems::{
    brute_force_sat, generate::random_mixed_cnf, largest_prime_factor, sat_decide_budgeted,
    FacInstance, Language,
};
use queasylab::pruning::{
    extend_and_prune, AdversaryDecider, CandidateDecider, OracleDecider, PruneConfig,
};
use queasylab::quantum::{amplify, failure_bound, gap_index, CircuitTable, Gate, GateCircuit};
use queasylab::reduction::verify_reduction;
use queasylab::BitString;

/// `ic − cd` and `cd − c` maxima over all 8-bit PARITY strings at length 14.
const C1: i64 = 0;
const C2: i64 = 2;
/// Largest `qcd − cd` or `qic − ic` over 3-bit PARITY strings at length 16.
const C_ENC: i64 = 8;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn inequality_chain() -> Verdict {
    let limits = SearchLimits::new(14, 256, UniverseSpec::SameLength(8));
    let acc = AcceptorTable::build(&Language::Parity, &limits).unwrap();
    let gen = GeneratorTable::build(14, ExecutionBudget::new(256)).unwrap();
    let (mut violations, mut censored) = (0, 0);
    for x in BitString::all_of_length(8) {
        let values = (
            acc.cd_value(&x).unwrap().value(),
            acc.ic_value(&x).unwrap().value(),
            gen.c_value(&x).value(),
        );
        let (Some(cd), Some(ic), Some(c)) = values else {
            censored += 1;
            continue;
        };
        let (cd, ic, c) = (cd as i64, ic as i64, c as i64);
        if ic > cd + C1 || cd > c + C2 {
            violations += 1;
        }
    }
    verdict(
        violations == 0 && censored == 0,
        format!("256 strings, c1={C1}, c2={C2}, {violations} violations, {censored} censored"),
    )
}

fn gap_scan() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    for _ in 0..10_000 {
        let dim = rng.gen_range(1..=32);
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        let mass: f64 = rng.gen_range(0.0..=1.0);
        let total: f64 = v.iter().sum();
        v.iter_mut().for_each(|p| *p *= mass / total);
        v.sort_by(|a, b| b.total_cmp(a));
        if let Ok(g) = gap_index(&v) {
            let next = v.get(g.index).copied().unwrap_or(0.0);
            if v[g.index - 1] - next + 1e-12 >= g.threshold {
                ok += 1;
            }
        }
    }
    verdict(
        ok == 10_000,
        format!("{ok}/10000 vectors have a verified gap"),
    )
}

fn amplification() -> Verdict {
    let h = GateCircuit::measure_all(1, vec![Gate::H(0)]).unwrap();
    let target: BitString = "0".parse().unwrap();
    let mut rates = Vec::new();
    let mut within = true;
    let mut parts = Vec::new();
    for n in [10, 50, 200] {
        let r = amplify(&h, &target, n, 1000, 0).unwrap();
        let bound = failure_bound(0.5, n);
        let rate = r.failure_rate();
        within &= rate <= bound + 3.0 * r.standard_error_at(bound);
        parts.push(format!("n={n} failure={rate:.4} bound={bound:.4}"));
        rates.push(rate);
    }
    let decreasing = rates.windows(2).all(|w| w[1] < w[0]);
    verdict(
        within && decreasing,
        format!(
            "{}; within bound: {within}; strictly decreasing: {decreasing}",
            parts.join(", ")
        ),
    )
}

fn reduction() -> Verdict {
    let prefixes: Vec<BitString> = (0..=3).flat_map(BitString::all_of_length).collect();
    let (mut total, mut bad) = (0, Vec::new());
    for x in 4..512u64 {
        for a in &prefixes {
            total += 1;
            let z = FacInstance::new(x, a.clone()).unwrap();
            if !verify_reduction(&z).is_ok_and(|c| c.matches()) {
                bad.push(z.to_string());
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "{}/{total} pairs match the oracle and round-trip {:?}",
            total - bad.len(),
            bad.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn pruning() -> Verdict {
    let oracle = OracleDecider::default();
    let (mut runs, mut failures, mut over_bound) = (0, Vec::new(), 0);
    for seed in 0..100u64 {
        let adversaries = AdversaryDecider::pool(50, seed);
        let mut pool: Vec<&dyn CandidateDecider> = vec![&oracle];
        pool.extend(adversaries.iter().map(|d| d as &dyn CandidateDecider));
        for x in 2..1000u64 {
            runs += 1;
            let bitlen = 64 - x.leading_zeros() as usize;
            let ok = match extend_and_prune(x, &pool, PruneConfig::default()) {
                Ok(o) => {
                    over_bound += (o.total_runs > o.run_bound) as usize;
                    let lpf = largest_prime_factor(x);
                    o.factor == lpf
                        && o.factor_bits == BitString::minimal_binary(lpf).to_string()
                        && o.rounds <= bitlen
                        && o.records.iter().all(|r| r.pos_after <= o.m)
                }
                Err(_) => false,
            };
            if !ok {
                failures.push((seed, x));
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!(
            "{} failures in {runs} runs {:?}; {over_bound} runs above 4nm^2 decider calls",
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

fn embedding() -> Verdict {
    let universe = UniverseSpec::SameLength(3);
    let limits = SearchLimits::new(16, 256, universe);
    let acc = AcceptorTable::build(&Language::Parity, &limits).unwrap();
    let circuits = CircuitTable::build(&limits).unwrap();
    let qcd = circuits.qcd_values(&universe, 0.1).unwrap();
    let qic = circuits
        .qic_values(&Language::Parity, &universe, 0.1)
        .unwrap();
    let mut violations = 0;
    let mut worst = i64::MIN;
    for (i, x) in universe.members().iter().enumerate() {
        let cd = acc.cd_value(x).unwrap().value();
        let ic = acc.ic_value(x).unwrap().value();
        for (q, c) in [(qcd[i].value(), cd), (qic[i].value(), ic)] {
            match (q, c) {
                (Some(q), Some(c)) => {
                    let d = q as i64 - c as i64;
                    worst = worst.max(d);
                    if d > C_ENC {
                        violations += 1;
                    }
                }
                _ => violations += 1,
            }
        }
    }
    verdict(
        violations == 0,
        format!("8 strings, c_enc={C_ENC}, largest excess {worst}, {violations} violations"),
    )
}

fn queasiness() -> Verdict {
    let cfg = LandscapeConfig::default();
    let corpus = LandscapeInstance::all_strings(1..=4);
    let records = landscape(&corpus, &cfg).unwrap();
    let mut outside = Vec::new();
    let mut uncensored = 0;
    for r in &records {
        if let (Measured::Value(ic), Measured::Value(qic)) = (r.ic, r.qic) {
            uncensored += 1;
            let raw = ric(ic, qic).unwrap().raw;
            if !(0.0..1.0).contains(&raw) {
                outside.push(format!("{}:{raw:.3}", r.instance_id));
            }
        }
    }
    let identities = ric(7, 7).unwrap().raw == 0.0 && ric(10, 2).unwrap().raw == 0.8;
    let csv = |seed| {
        let cfg = LandscapeConfig {
            seed,
            ..LandscapeConfig::default()
        };
        let mut buf = Vec::new();
        write_csv(&landscape(&corpus, &cfg).unwrap(), cfg.margin, &mut buf).unwrap();
        buf
    };
    let identical = csv(5) == csv(5);
    verdict(
        outside.is_empty() && identities && identical,
        format!(
            "{} of {uncensored} uncensored records have ric outside [0,1) {:?}; identities: {identities}; CSV identical: {identical}",
            outside.len(),
            outside.iter().take(6).collect::<Vec<_>>()
        ),
    )
}

fn solver_consistency() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut contradictions = 0;
    for _ in 0..1000 {
        let vars = rng.gen_range(1..=16);
        let clauses = rng.gen_range(1..=5 * vars as usize);
        let f = random_mixed_cnf(&mut rng, vars, clauses, 4);
        let truth = brute_force_sat(&f);
        for budget in [1, 10, 100, 1_000_000] {
            if !sat_decide_budgeted(&f, budget).consistent_with(truth) {
                contradictions += 1;
            }
        }
    }
    verdict(
        contradictions == 0,
        format!("1000 formulas x 4 budgets, {contradictions} contradictions"),
    )
}

fn utility_direction() -> Verdict {
    let mut d = Vec::new();
    let mut u = Vec::new();
    for lang in [Language::Parity, Language::Majority, Language::AllOnes] {
        for n in 1..=8 {
            for p in utility_points(&lang, n, 14, 256).unwrap() {
                d.push(p.d as f64);
                u.push(p.log2_utility());
            }
        }
    }
    let rho = spearman(&d, &u);
    verdict(
        rho.is_some_and(|r| r >= 0.0),
        format!("{} points, spearman {rho:?}", d.len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("inequality chain", inequality_chain),
        ("gap index", gap_scan),
        ("amplification", amplification),
        ("reduction correctness", reduction),
        ("extend-and-prune", pruning),
        ("quantum/classical embedding", embedding),
        ("queasiness metrics", queasiness),
        ("budgeted solver consistency", solver_consistency),
        ("utility direction", utility_direction),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!(
            "{tag} {}: {name} ({:.1}s) {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            v.detail
        );
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
