//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use envyfree::bigraph::{is_saturating, maximum_matching, minimal_hall_violator};
use envyfree::oracle::{brute_force_hall_check, enumerate_ef_assignments, is_pareto_among_ef};
use envyfree::randmodel::{
    binomial_std_error, estimate_existence_probability, mechanism_failure_bound,
    profile_with_ties_from_rng, three_n_log_n, DEFAULT_SEED,
};
use envyfree::solver::{envy_free_assignment, verify_envy_free, Assignment, SolveReport};
use envyfree::{parse_profile, PreferenceProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

/// Reference run for n = 20, m = 180, made with a seed the suite never
/// uses otherwise: every trial admitted an envy-free assignment, and the
/// threshold mechanism completed in 10249 of them.
const PILOT_SEED: u64 = 1;
const PILOT_TRIALS: u64 = 20_000;
const PILOT_SUCCESSES: u64 = 20_000;
const PILOT_MECHANISM_SUCCESSES: u64 = 10_249;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

/// Solver result checked against the exhaustive oracle.
fn agrees_with_oracle(p: &PreferenceProfile, require_pareto: bool) -> Result<bool, String> {
    let sol = envy_free_assignment(p).map_err(|e| e.to_string())?;
    let all = enumerate_ef_assignments(p).map_err(|e| e.to_string())?;
    ensure(sol.is_found() == !all.is_empty(), || {
        format!("existence mismatch (solver {}, oracle {}) on\n{p}", sol.is_found(), all.len())
    })?;
    if let Some(a) = &sol.assignment {
        ensure(verify_envy_free(p, a), || format!("returned assignment has envy on\n{p}"))?;
        ensure(all.contains(a), || format!("assignment not in oracle list on\n{p}"))?;
        if require_pareto {
            ensure(is_pareto_among_ef(p, a).map_err(|e| e.to_string())?, || {
                format!("assignment not Pareto-optimal among envy-free ones on\n{p}")
            })?;
        }
    }
    Ok(sol.is_found())
}

fn golden_example() -> Check {
    let p = parse_profile("2 3\n1 > 2 > 3\n1 > 3 > 2").unwrap();
    let start = Instant::now();
    let sol = envy_free_assignment(&p).unwrap();
    let elapsed = start.elapsed();
    let expected = Assignment::new(vec![1, 2], 3).unwrap();
    ensure(sol.assignment.as_ref() == Some(&expected), || {
        format!("got {:?}", sol.assignment)
    })?;
    let all = enumerate_ef_assignments(&p).unwrap();
    ensure(all == vec![expected], || format!("oracle lists {all:?}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("agent1->house2, agent2->house3, unique; solve {elapsed:?}"))
}

fn exhaustive_strict() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (n, m, expected_profiles) in [(2usize, 3usize, 36usize), (3, 4, 13_824)] {
        let perms = all_permutations(m);
        let mut count = 0;
        let mut found = 0;
        let mut idx = vec![0usize; n];
        loop {
            let orderings: Vec<Vec<usize>> = idx.iter().map(|&k| perms[k].clone()).collect();
            let p = PreferenceProfile::from_orderings(&orderings).unwrap();
            found += agrees_with_oracle(&p, true)? as usize;
            count += 1;
            // odometer over perms^n
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < perms.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        ensure(count == expected_profiles, || format!("enumerated {count} profiles for n={n}, m={m}"))?;
        summary.push(format!("(n={n},m={m}) {count} profiles, {found} with EF"));
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} in {:?}", summary.join("; "), start.elapsed()))
}

fn randomized_with_ties() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    for (n, m, seed) in [(3usize, 5usize, 31u64), (4, 6, 32)] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut found = 0;
        let mut with_ties = 0;
        for _ in 0..1000 {
            let p = profile_with_ties_from_rng(n, m, 0.5, &mut rng);
            with_ties += !p.is_strict() as usize;
            found += agrees_with_oracle(&p, false)? as usize;
        }
        ensure(with_ties > 900, || format!("only {with_ties} profiles had ties"))?;
        summary.push(format!("(n={n},m={m}) 1000 profiles, {found} with EF"));
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{} in {:?}", summary.join("; "), start.elapsed()))
}

fn hall_violator_certification() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut graphs = 0;
    let mut largest = 0;
    while graphs < 500 {
        let g = random_graph(&mut rng, 10, 10);
        let m = maximum_matching(&g);
        if is_saturating(&m, &g) {
            continue;
        }
        graphs += 1;
        let v = minimal_hall_violator(&g, &m).map_err(|e| e.to_string())?;
        ensure(v.vertices.len() == v.neighborhood.len() + 1, || format!("|Z| != |S(Z)|+1: {v:?}"))?;
        ensure(
            neighborhood_size(&g, mask_of(&v.vertices)) == v.neighborhood.len(),
            || format!("stored neighborhood is wrong: {v:?}"),
        )?;
        ensure(proper_subsets_satisfy_hall(&g, &v.vertices), || format!("not minimal: {v:?}"))?;
        let listed = brute_force_hall_check(&g).map_err(|e| e.to_string())?;
        ensure(listed.contains(&v.vertices), || format!("{v:?} missing from {listed:?}"))?;
        largest = largest.max(v.vertices.len());
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("500 graphs, largest |Z| = {largest}, in {:?}", start.elapsed()))
}

fn equal_counts_rarely_succeed() -> Check {
    let start = Instant::now();
    let s = estimate_existence_probability(20, 20, 10_000, DEFAULT_SEED).unwrap();
    ensure(s.successes == 0, || format!("{} successes", s.successes))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("0 / 10000 successes in {:?}", start.elapsed()))
}

fn logarithmic_surplus_succeeds() -> Check {
    let start = Instant::now();
    let (n, trials) = (20usize, 1000u64);
    let m = three_n_log_n(n);
    ensure(PILOT_SEED != DEFAULT_SEED, || "pilot and main run share a seed".into())?;
    ensure(m == 180, || format!("3n ln n rounds to {m}"))?;
    let s = estimate_existence_probability(n, m, trials, DEFAULT_SEED).unwrap();

    // With no failures in the pilot, the band uses the rule-of-three upper
    // bound on the failure rate rather than a zero-width interval.
    let reference = PILOT_SUCCESSES as f64 / PILOT_TRIALS as f64;
    let p_band = if PILOT_SUCCESSES == PILOT_TRIALS {
        1.0 - 3.0 / PILOT_TRIALS as f64
    } else {
        reference
    };
    let sigma = binomial_std_error(p_band, trials);
    ensure((s.success_fraction - reference).abs() <= 3.0 * sigma, || {
        format!("success {} vs reference {reference} (3σ = {:.5})", s.success_fraction, 3.0 * sigma)
    })?;

    let mech_ref = PILOT_MECHANISM_SUCCESSES as f64 / PILOT_TRIALS as f64;
    let mech_sigma = (mech_ref * (1.0 - mech_ref) * (1.0 / trials as f64 + 1.0 / PILOT_TRIALS as f64)).sqrt();
    ensure((s.mechanism_fraction() - mech_ref).abs() <= 3.0 * mech_sigma, || {
        format!("mechanism {} vs reference {mech_ref}", s.mechanism_fraction())
    })?;

    let bound = mechanism_failure_bound(n, m);
    let fail = 1.0 - s.mechanism_fraction();
    let fail_sigma = binomial_std_error(bound.min(1.0), trials);
    ensure(fail <= bound + 3.0 * fail_sigma, || {
        format!("mechanism failure {fail} exceeds union bound {bound:.4} + 3σ")
    })?;
    ensure(s.mechanism_successes <= s.successes, || format!("{s:?}"))?;
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "success {:.4} (ref {reference:.4}), mechanism failure {fail:.4} <= bound {bound:.4}, in {:?}",
        s.success_fraction,
        start.elapsed()
    ))
}

fn monotone_in_houses() -> Check {
    let start = Instant::now();
    let trials = 500;
    let stats: Vec<_> = [10usize, 20, 40, 80]
        .iter()
        .map(|&m| estimate_existence_probability(10, m, trials, DEFAULT_SEED).unwrap())
        .collect();
    for w in stats.windows(2) {
        let sigma = (w[0].std_error().powi(2) + w[1].std_error().powi(2)).sqrt();
        ensure(w[0].success_fraction <= w[1].success_fraction + 3.0 * sigma, || {
            format!(
                "m={} gives {} but m={} gives {}",
                w[0].n_houses, w[0].success_fraction, w[1].n_houses, w[1].success_fraction
            )
        })?;
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    let fr: Vec<String> = stats.iter().map(|s| format!("m={}:{:.3}", s.n_houses, s.success_fraction)).collect();
    Ok(format!("{} in {:?}", fr.join(" "), start.elapsed()))
}

fn byte_identical_outputs() -> Check {
    let bin = env!("CARGO_BIN_EXE_envyfree");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;

    // Solver JSON, through the binary and the library, on random instances.
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for k in 0..20 {
        let p = profile_with_ties_from_rng(5, 8, 0.3, &mut rng);
        let path = dir.path().join(format!("inst{k}.txt"));
        std::fs::write(&path, p.to_string()).map_err(|e| e.to_string())?;
        let a = Command::new(bin).arg("solve").arg(&path).output().map_err(|e| e.to_string())?;
        let b = Command::new(bin).arg("solve").arg(&path).output().map_err(|e| e.to_string())?;
        ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("solve output differs for\n{p}"))?;
        let lib = serde_json::to_string(&SolveReport::from(&envy_free_assignment(&p).unwrap())).unwrap();
        ensure(a.stdout == format!("{lib}\n").into_bytes(), || "binary and library JSON differ".into())?;
    }

    let args = ["simulate", "--n", "8", "--sweep", "8:32:8", "--trials", "200", "--seed", "5"];
    let a = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    let b = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
    ensure(a.status.success() && a.stdout == b.stdout, || "simulate CSV differs".into())?;

    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let s1 = one.install(|| estimate_existence_probability(8, 16, 200, 5).unwrap());
    let s2 = estimate_existence_probability(8, 16, 200, 5).unwrap();
    ensure(s1.csv_row() == s2.csv_row(), || "stats depend on thread count".into())?;
    Ok("20 solve JSON pairs and a 4-row CSV sweep identical".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("golden example", golden_example),
        ("exhaustive oracle equivalence", exhaustive_strict),
        ("randomized oracle equivalence with ties", randomized_with_ties),
        ("hall violator certification", hall_violator_certification),
        ("m = n rarity", equal_counts_rarely_succeed),
        ("m = 3n ln n existence", logarithmic_surplus_succeeds),
        ("monotonicity in m", monotone_in_houses),
        ("determinism", byte_identical_outputs),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
