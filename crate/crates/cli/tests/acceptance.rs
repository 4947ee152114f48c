//! Acceptance suite: one line per criterion, exact tolerances, pinned
//! runtime budgets. Runs as a plain binary so the summary always prints.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use chipstar::montecarlo::trial_seed;
use chipstar::tableau::tableaux_from_json;
use chipstar::{
    count_rect_syt, enumerate_all, enumerate_volmin, from_outcome, generate_syts, reachable_set,
    replay, sort_rows, stabilize_labeled, stabilize_unlabeled, to_outcome, verify_branch_sorted,
    verify_mixing, verify_poset, verify_rim_sorted, witness_sequence, EnumBudget,
    EnumerationResult, LabeledConfig, MixingMode, SequenceLog, StableOutcome, StarParams,
    StrategyKind, Tableau, Vertex,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every comparison in this suite is on integers or sets; no numeric slack.
const TOLERANCE: &str = "exact";

/// Criteria expected to fail, with the reason. A listed criterion that
/// passes is itself a failure, so stale entries get noticed.
const KNOWN_FAILURES: &[(u8, &str)] = &[(
    1,
    "published (2,3) row lists 22680 sequences for [1,3,4],[2,5,6] and total 179424; \
     the layered search and an independent plain recursion both give 24696 and 181440",
)];

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

struct Check {
    passed: bool,
    detail: String,
    info: Vec<String>,
}

impl Check {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Check {
            passed,
            detail: detail.into(),
            info: Vec::new(),
        }
    }

    fn failures(failures: Vec<String>, ok_detail: impl Into<String>) -> Self {
        if failures.is_empty() {
            Check::new(true, ok_detail)
        } else {
            Check::new(false, failures.join("; "))
        }
    }

    fn with_info(mut self, line: impl Into<String>) -> Self {
        self.info.push(line.into());
        self
    }
}

fn p(k: u32, m: u32) -> StarParams {
    StarParams::new(k, m).unwrap()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn syt_image(k: u32, m: u32) -> BTreeSet<StableOutcome> {
    generate_syts(k, m)
        .unwrap()
        .iter()
        .map(|t| to_outcome(t).unwrap())
        .collect()
}

fn grids(set: &BTreeSet<StableOutcome>) -> BTreeSet<common::Grid> {
    set.iter().map(|o| o.rows().to_vec()).collect()
}

fn small_star_counts() -> Check {
    let docs: Vec<serde_json::Value> =
        serde_json::from_str(&common::fixture("small_star_sequence_counts.json")).unwrap();
    let mut failures = Vec::new();
    let mut totals = Vec::new();
    for doc in docs {
        let expected = EnumerationResult::from_json(&doc.to_string()).unwrap();
        let got = enumerate_all(expected.params, EnumBudget::ALL).unwrap();
        totals.push(format!("{}={}", got.params, got.total_sequences));
        if got != expected {
            let mut diffs = Vec::new();
            let outcomes: BTreeSet<_> = got
                .outcomes()
                .union(&expected.outcomes())
                .cloned()
                .collect();
            for o in outcomes {
                let (a, b) = (got.per_outcome.get(&o), expected.per_outcome.get(&o));
                if a != b {
                    diffs.push(format!("{o}: got {a:?} expected {b:?}"));
                }
            }
            failures.push(format!(
                "{} total {} expected {} [{}]",
                got.params,
                got.total_sequences,
                expected.total_sequences,
                diffs.join(", ")
            ));
        }
    }
    Check::failures(failures, format!("totals {}", totals.join(" ")))
}

fn fire_count_formulas() -> Check {
    let mut failures = Vec::new();
    for k in 1..=5u32 {
        for m in 1..=6u32 {
            let n = u64::from(k * m);
            let run = stabilize_unlabeled(k, n).unwrap();
            let tri = |d: u32| u64::from(d * (d + 1) / 2);
            let mut expected = BTreeMap::new();
            expected.insert(Vertex::Center, tri(m));
            for i in 1..=k {
                for j in 1..m {
                    expected.insert(Vertex::branch(i, j), tri(m - j));
                }
            }
            let got: BTreeMap<_, _> = run
                .fire_counts
                .iter()
                .filter(|(_, &c)| c > 0)
                .map(|(v, c)| (*v, *c))
                .collect();
            if got != expected {
                failures.push(format!("({k},{m}) per-vertex fire counts differ"));
            }
            let total = u64::from(m * (m + 1) / 2 + k * (m - 1) * m * (m + 1) / 6);
            if run.total_fires != total {
                failures.push(format!(
                    "({k},{m}) total {} expected {total}",
                    run.total_fires
                ));
            }
            let (_, naive_fires) = common::naive_unlabeled(k as usize, n);
            if naive_fires.iter().sum::<u64>() != total {
                failures.push(format!(
                    "({k},{m}) plain simulation disagrees with the total"
                ));
            }
        }
        for n in 0..=(5 * u64::from(k) + 4) {
            let run = stabilize_unlabeled(k, n).unwrap();
            let (m, r) = (n / u64::from(k), n % u64::from(k));
            let mut ok = run.config.count(Vertex::Center) == r && run.config.total() == n;
            for i in 1..=k {
                for j in 1..=(m as u32 + 2) {
                    let want = u64::from(u64::from(j) <= m);
                    ok &= run.config.count(Vertex::branch(i, j)) == want;
                }
            }
            let (naive_chips, _) = common::naive_unlabeled(k as usize, n);
            ok &= naive_chips[0] == r;
            if !ok {
                failures.push(format!("k={k} n={n} stable shape"));
            }
        }
    }
    Check::failures(failures, "k<=5, m<=6 fire counts; n<=5k+4 stable shapes")
}

fn two_by_four_gap() -> Check {
    let reachable = reachable_set(p(2, 4), EnumBudget::ALL).unwrap();
    let rim_sorted: BTreeSet<common::Grid> = common::all_grids(2, 4)
        .filter(common::is_row_and_rim_sorted)
        .collect();
    let lib_rim_sorted = common::all_grids(2, 4)
        .filter(|g| Tableau::new(g.clone()).unwrap().is_row_and_rim_sorted())
        .count();
    let quartet: BTreeSet<common::Grid> =
        tableaux_from_json(&common::fixture("unreachable_rim_sorted_2x4.json"))
            .unwrap()
            .into_iter()
            .map(Into::into)
            .collect();
    let reach = grids(&reachable);
    let diff: BTreeSet<_> = rim_sorted.difference(&reach).cloned().collect();
    let mut failures = Vec::new();
    if reachable.len() != 16 {
        failures.push(format!("reachable {} expected 16", reachable.len()));
    }
    if rim_sorted.len() != 20 || lib_rim_sorted != 20 {
        failures.push(format!(
            "rim-sorted {} / {lib_rim_sorted} expected 20",
            rim_sorted.len()
        ));
    }
    if !reach.is_subset(&rim_sorted) {
        failures.push("a reachable outcome is not rim-sorted".into());
    }
    if diff != quartet {
        failures.push(format!("difference {diff:?}"));
    }
    Check::failures(
        failures,
        "16 reachable of 20 rim-sorted; difference is the fixture quartet",
    )
}

fn two_column_catalan() -> Check {
    let catalan = common::catalan_by_recurrence(6);
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for k in 2..=5u32 {
        let budget = if k * 2 <= 8 {
            EnumBudget::ALL
        } else {
            EnumBudget::states(50_000_000)
        };
        let reachable = reachable_set(p(k, 2), budget.parallel(true)).unwrap();
        let image = syt_image(k, 2);
        let oracle = common::brute_force_syts(k as usize, 2);
        sizes.push(reachable.len());
        if reachable != image {
            failures.push(format!("k={k} reachable set differs from the SYT image"));
        }
        if grids(&image) != oracle {
            failures.push(format!("k={k} SYT list differs from brute force"));
        }
        if reachable.len() as u128 != catalan[k as usize]
            || chipstar::catalan(k.into()) != BigUint::from(catalan[k as usize])
        {
            failures.push(format!(
                "k={k} size {} expected {}",
                reachable.len(),
                catalan[k as usize]
            ));
        }
    }
    Check::failures(failures, format!("sizes {sizes:?}"))
}

fn witnesses() -> Check {
    let mut failures = Vec::new();
    let mut checked = 0;
    for k in 1..=9u32 {
        for m in 1..=(9 / k) {
            let params = p(k, m);
            let all = generate_syts(k, m).unwrap();
            let mut landed = BTreeSet::new();
            let mut scripts = BTreeSet::new();
            let fires = u64::from(m * (m + 1) / 2 + k * (m - 1) * m * (m + 1) / 6);
            for t in &all {
                let moves = witness_sequence(t).unwrap();
                let want = to_outcome(t).unwrap();
                match replay(params, &moves) {
                    Ok((end, _)) if end.outcome() == Some(&want) && moves.len() as u64 == fires => {
                    }
                    Ok(_) => failures.push(format!("({k},{m}) witness of {want} lands elsewhere")),
                    Err(e) => failures.push(format!("({k},{m}) witness of {want}: {e}")),
                }
                landed.insert(want);
                scripts.insert(moves);
                checked += 1;
            }
            if landed.len() != all.len() || scripts.len() != all.len() {
                failures.push(format!("({k},{m}) not injective"));
            }
        }
    }
    Check::failures(failures, format!("{checked} tableaux with k*m <= 9"))
}

fn volmin_image() -> Check {
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for ((k, m), size) in [((2, 2), 2), ((2, 3), 5), ((3, 2), 5), ((4, 2), 14)] {
        let found = enumerate_volmin(p(k, m), EnumBudget::VOLMIN).unwrap();
        sizes.push(found.len());
        if found != syt_image(k, m) || found.len() != size {
            failures.push(format!(
                "({k},{m}) {} outcomes, expected the {size} SYT outcomes",
                found.len()
            ));
        }
    }
    let stretch = enumerate_volmin(p(3, 3), EnumBudget::VOLMIN).unwrap();
    let stretch_ok = stretch == syt_image(3, 3) && stretch.len() == 42;
    Check::failures(failures, format!("sizes {sizes:?}")).with_info(format!(
        "stretch (3,3), non-gating: {} outcomes, equals the SYT image: {}",
        stretch.len(),
        if stretch_ok { "yes" } else { "no" }
    ))
}

fn random_logs() -> Check {
    let mut failures = Vec::new();
    let mut info = Vec::new();
    for (k, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let params = p(k, m);
        let start = LabeledConfig::initial(params);
        let mut fire_maps = BTreeSet::new();
        let mut strict = 0usize;
        let mut bad = 0usize;
        for i in 0..1000u64 {
            let kind = StrategyKind::RandomUniform {
                seed: trial_seed(0xACCE, i),
            };
            let (outcome, log) = stabilize_labeled(&start, kind).unwrap();
            fire_maps.insert((log.len(), log.fire_counts().clone()));
            strict += verify_mixing(&log, MixingMode::Strict).violations.len();
            let ok = verify_poset(&log).passed
                && verify_mixing(&log, MixingMode::NonStrict).passed
                && verify_branch_sorted(&outcome)
                && verify_rim_sorted(&outcome);
            bad += usize::from(!ok);
        }
        if bad > 0 {
            failures.push(format!("({k},{m}) {bad} logs failed a verifier"));
        }
        if fire_maps.len() != 1 {
            failures.push(format!(
                "({k},{m}) {} distinct fire-count maps",
                fire_maps.len()
            ));
        }
        info.push(format!("{params}: {strict}"));
    }
    Check::failures(failures, "4000 logs").with_info(format!(
        "strict mixing violations (informational) {}",
        info.join(" ")
    ))
}

fn nonstandard_replay() -> Check {
    let log = SequenceLog::parse_text(p(3, 3), &common::fixture("nonstandard_3x3.moves")).unwrap();
    let outcome = match replay(p(3, 3), log.moves()) {
        Ok((end, _)) => end.outcome().cloned(),
        Err(e) => return Check::new(false, e.to_string()),
    };
    let expected = StableOutcome::new(vec![vec![1, 4, 7], vec![2, 3, 8], vec![5, 6, 9]]).unwrap();
    let Some(outcome) = outcome else {
        return Check::new(false, "script does not end stable");
    };
    let t = from_outcome(&outcome);
    let bad_columns = t.non_increasing_columns();
    let ok = outcome == expected && !t.is_standard() && bad_columns == vec![2];
    Check::new(
        ok,
        format!(
            "{} moves, outcome {outcome}, non-increasing columns {bad_columns:?}",
            log.len()
        ),
    )
}

fn row_sorting() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5047);
    let mut violations = 0;
    for (k, m) in [(3usize, 3usize), (4, 4), (5, 3)] {
        for _ in 0..500 {
            let mut grid = vec![vec![0i64; m]; k];
            for j in 0..m {
                let mut col: Vec<i64> = (0..k).map(|_| rng.random_range(-50..50)).collect();
                col.sort_unstable();
                col.dedup();
                while col.len() < k {
                    col.push(col.last().copied().unwrap_or(0) + rng.random_range(1..5));
                }
                for (row, v) in grid.iter_mut().zip(col) {
                    row[j] = v;
                }
            }
            let sorted = sort_rows(&grid).unwrap();
            let cols_ok = (0..m).all(|j| (1..k).all(|i| sorted[i - 1][j] < sorted[i][j]));
            let rows_ok = sorted.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1]));
            let same = grid.iter().zip(&sorted).all(|(a, b)| {
                let mut a = a.clone();
                a.sort_unstable();
                &a == b
            });
            violations += usize::from(!(cols_ok && rows_ok && same));
        }
    }
    Check::new(
        violations == 0,
        format!("1500 grids, {violations} violations"),
    )
}

fn oracle_equivalence() -> Check {
    let mut failures = Vec::new();
    for (k, m) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let got: BTreeMap<common::Grid, BigUint> = enumerate_all(p(k, m), EnumBudget::ALL)
            .unwrap()
            .per_outcome
            .into_iter()
            .map(|(o, n)| (o.into_rows(), n))
            .collect();
        let naive: BTreeMap<common::Grid, BigUint> =
            common::naive_sequence_counts(k as usize, m as usize)
                .into_iter()
                .map(|(g, n)| (g, BigUint::from(n)))
                .collect();
        if got != naive {
            failures.push(format!("({k},{m}) counts differ from plain recursion"));
        }
    }
    let mut shapes = 0;
    for k in 1..=10u32 {
        for m in 1..=(10 / k) {
            shapes += 1;
            let listed = generate_syts(k, m).unwrap().len();
            if count_rect_syt(k.into(), m.into()) != BigUint::from(listed) {
                failures.push(format!("({k},{m}) hook length formula vs {listed} listed"));
            }
        }
    }
    Check::failures(
        failures,
        format!("4 counting pairs, {shapes} tableau shapes"),
    )
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chipstar"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {}", out.status));
    }
    Ok(out.stdout)
}

fn determinism() -> Check {
    let commands: &[&[&str]] = &[
        &[
            "stabilize",
            "--k",
            "3",
            "--m",
            "3",
            "--strategy",
            "random",
            "--seed",
            "17",
            "--json",
            "--verify",
        ],
        &[
            "stabilize",
            "--k",
            "3",
            "--m",
            "3",
            "--strategy",
            "volmin",
            "--seed",
            "17",
            "--json",
        ],
        &[
            "stabilize",
            "--k",
            "2",
            "--m",
            "4",
            "--strategy",
            "det",
            "--json",
        ],
        &[
            "montecarlo",
            "--k",
            "2",
            "--m",
            "3",
            "--trials",
            "3000",
            "--seed",
            "5",
            "--json",
        ],
        &[
            "verify",
            "--k",
            "3",
            "--m",
            "2",
            "--samples",
            "200",
            "--seed",
            "8",
            "--json",
        ],
        &["enumerate", "--k", "2", "--m", "3", "--json"],
        &["volmin", "--k", "3", "--m", "3", "--json"],
    ];
    let mut failures = Vec::new();
    for args in commands {
        match (run_cli(args), run_cli(args)) {
            (Ok(a), Ok(b)) if a == b && serde_json::from_slice::<serde_json::Value>(&a).is_ok() => {
            }
            (Ok(_), Ok(_)) => failures.push(format!("{} output differs or is not JSON", args[0])),
            (Err(e), _) | (_, Err(e)) => failures.push(e),
        }
    }
    let dir = std::env::temp_dir().join(format!("chipstar-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("mc.json");
    let path = file.to_str().unwrap();
    let args = [
        "montecarlo",
        "--k",
        "2",
        "--m",
        "2",
        "--trials",
        "500",
        "--seed",
        "3",
        "--json",
    ];
    let stdout = run_cli(&args);
    let written = run_cli(&[&args[..], &["--out", path]].concat())
        .and_then(|_| std::fs::read(&file).map_err(|e| e.to_string()));
    if stdout != written {
        failures.push("--out file differs from stdout".into());
    }
    let _ = std::fs::remove_dir_all(&dir);
    Check::failures(
        failures,
        format!(
            "{} seeded and unseeded commands, byte-identical",
            commands.len() + 1
        ),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "sequence counts for eight small stars",
            budget: secs(120),
            run: small_star_counts,
        },
        Criterion {
            id: 2,
            title: "unlabeled fire counts and stable shapes",
            budget: secs(30),
            run: fire_count_formulas,
        },
        Criterion {
            id: 3,
            title: "reachable (2,4) outcomes vs rim-sorted tableaux",
            budget: secs(300),
            run: two_by_four_gap,
        },
        Criterion {
            id: 4,
            title: "two-column outcomes are the SYT image, Catalan sized",
            budget: secs(600),
            run: two_column_catalan,
        },
        Criterion {
            id: 5,
            title: "witness sequences replay and are injective",
            budget: secs(30),
            run: witnesses,
        },
        Criterion {
            id: 6,
            title: "volatility-minimizing outcomes are the SYT image",
            budget: secs(300),
            run: volmin_image,
        },
        Criterion {
            id: 7,
            title: "random logs pass ordering, mixing and sortedness checks",
            budget: secs(120),
            run: random_logs,
        },
        Criterion {
            id: 8,
            title: "non-standard 3x3 script replay",
            budget: secs(5),
            run: nonstandard_replay,
        },
        Criterion {
            id: 9,
            title: "row sorting keeps columns sorted",
            budget: secs(10),
            run: row_sorting,
        },
        Criterion {
            id: 10,
            title: "search vs plain recursion; hook lengths vs listing",
            budget: secs(60),
            run: oracle_equivalence,
        },
        Criterion {
            id: 11,
            title: "repeated CLI runs give byte-identical JSON",
            budget: secs(120),
            run: determinism,
        },
    ];
    println!(
        "acceptance: {} criteria, tolerance {TOLERANCE}",
        criteria.len()
    );
    let mut unexpected = 0;
    let mut known = 0;
    for c in &criteria {
        let start = Instant::now();
        let check = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let passed = check.passed && in_time;
        let expected_failure = KNOWN_FAILURES.iter().find(|(id, _)| *id == c.id);
        println!(
            "criterion {:>2} {} {} ({:.2?} of {:?}): {}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.title,
            elapsed,
            c.budget,
            check.detail
        );
        if !in_time {
            println!("    over the time budget");
        }
        for line in &check.info {
            println!("    info: {line}");
        }
        match (passed, expected_failure) {
            (false, Some((_, why))) => {
                known += 1;
                println!("    known failure: {why}");
            }
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                unexpected += 1;
                println!("    listed as a known failure but passed; remove it from KNOWN_FAILURES");
            }
            (true, None) => {}
        }
    }
    let passed = criteria.len() - unexpected - known;
    println!(
        "acceptance summary: {passed} passed, {known} known failure(s), {unexpected} unexpected"
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
