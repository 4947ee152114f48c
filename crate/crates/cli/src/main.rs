use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chipstar::montecarlo::trial_seed;
use chipstar::report::{self, Format, Table};
use chipstar::{
    count_rect_syt, enumerate_all, enumerate_volmin, generate_syts, replay, run_montecarlo,
    stabilize_labeled, to_outcome, verify_mixing, verify_outcome, verify_poset, witness_sequence,
    EnumBudget, LabeledConfig, MixingMode, SequenceLog, StableOutcome, StarParams, StrategyKind,
    VerifierReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "chipstar",
    version,
    about = "Labeled chip-firing on infinite k-star graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Shape {
    /// Number of branches.
    #[arg(long)]
    k: u32,
    /// Chips per branch; the start holds k*m chips on the center.
    #[arg(long)]
    m: u32,
}

#[derive(Copy, Clone, ValueEnum)]
enum Strategy {
    Det,
    Random,
    Volmin,
}

#[derive(Subcommand)]
enum Command {
    /// Stabilize the start once and print the move log and outcome.
    Stabilize {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, value_enum, default_value = "det")]
        strategy: Strategy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Run the sequence and outcome verifiers; exit 1 if any fails.
        #[arg(long)]
        verify: bool,
    },
    /// Count every stabilization sequence per outcome.
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the k*m cap and stop after this many distinct states.
        #[arg(long)]
        max_states: Option<u64>,
    },
    /// Outcomes of volatility-minimizing play, compared with the SYTs.
    Volmin {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        json: bool,
    },
    /// Count standard Young tableaux of the k x m rectangle.
    Syt {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        list: bool,
        /// Replay the witness sequence of every tableau; exit 1 on a mismatch.
        #[arg(long)]
        witness: bool,
    },
    /// Outcome frequencies under uniformly random play.
    Montecarlo {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print sequence counts next to the frequencies.
        #[arg(long)]
        compare: bool,
    },
    /// Replay a move log from a file and run every verifier on it.
    Replay {
        #[command(flatten)]
        shape: Shape,
        /// One move per line, e.g. `C:{1,2}` or `B(1,1):{1,3}`.
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run random logs through every verifier.
    Verify {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    /// A requested verification did not pass.
    Verification,
    /// Bad input or an unusable request.
    Usage(String),
    Io(String),
}

impl From<chipstar::Error> for Failure {
    fn from(e: chipstar::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Stabilize {
            shape,
            strategy,
            seed,
            json,
            verify,
        } => stabilize(shape, strategy, seed, json, verify),
        Command::Enumerate {
            shape,
            json,
            out,
            max_states,
        } => enumerate(shape, json, out.as_deref(), max_states),
        Command::Volmin { shape, json } => volmin(shape, json),
        Command::Syt {
            shape,
            list,
            witness,
        } => syt(shape, list, witness),
        Command::Montecarlo {
            shape,
            trials,
            seed,
            json,
            out,
            compare,
        } => montecarlo(shape, trials, seed, json, out.as_deref(), compare),
        Command::Replay { shape, log, json } => replay_log(shape, &log, json),
        Command::Verify {
            shape,
            samples,
            seed,
            json,
        } => verify(shape, samples, seed, json),
    }
}

fn params(shape: Shape) -> Result<StarParams, Failure> {
    Ok(StarParams::new(shape.k, shape.m)?)
}

fn emit(doc: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => write_atomically(path, doc),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(doc.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
fn write_atomically(path: &Path, doc: &str) -> CmdResult {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(doc.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| Failure::Io(e.error.to_string()))?;
    Ok(())
}

fn full_report(log: &SequenceLog, outcome: &StableOutcome) -> VerifierReport {
    verify_poset(log)
        .merge(verify_mixing(log, MixingMode::NonStrict))
        .merge(verify_outcome(outcome))
}

fn stabilize(shape: Shape, strategy: Strategy, seed: u64, json: bool, verify: bool) -> CmdResult {
    let p = params(shape)?;
    let kind = match strategy {
        Strategy::Det => StrategyKind::Deterministic,
        Strategy::Random => StrategyKind::RandomUniform { seed },
        Strategy::Volmin => StrategyKind::VolatilityMinimizing { seed },
    };
    let (outcome, log) = stabilize_labeled(&LabeledConfig::initial(p), kind)?;
    let report = verify.then(|| full_report(&log, &outcome));
    if json {
        let mut doc = json!({
            "k": p.k(),
            "m": p.m(),
            "strategy": kind,
            "outcome": outcome,
            "moves": log.moves().iter().map(ToString::to_string).collect::<Vec<_>>(),
        });
        if let Some(r) = &report {
            doc["verification"] = serde_json::to_value(r).expect("report serializes");
        }
        emit(
            &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
            None,
        )?;
    } else {
        let mut text = log.to_text();
        text += &format!("outcome {outcome}\nmoves {}\n", log.len());
        if let Some(r) = &report {
            text += &verification_text(r);
        }
        emit(&text, None)?;
    }
    match report {
        Some(r) if !r.passed => Err(Failure::Verification),
        _ => Ok(()),
    }
}

fn verification_text(r: &VerifierReport) -> String {
    let mut s = format!(
        "verification {}\n",
        if r.passed { "passed" } else { "FAILED" }
    );
    for v in &r.violations {
        s += &format!("  [{}] {}\n", v.rule, v.detail);
    }
    s
}

fn enumerate(shape: Shape, json: bool, out: Option<&Path>, max_states: Option<u64>) -> CmdResult {
    let p = params(shape)?;
    let budget = max_states
        .map_or(EnumBudget::ALL, EnumBudget::states)
        .parallel(true);
    let result = enumerate_all(p, budget)?;
    let format = if json { Format::Json } else { Format::Text };
    emit(
        &report::emit_table(Table::Enumeration(&result), format),
        out,
    )
}

fn syt_image(p: StarParams) -> Result<Option<BTreeSet<StableOutcome>>, Failure> {
    if p.n() > chipstar::tableau::SYT_GENERATION_CAP {
        return Ok(None);
    }
    let image = generate_syts(p.k(), p.m())?
        .iter()
        .map(to_outcome)
        .collect::<Result<_, _>>()?;
    Ok(Some(image))
}

fn volmin(shape: Shape, json: bool) -> CmdResult {
    let p = params(shape)?;
    let found = enumerate_volmin(p, EnumBudget::VOLMIN.parallel(true))?;
    let syt_count = count_rect_syt(p.k().into(), p.m().into());
    let image = syt_image(p)?;
    let matches = image.as_ref().map(|img| *img == found);
    if json {
        let doc = json!({
            "k": p.k(),
            "m": p.m(),
            "outcomes": found,
            "outcome_count": found.len(),
            "syt_count": syt_count.to_string(),
            "matches_syt_image": matches,
        });
        emit(
            &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
            None,
        )
    } else {
        let mut s = format!("{p}\n");
        for o in &found {
            s += &format!("{o} | {}\n", report::syt_label(o));
        }
        s += &format!("outcomes | {}\nSYT count | {syt_count}\n", found.len());
        s += &match matches {
            Some(true) => "equals the SYT image: yes\n".to_string(),
            Some(false) => "equals the SYT image: no\n".to_string(),
            None => "equals the SYT image: not checked (too many tableaux to list)\n".to_string(),
        };
        emit(&s, None)
    }
}

fn syt(shape: Shape, list: bool, witness: bool) -> CmdResult {
    let p = params(shape)?;
    let mut s = format!(
        "{p}\nSYT count | {}\n",
        count_rect_syt(p.k().into(), p.m().into())
    );
    if p.m() == 2 {
        s += &format!("catalan({}) | {}\n", p.k(), chipstar::catalan(p.k().into()));
    }
    let mut ok = true;
    if list || witness {
        let all = generate_syts(p.k(), p.m())?;
        for t in &all {
            let rows = to_outcome(t)?;
            if list {
                s += &format!("{rows}\n");
            }
            if witness {
                let moves = witness_sequence(t)?;
                let landed = replay(p, &moves)
                    .ok()
                    .and_then(|(end, _)| end.outcome().cloned());
                let good = landed.as_ref() == Some(&rows);
                ok &= good;
                s += &format!(
                    "witness {rows} | {} moves | {}\n",
                    moves.len(),
                    if good { "ok" } else { "MISMATCH" }
                );
            }
        }
    }
    emit(&s, None)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn montecarlo(
    shape: Shape,
    trials: u64,
    seed: u64,
    json: bool,
    out: Option<&Path>,
    compare: bool,
) -> CmdResult {
    let p = params(shape)?;
    let freq = run_montecarlo(p, trials, seed)?;
    let format = if json { Format::Json } else { Format::Text };
    emit(&report::emit_table(Table::Frequency(&freq), format), out)?;
    if compare {
        let counts = enumerate_all(p, EnumBudget::ALL.parallel(true))?;
        emit(
            &format!("\n{}", report::comparison_text(&counts, &freq)),
            None,
        )?;
    }
    Ok(())
}

fn replay_log(shape: Shape, path: &Path, json: bool) -> CmdResult {
    let p = params(shape)?;
    let text = std::fs::read_to_string(path)?;
    let log = SequenceLog::parse_text(p, &text)?;
    let (report, end) = match replay(p, log.moves()) {
        Ok((chipstar::ReplayEnd::Stable(outcome), _)) => {
            (full_report(&log, &outcome), Some(outcome))
        }
        Ok((chipstar::ReplayEnd::Config(config), _)) => (
            VerifierReport::from_violations(vec![chipstar::Violation::new(
                "replay",
                format!("log ends unstable at {config}"),
            )]),
            None,
        ),
        Err(e) => (
            VerifierReport::from_violations(vec![chipstar::Violation::new(
                "replay",
                e.to_string(),
            )]),
            None,
        ),
    };
    if json {
        let doc = json!({"k": p.k(), "m": p.m(), "moves": log.len(), "outcome": end, "verification": report});
        emit(
            &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
            None,
        )?;
    } else {
        let mut s = format!("{p} moves {}\n", log.len());
        if let Some(o) = &end {
            s += &format!("outcome {o} | {}\n", report::syt_label(o));
        }
        s += &verification_text(&report);
        emit(&s, None)?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn verify(shape: Shape, samples: u64, seed: u64, json: bool) -> CmdResult {
    let p = params(shape)?;
    if samples == 0 {
        return Err(Failure::Usage("samples must be at least 1".into()));
    }
    let start = LabeledConfig::initial(p);
    let mut failed = 0u64;
    let mut strict_violations = 0usize;
    let mut first_failure: Option<(u64, VerifierReport)> = None;
    let mut fire_maps = BTreeSet::new();
    let mut lengths = BTreeSet::new();
    for i in 0..samples {
        let kind = StrategyKind::RandomUniform {
            seed: trial_seed(seed, i),
        };
        let (outcome, log) = stabilize_labeled(&start, kind)?;
        lengths.insert(log.len());
        fire_maps.insert(log.fire_counts().clone());
        strict_violations += verify_mixing(&log, MixingMode::Strict).violations.len();
        let r = full_report(&log, &outcome);
        if !r.passed {
            failed += 1;
            first_failure.get_or_insert((i, r));
        }
    }
    let uniform = lengths.len() == 1 && fire_maps.len() == 1;
    let passed = failed == 0 && uniform;
    if json {
        let doc = json!({
            "k": p.k(),
            "m": p.m(),
            "samples": samples,
            "seed": seed,
            "passed": passed,
            "failed_samples": failed,
            "fire_counts_identical": uniform,
            "strict_mixing_violations": strict_violations,
            "first_failure": first_failure.as_ref().map(|(i, r)| json!({"sample": i, "report": r})),
        });
        emit(
            &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
            None,
        )?;
    } else {
        let mut s = format!("{p} samples={samples} seed={seed}\n");
        s += &format!("failed samples | {failed}\n");
        s += &format!(
            "identical fire counts | {}\n",
            if uniform { "yes" } else { "no" }
        );
        s += &format!("strict mixing violations (informational) | {strict_violations}\n");
        if let Some((i, r)) = &first_failure {
            s += &format!("first failing sample {i}:\n{}", verification_text(r));
        }
        s += &format!(
            "verification {}\n",
            if passed { "passed" } else { "FAILED" }
        );
        emit(&s, None)?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
