//! Text and JSON tables for enumeration results and frequency reports.

use std::fmt::Write as _;

use crate::enumerate::EnumerationResult;
use crate::montecarlo::FrequencyReport;
use crate::outcome::StableOutcome;
use crate::tableau::from_outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Anything [`emit_table`] can print.
#[derive(Debug, Clone, Copy)]
pub enum Table<'a> {
    Enumeration(&'a EnumerationResult),
    Frequency(&'a FrequencyReport),
}

const SORTED_MARK: &str = "  * totally sorted";

pub fn emit_table(table: Table<'_>, format: Format) -> String {
    match (table, format) {
        (Table::Enumeration(r), Format::Json) => r.to_json_pretty() + "\n",
        (Table::Frequency(r), Format::Json) => r.to_json_pretty() + "\n",
        (Table::Enumeration(r), Format::Text) => enumeration_text(r),
        (Table::Frequency(r), Format::Text) => frequency_text(r),
    }
}

/// One line per outcome, fewest sequences first, then the total.
///
/// ```text
/// (2,2)
/// [1,3],[2,4] | 4
/// [1,2],[3,4] | 8  * totally sorted
/// total | 12
/// ```
pub fn enumeration_text(r: &EnumerationResult) -> String {
    let mut s = format!("{}\n", r.params);
    for (o, n) in r.rows_by_count() {
        let _ = writeln!(s, "{o} | {n}{}", mark(o));
    }
    let _ = writeln!(s, "total | {}", r.total_sequences);
    s
}

/// Several enumeration tables stacked, one block per `(k,m)`.
pub fn sequence_count_table(results: &[EnumerationResult]) -> String {
    results
        .iter()
        .map(enumeration_text)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn frequency_text(r: &FrequencyReport) -> String {
    let mut s = format!("{} trials={} seed={}\n", r.params, r.trials, r.seed);
    for (o, t) in r.rows_by_hits() {
        let pct = 100.0 * t.hits as f64 / r.trials as f64;
        let kind = if t.is_syt { "SYT" } else { "non-SYT" };
        let _ = writeln!(s, "{o} | {} | {pct:.2}% | {kind}{}", t.hits, mark(o));
    }
    let _ = writeln!(s, "total | {}", r.trials);
    let _ = writeln!(
        s,
        "totally sorted is the mode: {}",
        yes_no(r.totally_sorted_is_mode())
    );
    let _ = writeln!(
        s,
        "every SYT outcome beats every non-SYT outcome: {}",
        yes_no(r.syt_outcomes_dominate())
    );
    s
}

/// Sequence counts next to observed frequencies for the same `(k,m)`.
/// Outcomes never hit show zero hits.
pub fn comparison_text(counts: &EnumerationResult, freq: &FrequencyReport) -> String {
    let mut s = format!(
        "{} sequences={} trials={}\n",
        counts.params, counts.total_sequences, freq.trials
    );
    let _ = writeln!(s, "outcome | sequences | share | hits | frequency");
    for (o, n) in counts.rows_by_count() {
        let share = ratio(n, &counts.total_sequences);
        let hits = freq.hits(o);
        let freq_pct = 100.0 * hits as f64 / freq.trials as f64;
        let _ = writeln!(
            s,
            "{o} | {n} | {:.2}% | {hits} | {freq_pct:.2}%{}",
            100.0 * share,
            mark(o)
        );
    }
    s
}

fn ratio(a: &num_bigint::BigUint, b: &num_bigint::BigUint) -> f64 {
    use num_traits::ToPrimitive;
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

fn mark(o: &StableOutcome) -> &'static str {
    if o.is_totally_sorted() {
        SORTED_MARK
    } else {
        ""
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// `"SYT"` or `"non-SYT"` for an outcome.
pub fn syt_label(o: &StableOutcome) -> &'static str {
    if from_outcome(o).is_standard() {
        "SYT"
    } else {
        "non-SYT"
    }
}
