//! Outcome frequencies under uniformly random play.

use std::collections::BTreeMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{stabilize_labeled, StrategyKind};
use crate::error::{Error, Result};
use crate::outcome::StableOutcome;
use crate::star::{Label, LabeledConfig, StarParams};
use crate::tableau::{count_rect_syt, from_outcome};

/// Hits of one outcome and its classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeTally {
    pub hits: u64,
    pub is_syt: bool,
    pub is_totally_sorted: bool,
}

impl OutcomeTally {
    fn for_outcome(outcome: &StableOutcome, hits: u64) -> Self {
        OutcomeTally {
            hits,
            is_syt: from_outcome(outcome).is_standard(),
            is_totally_sorted: outcome.is_totally_sorted(),
        }
    }
}

/// Tally of `trials` random stabilizations of `Δ^{k,m}`. Only outcomes that
/// were hit appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyReport {
    pub params: StarParams,
    pub trials: u64,
    pub seed: u64,
    pub per_outcome: BTreeMap<StableOutcome, OutcomeTally>,
}

/// Seed of trial `index`: the first word of ChaCha8 keyed by `seed` on
/// stream `index`. Independent of how trials are scheduled.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Runs `trials` independent [`StrategyKind::RandomUniform`] stabilizations.
pub fn run_montecarlo(params: StarParams, trials: u64, seed: u64) -> Result<FrequencyReport> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let start = LabeledConfig::initial(params);
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let strategy = StrategyKind::RandomUniform {
                seed: trial_seed(seed, t),
            };
            stabilize_labeled(&start, strategy).map(|(outcome, _)| outcome)
        })
        .try_fold(
            BTreeMap::new,
            |mut acc: BTreeMap<StableOutcome, u64>, outcome| {
                *acc.entry(outcome?).or_default() += 1;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (o, n) in b {
                *a.entry(o).or_default() += n;
            }
            Ok(a)
        })?;
    let per_outcome = hits
        .into_iter()
        .map(|(o, n)| {
            let tally = OutcomeTally::for_outcome(&o, n);
            (o, tally)
        })
        .collect();
    Ok(FrequencyReport {
        params,
        trials,
        seed,
        per_outcome,
    })
}

impl FrequencyReport {
    /// Outcomes by hits, most frequent first; ties by outcome.
    pub fn rows_by_hits(&self) -> Vec<(&StableOutcome, &OutcomeTally)> {
        let mut rows: Vec<_> = self.per_outcome.iter().collect();
        rows.sort_by(|a, b| b.1.hits.cmp(&a.1.hits).then_with(|| a.0.cmp(b.0)));
        rows
    }

    pub fn hits(&self, outcome: &StableOutcome) -> u64 {
        self.per_outcome.get(outcome).map_or(0, |t| t.hits)
    }

    /// The totally sorted outcome has strictly more hits than any other.
    pub fn totally_sorted_is_mode(&self) -> bool {
        let top = self.hits(&StableOutcome::totally_sorted(self.params));
        top > 0
            && self
                .per_outcome
                .values()
                .filter(|t| !t.is_totally_sorted)
                .all(|t| t.hits < top)
    }

    /// Every SYT outcome, including unobserved ones, has strictly more hits
    /// than every observed non-SYT outcome.
    pub fn syt_outcomes_dominate(&self) -> bool {
        let observed_syt = self.per_outcome.values().filter(|t| t.is_syt).count();
        let all_seen = count_rect_syt(self.params.k().into(), self.params.m().into())
            == num_bigint::BigUint::from(observed_syt);
        let least_syt = if all_seen {
            self.per_outcome
                .values()
                .filter(|t| t.is_syt)
                .map(|t| t.hits)
                .min()
                .unwrap_or(0)
        } else {
            0
        };
        self.per_outcome
            .values()
            .filter(|t| !t.is_syt)
            .all(|t| t.hits < least_syt)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&FrequencyWire::from(self)).expect("report serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&FrequencyWire::from(self)).expect("report serializes")
    }

    /// Parses and checks a report: shapes match `(k,m)`, flags agree with
    /// the outcomes, hits are positive and sum to `trials`, and the summary
    /// annotations agree with the tallies.
    pub fn from_json(s: &str) -> Result<Self> {
        let wire: FrequencyWire =
            serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        let params = StarParams::new(wire.k, wire.m)?;
        let mut per_outcome = BTreeMap::new();
        let mut sum: u64 = 0;
        for row in wire.outcomes {
            let outcome = StableOutcome::new(row.branches)?;
            if outcome.params() != params {
                return Err(Error::Inconsistent(format!(
                    "outcome {outcome} does not have shape {params}"
                )));
            }
            if row.hits == 0 {
                return Err(Error::Inconsistent(format!(
                    "{outcome} listed with zero hits"
                )));
            }
            let tally = OutcomeTally::for_outcome(&outcome, row.hits);
            if tally.is_syt != row.is_syt || tally.is_totally_sorted != row.is_totally_sorted {
                return Err(Error::Inconsistent(format!("flags of {outcome} are wrong")));
            }
            sum = sum
                .checked_add(row.hits)
                .ok_or_else(|| Error::Inconsistent("hit counts overflow".into()))?;
            if per_outcome.insert(outcome.clone(), tally).is_some() {
                return Err(Error::Inconsistent(format!("{outcome} listed twice")));
            }
        }
        if sum != wire.trials {
            return Err(Error::Inconsistent(format!(
                "hits sum to {sum}, trials is {}",
                wire.trials
            )));
        }
        let report = FrequencyReport {
            params,
            trials: wire.trials,
            seed: wire.seed,
            per_outcome,
        };
        if report.totally_sorted_is_mode() != wire.totally_sorted_is_mode
            || report.syt_outcomes_dominate() != wire.syt_outcomes_dominate
        {
            return Err(Error::Inconsistent(
                "summary annotations disagree with tallies".into(),
            ));
        }
        Ok(report)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrequencyWire {
    k: u32,
    m: u32,
    trials: u64,
    seed: u64,
    outcomes: Vec<FrequencyRow>,
    totally_sorted_is_mode: bool,
    syt_outcomes_dominate: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FrequencyRow {
    branches: Vec<Vec<Label>>,
    hits: u64,
    is_syt: bool,
    is_totally_sorted: bool,
}

impl From<&FrequencyReport> for FrequencyWire {
    fn from(r: &FrequencyReport) -> Self {
        FrequencyWire {
            k: r.params.k(),
            m: r.params.m(),
            trials: r.trials,
            seed: r.seed,
            outcomes: r
                .rows_by_hits()
                .into_iter()
                .map(|(o, t)| FrequencyRow {
                    branches: o.rows().to_vec(),
                    hits: t.hits,
                    is_syt: t.is_syt,
                    is_totally_sorted: t.is_totally_sorted,
                })
                .collect(),
            totally_sorted_is_mode: r.totally_sorted_is_mode(),
            syt_outcomes_dominate: r.syt_outcomes_dominate(),
        }
    }
}
