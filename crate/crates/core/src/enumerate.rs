//! Exhaustive enumeration of stabilization sequences of `Δ^{k,m}`.
//!
//! Every stabilization sequence of `Δ^{k,m}` has the same length, and the
//! number of moves that lead to a configuration is fixed by its chip counts.
//! Configurations therefore fall into layers by depth, and the number of
//! sequences reaching each one is the sum over its predecessors. The search
//! walks the layers forward with one map per layer from canonical state to
//! sequence count; stable states collect into the per-outcome totals.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::StableOutcome;
use crate::packed::{Layout, PackedMove, PackedState};
use crate::star::{Label, LabeledConfig, Move, StarParams, Vertex};

/// Limits on an exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBudget {
    /// Largest `k·m` accepted; `None` lifts the cap.
    pub max_chips: Option<u32>,
    /// Largest number of distinct states visited over all layers.
    pub max_states: u64,
    /// Expand each layer on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl EnumBudget {
    /// Full enumeration: `k·m <= 8`.
    pub const ALL: EnumBudget = EnumBudget {
        max_chips: Some(8),
        max_states: 50_000_000,
        parallel: false,
    };

    /// Volatility-minimizing search, much narrower: `k·m <= 12`.
    pub const VOLMIN: EnumBudget = EnumBudget {
        max_chips: Some(12),
        max_states: 50_000_000,
        parallel: false,
    };

    /// No chip cap, only a state ceiling.
    pub fn states(max_states: u64) -> Self {
        EnumBudget {
            max_chips: None,
            max_states,
            parallel: false,
        }
    }

    pub fn parallel(self, parallel: bool) -> Self {
        EnumBudget { parallel, ..self }
    }

    fn check_params(&self, params: StarParams) -> Result<()> {
        match self.max_chips {
            Some(cap) if params.n() > cap => Err(Error::Budget {
                what: "chip",
                detail: format!("k*m = {} exceeds the cap of {cap} for {params}", params.n()),
            }),
            _ => Ok(()),
        }
    }
}

impl Default for EnumBudget {
    fn default() -> Self {
        EnumBudget::ALL
    }
}

/// Reachable outcomes and the number of distinct sequences to each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub params: StarParams,
    pub per_outcome: BTreeMap<StableOutcome, BigUint>,
    pub total_sequences: BigUint,
}

/// Counters from a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub layers: usize,
    pub states: u64,
    pub widest_layer: usize,
}

impl EnumerationResult {
    pub fn outcomes(&self) -> BTreeSet<StableOutcome> {
        self.per_outcome.keys().cloned().collect()
    }

    /// Outcomes by ascending sequence count, ties by the outcome itself.
    pub fn rows_by_count(&self) -> Vec<(&StableOutcome, &BigUint)> {
        let mut rows: Vec<_> = self.per_outcome.iter().collect();
        rows.sort_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EnumerationWire::from(self)).expect("result serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&EnumerationWire::from(self)).expect("result serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: EnumerationWire =
            serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        wire.try_into()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeWire {
    branches: Vec<Vec<Label>>,
    sequence_count: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerationWire {
    k: u32,
    m: u32,
    outcomes: Vec<OutcomeWire>,
    total_sequences: String,
}

impl From<&EnumerationResult> for EnumerationWire {
    fn from(r: &EnumerationResult) -> Self {
        EnumerationWire {
            k: r.params.k(),
            m: r.params.m(),
            outcomes: r
                .rows_by_count()
                .into_iter()
                .map(|(o, c)| OutcomeWire {
                    branches: o.rows().to_vec(),
                    sequence_count: c.to_string(),
                })
                .collect(),
            total_sequences: r.total_sequences.to_string(),
        }
    }
}

fn parse_count(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(1, format!("`{s}` is not a decimal count")));
    }
    s.parse()
        .map_err(|_| Error::parse(1, format!("`{s}` is not a decimal count")))
}

impl TryFrom<EnumerationWire> for EnumerationResult {
    type Error = Error;

    fn try_from(w: EnumerationWire) -> Result<Self> {
        let params = StarParams::new(w.k, w.m).map_err(|e| Error::parse(1, e.to_string()))?;
        let mut per_outcome = BTreeMap::new();
        for o in w.outcomes {
            let outcome =
                StableOutcome::new(o.branches).map_err(|e| Error::parse(1, e.to_string()))?;
            if outcome.params() != params {
                return Err(Error::parse(
                    1,
                    format!("outcome {outcome} is not {params}"),
                ));
            }
            let count = parse_count(&o.sequence_count)?;
            if per_outcome.insert(outcome.clone(), count).is_some() {
                return Err(Error::parse(1, format!("outcome {outcome} listed twice")));
            }
        }
        let total_sequences = parse_count(&w.total_sequences)?;
        let sum: BigUint = per_outcome.values().sum();
        if sum != total_sequences {
            return Err(Error::parse(
                1,
                format!("total_sequences {total_sequences} differs from the sum {sum}"),
            ));
        }
        Ok(EnumerationResult {
            params,
            per_outcome,
            total_sequences,
        })
    }
}

#[derive(Clone, Copy)]
enum Rule {
    All,
    VolMin,
}

type Layer = HashMap<PackedState, BigUint>;

fn expand_into(
    lay: &Layout,
    rule: Rule,
    state: &PackedState,
    count: &BigUint,
    next: &mut Layer,
    finals: &mut Vec<(PackedState, BigUint)>,
) -> Result<()> {
    let moves: Vec<PackedMove> = match rule {
        Rule::All => lay.legal_moves(state),
        Rule::VolMin => lay.volmin_moves(state),
    };
    if moves.is_empty() {
        finals.push((state.clone(), count.clone()));
        return Ok(());
    }
    for mv in &moves {
        let s = lay.apply(state, mv)?;
        match next.get_mut(&s) {
            Some(c) => *c += count,
            None => {
                next.insert(s, count.clone());
            }
        }
    }
    Ok(())
}

fn search(
    params: StarParams,
    rule: Rule,
    budget: EnumBudget,
) -> Result<(BTreeMap<StableOutcome, BigUint>, SearchStats)> {
    budget.check_params(params)?;
    let lay = Layout::new(params)?;
    let mut layer: Layer = HashMap::new();
    layer.insert(lay.initial(), BigUint::one());
    let mut stats = SearchStats {
        layers: 0,
        states: 1,
        widest_layer: 1,
    };
    let mut finals: Vec<(PackedState, BigUint)> = Vec::new();

    while !layer.is_empty() {
        let (next, mut done) = if budget.parallel {
            let entries: Vec<(PackedState, BigUint)> = layer.into_iter().collect();
            entries
                .par_chunks(4096)
                .map(|chunk| {
                    let mut next = Layer::new();
                    let mut done = Vec::new();
                    for (s, c) in chunk {
                        expand_into(&lay, rule, s, c, &mut next, &mut done)?;
                    }
                    Ok((next, done))
                })
                .try_reduce(
                    || (Layer::new(), Vec::new()),
                    |(a, mut da), (b, db)| {
                        let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
                        for (s, c) in small {
                            *big.entry(s).or_insert_with(BigUint::zero) += c;
                        }
                        da.extend(db);
                        Ok((big, da))
                    },
                )?
        } else {
            let mut next = Layer::new();
            let mut done = Vec::new();
            for (s, c) in &layer {
                expand_into(&lay, rule, s, c, &mut next, &mut done)?;
            }
            (next, done)
        };
        finals.append(&mut done);
        stats.layers += 1;
        stats.states += next.len() as u64;
        stats.widest_layer = stats.widest_layer.max(next.len());
        if stats.states > budget.max_states {
            return Err(Error::Budget {
                what: "state",
                detail: format!(
                    "{params}: more than {} states after {} layers",
                    budget.max_states, stats.layers
                ),
            });
        }
        layer = next;
    }

    let mut per_outcome: BTreeMap<StableOutcome, BigUint> = BTreeMap::new();
    for (s, c) in finals {
        let outcome = lay.unpack(params, &s).canonical_outcome()?;
        *per_outcome.entry(outcome).or_insert_with(BigUint::zero) += c;
    }
    Ok((per_outcome, stats))
}

/// Every stabilization sequence of `Δ^{k,m}`, counted per outcome. Two moves
/// differ when their vertex or chip set differs.
pub fn enumerate_all(params: StarParams, budget: EnumBudget) -> Result<EnumerationResult> {
    enumerate_all_with_stats(params, budget).map(|(r, _)| r)
}

pub fn enumerate_all_with_stats(
    params: StarParams,
    budget: EnumBudget,
) -> Result<(EnumerationResult, SearchStats)> {
    let (per_outcome, stats) = search(params, Rule::All, budget)?;
    let total_sequences = per_outcome.values().sum();
    Ok((
        EnumerationResult {
            params,
            per_outcome,
            total_sequences,
        },
        stats,
    ))
}

/// The set of stable configurations reachable from `Δ^{k,m}`.
pub fn reachable_set(params: StarParams, budget: EnumBudget) -> Result<BTreeSet<StableOutcome>> {
    Ok(enumerate_all(params, budget)?.outcomes())
}

/// Volatility-minimizing moves: among fireable vertices keep those whose fire
/// leaves the fewest ready-to-fire vertices, then those furthest from the
/// center, and return every chip choice at the survivors.
pub fn volmin_allowed_moves(config: &LabeledConfig) -> Vec<Move> {
    let fireable = config.fireable();
    let base = config.unlabeled();
    let scored: Vec<(Vertex, usize)> = fireable
        .iter()
        .map(|&v| {
            let after = base.fire(v).expect("fireable vertex fires");
            (v, after.fireable().len())
        })
        .collect();
    let Some(best) = scored.iter().map(|&(_, r)| r).min() else {
        return Vec::new();
    };
    let far = scored
        .iter()
        .filter(|&&(_, r)| r == best)
        .map(|&(v, _)| v.level())
        .max()
        .expect("non-empty");
    let keep: BTreeSet<Vertex> = scored
        .into_iter()
        .filter(|&(v, r)| r == best && v.level() == far)
        .map(|(v, _)| v)
        .collect();
    config
        .legal_moves()
        .into_iter()
        .filter(|mv| keep.contains(&mv.vertex))
        .collect()
}

/// Outcomes reachable by volatility-minimizing sequences. Ties between
/// equally far vertices are all explored.
pub fn enumerate_volmin(params: StarParams, budget: EnumBudget) -> Result<BTreeSet<StableOutcome>> {
    enumerate_volmin_counts(params, budget).map(|r| r.outcomes())
}

/// Like [`enumerate_volmin`] but also counts the volatility-minimizing
/// sequences to each outcome.
pub fn enumerate_volmin_counts(
    params: StarParams,
    budget: EnumBudget,
) -> Result<EnumerationResult> {
    let (per_outcome, _) = search(params, Rule::VolMin, budget)?;
    let total_sequences = per_outcome.values().sum();
    Ok(EnumerationResult {
        params,
        per_outcome,
        total_sequences,
    })
}
