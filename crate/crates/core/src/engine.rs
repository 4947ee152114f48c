//! Driving configurations to stability and recording what fired.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::volmin_allowed_moves;
use crate::error::{Error, Result};
use crate::outcome::StableOutcome;
use crate::star::{LabeledConfig, Move, StarParams, UnlabeledConfig, Vertex};

/// An ordered list of labeled fires together with per-vertex totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceLog {
    params: StarParams,
    moves: Vec<Move>,
    fire_counts: BTreeMap<Vertex, usize>,
}

impl SequenceLog {
    pub fn new(params: StarParams) -> Self {
        SequenceLog {
            params,
            moves: Vec::new(),
            fire_counts: BTreeMap::new(),
        }
    }

    /// Wraps an existing move list without checking legality; see [`replay`].
    pub fn from_moves(params: StarParams, moves: Vec<Move>) -> Self {
        let mut log = SequenceLog::new(params);
        for mv in moves {
            log.push(mv);
        }
        log
    }

    pub fn push(&mut self, mv: Move) {
        *self.fire_counts.entry(mv.vertex).or_insert(0) += 1;
        self.moves.push(mv);
    }

    pub fn params(&self) -> StarParams {
        self.params
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn fire_counts(&self) -> &BTreeMap<Vertex, usize> {
        &self.fire_counts
    }

    pub fn fire_count(&self, v: Vertex) -> usize {
        self.fire_counts.get(&v).copied().unwrap_or(0)
    }

    /// One move per line, `C:{a,b,...}` or `B(i,j):{a,b}`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for mv in &self.moves {
            s.push_str(&mv.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the line format of [`SequenceLog::to_text`]. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse_text(params: StarParams, text: &str) -> Result<Self> {
        Ok(SequenceLog::from_moves(params, parse_moves(text)?))
    }
}

impl fmt::Display for SequenceLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parses a line-oriented move script.
pub fn parse_moves(text: &str) -> Result<Vec<Move>> {
    let mut moves = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mv = line.parse::<Move>().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(i + 1, msg),
            other => other,
        })?;
        moves.push(mv);
    }
    Ok(moves)
}

/// How [`stabilize_labeled`] picks the next fire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    /// Always the first entry of [`LabeledConfig::legal_moves`].
    Deterministic,
    /// A uniformly random fireable vertex, then a uniformly random
    /// degree-sized subset of its chips.
    RandomUniform { seed: u64 },
    /// Uniform over the volatility-minimizing moves.
    VolatilityMinimizing { seed: u64 },
}

impl StrategyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyKind::Deterministic => "det",
            StrategyKind::RandomUniform { .. } => "random",
            StrategyKind::VolatilityMinimizing { .. } => "volmin",
        }
    }
}

/// Fires of `v` in any stabilization of `[Δ^{k,m}]`: `(m-j)(m-j+1)/2` for
/// levels `j < m`, none beyond.
pub fn expected_fire_count(params: StarParams, v: Vertex) -> u64 {
    let (m, j) = (u64::from(params.m()), u64::from(v.level()));
    if j >= m {
        0
    } else {
        (m - j) * (m - j + 1) / 2
    }
}

/// `m(m+1)/2 + k(m-1)m(m+1)/6`.
pub fn expected_total_fires(params: StarParams) -> u64 {
    let (k, m) = (u64::from(params.k()), u64::from(params.m()));
    m * (m + 1) / 2 + k * (m - 1) * m * (m + 1) / 6
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledStabilization {
    pub config: UnlabeledConfig,
    pub fire_counts: BTreeMap<Vertex, u64>,
    pub total_fires: u64,
}

/// Stabilizes `n` unlabeled chips on the center of `instar(k)`, sweeping
/// center-outward and firing each ready vertex once per sweep.
pub fn stabilize_unlabeled(k: u32, n: u64) -> Result<UnlabeledStabilization> {
    let mut config = UnlabeledConfig::initial(k, n)?;
    let mut fire_counts = BTreeMap::new();
    let mut total_fires = 0u64;
    loop {
        let mut wave = config.fireable();
        if wave.is_empty() {
            break;
        }
        wave.sort_by_key(|v| (v.level(), *v));
        for v in wave {
            if config.is_ready(v) {
                config.fire_in_place(v)?;
                *fire_counts.entry(v).or_insert(0) += 1;
                total_fires += 1;
            }
        }
    }
    Ok(UnlabeledStabilization {
        config,
        fire_counts,
        total_fires,
    })
}

fn move_ceiling(params: StarParams) -> usize {
    (10 * expected_total_fires(params)).max(1000) as usize
}

fn random_subset_move(config: &LabeledConfig, rng: &mut ChaCha8Rng) -> Move {
    let fireable = config.fireable();
    let v = fireable[rng.random_range(0..fireable.len())];
    let chips: Vec<_> = config
        .chips_at(v)
        .expect("fireable")
        .iter()
        .copied()
        .collect();
    let deg = config.params().degree(v).expect("valid vertex") as usize;
    Move::new(
        v,
        index::sample(rng, chips.len(), deg)
            .into_iter()
            .map(|i| chips[i]),
    )
}

/// Fires until stable using `strategy`; the log replays to the outcome.
pub fn stabilize_labeled(
    config: &LabeledConfig,
    strategy: StrategyKind,
) -> Result<(StableOutcome, SequenceLog)> {
    let params = config.params();
    let mut rng = match strategy {
        StrategyKind::Deterministic => None,
        StrategyKind::RandomUniform { seed } | StrategyKind::VolatilityMinimizing { seed } => {
            Some(ChaCha8Rng::seed_from_u64(seed))
        }
    };
    let ceiling = move_ceiling(params);
    let mut log = SequenceLog::new(params);
    let mut cur = config.clone();
    while !cur.is_stable() {
        if log.len() >= ceiling {
            return Err(Error::NoTermination {
                moves: log.len(),
                ceiling,
            });
        }
        let mv = match (strategy, rng.as_mut()) {
            (StrategyKind::RandomUniform { .. }, Some(rng)) => random_subset_move(&cur, rng),
            (StrategyKind::VolatilityMinimizing { .. }, Some(rng)) => {
                let mut allowed = volmin_allowed_moves(&cur);
                let i = rng.random_range(0..allowed.len());
                allowed.swap_remove(i)
            }
            _ => cur.legal_moves().into_iter().next().expect("unstable"),
        };
        cur = cur.apply(&mv)?;
        log.push(mv);
    }
    Ok((cur.canonical_outcome()?, log))
}

/// Where a [`replay`] ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayEnd {
    Stable(StableOutcome),
    /// Still unstable, or stable in a shape that is not a `Δ^{k,m}` endpoint.
    Config(LabeledConfig),
}

impl ReplayEnd {
    pub fn outcome(&self) -> Option<&StableOutcome> {
        match self {
            ReplayEnd::Stable(o) => Some(o),
            ReplayEnd::Config(_) => None,
        }
    }
}

/// Applies `moves` to `Δ^{k,m}` one at a time. Step numbers in errors are
/// 1-based.
pub fn replay(params: StarParams, moves: &[Move]) -> Result<(ReplayEnd, SequenceLog)> {
    let mut cur = LabeledConfig::initial(params);
    let mut log = SequenceLog::new(params);
    for (t, mv) in moves.iter().enumerate() {
        cur = cur.apply(mv).map_err(|e| Error::Replay {
            step: t + 1,
            mv: mv.clone(),
            config: cur.to_string(),
            source: Box::new(e),
        })?;
        log.push(mv.clone());
    }
    let end = if cur.is_stable() {
        match cur.canonical_outcome() {
            Ok(o) => ReplayEnd::Stable(o),
            Err(_) => ReplayEnd::Config(cur),
        }
    } else {
        ReplayEnd::Config(cur)
    };
    Ok((end, log))
}
