//! Vertices, configurations and single firing moves on `instar(k)`.
//!
//! `instar(k)` is k rays of infinitely many vertices glued at one center. A
//! branch vertex at distance `j` from the center on ray `i` is
//! [`Vertex::Branch`]; the center is a single [`Vertex::Center`] value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::StableOutcome;

/// A chip label. Labels of a configuration with `N` chips are exactly `1..=N`.
pub type Label = u32;

/// Branch count `k` and levels per branch `m` of a labeled start `Δ^{k,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StarParams {
    k: u32,
    m: u32,
}

impl StarParams {
    pub fn new(k: u32, m: u32) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidParams(format!(
                "k and m must both be at least 1 (got k={k}, m={m})"
            )));
        }
        if k.checked_mul(m).is_none_or(|n| n > u32::from(u16::MAX)) {
            return Err(Error::InvalidParams(format!(
                "k*m too large (k={k}, m={m})"
            )));
        }
        Ok(StarParams { k, m })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Total chip count `N = k·m`.
    pub fn n(&self) -> u32 {
        self.k * self.m
    }

    pub fn degree(&self, v: Vertex) -> Result<u32> {
        degree(self.k, v)
    }
}

impl fmt::Display for StarParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    Center,
    /// `branch` in `1..=k`, `level >= 1`.
    Branch {
        branch: u32,
        level: u32,
    },
}

impl Vertex {
    pub fn branch(branch: u32, level: u32) -> Vertex {
        Vertex::Branch { branch, level }
    }

    /// Distance from the center.
    pub fn level(&self) -> u32 {
        match *self {
            Vertex::Center => 0,
            Vertex::Branch { level, .. } => level,
        }
    }

    pub fn validate(&self, k: u32) -> Result<()> {
        match *self {
            Vertex::Center => Ok(()),
            Vertex::Branch { branch, level } if (1..=k).contains(&branch) && level >= 1 => Ok(()),
            v => Err(Error::InvalidVertex { vertex: v, k }),
        }
    }

    /// Neighbors in firing order: for the center, branch `i`'s level-1
    /// vertex at index `i-1`; for a branch vertex, `[inner, outer]`.
    pub fn neighbors(&self, k: u32) -> Vec<Vertex> {
        match *self {
            Vertex::Center => (1..=k).map(|i| Vertex::branch(i, 1)).collect(),
            Vertex::Branch { branch, level } => {
                let inner = if level == 1 {
                    Vertex::Center
                } else {
                    Vertex::branch(branch, level - 1)
                };
                vec![inner, Vertex::branch(branch, level + 1)]
            }
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Center => f.write_str("C"),
            Vertex::Branch { branch, level } => write!(f, "B({branch},{level})"),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "C" {
            return Ok(Vertex::Center);
        }
        let inner = s
            .strip_prefix("B(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, format!("bad vertex `{s}`")))?;
        let (i, j) = inner
            .split_once(',')
            .ok_or_else(|| Error::parse(0, format!("bad vertex `{s}`")))?;
        let branch: u32 = i
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad branch index in `{s}`")))?;
        let level: u32 = j
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad level in `{s}`")))?;
        if branch == 0 || level == 0 {
            return Err(Error::parse(
                0,
                format!("branch and level start at 1 in `{s}`"),
            ));
        }
        Ok(Vertex::Branch { branch, level })
    }
}

/// Number of neighbors: `k` at the center, 2 everywhere else.
pub fn degree(k: u32, v: Vertex) -> Result<u32> {
    v.validate(k)?;
    Ok(match v {
        Vertex::Center => k,
        Vertex::Branch { .. } => 2,
    })
}

/// One labeled fire: a vertex and the exact chips that leave it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub vertex: Vertex,
    /// Sorted ascending.
    pub chips: Vec<Label>,
}

impl Move {
    pub fn new(vertex: Vertex, chips: impl IntoIterator<Item = Label>) -> Move {
        let mut chips: Vec<Label> = chips.into_iter().collect();
        chips.sort_unstable();
        Move { vertex, chips }
    }

    pub fn center(chips: impl IntoIterator<Item = Label>) -> Move {
        Move::new(Vertex::Center, chips)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{{}}}", self.vertex, self.chips.iter().join(","))
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (v, rest) = s
            .trim()
            .rsplit_once(':')
            .ok_or_else(|| Error::parse(0, format!("missing `:` in move `{s}`")))?;
        let vertex: Vertex = v.parse()?;
        let body = rest
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::parse(0, format!("chip set must be braced in `{s}`")))?;
        if body.trim().is_empty() {
            return Err(Error::parse(
                0,
                format!("a move fires at least one chip: `{s}`"),
            ));
        }
        let mut chips = Vec::new();
        for tok in body.split(',') {
            let c: Label = tok
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad chip label `{}`", tok.trim())))?;
            chips.push(c);
        }
        let n = chips.len();
        chips.sort_unstable();
        chips.dedup();
        if chips.len() != n {
            return Err(Error::parse(0, format!("duplicate chip in `{s}`")));
        }
        Ok(Move { vertex, chips })
    }
}

/// Unlabeled chip counts. Only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnlabeledConfig {
    k: u32,
    counts: BTreeMap<Vertex, u64>,
}

impl UnlabeledConfig {
    /// `n` identical chips on the center of `instar(k)`.
    pub fn initial(k: u32, n: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        let mut counts = BTreeMap::new();
        if n > 0 {
            counts.insert(Vertex::Center, n);
        }
        Ok(UnlabeledConfig { k, counts })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn count(&self, v: Vertex) -> u64 {
        self.counts.get(&v).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<Vertex, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    fn degree_of(&self, v: Vertex) -> u64 {
        match v {
            Vertex::Center => u64::from(self.k),
            Vertex::Branch { .. } => 2,
        }
    }

    pub fn is_ready(&self, v: Vertex) -> bool {
        self.count(v) >= self.degree_of(v)
    }

    pub fn fireable(&self) -> Vec<Vertex> {
        self.counts
            .iter()
            .filter(|&(&v, &c)| c >= self.degree_of(v))
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.counts.iter().all(|(&v, &c)| c < self.degree_of(v))
    }

    pub fn fire(&self, v: Vertex) -> Result<Self> {
        let mut next = self.clone();
        next.fire_in_place(v)?;
        Ok(next)
    }

    pub(crate) fn fire_in_place(&mut self, v: Vertex) -> Result<()> {
        v.validate(self.k)?;
        let deg = self.degree_of(v);
        let have = self.count(v);
        if have < deg {
            return Err(Error::IllegalMove {
                vertex: v,
                chips: vec![],
                reason: format!("holds {have} chips, needs {deg}"),
            });
        }
        if have == deg {
            self.counts.remove(&v);
        } else {
            self.counts.insert(v, have - deg);
        }
        for u in v.neighbors(self.k) {
            *self.counts.entry(u).or_insert(0) += 1;
        }
        Ok(())
    }
}

/// Labeled chips on `instar(k)` starting from a `Δ^{k,m}` chip set.
///
/// The label sets over all vertices always partition `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledConfig {
    params: StarParams,
    chips: BTreeMap<Vertex, BTreeSet<Label>>,
}

impl LabeledConfig {
    /// `Δ^{k,m}`: all of `1..=km` on the center.
    pub fn initial(params: StarParams) -> Self {
        let mut chips = BTreeMap::new();
        chips.insert(Vertex::Center, (1..=params.n()).collect());
        LabeledConfig { params, chips }
    }

    /// Builds a configuration from explicit placements, checking that the
    /// labels partition `1..=N` and every vertex is on the star.
    pub fn from_placements(
        params: StarParams,
        placements: impl IntoIterator<Item = (Vertex, Vec<Label>)>,
    ) -> Result<Self> {
        let mut chips: BTreeMap<Vertex, BTreeSet<Label>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (v, labels) in placements {
            v.validate(params.k())?;
            for l in labels {
                if l == 0 || l > params.n() {
                    return Err(Error::Domain(format!(
                        "label {l} outside 1..={}",
                        params.n()
                    )));
                }
                if !seen.insert(l) {
                    return Err(Error::Domain(format!("label {l} placed twice")));
                }
                chips.entry(v).or_default().insert(l);
            }
        }
        if seen.len() as u32 != params.n() {
            let missing = (1..=params.n()).find(|l| !seen.contains(l)).unwrap_or(0);
            return Err(Error::Domain(format!("label {missing} is missing")));
        }
        chips.retain(|_, s| !s.is_empty());
        Ok(LabeledConfig { params, chips })
    }

    pub fn params(&self) -> StarParams {
        self.params
    }

    pub fn chips_at(&self, v: Vertex) -> Option<&BTreeSet<Label>> {
        self.chips.get(&v)
    }

    pub fn count(&self, v: Vertex) -> usize {
        self.chips.get(&v).map_or(0, BTreeSet::len)
    }

    /// Occupied vertices with their chips, center first then by `(branch, level)`.
    pub fn occupied(&self) -> impl Iterator<Item = (Vertex, &BTreeSet<Label>)> {
        self.chips.iter().map(|(&v, s)| (v, s))
    }

    fn degree_of(&self, v: Vertex) -> usize {
        match v {
            Vertex::Center => self.params.k() as usize,
            Vertex::Branch { .. } => 2,
        }
    }

    pub fn is_ready(&self, v: Vertex) -> bool {
        self.count(v) >= self.degree_of(v)
    }

    pub fn fireable(&self) -> Vec<Vertex> {
        self.chips
            .iter()
            .filter(|(&v, s)| s.len() >= self.degree_of(v))
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn is_stable(&self) -> bool {
        self.chips.iter().all(|(&v, s)| s.len() < self.degree_of(v))
    }

    /// Every legal move, vertices in [`Vertex`] order, chip subsets in
    /// lexicographic order.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for (&v, labels) in &self.chips {
            let deg = self.degree_of(v);
            if labels.len() < deg {
                continue;
            }
            out.extend(
                labels
                    .iter()
                    .copied()
                    .combinations(deg)
                    .map(|chips| Move { vertex: v, chips }),
            );
        }
        out
    }

    pub fn check_legal(&self, mv: &Move) -> Result<()> {
        let illegal = |reason: String| Error::IllegalMove {
            vertex: mv.vertex,
            chips: mv.chips.clone(),
            reason,
        };
        mv.vertex.validate(self.params.k())?;
        let deg = self.degree_of(mv.vertex);
        if mv.chips.len() != deg {
            return Err(illegal(format!(
                "fires {} chips, degree is {deg}",
                mv.chips.len()
            )));
        }
        if !mv.chips.windows(2).all(|w| w[0] < w[1]) {
            return Err(illegal("chip list must be strictly increasing".into()));
        }
        let here = self.chips.get(&mv.vertex);
        if let Some(c) = mv
            .chips
            .iter()
            .find(|c| here.is_none_or(|s| !s.contains(c)))
        {
            return Err(illegal(format!("chip {c} is not on the vertex")));
        }
        Ok(())
    }

    pub fn apply(&self, mv: &Move) -> Result<Self> {
        self.check_legal(mv)?;
        let mut next = self.clone();
        let here = next.chips.get_mut(&mv.vertex).expect("checked above");
        for c in &mv.chips {
            here.remove(c);
        }
        if here.is_empty() {
            next.chips.remove(&mv.vertex);
        }
        // Ascending chips map onto neighbors in order: center sends its i-th
        // smallest to branch i; a branch vertex sends the smaller inward.
        for (&c, u) in mv.chips.iter().zip(mv.vertex.neighbors(self.params.k())) {
            next.chips.entry(u).or_default().insert(c);
        }
        Ok(next)
    }

    /// Forgets labels.
    pub fn unlabeled(&self) -> UnlabeledConfig {
        UnlabeledConfig {
            k: self.params.k(),
            counts: self
                .chips
                .iter()
                .map(|(&v, s)| (v, s.len() as u64))
                .collect(),
        }
    }

    /// Reads a stable `Δ^{k,m}` endpoint as a `k×m` label matrix.
    ///
    /// Fails unless the configuration is stable with exactly one chip on each
    /// `B(i,j)`, `j <= m`, and nothing elsewhere.
    pub fn canonical_outcome(&self) -> Result<StableOutcome> {
        let (k, m) = (self.params.k(), self.params.m());
        let shape = |detail: String| Error::Shape { k, m, detail };
        if !self.is_stable() {
            return Err(shape(format!("not stable: {self}")));
        }
        let mut rows = vec![vec![0; m as usize]; k as usize];
        for (&v, labels) in &self.chips {
            match v {
                Vertex::Branch { branch, level } if level <= m && labels.len() == 1 => {
                    rows[branch as usize - 1][level as usize - 1] =
                        *labels.iter().next().expect("len 1");
                }
                _ => return Err(shape(format!("{v} holds {labels:?}"))),
            }
        }
        StableOutcome::new(rows).map_err(|e| shape(e.to_string()))
    }
}

impl fmt::Display for LabeledConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .chips
            .iter()
            .map(|(v, s)| format!("{v}:{{{}}}", s.iter().join(",")));
        write!(f, "{}", parts.format(" "))
    }
}

pub fn initial_labeled(params: StarParams) -> LabeledConfig {
    LabeledConfig::initial(params)
}

pub fn initial_unlabeled(k: u32, n: u64) -> Result<UnlabeledConfig> {
    UnlabeledConfig::initial(k, n)
}

pub fn legal_moves(config: &LabeledConfig) -> Vec<Move> {
    config.legal_moves()
}

pub fn apply_move(config: &LabeledConfig, mv: &Move) -> Result<LabeledConfig> {
    config.apply(mv)
}
