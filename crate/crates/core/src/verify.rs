//! Checks on recorded stabilization sequences of `Δ^{k,m}` and on their
//! outcomes: the ordering of endgame fires, the mixing of center fires, and
//! the sortedness of branches and rims.
//!
//! A fire reference `v^f` is the `f`-th-last fire of `v` (`f = 0` is the
//! last). The endgame fires of a level-`j` vertex are its final `m - j`
//! fires. In a poset relation `a ≤ b`, `b` must occur before `a`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{expected_fire_count, SequenceLog};
use crate::error::{Error, Result};
use crate::outcome::StableOutcome;
use crate::star::{LabeledConfig, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FireRef {
    pub vertex: Vertex,
    /// Reverse index: 0 is the last fire of `vertex`.
    pub f: u32,
}

impl FireRef {
    pub fn new(vertex: Vertex, f: u32) -> Self {
        FireRef { vertex, f }
    }

    /// Endgame iff `f <= m - j - 1`.
    pub fn is_endgame(&self, m: u32) -> bool {
        let j = self.vertex.level();
        j < m && self.f < m - j
    }
}

impl fmt::Display for FireRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.vertex, self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
    /// The two fires involved, for ordering rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fires: Option<[FireRef; 2]>,
    /// Outcome coordinates `(branch, level)`, for outcome rules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<[u32; 2]>,
}

impl Violation {
    pub fn new(rule: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation {
            rule: rule.into(),
            detail: detail.into(),
            fires: None,
            cell: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl VerifierReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        VerifierReport {
            passed: violations.is_empty(),
            violations,
        }
    }

    pub fn merge(mut self, other: VerifierReport) -> Self {
        self.violations.extend(other.violations);
        self.passed = self.violations.is_empty();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: VerifierReport =
            serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        if r.passed != r.violations.is_empty() {
            return Err(Error::parse(1, "`passed` disagrees with `violations`"));
        }
        Ok(r)
    }
}

/// Index in the log of every endgame fire. Fails when the log's per-vertex
/// counts differ from the closed-form counts for `Δ^{k,m}`.
pub fn endgame_positions(log: &SequenceLog) -> Result<BTreeMap<FireRef, usize>> {
    let params = log.params();
    let m = params.m();
    let mut positions: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (t, mv) in log.moves().iter().enumerate() {
        positions.entry(mv.vertex).or_default().push(t);
    }
    for (&v, ts) in &positions {
        let want = expected_fire_count(params, v);
        if ts.len() as u64 != want {
            return Err(Error::Inconsistent(format!(
                "{v} fired {} times, expected {want}",
                ts.len()
            )));
        }
    }
    let mut expected_vertices = vec![Vertex::Center];
    for i in 1..=params.k() {
        expected_vertices.extend((1..m).map(|j| Vertex::branch(i, j)));
    }
    if let Some(v) = expected_vertices
        .iter()
        .find(|v| !positions.contains_key(v))
    {
        return Err(Error::Inconsistent(format!(
            "{v} never fired, expected {}",
            expected_fire_count(params, *v)
        )));
    }

    let mut out = BTreeMap::new();
    for (v, ts) in positions {
        let endgame = m - v.level();
        for f in 0..endgame {
            out.insert(FireRef::new(v, f), ts[ts.len() - 1 - f as usize]);
        }
    }
    Ok(out)
}

/// Replays `log` from `Δ^{k,m}`, returning the configuration before each move.
fn states_before(log: &SequenceLog) -> std::result::Result<Vec<LabeledConfig>, Violation> {
    let mut cur = LabeledConfig::initial(log.params());
    let mut out = Vec::with_capacity(log.len());
    for (t, mv) in log.moves().iter().enumerate() {
        let next = cur
            .apply(mv)
            .map_err(|e| Violation::new("replay", format!("step {}: {e}", t + 1)))?;
        out.push(std::mem::replace(&mut cur, next));
    }
    if !cur.is_stable() {
        return Err(Violation::new("replay", "log does not end stable"));
    }
    Ok(out)
}

/// Checks the endgame ordering relations and that every endgame fire happens
/// with exactly degree-many chips on its vertex.
///
/// Relations, for an endgame fire `v_{i,j}^f`:
/// * `1a`, `j > 0`: `v_{i,j-1}^{f+1}` and (when endgame) `v_{i,j+1}^f` come first;
/// * `1b`, `j = 0`, `f < m-1`: `v_{i,1}^f` comes first for every branch `i`;
/// * `2`: exactly `deg(v)` chips are present at the fire.
pub fn verify_poset(log: &SequenceLog) -> VerifierReport {
    let params = log.params();
    let (k, m) = (params.k(), params.m());
    let pos = match endgame_positions(log) {
        Ok(p) => p,
        Err(e) => {
            return VerifierReport::from_violations(vec![Violation::new("counts", e.to_string())])
        }
    };
    let mut violations = Vec::new();
    let mut before = |rule: &str, earlier: FireRef, later: FireRef| {
        let (Some(&te), Some(&tl)) = (pos.get(&earlier), pos.get(&later)) else {
            return;
        };
        if te >= tl {
            violations.push(Violation {
                rule: rule.to_string(),
                detail: format!(
                    "{earlier} (step {}) must precede {later} (step {})",
                    te + 1,
                    tl + 1
                ),
                fires: Some([earlier, later]),
                cell: None,
            });
        }
    };

    for &fire in pos.keys() {
        let FireRef { vertex, f } = fire;
        match vertex {
            Vertex::Center => {
                if f + 1 < m {
                    for i in 1..=k {
                        before("1b", FireRef::new(Vertex::branch(i, 1), f), fire);
                    }
                }
            }
            Vertex::Branch { branch, level } => {
                let inner = if level == 1 {
                    Vertex::Center
                } else {
                    Vertex::branch(branch, level - 1)
                };
                let inner = FireRef::new(inner, f + 1);
                if inner.is_endgame(m) {
                    before("1a", inner, fire);
                }
                let outer = FireRef::new(Vertex::branch(branch, level + 1), f);
                if outer.is_endgame(m) {
                    before("1a", outer, fire);
                }
            }
        }
    }

    // Chip counts need a legal replay; ordering does not.
    let states = match states_before(log) {
        Ok(s) => s,
        Err(v) => {
            violations.push(v);
            return VerifierReport::from_violations(violations);
        }
    };
    for (&fire, &t) in &pos {
        let present = states[t].count(fire.vertex);
        let deg = params.degree(fire.vertex).expect("vertex from a legal log") as usize;
        if present != deg {
            violations.push(Violation {
                rule: "2".into(),
                detail: format!(
                    "{fire} (step {}) fired with {present} chips, degree {deg}",
                    t + 1
                ),
                fires: Some([fire, fire]),
                cell: None,
            });
        }
    }
    VerifierReport::from_violations(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingMode {
    /// Each endgame center fire sends a strictly smaller chip to a branch
    /// than the endgame center fire before it.
    Strict,
    /// Smaller or equal. This is the form that holds on every recorded
    /// sequence: a branch may receive back the chip it just returned.
    #[default]
    NonStrict,
}

/// Chips sent to each branch by the endgame center fires, in time order.
/// Row `i` is branch `i+1`.
pub fn endgame_center_deliveries(log: &SequenceLog) -> Result<Vec<Vec<u32>>> {
    let pos = endgame_positions(log)?;
    let m = log.params().m();
    let k = log.params().k() as usize;
    let mut rows = vec![Vec::with_capacity(m as usize); k];
    for f in (0..m).rev() {
        let t = pos[&FireRef::new(Vertex::Center, f)];
        for (i, &c) in log.moves()[t].chips.iter().enumerate() {
            rows[i].push(c);
        }
    }
    Ok(rows)
}

/// Checks that successive endgame center fires send decreasing chips to
/// every branch, strictly or not per `mode`.
pub fn verify_mixing(log: &SequenceLog, mode: MixingMode) -> VerifierReport {
    let rows = match endgame_center_deliveries(log) {
        Ok(r) => r,
        Err(e) => {
            return VerifierReport::from_violations(vec![Violation::new("counts", e.to_string())])
        }
    };
    if let Err(v) = states_before(log) {
        return VerifierReport::from_violations(vec![v]);
    }
    let m = log.params().m();
    let mut violations = Vec::new();
    for (i, sent) in rows.iter().enumerate() {
        for (n, w) in sent.windows(2).enumerate() {
            let ok = match mode {
                MixingMode::Strict => w[1] < w[0],
                MixingMode::NonStrict => w[1] <= w[0],
            };
            if !ok {
                let earlier = FireRef::new(Vertex::Center, m - 1 - n as u32);
                let later = FireRef::new(Vertex::Center, m - 2 - n as u32);
                violations.push(Violation {
                    rule: match mode {
                        MixingMode::Strict => "mixing-strict",
                        MixingMode::NonStrict => "mixing",
                    }
                    .into(),
                    detail: format!(
                        "branch {}: {earlier} sent {} then {later} sent {}",
                        i + 1,
                        w[0],
                        w[1]
                    ),
                    fires: Some([earlier, later]),
                    cell: None,
                });
            }
        }
    }
    VerifierReport::from_violations(violations)
}

/// Every branch increases from the center outward.
pub fn verify_branch_sorted(outcome: &StableOutcome) -> bool {
    outcome
        .rows()
        .iter()
        .all(|r| r.windows(2).all(|w| w[0] < w[1]))
}

/// Level 1 and level `m` increase with the branch index.
pub fn verify_rim_sorted(outcome: &StableOutcome) -> bool {
    let m = outcome.m();
    [1, m].iter().all(|&j| {
        let col = outcome.column(j);
        col.windows(2).all(|w| w[0] < w[1])
    })
}

/// Both outcome checks, with the offending coordinates.
pub fn verify_outcome(outcome: &StableOutcome) -> VerifierReport {
    let mut violations = Vec::new();
    for (i, row) in outcome.rows().iter().enumerate() {
        for (j, w) in row.windows(2).enumerate() {
            if w[0] >= w[1] {
                violations.push(Violation {
                    rule: "branch-sorted".into(),
                    detail: format!(
                        "B({},{}) = {} >= B({},{}) = {}",
                        i + 1,
                        j + 1,
                        w[0],
                        i + 1,
                        j + 2,
                        w[1]
                    ),
                    fires: None,
                    cell: Some([i as u32 + 1, j as u32 + 1]),
                });
            }
        }
    }
    let m = outcome.m();
    let rim = if m == 1 { vec![1] } else { vec![1, m] };
    for j in rim {
        for (i, w) in outcome.column(j).windows(2).enumerate() {
            if w[0] >= w[1] {
                violations.push(Violation {
                    rule: "rim-sorted".into(),
                    detail: format!("B({},{j}) = {} >= B({},{j}) = {}", i + 1, w[0], i + 2, w[1]),
                    fires: None,
                    cell: Some([i as u32 + 1, j]),
                });
            }
        }
    }
    VerifierReport::from_violations(violations)
}
