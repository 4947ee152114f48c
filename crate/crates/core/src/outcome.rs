use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::star::{Label, StarParams};

/// Final labels of a stabilized `Δ^{k,m}`: row `i` is branch `i+1`, read
/// from the center outward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct StableOutcome {
    rows: Vec<Vec<Label>>,
}

impl StableOutcome {
    /// Requires a non-empty rectangle whose entries are exactly `1..=k·m`.
    pub fn new(rows: Vec<Vec<Label>>) -> Result<Self> {
        check_permutation_grid(&rows)?;
        Ok(StableOutcome { rows })
    }

    /// Branch `i` holds `(i-1)m+1 ..= im`.
    pub fn totally_sorted(params: StarParams) -> Self {
        let m = params.m();
        let rows = (0..params.k())
            .map(|i| (i * m + 1..=(i + 1) * m).collect())
            .collect();
        StableOutcome { rows }
    }

    pub fn k(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn m(&self) -> u32 {
        self.rows[0].len() as u32
    }

    pub fn params(&self) -> StarParams {
        StarParams::new(self.k(), self.m()).expect("validated on construction")
    }

    pub fn rows(&self) -> &[Vec<Label>] {
        &self.rows
    }

    /// Label on branch `branch` (1-based) at level `level` (1-based).
    pub fn at(&self, branch: u32, level: u32) -> Label {
        self.rows[branch as usize - 1][level as usize - 1]
    }

    pub fn column(&self, level: u32) -> Vec<Label> {
        self.rows.iter().map(|r| r[level as usize - 1]).collect()
    }

    pub fn is_totally_sorted(&self) -> bool {
        *self == StableOutcome::totally_sorted(self.params())
    }

    pub fn into_rows(self) -> Vec<Vec<Label>> {
        self.rows
    }
}

pub(crate) fn check_permutation_grid(rows: &[Vec<Label>]) -> Result<()> {
    let k = rows.len();
    if k == 0 || rows[0].is_empty() {
        return Err(Error::Domain(
            "grid must have at least one row and column".into(),
        ));
    }
    let m = rows[0].len();
    if let Some(i) = rows.iter().position(|r| r.len() != m) {
        return Err(Error::Domain(format!(
            "row {} has {} entries, expected {m}",
            i + 1,
            rows[i].len()
        )));
    }
    let n = k
        .checked_mul(m)
        .filter(|&n| n <= usize::from(u16::MAX))
        .ok_or_else(|| Error::Domain("grid too large".into()))?;
    let mut seen = vec![false; n + 1];
    for &l in rows.iter().flatten() {
        let l = l as usize;
        if l == 0 || l > n {
            return Err(Error::Domain(format!("label {l} outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[l], true) {
            return Err(Error::Domain(format!("label {l} appears twice")));
        }
    }
    Ok(())
}

impl TryFrom<Vec<Vec<Label>>> for StableOutcome {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Label>>) -> Result<Self> {
        StableOutcome::new(rows)
    }
}

impl From<StableOutcome> for Vec<Vec<Label>> {
    fn from(o: StableOutcome) -> Self {
        o.rows
    }
}

/// Branch lists center-outward: `[1,3],[2,4]`.
impl fmt::Display for StableOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().join(",")));
        write!(f, "{}", rows.format(","))
    }
}

/// Accepts the bracket form with arbitrary whitespace, e.g. `[1, 3], [2, 4]`.
impl FromStr for StableOutcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut rest = s.trim();
        loop {
            rest = rest
                .strip_prefix('[')
                .ok_or_else(|| Error::parse(1, format!("expected `[` at `{rest}`")))?;
            let close = rest
                .find(']')
                .ok_or_else(|| Error::parse(1, "unterminated `[`"))?;
            let row = rest[..close]
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Label>()
                        .map_err(|_| Error::parse(1, format!("bad label `{}`", t.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
            rest = rest[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix(',')
                .ok_or_else(|| Error::parse(1, format!("expected `,` at `{rest}`")))?
                .trim_start();
        }
        StableOutcome::new(rows).map_err(|e| Error::parse(1, e.to_string()))
    }
}
