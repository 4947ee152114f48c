//! Rectangular Young tableaux: rows are branches, columns are levels.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::{check_permutation_grid, StableOutcome};
use crate::star::{Label, Move, StarParams, Vertex};

/// A `k×m` grid holding each of `1..=km` once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct Tableau {
    rows: Vec<Vec<Label>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<Label>>) -> Result<Self> {
        check_permutation_grid(&rows)?;
        Ok(Tableau { rows })
    }

    pub fn k(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn m(&self) -> u32 {
        self.rows[0].len() as u32
    }

    pub fn rows(&self) -> &[Vec<Label>] {
        &self.rows
    }

    /// 1-based column.
    pub fn column(&self, j: u32) -> Vec<Label> {
        self.rows.iter().map(|r| r[j as usize - 1]).collect()
    }

    fn column_increasing(&self, j: u32) -> bool {
        self.column(j).windows(2).all(|w| w[0] < w[1])
    }

    fn rows_increasing(&self) -> bool {
        self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
    }

    /// Columns (1-based) that fail to increase top to bottom.
    pub fn non_increasing_columns(&self) -> Vec<u32> {
        (1..=self.m())
            .filter(|&j| !self.column_increasing(j))
            .collect()
    }

    /// Rows and columns strictly increase.
    pub fn is_standard(&self) -> bool {
        self.rows_increasing() && self.non_increasing_columns().is_empty()
    }

    /// Rows strictly increase, as do the first and last columns.
    pub fn is_row_and_rim_sorted(&self) -> bool {
        self.rows_increasing() && self.column_increasing(1) && self.column_increasing(self.m())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tableau serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))
    }
}

impl TryFrom<Vec<Vec<Label>>> for Tableau {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Label>>) -> Result<Self> {
        Tableau::new(rows)
    }
}

impl From<Tableau> for Vec<Vec<Label>> {
    fn from(t: Tableau) -> Self {
        t.rows
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = (self.k() * self.m()).to_string().len();
        for row in &self.rows {
            writeln!(f, "{}", row.iter().map(|x| format!("{x:>w$}")).join(" "))?;
        }
        Ok(())
    }
}

/// Parses a JSON array of tableaux, e.g. `[[[1,2],[3,4]], ...]`.
pub fn tableaux_from_json(s: &str) -> Result<Vec<Tableau>> {
    serde_json::from_str(s).map_err(|e| Error::parse(e.line(), e.to_string()))
}

/// Reads an outcome as a tableau, entry `(i,j)` being the chip on `B(i,j)`.
pub fn from_outcome(outcome: &StableOutcome) -> Tableau {
    Tableau {
        rows: outcome.rows().to_vec(),
    }
}

/// Places entry `(i,j)` of a standard tableau on `B(i,j)`.
pub fn to_outcome(t: &Tableau) -> Result<StableOutcome> {
    if !t.is_standard() {
        return Err(Error::NonStandard(format!(
            "rows {:?}, bad columns {:?}",
            t.rows,
            t.non_increasing_columns()
        )));
    }
    StableOutcome::new(t.rows.clone())
}

/// A legal sequence from `Δ^{k,m}` that stabilizes to `to_outcome(t)`.
///
/// Built column by column from the right. Once columns `c+1..=m` sit on
/// levels `1..=m-c` of their rows, column `c` is on the center; then, with
/// `h` the highest empty level, repeat until `h = 1`: fire the center with
/// column `c` and push a wave out through levels `1..h` of every branch,
/// which returns column `c` to the center and moves the gap in by one. A
/// last center fire with column `c` fills level 1.
///
/// Every branch fire meets exactly two chips `a < b` from the same row, and
/// every center fire sends the `i`-th smallest chip of a column to branch
/// `i`; both hold because `t` is standard.
pub fn witness_sequence(t: &Tableau) -> Result<Vec<Move>> {
    if !t.is_standard() {
        return Err(Error::NonStandard(format!(
            "no witness for non-standard rows {:?}",
            t.rows
        )));
    }
    let (k, m) = (t.k(), t.m());
    let mut moves = Vec::new();
    for c in (1..=m).rev() {
        let column = t.column(c);
        // Width of the block being settled: columns c..=m, levels 1..=width.
        let width = m - c + 1;
        for gap in (2..=width).rev() {
            moves.push(Move::center(column.iter().copied()));
            for i in 1..=k {
                for level in 1..gap {
                    let row = &t.rows[i as usize - 1];
                    // Level `level` holds the row entries for columns c+level-1 and c+level.
                    let a = row[(c + level - 2) as usize];
                    let b = row[(c + level - 1) as usize];
                    moves.push(Move::new(Vertex::branch(i, level), [a, b]));
                }
            }
        }
        moves.push(Move::center(column.iter().copied()));
    }
    Ok(moves)
}

fn binomial(n: u64, r: u64) -> BigUint {
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binom(2k, k) / (k + 1)`.
pub fn catalan(k: u64) -> BigUint {
    binomial(2 * k, k) / (k + 1)
}

/// Standard Young tableaux of the `k×m` rectangle, by the hook length formula:
/// `(km)! / ∏ (i + j - 1)` over cells, with hook `(k-i) + (m-j) + 1`.
pub fn count_rect_syt(k: u64, m: u64) -> BigUint {
    let n = k * m;
    let mut num = BigUint::one();
    for x in 2..=n {
        num *= x;
    }
    let mut den = BigUint::one();
    for i in 0..k {
        for j in 0..m {
            den *= (k - i) + (m - j) - 1;
        }
    }
    num / den
}

/// Largest `k·m` accepted by [`generate_syts`].
pub const SYT_GENERATION_CAP: u32 = 12;

/// Every SYT of the `k×m` rectangle, in lexicographic order of rows.
///
/// Labels are placed in increasing order; label `x` may start the next free
/// cell of a row when the row above is already longer.
pub fn generate_syts(k: u32, m: u32) -> Result<Vec<Tableau>> {
    let params = StarParams::new(k, m)?;
    if params.n() > SYT_GENERATION_CAP {
        return Err(Error::Budget {
            what: "tableau",
            detail: format!("k*m = {} exceeds {SYT_GENERATION_CAP}", params.n()),
        });
    }
    let mut out = Vec::new();
    let mut rows = vec![Vec::with_capacity(m as usize); k as usize];
    fill(&mut rows, 1, params.n(), m as usize, &mut out);
    out.sort();
    Ok(out)
}

fn fill(rows: &mut [Vec<Label>], next: Label, n: Label, m: usize, out: &mut Vec<Tableau>) {
    if next > n {
        out.push(Tableau {
            rows: rows.to_vec(),
        });
        return;
    }
    for i in 0..rows.len() {
        let len = rows[i].len();
        if len < m && (i == 0 || rows[i - 1].len() > len) {
            rows[i].push(next);
            fill(rows, next + 1, n, m, out);
            rows[i].pop();
        }
    }
}

/// Sorts each row ascending. Requires strictly increasing columns, which the
/// result keeps.
pub fn sort_rows(mat: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let Some(first) = mat.first() else {
        return Ok(Vec::new());
    };
    let m = first.len();
    if mat.iter().any(|r| r.len() != m) {
        return Err(Error::Domain("rows differ in length".into()));
    }
    for j in 0..m {
        if let Some(i) = (1..mat.len()).find(|&i| mat[i - 1][j] >= mat[i][j]) {
            return Err(Error::Domain(format!(
                "column {} does not increase at row {}",
                j + 1,
                i + 1
            )));
        }
    }
    let out: Vec<Vec<i64>> = mat
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort_unstable();
            r
        })
        .collect();
    debug_assert!((0..m).all(|j| (1..out.len()).all(|i| out[i - 1][j] < out[i][j])));
    Ok(out)
}
