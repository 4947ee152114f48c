//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's simulation or search code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

pub type Grid = Vec<Vec<u32>>;

/// Vertex slots: 0 is the center, `1 + b*(m+1) + (j-1)` is level `j` of
/// branch `b` (0-based branch).
struct Naive {
    k: usize,
    levels: usize,
}

impl Naive {
    fn slot(&self, b: usize, j: usize) -> usize {
        1 + b * self.levels + (j - 1)
    }

    fn degree(&self, v: usize) -> usize {
        if v == 0 {
            self.k
        } else {
            2
        }
    }

    fn targets(&self, v: usize) -> Vec<usize> {
        if v == 0 {
            (0..self.k).map(|b| self.slot(b, 1)).collect()
        } else {
            let j = (v - 1) % self.levels + 1;
            let inner = if j == 1 { 0 } else { v - 1 };
            assert!(j < self.levels, "fired past the modelled levels");
            vec![inner, v + 1]
        }
    }
}

/// Counts every stabilization sequence of the `k×m` start by plain
/// recursion without any caching, keyed by the final branch contents.
pub fn naive_sequence_counts(k: usize, m: usize) -> BTreeMap<Grid, u64> {
    let g = Naive { k, levels: m + 1 };
    let mut state: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); 1 + k * (m + 1)];
    state[0] = (1..=(k * m) as u32).collect();
    let mut out = BTreeMap::new();
    recurse(&g, m, &mut state, &mut out);
    out
}

fn recurse(g: &Naive, m: usize, state: &mut Vec<BTreeSet<u32>>, out: &mut BTreeMap<Grid, u64>) {
    let mut fired = false;
    for v in 0..state.len() {
        let d = g.degree(v);
        if state[v].len() < d {
            continue;
        }
        fired = true;
        let here: Vec<u32> = state[v].iter().copied().collect();
        for chips in here.into_iter().combinations(d) {
            let targets = g.targets(v);
            for (&c, &t) in chips.iter().zip(&targets) {
                state[v].remove(&c);
                state[t].insert(c);
            }
            recurse(g, m, state, out);
            for (&c, &t) in chips.iter().zip(&targets) {
                state[t].remove(&c);
                state[v].insert(c);
            }
        }
    }
    if !fired {
        let grid: Grid = (0..g.k)
            .map(|b| {
                (1..=m)
                    .map(|j| {
                        let s = &state[g.slot(b, j)];
                        assert_eq!(s.len(), 1, "stable state has one chip per cell");
                        *s.iter().next().unwrap()
                    })
                    .collect()
            })
            .collect();
        *out.entry(grid).or_default() += 1;
    }
}

/// Unlabeled firing on `k` branches from `n` chips at the center, always
/// firing the lowest-index ready vertex. Returns the final counts (index 0
/// is the center, then branch-major levels `1..=levels`) and fire counts.
pub fn naive_unlabeled(k: usize, n: u64) -> (Vec<u64>, Vec<u64>) {
    let levels = n as usize / k.max(1) + 3;
    let slots = 1 + k * levels;
    let mut chips = vec![0u64; slots];
    let mut fires = vec![0u64; slots];
    chips[0] = n;
    while let Some(v) = (0..slots).find(|&v| chips[v] >= if v == 0 { k as u64 } else { 2 }) {
        fires[v] += 1;
        if v == 0 {
            chips[0] -= k as u64;
            for b in 0..k {
                chips[1 + b * levels] += 1;
            }
        } else {
            let j = (v - 1) % levels + 1;
            assert!(j < levels);
            chips[v] -= 2;
            chips[if j == 1 { 0 } else { v - 1 }] += 1;
            chips[v + 1] += 1;
        }
    }
    (chips, fires)
}

/// Catalan numbers by the convolution recurrence.
pub fn catalan_by_recurrence(upto: usize) -> Vec<u128> {
    let mut c = vec![1u128];
    for n in 1..=upto {
        c.push((0..n).map(|i| c[i] * c[n - 1 - i]).sum());
    }
    c
}

/// All fillings of a `k×m` grid with `1..=km`.
pub fn all_grids(k: usize, m: usize) -> impl Iterator<Item = Grid> {
    let n = (k * m) as u32;
    (1..=n)
        .permutations(n as usize)
        .map(move |p| p.chunks(m).map(<[u32]>::to_vec).collect())
}

pub fn rows_increase(g: &Grid) -> bool {
    g.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]))
}

pub fn column_increases(g: &Grid, j: usize) -> bool {
    g.windows(2).all(|w| w[0][j] < w[1][j])
}

pub fn is_syt(g: &Grid) -> bool {
    rows_increase(g) && (0..g[0].len()).all(|j| column_increases(g, j))
}

pub fn is_row_and_rim_sorted(g: &Grid) -> bool {
    rows_increase(g) && column_increases(g, 0) && column_increases(g, g[0].len() - 1)
}

/// SYTs of the rectangle by filtering every filling.
pub fn brute_force_syts(k: usize, m: usize) -> BTreeSet<Grid> {
    all_grids(k, m).filter(is_syt).collect()
}

/// Reads a file from the core crate's fixture directory; works from any
/// crate in the workspace.
pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
