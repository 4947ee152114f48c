//! Compact labeled states for exhaustive search.
//!
//! A state is the vertex index of every label (`label - 1` indexes the
//! array). Index 0 is the center; `B(i,j)` is `1 + (i-1)·L + (j-1)` with
//! `L = m + 1` levels, one more than a `Δ^{k,m}` run ever reaches.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::star::{Label, LabeledConfig, StarParams, Vertex};

pub(crate) type PackedState = Box<[u8]>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Layout {
    k: usize,
    levels: usize,
    n: usize,
}

/// A move in index form: the vertex index and the chips, ascending.
#[derive(Debug, Clone)]
pub(crate) struct PackedMove {
    pub vertex: usize,
    pub chips: Vec<Label>,
}

impl Layout {
    pub fn new(params: StarParams) -> Result<Self> {
        let k = params.k() as usize;
        let levels = params.m() as usize + 1;
        if 1 + k * levels > usize::from(u8::MAX) {
            return Err(Error::Budget {
                what: "vertex index",
                detail: format!("{params} needs more than 255 vertex slots"),
            });
        }
        Ok(Layout {
            k,
            levels,
            n: params.n() as usize,
        })
    }

    pub fn vertex_count(&self) -> usize {
        1 + self.k * self.levels
    }

    pub fn vertex(&self, idx: usize) -> Vertex {
        if idx == 0 {
            Vertex::Center
        } else {
            let b = (idx - 1) / self.levels;
            let j = (idx - 1) % self.levels;
            Vertex::branch(b as u32 + 1, j as u32 + 1)
        }
    }

    #[cfg(test)]
    pub fn index(&self, v: Vertex) -> Option<usize> {
        match v {
            Vertex::Center => Some(0),
            Vertex::Branch { branch, level } => {
                let (b, j) = (branch as usize, level as usize);
                (b >= 1 && b <= self.k && j >= 1 && j <= self.levels)
                    .then(|| 1 + (b - 1) * self.levels + (j - 1))
            }
        }
    }

    fn level(&self, idx: usize) -> usize {
        if idx == 0 {
            0
        } else {
            (idx - 1) % self.levels + 1
        }
    }

    fn degree(&self, idx: usize) -> usize {
        if idx == 0 {
            self.k
        } else {
            2
        }
    }

    pub fn initial(&self) -> PackedState {
        vec![0u8; self.n].into_boxed_slice()
    }

    #[cfg(test)]
    pub fn pack(&self, config: &LabeledConfig) -> Result<PackedState> {
        let mut s = vec![0u8; self.n];
        for (v, labels) in config.occupied() {
            let idx = self.index(v).ok_or_else(|| Error::Budget {
                what: "level",
                detail: format!("{v} is beyond the packed layout"),
            })?;
            for &l in labels {
                s[l as usize - 1] = idx as u8;
            }
        }
        Ok(s.into_boxed_slice())
    }

    pub fn unpack(&self, params: StarParams, s: &[u8]) -> LabeledConfig {
        let mut groups: Vec<Vec<Label>> = vec![Vec::new(); self.vertex_count()];
        for (i, &v) in s.iter().enumerate() {
            groups[v as usize].push(i as Label + 1);
        }
        let placements = groups
            .into_iter()
            .enumerate()
            .filter(|(_, g)| !g.is_empty())
            .map(|(idx, g)| (self.vertex(idx), g));
        LabeledConfig::from_placements(params, placements).expect("packed states partition 1..=N")
    }

    /// Labels grouped by vertex index, each group ascending.
    pub fn groups(&self, s: &[u8]) -> Vec<Vec<Label>> {
        let mut groups: Vec<Vec<Label>> = vec![Vec::new(); self.vertex_count()];
        for (i, &v) in s.iter().enumerate() {
            groups[v as usize].push(i as Label + 1);
        }
        groups
    }

    fn fireable(&self, groups: &[Vec<Label>]) -> Vec<usize> {
        (0..groups.len())
            .filter(|&v| groups[v].len() >= self.degree(v))
            .collect()
    }

    fn moves_at(&self, groups: &[Vec<Label>], v: usize, out: &mut Vec<PackedMove>) {
        out.extend(
            groups[v]
                .iter()
                .copied()
                .combinations(self.degree(v))
                .map(|chips| PackedMove { vertex: v, chips }),
        );
    }

    /// Same order as [`LabeledConfig::legal_moves`].
    pub fn legal_moves(&self, s: &[u8]) -> Vec<PackedMove> {
        let groups = self.groups(s);
        let mut out = Vec::new();
        for v in self.fireable(&groups) {
            self.moves_at(&groups, v, &mut out);
        }
        out
    }

    /// Moves at the vertices whose fire leaves the fewest ready vertices,
    /// restricted to the largest level among those.
    pub fn volmin_moves(&self, s: &[u8]) -> Vec<PackedMove> {
        let groups = self.groups(s);
        let counts: Vec<usize> = groups.iter().map(Vec::len).collect();
        let fireable = self.fireable(&groups);
        let ready_after = |v: usize| {
            let mut c = counts.clone();
            c[v] -= self.degree(v);
            for u in self.neighbor_indices(v) {
                c[u] += 1;
            }
            (0..c.len()).filter(|&u| c[u] >= self.degree(u)).count()
        };
        let scored: Vec<(usize, usize)> = fireable.iter().map(|&v| (v, ready_after(v))).collect();
        let Some(best) = scored.iter().map(|&(_, r)| r).min() else {
            return Vec::new();
        };
        let calm: Vec<usize> = scored
            .iter()
            .filter(|&&(_, r)| r == best)
            .map(|&(v, _)| v)
            .collect();
        let far = calm
            .iter()
            .map(|&v| self.level(v))
            .max()
            .expect("non-empty");
        let mut out = Vec::new();
        for v in calm.into_iter().filter(|&v| self.level(v) == far) {
            self.moves_at(&groups, v, &mut out);
        }
        out
    }

    fn neighbor_indices(&self, v: usize) -> Vec<usize> {
        if v == 0 {
            (0..self.k).map(|b| 1 + b * self.levels).collect()
        } else {
            let j = self.level(v);
            let inner = if j == 1 { 0 } else { v - 1 };
            // No slot past the last level; apply() rejects such fires.
            if j == self.levels {
                vec![inner]
            } else {
                vec![inner, v + 1]
            }
        }
    }

    pub fn apply(&self, s: &[u8], mv: &PackedMove) -> Result<PackedState> {
        let mut next: PackedState = s.into();
        if mv.vertex != 0 && self.level(mv.vertex) == self.levels {
            return Err(Error::Budget {
                what: "level",
                detail: format!("{} fired past the packed layout", self.vertex(mv.vertex)),
            });
        }
        for (&c, u) in mv.chips.iter().zip(self.neighbor_indices(mv.vertex)) {
            next[c as usize - 1] = u as u8;
        }
        Ok(next)
    }

    #[cfg(test)]
    pub fn is_stable(&self, s: &[u8]) -> bool {
        let mut counts = vec![0usize; self.vertex_count()];
        for &v in s {
            counts[v as usize] += 1;
        }
        counts.iter().enumerate().all(|(v, &c)| c < self.degree(v))
    }

    #[cfg(test)]
    pub fn labeled_move(&self, mv: &PackedMove) -> crate::star::Move {
        crate::star::Move {
            vertex: self.vertex(mv.vertex),
            chips: mv.chips.clone(),
        }
    }
}
