//! Boolean relations on windows.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::point::PointSet;

/// Windows above this size are not materialised as dense matrices.
pub const DENSE_LIMIT: usize = 4096;

/// Dense relation with both row (successor) and column (predecessor) sets.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationMatrix {
    n: usize,
    succ: Vec<FixedBitSet>,
    pred: Vec<FixedBitSet>,
}

impl RelationMatrix {
    pub fn empty(n: usize) -> Self {
        RelationMatrix {
            n,
            succ: vec![FixedBitSet::with_capacity(n); n],
            pred: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::empty(n);
        for (i, j) in pairs {
            m.insert(i, j);
        }
        m
    }

    /// Evaluates `rel(i, j)` for all pairs, rows in parallel.
    pub fn from_fn(n: usize, rel: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let succ: Vec<FixedBitSet> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                for j in 0..n {
                    if rel(i, j) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Self::from_rows(succ)
    }

    pub fn from_rows(succ: Vec<FixedBitSet>) -> Self {
        let n = succ.len();
        let mut pred = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in succ.iter().enumerate() {
            for j in row.ones() {
                pred[j].insert(i);
            }
        }
        RelationMatrix { n, succ, pred }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.succ[i].insert(j);
        self.pred[j].insert(i);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.succ[i].contains(j)
    }

    /// `{j | i R j}`.
    pub fn succ(&self, i: usize) -> &FixedBitSet {
        &self.succ[i]
    }

    /// `{j | j R i}`.
    pub fn pred(&self, i: usize) -> &FixedBitSet {
        &self.pred[i]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.succ[i].ones().map(move |j| (i, j)))
    }

    pub fn count(&self) -> usize {
        self.succ.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Union of predecessor sets of the members of `a`.
    pub fn down_of(&self, a: &PointSet) -> PointSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in a.ones() {
            out.union_with(&self.pred[i]);
        }
        out
    }

    /// Union of successor sets of the members of `a`.
    pub fn up_of(&self, a: &PointSet) -> PointSet {
        let mut out = FixedBitSet::with_capacity(self.n);
        for i in a.ones() {
            out.union_with(&self.succ[i]);
        }
        out
    }

    pub fn is_subset_of(&self, other: &RelationMatrix) -> bool {
        self.succ.iter().zip(&other.succ).all(|(a, b)| a.is_subset(b))
    }

    pub fn transpose(&self) -> Self {
        RelationMatrix { n: self.n, succ: self.pred.clone(), pred: self.succ.clone() }
    }

    /// Restriction to the members of `keep`, reindexed in increasing order.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let n = keep.len();
        Self::from_fn(n, |a, b| self.get(keep[a], keep[b]))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.n).all(|i| self.succ[i].ones().all(|j| self.succ[j].is_subset(&self.succ[i])))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(i, j)| i == j || !self.get(j, i))
    }

    /// `x α y :⇔ succ(y) ⊆ succ(x) ∧ pred(x) ⊆ pred(y)`.
    pub fn alpha(&self) -> Self {
        Self::from_fn(self.n, |x, y| self.succ[y].is_subset(&self.succ[x]) && self.pred[x].is_subset(&self.pred[y]))
    }
}
