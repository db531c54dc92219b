//! Range-minimum structures over LCP arrays.
//!
//! Two flavors: a plain u32-backed one for the full-text baseline (space
//! unconstrained, it is the oracle), and a bit-packed one used by the
//! difference-cover structure where persistent words are accounted.
//!
//! Both decompose into blocks of [`BLOCK`] entries: a sparse table answers
//! whole-block spans, partial blocks are scanned directly.

use crate::bitpack::{width_for, IntVec};

pub const BLOCK: usize = 32;

fn sparse_levels(m: usize) -> usize {
    if m <= 1 {
        1
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}

/// Minimum over inclusive index range of a sparse table laid out level-major.
fn sparse_min(get: impl Fn(usize, usize) -> u64, lo: usize, hi: usize) -> u64 {
    debug_assert!(lo <= hi);
    let span = hi - lo + 1;
    let lvl = (usize::BITS - 1 - span.leading_zeros()) as usize;
    get(lvl, lo).min(get(lvl, hi + 1 - (1 << lvl)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmqU32 {
    data: Vec<u32>,
    // table[lvl][b] = min of blocks b .. b + 2^lvl
    table: Vec<Vec<u32>>,
}

impl RmqU32 {
    pub fn new(data: Vec<u32>) -> Self {
        let nb = data.len().div_ceil(BLOCK).max(1);
        let mut mins = vec![u32::MAX; nb];
        for (i, &x) in data.iter().enumerate() {
            let b = i / BLOCK;
            mins[b] = mins[b].min(x);
        }
        let mut table = vec![mins];
        for lvl in 1..sparse_levels(nb) {
            let prev = &table[lvl - 1];
            let half = 1usize << (lvl - 1);
            let row: Vec<u32> = (0..nb + 1 - (1 << lvl))
                .map(|b| prev[b].min(prev[b + half]))
                .collect();
            table.push(row);
        }
        RmqU32 { data, table }
    }

    /// Machine words held, counting u32 entries as half words.
    pub fn stored_words(&self) -> usize {
        let entries = self.data.len() + self.table.iter().map(Vec::len).sum::<usize>();
        entries.div_ceil(2)
    }

    /// Minimum over the inclusive range `[lo, hi]`.
    pub fn min(&self, lo: usize, hi: usize) -> u32 {
        debug_assert!(lo <= hi && hi < self.data.len());
        let (bl, bh) = (lo / BLOCK, hi / BLOCK);
        if bh - bl < 2 {
            return (lo..=hi).map(|i| self.data[i]).min().unwrap();
        }
        let left = (lo..(bl + 1) * BLOCK).map(|i| self.data[i]).min().unwrap();
        let right = (bh * BLOCK..=hi).map(|i| self.data[i]).min().unwrap();
        let mid = sparse_min(|l, b| u64::from(self.table[l][b]), bl + 1, bh - 1) as u32;
        left.min(mid).min(right)
    }
}

/// Bit-packed range-minimum structure; all persistent arrays are `IntVec`s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedRmq {
    data: IntVec,
    table: Vec<IntVec>,
}

impl PackedRmq {
    pub fn new(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let width = width_for(max);
        let data = IntVec::from_slice(values, width);

        let nb = values.len().div_ceil(BLOCK).max(1);
        let mut mins = vec![max; nb];
        for (i, &x) in values.iter().enumerate() {
            let b = i / BLOCK;
            mins[b] = mins[b].min(x);
        }
        let mut rows: Vec<Vec<u64>> = vec![mins];
        for lvl in 1..sparse_levels(nb) {
            let prev = &rows[lvl - 1];
            let half = 1usize << (lvl - 1);
            rows.push(
                (0..nb + 1 - (1 << lvl))
                    .map(|b| prev[b].min(prev[b + half]))
                    .collect(),
            );
        }
        let table = rows.into_iter().map(|r| IntVec::from_slice(&r, width)).collect();
        PackedRmq { data, table }
    }

    pub fn min(&self, lo: usize, hi: usize) -> u64 {
        debug_assert!(lo <= hi && hi < self.data.len());
        let (bl, bh) = (lo / BLOCK, hi / BLOCK);
        if bh - bl < 2 {
            return (lo..=hi).map(|i| self.data.get(i)).min().unwrap();
        }
        let left = (lo..(bl + 1) * BLOCK).map(|i| self.data.get(i)).min().unwrap();
        let right = (bh * BLOCK..=hi).map(|i| self.data.get(i)).min().unwrap();
        let mid = sparse_min(|l, b| self.table[l].get(b), bl + 1, bh - 1);
        left.min(mid).min(right)
    }

    pub fn stored_words(&self) -> usize {
        self.data.stored_words() + self.table.iter().map(IntVec::stored_words).sum::<usize>()
    }

    pub fn parts(&self) -> (&IntVec, &[IntVec]) {
        (&self.data, &self.table)
    }

    pub fn from_parts(data: IntVec, table: Vec<IntVec>) -> Self {
        PackedRmq { data, table }
    }
}
