//! LCE queries with nearby indices (`|i - j| <= tau`) in `O(tau)` time and
//! `O(n/tau)` words, via per-block periodicity.
//!
//! Block `k` owns the window `T_k = T[k*tau .. (k+2)*tau)`. If `T_k` is
//! periodic (period at most tau) the structure stores its period `p_k` and
//! the length `l_k` of the maximal run with period `p_k` starting at
//! `k*tau`. Runs are computed with one right-to-left sweep per parity: where
//! the concatenation `T_k . T_{k+2}` stays periodic the run simply continues
//! (`l_k = l_{k+2} + 2*tau`), elsewhere the run dies within the pair window
//! and is measured by direct extension.

use crate::stats::QueryStats;
use crate::text::{border_period, Text};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearbyStructure {
    tau: usize,
    n: usize,
    /// Period of block k's window; 0 marks an aperiodic block (no entry).
    periods: Vec<u32>,
    /// Maximal run length with period `periods[k]` starting at `k*tau`.
    runs: Vec<u64>,
}

impl NearbyStructure {
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Entries as `(block, period, run)` triples, present blocks only.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.periods
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0)
            .map(|(k, &p)| (k, p as usize, self.runs[k] as usize))
    }

    pub fn stored_words(&self) -> usize {
        (self.periods.len() * 4).div_ceil(8) + self.runs.len()
    }

    pub(crate) fn parts(&self) -> (usize, usize, &[u32], &[u64]) {
        (self.tau, self.n, &self.periods, &self.runs)
    }

    pub(crate) fn from_parts(tau: usize, n: usize, periods: Vec<u32>, runs: Vec<u64>) -> Self {
        NearbyStructure { tau, n, periods, runs }
    }
}

/// Builds the per-block periodicity structure.
pub fn build_nearby(t: &Text, tau: usize) -> Result<NearbyStructure> {
    if tau == 0 {
        return Err(Error::InvalidTau { tau, n: t.len() });
    }
    let s = t.symbols();
    let n = s.len();
    let blocks = n.div_ceil(tau);
    let mut periods = vec![0u32; blocks];
    let mut runs = vec![0u64; blocks];

    // Per-block period of the (possibly truncated) 2*tau window.
    for k in 0..blocks {
        let start = k * tau;
        let end = (start + 2 * tau).min(n);
        let win = &s[start..end];
        if win.len() < 2 {
            continue;
        }
        let info = border_period(win)?;
        if info.periodic {
            periods[k] = info.period as u32;
        }
    }

    // Pairwise-extension bit: 1 iff T_k . T_{k+2} has period <= tau.
    let mut pair_periodic = vec![false; blocks];
    for k in 0..blocks {
        let start = k * tau;
        if start + 4 * tau <= n {
            let info = border_period(&s[start..start + 4 * tau])?;
            pair_periodic[k] = info.period <= tau;
        }
    }

    // Right-to-left sweep (both parities fall out of plain descending order).
    for k in (0..blocks).rev() {
        if periods[k] == 0 {
            continue;
        }
        let p = periods[k] as usize;
        let start = k * tau;
        if pair_periodic[k] {
            debug_assert!(periods[k + 2] != 0);
            runs[k] = runs[k + 2] + 2 * tau as u64;
        } else {
            // Run dies inside the pair window (or at the text end): extend
            // the period directly.
            let limit = (start + 4 * tau).min(n);
            let mut m = start + p;
            while m < limit && s[m] == s[m - p] {
                m += 1;
            }
            runs[k] = (m - start) as u64;
            debug_assert!(
                start + 4 * tau > n || (runs[k] >= 2 * tau as u64 && runs[k] < 4 * tau as u64)
            );
        }
    }

    Ok(NearbyStructure { tau, n, periods, runs })
}

/// Answers `LCE(i, j)` for `|i - j| <= tau` in at most `3*tau + 1` symbol
/// comparisons.
pub fn nearby_query(
    ns: &NearbyStructure,
    t: &Text,
    i: usize,
    j: usize,
    stats: &mut QueryStats,
) -> Result<usize> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    let tau = ns.tau;
    let n = t.len();
    let (mut i, mut j) = (i.min(j), i.max(j));
    if j - i > tau {
        return Err(Error::NotNearby { i, j, tau });
    }
    if i == j {
        return Ok(n - i);
    }
    let s = t.symbols();
    let d = j - i;
    let mut acc = 0usize;

    // Align i to a block boundary by direct comparison (at most tau-1 steps).
    while i % tau != 0 {
        stats.char_comparisons += 1;
        if s[i] != s[j] {
            return Ok(acc);
        }
        i += 1;
        j += 1;
        acc += 1;
        if j == n {
            return Ok(acc);
        }
    }

    // Scan delta in [0, 2*tau], clamped at the text end.
    for delta in 0..=2 * tau {
        if j + delta >= n {
            return Ok(acc + (n - j));
        }
        stats.char_comparisons += 1;
        if s[i + delta] != s[j + delta] {
            return Ok(acc + delta);
        }
    }

    // d is a period of T_k, hence a multiple of p_k; the run answers exactly.
    let k = i / tau;
    debug_assert!(ns.periods[k] != 0 && d % ns.periods[k] as usize == 0);
    Ok(acc + ns.runs[k] as usize - d)
}
