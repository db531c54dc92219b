//! Difference-cover structure for long LCEs: constant time, `O(n/tau)`
//! words, answering either exactly or with a certificate that `l <= tau^2`.
//!
//! The sampled positions are `S_tau = { i : i mod tau^2 in D_tau }` with
//! `D_tau = {0..tau} ∪ {2tau, 3tau, ..., (tau-1)tau}` (2tau - 1 residues
//! per window for tau >= 2). The shift
//!
//!   delta(i, j) = (((i - j) mod tau) - i) mod tau^2
//!
//! lands both `i + delta` and `j + delta` in `S_tau`, so a query reduces to
//! one reverse extension (did the first `delta + 1` symbols match?) and one
//! forward extension, both answered by constant-time oracles over the
//! sampled suffixes of the text and of its reverse.

use crate::baseline::BaselineIndex;
use crate::bitpack::{width_for, IntVec};
use crate::rmq::PackedRmq;
use crate::stats::QueryStats;
use crate::text::Text;
use crate::{mc, Error, Result};

/// `delta(i, j)`; both mods map into non-negative ranges.
pub fn delta(i: usize, j: usize, tau: usize) -> usize {
    let t2 = tau * tau;
    let d = (i as i64 - j as i64).rem_euclid(tau as i64);
    (d - i as i64).rem_euclid(t2 as i64) as usize
}

/// True iff `i` is a sampled position.
pub fn is_sampled(i: usize, tau: usize) -> bool {
    let r = i % (tau * tau);
    r <= tau || (r % tau == 0 && r / tau <= tau - 1)
}

/// Residues of `D_tau` below `r` (a prefix count within one window).
fn residues_below(r: usize, tau: usize) -> usize {
    let small = r.min(tau + 1);
    if tau < 2 {
        return small;
    }
    // multiples m*tau < r with m in [2, tau-1]
    let m_hi = r.div_ceil(tau).saturating_sub(1).min(tau - 1);
    small + m_hi.saturating_sub(1)
}

/// Residues per full `tau^2` window.
fn residues_per_window(tau: usize) -> usize {
    residues_below(tau * tau, tau)
}

/// Index of sampled position `i` within the ascending enumeration of
/// `S_tau`; pure arithmetic, no table.
fn sample_index(i: usize, tau: usize) -> usize {
    debug_assert!(is_sampled(i, tau));
    let t2 = tau * tau;
    (i / t2) * residues_per_window(tau) + residues_below(i % t2, tau)
}

fn sample_count(n: usize, tau: usize) -> usize {
    let t2 = tau * tau;
    (n / t2) * residues_per_window(tau) + residues_below(n % t2, tau)
}

fn sampled_positions(n: usize, tau: usize) -> Vec<usize> {
    (0..n).filter(|&i| is_sampled(i, tau)).collect()
}

/// One direction: a sparse suffix array over the sampled positions with a
/// packed LCP table under a range-minimum structure.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SparseOracle {
    /// sample index (position order) -> rank among sampled suffixes
    rank_of: IntVec,
    /// minima over the packed LCPs of rank-adjacent sampled suffixes
    lcp: PackedRmq,
}

impl SparseOracle {
    fn build<R, L>(positions: &[usize], _n: usize, rank: R, lce: L) -> Self
    where
        R: Fn(usize) -> usize,
        L: Fn(usize, usize) -> usize,
    {
        let m = positions.len();
        let mut order: Vec<u32> = (0..m as u32).collect();
        order.sort_unstable_by_key(|&s| rank(positions[s as usize]));
        let mut rank_of = vec![0u64; m];
        for (w, &s) in order.iter().enumerate() {
            rank_of[s as usize] = w as u64;
        }
        let mut lcp = vec![0u64; m];
        for w in 1..m {
            lcp[w] = lce(positions[order[w - 1] as usize], positions[order[w] as usize]) as u64;
        }
        SparseOracle {
            rank_of: IntVec::from_slice(&rank_of, width_for(m.saturating_sub(1) as u64)),
            lcp: PackedRmq::new(&lcp),
        }
    }

    /// LCE of the sampled suffixes with sample indexes `a` and `b`; `full`
    /// is the answer for `a == b`.
    fn lce(&self, a: usize, b: usize, full: usize) -> usize {
        if a == b {
            return full;
        }
        let (ra, rb) = (self.rank_of.get(a) as usize, self.rank_of.get(b) as usize);
        self.lcp.min(ra.min(rb) + 1, ra.max(rb)) as usize
    }

    fn stored_words(&self) -> usize {
        self.rank_of.stored_words() + self.lcp.stored_words()
    }
}

/// Either the exact LCE or a certificate that it is at most `tau^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcAnswer {
    Exact(usize),
    Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcStructure {
    tau: usize,
    n: usize,
    fwd: SparseOracle,
    rev: SparseOracle,
}

/// Builds the sampled-suffix oracles. With `tau^2 > n` the structure is
/// vacuous: every query certifies.
pub fn build_dc(t: &Text, tau: usize, oracle: &BaselineIndex) -> Result<DcStructure> {
    let n = t.len();
    if tau == 0 || tau > n {
        return Err(Error::InvalidTau { tau, n });
    }
    let positions = if tau * tau <= n { sampled_positions(n, tau) } else { Vec::new() };
    let fwd = SparseOracle::build(
        &positions,
        n,
        |p| oracle.rank(p),
        |p, q| oracle.lce(p, q).unwrap(),
    );
    let rev = SparseOracle::build(
        &positions,
        n,
        |p| oracle.rank_rev(p),
        |p, q| oracle.lce_r(p, q).unwrap(),
    );
    Ok(DcStructure { tau, n, fwd, rev })
}

impl DcStructure {
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample_count(&self) -> usize {
        if self.tau * self.tau <= self.n {
            sample_count(self.n, self.tau)
        } else {
            0
        }
    }

    pub fn stored_words(&self) -> usize {
        self.fwd.stored_words() + self.rev.stored_words()
    }

    pub(crate) fn parts(&self) -> [(&IntVec, &PackedRmq); 2] {
        [(&self.fwd.rank_of, &self.fwd.lcp), (&self.rev.rank_of, &self.rev.lcp)]
    }

    pub(crate) fn from_parts(
        tau: usize,
        n: usize,
        fwd: (IntVec, PackedRmq),
        rev: (IntVec, PackedRmq),
    ) -> Self {
        DcStructure {
            tau,
            n,
            fwd: SparseOracle { rank_of: fwd.0, lcp: fwd.1 },
            rev: SparseOracle { rank_of: rev.0, lcp: rev.1 },
        }
    }
}

/// Constant-time query: one `delta`, one reverse-oracle call, one
/// forward-oracle call.
pub fn dc_query(dc: &DcStructure, t: &Text, i: usize, j: usize) -> Result<DcAnswer> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    let (tau, n) = (dc.tau, dc.n);
    let t2 = tau * tau;
    if i == j {
        return Ok(DcAnswer::Exact(n - i));
    }
    if t2 > n || i > n - t2 || j > n - t2 {
        return Ok(DcAnswer::Certificate);
    }
    let d = delta(i, j, tau);
    let (si, sj) = (sample_index(i + d, tau), sample_index(j + d, tau));
    // The first delta + 1 symbols starting at i and j must match; the
    // reverse oracle sees them as a common suffix of the prefixes ending at
    // i + delta and j + delta (inclusive).
    if dc.rev.lce(si, sj, i + d + 1) < d + 1 {
        return Ok(DcAnswer::Certificate);
    }
    Ok(DcAnswer::Exact(d + dc.fwd.lce(si, sj, n - (i + d))))
}

/// Difference-cover dispatch with Monte Carlo fallback: long LCEs are
/// answered in constant time, short ones cost `O(tau)`.
pub fn combined_query(
    ms: &mc::McStructure,
    dc: &DcStructure,
    t: &Text,
    i: usize,
    j: usize,
    stats: &mut QueryStats,
) -> Result<usize> {
    match dc_query(dc, t, i, j)? {
        DcAnswer::Exact(l) => Ok(l),
        DcAnswer::Certificate => mc::mc_query(ms, t, i, j, stats),
    }
}
