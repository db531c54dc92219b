//! Monte Carlo LCE trade-off: significance-driven fingerprint sampling and
//! an exponential search over block-aligned distances.
//!
//! The text is padded (conceptually) to `n_pad`, a power of two, and split
//! into blocks of `tau` positions. Block `k` keeps `b_k = min(2^(mu_k/2),
//! tau)` evenly spaced prefix fingerprints, where `mu_k` is the number of
//! trailing zeros of `k` (block 0 counts as maximally significant). Sampling
//! densely where significance is high is what lets the query's `check` calls
//! reconstruct `f(j)` from a nearby sample in `O(tau / 2^(mu/2))` steps, for
//! a total query cost of `O(tau + log(l/tau))` fingerprint work.

use crate::fp::{PhiParams, PrefixFingerprint};
use crate::stats::QueryStats;
use crate::text::Text;
use crate::{Error, Result};

/// Power-of-two padding of the text length plus the head/tail bit split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitGeometry {
    n: usize,
    n_pad: usize,
    tau: usize,
    lg_tau: u32,
    lg_blocks: u32,
}

impl BitGeometry {
    /// `tau` is rounded up to a power of two; `n` is padded likewise.
    pub fn new(n: usize, tau: usize) -> Result<Self> {
        if tau == 0 || tau > n {
            return Err(Error::InvalidTau { tau, n });
        }
        let n_pad = n.next_power_of_two();
        let tau = tau.next_power_of_two();
        Ok(BitGeometry {
            n,
            n_pad,
            tau,
            lg_tau: tau.trailing_zeros(),
            lg_blocks: (n_pad / tau).trailing_zeros(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_pad(&self) -> usize {
        self.n_pad
    }

    /// Effective (power-of-two) block length.
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn blocks(&self) -> usize {
        self.n_pad >> self.lg_tau
    }

    pub fn lg_blocks(&self) -> u32 {
        self.lg_blocks
    }

    /// High `lg(n_pad/tau)` bits of the position.
    pub fn head(&self, q: usize) -> Result<usize> {
        self.check_pad(q)?;
        Ok(q >> self.lg_tau)
    }

    /// Low `lg(tau)` bits of the position.
    pub fn tail(&self, q: usize) -> Result<usize> {
        self.check_pad(q)?;
        Ok(q & (self.tau - 1))
    }

    /// Trailing zeros of the head; an all-zero head counts all its bits.
    pub fn significance(&self, q: usize) -> Result<u32> {
        self.check_pad(q)?;
        Ok(self.block_significance(q >> self.lg_tau))
    }

    fn check_pad(&self, q: usize) -> Result<()> {
        if q < self.n_pad {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { pos: q, n: self.n_pad })
        }
    }

    fn block_significance(&self, k: usize) -> u32 {
        if k == 0 {
            self.lg_blocks
        } else {
            k.trailing_zeros()
        }
    }

    fn b_of_mu(&self, mu: u32) -> usize {
        (1usize << (mu / 2)).min(self.tau)
    }

    /// Samples in block `k`.
    pub fn block_samples(&self, k: usize) -> usize {
        self.b_of_mu(self.block_significance(k))
    }

    /// Canonical samples in all blocks before `k`: block 0 plus, for each
    /// trailing-zero count `t`, the blocks `k' < k` with `k' = 2^t (mod
    /// 2^(t+1))`, of which there are `(k + 2^t - 1) >> (t + 1)`.
    fn block_offset(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        let mut total = self.block_samples(0);
        for t in 0..self.lg_blocks {
            let cnt = (k + (1usize << t) - 1) >> (t + 1);
            total += cnt * self.b_of_mu(t);
        }
        total
    }

    fn kept_in_block(&self, k: usize) -> usize {
        let start = k << self.lg_tau;
        if start >= self.n {
            return 0;
        }
        let b = self.block_samples(k);
        let spacing = self.tau / b;
        b.min((self.n - 1 - start) / spacing + 1)
    }

    fn total_samples(&self) -> usize {
        let kb = (self.n - 1) >> self.lg_tau;
        self.block_offset(kb) + self.kept_in_block(kb)
    }

    /// Storage index and position of the nearest sample at or before `q`
    /// (`q <= n`; the sample is strictly inside the text).
    fn nearest_sample(&self, q: usize) -> (usize, usize) {
        let qq = q.min(self.n - 1);
        let k = qq >> self.lg_tau;
        let spacing = self.tau / self.block_samples(k);
        let j = (qq - (k << self.lg_tau)) / spacing;
        (self.block_offset(k) + j, (k << self.lg_tau) + j * spacing)
    }
}

/// All stored sample positions, ascending. Canonical positions at or past
/// the text end are dropped.
pub fn sample_positions(g: &BitGeometry) -> Vec<usize> {
    let mut out = Vec::with_capacity(g.total_samples());
    for k in 0..g.blocks() {
        let start = k << g.lg_tau;
        let spacing = g.tau / g.block_samples(k);
        for j in 0..g.kept_in_block(k) {
            out.push(start + j * spacing);
        }
    }
    out
}

/// Sampled prefix fingerprints; one `(value, exponent)` word pair per sample
/// and component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McStructure {
    geo: BitGeometry,
    phis: Vec<PhiParams>,
    values: Vec<Vec<u64>>,
    exponents: Vec<Vec<u64>>,
}

/// Builds the structure with a single fingerprint function.
pub fn build_mc(t: &Text, tau: usize, phi: PhiParams) -> Result<McStructure> {
    build_mc_multi(t, tau, vec![phi])
}

/// Builds the structure with a component-wise fingerprint tuple; `check`
/// requires equality of every component. One left-to-right pass per
/// component fills the sample tables.
pub fn build_mc_multi(t: &Text, tau: usize, phis: Vec<PhiParams>) -> Result<McStructure> {
    if phis.is_empty() {
        return Err(Error::InvalidParameter("empty fingerprint tuple".into()));
    }
    let geo = BitGeometry::new(t.len(), tau)?;
    let positions = sample_positions(&geo);
    let mut values = Vec::with_capacity(phis.len());
    let mut exponents = Vec::with_capacity(phis.len());
    for phi in &phis {
        let mut v = Vec::with_capacity(positions.len());
        let mut e = Vec::with_capacity(positions.len());
        let mut f = phi.empty_prefix();
        for &pos in &positions {
            f = phi.fp_extend(&f, t, pos as isize - f.index as isize)?;
            v.push(f.value);
            e.push(f.exponent);
        }
        values.push(v);
        exponents.push(e);
    }
    Ok(McStructure { geo, phis, values, exponents })
}

impl McStructure {
    pub fn geometry(&self) -> &BitGeometry {
        &self.geo
    }

    pub fn phis(&self) -> &[PhiParams] {
        &self.phis
    }

    pub fn sample_count(&self) -> usize {
        self.values[0].len()
    }

    pub fn stored_words(&self) -> usize {
        2 * self.phis.len() * self.sample_count()
    }

    pub(crate) fn parts(&self) -> (&BitGeometry, &[PhiParams], &[Vec<u64>], &[Vec<u64>]) {
        (&self.geo, &self.phis, &self.values, &self.exponents)
    }

    pub(crate) fn from_parts(
        geo: BitGeometry,
        phis: Vec<PhiParams>,
        values: Vec<Vec<u64>>,
        exponents: Vec<Vec<u64>>,
    ) -> Self {
        McStructure { geo, phis, values, exponents }
    }

    /// Prefix fingerprint `f(q)` of component `c`, reconstructed by forward
    /// extension from the nearest sample at or before `q`.
    fn prefix_fp(
        &self,
        c: usize,
        q: usize,
        t: &Text,
        stats: &mut QueryStats,
    ) -> Result<PrefixFingerprint> {
        if q == 0 {
            return Ok(self.phis[c].empty_prefix());
        }
        let (idx, pos) = self.geo.nearest_sample(q);
        let f = PrefixFingerprint {
            value: self.values[c][idx],
            exponent: self.exponents[c][idx],
            index: pos,
        };
        stats.fp_extend_steps += (q - pos) as u64;
        self.phis[c].fp_extend(&f, t, (q - pos) as isize)
    }

    /// True iff the length-`c` substrings at `i` and `j` have equal
    /// fingerprints on every component. Ranges extending past the text end
    /// answer `false` without evaluating anything.
    pub fn check(
        &self,
        t: &Text,
        i: usize,
        j: usize,
        c: usize,
        stats: &mut QueryStats,
    ) -> Result<bool> {
        let n = self.geo.n;
        if c == 0 {
            return Ok(true);
        }
        if i + c > n || j + c > n {
            return Ok(false);
        }
        stats.fp_evaluations += 1;
        for comp in 0..self.phis.len() {
            let phi = &self.phis[comp];
            let fi = self.prefix_fp(comp, i, t, stats)?;
            let fic = self.prefix_fp(comp, i + c, t, stats)?;
            let fj = self.prefix_fp(comp, j, t, stats)?;
            let fjc = self.prefix_fp(comp, j + c, t, stats)?;
            if phi.fp_substring(&fi, &fic)? != phi.fp_substring(&fj, &fjc)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    #[cfg(debug_assertions)]
    fn assert_sample_distance(&self, q: usize, mu: u32) {
        // The distance bound holds for canonical (fully inside the text)
        // blocks; the boundary block may be sampled more sparsely, and the
        // whole-text prefix q = n belongs to no block at all.
        if q >= self.geo.n {
            return;
        }
        let k = q >> self.geo.lg_tau;
        if (k + 1) << self.geo.lg_tau <= self.geo.n {
            let (_, pos) = self.geo.nearest_sample(q);
            debug_assert!(
                q - pos <= self.geo.tau / (1usize << (mu / 2)).min(self.geo.tau),
                "sample distance exceeds tau/2^(mu/2) at q={q}, mu={mu}"
            );
        }
    }
}

/// Answers `LCE(i, j)`; correct whenever the fingerprint tuple is
/// collision-free on the compared substring pairs.
pub fn mc_query(
    ms: &McStructure,
    t: &Text,
    i: usize,
    j: usize,
    stats: &mut QueryStats,
) -> Result<usize> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    let n = t.len();
    if i == j {
        return Ok(n - i);
    }
    let (mut i, mut j) = (i.min(j), i.max(j));
    let s = t.symbols();
    let tau = ms.geo.tau;
    let mut acc = 0usize;

    // Align i to a block boundary with at most tau - 1 direct comparisons.
    while i & (tau - 1) != 0 {
        if j == n {
            return Ok(acc);
        }
        stats.char_comparisons += 1;
        if s[i] != s[j] {
            return Ok(acc);
        }
        i += 1;
        j += 1;
        acc += 1;
    }

    let cap = ms.geo.lg_blocks;
    let mut lhat = 0usize;
    let mut mu: u32 = 0;
    #[cfg(debug_assertions)]
    let mut last_incremented = true;

    // Exponential growth: after the loop, l is in [lhat, 2*lhat + tau).
    loop {
        let c = (1usize << mu) * tau;
        #[cfg(debug_assertions)]
        if j + c <= n {
            ms.assert_sample_distance(j, mu);
            ms.assert_sample_distance(j + c, mu);
        }
        if !ms.check(t, i, j, c, stats)? {
            break;
        }
        i += c;
        j += c;
        lhat += c;
        // Position n_pad (one past the last block) is maximally significant.
        let s_j = if j >= ms.geo.n_pad { cap } else { ms.geo.significance(j)? };
        let grew = if mu < cap && s_j > mu {
            mu += 1;
            true
        } else {
            false
        };
        #[cfg(debug_assertions)]
        {
            debug_assert!(lhat >= ((1usize << mu) - 1) * tau);
            if j < ms.geo.n_pad {
                debug_assert!(ms.geo.significance(j)? >= mu);
            }
            debug_assert!(
                mu >= cap || grew || last_incremented,
                "mu={mu} cap={cap} j={j} block={} n={} tau={tau}",
                j >> ms.geo.lg_tau,
                ms.geo.n
            );
            last_incremented = grew;
        }
        #[cfg(not(debug_assertions))]
        let _ = grew;
    }

    // Binary shrink down to a single block.
    while mu > 0 {
        let c = (1usize << (mu - 1)) * tau;
        if ms.check(t, i, j, c, stats)? {
            i += c;
            j += c;
            lhat += c;
        }
        mu -= 1;
    }

    // Final left-to-right scan inside the mismatching block.
    while j < n {
        stats.char_comparisons += 1;
        if s[i] != s[j] {
            break;
        }
        i += 1;
        j += 1;
        lhat += 1;
    }
    Ok(acc + lhat)
}
