//! Suffix-array baseline: the constant-time ground-truth LCE oracle.
//!
//! Suffix array by prefix doubling, LCP by Kasai's algorithm, range minima
//! by a block-decomposed sparse table. The same three are kept for the
//! reversed text to answer `LCE_R` (longest common suffix of two prefixes).

use crate::rmq::RmqU32;
use crate::text::Text;
use crate::{Error, Result};

/// Suffix array by prefix doubling, `O(n log^2 n)`.
pub fn suffix_array(s: &[u64]) -> Vec<u32> {
    let n = s.len();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u64> = s.to_vec();
    let mut tmp = vec![0u64; n];
    let mut k = 1;
    loop {
        let key = |i: u32| {
            let i = i as usize;
            let second = if i + k < n { rank[i + k] + 1 } else { 0 };
            (rank[i], second)
        };
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0] as usize] = 0;
        for w in 1..n {
            let bump = u64::from(key(sa[w - 1]) != key(sa[w]));
            tmp[sa[w] as usize] = tmp[sa[w - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 || k >= n {
            break;
        }
        k *= 2;
    }
    sa
}

fn inverse(sa: &[u32]) -> Vec<u32> {
    let mut rank = vec![0u32; sa.len()];
    for (r, &i) in sa.iter().enumerate() {
        rank[i as usize] = r as u32;
    }
    rank
}

/// Kasai's LCP construction; `lcp[r]` = LCP of suffixes at ranks `r-1` and `r`.
fn lcp_array(s: &[u64], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && s[i + h] == s[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Direction {
    sa: Vec<u32>,
    rank: Vec<u32>,
    rmq: RmqU32,
}

impl Direction {
    fn new(s: &[u64]) -> Self {
        let sa = suffix_array(s);
        let rank = inverse(&sa);
        let lcp = lcp_array(s, &sa, &rank);
        Direction { sa, rank, rmq: RmqU32::new(lcp) }
    }

    fn lce(&self, n: usize, i: usize, j: usize) -> usize {
        if i == j {
            return n - i;
        }
        let (a, b) = {
            let (ri, rj) = (self.rank[i] as usize, self.rank[j] as usize);
            (ri.min(rj), ri.max(rj))
        };
        self.rmq.min(a + 1, b) as usize
    }
}

/// Constant-time LCE and LCE_R oracle over the full text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineIndex {
    n: usize,
    fwd: Direction,
    rev: Direction,
}

impl BaselineIndex {
    pub fn build(t: &Text) -> Self {
        let s = t.symbols();
        let mut r = s.to_vec();
        r.reverse();
        BaselineIndex {
            n: s.len(),
            fwd: Direction::new(s),
            rev: Direction::new(&r),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Machine words held, counting u32 entries as half words.
    pub fn stored_words(&self) -> usize {
        let dir =
            |d: &Direction| (d.sa.len() + d.rank.len()).div_ceil(2) + d.rmq.stored_words();
        dir(&self.fwd) + dir(&self.rev)
    }

    fn check(&self, pos: usize) -> Result<()> {
        if pos < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { pos, n: self.n })
        }
    }

    /// `LCE(i, j)`: longest common prefix of the suffixes at `i` and `j`.
    pub fn lce(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.fwd.lce(self.n, i, j))
    }

    /// `LCE_R(i, j)`: longest common suffix of the prefixes `T[0..=i]` and
    /// `T[0..=j]` (inclusive ends).
    pub fn lce_r(&self, i: usize, j: usize) -> Result<usize> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.rev.lce(self.n, self.n - 1 - i, self.n - 1 - j))
    }

    /// Lexicographic rank of the suffix starting at `i`.
    pub fn rank(&self, i: usize) -> usize {
        self.fwd.rank[i] as usize
    }

    /// Lexicographic rank of the reversed-text suffix for prefix end `i`.
    pub fn rank_rev(&self, i: usize) -> usize {
        self.rev.rank[self.n - 1 - i] as usize
    }

    pub fn suffix_array_fwd(&self) -> &[u32] {
        &self.fwd.sa
    }
}
