//! Deterministic LCE trade-off: a recursive interval decomposition.
//!
//! Each node owns an interval `[lo, hi]` (inclusive) of text positions and
//! stores, for every sampled position `hi - k*tau` in its right half, the
//! left-half suffix with maximal LCE against it plus that LCE value. A query
//! with both indices in a node is advanced by direct comparison until it
//! either mismatches, moves entirely into the right half, or reaches a
//! sampled position, where it is rewritten to a pair inside the left half:
//!
//!   LCE(i, j) = delta + min(LCE(i + delta, partner_k), L_k)
//!
//! Each round at least halves the enclosing interval, so a query runs
//! O(log(n/tau)) rounds of at most tau comparisons before the indices are
//! within distance tau and the per-block periodicity structure finishes.

use crate::baseline::BaselineIndex;
use crate::nearby::{build_nearby, nearby_query, NearbyStructure};
use crate::stats::QueryStats;
use crate::text::Text;
use crate::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Node {
    pub lo: u32,
    pub hi: u32,
    pub left: u32,
    pub right: u32,
    /// partner[k] pairs with sampled position hi - k*tau.
    pub partners: Vec<u32>,
    /// lces[k] = LCE(partner[k], hi - k*tau), maximal over the left half.
    pub lces: Vec<u64>,
}

impl Node {
    fn mid(&self) -> u32 {
        (self.lo + self.hi) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetStructure {
    tau: usize,
    n: usize,
    /// Flattened tree; index 0 is the root when non-empty.
    nodes: Vec<Node>,
    nearby: NearbyStructure,
}

/// Builds the recursive structure. The argmax partners come from the
/// suffix-array baseline: for each sampled position, the best left-half
/// suffix is one of its lexicographic neighbors among left-half positions,
/// and ties resolve to the smallest index.
pub fn build_det(t: &Text, tau: usize, oracle: &BaselineIndex) -> Result<DetStructure> {
    let n = t.len();
    if tau == 0 || tau > n {
        return Err(Error::InvalidTau { tau, n });
    }
    let mut nodes = Vec::new();
    if n >= tau {
        // Positions sorted by suffix rank; the suffix array itself.
        let by_rank: Vec<u32> = oracle.suffix_array_fwd().to_vec();
        build_node(&mut nodes, 0, (n - 1) as u32, by_rank, tau, oracle);
    }
    Ok(DetStructure {
        tau,
        n,
        nodes,
        nearby: build_nearby(t, tau)?,
    })
}

fn build_node(
    nodes: &mut Vec<Node>,
    lo: u32,
    hi: u32,
    by_rank: Vec<u32>,
    tau: usize,
    oracle: &BaselineIndex,
) -> u32 {
    let len = (hi - lo + 1) as usize;
    if len < tau {
        return NONE;
    }
    let mid = (lo + hi) / 2;
    let left_list: Vec<u32> = by_rank.iter().copied().filter(|&p| p <= mid).collect();
    let right_list: Vec<u32> = by_rank.iter().copied().filter(|&p| p > mid).collect();
    drop(by_rank);

    let max_k = (len / 2) / tau;
    let mut partners = Vec::new();
    let mut lces = Vec::new();
    for k in 0..=max_k {
        let pos = hi as usize - k * tau;
        if pos <= mid as usize {
            break;
        }
        let (partner, lce) = best_left_partner(&left_list, pos, oracle);
        partners.push(partner as u32);
        lces.push(lce as u64);
    }

    let idx = nodes.len() as u32;
    nodes.push(Node {
        lo,
        hi,
        left: NONE,
        right: NONE,
        partners,
        lces,
    });
    // A length-1 interval has no proper halves to recurse into.
    let (left, right) = if len >= 2 {
        (
            build_node(nodes, lo, mid, left_list, tau, oracle),
            build_node(nodes, mid + 1, hi, right_list, tau, oracle),
        )
    } else {
        (NONE, NONE)
    };
    let node = &mut nodes[idx as usize];
    node.left = left;
    node.right = right;
    idx
}

/// Maximal-LCE partner for `pos` among `left_list` (positions sorted by
/// rank), breaking ties towards the smallest index. The maximum is achieved
/// by a lexicographic neighbor; the tie set is the contiguous rank segment
/// around `pos` whose LCE stays at the maximum.
fn best_left_partner(left_list: &[u32], pos: usize, oracle: &BaselineIndex) -> (usize, usize) {
    debug_assert!(!left_list.is_empty());
    let rpos = oracle.rank(pos);
    let at = left_list.partition_point(|&h| oracle.rank(h as usize) < rpos);
    let lce_at = |idx: usize| oracle.lce(left_list[idx] as usize, pos).unwrap();

    let mut best = 0usize;
    if at > 0 {
        best = best.max(lce_at(at - 1));
    }
    if at < left_list.len() {
        best = best.max(lce_at(at));
    }
    let mut partner = usize::MAX;
    let mut idx = at;
    while idx > 0 && lce_at(idx - 1) == best {
        partner = partner.min(left_list[idx - 1] as usize);
        idx -= 1;
        if best == 0 {
            break; // everything ties at zero; smaller indices found below
        }
    }
    let mut idx = at;
    while idx < left_list.len() && lce_at(idx) == best {
        partner = partner.min(left_list[idx] as usize);
        idx += 1;
        if best == 0 {
            break;
        }
    }
    if best == 0 {
        // With LCE 0 every left-half position ties; take the smallest.
        partner = left_list.iter().copied().min().unwrap() as usize;
    }
    (partner, best)
}

impl DetStructure {
    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn nearby(&self) -> &NearbyStructure {
        &self.nearby
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub(crate) fn from_parts(tau: usize, n: usize, nodes: Vec<Node>, nearby: NearbyStructure) -> Self {
        DetStructure { tau, n, nodes, nearby }
    }

    pub fn stored_words(&self) -> usize {
        let node_words: usize = self
            .nodes
            .iter()
            .map(|nd| 2 + (nd.partners.len() * 4).div_ceil(8) + nd.lces.len())
            .sum();
        node_words + self.nearby.stored_words()
    }

    fn solve(&self, t: &Text, i: usize, j: usize, stats: &mut QueryStats) -> Result<usize> {
        if i == j {
            return Ok(self.n - i);
        }
        let (i, j) = (i.min(j), i.max(j));
        if j - i <= self.tau {
            return nearby_query(&self.nearby, t, i, j, stats);
        }

        // Descend to the deepest node splitting the pair. A child missing
        // while both indices are inside it would mean |i - j| < tau, which
        // the delegation above already excluded.
        let mut node = &self.nodes[0];
        loop {
            let mid = node.mid() as usize;
            if j <= mid {
                node = &self.nodes[node.left as usize];
            } else if i > mid {
                node = &self.nodes[node.right as usize];
            } else {
                break;
            }
        }

        let mid = node.mid() as usize;
        let hi = node.hi as usize;
        let s = t.symbols();
        stats.reduction_rounds += 1;
        let mut delta = 0usize;
        loop {
            let ip = i + delta;
            let jp = j + delta;
            if ip > mid {
                // Both indices moved into the right half.
                return Ok(delta + self.solve(t, ip, jp, stats)?);
            }
            let back = hi - jp;
            if back % self.tau == 0 && back / self.tau < node.partners.len() {
                // Sampled position reached: rewrite into the left half.
                let k = back / self.tau;
                let partner = node.partners[k] as usize;
                let cap = node.lces[k] as usize;
                let rest = self.solve(t, ip, partner, stats)?;
                return Ok(delta + rest.min(cap));
            }
            stats.char_comparisons += 1;
            if s[ip] != s[jp] {
                return Ok(delta);
            }
            delta += 1;
        }
    }
}

/// Answers `LCE(i, j)`; equal to the naive scan on every pair.
pub fn det_query(
    ds: &DetStructure,
    t: &Text,
    i: usize,
    j: usize,
    stats: &mut QueryStats,
) -> Result<usize> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    ds.solve(t, i, j, stats)
}
