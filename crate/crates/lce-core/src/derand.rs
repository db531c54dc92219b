//! Deterministic construction of a collision-free fingerprint tuple.
//!
//! For position set `A` and length set `L`, the comparison set pairs every
//! window starting in `A` with every text window of the same length. `B(f)`
//! counts pairs with equal fingerprints under `f`; `B(id)` counts genuinely
//! equal pairs; `f` is collision-free on the set iff `B(f) = B(id)`. Bases
//! `x_1..x_k` are chosen one at a time, each required to shrink the excess
//! `B - B(id)` by a factor `n^eps`; an averaging argument guarantees such a
//! base exists, and `k = ceil(4/eps)` rounds drive the excess below one.
//! Applied with `A` = block starts and `L` = the query's check lengths, the
//! result is a Monte Carlo structure whose answers are unconditionally
//! correct.

use crate::baseline::BaselineIndex;
use crate::fp::{is_prime, MultiWindow, PhiParams, MAX_MODULUS};
use crate::mc::{build_mc_multi, BitGeometry, McStructure};
use crate::text::Text;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// A component-wise fingerprint tuple `(phi_{p,x_1}, ..., phi_{p,x_k})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiTuple {
    pub p: u64,
    pub xs: Vec<u64>,
    pub eps: f64,
}

impl PhiTuple {
    pub fn phis(&self) -> Result<Vec<PhiParams>> {
        self.xs.iter().map(|&x| PhiParams::new(self.p, x)).collect()
    }
}

/// `B(id)`: genuinely equal pairs, counted with the exact LCE oracle.
pub fn count_b_id(
    t: &Text,
    a_set: &[usize],
    lengths: &[usize],
    oracle: &BaselineIndex,
) -> Result<u64> {
    let n = t.len();
    let mut total = 0u64;
    for &l in lengths {
        if l == 0 || l > n {
            continue;
        }
        for &a in a_set {
            if a + l > n {
                continue;
            }
            for i in 0..=(n - l) {
                if oracle.lce(a, i)? >= l {
                    total += 1;
                }
            }
        }
    }
    Ok(total)
}

/// `B(phi)` for a (possibly empty) tuple prefix, computed chunk by chunk in
/// `O(S)` working space per pass. An empty prefix is the constant function,
/// so every same-length pair collides.
pub fn count_b_phi(
    t: &Text,
    a_set: &[usize],
    lengths: &[usize],
    phis: &[PhiParams],
    space: usize,
) -> Result<u64> {
    if space == 0 || space > a_set.len().max(1) {
        return Err(Error::InvalidParameter(format!(
            "chunk size {space} outside [1, |A|]"
        )));
    }
    let n = t.len();
    if phis.is_empty() {
        let mut total = 0u64;
        for &l in lengths {
            if l == 0 || l > n {
                continue;
            }
            let fitting = a_set.iter().filter(|&&a| a + l <= n).count() as u64;
            total += fitting * (n - l + 1) as u64;
        }
        return Ok(total);
    }

    let mut total = 0u64;
    for chunk in a_set.chunks(space) {
        for &l in lengths {
            if l == 0 || l > n {
                continue;
            }
            // multiset of the chunk's window fingerprints
            let mut table: HashMap<Vec<u64>, u64> = HashMap::new();
            let mut want = chunk.iter().filter(|&&a| a + l <= n).peekable();
            let mut win = MultiWindow::new(phis, t, l)?;
            loop {
                match want.peek() {
                    Some(&&a) if a == win.pos() => {
                        *table.entry(win.residues().to_vec()).or_default() += 1;
                        want.next();
                    }
                    None => break,
                    _ => {}
                }
                if !win.advance() {
                    break;
                }
            }
            // count hits over every text window
            let mut win = MultiWindow::new(phis, t, l)?;
            loop {
                if let Some(&c) = table.get(win.residues()) {
                    total += c;
                }
                if !win.advance() {
                    break;
                }
            }
        }
    }
    Ok(total)
}

/// Smallest prime at least `target`.
fn next_prime(target: u64) -> u64 {
    let mut p = target.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Chooses `p` and the bases `x_1..x_k`; the returned tuple satisfies
/// `B(phi) = B(id)` on the comparison set of `(A, L)`.
pub fn derandomize(
    t: &Text,
    a_set: &[usize],
    lengths: &[usize],
    eps: f64,
    space: usize,
    oracle: &BaselineIndex,
) -> Result<PhiTuple> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("eps = {eps} outside (0, 1)")));
    }
    let n = t.len();
    let max_l = lengths.iter().copied().max().unwrap_or(0);
    if max_l == 0 {
        return Err(Error::InvalidParameter("empty length set".into()));
    }
    let n_eps = (n as f64).powf(eps);
    let target = (max_l as f64 * n_eps).ceil() as u64;
    if target > MAX_MODULUS {
        return Err(Error::InvalidParameter(format!(
            "modulus target {target} exceeds 2^61 - 1"
        )));
    }
    let p = next_prime(target);
    let sigma = t.symbols().iter().copied().max().unwrap() + 1;
    if p <= sigma {
        // The alphabet-splitting transformation is out of scope; demand a
        // modulus that already dominates the alphabet.
        return Err(Error::ModulusTooSmall { p, sigma });
    }

    let b_id = count_b_id(t, a_set, lengths, oracle)?;
    let mut b_cur = count_b_phi(t, a_set, lengths, &[], space)?;
    let k = (4.0 / eps).ceil() as usize;
    let mut phis: Vec<PhiParams> = Vec::with_capacity(k);
    let mut xs = Vec::with_capacity(k);

    for round in 0..k {
        if b_cur == b_id {
            break;
        }
        let threshold = (b_cur - b_id) as f64 / n_eps;
        let mut accepted = None;
        for x in 1..p {
            let mut cand = phis.clone();
            cand.push(PhiParams::new(p, x)?);
            let b_new = count_b_phi(t, a_set, lengths, &cand, space)?;
            debug_assert!(b_new >= b_id);
            if (b_new - b_id) as f64 <= threshold {
                accepted = Some((x, b_new));
                break;
            }
        }
        let Some((x, b_new)) = accepted else {
            return Err(Error::NoQualifyingBase { round });
        };
        phis.push(PhiParams::new(p, x)?);
        xs.push(x);
        b_cur = b_new;
    }

    if b_cur != b_id {
        return Err(Error::NoQualifyingBase { round: k });
    }
    if xs.is_empty() {
        // Degenerate input (every pair genuinely equal): any base works.
        xs.push(1);
    }
    Ok(PhiTuple { p, xs, eps })
}

/// Deterministic Monte Carlo structure: `A` = block starts, `L` = the
/// query's check lengths, chunk size `|A|`.
pub fn build_derand_mc(
    t: &Text,
    tau: usize,
    eps: f64,
    oracle: &BaselineIndex,
) -> Result<(McStructure, PhiTuple)> {
    let geo = BitGeometry::new(t.len(), tau)?;
    let n = t.len();
    let tau_eff = geo.tau();
    let a_set: Vec<usize> = (0..geo.blocks())
        .map(|k| k * tau_eff)
        .filter(|&a| a < n)
        .collect();
    let mut lengths: Vec<usize> = (0..geo.lg_blocks())
        .map(|l| (1usize << l) * tau_eff)
        .filter(|&l| l <= n)
        .collect();
    if lengths.is_empty() {
        // Single-block geometry: checks always clamp, but a non-degenerate
        // length keeps the selection hypothesis satisfied.
        lengths.push(tau_eff.min(n));
    }
    let tuple = derandomize(t, &a_set, &lengths, eps, a_set.len().max(1), oracle)?;
    let ms = build_mc_multi(t, tau, tuple.phis()?)?;
    Ok((ms, tuple))
}
