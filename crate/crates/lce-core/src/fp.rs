//! Karp-Rabin fingerprint arithmetic.
//!
//! A fingerprint function is a pair `(p, x)` with `p` prime and
//! `x in [1, p-1]`. The fingerprint of a range is the position-normalized
//! polynomial `sum T[k] * x^(k-i) mod p`, so equal substrings always hash
//! equal regardless of offset. Prefix fingerprints carry `x^i mod p` so that
//! substring fingerprints compose in O(1) and shifting by `a` costs `O(a)`.
//!
//! The modulus is capped at 61 bits so every product fits a 128-bit
//! intermediate.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::text::Text;
use crate::{Error, Result};

/// Largest prime below 2^61 is the Mersenne prime 2^61 - 1; used as the cap
/// when n^(4+c) would overflow the 61-bit budget.
pub const MAX_MODULUS: u64 = (1u64 << 61) - 1;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // both < p <= 2^61, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is sufficient for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A Karp-Rabin fingerprint function `phi_{p,x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiParams {
    pub p: u64,
    pub x: u64,
    x_inv: u64,
}

impl PhiParams {
    pub fn new(p: u64, x: u64) -> Result<Self> {
        if !is_prime(p) || p > MAX_MODULUS {
            return Err(Error::InvalidParameter(format!("p = {p} must be a prime <= 2^61 - 1")));
        }
        if x == 0 || x >= p {
            return Err(Error::InvalidParameter(format!("x = {x} must lie in [1, p-1]")));
        }
        Ok(PhiParams { p, x, x_inv: pow_mod(x, p - 2, p) })
    }

    pub fn x_inv(&self) -> u64 {
        self.x_inv
    }

    /// Fingerprint of the inclusive range `t[i..=j]`, by Horner's rule in
    /// `O(j - i + 1)` multiplications.
    pub fn phi_range(&self, t: &Text, i: usize, j: usize) -> Result<u64> {
        t.check_pos(i)?;
        t.check_pos(j)?;
        if i > j {
            return Err(Error::UnorderedFingerprints { i, j });
        }
        let s = t.symbols();
        let mut acc = 0u64;
        for k in (i..=j).rev() {
            acc = add_mod(mul_mod(acc, self.x, self.p), s[k] % self.p, self.p);
        }
        Ok(acc)
    }

    /// Fingerprint of the empty prefix: value 0, exponent 1.
    pub fn empty_prefix(&self) -> PrefixFingerprint {
        PrefixFingerprint { value: 0, exponent: 1 % self.p, index: 0 }
    }

    /// Shifts a prefix fingerprint by `a` positions in `O(|a|)` time,
    /// maintaining the exponent.
    pub fn fp_extend(&self, f: &PrefixFingerprint, t: &Text, a: isize) -> Result<PrefixFingerprint> {
        let n = t.len();
        let target = f.index as isize + a;
        if target < 0 || target as usize > n {
            return Err(Error::IndexOutOfRange {
                pos: target.unsigned_abs(),
                n,
            });
        }
        let s = t.symbols();
        let mut g = f.clone();
        while (g.index as isize) < target {
            g.value = add_mod(g.value, mul_mod(s[g.index] % self.p, g.exponent, self.p), self.p);
            g.exponent = mul_mod(g.exponent, self.x, self.p);
            g.index += 1;
        }
        while (g.index as isize) > target {
            g.index -= 1;
            g.exponent = mul_mod(g.exponent, self.x_inv, self.p);
            g.value = sub_mod(g.value, mul_mod(s[g.index] % self.p, g.exponent, self.p), self.p);
        }
        Ok(g)
    }

    /// Position-normalized fingerprint of `t[f_i.index .. f_j.index)`, via
    /// `(f_j - f_i) * (x^{f_i.index})^{-1}`.
    pub fn fp_substring(&self, f_i: &PrefixFingerprint, f_j: &PrefixFingerprint) -> Result<u64> {
        if f_i.index >= f_j.index {
            return Err(Error::UnorderedFingerprints { i: f_i.index, j: f_j.index });
        }
        let diff = sub_mod(f_j.value, f_i.value, self.p);
        let inv = pow_mod(f_i.exponent, self.p - 2, self.p);
        Ok(mul_mod(diff, inv, self.p))
    }

    /// Fingerprints of all length-`l` windows, each step O(1).
    pub fn sliding_window<'a>(&self, t: &'a Text, l: usize) -> Result<SlidingWindow<'a>> {
        if l == 0 || l > t.len() {
            return Err(Error::InvalidParameter(format!(
                "window length {l} out of range for text of length {}",
                t.len()
            )));
        }
        let mut value = 0u64;
        let s = t.symbols();
        for k in (0..l).rev() {
            value = add_mod(mul_mod(value, self.x, self.p), s[k] % self.p, self.p);
        }
        Ok(SlidingWindow {
            phi: *self,
            text: s,
            l,
            pos: 0,
            value,
            x_top: pow_mod(self.x, (l - 1) as u64, self.p),
            done: false,
        })
    }
}

/// The fingerprint of the length-`index` prefix, bundled with `x^index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixFingerprint {
    pub value: u64,
    pub exponent: u64,
    pub index: usize,
}

/// Iterator over `(position, fingerprint)` for all windows of a fixed length.
pub struct SlidingWindow<'a> {
    phi: PhiParams,
    text: &'a [u64],
    l: usize,
    pos: usize,
    value: u64,
    x_top: u64,
    done: bool,
}

impl<'a> Iterator for SlidingWindow<'a> {
    type Item = (usize, u64);

    fn next(&mut self) -> Option<(usize, u64)> {
        if self.done {
            return None;
        }
        let out = (self.pos, self.value);
        if self.pos + self.l >= self.text.len() {
            self.done = true;
        } else {
            let p = self.phi.p;
            let out_sym = self.text[self.pos] % p;
            let in_sym = self.text[self.pos + self.l] % p;
            self.value = add_mod(
                mul_mod(sub_mod(self.value, out_sym, p), self.phi.x_inv, p),
                mul_mod(in_sym, self.x_top, p),
                p,
            );
            self.pos += 1;
        }
        Some(out)
    }
}

/// Simultaneous sliding windows for a tuple of fingerprint functions.
pub struct MultiWindow<'a> {
    phis: &'a [PhiParams],
    text: &'a [u64],
    l: usize,
    pos: usize,
    values: Vec<u64>,
    x_tops: Vec<u64>,
}

impl<'a> MultiWindow<'a> {
    pub fn new(phis: &'a [PhiParams], t: &'a Text, l: usize) -> Result<Self> {
        if phis.is_empty() {
            return Err(Error::InvalidParameter("empty fingerprint tuple".into()));
        }
        if l == 0 || l > t.len() {
            return Err(Error::InvalidParameter(format!(
                "window length {l} out of range for text of length {}",
                t.len()
            )));
        }
        let s = t.symbols();
        let values = phis
            .iter()
            .map(|phi| {
                let mut v = 0u64;
                for k in (0..l).rev() {
                    v = add_mod(mul_mod(v, phi.x, phi.p), s[k] % phi.p, phi.p);
                }
                v
            })
            .collect();
        let x_tops = phis.iter().map(|phi| pow_mod(phi.x, (l - 1) as u64, phi.p)).collect();
        Ok(MultiWindow { phis, text: s, l, pos: 0, values, x_tops })
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn residues(&self) -> &[u64] {
        &self.values
    }

    /// Moves to the next window; false once the last window has been left.
    pub fn advance(&mut self) -> bool {
        if self.pos + self.l >= self.text.len() {
            return false;
        }
        for (c, phi) in self.phis.iter().enumerate() {
            let p = phi.p;
            let out_sym = self.text[self.pos] % p;
            let in_sym = self.text[self.pos + self.l] % p;
            self.values[c] = add_mod(
                mul_mod(sub_mod(self.values[c], out_sym, p), phi.x_inv, p),
                mul_mod(in_sym, self.x_tops[c], p),
                p,
            );
        }
        self.pos += 1;
        true
    }
}

/// Picks `(p, x)` with `p` prime in `[n^(4+c), 2 n^(4+c)]` (capped at the
/// largest prime below 2^61) and `x` uniform in `[1, p-1]`. Deterministic
/// for a fixed seed.
pub fn pick_random_phi(n: usize, c: f64, seed: u64) -> Result<PhiParams> {
    if n == 0 || c < 0.0 {
        return Err(Error::InvalidParameter("pick_random_phi needs n >= 1 and c >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = (n as f64).powf(4.0 + c);
    let p = if target >= MAX_MODULUS as f64 {
        MAX_MODULUS
    } else {
        let lo = (target as u64).max(5);
        let hi = lo.saturating_mul(2).min(MAX_MODULUS);
        // Bertrand guarantees a prime in [lo, 2 lo]; random probing finds it
        // quickly. The iteration cap only guards against implementation bugs.
        let mut found = None;
        for _ in 0..1_000_000 {
            let cand = rng.gen_range(lo..=hi) | 1;
            if is_prime(cand) {
                found = Some(cand);
                break;
            }
        }
        found.expect("no prime found in [n^(4+c), 2 n^(4+c)]; contradiction with Bertrand")
    };
    let x = rng.gen_range(1..p);
    PhiParams::new(p, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn phi(p: u64, x: u64) -> PhiParams {
        PhiParams::new(p, x).unwrap()
    }

    fn text_of(sym: &[u64]) -> Text {
        Text::new(sym.to_vec()).unwrap()
    }

    #[test]
    fn phi_range_direct_evaluation() {
        let f = phi(101, 3);
        let t = text_of(&[1, 2, 3]);
        assert_eq!(f.phi_range(&t, 0, 1).unwrap(), 7); // 1 + 2*3
        assert_eq!(f.phi_range(&t, 1, 1).unwrap(), 2); // single term
        assert_eq!(f.phi_range(&t, 0, 2).unwrap(), 34); // 1 + 6 + 27
        assert!(f.phi_range(&t, 2, 1).is_err());
        assert!(f.phi_range(&t, 0, 3).is_err());
    }

    #[test]
    fn extend_and_substring_compose() {
        let f = phi(101, 3);
        let t = Text::from_bytes(b"banana").unwrap();
        let f0 = f.empty_prefix();
        // identity shift
        assert_eq!(f.fp_extend(&f0, &t, 0).unwrap(), f0);
        // full-text prefix equals the direct evaluation
        let fn_ = f.fp_extend(&f0, &t, 6).unwrap();
        assert_eq!(
            f.fp_substring(&f0.clone(), &fn_).unwrap(),
            f.phi_range(&t, 0, 5).unwrap()
        );
        // forward then backward returns the original
        let f4 = f.fp_extend(&f0, &t, 4).unwrap();
        let back = f.fp_extend(&f4, &t, -4).unwrap();
        assert_eq!(back, f0);
        // substring composition: f(1), f(4) -> phi("ana")
        let f1 = f.fp_extend(&f0, &t, 1).unwrap();
        assert_eq!(f.fp_substring(&f1, &f4).unwrap(), f.phi_range(&t, 1, 3).unwrap());
        // equal substrings at different offsets hash equal
        let f3 = f.fp_extend(&f0, &t, 3).unwrap();
        let f6 = f.fp_extend(&f3, &t, 3).unwrap();
        assert_eq!(f.fp_substring(&f1, &f4).unwrap(), f.fp_substring(&f3, &f6).unwrap());
        // exponent bookkeeping survives arbitrary shift sequences
        let mut g = f0.clone();
        for a in [3isize, -1, 2, -4, 6, -6, 5] {
            g = f.fp_extend(&g, &t, a).unwrap();
            assert_eq!(g.exponent, pow_mod(3, g.index as u64, 101));
        }
    }

    #[test]
    fn sliding_window_matches_phi_range() {
        let f = phi(101, 3);
        let t = Text::from_bytes(b"banana").unwrap();
        let vals: Vec<(usize, u64)> = f.sliding_window(&t, 3).unwrap().collect();
        assert_eq!(vals.len(), 4);
        for &(i, v) in &vals {
            assert_eq!(v, f.phi_range(&t, i, i + 2).unwrap());
        }
        // "ana" at positions 1 and 3
        assert_eq!(vals[1].1, vals[3].1);
        // full-length window
        let whole: Vec<_> = f.sliding_window(&t, 6).unwrap().collect();
        assert_eq!(whole, vec![(0, f.phi_range(&t, 0, 5).unwrap())]);
        // constant text: all windows equal
        let aaaa = Text::from_bytes(b"aaaa").unwrap();
        let ws: Vec<_> = f.sliding_window(&aaaa, 2).unwrap().map(|(_, v)| v).collect();
        assert!(ws.windows(2).all(|w| w[0] == w[1]));
        assert!(f.sliding_window(&t, 7).is_err());
        assert!(f.sliding_window(&t, 0).is_err());
    }

    #[test]
    fn multi_window_matches_single_windows() {
        let phis = [phi(101, 3), phi(997, 12)];
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let mut mw = MultiWindow::new(&phis, &t, 4).unwrap();
        loop {
            let pos = mw.pos();
            for (c, f) in phis.iter().enumerate() {
                assert_eq!(mw.residues()[c], f.phi_range(&t, pos, pos + 3).unwrap());
            }
            if !mw.advance() {
                break;
            }
        }
        assert_eq!(mw.pos(), t.len() - 4);
    }

    #[test]
    fn miller_rabin_known_values() {
        for p in [2u64, 3, 61, 101, 2147483647, MAX_MODULUS] {
            assert!(is_prime(p), "{p}");
        }
        for c in [0u64, 1, 4, 100, 561, 25326001, (1 << 61) - 3] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn pick_random_phi_contract() {
        let a = pick_random_phi(256, 0.0, 42).unwrap();
        let b = pick_random_phi(256, 0.0, 42).unwrap();
        assert_eq!(a, b); // reproducible
        assert!(is_prime(a.p));
        let lo = 256u64.pow(4);
        assert!(a.p >= lo && a.p <= 2 * lo, "p = {}", a.p);
        assert!(a.x >= 1 && a.x < a.p);
        // distinct seeds give distinct x with overwhelming probability
        let distinct = (0..100)
            .map(|s| pick_random_phi(256, 0.0, s).unwrap().x)
            .collect::<std::collections::HashSet<_>>();
        assert!(distinct.len() >= 99);
        // cap case
        let big = pick_random_phi(1 << 20, 1.0, 7).unwrap();
        assert_eq!(big.p, MAX_MODULUS);
    }

    proptest! {
        // Soundness: equal substrings always hash equal, and composition
        // matches direct evaluation at every split.
        #[test]
        fn composition_matches_direct(sym in prop::collection::vec(0u64..8, 1..64), x in 1u64..100) {
            let t = text_of(&sym);
            let f = phi(101, x % 100 + 1);
            let mut pf = f.empty_prefix();
            for j in 1..=t.len() {
                pf = f.fp_extend(&pf, &t, 1).unwrap();
                prop_assert_eq!(pf.index, j);
                for i in 0..j {
                    let fi = f.fp_extend(&f.empty_prefix(), &t, i as isize).unwrap();
                    let composed = f.fp_substring(&fi, &pf).unwrap();
                    prop_assert_eq!(composed, f.phi_range(&t, i, j - 1).unwrap());
                }
            }
        }
    }
}
