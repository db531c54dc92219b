//! The input text, reference oracles and adversarial text generators.
//!
//! Symbols are machine words (`u64`): byte-backed texts widen each byte,
//! generated texts may use the full word. The text is immutable after
//! construction and all other modules treat it as read-only.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// An immutable text over an integer alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    symbols: Vec<u64>,
}

impl Text {
    pub fn new(symbols: Vec<u64>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Text { symbols })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::new(bytes.iter().map(|&b| u64::from(b)).collect())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 by construction
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    /// Largest symbol value, i.e. the effective alphabet bound.
    pub fn max_symbol(&self) -> u64 {
        self.symbols.iter().copied().max().unwrap_or(0)
    }

    pub fn check_pos(&self, pos: usize) -> Result<()> {
        if pos < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { pos, n: self.len() })
        }
    }

    /// Lossy rendering for small test texts; symbols above 255 map to '?'.
    pub fn to_display_string(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| {
                if s < 256 {
                    char::from(s as u8)
                } else {
                    '?'
                }
            })
            .collect()
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_display_string())
    }
}

/// Longest common extension by direct left-to-right comparison.
///
/// This is the definitional oracle every structure in the crate is tested
/// against.
pub fn naive_lce(t: &Text, i: usize, j: usize) -> Result<usize> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    let s = t.symbols();
    let n = s.len();
    let mut m = 0;
    while i + m < n && j + m < n && s[i + m] == s[j + m] {
        m += 1;
    }
    Ok(m)
}

/// Longest common suffix of the prefixes `T[0..=i]` and `T[0..=j]`
/// (inclusive ends), by direct right-to-left comparison.
pub fn naive_lce_r(t: &Text, i: usize, j: usize) -> Result<usize> {
    t.check_pos(i)?;
    t.check_pos(j)?;
    let s = t.symbols();
    let mut m = 0;
    while m <= i && m <= j && s[i - m] == s[j - m] {
        m += 1;
    }
    Ok(m)
}

/// The smallest period of a string, with the `periodic` marker meaning
/// `period <= |s| / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodInfo {
    pub period: usize,
    pub periodic: bool,
}

/// Smallest `p in [1, |s|]` with `s[i] == s[i + p]` for all valid `i`,
/// by brute force. `O(|s|^2)`; an oracle, not a production path.
pub fn brute_period(s: &[u64]) -> Result<PeriodInfo> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = s.len();
    for p in 1..=n {
        if (0..n - p).all(|i| s[i] == s[i + p]) {
            return Ok(PeriodInfo {
                period: p,
                periodic: 2 * p <= n,
            });
        }
    }
    unreachable!("p = |s| is always a period");
}

/// Smallest period via the border array (failure function): `O(|s|)` time,
/// `O(|s|)` transient space.
pub fn border_period(s: &[u64]) -> Result<PeriodInfo> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = s.len();
    let mut border = vec![0usize; n];
    let mut b = 0;
    for i in 1..n {
        while b > 0 && s[i] != s[b] {
            b = border[b - 1];
        }
        if s[i] == s[b] {
            b += 1;
        }
        border[i] = b;
    }
    let p = n - border[n - 1];
    Ok(PeriodInfo {
        period: p,
        periodic: 2 * p <= n,
    })
}

/// Deterministic text generators used for adversarial inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Uniform symbols in `[0, sigma)` from a seeded RNG.
    Random { n: usize, sigma: u64, seed: u64 },
    /// The motif repeated and truncated to length `n`.
    Periodic { motif: Vec<u64>, n: usize },
    /// Prefix of the Fibonacci word `s_k = s_{k-1} s_{k-2}` over `{a, b}`.
    Fibonacci { n: usize },
    /// Prefix of the Thue-Morse word over `{a, b}`.
    ThueMorse { n: usize },
    /// `n` copies of `a`.
    Constant { n: usize },
}

impl GeneratorKind {
    pub fn generate(&self) -> Result<Text> {
        match *self {
            GeneratorKind::Random { n, sigma, seed } => {
                if n == 0 || sigma == 0 {
                    return Err(Error::InvalidParameter(
                        "random generator needs n >= 1 and sigma >= 1".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Text::new((0..n).map(|_| rng.gen_range(0..sigma)).collect())
            }
            GeneratorKind::Periodic { ref motif, n } => {
                if motif.is_empty() {
                    return Err(Error::EmptyInput);
                }
                Text::new((0..n).map(|i| motif[i % motif.len()]).collect())
            }
            GeneratorKind::Fibonacci { n } => {
                if n == 0 {
                    return Err(Error::EmptyInput);
                }
                let (a, b) = (u64::from(b'a'), u64::from(b'b'));
                let mut prev = vec![a];
                let mut cur = vec![a, b];
                while cur.len() < n {
                    let mut next = cur.clone();
                    next.extend_from_slice(&prev);
                    prev = cur;
                    cur = next;
                }
                cur.truncate(n);
                Text::new(cur)
            }
            GeneratorKind::ThueMorse { n } => {
                let (a, b) = (u64::from(b'a'), u64::from(b'b'));
                Text::new(
                    (0..n)
                        .map(|i| if (i as u64).count_ones() % 2 == 0 { a } else { b })
                        .collect(),
                )
            }
            GeneratorKind::Constant { n } => {
                Text::new(vec![u64::from(b'a'); n])
            }
        }
    }
}

/// Parses the CLI generator grammar:
/// `random:<n>:<sigma>:<seed>`, `periodic:<motif>:<n>`, `fibonacci:<n>`,
/// `thue_morse:<n>`, `constant:<n>`.
impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameter(format!("bad generator spec: {s:?}"));
        let num = |v: &str| v.parse::<usize>().map_err(|_| bad());
        match parts.as_slice() {
            ["random", n, sigma, seed] => Ok(GeneratorKind::Random {
                n: num(n)?,
                sigma: sigma.parse().map_err(|_| bad())?,
                seed: seed.parse().map_err(|_| bad())?,
            }),
            ["periodic", motif, n] => Ok(GeneratorKind::Periodic {
                motif: motif.bytes().map(u64::from).collect(),
                n: num(n)?,
            }),
            ["fibonacci", n] => Ok(GeneratorKind::Fibonacci { n: num(n)? }),
            ["thue_morse", n] => Ok(GeneratorKind::ThueMorse { n: num(n)? }),
            ["constant", n] => Ok(GeneratorKind::Constant { n: num(n)? }),
            _ => Err(bad()),
        }
    }
}
