//! Time-space trade-off data structures for longest common extension (LCE)
//! queries over a read-only text.
//!
//! An `LCE(i, j)` query returns the length of the longest common prefix of
//! the suffixes of the text starting at positions `i` and `j`. All indices in
//! this crate are 0-based and ranges are half-open unless stated otherwise.
//!
//! For a trade-off parameter `tau` the crate provides:
//!
//! * [`det::DetStructure`] — deterministic recursive interval decomposition,
//!   `O((n/tau) log(n/tau))` words, `O(tau log(n/tau))` query time.
//! * [`nearby::NearbyStructure`] — per-block periodicity structure answering
//!   queries with `|i - j| <= tau` in `O(tau)` time and `O(n/tau)` words.
//! * [`mc::McStructure`] — Monte Carlo structure over sampled Karp-Rabin
//!   prefix fingerprints, `O(n/tau)` words, `O(tau + log(l/tau))` time.
//! * [`dc::DcStructure`] — difference-cover structure that answers long
//!   queries in constant time or certifies `l <= tau^2`.
//! * [`verify`] — Las Vegas verification that a fingerprint function is
//!   collision-free on every comparison the Monte Carlo query can make.
//! * [`derand`] — deterministic construction of a collision-free fingerprint
//!   tuple, yielding an unconditionally correct Monte Carlo structure.
//!
//! Ground truth for everything is [`text::naive_lce`] and the suffix-array
//! baseline [`baseline::BaselineIndex`].

pub mod baseline;
pub mod dc;
pub mod derand;
pub mod det;
pub mod dump;
mod error;
pub mod fp;
pub mod mc;
pub mod nearby;
pub mod stats;
pub mod text;
pub mod verify;

pub(crate) mod bitpack;
pub(crate) mod rmq;

pub use baseline::BaselineIndex;
pub use dc::{DcAnswer, DcStructure};
pub use derand::PhiTuple;
pub use det::DetStructure;
pub use dump::{Dump, Structure};
pub use error::{Error, Result};
pub use fp::{PhiParams, PrefixFingerprint};
pub use mc::{BitGeometry, McStructure};
pub use nearby::NearbyStructure;
pub use stats::QueryStats;
pub use text::{GeneratorKind, PeriodInfo, Text};
pub use verify::VerificationReport;
