//! Per-query instrumentation counters.

use serde::{Deserialize, Serialize};
use std::time::Duration;

/// Counters backing the instrumented complexity checks. Zero-initialized per
/// query and only ever incremented while it runs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    /// Pairs of text symbols compared directly.
    pub char_comparisons: u64,
    /// Fingerprint comparisons performed (one per `check` that evaluated
    /// fingerprints).
    pub fp_evaluations: u64,
    /// Symbol-level steps spent reconstructing prefix fingerprints from the
    /// nearest sample.
    pub fp_extend_steps: u64,
    /// Reduction rounds of the deterministic query.
    pub reduction_rounds: u64,
    /// Wall time, filled in by the harness around the call.
    #[serde(with = "duration_ns", rename = "wall_time_ns")]
    pub wall_time: Duration,
}

impl QueryStats {
    pub fn new() -> Self {
        Self::default()
    }
}

mod duration_ns {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_nanos() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_nanos(u64::deserialize(d)?))
    }
}
