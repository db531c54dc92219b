//! Harness logic behind the `lce` binary: structure construction, dump I/O,
//! query dispatch, and the benchmark workload runner. Everything is a plain
//! function so integration tests drive it without spawning processes.

use lce_core::baseline::BaselineIndex;
use lce_core::dc::{build_dc, combined_query, dc_query, DcAnswer};
use lce_core::derand::build_derand_mc;
use lce_core::det::{build_det, det_query};
use lce_core::dump::{Dump, Structure};
use lce_core::fp::pick_random_phi;
use lce_core::mc::{build_mc, mc_query};
use lce_core::nearby::{build_nearby, nearby_query};
use lce_core::text::{naive_lce, GeneratorKind, Text};
use lce_core::verify::build_las_vegas;
use lce_core::QueryStats;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use std::time::Instant;

pub const CSV_SCHEMA: &str = "v1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(
        "oracle mismatch: {structure} tau={tau} query ({i},{j}) answered {got}, oracle says {want}"
    )]
    OracleMismatch { structure: String, tau: usize, i: usize, j: usize, got: usize, want: usize },

    #[error("verification found a collision")]
    Collision,

    #[error(transparent)]
    Core(#[from] lce_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("bad workload: {0}")]
    Workload(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::OracleMismatch { .. } => 2,
            CliError::Collision => 3,
            _ => 1,
        }
    }
}

/// `--gen <spec>` or `--text <path>` (raw bytes).
pub fn load_text(gen: Option<&str>, path: Option<&str>) -> Result<Text> {
    match (gen, path) {
        (Some(spec), None) => Ok(GeneratorKind::from_str(spec)?.generate()?),
        (None, Some(p)) => Ok(Text::from_bytes(&std::fs::read(p)?)?),
        _ => Err(CliError::Usage("exactly one of --gen and --text is required".into())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Baseline,
    Nearby,
    Det,
    Mc,
    Lv,
    Dc,
    Combined,
    Derand,
}

impl FromStr for Kind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline" => Kind::Baseline,
            "nearby" => Kind::Nearby,
            "det" => Kind::Det,
            "mc" => Kind::Mc,
            "lv" => Kind::Lv,
            "dc" => Kind::Dc,
            "combined" => Kind::Combined,
            "derand" => Kind::Derand,
            other => return Err(CliError::Usage(format!("unknown structure {other:?}"))),
        })
    }
}

/// Builds any structure kind; `seed` feeds the randomized ones, `eps` the
/// derandomized one.
pub fn build_structure(
    t: &Text,
    kind: Kind,
    tau: usize,
    seed: u64,
    eps: f64,
) -> Result<Structure> {
    let oracle = || BaselineIndex::build(t);
    Ok(match kind {
        Kind::Baseline => Structure::Baseline(oracle()),
        Kind::Nearby => Structure::Nearby(build_nearby(t, tau)?),
        Kind::Det => Structure::Det(build_det(t, tau, &oracle())?),
        Kind::Mc => Structure::Mc(build_mc(t, tau, pick_random_phi(t.len(), 1.0, seed)?)?),
        Kind::Lv => {
            let (mc, report) = build_las_vegas(t, tau, seed)?;
            Structure::Lv { mc, trials: report.trials }
        }
        Kind::Dc => Structure::Dc(build_dc(t, tau, &oracle())?),
        Kind::Combined => Structure::Combined {
            mc: build_mc(t, tau, pick_random_phi(t.len(), 1.0, seed)?)?,
            dc: build_dc(t, tau, &oracle())?,
        },
        Kind::Derand => {
            let (mc, tuple) = build_derand_mc(t, tau, eps, &oracle())?;
            Structure::Derand { mc, tuple }
        }
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryOutput {
    pub i: usize,
    pub j: usize,
    pub answer: usize,
    /// For the combined structure: which component produced the answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dispatch: Option<&'static str>,
    pub stats: QueryStats,
}

pub fn query_structure(s: &Structure, t: &Text, i: usize, j: usize) -> Result<QueryOutput> {
    let mut stats = QueryStats::new();
    let start = Instant::now();
    let (answer, dispatch) = match s {
        Structure::Baseline(b) => (b.lce(i, j)?, None),
        Structure::Nearby(ns) => (nearby_query(ns, t, i, j, &mut stats)?, None),
        Structure::Det(ds) => (det_query(ds, t, i, j, &mut stats)?, None),
        Structure::Mc(ms) | Structure::Lv { mc: ms, .. } | Structure::Derand { mc: ms, .. } => {
            (mc_query(ms, t, i, j, &mut stats)?, None)
        }
        Structure::Dc(dc) => match dc_query(dc, t, i, j)? {
            DcAnswer::Exact(l) => (l, Some("exact")),
            DcAnswer::Certificate => {
                return Err(CliError::Usage(format!(
                    "dc alone cannot answer ({i},{j}); build the combined structure"
                )))
            }
        },
        Structure::Combined { mc, dc } => {
            let dispatch = match dc_query(dc, t, i, j)? {
                DcAnswer::Exact(_) => "dc",
                DcAnswer::Certificate => "mc",
            };
            (combined_query(mc, dc, t, i, j, &mut stats)?, Some(dispatch))
        }
    };
    stats.wall_time = start.elapsed();
    Ok(QueryOutput { i, j, answer, dispatch, stats })
}

// ---------------------------------------------------------------------------
// Benchmark workloads
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuerySet {
    Explicit(Vec<(usize, usize)>),
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Checks {
    Oracle,
    Invariants,
    None,
}

/// Deterministic benchmark description; serialized as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Workload {
    /// Generator spec (see the text generator grammar).
    pub gen: String,
    pub taus: Vec<usize>,
    pub structures: Vec<Kind>,
    pub queries: QuerySet,
    pub checks: Checks,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

fn default_eps() -> f64 {
    0.5
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub structure: Kind,
    pub tau: usize,
    pub stored_words: usize,
    pub queries: usize,
    pub max_char_comparisons: u64,
    pub mean_char_comparisons: f64,
    pub max_fp_evaluations: u64,
    pub mean_fp_evaluations: f64,
    pub max_rounds: u64,
    pub mean_rounds: f64,
    pub build_ns: u128,
    pub query_ns: u128,
}

pub fn csv_header() -> String {
    format!(
        "schema_{CSV_SCHEMA},structure,tau,stored_words,queries,\
         max_char_comparisons,mean_char_comparisons,max_fp_evaluations,\
         mean_fp_evaluations,max_rounds,mean_rounds,build_ns,query_ns"
    )
}

pub fn csv_row(r: &BenchRow) -> String {
    format!(
        ",{:?},{},{},{},{},{:.3},{},{:.3},{},{:.3},{},{}",
        r.structure,
        r.tau,
        r.stored_words,
        r.queries,
        r.max_char_comparisons,
        r.mean_char_comparisons,
        r.max_fp_evaluations,
        r.mean_fp_evaluations,
        r.max_rounds,
        r.mean_rounds,
        r.build_ns,
        r.query_ns
    )
    .to_lowercase()
}

fn materialize_queries(q: &QuerySet, n: usize) -> Vec<(usize, usize)> {
    match q {
        QuerySet::Explicit(pairs) => pairs.clone(),
        QuerySet::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..*count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        }
    }
}

/// Runs every (structure, tau) cell over the same query list. With oracle
/// checks on, the first mismatch aborts the run with its witness query.
pub fn run_bench(w: &Workload) -> Result<Vec<BenchRow>> {
    let t = GeneratorKind::from_str(&w.gen)?.generate()?;
    let n = t.len();
    let pairs = materialize_queries(&w.queries, n);
    let oracle = match w.checks {
        Checks::Oracle => Some(BaselineIndex::build(&t)),
        _ => None,
    };

    let mut rows = Vec::new();
    for &kind in &w.structures {
        for &tau in &w.taus {
            let built_at = Instant::now();
            let s = build_structure(&t, kind, tau, w.seed, w.eps)?;
            let build_ns = built_at.elapsed().as_nanos();

            let mut row = BenchRow {
                structure: kind,
                tau,
                stored_words: s.stored_words(),
                queries: pairs.len(),
                max_char_comparisons: 0,
                mean_char_comparisons: 0.0,
                max_fp_evaluations: 0,
                mean_fp_evaluations: 0.0,
                max_rounds: 0,
                mean_rounds: 0.0,
                build_ns,
                query_ns: 0,
            };
            let queried_at = Instant::now();
            for &(i, j) in &pairs {
                // the standalone dc structure only answers its exact subset
                let (i, j) = (i, j);
                if kind == Kind::Nearby && i.abs_diff(j) > tau {
                    continue;
                }
                if kind == Kind::Dc {
                    continue;
                }
                let out = query_structure(&s, &t, i, j)?;
                if let Some(oracle) = &oracle {
                    let want = oracle.lce(i, j)?;
                    if out.answer != want {
                        return Err(CliError::OracleMismatch {
                            structure: format!("{kind:?}").to_lowercase(),
                            tau,
                            i,
                            j,
                            got: out.answer,
                            want,
                        });
                    }
                }
                row.max_char_comparisons = row.max_char_comparisons.max(out.stats.char_comparisons);
                row.mean_char_comparisons += out.stats.char_comparisons as f64;
                row.max_fp_evaluations = row.max_fp_evaluations.max(out.stats.fp_evaluations);
                row.mean_fp_evaluations += out.stats.fp_evaluations as f64;
                row.max_rounds = row.max_rounds.max(out.stats.reduction_rounds);
                row.mean_rounds += out.stats.reduction_rounds as f64;
            }
            row.query_ns = queried_at.elapsed().as_nanos();
            if !pairs.is_empty() {
                let m = pairs.len() as f64;
                row.mean_char_comparisons /= m;
                row.mean_fp_evaluations /= m;
                row.mean_rounds /= m;
            }
            rows.push(row);
        }
    }
    // deterministic order regardless of evaluation order
    rows.sort_by_key(|r| (format!("{:?}", r.structure), r.tau));
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Dump files
// ---------------------------------------------------------------------------

/// JSON sidecar written next to each dump.
#[derive(Debug, Serialize, Deserialize)]
pub struct DumpMeta {
    pub kind: String,
    pub n: usize,
    pub tau: Option<usize>,
    /// Seed the randomized builders were driven by; replaying the build
    /// with the same seed reproduces the dump byte for byte.
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub stored_words: usize,
    pub bytes: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildParams {
    pub tau: Option<usize>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
}

pub fn write_dump(dump: &Dump, path: &str, params: BuildParams) -> Result<DumpMeta> {
    let bytes = dump.to_bytes();
    std::fs::write(path, &bytes)?;
    let meta = DumpMeta {
        kind: dump.structure.kind_name().to_string(),
        n: dump.text.len(),
        tau: params.tau,
        seed: params.seed,
        eps: params.eps,
        stored_words: dump.structure.stored_words(),
        bytes: bytes.len(),
    };
    std::fs::write(format!("{path}.json"), serde_json::to_string_pretty(&meta)?)?;
    Ok(meta)
}

pub fn read_dump(path: &str) -> Result<Dump> {
    Ok(Dump::from_bytes(&std::fs::read(path)?)?)
}

/// Sanity helper used by tests: the naive scan, re-exported at the harness
/// level so workload assertions don't reach into the core crate.
pub fn reference_lce(t: &Text, i: usize, j: usize) -> Result<usize> {
    Ok(naive_lce(t, i, j)?)
}
