use clap::{Args, Parser, Subcommand};
use lce_cli::{
    build_structure, csv_header, csv_row, load_text, query_structure, read_dump, run_bench,
    write_dump, BuildParams, CliError, Kind, Workload,
};
use lce_core::dump::Dump;
use lce_core::fp::pick_random_phi;
use lce_core::verify::{verify_phi, verify_tuple};
use lce_core::PhiParams;

#[derive(Parser)]
#[command(name = "lce", about = "Build and query LCE trade-off structures", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TextArgs {
    /// Generator spec: random:<n>:<sigma>:<seed>, periodic:<motif>:<n>,
    /// fibonacci:<n>, thue_morse:<n>, constant:<n>
    #[arg(long)]
    gen: Option<String>,
    /// Path to a raw byte file
    #[arg(long)]
    text: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a structure and write it as a dump file (plus a JSON sidecar)
    Build {
        #[command(flatten)]
        text: TextArgs,
        #[arg(long)]
        tau: usize,
        /// baseline | nearby | det | mc | lv | dc | combined | derand
        #[arg(long)]
        structure: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long)]
        out: String,
    },
    /// Answer one query from a dump, printing a JSON line with counters
    Query {
        /// Path to a dump written by `build`
        #[arg(long)]
        dump: String,
        i: usize,
        j: usize,
    },
    /// Run a JSON workload and print a CSV table
    Bench {
        /// Path to a workload JSON file
        #[arg(long)]
        workload: String,
        #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
        format: String,
    },
    /// Verify that a fingerprint function is collision-free on a text
    Verify {
        #[command(flatten)]
        text: TextArgs,
        #[arg(long)]
        tau: usize,
        /// Seed for a random function (ignored when --p/--x are given)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit modulus (requires --x)
        #[arg(long)]
        p: Option<u64>,
        /// Explicit base (requires --p)
        #[arg(long)]
        x: Option<u64>,
    },
    /// Deterministically choose a collision-free fingerprint tuple
    Derand {
        #[command(flatten)]
        text: TextArgs,
        #[arg(long)]
        tau: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Generate a text and write its raw bytes
    Generate {
        /// Generator spec (see `build --gen`)
        #[arg(long)]
        gen: String,
        #[arg(long)]
        out: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Build { text, tau, structure, seed, eps, out } => {
            let t = load_text(text.gen.as_deref(), text.text.as_deref())?;
            let s = build_structure(&t, structure, tau, seed, eps)?;
            let params =
                BuildParams { tau: Some(tau), seed: Some(seed), eps: Some(eps) };
            let meta = write_dump(&Dump { text: t, structure: s }, &out, params)?;
            println!("{}", serde_json::to_string(&meta).map_err(CliError::Workload)?);
        }
        Cmd::Query { dump, i, j } => {
            let d = read_dump(&dump)?;
            let out = query_structure(&d.structure, &d.text, i, j)?;
            println!("{}", serde_json::to_string(&out).map_err(CliError::Workload)?);
        }
        Cmd::Bench { workload, format } => {
            let w: Workload = serde_json::from_str(&std::fs::read_to_string(workload)?)?;
            let rows = run_bench(&w)?;
            if format == "json" {
                println!("{}", serde_json::to_string_pretty(&rows).map_err(CliError::Workload)?);
            } else {
                println!("{}", csv_header());
                for r in &rows {
                    println!("{}", csv_row(r));
                }
            }
        }
        Cmd::Verify { text, tau, seed, p, x } => {
            let t = load_text(text.gen.as_deref(), text.text.as_deref())?;
            let report = match (p, x) {
                (Some(p), Some(x)) => verify_tuple(&t, tau, &[PhiParams::new(p, x)?])?,
                (None, None) => verify_phi(&t, tau, pick_random_phi(t.len(), 1.0, seed)?)?,
                _ => return Err(CliError::Usage("--p and --x must be given together".into())),
            };
            println!("{}", serde_json::to_string_pretty(&report).map_err(CliError::Workload)?);
            if !report.is_collision_free() {
                return Err(CliError::Collision);
            }
        }
        Cmd::Derand { text, tau, eps } => {
            let t = load_text(text.gen.as_deref(), text.text.as_deref())?;
            let oracle = lce_core::BaselineIndex::build(&t);
            let (ms, tuple) = lce_core::derand::build_derand_mc(&t, tau, eps, &oracle)?;
            let out = serde_json::json!({
                "tau": tau,
                "eps": eps,
                "chunk": ms.geometry().blocks(),
                "tuple": tuple,
                "stored_words": ms.stored_words(),
            });
            println!("{out:#}");
        }
        Cmd::Generate { gen, out } => {
            let t: lce_core::Text =
                gen.parse::<lce_core::GeneratorKind>().map(|g| g.generate())??;
            let bytes: Vec<u8> = t
                .symbols()
                .iter()
                .map(|&s| {
                    u8::try_from(s).map_err(|_| {
                        CliError::Usage(format!("symbol {s} does not fit in a byte file"))
                    })
                })
                .collect::<Result<_, _>>()?;
            std::fs::write(&out, bytes)?;
            println!("wrote {} symbols to {out}", t.len());
        }
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap reserves 0 for --help/--version; everything else is usage
            if e.exit_code() == 0 {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
