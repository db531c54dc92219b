//! Acceptance suite: every numbered check prints one pass/fail line.
//!
//! The exhaustive query sweep (check 01) is shared: the cost-bound and
//! rotation checks piggyback on the same corpus and query set.

use lce_core::baseline::BaselineIndex;
use lce_core::dc::{self, combined_query};
use lce_core::derand::{build_derand_mc, count_b_id, count_b_phi, derandomize};
use lce_core::det::{build_det, det_query};
use lce_core::fp::pick_random_phi;
use lce_core::mc::{build_mc, mc_query, sample_positions, BitGeometry};
use lce_core::nearby::nearby_query;
use lce_core::text::{border_period, naive_lce, GeneratorKind, Text};
use lce_core::verify::{build_las_vegas, verify_phi, Outcome};
use lce_core::QueryStats;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn report(id: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("acceptance {id}: pass");
    } else {
        println!("acceptance {id}: FAIL ({} violations)", failures.len());
        for f in failures.iter().take(5) {
            println!("  {f}");
        }
        panic!("acceptance {id} failed with {} violations", failures.len());
    }
}

fn corpus(n: usize) -> Vec<(String, Text)> {
    let fams = [
        ("random-s2", GeneratorKind::Random { n, sigma: 2, seed: 0xA11CE }),
        ("random-s26", GeneratorKind::Random { n, sigma: 26, seed: 0xB0B }),
        ("fibonacci", GeneratorKind::Fibonacci { n }),
        ("thue-morse", GeneratorKind::ThueMorse { n }),
        ("constant", GeneratorKind::Constant { n }),
        ("periodic-ab", GeneratorKind::Periodic { motif: vec![97, 98], n }),
    ];
    fams.iter().map(|(name, g)| (name.to_string(), g.generate().unwrap())).collect()
}

#[derive(Default)]
struct Sweep {
    queries: u64,
    oracle_failures: Vec<String>,
    cost_failures: Vec<String>,
    rotation_failures: Vec<String>,
}

fn push(v: &mut Vec<String>, msg: String) {
    if v.len() < 100 {
        v.push(msg);
    }
}

fn check_rotations(out: &mut Sweep, name: &str, t: &Text, tau: usize) {
    let s = t.symbols();
    let n = s.len();
    if 4 * tau > n {
        return;
    }
    for k in 0..=(n - 4 * tau) / tau {
        let a = k * tau;
        let quad = &s[a..a + 4 * tau];
        let p4 = border_period(quad).unwrap();
        if p4.period > tau {
            continue;
        }
        let pk = border_period(&s[a..a + 2 * tau]).unwrap().period;
        let pk2 = border_period(&s[a + 2 * tau..a + 4 * tau]).unwrap().period;
        if p4.period != pk {
            push(
                &mut out.rotation_failures,
                format!("{name} tau={tau} block {k}: quad period {} != p_k {pk}", p4.period),
            );
            continue;
        }
        let u = &s[a..a + pk];
        let v = &s[a + 2 * tau..a + 2 * tau + pk2];
        let doubled = [u, u].concat();
        let is_rotation =
            pk == pk2 && (0..pk).any(|off| doubled[off..off + pk] == *v);
        if !is_rotation {
            push(
                &mut out.rotation_failures,
                format!("{name} tau={tau} block {k}: p_(k+2) is not a rotation of p_k"),
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn sweep_cell(out: &mut Sweep, name: &str, t: &Text, oracle: &BaselineIndex, tau: usize) {
    let n = t.len();
    let det = build_det(t, tau, oracle).unwrap();
    let dcs = dc::build_dc(t, tau, oracle).unwrap();
    let mc_c = build_mc(t, tau, pick_random_phi(n, 1.0, 0xC0FFEE).unwrap()).unwrap();
    let (lv, _) = build_las_vegas(t, tau, 0xFEED).unwrap();
    let (dr, _) = build_derand_mc(t, tau, 0.5, oracle).unwrap();

    let tau_eff = lv.geometry().tau();
    let round_cap = ((n as f64) / (tau as f64)).log2().ceil() as u64 + 1;

    for i in 0..n {
        for j in 0..n {
            let want = oracle.lce(i, j).unwrap();
            out.queries += 1;

            let mut st = QueryStats::new();
            match det_query(&det, t, i, j, &mut st) {
                Ok(got) if got == want => {}
                r => push(
                    &mut out.oracle_failures,
                    format!("det {name} n={n} tau={tau} ({i},{j}): {r:?} want {want}"),
                ),
            }
            if st.reduction_rounds > round_cap {
                push(
                    &mut out.cost_failures,
                    format!(
                        "det rounds {name} n={n} tau={tau} ({i},{j}): {} > {round_cap}",
                        st.reduction_rounds
                    ),
                );
            }
            let comp_cap = 4 * tau as u64 * st.reduction_rounds + 3 * tau as u64 + 2;
            if st.char_comparisons > comp_cap {
                push(
                    &mut out.cost_failures,
                    format!(
                        "det comparisons {name} n={n} tau={tau} ({i},{j}): {} > {comp_cap}",
                        st.char_comparisons
                    ),
                );
            }

            let mut st = QueryStats::new();
            match combined_query(&mc_c, &dcs, t, i, j, &mut st) {
                Ok(got) if got == want => {}
                r => push(
                    &mut out.oracle_failures,
                    format!("combined {name} n={n} tau={tau} ({i},{j}): {r:?} want {want}"),
                ),
            }

            let mut st = QueryStats::new();
            match mc_query(&lv, t, i, j, &mut st) {
                Ok(got) if got == want => {}
                r => push(
                    &mut out.oracle_failures,
                    format!("lv {name} n={n} tau={tau} ({i},{j}): {r:?} want {want}"),
                ),
            }
            let fp_cap =
                3.0 * (tau_eff as f64 + (want as f64 / tau_eff as f64 + 2.0).log2());
            if st.fp_evaluations as f64 > fp_cap {
                push(
                    &mut out.cost_failures,
                    format!(
                        "mc fp {name} n={n} tau={tau} ({i},{j}): {} > {fp_cap:.2}",
                        st.fp_evaluations
                    ),
                );
            }

            let mut st = QueryStats::new();
            match mc_query(&dr, t, i, j, &mut st) {
                Ok(got) if got == want => {}
                r => push(
                    &mut out.oracle_failures,
                    format!("derand {name} n={n} tau={tau} ({i},{j}): {r:?} want {want}"),
                ),
            }

            if i != j && i.abs_diff(j) <= tau {
                let mut st = QueryStats::new();
                match nearby_query(det.nearby(), t, i, j, &mut st) {
                    Ok(got) if got == want => {}
                    r => push(
                        &mut out.oracle_failures,
                        format!("nearby {name} n={n} tau={tau} ({i},{j}): {r:?} want {want}"),
                    ),
                }
                if st.char_comparisons > 3 * tau as u64 + 2 {
                    push(
                        &mut out.cost_failures,
                        format!(
                            "nearby comparisons {name} n={n} tau={tau} ({i},{j}): {} > {}",
                            st.char_comparisons,
                            3 * tau + 2
                        ),
                    );
                }
            }
        }
    }

    check_rotations(out, name, t, tau);
}

fn sweep() -> &'static Sweep {
    static SWEEP: OnceLock<Sweep> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let mut out = Sweep::default();
        for n in [64usize, 257, 512] {
            for (name, t) in corpus(n) {
                let oracle = BaselineIndex::build(&t);
                // ground the constant-time oracle against the naive scan
                if n == 64 {
                    for i in 0..n {
                        for j in 0..n {
                            assert_eq!(
                                oracle.lce(i, j).unwrap(),
                                naive_lce(&t, i, j).unwrap()
                            );
                        }
                    }
                }
                let mut taus = vec![1usize, 2, 3, 4, 8, 16, n];
                taus.dedup();
                for tau in taus {
                    sweep_cell(&mut out, &name, &t, &oracle, tau);
                }
            }
        }
        out
    })
}

#[test]
fn a01_oracle_equivalence_exhaustive() {
    let s = sweep();
    assert!(s.queries > 10_000_000, "sweep ran only {} queries", s.queries);
    report("01 oracle equivalence (exhaustive)", &s.oracle_failures);
}

#[test]
fn a02_sampling_bound_and_block_rows() {
    let mut failures = Vec::new();
    let bound = 2.0 + std::f64::consts::SQRT_2;
    for lg_n in 0..=20u32 {
        let n = 1usize << lg_n;
        for lg_t in 0..=lg_n {
            let tau = 1usize << lg_t;
            let geo = BitGeometry::new(n, tau).unwrap();
            let s = sample_positions(&geo).len();
            if s as f64 > bound * n as f64 / tau as f64 {
                push(&mut failures, format!("n={n} tau={tau}: |S|={s}"));
            }
        }
    }
    // sixteen-block geometry: per-block significance and sample-count rows
    let geo = BitGeometry::new(256, 16).unwrap();
    let mu: Vec<u32> = (0..16).map(|k| geo.significance(k * 16).unwrap()).collect();
    let b: Vec<usize> = (0..16).map(|k| geo.block_samples(k)).collect();
    if mu != [4, 0, 1, 0, 2, 0, 1, 0, 3, 0, 1, 0, 2, 0, 1, 0] {
        push(&mut failures, format!("significance row {mu:?}"));
    }
    if b != [4, 1, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1, 2, 1, 1, 1] {
        push(&mut failures, format!("sample-count row {b:?}"));
    }
    report("02 sampling bound + block rows", &failures);
}

#[test]
fn a03_significance_fixture() {
    let mut failures = Vec::new();
    let geo = BitGeometry::new(1 << 19, 1 << 8).unwrap();
    let q = 205035usize;
    if geo.significance(q).unwrap() != 5 {
        push(&mut failures, format!("s({q}) = {}", geo.significance(q).unwrap()));
    }
    if geo.head(q).unwrap() != q >> 8 {
        push(&mut failures, format!("head({q}) = {}", geo.head(q).unwrap()));
    }
    if geo.tail(q).unwrap() != (q & 0xff) {
        push(&mut failures, format!("tail({q}) = {}", geo.tail(q).unwrap()));
    }
    // head spans the leftmost 11 bits of a 19-bit position
    if geo.head(q).unwrap() >= 1 << 11 {
        push(&mut failures, "head wider than 11 bits".into());
    }
    report("03 significance fixture", &failures);
}

#[test]
fn a04_query_invariants_randomized() {
    // the loop invariants are debug assertions inside the query; they must
    // be compiled in for this check to mean anything
    assert!(cfg!(debug_assertions), "invariant checks are compiled out");
    let mut failures = Vec::new();
    let n = 1usize << 18;
    let texts = [
        GeneratorKind::Random { n, sigma: 2, seed: 77 }.generate().unwrap(),
        GeneratorKind::ThueMorse { n }.generate().unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut ran = 0u64;
    for t in &texts {
        let oracle = BaselineIndex::build(t);
        for tau in [16usize, 256] {
            let ms = build_mc(t, tau, pick_random_phi(n, 1.0, 5).unwrap()).unwrap();
            for _ in 0..260_000 {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let mut st = QueryStats::new();
                let got = mc_query(&ms, t, i, j, &mut st).unwrap();
                ran += 1;
                if got != oracle.lce(i, j).unwrap() {
                    push(&mut failures, format!("tau={tau} ({i},{j}): {got}"));
                }
            }
        }
    }
    assert!(ran >= 1_000_000);
    report("04 query loop invariants (randomized)", &failures);
}

#[test]
fn a05_query_cost_bounds() {
    report("05 instrumented query-cost bounds", &sweep().cost_failures);
}

#[test]
fn a06_difference_cover_membership() {
    let mut failures = Vec::new();
    for tau in [2usize, 3, 4, 5, 8] {
        let n = 4 * tau * tau;
        for i in 0..n - tau * tau {
            for j in 0..n - tau * tau {
                let d = dc::delta(i, j, tau);
                if !dc::is_sampled(i + d, tau) || !dc::is_sampled(j + d, tau) {
                    push(&mut failures, format!("tau={tau} ({i},{j}): delta={d}"));
                }
            }
        }
    }
    report("06 difference-cover membership", &failures);
}

#[test]
fn a07_las_vegas_behavior() {
    let mut failures = Vec::new();
    let t = GeneratorKind::Fibonacci { n: 1 << 14 }.generate().unwrap();
    let s = t.symbols();
    let mut free = 0u32;
    let recheck = |phi: lce_core::PhiParams, outcome: &Outcome| {
        if let Outcome::Collision { block_start, j, len } = *outcome {
            let fa = phi.phi_range(&t, block_start, block_start + len - 1).unwrap();
            let fb = phi.phi_range(&t, j, j + len - 1).unwrap();
            if fa != fb || s[block_start..block_start + len] == s[j..j + len] {
                return Some(format!("witness ({block_start},{j},{len}) does not recheck"));
            }
        }
        None
    };
    for seed in 0..100u64 {
        let phi = pick_random_phi(t.len(), 1.0, seed).unwrap();
        let r = verify_phi(&t, 64, phi).unwrap();
        if r.is_collision_free() {
            free += 1;
        } else if let Some(msg) = recheck(phi, &r.outcome) {
            push(&mut failures, msg);
        }
    }
    if free < 99 {
        push(&mut failures, format!("only {free}/100 seeds collision-free"));
    }
    // a tiny modulus forces the collision path; its witness must recheck too
    let bad = lce_core::PhiParams::new(5, 3).unwrap();
    let r = verify_phi(&t, 64, bad).unwrap();
    if r.is_collision_free() {
        push(&mut failures, "p=5 unexpectedly collision-free".into());
    } else if let Some(msg) = recheck(bad, &r.outcome) {
        push(&mut failures, msg);
    }
    report("07 randomized verification behavior", &failures);
}

#[test]
fn a08_derandomization_certificate() {
    let mut failures = Vec::new();
    for n in [512usize, 1024, 2048] {
        let t = GeneratorKind::Random { n, sigma: 2, seed: 31 }.generate().unwrap();
        let oracle = BaselineIndex::build(&t);
        for tau in [8usize, 16] {
            let geo = BitGeometry::new(n, tau).unwrap();
            let a_set: Vec<usize> = (0..geo.blocks()).map(|k| k * geo.tau()).collect();
            let lengths: Vec<usize> =
                (0..geo.lg_blocks()).map(|l| (1usize << l) * geo.tau()).collect();
            for eps in [0.5f64, 0.25] {
                let tuple =
                    derandomize(&t, &a_set, &lengths, eps, a_set.len(), &oracle).unwrap();
                let k_cap = (4.0 / eps).ceil() as usize;
                if tuple.xs.len() > k_cap {
                    push(
                        &mut failures,
                        format!("n={n} tau={tau} eps={eps}: {} bases", tuple.xs.len()),
                    );
                }
                let b_id = count_b_id(&t, &a_set, &lengths, &oracle).unwrap();
                let phis = tuple.phis().unwrap();
                // replay the per-round excess and its geometric decrease
                let mut prev =
                    count_b_phi(&t, &a_set, &lengths, &[], a_set.len()).unwrap();
                for l in 1..=phis.len() {
                    let cur =
                        count_b_phi(&t, &a_set, &lengths, &phis[..l], a_set.len()).unwrap();
                    if prev > b_id
                        && (cur - b_id) as f64 > (prev - b_id) as f64 / (n as f64).powf(eps)
                    {
                        push(
                            &mut failures,
                            format!("n={n} tau={tau} eps={eps} round {l}: excess {} after {}",
                                cur - b_id, prev - b_id),
                        );
                    }
                    prev = cur;
                }
                if prev != b_id {
                    push(
                        &mut failures,
                        format!("n={n} tau={tau} eps={eps}: B(phi)={prev} != B(id)={b_id}"),
                    );
                }
            }
        }
    }
    report("08 derandomization certificate", &failures);
}

fn periods_of(s: &[u64]) -> Vec<usize> {
    (1..=s.len()).filter(|&p| (0..s.len() - p).all(|i| s[i] == s[i + p])).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn a10_periodicity_lemmas() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..100_000u32 {
        let len = rng.gen_range(2..=30usize);
        let sigma = rng.gen_range(1..=3u64);
        let s: Vec<u64> = (0..len).map(|_| rng.gen_range(0..sigma)).collect();
        let ps = periods_of(&s);
        // two periods a, b with |s| >= a + b - gcd(a,b) force gcd(a,b)
        for (ai, &a) in ps.iter().enumerate() {
            for &b in &ps[ai + 1..] {
                let g = gcd(a, b);
                if len >= a + b - g && !ps.contains(&g) {
                    push(&mut failures, format!("case {case}: {a},{b} but not {g}"));
                }
            }
        }
        // every period <= |s|/2 is a multiple of the period
        let per = ps[0];
        for &q in &ps {
            if 2 * q <= len && q % per != 0 {
                push(&mut failures, format!("case {case}: period {q} not multiple of {per}"));
            }
        }
    }
    let s = sweep();
    failures.extend_from_slice(&s.rotation_failures);
    report("10 periodicity lemmas + block rotations", &failures);
}
