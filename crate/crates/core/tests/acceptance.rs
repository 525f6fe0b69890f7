//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use matrep::bounds::{
    conjecture_log2_count_exact, conjecture_log2_count_lgamma, d_of_n, log2_k, main_theorem_check,
    rbg_pattern_bound, theorem2_matroid_instance, CheckStatus,
};
use matrep::enumerate::{census_representability, enumerate_matroids, EnumOptions};
use matrep::gf::GfContext;
use matrep::matroid::{check_exchange, k_subsets, Matroid, SubsetMask};
use matrep::patterns::enumerate_patterns;
use matrep::poly::{minors_polynomials, IntPoly, PolySystem};
use matrep::represent::{
    find_representation, normalize_to_last_basis, verify_representation, RepStatus, SearchOptions, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u64) -> GfContext {
    GfContext::of_order(q).unwrap()
}

/// Labeled matroids of rank `r` on `[n]`: every equicardinal family, kept if
/// it passes the exchange check.
fn naive_labeled(n: usize, r: usize) -> u64 {
    let sets = k_subsets(n, r);
    let mut count = 0;
    for sel in 1u64..(1u64 << sets.len()) {
        let family: Vec<SubsetMask> = (0..sets.len())
            .filter(|i| sel >> i & 1 == 1)
            .map(|i| sets[i])
            .collect();
        if check_exchange(n, &family).unwrap() {
            count += 1;
        }
    }
    count
}

fn criterion_1() -> Outcome {
    let mut totals = Vec::new();
    for n in 2..=5 {
        let mut pruned = BigUint::from(0u32);
        let mut naive = 0u64;
        for r in 0..=n {
            let census = enumerate_matroids(n, r, EnumOptions::default()).map_err(|e| e.to_string())?;
            let oracle = naive_labeled(n, r);
            ensure(census.labeled_count == BigUint::from(oracle), || {
                format!("n={n} r={r}: enumerator {} vs oracle {oracle}", census.labeled_count)
            })?;
            pruned += census.labeled_count;
            naive += oracle;
        }
        totals.push((n, pruned, naive));
    }
    ensure(totals[0].2 == 5 && totals[1].2 == 16, || format!("n=2,3 totals {totals:?}"))?;
    Ok(totals
        .iter()
        .map(|(n, p, _)| format!("n={n}: {p}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    let mut min_margin = f64::INFINITY;
    for n in 12..=20u64 {
        for r in 2..=n / 2 {
            let check = theorem2_matroid_instance(n, r).map_err(|e| e.to_string())?;
            ensure(check.status == CheckStatus::Holds, || format!("(n,r)=({n},{r}): {:?}", check.status))?;
            let margin = check.margin.as_ref().ok_or("missing margin")?;
            ensure(margin.to_f64() > 10.0 * margin.radius, || format!("({n},{r}) margin within radius"))?;
            min_margin = min_margin.min(margin.to_f64());
            count += 1;
        }
    }
    Ok(format!("{count} instances, least margin {min_margin:.4} bits"))
}

fn criterion_3() -> Outcome {
    let mut min_margin = f64::INFINITY;
    for n in 12..=100 {
        let check = main_theorem_check(n).map_err(|e| e.to_string())?;
        ensure(check.status == CheckStatus::Holds, || format!("n={n}: {:?}", check.status))?;
        min_margin = min_margin.min(check.margin.to_f64());
    }
    Ok(format!("n = 12..=100, least margin {min_margin:.4} bits"))
}

fn random_system(rng: &mut ChaCha8Rng) -> PolySystem {
    let polys_n = rng.gen_range(1..=6);
    let degree = rng.gen_range(1..=3u32);
    let m = rng.gen_range(1..=3usize);
    let polys = (0..polys_n)
        .map(|_| {
            let terms = (0..rng.gen_range(1..=4)).map(|_| {
                let mut e = vec![0u32; m];
                let total = rng.gen_range(0..=degree);
                for _ in 0..total {
                    e[rng.gen_range(0..m)] += 1;
                }
                (BigInt::from(rng.gen_range(-3i64..=3)), e)
            });
            IntPoly::from_terms(m, terms.collect::<Vec<_>>()).unwrap()
        })
        .collect();
    PolySystem::new(m, polys).unwrap()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for _ in 0..100 {
        let sys = random_system(&mut rng);
        let bound = rbg_pattern_bound(
            &BigUint::from(sys.len()),
            u64::from(sys.max_degree()),
            sys.num_vars() as u64,
        );
        for q in [2, 3, 4, 5] {
            let set = enumerate_patterns(&sys, &field(q), u64::MAX).map_err(|e| e.to_string())?;
            ensure(BigUint::from(set.len()) <= bound, || {
                format!("{} patterns over GF({q}) exceed bound {bound} for {sys:?}", set.len())
            })?;
            ensure(set.verify(&sys).unwrap(), || "witness does not verify".into())?;
            checked += 1;
        }
    }
    let x = IntPoly::var(1, 1).unwrap();
    let sys = PolySystem::new(1, vec![x.clone(), x.add(&IntPoly::constant(1, 1)).unwrap()]).unwrap();
    let sets = |q| {
        let mut v = enumerate_patterns(&sys, &field(q), u64::MAX).unwrap().index_sets();
        v.sort();
        v
    };
    let (gf2, gf3) = (sets(2), sets(3));
    ensure(gf2 == vec![vec![1], vec![2]], || format!("(x, x+1) over GF(2): {gf2:?}"))?;
    ensure(gf3 == vec![vec![1], vec![1, 2], vec![2]], || format!("(x, x+1) over GF(3): {gf3:?}"))?;
    Ok(format!("{checked} system/field pairs within bound; (x, x+1) patterns exact"))
}

fn vamos() -> Matroid {
    let nonbases = [0b0000_1111u32, 0b0011_0011, 0b0011_1100, 0b1100_1100, 0b1111_0000];
    let bases: Vec<SubsetMask> = k_subsets(8, 4).into_iter().filter(|b| !nonbases.contains(&b.0)).collect();
    Matroid::new(8, bases).unwrap()
}

fn fano() -> Matroid {
    let lines = [0b0000111u32, 0b0011001, 0b0101010, 0b1001100, 0b0110100, 0b1010010, 0b1100001];
    let bases: Vec<SubsetMask> = k_subsets(7, 3).into_iter().filter(|b| !lines.contains(&b.0)).collect();
    Matroid::new(7, bases).unwrap()
}

/// Searches, then checks the witness and that its minors vanish exactly off
/// the basis family of the normalized matroid.
fn classify(m: &Matroid, q: u64, opts: SearchOptions) -> Result<RepStatus, String> {
    let (normalized, _) = normalize_to_last_basis(m);
    let ctx = field(q);
    let res = find_representation(&normalized, &ctx, opts).map_err(|e| e.to_string())?;
    if let Some(u) = &res.witness {
        ensure(verify_representation(&normalized, u).unwrap(), || format!("GF({q}) witness fails"))?;
        let sys = minors_polynomials(m.n(), m.rank()).unwrap();
        let point: Vec<u8> = u.entries().to_vec();
        for (b, poly) in k_subsets(m.n(), m.rank()).iter().zip(sys.polys()) {
            let nonzero = poly.eval_over(&ctx, &point).unwrap() != 0;
            ensure(nonzero == normalized.is_basis(*b), || format!("minor pattern differs at {b}"))?;
        }
    }
    Ok(res.status)
}

fn criterion_5() -> Outcome {
    let opts = SearchOptions::default();
    let u24 = Matroid::uniform(2, 4).unwrap();
    ensure(classify(&u24, 2, opts)? == RepStatus::NotRepresentable, || "U(2,4) over GF(2)".into())?;
    ensure(classify(&u24, 3, opts)? == RepStatus::Found, || "U(2,4) over GF(3)".into())?;
    let f7 = fano();
    ensure(classify(&f7, 2, opts)? == RepStatus::Found, || "Fano over GF(2)".into())?;
    ensure(classify(&f7, 3, opts)? == RepStatus::NotRepresentable, || "Fano over GF(3)".into())?;
    let v = vamos();
    let start = Instant::now();
    for q in [2, 3, 4, 5, 7, 8, 9] {
        ensure(classify(&v, q, opts)? == RepStatus::NotRepresentable, || format!("Vamos over GF({q})"))?;
    }
    Ok(format!("U(2,4), Fano, Vamos as expected (Vamos {:.1}s)", start.elapsed().as_secs_f64()))
}

fn criterion_6() -> Outcome {
    let fields: Vec<GfContext> = [2, 3, 4, 5, 7, 8].into_iter().map(field).collect();
    let mut summary = Vec::new();
    for n in 0..=7 {
        let censuses = (0..=n)
            .map(|r| enumerate_matroids(n, r, EnumOptions::default()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let report = census_representability(&censuses, &fields, SearchOptions::default()).map_err(|e| e.to_string())?;
        let failures: Vec<String> = report
            .items
            .iter()
            .filter(|v| v.verdict != Verdict::Representable)
            .map(|v| format!("{:?} -> {}", v.matroid, v.verdict.as_str()))
            .collect();
        ensure(failures.is_empty(), || format!("n={n}: {failures:?}"))?;
        ensure(report.unlabeled_fraction() == Some(1.0) && report.labeled_fraction() == Some(1.0), || {
            format!("n={n}: fractions {:?} {:?}", report.unlabeled_fraction(), report.labeled_fraction())
        })?;
        summary.push(format!("{}", report.unlabeled_total));
    }
    Ok(format!("representable fraction 1.0 for n = 0..=7 (classes: {})", summary.join("/")))
}

fn criterion_7() -> Outcome {
    for n in 2..=10_000u64 {
        let d = d_of_n(n).map_err(|e| e.to_string())?;
        let other = (n * n - n % 2) / 4 + 1 - n;
        ensure(d == other, || format!("d({n}): {d} vs {other}"))?;
    }
    for n in 1..=40u64 {
        for r in 0..=n {
            ensure(log2_k(n, r).unwrap().value == log2_k(n, n - r).unwrap().value, || {
                format!("log2_k({n},{r}) asymmetric")
            })?;
        }
    }
    for n in 0..=6 {
        for r in 0..=n {
            let here = enumerate_matroids(n, r, EnumOptions::default()).unwrap();
            let there = enumerate_matroids(n, n - r, EnumOptions::default()).unwrap();
            let mut duals: Vec<_> = here.items.iter().map(|m| m.dual().canonical_key().unwrap()).collect();
            duals.sort();
            let keys: Vec<_> = there.items.iter().map(|m| m.canonical_key().unwrap()).collect();
            ensure(duals == keys, || format!("dual census mismatch at n={n}, r={r}"))?;
        }
    }
    let mut worst = 0.0f64;
    for n in 10..=30 {
        let a = conjecture_log2_count_exact(n).unwrap();
        let b = conjecture_log2_count_lgamma(n).unwrap();
        worst = worst.max(a.sub(&b).to_f64().abs());
    }
    ensure(worst < 1e-6, || format!("conjecture paths differ by {worst}"))?;
    Ok(format!("all identities hold; conjecture paths agree to {worst:.1e}"))
}

fn run_cli(args: &[&str], dir: &std::path::Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_matrep"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    std::fs::write(d.join("sys.txt"), "x1*x2 - 1\nx1 + x2\nx1^2 + x3\n").unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--n", "6", "--r", "3"],
        vec!["enumerate", "--n", "5", "--r", "2", "--mode", "labeled"],
        vec!["check-rep", "--in", "c.census"],
        vec!["zero-patterns", "--system", "sys.txt", "--fields", "2,3,4,5"],
        vec!["bounds", "--n", "40", "--r", "17"],
        vec!["verify-theorem2", "--n-range", "12..14"],
        vec!["conjecture-sample", "--n", "7", "--r", "3", "--trials", "30", "--seed", "99"],
    ];
    run_cli(&["enumerate", "--n", "6", "--r", "3", "--out", "c.census"], d)?;
    for cmd in &commands {
        let mut outputs = Vec::new();
        for workers in ["1", "3"] {
            for _ in 0..2 {
                let mut args = cmd.clone();
                args.extend(["--workers", workers, "--report", "-"]);
                outputs.push(run_cli(&args, d)?);
            }
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} output varies", cmd.join(" ")))?;
    }
    Ok(format!("{} subcommand invocations byte-identical across runs and worker counts", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence of the enumerator", criterion_1),
        ("dimension-count hypothesis for 12 <= n <= 20", criterion_2),
        ("aggregate bound for 12 <= n <= 100", criterion_3),
        ("zero-pattern counts within C(Nd+m, m)", criterion_4),
        ("classic representability verdicts", criterion_5),
        ("census representability for n <= 7", criterion_6),
        ("consistency identities", criterion_7),
        ("CLI determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
