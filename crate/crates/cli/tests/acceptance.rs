//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints a PASS/FAIL line; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use orbital_ac_core::eligibility::{decide_eligibility, dominant_class, reduce, DominantClass, DominantKind};
use orbital_ac_core::liealg::{image_of_one_minus_ad, torus_matrix, weyl_bracket_check, RootFrame};
use orbital_ac_core::oracle::{evaluate_item, sweep_items, Oracle, OracleConfig, RankVerdict, SweepItem};
use orbital_ac_core::rootsys::{adjoint_orbit_dim, conjugacy_class_dim, positive_roots};
use orbital_ac_core::{ElementType, TorusElement};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn non_central(n: usize) -> Vec<ElementType> {
    ElementType::enumerate_non_central(n)
}

fn for_each_multiset(k: usize, len: usize, mut f: impl FnMut(&[usize]) -> Result<(), String>) -> Result<(), String> {
    let mut idx = vec![0usize; len];
    loop {
        f(&idx)?;
        let Some(p) = (0..len).rev().find(|&p| idx[p] + 1 < k) else { return Ok(()) };
        let next = idx[p] + 1;
        for q in idx.iter_mut().skip(p) {
            *q = next;
        }
    }
}

/// The worked pair rules, stated on the element types alone. `None` for
/// pairs the rules do not cover.
fn pair_rule(n: usize, x: &ElementType, y: &ElementType) -> Option<bool> {
    use DominantKind::*;
    let kind = |t: &ElementType| dominant_class(&t.canonical_element()).kind();
    let (kx, ky) = (kind(x), kind(y));
    let (x, y, kx, ky) =
        if (kx, ky) == (D, B) || (kx, ky) == (BD, B) || (kx, ky) == (D, BD) { (y, x, ky, kx) } else { (x, y, kx, ky) };
    match (kx, ky) {
        (B, B) => Some(2 * x.u + 2 * y.u <= 2 * n),
        (D, D) => Some(2 * x.v + 2 * y.v <= 2 * n + 2),
        (B, D) | (B, BD) | (BD, D) => Some(2 * x.u + 2 * y.v <= 2 * n),
        (S, S) | (S, BD) | (BD, S) | (BD, BD) => Some(true),
        _ => None,
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    for n in 2..=6 {
        let types = non_central(n);
        for (i, x) in types.iter().enumerate() {
            for y in &types[i..] {
                let Some(expected) = pair_rule(n, x, y) else { continue };
                let tuple = [x.canonical_element(), y.canonical_element()];
                let got = decide_eligibility(&tuple).map_err(|e| e.to_string())?.eligible;
                ensure(got == expected, || format!("rank {n}: ({x}, {y}) gave {got}, rule says {expected}"))?;
                checked += 1;
            }
        }
    }
    let b1 = ElementType::new(1, 0, vec![1]).canonical_element();
    let d2 = ElementType::new(0, 2, vec![]).canonical_element();
    let v = decide_eligibility(&[b1, d2]).map_err(|e| e.to_string())?;
    ensure(!v.eligible, || "(B1, D2) at rank 2 is eligible".into())?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{checked} pairs at ranks 2..6 match; (B1, D2) ineligible with {} > {}", v.lhs, v.rhs))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for n in 1..=6 {
        let x = ElementType::new(0, n, vec![]).canonical_element();
        ensure(conjugacy_class_dim(&x) == 2 * n && adjoint_orbit_dim(&x) == n * (n + 1), || {
            format!("rank {n}: dims {} and {}", conjugacy_class_dim(&x), adjoint_orbit_dim(&x))
        })?;
    }
    let mut checked = 0;
    for n in 2..=4 {
        for t in ElementType::enumerate(n) {
            let x = t.canonical_element();
            let rank = image_of_one_minus_ad(&torus_matrix(&x), 1e-8).dim();
            ensure(rank == conjugacy_class_dim(&x), || {
                format!("rank {n}, {t}: I - Ad rank {rank}, formula {}", conjugacy_class_dim(&x))
            })?;
            checked += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("-1 dimensions at n <= 6; {checked} types at n <= 4 with zero rank discrepancies"))
}

fn sweep_config() -> OracleConfig {
    OracleConfig { trials: 50, samples: 100, tolerance: 1e-8, eigen_tolerance: 1e-8, seed: 2024 }
}

/// The n=2 (L = 2..4) and n=3 (L = 2..3, exhaustive) sweeps.
fn sweeps() -> Vec<(Oracle, Vec<SweepItem>, Duration)> {
    [(2, 4, 60), (3, 3, 600)]
        .into_iter()
        .map(|(n, l_max, secs)| (Oracle::new(n).unwrap(), sweep_items(n, 2, l_max), Duration::from_secs(secs)))
        .collect()
}

fn criterion_3_and_5() -> (Check, Check) {
    let cfg = sweep_config();
    let mut agreed = 0;
    let mut disagreements = Vec::new();
    let mut probes = 0;
    let mut probe_failures = Vec::new();
    let mut slow = Vec::new();
    for (oracle, items, limit) in sweeps() {
        let start = Instant::now();
        for item in &items {
            let o = match evaluate_item(&oracle, item, &cfg) {
                Ok(o) => o,
                Err(e) => {
                    disagreements.push(format!("rank {} #{}: {e}", item.rank, item.index));
                    continue;
                }
            };
            if o.agrees() {
                agreed += 1;
            } else {
                disagreements.push(format!("rank {} {:?}", item.rank, item.types));
            }
            if let Some(p) = &o.probe {
                probes += 1;
                let ok = p.passed
                    && p.samples == 100
                    && p.observed_min_multiplicity >= p.expected.multiplicity_bound
                    && p.max_eigenvalue_distance <= 1e-8;
                if !ok {
                    probe_failures.push(format!("rank {} {:?}", item.rank, item.types));
                }
            }
        }
        if start.elapsed() > limit {
            slow.push(format!("rank {} took {:?}", oracle.rank(), start.elapsed()));
        }
    }
    let c3 = if disagreements.is_empty() && slow.is_empty() {
        Ok(format!("{} tuples, 100% agreement at 50 trials, tol 1e-8", agreed))
    } else {
        Err(format!("{} disagreements {:?}; {slow:?}", disagreements.len(), disagreements))
    };
    let c5 = if probe_failures.is_empty() && probes > 0 {
        Ok(format!("{probes} ineligible tuples, 100 samples each, zero violations"))
    } else {
        Err(format!("{} of {probes} probes failed: {probe_failures:?}", probe_failures.len()))
    };
    (c3, c5)
}

fn criterion_4() -> Check {
    let oracle = Oracle::new(2).map_err(|e| e.to_string())?;
    let d2 = ElementType::new(0, 2, vec![]).canonical_element();
    let mut best = 0;
    for seed in 0..5 {
        let triple = oracle.rank_test(&vec![d2.clone(); 3], 50, seed, 1e-8).map_err(|e| e.to_string())?;
        ensure(triple.verdict == RankVerdict::NeverFullRank && triple.best_rank <= 9 && triple.trials >= 50, || {
            format!("seed {seed}: triple gave {:?} with best rank {}", triple.verdict, triple.best_rank)
        })?;
        best = best.max(triple.best_rank);
        let quad = oracle.rank_test(&vec![d2.clone(); 4], 50, seed, 1e-8).map_err(|e| e.to_string())?;
        ensure(quad.verdict == RankVerdict::FullRankFound, || format!("seed {seed}: quadruple never full rank"))?;
    }
    Ok(format!("D2^3 best rank {best} <= 9 over 50 trials x 5 seeds; D2^4 full rank"))
}

fn s_values(c: DominantClass) -> (usize, usize) {
    match c.s_pair() {
        Some(p) => p,
        None => (c.s_value().unwrap(), c.s_value().unwrap()),
    }
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut checked = 0;
    // Rank 2 is the base case; reduction starts at rank 3.
    for n in 3..=5 {
        let els: Vec<TorusElement> = non_central(n).iter().map(|t| t.canonical_element()).collect();
        let reduced: Vec<TorusElement> = els.iter().map(|x| reduce(x).unwrap()).collect();
        for len in 2..=4 {
            for_each_multiset(els.len(), len, |idx| {
                let pick = |v: &[TorusElement]| idx.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
                if decide_eligibility(&pick(&els)).map_err(|e| e.to_string())?.eligible {
                    let r = decide_eligibility(&pick(&reduced)).map_err(|e| e.to_string())?;
                    ensure(r.eligible, || format!("rank {n}: {idx:?} reduces to an ineligible tuple"))?;
                    checked += 1;
                }
                Ok(())
            })?;
        }
    }
    let mut table = 0;
    for n in 3..=6 {
        for t in non_central(n) {
            let x = t.canonical_element();
            let (c, cr) = (dominant_class(&x), dominant_class(&reduce(&x).unwrap()));
            let (a, b) = s_values(cr);
            let ok = match c.kind() {
                DominantKind::B | DominantKind::D if cr.kind() == c.kind() => {
                    cr.s_value() == Some(c.s_value().unwrap() - 2)
                }
                DominantKind::B | DominantKind::D => a < c.s_value().unwrap() && b < c.s_value().unwrap(),
                DominantKind::S => a <= c.s_value().unwrap() && b <= c.s_value().unwrap(),
                DominantKind::BD => {
                    let (s1, s2) = c.s_pair().unwrap();
                    cr.kind() != DominantKind::BD && cr.s_value() == Some(s1.min(s2))
                }
            };
            ensure(ok, || format!("rank {n}: {t} ({}) reduces to {cr:?}", c.kind()))?;
            table += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{checked} eligible tuples stay eligible; monotonicity holds for {table} types"))
}

fn criterion_7() -> Check {
    let mut worst = 0.0f64;
    let mut smallest = f64::INFINITY;
    for n in 2..=4 {
        let frame = RootFrame::new(n).map_err(|e| e.to_string())?;
        let r = weyl_bracket_check(&frame);
        ensure(r.max_residual < 1e-8 && r.min_asserted > 1e-10 && r.failures.is_empty(), || {
            format!(
                "rank {n}: residual {:e}, min component {:e}, {} failures",
                r.max_residual,
                r.min_asserted,
                r.failures.len()
            )
        })?;
        worst = worst.max(r.max_residual);
        smallest = smallest.min(r.min_asserted);
        let roots = positive_roots(n).map_err(|e| e.to_string())?;
        let planes_span = frame.planes_span(&roots).map_err(|e| e.to_string())?;
        let planes = planes_span.dim();
        let torus = frame.torus_span().dim();
        let all: Vec<_> = planes_span.vectors().into_iter().chain(frame.torus_span().vectors()).collect();
        let total = orbital_ac_core::liealg::SubspaceBasis::from_vectors(frame.ambient_dim(), &all, 1e-8).dim();
        ensure(roots.len() == n * n && planes == 2 * n * n && torus == n && total == n * (2 * n + 1), || {
            format!("rank {n}: {} roots, planes {planes}, torus {torus}, total {total}", roots.len())
        })?;
    }
    Ok(format!("max residual {worst:e}, min asserted {smallest:e}; 2n^2 + n = n(2n+1) for n = 2..4"))
}

fn run_sweep(args: &[&str]) -> Result<Vec<u8>, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("sweep.jsonl");
    let status = Command::new(env!("CARGO_BIN_EXE_orbital-ac"))
        .args(["sweep", "--seed", "99", "--out"])
        .arg(&path)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || format!("sweep {args:?} exited {:?}", status.status.code()))?;
    std::fs::read(&path).map_err(|e| e.to_string())
}

fn criterion_8() -> Check {
    let mut bytes = 0;
    for args in [&["--rank", "2", "--max-len", "3"][..], &["--rank", "3", "--max-len", "2"][..]] {
        let a = run_sweep(args)?;
        let b = run_sweep(args)?;
        let mut par: Vec<&str> = args.to_vec();
        par.push("--parallel");
        let c = run_sweep(&par)?;
        ensure(!a.is_empty() && a == b && a == c, || format!("sweep {args:?} output differs between runs"))?;
        bytes += a.len();
    }
    Ok(format!("repeated and parallel sweeps byte-identical ({bytes} bytes)"))
}

fn main() -> ExitCode {
    let (c3, c5) = criterion_3_and_5();
    let results = [
        ("eligibility pair rules", criterion_1()),
        ("orbit dimension formulas", criterion_2()),
        ("decision agrees with rank test", c3),
        ("D2 powers at n=2", criterion_4()),
        ("forced eigenvalue probe", c5),
        ("reduction and monotonicity", criterion_6()),
        ("root-space brackets", criterion_7()),
        ("sweep determinism", criterion_8()),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
