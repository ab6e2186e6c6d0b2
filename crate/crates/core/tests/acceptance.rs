//! End-to-end acceptance suite. Runs without the libtest harness so each
//! criterion prints exactly one PASS/FAIL line.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use carpet::convergence::{
    family_kz, measure_convergence, resistance_convergence, default_grid, FamilySpec, Generator, Monomial, TrendClass,
};
use carpet::diffusion::{geometric_times, heat_kernel_diag, resolvent_convergence, simulate_crossings, MeasureKind, Resolvent};
use carpet::geodesic::{build_skeleton, equicontinuity_diagnostic, geodesic_estimate_exact, SquareUnion};
use carpet::geometry::{boundary_ring, parse_rational, parse_spec, validate_usc, CellLattice, Symmetry};
use carpet::network::{
    build_cell_network, check_boundary_bound, effective_resistance, estimate_renorm, ConductanceScheme, Graph,
    ResistanceMetric, SolverOptions,
};
use carpet::trace::{check_restriction, BrickSamples};
use carpet::{CarpetError, Rational, UscSpec};
use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, ok: impl Into<String>, fail: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail.into())
    }
}

fn rat(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

fn ratio_point(units: [i64; 2], scale: i64) -> [Rational; 2] {
    units.map(|u| Rational::new(BigInt::from(u), BigInt::from(scale)))
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Outcome {
    check(elapsed <= limit, format!("{what} {elapsed:.2?}"), format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

/// Mutated k = 5 specs, each breaking one defining condition.
fn mutated() -> Vec<(&'static str, UscSpec)> {
    let ring = boundary_ring(5);
    let with = |extra: &[(&str, &str)]| {
        let mut offs = ring.clone();
        offs.extend(extra.iter().map(|(x, y)| [rat(x), rat(y)]));
        UscSpec::new(5, offs).unwrap()
    };
    let overlap = with(&[
        ("1/5", "3/10"),
        ("3/10", "1/5"),
        ("3/5", "3/10"),
        ("1/2", "1/5"),
        ("1/5", "1/2"),
        ("3/10", "3/5"),
        ("3/5", "1/2"),
        ("1/2", "3/5"),
    ]);
    let island = with(&[("2/5", "2/5")]);
    let lopsided = with(&[("1/5", "1/5")]);
    let middles = ["2/5"];
    let mut gapped: Vec<[Rational; 2]> = ring
        .iter()
        .filter(|p| {
            let on_mid = |v: &Rational| middles.iter().any(|m| *v == rat(m));
            let edge = |v: &Rational| *v == rat("0") || *v == rat("4/5");
            !((edge(&p[0]) && on_mid(&p[1])) || (edge(&p[1]) && on_mid(&p[0])))
        })
        .cloned()
        .collect();
    for x in ["1/5", "2/5", "3/5"] {
        for y in ["1/5", "2/5", "3/5"] {
            if (x, y) != ("2/5", "2/5") {
                gapped.push([rat(x), rat(y)]);
            }
        }
    }
    let gapped = UscSpec::new(5, gapped).unwrap();
    vec![("non_overlapping", overlap), ("connectivity", island), ("symmetry", lopsided), ("boundary_included", gapped)]
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut valid = vec![("standard carpet".to_string(), sc())];
    for z in ["0", "1/28", "1/14"] {
        valid.push((format!("K({z})"), family_kz(&rat(z)).map_err(|e| e.to_string())?));
    }
    for (name, spec) in &valid {
        let r = validate_usc(spec);
        if !r.is_valid() {
            return Err(format!("{name} failed {:?}", r.failed()));
        }
    }
    for (intended, spec) in mutated() {
        let failed = validate_usc(&spec).failed();
        if failed != [intended] {
            return Err(format!("mutation for {intended} failed {failed:?}"));
        }
    }
    let bad = "k = 3\noffsets = [[\"9/10\",\"0\"]]\n";
    if !matches!(parse_spec(bad), Err(CarpetError::OffsetOutOfRange { .. })) {
        return Err("out-of-range offset accepted".into());
    }
    within(start.elapsed(), Duration::from_secs(1), "4 valid specs, 5 mutations rejected as intended in")
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut cases = 0usize;
    let mut record = |n: usize, edges: &IntEdges, a: &[usize], b: &[usize]| -> Result<(), String> {
        let g = Graph::new(n, edges.iter().map(|&(x, y, c)| (x, y, c as f64))).map_err(|e| e.to_string())?;
        let exact = exact_resistance(n, edges, a, b);
        for opts in [SolverOptions::default(), SolverOptions::pcg()] {
            let r = effective_resistance(&g, a, b, opts).map_err(|e| e.to_string())?;
            worst = worst.max(relative_error(r, &exact));
        }
        cases += 1;
        Ok(())
    };
    let mut rng = rng(2);
    for n in 2..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: IntEdges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| (a, b, rng.random_range(1..=9)))
                .collect();
            if !is_connected(n, &edges) {
                continue;
            }
            for &(a, b) in &pairs {
                record(n, &edges, &[a], &[b])?;
            }
            if n >= 4 {
                record(n, &edges, &[0, 1], &[n - 1])?;
            }
        }
    }
    for i in 0..300 {
        let n = 6 + i % 3;
        let edges = random_connected(n, 0.3, &mut rng);
        record(n, &edges, &[0], &[n - 1])?;
        record(n, &edges, &[0, 2], &[n - 1, n - 2])?;
    }
    for _ in 0..20 {
        let n = rng.random_range(10..=50);
        let edges = random_connected(n, 4.0 / n as f64, &mut rng);
        let a = rng.random_range(0..n);
        let b = (a + 1 + rng.random_range(0..n - 1)) % n;
        record(n, &edges, &[a], &[b])?;
    }
    check(worst <= 1e-9, format!("{cases} networks, worst relative error {worst:.2e}"), format!("relative error {worst:.2e}"))?;
    within(start.elapsed(), Duration::from_secs(10), &format!("{cases} networks, worst relative error {worst:.2e}, in"))
}

fn criterion_3() -> Outcome {
    let scheme = ConductanceScheme::default();
    let start = Instant::now();
    let net = build_cell_network(&sc(), 5, scheme).map_err(|e| e.to_string())?;
    carpet::network::across_resistance(&net, SolverOptions::default()).map_err(|e| e.to_string())?;
    let solve_time = start.elapsed();
    let mut lines = Vec::new();
    for (name, spec, n_max) in [("SC", sc(), 5), ("K(1/28)", family_kz(&rat("1/28")).unwrap(), 3)] {
        let est = estimate_renorm(&spec, n_max, scheme, false).map_err(|e| e.to_string())?;
        let drift = est.drift().unwrap_or(0.0);
        let ratios: Vec<String> = est.ratios().iter().map(|r| format!("{r:.4}")).collect();
        if !est.ratios_within_bounds() || drift > 0.05 {
            return Err(format!("{name} ratios {ratios:?} bounds {:?} drift {drift:.4}", est.bounds));
        }
        lines.push(format!("{name} r̂ {} drift {drift:.1e}", ratios.join(",")));
    }
    within(solve_time, Duration::from_secs(60), &format!("{}; SC level 5 solve", lines.join("; ")))
}

fn criterion_4() -> Outcome {
    let net = build_cell_network(&sc(), 3, ConductanceScheme::default()).map_err(|e| e.to_string())?;
    let m = ResistanceMetric::new(&net, SolverOptions::default()).map_err(|e| e.to_string())?;
    let n = net.n_vertices();
    let d = |a: usize, b: usize| m.distance(a, b).unwrap();
    let mut rng = rng(4);
    let mut worst_tri: f64 = 0.0;
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| rng.random_range(0..n));
        if d(a, b) != d(b, a) {
            return Err(format!("asymmetric at ({a}, {b})"));
        }
        worst_tri = worst_tri.max(d(a, c) - d(a, b) - d(b, c));
    }
    let perms: Vec<Vec<usize>> = Symmetry::ALL.iter().map(|&g| net.lattice().symmetry_permutation(g).unwrap()).collect();
    let mut worst_d4: f64 = 0.0;
    for _ in 0..50 {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        for p in &perms {
            worst_d4 = worst_d4.max((d(a, b) - d(p[a], p[b])).abs());
        }
    }
    check(
        worst_tri <= 1e-8 && worst_d4 <= 1e-9,
        format!("symmetric; triangle excess {worst_tri:.1e}; D4 defect {worst_d4:.1e}"),
        format!("triangle excess {worst_tri:.2e}, D4 defect {worst_d4:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let net = build_cell_network(&sc(), 3, ConductanceScheme::default()).map_err(|e| e.to_string())?;
    let m = ResistanceMetric::new(&net, SolverOptions::default()).map_err(|e| e.to_string())?;
    let rep = check_boundary_bound(&net, &m, 50, 5).map_err(|e| e.to_string())?;
    check(
        rep.pass && rep.max_ratio <= 54.0 && rep.pairs.len() >= 50,
        format!("max boundary ratio {:.3} <= {}", rep.max_ratio, rep.bound),
        format!("max boundary ratio {:.3} against {}", rep.max_ratio, rep.bound),
    )
}

fn criterion_6() -> Outcome {
    let spec = sc();
    let sks: Vec<_> = (1..=4).map(|m| build_skeleton(&spec, m, 3).unwrap()).collect();
    let q1 = [rat("0"), rat("0")];
    let q2 = [rat("1"), rat("0")];
    for sk in &sks {
        let e = geodesic_estimate_exact(sk, &q1, &q2).map_err(|e| e.to_string())?;
        if e.upper != 1.0 {
            return Err(format!("d(q1, q2) = {} at level {}", e.upper, sk.level()));
        }
    }
    let mut rng = rng(6);
    let coarse = &sks[0];
    for _ in 0..50 {
        let [a, b] = [0; 2].map(|_| ratio_point(coarse.point_units(rng.random_range(0..coarse.len())), coarse.scale()));
        let mut prev = f64::INFINITY;
        for sk in &sks {
            let e = geodesic_estimate_exact(sk, &a, &b).map_err(|e| e.to_string())?;
            if e.lower > e.upper + 1e-12 || e.upper > prev + 1e-12 {
                return Err(format!("level {}: lower {} upper {} previous {prev}", sk.level(), e.lower, e.upper));
            }
            prev = e.upper;
        }
    }
    // Corners of level-2 cells: the square union against a finer skeleton.
    let lat = CellLattice::new(&spec, 2).unwrap();
    let union = SquareUnion::new(&lat, 1).map_err(|e| e.to_string())?;
    let fine = &sks[3];
    let mut worst: f64 = 0.0;
    let mut lowest = f64::INFINITY;
    for _ in 0..50 {
        let [a, b] = [0; 2].map(|_| ratio_point(lat.corner(rng.random_range(0..lat.len()), rng.random_range(1..=4)), lat.scale()));
        let tilde = union.distance(&a, &b).map_err(|e| e.to_string())?;
        let d = geodesic_estimate_exact(fine, &a, &b).map_err(|e| e.to_string())?.upper;
        if tilde > 0.0 {
            worst = worst.max(d / tilde);
            lowest = lowest.min(d / tilde);
        }
    }
    check(
        lowest >= 1.0 - 1e-12 && worst <= 2f64.sqrt() + 1e-12,
        format!("d(q1,q2) = 1 at m = 1..4; upper bounds nonincreasing; d/d̃ in [{lowest:.4}, {worst:.4}]"),
        format!("d/d̃ ranges over [{lowest:.4}, {worst:.4}], expected within [1, √2]"),
    )
}

/// Sum of kinks and a plane: piecewise linear on the unit square.
fn random_piecewise_linear(rng: &mut rand_chacha::ChaCha8Rng) -> impl Fn([f64; 2]) -> f64 {
    let plane = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let kinks: Vec<[f64; 4]> = (0..4)
        .map(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
        .collect();
    move |p: [f64; 2]| {
        plane[0] * p[0]
            + plane[1] * p[1]
            + kinks.iter().map(|k| k[0] * (k[1] * p[0] + k[2] * p[1] - k[3]).abs()).sum::<f64>()
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(7);
    let mut rows = 0;
    for i in 0..100 {
        let f = random_piecewise_linear(&mut rng);
        let rep = check_restriction(&BrickSamples::from_fn(3, 5, f));
        if !rep.pass {
            let bad = rep.rows.iter().find(|r| !r.pass).unwrap();
            return Err(format!("function {i}, n = {}: {} > {} + {}", bad.n, bad.lhs, bad.rhs, bad.slack));
        }
        rows += rep.rows.len();
    }
    within(start.elapsed(), Duration::from_secs(5), &format!("100 functions, {rows} level checks, in"))
}

fn criterion_8() -> Outcome {
    let tau = 1.0 / 49.0;
    let scheme = ConductanceScheme::family_default();
    let good = FamilySpec::parse(Generator::Kz, "1/28+1/(100n):n=1..8").map_err(|e| e.to_string())?;
    let pinched = FamilySpec::parse(Generator::Kz, "1/(10n):n=1..8").map_err(|e| e.to_string())?;
    let a = equicontinuity_diagnostic(&good, 2, tau).map_err(|e| e.to_string())?;
    let b = equicontinuity_diagnostic(&pinched, 2, tau).map_err(|e| e.to_string())?;
    if !a.equicontinuous {
        return Err(format!("K(1/28+1/(100n)) flagged: {} sequences bounded below", a.bounded_below));
    }
    if b.bounded_below == 0 {
        return Err("K(1/(10n)) shows no contact bounded below".into());
    }
    let grid = default_grid(32usize.pow(3), 8);
    let ra = resistance_convergence(&good, 3, &grid, scheme, 2).map_err(|e| e.to_string())?;
    let rb = resistance_convergence(&pinched, 3, &grid, scheme, 2).map_err(|e| e.to_string())?;
    check(
        ra.trend.class == TrendClass::Decreasing && rb.trend.ratio > 0.5,
        format!(
            "{} contacts → 0 vs {} bounded below; deviation last/first {:.3} vs {:.3}",
            a.contacts.len(),
            b.bounded_below,
            ra.trend.ratio,
            rb.trend.ratio
        ),
        format!("deviation trends {:?} (ratio {:.3}) and ratio {:.3}", ra.trend.class, ra.trend.ratio, rb.trend.ratio),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let spec = sc();
    let scheme = ConductanceScheme::default();
    let est = estimate_renorm(&spec, 5, scheme, false).map_err(|e| e.to_string())?;
    let rep = simulate_crossings(&spec, &[4, 5], 10_000, 9, scheme, Some(est.r_hat)).map_err(|e| e.to_string())?;
    let d_w_walk = rep.estimates[0].d_w;
    let rel = (d_w_walk - est.d_w).abs() / est.d_w;
    let net = build_cell_network(&spec, 5, scheme).map_err(|e| e.to_string())?;
    let n = net.n_vertices();
    let bases: Vec<usize> = (0..4).map(|i| i * n / 4 + n / 8).collect();
    let heat = heat_kernel_diag(net.graph(), MeasureKind::Weighted, &bases, &geometric_times(1, 1000, 8), [10, 1000])
        .map_err(|e| e.to_string())?;
    let slope = heat.slope.ok_or("no heat-kernel fit")?;
    let target = -est.d_h / est.d_w;
    check(
        rel <= 0.15 && (slope - target).abs() <= 0.15,
        format!("d_W walk {d_w_walk:.3} vs θ̂+d_H {:.3} (rel {rel:.3}); heat slope {slope:.3} vs {target:.3}", est.d_w),
        format!("d_W walk {d_w_walk:.3} vs {:.3} (rel {rel:.3}); heat slope {slope:.3} vs {target:.3}", est.d_w),
    )?;
    within(start.elapsed(), Duration::from_secs(300), &format!("d_W walk {d_w_walk:.3} vs θ̂+d_H {:.3}; heat slope {slope:.3} vs {target:.3};", est.d_w))
}

fn criterion_10() -> Outcome {
    let net = build_cell_network(&sc(), 3, ConductanceScheme::default()).map_err(|e| e.to_string())?;
    let n = net.n_vertices();
    let r = Resolvent::for_network(&net, MeasureKind::Weighted, 1.0).map_err(|e| e.to_string())?;
    let mut rng = rng(10);
    let (mut sym, mut mass): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        let (ux, uy) = (r.kernel(x).unwrap(), r.kernel(y).unwrap());
        sym = sym.max((ux.kernel[y] - uy.kernel[x]).abs());
        mass = mass.max((r.mass(&ux) - 1.0).abs());
    }
    let family = FamilySpec::parse(Generator::Kz, "1/28+1/(100n):n=1..5").map_err(|e| e.to_string())?;
    let conv = resolvent_convergence(&family, 3, 1.0, &default_grid(32usize.pow(3), 4), ConductanceScheme::family_default())
        .map_err(|e| e.to_string())?;
    let devs: Vec<String> = conv.rows.iter().map(|r| format!("{:.2e}", r.deviation)).collect();
    check(
        sym <= 1e-9 && mass <= 1e-9 && conv.trend.monotone && conv.trend.ratio < 1.0,
        format!("symmetry {sym:.1e}; αG1 − 1 {mass:.1e}; deviations {}", devs.join(",")),
        format!("symmetry {sym:.1e}; αG1 − 1 {mass:.1e}; deviations {}", devs.join(",")),
    )
}

fn criterion_11() -> Outcome {
    let family = FamilySpec::parse(Generator::Kz, "1/28+1/(100n):n=1..8").map_err(|e| e.to_string())?;
    let fs = [Monomial { x1: 0, x2: 0 }, Monomial { x1: 1, x2: 0 }, Monomial { x1: 1, x2: 1 }, Monomial { x1: 2, x2: 1 }];
    let rep = measure_convergence(&family, 3, &fs).map_err(|e| e.to_string())?;
    if rep.column(0).iter().any(|&d| d != 0.0) {
        return Err(format!("f ≡ 1 discrepancies {:?}", rep.column(0)));
    }
    for (i, name) in rep.functions.iter().enumerate() {
        if !rep.decreasing_up_to_oscillation(i) {
            return Err(format!("{name}: {:?} with oscillation {}", rep.column(i), rep.oscillation[i]));
        }
    }
    let last: Vec<String> = (1..fs.len()).map(|i| format!("{:.1e}", rep.column(i).last().unwrap())).collect();
    Ok(format!("f ≡ 1 exactly 0; {} functions decreasing, final discrepancies {}", fs.len(), last.join(",")))
}

fn artifacts() -> Vec<String> {
    let spec = sc();
    let scheme = ConductanceScheme::default();
    let family = FamilySpec::parse(Generator::Kz, "1/28+1/(100n):n=1..4").unwrap();
    let json = |v: &dyn erased::Json| v.to_json();
    vec![
        json(&estimate_renorm(&spec, 3, scheme, true).unwrap()),
        json(&simulate_crossings(&spec, &[2, 3], 500, 12, scheme, None).unwrap()),
        json(&measure_convergence(&family, 2, &carpet::convergence::builtin_monomials()).unwrap()),
        json(&equicontinuity_diagnostic(&family, 1, 1.0 / 49.0).unwrap()),
        json(&resistance_convergence(&family, 2, &default_grid(1024, 6), ConductanceScheme::family_default(), 1).unwrap()),
        json(&resolvent_convergence(&family, 2, 1.0, &[0, 100], ConductanceScheme::family_default()).unwrap()),
    ]
}

mod erased {
    pub trait Json {
        fn to_json(&self) -> String;
    }
    impl<T: serde::Serialize> Json for T {
        fn to_json(&self) -> String {
            serde_json::to_string_pretty(self).unwrap()
        }
    }
}

fn criterion_12() -> Outcome {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(artifacts)
    };
    let base = run(1);
    for threads in [1, 4] {
        if run(threads) != base {
            return Err(format!("artifacts differ with {threads} workers"));
        }
    }
    Ok(format!("{} JSON artifacts identical across 3 runs at 1 and 4 workers", base.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("validation suite", criterion_1),
        ("resistance oracle", criterion_2),
        ("renormalization bounds", criterion_3),
        ("metric properties", criterion_4),
        ("boundary resistance bound", criterion_5),
        ("geodesics", criterion_6),
        ("restriction inequality", criterion_7),
        ("phase transition", criterion_8),
        ("exponent self-consistency", criterion_9),
        ("resolvent", criterion_10),
        ("measure convergence", criterion_11),
        ("reproducibility", criterion_12),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
