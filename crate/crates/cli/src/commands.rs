use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use carpet::convergence::{
    builtin_monomials, default_grid, family_kz, gamma_liminf_check, harmonic_x1, measure_convergence, resistance_convergence,
    FamilySpec, Generator,
};
use carpet::diffusion::{
    expected_crossing_steps, geometric_times, heat_kernel_diag, resolvent_convergence, simulate_crossings, ExponentEstimates,
    MeasureKind, Resolvent,
};
use carpet::geodesic::{
    build_skeleton, comparison_constant, continuity_modulus, equicontinuity_diagnostic, geodesic_estimate, geodesic_estimate_exact,
};
use carpet::geometry::{boundary_ring, parse_rational, parse_spec, rational_to_f64, validate_usc, CellLattice, Side, Word};
use carpet::network::{
    across_resistance, build_cell_network, check_boundary_bound, estimate_renorm, fit_theta, ConductanceMode, ConductanceScheme,
    Endpoint, ResistanceMetric, SolverOptions,
};
use carpet::trace::{besov_2inf_seminorm, critical_sigma_scan, restriction_ratio, sigma_of};
use carpet::{Rational, UscSpec};

use crate::args::*;
use crate::error::{usage, CliError, CliResult};
use crate::output::{num, Artifact, Table};
use crate::render;

pub fn run(cmd: &Command) -> CliResult<Artifact> {
    match cmd {
        Command::Validate(a) => validate(a),
        Command::Render(a) => render_cmd(a),
        Command::Network(a) => network(a),
        Command::Renorm(a) => renorm(a),
        Command::Metric(a) => metric(a),
        Command::Geodesic(a) => geodesic(a),
        Command::Equicont(a) => equicont(a),
        Command::Besov(a) => besov(a),
        Command::FamilySweep(a) => family_sweep(a),
        Command::Walk(a) => walk(a),
        Command::Resolvent(a) => resolvent(a),
        Command::Report(a) => report(a),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// `sc`, `kz:<z>` or a TOML file.
pub fn load_spec(text: &str) -> CliResult<UscSpec> {
    if text == "sc" {
        let mut spec = UscSpec::new(3, boundary_ring(3))?;
        spec.canonicalize();
        return Ok(spec);
    }
    if let Some(z) = text.strip_prefix("kz:") {
        return Ok(family_kz(&parse_rational(z).map_err(usage)?)?);
    }
    Ok(parse_spec(&read(Path::new(text))?)?)
}

fn load_family(f: &FamilyArgs) -> CliResult<FamilySpec> {
    let generator = match f.family.as_str() {
        "kz" => Generator::Kz,
        other => {
            let (a, b) = other
                .strip_prefix("interp:")
                .and_then(|r| r.split_once(':'))
                .ok_or_else(|| usage(format!("unknown family `{other}`; use `kz` or `interp:<from.toml>:<to.toml>`")))?;
            let (a, b) = (load_spec(a)?, load_spec(b)?);
            if a.k() != b.k() || a.n_maps() != b.n_maps() {
                return Err(usage("interpolated specs need the same k and N"));
            }
            Generator::Interpolation { k: a.k(), from: a.offsets().to_vec(), to: b.offsets().to_vec() }
        }
    };
    FamilySpec::parse(generator, &f.params).map_err(usage)
}

fn scheme(s: &SchemeArgs, family: bool) -> ConductanceScheme {
    let mut out = if family { ConductanceScheme::family_default() } else { ConductanceScheme::default() };
    out.mode = match s.scheme {
        SchemeArg::Overlap => ConductanceMode::OverlapWeighted,
        SchemeArg::Uniform => ConductanceMode::Uniform,
    };
    if let Some(p) = s.point_contact {
        out.point_contact = p;
    }
    out
}

fn config(args: &impl Serialize, spec: Option<&UscSpec>) -> Value {
    json!({ "args": args, "spec": spec.map(UscSpec::to_config) })
}

fn parse_number(text: &str) -> CliResult<f64> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    parse_rational(t).map(|r| rational_to_f64(&r)).map_err(usage)
}

fn parse_endpoint(text: &str, n_maps: usize) -> CliResult<Endpoint> {
    let t = text.trim();
    if let Some(p) = t.strip_prefix("p:") {
        let (x, y) = p.split_once(',').ok_or_else(|| usage(format!("bad point `{t}`")))?;
        return Ok(Endpoint::Point([parse_number(x)?, parse_number(y)?]));
    }
    Ok(Endpoint::Word(Word::parse(t, n_maps).map_err(usage)?))
}

fn parse_levels(text: &str) -> CliResult<Vec<u32>> {
    let bad = || usage(format!("bad level range `{text}`"));
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u32, u32) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn validate(a: &SpecArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec)?;
    let report = validate_usc(&spec);
    let result = json!({ "k": spec.k(), "n_maps": spec.n_maps(), "hausdorff_dim": spec.hausdorff_dim(), "report": report });
    let mut art = Artifact::new("validate", config(a, Some(&spec)), &result)?;
    for (name, c) in [
        ("non-overlapping", &report.non_overlapping),
        ("connected", &report.connectivity),
        ("symmetric", &report.symmetry),
        ("boundary included", &report.boundary_included),
        ("cardinality", &report.cardinality),
    ] {
        art.line(format!("{} {name}: {}", if c.pass { "ok  " } else { "FAIL" }, c.detail));
    }
    art.line(format!("k = {}, N = {}, d_H = {:.6}", spec.k(), spec.n_maps(), spec.hausdorff_dim()));
    let mut table = Table::new(&["condition", "pass", "detail"]);
    for (name, c) in [
        ("non_overlapping", &report.non_overlapping),
        ("connectivity", &report.connectivity),
        ("symmetry", &report.symmetry),
        ("boundary_included", &report.boundary_included),
        ("cardinality", &report.cardinality),
    ] {
        table.push(vec![name.into(), c.pass.to_string(), format!("\"{}\"", c.detail.replace('"', "'"))]);
    }
    art.table = Some(table);
    art.failed = !report.is_valid();
    Ok(art)
}

fn render_cmd(a: &RenderArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let lat = CellLattice::new(&spec, a.level)?;
    let result = json!({ "level": a.level, "cells": lat.len(), "scale": lat.scale() });
    let mut art = Artifact::new("render", config(a, Some(&spec)), &result)?;
    art.svg = Some(render::svg(&lat, a.size));
    let scale = lat.scale() as f64;
    let mut table = Table::new(&["cell", "x", "y", "side"]);
    for (i, o) in lat.origins().iter().enumerate() {
        table.push(vec![lat.word(i).to_string(), num(o[0] as f64 / scale), num(o[1] as f64 / scale), num(lat.side() as f64 / scale)]);
    }
    art.table = Some(table);
    art.line(format!("level {} with {} cells", a.level, lat.len()));
    Ok(art)
}

fn network(a: &NetworkArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sch = scheme(&a.scheme, false);
    let net = build_cell_network(&spec, a.level, sch)?;
    let g = net.graph();
    let total: f64 = g.edges().iter().map(|e| e.2).sum();
    let across = across_resistance(&net, SolverOptions::default())?;
    let result = json!({
        "level": a.level,
        "scheme": sch,
        "vertices": g.n_vertices(),
        "edges": g.edges().len(),
        "total_conductance": total,
        "across_resistance": across,
    });
    let mut art = Artifact::new("network", config(a, Some(&spec)), &result)?;
    art.line(format!("level {}: {} cells, {} contacts, R(L2, L4) = {across:.6}", a.level, g.n_vertices(), g.edges().len()));
    let lat = net.lattice();
    let mut table = Table::new(&["a", "b", "conductance"]);
    for &(x, y, c) in g.edges() {
        table.push(vec![lat.word(x).to_string(), lat.word(y).to_string(), num(c)]);
    }
    art.table = Some(table);
    Ok(art)
}

fn renorm(a: &RenormArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let est = estimate_renorm(&spec, a.levels, scheme(&a.scheme, false), a.aitken)?;
    let mut art = Artifact::new("renorm", config(a, Some(&spec)), &est)?;
    let mut table = Table::new(&["n", "R", "ratio"]);
    for l in &est.levels {
        art.line(format!("n = {}  R = {:.6}  ratio = {}", l.n, l.resistance, l.ratio.map_or("-".into(), |r| format!("{r:.6}"))));
        table.push(vec![l.n.to_string(), num(l.resistance), l.ratio.map_or(String::new(), num)]);
    }
    art.line(format!(
        "r̂ = {:.6} in [{:.4}, {:.4}]: {}; θ̂ = {:.6}, d_H = {:.6}, d_W = {:.6}",
        est.r_hat,
        est.bounds[0],
        est.bounds[1],
        est.ratios_within_bounds(),
        est.theta,
        est.d_h,
        est.d_w
    ));
    art.table = Some(table);
    Ok(art)
}

#[derive(Serialize)]
struct PairRow {
    x: String,
    y: String,
    resistance: f64,
}

fn metric(a: &MetricArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sch = scheme(&a.scheme, false);
    let net = build_cell_network(&spec, a.level, sch)?;
    let lat = net.lattice();
    let m = ResistanceMetric::new(&net, SolverOptions::default())?;
    let mut cells: Vec<(usize, usize)> = Vec::new();
    if let Some(text) = &a.pairs {
        for pair in text.split(';').filter(|p| !p.trim().is_empty()) {
            let (x, y) = pair.split_once('-').ok_or_else(|| usage(format!("bad pair `{pair}`; expected a-b")))?;
            cells.push((parse_endpoint(x, spec.n_maps())?.resolve(lat)?, parse_endpoint(y, spec.n_maps())?.resolve(lat)?));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for _ in 0..a.samples {
        cells.push((rng.random_range(0..lat.len()), rng.random_range(0..lat.len())));
    }
    let rows: Vec<PairRow> = cells
        .iter()
        .map(|&(x, y)| Ok(PairRow { x: lat.word(x).to_string(), y: lat.word(y).to_string(), resistance: m.distance(x, y)? }))
        .collect::<CliResult<_>>()?;
    let boundary = check_boundary_bound(&net, &m, a.boundary_samples, a.seed)?;
    let fit = if a.fit_samples > 0 && a.level >= 2 {
        let est = estimate_renorm(&spec, a.level, sch, false)?;
        let sk = build_skeleton(&spec, a.level, 1)?;
        Some(fit_theta(&net, &m, &sk, est.theta, a.fit_samples, a.min_separation, a.seed)?)
    } else {
        None
    };
    let result = json!({ "level": a.level, "normalization": m.normalization(), "pairs": rows, "boundary": boundary, "fit": fit });
    let mut art = Artifact::new("metric", config(a, Some(&spec)), &result)?;
    for r in &rows {
        art.line(format!("R̂({}, {}) = {:.6}", r.x, r.y, r.resistance));
    }
    art.line(format!("boundary ratio max {:.4} against 2k³ = {}: {}", boundary.max_ratio, boundary.bound, boundary.pass));
    if let Some(f) = &fit {
        art.line(format!("slope {:.4} against θ̂ = {:.4}; R̂/d^θ̂ in [{:.4}, {:.4}]", f.slope, f.theta_hat, f.bracket[0], f.bracket[1]));
    }
    let mut table = Table::new(&["x", "y", "resistance"]);
    for r in &rows {
        table.push(vec![r.x.clone(), r.y.clone(), num(r.resistance)]);
    }
    art.table = Some(table);
    Ok(art)
}

fn parse_point(x: &str, y: &str) -> CliResult<(Option<[Rational; 2]>, [f64; 2])> {
    let exact = match (parse_rational(x.trim()), parse_rational(y.trim())) {
        (Ok(a), Ok(b)) => Some([a, b]),
        _ => None,
    };
    Ok((exact, [parse_number(x)?, parse_number(y)?]))
}

fn geodesic(a: &GeodesicArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sk = build_skeleton(&spec, a.level, a.subdivision.unwrap_or(spec.k()))?;
    let mut pairs: Vec<[String; 4]> = Vec::new();
    match &a.pairs {
        Some(path) => {
            for line in read(path)?.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
                let f: Vec<&str> = line.split(',').collect();
                if f[0].trim() == "x1" {
                    continue;
                }
                if f.len() != 4 {
                    return Err(usage(format!("expected x1,y1,x2,y2 in `{line}`")));
                }
                pairs.push([f[0], f[1], f[2], f[3]].map(|s| s.trim().to_string()));
            }
        }
        None => {
            for q in [["1", "0"], ["1", "1"], ["0", "1"]] {
                pairs.push(["0".into(), "0".into(), q[0].into(), q[1].into()]);
            }
        }
    }
    let mut rows = Vec::new();
    let mut table = Table::new(&["x1", "y1", "x2", "y2", "lower", "upper", "snap_error"]);
    for p in &pairs {
        let (ex, fx) = parse_point(&p[0], &p[1])?;
        let (ey, fy) = parse_point(&p[2], &p[3])?;
        let est = match (ex, ey) {
            (Some(x), Some(y)) if sk.vertex_at(&x).is_some() && sk.vertex_at(&y).is_some() => geodesic_estimate_exact(&sk, &x, &y)?,
            _ => geodesic_estimate(&sk, fx, fy)?,
        };
        table.push(vec![p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone(), num(est.lower), num(est.upper), num(est.snap_error)]);
        rows.push(json!({ "x": [p[0], p[1]], "y": [p[2], p[3]], "estimate": est }));
    }
    let constant = comparison_constant(&spec, a.level.min(2))?;
    let modulus = match &a.modulus {
        Some(text) => {
            let etas: Vec<f64> = text.split(',').map(parse_number).collect::<CliResult<_>>()?;
            Some(continuity_modulus(&sk, &etas, 16))
        }
        None => None,
    };
    let result = json!({
        "level": a.level,
        "spacing": sk.spacing(),
        "vertices": sk.len(),
        "edges": sk.n_edges(),
        "pairs": rows,
        "comparison": constant,
        "modulus": modulus,
    });
    let mut art = Artifact::new("geodesic", config(a, Some(&spec)), &result)?;
    art.line(format!("skeleton level {}: {} vertices, spacing {:.6}", a.level, sk.len(), sk.spacing()));
    for r in &table.rows {
        art.line(format!("({}, {}) to ({}, {}): {} <= d_G <= {}", r[0], r[1], r[2], r[3], r[4], r[5]));
    }
    art.line(format!("worst-case comparison d <= d_G <= C·d with C = {:.3}", constant.c));
    art.table = Some(table);
    Ok(art)
}

fn equicont(a: &EquicontArgs) -> CliResult<Artifact> {
    let family = load_family(&a.family)?;
    let tau = parse_number(&a.tau)?;
    let rep = equicontinuity_diagnostic(&family, a.level, tau)?;
    let mut art = Artifact::new("equicont", config(a, None), &json!({ "family": family, "report": rep }))?;
    art.line(format!(
        "{} members, {} skipped; {} contact sequences, {} bounded below τ = {tau:.5}",
        rep.members.len(),
        rep.skipped.len(),
        rep.contacts.len(),
        rep.bounded_below
    ));
    art.line(if rep.equicontinuous { "equicontinuous: every contact sequence tends to 0" } else { "NOT equicontinuous" });
    let mut table = Table::new(&["cell_a", "cell_b", "kind", "x", "y", "trend", "first", "last"]);
    for c in &rep.contacts {
        let first = c.values.first().copied().unwrap_or(f64::NAN);
        let last = c.values.last().copied().unwrap_or(f64::NAN);
        table.push(vec![
            c.cells[0].clone(),
            c.cells[1].clone(),
            format!("{:?}", c.kind).to_lowercase(),
            c.point[0].clone(),
            c.point[1].clone(),
            format!("{:?}", c.trend),
            num(first),
            num(last),
        ]);
    }
    art.table = Some(table);
    Ok(art)
}

fn cell_values(path: &Path, lat: &CellLattice) -> CliResult<Vec<f64>> {
    let mut sums = vec![(0.0, 0u32); lat.len()];
    for line in read(path)?.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 3 {
            return Err(usage(format!("expected x,y,value in `{line}`")));
        }
        let Ok(v) = f[2].parse::<f64>() else {
            continue;
        };
        let p = [parse_number(f[0])?, parse_number(f[1])?];
        let c = lat.locate(p).ok_or_else(|| usage(format!("point {p:?} is not in any level-{} cell", lat.level())))?;
        sums[c].0 += v;
        sums[c].1 += 1;
    }
    sums.iter()
        .enumerate()
        .map(|(i, &(s, n))| {
            if n == 0 {
                Err(usage(format!("no samples in cell {}", lat.word(i))))
            } else {
                Ok(s / n as f64)
            }
        })
        .collect()
}

fn besov(a: &BesovArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sch = scheme(&a.scheme, false);
    if a.level < 2 {
        return Err(usage("besov needs --level of at least 2"));
    }
    let est = estimate_renorm(&spec, a.level.min(5), sch, false)?;
    let trace_sigma = sigma_of(est.r_hat, spec.k());
    let sigmas: Vec<f64> = if a.sigma == "auto" {
        [0.5, 0.75, 0.9, 1.0, 1.1, 1.25, 1.5].iter().map(|f| f * est.d_w / 2.0).collect()
    } else {
        a.sigma.split(',').map(parse_number).collect::<CliResult<_>>()?
    };
    let mut table = Table::new(&["sigma", "level", "value"]);
    let (values, scan) = match &a.input {
        Some(path) => {
            let lat = CellLattice::new(&spec, a.level)?;
            let f = cell_values(path, &lat)?;
            let vals: Vec<f64> = sigmas.iter().map(|&s| besov_2inf_seminorm(&f, &lat, s, est.d_h)).collect::<Result<_, _>>()?;
            for (s, v) in sigmas.iter().zip(&vals) {
                table.push(vec![num(*s), a.level.to_string(), num(*v)]);
            }
            (Some(vals), None)
        }
        None => {
            let levels: Vec<u32> = (2..=a.level).collect();
            let scan = critical_sigma_scan(&spec, &levels, &sigmas, sch, 0.25)?;
            for row in &scan.rows {
                for (n, v) in levels.iter().zip(&row.values) {
                    table.push(vec![num(row.sigma), n.to_string(), num(*v)]);
                }
            }
            (None, Some(scan))
        }
    };
    let restriction = if a.restriction_samples > 0 {
        let levels: Vec<u32> = (a.level.saturating_sub(1).max(1)..=a.level).collect();
        Some(restriction_ratio(&spec, &levels, a.restriction_samples, a.seed, est.r_hat, sch)?)
    } else {
        None
    };
    let result = json!({
        "r_hat": est.r_hat,
        "trace_sigma": trace_sigma,
        "half_walk_dimension": est.d_w / 2.0,
        "sigmas": sigmas,
        "values": values,
        "scan": scan,
        "restriction": restriction,
    });
    let mut art = Artifact::new("besov", config(a, Some(&spec)), &result)?;
    art.line(format!("r̂ = {:.6}: trace σ(r̂) = {trace_sigma:.6}, d̂_W/2 = {:.6}", est.r_hat, est.d_w / 2.0));
    if let Some(scan) = &scan {
        for row in &scan.rows {
            art.line(format!("σ = {:.4}: growth {:.4}", row.sigma, row.growth));
        }
        art.line(format!("critical σ bracket {:?}", scan.bracket));
    }
    if let Some(r) = &restriction {
        art.line(format!("restriction ratio spread {:.4}", r.spread));
    }
    art.table = Some(table);
    Ok(art)
}

fn family_sweep(a: &SweepArgs) -> CliResult<Artifact> {
    let family = load_family(&a.family)?;
    let sch = scheme(&a.scheme, true);
    let limit = family.limit_spec()?;
    let measure = measure_convergence(&family, a.level, &builtin_monomials())?;
    let n_cells = CellLattice::new(&limit, a.level)?.len();
    let resistance = resistance_convergence(&family, a.level, &default_grid(n_cells, a.grid), sch, a.level.min(2))?;
    let gamma = gamma_liminf_check(&family, a.level, &harmonic_x1(&limit, a.level, sch)?, sch)?;
    let result = json!({ "family": family, "measure": measure, "resistance": resistance, "gamma": gamma });
    let mut art = Artifact::new("family-sweep", config(a, Some(&limit)), &result)?;
    let mut table = Table::new(&["n", "value", "hausdorff_lo", "hausdorff_hi", "resistance_deviation", "energy", "max_discrepancy"]);
    for (i, row) in resistance.rows.iter().enumerate() {
        let disc = measure.rows.get(i).map_or(f64::NAN, |r| r.discrepancy.iter().copied().fold(0.0, f64::max));
        let energy = gamma.rows.get(i).map_or(f64::NAN, |r| r.energy);
        table.push(vec![
            row.param.n.to_string(),
            row.param.value.to_string(),
            num(row.hausdorff.lo),
            num(row.hausdorff.hi),
            num(row.deviation),
            num(energy),
            num(disc),
        ]);
        art.line(format!(
            "n = {:>3} z = {:<10} δ ∈ [{:.5}, {:.5}]  resistance dev {:.3e}  energy {:.5}",
            row.param.n,
            row.param.value.to_string(),
            row.hausdorff.lo,
            row.hausdorff.hi,
            row.deviation,
            energy
        ));
    }
    for s in &resistance.skipped {
        art.line(format!("skipped n = {} ({}): {}", s.param.n, s.param.value, s.reason));
    }
    art.line(format!("resistance deviation trend {:?} (last/first {:.3})", resistance.trend.class, resistance.trend.ratio));
    art.line(format!("liminf energy {:.5} against limit {:.5}: {}", gamma.liminf, gamma.limit_energy, gamma.holds));
    art.table = Some(table);
    Ok(art)
}

fn walk(a: &WalkArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sch = scheme(&a.scheme, false);
    let levels = parse_levels(&a.levels)?;
    let top = *levels.last().expect("nonempty range");
    let est = estimate_renorm(&spec, top.max(2), sch, false)?;
    let crossing = simulate_crossings(&spec, &levels, a.walks, a.seed, sch, Some(est.r_hat))?;
    let mut exact = Vec::new();
    for &n in &levels {
        let net = build_cell_network(&spec, n, sch)?;
        let lat = net.lattice();
        exact.push(json!({
            "n": n,
            "expected": expected_crossing_steps(net.graph(), &lat.boundary_cells(Side::Left), &lat.boundary_cells(Side::Right))?,
        }));
    }
    let heat = if a.heat_time >= 20 {
        let net = build_cell_network(&spec, top, sch)?;
        let n = net.n_vertices();
        let bases: Vec<usize> = (0..4).map(|i| i * n / 4 + n / 8).collect();
        Some(heat_kernel_diag(net.graph(), MeasureKind::Weighted, &bases, &geometric_times(1, a.heat_time, 8), [10, a.heat_time])?)
    } else {
        None
    };
    let exponents =
        ExponentEstimates::new(est.d_h, est.theta, crossing.estimates.last().map(|e| e.d_w), heat.as_ref().and_then(|h| h.slope));
    let result = json!({ "r_hat": est.r_hat, "crossing": crossing, "exact": exact, "heat": heat, "exponents": exponents });
    let mut art = Artifact::new("walk", config(a, Some(&spec)), &result)?;
    let mut table = Table::new(&["n", "walks", "mean_steps", "std_error", "expected_steps"]);
    for (l, e) in crossing.levels.iter().zip(&exact) {
        art.line(format!("n = {}: mean crossing {:.1} ± {:.1} (exact {:.1})", l.n, l.steps.mean, l.steps.std_error, e["expected"]));
        table.push(vec![l.n.to_string(), l.steps.walks.to_string(), num(l.steps.mean), num(l.steps.std_error), e["expected"].to_string()]);
    }
    art.line(format!("d_W: resistance {:.4}, crossing {:?}, heat kernel {:?}", exponents.from_resistance, exponents.from_crossing, exponents.from_heat_kernel));
    art.table = Some(table);
    Ok(art)
}

fn resolvent(a: &ResolventArgs) -> CliResult<Artifact> {
    let alpha = parse_number(&a.alpha)?;
    let kind = match a.measure {
        MeasureArg::Uniform => MeasureKind::Uniform,
        MeasureArg::Weighted => MeasureKind::Weighted,
    };
    match (&a.spec, &a.params) {
        (Some(spec_text), None) => {
            let spec = load_spec(spec_text)?;
            let net = build_cell_network(&spec, a.level, scheme(&a.scheme, false))?;
            let lat = net.lattice();
            let bases: Vec<usize> =
                a.x.split(';').map(|t| Ok(parse_endpoint(t, spec.n_maps())?.resolve(lat)?)).collect::<CliResult<_>>()?;
            let r = Resolvent::for_network(&net, kind, alpha)?;
            let sols = bases.iter().map(|&x| r.kernel(x)).collect::<Result<Vec<_>, _>>()?;
            let masses: Vec<f64> = sols.iter().map(|s| r.mass(s)).collect();
            let symmetry = if bases.len() >= 2 { Some((sols[0].kernel[bases[1]] - sols[1].kernel[bases[0]]).abs()) } else { None };
            let result = json!({
                "level": a.level,
                "alpha": alpha,
                "basepoints": bases.iter().map(|&b| lat.word(b).to_string()).collect::<Vec<_>>(),
                "mass": masses,
                "symmetry_defect": symmetry,
                "diagonal": sols.iter().map(|s| s.kernel[s.x]).collect::<Vec<_>>(),
            });
            let mut art = Artifact::new("resolvent", config(a, Some(&spec)), &result)?;
            for (s, m) in sols.iter().zip(&masses) {
                art.line(format!("x = {}: u(x, x) = {:.6}, α·Σ u m = {m:.12}", lat.word(s.x), s.kernel[s.x]));
            }
            if let Some(d) = symmetry {
                art.line(format!("|u(x, y) − u(y, x)| = {d:.3e}"));
            }
            let mut table = Table::new(&["cell", "x", "y", "kernel"]);
            for (s, &b) in sols.iter().zip(&bases) {
                for (c, v) in s.kernel.iter().enumerate() {
                    let centre = lat.centre(c);
                    let _ = b;
                    table.push(vec![lat.word(c).to_string(), num(centre[0]), num(centre[1]), num(*v)]);
                }
            }
            art.table = Some(table);
            Ok(art)
        }
        (None, Some(params)) => {
            let fam = FamilyArgs { family: a.family.clone().unwrap_or_else(|| "kz".into()), params: params.clone() };
            let family = load_family(&fam)?;
            let limit = family.limit_spec()?;
            let lat = CellLattice::new(&limit, a.level)?;
            let bases: Vec<usize> =
                a.x.split(';').map(|t| Ok(parse_endpoint(t, limit.n_maps())?.resolve(&lat)?)).collect::<CliResult<_>>()?;
            let rep = resolvent_convergence(&family, a.level, alpha, &bases, scheme(&a.scheme, true))?;
            let mut art = Artifact::new("resolvent", config(a, Some(&limit)), &rep)?;
            let mut table = Table::new(&["n", "value", "deviation"]);
            for row in &rep.rows {
                art.line(format!("n = {:>3} z = {:<10} sup deviation {:.4e}", row.param.n, row.param.value.to_string(), row.deviation));
                table.push(vec![row.param.n.to_string(), row.param.value.to_string(), num(row.deviation)]);
            }
            art.line(format!("trend {:?}, monotone {}", rep.trend.class, rep.trend.monotone));
            art.table = Some(table);
            Ok(art)
        }
        _ => Err(usage("give exactly one of --spec or --params")),
    }
}

fn report(a: &ReportArgs) -> CliResult<Artifact> {
    let spec = load_spec(&a.spec.spec)?;
    let sch = scheme(&a.scheme, false);
    let validation = validate_usc(&spec);
    if !validation.is_valid() {
        let mut art = Artifact::new("report", config(a, Some(&spec)), &json!({ "validation": validation }))?;
        art.line(format!("invalid carpet: {:?}", validation.failed()));
        art.failed = true;
        return Ok(art);
    }
    let levels = a.levels.max(3);
    let est = estimate_renorm(&spec, levels, sch, true)?;
    let crossing = simulate_crossings(&spec, &[levels - 1, levels], a.walks, a.seed, sch, Some(est.r_hat))?;
    let net = build_cell_network(&spec, levels, sch)?;
    let n = net.n_vertices();
    let bases: Vec<usize> = (0..4).map(|i| i * n / 4 + n / 8).collect();
    let heat = heat_kernel_diag(net.graph(), MeasureKind::Weighted, &bases, &geometric_times(1, 1000, 8), [10, 1000])?;
    let exponents = ExponentEstimates::new(est.d_h, est.theta, crossing.estimates.last().map(|e| e.d_w), heat.slope);
    let constant = comparison_constant(&spec, 2)?;
    let result = json!({
        "validation": validation,
        "renorm": est,
        "crossing": crossing,
        "heat": heat,
        "exponents": exponents,
        "comparison": constant,
    });
    let mut art = Artifact::new("report", config(a, Some(&spec)), &result)?;
    art.line(format!("valid carpet, k = {}, N = {}", spec.k(), spec.n_maps()));
    art.line(format!("r̂ = {:.6} (ratios within bounds: {}), θ̂ = {:.6}", est.r_hat, est.ratios_within_bounds(), est.theta));
    art.line(format!("d_H = {:.6}", exponents.d_h));
    art.line(format!("d_W from resistance {:.4}", exponents.from_resistance));
    if let Some(d) = exponents.from_crossing {
        art.line(format!("d_W from crossing times {d:.4}"));
    }
    if let Some(d) = exponents.from_heat_kernel {
        art.line(format!("d_W from heat-kernel decay {d:.4}"));
    }
    art.line(format!("worst-case geodesic comparison constant C = {:.3}", constant.c));
    Ok(art)
}
