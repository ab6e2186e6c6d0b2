use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{transition_operator, MeasureKind, TransitionOperator};
use crate::error::{CarpetError, Result};
use crate::geometry::{Side, UscSpec};
use crate::network::{build_cell_network, ConductanceScheme, Graph, GroundedSystem, SolverOptions};
use crate::par::pairwise_sum;

/// Steps after which a walk is declared runaway.
pub const WALK_CAP: u64 = 1_000_000_000;

const BATCHES: usize = 20;

/// One walk from a uniformly chosen start in `from` until it enters `target`.
/// Each walk has its own RNG stream, so results do not depend on scheduling.
fn walk(p: &TransitionOperator, from: &[usize], target: &[bool], seed: u64, index: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut x = from[rng.random_range(0..from.len())];
    let mut steps = 0u64;
    while !target[x] {
        x = p.sample(x, rng.random::<f64>());
        steps += 1;
        if steps >= WALK_CAP {
            return Err(CarpetError::WalkCap(WALK_CAP));
        }
    }
    Ok(steps)
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkStats {
    pub walks: usize,
    pub mean: f64,
    /// Standard error of the mean from the sample variance.
    pub std_error: f64,
    /// 95% interval from batch means.
    pub interval: [f64; 2],
}

fn stats(steps: &[f64]) -> WalkStats {
    let n = steps.len() as f64;
    let mean = pairwise_sum(steps) / n;
    let sq: Vec<f64> = steps.iter().map(|s| (s - mean).powi(2)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0).max(1.0);
    let per = (steps.len() / BATCHES).max(1);
    let batch: Vec<f64> = steps.chunks(per).filter(|c| c.len() == per).map(|c| pairwise_sum(c) / per as f64).collect();
    let bm = pairwise_sum(&batch) / batch.len() as f64;
    let bvar: Vec<f64> = batch.iter().map(|b| (b - bm).powi(2)).collect();
    let half = if batch.len() > 1 {
        1.96 * (pairwise_sum(&bvar) / (batch.len() - 1) as f64 / batch.len() as f64).sqrt()
    } else {
        f64::INFINITY
    };
    WalkStats { walks: steps.len(), mean, std_error: (var / n).sqrt(), interval: [mean - half, mean + half] }
}

/// Monte Carlo crossing steps from `from` to `to`.
pub fn crossing_steps(graph: &Graph, from: &[usize], to: &[usize], walks: usize, seed: u64) -> Result<WalkStats> {
    if from.is_empty() || to.is_empty() || walks < 2 {
        return Err(CarpetError::InvalidParameter("need start cells, target cells and at least two walks".into()));
    }
    let p = transition_operator(graph, MeasureKind::Weighted)?;
    let mut target = vec![false; graph.n_vertices()];
    for &t in to {
        target[t] = true;
    }
    let steps = crate::par::map_range(walks, |i| walk(&p, from, &target, seed, i as u64).map(|s| s as f64));
    let steps: Vec<f64> = steps.into_iter().collect::<Result<_>>()?;
    Ok(stats(&steps))
}

/// Exact expected crossing steps, averaged over a uniform start in `from`:
/// `h = 0` on `to` and `h = 1 + P h` elsewhere, i.e. `L h = c` off `to`.
pub fn expected_crossing_steps(graph: &Graph, from: &[usize], to: &[usize]) -> Result<f64> {
    let n = graph.n_vertices();
    let mut fixed = vec![false; n];
    for &t in to {
        fixed[t] = true;
    }
    let deg = graph.degrees();
    let sys = GroundedSystem::new(&graph.laplacian(), None, &fixed, SolverOptions::default())?;
    let rhs: Vec<f64> = sys.free().iter().map(|&v| deg[v]).collect();
    let h = sys.solve(&rhs)?;
    let vals: Vec<f64> = from.iter().map(|&v| sys.local_index(v).map_or(0.0, |i| h[i])).collect();
    Ok(pairwise_sum(&vals) / vals.len() as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingLevel {
    pub n: u32,
    pub steps: WalkStats,
    /// Mean steps times `r̂^n N^{-n}`, comparable across levels.
    pub scaled_time: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkDimension {
    pub from: u32,
    pub to: u32,
    /// `log(T_{n+1}/T_n) / log k`.
    pub d_w: f64,
    /// Interval from the batch-mean intervals of both levels.
    pub interval: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossingReport {
    pub seed: u64,
    pub walks: usize,
    pub levels: Vec<CrossingLevel>,
    pub estimates: Vec<WalkDimension>,
}

/// Crossing statistics from the left-side cells to the right-side cells at
/// each level, with walk-dimension estimates from consecutive levels.
pub fn simulate_crossings(
    spec: &UscSpec,
    levels: &[u32],
    walks: usize,
    seed: u64,
    scheme: ConductanceScheme,
    r_hat: Option<f64>,
) -> Result<CrossingReport> {
    let mut out = Vec::new();
    for &n in levels {
        let net = build_cell_network(spec, n, scheme)?;
        let lat = net.lattice();
        let steps = crossing_steps(net.graph(), &lat.boundary_cells(Side::Left), &lat.boundary_cells(Side::Right), walks, seed)?;
        let scaled_time = r_hat.map(|r| steps.mean * (r / spec.n_maps() as f64).powi(n as i32));
        out.push(CrossingLevel { n, steps, scaled_time });
    }
    let lk = (spec.k() as f64).ln();
    let estimates = out
        .windows(2)
        .filter(|w| w[1].n == w[0].n + 1)
        .map(|w| {
            let (a, b) = (&w[0].steps, &w[1].steps);
            let lo = (b.interval[0].max(1e-300) / a.interval[1]).ln() / lk;
            let hi = (b.interval[1] / a.interval[0].max(1e-300)).ln() / lk;
            WalkDimension { from: w[0].n, to: w[1].n, d_w: (b.mean / a.mean).ln() / lk, interval: [lo, hi] }
        })
        .collect();
    Ok(CrossingReport { seed, walks, levels: out, estimates })
}
