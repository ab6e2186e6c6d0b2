use serde::Serialize;

use super::{transition_operator, MeasureKind};
use crate::error::{CarpetError, Result};
use crate::network::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeatRow {
    pub t: u64,
    /// Mean over base points of `p_t(x, x) / m_x` for the lazy walk.
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatReport {
    pub basepoints: Vec<usize>,
    pub rows: Vec<HeatRow>,
    pub window: [u64; 2],
    /// Least-squares slope of `log value` against `log t` inside the window.
    pub slope: Option<f64>,
    /// Points inside the window used by the fit.
    pub fit_points: usize,
}

/// On-diagonal heat kernel of the lazy walk `(P + I)/2`, sampled at `times`.
pub fn heat_kernel_diag(
    graph: &Graph,
    kind: MeasureKind,
    basepoints: &[usize],
    times: &[u64],
    window: [u64; 2],
) -> Result<HeatReport> {
    let p = transition_operator(graph, kind)?;
    let n = p.n();
    if basepoints.iter().any(|&x| x >= n) || basepoints.is_empty() {
        return Err(CarpetError::InvalidParameter("bad base points".into()));
    }
    let mut times = times.to_vec();
    times.sort_unstable();
    times.dedup();
    let t_max = times.last().copied().unwrap_or(0);
    let per_base = crate::par::map(basepoints, |&x| {
        let mut dist = vec![0.0; n];
        dist[x] = 1.0;
        let mut out = Vec::with_capacity(times.len());
        let mut next = 0;
        for t in 0..=t_max {
            if next < times.len() && times[next] == t {
                out.push(dist[x] / p.measure()[x]);
                next += 1;
            }
            let moved = p.push_forward(&dist);
            for (d, m) in dist.iter_mut().zip(moved) {
                *d = 0.5 * (*d + m);
            }
        }
        out
    });
    let rows: Vec<HeatRow> = times
        .iter()
        .enumerate()
        .map(|(i, &t)| HeatRow { t, value: per_base.iter().map(|v| v[i]).sum::<f64>() / basepoints.len() as f64 })
        .collect();
    let inside: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.t >= window[0] && r.t <= window[1] && r.t > 0)
        .map(|r| ((r.t as f64).ln(), r.value.ln()))
        .collect();
    let slope = (inside.len() >= 2).then(|| {
        let m = inside.len() as f64;
        let mx = inside.iter().map(|p| p.0).sum::<f64>() / m;
        let my = inside.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = inside.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = inside.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    });
    Ok(HeatReport { basepoints: basepoints.to_vec(), rows, window, slope, fit_points: inside.len() })
}

/// Geometrically spaced integer times from `lo` to `hi`, `per_decade` per factor 10.
pub fn geometric_times(lo: u64, hi: u64, per_decade: u32) -> Vec<u64> {
    let mut out = vec![0];
    let ratio = 10f64.powf(1.0 / per_decade.max(1) as f64);
    let mut t = lo.max(1) as f64;
    while t <= hi as f64 * (1.0 + 1e-9) {
        out.push(t.round() as u64);
        t *= ratio;
    }
    out.dedup();
    out
}
