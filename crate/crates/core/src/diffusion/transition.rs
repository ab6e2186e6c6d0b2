use serde::{Deserialize, Serialize};

use crate::error::{CarpetError, Result};
use crate::network::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Equal mass on every cell.
    Uniform,
    /// `m_x = c_x / Σ c`, which makes the walk reversible.
    #[default]
    Weighted,
}

impl MeasureKind {
    pub fn masses(self, graph: &Graph) -> Vec<f64> {
        let n = graph.n_vertices();
        match self {
            MeasureKind::Uniform => vec![1.0 / n as f64; n],
            MeasureKind::Weighted => {
                let deg = graph.degrees();
                let total = crate::par::pairwise_sum(&deg);
                if total == 0.0 {
                    return vec![1.0 / n as f64; n];
                }
                deg.iter().map(|d| d / total).collect()
            }
        }
    }
}

/// `P(x, y) = c_xy / c_x` with cumulative rows for sampling.
#[derive(Clone, Debug)]
pub struct TransitionOperator {
    rows: Vec<Vec<(usize, f64)>>,
    cumulative: Vec<Vec<f64>>,
    measure: Vec<f64>,
    kind: MeasureKind,
}

pub fn transition_operator(graph: &Graph, kind: MeasureKind) -> Result<TransitionOperator> {
    let n = graph.n_vertices();
    let mut nbrs: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(a, b, c) in graph.edges() {
        nbrs[a].push((b, c));
        nbrs[b].push((a, c));
    }
    let mut rows = Vec::with_capacity(n);
    let mut cumulative = Vec::with_capacity(n);
    for (x, mut r) in nbrs.into_iter().enumerate() {
        r.sort_by_key(|e| e.0);
        let cx: f64 = r.iter().map(|e| e.1).sum();
        if cx <= 0.0 {
            return Err(CarpetError::Degenerate(format!("vertex {x} has no edges")));
        }
        let mut acc = 0.0;
        let cum: Vec<f64> = r
            .iter()
            .map(|e| {
                acc += e.1 / cx;
                acc
            })
            .collect();
        rows.push(r.into_iter().map(|(y, c)| (y, c / cx)).collect());
        cumulative.push(cum);
    }
    Ok(TransitionOperator { rows, cumulative, measure: kind.masses(graph), kind })
}

impl TransitionOperator {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, x: usize) -> &[(usize, f64)] {
        &self.rows[x]
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    /// Next state given a uniform sample `u ∈ [0, 1)`.
    pub fn sample(&self, x: usize, u: f64) -> usize {
        let cum = &self.cumulative[x];
        let i = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
        self.rows[x][i].0
    }

    /// `(p P)(y) = Σ_x p(x) P(x, y)`.
    pub fn push_forward(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; p.len()];
        for (x, row) in self.rows.iter().enumerate() {
            if p[x] != 0.0 {
                for &(y, w) in row {
                    out[y] += p[x] * w;
                }
            }
        }
        out
    }

    /// Largest `|m_x P(x,y) − m_y P(y,x)|`.
    pub fn reversibility_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (x, row) in self.rows.iter().enumerate() {
            for &(y, pxy) in row {
                let pyx = self.rows[y].iter().find(|e| e.0 == x).map_or(0.0, |e| e.1);
                worst = worst.max((self.measure[x] * pxy - self.measure[y] * pyx).abs());
            }
        }
        worst
    }
}
