use serde::Serialize;

use super::line::DyadicFunction;
use crate::error::{CarpetError, Result};

/// Values on the truncated building-brick vertex set plus the bottom side.
///
/// `rows[j][i]` is the value at `(i/k^j, 1/k^{j+1})` for `0 ≤ j ≤ M + 1`; bricks
/// of levels `0..=M` use rows `m` (top corners) and `m + 1` (bottom row).
/// `line` holds the values at `(l/k^M, 0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrickSamples {
    k: u32,
    depth: u32,
    rows: Vec<Vec<f64>>,
    line: Vec<f64>,
}

impl BrickSamples {
    pub fn new(k: u32, depth: u32, rows: Vec<Vec<f64>>, line: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(CarpetError::InvalidParameter("k must be at least 2".into()));
        }
        if rows.len() != depth as usize + 2 {
            return Err(CarpetError::InvalidParameter(format!("expected {} rows", depth + 2)));
        }
        for (j, row) in rows.iter().enumerate() {
            if row.len() != (k as usize).pow(j as u32) + 1 {
                return Err(CarpetError::InvalidParameter(format!("row {j} has {} values", row.len())));
            }
        }
        if line.len() != (k as usize).pow(depth) + 1 {
            return Err(CarpetError::InvalidParameter("missing values on the bottom side".into()));
        }
        Ok(BrickSamples { k, depth, rows, line })
    }

    pub fn from_fn(k: u32, depth: u32, f: impl Fn([f64; 2]) -> f64) -> Self {
        let kf = k as f64;
        let rows = (0..=depth + 1)
            .map(|j| {
                let n = (k as usize).pow(j);
                let y = kf.powi(-(j as i32) - 1);
                (0..=n).map(|i| f([i as f64 / n as f64, y])).collect()
            })
            .collect();
        let n = (k as usize).pow(depth);
        let line = (0..=n).map(|l| f([l as f64 / n as f64, 0.0])).collect();
        BrickSamples { k, depth, rows, line }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Applies `x ↦ 1 − x` to every vertex.
    pub fn reflected(&self) -> Self {
        let flip = |v: &Vec<f64>| v.iter().rev().copied().collect();
        BrickSamples { k: self.k, depth: self.depth, rows: self.rows.iter().map(flip).collect(), line: flip(&self.line) }
    }

    /// `D̃_m(f)²`: the brick energies of all level-`m` bricks.
    pub fn brick_level_sum(&self, m: u32) -> f64 {
        let k = self.k as usize;
        let (top, bottom) = (&self.rows[m as usize], &self.rows[m as usize + 1]);
        let terms: Vec<f64> = (0..top.len() - 1)
            .map(|l| {
                let lo = l * k;
                let mut e = (top[l] - top[l + 1]).powi(2);
                e += (top[l] - bottom[lo]).powi(2);
                e += (top[l + 1] - bottom[lo + k]).powi(2);
                e += (lo..lo + k).map(|i| (bottom[i] - bottom[i + 1]).powi(2)).sum::<f64>();
                e
            })
            .collect();
        crate::par::pairwise_sum(&terms)
    }

    pub fn bottom_line(&self) -> DyadicFunction {
        DyadicFunction::new(self.k, self.depth, self.line.clone()).expect("validated on construction")
    }
}

/// `Σ_{m ≤ M} r^{-m} D̃_m(f)²`.
pub fn brick_graph_energy(f: &BrickSamples, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(CarpetError::InvalidParameter(format!("r = {r} outside (0, 1)")));
    }
    Ok((0..=f.depth).map(|m| r.powi(-(m as i32)) * f.brick_level_sum(m)).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionRow {
    pub n: u32,
    /// `D_n(f|_{L_1})`.
    pub lhs: f64,
    /// `3·Σ_{m=n}^{M} D̃_m(f)`.
    pub rhs: f64,
    /// `2‖ρ‖₂`, `ρ_l = f(l/k^n, 0) − f(l/k^n, 1/k^{M+2})`: the part of the
    /// vertical telescoping sum below the deepest sampled row.
    pub slack: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub rows: Vec<RestrictionRow>,
    pub pass: bool,
}

/// Checks `D_n(f|_{L_1}) ≤ 3·Σ_{m ≥ n} D̃_m(f)` for every `n ≤ M`, with the
/// tail below the deepest row bounded by the slack term.
pub fn check_restriction(f: &BrickSamples) -> RestrictionReport {
    let line = f.bottom_line();
    let tilde: Vec<f64> = (0..=f.depth).map(|m| f.brick_level_sum(m).sqrt()).collect();
    let deepest = &f.rows[f.depth as usize + 1];
    let k = f.k as usize;
    let rows: Vec<RestrictionRow> = (0..=f.depth)
        .map(|n| {
            let lhs = line.level_sum(n).sqrt();
            let rhs = 3.0 * tilde[n as usize..].iter().sum::<f64>();
            let cells = k.pow(n);
            let rho2: f64 = (0..=cells)
                .map(|l| (line.at(n, l) - deepest[l * k.pow(f.depth + 1 - n)]).powi(2))
                .sum();
            let slack = 2.0 * rho2.sqrt();
            RestrictionRow { n, lhs, rhs, slack, pass: lhs <= rhs + slack + 1e-12 }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    RestrictionReport { rows, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_count_k3_m1() {
        // Level 0 brick: (0,1/3),(1,1/3) on top, (l/3,1/9) below.
        let f = |p: [f64; 2]| p[0] + 10.0 * p[1];
        let s = BrickSamples::from_fn(3, 1, f);
        assert_eq!(s.rows[0].len(), 2);
        assert_eq!(s.rows[1].len(), 4);
        let top = [f([0.0, 1.0 / 3.0]), f([1.0, 1.0 / 3.0])];
        let low: Vec<f64> = (0..4).map(|l| f([l as f64 / 3.0, 1.0 / 9.0])).collect();
        let mut want = (top[0] - top[1]).powi(2) + (top[0] - low[0]).powi(2) + (top[1] - low[3]).powi(2);
        want += (0..3).map(|i| (low[i] - low[i + 1]).powi(2)).sum::<f64>();
        assert!((s.brick_level_sum(0) - want).abs() < 1e-12);
    }

    #[test]
    fn constant_and_reflection() {
        let c = BrickSamples::from_fn(3, 3, |_| 4.0);
        assert_eq!(brick_graph_energy(&c, 0.8).unwrap(), 0.0);
        assert!(check_restriction(&c).rows.iter().all(|r| r.lhs == 0.0 && r.rhs == 0.0));
        let f = BrickSamples::from_fn(3, 3, |p| (5.0 * p[0]).sin() * (1.0 + p[1]));
        let a = brick_graph_energy(&f, 0.8).unwrap();
        let b = brick_graph_energy(&f.reflected(), 0.8).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn single_vertex_is_local() {
        // A deepest-row vertex strictly inside a brick touches two bottom edges.
        let (k, depth, r) = (3u32, 2u32, 0.8);
        let mut s = BrickSamples::from_fn(k, depth, |_| 0.0);
        s.rows[depth as usize + 1][4] = 1.0;
        assert!((brick_graph_energy(&s, r).unwrap() - 2.0 * r.powi(-(depth as i32))).abs() < 1e-12);
        // At a brick corner it also carries the two vertical edges.
        s.rows[depth as usize + 1][4] = 0.0;
        s.rows[depth as usize + 1][3] = 1.0;
        assert!((brick_graph_energy(&s, r).unwrap() - 4.0 * r.powi(-(depth as i32))).abs() < 1e-12);
    }

    #[test]
    fn first_coordinate_levels() {
        let s = BrickSamples::from_fn(3, 5, |p| p[0]);
        let line = s.bottom_line();
        for n in 0..=5 {
            assert!((line.level_sum(n).sqrt() - 3f64.powf(-(n as f64) / 2.0)).abs() < 1e-12);
        }
        assert!(check_restriction(&s).pass);
    }

    #[test]
    fn rejects_wrong_shapes() {
        assert!(BrickSamples::new(3, 1, vec![vec![0.0; 2], vec![0.0; 4]], vec![0.0; 4]).is_err());
        assert!(BrickSamples::new(3, 1, vec![vec![0.0; 2], vec![0.0; 4], vec![0.0; 10]], vec![0.0; 4]).is_ok());
    }
}
