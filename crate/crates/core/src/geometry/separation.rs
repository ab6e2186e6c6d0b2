use std::collections::HashSet;

use num_bigint::BigInt;
use serde::Serialize;

use super::adjacency::cell_adjacency;
use super::{CellLattice, Rational};

/// Finite-level witness for the separation constant: `k^n` times the minimum
/// distance between level-`n` cells that have no common neighbour.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C0Estimate {
    pub level: u32,
    pub value: f64,
    /// `value²`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub value_squared: Rational,
    /// A pair attaining the minimum.
    pub witness: (usize, usize),
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `None` when every pair of cells shares a neighbour.
pub fn estimate_c0(lat: &CellLattice) -> Option<C0Estimate> {
    let n = lat.len();
    let mut nbrs: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for c in cell_adjacency(lat) {
        nbrs[c.a].push(c.b);
        nbrs[c.b].push(c.a);
    }
    let side = lat.side() as i128;
    let mut best: Option<(i128, usize, usize)> = None;
    let max_radius = lat.scale() / lat.side() + 2;
    for a in 0..n {
        // Cells within two steps of `a` share a neighbour with it.
        let close: HashSet<usize> = nbrs[a].iter().flat_map(|&m| nbrs[m].iter().copied()).collect();
        let mut radius = 1i64;
        loop {
            for b in ring(lat, a, radius) {
                if b <= a || close.contains(&b) {
                    continue;
                }
                let d = lat.cell_distance_sq(a, b);
                if best.map_or(true, |(bd, ba, bb)| (d, a, b) < (bd, ba, bb)) {
                    best = Some((d, a, b));
                }
            }
            // Cells in later rings are at least `radius - 1` cell sides away.
            let reach = (radius - 1) as i128 * side;
            let done = best.is_some_and(|(bd, _, _)| reach * reach > bd);
            if done || radius > max_radius {
                break;
            }
            radius += 1;
        }
    }
    best.map(|(d, a, b)| {
        let value_squared = Rational::new(BigInt::from(d), BigInt::from(side * side));
        C0Estimate { level: lat.level(), value: (d as f64).sqrt() / side as f64, value_squared, witness: (a, b) }
    })
}

/// Cells in buckets at Chebyshev distance exactly `radius` from the bucket of `a`.
fn ring(lat: &CellLattice, a: usize, radius: i64) -> Vec<usize> {
    let o = lat.origin(a);
    let b = (o[0].div_euclid(lat.side()), o[1].div_euclid(lat.side()));
    let mut out = Vec::new();
    for dx in -radius..=radius {
        for dy in -radius..=radius {
            if dx.abs().max(dy.abs()) != radius {
                continue;
            }
            out.extend(lat.bucket_cells((b.0 + dx, b.1 + dy)).iter().map(|&i| i as usize));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::spec::tests::sc;

    /// Exhaustive oracle over all pairs.
    fn brute(lat: &CellLattice) -> Option<i128> {
        let n = lat.len();
        let contacts = cell_adjacency(lat);
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            adj[i][i] = true;
        }
        for c in &contacts {
            adj[c.a][c.b] = true;
            adj[c.b][c.a] = true;
        }
        let mut best = None;
        for a in 0..n {
            for b in a + 1..n {
                if (0..n).any(|m| adj[a][m] && adj[b][m]) {
                    continue;
                }
                let d = lat.cell_distance_sq(a, b);
                best = Some(best.map_or(d, |x: i128| x.min(d)));
            }
        }
        best
    }

    #[test]
    fn standard_carpet_levels() {
        let s = sc();
        let mut prev = f64::INFINITY;
        for n in 1..=3 {
            let lat = CellLattice::new(&s, n).unwrap();
            let e = estimate_c0(&lat).unwrap();
            let side = lat.side() as i128;
            assert_eq!(
                e.value_squared,
                Rational::new(BigInt::from(brute(&lat).unwrap()), BigInt::from(side * side))
            );
            assert!(e.value > 0.0);
            assert!(e.value <= prev + 1e-12);
            prev = e.value;
        }
        // Level 1: only opposite corner cells lack a common neighbour; their
        // gap is the diagonal of the central hole, sqrt(2)/3, times k = 3.
        let lat = CellLattice::new(&s, 1).unwrap();
        assert_eq!(estimate_c0(&lat).unwrap().value_squared, Rational::from_integer(2.into()));
    }
}
