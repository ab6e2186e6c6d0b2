use super::line::{besov_segment_seminorm, DyadicFunction};
use crate::error::Result;
use crate::geometry::CellLattice;

/// `√(Σ_{w ∈ W_n} Σ_{i=1..4} [[f∘Ψ_w on L_i]]²)`, each side sampled to `depth`
/// further levels and scaled as a segment of length `k^{-n}`.
pub fn besov_boundary_seminorm(f: impl Fn([f64; 2]) -> f64 + Sync, lat: &CellLattice, r: f64, depth: u32) -> Result<f64> {
    let k = lat.k();
    let scale = lat.scale() as f64;
    let length = lat.side() as f64 / scale;
    let squares = crate::par::map_range(lat.len(), |c| -> Result<f64> {
        let corners: Vec<[f64; 2]> = (1..=4)
            .map(|i| {
                let p = lat.corner(c, i);
                [p[0] as f64 / scale, p[1] as f64 / scale]
            })
            .collect();
        let mut total = 0.0;
        for i in 0..4 {
            let (p, q) = (corners[i], corners[(i + 1) % 4]);
            let u = DyadicFunction::from_fn(k, depth, |t| f([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]));
            total += besov_segment_seminorm(&u, r, length)?.powi(2);
        }
        Ok(total)
    });
    let squares: Vec<f64> = squares.into_iter().collect::<Result<_>>()?;
    Ok(crate::par::pairwise_sum(&squares).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::spec::tests::sc;
    use crate::trace::besov_line_seminorm;

    #[test]
    fn level_zero_first_coordinate() {
        let lat = CellLattice::new(&sc(), 0).unwrap();
        let r = 0.8;
        let v = besov_boundary_seminorm(|p| p[0], &lat, r, 6).unwrap();
        let line = besov_line_seminorm(&DyadicFunction::from_fn(3, 6, |x| x), r).unwrap();
        assert!((v - (2.0f64).sqrt() * line).abs() < 1e-12);
        assert_eq!(besov_boundary_seminorm(|_| 1.0, &lat, r, 6).unwrap(), 0.0);
    }

    #[test]
    fn homogeneous() {
        let lat = CellLattice::new(&sc(), 1).unwrap();
        let f = |p: [f64; 2]| (3.0 * p[0]).sin() + p[1] * p[1];
        let a = besov_boundary_seminorm(f, &lat, 0.8, 4).unwrap();
        let b = besov_boundary_seminorm(|p| -2.0 * f(p), &lat, 0.8, 4).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12 * a);
    }
}
