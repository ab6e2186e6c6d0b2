use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::Serialize;

use super::UscSpec;
use crate::error::{CarpetError, Result};

/// Minimum-cost assignment of the maps of one carpet to those of another.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IfsMatching {
    /// `perm[i]` is the map of `b` matched to map `i` of `a` (0-based).
    pub perm: Vec<usize>,
    /// Sum of offset distances.
    pub cost: f64,
    /// Largest single offset distance.
    pub max_distance: f64,
}

impl IfsMatching {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

// Distances are scaled to integers for the Hungarian algorithm.
const WEIGHT_SCALE: f64 = (1u64 << 40) as f64;

pub fn match_ifs(a: &UscSpec, b: &UscSpec) -> Result<IfsMatching> {
    if a.k() != b.k() || a.n_maps() != b.n_maps() {
        return Err(CarpetError::InvalidParameter("matching needs equal k and N".into()));
    }
    let (ca, cb) = (a.offsets_f64(), b.offsets_f64());
    let n = ca.len();
    let dist = |i: usize, j: usize| ((ca[i][0] - cb[j][0]).powi(2) + (ca[i][1] - cb[j][1]).powi(2)).sqrt();
    let weights = Matrix::from_fn(n, n, |(i, j)| -(dist(i, j) * WEIGHT_SCALE).round() as i64);
    let (_, perm) = kuhn_munkres(&weights);
    let dists: Vec<f64> = perm.iter().enumerate().map(|(i, &j)| dist(i, j)).collect();
    Ok(IfsMatching {
        cost: dists.iter().sum(),
        max_distance: dists.iter().cloned().fold(0.0, f64::max),
        perm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::family_kz;
    use crate::geometry::parse_rational;
    use crate::geometry::spec::tests::sc;

    #[test]
    fn identity_on_equal_specs() {
        let m = match_ifs(&sc(), &sc()).unwrap();
        assert!(m.is_identity());
        assert_eq!(m.cost, 0.0);
    }

    #[test]
    fn recovers_shuffle() {
        let a = family_kz(&parse_rational("1/28").unwrap()).unwrap();
        // b's map j is a's map shuffle[j].
        let shuffle: Vec<usize> = (0..32).map(|j| (j * 7 + 3) % 32).collect();
        let b = a.permuted(&shuffle).unwrap();
        let m = match_ifs(&a, &b).unwrap();
        for (i, &j) in m.perm.iter().enumerate() {
            assert_eq!(shuffle[j], i);
        }
        let back = match_ifs(&b, &a).unwrap();
        for i in 0..32 {
            assert_eq!(back.perm[m.perm[i]], i);
        }
    }

    #[test]
    fn nearby_family_members() {
        let a = family_kz(&parse_rational("1/28").unwrap()).unwrap();
        let b = family_kz(&(parse_rational("1/28").unwrap() + parse_rational("1/1000").unwrap())).unwrap();
        let m = match_ifs(&a, &b).unwrap();
        assert!(m.max_distance <= std::f64::consts::SQRT_2 / 1000.0 + 1e-15);
    }
}
