use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::renorm::across_resistance;
use super::{effective_resistance, CellNetwork, GroundedSystem, SolverOptions};
use crate::error::{CarpetError, Result};
use crate::geodesic::Skeleton;
use crate::geometry::{CellLattice, Word};

/// Two-point effective resistance on one cell network, divided by the
/// network's own `R(L_2, L_4)`.
pub struct ResistanceMetric {
    n: usize,
    system: GroundedSystem,
    normalization: f64,
}

impl ResistanceMetric {
    pub fn new(net: &CellNetwork, opts: SolverOptions) -> Result<Self> {
        let norm = across_resistance(net, opts)?;
        Self::with_normalization(net, norm, opts)
    }

    pub fn with_normalization(net: &CellNetwork, normalization: f64, opts: SolverOptions) -> Result<Self> {
        let n = net.n_vertices();
        if n < 2 {
            return Err(CarpetError::Degenerate("metric needs at least two cells".into()));
        }
        let mut fixed = vec![false; n];
        fixed[0] = true;
        let system = GroundedSystem::new(&net.graph().laplacian(), None, &fixed, opts)?;
        Ok(ResistanceMetric { n, system, normalization })
    }

    /// Raw `R(L_2, L_4)` used as the unit.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    /// Unnormalized resistance between two vertices.
    pub fn raw(&self, a: usize, b: usize) -> Result<f64> {
        if a >= self.n || b >= self.n {
            return Err(CarpetError::InvalidParameter("vertex out of range".into()));
        }
        if a == b {
            return Ok(0.0);
        }
        // Fixed orientation makes the value symmetric bit for bit.
        let (a, b) = (a.min(b), a.max(b));
        let mut rhs = vec![0.0; self.n - 1];
        for (v, s) in [(a, 1.0), (b, -1.0)] {
            if let Some(i) = self.system.local_index(v) {
                rhs[i] = s;
            }
        }
        let x = self.system.solve(&rhs)?;
        let at = |v: usize| self.system.local_index(v).map_or(0.0, |i| x[i]);
        Ok((at(a) - at(b)).max(0.0))
    }

    pub fn distance(&self, a: usize, b: usize) -> Result<f64> {
        Ok(self.raw(a, b)? / self.normalization)
    }
}

/// A location in the carpet, resolved to a level-`n` cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    /// Cells below a word; longer words are truncated to level `n`.
    Word(Word),
    Point([f64; 2]),
}

impl Endpoint {
    pub fn resolve(&self, lat: &CellLattice) -> Result<usize> {
        match self {
            Endpoint::Word(w) => {
                let n = lat.level() as usize;
                if w.level() < n {
                    return Err(CarpetError::InvalidParameter(format!("word {w} shorter than level {n}")));
                }
                lat.cell_of_word(&Word::from_letters(w.letters()[..n].to_vec()))
            }
            Endpoint::Point(p) => lat
                .locate(*p)
                .ok_or_else(|| CarpetError::InvalidParameter(format!("point {p:?} not in any cell"))),
        }
    }
}

/// Two distinct indices below `n`, uniformly.
pub(crate) fn distinct_pair(rng: &mut impl Rng, n: usize) -> (usize, usize) {
    let i = rng.random_range(0..n);
    let mut j = rng.random_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryBoundReport {
    pub level: u32,
    /// `R̂(q_1, q_2)` between the cells at the two lower corners.
    pub reference: f64,
    /// `(x, y, R̂(x, y) / R̂(q_1, q_2))`.
    pub pairs: Vec<(usize, usize, f64)>,
    pub max_ratio: f64,
    /// `2k³`.
    pub bound: f64,
    pub pass: bool,
}

/// Samples pairs of boundary cells and compares their resistance with the
/// resistance between the corner cells at `q_1 = (0,0)` and `q_2 = (1,0)`.
pub fn check_boundary_bound(
    net: &CellNetwork,
    metric: &ResistanceMetric,
    samples: usize,
    seed: u64,
) -> Result<BoundaryBoundReport> {
    let lat = net.lattice();
    let q1 = lat.locate([0.0, 0.0]).ok_or(CarpetError::Unreachable)?;
    let q2 = lat.locate([1.0, 0.0]).ok_or(CarpetError::Unreachable)?;
    let reference = metric.distance(q1, q2)?;
    let boundary = lat.all_boundary_cells();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = vec![(q1, q2)];
    while picks.len() < samples.max(1) {
        let (i, j) = distinct_pair(&mut rng, boundary.len());
        picks.push((boundary[i], boundary[j]));
    }
    let ratios = crate::par::map(&picks, |&(x, y)| metric.distance(x, y).map(|r| r / reference));
    let pairs: Vec<(usize, usize, f64)> =
        picks.iter().zip(ratios).map(|(&(x, y), r)| r.map(|r| (x, y, r))).collect::<Result<_>>()?;
    let max_ratio = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    let k = lat.k() as f64;
    let bound = 2.0 * k.powi(3);
    Ok(BoundaryBoundReport { level: lat.level(), reference, pairs, max_ratio, bound, pass: max_ratio <= bound })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaFit {
    /// Least-squares slope of `log R̂` against `log d_G`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `[min, max]` of `R̂ / d_G^θ̂`.
    pub bracket: [f64; 2],
    pub theta_hat: f64,
    pub pairs: usize,
}

/// Geodesic distance between the lower-left corners of two cells, read off a
/// skeleton built from a lattice at the same or finer level.
fn corner_vertex(lat: &CellLattice, sk: &Skeleton, cell: usize) -> Result<usize> {
    let o = lat.origin(cell);
    let mult = sk.scale() / lat.scale();
    sk.vertex_at_units([o[0] * mult, o[1] * mult]).ok_or(CarpetError::Unreachable)
}

/// Fits `R̂(x, y) ≈ C·d_G(x, y)^θ` over random cell pairs at least
/// `min_separation` apart (geodesically).
pub fn fit_theta(
    net: &CellNetwork,
    metric: &ResistanceMetric,
    sk: &Skeleton,
    theta_hat: f64,
    samples: usize,
    min_separation: f64,
    seed: u64,
) -> Result<ThetaFit> {
    let lat = net.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(usize, usize)> = (0..samples)
        .map(|_| distinct_pair(&mut rng, lat.len()))
        .collect();
    let rows = crate::par::map(&picks, |&(a, b)| -> Result<(f64, f64)> {
        let d = sk.path_length(corner_vertex(lat, sk, a)?, corner_vertex(lat, sk, b)?)?;
        Ok((d, metric.distance(a, b)?))
    });
    let rows: Vec<(f64, f64)> =
        rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().filter(|r| r.0 >= min_separation && r.0 > 0.0).collect();
    if rows.len() < 2 {
        return Err(CarpetError::Degenerate("fewer than two usable pairs".into()));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.0.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-24 {
        return Err(CarpetError::Degenerate("all sampled pairs are equidistant".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / m).sqrt();
    let ratios: Vec<f64> = rows.iter().map(|r| r.1 / r.0.powf(theta_hat)).collect();
    let bracket = [ratios.iter().cloned().fold(f64::INFINITY, f64::min), ratios.iter().cloned().fold(0.0, f64::max)];
    Ok(ThetaFit { slope, intercept, residual, bracket, theta_hat, pairs: rows.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnulusReport {
    pub cell: usize,
    pub rho: f64,
    /// `R̂(x, K \ B_ρ(x))`.
    pub resistance: f64,
    /// `R̂ / ρ^θ̂`.
    pub scaled: f64,
    /// Number of cells outside the geodesic ball.
    pub outside: usize,
}

/// Resistance from cell `x` to all cells whose corners are all at geodesic
/// distance `≥ ρ` from the lower-left corner of `x`.
pub fn annulus_resistance(
    net: &CellNetwork,
    normalization: f64,
    sk: &Skeleton,
    x: usize,
    rho: f64,
    theta_hat: f64,
) -> Result<AnnulusReport> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(CarpetError::InvalidParameter(format!("rho = {rho} must be positive")));
    }
    let lat = net.lattice();
    let dist = sk.distances(corner_vertex(lat, sk, x)?);
    let mult = sk.scale() / lat.scale();
    let far: Vec<usize> = (0..lat.len())
        .filter(|&c| {
            (1..=4).all(|i| {
                let p = lat.corner(c, i);
                sk.vertex_at_units([p[0] * mult, p[1] * mult]).is_some_and(|v| dist[v] >= rho)
            })
        })
        .collect();
    if far.is_empty() {
        return Err(CarpetError::Degenerate(format!("no cells beyond geodesic distance {rho}")));
    }
    let r = effective_resistance(net.graph(), &[x], &far, SolverOptions::default())? / normalization;
    Ok(AnnulusReport { cell: x, rho, resistance: r, scaled: r / rho.powf(theta_hat), outside: far.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::build_skeleton;
    use crate::geometry::spec::tests::sc;
    use crate::geometry::Symmetry;
    use crate::network::{build_cell_network, ConductanceScheme};

    #[test]
    fn metric_axioms_level_two() {
        let net = build_cell_network(&sc(), 2, ConductanceScheme::default()).unwrap();
        let m = ResistanceMetric::new(&net, SolverOptions::default()).unwrap();
        let n = net.n_vertices();
        for a in 0..n {
            assert_eq!(m.distance(a, a).unwrap(), 0.0);
            for b in 0..n {
                assert_eq!(m.distance(a, b).unwrap(), m.distance(b, a).unwrap());
            }
        }
        for (a, b, c) in [(0, 10, 40), (3, 63, 17), (5, 6, 7)] {
            let (ab, bc, ac) = (m.distance(a, b).unwrap(), m.distance(b, c).unwrap(), m.distance(a, c).unwrap());
            assert!(ac <= ab + bc + 1e-12);
        }
        for g in Symmetry::ALL {
            let p = net.lattice().symmetry_permutation(g).unwrap();
            assert!((m.distance(0, 37).unwrap() - m.distance(p[0], p[37]).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn endpoints_resolve() {
        let net = build_cell_network(&sc(), 2, ConductanceScheme::default()).unwrap();
        let lat = net.lattice();
        let w = Word::parse("w:123", 8).unwrap();
        assert_eq!(Endpoint::Word(w).resolve(lat).unwrap(), lat.cell_of_word(&Word::parse("w:12", 8).unwrap()).unwrap());
        assert!(Endpoint::Word(Word::parse("w:1", 8).unwrap()).resolve(lat).is_err());
        assert_eq!(Endpoint::Point([0.01, 0.01]).resolve(lat).unwrap(), 0);
        assert!(Endpoint::Point([0.5, 0.5]).resolve(lat).is_err());
    }

    #[test]
    fn boundary_reference_pair_is_one() {
        let net = build_cell_network(&sc(), 2, ConductanceScheme::default()).unwrap();
        let m = ResistanceMetric::new(&net, SolverOptions::default()).unwrap();
        let rep = check_boundary_bound(&net, &m, 20, 1).unwrap();
        assert!((rep.pairs[0].2 - 1.0).abs() < 1e-12);
        assert!(rep.pass && rep.bound == 54.0);
    }

    #[test]
    fn annulus_monotone_and_theta_fit() {
        let spec = sc();
        let net = build_cell_network(&spec, 3, ConductanceScheme::default()).unwrap();
        let m = ResistanceMetric::new(&net, SolverOptions::default()).unwrap();
        let sk = build_skeleton(&spec, 3, 1).unwrap();
        let x = 0;
        let a = annulus_resistance(&net, m.normalization(), &sk, x, 1.0 / 9.0, 0.2).unwrap();
        let b = annulus_resistance(&net, m.normalization(), &sk, x, 1.0 / 3.0, 0.2).unwrap();
        assert!(a.resistance <= b.resistance);
        // Geodesic distances from the origin corner never exceed 2.
        assert!(annulus_resistance(&net, m.normalization(), &sk, x, 2.5, 0.2).is_err());
        assert!(annulus_resistance(&net, m.normalization(), &sk, x, 0.0, 0.2).is_err());
        let fit = fit_theta(&net, &m, &sk, 0.2, 60, 0.0, 3).unwrap();
        assert!(fit.slope > 0.0 && fit.bracket[0] <= fit.bracket[1]);
        assert!(fit_theta(&net, &m, &sk, 0.2, 1, 0.0, 3).is_err());
    }
}
