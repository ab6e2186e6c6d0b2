use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{CarpetError, Result};
use crate::geometry::{CellLattice, Rational};

/// Union of closed level-`m` squares, with exact straight-line visibility.
///
/// Shortest paths in a union of squares are polygonal with bends only at square
/// corners, so the visibility graph over corners plus the two endpoints gives
/// the exact geodesic distance. Visibility is computed lazily, only for the
/// corners a search actually settles.
#[derive(Debug)]
pub struct SquareUnion {
    scale: i64,
    side: i64,
    origins: Vec<[i64; 2]>,
    /// Squares whose closed extent meets each `side × side` bucket.
    buckets: HashMap<[i64; 2], Vec<u32>>,
    corners: Vec<[i64; 2]>,
    /// Visible corners of each corner with Euclidean lengths in units.
    visible: Vec<OnceLock<Vec<(usize, f64)>>>,
}

/// `num/den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Frac(i128, i128);

impl Frac {
    fn cmp(self, o: Frac) -> Ordering {
        (self.0 * o.1).cmp(&(o.0 * self.1))
    }
}

impl SquareUnion {
    /// Squares of `lat`; `extra_denominator` is refined into the unit so that
    /// query points with that denominator land on integer coordinates.
    pub fn new(lat: &CellLattice, extra_denominator: i64) -> Result<Self> {
        let d = extra_denominator.max(1);
        let mult = d / d.gcd(&lat.scale());
        let scale = lat.scale().checked_mul(mult).filter(|s| *s < (1 << 40)).ok_or(CarpetError::Overflow(lat.level()))?;
        let side = lat.side() * mult;
        let origins: Vec<[i64; 2]> = lat.origins().iter().map(|o| [o[0] * mult, o[1] * mult]).collect();
        let mut buckets: HashMap<[i64; 2], Vec<u32>> = HashMap::new();
        for (i, o) in origins.iter().enumerate() {
            for bx in o[0].div_euclid(side)..=(o[0] + side).div_euclid(side) {
                for by in o[1].div_euclid(side)..=(o[1] + side).div_euclid(side) {
                    buckets.entry([bx, by]).or_default().push(i as u32);
                }
            }
        }
        let mut corners: Vec<[i64; 2]> = origins
            .iter()
            .flat_map(|o| [*o, [o[0] + side, o[1]], [o[0] + side, o[1] + side], [o[0], o[1] + side]])
            .collect();
        corners.sort_unstable();
        corners.dedup();
        let visible = (0..corners.len()).map(|_| OnceLock::new()).collect();
        Ok(SquareUnion { scale, side, origins, buckets, corners, visible })
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn n_squares(&self) -> usize {
        self.origins.len()
    }

    /// Converts an exact point to integer units, if it is on the grid.
    pub fn to_units(&self, p: &[Rational; 2]) -> Option<[i64; 2]> {
        let s = Rational::from_integer(BigInt::from(self.scale));
        let f = |v: &Rational| {
            let t = v * &s;
            t.is_integer().then(|| t.to_integer().to_i64()).flatten()
        };
        Some([f(&p[0])?, f(&p[1])?])
    }

    fn bucket(&self, b: [i64; 2]) -> &[u32] {
        self.buckets.get(&b).map_or(&[], Vec::as_slice)
    }

    pub fn contains_units(&self, p: [i64; 2]) -> bool {
        self.bucket([p[0].div_euclid(self.side), p[1].div_euclid(self.side)]).iter().any(|&i| {
            let o = self.origins[i as usize];
            (o[0]..=o[0] + self.side).contains(&p[0]) && (o[1]..=o[1] + self.side).contains(&p[1])
        })
    }

    /// Whether the closed segment `pq` lies inside the union. Walks from `p`,
    /// always jumping to the furthest exit among squares holding the current
    /// point, and stops at the first gap.
    fn sees(&self, p: [i64; 2], q: [i64; 2]) -> bool {
        if p == q {
            return self.contains_units(p);
        }
        let d = [(q[0] - p[0]) as i128, (q[1] - p[1]) as i128];
        let side = self.side as i128;
        let mut t = Frac(0, 1);
        loop {
            let at = |axis: usize| (p[axis] as i128 * t.1 + t.0 * d[axis]).div_euclid(side * t.1) as i64;
            let mut exit: Option<Frac> = None;
            for &i in self.bucket([at(0), at(1)]) {
                let o = self.origins[i as usize];
                let Some((lo, hi)) = clip(p, d, [o[0], o[0] + self.side, o[1], o[1] + self.side]) else {
                    continue;
                };
                if lo.cmp(t) != Ordering::Greater && hi.cmp(t) == Ordering::Greater && exit.map_or(true, |e| hi.cmp(e) == Ordering::Greater) {
                    exit = Some(hi);
                }
            }
            match exit {
                None => return false,
                Some(e) if e.cmp(Frac(1, 1)) != Ordering::Less => return true,
                Some(e) => t = e,
            }
        }
    }

    fn neighbours(&self, v: usize) -> &[(usize, f64)] {
        self.visible[v].get_or_init(|| {
            let c = self.corners[v];
            (0..self.corners.len())
                .filter(|&w| w != v && self.sees(c, self.corners[w]))
                .map(|w| (w, dist(c, self.corners[w])))
                .collect()
        })
    }

    /// Geodesic distance inside the union between two points in units.
    pub fn distance_units(&self, p: [i64; 2], q: [i64; 2]) -> Result<f64> {
        if !self.contains_units(p) || !self.contains_units(q) {
            return Err(CarpetError::InvalidParameter("endpoint outside the square union".into()));
        }
        if p == q {
            return Ok(0.0);
        }
        if self.sees(p, q) {
            return Ok(dist(p, q) / self.scale as f64);
        }
        let n = self.corners.len();
        let mut best = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        for (i, &c) in self.corners.iter().enumerate() {
            if self.sees(p, c) {
                best[i] = dist(p, c);
            }
        }
        // A* with the straight-line distance to `q` as heuristic.
        let to_q: Vec<f64> = self.corners.iter().map(|&c| dist(c, q)).collect();
        let mut answer = f64::INFINITY;
        loop {
            let Some(v) = (0..n)
                .filter(|&i| !done[i] && best[i].is_finite())
                .min_by(|&a, &b| (best[a] + to_q[a]).total_cmp(&(best[b] + to_q[b])))
            else {
                break;
            };
            if best[v] + to_q[v] >= answer {
                break;
            }
            done[v] = true;
            if self.sees(self.corners[v], q) {
                answer = answer.min(best[v] + to_q[v]);
            }
            for &(w, len) in self.neighbours(v) {
                if best[v] + len < best[w] {
                    best[w] = best[v] + len;
                }
            }
        }
        if answer.is_finite() {
            Ok(answer / self.scale as f64)
        } else {
            Err(CarpetError::Unreachable)
        }
    }

    pub fn distance(&self, p: &[Rational; 2], q: &[Rational; 2]) -> Result<f64> {
        let off = || CarpetError::InvalidParameter("point not on the union's grid".into());
        self.distance_units(self.to_units(p).ok_or_else(off)?, self.to_units(q).ok_or_else(off)?)
    }
}

fn dist(p: [i64; 2], q: [i64; 2]) -> f64 {
    ((p[0] - q[0]) as f64).hypot((p[1] - q[1]) as f64)
}

/// Liang–Barsky: parameter interval of `p + t·d`, `t ∈ [0, 1]`, inside the box.
fn clip(p: [i64; 2], d: [i128; 2], b: [i64; 4]) -> Option<(Frac, Frac)> {
    let mut lo = Frac(0, 1);
    let mut hi = Frac(1, 1);
    for axis in 0..2 {
        let (min, max) = (b[2 * axis] as i128, b[2 * axis + 1] as i128);
        let pa = p[axis] as i128;
        if d[axis] == 0 {
            if pa < min || pa > max {
                return None;
            }
            continue;
        }
        let (mut t0, mut t1) = (Frac(min - pa, d[axis]), Frac(max - pa, d[axis]));
        if d[axis] < 0 {
            t0 = Frac(-t0.0, -t0.1);
            t1 = Frac(-t1.0, -t1.1);
            std::mem::swap(&mut t0, &mut t1);
        }
        if t0.cmp(lo) == Ordering::Greater {
            lo = t0;
        }
        if t1.cmp(hi) == Ordering::Less {
            hi = t1;
        }
    }
    (lo.cmp(hi) != Ordering::Greater).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::spec::tests::sc;
    use crate::geometry::parse_rational;

    fn pt(x: &str, y: &str) -> [Rational; 2] {
        [parse_rational(x).unwrap(), parse_rational(y).unwrap()]
    }

    #[test]
    fn straight_when_visible() {
        let u = SquareUnion::new(&CellLattice::new(&sc(), 1).unwrap(), 1).unwrap();
        assert_eq!(u.distance(&pt("0", "0"), &pt("1", "0")).unwrap(), 1.0);
        assert!((u.distance(&pt("0", "0"), &pt("1/3", "1")).unwrap() - (1.0f64 + 1.0 / 9.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn touching_corner_is_not_a_passage() {
        // Two squares meeting at one corner: the diagonal through the
        // shared corner is inside, the other diagonal is not.
        let spec = crate::UscSpec::new(2, vec![pt("0", "0"), pt("1/2", "1/2")]).unwrap();
        let u = SquareUnion::new(&CellLattice::new(&spec, 1).unwrap(), 1).unwrap();
        assert!(u.sees([0, 0], [2, 2]));
        assert!(!u.sees([0, 2], [2, 0]));
    }

    #[test]
    fn detours_round_the_hole() {
        let u = SquareUnion::new(&CellLattice::new(&sc(), 1).unwrap(), 6).unwrap();
        // Across the hole: left-middle to right-middle goes via two hole corners.
        let d = u.distance(&pt("1/3", "1/2"), &pt("2/3", "1/2")).unwrap();
        let want = 2.0 * (1.0f64 / 36.0).sqrt() + 1.0 / 3.0;
        assert!((d - want).abs() < 1e-12, "{d} vs {want}");
        // The diagonal through the hole is blocked.
        assert!((u.distance(&pt("1/3", "1/3"), &pt("2/3", "2/3")).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }
}
