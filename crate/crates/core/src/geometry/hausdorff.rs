use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::{CellLattice, Rational, UscSpec};
use crate::error::{CarpetError, Result};

/// Bracket `[lo, hi]` for the Hausdorff distance between two carpets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HausdorffInterval {
    pub level: u32,
    pub lo: f64,
    pub hi: f64,
    /// `lo²`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub lo_squared: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl HausdorffInterval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v + 1e-12 && v <= self.hi + 1e-12
    }
}

/// Brackets `δ(K_a, K_b)` from the level-`m` square unions.
///
/// Every cell corner lies in its carpet, so the largest distance from a corner
/// of one union to the other union is a lower bound. Every point of a carpet is
/// within `s/√2` of a corner of its cell and every point of a union is within
/// `s/2` of the other carpet's cell boundary (`s = k^{-m}`), which gives the
/// upper bound `lo + s(1/√2 + 1/2)`.
pub fn hausdorff_distance(a: &UscSpec, b: &UscSpec, m: u32) -> Result<HausdorffInterval> {
    if a.k() != b.k() {
        return Err(CarpetError::InvalidParameter("carpets must share k".into()));
    }
    let la = CellLattice::new(a, m)?;
    let lb = CellLattice::new(b, m)?;
    let t = la.scale().lcm(&lb.scale());
    let t = if t > (1i64 << 52) { return Err(CarpetError::Overflow(m)) } else { t };
    let side = t / (a.k() as i64).pow(m);
    let ua = Union::new(&la, t / la.scale(), side);
    let ub = Union::new(&lb, t / lb.scale(), side);
    let d = ua.directed_to(&ub).max(ub.directed_to(&ua));
    let lo_squared = Rational::new(BigInt::from(d), BigInt::from(t as i128 * t as i128));
    let lo = (d as f64).sqrt() / t as f64;
    let cell = 1.0 / (a.k() as f64).powi(m as i32);
    Ok(HausdorffInterval { level: m, lo, hi: lo + cell * (std::f64::consts::FRAC_1_SQRT_2 + 0.5), lo_squared })
}

struct Union {
    side: i64,
    origins: Vec<[i64; 2]>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    extent: i64,
}

impl Union {
    fn new(lat: &CellLattice, factor: i64, side: i64) -> Self {
        let origins: Vec<[i64; 2]> = lat.origins().iter().map(|o| [o[0] * factor, o[1] * factor]).collect();
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, o) in origins.iter().enumerate() {
            buckets.entry((o[0] / side, o[1] / side)).or_default().push(i);
        }
        Union { side, origins, buckets, extent: lat.scale() * factor / side + 1 }
    }

    fn corners(&self) -> Vec<[i64; 2]> {
        let s = self.side;
        let set: BTreeSet<[i64; 2]> = self
            .origins
            .iter()
            .flat_map(|o| [*o, [o[0] + s, o[1]], [o[0], o[1] + s], [o[0] + s, o[1] + s]])
            .collect();
        set.into_iter().collect()
    }

    /// Squared distance from `p` to the union.
    fn distance_sq(&self, p: [i64; 2]) -> i128 {
        let s = self.side;
        let b = (p[0].div_euclid(s), p[1].div_euclid(s));
        let mut best: Option<i128> = None;
        for r in 0..=self.extent + 1 {
            for dx in -r..=r {
                for dy in -r..=r {
                    if dx.abs().max(dy.abs()) != r {
                        continue;
                    }
                    for &i in self.buckets.get(&(b.0 + dx, b.1 + dy)).into_iter().flatten() {
                        let o = self.origins[i];
                        let gx = (o[0] - p[0]).max(p[0] - o[0] - s).max(0) as i128;
                        let gy = (o[1] - p[1]).max(p[1] - o[1] - s).max(0) as i128;
                        let d = gx * gx + gy * gy;
                        best = Some(best.map_or(d, |x| x.min(d)));
                    }
                }
            }
            // Squares in later rings are at least r·s away.
            if let Some(d) = best {
                let reach = r as i128 * s as i128;
                if reach * reach >= d {
                    break;
                }
            }
        }
        best.unwrap_or(i128::MAX)
    }

    fn directed_to(&self, other: &Union) -> i128 {
        let corners = self.corners();
        crate::par::map(&corners, |&p| other.distance_sq(p)).into_iter().max().unwrap_or(0)
    }
}
