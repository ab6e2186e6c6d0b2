use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::SquareUnion;
use crate::convergence::{FamilyParam, FamilySpec, Skipped};
use crate::error::{CarpetError, Result};
use crate::geometry::{cell_adjacency, cell_map, hausdorff_distance, CellLattice, ContactKind, HausdorffInterval, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContactTrend {
    ToZero,
    BoundedBelow,
    Inconclusive,
}

/// Distances in the members' square unions between the two preimages of one
/// contact point of the limit.
#[derive(Clone, Debug, Serialize)]
pub struct ContactSequence {
    /// Words of the two limit cells (1-based display).
    pub cells: [String; 2],
    pub kind: ContactKind,
    /// Contact point in the limit, as exact fractions.
    pub point: [String; 2],
    pub values: Vec<f64>,
    pub trend: ContactTrend,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquicontinuityReport {
    pub level: u32,
    pub threshold: f64,
    /// `k^{-m-1}`.
    pub spacing: f64,
    pub members: Vec<FamilyParam>,
    pub skipped: Vec<Skipped>,
    /// Hausdorff brackets of each member against the limit.
    pub hausdorff: Vec<HausdorffInterval>,
    pub converging: bool,
    pub contacts: Vec<ContactSequence>,
    /// Every sequence tends to zero.
    pub equicontinuous: bool,
    /// Number of sequences bounded below by the threshold.
    pub bounded_below: usize,
    pub note: &'static str,
}

const SAMPLING_NOTE: &str = "contact points are sampled at segment endpoints, midpoints and point contacts only";

/// Classifies a sequence: `→0` if the last value is at most
/// `max(10h, first/10)`, bounded below if it exceeds `tau`.
pub fn classify_trend(values: &[f64], h: f64, tau: f64) -> ContactTrend {
    let (Some(&first), Some(&last)) = (values.first(), values.last()) else {
        return ContactTrend::Inconclusive;
    };
    if last <= (10.0 * h).max(first / 10.0) {
        ContactTrend::ToZero
    } else if last > tau {
        ContactTrend::BoundedBelow
    } else {
        ContactTrend::Inconclusive
    }
}

fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn show(r: &Rational) -> String {
    r.to_string()
}

/// For every pair of level-`m` limit cells that touch, follows the two
/// preimages of each contact point through the family and measures how far
/// apart they are inside the member's union of level-`m` squares.
pub fn equicontinuity_diagnostic(family: &FamilySpec, m: u32, tau: f64) -> Result<EquicontinuityReport> {
    if m == 0 {
        return Err(CarpetError::InvalidParameter("level must be at least 1".into()));
    }
    let (limit, members, skipped) = family.members()?;
    let hausdorff: Vec<HausdorffInterval> = crate::par::map(&members, |mem| hausdorff_distance(&limit, &mem.spec, m))
        .into_iter()
        .collect::<Result<_>>()?;
    let converging = match (hausdorff.first(), hausdorff.last()) {
        (Some(a), Some(b)) => b.lo <= a.lo || b.lo == 0.0,
        _ => false,
    };
    if !converging {
        return Err(CarpetError::NotConverging("Hausdorff lower bounds grow along the family".into()));
    }

    let lat = CellLattice::new(&limit, m)?;
    let scale = lat.scale();
    // (cell a, cell b, kind, contact point) with the point in limit coordinates.
    let mut probes: Vec<(usize, usize, ContactKind, [Rational; 2])> = Vec::new();
    for c in cell_adjacency(&lat) {
        let (p, q) = (lat.origin(c.a), lat.origin(c.b));
        let s = lat.side();
        let lo = [p[0].max(q[0]), p[1].max(q[1])];
        let hi = [(p[0] + s).min(q[0] + s), (p[1] + s).min(q[1] + s)];
        let mut pts = vec![lo];
        if c.kind == ContactKind::Segment {
            pts.push(hi);
            pts.push([lo[0] + hi[0], lo[1] + hi[1]]);
        }
        for (i, u) in pts.into_iter().enumerate() {
            // The midpoint is stored doubled.
            let den = if i == 2 { 2 * scale } else { scale };
            probes.push((c.a, c.b, c.kind, [frac(u[0], den), frac(u[1], den)]));
        }
    }

    let words: Vec<_> = (0..lat.len()).map(|i| lat.word(i)).collect();
    let limit_maps: Vec<_> = words.iter().map(|w| cell_map(&limit, w)).collect::<Result<_>>()?;
    let per_member = crate::par::map(&members, |mem| -> Result<Vec<f64>> {
        let maps: Vec<_> = words.iter().map(|w| cell_map(&mem.spec, w)).collect::<Result<_>>()?;
        let pairs: Vec<[[Rational; 2]; 2]> = probes
            .iter()
            .map(|(a, b, _, p)| {
                let x = limit_maps[*a].inverse().apply(p);
                let y = limit_maps[*b].inverse().apply(p);
                [maps[*a].apply(&x), maps[*b].apply(&y)]
            })
            .collect();
        let mut den = BigInt::one();
        for pr in &pairs {
            for v in pr.iter().flatten() {
                den = den.lcm(v.denom());
            }
        }
        let den = den.to_i64().filter(|d| *d < (1 << 40)).ok_or(CarpetError::Overflow(m))?;
        let union = SquareUnion::new(&CellLattice::new(&mem.spec, m)?, den)?;
        pairs.iter().map(|[x, y]| union.distance(x, y)).collect()
    });
    let per_member: Vec<Vec<f64>> = per_member.into_iter().collect::<Result<_>>()?;

    let h = 1.0 / (limit.k() as f64).powi(m as i32 + 1);
    let contacts: Vec<ContactSequence> = probes
        .iter()
        .enumerate()
        .map(|(pi, (a, b, kind, p))| {
            let values: Vec<f64> = per_member.iter().map(|v| v[pi]).collect();
            ContactSequence {
                cells: [words[*a].to_string(), words[*b].to_string()],
                kind: *kind,
                point: [show(&p[0]), show(&p[1])],
                trend: classify_trend(&values, h, tau),
                values,
            }
        })
        .collect();
    let equicontinuous = contacts.iter().all(|c| c.trend == ContactTrend::ToZero);
    let bounded_below = contacts.iter().filter(|c| c.trend == ContactTrend::BoundedBelow).count();
    Ok(EquicontinuityReport {
        level: m,
        threshold: tau,
        spacing: h,
        members: members.iter().map(|m| m.param.clone()).collect(),
        skipped,
        hausdorff,
        converging,
        contacts,
        equicontinuous,
        bounded_below,
        note: SAMPLING_NOTE,
    })
}
