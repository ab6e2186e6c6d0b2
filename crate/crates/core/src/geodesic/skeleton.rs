use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{CarpetError, Result};
use crate::geometry::{CellLattice, Rational, UscSpec};

/// Union of the boundaries of all level-`m` squares as a weighted graph.
///
/// Coordinates are integers with the unit square equal to `[0, scale]²`.
/// Vertices are every square corner plus the points of the global grid of
/// spacing `h` that lie on a boundary segment. All edges are axis-parallel, so
/// path lengths are exact integers.
#[derive(Clone, Debug)]
pub struct Skeleton {
    level: u32,
    scale: i64,
    spacing: i64,
    points: Vec<[i64; 2]>,
    index: HashMap<[i64; 2], u32>,
    adj: Vec<Vec<(u32, i64)>>,
    /// Merged segments per horizontal line (`y ↦ [x0, x1]`) and vertical line.
    horizontal: HashMap<i64, Vec<[i64; 2]>>,
    vertical: HashMap<i64, Vec<[i64; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Snap {
    pub vertex: usize,
    /// Euclidean distance from the requested point to the vertex.
    pub error: f64,
}

/// Skeleton with `h = k^{-m}/subdivision`; `subdivision = k` gives the usual `k^{-m-1}`.
pub fn build_skeleton(spec: &UscSpec, m: u32, subdivision: u32) -> Result<Skeleton> {
    if subdivision == 0 {
        return Err(CarpetError::InvalidParameter("subdivision must be positive".into()));
    }
    let lat = CellLattice::new(spec, m)?;
    Skeleton::from_lattice(&lat, subdivision)
}

fn merge(mut iv: Vec<[i64; 2]>) -> Vec<[i64; 2]> {
    iv.sort_unstable();
    let mut out: Vec<[i64; 2]> = Vec::with_capacity(iv.len());
    for s in iv {
        match out.last_mut() {
            Some(last) if s[0] <= last[1] => last[1] = last[1].max(s[1]),
            _ => out.push(s),
        }
    }
    out
}

impl Skeleton {
    pub fn from_lattice(lat: &CellLattice, subdivision: u32) -> Result<Self> {
        let sub = subdivision as i64;
        let scale = lat.scale().checked_mul(sub).filter(|s| *s < (1 << 52)).ok_or(CarpetError::Overflow(lat.level()))?;
        let side = lat.side() * sub;
        let spacing = lat.side();

        let mut h_raw: HashMap<i64, Vec<[i64; 2]>> = HashMap::new();
        let mut v_raw: HashMap<i64, Vec<[i64; 2]>> = HashMap::new();
        let mut h_pts: HashMap<i64, Vec<i64>> = HashMap::new();
        let mut v_pts: HashMap<i64, Vec<i64>> = HashMap::new();
        for o in lat.origins() {
            let (x, y) = (o[0] * sub, o[1] * sub);
            for yy in [y, y + side] {
                h_raw.entry(yy).or_default().push([x, x + side]);
                h_pts.entry(yy).or_default().extend([x, x + side]);
            }
            for xx in [x, x + side] {
                v_raw.entry(xx).or_default().push([y, y + side]);
                v_pts.entry(xx).or_default().extend([y, y + side]);
            }
        }
        let horizontal: HashMap<i64, Vec<[i64; 2]>> = h_raw.into_iter().map(|(c, iv)| (c, merge(iv))).collect();
        let vertical: HashMap<i64, Vec<[i64; 2]>> = v_raw.into_iter().map(|(c, iv)| (c, merge(iv))).collect();

        let mut sk = Skeleton {
            level: lat.level(),
            scale,
            spacing,
            points: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
            horizontal: HashMap::new(),
            vertical: HashMap::new(),
        };
        // Deterministic line order keeps vertex numbering reproducible.
        let mut hkeys: Vec<i64> = horizontal.keys().copied().collect();
        hkeys.sort_unstable();
        for y in hkeys {
            sk.add_line(&horizontal[&y], h_pts.remove(&y).unwrap_or_default(), |t| [t, y]);
        }
        let mut vkeys: Vec<i64> = vertical.keys().copied().collect();
        vkeys.sort_unstable();
        for x in vkeys {
            sk.add_line(&vertical[&x], v_pts.remove(&x).unwrap_or_default(), |t| [x, t]);
        }
        sk.horizontal = horizontal;
        sk.vertical = vertical;
        Ok(sk)
    }

    fn vertex(&mut self, p: [i64; 2]) -> u32 {
        if let Some(&v) = self.index.get(&p) {
            return v;
        }
        let v = self.points.len() as u32;
        self.points.push(p);
        self.adj.push(Vec::new());
        self.index.insert(p, v);
        v
    }

    fn add_line(&mut self, segments: &[[i64; 2]], mut marks: Vec<i64>, at: impl Fn(i64) -> [i64; 2]) {
        let h = self.spacing;
        for s in segments {
            let first = s[0].div_euclid(h) + 1;
            let last = (s[1] - 1).div_euclid(h);
            marks.extend((first..=last).map(|j| j * h));
        }
        marks.sort_unstable();
        marks.dedup();
        let mut seg = 0;
        let mut prev: Option<(i64, u32)> = None;
        for t in marks {
            while seg < segments.len() && segments[seg][1] < t {
                seg += 1;
                prev = None;
            }
            let v = self.vertex(at(t));
            if let Some((pt, pv)) = prev {
                if pt >= segments[seg][0] {
                    self.adj[pv as usize].push((v, t - pt));
                    self.adj[v as usize].push((pv, t - pt));
                }
            }
            prev = Some((t, v));
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Integer units per unit length.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Grid spacing `h` as a fraction of the unit.
    pub fn spacing(&self) -> f64 {
        self.spacing as f64 / self.scale as f64
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn point_units(&self, v: usize) -> [i64; 2] {
        self.points[v]
    }

    pub fn point(&self, v: usize) -> [f64; 2] {
        let p = self.points[v];
        [p[0] as f64 / self.scale as f64, p[1] as f64 / self.scale as f64]
    }

    pub fn vertex_at_units(&self, p: [i64; 2]) -> Option<usize> {
        self.index.get(&p).map(|&v| v as usize)
    }

    /// Vertex at an exact rational point, if the point is a vertex.
    pub fn vertex_at(&self, p: &[Rational; 2]) -> Option<usize> {
        let s = Rational::from_integer(BigInt::from(self.scale));
        let to = |v: &Rational| {
            let t = v * &s;
            t.is_integer().then(|| num_traits::ToPrimitive::to_i64(&t.to_integer())).flatten()
        };
        self.vertex_at_units([to(&p[0])?, to(&p[1])?])
    }

    /// Nearest vertex to a floating point.
    pub fn snap(&self, p: [f64; 2]) -> Snap {
        let u = [p[0] * self.scale as f64, p[1] * self.scale as f64];
        let (vertex, d2) = self
            .points
            .iter()
            .enumerate()
            .map(|(i, q)| (i, (q[0] as f64 - u[0]).powi(2) + (q[1] as f64 - u[1]).powi(2)))
            .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
        Snap { vertex, error: d2.sqrt() / self.scale as f64 }
    }

    /// Whether the exact point lies on a boundary segment.
    pub fn contains(&self, p: &[Rational; 2]) -> bool {
        let s = Rational::from_integer(BigInt::from(self.scale));
        let (x, y) = (&p[0] * &s, &p[1] * &s);
        let on = |lines: &HashMap<i64, Vec<[i64; 2]>>, fixed: &Rational, free: &Rational| {
            if !fixed.is_integer() {
                return false;
            }
            let Some(c) = num_traits::ToPrimitive::to_i64(&fixed.to_integer()) else { return false };
            lines.get(&c).is_some_and(|segs| {
                segs.iter().any(|sg| {
                    free >= &Rational::from_integer(BigInt::from(sg[0]))
                        && free <= &Rational::from_integer(BigInt::from(sg[1]))
                })
            })
        };
        on(&self.horizontal, &y, &x) || on(&self.vertical, &x, &y)
    }

    /// Maximal boundary segments as exact endpoints.
    pub fn segments(&self) -> Vec<[[Rational; 2]; 2]> {
        let s = BigInt::from(self.scale);
        let r = |v: i64| Rational::new(BigInt::from(v), s.clone());
        let mut out = Vec::new();
        let mut hk: Vec<_> = self.horizontal.keys().copied().collect();
        hk.sort_unstable();
        for y in hk {
            for sg in &self.horizontal[&y] {
                out.push([[r(sg[0]), r(y)], [r(sg[1]), r(y)]]);
            }
        }
        let mut vk: Vec<_> = self.vertical.keys().copied().collect();
        vk.sort_unstable();
        for x in vk {
            for sg in &self.vertical[&x] {
                out.push([[r(x), r(sg[0])], [r(x), r(sg[1])]]);
            }
        }
        out
    }

    /// Shortest path lengths from `source`, in integer units; `None` when unreachable.
    pub fn distances_units(&self, source: usize) -> Vec<Option<i64>> {
        let mut dist = vec![i64::MAX; self.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0i64, source as u32)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v as usize] {
                continue;
            }
            for &(w, len) in &self.adj[v as usize] {
                let nd = d + len;
                if nd < dist[w as usize] {
                    dist[w as usize] = nd;
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        dist.into_iter().map(|d| (d != i64::MAX).then_some(d)).collect()
    }

    /// Shortest path lengths from `source` as fractions of the unit.
    pub fn distances(&self, source: usize) -> Vec<f64> {
        self.distances_units(source)
            .into_iter()
            .map(|d| d.map_or(f64::INFINITY, |d| d as f64 / self.scale as f64))
            .collect()
    }

    pub fn path_length(&self, a: usize, b: usize) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        self.distances_units(a)[b].map(|d| d as f64 / self.scale as f64).ok_or(CarpetError::Unreachable)
    }

    /// One shortest vertex path from `a` to `b`, both ends included.
    pub fn path(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        let dist = self.distances_units(a);
        dist[b].ok_or(CarpetError::Unreachable)?;
        let mut out = vec![b];
        let mut v = b;
        while v != a {
            let dv = dist[v].expect("on a shortest path");
            // Lengths are exact, so some neighbour closes the gap exactly.
            v = self.adj[v]
                .iter()
                .find(|&&(w, len)| dist[w as usize] == Some(dv - len))
                .map(|&(w, _)| w as usize)
                .expect("predecessor exists");
            out.push(v);
        }
        out.reverse();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_rational;
    use crate::geometry::spec::tests::sc;

    fn pt(x: &str, y: &str) -> [Rational; 2] {
        [parse_rational(x).unwrap(), parse_rational(y).unwrap()]
    }

    #[test]
    fn path_realises_the_distance() {
        let sk = build_skeleton(&sc(), 2, 3).unwrap();
        let a = sk.vertex_at(&pt("0", "0")).unwrap();
        let b = sk.vertex_at(&pt("1", "1")).unwrap();
        let path = sk.path(a, b).unwrap();
        assert_eq!((path[0], *path.last().unwrap()), (a, b));
        let len: i64 = path
            .windows(2)
            .map(|w| {
                let (p, q) = (sk.point_units(w[0]), sk.point_units(w[1]));
                (p[0] - q[0]).abs() + (p[1] - q[1]).abs()
            })
            .sum();
        assert_eq!(Some(len), sk.distances_units(a)[b]);
        assert_eq!(sk.path(a, a).unwrap(), vec![a]);
    }

    #[test]
    fn carpet_level_one_has_square_and_hole() {
        let sk = build_skeleton(&sc(), 1, 3).unwrap();
        for p in [pt("0", "0"), pt("1", "1"), pt("1/2", "0"), pt("1/3", "1/2"), pt("1/2", "2/3")] {
            assert!(sk.contains(&p), "{p:?}");
        }
        assert!(!sk.contains(&pt("1/2", "1/2")));
        assert!(!sk.contains(&pt("1/6", "1/2")));
        // 4x4 corners plus two grid points on each of the 24 unit edges.
        assert_eq!(sk.len(), 16 + 48);
        assert_eq!(sk.n_edges(), 24 * 3);
    }

    #[test]
    fn skeletons_nest() {
        let a = build_skeleton(&sc(), 1, 3).unwrap();
        let b = build_skeleton(&sc(), 2, 3).unwrap();
        for [p, q] in a.segments() {
            let mid = [(&p[0] + &q[0]) / Rational::from_integer(2.into()), (&p[1] + &q[1]) / Rational::from_integer(2.into())];
            assert!(b.contains(&p) && b.contains(&q) && b.contains(&mid));
        }
        for v in 0..a.len() {
            let u = a.point_units(v);
            let s = BigInt::from(a.scale());
            let p = [Rational::new(u[0].into(), s.clone()), Rational::new(u[1].into(), s)];
            assert!(b.vertex_at(&p).is_some());
        }
    }

    #[test]
    fn boundary_edge_is_straight() {
        let sk = build_skeleton(&sc(), 2, 3).unwrap();
        let a = sk.vertex_at(&pt("0", "0")).unwrap();
        let b = sk.vertex_at(&pt("1", "0")).unwrap();
        let c = sk.vertex_at(&pt("1", "1")).unwrap();
        assert_eq!(sk.path_length(a, b).unwrap(), 1.0);
        assert_eq!(sk.path_length(a, c).unwrap(), 2.0);
        assert_eq!(sk.path_length(a, a).unwrap(), 0.0);
    }
}
