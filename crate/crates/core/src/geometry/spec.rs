use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{common_denominator, parse_rational, scaled_int, to_i64};
use super::{Rational, Symmetry};
use crate::error::{CarpetError, Result};

/// IFS data of a carpet: `N` maps `x ↦ x/k + c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct UscSpec {
    k: u32,
    offsets: Vec<[Rational; 2]>,
    /// Whether the first `4(k-1)` maps follow the counter-clockwise boundary numbering.
    boundary_numbered: bool,
    /// Lattice unit: lcm of `k` and all offset denominators.
    unit: i64,
    scaled: Vec<[i64; 2]>,
}

impl UscSpec {
    /// Builds a spec, checking only that every square lies in the unit square.
    pub fn new(k: u32, offsets: Vec<[Rational; 2]>) -> Result<Self> {
        if k < 2 {
            return Err(CarpetError::InvalidParameter(format!("k = {k} must be at least 2")));
        }
        if offsets.is_empty() {
            return Err(CarpetError::InvalidParameter("no offsets".into()));
        }
        let hi = Rational::one() - Rational::new(BigInt::one(), BigInt::from(k));
        for (i, c) in offsets.iter().enumerate() {
            let bad = c.iter().any(|v| v < &Rational::zero() || v > &hi);
            if bad {
                return Err(CarpetError::OffsetOutOfRange {
                    index: i + 1,
                    x: c[0].to_string(),
                    y: c[1].to_string(),
                });
            }
        }
        let unit_big = common_denominator(&BigInt::from(k), offsets.iter().flatten());
        let unit = to_i64(&unit_big)
            .filter(|u| *u < (1i64 << 40))
            .ok_or(CarpetError::Overflow(1))?;
        let scaled = offsets
            .iter()
            .map(|c| {
                [
                    scaled_int(&c[0], &unit_big).expect("fits"),
                    scaled_int(&c[1], &unit_big).expect("fits"),
                ]
            })
            .collect();
        let mut spec = UscSpec { k, offsets, boundary_numbered: false, unit, scaled };
        spec.boundary_numbered = spec.ring_positions().iter().enumerate().all(|(i, p)| spec.scaled.get(i) == Some(p));
        Ok(spec)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_maps(&self) -> usize {
        self.offsets.len()
    }

    pub fn offsets(&self) -> &[[Rational; 2]] {
        &self.offsets
    }

    pub fn offsets_f64(&self) -> Vec<[f64; 2]> {
        let u = self.unit as f64;
        self.scaled.iter().map(|c| [c[0] as f64 / u, c[1] as f64 / u]).collect()
    }

    /// Lattice unit `L`; offsets times `L` are integers and `L` is a multiple of `k`.
    pub fn unit(&self) -> i64 {
        self.unit
    }

    /// Offsets in units of `1/L`.
    pub fn scaled_offsets(&self) -> &[[i64; 2]] {
        &self.scaled
    }

    pub fn boundary_numbered(&self) -> bool {
        self.boundary_numbered
    }

    /// Hausdorff dimension `log N / log k`.
    pub fn hausdorff_dim(&self) -> f64 {
        (self.n_maps() as f64).ln() / (self.k as f64).ln()
    }

    /// Scaled origins of the `4(k-1)` boundary squares in boundary order:
    /// along the bottom from `q1`, up the right side from `q2`, along the top
    /// from `q3`, down the left side from `q4`.
    pub(crate) fn ring_positions(&self) -> Vec<[i64; 2]> {
        let s = self.unit / self.k as i64;
        let far = self.unit - s;
        let k = self.k as i64;
        let mut out = Vec::with_capacity(4 * (k as usize - 1));
        for i in 0..k - 1 {
            out.push([i * s, 0]);
        }
        for i in 0..k - 1 {
            out.push([far, i * s]);
        }
        for i in 0..k - 1 {
            out.push([far - i * s, far]);
        }
        for i in 0..k - 1 {
            out.push([0, far - i * s]);
        }
        out
    }

    /// Moves the boundary squares to the front in boundary order, when all of
    /// them are present. Interior maps keep their relative order. Returns
    /// whether the numbering now holds.
    pub fn canonicalize(&mut self) -> bool {
        let ring = self.ring_positions();
        let mut idx = Vec::with_capacity(self.n_maps());
        for p in &ring {
            match self.scaled.iter().position(|c| c == p) {
                Some(i) => idx.push(i),
                None => {
                    self.boundary_numbered = false;
                    return false;
                }
            }
        }
        for i in 0..self.n_maps() {
            if !idx.contains(&i) {
                idx.push(i);
            }
        }
        self.offsets = idx.iter().map(|&i| self.offsets[i].clone()).collect();
        self.scaled = idx.iter().map(|&i| self.scaled[i]).collect();
        self.boundary_numbered = true;
        true
    }

    /// Same spec with maps reordered so that new map `j` is old map `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        UscSpec::new(self.k, perm.iter().map(|&i| self.offsets[i].clone()).collect())
    }

    /// Side length of a level-1 square in lattice units.
    pub(crate) fn side(&self) -> i64 {
        self.unit / self.k as i64
    }

    /// Config text that round-trips through [`parse_spec`].
    pub fn to_config(&self) -> String {
        let mut s = format!("k = {}\nn_maps = {}\noffsets = [\n", self.k, self.n_maps());
        for c in &self.offsets {
            s.push_str(&format!("  [\"{}\", \"{}\"],\n", c[0], c[1]));
        }
        s.push_str("]\n");
        s
    }
}

#[derive(Deserialize)]
struct RawConfig {
    k: Option<u32>,
    n_maps: Option<usize>,
    offsets: Option<Vec<[String; 2]>>,
    family: Option<String>,
    z: Option<String>,
}

/// Parses a TOML config with `k`, `n_maps` and `offsets = [["p/q","p/q"], …]`,
/// or `family = "kz"` with `z = "p/q"`. The boundary squares are moved to the
/// front in boundary order when the spec allows it.
pub fn parse_spec(text: &str) -> Result<UscSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CarpetError::Config(e.to_string()))?;
    if let Some(family) = raw.family {
        if family != "kz" {
            return Err(CarpetError::Config(format!("unknown family `{family}`")));
        }
        let z = raw.z.ok_or_else(|| CarpetError::Config("family kz needs `z`".into()))?;
        return crate::convergence::family_kz(&parse_rational(&z)?);
    }
    let k = raw.k.ok_or_else(|| CarpetError::Config("missing `k`".into()))?;
    let offsets = raw.offsets.ok_or_else(|| CarpetError::Config("missing `offsets`".into()))?;
    if let Some(n) = raw.n_maps {
        if n != offsets.len() {
            return Err(CarpetError::OffsetCount { expected: n, found: offsets.len() });
        }
    }
    let offsets = offsets
        .iter()
        .map(|[x, y]| Ok([parse_rational(x)?, parse_rational(y)?]))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = UscSpec::new(k, offsets)?;
    spec.canonicalize();
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn ok(detail: impl Into<String>) -> Self {
        Check { pass: true, detail: detail.into() }
    }
    fn fail(detail: impl Into<String>) -> Self {
        Check { pass: false, detail: detail.into() }
    }
}

/// Outcome of checking the four defining conditions of a carpet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub non_overlapping: Check,
    pub connectivity: Check,
    pub symmetry: Check,
    pub boundary_included: Check,
    /// `4(k-1) ≤ N ≤ k²-1`; informational, implied by the four conditions.
    pub cardinality: Check,
    pub boundary_numbered: bool,
}

impl ValidationReport {
    /// All four defining conditions hold.
    pub fn is_valid(&self) -> bool {
        self.non_overlapping.pass && self.connectivity.pass && self.symmetry.pass && self.boundary_included.pass
    }

    pub fn failed(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, c) in [
            ("non_overlapping", &self.non_overlapping),
            ("connectivity", &self.connectivity),
            ("symmetry", &self.symmetry),
            ("boundary_included", &self.boundary_included),
        ] {
            if !c.pass {
                out.push(name);
            }
        }
        out
    }
}

pub fn validate_usc(spec: &UscSpec) -> ValidationReport {
    let c = spec.scaled_offsets();
    let s = spec.side();
    let l = spec.unit();
    let n = c.len();

    let mut overlaps = Vec::new();
    let mut dsu = Dsu::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let dx = (c[i][0] - c[j][0]).abs();
            let dy = (c[i][1] - c[j][1]).abs();
            if dx < s && dy < s {
                overlaps.push((i + 1, j + 1));
            }
            if dx <= s && dy <= s {
                dsu.union(i, j);
            }
        }
    }
    let non_overlapping = if overlaps.is_empty() {
        Check::ok("square interiors pairwise disjoint")
    } else {
        Check::fail(format!("overlapping interiors: {:?}", overlaps))
    };
    let components = dsu.components();
    let connectivity = if components == 1 {
        Check::ok("square union connected")
    } else {
        Check::fail(format!("{components} components"))
    };

    let mut sorted: Vec<[i64; 2]> = c.to_vec();
    sorted.sort_unstable();
    let mut broken = Vec::new();
    for g in Symmetry::ALL {
        let mut img: Vec<[i64; 2]> = c.iter().map(|&o| g.square_origin(o, s, l)).collect();
        img.sort_unstable();
        if img != sorted {
            broken.push(g.name());
        }
    }
    let symmetry = if broken.is_empty() {
        Check::ok("offset set invariant under all eight symmetries")
    } else {
        Check::fail(format!("not invariant under {:?}", broken))
    };

    let mut bottom: Vec<(i64, i64)> = c.iter().filter(|o| o[1] == 0).map(|o| (o[0], o[0] + s)).collect();
    bottom.sort_unstable();
    let mut reach = 0;
    for (a, b) in &bottom {
        if *a > reach {
            break;
        }
        reach = reach.max(*b);
    }
    let boundary_included = if reach >= l {
        Check::ok(format!("bottom edge covered by {} squares", bottom.len()))
    } else {
        Check::fail(format!("bottom edge covered only up to {}/{}", reach, l))
    };

    let k = spec.k() as usize;
    let lo = 4 * (k - 1);
    let hi = k * k - 1;
    let cardinality = if (lo..=hi).contains(&n) {
        Check::ok(format!("{lo} <= N = {n} <= {hi}"))
    } else {
        Check::fail(format!("N = {n} outside [{lo}, {hi}]"))
    };

    ValidationReport {
        non_overlapping,
        connectivity,
        symmetry,
        boundary_included,
        cardinality,
        boundary_numbered: spec.boundary_numbered(),
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&i| self.find(i) == i).count()
    }
}
