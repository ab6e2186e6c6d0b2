use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Rational, Symmetry, UscSpec, Word};
use crate::error::{CarpetError, Result};

/// Sides of the unit square: bottom, right, top, left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Side {
    Bottom = 1,
    Right = 2,
    Top = 3,
    Left = 4,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Right, Side::Top, Side::Left];

    pub fn from_index(i: usize) -> Option<Side> {
        Side::ALL.get(i.wrapping_sub(1)).copied()
    }
}

/// All level-`n` squares `Ψ_w□` on an integer lattice.
///
/// The unit square is `[0, scale]²` and every cell has side `side`, with
/// `scale = side · k^n`. Cell `i` is the word with index `i` (first letter most
/// significant).
#[derive(Clone, Debug)]
pub struct CellLattice {
    k: u32,
    n_maps: usize,
    level: u32,
    scale: i64,
    side: i64,
    origins: Vec<[i64; 2]>,
    lookup: HashMap<[i64; 2], u32>,
    buckets: HashMap<(i64, i64), Vec<u32>>,
}

impl CellLattice {
    pub fn new(spec: &UscSpec, level: u32) -> Result<Self> {
        Self::with_budget(spec, level, crate::cell_budget())
    }

    pub fn with_budget(spec: &UscSpec, level: u32, budget: u64) -> Result<Self> {
        let n_maps = spec.n_maps();
        let cells = (n_maps as u128).checked_pow(level).unwrap_or(u128::MAX);
        if cells > budget as u128 {
            return Err(CarpetError::BudgetExceeded { level, cells, budget });
        }
        let k = spec.k() as i64;
        let side = spec.side();
        let scale = k
            .checked_pow(level)
            .and_then(|p| p.checked_mul(side))
            .filter(|s| *s < (1i64 << 52))
            .ok_or(CarpetError::Overflow(level))?;
        let shifts = spec.scaled_offsets();
        let mut origins = vec![[0i64, 0i64]];
        for _ in 0..level {
            let mut next = Vec::with_capacity(origins.len() * n_maps);
            for o in &origins {
                for c in shifts {
                    next.push([o[0] * k + c[0], o[1] * k + c[1]]);
                }
            }
            origins = next;
        }
        let mut lookup = HashMap::with_capacity(origins.len());
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::with_capacity(origins.len());
        for (i, o) in origins.iter().enumerate() {
            lookup.insert(*o, i as u32);
            buckets.entry((o[0].div_euclid(side), o[1].div_euclid(side))).or_default().push(i as u32);
        }
        Ok(CellLattice { k: spec.k(), n_maps, level, scale, side, origins, lookup, buckets })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_maps(&self) -> usize {
        self.n_maps
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Length of the unit interval in lattice units.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Cell side in lattice units.
    pub fn side(&self) -> i64 {
        self.side
    }

    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    pub fn origin(&self, cell: usize) -> [i64; 2] {
        self.origins[cell]
    }

    pub fn origins(&self) -> &[[i64; 2]] {
        &self.origins
    }

    pub fn word(&self, cell: usize) -> Word {
        Word::from_index(cell, self.level as usize, self.n_maps)
    }

    pub fn cell_of_word(&self, w: &Word) -> Result<usize> {
        if w.level() != self.level as usize {
            return Err(CarpetError::InvalidParameter(format!(
                "word {w} has level {} but the lattice has level {}",
                w.level(),
                self.level
            )));
        }
        if let Some(&l) = w.letters().iter().find(|&&l| l as usize >= self.n_maps) {
            return Err(CarpetError::LetterOutOfRange { letter: l as usize + 1, n: self.n_maps });
        }
        Ok(w.index(self.n_maps))
    }

    pub fn cell_at_origin(&self, o: [i64; 2]) -> Option<usize> {
        self.lookup.get(&o).map(|&i| i as usize)
    }

    pub fn centre(&self, cell: usize) -> [f64; 2] {
        let o = self.origins[cell];
        let s = self.scale as f64;
        [(o[0] as f64 + self.side as f64 / 2.0) / s, (o[1] as f64 + self.side as f64 / 2.0) / s]
    }

    /// Corner `q_i` of the cell (1 = lower-left, counter-clockwise) in lattice units.
    pub fn corner(&self, cell: usize, i: usize) -> [i64; 2] {
        let o = self.origins[cell];
        let s = self.side;
        match i {
            1 => o,
            2 => [o[0] + s, o[1]],
            3 => [o[0] + s, o[1] + s],
            _ => [o[0], o[1] + s],
        }
    }

    /// Cells whose bucket lies within `radius` buckets of the bucket of `p`.
    pub(crate) fn nearby(&self, p: [i64; 2], radius: i64) -> impl Iterator<Item = usize> + '_ {
        let b = (p[0].div_euclid(self.side), p[1].div_euclid(self.side));
        (-radius..=radius).flat_map(move |dx| {
            (-radius..=radius).flat_map(move |dy| {
                self.buckets.get(&(b.0 + dx, b.1 + dy)).into_iter().flatten().map(|&i| i as usize)
            })
        })
    }

    pub(crate) fn bucket_cells(&self, b: (i64, i64)) -> &[u32] {
        self.buckets.get(&b).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Lowest-index cell whose closed square contains the lattice point.
    pub fn locate_units(&self, p: [i64; 2]) -> Option<usize> {
        self.nearby(p, 1)
            .filter(|&i| {
                let o = self.origins[i];
                (o[0]..=o[0] + self.side).contains(&p[0]) && (o[1]..=o[1] + self.side).contains(&p[1])
            })
            .min()
    }

    /// Lowest-index cell containing a rational point, if any.
    pub fn locate_exact(&self, p: &[Rational; 2]) -> Option<usize> {
        let s = Rational::from_integer(BigInt::from(self.scale));
        let fl = |v: &Rational| (v * &s).floor().to_integer().to_i64();
        let (x, y) = (fl(&p[0])?, fl(&p[1])?);
        let exact = [(&p[0] * &s).is_integer(), (&p[1] * &s).is_integer()];
        if exact[0] && exact[1] {
            return self.locate_units([x, y]);
        }
        // Off-lattice point: a cell contains it iff it contains the enclosing unit box.
        self.nearby([x, y], 1)
            .filter(|&i| {
                let o = self.origins[i];
                let xs = if exact[0] { (o[0]..=o[0] + self.side).contains(&x) } else { x >= o[0] && x < o[0] + self.side };
                let ys = if exact[1] { (o[1]..=o[1] + self.side).contains(&y) } else { y >= o[1] && y < o[1] + self.side };
                xs && ys
            })
            .min()
    }

    /// Lowest-index cell containing a floating point (within half a lattice unit).
    pub fn locate(&self, p: [f64; 2]) -> Option<usize> {
        let s = self.scale as f64;
        let u = [(p[0] * s).round() as i64, (p[1] * s).round() as i64];
        self.locate_units(u).or_else(|| {
            let f = [(p[0] * s).floor() as i64, (p[1] * s).floor() as i64];
            self.locate_units(f)
        })
    }

    /// Cells whose square meets side `L_i`.
    pub fn boundary_cells(&self, side: Side) -> Vec<usize> {
        let s = self.side;
        let top = self.scale;
        (0..self.len())
            .filter(|&i| {
                let o = self.origins[i];
                match side {
                    Side::Bottom => o[1] == 0,
                    Side::Right => o[0] + s == top,
                    Side::Top => o[1] + s == top,
                    Side::Left => o[0] == 0,
                }
            })
            .collect()
    }

    /// `W_{n,i}` as words.
    pub fn boundary_words(&self, side: Side) -> Vec<Word> {
        self.boundary_cells(side).into_iter().map(|i| self.word(i)).collect()
    }

    /// `∂W_n`: cells meeting any side, ascending.
    pub fn all_boundary_cells(&self) -> Vec<usize> {
        let mut v: Vec<usize> = Side::ALL.iter().flat_map(|&s| self.boundary_cells(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Cell permutation induced by a symmetry, or `None` if the square union is
    /// not invariant.
    pub fn symmetry_permutation(&self, g: Symmetry) -> Option<Vec<usize>> {
        self.origins
            .iter()
            .map(|&o| self.cell_at_origin(g.square_origin(o, self.side, self.scale)))
            .collect()
    }

    /// Squared Euclidean distance between two cells, in lattice units.
    pub fn cell_distance_sq(&self, a: usize, b: usize) -> i128 {
        let (p, q) = (self.origins[a], self.origins[b]);
        let gap = |d: i64| (d.abs() - self.side).max(0) as i128;
        let (dx, dy) = (gap(p[0] - q[0]), gap(p[1] - q[1]));
        dx * dx + dy * dy
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::parse_rational;
    use crate::geometry::spec::tests::sc;

    #[test]
    fn level_one_boundary_words() {
        let lat = CellLattice::new(&sc(), 1).unwrap();
        let names: Vec<String> = lat.boundary_words(Side::Bottom).iter().map(|w| w.to_string()).collect();
        assert_eq!(names, vec!["1", "2", "3"]);
        for side in Side::ALL {
            assert_eq!(lat.boundary_cells(side).len(), 3);
        }
        assert_eq!(lat.all_boundary_cells(), (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn symmetry_propagates_to_level_three() {
        let lat = CellLattice::new(&sc(), 3).unwrap();
        for g in Symmetry::ALL {
            let p = lat.symmetry_permutation(g).expect("invariant");
            let mut sorted = p.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..lat.len()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn locate_points() {
        let lat = CellLattice::new(&sc(), 2).unwrap();
        let q = |s: &str| parse_rational(s).unwrap();
        assert_eq!(lat.locate_exact(&[q("0"), q("0")]), Some(0));
        assert_eq!(lat.locate_exact(&[q("1/2"), q("1/2")]), None);
        let c = lat.locate_exact(&[q("1/2"), q("1/20")]).unwrap();
        assert_eq!(lat.word(c).to_string(), "22");
        assert_eq!(lat.locate([0.5, 0.05]), Some(c));
    }

    #[test]
    fn budget_enforced() {
        let e = CellLattice::with_budget(&sc(), 5, 1000).unwrap_err();
        assert!(matches!(e, CarpetError::BudgetExceeded { .. }));
    }
}
