use num_traits::One;
use serde::{Deserialize, Serialize};

use super::Rational;

/// An element of the dihedral group of the unit square, `x ↦ A x + b`
/// with `A` a signed permutation matrix and `b ∈ {0,1}²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symmetry {
    Identity,
    /// `(x1, 1 - x2)`
    Vertical,
    /// `(1 - x1, x2)`
    Horizontal,
    /// `(x2, x1)`
    Diagonal,
    /// `(1 - x2, 1 - x1)`
    AntiDiagonal,
    /// `(1 - x2, x1)`
    Rot90,
    Rot180,
    Rot270,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Vertical,
        Symmetry::Horizontal,
        Symmetry::Diagonal,
        Symmetry::AntiDiagonal,
        Symmetry::Rot90,
        Symmetry::Rot180,
        Symmetry::Rot270,
    ];

    /// Linear part (row-major) and translation.
    pub fn matrix(self) -> ([[i64; 2]; 2], [i64; 2]) {
        use Symmetry::*;
        match self {
            Identity => ([[1, 0], [0, 1]], [0, 0]),
            Vertical => ([[1, 0], [0, -1]], [0, 1]),
            Horizontal => ([[-1, 0], [0, 1]], [1, 0]),
            Diagonal => ([[0, 1], [1, 0]], [0, 0]),
            AntiDiagonal => ([[0, -1], [-1, 0]], [1, 1]),
            Rot90 => ([[0, -1], [1, 0]], [1, 0]),
            Rot180 => ([[-1, 0], [0, -1]], [1, 1]),
            Rot270 => ([[0, 1], [-1, 0]], [0, 1]),
        }
    }

    fn from_matrix(m: ([[i64; 2]; 2], [i64; 2])) -> Symmetry {
        *Symmetry::ALL
            .iter()
            .find(|g| g.matrix() == m)
            .expect("closed under composition")
    }

    /// `self ∘ other`.
    pub fn compose(self, other: Symmetry) -> Symmetry {
        let (a, b) = self.matrix();
        let (c, d) = other.matrix();
        let mut m = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * c[0][j] + a[i][1] * c[1][j];
            }
        }
        let t = [
            a[0][0] * d[0] + a[0][1] * d[1] + b[0],
            a[1][0] * d[0] + a[1][1] * d[1] + b[1],
        ];
        Symmetry::from_matrix((m, t))
    }

    pub fn inverse(self) -> Symmetry {
        *Symmetry::ALL
            .iter()
            .find(|g| self.compose(**g) == Symmetry::Identity)
            .expect("group")
    }

    /// Image of an integer point of the square `[0, side]²`.
    pub fn apply_int(self, p: [i64; 2], side: i64) -> [i64; 2] {
        let (a, b) = self.matrix();
        [
            a[0][0] * p[0] + a[0][1] * p[1] + b[0] * side,
            a[1][0] * p[0] + a[1][1] * p[1] + b[1] * side,
        ]
    }

    pub fn apply_f64(self, p: [f64; 2]) -> [f64; 2] {
        let (a, b) = self.matrix();
        [
            a[0][0] as f64 * p[0] + a[0][1] as f64 * p[1] + b[0] as f64,
            a[1][0] as f64 * p[0] + a[1][1] as f64 * p[1] + b[1] as f64,
        ]
    }

    /// Origin of the image of the axis-parallel square `[o, o + s]²` inside `[0, side]²`.
    pub fn square_origin(self, origin: [i64; 2], s: i64, side: i64) -> [i64; 2] {
        let centre2 = [2 * origin[0] + s, 2 * origin[1] + s];
        let img = self.apply_int(centre2, 2 * side);
        [(img[0] - s) / 2, (img[1] - s) / 2]
    }

    pub fn name(self) -> &'static str {
        use Symmetry::*;
        match self {
            Identity => "id",
            Vertical => "v",
            Horizontal => "h",
            Diagonal => "d1",
            AntiDiagonal => "d2",
            Rot90 => "r1",
            Rot180 => "r2",
            Rot270 => "r3",
        }
    }
}

/// Exact image of a rational point.
pub fn apply_symmetry(g: Symmetry, p: &[Rational; 2]) -> [Rational; 2] {
    let (a, b) = g.matrix();
    let one = Rational::one();
    let lin = |row: [i64; 2], t: i64| -> Rational {
        let mut v = Rational::from_integer(t.into()) * &one;
        v += Rational::from_integer(row[0].into()) * &p[0];
        v += Rational::from_integer(row[1].into()) * &p[1];
        v
    };
    [lin(a[0], b[0]), lin(a[1], b[1])]
}
