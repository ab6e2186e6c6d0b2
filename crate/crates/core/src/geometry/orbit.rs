use num_traits::Signed;
use num_bigint::BigInt;
use num_traits::One;

use super::{apply_symmetry, Rational, Symmetry, UscSpec};
use crate::error::{CarpetError, Result};

/// Offsets of the `4(k-1)` boundary squares in boundary order.
pub fn boundary_ring(k: u32) -> Vec<[Rational; 2]> {
    let s = |i: i64| Rational::new(BigInt::from(i), BigInt::from(k));
    let far = k as i64 - 1;
    let mut out = Vec::new();
    for i in 0..far {
        out.push([s(i), s(0)]);
    }
    for i in 0..far {
        out.push([s(far), s(i)]);
    }
    for i in 0..far {
        out.push([s(far - i), s(far)]);
    }
    for i in 0..far {
        out.push([s(0), s(far - i)]);
    }
    out
}

/// Offset of the image of the square with offset `c` (side `1/k`) under `g`.
fn image_offset(g: Symmetry, c: &[Rational; 2], k: u32) -> [Rational; 2] {
    let half = Rational::new(BigInt::one(), BigInt::from(2 * k));
    let centre = [&c[0] + &half, &c[1] + &half];
    let img = apply_symmetry(g, &centre);
    [&img[0] - &half, &img[1] - &half]
}

/// Closes `partial` (plus the boundary ring when asked) under the symmetry
/// group. Orbits are appended in group order after the ring; duplicates are
/// dropped.
pub fn complete_symmetry_orbit(partial: &[[Rational; 2]], k: u32, with_ring: bool) -> Result<UscSpec> {
    let mut offsets: Vec<[Rational; 2]> = if with_ring { boundary_ring(k) } else { Vec::new() };
    for c in partial {
        for g in Symmetry::ALL {
            let img = image_offset(g, c, k);
            if !offsets.contains(&img) {
                offsets.push(img);
            }
        }
    }
    let side = Rational::new(BigInt::one(), BigInt::from(k));
    for i in 0..offsets.len() {
        for j in i + 1..offsets.len() {
            let dx = (&offsets[i][0] - &offsets[j][0]).abs();
            let dy = (&offsets[i][1] - &offsets[j][1]).abs();
            if dx < side && dy < side {
                let show = |c: &[Rational; 2]| format!("({}, {})", c[0], c[1]);
                return Err(CarpetError::ClosureOverlap(show(&offsets[i]), show(&offsets[j])));
            }
        }
    }
    let ku = k as usize;
    if offsets.len() < 4 * (ku - 1) || offsets.len() > ku * ku - 1 {
        return Err(CarpetError::InvalidParameter(format!(
            "closure has {} maps, outside [{}, {}]",
            offsets.len(),
            4 * (ku - 1),
            ku * ku - 1
        )));
    }
    UscSpec::new(k, offsets)
}
