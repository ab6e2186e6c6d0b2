use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Rational, UscSpec};
use crate::error::{CarpetError, Result};

/// A finite word over the map alphabet. Letters are stored 0-based and
/// displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<u32>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    /// From 0-based letters.
    pub fn from_letters(letters: Vec<u32>) -> Self {
        Word { letters }
    }

    /// From 1-based letters, as they are written.
    pub fn from_one_based(letters: &[usize], n_maps: usize) -> Result<Self> {
        letters
            .iter()
            .map(|&l| {
                if l == 0 || l > n_maps {
                    Err(CarpetError::LetterOutOfRange { letter: l, n: n_maps })
                } else {
                    Ok(l as u32 - 1)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::from_letters)
    }

    /// Parses `113` (single-digit letters) or `25,3,1`, 1-based.
    pub fn parse(text: &str, n_maps: usize) -> Result<Self> {
        let t = text.trim();
        let t = t.strip_prefix("w:").unwrap_or(t);
        let bad = || CarpetError::InvalidParameter(format!("bad word `{text}`"));
        let letters: Vec<usize> = if t.is_empty() {
            Vec::new()
        } else if t.contains(|c| c == ',' || c == '.') {
            t.split([',', '.']).map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            t.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Word::from_one_based(&letters, n_maps)
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    pub fn level(&self) -> usize {
        self.letters.len()
    }

    pub fn push(&mut self, letter: u32) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Index in `0..N^n`, first letter most significant.
    pub fn index(&self, n_maps: usize) -> usize {
        self.letters.iter().fold(0usize, |acc, &l| acc * n_maps + l as usize)
    }

    pub fn from_index(mut index: usize, level: usize, n_maps: usize) -> Word {
        let mut letters = vec![0u32; level];
        for slot in letters.iter_mut().rev() {
            *slot = (index % n_maps) as u32;
            index /= n_maps;
        }
        Word { letters }
    }

    /// Applies a letter permutation: letter `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Word {
        Word { letters: self.letters.iter().map(|&l| perm[l as usize] as u32).collect() }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.letters.iter().any(|&l| l >= 9);
        let parts: Vec<String> = self.letters.iter().map(|l| (l + 1).to_string()).collect();
        if wide {
            write!(f, "{}", parts.join(","))
        } else {
            write!(f, "{}", parts.concat())
        }
    }
}

/// `x ↦ scale · x + shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub scale: Rational,
    pub shift: [Rational; 2],
}

impl AffineMap {
    pub fn apply(&self, p: &[Rational; 2]) -> [Rational; 2] {
        [&self.scale * &p[0] + &self.shift[0], &self.scale * &p[1] + &self.shift[1]]
    }

    pub fn apply_f64(&self, p: [f64; 2]) -> [f64; 2] {
        let s = super::rational_to_f64(&self.scale);
        [
            s * p[0] + super::rational_to_f64(&self.shift[0]),
            s * p[1] + super::rational_to_f64(&self.shift[1]),
        ]
    }

    /// The image of the unit square as (lower-left corner, side).
    pub fn square(&self) -> ([Rational; 2], Rational) {
        (self.shift.clone(), self.scale.clone())
    }

    /// Inverse map.
    pub fn inverse(&self) -> AffineMap {
        let inv = Rational::one() / &self.scale;
        AffineMap {
            shift: [-(&inv * &self.shift[0]), -(&inv * &self.shift[1])],
            scale: inv,
        }
    }
}

/// `Ψ_w = Ψ_{w_1} ∘ … ∘ Ψ_{w_n}`.
pub fn cell_map(spec: &UscSpec, w: &Word) -> Result<AffineMap> {
    let n = spec.n_maps();
    let inv_k = Rational::new(BigInt::one(), BigInt::from(spec.k()));
    let mut scale = Rational::one();
    let mut shift = [Rational::zero(), Rational::zero()];
    for &l in w.letters() {
        let l = l as usize;
        if l >= n {
            return Err(CarpetError::LetterOutOfRange { letter: l + 1, n });
        }
        let c = &spec.offsets()[l];
        shift[0] += &scale * &c[0];
        shift[1] += &scale * &c[1];
        scale *= &inv_k;
    }
    Ok(AffineMap { scale, shift })
}
