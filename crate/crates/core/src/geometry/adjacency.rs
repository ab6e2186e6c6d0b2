use num_bigint::BigInt;
use serde::Serialize;

use super::{CellLattice, Rational, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ContactKind {
    Segment,
    Point,
}

/// Two distinct same-level cells whose squares meet. `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contact {
    pub a: usize,
    pub b: usize,
    pub kind: ContactKind,
    /// Overlap length in lattice units (0 for a point contact).
    pub overlap: i64,
}

/// Contact with words and exact overlap length.
#[derive(Clone, Debug, PartialEq)]
pub struct AdjacencyRecord {
    pub first: Word,
    pub second: Word,
    pub kind: ContactKind,
    pub overlap_length: Rational,
}

impl AdjacencyRecord {
    pub fn from_contact(lat: &CellLattice, c: &Contact) -> Self {
        AdjacencyRecord {
            first: lat.word(c.a),
            second: lat.word(c.b),
            kind: c.kind,
            overlap_length: Rational::new(BigInt::from(c.overlap), BigInt::from(lat.scale())),
        }
    }
}

/// Classifies the intersection of two non-overlapping squares of side `s`.
pub(crate) fn classify(p: [i64; 2], q: [i64; 2], s: i64) -> Option<(ContactKind, i64)> {
    let dx = (p[0] - q[0]).abs();
    let dy = (p[1] - q[1]).abs();
    if dx > s || dy > s {
        return None;
    }
    match (dx == s, dy == s) {
        (true, true) => Some((ContactKind::Point, 0)),
        (true, false) => Some((ContactKind::Segment, s - dy)),
        (false, true) => Some((ContactKind::Segment, s - dx)),
        // Overlapping interiors; never happens for a valid carpet.
        (false, false) => None,
    }
}

/// All intersecting pairs of distinct level-`n` cells, sorted by `(a, b)`.
pub fn cell_adjacency(lat: &CellLattice) -> Vec<Contact> {
    let s = lat.side();
    let mut out = Vec::new();
    for a in 0..lat.len() {
        let p = lat.origin(a);
        let mut local: Vec<Contact> = lat
            .nearby(p, 1)
            .filter(|&b| b > a)
            .filter_map(|b| classify(p, lat.origin(b), s).map(|(kind, overlap)| Contact { a, b, kind, overlap }))
            .collect();
        local.sort_unstable_by_key(|c| c.b);
        out.extend(local);
    }
    out
}
