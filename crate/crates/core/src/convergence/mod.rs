//! Families of carpets and the diagnostics comparing members with their limit.
//!
//! Members are reordered so that map `i` of every member is matched to map `i`
//! of the limit; a level-`n` cell index then names corresponding cells in all
//! of them.

mod expr;
mod family;
mod gamma;
mod measure;
mod resistance;

use serde::Serialize;

pub use family::{family_kz, FamilyParam, FamilySpec, Generator, Member, Skipped};
pub use gamma::{gamma_liminf_check, harmonic_x1, GammaReport, GammaRow};
pub use measure::{builtin_monomials, measure_convergence, MeasureReport, MeasureRow, Monomial};
pub use resistance::{default_grid, resistance_convergence, ConvergenceReport, ConvergenceRow};

pub(crate) fn ser_rational<S: serde::Serializer>(r: &crate::Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Coarse shape of a nonnegative sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SequenceTrend {
    pub first: f64,
    pub last: f64,
    /// `last / first` (0 when both vanish).
    pub ratio: f64,
    /// Every step is nonincreasing.
    pub monotone: bool,
    pub class: TrendClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendClass {
    /// `last/first ≤ 1/5`.
    Decreasing,
    /// `last/first > 1/2`.
    NotDecreasing,
    Inconclusive,
}

pub fn classify_sequence(values: &[f64]) -> SequenceTrend {
    let first = values.first().copied().unwrap_or(0.0);
    let last = values.last().copied().unwrap_or(0.0);
    let ratio = if first == 0.0 {
        if last == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        last / first
    };
    let class = if ratio <= 0.2 {
        TrendClass::Decreasing
    } else if ratio > 0.5 {
        TrendClass::NotDecreasing
    } else {
        TrendClass::Inconclusive
    };
    SequenceTrend { first, last, ratio, monotone: values.windows(2).all(|w| w[1] <= w[0]), class }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_classes() {
        assert_eq!(classify_sequence(&[1.0, 0.5, 0.1]).class, TrendClass::Decreasing);
        assert_eq!(classify_sequence(&[1.0, 0.9, 0.8]).class, TrendClass::NotDecreasing);
        assert_eq!(classify_sequence(&[1.0, 0.3]).class, TrendClass::Inconclusive);
        assert!(classify_sequence(&[0.0, 0.0]).monotone);
        assert_eq!(classify_sequence(&[0.0, 0.0]).class, TrendClass::Decreasing);
    }
}
