use serde::Serialize;

use super::{FamilyParam, FamilySpec, Skipped};
use crate::error::Result;
use crate::geometry::CellLattice;
use crate::par::pairwise_sum;

/// `x₁^a · x₂^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub x1: u32,
    pub x2: u32,
}

impl Monomial {
    pub const fn new(x1: u32, x2: u32) -> Self {
        Monomial { x1, x2 }
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        p[0].powi(self.x1 as i32) * p[1].powi(self.x2 as i32)
    }

    /// Bound on `|∇f|` over the unit square.
    pub fn lipschitz(&self) -> f64 {
        ((self.x1 * self.x1 + self.x2 * self.x2) as f64).sqrt()
    }

    /// Bound on the oscillation of `f` over sets of diameter `√2·δ`.
    pub fn oscillation(&self, delta: f64) -> f64 {
        self.lipschitz() * std::f64::consts::SQRT_2 * delta
    }

    pub fn name(&self) -> String {
        let part = |v: &str, e: u32| match e {
            0 => String::new(),
            1 => v.to_string(),
            e => format!("{v}^{e}"),
        };
        let s = format!("{}{}", part("x1", self.x1), part("x2", self.x2));
        if s.is_empty() {
            "1".into()
        } else {
            s
        }
    }
}

/// All monomials of degree at most 3.
pub fn builtin_monomials() -> Vec<Monomial> {
    (0..=3).flat_map(|d| (0..=d).rev().map(move |a| Monomial::new(a, d - a))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureRow {
    pub param: FamilyParam,
    /// One discrepancy per test function.
    pub discrepancy: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MeasureReport {
    pub level: u32,
    pub functions: Vec<String>,
    /// `Osc_f(k^{-m})` per test function.
    pub oscillation: Vec<f64>,
    pub rows: Vec<MeasureRow>,
    pub skipped: Vec<Skipped>,
}

impl MeasureReport {
    /// Discrepancies of function `f` along the family.
    pub fn column(&self, f: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.discrepancy[f]).collect()
    }

    /// Each step may increase by at most the oscillation bound.
    pub fn decreasing_up_to_oscillation(&self, f: usize) -> bool {
        self.column(f).windows(2).all(|w| w[1] <= w[0] + self.oscillation[f])
    }
}

/// `N^{-m} Σ_w f(Ψ_w q_1)`.
fn corner_average(lat: &CellLattice, f: &Monomial) -> f64 {
    let s = lat.scale() as f64;
    let vals: Vec<f64> = lat.origins().iter().map(|o| f.eval([o[0] as f64 / s, o[1] as f64 / s])).collect();
    pairwise_sum(&vals) / vals.len() as f64
}

/// Compares the level-`m` corner averages of each member with the limit.
pub fn measure_convergence(family: &FamilySpec, m: u32, functions: &[Monomial]) -> Result<MeasureReport> {
    let (limit, members, skipped) = family.members()?;
    let base_lat = CellLattice::new(&limit, m)?;
    let base: Vec<f64> = functions.iter().map(|f| corner_average(&base_lat, f)).collect();
    let rows = crate::par::map(&members, |mem| -> Result<MeasureRow> {
        let lat = CellLattice::new(&mem.spec, m)?;
        let discrepancy = functions
            .iter()
            .zip(&base)
            .map(|(f, b)| (corner_average(&lat, f) - b).abs())
            .collect();
        Ok(MeasureRow { param: mem.param.clone(), discrepancy })
    });
    let delta = 1.0 / (limit.k() as f64).powi(m as i32);
    Ok(MeasureReport {
        level: m,
        functions: functions.iter().map(Monomial::name).collect(),
        oscillation: functions.iter().map(|f| f.oscillation(delta)).collect(),
        rows: rows.into_iter().collect::<Result<_>>()?,
        skipped,
    })
}
