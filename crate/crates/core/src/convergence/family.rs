use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::expr;
use crate::error::{CarpetError, Result};
use crate::geometry::{complete_symmetry_orbit, match_ifs, parse_rational, validate_usc, Rational, UscSpec};

fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `K(z)`: `k = 7`, the 24-square boundary ring plus the eight images of the
/// square at `(z + 2/7, 1/7)`, for `0 ≤ z ≤ 1/14`.
pub fn family_kz(z: &Rational) -> Result<UscSpec> {
    if z < &Rational::zero() || z > &frac(1, 14) {
        return Err(CarpetError::InvalidParameter(format!("z = {z} outside [0, 1/14]")));
    }
    let seed = [z + frac(2, 7), frac(1, 7)];
    let spec = complete_symmetry_orbit(&[seed], 7, true)?;
    let report = validate_usc(&spec);
    if !report.is_valid() {
        return Err(CarpetError::InvalidParameter(format!("K({z}) fails {:?}", report.failed())));
    }
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    /// [`family_kz`].
    Kz,
    /// Offsets `from + t·(to − from)` for `t ∈ [0, 1]`.
    Interpolation {
        k: u32,
        #[serde(skip)]
        from: Vec<[Rational; 2]>,
        #[serde(skip)]
        to: Vec<[Rational; 2]>,
    },
}

impl Generator {
    pub fn generate(&self, t: &Rational) -> Result<UscSpec> {
        match self {
            Generator::Kz => family_kz(t),
            Generator::Interpolation { k, from, to } => {
                if t < &Rational::zero() || t > &Rational::one() {
                    return Err(CarpetError::InvalidParameter(format!("t = {t} outside [0, 1]")));
                }
                let offsets = from
                    .iter()
                    .zip(to)
                    .map(|(a, b)| [&a[0] + (&b[0] - &a[0]) * t, &a[1] + (&b[1] - &a[1]) * t])
                    .collect();
                let spec = UscSpec::new(*k, offsets)?;
                let report = validate_usc(&spec);
                if !report.is_valid() {
                    return Err(CarpetError::InvalidParameter(format!("t = {t} fails {:?}", report.failed())));
                }
                Ok(spec)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyParam {
    /// Sequence index `n` (1-based position for explicit lists).
    pub n: i64,
    #[serde(serialize_with = "crate::convergence::ser_rational")]
    pub value: Rational,
}

/// A sequence of carpets `K_n` together with its limit `K`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilySpec {
    pub generator: Generator,
    /// Parameter text as given.
    pub source: String,
    pub params: Vec<FamilyParam>,
    #[serde(serialize_with = "crate::convergence::ser_rational")]
    pub limit: Rational,
}

/// A generated member, with maps reordered to match the limit.
#[derive(Clone, Debug)]
pub struct Member {
    pub param: FamilyParam,
    pub spec: UscSpec,
    /// Largest offset displacement from the limit after matching.
    pub offset_distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Skipped {
    pub param: FamilyParam,
    pub reason: String,
}

impl FamilySpec {
    /// Parses `"expr:n=a..b"` (limit taken as `n → ∞`) or
    /// `"v1,v2,...;limit=v"`.
    pub fn parse(generator: Generator, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((e, range)) = text.split_once(':') {
            let range = range.trim();
            let bounds = range
                .strip_prefix("n=")
                .and_then(|r| r.split_once(".."))
                .ok_or_else(|| CarpetError::Config(format!("expected 'n=a..b', got '{range}'")))?;
            let lo: i64 = bounds.0.trim().parse().map_err(|_| CarpetError::Config("bad range start".into()))?;
            let hi: i64 = bounds.1.trim().parse().map_err(|_| CarpetError::Config("bad range end".into()))?;
            if lo > hi {
                return Err(CarpetError::Config("empty parameter range".into()));
            }
            let params = (lo..=hi).map(|n| Ok(FamilyParam { n, value: expr::eval(e, n)? })).collect::<Result<_>>()?;
            return Ok(FamilySpec { generator, source: text.into(), params, limit: expr::limit(e)? });
        }
        let (list, lim) = text
            .split_once(';')
            .ok_or_else(|| CarpetError::Config("explicit parameter lists need ';limit=v'".into()))?;
        let lim = lim
            .trim()
            .strip_prefix("limit=")
            .ok_or_else(|| CarpetError::Config("expected 'limit=v'".into()))?;
        let params = list
            .split(',')
            .enumerate()
            .map(|(i, v)| Ok(FamilyParam { n: i as i64 + 1, value: parse_rational(v.trim())? }))
            .collect::<Result<_>>()?;
        Ok(FamilySpec { generator, source: text.into(), params, limit: parse_rational(lim.trim())? })
    }

    /// `count` copies of the limit.
    pub fn constant(generator: Generator, value: Rational, count: usize) -> Self {
        let params = (1..=count as i64).map(|n| FamilyParam { n, value: value.clone() }).collect();
        FamilySpec { generator, source: format!("{value} (constant)"), params, limit: value }
    }

    pub fn limit_spec(&self) -> Result<UscSpec> {
        self.generator.generate(&self.limit)
    }

    /// Generates every member; invalid parameter values are skipped and
    /// reported rather than failing the whole family.
    pub fn members(&self) -> Result<(UscSpec, Vec<Member>, Vec<Skipped>)> {
        let limit = self.limit_spec()?;
        let mut members = Vec::new();
        let mut skipped = Vec::new();
        for p in &self.params {
            match self.generator.generate(&p.value) {
                Ok(spec) => {
                    let m = match_ifs(&limit, &spec)?;
                    members.push(Member { param: p.clone(), spec: spec.permuted(&m.perm)?, offset_distance: m.max_distance });
                }
                Err(e) => skipped.push(Skipped { param: p.clone(), reason: e.to_string() }),
            }
        }
        if members.is_empty() {
            return Err(CarpetError::InvalidParameter("no valid family members".into()));
        }
        Ok((limit, members, skipped))
    }
}
