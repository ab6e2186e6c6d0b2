use serde::Serialize;

use crate::error::{CarpetError, Result};

/// Values `u(l/k^M)` for `0 ≤ l ≤ k^M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicFunction {
    k: u32,
    depth: u32,
    values: Vec<f64>,
}

impl DyadicFunction {
    pub fn new(k: u32, depth: u32, values: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(CarpetError::InvalidParameter("k must be at least 2".into()));
        }
        let want = (k as usize).pow(depth) + 1;
        if values.len() != want {
            return Err(CarpetError::InvalidParameter(format!("expected {want} values, got {}", values.len())));
        }
        Ok(DyadicFunction { k, depth, values })
    }

    pub fn from_fn(k: u32, depth: u32, f: impl Fn(f64) -> f64) -> Self {
        let n = (k as usize).pow(depth);
        let values = (0..=n).map(|l| f(l as f64 / n as f64)).collect();
        DyadicFunction { k, depth, values }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `u(l/k^m)`.
    pub fn at(&self, m: u32, l: usize) -> f64 {
        self.values[l * (self.k as usize).pow(self.depth - m)]
    }

    /// `D_m(u)² = Σ_l (u(l/k^m) − u((l+1)/k^m))²`.
    pub fn level_sum(&self, m: u32) -> f64 {
        let stride = (self.k as usize).pow(self.depth - m);
        let inc: Vec<f64> =
            self.values.windows(stride + 1).step_by(stride).map(|w| (w[0] - w[stride]).powi(2)).collect();
        crate::par::pairwise_sum(&inc)
    }
}

/// `σ(r) = −log r / (2 log k) + 1/2`.
pub fn sigma_of(r: f64, k: u32) -> f64 {
    -r.ln() / (2.0 * (k as f64).ln()) + 0.5
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(CarpetError::InvalidParameter(format!("r = {r} outside (0, 1)")));
    }
    Ok(())
}

/// `√(Σ_{m ≤ M} r^{-m} D_m(u)²)`.
pub fn besov_line_seminorm(u: &DyadicFunction, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((0..=u.depth).map(|m| r.powi(-(m as i32)) * u.level_sum(m)).sum::<f64>().sqrt())
}

/// Semi-norm on a segment of length `s`: the unit-interval value times `s^{1/2−σ}`.
pub fn besov_segment_seminorm(u: &DyadicFunction, r: f64, length: f64) -> Result<f64> {
    Ok(besov_line_seminorm(u, r)? * length.powf(0.5 - sigma_of(r, u.k)))
}

/// Bound on the squared terms beyond level `M` for a function with Lipschitz
/// constant `lip` on the unit interval: `lip²·(rk)^{-M-1}/(1 − 1/(rk))`.
pub fn line_tail_bound(lip: f64, r: f64, k: u32, depth: u32) -> Result<f64> {
    check_r(r)?;
    let rk = r * k as f64;
    if rk <= 1.0 {
        return Err(CarpetError::InvalidParameter("tail bound needs rk > 1".into()));
    }
    Ok(lip * lip * rk.powi(-(depth as i32) - 1) / (1.0 - 1.0 / rk))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_is_zero() {
        let u = DyadicFunction::from_fn(3, 5, |_| 2.5);
        assert_eq!(besov_line_seminorm(&u, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn identity_series() {
        // rk = 2: partial sums of Σ 2^{-m} approach 2.
        for depth in [4, 8, 10] {
            let u = DyadicFunction::from_fn(3, depth, |x| x);
            let v = besov_line_seminorm(&u, 2.0 / 3.0).unwrap();
            let tail = line_tail_bound(1.0, 2.0 / 3.0, 3, depth).unwrap();
            assert!((v * v + tail - 2.0).abs() < 1e-9, "depth {depth}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        let u = DyadicFunction::from_fn(3, 2, |x| x);
        assert!(besov_line_seminorm(&u, 1.0).is_err());
        assert!(besov_line_seminorm(&u, 0.0).is_err());
        assert!(DyadicFunction::new(3, 2, vec![0.0; 9]).is_err());
        assert!(DyadicFunction::new(3, 2, vec![0.0; 10]).is_ok());
    }

    #[test]
    fn level_values() {
        let u = DyadicFunction::from_fn(3, 3, |x| x);
        assert_eq!(u.at(1, 2), 2.0 / 3.0);
        assert!((u.level_sum(2) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn segment_scaling() {
        let u = DyadicFunction::from_fn(3, 4, |x| x * x);
        let r = 0.8;
        let whole = besov_line_seminorm(&u, r).unwrap();
        let part = besov_segment_seminorm(&u, r, 1.0 / 9.0).unwrap();
        assert!((part / whole - (1.0f64 / 9.0).powf(0.5 - sigma_of(r, 3))).abs() < 1e-12);
    }
}
