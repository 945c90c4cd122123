//! Asymptotic predictions for κ_N and β_N assembled from the variational constants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{c_tf, Params};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub n: usize,
    /// τ̂ c_tf N^{−1+2s/d}.
    pub central: f64,
    pub band_lo: f64,
    pub band_hi: f64,
    /// ω̂/(N − 1) when ω̂ is supplied.
    pub beta_upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub d: usize,
    pub s: f64,
    pub tau_hat: f64,
    pub omega_hat: Option<f64>,
    pub c_tf: f64,
    /// s(d − 2s)/d².
    pub remainder_exponent: f64,
    /// Constant in the relative band 1 ± C N^{−s(d−2s)/d²}; not a proved value.
    pub band_constant: f64,
    pub band_rigorous: bool,
    pub rows: Vec<KappaRow>,
    pub references: Vec<ReferenceLine>,
}

pub fn predicted_kappa(
    p: &Params,
    tau_hat: f64,
    omega_hat: Option<f64>,
    ns: &[usize],
    band_constant: f64,
) -> Result<AsymptoticPrediction> {
    p.require_subcritical()?;
    if !(tau_hat > 0.0 && tau_hat.is_finite()) {
        return Err(Error::input("τ̂ must be positive"));
    }
    if omega_hat.is_some_and(|w| !(w > 0.0 && w.is_finite())) {
        return Err(Error::input("ω̂ must be positive"));
    }
    if !(band_constant >= 0.0) {
        return Err(Error::input("band constant must be nonnegative"));
    }
    if ns.iter().any(|&n| n < 2) {
        return Err(Error::input("predictions need N ≥ 2"));
    }
    let ctf = c_tf(p);
    let expo = p.remainder_exponent();
    let rows = ns
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let central = tau_hat * ctf * nf.powf(-1.0 + p.lambda() / p.df());
            let rel = band_constant * nf.powf(-expo);
            KappaRow {
                n,
                central,
                band_lo: central * (1.0 - rel),
                band_hi: central * (1.0 + rel),
                beta_upper: omega_hat.map(|w| w / (nf - 1.0)),
            }
        })
        .collect();
    Ok(AsymptoticPrediction {
        d: p.d(),
        s: p.s(),
        tau_hat,
        omega_hat,
        c_tf: ctf,
        remainder_exponent: expo,
        band_constant,
        band_rigorous: false,
        rows,
        references: reference_lines(p.d(), p.s()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Exact,
    Lower,
    Upper,
}

/// A known value coefficient·N^{n_power} for κ_N at s = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub label: String,
    pub kind: Bound,
    pub coefficient: f64,
    pub n_power: f64,
}

impl ReferenceLine {
    pub fn at(&self, n: usize) -> f64 {
        self.coefficient * (n as f64).powf(self.n_power)
    }
}

/// Known κ_N values at s = 1: exactly ½ in d = 1 and the lower bound d²/N otherwise.
/// Empty for s ≠ 1.
pub fn reference_lines(d: usize, s: f64) -> Vec<ReferenceLine> {
    if s != 1.0 || d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![ReferenceLine { label: "kappa_N exact (d=1)".into(), kind: Bound::Exact, coefficient: 0.5, n_power: 0.0 }];
    }
    let df = d as f64;
    vec![ReferenceLine { label: format!("kappa_N >= {d}^2/N"), kind: Bound::Lower, coefficient: df * df, n_power: -1.0 }]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjecturePoint {
    pub n: usize,
    /// 4/ln N: the proved limsup bound on κ_N in d = 2, s = 1, and the conjectured limit.
    pub value: f64,
}

pub fn conjecture_2d(ns: &[usize]) -> Result<Vec<ConjecturePoint>> {
    ns.iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::input("4/ln N needs N ≥ 2"));
            }
            Ok(ConjecturePoint { n, value: 4.0 / (n as f64).ln() })
        })
        .collect()
}

/// Log-spaced integers from `lo` to `hi`, deduplicated.
pub fn log_grid(lo: usize, hi: usize, count: usize) -> Vec<usize> {
    if count <= 1 || hi <= lo {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<usize> =
        (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp().round() as usize).collect();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let p = Params::new(3, 1.0, false).unwrap();
        let pr = predicted_kappa(&p, 0.3, None, &[10], 1.0).unwrap();
        assert!((pr.remainder_exponent - 1.0 / 9.0).abs() < 1e-15);
        let p4 = Params::new(4, 1.0, false).unwrap();
        assert!((predicted_kappa(&p4, 0.3, None, &[10], 1.0).unwrap().remainder_exponent - 0.125).abs() < 1e-15);
        assert!(!pr.band_rigorous);
    }

    #[test]
    fn power_law_and_homogeneity() {
        // d = 4, s = 1: N^{1−2s/d} = √N doubles when N quadruples
        let p = Params::new(4, 1.0, false).unwrap();
        let a = predicted_kappa(&p, 0.25, Some(1.0), &[100, 400], 1.0).unwrap();
        assert!((a.rows[0].central / a.rows[1].central - 2.0).abs() < 1e-12);
        let b = predicted_kappa(&p, 0.5, Some(1.0), &[100, 400], 1.0).unwrap();
        assert!((b.rows[0].central / a.rows[0].central - 2.0).abs() < 1e-14);
        assert!(a.rows[0].band_lo < a.rows[0].central && a.rows[0].central < a.rows[0].band_hi);
        assert_eq!(a.rows[1].beta_upper, Some(1.0 / 399.0));
    }

    #[test]
    fn references_and_conjecture() {
        assert_eq!(reference_lines(1, 1.0)[0].at(7), 0.5);
        assert_eq!(reference_lines(2, 1.0)[0].at(8), 0.5);
        assert_eq!(reference_lines(3, 1.0)[0].at(9), 1.0);
        assert!(reference_lines(3, 0.5).is_empty());
        let n = 4f64.exp().round() as usize;
        let c = conjecture_2d(&[n, 1000, 10_000]).unwrap();
        assert!((c[0].value - 1.0).abs() < 0.01);
        assert!((c[1].value - 0.579).abs() < 1e-3);
        assert!(c[2].value < c[1].value);
        assert!(conjecture_2d(&[1]).is_err());
    }
}
