//! Validated (d, s) pairs and the explicit constants built from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::gamma_pos;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    d: usize,
    s: f64,
    allow_borderline: bool,
}

const BORDER_TOL: f64 = 1e-12;

impl Params {
    pub fn new(d: usize, s: f64, allow_borderline: bool) -> Result<Self> {
        if d == 0 {
            return Err(Error::params("d must be a positive integer"));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::params("s must be positive"));
        }
        if s > 1.0 {
            return Err(Error::params("s > 1"));
        }
        let half = d as f64 / 2.0;
        let borderline = (s - half).abs() <= BORDER_TOL;
        if borderline && !allow_borderline {
            return Err(Error::params("borderline d = 2s"));
        }
        if s > half && !borderline {
            return Err(Error::params("s ≥ d/2"));
        }
        let p = Params { d, s, allow_borderline };
        debug_assert!(p.q().is_finite() && p.remainder_exponent().is_finite());
        debug_assert!(p.is_borderline() || p.remainder_exponent() > 0.0);
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn allow_borderline(&self) -> bool {
        self.allow_borderline
    }

    pub fn df(&self) -> f64 {
        self.d as f64
    }

    pub fn is_borderline(&self) -> bool {
        (self.s - self.df() / 2.0).abs() <= BORDER_TOL
    }

    /// Riesz exponent 2s of the Hardy weight.
    pub fn lambda(&self) -> f64 {
        2.0 * self.s
    }

    /// q = 1 + 2s/d.
    pub fn q(&self) -> f64 {
        1.0 + 2.0 * self.s / self.df()
    }

    /// s(d − 2s)/d², the relative remainder exponent of the asymptotic law.
    pub fn remainder_exponent(&self) -> f64 {
        let d = self.df();
        self.s * (d - 2.0 * self.s) / (d * d)
    }

    /// 2s² − s(d−2) + d, positive throughout the admitted range.
    pub fn discriminant(&self) -> f64 {
        let d = self.df();
        2.0 * self.s * self.s - self.s * (d - 2.0) + d
    }

    pub fn require_subcritical(&self) -> Result<()> {
        if self.is_borderline() {
            Err(Error::params("borderline d = 2s"))
        } else {
            Ok(())
        }
    }
}

/// Volume of the unit ball in R^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    PI.powf(h) / gamma_pos(h + 1.0)
}

/// Surface measure |S^{d-1}|; equals 2 for d = 1.
pub fn sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma_pos(h)
}

/// Thomas–Fermi constant (4π)^s/(1+2s/d) · Γ(1+d/2)^{2s/d}.
pub fn c_tf(p: &Params) -> f64 {
    let d = p.df();
    let s = p.s();
    (4.0 * PI).powf(s) / p.q() * gamma_pos(1.0 + d / 2.0).powf(2.0 * s / d)
}

/// Coherent-state phase-space constant (2π)^{2s} ω_d^{−2s/d}.
pub fn coherent_c(p: &Params) -> f64 {
    let d = p.df();
    (2.0 * PI).powf(2.0 * p.s()) * unit_ball_volume(p.d()).powf(-2.0 * p.s() / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_for_three_one() {
        let p = Params::new(3, 1.0, false).unwrap();
        assert!((p.q() - 5.0 / 3.0).abs() < 1e-15);
        assert!((p.remainder_exponent() - 1.0 / 9.0).abs() < 1e-15);
        assert!(p.discriminant() > 0.0);
    }

    #[test]
    fn rejections() {
        let e = Params::new(2, 1.0, false).unwrap_err();
        assert!(e.to_string().contains("borderline d = 2s"));
        let e = Params::new(1, 0.75, false).unwrap_err();
        assert!(e.to_string().contains("s ≥ d/2"));
        let e = Params::new(4, 1.5, false).unwrap_err();
        assert!(e.to_string().contains("s > 1"));
        assert!(Params::new(2, 1.0, true).unwrap().is_borderline());
        assert!(Params::new(1, 0.75, true).is_err());
    }

    #[test]
    fn ctf_closed_forms() {
        let c31 = c_tf(&Params::new(3, 1.0, false).unwrap());
        let want = 0.6 * (6.0 * PI * PI).powf(2.0 / 3.0);
        assert!(((c31 - want) / want).abs() < 1e-12);
        let c41 = c_tf(&Params::new(4, 1.0, false).unwrap());
        let want = 8.0 * PI / 3.0 * 2f64.sqrt();
        assert!(((c41 - want) / want).abs() < 1e-12);
        let tiny = c_tf(&Params::new(3, 1e-9, false).unwrap());
        assert!((tiny - 1.0).abs() < 1e-7);
    }

    #[test]
    fn ball_and_sphere() {
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }
}
