//! Fefferman–de la Llave decomposition of |y − y'|^{−λ} into indicator functions of balls.
//!
//! |y − y'|^{−λ} = C ∫_0^∞ dr r^{−d−λ−1} |B_r(y) ∩ B_r(y')|, and the lens volume
//! |B_r(0) ∩ B_r(t e)| = ω_d r^d I_{1−t²/(4r²)}((d+1)/2, 1/2).

use crate::error::{Error, Result};
use crate::params::unit_ball_volume;
use crate::quad::{tanh_sinh, tanh_sinh_inf};
use crate::riesz::RieszKernel;
use crate::special::beta_inc;

/// Volume of the intersection of two radius-r balls with centers at distance t.
pub fn lens_volume(d: usize, r: f64, t: f64) -> f64 {
    if t >= 2.0 * r {
        return 0.0;
    }
    let x = 1.0 - t * t / (4.0 * r * r);
    unit_ball_volume(d) * r.powi(d as i32) * beta_inc(0.5 * (d as f64 + 1.0), 0.5, x)
}

/// ∫_0^∞ r^{−d−λ−1} |B_r ∩ B_r'| dr at center distance t.
pub fn ball_integral(k: &RieszKernel, t: f64) -> Result<f64> {
    let d = k.d;
    let lam = k.lambda;
    // |B_r ∩ B_r'| = r^d |B_1 ∩ B_1(t/r)| keeps huge r from overflowing
    let r = tanh_sinh_inf(|r| r.powf(-lam - 1.0) * lens_volume(d, 1.0, t / r), 0.5 * t, 1e-13);
    if !r.converged || !r.value.is_finite() {
        return Err(Error::numerical("ball-intersection integral did not converge"));
    }
    Ok(r.value)
}

/// The normalizing constant C, calibrated at unit distance.
pub fn fdll_constant(k: &RieszKernel) -> Result<f64> {
    Ok(1.0 / ball_integral(k, 1.0)?)
}

#[derive(Debug, Clone, Copy)]
pub struct Fdll {
    pub kernel: RieszKernel,
    pub constant: f64,
}

pub const DEFAULT_RESOLUTION: usize = 64;

impl Fdll {
    pub fn new(kernel: RieszKernel) -> Result<Self> {
        Ok(Fdll { kernel, constant: fdll_constant(&kernel)? })
    }

    /// Reconstruct |y − y'|^{−λ} by composite midpoint in σ = ln(2r/t), with
    /// `resolution` nodes per unit σ and a closed-form tail.
    pub fn reconstruct(&self, y: &[f64], yp: &[f64], resolution: usize) -> Result<f64> {
        let t = crate::geometry::dist(y, yp);
        if t == 0.0 {
            return Err(Error::input("fdll reconstruction needs y ≠ y'"));
        }
        if resolution == 0 {
            return Err(Error::input("resolution must be positive"));
        }
        let d = self.kernel.d;
        let lam = self.kernel.lambda;
        // integrand in σ: (t/2)^{−λ} e^{−λσ} v(2e^{−σ}) with v(τ) = |B_1 ∩ B_1(τe)|
        let sigma_max = (40.0 / lam).min(60.0);
        let h = 1.0 / resolution as f64;
        let n = (sigma_max / h).ceil() as usize;
        let mut sum = 0.0;
        for i in 0..n {
            let s = (i as f64 + 0.5) * h;
            sum += (-lam * s).exp() * lens_volume(d, 1.0, 2.0 * (-s).exp());
        }
        sum *= h;
        // v(τ) ≈ ω_d − ω_{d−1} τ near τ = 0
        let s_end = n as f64 * h;
        let omega = unit_ball_volume(d);
        let omega_m = if d > 1 { unit_ball_volume(d - 1) } else { 1.0 };
        sum += omega * (-lam * s_end).exp() / lam - omega_m * 2.0 * (-(lam + 1.0) * s_end).exp() / (lam + 1.0);
        Ok(self.constant * (0.5 * t).powf(-lam) * sum)
    }
}

/// Lens volume by integrating cross-sections along the axis, as an independent check.
pub fn lens_volume_by_sections(d: usize, r: f64, t: f64) -> f64 {
    if t >= 2.0 * r {
        return 0.0;
    }
    let half = r - 0.5 * t;
    let wm = if d > 1 { unit_ball_volume(d - 1) } else { 1.0 };
    2.0 * tanh_sinh(
        |_, x, _| {
            // distance from the far ball's center is t/2 + half − x along the axis
            let a = 0.5 * t + half - x;
            let rad2 = r * r - a * a;
            if rad2 <= 0.0 {
                0.0
            } else if d == 1 {
                1.0
            } else {
                wm * rad2.powf(0.5 * (d as f64 - 1.0))
            }
        },
        0.0,
        half,
        1e-13,
    )
    .value
}
