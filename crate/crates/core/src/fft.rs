//! Multi-dimensional complex FFT on row-major arrays.

use num_complex::Complex64;
use rustfft::FftPlanner;

pub fn fftn(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(total, data.len());
    let mut planner = FftPlanner::new();
    let mut stride = total;
    for &n in shape {
        stride /= n;
        if n == 1 {
            continue;
        }
        let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
}

/// Smallest size ≥ n with only factors 2, 3 and 5.
pub fn good_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut k = m;
        for p in [2, 3, 5] {
            while k % p == 0 {
                k /= p;
            }
        }
        if k == 1 {
            return m;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_2d() {
        let shape = [4, 6];
        let orig: Vec<Complex64> = (0..24).map(|i| Complex64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let mut v = orig.clone();
        fftn(&mut v, &shape, false);
        // DC component is the plain sum
        let sum: Complex64 = orig.iter().sum();
        assert!((v[0] - sum).norm() < 1e-10);
        fftn(&mut v, &shape, true);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a / 24.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn good_sizes() {
        assert_eq!(good_size(7), 8);
        assert_eq!(good_size(11), 12);
        assert_eq!(good_size(31), 32);
    }
}
