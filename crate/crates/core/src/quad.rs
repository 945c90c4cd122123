//! Gauss–Legendre rules, adaptive Gauss–Kronrod and tanh-sinh quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let mut p0 = 1.0;
                let mut p1 = 0.0;
                for j in 0..n {
                    let p2 = p1;
                    p1 = p0;
                    p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
                }
                dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
                let dz = p0 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Cached rule of order n (n ≤ 64).
pub fn gl(n: usize) -> &'static GaussLegendre {
    static CACHE: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    let rules = CACHE.get_or_init(|| (0..=64).map(|k| GaussLegendre::new(k.max(1))).collect());
    &rules[n]
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[7] * fc;
    let mut rg = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

struct Seg {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive G7K15 on [a, b].
pub fn gauss_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_segments: usize,
) -> Adaptive {
    let (v, e) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Seg { a, b, val: v, err: e });
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) && heap.len() < max_segments {
        let s = heap.pop().unwrap();
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(&mut f, s.a, m);
        let (v2, e2) = gk15(&mut f, m, s.b);
        total += v1 + v2 - s.val;
        err += e1 + e2 - s.err;
        heap.push(Seg { a: s.a, b: m, val: v1, err: e1 });
        heap.push(Seg { a: m, b: s.b, val: v2, err: e2 });
    }
    // re-sum to limit drift from the running updates
    let mut segs: Vec<Seg> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segs.iter().map(|s| s.val).sum();
    let error: f64 = segs.iter().map(|s| s.err).sum();
    Adaptive { value, error, converged: error <= abs_tol.max(rel_tol * value.abs()) }
}

const TS_TMAX: f64 = 6.0;
const TS_LEVELS: usize = 9;

struct TsNode {
    x: f64,
    dl: f64,
    dr: f64,
    w: f64,
}

fn ts_node(t: f64) -> TsNode {
    let u = 0.5 * PI * t.sinh();
    let e = (-2.0 * u.abs()).exp();
    // 1 - tanh|u| = 2e/(1+e)
    let small = 2.0 * e / (1.0 + e);
    let x = (1.0 - small).copysign(t);
    let (dl, dr) = if t >= 0.0 { (2.0 - small, small) } else { (small, 2.0 - small) };
    let ch = u.abs().cosh();
    let w = 0.5 * PI * t.cosh() / (ch * ch);
    TsNode { x, dl, dr, w }
}

fn ts_table() -> &'static Vec<Vec<TsNode>> {
    static TABLE: OnceLock<Vec<Vec<TsNode>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut levels = Vec::with_capacity(TS_LEVELS);
        let n0 = TS_TMAX as i64;
        levels.push((-n0..=n0).map(|k| ts_node(k as f64)).collect());
        for lev in 1..TS_LEVELS {
            let h = 0.5f64.powi(lev as i32);
            let kmax = (TS_TMAX / h) as i64;
            let nodes = (-kmax..=kmax)
                .filter(|k| k % 2 != 0)
                .map(|k| ts_node(k as f64 * h))
                .collect();
            levels.push(nodes);
        }
        levels
    })
}

/// Tanh-sinh quadrature on [a, b]. The integrand receives (x, x − a, b − x) with the
/// two distances computed without cancellation, so endpoint singularities can be
/// evaluated accurately arbitrarily close to the endpoint.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> Adaptive {
    if b <= a {
        return Adaptive { value: 0.0, error: 0.0, converged: true };
    }
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let table = ts_table();
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    let mut est = 0.0;
    let mut diff = f64::INFINITY;
    for (lev, nodes) in table.iter().enumerate() {
        for n in nodes {
            if n.w == 0.0 || n.dl == 0.0 || n.dr == 0.0 {
                continue;
            }
            let v = f(c + half * n.x, half * n.dl, half * n.dr);
            if v != 0.0 {
                sum += n.w * v;
            }
        }
        let h = 0.5f64.powi(lev as i32);
        est = sum * h * half;
        if lev >= 3 {
            diff = (est - prev).abs();
            if diff <= rel_tol * est.abs() || diff < 1e-300 {
                return Adaptive { value: est, error: diff, converged: true };
            }
        }
        prev = est;
    }
    Adaptive { value: est, error: diff, converged: false }
}

/// Tanh-sinh on [a, ∞) through x = a + u/(1 − u).
pub fn tanh_sinh_inf<F: FnMut(f64) -> f64>(mut f: F, a: f64, rel_tol: f64) -> Adaptive {
    tanh_sinh(
        |_, u, omu| {
            let x = a + u / omu;
            let jac = 1.0 / (omu * omu);
            if !jac.is_finite() {
                return 0.0;
            }
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}

/// Composite Gauss–Legendre with `panels` equal panels of order n.
pub fn composite_gl<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let rule = gl(n);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            rule.integrate(&mut f, lo, lo + h)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_polynomial_exactness() {
        let r = GaussLegendre::new(5);
        let v = r.integrate(|x| x.powi(9) + x.powi(8), -1.0, 1.0);
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gk_smooth() {
        let r = gauss_kronrod(|x| x.exp(), 0.0, 2.0, 1e-14, 1e-14, 100);
        assert!((r.value - (2f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫_0^1 x^{-0.9} dx = 10
        let r = tanh_sinh(|_, dl, _| dl.powf(-0.9), 0.0, 1.0, 1e-13);
        assert!(r.converged);
        assert!((r.value - 10.0).abs() < 1e-10, "{}", r.value);
        // ∫_0^1 ln(1-x) dx = -1
        let r = tanh_sinh(|_, _, dr| dr.ln(), 0.0, 1.0, 1e-13);
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite() {
        let r = tanh_sinh_inf(|x| (-x).exp(), 1.0, 1e-13);
        assert!((r.value - (-1f64).exp()).abs() < 1e-13);
        let r = tanh_sinh_inf(|x| 1.0 / (1.0 + x * x), 0.0, 1e-12);
        assert!((r.value - 0.5 * PI).abs() < 1e-11);
    }
}
