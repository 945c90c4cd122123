//! Exact sampling of the point process |u|² of a Slater determinant, compared with
//! its one-point density along the x-axis.
use hardylab::manybody::{sample_configurations, SlaterState, DEFAULT_ELL_RATIO};

fn main() -> hardylab::Result<()> {
    let st = SlaterState::with_count(2, 12, 1.0, DEFAULT_ELL_RATIO)?;
    let samples = 4000;
    let configs = sample_configurations(&st, samples, 11)?;
    let bins = 8;
    let lo = -0.5 * st.l;
    let mut hist = vec![0.0; bins];
    let mut closest = f64::INFINITY;
    for c in &configs {
        for pt in c.chunks(2) {
            let b = (((pt[0] - lo) / st.l) * bins as f64).floor().clamp(0.0, bins as f64 - 1.0) as usize;
            hist[b] += 1.0;
        }
        for i in 0..st.n() {
            for j in i + 1..st.n() {
                closest = closest.min(hardylab::geometry::dist(&c[2 * i..2 * i + 2], &c[2 * j..2 * j + 2]));
            }
        }
    }
    println!("N = {} in a box of side {}; {samples} samples", st.n(), st.l);
    println!("{:>8} {:>12} {:>12}", "x", "empirical", "∫ρ dy");
    let w = st.l / bins as f64;
    for (b, h) in hist.iter().enumerate() {
        let x = lo + (b as f64 + 0.5) * w;
        // marginal of ρ on the strip, by midpoint in y
        let m: f64 = (0..200).map(|k| st.rho(&[x, lo + (k as f64 + 0.5) * st.l / 200.0])).sum::<f64>() * st.l / 200.0;
        println!("{x:>8.3} {:>12.4} {:>12.4}", h / (samples as f64 * w), m);
    }
    println!("closest pair over all samples: {closest:.4} (exchange hole)");
    Ok(())
}
