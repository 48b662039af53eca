//! Moments of the scaled rows and tail decay tables.

use plancherel_fredholm::plancherel::{n_range_for_x, poissonized_moment_auto, tail_probe, PoissonizedModel, Regime};

fn main() -> plancherel_fredholm::Result<()> {
    for t in [2.0, 4.0, 8.0] {
        let model = PoissonizedModel::new(t)?;
        let mean = poissonized_moment_auto(&model, 1, 1)?;
        let second = poissonized_moment_auto(&model, 1, 2)?;
        println!("t={t}: E xi = {mean:.6}, Var xi = {:.6}", second - mean * mean);
    }
    let t = 10.0;
    let samples: Vec<(i64, f64)> = n_range_for_x(t, 0.5, 3.0).into_iter().map(|n| (n, t)).collect();
    let table = tail_probe(1, Regime::Upper, &samples)?;
    for r in &table.rows {
        println!("n={:>3} x={:+.3} tail {:.3e}", r.n, r.x, r.tail);
    }
    println!("slope {:?}", table.slope);
    Ok(())
}
