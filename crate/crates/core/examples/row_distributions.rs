//! Poissonized row CDFs, a joint CDF and the second-row cross-check.

use plancherel_fredholm::plancherel::{joint_cdf, lambda2_crosscheck, row_cdf, JointQuery, PoissonizedModel};

fn main() -> plancherel_fredholm::Result<()> {
    let model = PoissonizedModel::new(2.0)?;
    for k in 1..=3 {
        let row: Vec<String> = (0..=8)
            .map(|n| row_cdf(&model, k, n, 1e-12).map(|p| format!("{p:.6}")))
            .collect::<Result<_, _>>()?;
        println!("k={k}: {}", row.join(" "));
    }
    let q = JointQuery::new(vec![Some(3), Some(1)])?;
    println!("P(l1 - 1 <= 3, l2 - 2 <= 1) = {:.12}", joint_cdf(&model, &q, 1e-12)?);
    let r = lambda2_crosscheck(&model, 3, 1e-10)?;
    println!("second row at n=3: {:.12} vs {:.12}", r.lhs.re, r.rhs.re);
    Ok(())
}
