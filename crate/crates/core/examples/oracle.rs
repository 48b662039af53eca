//! Exact Plancherel probabilities and colored permutation statistics.

use plancherel_fredholm::oracle::{
    colored_lambda, dim_syt, plancherel_prob, row_cdf_exact, ColoredPermutation, Partition,
};

fn main() -> plancherel_fredholm::Result<()> {
    let shape = Partition::parse("3,2,1")?;
    println!("dim {shape} = {}", dim_syt(&shape));
    let p = plancherel_prob(6, &|l: &Partition| l.row(1) <= 3)?;
    println!("P_6(l1 <= 3) = {p}");
    for n in 0..=5 {
        println!("P_5(l2 <= {n}) = {}", row_cdf_exact(5, 2, n)?);
    }
    let pi = ColoredPermutation::new(vec![3, 1, 4, 2], vec![0, 1, 1, 0], 2)?;
    println!(
        "colored shapes {:?}",
        pi.color_shapes().iter().map(|s| s.to_string()).collect::<Vec<_>>()
    );
    println!("colored rows {:?}", colored_lambda(&pi, 3)?);
    Ok(())
}
