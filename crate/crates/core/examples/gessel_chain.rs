//! Toeplitz, circle and lattice evaluations of the same determinant.

use plancherel_fredholm::identities::gessel_chain_values;

fn main() -> plancherel_fredholm::Result<()> {
    for t in [0.5, 1.0, 2.0] {
        for n in [1, 4, 8] {
            let (c, spread) = gessel_chain_values(t, n, 1e-10)?;
            println!(
                "t={t} n={n}: toeplitz {:.14} circle {:.14} lattice {:.14} spread {spread:.1e}",
                c.toeplitz, c.circle, c.lattice
            );
        }
    }
    Ok(())
}
