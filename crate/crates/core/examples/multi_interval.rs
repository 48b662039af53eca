//! Several weights on consecutive intervals.

use num_complex::Complex64;
use plancherel_fredholm::identities::verify_multi;
use plancherel_fredholm::symbol::Symbol;

fn main() -> plancherel_fredholm::Result<()> {
    let sym = Symbol::bessel(0.8)?;
    let s = [Complex64::new(-0.6, 0.0), Complex64::new(0.4, 0.0)];
    for n in [[0, 2], [1, 3], [2, 5]] {
        let r = verify_multi(&sym, &n, &s, 1e-10)?;
        println!(
            "n={n:?}: lhs {:.12} rhs {:.12} residual {:.1e}",
            r.lhs.re, r.rhs.re, r.residual
        );
    }
    Ok(())
}
