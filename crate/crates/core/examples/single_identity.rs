//! Check the single-interval identity in both forms for a Bessel symbol.

use num_complex::Complex64;
use plancherel_fredholm::identities::{verify_single, Form};
use plancherel_fredholm::symbol::Symbol;

fn main() -> plancherel_fredholm::Result<()> {
    let sym = Symbol::bessel(1.0)?;
    for n in 0..=4 {
        for form in [Form::S, Form::R] {
            let r = verify_single(&sym, n, Complex64::new(0.5, 0.0), form, 1e-10)?;
            println!(
                "n={n} {form:?}: lhs {:.14} rhs {:.14} residual {:.1e} pass {}",
                r.lhs.re, r.rhs.re, r.residual, r.pass
            );
        }
    }
    Ok(())
}
