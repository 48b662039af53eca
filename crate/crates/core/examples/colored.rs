//! Colored kernels: the identity with base and dilated exponents.

use std::collections::BTreeMap;

use num_complex::Complex64;
use plancherel_fredholm::identities::{verify_colored, ColoredExponent, Form};
use plancherel_fredholm::symbol::Symbol;

fn main() -> plancherel_fredholm::Result<()> {
    let s = Complex64::new(0.5, 0.0);
    let bessel = Symbol::bessel(1.0)?;
    let r = verify_colored(&bessel, 2, 3, s, Form::S, ColoredExponent::Base, 1e-10)?;
    println!("bessel m=2: residual {:.1e} pass {}", r.residual, r.pass);

    let mut coeffs = BTreeMap::new();
    coeffs.insert(1, Complex64::new(1.0, 0.0));
    coeffs.insert(0, Complex64::new(0.3, 0.0));
    let wound = Symbol::laurent(coeffs)?;
    for exponent in [ColoredExponent::Base, ColoredExponent::Dilated] {
        let r = verify_colored(&wound, 2, 1, s, Form::S, exponent, 1e-10)?;
        println!(
            "z + 0.3, m=2, {exponent:?}: residual {:.1e} pass {}",
            r.residual, r.pass
        );
    }
    Ok(())
}
