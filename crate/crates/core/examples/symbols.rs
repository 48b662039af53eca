//! Build symbols, read Fourier coefficients and winding numbers.

use std::collections::BTreeMap;

use num_complex::Complex64;
use plancherel_fredholm::symbol::{Symbol, SymbolDescriptor, Which};

fn main() -> plancherel_fredholm::Result<()> {
    let bessel = Symbol::bessel(1.0)?;
    for j in -2..=2 {
        println!(
            "bessel(1) coeff {j:>2}: {:.12}",
            bessel.fourier_coeff(Which::Direct, j)?.re
        );
    }

    let mut coeffs = BTreeMap::new();
    coeffs.insert(2, Complex64::new(1.0, 0.0));
    coeffs.insert(1, Complex64::new(0.3, 0.0));
    let wound = Symbol::laurent(coeffs)?;
    println!("z^2 + 0.3 z winding: {}", wound.winding_number()?.winding);

    let desc = SymbolDescriptor::from_json(r#"{"kind":"gessel","t":0.5}"#)?;
    let gessel = Symbol::from_descriptor(&desc)?;
    println!(
        "gessel(0.5) sup norm {:.6}, decay to 1e-15 at |j| = {}",
        gessel.sup_norm(),
        gessel.decay_bound(1e-15)?
    );
    Ok(())
}
