//! Drivers that evaluate both sides of each determinant identity and report
//! the residual together with an error budget.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fredholm::{det_dense, fredholm_det_circle, fredholm_det_lattice, fredholm_det_multi_circle, DetResult};
use crate::kernels::{toeplitz, DiscreteKernel, Side};
use crate::symbol::{Dilated, Symbol};

/// Prefactors closer than this to zero are refused.
pub const SINGULAR_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    SingleS,
    SingleR,
    Multi,
    ColoredS,
    ColoredR,
    GesselConsistency,
    Lambda2Consistency,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: Value,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub prefactor: Complex64,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn relative_residual(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / 1f64.max(a.norm()).max(b.norm())
}

impl IdentityReport {
    pub(crate) fn new(
        identity_id: IdentityId,
        params: Value,
        lhs: Complex64,
        rhs: Complex64,
        prefactor: Complex64,
        budget: f64,
        tol: f64,
    ) -> Self {
        let residual = relative_residual(lhs, rhs);
        let pass = residual.is_finite() && residual <= tol.max(budget);
        IdentityReport {
            identity_id,
            params,
            lhs,
            rhs,
            prefactor,
            residual,
            budget,
            pass,
        }
    }

    /// One JSON line: `{identity_id, params, lhs:[re,im], rhs:[re,im], prefactor:[re,im], residual, budget, pass}`.
    pub fn to_json_line(&self) -> String {
        json!({
            "identity_id": self.identity_id,
            "params": self.params,
            "lhs": [self.lhs.re, self.lhs.im],
            "rhs": [self.rhs.re, self.rhs.im],
            "prefactor": [self.prefactor.re, self.prefactor.im],
            "residual": self.residual,
            "budget": self.budget,
            "pass": self.pass,
        })
        .to_string()
    }
}

/// Which half-line form of the single-interval identity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    S,
    R,
}

fn engine_tols(tol: f64) -> (f64, f64) {
    ((tol * 1e-2).max(1e-13), (tol * 1e-2).max(1e-15))
}

/// Budget only counts estimates from converged engines.
fn budget(parts: &[(&DetResult, f64)], scale: f64) -> f64 {
    if parts.iter().any(|(d, _)| !d.converged) {
        return 0.0;
    }
    parts.iter().map(|(d, w)| d.error_estimate * w).sum::<f64>() / scale
}

fn c64(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn singular_check(what: &'static str, value: Complex64) -> Result<()> {
    if value.norm() <= SINGULAR_MARGIN {
        Err(Error::NearSingularPrefactor {
            what,
            value: value.norm(),
        })
    } else {
        Ok(())
    }
}

/// `det(1 - s K_n) = (1+s)^{n+w} det(1 - s^2 S_n)` (form S) or
/// `(1-s)^{-n-w} det(1 - s^2 R_n)` (form R), `w` the winding number.
pub fn verify_single(sym: &Symbol, n: i64, s: Complex64, form: Form, tol: f64) -> Result<IdentityReport> {
    let winding = sym.winding_number()?.winding;
    let side = match form {
        Form::S => Side::S,
        Form::R => Side::R,
    };
    let kern = DiscreteKernel::new(sym, side, 1, crate::kernels::DEFAULT_COEFF_TOL)?;
    let id = match form {
        Form::S => IdentityId::SingleS,
        Form::R => IdentityId::SingleR,
    };
    half_line_identity(
        sym,
        &kern,
        n,
        s,
        form,
        winding,
        id,
        tol,
        json!({"n": n, "s": c64(s), "winding": winding}),
    )
}

#[allow(clippy::too_many_arguments)]
fn half_line_identity<F: crate::symbol::CircleFunction + ?Sized>(
    phi: &F,
    kern: &DiscreteKernel,
    n: i64,
    s: Complex64,
    form: Form,
    exponent_winding: i64,
    id: IdentityId,
    tol: f64,
    params: Value,
) -> Result<IdentityReport> {
    let e = n + exponent_winding;
    let prefactor = match form {
        Form::S => {
            singular_check("1+s", 1.0 + s)?;
            (1.0 + s).powi(e as i32)
        }
        Form::R => {
            singular_check("1-s", 1.0 - s)?;
            (1.0 - s).powi(-e as i32)
        }
    };
    let (ctol, ltol) = engine_tols(tol);
    let lhs = fredholm_det_circle(phi, n, s, ctol)?;
    let s2 = s * s;
    let lat = fredholm_det_lattice(kern, n, &|_| s2, ltol)?;
    let rhs = prefactor * lat.value;
    let scale = 1f64.max(lhs.value.norm()).max(rhs.norm());
    let b = budget(&[(&lhs, 1.0), (&lat, prefactor.norm())], scale);
    Ok(IdentityReport::new(id, params, lhs.value, rhs, prefactor, b, tol))
}

/// Multi-interval identity with breakpoints `n_1 <= ... <= n_k` and weights `s_1..s_k`
/// (`n_0 = 0`, `s_0 = 0`).
pub fn verify_multi(sym: &Symbol, n_vec: &[i64], s_vec: &[Complex64], tol: f64) -> Result<IdentityReport> {
    if n_vec.len() != s_vec.len() || n_vec.is_empty() {
        return Err(Error::LengthMismatch(format!(
            "{} breakpoints vs {} weights",
            n_vec.len(),
            s_vec.len()
        )));
    }
    if n_vec.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("breakpoints must be nondecreasing".into()));
    }
    let k = n_vec.len();
    let sk = s_vec[k - 1];
    singular_check("1+s_k", 1.0 + sk)?;
    let mut s_full = vec![Complex64::new(0.0, 0.0)];
    s_full.extend_from_slice(s_vec);
    let mut n_full = vec![0i64];
    n_full.extend_from_slice(n_vec);
    for &sj in &s_full[..k] {
        let d = 1.0 + sk - sj;
        if d.norm() <= SINGULAR_MARGIN {
            return Err(Error::SingularWeight(d.norm()));
        }
    }
    let winding = sym.winding_number()?.winding;
    let mut prefactor = (1.0 + sk).powi(winding as i32);
    for j in 0..k {
        prefactor *= (1.0 + sk - s_full[j]).powi((n_full[j + 1] - n_full[j]) as i32);
    }
    // weight on [n_j, n_{j+1}) for j = 1..k
    let band_weight: Vec<Complex64> = (1..=k).map(|j| sk * s_full[j] / (1.0 + sk - s_full[j])).collect();
    let weight = |i: i64| -> Complex64 {
        match n_vec.iter().rposition(|&nj| nj <= i) {
            Some(j) => band_weight[j],
            None => Complex64::new(0.0, 0.0),
        }
    };
    let (ctol, ltol) = engine_tols(tol);
    let lhs = fredholm_det_multi_circle(sym, n_vec, s_vec, ctol)?;
    let kern = DiscreteKernel::s(sym)?;
    let lat = fredholm_det_lattice(&kern, n_vec[0], &weight, ltol)?;
    let rhs = prefactor * lat.value;
    let scale = 1f64.max(lhs.value.norm()).max(rhs.norm());
    let b = budget(&[(&lhs, 1.0), (&lat, prefactor.norm())], scale);
    let params = json!({
        "n": n_vec,
        "s": s_vec.iter().map(|&z| c64(z)).collect::<Vec<_>>(),
        "winding": winding,
    });
    Ok(IdentityReport::new(
        IdentityId::Multi,
        params,
        lhs.value,
        rhs,
        prefactor,
        b,
        tol,
    ))
}

/// Winding used in the exponent of the colored identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoredExponent {
    /// `#(phi)` of the base symbol.
    Base,
    /// `#(phi(z^m)) = m #(phi)`.
    Dilated,
}

/// Colored identity: circle side with `phi(z^m)`, lattice side with the
/// index-filtered kernel. Also probes the block structure of the colored
/// kernel and fails the report if an off-block entry is nonzero.
pub fn verify_colored(
    sym: &Symbol,
    m: u32,
    n: i64,
    s: Complex64,
    form: Form,
    exponent: ColoredExponent,
    tol: f64,
) -> Result<IdentityReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("color count must be >= 1".into()));
    }
    let base = sym.winding_number()?.winding;
    let w = match exponent {
        ColoredExponent::Base => base,
        ColoredExponent::Dilated => base * m as i64,
    };
    let side = match form {
        Form::S => Side::S,
        Form::R => Side::R,
    };
    let kern = DiscreteKernel::colored(sym, side, m)?;
    let id = match form {
        Form::S => IdentityId::ColoredS,
        Form::R => IdentityId::ColoredR,
    };
    let block_ok = block_structure_holds(&kern, n);
    let params = json!({
        "m": m, "n": n, "s": c64(s), "winding": base, "exponent": exponent, "block_structure": block_ok,
    });
    let phi = Dilated { symbol: sym, m };
    let mut report = half_line_identity(&phi, &kern, n, s, form, w, id, tol, params)?;
    report.pass &= block_ok;
    Ok(report)
}

/// Off-block entries `(a, b)` with `a != b (mod m)` vanish exactly, and
/// on-block entries match the plain kernel at `(floor(a/m), floor(b/m))`.
pub fn block_structure_holds(colored: &DiscreteKernel, n: i64) -> bool {
    let m = colored.colors as i64;
    let plain = DiscreteKernel {
        colors: 1,
        ..colored.clone()
    };
    let lo = n - 2 * m;
    let hi = n + 3 * m + 2;
    (lo..=hi).all(|a| {
        (lo..=hi).all(|b| {
            let v = colored.entry(a, b);
            if (a - b).rem_euclid(m) != 0 {
                v == Complex64::new(0.0, 0.0)
            } else {
                v == plain.entry(a.div_euclid(m), b.div_euclid(m))
            }
        })
    })
}

/// Three evaluations of the largest-row distribution at `(t, n)`:
/// Toeplitz `e^{-t^2} det T_n`, circle `2^{-n} det(1 - K_n)`, lattice `det(1 - chi S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GesselChain {
    pub toeplitz: f64,
    pub circle: f64,
    pub lattice: f64,
}

pub fn gessel_chain_values(t: f64, n: i64, tol: f64) -> Result<(GesselChain, f64)> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!("n must be >= 1, got {n}")));
    }
    let (ctol, ltol) = engine_tols(tol);
    let g = Symbol::gessel(t)?;
    let b = Symbol::bessel(t)?;
    let toe = det_dense(&toeplitz(&g, n as usize)?.to_dense())? * (-t * t).exp();
    let circ = fredholm_det_circle(&b, n, Complex64::new(1.0, 0.0), ctol)?;
    let lat = fredholm_det_lattice(&DiscreteKernel::s(&b)?, n, &|_| Complex64::new(1.0, 0.0), ltol)?;
    let circle = circ.value * 0.5f64.powi(n as i32);
    let chain = GesselChain {
        toeplitz: toe.re,
        circle: circle.re,
        lattice: lat.value.re,
    };
    let budget = if circ.converged && lat.converged {
        circ.error_estimate * 0.5f64.powi(n as i32) + lat.error_estimate + toe.norm() * 1e-14 * n as f64
    } else {
        0.0
    };
    Ok((chain, budget))
}

pub fn verify_gessel_chain(t: f64, n: i64, tol: f64) -> Result<IdentityReport> {
    let (v, budget) = gessel_chain_values(t, n, tol)?;
    let pairs = [(v.toeplitz, v.circle), (v.circle, v.lattice), (v.toeplitz, v.lattice)];
    let residual = pairs
        .iter()
        .map(|&(a, b)| relative_residual(Complex64::new(a, 0.0), Complex64::new(b, 0.0)))
        .fold(0.0, f64::max);
    let params = json!({"t": t, "n": n, "toeplitz": v.toeplitz, "circle": v.circle, "lattice": v.lattice});
    let mut report = IdentityReport::new(
        IdentityId::GesselConsistency,
        params,
        Complex64::new(v.toeplitz, 0.0),
        Complex64::new(v.lattice, 0.0),
        Complex64::new(0.5f64.powi(n as i32), 0.0),
        budget,
        tol,
    );
    report.residual = residual;
    report.pass = residual <= tol.max(budget);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_symbol() {
        let one = Symbol::monomial(0).unwrap();
        let r = verify_single(&one, 4, c(0.5), Form::S, 1e-12).unwrap();
        assert!(r.pass && r.residual < 1e-12);
        assert!((r.lhs - c(1.5f64.powi(4))).norm() < 1e-12);
    }

    #[test]
    fn monomials_both_forms() {
        let s: f64 = 0.4;
        for k in -3..=3 {
            let sym = Symbol::monomial(k).unwrap();
            for n in -2..=4 {
                let closed = (1.0f64 + s).powi((n + k) as i32) * (1.0f64 - s * s).powi(0.max(-k - n) as i32);
                for form in [Form::S, Form::R] {
                    let r = verify_single(&sym, n, c(s), form, 1e-10).unwrap();
                    assert!(r.pass, "k={k} n={n} {form:?}: {}", r.residual);
                    assert!((r.lhs - c(closed)).norm() < 1e-10 * closed.max(1.0));
                }
            }
        }
    }

    #[test]
    fn bessel_both_forms() {
        let sym = Symbol::bessel(1.0).unwrap();
        for n in 0..=6 {
            for s in [0.25, 0.5, 0.9] {
                for form in [Form::S, Form::R] {
                    let r = verify_single(&sym, n, c(s), form, 1e-8).unwrap();
                    assert!(r.residual < 1e-8, "n={n} s={s} {form:?}: {}", r.residual);
                }
            }
        }
    }

    #[test]
    fn singular_prefactor_refused() {
        let sym = Symbol::bessel(1.0).unwrap();
        assert!(matches!(
            verify_single(&sym, 1, c(-1.0), Form::S, 1e-8),
            Err(Error::NearSingularPrefactor { .. })
        ));
        assert!(matches!(
            verify_single(&sym, 1, c(1.0), Form::R, 1e-8),
            Err(Error::NearSingularPrefactor { .. })
        ));
    }

    #[test]
    fn multi_examples() {
        let sym = Symbol::bessel(1.0).unwrap();
        let r = verify_multi(&sym, &[2, 5], &[c(0.3), c(0.6)], 1e-8).unwrap();
        assert!(r.residual < 1e-8, "{}", r.residual);
        let single = verify_single(&sym, 3, c(0.5), Form::S, 1e-10).unwrap();
        let collapsed = verify_multi(&sym, &[3], &[c(0.5)], 1e-10).unwrap();
        assert!((single.lhs - collapsed.lhs).norm() < 1e-10);
        assert!((single.rhs - collapsed.rhs).norm() < 1e-10);
        let zeroed = verify_multi(&sym, &[1, 4], &[c(0.0), c(0.5)], 1e-10).unwrap();
        let at4 = verify_single(&sym, 4, c(0.5), Form::S, 1e-10).unwrap();
        assert!((zeroed.rhs - at4.rhs).norm() < 1e-10);
        assert!(matches!(
            verify_multi(&sym, &[1, 2], &[c(0.4), c(-0.6)], 1e-8),
            Err(Error::SingularWeight(_))
        ));
        assert!(matches!(
            verify_multi(&sym, &[1, 2], &[c(0.5)], 1e-8),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn colored_examples() {
        let sym = Symbol::bessel(0.8).unwrap();
        for n in 0..=4 {
            let r = verify_colored(&sym, 2, n, c(0.5), Form::S, ColoredExponent::Base, 1e-8).unwrap();
            assert!(r.pass, "n={n}: {}", r.residual);
        }
        let plain = verify_single(&sym, 2, c(0.5), Form::S, 1e-10).unwrap();
        let m1 = verify_colored(&sym, 1, 2, c(0.5), Form::S, ColoredExponent::Base, 1e-10).unwrap();
        assert!((plain.lhs - m1.lhs).norm() < 1e-12 && (plain.rhs - m1.rhs).norm() < 1e-12);
    }

    #[test]
    fn colored_exponent_scales_with_color_count() {
        let wound = Symbol::product(vec![
            Symbol::monomial(1).unwrap(),
            Symbol::laurent([(0, c(1.0)), (-1, c(0.3))].into_iter().collect()).unwrap(),
        ])
        .unwrap();
        let base = verify_colored(&wound, 2, 1, c(0.5), Form::S, ColoredExponent::Base, 1e-8).unwrap();
        let dilated = verify_colored(&wound, 2, 1, c(0.5), Form::S, ColoredExponent::Dilated, 1e-8).unwrap();
        assert!(!base.pass);
        assert!(dilated.pass, "{}", dilated.residual);
    }

    #[test]
    fn gessel_chain_examples() {
        let r = verify_gessel_chain(0.5, 1, 1e-10).unwrap();
        let want = (-0.25f64).exp() * 1.266_065_877_752_008_4;
        assert!(r.pass && (r.lhs.re - want).abs() < 1e-12);
        let tiny = verify_gessel_chain(1e-6, 3, 1e-10).unwrap();
        assert!((tiny.lhs.re - 1.0).abs() < 1e-10);
        for n in 1..=6 {
            assert!(verify_gessel_chain(1.0, n, 1e-8).unwrap().residual < 1e-8);
        }
    }

    #[test]
    fn json_line_shape() {
        let r = verify_single(&Symbol::monomial(0).unwrap(), 3, c(0.5), Form::S, 1e-10).unwrap();
        let v: Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["identity_id"], "single_s");
        assert!((v["lhs"][0].as_f64().unwrap() - 3.375).abs() < 1e-12);
        assert_eq!(v["pass"], true);
    }
}
