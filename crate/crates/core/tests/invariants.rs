use std::collections::BTreeMap;

use num_complex::Complex64;
use plancherel_fredholm::bessel::{bessel_i, bessel_j};
use plancherel_fredholm::identities::{verify_single, Form};
use plancherel_fredholm::kernels::DiscreteKernel;
use plancherel_fredholm::oracle::{dim_syt, enumerate_partitions, factorial, lis_patience, rsk_shape};
use plancherel_fredholm::plancherel::{row_cdf, PoissonizedModel};
use plancherel_fredholm::symbol::{CircleFunction, Symbol, Which};
use proptest::prelude::*;

fn small_laurent() -> impl Strategy<Value = (i64, f64, f64)> {
    (-2i64..=2, -0.6f64..0.6, -0.6f64..0.6)
}

fn build(w: i64, a: f64, b: f64) -> Symbol {
    let mut c = BTreeMap::new();
    c.insert(w + 1, Complex64::new(a, 0.0));
    c.insert(w, Complex64::new(1.0 + a * b, 0.0));
    c.insert(w - 1, Complex64::new(b, 0.0));
    Symbol::laurent(c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inverse_coefficients_convolve_to_delta((w, a, b) in small_laurent(), j in -3i64..=3) {
        let sym = build(w, a, b);
        let mut acc = Complex64::new(0.0, 0.0);
        for l in -80..=80 {
            acc += sym.fourier_coeff(Which::Direct, l).unwrap() * sym.fourier_coeff(Which::Inverse, j - l).unwrap();
        }
        let want = if j == 0 { 1.0 } else { 0.0 };
        prop_assert!((acc - want).norm() < 1e-10, "j={} got {}", j, acc);
    }

    #[test]
    fn winding_is_additive((w1, a1, b1) in small_laurent(), (w2, a2, b2) in small_laurent()) {
        let p = build(w1, a1, b1);
        let q = build(w2, a2, b2);
        let pq = Symbol::product(vec![p.clone(), q.clone()]).unwrap();
        prop_assert_eq!(pq.winding_number().unwrap().winding, w1 + w2);
    }

    #[test]
    fn product_evaluates_pointwise((w1, a1, b1) in small_laurent(), (w2, a2, b2) in small_laurent(), theta in 0.0f64..std::f64::consts::TAU) {
        let p = build(w1, a1, b1);
        let q = build(w2, a2, b2);
        let pq = Symbol::product(vec![p.clone(), q.clone()]).unwrap();
        let z = Complex64::from_polar(1.0, theta);
        prop_assert!((pq.eval(z) - p.eval(z) * q.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn bessel_recurrences(n in 1i64..20, x in 0.1f64..8.0) {
        let j = bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2.0 * n as f64 / x * bessel_j(n, x);
        let i = bessel_i(n - 1, x) - bessel_i(n + 1, x) - 2.0 * n as f64 / x * bessel_i(n, x);
        prop_assert!(j.abs() < 1e-12);
        prop_assert!(i.abs() < 1e-12 * bessel_i(n - 1, x).max(1.0));
    }

    #[test]
    fn identity_holds_for_random_symbols((w, a, b) in small_laurent(), n in -3i64..6, s in -0.7f64..0.9) {
        let sym = build(w, a, b);
        for form in [Form::S, Form::R] {
            let r = verify_single(&sym, n, Complex64::new(s, 0.0), form, 1e-9).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }

    #[test]
    fn lattice_kernel_is_hermitian_for_bessel(t in 0.1f64..2.0, i in -5i64..10, j in -5i64..10) {
        let k = DiscreteKernel::s(&Symbol::bessel(t).unwrap()).unwrap();
        prop_assert!((k.entry(i, j) - k.entry(j, i).conj()).norm() < 1e-14);
    }

    #[test]
    fn row_cdfs_are_ordered(t in 0.2f64..3.0, n in 0i64..10) {
        let m = PoissonizedModel::new(t).unwrap();
        let p1 = row_cdf(&m, 1, n, 1e-12).unwrap();
        let p2 = row_cdf(&m, 2, n, 1e-12).unwrap();
        let p1n = row_cdf(&m, 1, n + 1, 1e-12).unwrap();
        prop_assert!((0.0..=1.0).contains(&p1) && p1 <= p2 + 1e-12 && p1 <= p1n + 1e-12);
    }

    #[test]
    fn rsk_first_row_is_lis(seq in proptest::collection::vec(0u32..50, 0..30)) {
        let shape = rsk_shape(&seq);
        prop_assert_eq!(shape.size(), seq.len());
        prop_assert_eq!(shape.row(1) as usize, lis_patience(&seq));
    }
}

#[test]
fn squared_dimensions_sum_to_factorial() {
    for n in 0..=12 {
        let total: num_bigint::BigUint = enumerate_partitions(n).unwrap().iter().map(|l| dim_syt(l).pow(2)).sum();
        assert_eq!(total, factorial(n), "n={n}");
    }
}
