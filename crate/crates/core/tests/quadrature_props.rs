use fluxspec::quadrature::{gauss_jacobi_rule, weight_mass};
use fluxspec::specialfn::jacobi_eval;
use fluxspec::JacobiSpec;
use proptest::prelude::*;

/// `int (1-z)^a (1+z)^b (1+z)^k dz` via the mass of the shifted weight.
fn moment(a: f64, b: f64, k: usize) -> f64 {
    weight_mass(a, b + k as f64)
}

proptest! {
    #[test]
    fn exact_on_polynomials(
        npoints in 2usize..20,
        a in -0.9f64..2.0,
        b in -0.9f64..2.0,
        coeffs in prop::collection::vec(-1.0f64..1.0, 40),
    ) {
        let rule = gauss_jacobi_rule(npoints, a, b).unwrap();
        let degree = 2 * npoints - 1;
        let c = &coeffs[..degree.min(coeffs.len() - 1) + 1];
        // polynomial in (1 + z), positive coefficients keep the reference well conditioned
        let poly = |z: f64| c.iter().enumerate().map(|(k, ck)| (ck.abs() + 0.1) * (1.0 + z).powi(k as i32)).sum::<f64>();
        let exact: f64 = c.iter().enumerate().map(|(k, ck)| (ck.abs() + 0.1) * moment(a, b, k)).sum();
        let got = rule.integrate(poly);
        prop_assert!((got - exact).abs() <= 1e-11 * exact.abs(), "{} vs {}", got, exact);
    }

    #[test]
    fn nodes_and_weights_well_formed(npoints in 1usize..40, a in -0.9f64..3.0, b in -0.9f64..3.0) {
        let rule = gauss_jacobi_rule(npoints, a, b).unwrap();
        prop_assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rule.weights.iter().all(|&w| w > 0.0));
        let total: f64 = rule.weights.iter().sum();
        prop_assert!((total - weight_mass(a, b)).abs() <= 1e-12 * weight_mass(a, b));
    }

    #[test]
    fn jacobi_polynomials_orthogonal(a in -0.9f64..3.0, b in -0.9f64..3.0, n in 0usize..8, k in 0usize..8) {
        prop_assume!(n != k);
        let rule = gauss_jacobi_rule(10, a, b).unwrap();
        let (pn, pk) = (JacobiSpec::new(n, a, b), JacobiSpec::new(k, a, b));
        let ip = |x: JacobiSpec, y: JacobiSpec| rule.integrate(|z| jacobi_eval(x, z) * jacobi_eval(y, z));
        let cross = ip(pn, pk) / (ip(pn, pn) * ip(pk, pk)).sqrt();
        prop_assert!(cross.abs() <= 1e-10);
    }
}

#[test]
fn convergence_on_smooth_integrands() {
    for (a, b) in [(0.0, 0.0), (0.5, -0.5), (-0.5, 1.5)] {
        // pole at z = 1.2 keeps 8 points visibly unconverged
        let f = |z: f64| 1.0 / (1.2 - z);
        let vals: Vec<f64> = [8, 16, 32].iter().map(|&n| gauss_jacobi_rule(n, a, b).unwrap().integrate(f)).collect();
        let (d1, d2) = ((vals[1] - vals[0]).abs(), (vals[2] - vals[1]).abs());
        assert!(d1 > 1e-8 && d2 <= d1 / 1e3, "a={a} b={b}: {d1:e} then {d2:e}");
    }
}
