mod common;

use std::f64::consts::PI;

use fluxspec::operators::apply_hamiltonian_descriptor;
use fluxspec::quadrature::gauss_jacobi_rule;
use fluxspec::{build_family, classify, gamma_exponent, inner_product, monopole_harmonic, Family, FluxConfig, Sector, SpectrumEntry};
use proptest::prelude::*;

fn sector(f: bool) -> Sector {
    if f {
        Sector::F1
    } else {
        Sector::F0
    }
}

fn family(t: bool) -> Family {
    if t {
        Family::Tilde
    } else {
        Family::Plain
    }
}

/// A family mode with degree `extra` above the smallest admissible one.
fn draw(q: f64, f: bool, t: bool, m: i64, extra: usize) -> Option<SpectrumEntry> {
    let config = FluxConfig::new(q, sector(f));
    let n = config.effective_m(m).unsigned_abs() as usize + extra;
    build_family(config, family(t), m, n).ok()
}

/// `int_{10^-k-1}^{10^-k} R(-1 + s)^2 ds` by Simpson's rule in `log10 s`.
fn shell(e: &SpectrumEntry, k: f64) -> f64 {
    let steps = 40;
    let h = 1.0 / steps as f64;
    (0..=steps)
        .map(|i| {
            let t = k + i as f64 * h;
            let s = 10f64.powf(-t);
            let w = if i == 0 || i == steps { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * e.descriptor.radial(-1.0 + s).powi(2) * s * std::f64::consts::LN_10
        })
        .sum::<f64>()
        * h
        / 3.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn modes_are_eigenfunctions(q in -2.0f64..3.0, f: bool, t: bool, m in -3i64..=3, extra in 0usize..5) {
        let Some(e) = draw(q, f, t, m, extra) else { return Ok(()) };
        prop_assume!(e.norm_class.is_normalizable());
        let rule = gauss_jacobi_rule(24, 0.0, 0.0).unwrap();
        let h = apply_hamiltonian_descriptor(&e.descriptor, rule.clone());
        let target: Vec<f64> = rule.nodes.iter().map(|&z| e.eigenvalue * e.descriptor.smooth(z)).collect();
        let scale = rule.nodes.iter().map(|&z| e.descriptor.smooth(z).abs()).fold(0.0, f64::max) * e.eigenvalue.abs().max(1.0);
        let gap = h.samples.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-9 * scale, "gap {} scale {}", gap, scale);
    }

    #[test]
    fn gamma_lines_at_fractional_flux(q in -2.0f64..3.0, t: bool, m in -4i64..=4, extra in 0usize..4) {
        prop_assume!((q - q.round()).abs() > 1e-3);
        let Some(e) = draw(q, false, t, m, extra) else { return Ok(()) };
        let expected = if t { m as f64 + 1.0 - q } else { q - 1.0 - m as f64 };
        prop_assert!((gamma_exponent(&e) - expected).abs() <= 1e-12);
    }

    #[test]
    fn classification_matches_norm_integral(q in -2.0f64..3.0, f: bool, t: bool, m in -3i64..=3, extra in 0usize..4) {
        let Some(e) = draw(q, f, t, m, extra) else { return Ok(()) };
        prop_assume!((e.gamma + 1.0).abs() >= 0.1);
        // shells shrink geometrically exactly when the norm integral converges
        let ratio = shell(&e, 12.0) / shell(&e, 6.0);
        prop_assert_eq!(ratio < 1.0, classify(e.gamma).is_normalizable(), "ratio {}", ratio);
    }
}

#[test]
fn integer_flux_families_collapse() {
    for q in -2..=3i64 {
        for sector in [Sector::F0, Sector::F1] {
            let config = FluxConfig::new(q as f64, sector);
            for m in -3i64..=3 {
                let base = config.effective_m(m).unsigned_abs() as usize;
                for n in base..base + 4 {
                    let Ok(t) = build_family(config, Family::Tilde, m, n) else { continue };
                    let beta = t.descriptor.jacobi.beta;
                    if beta < 0.0 && (n as f64) < -beta {
                        // below the reduction threshold the relation does not apply; such modes are never normalizable
                        assert!(!t.norm_class.is_normalizable(), "q={q} m={m} n={n}");
                        continue;
                    }
                    let partner = (0..n + 12).filter_map(|k| build_family(config, Family::Plain, m, k).ok()).find(|p| (p.eigenvalue - t.eigenvalue).abs() < 1e-9);
                    let p = partner.unwrap_or_else(|| panic!("q={q} F={} m={m} n={n}: no plain partner", sector.index()));
                    let pairs: Vec<(f64, f64)> = common::interior_points(11).iter().map(|&z| (t.descriptor.radial(z), p.descriptor.radial(z))).collect();
                    let c = pairs.iter().map(|(x, y)| x * y).sum::<f64>() / pairs.iter().map(|(_, y)| y * y).sum::<f64>();
                    let scale = pairs.iter().fold(1e-300f64, |s, (x, _)| s.max(x.abs()));
                    let gap = pairs.iter().map(|(x, y)| (x - c * y).abs()).fold(0.0, f64::max) / scale;
                    assert!(gap <= 1e-9, "q={q} F={} m={m} n={n}: {gap:e}", sector.index());
                }
            }
        }
    }
}

#[test]
fn harmonics_orthogonal_at_integer_flux() {
    for q in -2..=3i64 {
        for sector in [Sector::F0, Sector::F1] {
            for m in -3..=3 {
                let modes: Vec<SpectrumEntry> = (0..5).filter_map(|d| monopole_harmonic(q, sector, m, d).ok()).collect();
                for (i, a) in modes.iter().enumerate() {
                    for b in &modes[i + 1..] {
                        if (a.eigenvalue - b.eigenvalue).abs() < 1e-9 {
                            continue;
                        }
                        let norm = (inner_product(a, a, 64).unwrap() * inner_product(b, b, 64).unwrap()).sqrt();
                        let cross = inner_product(a, b, 64).unwrap() / norm;
                        assert!(cross.abs() <= 1e-10, "q={q} F={} m={m}: {cross:e}", sector.index());
                    }
                }
            }
        }
    }
}

#[test]
fn half_flux_pair_not_orthogonal() {
    let config = FluxConfig::new(0.5, Sector::F0);
    let p = build_family(config, Family::Plain, 0, 0).unwrap();
    let t = build_family(config, Family::Tilde, 0, 0).unwrap();
    assert!((inner_product(&p, &t, 64).unwrap() - 2.0 * PI).abs() <= 1e-10);
}
