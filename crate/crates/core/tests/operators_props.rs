use fluxspec::modes::descriptor_inner_product;
use fluxspec::operators::{apply_supercharge, hamiltonian_matrix_element, hermiticity_defect, susy_algebra_residuals};
use fluxspec::{build_family, Family, FluxConfig, NormClass, Sector, SpectrumEntry};
use proptest::prelude::*;

fn draw(q: f64, f: bool, t: bool, m: i64, extra: usize) -> Option<SpectrumEntry> {
    let config = FluxConfig::new(q, if f { Sector::F1 } else { Sector::F0 });
    let n = config.effective_m(m).unsigned_abs() as usize + extra;
    build_family(config, if t { Family::Tilde } else { Family::Plain }, m, n).ok()
}

/// Slope in `q` of the family's gamma line.
fn slope(e: &SpectrumEntry) -> f64 {
    match (e.descriptor.config.sector, e.descriptor.family.unwrap()) {
        (Sector::F0, Family::Plain) | (Sector::F1, Family::Tilde) => 1.0,
        _ => -1.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn closed_form_images_match_grid(q in -2.0f64..3.0, f: bool, t: bool, m in -3i64..=3, extra in 0usize..4) {
        let Some(e) = draw(q, f, t, m, extra) else { return Ok(()) };
        prop_assume!(e.norm_class.is_normalizable());
        let r = susy_algebra_residuals(&e, 64).unwrap();
        prop_assert!(r.grid_vs_closed_form <= 1e-8, "{}", r.grid_vs_closed_form);
    }

    #[test]
    fn supercharge_shifts_gamma_along_the_line(q in -2.0f64..3.0, f: bool, t: bool, m in -3i64..=3, extra in 0usize..4) {
        prop_assume!((q - q.round()).abs() > 1e-3);
        let Some(e) = draw(q, f, t, m, extra) else { return Ok(()) };
        let img = apply_supercharge(&e).unwrap();
        prop_assume!(!img.descriptor.is_zero());
        // Q moves sector-0 lines along their slope; Qbar undoes it from sector 1
        let shift = if f { -slope(&e) } else { slope(&e) };
        prop_assert!((img.gamma - (e.gamma + shift)).abs() <= 1e-12, "{} -> {}", e.gamma, img.gamma);
    }

    #[test]
    fn rayleigh_quotient_is_eigenvalue(q in -2.0f64..3.0, f: bool, t: bool, m in -3i64..=3, extra in 0usize..4) {
        let Some(e) = draw(q, f, t, m, extra) else { return Ok(()) };
        prop_assume!(e.norm_class.is_normalizable());
        let d = &e.descriptor.canonical();
        let num = hamiltonian_matrix_element(d, d, 64).unwrap();
        let den = descriptor_inner_product(d, d, 64).unwrap();
        prop_assert!((num / den - e.eigenvalue).abs() <= 1e-9 * e.eigenvalue.abs().max(1.0));
    }
}

#[test]
fn regular_pairs_symmetric_at_integer_flux() {
    for q in -2..=3 {
        for sector in [Sector::F0, Sector::F1] {
            for m in -2i64..=2 {
                let modes: Vec<SpectrumEntry> = (0..6)
                    .flat_map(|n| [Family::Plain, Family::Tilde].map(|fam| build_family(FluxConfig::new(q as f64, sector), fam, m, n)))
                    .filter_map(Result::ok)
                    .filter(|e| e.norm_class == NormClass::Regular)
                    .collect();
                for a in &modes {
                    for b in &modes {
                        let d = hermiticity_defect(a, b, 64).unwrap();
                        assert!(d.abs() <= 1e-10, "q={q} m={m}: {d:e}");
                    }
                }
            }
        }
    }
}

#[test]
fn cross_pair_defect_nonzero_below_unit_flux() {
    for q in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let config = FluxConfig::new(q, Sector::F0);
        let p = build_family(config, Family::Plain, 0, 0).unwrap();
        let t = build_family(config, Family::Tilde, 0, 0).unwrap();
        assert!(hermiticity_defect(&p, &t, 64).unwrap().abs() >= 1e-2, "q={q}");
    }
}
