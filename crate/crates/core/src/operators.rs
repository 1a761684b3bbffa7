//! Hamiltonian and supercharges acting on modes.
//!
//! Supercharges act on the full radial factor `R(z)` of `e^{i m phi} R(z)`
//! with `s = sqrt((1 - z) / (1 + z))`:
//!
//! * `Q` (`F = 0 -> 1`, `m -> m + 1`): `Q R = s [-(1 + z) R' - kappa R - m R / (1 - z)]`
//! * `Qbar` (`F = 1 -> 0`, `m -> m - 1`): `Qbar R = s [(1 + z) R' + kappa1 R - m R / (1 - z)]`
//!
//! with `kappa1 = (1 + q) / 2`. In this phase convention `H0 = Qbar Q` and
//! `H1 = Q Qbar` hold with real coefficients.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{
    build_family, entry_from_descriptor, Family, FluxConfig, ModeDescriptor, NormClass, Sector, SpectrumEntry,
};
use crate::quadrature::{gauss_jacobi_rule, QuadratureRule};
use crate::specialfn::JacobiSpec;

/// Radial function sampled at quadrature nodes, stored as
/// `(1 - z)^a (1 + z)^b * samples[i]` with `(a, b) = endpoint_exponents`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub config: FluxConfig,
    pub m: i64,
    pub rule: Arc<QuadratureRule>,
    pub samples: Vec<f64>,
    pub endpoint_exponents: (f64, f64),
}

impl GridFunction {
    pub fn from_descriptor(d: &ModeDescriptor, rule: Arc<QuadratureRule>) -> Self {
        let samples = rule.nodes.iter().map(|&z| d.smooth(z)).collect();
        Self { config: d.config, m: d.m, rule, samples, endpoint_exponents: (d.a_exp, d.b_exp) }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.rule.nodes
    }

    /// Radial value at node `i`.
    pub fn radial(&self, i: usize) -> f64 {
        let z = self.rule.nodes[i];
        let (a, b) = self.endpoint_exponents;
        (1.0 - z).powf(a) * (1.0 + z).powf(b) * self.samples[i]
    }

    /// Smooth samples re-expressed against other endpoint exponents.
    pub fn samples_with_exponents(&self, a: f64, b: f64) -> Vec<f64> {
        let (a0, b0) = self.endpoint_exponents;
        self.nodes()
            .iter()
            .zip(&self.samples)
            .map(|(&z, &s)| (1.0 - z).powf(a0 - a) * (1.0 + z).powf(b0 - b) * s)
            .collect()
    }
}

/// Polynomial differentiation matrix on arbitrary distinct nodes
/// (barycentric form).
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut w: Vec<f64> = (0..n)
        .map(|j| 1.0 / (0..n).filter(|&k| k != j).map(|k| 2.0 * (nodes[j] - nodes[k])).product::<f64>())
        .collect();
    let scale = w.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    w.iter_mut().for_each(|x| *x /= scale);
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                d[i][j] = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                diag -= d[i][j];
            }
        }
        d[i][i] = diag;
    }
    d
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `H` applied to `(1 - z)^a (1 + z)^b S(z)` at one point, returned without
/// the endpoint factor. Written in the effective `F = 0` variables with
/// `F = |w|^{-M} R`:
/// `H F = (z^2 - 1) F'' + 2 (z + M) F' + [2 k (k + M) / (1 + z) + k (1 - k)] F`.
#[allow(clippy::too_many_arguments)]
fn hamiltonian_bracket(config: &FluxConfig, m: i64, a: f64, b: f64, z: f64, s: f64, s1: f64, s2: f64) -> f64 {
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    let aa = a - big_m / 2.0;
    let bb = b + big_m / 2.0;
    let l = -aa / (1.0 - z) + bb / (1.0 + z);
    let lp = -aa / (1.0 - z).powi(2) - bb / (1.0 + z).powi(2);
    let f1 = s1 + l * s;
    let f2 = s2 + 2.0 * l * s1 + (l * l + lp) * s;
    (z * z - 1.0) * f2 + 2.0 * (z + big_m) * f1 + (2.0 * k * (k + big_m) / (1.0 + z) + k * (1.0 - k)) * s
}

/// `H Psi` for a closed-form mode, sampled at the nodes of `rule` using exact
/// Jacobi derivatives.
pub fn apply_hamiltonian_descriptor(d: &ModeDescriptor, rule: Arc<QuadratureRule>) -> GridFunction {
    let samples = rule
        .nodes
        .iter()
        .map(|&z| {
            hamiltonian_bracket(
                &d.config,
                d.m,
                d.a_exp,
                d.b_exp,
                z,
                d.smooth(z),
                d.smooth_derivative(z),
                d.smooth_second_derivative(z),
            )
        })
        .collect();
    GridFunction { config: d.config, m: d.m, rule, samples, endpoint_exponents: (d.a_exp, d.b_exp) }
}

/// `H Psi` for sampled data, with derivatives from polynomial interpolation
/// through the nodes.
pub fn apply_hamiltonian(g: &GridFunction) -> GridFunction {
    let dm = differentiation_matrix(g.nodes());
    let s1 = mat_vec(&dm, &g.samples);
    let s2 = mat_vec(&dm, &s1);
    let (a, b) = g.endpoint_exponents;
    let samples = (0..g.samples.len())
        .map(|i| hamiltonian_bracket(&g.config, g.m, a, b, g.nodes()[i], g.samples[i], s1[i], s2[i]))
        .collect();
    GridFunction { samples, ..g.clone() }
}

fn expect_sector(config: &FluxConfig, expected: Sector) -> Result<()> {
    if config.sector != expected {
        return Err(Error::SectorMismatch { expected: expected.index(), got: config.sector.index() });
    }
    Ok(())
}

/// `Q` on sampled data; output exponents are lowered by one half at each end.
pub fn apply_q_grid(g: &GridFunction) -> Result<GridFunction> {
    expect_sector(&g.config, Sector::F0)?;
    let dm = differentiation_matrix(g.nodes());
    let s1 = mat_vec(&dm, &g.samples);
    let (a, b) = g.endpoint_exponents;
    let (m, k) = (g.m as f64, g.config.kappa);
    let samples = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &z)| -(1.0 - z * z) * s1[i] + (a * (1.0 + z) - (b + k) * (1.0 - z) - m) * g.samples[i])
        .collect();
    Ok(GridFunction {
        config: g.config.with_sector(Sector::F1),
        m: g.m + 1,
        rule: Arc::clone(&g.rule),
        samples,
        endpoint_exponents: (a - 0.5, b - 0.5),
    })
}

/// `Qbar` on sampled data; output exponents are lowered by one half at each end.
pub fn apply_qbar_grid(g: &GridFunction) -> Result<GridFunction> {
    expect_sector(&g.config, Sector::F1)?;
    let dm = differentiation_matrix(g.nodes());
    let s1 = mat_vec(&dm, &g.samples);
    let (a, b) = g.endpoint_exponents;
    let (m, k1) = (g.m as f64, (1.0 + g.config.q) / 2.0);
    let samples = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &z)| (1.0 - z * z) * s1[i] - a * (1.0 + z) * g.samples[i] + (b + k1) * (1.0 - z) * g.samples[i] - m * g.samples[i])
        .collect();
    Ok(GridFunction {
        config: g.config.with_sector(Sector::F0),
        m: g.m - 1,
        rule: Arc::clone(&g.rule),
        samples,
        endpoint_exponents: (a - 0.5, b - 0.5),
    })
}

const MATCH_POINTS: [f64; 7] = [-0.83, -0.52, -0.21, 0.07, 0.34, 0.61, 0.88];

/// Proportionality factor `r` with `raw = r * cand` (both canonical), if the
/// two agree pointwise to `1e-9`.
pub(crate) fn proportionality(raw: &ModeDescriptor, cand: &ModeDescriptor) -> Option<f64> {
    proportionality_residual(raw, cand).and_then(|(r, err)| (err <= 1e-9).then_some(r))
}

/// Least-squares factor `r` with `d1 ~ r * d2` and the largest pointwise
/// deviation relative to `max |d1|`, for descriptors whose canonical forms share
/// exponents and degree; `None` when the shapes differ.
pub fn proportionality_residual(raw: &ModeDescriptor, cand: &ModeDescriptor) -> Option<(f64, f64)> {
    let (raw, cand) = (&raw.canonical(), &cand.canonical());
    if (raw.a_exp - cand.a_exp).abs() > 1e-9 || (raw.b_exp - cand.b_exp).abs() > 1e-9 || raw.jacobi.n != cand.jacobi.n {
        return None;
    }
    let rv: Vec<f64> = MATCH_POINTS.iter().map(|&z| raw.smooth(z)).collect();
    let cv: Vec<f64> = MATCH_POINTS.iter().map(|&z| cand.smooth(z)).collect();
    let cc: f64 = cv.iter().map(|c| c * c).sum();
    if cc == 0.0 {
        return None;
    }
    let r = rv.iter().zip(&cv).map(|(a, b)| a * b).sum::<f64>() / cc;
    let scale = rv.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    let err = rv.iter().zip(&cv).fold(0.0f64, |acc, (a, b)| acc.max((a - r * b).abs()));
    Some((r, err / scale))
}

/// Rewrites a raw image as a multiple of a family member when one matches.
fn identify(raw: ModeDescriptor, hint: (Family, usize)) -> ModeDescriptor {
    let rc = raw.canonical();
    if rc.is_zero() {
        return rc;
    }
    let span = rc.jacobi.n + raw.m.unsigned_abs() as usize + raw.config.q.abs().ceil() as usize + 4;
    let other = match hint.0 {
        Family::Plain => Family::Tilde,
        Family::Tilde => Family::Plain,
    };
    let candidates = std::iter::once(hint).chain([hint.0, other].into_iter().flat_map(|f| (0..=span).map(move |n| (f, n))));
    for (family, n) in candidates {
        let Ok(cand) = build_family(raw.config, family, raw.m, n) else { continue };
        let cc = cand.descriptor.canonical();
        if let Some(r) = proportionality(&rc, &cc) {
            let mut d = cand.descriptor;
            d.coeff *= r;
            return d;
        }
    }
    raw
}

fn zero_descriptor(config: FluxConfig, m: i64) -> ModeDescriptor {
    ModeDescriptor { m, family: None, n: 0, a_exp: 0.0, b_exp: 0.0, jacobi: JacobiSpec::new(0, 0.0, 0.0), coeff: 0.0, config }
}

/// Closed-form supercharge image of a family mode (either direction).
fn lower(entry: &SpectrumEntry) -> Result<SpectrumEntry> {
    let d = &entry.descriptor;
    let family = d.family.ok_or(Error::NotAFamilyMode)?;
    if d.is_zero() {
        let target = d.config.with_sector(d.config.sector.other());
        let m_out = d.m + if d.config.sector == Sector::F0 { 1 } else { -1 };
        return entry_from_descriptor(zero_descriptor(target, m_out), 0.0);
    }
    let unit = build_family(d.config, family, d.m, d.n)?;
    let scale = d.coeff / unit.descriptor.coeff;
    let sigma = if d.config.sector == Sector::F0 { 1.0 } else { -1.0 };
    let target = d.config.with_sector(d.config.sector.other());
    let big_m = d.config.effective_m(d.m) as f64;
    let k = d.config.effective_kappa();
    let m_out = (sigma * (big_m + 1.0)) as i64;
    let nf = d.n as f64;
    let a_out = (big_m + 1.0) / 2.0;
    let (g, hint, raw) = match family {
        Family::Plain => {
            let g = -(nf + 1.0 - 2.0 * k) / 2.0;
            if d.n == 0 || g == 0.0 {
                return entry_from_descriptor(zero_descriptor(target, m_out), 0.0);
            }
            let jac = JacobiSpec::new(d.n - 1, big_m + 1.0, 1.0 - big_m - 2.0 * k);
            let b_out = -(big_m + 1.0) / 2.0 + 1.0 - k;
            let hint_n = (d.n as i64 + big_m as i64).max(0) as usize;
            (g, (Family::Tilde, hint_n), (jac, b_out))
        }
        Family::Tilde => {
            let g = -(nf + big_m + 2.0 * k);
            if g == 0.0 {
                return entry_from_descriptor(zero_descriptor(target, m_out), 0.0);
            }
            let jac = JacobiSpec::new(d.n, big_m + 1.0, big_m + 2.0 * k - 1.0);
            let b_out = (big_m - 1.0) / 2.0 + k;
            let hint_n = (d.n as i64 + big_m as i64 + 1).max(0) as usize;
            (g, (Family::Plain, hint_n), (jac, b_out))
        }
    };
    let raw = ModeDescriptor {
        m: m_out,
        family: None,
        n: raw.0.n,
        a_exp: a_out,
        b_exp: raw.1,
        jacobi: raw.0,
        coeff: sigma * g * scale,
        config: target,
    };
    entry_from_descriptor(identify(raw, hint), entry.eigenvalue)
}

/// `Q Psi` for an `F = 0` family mode. The image is expressed as a multiple of
/// an `F = 1` family member when one matches; a zero mode maps to the zero
/// descriptor.
pub fn apply_q(entry: &SpectrumEntry) -> Result<SpectrumEntry> {
    expect_sector(&entry.descriptor.config, Sector::F0)?;
    lower(entry)
}

/// `Qbar Psi` for an `F = 1` family mode.
pub fn apply_qbar(entry: &SpectrumEntry) -> Result<SpectrumEntry> {
    expect_sector(&entry.descriptor.config, Sector::F1)?;
    lower(entry)
}

/// Supercharge in the natural direction for the entry's sector.
pub fn apply_supercharge(entry: &SpectrumEntry) -> Result<SpectrumEntry> {
    match entry.descriptor.config.sector {
        Sector::F0 => apply_q(entry),
        Sector::F1 => apply_qbar(entry),
    }
}

/// Residuals of the algebra on one mode.
///
/// `q_squared` and `qbar_squared` are structurally zero: a second `Q` has no
/// sector to map into. `anticommutator` compares `{Q, Qbar} Psi` with `H Psi`
/// and `grid_vs_closed_form` compares the closed-form supercharge image with
/// the operator applied to sampled data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraResiduals {
    pub q_squared: f64,
    pub qbar_squared: f64,
    pub anticommutator: f64,
    pub grid_vs_closed_form: f64,
}

fn relative_gap(lhs: &[f64], rhs: &[f64]) -> f64 {
    let scale = lhs.iter().chain(rhs).fold(1.0f64, |acc, x| acc.max(x.abs()));
    lhs.iter().zip(rhs).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs())) / scale
}

/// Smooth samples of a descriptor against given endpoint exponents.
fn descriptor_samples(d: &ModeDescriptor, nodes: &[f64], a: f64, b: f64) -> Vec<f64> {
    nodes.iter().map(|&z| (1.0 - z).powf(d.a_exp - a) * (1.0 + z).powf(d.b_exp - b) * d.smooth(z)).collect()
}

pub fn susy_algebra_residuals(entry: &SpectrumEntry, npoints: usize) -> Result<AlgebraResiduals> {
    let d = &entry.descriptor;
    let n = npoints.max(d.jacobi.n + 4);
    let rule = gauss_jacobi_rule(n, 0.0, 0.0)?;
    let h = apply_hamiltonian_descriptor(d, Arc::clone(&rule));
    let image = apply_supercharge(entry)?;
    let back = if image.descriptor.is_zero() {
        vec![0.0; n]
    } else if image.descriptor.family.is_some() {
        descriptor_samples(&apply_supercharge(&image)?.descriptor, &rule.nodes, d.a_exp, d.b_exp)
    } else {
        let g = GridFunction::from_descriptor(&image.descriptor, Arc::clone(&rule));
        let g = match g.config.sector {
            Sector::F0 => apply_q_grid(&g)?,
            Sector::F1 => apply_qbar_grid(&g)?,
        };
        g.samples_with_exponents(d.a_exp, d.b_exp)
    };
    let anticommutator = relative_gap(&back, &h.samples);

    let g = GridFunction::from_descriptor(d, Arc::clone(&rule));
    let g = match d.config.sector {
        Sector::F0 => apply_q_grid(&g)?,
        Sector::F1 => apply_qbar_grid(&g)?,
    };
    let (a, b) = g.endpoint_exponents;
    let closed = descriptor_samples(&image.descriptor, &rule.nodes, a, b);
    let grid_vs_closed_form = relative_gap(&closed, &g.samples);
    Ok(AlgebraResiduals { q_squared: 0.0, qbar_squared: 0.0, anticommutator, grid_vs_closed_form })
}

/// `<d1|H|d2>` with the covariant measure, `H` applied to `d2` in closed
/// form. Zero across different `m`.
pub fn hamiltonian_matrix_element(d1: &ModeDescriptor, d2: &ModeDescriptor, npoints: usize) -> Result<f64> {
    if d1.config.sector != d2.config.sector {
        return Err(Error::SectorMismatch { expected: d1.config.sector.index(), got: d2.config.sector.index() });
    }
    if d1.m != d2.m || d1.is_zero() || d2.is_zero() {
        return Ok(0.0);
    }
    let (c1, c2) = (d1.canonical(), d2.canonical());
    let (a, b) = (c1.a_exp + c2.a_exp, c1.b_exp + c2.b_exp);
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Divergent { a, b });
    }
    let rule = gauss_jacobi_rule(crate::modes::points_for(&c1, &c2, npoints), a, b)?;
    let h2 = apply_hamiltonian_descriptor(&c2, Arc::clone(&rule));
    Ok(PI * rule.nodes.iter().zip(&rule.weights).zip(&h2.samples).map(|((&z, &w), &h)| w * c1.smooth(z) * h).sum::<f64>())
}

/// `<e1|H|e2> - <e2|H|e1>` with the covariant measure; nonzero values signal
/// that `H` is not symmetric on the pair.
pub fn hermiticity_defect(e1: &SpectrumEntry, e2: &SpectrumEntry, npoints: usize) -> Result<f64> {
    let (d1, d2) = (&e1.descriptor, &e2.descriptor);
    if e1.norm_class == NormClass::NonNormalizable || e2.norm_class == NormClass::NonNormalizable {
        let (c1, c2) = (d1.canonical(), d2.canonical());
        return Err(Error::Divergent { a: c1.a_exp + c2.a_exp, b: c1.b_exp + c2.b_exp });
    }
    Ok(hamiltonian_matrix_element(d1, d2, npoints)? - hamiltonian_matrix_element(d2, d1, npoints)?)
}

/// Largest relative deviation of `-i d/dphi Psi` from `m Psi`, using
/// trigonometric differentiation on `samples` equispaced angles at each `z`.
pub fn angular_momentum_residual<F>(psi: F, m: i64, zs: &[f64], samples: usize) -> f64
where
    F: Fn(f64, f64) -> Complex64,
{
    let k = samples.max(2 * m.unsigned_abs() as usize + 4);
    let phis: Vec<f64> = (0..k).map(|j| 2.0 * PI * j as f64 / k as f64).collect();
    let half = k as i64 / 2;
    let modes: Vec<i64> = (0..k as i64).map(|j| if j < half { j } else { j - k as i64 }).collect();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &z in zs {
        let f: Vec<Complex64> = phis.iter().map(|&p| psi(z, p)).collect();
        let coeffs: Vec<Complex64> = modes
            .iter()
            .map(|&l| f.iter().zip(&phis).map(|(v, &p)| v * Complex64::from_polar(1.0, -(l as f64) * p)).sum::<Complex64>() / k as f64)
            .collect();
        for (j, &p) in phis.iter().enumerate() {
            let lz: Complex64 = modes
                .iter()
                .zip(&coeffs)
                .filter(|(&l, _)| !(k % 2 == 0 && l == -half))
                .map(|(&l, c)| c * l as f64 * Complex64::from_polar(1.0, l as f64 * p))
                .sum();
            worst = worst.max((lz - f[j] * m as f64).norm());
            scale = scale.max(f[j].norm());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

/// `-i d/dphi` check for a closed-form mode; the phase is `e^{i m phi}` by
/// construction, so this only guards against a mislabelled `m`.
pub fn angular_momentum_check(entry: &SpectrumEntry) -> f64 {
    let d = &entry.descriptor;
    angular_momentum_residual(|z, p| crate::modes::evaluate(d, z, p).unwrap_or_default(), d.m, &[-0.6, 0.1, 0.7], 32)
}

/// Monopole potential `A = -i dG + i dbar G` with `G = (q/2) ln(1 + |w|^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaugeField {
    pub q: f64,
}

impl GaugeField {
    pub fn new(q: f64) -> Self {
        Self { q }
    }

    /// `(A_w, A_wbar)` at `w`.
    pub fn potential(&self, w: Complex64) -> (Complex64, Complex64) {
        let u = w.norm_sqr();
        let i = Complex64::i();
        (i * self.q * w.conj() / (2.0 * (1.0 + u)), -i * self.q * w / (2.0 * (1.0 + u)))
    }

    /// `F_{w wbar} = -i q / (1 + |w|^2)^2`.
    pub fn field_strength(&self, w: Complex64) -> Complex64 {
        let u = w.norm_sqr();
        Complex64::new(0.0, -self.q / (1.0 + u).powi(2))
    }

    /// Field strength per unit covariant area, `(1 + |w|^2)^2 F_{w wbar}`; constant.
    pub fn area_density(&self, w: Complex64) -> Complex64 {
        let u = w.norm_sqr();
        (1.0 + u).powi(2) * self.field_strength(w)
    }

    /// Real flux density on the plane, `2 i F_{w wbar}`, in the orientation
    /// where the total flux is `q`.
    pub fn plane_density(&self, w: Complex64) -> f64 {
        (Complex64::new(0.0, 2.0) * self.field_strength(w)).re
    }
}

/// `(1 / 2 pi) int F` over the plane, computed in `z` where
/// `dx dy = (pi / 2) du` after the angular integral and `du = 2 dz / (1 + z)^2`.
pub fn flux_integral(q: f64, npoints: usize) -> Result<f64> {
    let field = GaugeField::new(q);
    let rule = gauss_jacobi_rule(npoints.max(1), 0.0, 0.0)?;
    let total = rule.integrate(|z| {
        let u = (1.0 - z) / (1.0 + z);
        let density = field.plane_density(Complex64::new(u.sqrt(), 0.0));
        PI * density * 2.0 / (1.0 + z).powi(2)
    });
    Ok(total / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{build_families, monopole_harmonic};

    fn f0(q: f64) -> FluxConfig {
        FluxConfig::new(q, Sector::F0)
    }

    #[test]
    fn differentiation_is_exact_on_polynomials() {
        let rule = gauss_jacobi_rule(12, 0.0, 0.0).unwrap();
        let dm = differentiation_matrix(&rule.nodes);
        let v: Vec<f64> = rule.nodes.iter().map(|z| z.powi(5) - 2.0 * z).collect();
        let dv = mat_vec(&dm, &v);
        for (i, z) in rule.nodes.iter().enumerate() {
            assert!((dv[i] - (5.0 * z.powi(4) - 2.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn eigenmodes_satisfy_h() {
        for (q, m, n) in [(0.5, 0, 0), (0.5, 1, 2), (0.5, -2, 3), (2.7, 1, 1), (-1.3, -1, 2)] {
            for fam in [Family::Plain, Family::Tilde] {
                let Ok(e) = build_family(f0(q), fam, m, n) else { continue };
                let rule = gauss_jacobi_rule(20, 0.0, 0.0).unwrap();
                let h = apply_hamiltonian_descriptor(&e.descriptor, rule.clone());
                for (i, &z) in rule.nodes.iter().enumerate() {
                    let s = e.descriptor.smooth(z);
                    assert!((h.samples[i] - e.eigenvalue * s).abs() < 1e-9 * (1.0 + s.abs() * e.eigenvalue.abs()), "{q} {m} {n} {fam:?}");
                }
            }
        }
    }

    #[test]
    fn half_flux_images() {
        let pair = build_families(f0(0.5), 0, 0);
        let plain = pair.plain.unwrap();
        assert!(apply_q(&plain).unwrap().descriptor.is_zero());
        let tilde = pair.tilde.unwrap();
        let img = apply_q(&tilde).unwrap();
        assert_eq!(img.descriptor.m, 1);
        assert_eq!(img.descriptor.family, Some(Family::Plain));
        assert!((img.gamma + 0.5).abs() < 1e-12);
        assert_eq!(img.norm_class, NormClass::SingularNormalizable);
        let e = build_family(f0(0.5), Family::Plain, -1, 1).unwrap();
        assert!((e.eigenvalue - 1.5).abs() < 1e-12);
        let img = apply_q(&e).unwrap();
        assert_eq!(img.descriptor.m, 0);
        assert!((img.gamma - 1.5).abs() < 1e-12);
        assert!(apply_qbar(&e).is_err());
    }

    #[test]
    fn algebra_closes() {
        for (q, sector, m, n) in [(0.5, Sector::F0, 0, 0), (0.5, Sector::F0, 2, 1), (0.5, Sector::F1, 1, 2), (2.7, Sector::F0, -1, 2)] {
            for fam in [Family::Plain, Family::Tilde] {
                let Ok(e) = build_family(FluxConfig::new(q, sector), fam, m, n) else { continue };
                let img = apply_supercharge(&e).unwrap();
                assert!(img.descriptor.is_zero() || img.descriptor.family.is_some());
                let r = susy_algebra_residuals(&e, 32).unwrap();
                assert!(r.anticommutator < 1e-9, "{q} {sector:?} {m} {n} {fam:?} {r:?}");
                assert!(r.grid_vs_closed_form < 1e-9, "{q} {sector:?} {m} {n} {fam:?} {r:?}");
            }
        }
    }

    #[test]
    fn hermiticity_at_half_flux() {
        let pair = build_families(f0(0.5), 0, 0);
        let (p, t) = (pair.plain.unwrap(), pair.tilde.unwrap());
        let d = hermiticity_defect(&t, &p, 32).unwrap();
        assert!((d.abs() - PI).abs() < 1e-10, "{d}");
        assert_eq!(hermiticity_defect(&t, &t, 32).unwrap(), 0.0);
        let a = monopole_harmonic(1, Sector::F0, 0, 0).unwrap();
        let b = monopole_harmonic(1, Sector::F0, 0, 2).unwrap();
        assert!(hermiticity_defect(&a, &b, 32).unwrap().abs() < 1e-12);
    }

    #[test]
    fn flux_and_phase() {
        for q in [0.5, 1.0, 2.7, -1.3] {
            assert!((flux_integral(q, 32).unwrap() - q).abs() < 1e-12);
            let f = GaugeField::new(q);
            let w = Complex64::new(0.3, -1.1);
            assert!((f.area_density(w) - Complex64::new(0.0, -q)).norm() < 1e-13);
        }
        let e = build_family(f0(0.5), Family::Tilde, 3, 1).unwrap();
        assert!(angular_momentum_check(&e) < 1e-12);
    }
}
