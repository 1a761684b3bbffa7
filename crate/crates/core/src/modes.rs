//! Closed-form eigenmodes of the sector Hamiltonians on the punctured sphere.
//!
//! Every mode is stored as `coeff * e^{i m phi} (1 - z)^a (1 + z)^b P_n^{(alpha, beta)}(z)`
//! with `z = cos(theta) = (1 - |w|^2) / (1 + |w|^2)`. The puncture `w = infinity`
//! sits at `z = -1`, where a mode behaves as `|w|^{-gamma}` with `gamma = 2 b`
//! once any zero of the Jacobi factor at `z = -1` has been absorbed.
//!
//! Sector `F = 1` reuses the `F = 0` formulas with `q -> -q`, `m -> -m`; the
//! helpers on [`FluxConfig`] expose those effective values.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gauss_jacobi_rule;
use crate::specialfn::{
    as_integer, jacobi_derivative, jacobi_eval, jacobi_second_derivative, reduction_constant_minus,
    reduction_constant_plus, JacobiSpec,
};

/// Fermion-number sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    #[serde(rename = "0")]
    F0,
    #[serde(rename = "1")]
    F1,
}

impl Sector {
    pub fn index(self) -> u8 {
        match self {
            Sector::F0 => 0,
            Sector::F1 => 1,
        }
    }

    pub fn from_index(f: u8) -> Result<Self> {
        match f {
            0 => Ok(Sector::F0),
            1 => Ok(Sector::F1),
            other => Err(Error::InvalidArgument(format!("sector must be 0 or 1, got {other}"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Sector::F0 => Sector::F1,
            Sector::F1 => Sector::F0,
        }
    }
}

/// Flux, sector and the derived `kappa = (1 - q) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxConfig {
    pub q: f64,
    pub sector: Sector,
    pub kappa: f64,
}

impl FluxConfig {
    /// Values of `q` within `1e-12` of an integer are snapped to it so that
    /// integer-flux logic is decided exactly.
    pub fn new(q: f64, sector: Sector) -> Self {
        let q = match as_integer(q) {
            Some(k) => k as f64,
            None => q,
        };
        Self { q, sector, kappa: (1.0 - q) / 2.0 }
    }

    pub fn is_integer_flux(&self) -> bool {
        self.q.fract() == 0.0
    }

    pub fn with_sector(&self, sector: Sector) -> Self {
        Self::new(self.q, sector)
    }

    /// Flux seen by the `F = 0` formulas: `q` in `F = 0`, `-q` in `F = 1`.
    pub fn effective_q(&self) -> f64 {
        match self.sector {
            Sector::F0 => self.q,
            Sector::F1 => -self.q,
        }
    }

    pub fn effective_kappa(&self) -> f64 {
        (1.0 - self.effective_q()) / 2.0
    }

    pub fn effective_m(&self, m: i64) -> i64 {
        match self.sector {
            Sector::F0 => m,
            Sector::F1 => -m,
        }
    }
}

/// The two formal solution families of the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Plain,
    Tilde,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Plain => "plain",
            Family::Tilde => "tilde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormClass {
    Regular,
    Section,
    SingularNormalizable,
    NonNormalizable,
}

impl NormClass {
    pub fn name(self) -> &'static str {
        match self {
            NormClass::Regular => "regular",
            NormClass::Section => "section",
            NormClass::SingularNormalizable => "singular_normalizable",
            NormClass::NonNormalizable => "non_normalizable",
        }
    }

    pub fn is_normalizable(self) -> bool {
        self != NormClass::NonNormalizable
    }
}

/// `coeff * e^{i m phi} (1 - z)^{a_exp} (1 + z)^{b_exp} P_jacobi(z)`.
///
/// `family` and `n` record the formal solution the descriptor came from (the
/// unreduced degree); raw operator images that match no family carry `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDescriptor {
    pub m: i64,
    pub family: Option<Family>,
    pub n: usize,
    pub a_exp: f64,
    pub b_exp: f64,
    pub jacobi: JacobiSpec,
    pub coeff: f64,
    pub config: FluxConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub descriptor: ModeDescriptor,
    pub eigenvalue: f64,
    pub gamma: f64,
    pub norm_class: NormClass,
}

impl ModeDescriptor {
    pub fn is_zero(&self) -> bool {
        self.coeff == 0.0
    }

    /// `coeff * P(z)`, the factor left after removing the endpoint powers.
    pub fn smooth(&self, z: f64) -> f64 {
        self.coeff * jacobi_eval(self.jacobi, z)
    }

    pub fn smooth_derivative(&self, z: f64) -> f64 {
        self.coeff * jacobi_derivative(self.jacobi, z)
    }

    pub fn smooth_second_derivative(&self, z: f64) -> f64 {
        self.coeff * jacobi_second_derivative(self.jacobi, z)
    }

    pub fn endpoint_weight(&self, z: f64) -> f64 {
        (1.0 - z).powf(self.a_exp) * (1.0 + z).powf(self.b_exp)
    }

    /// Real radial factor `(1 - z)^a (1 + z)^b coeff P(z)`.
    pub fn radial(&self, z: f64) -> f64 {
        self.endpoint_weight(z) * self.smooth(z)
    }

    /// Equivalent descriptor with every zero of the Jacobi factor at `z = +1`
    /// and `z = -1` absorbed into the endpoint exponents.
    pub fn canonical(&self) -> ModeDescriptor {
        let mut d = self.clone();
        if d.coeff == 0.0 {
            return d;
        }
        if let Some(k) = as_integer(d.jacobi.alpha).filter(|&k| k < 0) {
            let k = (-k) as usize;
            if k <= d.jacobi.n {
                d.coeff *= reduction_constant_plus(d.jacobi.n, k, d.jacobi.beta);
                d.a_exp += k as f64;
                d.jacobi = JacobiSpec::new(d.jacobi.n - k, k as f64, d.jacobi.beta);
            }
        }
        if let Some(j) = as_integer(d.jacobi.beta).filter(|&j| j < 0) {
            let j = (-j) as usize;
            if j <= d.jacobi.n {
                d.coeff *= reduction_constant_minus(d.jacobi.n, j, d.jacobi.alpha);
                d.b_exp += j as f64;
                d.jacobi = JacobiSpec::new(d.jacobi.n - j, d.jacobi.alpha, j as f64);
            }
        }
        d
    }
}

/// Formal (unreduced) family member with unit coefficient and its eigenvalue.
fn formal_unreduced(config: FluxConfig, family: Family, m: i64, n: usize) -> (ModeDescriptor, f64) {
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    let nf = n as f64;
    let (b_exp, beta, lambda) = match family {
        Family::Plain => (-big_m / 2.0 - k, -big_m - 2.0 * k, nf * (nf + 1.0 - 2.0 * k)),
        Family::Tilde => (big_m / 2.0 + k, big_m + 2.0 * k, (big_m + nf + 2.0 * k) * (big_m + nf + 1.0)),
    };
    let d = ModeDescriptor {
        m,
        family: Some(family),
        n,
        a_exp: big_m / 2.0,
        b_exp,
        jacobi: JacobiSpec::new(n, big_m, beta),
        coeff: 1.0,
        config,
    };
    (d, lambda)
}

/// Normalizability classification from the puncture exponent alone.
pub fn classify(gamma: f64) -> NormClass {
    if gamma > 0.0 {
        NormClass::Regular
    } else if gamma == 0.0 {
        NormClass::Section
    } else if gamma > -1.0 {
        NormClass::SingularNormalizable
    } else {
        NormClass::NonNormalizable
    }
}

/// Classification of a concrete mode. A bounded mode without winding
/// (`gamma = 0`, `m = 0`) is regular; `gamma = 0` with winding is a bundle
/// section and can only occur at integer flux.
pub fn classify_mode(gamma: f64, config: &FluxConfig, m: i64) -> Result<NormClass> {
    let class = classify(gamma);
    if class == NormClass::Section {
        if !config.is_integer_flux() {
            return Err(Error::Internal(format!("gamma = 0 at non-integer flux q = {}", config.q)));
        }
        if m == 0 {
            return Ok(NormClass::Regular);
        }
    }
    Ok(class)
}

fn snap_gamma(g: f64, config: &FluxConfig) -> f64 {
    if config.is_integer_flux() && g.abs() < 1e-12 {
        0.0
    } else {
        g
    }
}

/// Puncture exponent `gamma` with `Psi ~ |w|^{-gamma}` as `w -> infinity`,
/// including the order of any zero of the Jacobi factor at `z = -1`.
pub fn gamma_exponent(entry: &SpectrumEntry) -> f64 {
    descriptor_gamma(&entry.descriptor)
}

fn descriptor_gamma(d: &ModeDescriptor) -> f64 {
    if d.is_zero() {
        return f64::INFINITY;
    }
    snap_gamma(2.0 * d.canonical().b_exp, &d.config)
}

/// Wraps a descriptor into a spectrum entry, computing `gamma` and the class.
pub fn entry_from_descriptor(descriptor: ModeDescriptor, eigenvalue: f64) -> Result<SpectrumEntry> {
    if descriptor.is_zero() {
        return Ok(SpectrumEntry { descriptor, eigenvalue: 0.0, gamma: f64::INFINITY, norm_class: NormClass::Regular });
    }
    let canon = descriptor.canonical();
    let gamma = snap_gamma(2.0 * canon.b_exp, &descriptor.config);
    let norm_class = if 2.0 * canon.a_exp <= -1.0 {
        NormClass::NonNormalizable
    } else {
        classify_mode(gamma, &descriptor.config, descriptor.m)?
    };
    Ok(SpectrumEntry { descriptor, eigenvalue, gamma, norm_class })
}

/// Absorbs `(1 - z)^{|M|}` into the Jacobi factor of a negative-`m` mode,
/// leaving `a_exp = |M| / 2 >= 0` and degree `n - |M|`.
pub fn reduce_negative_m(entry: &SpectrumEntry) -> Result<SpectrumEntry> {
    let d = &entry.descriptor;
    let big_m = d.config.effective_m(d.m);
    let alpha = as_integer(d.jacobi.alpha);
    if big_m >= 0 || alpha != Some(big_m) {
        return Err(Error::InvalidArgument(format!("descriptor with m={} is not an unreduced negative-m mode", d.m)));
    }
    let k = (-big_m) as usize;
    if d.jacobi.n < k {
        return Err(Error::DivergentAtNorthPoleOfMap { m: d.m, n: d.n });
    }
    let c = reduction_constant_plus(d.jacobi.n, k, d.jacobi.beta);
    if c == 0.0 {
        return Err(Error::VanishingMode { m: d.m, n: d.n });
    }
    let reduced = ModeDescriptor {
        a_exp: d.a_exp + k as f64,
        jacobi: JacobiSpec::new(d.jacobi.n - k, k as f64, d.jacobi.beta),
        coeff: d.coeff * c,
        ..d.clone()
    };
    entry_from_descriptor(reduced, entry.eigenvalue)
}

/// One family member, reduced when its effective angular momentum is negative.
pub fn build_family(config: FluxConfig, family: Family, m: i64, n: usize) -> Result<SpectrumEntry> {
    let (d, lambda) = formal_unreduced(config, family, m, n);
    let big_m = config.effective_m(m);
    if big_m < 0 {
        let raw = SpectrumEntry { descriptor: d, eigenvalue: lambda, gamma: f64::NAN, norm_class: NormClass::NonNormalizable };
        reduce_negative_m(&raw)
    } else {
        entry_from_descriptor(d, lambda)
    }
}

/// Both formal families at `(m, n)`; each side fails independently.
#[derive(Debug, Clone)]
pub struct FamilyPair {
    pub plain: Result<SpectrumEntry>,
    pub tilde: Result<SpectrumEntry>,
}

pub fn build_families(config: FluxConfig, m: i64, n: usize) -> FamilyPair {
    FamilyPair { plain: build_family(config, Family::Plain, m, n), tilde: build_family(config, Family::Tilde, m, n) }
}

/// Energy level index `N = d + (|M| + |M + 2 kappa|)/2 + kappa` of an
/// integer-flux harmonic with Jacobi degree `d`; the eigenvalue is `N (N + q)`.
pub fn harmonic_level(config: &FluxConfig, m: i64, degree: usize) -> f64 {
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    degree as f64 + 0.5 * (big_m.abs() + (big_m + 2.0 * k).abs()) + k
}

fn check_harmonic_range(config: &FluxConfig, m: i64, level: f64) -> Result<()> {
    let qe = config.effective_q();
    let big_m = config.effective_m(m) as f64;
    let n_min = if qe > 0.0 { 0.0 } else { 1.0 - qe };
    if level < n_min || big_m < -level || big_m > level + qe - 1.0 {
        return Err(Error::OutOfRange { q: config.q, m, n: level.round() as i64 });
    }
    Ok(())
}

/// Square-integrable monopole harmonic at integer flux with Jacobi degree
/// `degree`: exponents `|M|/2`, `|M + 2 kappa|/2` and parameters `(|M|, |M + 2 kappa|)`.
pub fn monopole_harmonic(q: i64, sector: Sector, m: i64, degree: usize) -> Result<SpectrumEntry> {
    let config = FluxConfig::new(q as f64, sector);
    let big_m = config.effective_m(m);
    let k = config.effective_kappa();
    let beta = big_m as f64 + 2.0 * k;
    let family = if beta >= 0.0 { Family::Tilde } else { Family::Plain };
    let n = degree + if big_m < 0 { (-big_m) as usize } else { 0 };
    check_harmonic_range(&config, m, harmonic_level(&config, m, degree))?;
    let entry = build_family(config, family, m, n)?;
    let d = &entry.descriptor;
    debug_assert!((d.a_exp - (big_m.abs() as f64) / 2.0).abs() < 1e-12);
    debug_assert!((d.b_exp - beta.abs() / 2.0).abs() < 1e-12);
    if !matches!(entry.norm_class, NormClass::Regular | NormClass::Section) {
        return Err(Error::Internal(format!("harmonic (q={q}, m={m}, d={degree}) classified {:?}", entry.norm_class)));
    }
    Ok(entry)
}

/// Harmonic addressed by its energy level `N` (eigenvalue `N (N + q)`) rather
/// than its Jacobi degree; rejects `(m, N)` outside `-N <= M <= N + q - 1`.
pub fn monopole_harmonic_level(q: i64, sector: Sector, m: i64, level: i64) -> Result<SpectrumEntry> {
    let config = FluxConfig::new(q as f64, sector);
    check_harmonic_range(&config, m, level as f64)?;
    let offset = harmonic_level(&config, m, 0);
    let degree = level as f64 - offset;
    match as_integer(degree) {
        Some(d) if d >= 0 => monopole_harmonic(q, sector, m, d as usize),
        _ => Err(Error::OutOfRange { q: config.q, m, n: level }),
    }
}

/// `coeff e^{i m phi} (1 - z)^a (1 + z)^b P(z)` for `z` in `[-1, 1]`.
pub fn evaluate(descriptor: &ModeDescriptor, z: f64, phi: f64) -> Result<Complex64> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::OutsideInterval(z));
    }
    Ok(Complex64::from_polar(1.0, descriptor.m as f64 * phi) * descriptor.radial(z))
}

/// Quadrature size that integrates a product of the two polynomial factors exactly.
pub(crate) fn points_for(d1: &ModeDescriptor, d2: &ModeDescriptor, npoints: usize) -> usize {
    npoints.max((d1.jacobi.n + d2.jacobi.n) / 2 + 2)
}

/// `<e1|e2>` with the covariant measure, normalized so the constant mode has
/// norm `2 pi` (the sphere's volume): `pi * int f1 f2 dz` for equal `m`.
pub fn inner_product(e1: &SpectrumEntry, e2: &SpectrumEntry, npoints: usize) -> Result<f64> {
    descriptor_inner_product(&e1.descriptor, &e2.descriptor, npoints)
}

pub fn descriptor_inner_product(d1: &ModeDescriptor, d2: &ModeDescriptor, npoints: usize) -> Result<f64> {
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
    let rule = gauss_jacobi_rule(points_for(&c1, &c2, npoints), a, b)?;
    Ok(PI * rule.integrate(|z| c1.smooth(z) * c2.smooth(z)))
}

/// Copy of the entry scaled to unit norm.
pub fn normalized(entry: &SpectrumEntry, npoints: usize) -> Result<SpectrumEntry> {
    let norm2 = inner_product(entry, entry, npoints)?;
    let mut out = entry.clone();
    out.descriptor.coeff /= norm2.sqrt();
    Ok(out)
}

/// One sample of a gamma-versus-q line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TowerPoint {
    pub q: f64,
    pub m: i64,
    pub family: Family,
    pub gamma: f64,
    pub class: NormClass,
}

/// Default angular-momentum window for sweeps, `[floor(q) - 3, ceil(q) + 3]`.
pub fn default_m_range(q: f64) -> (i64, i64) {
    (q.floor() as i64 - 3, q.ceil() as i64 + 3)
}

/// Closed-form puncture exponent of a family line.
pub fn family_line_gamma(config: &FluxConfig, family: Family, m: i64) -> f64 {
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    let g = match family {
        Family::Plain => -big_m - 2.0 * k,
        Family::Tilde => big_m + 2.0 * k,
    };
    snap_gamma(g, config)
}

/// Gamma-versus-q line data for both families over `m_range` (inclusive).
pub fn tower_lines(q_min: f64, q_max: f64, steps: usize, sector: Sector, m_range: (i64, i64)) -> Result<Vec<TowerPoint>> {
    if steps < 2 {
        return Err(Error::InvalidArgument("tower sweep needs at least two steps".into()));
    }
    if m_range.0 > m_range.1 {
        return Err(Error::InvalidArgument(format!("empty m range {}..{}", m_range.0, m_range.1)));
    }
    let mut rows = Vec::with_capacity(steps * (m_range.1 - m_range.0 + 1) as usize * 2);
    for i in 0..steps {
        let q = q_min + (q_max - q_min) * i as f64 / (steps - 1) as f64;
        let config = FluxConfig::new(q, sector);
        for m in m_range.0..=m_range.1 {
            for family in [Family::Plain, Family::Tilde] {
                let gamma = family_line_gamma(&config, family, m);
                let class = classify_mode(gamma, &config, m)?;
                rows.push(TowerPoint { q: config.q, m, family, gamma, class });
            }
        }
    }
    Ok(rows)
}
