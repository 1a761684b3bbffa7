//! Spectrum assembly across both sectors under a Hilbert-space policy, with
//! supercharge pairing, breaking witnesses and the Witten index.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{build_family, Family, FluxConfig, NormClass, Sector, SpectrumEntry};
use crate::operators::{apply_supercharge, proportionality, proportionality_residual};

/// Which normalizability classes are admitted into the Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HilbertPolicy {
    RegularOnly,
    SquareIntegrable,
    /// Regular functions plus bundle sections; integer flux only.
    BundleSections,
}

impl HilbertPolicy {
    pub const ALL: [HilbertPolicy; 3] =
        [HilbertPolicy::RegularOnly, HilbertPolicy::SquareIntegrable, HilbertPolicy::BundleSections];

    pub fn admits(self, class: NormClass) -> bool {
        match self {
            HilbertPolicy::RegularOnly => class == NormClass::Regular,
            HilbertPolicy::SquareIntegrable => class != NormClass::NonNormalizable,
            HilbertPolicy::BundleSections => matches!(class, NormClass::Regular | NormClass::Section),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HilbertPolicy::RegularOnly => "regular_only",
            HilbertPolicy::SquareIntegrable => "square_integrable",
            HilbertPolicy::BundleSections => "bundle_sections",
        }
    }

    pub fn check_flux(self, config: &FluxConfig) -> Result<()> {
        if self == HilbertPolicy::BundleSections && !config.is_integer_flux() {
            return Err(Error::NonIntegerFlux(config.q));
        }
        Ok(())
    }
}

/// Admitted entries per sector, each sorted by eigenvalue.
#[derive(Debug, Clone, Serialize)]
pub struct AssembledSpectrum {
    pub q: f64,
    pub policy: HilbertPolicy,
    pub f0: Vec<SpectrumEntry>,
    pub f1: Vec<SpectrumEntry>,
}

impl AssembledSpectrum {
    pub fn sector(&self, sector: Sector) -> &[SpectrumEntry] {
        match sector {
            Sector::F0 => &self.f0,
            Sector::F1 => &self.f1,
        }
    }
}

fn is_duplicate(kept: &[SpectrumEntry], e: &SpectrumEntry) -> bool {
    kept.iter().any(|k| {
        k.descriptor.m == e.descriptor.m
            && (k.eigenvalue - e.eigenvalue).abs() <= 1e-10 * (1.0 + e.eigenvalue.abs())
            && proportionality(&k.descriptor, &e.descriptor).is_some()
    })
}

/// Admitted modes of one sector. `n_max` counts the Jacobi degree above the
/// reduction at negative `m`, so every `m` contributes `n_max + 1` formal
/// candidates per family.
pub fn assemble_sector(config: FluxConfig, m_range: (i64, i64), n_max: usize, policy: HilbertPolicy) -> Result<Vec<SpectrumEntry>> {
    policy.check_flux(&config)?;
    let mut out: Vec<SpectrumEntry> = Vec::new();
    for m in m_range.0..=m_range.1 {
        let offset = (-config.effective_m(m)).max(0) as usize;
        let mut per_m: Vec<SpectrumEntry> = Vec::new();
        for family in [Family::Tilde, Family::Plain] {
            for n in offset..=offset + n_max {
                let Ok(e) = build_family(config, family, m, n) else { continue };
                if policy.admits(e.norm_class) && !is_duplicate(&per_m, &e) {
                    per_m.push(e);
                }
            }
        }
        out.extend(per_m);
    }
    out.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue).then(a.descriptor.m.cmp(&b.descriptor.m)));
    Ok(out)
}

/// Both sectors; duplicates from coinciding families are removed.
pub fn assemble_spectrum(q: f64, m_range: (i64, i64), n_max: usize, policy: HilbertPolicy) -> Result<AssembledSpectrum> {
    if m_range.0 > m_range.1 {
        return Err(Error::InvalidArgument(format!("empty m range {}..{}", m_range.0, m_range.1)));
    }
    let c0 = FluxConfig::new(q, Sector::F0);
    Ok(AssembledSpectrum {
        q: c0.q,
        policy,
        f0: assemble_sector(c0, m_range, n_max, policy)?,
        f1: assemble_sector(c0.with_sector(Sector::F1), m_range, n_max, policy)?,
    })
}

/// Ranges wide enough that every level below `cutoff` is present.
pub fn ranges_for_cutoff(q: f64, cutoff: f64) -> ((i64, i64), usize) {
    let l = cutoff.max(0.0).sqrt().ceil() as i64 + q.abs().ceil() as i64 + 3;
    ((-l, l), 2 * l as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnpairedReason {
    /// Image is normalizable but singular at the puncture.
    ImageSingular,
    ImageNotNormalizable,
    /// Image is a bundle section the policy does not admit.
    ImageSectionOutsidePolicy,
    /// Image is admitted but was not found among the assembled modes.
    PartnerNotAssembled,
}

fn reason_for(class: NormClass) -> UnpairedReason {
    match class {
        NormClass::SingularNormalizable => UnpairedReason::ImageSingular,
        NormClass::NonNormalizable => UnpairedReason::ImageNotNormalizable,
        NormClass::Section => UnpairedReason::ImageSectionOutsidePolicy,
        NormClass::Regular => UnpairedReason::PartnerNotAssembled,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Pair {
    pub lambda: f64,
    pub f0: SpectrumEntry,
    pub f1: SpectrumEntry,
    /// Pointwise deviation of `Q f0` from a multiple of `f1`.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Unpaired {
    pub entry: SpectrumEntry,
    pub reason: UnpairedReason,
    pub image_gamma: f64,
    pub image: SpectrumEntry,
}

#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub q: f64,
    pub policy: HilbertPolicy,
    pub cutoff: f64,
    pub pairs: Vec<Pair>,
    pub unpaired: Vec<Unpaired>,
    pub zero_modes_f0: Vec<SpectrumEntry>,
    pub zero_modes_f1: Vec<SpectrumEntry>,
    pub index: Option<i64>,
    pub note: String,
}

const ZERO_TOL: f64 = 1e-10;

const CRYPTO_NOTE: &str = "an inner product declaring the non-orthogonal pair orthogonal is possible in principle but is not implemented";

/// Pairs modes across sectors through their supercharge images.
///
/// A pair is recorded only when the image of an admitted mode is itself
/// admitted and proportional to an assembled mode of the other sector.
pub fn pairing_report(q: f64, policy: HilbertPolicy, cutoff: f64, m_range: (i64, i64), n_max: usize) -> Result<PairingReport> {
    if !(cutoff > 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    let spec = assemble_spectrum(q, m_range, n_max, policy)?;
    let below = |e: &&SpectrumEntry| e.eigenvalue < cutoff;
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    let mut matched_f1 = vec![false; spec.f1.len()];
    let mut matched_f0 = vec![false; spec.f0.len()];

    for (sector, own, other) in [(Sector::F0, &spec.f0, &spec.f1), (Sector::F1, &spec.f1, &spec.f0)] {
        for (i, e) in own.iter().enumerate().filter(|(_, e)| below(e)) {
            if e.eigenvalue.abs() <= ZERO_TOL {
                continue;
            }
            let already = match sector {
                Sector::F0 => matched_f0[i],
                Sector::F1 => matched_f1[i],
            };
            if already {
                continue;
            }
            let image = apply_supercharge(e)?;
            let partner = if policy.admits(image.norm_class) && !image.descriptor.is_zero() {
                other.iter().enumerate().find_map(|(j, c)| {
                    if c.descriptor.m != image.descriptor.m {
                        return None;
                    }
                    proportionality_residual(&image.descriptor, &c.descriptor)
                        .filter(|(_, err)| *err <= 1e-9)
                        .map(|(_, err)| (j, err))
                })
            } else {
                None
            };
            match partner {
                Some((j, residual)) => {
                    let (f0, f1) = match sector {
                        Sector::F0 => {
                            matched_f0[i] = true;
                            matched_f1[j] = true;
                            (e.clone(), other[j].clone())
                        }
                        Sector::F1 => {
                            matched_f1[i] = true;
                            matched_f0[j] = true;
                            (other[j].clone(), e.clone())
                        }
                    };
                    pairs.push(Pair { lambda: e.eigenvalue, f0, f1, residual });
                }
                None => unpaired.push(Unpaired {
                    entry: e.clone(),
                    reason: if image.descriptor.is_zero() { UnpairedReason::PartnerNotAssembled } else { reason_for(image.norm_class) },
                    image_gamma: image.gamma,
                    image,
                }),
            }
        }
    }
    let zeros = |v: &[SpectrumEntry]| v.iter().filter(|e| e.eigenvalue.abs() <= ZERO_TOL).cloned().collect::<Vec<_>>();
    let zero_modes_f0 = zeros(&spec.f0);
    let zero_modes_f1 = zeros(&spec.f1);
    let index = (policy == HilbertPolicy::BundleSections).then(|| zero_modes_f0.len() as i64 - zero_modes_f1.len() as i64);
    Ok(PairingReport {
        q: spec.q,
        policy,
        cutoff,
        pairs,
        unpaired,
        zero_modes_f0,
        zero_modes_f1,
        index,
        note: CRYPTO_NOTE.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub q: i64,
    pub zero_modes_f0: usize,
    pub zero_modes_f1: usize,
    pub index: i64,
}

/// Zero-mode count difference under the bundle-section policy.
pub fn witten_index(q: f64) -> Result<IndexReport> {
    let c = FluxConfig::new(q, Sector::F0);
    if !c.is_integer_flux() {
        return Err(Error::NonIntegerFlux(q));
    }
    let span = c.q.abs() as i64 + 2;
    let spec = assemble_spectrum(c.q, (-span, span), 2, HilbertPolicy::BundleSections)?;
    let count = |v: &[SpectrumEntry]| v.iter().filter(|e| e.eigenvalue.abs() <= ZERO_TOL).count();
    let (n0, n1) = (count(&spec.f0), count(&spec.f1));
    Ok(IndexReport { q: c.q as i64, zero_modes_f0: n0, zero_modes_f1: n1, index: n0 as i64 - n1 as i64 })
}

/// An admitted mode whose superpartner falls outside the policy.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub q: f64,
    pub policy: HilbertPolicy,
    pub entry: SpectrumEntry,
    pub image: SpectrumEntry,
    pub entry_gamma: f64,
    pub image_gamma: f64,
    pub reason: UnpairedReason,
}

/// First admitted nonzero mode (sector `F = 0` first, then `m` and `n`
/// ascending) whose supercharge image is not admitted by `policy`.
pub fn susy_breaking_witness(q: f64, policy: HilbertPolicy) -> Result<Witness> {
    let c0 = FluxConfig::new(q, Sector::F0);
    if c0.is_integer_flux() {
        return Err(Error::IntegerFlux(q));
    }
    policy.check_flux(&c0)?;
    let ((m_lo, m_hi), n_max) = ranges_for_cutoff(q, 16.0);
    for config in [c0, c0.with_sector(Sector::F1)] {
        for m in m_lo..=m_hi {
            let offset = (-config.effective_m(m)).max(0) as usize;
            for n in offset..=offset + n_max {
                for family in [Family::Plain, Family::Tilde] {
                    let Ok(e) = build_family(config, family, m, n) else { continue };
                    if !policy.admits(e.norm_class) || e.eigenvalue.abs() <= ZERO_TOL {
                        continue;
                    }
                    let image = apply_supercharge(&e)?;
                    if !image.descriptor.is_zero() && !policy.admits(image.norm_class) {
                        return Ok(Witness {
                            q: c0.q,
                            policy,
                            entry_gamma: e.gamma,
                            image_gamma: image.gamma,
                            reason: reason_for(image.norm_class),
                            entry: e,
                            image,
                        });
                    }
                }
            }
        }
    }
    Err(Error::Internal(format!("no breaking witness found at q = {q} under {}", policy.name())))
}
