//! Spectra of the supersymmetric Hamiltonian of a charged particle on the
//! sphere with one puncture, at arbitrary (possibly fractional) flux.

pub mod checks;
pub mod cli;
pub mod error;
pub mod format;
pub mod linalg;
pub mod modes;
pub mod operators;
pub mod oracle;
pub mod quadrature;
pub mod specialfn;
pub mod susy;

pub use error::{Error, Result};
pub use modes::{
    build_families, build_family, classify, evaluate, gamma_exponent, inner_product, monopole_harmonic,
    reduce_negative_m, tower_lines, Family, FluxConfig, ModeDescriptor, NormClass, Sector, SpectrumEntry,
};
pub use specialfn::JacobiSpec;
