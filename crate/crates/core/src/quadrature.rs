//! Gauss–Jacobi quadrature on (-1, 1) for the weight `(1 - z)^a (1 + z)^b`.
//!
//! Nodes and weights come from the Golub–Welsch construction: the
//! eigenvalues of the symmetric Jacobi matrix are the nodes and the squared
//! first eigenvector components, scaled by the weight's total mass, are the
//! weights. Endpoint singularities with fractional exponents are always
//! absorbed into the weight.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;

/// Number of nodes used when a caller does not specify one.
pub const DEFAULT_POINTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `(a, b)` of the absorbed weight `(1 - z)^a (1 + z)^b`.
    pub weight_exponents: (f64, f64),
}

/// `int_{-1}^{1} (1 - z)^a (1 + z)^b dz = 2^{a+b+1} B(a+1, b+1)`.
pub fn weight_mass(a: f64, b: f64) -> f64 {
    ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp()
}

fn check_exponents(a: f64, b: f64) -> Result<()> {
    if a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidExponents { a, b })
    }
}

/// Recurrence coefficients of the monic Jacobi polynomials: diagonal and
/// off-diagonal of the symmetric Jacobi matrix.
fn jacobi_matrix(npoints: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let diag = (0..npoints)
        .map(|k| {
            if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..npoints)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let v = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            v.sqrt()
        })
        .collect();
    (diag, off)
}

fn build_rule(npoints: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    let (diag, off) = jacobi_matrix(npoints, a, b);
    let (nodes, first) = tridiagonal_eigen(&diag, &off, true)?;
    let mass = weight_mass(a, b);
    let weights = first.iter().map(|v| mass * v * v).collect();
    Ok(QuadratureRule { nodes, weights, weight_exponents: (a, b) })
}

type RuleKey = (usize, u64, u64);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Jacobi rule with `npoints` nodes for the weight `(1 - z)^a (1 + z)^b`.
///
/// Rules are memoized; the returned handle is immutable and can be shared
/// across threads.
pub fn gauss_jacobi_rule(npoints: usize, a: f64, b: f64) -> Result<Arc<QuadratureRule>> {
    check_exponents(a, b)?;
    if npoints == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let key = (npoints, a.to_bits(), b.to_bits());
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_rule(npoints, a, b)?);
    cache().lock().expect("rule cache poisoned").insert(key, Arc::clone(&rule));
    Ok(rule)
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum_i w_i f(z_i)`, i.e. the weighted integral of `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    /// Weighted integral of pre-sampled values at this rule's nodes.
    pub fn integrate_samples(&self, samples: &[f64]) -> f64 {
        self.weights.iter().zip(samples).map(|(w, s)| w * s).sum()
    }
}

/// `int_{-1}^{1} (1 - z)^a (1 + z)^b f(z) g(z) dz` with an `npoints` Gauss–Jacobi rule.
///
/// Exponents at or below -1 are reported as [`Error::Divergent`]: the
/// integral does not exist.
pub fn integrate_product<F, G>(f: F, g: G, a: f64, b: f64, npoints: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Divergent { a, b });
    }
    let rule = gauss_jacobi_rule(npoints, a, b)?;
    Ok(rule.integrate(|z| f(z) * g(z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_legendre_is_midpoint() {
        let r = gauss_jacobi_rule(1, 0.0, 0.0).unwrap();
        assert!(r.nodes[0].abs() < 1e-15);
        assert!((r.weights[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mass_of_inverse_sqrt_weight() {
        let r = gauss_jacobi_rule(8, 0.0, -0.5).unwrap();
        let s: f64 = r.weights.iter().sum();
        assert!((s - 2.0 * 2f64.sqrt()).abs() < 1e-12 * 2.0 * 2f64.sqrt());
    }

    #[test]
    fn nodes_increasing_weights_positive() {
        let r = gauss_jacobi_rule(40, 1.3, -0.7).unwrap();
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(r.weights.iter().all(|&w| w > 0.0));
        assert!(r.nodes[0] > -1.0 && r.nodes[39] < 1.0);
    }

    #[test]
    fn integrate_product_examples() {
        let v = integrate_product(|_| 1.0, |_| 1.0, 0.0, 0.0, 5).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        let v = integrate_product(|_| 1.0, |_| 1.0, 0.0, 0.5, 16).unwrap();
        assert!((v - 4.0 / 3.0 * 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_normalizable_weight() {
        assert!(matches!(gauss_jacobi_rule(4, -1.0, 0.0), Err(Error::InvalidExponents { .. })));
        assert!(matches!(integrate_product(|_| 1.0, |_| 1.0, 0.0, -1.2, 4), Err(Error::Divergent { .. })));
    }
}
