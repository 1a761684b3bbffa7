//! Test-only reference implementations, written independently of the library.
#![allow(dead_code)]

use fluxspec::ModeDescriptor;

/// `x (x - 1) ... (x - k + 1) / k!`, valid for any real `x`.
pub fn binomial(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// Jacobi polynomial from the two-binomial sum
/// `sum_s C(n+a, n-s) C(n+b, s) ((z-1)/2)^s ((z+1)/2)^(n-s)`.
pub fn jacobi(n: usize, a: f64, b: f64, z: f64) -> f64 {
    let (lo, hi) = ((z - 1.0) / 2.0, (z + 1.0) / 2.0);
    (0..=n)
        .map(|s| binomial(n as f64 + a, n - s) * binomial(n as f64 + b, s) * lo.powi(s as i32) * hi.powi((n - s) as i32))
        .sum()
}

/// `n! (n+a+b)! / ((n+a)! (n+b)!)` for non-negative integers.
pub fn factorial_ratio(n: usize, a: usize, b: usize) -> f64 {
    (1..=a).map(|i| (n + b + i) as f64 / (n + i) as f64).product()
}

/// Five-point central derivative.
pub fn derivative<F: Fn(f64) -> f64>(f: &F, z: f64, h: f64) -> f64 {
    (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h)
}

fn s(z: f64) -> f64 {
    ((1.0 - z) / (1.0 + z)).sqrt()
}

/// `Q` on a radial profile in sector 0 with angular number `m` at flux `q`.
pub fn q_oracle<F: Fn(f64) -> f64>(r: &F, q: f64, m: i64, z: f64) -> f64 {
    let kappa = (1.0 - q) / 2.0;
    s(z) * (-(1.0 + z) * derivative(r, z, 1e-3) - kappa * r(z) - m as f64 * r(z) / (1.0 - z))
}

/// `Qbar` on a radial profile in sector 1 with angular number `m` at flux `q`.
pub fn qbar_oracle<F: Fn(f64) -> f64>(r: &F, q: f64, m: i64, z: f64) -> f64 {
    let kappa1 = (1.0 + q) / 2.0;
    s(z) * ((1.0 + z) * derivative(r, z, 1e-3) + kappa1 * r(z) - m as f64 * r(z) / (1.0 - z))
}

/// Radial profile rebuilt from the descriptor's raw fields with the oracle Jacobi.
pub fn radial_oracle(d: &ModeDescriptor) -> impl Fn(f64) -> f64 + '_ {
    move |z| d.coeff * (1.0 - z).powf(d.a_exp) * (1.0 + z).powf(d.b_exp) * jacobi(d.jacobi.n, d.jacobi.alpha, d.jacobi.beta, z)
}

pub fn legendre(l: usize, z: f64) -> f64 {
    jacobi(l, 0.0, 0.0, z)
}

/// Interior sample points away from both endpoints.
pub fn interior_points(count: usize) -> Vec<f64> {
    (0..count).map(|k| -0.85 + 1.7 * (k as f64 + 0.5) / count as f64).collect()
}
