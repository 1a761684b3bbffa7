//! Jacobi polynomials `P_n^{(alpha, beta)}` for arbitrary real parameters.
//!
//! The three-term recurrence in the degree is the primary evaluator. The
//! explicit binomial sum is kept as an independent cross-check and as the
//! fallback on the parameter set where the recurrence's leading coefficient
//! vanishes (`alpha + beta` a small negative integer).

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use twofloat::TwoFloat;

use crate::error::{Error, Result};

/// Tolerance used when deciding whether a real parameter is an integer.
pub const INTEGER_TOL: f64 = 1e-12;

/// Degree and parameters of a Jacobi polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl JacobiSpec {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Self {
        Self { n, alpha, beta }
    }

    /// Value at `z = 1`, `C(n + alpha, n)`.
    pub fn value_at_plus_one(&self) -> f64 {
        generalized_binomial(self.n as f64 + self.alpha, self.n)
    }

    /// Value at `z = -1`, `(-1)^n C(n + beta, n)`.
    pub fn value_at_minus_one(&self) -> f64 {
        let sign = if self.n % 2 == 0 { 1.0 } else { -1.0 };
        sign * generalized_binomial(self.n as f64 + self.beta, self.n)
    }

    /// Parameters of the derivative polynomial (without the constant factor).
    pub fn derivative_spec(&self) -> Option<JacobiSpec> {
        (self.n > 0).then(|| JacobiSpec::new(self.n - 1, self.alpha + 1.0, self.beta + 1.0))
    }

    /// Constant `(n + alpha + beta + 1) / 2` relating `P'` to the derivative polynomial.
    pub fn derivative_factor(&self) -> f64 {
        0.5 * (self.n as f64 + self.alpha + self.beta + 1.0)
    }
}

/// Returns `Some(k)` when `x` is within [`INTEGER_TOL`] of the integer `k`.
pub fn as_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= INTEGER_TOL).then_some(r as i64)
}

/// Generalized binomial coefficient `C(x, k)` as the falling-factorial product
/// `x (x-1) ... (x-k+1) / k!`. Well defined for every real `x`.
pub fn generalized_binomial(x: f64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (x - i as f64) / (i as f64 + 1.0);
    }
    acc
}

/// Rising product `(x + 1)(x + 2)...(x + k)`, i.e. `Gamma(x + k + 1) / Gamma(x + 1)`
/// continued through the poles.
pub fn rising_product(x: f64, k: usize) -> f64 {
    (1..=k).map(|j| x + j as f64).product()
}

/// Explicit finite sum
/// `2^{-n} sum_k C(n+alpha, k) C(n+beta, n-k) (1+z)^k (z-1)^{n-k}`.
pub fn jacobi_eval_sum(spec: JacobiSpec, z: f64) -> f64 {
    let n = spec.n;
    let na = n as f64 + spec.alpha;
    let nb = n as f64 + spec.beta;
    let mut sum = 0.0;
    for k in 0..=n {
        let term = generalized_binomial(na, k)
            * generalized_binomial(nb, n - k)
            * (1.0 + z).powi(k as i32)
            * (z - 1.0).powi((n - k) as i32);
        sum += term;
    }
    sum * 0.5f64.powi(n as i32)
}

fn recurrence(spec: JacobiSpec, z: f64) -> Option<f64> {
    let JacobiSpec { n, alpha: a, beta: b } = spec;
    let p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (z - 1.0);
    if n == 0 {
        return Some(1.0);
    }
    if n == 1 {
        return Some(p1);
    }
    let (mut pm2, mut pm1) = (1.0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let lead = 2.0 * k * (k + a + b) * (s - 2.0);
        if lead.abs() <= 1e-12 * (1.0 + s * s * k) {
            return None;
        }
        let c1 = (s - 1.0) * (s * (s - 2.0) * z + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p = (c1 * pm1 - c2 * pm2) / lead;
        pm2 = pm1;
        pm1 = p;
    }
    Some(pm1)
}

/// Explicit sum carried out in double-double arithmetic. Outside the classical
/// range the terms cancel heavily and plain doubles lose many digits.
fn sum_extended(spec: JacobiSpec, z: f64) -> f64 {
    let n = spec.n;
    let binomial = |x: TwoFloat, k: usize| (0..k).fold(TwoFloat::from(1.0), |acc, i| acc * (x - i as f64) / (i + 1) as f64);
    let na = TwoFloat::from(n as f64) + spec.alpha;
    let nb = TwoFloat::from(n as f64) + spec.beta;
    let (up, down) = (TwoFloat::from(1.0) + z, TwoFloat::from(z) - 1.0);
    let mut sum = TwoFloat::from(0.0);
    for k in 0..=n {
        let mut term = binomial(na, k) * binomial(nb, n - k);
        for _ in 0..k {
            term *= up;
        }
        for _ in k..n {
            term *= down;
        }
        sum += term;
    }
    f64::from(sum) * 0.5f64.powi(n as i32)
}

/// Evaluates `P_n^{(alpha, beta)}(z)`: three-term recurrence for
/// `alpha, beta > -1`, extended-precision explicit sum otherwise.
pub fn jacobi_eval(spec: JacobiSpec, z: f64) -> f64 {
    if spec.alpha > -1.0 && spec.beta > -1.0 {
        if let Some(v) = recurrence(spec, z) {
            return v;
        }
    }
    sum_extended(spec, z)
}

/// Checked variant of [`jacobi_eval`] that reports non-finite results.
pub fn try_jacobi_eval(spec: JacobiSpec, z: f64) -> Result<f64> {
    let v = jacobi_eval(spec, z);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { n: spec.n, alpha: spec.alpha, beta: spec.beta })
    }
}

/// `d/dz P_n^{(alpha, beta)}(z) = (n+alpha+beta+1)/2 * P_{n-1}^{(alpha+1, beta+1)}(z)`.
pub fn jacobi_derivative(spec: JacobiSpec, z: f64) -> f64 {
    match spec.derivative_spec() {
        None => 0.0,
        Some(d) => spec.derivative_factor() * jacobi_eval(d, z),
    }
}

/// Second derivative by applying the derivative identity twice.
pub fn jacobi_second_derivative(spec: JacobiSpec, z: f64) -> f64 {
    match spec.derivative_spec() {
        None => 0.0,
        Some(d) => spec.derivative_factor() * jacobi_derivative(d, z),
    }
}

/// Residuals of the two integer-parameter reduction identities.
///
/// `first` is `Some` when `alpha` is a non-negative integer and checks
/// `P_{n+alpha}^{(-alpha, beta)} = 2^{-alpha} (z-1)^alpha c P_n^{(alpha, beta)}`;
/// `second` is `Some` when `beta` is a non-negative integer and checks the
/// mirror identity at `z = -1`. Residuals are `|lhs - rhs| / max(1, |lhs|, |rhs|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationResiduals {
    pub first: Option<f64>,
    pub second: Option<f64>,
}

fn factorial_ratio(n: usize, a: f64, b: f64) -> Result<f64> {
    // n! (n + a + b)! / ((n + a)! (n + b)!) with Gamma continuation
    for arg in [n as f64 + a + b + 1.0, n as f64 + a + 1.0, n as f64 + b + 1.0] {
        if let Some(k) = as_integer(arg) {
            if k <= 0 {
                return Err(Error::RelationInapplicable(arg - 1.0));
            }
        }
    }
    let nf = gamma(n as f64 + 1.0);
    Ok(nf * gamma(n as f64 + a + b + 1.0) / (gamma(n as f64 + a + 1.0) * gamma(n as f64 + b + 1.0)))
}

fn rel_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs())
}

pub fn negative_param_relation_check(n: usize, alpha: f64, beta: f64, z: f64) -> Result<RelationResiduals> {
    let int_alpha = as_integer(alpha).filter(|&k| k >= 0);
    let int_beta = as_integer(beta).filter(|&k| k >= 0);
    if int_alpha.is_none() && int_beta.is_none() {
        return Err(Error::InvalidArgument(format!(
            "relation needs a non-negative integer parameter, got alpha={alpha}, beta={beta}"
        )));
    }
    let c = factorial_ratio(n, alpha, beta)?;
    let first = int_alpha.map(|k| {
        let k = k as usize;
        let lhs = jacobi_eval(JacobiSpec::new(n + k, -(k as f64), beta), z);
        let rhs = 0.5f64.powi(k as i32) * (z - 1.0).powi(k as i32) * c * jacobi_eval(JacobiSpec::new(n, alpha, beta), z);
        rel_residual(lhs, rhs)
    });
    let second = int_beta.map(|j| {
        let j = j as usize;
        let lhs = jacobi_eval(JacobiSpec::new(n + j, alpha, -(j as f64)), z);
        let rhs = 0.5f64.powi(j as i32) * (z + 1.0).powi(j as i32) * c * jacobi_eval(JacobiSpec::new(n, alpha, beta), z);
        rel_residual(lhs, rhs)
    });
    Ok(RelationResiduals { first, second })
}

/// Constant `c` in `P_N^{(-k, beta)}(z) = c (1 - z)^k P_{N-k}^{(k, beta)}(z)` for `N >= k`.
pub fn reduction_constant_plus(big_n: usize, k: usize, beta: f64) -> f64 {
    debug_assert!(big_n >= k);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let n = big_n - k;
    // (N-k)!/N! * Gamma(N+beta+1)/Gamma(N-k+beta+1), times 2^{-k} (-1)^k
    let fact: f64 = (n + 1..=big_n).map(|i| 1.0 / i as f64).product();
    sign * 0.5f64.powi(k as i32) * fact * rising_product(n as f64 + beta, k)
}

/// Constant `d` in `P_N^{(alpha, -j)}(z) = d (1 + z)^j P_{N-j}^{(alpha, j)}(z)` for `N >= j`.
pub fn reduction_constant_minus(big_n: usize, j: usize, alpha: f64) -> f64 {
    debug_assert!(big_n >= j);
    let n = big_n - j;
    let fact: f64 = (n + 1..=big_n).map(|i| 1.0 / i as f64).product();
    0.5f64.powi(j as i32) * fact * rising_product(n as f64 + alpha, j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_classical_parameters_keep_full_precision() {
        // 50-digit reference values
        let cases = [
            ((7, 4.0, -6.3, 0.5), 28.858748537216106861),
            ((7, 4.0, -6.3, -0.5), -0.13320061110740658537),
            ((30, -3.0, 18.7375976114796, -0.05528064878140737), 58.084034271169074492),
            ((29, -23.639364516565138, 10.0, 0.8964932850004059), -1.8820738543210371346e-7),
            ((12, -5.0, -7.25, 0.3), -0.00016779004381698496857),
        ];
        for ((n, a, b, z), exact) in cases {
            let got = jacobi_eval(JacobiSpec::new(n, a, b), z);
            assert!((got - exact).abs() <= 1e-14 * exact.abs(), "{n} {a} {b} {z}: {got} vs {exact}");
        }
    }

    #[test]
    fn degree_zero_is_one() {
        assert_eq!(jacobi_eval(JacobiSpec::new(0, 0.3, -0.5), 0.7), 1.0);
        assert_eq!(jacobi_eval_sum(JacobiSpec::new(0, 0.3, -0.5), 0.7), 1.0);
    }

    #[test]
    fn degree_one_closed_form() {
        for &(a, b, z) in &[(0.3, -0.5, 0.7), (-2.0, 1.0, 0.1), (2.7, -0.9, -0.99)] {
            let expect = (a + 1.0) + (a + b + 2.0) * (z - 1.0) / 2.0;
            assert!((jacobi_eval(JacobiSpec::new(1, a, b), z) - expect).abs() < 1e-15);
            assert!((jacobi_eval_sum(JacobiSpec::new(1, a, b), z) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn recurrence_matches_sum_spot() {
        let s = JacobiSpec::new(4, 2.0, -0.5);
        let r = jacobi_eval(s, 0.31);
        let e = jacobi_eval_sum(s, 0.31);
        assert!((r - e).abs() <= 1e-12 * e.abs());
        let s = JacobiSpec::new(2, 0.0, -0.5);
        assert!((jacobi_eval(s, 0.0) - jacobi_eval_sum(s, 0.0)).abs() < 1e-12);
    }

    #[test]
    fn negative_integer_alpha_is_finite_and_reduces() {
        let s = JacobiSpec::new(3, -2.0, 1.0);
        let v = jacobi_eval_sum(s, 0.5);
        assert!(v.is_finite());
        // P_3^{-2,1} = c (1-z)^2 P_1^{2,1}
        let c = reduction_constant_plus(3, 2, 1.0);
        let rhs = c * 0.25 * jacobi_eval(JacobiSpec::new(1, 2.0, 1.0), 0.5);
        assert!((v - rhs).abs() < 1e-13, "{v} vs {rhs}");
        assert!((jacobi_eval(s, 0.5) - v).abs() < 1e-13);
    }

    #[test]
    fn degenerate_recurrence_falls_back() {
        // alpha + beta = -3 makes the k=3 leading coefficient vanish
        let s = JacobiSpec::new(4, -1.5, -1.5);
        assert!(recurrence(s, 0.2).is_none());
        let (v, w) = (jacobi_eval(s, 0.2), jacobi_eval_sum(s, 0.2));
        assert!((v - w).abs() <= 1e-14 * w.abs().max(1.0), "{v} vs {w}");
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(jacobi_derivative(JacobiSpec::new(0, 1.0, 2.0), 0.3), 0.0);
        let (a, b) = (0.4, -0.7);
        assert!((jacobi_derivative(JacobiSpec::new(1, a, b), 0.1) - (a + b + 2.0) / 2.0).abs() < 1e-15);
        let s = JacobiSpec::new(5, 1.0, -0.5);
        let h = 1e-5;
        let fd = (jacobi_eval(s, 0.2 + h) - jacobi_eval(s, 0.2 - h)) / (2.0 * h);
        assert!((jacobi_derivative(s, 0.2) - fd).abs() < 1e-7);
    }

    #[test]
    fn relation_examples() {
        let r = negative_param_relation_check(2, 1.0, 1.0, 0.4).unwrap();
        assert!(r.first.unwrap() < 1e-10);
        let r = negative_param_relation_check(1, 0.0, 2.0, -0.3).unwrap();
        assert!(r.second.unwrap() < 1e-10);
        let r = negative_param_relation_check(0, 1.0, 0.0, 0.9).unwrap();
        assert!(r.first.unwrap() < 1e-12 && r.second.unwrap() < 1e-12);
    }

    #[test]
    fn relation_rejects_poles() {
        assert!(matches!(
            negative_param_relation_check(1, 1.0, -3.0, 0.2),
            Err(Error::RelationInapplicable(_))
        ));
        assert!(negative_param_relation_check(1, 0.5, 0.5, 0.2).is_err());
    }

    #[test]
    fn endpoint_values() {
        let s = JacobiSpec::new(6, 0.5, -0.9);
        assert!((jacobi_eval(s, 1.0) - s.value_at_plus_one()).abs() <= 1e-12 * s.value_at_plus_one().abs());
        assert!((jacobi_eval(s, -1.0) - s.value_at_minus_one()).abs() <= 1e-12 * s.value_at_minus_one().abs());
    }
}
