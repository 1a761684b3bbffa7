//! Independent numerical checks: a finite-difference Sturm–Liouville solver
//! for the radial operator, a Rayleigh–Ritz projection that exposes
//! non-orthogonality, and two standalone counterexamples (the Laplacian on
//! the punctured 3-sphere and a singular superpotential on the line).

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, general_eigenvalues, jacobi_eigen, lowest_tridiagonal_eigenvalues, tridiagonal_eigenvector};
use crate::modes::{descriptor_inner_product, FluxConfig, ModeDescriptor};
use crate::operators::hamiltonian_matrix_element;
use crate::quadrature::gauss_jacobi_rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    FiniteDifferenceTheta,
    RayleighRitz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    /// Only the tower regular at the puncture.
    RegularBothEnds,
    /// Every puncture behavior with a finite norm; one branch each.
    NormalizableOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscretizationSpec {
    pub method: Method,
    pub grid_size: usize,
    pub basis_size: usize,
    pub boundary: Boundary,
}

impl DiscretizationSpec {
    pub fn finite_difference(grid_size: usize, boundary: Boundary) -> Self {
        Self { method: Method::FiniteDifferenceTheta, grid_size, basis_size: 0, boundary }
    }
}

/// Eigenvalues of one puncture branch, the branch fixed by the exponent `b`
/// of `(1 + z)^b` divided out before discretizing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Branch {
    pub a_exp: f64,
    pub b_exp: f64,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SturmLiouvilleResult {
    /// Union of all branches, ascending, truncated to the requested count.
    pub eigenvalues: Vec<f64>,
    pub branches: Vec<Branch>,
    /// False when several inequivalent puncture behaviors were admitted: no
    /// single symmetric discretization covers them.
    pub symmetric: bool,
}

/// Lowest eigenvalues of the `theta` operator left after dividing
/// `(1 - z)^a (1 + z)^b` out of the mode. That operator is
/// `-(1/rho) (rho S')' + p0` with `rho = sin(theta/2)^{4a+1} cos(theta/2)^{4b+1}`
/// and a constant `p0`; it is discretized on a cell-centered grid with
/// zero flux through both poles.
fn branch_eigenvalues(config: &FluxConfig, m: i64, a: f64, b: f64, count: usize, grid: usize) -> Vec<f64> {
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    let aa = a - big_m / 2.0;
    let bb = b + big_m / 2.0;
    let p0 = (aa + bb) * (aa + bb + 1.0) + k * (1.0 - k);
    let h = PI / grid as f64;
    let rho = |t: f64| (t / 2.0).sin().powf(4.0 * a + 1.0) * (t / 2.0).cos().powf(4.0 * b + 1.0);
    let centers: Vec<f64> = (0..grid).map(|i| rho((i as f64 + 0.5) * h)).collect();
    let faces: Vec<f64> = (0..=grid).map(|i| if i == 0 || i == grid { 0.0 } else { rho(i as f64 * h) }).collect();
    let diag: Vec<f64> = (0..grid).map(|i| (faces[i] + faces[i + 1]) / (centers[i] * h * h) + p0).collect();
    let off: Vec<f64> = (0..grid - 1).map(|i| -faces[i + 1] / (h * h * (centers[i] * centers[i + 1]).sqrt())).collect();
    lowest_tridiagonal_eigenvalues(&diag, &off, count)
}

pub fn sturm_liouville_eigen(config: FluxConfig, m: i64, count: usize, spec: DiscretizationSpec) -> Result<SturmLiouvilleResult> {
    if spec.method != Method::FiniteDifferenceTheta {
        return Err(Error::InvalidArgument("sturm_liouville_eigen needs the finite-difference method".into()));
    }
    if spec.grid_size < 32 {
        return Err(Error::InvalidArgument(format!("grid size {} below 32", spec.grid_size)));
    }
    if count == 0 || count > spec.grid_size {
        return Err(Error::InvalidArgument(format!("cannot extract {count} eigenvalues from a grid of {}", spec.grid_size)));
    }
    let big_m = config.effective_m(m) as f64;
    let k = config.effective_kappa();
    let a = big_m.abs() / 2.0;
    let s = (big_m + 2.0 * k) / 2.0;
    let exps: Vec<f64> = match spec.boundary {
        Boundary::RegularBothEnds => vec![s.abs()],
        Boundary::NormalizableOnly => {
            let mut v: Vec<f64> = vec![s.abs(), -s.abs()].into_iter().filter(|&b| 2.0 * b > -1.0).collect();
            v.dedup();
            v
        }
    };
    let branches: Vec<Branch> = exps
        .iter()
        .map(|&b| Branch { a_exp: a, b_exp: b, eigenvalues: branch_eigenvalues(&config, m, a, b, count, spec.grid_size) })
        .collect();
    let mut all: Vec<f64> = branches.iter().flat_map(|br| br.eigenvalues.iter().copied()).collect();
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    Ok(SturmLiouvilleResult { eigenvalues: all, symmetric: branches.len() == 1, branches })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RitzResult {
    /// Real parts of the generalized eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub imaginary_parts: Vec<f64>,
    pub gram: Vec<Vec<f64>>,
    /// `H_ij = <i|H|j>`.
    pub hamiltonian: Vec<Vec<f64>>,
    /// `max |H_ij - H_ji|`.
    pub asymmetry: f64,
    pub symmetric: bool,
}

/// Solves `H c = lambda S c` on the span of `basis`.
///
/// A symmetric `H` goes through Cholesky reduction and Jacobi rotations; an
/// asymmetric one (a basis that mixes puncture behaviors) through the
/// eigenvalues of `S^{-1} H`, with the asymmetry reported.
pub fn rayleigh_ritz_eigen(config: FluxConfig, m: i64, basis: &[ModeDescriptor], npoints: usize) -> Result<RitzResult> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty Ritz basis".into()));
    }
    for d in basis {
        if d.config.sector != config.sector {
            return Err(Error::SectorMismatch { expected: config.sector.index(), got: d.config.sector.index() });
        }
        if d.m != m {
            return Err(Error::AngularMismatch(m, d.m));
        }
    }
    let n = basis.len();
    let mut gram = vec![vec![0.0; n]; n];
    let mut ham = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = if j < i { gram[j][i] } else { descriptor_inner_product(&basis[i], &basis[j], npoints)? };
            ham[i][j] = hamiltonian_matrix_element(&basis[i], &basis[j], npoints)?;
        }
    }
    let scale = ham.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let asymmetry = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).fold(0.0f64, |acc, (i, j)| acc.max((ham[i][j] - ham[j][i]).abs()));
    let l = cholesky(&gram)?;
    let symmetric = asymmetry <= 1e-10 * scale;
    let (eigenvalues, imaginary_parts) = if symmetric {
        // C = L^{-1} H L^{-T}
        let linv_cols: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
                forward(&l, &e)
            })
            .collect();
        let linv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| linv_cols[j][i]).collect()).collect();
        let tmp: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| linv[i][k] * ham[k][j]).sum()).collect()).collect();
        let mut c: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| tmp[i][k] * linv[j][k]).sum()).collect()).collect();
        for i in 0..n {
            for j in 0..i {
                let v = 0.5 * (c[i][j] + c[j][i]);
                c[i][j] = v;
                c[j][i] = v;
            }
        }
        (jacobi_eigen(&c)?.0, vec![0.0; n])
    } else {
        let cols: Vec<Vec<f64>> = (0..n).map(|j| cholesky_solve(&l, &(0..n).map(|i| ham[i][j]).collect::<Vec<_>>())).collect();
        let a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect();
        general_eigenvalues(&a)?.into_iter().unzip()
    };
    Ok(RitzResult { eigenvalues, imaginary_parts, gram, hamiltonian: ham, asymmetry, symmetric })
}

fn forward(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    y
}

/// Truncated Taylor jet `(f, f', f'')` for exact second derivatives.
#[derive(Debug, Clone, Copy)]
struct Jet {
    v: f64,
    d: f64,
    dd: f64,
}

impl Jet {
    fn var(x: f64) -> Self {
        Jet { v: x, d: 1.0, dd: 0.0 }
    }
    fn constant(x: f64) -> Self {
        Jet { v: x, d: 0.0, dd: 0.0 }
    }
    fn scale(self, c: f64) -> Self {
        Jet { v: c * self.v, d: c * self.d, dd: c * self.dd }
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        Jet { v: c, d: -s * self.d, dd: -c * self.d * self.d - s * self.dd }
    }
    fn recip(self) -> Self {
        let r = 1.0 / self.v;
        Jet { v: r, d: -self.d * r * r, dd: 2.0 * self.d * self.d * r * r * r - self.dd * r * r }
    }
}

/// `-(1/sin^2 chi) d/dchi (sin^2 chi d/dchi)` applied to a jet at `chi`.
fn s3_operator(f: Jet, chi: f64) -> f64 {
    -(f.dd + 2.0 * chi.cos() / chi.sin() * f.d)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct S3Report {
    /// Rayleigh quotient of `sqrt(f)`.
    pub eigenvalue_estimate: f64,
    /// `max |H psi2 / psi2 + 3/4|` over the grid.
    pub eigen_residual: f64,
    /// `max |H 1|` over the grid.
    pub constant_residual: f64,
    pub overlap: f64,
    pub defect: f64,
    /// `(lambda2 - lambda1) <1|2>`, the value the defect must equal.
    pub substitution_defect: f64,
}

/// Laplacian on the unit 3-sphere in stereographic coordinates with
/// `f = 1 + r^2/4`, mapped to `r = 2 tan(chi/2)` where the operator is
/// `-(1/sin^2 chi) d/dchi (sin^2 chi d/dchi)` and the measure `r^2 dr / f^3`
/// becomes `sin^2 chi dchi`. Checks the singular eigenfunction `sqrt(f) = sec(chi/2)`.
pub fn s3_laplacian_check(grid_size: usize) -> Result<S3Report> {
    if grid_size < 256 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} below 256")));
    }
    let rule = gauss_jacobi_rule(grid_size, 0.0, 0.0)?;
    let chis: Vec<f64> = rule.nodes.iter().map(|&t| PI * (t + 1.0) / 2.0).collect();
    let wts: Vec<f64> = rule.weights.iter().map(|&w| PI / 2.0 * w).collect();
    let psi2 = |chi: f64| Jet::var(chi).scale(0.5).cos().recip();
    let mut eigen_residual = 0.0f64;
    let mut constant_residual = 0.0f64;
    let (mut num, mut den, mut overlap, mut one_h_two, mut two_h_one) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&chi, &w) in chis.iter().zip(&wts) {
        let p = psi2(chi);
        let hp = s3_operator(p, chi);
        let h1 = s3_operator(Jet::constant(1.0), chi);
        eigen_residual = eigen_residual.max((hp / p.v + 0.75).abs());
        constant_residual = constant_residual.max(h1.abs());
        let mu = 4.0 * PI * chi.sin().powi(2) * w;
        num += mu * p.v * hp;
        den += mu * p.v * p.v;
        overlap += mu * p.v;
        one_h_two += mu * hp;
        two_h_one += mu * p.v * h1;
    }
    Ok(S3Report {
        eigenvalue_estimate: num / den,
        eigen_residual,
        constant_residual,
        overlap,
        defect: one_h_two - two_h_one,
        substitution_defect: -0.75 * overlap,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WittenReport {
    pub omega: f64,
    pub unrestricted_e0: f64,
    pub restricted_e0: f64,
    /// `|<v, x e^{-omega x^2/2}>|` for the normalized restricted ground state.
    pub restricted_shape_overlap: f64,
    pub note: String,
}

const WITTEN_NOTE: &str = "the oscillator ground state of p^2/2 + omega^2 x^2/2 is exp(-omega x^2/2); \
a Gaussian exponent of omega^2 x^2/2 would not give energy -omega for omega != 1";

/// Lowest eigenvalue of `-(1/2) d^2/dx^2 + omega^2 x^2/2 - 3 omega/2` on a
/// uniform grid with Dirichlet ends, either on the whole line or on `x > 0`
/// with `psi(0) = 0`.
fn oscillator_tridiagonal(omega: f64, grid: usize, half_line: bool) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let len = 12.0 / omega.sqrt();
    let (xs, h): (Vec<f64>, f64) = if half_line {
        let h = len / (grid + 1) as f64;
        ((1..=grid).map(|i| i as f64 * h).collect(), h)
    } else {
        let h = 2.0 * len / (grid + 1) as f64;
        ((1..=grid).map(|i| -len + i as f64 * h).collect(), h)
    };
    let diag = xs.iter().map(|x| 1.0 / (h * h) + 0.5 * omega * omega * x * x - 1.5 * omega).collect();
    let off = vec![-0.5 / (h * h); grid - 1];
    (diag, off, xs)
}

fn richardson_ground(omega: f64, grid: usize, half_line: bool) -> f64 {
    let (d1, o1, _) = oscillator_tridiagonal(omega, grid, half_line);
    let (d2, o2, _) = oscillator_tridiagonal(omega, 2 * grid + 1, half_line);
    let e1 = lowest_tridiagonal_eigenvalues(&d1, &o1, 1)[0];
    let e2 = lowest_tridiagonal_eigenvalues(&d2, &o2, 1)[0];
    e2 + (e2 - e1) / 3.0
}

pub fn witten_sqm_check(omega: f64, grid_size: usize) -> Result<WittenReport> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
    }
    if grid_size < 64 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} below 64")));
    }
    let unrestricted_e0 = richardson_ground(omega, grid_size, false);
    let restricted_e0 = richardson_ground(omega, grid_size, true);
    let (d, o, xs) = oscillator_tridiagonal(omega, 2 * grid_size + 1, true);
    let e = lowest_tridiagonal_eigenvalues(&d, &o, 1)[0];
    let v = tridiagonal_eigenvector(&d, &o, e);
    let shape: Vec<f64> = xs.iter().map(|x| x * (-omega * x * x / 2.0).exp()).collect();
    let norm = shape.iter().map(|s| s * s).sum::<f64>().sqrt();
    let restricted_shape_overlap = v.iter().zip(&shape).map(|(a, b)| a * b).sum::<f64>().abs() / norm;
    Ok(WittenReport { omega, unrestricted_e0, restricted_e0, restricted_shape_overlap, note: WITTEN_NOTE.to_string() })
}
