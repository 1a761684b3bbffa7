//! Small dense and tridiagonal eigensolvers used by the quadrature and
//! oracle modules.

use crate::error::{Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (length `n - 1`), by implicit QL with Wilkinson shifts.
///
/// When `track_first_row` is set, the first component of every normalized
/// eigenvector is returned alongside (Golub–Welsch needs exactly that).
/// Results are sorted by eigenvalue.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64], track_first_row: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![0.0; n];
    if track_first_row && n > 0 {
        z[0] = 1.0;
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(e[l].abs()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if track_first_row {
                    let fz = z[i + 1];
                    z[i + 1] = s * z[i] + c * fz;
                    z[i] = c * z[i] - s * fz;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let vals = idx.iter().map(|&i| d[i]).collect();
    let first = if track_first_row { idx.iter().map(|&i| z[i]).collect() } else { Vec::new() };
    Ok((vals, first))
}

/// Number of eigenvalues of a symmetric tridiagonal matrix strictly below `x`
/// (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
        if q == 0.0 {
            q = f64::EPSILON * (diag[i].abs() + 1.0);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` lowest eigenvalues of a symmetric tridiagonal matrix by bisection.
pub fn lowest_tridiagonal_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    let count = count.min(n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (0..count)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if sturm_count(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Solves `(T - shift) x = rhs` for tridiagonal `T` (Thomas algorithm).
pub fn tridiagonal_solve(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut beta = diag[0] - shift;
    if beta == 0.0 {
        beta = 1e-300;
    }
    d[0] = rhs[0] / beta;
    for i in 1..n {
        c[i] = off[i - 1] / beta;
        beta = diag[i] - shift - off[i - 1] * c[i];
        if beta == 0.0 {
            beta = 1e-300;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        let t = c[i + 1] * d[i + 1];
        d[i] -= t;
    }
    d
}

/// Eigenvector of a symmetric tridiagonal matrix for a known eigenvalue, by
/// inverse iteration. Returned with unit Euclidean norm.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = eigenvalue + 1e-10 * (1.0 + eigenvalue.abs());
    let mut v = vec![1.0; n];
    for _ in 0..4 {
        v = tridiagonal_solve(diag, off, shift, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

/// Dense symmetric eigen-decomposition by cyclic Jacobi rotations. Returns
/// eigenvalues ascending and the matching eigenvectors as columns.
pub fn jacobi_eigen(mat: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = mat.len();
    let mut a: Vec<Vec<f64>> = mat.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if off <= 1e-15 * scale {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
            let vals = idx.iter().map(|&i| a[i][i]).collect();
            let vecs = (0..n).map(|r| idx.iter().map(|&c| v[r][c]).collect()).collect();
            return Ok((vals, vecs));
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    Err(Error::NoConvergence(f64::NAN))
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(mat: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = mat.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = mat[i][i] - s;
                if d <= 0.0 || !d.is_finite() {
                    return Err(Error::SingularGram);
                }
                l[i][j] = d.sqrt();
            } else {
                l[i][j] = (mat[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

/// Reduces a general square matrix to upper Hessenberg form by stabilized
/// elementary similarity transforms. Entries below the subdiagonal are zeroed.
fn hessenberg(a: &mut [Vec<f64>]) {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let mut x = 0.0f64;
        let mut piv = m;
        for j in m..n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                piv = j;
            }
        }
        if piv != m {
            a.swap(piv, m);
            for row in a.iter_mut() {
                row.swap(piv, m);
            }
        }
        if x != 0.0 {
            for i in m + 1..n {
                let y = a[i][m - 1] / x;
                if y != 0.0 {
                    a[i][m - 1] = y;
                    for j in m..n {
                        a[i][j] -= y * a[m][j];
                    }
                    for row in a.iter_mut() {
                        row[m] += y * row[i];
                    }
                }
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        for v in row.iter_mut().take(i.saturating_sub(1)) {
            *v = 0.0;
        }
    }
}

/// Eigenvalues `(re, im)` of an upper Hessenberg matrix by the Francis
/// double-shift QR iteration. The matrix is overwritten.
fn hessenberg_qr(a: &mut [Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    let n = a.len();
    let mut out = vec![(0.0, 0.0); n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0;
        loop {
            let nu = nn as usize;
            let mut l = nu;
            while l >= 1 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[nu][nu];
            if l == nu {
                out[nu] = (x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[nu - 1][nu - 1];
            let mut w = a[nu][nu - 1] * a[nu - 1][nu];
            if l + 1 == nu {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    let z = p + z.copysign(p);
                    let lo = if z != 0.0 { x - w / z } else { x + z };
                    out[nu - 1] = (x + z, 0.0);
                    out[nu] = (lo, 0.0);
                } else {
                    out[nu - 1] = (x + p, -z);
                    out[nu] = (x + p, z);
                }
                nn -= 2;
                break;
            }
            if its == 60 {
                return Err(Error::NoConvergence(a[nu][nu - 1].abs()));
            }
            if its == 10 || its == 20 {
                t += x;
                for i in 0..=nu {
                    a[i][i] -= x;
                }
                let s = a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let (mut p, mut q, mut r): (f64, f64, f64);
            let mut m = nu - 2;
            loop {
                let z = a[m][m];
                let r0 = x - z;
                let s0 = y - z;
                p = (r0 * s0 - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - r0 - s0;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if k + 1 != nu { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    let z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        let mut pp = a[k][j] + q * a[k + 1][j];
                        if k + 1 != nu {
                            pp += r * a[k + 2][j];
                            a[k + 2][j] -= pp * z;
                        }
                        a[k + 1][j] -= pp * y;
                        a[k][j] -= pp * x;
                    }
                    let mmin = nu.min(k + 3);
                    for row in a.iter_mut().take(mmin + 1).skip(l) {
                        let mut pp = x * row[k] + y * row[k + 1];
                        if k + 1 != nu {
                            pp += z * row[k + 2];
                            row[k + 2] -= pp * r;
                        }
                        row[k + 1] -= pp * q;
                        row[k] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(out)
}

/// Eigenvalues `(re, im)` of a general real square matrix, sorted by real part.
pub fn general_eigenvalues(mat: &[Vec<f64>]) -> Result<Vec<(f64, f64)>> {
    let mut a = mat.to_vec();
    hessenberg(&mut a);
    let mut ev = hessenberg_qr(&mut a)?;
    ev.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(ev)
}

/// Solves `L L^T x = b` given the lower Cholesky factor.
pub fn cholesky_solve(l: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = l.len();
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i][k] * y[k]).sum::<f64>()) / l[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - (i + 1..n).map(|k| l[k][i] * x[k]).sum::<f64>()) / l[i][i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_matches_known_spectrum() {
        // second-difference matrix: eigenvalues 2 - 2 cos(k pi / (n+1))
        let n = 20;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let (vals, first) = tridiagonal_eigen(&diag, &off, true).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        let s: f64 = first.iter().map(|x| x * x).sum();
        assert!((s - 1.0).abs() < 1e-13);
        let low = lowest_tridiagonal_eigenvalues(&diag, &off, 3);
        for k in 0..3 {
            assert!((low[k] - vals[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn jacobi_rotation_diagonalizes() {
        let m = vec![vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 1.0]];
        let (vals, vecs) = jacobi_eigen(&m).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                let mv: f64 = (0..3).map(|j| m[i][j] * vecs[j][k]).sum();
                assert!((mv - vals[k] * vecs[i][k]).abs() < 1e-12);
            }
        }
        let tr: f64 = vals.iter().sum();
        assert!((tr - 8.0).abs() < 1e-12);
    }

    #[test]
    fn general_eigenvalues_of_similar_matrix() {
        // P diag(1, 2, 3) P^{-1} plus a rotation block with eigenvalues 4 +- 2i
        let a = vec![
            vec![1.0, 2.0, 0.0, 1.0, 0.5],
            vec![0.0, 2.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 3.0, 2.0, 0.0],
            vec![0.0, 0.0, 0.0, 4.0, -2.0],
            vec![0.0, 0.0, 0.0, 2.0, 4.0],
        ];
        // similarity by a dense invertible matrix
        let p = vec![
            vec![2.0, 1.0, 0.0, 0.3, 0.0],
            vec![0.5, 1.0, 0.2, 0.0, 0.1],
            vec![0.0, 0.4, 1.5, 0.0, 0.0],
            vec![0.1, 0.0, 0.0, 1.0, 0.7],
            vec![0.0, 0.2, 0.0, 0.3, 1.2],
        ];
        let mul = |x: &[Vec<f64>], y: &[Vec<f64>]| -> Vec<Vec<f64>> {
            (0..5).map(|i| (0..5).map(|j| (0..5).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
        };
        // P A P^{-1} has the spectrum of A; apply as (P A) P^{-1} via solving
        let pa = mul(&p, &a);
        let ev = general_eigenvalues(&pa).unwrap();
        let ev2 = general_eigenvalues(&mul(&a, &p)).unwrap();
        // AP and PA are similar (P invertible)
        for (x, y) in ev.iter().zip(&ev2) {
            assert!((x.0 - y.0).abs() < 1e-10 && (x.1 - y.1).abs() < 1e-10);
        }
        let ev = general_eigenvalues(&a).unwrap();
        let expect = [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, -2.0), (4.0, 2.0)];
        for (x, y) in ev.iter().zip(&expect) {
            assert!((x.0 - y.0).abs() < 1e-12 && (x.1 - y.1).abs() < 1e-12, "{ev:?}");
        }
        let rot = vec![vec![0.0, -1.0], vec![1.0, 0.0]];
        let ev = general_eigenvalues(&rot).unwrap();
        assert!((ev[0].1.abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cholesky_solve_roundtrip() {
        let m = vec![vec![4.0, 2.0, 0.4], vec![2.0, 5.0, 1.0], vec![0.4, 1.0, 3.0]];
        let l = cholesky(&m).unwrap();
        let x = cholesky_solve(&l, &[1.0, -2.0, 0.5]);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| m[i][j] * x[j]).sum();
            assert!((r - [1.0, -2.0, 0.5][i]).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(cholesky(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        let l = cholesky(&[vec![4.0, 2.0], vec![2.0, 5.0]]).unwrap();
        assert_eq!(l[0][0], 2.0);
        assert_eq!(l[1][0], 1.0);
        assert_eq!(l[1][1], 2.0);
    }
}
