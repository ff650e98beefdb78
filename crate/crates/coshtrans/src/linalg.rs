//! Dense symmetric eigensolver and small-matrix helpers.
//!
//! The eigensolver is the classic Householder tridiagonalization followed
//! by implicit-shift QL, with eigenvector accumulation. Matrices here are
//! at most 64x64, so a dense O(n^3) solver is the right tool.

use crate::error::{Error, Result};

/// Eigenvalues in ascending order with matching unit eigenvectors
/// (`vectors[j]` belongs to `values[j]`).
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Eigen decomposition of a symmetric matrix given in row-major order.
pub fn sym_eigen(a: &[f64], n: usize) -> Result<SymEigen> {
    assert_eq!(a.len(), n * n);
    for (idx, &v) in a.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry {
                row: idx / n,
                col: idx % n,
            });
        }
    }
    if n == 0 {
        return Ok(SymEigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, n, &mut d, &mut e);
    tqli(&mut d, &mut e, n, &mut z)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..n).map(|k| z[k * n + j]).collect())
        .collect();
    Ok(SymEigen { values, vectors })
}

/// Householder reduction to tridiagonal form, accumulating the orthogonal
/// transformation in `z`.
fn tred2(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += z[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * z[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL on the tridiagonal (d, e), rotating `z` along.
fn tqli(d: &mut [f64], e: &mut [f64], n: usize, z: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
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
            if iter > 64 {
                return Err(Error::IllConditioned(
                    "QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
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
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
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
    Ok(())
}

/// Determinant and inverse via Gauss-Jordan with partial pivoting.
/// Returns None when a pivot falls below 1e-300 (singular).
pub fn det_inverse(a: &[f64], n: usize) -> Option<(f64, Vec<f64>)> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..n {
        let pivot_row = (col..n).max_by(|&i, &j| {
            m[i * n + col]
                .abs()
                .partial_cmp(&m[j * n + col].abs())
                .unwrap()
        })?;
        if m[pivot_row * n + col].abs() < 1e-300 {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                m.swap(pivot_row * n + k, col * n + k);
                inv.swap(pivot_row * n + k, col * n + k);
            }
            det = -det;
        }
        let pivot = m[col * n + col];
        det *= pivot;
        for k in 0..n {
            m[col * n + k] /= pivot;
            inv[col * n + k] /= pivot;
        }
        for row in 0..n {
            if row != col {
                let factor = m[row * n + col];
                if factor != 0.0 {
                    for k in 0..n {
                        m[row * n + k] -= factor * m[col * n + k];
                        inv[row * n + k] -= factor * inv[col * n + k];
                    }
                }
            }
        }
    }
    Some((det, inv))
}

pub fn mat_vec(a: &[f64], n: usize, x: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| a[i * n + j] * x[j]).sum())
        .collect()
}

pub fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0.0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}

pub fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j];
        }
    }
    out
}

/// Spectral (operator 2-) norm: sqrt of the largest eigenvalue of A^T A.
pub fn spectral_norm(a: &[f64], n: usize) -> f64 {
    let ata = mat_mul(&transpose(a, n), a, n);
    match sym_eigen(&ata, n) {
        Ok(eig) => eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt(),
        Err(_) => f64::NAN,
    }
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_identity() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        let eig = sym_eigen(&a, n).unwrap();
        for v in &eig.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigen_2x2_hand_values() {
        // [[1,1],[1,2]]: eigenvalues (3 +- sqrt 5)/2
        let eig = sym_eigen(&[1.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((eig.values[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((eig.values[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
        // [[0,1],[1,4]]: eigenvalues 2 +- sqrt 5
        let eig = sym_eigen(&[0.0, 1.0, 1.0, 4.0], 2).unwrap();
        assert!((eig.values[0] - (2.0 - 5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs_matrix() {
        // pseudo-random symmetric 8x8, checked via A v = lambda v
        let n = 8;
        let mut rng = crate::rng::SplitMix64::new(42);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.uniform(-2.0, 2.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let eig = sym_eigen(&a, n).unwrap();
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let av = mat_vec(&a, n, v);
            for k in 0..n {
                assert!(
                    (av[k] - lam * v[k]).abs() < 1e-10,
                    "residual too large for lambda = {lam}"
                );
            }
        }
        // eigenvalues sorted
        for w in eig.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn eigen_large_random_residuals() {
        // orthogonality and eigen-residuals at the dimension cap
        let mut rng = crate::rng::SplitMix64::new(2024);
        for &n in &[32usize, 64] {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.uniform(-1.0, 1.0);
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            let eig = sym_eigen(&a, n).unwrap();
            for (lam, v) in eig.values.iter().zip(&eig.vectors) {
                let av = mat_vec(&a, n, v);
                let res: f64 = av
                    .iter()
                    .zip(v)
                    .map(|(x, y)| (x - lam * y) * (x - lam * y))
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-9 * n as f64, "n = {n}: residual {res}");
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-10);
            }
            // trace is preserved
            let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
            let sum: f64 = eig.values.iter().sum();
            assert!((trace - sum).abs() < 1e-9 * n as f64);
        }
    }

    #[test]
    fn eigen_hilbert_matrix_extremes() {
        // the 10x10 Hilbert matrix: lambda_min = 1.093270e-13 and
        // lambda_max = 1.751920 (reference eigensolve); a hard
        // conditioning case of exactly the Hankel type used here
        let n = 10;
        let mut h = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = 1.0 / (i + j + 1) as f64;
            }
        }
        let eig = sym_eigen(&h, n).unwrap();
        assert!(
            (eig.values[n - 1] - 1.751_919_670_265_178_5).abs() < 1e-12,
            "lmax {}",
            eig.values[n - 1]
        );
        // absolute error near machine precision is the best any double
        // solver can do at condition 1e13
        assert!(
            (eig.values[0] - 1.093_27e-13).abs() < 1e-14,
            "lmin {}",
            eig.values[0]
        );
        assert!(eig.values.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn det_inverse_small() {
        let (det, inv) = det_inverse(&[2.0, 0.0, 0.0, 0.5], 2).unwrap();
        assert!((det - 1.0).abs() < 1e-15);
        assert!((inv[0] - 0.5).abs() < 1e-15);
        assert!((inv[3] - 2.0).abs() < 1e-15);
        assert!(det_inverse(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    }

    #[test]
    fn spectral_norm_diagonal() {
        assert!((spectral_norm(&[3.0, 0.0, 0.0, -5.0], 2) - 5.0).abs() < 1e-12);
    }
}
