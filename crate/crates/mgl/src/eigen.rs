//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration, with accumulation of the
//! orthogonal transformations. Self-contained and deterministic; intended
//! for the cycle-operator matrices of the discrete oracle (order up to a few
//! thousand), so the inner loops are arranged to walk rows contiguously.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EigenError {
    #[error("QL iteration failed to converge; remaining off-diagonal {off_diagonal:.3e}")]
    NoConvergence { off_diagonal: f64 },
}

/// Eigenvalues in ascending order; the eigenvector for `eigenvalues[j]` is
/// stored contiguously as row `j` of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors[j * self.n..(j + 1) * self.n].to_vec()
    }
}

const MAX_QL_ITERATIONS: usize = 50;

/// Decompose a symmetric matrix given in row-major order. The buffer is
/// consumed and reused for the accumulated transformations.
pub fn symmetric_eigen(mut a: Vec<f64>, n: usize) -> Result<EigenDecomposition, EigenError> {
    assert_eq!(a.len(), n * n);
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tred2(&mut a, n, &mut d, &mut e);
    // Rotations in the QL stage act on eigenvector pairs; keep each vector
    // in a contiguous row.
    let mut zt = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            zt[j * n + i] = a[i * n + j];
        }
    }
    tql2(&mut d, &mut e, n, &mut zt)?;
    sort_ascending(&mut d, &mut zt, n);
    Ok(EigenDecomposition {
        n,
        eigenvalues: d,
        eigenvectors: zt,
    })
}

/// Householder reduction of `a` to tridiagonal form (diagonal in `d`,
/// sub-diagonal in `e[1..]`), accumulating the orthogonal matrix in `a`.
/// Only the lower triangle of `a` is referenced.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                // e[0..=l] = A·u for the symmetric active block (lower
                // triangle), walking each row once.
                for j in 0..=l {
                    a[j * n + i] = a[i * n + j] / h;
                    e[j] = 0.0;
                }
                for k in 0..=l {
                    let uk = a[i * n + k];
                    let row = k * n;
                    let mut ek = a[row + k] * uk;
                    for j in 0..k {
                        e[j] += a[row + j] * uk;
                        ek += a[row + j] * a[i * n + j];
                    }
                    e[k] += ek;
                }
                let mut f_acc = 0.0;
                for j in 0..=l {
                    e[j] /= h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    let row = j * n;
                    for k in 0..=j {
                        a[row + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    // Accumulate the transformations front to back; the inner updates run
    // along rows.
    let mut g = vec![0.0f64; n];
    for i in 0..n {
        if d[i] != 0.0 {
            for x in g.iter_mut().take(i) {
                *x = 0.0;
            }
            for k in 0..i {
                let aik = a[i * n + k];
                if aik != 0.0 {
                    let row = k * n;
                    for j in 0..i {
                        g[j] += aik * a[row + j];
                    }
                }
            }
            for k in 0..i {
                let aki = a[k * n + i];
                if aki != 0.0 {
                    let row = k * n;
                    for j in 0..i {
                        a[row + j] -= g[j] * aki;
                    }
                }
            }
        }
        d[i] = a[i * n + i];
        a[i * n + i] = 1.0;
        for j in 0..i {
            a[j * n + i] = 0.0;
            a[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL for a symmetric tridiagonal matrix. `zt` holds the
/// accumulated transformation with eigenvector candidates as rows, so each
/// plane rotation updates two contiguous rows.
fn tql2(d: &mut [f64], e: &mut [f64], n: usize, zt: &mut [f64]) -> Result<(), EigenError> {
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
            if iter == MAX_QL_ITERATIONS {
                return Err(EigenError::NoConvergence {
                    off_diagonal: e[l].abs(),
                });
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
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
                let (lo, hi) = zt.split_at_mut((i + 1) * n);
                let row_i = &mut lo[i * n..(i + 1) * n];
                let row_i1 = &mut hi[..n];
                for k in 0..n {
                    f = row_i1[k];
                    row_i1[k] = s * row_i[k] + c * f;
                    row_i[k] = c * row_i[k] - s * f;
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

fn sort_ascending(d: &mut [f64], zt: &mut [f64], n: usize) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let old_d = d.to_vec();
    let old_z = zt.to_vec();
    for (new_j, &old_j) in order.iter().enumerate() {
        d[new_j] = old_d[old_j];
        zt[new_j * n..(new_j + 1) * n].copy_from_slice(&old_z[old_j * n..(old_j + 1) * n]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(a: &[f64], n: usize, lambda: f64, v: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut av = 0.0;
            for j in 0..n {
                av += a[i * n + j] * v[j];
            }
            worst = worst.max((av - lambda * v[i]).abs());
        }
        worst
    }

    #[test]
    fn diagonal_matrix() {
        let a = vec![3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0];
        let dec = symmetric_eigen(a, 3).unwrap();
        assert_eq!(dec.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn known_two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3.
        let dec = symmetric_eigen(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_symmetric_matrices_decompose() {
        let mut state = 0x853C49E6748FEA9Bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [5usize, 20, 60] {
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = next();
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            let original = a.clone();
            let dec = symmetric_eigen(a, n).unwrap();
            let norm: f64 = original.iter().map(|x| x.abs()).fold(0.0, f64::max);
            for j in 0..n {
                let v = dec.eigenvector(j);
                let r = residual(&original, n, dec.eigenvalues[j], &v);
                assert!(r < 1e-12 * norm.max(1.0) * n as f64, "n {n} j {j}: {r}");
            }
            // Eigenvector rows orthonormal.
            for j in 0..n {
                for k in 0..=j {
                    let dot: f64 = (0..n)
                        .map(|i| dec.eigenvectors[j * n + i] * dec.eigenvectors[k * n + i])
                        .sum();
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12, "n {n} ({j},{k}): {dot}");
                }
            }
            // Trace preserved.
            let tr: f64 = (0..n).map(|i| original[i * n + i]).sum();
            let sum: f64 = dec.eigenvalues.iter().sum();
            assert!((tr - sum).abs() < 1e-11 * n as f64);
        }
    }
}
