//! Left singular pairs of a tall or wide matrix given by its columns.
//!
//! The matrix `B` (`n × m`) is handled through its transpose: a Householder QR
//! of `Bᵀ` reduces the problem to the `n × n` (or smaller) triangular factor
//! `R`, and one-sided Jacobi on the columns of `R` yields `R V = U Σ`. Since
//! `B = Rᵀ Qᵀ`, the accumulated `V` holds the left singular vectors of `B`.
//! Small singular values keep an absolute accuracy of order `ε σ₁`, so
//! `σ²` is resolved far below `ε σ₁²`.

use rayon::prelude::*;

use super::{NumericsError, Result};

pub const MAX_JACOBI_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct LeftSingularSystem {
    /// Sorted descending, length `n`.
    pub values: Vec<f64>,
    /// Orthonormal vectors of length `n`, paired with `values`.
    pub vectors: Vec<Vec<f64>>,
}

/// Left singular values and vectors of the `n × m` matrix with the given columns.
pub fn left_singular_system(columns: &[Vec<f64>]) -> Result<LeftSingularSystem> {
    let m = columns.len();
    if m == 0 {
        return Err(NumericsError::Empty);
    }
    let n = columns[0].len();
    if n == 0 {
        return Err(NumericsError::Empty);
    }
    if let Some(bad) = columns.iter().find(|c| c.len() != n) {
        return Err(NumericsError::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }

    // Column j of Bᵀ is row j of B: one spatial coordinate over all samples.
    let mut xt: Vec<Vec<f64>> = (0..n)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let p = m.min(n);
    householder_triangularize(&mut xt, p);

    // Columns of R (p × n), upper trapezoidal.
    let mut r: Vec<Vec<f64>> = xt
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let mut c = vec![0.0; p];
            let top = (j + 1).min(p);
            c[..top].copy_from_slice(&col[..top]);
            c
        })
        .collect();
    drop(xt);

    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    hestenes(&mut r, &mut v)?;

    let norms: Vec<f64> = r.iter().map(|c| dot(c, c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));
    Ok(LeftSingularSystem {
        values: order.iter().map(|&k| norms[k]).collect(),
        vectors: order.iter().map(|&k| v[k].clone()).collect(),
    })
}

/// Overwrites the first `p` columns' leading entries with `R` of `X = Q R`.
fn householder_triangularize(x: &mut [Vec<f64>], p: usize) {
    for k in 0..p {
        let (head, tail) = x.split_at_mut(k + 1);
        let col = &mut head[k];
        let norm = dot(&col[k..], &col[k..]).sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if col[k] > 0.0 { -norm } else { norm };
        let mut v = col[k..].to_vec();
        v[0] -= alpha;
        let beta = dot(&v, &v);
        col[k] = alpha;
        col[k + 1..].iter_mut().for_each(|e| *e = 0.0);
        if beta == 0.0 {
            continue;
        }
        let scale = 2.0 / beta;
        tail.par_iter_mut().for_each(|c| {
            let seg = &mut c[k..];
            let f = scale * dot(&v, seg);
            seg.iter_mut().zip(&v).for_each(|(s, vi)| *s -= f * vi);
        });
    }
}

/// One-sided Jacobi: orthogonalizes the columns of `a`, accumulating rotations in `v`.
fn hestenes(a: &mut [Vec<f64>], v: &mut [Vec<f64>]) -> Result<()> {
    let n = a.len();
    let rows = a.first().map_or(0, Vec::len).max(1);
    let tol = (rows as f64).sqrt() * f64::EPSILON;
    let total: f64 = a.iter().map(|c| dot(c, c)).sum();
    // Columns shorter than ε‖A‖_F are round-off and no longer rotated.
    let negligible = f64::EPSILON * f64::EPSILON * total;
    for sweep in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        let mut sq: Vec<f64> = a.iter().map(|c| dot(c, c)).collect();
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta) = (sq[i], sq[j]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&a[i], &a[j]);
                if gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(a, i, j, c, s);
                rotate_pair(v, i, j, c, s);
                sq[i] = (alpha - t * gamma).max(0.0);
                sq[j] = (beta + t * gamma).max(0.0);
            }
        }
        if !rotated {
            return Ok(());
        }
        if sweep + 1 == MAX_JACOBI_SWEEPS {
            break;
        }
    }
    Err(NumericsError::NoConvergence {
        sweeps: MAX_JACOBI_SWEEPS,
    })
}

fn rotate_pair(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(j);
    let (x, y) = (&mut lo[i], &mut hi[0]);
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let a = *xi;
        let b = *yi;
        *xi = c * a - s * b;
        *yi = s * a + c * b;
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sym_eig, DenseMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gram(columns: &[Vec<f64>]) -> DenseMatrix {
        let n = columns[0].len();
        DenseMatrix::from_fn(n, n, |i, j| columns.iter().map(|c| c[i] * c[j]).sum())
    }

    #[test]
    fn matches_gram_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (n, m) in [(1, 1), (3, 7), (7, 3), (12, 40), (25, 25)] {
            let cols: Vec<Vec<f64>> = (0..m)
                .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let svd = left_singular_system(&cols).unwrap();
            let eig = sym_eig(&gram(&cols)).unwrap();
            let scale = eig.eigenvalues[0];
            for (s, l) in svd.values.iter().zip(&eig.eigenvalues) {
                assert!((s * s - l).abs() <= 1e-11 * scale, "{} vs {}", s * s, l);
            }
            for (a, u) in svd.vectors.iter().enumerate() {
                for (b, w) in svd.vectors.iter().enumerate() {
                    let d = dot(u, w);
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-12);
                }
            }
            // B Bᵀ u = σ² u for nonzero σ
            let g = gram(&cols);
            for (s, u) in svd.values.iter().zip(&svd.vectors) {
                if *s > 1e-8 {
                    let gu = g.mul_vec(u);
                    for (x, y) in gu.iter().zip(u) {
                        assert!((x - s * s * y).abs() < 1e-10 * scale);
                    }
                }
            }
        }
    }

    #[test]
    fn resolves_tiny_singular_values() {
        // Columns e1, 1e-10 e2: the Gram route would lose 1e-20 against round-off.
        let cols = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1e-10, 0.0]];
        let svd = left_singular_system(&cols).unwrap();
        assert!((svd.values[0] - 1.0).abs() < 1e-15);
        assert!((svd.values[1] - 1e-10).abs() < 1e-24);
        assert_eq!(svd.values[2], 0.0);
    }

    #[test]
    fn rejects_ragged_and_empty() {
        assert!(left_singular_system(&[]).is_err());
        assert!(left_singular_system(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }
}
