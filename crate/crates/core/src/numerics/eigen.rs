//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::{DenseMatrix, NumericsError, Result};

/// Sweep cap before reporting non-convergence.
pub const MAX_SWEEPS: usize = 200;

/// Off-diagonal stopping threshold relative to `‖A‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct SymEigResult {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
    pub sweeps: usize,
}

/// Eigen-decomposition of `(A + Aᵀ)/2`.
pub fn sym_eig(a: &DenseMatrix) -> Result<SymEigResult> {
    let mut a = a.symmetrized()?;
    let n = a.rows();
    let mut v = DenseMatrix::identity(n);
    let scale = a.frobenius_norm();
    let tol = OFF_DIAGONAL_TOL * scale;

    let off_norm = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(NumericsError::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s, t);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let eigenvalues = order.iter().map(|&i| a[(i, i)]).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(SymEigResult {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let n = a.rows();
    let apq = a[(p, q)];
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k != p && k != q {
            let akp = a[(k, p)];
            let akq = a[(k, q)];
            let np = c * akp - s * akq;
            let nq = s * akp + c * akq;
            a[(k, p)] = np;
            a[(p, k)] = np;
            a[(k, q)] = nq;
            a[(q, k)] = nq;
        }
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn orthogonality_defect(q: &DenseMatrix) -> f64 {
        let qtq = q.transpose().matmul(q).unwrap();
        qtq.combine(1.0, &DenseMatrix::identity(q.cols()), -1.0)
            .unwrap()
            .max_abs()
    }

    fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        // Gram-Schmidt on a random square matrix.
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for _ in 0..2 {
                for c in &cols {
                    let d: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(c).for_each(|(x, y)| *x -= d * y);
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                cols.push(v.iter().map(|x| x / norm).collect());
            }
        }
        DenseMatrix::from_columns(&cols).unwrap()
    }

    #[test]
    fn diagonal_input() {
        let r = sym_eig(&DenseMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(r.eigenvalues, vec![3.0, 2.0, 1.0]);
        assert_eq!(r.eigenvectors.column(0), vec![1.0, 0.0, 0.0]);
        assert_eq!(r.eigenvectors.column(1), vec![0.0, 0.0, 1.0]);
        assert_eq!(r.eigenvectors.column(2), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn two_by_two_by_hand() {
        let a = DenseMatrix::new(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let r = sym_eig(&a).unwrap();
        assert!((r.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((r.eigenvalues[1] - 1.0).abs() < 1e-14);
        let h = 0.5f64.sqrt();
        let v0 = r.eigenvectors.column(0);
        let v1 = r.eigenvectors.column(1);
        assert!((v0[0].abs() - h).abs() < 1e-14 && (v0[0] - v0[1]).abs() < 1e-14);
        assert!((v1[0].abs() - h).abs() < 1e-14 && (v1[0] + v1[1]).abs() < 1e-14);
    }

    #[test]
    fn synthetic_spectrum_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 5, 17, 40] {
            let q = random_orthogonal(&mut rng, n);
            let mut lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let a = q
                .matmul(&DenseMatrix::from_diagonal(&lambda))
                .unwrap()
                .matmul(&q.transpose())
                .unwrap();
            let r = sym_eig(&a).unwrap();
            lambda.sort_by(|x, y| y.total_cmp(x));
            for (got, want) in r.eigenvalues.iter().zip(&lambda) {
                assert!((got - want).abs() <= 1e-10 * 10.0, "{got} vs {want}");
            }
            assert!(orthogonality_defect(&r.eigenvectors) <= 1e-12);
            let av = a.matmul(&r.eigenvectors).unwrap();
            let vl = r
                .eigenvectors
                .matmul(&DenseMatrix::from_diagonal(&r.eigenvalues))
                .unwrap();
            let resid = av.combine(1.0, &vl, -1.0).unwrap().frobenius_norm();
            assert!(resid <= 1e-10 * a.frobenius_norm());
        }
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=30 {
            let g = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let a = g.symmetrized().unwrap();
            let r = sym_eig(&a).unwrap();
            assert!(r.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            assert!(orthogonality_defect(&r.eigenvectors) <= 1e-12);
            let back = r
                .eigenvectors
                .matmul(&DenseMatrix::from_diagonal(&r.eigenvalues))
                .unwrap()
                .matmul(&r.eigenvectors.transpose())
                .unwrap();
            let resid = back.combine(1.0, &a, -1.0).unwrap().frobenius_norm();
            assert!(resid <= 1e-10 * a.frobenius_norm().max(f64::MIN_POSITIVE));
        }
    }
}
