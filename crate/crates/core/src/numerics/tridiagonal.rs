use super::{NumericsError, Result};

/// Square tridiagonal matrix stored by diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let m = diag.len();
        if m == 0 {
            return Err(NumericsError::Empty);
        }
        if sub.len() != m - 1 || sup.len() != m - 1 {
            return Err(NumericsError::DimensionMismatch {
                expected: m - 1,
                found: if sub.len() != m - 1 {
                    sub.len()
                } else {
                    sup.len()
                },
            });
        }
        Ok(Self { sub, diag, sup })
    }

    /// Matrix with constant diagonals, the shape produced by uniform 1-D meshes.
    pub fn constant(m: usize, sub: f64, diag: f64, sup: f64) -> Result<Self> {
        Self::new(
            vec![sub; m.saturating_sub(1)],
            vec![diag; m],
            vec![sup; m.saturating_sub(1)],
        )
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::constant(m, 0.0, 1.0, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// Entry `(i, j)`; zero outside the three diagonals.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i == j + 1 {
            self.sub[j]
        } else if j == i + 1 {
            self.sup[i]
        } else {
            0.0
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(NumericsError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let lin = |a: &[f64], b: &[f64]| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| alpha * x + beta * y).collect()
        };
        Ok(Self {
            sub: lin(&self.sub, &other.sub),
            diag: lin(&self.diag, &other.diag),
            sup: lin(&self.sup, &other.sup),
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let s = |v: &[f64]| v.iter().map(|x| alpha * x).collect();
        Self {
            sub: s(&self.sub),
            diag: s(&self.diag),
            sup: s(&self.sup),
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `y = A x`. Panics on length mismatch.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        let m = self.dim();
        assert_eq!(x.len(), m, "tridiagonal mul: vector length");
        assert_eq!(y.len(), m, "tridiagonal mul: output length");
        for i in 0..m {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < m {
                acc += self.sup[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let m = self.dim();
        assert_eq!(x.len(), m);
        assert_eq!(y.len(), m);
        let mut acc = 0.0;
        for i in 0..m {
            let mut row = self.diag[i] * y[i];
            if i > 0 {
                row += self.sub[i - 1] * y[i - 1];
            }
            if i + 1 < m {
                row += self.sup[i] * y[i + 1];
            }
            acc += x[i] * row;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.sub
            .iter()
            .chain(&self.diag)
            .chain(&self.sup)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i > 0 {
                    s += self.sub[i - 1].abs();
                }
                if i + 1 < m {
                    s += self.sup[i].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    /// Thomas-algorithm factorization, reusable for many right-hand sides.
    pub fn factor(&self) -> Result<ThomasFactor> {
        let m = self.dim();
        let scale = self.max_abs();
        let tiny = f64::EPSILON * scale;
        let mut denom = vec![0.0; m];
        let mut upper = vec![0.0; m.saturating_sub(1)];
        for i in 0..m {
            let d = if i == 0 {
                self.diag[0]
            } else {
                self.diag[i] - self.sub[i - 1] * upper[i - 1]
            };
            if !d.is_finite() || d.abs() <= tiny {
                return Err(NumericsError::ZeroPivot { index: i });
            }
            denom[i] = d;
            if i + 1 < m {
                upper[i] = self.sup[i] / d;
            }
        }
        Ok(ThomasFactor {
            sub: self.sub.clone(),
            denom,
            upper,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.factor()?.solve(b)
    }

    /// Cholesky factor `A = L Lᵀ` with `L` lower bidiagonal.
    pub fn cholesky(&self) -> Result<BidiagonalCholesky> {
        let scale = self.max_abs();
        for (i, (a, b)) in self.sub.iter().zip(&self.sup).enumerate() {
            if (a - b).abs() > 1e-14 * scale {
                return Err(NumericsError::NotSymmetric { row: i + 1, col: i });
            }
        }
        let m = self.dim();
        let mut diag = vec![0.0; m];
        let mut sub = vec![0.0; m.saturating_sub(1)];
        for i in 0..m {
            let mut pivot = self.diag[i];
            if i > 0 {
                sub[i - 1] = self.sub[i - 1] / diag[i - 1];
                pivot -= sub[i - 1] * sub[i - 1];
            }
            if !(pivot > 0.0) || !pivot.is_finite() {
                return Err(NumericsError::NotPositiveDefinite { index: i });
            }
            diag[i] = pivot.sqrt();
        }
        Ok(BidiagonalCholesky { diag, sub })
    }
}

/// Solves `A x = b` by the Thomas algorithm (no pivoting).
pub fn solve_tridiagonal(a: &TridiagonalMatrix, b: &[f64]) -> Result<Vec<f64>> {
    a.solve(b)
}

/// Lower-bidiagonal Cholesky factor of an SPD tridiagonal matrix.
pub fn cholesky_tridiagonal(a: &TridiagonalMatrix) -> Result<BidiagonalCholesky> {
    a.cholesky()
}

#[derive(Debug, Clone)]
pub struct ThomasFactor {
    sub: Vec<f64>,
    denom: Vec<f64>,
    upper: Vec<f64>,
}

impl ThomasFactor {
    pub fn dim(&self) -> usize {
        self.denom.len()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let m = self.dim();
        if x.len() != m {
            return Err(NumericsError::DimensionMismatch {
                expected: m,
                found: x.len(),
            });
        }
        x[0] /= self.denom[0];
        for i in 1..m {
            x[i] = (x[i] - self.sub[i - 1] * x[i - 1]) / self.denom[i];
        }
        for i in (0..m.saturating_sub(1)).rev() {
            x[i] -= self.upper[i] * x[i + 1];
        }
        Ok(())
    }
}

/// `L` with `diag[i] = L[i][i]` and `sub[i] = L[i+1][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiagonalCholesky {
    pub diag: Vec<f64>,
    pub sub: Vec<f64>,
}

impl BidiagonalCholesky {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `L x`.
    pub fn lower_mul(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(x.len(), m);
        (0..m)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.sub[i - 1] * x[i - 1];
                }
                v
            })
            .collect()
    }

    /// `Lᵀ x`.
    pub fn upper_mul(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(x.len(), m);
        (0..m)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i + 1 < m {
                    v += self.sub[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Solves `L x = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(b.len(), m);
        let mut x = vec![0.0; m];
        for i in 0..m {
            let mut v = b[i];
            if i > 0 {
                v -= self.sub[i - 1] * x[i - 1];
            }
            x[i] = v / self.diag[i];
        }
        x
    }

    /// Solves `Lᵀ x = b`.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        let m = self.dim();
        assert_eq!(b.len(), m);
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let mut v = b[i];
            if i + 1 < m {
                v -= self.sub[i] * x[i + 1];
            }
            x[i] = v / self.diag[i];
        }
        x
    }

    /// `L Lᵀ` as a tridiagonal matrix.
    pub fn reconstruct(&self) -> TridiagonalMatrix {
        let m = self.dim();
        let diag: Vec<f64> = (0..m)
            .map(|i| {
                let mut d = self.diag[i] * self.diag[i];
                if i > 0 {
                    d += self.sub[i - 1] * self.sub[i - 1];
                }
                d
            })
            .collect();
        let off: Vec<f64> = (0..m.saturating_sub(1))
            .map(|i| self.sub[i] * self.diag[i])
            .collect();
        TridiagonalMatrix {
            sub: off.clone(),
            diag,
            sup: off,
        }
    }
}
