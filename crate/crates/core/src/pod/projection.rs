use std::fmt;

use super::PodBasis;
use crate::error::Result;
use crate::fem1d::{FemSpace, FemVector};
use crate::numerics::{axpy, dot, sub, DenseCholesky, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    L2,
    H10,
}

impl Norm {
    pub fn norm_sq(&self, space: &FemSpace, v: &[f64]) -> f64 {
        match self {
            Norm::L2 => space.l2_norm_sq(v),
            Norm::H10 => space.h10_norm_sq(v),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Norm::L2 => "L2",
            Norm::H10 => "H10",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Projection onto `X_r = span{φ_1..φ_r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProjectorKind {
    /// L²-orthogonal `Π_r`.
    Orthogonal,
    /// H¹₀-orthogonal (Ritz) `R_r`.
    Ritz,
}

impl ProjectorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProjectorKind::Orthogonal => "orthogonal",
            ProjectorKind::Ritz => "ritz",
        }
    }
}

impl fmt::Display for ProjectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A projector onto the first `r` modes with its Gram data precomputed.
#[derive(Debug, Clone)]
pub struct Projector<'a> {
    modes: &'a [FemVector],
    /// `MΦ_r` or `AΦ_r`, one vector per mode.
    tested: Vec<FemVector>,
    /// Cholesky factor of `Φ_rᵀ A Φ_r` for the Ritz projector.
    reduced: Option<DenseCholesky>,
}

impl<'a> Projector<'a> {
    pub fn new(
        basis: &'a PodBasis,
        r: usize,
        space: &FemSpace,
        kind: ProjectorKind,
    ) -> Result<Self> {
        basis.check_r(r)?;
        let modes = &basis.modes[..r];
        match kind {
            ProjectorKind::Orthogonal => Ok(Self {
                modes,
                tested: modes.iter().map(|m| space.mass_mul(m)).collect(),
                reduced: None,
            }),
            ProjectorKind::Ritz => {
                let tested: Vec<FemVector> = modes.iter().map(|m| space.stiffness_mul(m)).collect();
                let stiff = DenseMatrix::from_fn(r, r, |i, j| dot(&modes[i], &tested[j]));
                let reduced = DenseCholesky::new(&stiff.symmetrized()?)?;
                Ok(Self {
                    modes,
                    tested,
                    reduced: Some(reduced),
                })
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.modes.len()
    }

    /// Coefficients `c` with projection `Φ_r c`.
    pub fn coefficients(&self, v: &[f64]) -> Result<Vec<f64>> {
        let rhs: Vec<f64> = self.tested.iter().map(|t| dot(t, v)).collect();
        match &self.reduced {
            None => Ok(rhs),
            Some(chol) => Ok(chol.solve_vec(&rhs)?),
        }
    }

    pub fn expand(&self, coeffs: &[f64]) -> FemVector {
        let mut out = vec![0.0; self.modes.first().map_or(0, Vec::len)];
        for (c, m) in coeffs.iter().zip(self.modes) {
            axpy(*c, m, &mut out);
        }
        out
    }

    pub fn apply(&self, v: &[f64]) -> Result<FemVector> {
        Ok(self.expand(&self.coefficients(v)?))
    }

    /// `v − P v`.
    pub fn residual(&self, v: &[f64]) -> Result<FemVector> {
        Ok(sub(v, &self.apply(v)?))
    }
}

/// `Π_r v = Φ_r Φ_rᵀ M v`.
pub fn project_l2(basis: &PodBasis, r: usize, space: &FemSpace, v: &[f64]) -> Result<FemVector> {
    space.check(v)?;
    Projector::new(basis, r, space, ProjectorKind::Orthogonal)?.apply(v)
}

/// `R_r v = Φ_r c` with `(Φ_rᵀ A Φ_r) c = Φ_rᵀ A v`.
pub fn project_ritz(basis: &PodBasis, r: usize, space: &FemSpace, v: &[f64]) -> Result<FemVector> {
    space.check(v)?;
    Projector::new(basis, r, space, ProjectorKind::Ritz)?.apply(v)
}
