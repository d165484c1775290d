use std::fmt;
use std::str::FromStr;

use super::{PodDataSet, PodMethod};
use crate::error::{Error, Result};
use crate::fem1d::{FemSpace, FemVector};
use crate::numerics::{left_singular_system, sym_eig, DenseMatrix};

/// How the weighted POD eigenproblem is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvdRoute {
    /// Householder QR plus one-sided Jacobi on `B = Lᵀ W Γ^{1/2}`; never forms `BBᵀ`.
    #[default]
    Direct,
    /// Jacobi eigensolver on the spatial Gram matrix `BBᵀ`.
    Gram,
}

impl SvdRoute {
    /// Default relative eigenvalue cutoff `λ_k > τ λ₁` for `n` rows and `m` columns.
    pub fn default_rank_tol(&self, n: usize, m: usize) -> f64 {
        match self {
            SvdRoute::Direct => {
                let rel_sigma = n.max(m) as f64 * f64::EPSILON;
                rel_sigma * rel_sigma
            }
            SvdRoute::Gram => 1e-13,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SvdRoute::Direct => "direct",
            SvdRoute::Gram => "gram",
        }
    }
}

impl fmt::Display for SvdRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SvdRoute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "direct" | "svd" => Ok(SvdRoute::Direct),
            "gram" => Ok(SvdRoute::Gram),
            other => Err(Error::InvalidParameter(format!(
                "unknown SVD route {other:?} (expected direct or gram)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PodOptions {
    pub route: SvdRoute,
    /// Relative cutoff `τ` with `λ_k > τ λ₁`; `None` uses the route default.
    pub rank_tol: Option<f64>,
}

/// L²-orthonormal POD modes with their eigenvalues.
#[derive(Debug, Clone)]
pub struct PodBasis {
    pub method: PodMethod,
    /// `φ_1..φ_s`, `φ_kᵀ M φ_l = δ_kl`.
    pub modes: Vec<FemVector>,
    /// `λ_1 ≥ … ≥ λ_s`, all above the cutoff.
    pub eigenvalues: Vec<f64>,
    /// Every computed eigenvalue, retained or not, clamped at zero.
    pub spectrum: Vec<f64>,
    pub rank_tol: f64,
    pub route: SvdRoute,
}

impl PodBasis {
    /// `s`, the number of retained modes.
    pub fn rank(&self) -> usize {
        self.modes.len()
    }

    pub fn check_r(&self, r: usize) -> Result<()> {
        if r == 0 || r > self.rank() {
            return Err(Error::RankOutOfRange {
                r,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// `Σ_{k=r+1}^{s} λ_k`.
    pub fn tail_sum(&self, r: usize) -> f64 {
        self.eigenvalues.iter().skip(r).sum()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        self.spectrum.iter().map(|l| l.sqrt()).collect()
    }
}

pub fn compute_basis(data: &PodDataSet, space: &FemSpace, options: PodOptions) -> Result<PodBasis> {
    if data.is_empty() {
        return Err(Error::ZeroData);
    }
    for c in &data.columns {
        space.check(c)?;
    }
    let n = space.n_dof();
    let chol = space.mass().cholesky()?;
    let scaled: Vec<Vec<f64>> = data
        .columns
        .iter()
        .zip(&data.weights)
        .map(|(w, g)| {
            let s = g.sqrt();
            chol.upper_mul(w).into_iter().map(|x| s * x).collect()
        })
        .collect();
    if scaled.iter().flatten().all(|x| *x == 0.0) {
        return Err(Error::ZeroData);
    }

    let (spectrum, vectors): (Vec<f64>, Vec<Vec<f64>>) = match options.route {
        SvdRoute::Direct => {
            let sys = left_singular_system(&scaled)?;
            let lambdas = sys.values.iter().map(|s| s * s).collect();
            (lambdas, sys.vectors)
        }
        SvdRoute::Gram => {
            let mut gram = DenseMatrix::zeros(n, n);
            for b in &scaled {
                for i in 0..n {
                    let bi = b[i];
                    if bi == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        gram[(i, j)] += bi * b[j];
                    }
                }
            }
            let eig = sym_eig(&gram)?;
            let vecs = eig.eigenvectors.columns();
            let lambdas = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
            (lambdas, vecs)
        }
    };

    let rank_tol = options
        .rank_tol
        .unwrap_or_else(|| options.route.default_rank_tol(n, data.len()));
    let lambda1 = spectrum[0];
    let s = spectrum
        .iter()
        .take_while(|l| **l > rank_tol * lambda1)
        .count();
    if s == 0 {
        return Err(Error::ZeroData);
    }
    let modes = vectors[..s]
        .iter()
        .map(|v| {
            let mut phi = chol.solve_upper(v);
            orient(&mut phi);
            phi
        })
        .collect();
    Ok(PodBasis {
        method: data.method,
        modes,
        eigenvalues: spectrum[..s].to_vec(),
        spectrum,
        rank_tol,
        route: options.route,
    })
}

/// Flips `v` so that its first non-negligible entry is positive.
fn orient(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
