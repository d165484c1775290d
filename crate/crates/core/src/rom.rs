//! POD-Galerkin reduced-order model of the damped wave scheme and its errors
//! against the finite element solution.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem1d::{FemSpace, FemVector};
use crate::numerics::{axpy, dot, sub, DenseCholesky, DenseMatrix};
use crate::pod::{data_error_formula, Norm, PodBasis, PodMethod, Projector, ProjectorKind};
use crate::wave::{energy, EnergyNorms, TimeGrid, Trajectory, WaveParams};

/// Denominators below this make a bound ratio meaningless.
pub const RATIO_DENOMINATOR_FLOOR: f64 = 1e-14;

/// Reduced system on `X_r = span{φ_1..φ_r}` in modal coordinates `a`, with
/// `u_r = Σ a_k φ_k`. The reduced mass matrix is the identity.
#[derive(Debug, Clone)]
pub struct RomSystem {
    pub modes: Vec<FemVector>,
    /// `S_r = Φ_rᵀ A Φ_r`.
    pub stiffness: DenseMatrix,
    pub params: WaveParams,
    pub grid: TimeGrid,
    /// `a¹ = Φ_rᵀ M u_h¹`.
    pub a1: Vec<f64>,
    /// `a² = Φ_rᵀ M u_h²`.
    pub a2: Vec<f64>,
}

impl RomSystem {
    pub fn r(&self) -> usize {
        self.modes.len()
    }

    pub fn reconstruct(&self, a: &[f64]) -> FemVector {
        let mut out = vec![0.0; self.modes[0].len()];
        for (c, m) in a.iter().zip(&self.modes) {
            axpy(*c, m, &mut out);
        }
        out
    }
}

impl EnergyNorms for RomSystem {
    fn mass_norm_sq(&self, v: &[f64]) -> f64 {
        dot(v, v)
    }

    fn stiffness_norm_sq(&self, v: &[f64]) -> f64 {
        dot(v, &self.stiffness.mul_vec(v))
    }
}

/// Reduced system for the first `r` modes, started from `Π_r u_h¹` and `Π_r u_h²`.
pub fn build_rom(
    basis: &PodBasis,
    r: usize,
    space: &FemSpace,
    params: &WaveParams,
    grid: &TimeGrid,
    u1: &[f64],
    u2: &[f64],
) -> Result<RomSystem> {
    basis.check_r(r)?;
    space.check(u1)?;
    space.check(u2)?;
    let modes = basis.modes[..r].to_vec();
    let m_modes: Vec<FemVector> = modes.iter().map(|p| space.mass_mul(p)).collect();
    let a_modes: Vec<FemVector> = modes.iter().map(|p| space.stiffness_mul(p)).collect();
    for i in 0..r {
        for j in 0..r {
            let want = if i == j { 1.0 } else { 0.0 };
            if (dot(&modes[i], &m_modes[j]) - want).abs() > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "POD modes {i} and {j} are not L²-orthonormal"
                )));
            }
        }
    }
    let stiffness = DenseMatrix::from_fn(r, r, |i, j| dot(&modes[i], &a_modes[j]));
    let scale = stiffness.max_abs();
    if stiffness.max_asymmetry() > 1e-12 * scale {
        return Err(Error::InvalidParameter(
            "reduced stiffness is not symmetric".into(),
        ));
    }
    let stiffness = stiffness.symmetrized()?;
    let a1 = m_modes.iter().map(|m| dot(m, u1)).collect();
    let a2 = m_modes.iter().map(|m| dot(m, u2)).collect();
    Ok(RomSystem {
        modes,
        stiffness,
        params: *params,
        grid: *grid,
        a1,
        a2,
    })
}

/// Modal coefficients `a¹..aᴺ` of the reduced three-level scheme.
pub fn solve_rom_coefficients(rom: &RomSystem) -> Result<Vec<Vec<f64>>> {
    let r = rom.r();
    let dt = rom.grid.dt();
    let p = &rom.params;
    let c2 = p.speed * p.speed;
    let id = DenseMatrix::identity(r);
    let s = &rom.stiffness;
    let inv_dt2 = 1.0 / (dt * dt);
    let half_inv_dt = 0.5 / dt;
    let damping = id.combine(p.viscous * half_inv_dt, s, p.kelvin_voigt * half_inv_dt)?;
    let inertia_stiff = id.combine(inv_dt2, s, 0.25 * c2)?;
    let system = inertia_stiff.combine(1.0, &damping, 1.0)?;
    let current = id.combine(2.0 * inv_dt2, s, -0.5 * c2)?;
    let previous = inertia_stiff.combine(-1.0, &damping, 1.0)?;
    let factor = DenseCholesky::new(&system)?;

    let n = rom.grid.n_states();
    let mut coeffs = Vec::with_capacity(n);
    coeffs.push(rom.a1.clone());
    coeffs.push(rom.a2.clone());
    for i in 2..n {
        let mut rhs = current.mul_vec(&coeffs[i - 1]);
        let back = previous.mul_vec(&coeffs[i - 2]);
        rhs.iter_mut().zip(&back).for_each(|(x, b)| *x += b);
        coeffs.push(factor.solve_vec(&rhs)?);
    }
    Ok(coeffs)
}

/// Reduced trajectory mapped back to finite element coefficients, `u_rⁿ = Φ_r aⁿ`.
pub fn solve_rom(rom: &RomSystem) -> Result<Trajectory> {
    let coeffs = solve_rom_coefficients(rom)?;
    let states = coeffs.par_iter().map(|a| rom.reconstruct(a)).collect();
    Trajectory::new(rom.grid, states)
}

/// Errors `eⁿ = u_hⁿ − u_rⁿ = ηⁿ − φ_rⁿ` with `ηⁿ = u_hⁿ − R_r u_hⁿ` and
/// `φ_rⁿ = u_rⁿ − R_r u_hⁿ`, and the two bound ratios.
#[derive(Debug, Clone)]
pub struct RomErrorReport {
    pub method: PodMethod,
    pub r: usize,
    /// `‖eⁿ‖²_{L²}` for every state.
    pub l2_sq: Vec<f64>,
    /// `E(eⁿ)` for states `1..N` (zero-based); entry `i − 1` belongs to state `i`.
    pub energy: Vec<f64>,
    /// `max_n ‖eⁿ‖²_{L²}`.
    pub max_pointwise_l2: f64,
    /// `max_n E(eⁿ)`.
    pub max_energy: f64,
    /// `‖eᴺ‖_{L²}`.
    pub final_time_l2: f64,
    /// `max_n ‖eⁿ − (ηⁿ − φ_rⁿ)‖_∞`, round-off only.
    pub split_residual: f64,
    /// `E(φ_r²) + Σ_{k>r} λ_k (‖φ_k − R_rφ_k‖²_{L²} + ‖φ_k − R_rφ_k‖²_{H¹₀})`.
    pub energy_denominator: f64,
    /// `‖φ_r¹‖²_{L²} + E(φ_r²) + Σ_{k>r} λ_k ‖φ_k − R_rφ_k‖²_{L²}`.
    pub pointwise_denominator: f64,
    /// `max E(eⁿ) / energy_denominator`; `None` without damping or for a vanishing denominator.
    pub ratio_energy: Option<f64>,
    /// `max ‖eⁿ‖² / pointwise_denominator`; `None` as for `ratio_energy`.
    pub ratio_pointwise: Option<f64>,
}

impl RomErrorReport {
    /// `max_n ‖eⁿ‖_{L²}`.
    pub fn max_l2(&self) -> f64 {
        self.max_pointwise_l2.sqrt()
    }

    /// `‖eᴺ‖²_{L²}`.
    pub fn final_l2_sq(&self) -> f64 {
        self.l2_sq.last().copied().unwrap_or(0.0)
    }
}

pub fn error_report(
    fe: &Trajectory,
    rom: &Trajectory,
    basis: &PodBasis,
    r: usize,
    space: &FemSpace,
    params: &WaveParams,
) -> Result<RomErrorReport> {
    if fe.len() != rom.len() {
        return Err(Error::LengthMismatch {
            expected: fe.len(),
            found: rom.len(),
        });
    }
    if fe.len() < 2 {
        return Err(Error::TooFewStates {
            needed: 2,
            found: fe.len(),
        });
    }
    let ritz = Projector::new(basis, r, space, ProjectorKind::Ritz)?;
    let dt = fe.dt();
    let c = params.speed;

    struct Split {
        e: FemVector,
        phi: FemVector,
        residual: f64,
    }
    let splits: Vec<Split> = fe
        .states
        .par_iter()
        .zip(rom.states.par_iter())
        .map(|(uh, ur)| {
            let ruh = ritz.apply(uh)?;
            let e = sub(uh, ur);
            let eta = sub(uh, &ruh);
            let phi = sub(ur, &ruh);
            let residual = e
                .iter()
                .zip(eta.iter().zip(&phi))
                .fold(0.0f64, |m, (e, (a, b))| m.max((e - (a - b)).abs()));
            Ok(Split { e, phi, residual })
        })
        .collect::<Result<_>>()?;

    let l2_sq: Vec<f64> = splits.iter().map(|s| space.l2_norm_sq(&s.e)).collect();
    let energy_series: Vec<f64> = splits
        .par_windows(2)
        .map(|w| energy(space, c, dt, &w[0].e, &w[1].e))
        .collect();
    let max_pointwise_l2 = l2_sq.iter().copied().fold(0.0, f64::max);
    let max_energy = energy_series.iter().copied().fold(0.0, f64::max);
    let final_time_l2 = l2_sq.last().copied().unwrap_or(0.0).sqrt();
    let split_residual = splits.iter().map(|s| s.residual).fold(0.0, f64::max);

    let phi1 = space.l2_norm_sq(&splits[0].phi);
    let phi_energy = energy(space, c, dt, &splits[0].phi, &splits[1].phi);
    let (tail_l2, tail_h10) = if r < basis.rank() {
        (
            data_error_formula(basis, r, space, Norm::L2, ProjectorKind::Ritz)?,
            data_error_formula(basis, r, space, Norm::H10, ProjectorKind::Ritz)?,
        )
    } else {
        (0.0, 0.0)
    };
    let energy_denominator = phi_energy + tail_l2 + tail_h10;
    let pointwise_denominator = phi1 + phi_energy + tail_l2;
    let ratio = |num: f64, den: f64| {
        (!params.is_undamped() && den >= RATIO_DENOMINATOR_FLOOR).then(|| num / den)
    };
    Ok(RomErrorReport {
        method: basis.method,
        r,
        ratio_energy: ratio(max_energy, energy_denominator),
        ratio_pointwise: ratio(max_pointwise_l2, pointwise_denominator),
        l2_sq,
        energy: energy_series,
        max_pointwise_l2,
        max_energy,
        final_time_l2,
        split_residual,
        energy_denominator,
        pointwise_denominator,
    })
}
