use super::WaveParams;
use crate::fem1d::FemSpace;

/// The two squared norms that enter the discrete energy: the L² (mass) norm
/// and the H¹₀ (stiffness) norm of a coefficient vector.
pub trait EnergyNorms {
    fn mass_norm_sq(&self, v: &[f64]) -> f64;
    fn stiffness_norm_sq(&self, v: &[f64]) -> f64;
}

impl EnergyNorms for FemSpace {
    fn mass_norm_sq(&self, v: &[f64]) -> f64 {
        self.l2_norm_sq(v)
    }

    fn stiffness_norm_sq(&self, v: &[f64]) -> f64 {
        self.h10_norm_sq(v)
    }
}

/// `E(zⁿ) = ½‖∂⁻zⁿ‖²_{L²} + ½c²‖∇z̄ⁿ‖²_{L²}` from the pair `(z^{n−1}, zⁿ)`.
pub fn energy<N: EnergyNorms + ?Sized>(
    norms: &N,
    speed: f64,
    dt: f64,
    previous: &[f64],
    current: &[f64],
) -> f64 {
    let back: Vec<f64> = current
        .iter()
        .zip(previous)
        .map(|(a, b)| (a - b) / dt)
        .collect();
    let avg: Vec<f64> = current
        .iter()
        .zip(previous)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    0.5 * norms.mass_norm_sq(&back) + 0.5 * speed * speed * norms.stiffness_norm_sq(&avg)
}

/// Energies of states `1..N` (zero-based); entry `i − 1` is `E` at state `i`.
pub fn energy_series<N: EnergyNorms + ?Sized>(
    norms: &N,
    speed: f64,
    dt: f64,
    states: &[Vec<f64>],
) -> Vec<f64> {
    states
        .windows(2)
        .map(|w| energy(norms, speed, dt, &w[0], &w[1]))
        .collect()
}

/// Both sides of the discrete energy law at an interior level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBalance {
    /// `∂E(zⁿ) = (E(z^{n+1}) − E(zⁿ)) / Δt`.
    pub rate: f64,
    /// `D‖∂z̄ⁿ‖²_{L²} + G‖∂∇z̄ⁿ‖²_{L²}`, with `∂z̄ⁿ = (z^{n+1} − z^{n−1}) / (2Δt)`.
    pub dissipation: f64,
}

impl EnergyBalance {
    /// `∂E + dissipation`, zero for the exact scheme.
    pub fn residual(&self) -> f64 {
        self.rate + self.dissipation
    }
}

/// Energy law at interior state `i` (`1 ≤ i ≤ N − 2`, zero-based).
pub fn energy_balance<N: EnergyNorms + ?Sized>(
    norms: &N,
    params: &WaveParams,
    dt: f64,
    states: &[Vec<f64>],
    i: usize,
) -> EnergyBalance {
    assert!(i >= 1 && i + 1 < states.len(), "interior level required");
    let e_now = energy(norms, params.speed, dt, &states[i - 1], &states[i]);
    let e_next = energy(norms, params.speed, dt, &states[i], &states[i + 1]);
    let centered: Vec<f64> = states[i + 1]
        .iter()
        .zip(&states[i - 1])
        .map(|(a, b)| (a - b) / (2.0 * dt))
        .collect();
    EnergyBalance {
        rate: (e_next - e_now) / dt,
        dissipation: params.viscous * norms.mass_norm_sq(&centered)
            + params.kelvin_voigt * norms.stiffness_norm_sq(&centered),
    }
}
