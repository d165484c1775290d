//! Damped wave equation `u_tt − c² u_xx + D u_t − G u_txx = 0` on (0, 1):
//! the implicit three-level finite element scheme, its discrete energy, and
//! separation-of-variables reference solutions.

mod analytic;
mod energy;
mod scheme;

pub use analytic::{sine_coefficients, AnalyticSeries, ModalTerm, DEFAULT_K_MAX, SINE_PANELS};
pub use energy::{energy, energy_balance, energy_series, EnergyBalance, EnergyNorms};
pub use scheme::{initial_states, solve, WaveStepper};

use crate::error::{Error, Result};
use crate::fem1d::FemVector;

/// Wave speed and damping coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    /// `c > 0`.
    pub speed: f64,
    /// Viscous damping `D ≥ 0`.
    pub viscous: f64,
    /// Kelvin–Voigt damping `G ≥ 0`.
    pub kelvin_voigt: f64,
}

impl WaveParams {
    pub fn new(speed: f64, viscous: f64, kelvin_voigt: f64) -> Result<Self> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wave speed must be > 0, got {speed}"
            )));
        }
        if !(viscous >= 0.0) || !viscous.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "D must be >= 0, got {viscous}"
            )));
        }
        if !(kelvin_voigt >= 0.0) || !kelvin_voigt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "G must be >= 0, got {kelvin_voigt}"
            )));
        }
        Ok(Self {
            speed,
            viscous,
            kelvin_voigt,
        })
    }

    pub fn undamped(speed: f64) -> Result<Self> {
        Self::new(speed, 0.0, 0.0)
    }

    pub fn is_undamped(&self) -> bool {
        self.viscous == 0.0 && self.kelvin_voigt == 0.0
    }
}

/// Uniform time grid `t_i = i Δt`, `i = 0..N`, with `(N − 1) Δt = T`.
///
/// State index `i` here is time level `n = i + 1` in one-based notation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    dt: f64,
    n_states: usize,
}

impl TimeGrid {
    /// Grid with step `dt`; `T / dt` must be an integer to 1e-9 relative.
    pub fn from_step(t_final: f64, dt: f64) -> Result<Self> {
        if !(t_final > 0.0) || !(dt > 0.0) || !t_final.is_finite() || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need T > 0 and dt > 0, got T = {t_final}, dt = {dt}"
            )));
        }
        let steps = (t_final / dt).round();
        if (steps * dt - t_final).abs() > 1e-9 * t_final {
            return Err(Error::InvalidParameter(format!(
                "dt = {dt} does not divide T = {t_final} into an integer number of steps"
            )));
        }
        Self::from_count(t_final, steps as usize + 1)
    }

    /// Grid with `n_states` time levels on `[0, T]`.
    pub fn from_count(t_final: f64, n_states: usize) -> Result<Self> {
        if n_states < 3 {
            return Err(Error::TooFewStates {
                needed: 3,
                found: n_states,
            });
        }
        if !(t_final > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be > 0, got {t_final}"
            )));
        }
        Ok(Self {
            t_final,
            dt: t_final / (n_states - 1) as f64,
            n_states,
        })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `N`, the number of time levels.
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    /// The first `m` levels of this grid.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m > self.n_states {
            return Err(Error::TooFewStates {
                needed: m,
                found: self.n_states,
            });
        }
        if m < 3 {
            return Err(Error::TooFewStates {
                needed: 3,
                found: m,
            });
        }
        Ok(Self {
            t_final: (m - 1) as f64 * self.dt,
            dt: self.dt,
            n_states: m,
        })
    }
}

/// Finite element states at every time level of a grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<FemVector>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, states: Vec<FemVector>) -> Result<Self> {
        if states.len() != grid.n_states() {
            return Err(Error::LengthMismatch {
                expected: grid.n_states(),
                found: states.len(),
            });
        }
        if let Some(first) = states.first() {
            if let Some(bad) = states.iter().find(|s| s.len() != first.len()) {
                return Err(Error::LengthMismatch {
                    expected: first.len(),
                    found: bad.len(),
                });
            }
        }
        Ok(Self { grid, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn dt(&self) -> f64 {
        self.grid.dt()
    }

    /// The first `m` states, as snapshots on the training interval `[0, (m − 1)Δt]`.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        let grid = self.grid.truncated(m)?;
        Ok(Self {
            grid,
            states: self.states[..m].to_vec(),
        })
    }
}

/// `u₀(x) = (eˣ + x² − cos πx) sin πx + (e^{x²} + x² − x) sin 5πx`.
pub fn default_initial_displacement(x: f64) -> f64 {
    use std::f64::consts::PI;
    (x.exp() + x * x - (PI * x).cos()) * (PI * x).sin()
        + ((x * x).exp() + x * x - x) * (5.0 * PI * x).sin()
}

/// `u₀₀ ≡ 0`.
pub fn default_initial_velocity(_x: f64) -> f64 {
    0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(WaveParams::new(0.0, 0.0, 0.0).is_err());
        assert!(WaveParams::new(1.0, -0.1, 0.0).is_err());
        assert!(WaveParams::new(1.0, 0.0, -1.0).is_err());
        assert!(WaveParams::new(1.0, 0.1, 0.0).is_ok());
        assert!(WaveParams::undamped(2.0).unwrap().is_undamped());
    }

    #[test]
    fn grid_from_step() {
        let g = TimeGrid::from_step(10.0, 1.0 / 800.0).unwrap();
        assert_eq!(g.n_states(), 8001);
        assert!(((g.n_states() - 1) as f64 * g.dt() - 10.0).abs() < 1e-12);
        assert!((g.time(8000) - 10.0).abs() < 1e-12);
        assert!(TimeGrid::from_step(1.0, 0.3).is_err());
        assert!(TimeGrid::from_step(0.0, 0.1).is_err());
        assert!(TimeGrid::from_count(1.0, 2).is_err());
    }

    #[test]
    fn grid_truncation() {
        let g = TimeGrid::from_step(10.0, 1.0 / 800.0).unwrap();
        let t = g.truncated(401).unwrap();
        assert!((t.t_final() - 0.5).abs() < 1e-12);
        assert_eq!(t.dt(), g.dt());
    }

    #[test]
    fn initial_displacement_vanishes_on_boundary() {
        assert!(default_initial_displacement(0.0).abs() < 1e-15);
        assert!(default_initial_displacement(1.0).abs() < 1e-14);
    }
}
