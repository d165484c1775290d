//! Separation-of-variables solution on (0, 1) with zero Dirichlet data.
//!
//! Mode `k` (`λ_k = kπ`) obeys `q'' + 2β_k q' + c²λ_k² q = 0` with
//! `β_k = (D + Gλ_k²)/2`, so `q_k(t) = e^{−β_k t}(a_k e^{ξ_k t} + b_k e^{−ξ_k t})`
//! and `ξ_k = √(β_k² − c²λ_k²)`. With only `D` this is the viscous series;
//! with only `G` it is the Kelvin–Voigt series (`ζ_k`, `c_k`, `d_k`).

use std::f64::consts::PI;

use num_complex::Complex64;

use super::WaveParams;
use crate::error::{Error, Result};
use crate::fem1d::GAUSS5;

pub const DEFAULT_K_MAX: usize = 200;

/// Panels of the composite Gauss rule for sine coefficients.
pub const SINE_PANELS: usize = 2000;

/// `|ξ_k|` below which the critically damped limit form is used.
const CRITICAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalTerm {
    pub k: usize,
    /// `β_k`, the modal decay rate.
    pub rate: f64,
    pub xi: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    /// Sine coefficient of `u₀`.
    pub displacement: f64,
    /// Sine coefficient of `u₀₀`.
    pub velocity: f64,
    /// `ξ_k ≈ 0`: `q = e^{−βt}(a + b t)`.
    pub critical: bool,
}

impl ModalTerm {
    fn new(params: &WaveParams, k: usize, displacement: f64, velocity: f64) -> Self {
        let lambda = PI * k as f64;
        let rate = 0.5 * (params.viscous + params.kelvin_voigt * lambda * lambda);
        let disc = rate * rate - params.speed * params.speed * lambda * lambda;
        let xi = Complex64::new(disc, 0.0).sqrt();
        if xi.norm() < CRITICAL_TOL {
            return Self {
                k,
                rate,
                xi,
                a: Complex64::new(displacement, 0.0),
                b: Complex64::new(velocity + rate * displacement, 0.0),
                displacement,
                velocity,
                critical: true,
            };
        }
        // a + b = s, ξ(a − b) = v + β s
        let diff = Complex64::new(velocity + rate * displacement, 0.0) / xi;
        let sum = Complex64::new(displacement, 0.0);
        Self {
            k,
            rate,
            xi,
            a: 0.5 * (sum + diff),
            b: 0.5 * (sum - diff),
            displacement,
            velocity,
            critical: false,
        }
    }

    /// `q_k(t)` in complex arithmetic; the imaginary part is round-off.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        if self.critical {
            return (-self.rate * t).exp() * (self.a + self.b * t);
        }
        let beta = Complex64::new(self.rate, 0.0);
        self.a * ((self.xi - beta) * t).exp() + self.b * ((-self.xi - beta) * t).exp()
    }

    /// Whether the mode oscillates (`ξ_k` purely imaginary).
    pub fn is_oscillatory(&self) -> bool {
        !self.critical && self.xi.re == 0.0 && self.xi.im != 0.0
    }
}

#[derive(Debug, Clone)]
pub struct AnalyticSeries {
    pub params: WaveParams,
    pub modes: Vec<ModalTerm>,
}

impl AnalyticSeries {
    pub fn new(
        params: WaveParams,
        u0: impl Fn(f64) -> f64,
        u00: impl Fn(f64) -> f64,
        k_max: usize,
    ) -> Result<Self> {
        if k_max == 0 {
            return Err(Error::InvalidParameter("K_max must be positive".into()));
        }
        let s = sine_coefficients(u0, k_max, SINE_PANELS);
        let v = sine_coefficients(u00, k_max, SINE_PANELS);
        let modes = (1..=k_max)
            .map(|k| ModalTerm::new(&params, k, s[k - 1], v[k - 1]))
            .collect();
        Ok(Self { params, modes })
    }

    pub fn k_max(&self) -> usize {
        self.modes.len()
    }

    pub fn eval_complex(&self, x: f64, t: f64) -> Complex64 {
        self.modes
            .iter()
            .map(|m| m.amplitude(t) * (PI * m.k as f64 * x).sin())
            .sum()
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.eval_complex(x, t).re
    }

    /// Largest initial modal magnitude over the top tenth of retained modes;
    /// a truncation-size indicator (not an error bound).
    pub fn tail_magnitude(&self) -> f64 {
        let start = self.modes.len() - (self.modes.len() / 10).max(1);
        self.modes[start..]
            .iter()
            .map(|m| {
                let lambda = PI * m.k as f64;
                m.displacement.abs() + m.velocity.abs() / (self.params.speed * lambda)
            })
            .fold(0.0, f64::max)
    }
}

/// `s_k = 2∫₀¹ f(x) sin(kπx) dx`, `k = 1..=k_max`, composite 5-point Gauss.
pub fn sine_coefficients(f: impl Fn(f64) -> f64, k_max: usize, panels: usize) -> Vec<f64> {
    let h = 1.0 / panels as f64;
    let mut points = Vec::with_capacity(panels * GAUSS5.len());
    for p in 0..panels {
        let left = p as f64 * h;
        for (xi, w) in GAUSS5 {
            let x = left + 0.5 * (xi + 1.0) * h;
            points.push((x, 0.5 * h * w * f(x)));
        }
    }
    (1..=k_max)
        .map(|k| {
            let kpi = PI * k as f64;
            2.0 * points
                .iter()
                .map(|(x, wf)| wf * (kpi * x).sin())
                .sum::<f64>()
        })
        .collect()
}
