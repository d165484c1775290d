use std::f64::consts::PI;

use rayon::prelude::*;

use super::{data_error_formula, diff, Norm, PodBasis, PodMethod, Projector, ProjectorKind};
use crate::error::{Error, Result};
use crate::fem1d::FemSpace;
use crate::wave::Trajectory;

/// Constants of the pointwise and weighted-sum error bounds on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `2 max{T, 1}`: pointwise bound from first difference quotients.
    pub c1: f64,
    /// `3 max{T³, 1}`: pointwise bound from second difference quotients.
    pub c2: f64,
    /// `2 max{T, 1}`: first differences from second differences.
    pub c3: f64,
    /// `4 max{T², T}`: weighted-sum bound from first difference quotients.
    pub c_sum_dq: f64,
    /// `6 max{T⁴, T}`: weighted-sum bound from second difference quotients.
    pub c_sum_ddq: f64,
    /// Poincaré constant `π²` of (0, 1).
    pub c_p: f64,
}

impl BoundConstants {
    pub fn new(t_final: f64) -> Self {
        let t = t_final;
        Self {
            c1: 2.0 * t.max(1.0),
            c2: 3.0 * t.powi(3).max(1.0),
            c3: 2.0 * t.max(1.0),
            c_sum_dq: 4.0 * (t * t).max(t),
            c_sum_ddq: 6.0 * t.powi(4).max(t),
            c_p: PI * PI,
        }
    }
}

/// `lhs ≤ rhs`, reported as a ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl BoundCheck {
    /// `lhs / rhs`; zero when both vanish, infinite when only `rhs` does.
    pub fn ratio(&self) -> f64 {
        if self.rhs > 0.0 {
            self.lhs / self.rhs
        } else if self.lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    pub fn holds(&self) -> bool {
        self.ratio() <= 1.0
    }
}

/// Maximum over time levels, or the `Δt`-weighted sum over them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundForm {
    Pointwise,
    WeightedSum,
}

/// Snapshot projection errors `max_j ‖uʲ − P uʲ‖²` (or `Σ_j Δt ‖·‖²`) against
/// `C Σ_{k>r} λ_k m_k` for a DQ1 or DDQ basis.
pub fn pointwise_bound_check(
    traj: &Trajectory,
    basis: &PodBasis,
    r: usize,
    space: &FemSpace,
    norm: Norm,
    kind: ProjectorKind,
    form: BoundForm,
) -> Result<BoundCheck> {
    let k = BoundConstants::new(traj.grid.t_final());
    let constant = match (basis.method, form) {
        (PodMethod::Dq1, BoundForm::Pointwise) => k.c1,
        (PodMethod::Dq1, BoundForm::WeightedSum) => k.c_sum_dq,
        (PodMethod::Ddq, BoundForm::Pointwise) => k.c2,
        (PodMethod::Ddq, BoundForm::WeightedSum) => k.c_sum_ddq,
        (PodMethod::Standard, _) => return Err(Error::NoBoundForMethod("standard")),
    };
    let proj = Projector::new(basis, r, space, kind)?;
    let errors: Vec<f64> = traj
        .states
        .par_iter()
        .map(|u| Ok(norm.norm_sq(space, &proj.residual(u)?)))
        .collect::<Result<_>>()?;
    let lhs = match form {
        BoundForm::Pointwise => errors.iter().copied().fold(0.0, f64::max),
        BoundForm::WeightedSum => traj.dt() * errors.iter().sum::<f64>(),
    };
    let rhs = constant * data_error_formula(basis, r, space, norm, kind)?;
    Ok(BoundCheck { lhs, rhs })
}

/// The norm inequalities for an arbitrary sequence `z⁰..z^{N−1}` that underlie
/// the pointwise bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceBounds {
    /// `max ‖zʲ‖² ≤ C₁(‖z¹‖² + Σ Δt ‖∂zʲ‖²)`.
    pub states_by_first: BoundCheck,
    /// `max ‖zʲ‖² ≤ C₂(‖z¹‖² + ‖∂z¹‖² + Σ Δt ‖∂∂zʲ‖²)`.
    pub states_by_second: BoundCheck,
    /// Same right side for `max ‖z̄ʲ‖²`.
    pub averages_by_second: BoundCheck,
    /// `max ‖∂zʲ‖² ≤ C₃(‖∂z¹‖² + Σ Δt ‖∂∂zʲ‖²)`.
    pub forward_by_second: BoundCheck,
    /// Same right side for `max ‖∂⁻zʲ‖²`.
    pub backward_by_second: BoundCheck,
    /// Same right side for `max ‖∂z̄ʲ‖²`.
    pub centered_by_second: BoundCheck,
}

impl SequenceBounds {
    pub fn all(&self) -> [BoundCheck; 6] {
        [
            self.states_by_first,
            self.states_by_second,
            self.averages_by_second,
            self.forward_by_second,
            self.backward_by_second,
            self.centered_by_second,
        ]
    }
}

/// Evaluates every [`SequenceBounds`] inequality; needs at least 3 terms.
pub fn sequence_bounds(
    z: &[Vec<f64>],
    dt: f64,
    norm_sq: impl Fn(&[f64]) -> f64,
) -> Result<SequenceBounds> {
    let n = z.len();
    if n < 3 {
        return Err(Error::TooFewStates {
            needed: 3,
            found: n,
        });
    }
    let k = BoundConstants::new((n - 1) as f64 * dt);
    let max_over = |range: std::ops::Range<usize>, f: &dyn Fn(usize) -> Vec<f64>| {
        range.map(|j| norm_sq(&f(j))).fold(0.0, f64::max)
    };
    let first_sum: f64 = (0..n - 1)
        .map(|j| dt * norm_sq(&diff::forward(z, j, dt)))
        .sum();
    let second_sum: f64 = (1..n - 1)
        .map(|j| dt * norm_sq(&diff::second(z, j, dt)))
        .sum();
    let z0 = norm_sq(&z[0]);
    let dz0 = norm_sq(&diff::forward(z, 0, dt));
    let b2 = z0 + dz0 + second_sum;
    let b3 = dz0 + second_sum;
    let state_max = max_over(0..n, &|j| z[j].clone());
    Ok(SequenceBounds {
        states_by_first: BoundCheck {
            lhs: state_max,
            rhs: k.c1 * (z0 + first_sum),
        },
        states_by_second: BoundCheck {
            lhs: state_max,
            rhs: k.c2 * b2,
        },
        averages_by_second: BoundCheck {
            lhs: max_over(1..n, &|j| diff::backward_average(z, j)),
            rhs: k.c2 * b2,
        },
        forward_by_second: BoundCheck {
            lhs: max_over(0..n - 1, &|j| diff::forward(z, j, dt)),
            rhs: k.c3 * b3,
        },
        backward_by_second: BoundCheck {
            lhs: max_over(1..n, &|j| diff::backward(z, j, dt)),
            rhs: k.c3 * b3,
        },
        centered_by_second: BoundCheck {
            lhs: max_over(1..n - 1, &|j| diff::centered(z, j, dt)),
            rhs: k.c3 * b3,
        },
    })
}
