use super::{TimeGrid, Trajectory, WaveParams};
use crate::error::Result;
use crate::fem1d::{FemSpace, FemVector};
use crate::numerics::{ThomasFactor, TridiagonalMatrix};

/// Second-order accurate starting pair `(u¹, u²)`.
///
/// `u¹ = P_h u₀`; `u²` is the L² projection of the Taylor expansion
/// `u₀ + Δt u₀₀ + ½Δt² u_tt(·, 0)`, with `u_tt` eliminated through the weak form:
///
/// `M u² = (u₀, φ) + Δt (u₀₀, φ) − ½Δt² [c² (u₀', φ') + G (u₀₀', φ') + D (u₀₀, φ)]`.
pub fn initial_states(
    space: &FemSpace,
    grid: &TimeGrid,
    params: &WaveParams,
    u0: impl Fn(f64) -> f64,
    u00: impl Fn(f64) -> f64,
) -> Result<(FemVector, FemVector)> {
    let dt = grid.dt();
    let c2 = params.speed * params.speed;
    let load_u0 = space.load_vector(&u0);
    let load_u00 = space.load_vector(&u00);
    let grad_u0 = space.gradient_load(&u0);
    let grad_u00 = space.gradient_load(&u00);

    let first = space.solve_mass(&load_u0)?;
    let rhs: Vec<f64> = (0..space.n_dof())
        .map(|i| {
            load_u0[i] + dt * load_u00[i]
                - 0.5
                    * dt
                    * dt
                    * (c2 * grad_u0[i]
                        + params.kelvin_voigt * grad_u00[i]
                        + params.viscous * load_u00[i])
        })
        .collect();
    let second = space.solve_mass(&rhs)?;
    Ok((first, second))
}

/// Factored three-level step for fixed `(space, params, Δt)`:
///
/// `[M/Δt² + c²A/4 + DM/(2Δt) + GA/(2Δt)] u^{n+1}
///    = [2M/Δt² − c²A/2] uⁿ + [−M/Δt² − c²A/4 + DM/(2Δt) + GA/(2Δt)] u^{n−1}`.
#[derive(Debug, Clone)]
pub struct WaveStepper {
    factor: ThomasFactor,
    current: TridiagonalMatrix,
    previous: TridiagonalMatrix,
}

impl WaveStepper {
    pub fn new(space: &FemSpace, params: &WaveParams, dt: f64) -> Result<Self> {
        let m = space.mass();
        let a = space.stiffness();
        let c2 = params.speed * params.speed;
        let inv_dt2 = 1.0 / (dt * dt);
        let half_inv_dt = 0.5 / dt;
        let damping = m.scaled(params.viscous * half_inv_dt).combine(
            1.0,
            a,
            params.kelvin_voigt * half_inv_dt,
        )?;
        let inertia_stiff = m.combine(inv_dt2, a, 0.25 * c2)?;
        let system = inertia_stiff.combine(1.0, &damping, 1.0)?;
        let current = m.combine(2.0 * inv_dt2, a, -0.5 * c2)?;
        let previous = inertia_stiff.combine(-1.0, &damping, 1.0)?;
        Ok(Self {
            factor: system.factor()?,
            current,
            previous,
        })
    }

    pub fn step(&self, previous: &[f64], current: &[f64]) -> Result<FemVector> {
        let mut rhs = self.current.mul_vec(current);
        let back = self.previous.mul_vec(previous);
        rhs.iter_mut().zip(&back).for_each(|(r, b)| *r += b);
        self.factor.solve_in_place(&mut rhs)?;
        Ok(rhs)
    }
}

/// Full finite element trajectory from the initial data.
pub fn solve(
    space: &FemSpace,
    grid: &TimeGrid,
    params: &WaveParams,
    u0: impl Fn(f64) -> f64,
    u00: impl Fn(f64) -> f64,
) -> Result<Trajectory> {
    let (first, second) = initial_states(space, grid, params, u0, u00)?;
    let stepper = WaveStepper::new(space, params, grid.dt())?;
    let mut states = Vec::with_capacity(grid.n_states());
    states.push(first);
    states.push(second);
    for i in 2..grid.n_states() {
        let next = stepper.step(&states[i - 2], &states[i - 1])?;
        states.push(next);
    }
    Trajectory::new(*grid, states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::AnalyticSeries;
    use std::f64::consts::PI;

    #[test]
    fn zero_data_stays_zero() {
        let space = FemSpace::new(10).unwrap();
        let grid = TimeGrid::from_step(1.0, 0.1).unwrap();
        let params = WaveParams::new(1.0, 0.1, 0.01).unwrap();
        let (a, b) = initial_states(&space, &grid, &params, |_| 0.0, |_| 0.0).unwrap();
        assert!(a.iter().chain(&b).all(|v| *v == 0.0));
        let stepper = WaveStepper::new(&space, &params, grid.dt()).unwrap();
        assert!(stepper.step(&a, &b).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn second_state_is_third_order_for_single_mode() {
        // u = cos(πt) sin(πx); compare u² against P_h u(·, Δt) so only
        // the Taylor truncation remains.
        let space = FemSpace::new(200).unwrap();
        let params = WaveParams::undamped(1.0).unwrap();
        let errs: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&dt| {
                let grid = TimeGrid::from_step(1.0, dt).unwrap();
                let (_, u2) =
                    initial_states(&space, &grid, &params, |x| (PI * x).sin(), |_| 0.0).unwrap();
                let exact = space
                    .l2_project(|x| (PI * dt).cos() * (PI * x).sin())
                    .unwrap();
                let d: Vec<f64> = u2.iter().zip(&exact).map(|(a, b)| a - b).collect();
                space.l2_norm_sq(&d).sqrt()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 2.7, "order {order} from {errs:?}");
        }
    }

    #[test]
    fn second_state_against_series_with_damping() {
        let u0 = |x: f64| (PI * x).sin() + 0.5 * (3.0 * PI * x).sin();
        let space = FemSpace::new(400).unwrap();
        let params = WaveParams::new(1.0, 0.1, 0.0).unwrap();
        let series = AnalyticSeries::new(params, u0, |_| 0.0, 8).unwrap();
        let errs: Vec<f64> = [0.004, 0.002, 0.001]
            .iter()
            .map(|&dt| {
                let grid = TimeGrid::from_step(1.0, dt).unwrap();
                let (_, u2) = initial_states(&space, &grid, &params, u0, |_| 0.0).unwrap();
                let exact = space.l2_project(|x| series.eval(x, dt)).unwrap();
                let d: Vec<f64> = u2.iter().zip(&exact).map(|(a, b)| a - b).collect();
                space.l2_norm_sq(&d).sqrt()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 2.7, "order {order} from {errs:?}");
        }
    }

    #[test]
    fn undamped_single_mode_converges_second_order() {
        let space = FemSpace::new(1000).unwrap();
        let params = WaveParams::undamped(1.0).unwrap();
        let errs: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&dt| {
                let grid = TimeGrid::from_step(1.0, dt).unwrap();
                let traj = solve(&space, &grid, &params, |x| (PI * x).sin(), |_| 0.0).unwrap();
                let t = grid.t_final();
                traj.states
                    .iter()
                    .enumerate()
                    .map(|(i, u)| {
                        let ti = grid.time(i);
                        space.l2_error(u, |x| (PI * ti).cos() * (PI * x).sin())
                    })
                    .fold(0.0, f64::max)
                    .max(space.l2_error(traj.states.last().unwrap(), |x| {
                        (PI * t).cos() * (PI * x).sin()
                    }))
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.8..2.2).contains(&order), "order {order} from {errs:?}");
        }
    }
}
