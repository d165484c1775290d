use podwave::fem1d::FemSpace;
use podwave::pod::{
    build_dataset, compute_basis, data_error_actual, data_error_formula, diff,
    pointwise_bound_check, sequence_bounds, BoundForm, Norm, PodMethod, ProjectorKind,
};
use podwave::rom::{build_rom, solve_rom};
use podwave::wave::{
    default_initial_displacement, default_initial_velocity, energy, energy_balance, solve,
    TimeGrid, WaveParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::table::Table;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn small_run(
    n_el: usize,
    t_final: f64,
    dt: f64,
    params: WaveParams,
) -> Result<(FemSpace, podwave::wave::Trajectory)> {
    let space = FemSpace::new(n_el)?;
    let grid = TimeGrid::from_step(t_final, dt)?;
    let traj = solve(
        &space,
        &grid,
        &params,
        default_initial_displacement,
        default_initial_velocity,
    )?;
    Ok((space, traj))
}

/// Largest `|∂E + D‖∂ū‖² + G‖∂∇ū‖²|` relative to `E(u²)`.
pub fn energy_identity_residual(
    space: &FemSpace,
    traj: &podwave::wave::Trajectory,
    params: &WaveParams,
) -> f64 {
    let dt = traj.dt();
    let e0 = energy(space, params.speed, dt, &traj.states[0], &traj.states[1]);
    (1..traj.len() - 1)
        .map(|i| {
            energy_balance(space, params, dt, &traj.states, i)
                .residual()
                .abs()
        })
        .fold(0.0, f64::max)
        / e0
}

/// Largest relative error of the two telescoping identities over random
/// sequences of length `3..=100` and dimension `1..=20`.
pub fn telescoping_residual(seed: u64, n_sequences: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..n_sequences {
        let len = rng.gen_range(3..=100);
        let dim = rng.gen_range(1..=20);
        let dt = 10f64.powf(rng.gen_range(-3.0..0.0));
        let z: Vec<Vec<f64>> = (0..len)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let z_scale = z.iter().map(|v| max_abs(v)).fold(0.0, f64::max);
        for m in 0..len - 1 {
            let want = diff::forward(&z, m, dt);
            let got = diff::forward_from_second_differences(&z, m, dt);
            worst = worst.max(max_abs_diff(&got, &want) / (z_scale / dt));
        }
        for m in 0..len {
            let got = diff::state_from_second_differences(&z, m, dt);
            worst = worst.max(max_abs_diff(&got, &z[m]) / z_scale);
        }
    }
    worst
}

/// Relative max L² error of the full-rank reduced model against its source trajectory.
pub fn full_basis_rom_error(
    n_el: usize,
    n_states: usize,
    params: WaveParams,
    method: PodMethod,
) -> Result<f64> {
    let space = FemSpace::new(n_el)?;
    let grid = TimeGrid::from_count(1.0, n_states)?;
    let traj = solve(
        &space,
        &grid,
        &params,
        default_initial_displacement,
        default_initial_velocity,
    )?;
    let basis = compute_basis(&build_dataset(&traj, method)?, &space, Default::default())?;
    let rom = build_rom(
        &basis,
        basis.rank(),
        &space,
        &params,
        &grid,
        &traj.states[0],
        &traj.states[1],
    )?;
    let rom = solve_rom(&rom)?;
    let mut err = 0.0f64;
    let mut scale = 0.0f64;
    for (u, v) in traj.states.iter().zip(&rom.states) {
        let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
        err = err.max(space.l2_norm_sq(&d).sqrt());
        scale = scale.max(space.l2_norm_sq(u).sqrt());
    }
    Ok(err / scale)
}

/// The invariant suite at desk scale.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let configs = [
        ("D=0.1", WaveParams::new(cfg.speed, 0.1, 0.0)?),
        ("G=0.001", WaveParams::new(cfg.speed, 0.0, 0.001)?),
        ("undamped", WaveParams::undamped(cfg.speed)?),
    ];
    for (label, params) in configs {
        let (space, traj) = small_run(80, 2.0, 1.0 / 200.0, params)?;
        out.push(CheckOutcome::new(
            format!("energy identity {label}"),
            energy_identity_residual(&space, &traj, &params),
            1e-9,
        ));
    }

    out.push(CheckOutcome::new(
        "telescoping identities",
        telescoping_residual(cfg.seed, 100),
        1e-11,
    ));

    let (space, traj) = small_run(60, 2.0, 0.01, WaveParams::new(cfg.speed, 0.0, 0.001)?)?;
    for method in PodMethod::ALL {
        let data = build_dataset(&traj, method)?;
        let basis = compute_basis(&data, &space, cfg.pod_options())?;
        let lambda1 = basis.eigenvalues[0];
        let mut gap = 0.0f64;
        for r in 1..=basis.rank().min(20) {
            for norm in [Norm::L2, Norm::H10] {
                for kind in [ProjectorKind::Orthogonal, ProjectorKind::Ritz] {
                    let a = data_error_actual(&data, &basis, r, &space, norm, kind)?;
                    let f = data_error_formula(&basis, r, &space, norm, kind)?;
                    gap = gap.max((a - f).abs() / f.max(lambda1 * 1e-6));
                }
            }
        }
        out.push(CheckOutcome::new(
            format!("error formula {method}"),
            gap,
            1e-6,
        ));

        if method != PodMethod::Standard {
            let mut worst = 0.0f64;
            for r in [1, 5, 10].into_iter().filter(|r| *r <= basis.rank()) {
                for form in [BoundForm::Pointwise, BoundForm::WeightedSum] {
                    let c = pointwise_bound_check(
                        &traj,
                        &basis,
                        r,
                        &space,
                        Norm::L2,
                        ProjectorKind::Orthogonal,
                        form,
                    )?;
                    worst = worst.max(c.ratio());
                }
            }
            out.push(CheckOutcome::new(
                format!("snapshot bounds {method}"),
                worst,
                1.0,
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let len = rng.gen_range(3..=60);
        let dim = rng.gen_range(1..=10);
        let dt = rng.gen_range(0.01..1.0);
        let z: Vec<Vec<f64>> = (0..len)
            .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let b = sequence_bounds(&z, dt, |v| v.iter().map(|x| x * x).sum())?;
        worst = b.all().iter().map(|c| c.ratio()).fold(worst, f64::max);
    }
    out.push(CheckOutcome::new("sequence bounds", worst, 1.0));

    for method in [PodMethod::Standard, PodMethod::Ddq] {
        let err = full_basis_rom_error(20, 30, WaveParams::new(cfg.speed, 0.1, 0.001)?, method)?;
        out.push(CheckOutcome::new(
            format!("full-basis ROM {method}"),
            err,
            1e-8,
        ));
    }
    Ok(out)
}

pub fn check_table(outcomes: &[CheckOutcome]) -> Table {
    let mut t = Table::new("check.csv", &["check", "value", "tolerance", "passed"]);
    for o in outcomes {
        t.push(vec![
            o.name.clone().into(),
            o.value.into(),
            o.tolerance.into(),
            usize::from(o.passed()).into(),
        ]);
    }
    t
}
