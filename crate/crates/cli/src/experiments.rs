use std::f64::consts::PI;

use podwave::fem1d::FemSpace;
use podwave::pod::{
    build_dataset, compute_basis, data_error_actual, data_error_formula, Norm, PodBasis, PodMethod,
    ProjectorKind,
};
use podwave::rom::{build_rom, error_report, solve_rom, RomErrorReport};
use podwave::wave::{
    default_initial_displacement, default_initial_velocity, energy, energy_balance, solve,
    AnalyticSeries, Trajectory, WaveParams, DEFAULT_K_MAX,
};
use podwave::Error;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::table::{Cell, Table};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// A finite element run with the default initial data.
#[derive(Debug, Clone)]
pub struct FeRun {
    pub space: FemSpace,
    pub params: WaveParams,
    pub traj: Trajectory,
}

pub fn fe_run(cfg: &RunConfig, params: WaveParams) -> Result<FeRun> {
    let space = FemSpace::new(cfg.n_elements)?;
    let traj = solve(
        &space,
        &cfg.grid()?,
        &params,
        default_initial_displacement,
        default_initial_velocity,
    )?;
    Ok(FeRun {
        space,
        params,
        traj,
    })
}

/// POD basis from the snapshots on `[0, t_train]`.
pub fn training_basis(
    cfg: &RunConfig,
    fe: &FeRun,
    method: PodMethod,
    t_train: f64,
) -> Result<PodBasis> {
    let m = cfg.train_states(t_train)?;
    let data = if m == fe.traj.len() {
        build_dataset(&fe.traj, method)?
    } else {
        build_dataset(&fe.traj.truncated(m)?, method)?
    };
    Ok(compute_basis(&data, &fe.space, cfg.pod_options())?)
}

/// Reduced model of size `r` on the full grid of `fe`, started from its first two states.
pub fn rom_trajectory(fe: &FeRun, basis: &PodBasis, r: usize) -> Result<Trajectory> {
    let t = &fe.traj;
    let rom = build_rom(
        basis,
        r,
        &fe.space,
        &fe.params,
        &t.grid,
        &t.states[0],
        &t.states[1],
    )?;
    Ok(solve_rom(&rom)?)
}

pub fn rom_report(fe: &FeRun, basis: &PodBasis, r: usize) -> Result<RomErrorReport> {
    let rom = rom_trajectory(fe, basis, r)?;
    Ok(error_report(
        &fe.traj, &rom, basis, r, &fe.space, &fe.params,
    )?)
}

fn usable_r(cfg: &RunConfig, basis: &PodBasis) -> Vec<usize> {
    let rs: Vec<usize> = cfg
        .r_list
        .iter()
        .copied()
        .filter(|r| *r <= basis.rank())
        .collect();
    for r in cfg.r_list.iter().filter(|r| **r > basis.rank()) {
        eprintln!(
            "skipping r = {r}: {} basis has rank {}",
            basis.method,
            basis.rank()
        );
    }
    rs
}

/// `trajectory.csv` (every `stride`-th state) and `energy.csv`.
pub fn solve_tables(cfg: &RunConfig) -> Result<Vec<Table>> {
    let fe = fe_run(cfg, cfg.params()?)?;
    let traj = &fe.traj;
    let grid = traj.grid;
    let mut columns = vec!["t".to_string()];
    columns.extend((1..=traj.dim()).map(|j| format!("u_{j}")));
    let mut states = Table::with_columns("trajectory.csv", columns);
    for i in (0..traj.len()).step_by(cfg.stride) {
        let mut row = vec![Cell::Real(grid.time(i))];
        row.extend(traj.states[i].iter().map(|v| Cell::Real(*v)));
        states.push(row);
    }

    let mut energies = Table::new(
        "energy.csv",
        &["t", "E", "dE", "minus_dissipation", "residual"],
    );
    let dt = traj.dt();
    for i in 1..traj.len() - 1 {
        let e = energy(
            &fe.space,
            fe.params.speed,
            dt,
            &traj.states[i - 1],
            &traj.states[i],
        );
        let b = energy_balance(&fe.space, &fe.params, dt, &traj.states, i);
        energies.push(vec![
            grid.time(i).into(),
            e.into(),
            b.rate.into(),
            (-b.dissipation).into(),
            b.residual().into(),
        ]);
    }
    Ok(vec![states, energies])
}

/// One `singvals_<method>.csv` per method: `σ_k = √λ_k` for every computed
/// eigenvalue, flagged if it survives the rank cutoff.
pub fn singular_value_tables(cfg: &RunConfig) -> Result<Vec<Table>> {
    let fe = fe_run(cfg, cfg.params()?)?;
    cfg.methods
        .iter()
        .map(|&method| {
            let mut t = Table::new(
                format!("singvals_{method}.csv"),
                &["k", "sigma", "lambda", "retained"],
            );
            match training_basis(cfg, &fe, method, cfg.t_train()) {
                Ok(basis) => {
                    for (k, l) in basis.spectrum.iter().enumerate() {
                        let retained = usize::from(k < basis.rank());
                        t.push(vec![
                            (k + 1).into(),
                            l.max(0.0).sqrt().into(),
                            (*l).into(),
                            retained.into(),
                        ]);
                    }
                }
                Err(CliError::Numerics(Error::ZeroData)) => {}
                Err(e) => return Err(e),
            }
            Ok(t)
        })
        .collect()
}

/// Actual data error against its formula, for each method, r, norm and projector.
pub fn error_formula_table(cfg: &RunConfig) -> Result<Table> {
    let fe = fe_run(cfg, cfg.params()?)?;
    let m = cfg.train_states(cfg.t_train())?;
    let train = fe.traj.truncated(m)?;
    let mut table = Table::new(
        "error_formulas.csv",
        &[
            "method",
            "r",
            "rank",
            "norm",
            "projector",
            "actual",
            "formula",
            "relative_gap",
        ],
    );
    for &method in &cfg.methods {
        let data = build_dataset(&train, method)?;
        let basis = compute_basis(&data, &fe.space, cfg.pod_options())?;
        let lambda1 = basis.eigenvalues[0];
        let cases: Vec<(usize, Norm, ProjectorKind)> = usable_r(cfg, &basis)
            .into_iter()
            .flat_map(|r| {
                [Norm::L2, Norm::H10].into_iter().flat_map(move |norm| {
                    [ProjectorKind::Orthogonal, ProjectorKind::Ritz]
                        .into_iter()
                        .map(move |kind| (r, norm, kind))
                })
            })
            .collect();
        let rows: Vec<Vec<Cell>> = cases
            .par_iter()
            .map(|&(r, norm, kind)| {
                let actual = data_error_actual(&data, &basis, r, &fe.space, norm, kind)?;
                let formula = data_error_formula(&basis, r, &fe.space, norm, kind)?;
                let gap = (actual - formula).abs() / formula.max(lambda1 * 1e-6);
                Ok(vec![
                    method.as_str().into(),
                    r.into(),
                    basis.rank().into(),
                    norm.as_str().into(),
                    kind.as_str().into(),
                    actual.into(),
                    formula.into(),
                    gap.into(),
                ])
            })
            .collect::<Result<_>>()?;
        rows.into_iter().for_each(|row| table.push(row));
    }
    Ok(table)
}

pub const ROM_SWEEP_COLUMNS: [&str; 11] = [
    "param",
    "value",
    "method",
    "r",
    "rank",
    "max_l2_sq",
    "max_energy",
    "final_l2_sq",
    "ratio_energy",
    "ratio_pointwise",
    "split_residual",
];

/// ROM errors and bound ratios over the damping sweep, one row per
/// (value, method, r) in input order.
pub fn rom_sweep_table(cfg: &RunConfig) -> Result<Table> {
    let blocks: Vec<Vec<Vec<Cell>>> = cfg
        .sweep_values
        .par_iter()
        .map(|&value| {
            let fe = fe_run(cfg, cfg.swept_params(value)?)?;
            let mut rows = Vec::new();
            for &method in &cfg.methods {
                let basis = training_basis(cfg, &fe, method, cfg.t_train())?;
                let reports: Vec<RomErrorReport> = usable_r(cfg, &basis)
                    .par_iter()
                    .map(|&r| rom_report(&fe, &basis, r))
                    .collect::<Result<_>>()?;
                for rep in reports {
                    rows.push(vec![
                        cfg.sweep.as_str().into(),
                        value.into(),
                        method.as_str().into(),
                        rep.r.into(),
                        basis.rank().into(),
                        rep.max_pointwise_l2.into(),
                        rep.max_energy.into(),
                        rep.final_l2_sq().into(),
                        rep.ratio_energy.into(),
                        rep.ratio_pointwise.into(),
                        rep.split_residual.into(),
                    ]);
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new("rom_sweep.csv", &ROM_SWEEP_COLUMNS);
    blocks.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

fn state_index(cfg: &RunConfig, t: f64) -> usize {
    (t / cfg.dt).round() as usize
}

/// Finite element and reduced profiles at the configured times, on the full
/// node set including the boundary.
pub fn profile_table(cfg: &RunConfig) -> Result<Table> {
    let fe = fe_run(cfg, cfg.params()?)?;
    let last = fe.traj.len() - 1;
    let times: Vec<(f64, usize)> = cfg
        .profile_times()
        .into_iter()
        .map(|t| (t, state_index(cfg, t).min(last)))
        .collect();

    let mut columns = vec!["x".to_string()];
    let mut series: Vec<&[f64]> = Vec::new();
    for (t, i) in &times {
        columns.push(format!("fe_t{t}"));
        series.push(&fe.traj.states[*i]);
    }
    let mut roms = Vec::new();
    for &method in &cfg.methods {
        let basis = training_basis(cfg, &fe, method, cfg.t_train())?;
        for r in usable_r(cfg, &basis) {
            roms.push((method, r, rom_trajectory(&fe, &basis, r)?));
        }
    }
    for (method, r, rom) in &roms {
        for (t, i) in &times {
            columns.push(format!("{method}_r{r}_t{t}"));
            series.push(&rom.states[*i]);
        }
    }

    let mut table = Table::with_columns("profiles.csv", columns);
    let n = fe.space.n_elements();
    for node in 0..=n {
        let mut row = vec![Cell::Real(node as f64 * fe.space.h())];
        row.extend(series.iter().map(|s| {
            let v = if node == 0 || node == n {
                0.0
            } else {
                s[node - 1]
            };
            Cell::Real(v)
        }));
        table.push(row);
    }
    Ok(table)
}

/// Final-time `‖eᴺ‖²` of a basis trained on `[0, T_train]` and run on `[0, T]`.
pub fn train_interval_table(cfg: &RunConfig) -> Result<Table> {
    let fe = fe_run(cfg, cfg.params()?)?;
    let cases: Vec<(f64, PodMethod, usize)> = cfg
        .t_train_list()
        .into_iter()
        .flat_map(|t| {
            cfg.methods
                .iter()
                .flat_map(move |&m| cfg.r_list.iter().map(move |&r| (t, m, r)))
        })
        .collect();
    let rows: Vec<Option<Vec<Cell>>> = cases
        .par_iter()
        .map(|&(t_train, method, r)| {
            let basis = training_basis(cfg, &fe, method, t_train)?;
            if r > basis.rank() {
                eprintln!(
                    "skipping r = {r} at T_train = {t_train}: {method} basis has rank {}",
                    basis.rank()
                );
                return Ok(None);
            }
            let rep = rom_report(&fe, &basis, r)?;
            Ok(Some(vec![
                t_train.into(),
                method.as_str().into(),
                r.into(),
                basis.rank().into(),
                rep.final_l2_sq().into(),
                rep.max_pointwise_l2.into(),
            ]))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(
        "train_interval.csv",
        &["T_train", "method", "r", "rank", "final_l2_sq", "max_l2_sq"],
    );
    rows.into_iter().flatten().for_each(|row| table.push(row));
    Ok(table)
}

/// Final-time `‖u_h(T) − u(T)‖_{L²}` against the modal series for
/// `u₀ = sin πx`, `u₀₀ = 0`, with observed orders between successive steps.
pub fn convergence_table(cfg: &RunConfig) -> Result<Table> {
    let params = cfg.params()?;
    let space = FemSpace::new(cfg.conv_n_elements)?;
    let u0 = |x: f64| (PI * x).sin();
    let u00 = |_: f64| 0.0;
    let series = AnalyticSeries::new(params, u0, u00, DEFAULT_K_MAX)?;
    let errors: Vec<f64> = cfg
        .conv_dt_list
        .par_iter()
        .map(|&dt| {
            let grid = podwave::wave::TimeGrid::from_step(cfg.conv_t_final, dt)?;
            let traj = solve(&space, &grid, &params, u0, u00)?;
            let last = traj.states.last().expect("non-empty trajectory");
            Ok(space.l2_error(last, |x| series.eval(x, cfg.conv_t_final)))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new("convergence.csv", &["dt", "h", "final_l2", "order"]);
    for (i, (&dt, &err)) in cfg.conv_dt_list.iter().zip(&errors).enumerate() {
        let order =
            (i > 0).then(|| (errors[i - 1] / err).ln() / (cfg.conv_dt_list[i - 1] / dt).ln());
        table.push(vec![dt.into(), space.h().into(), err.into(), order.into()]);
    }
    Ok(table)
}
