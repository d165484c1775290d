use podwave::fem1d::FemSpace;
use podwave::pod::{
    build_dataset, compute_basis, data_error_actual, data_error_formula, Norm, PodMethod,
    PodOptions, ProjectorKind,
};
use podwave::rom::{build_rom, error_report, solve_rom};
use podwave::wave::{
    default_initial_displacement, default_initial_velocity, solve, AnalyticSeries, TimeGrid,
    WaveParams,
};

fn damped_run(n_elements: usize) -> (FemSpace, WaveParams, podwave::wave::Trajectory) {
    let space = FemSpace::new(n_elements).unwrap();
    let grid = TimeGrid::from_step(2.0, 1.0 / 100.0).unwrap();
    let params = WaveParams::new(1.0, 0.1, 0.005).unwrap();
    let traj = solve(
        &space,
        &grid,
        &params,
        default_initial_displacement,
        default_initial_velocity,
    )
    .unwrap();
    (space, params, traj)
}

#[test]
fn fe_solution_tracks_modal_series() {
    let (space, params, traj) = damped_run(200);
    let series = AnalyticSeries::new(
        params,
        default_initial_displacement,
        default_initial_velocity,
        200,
    )
    .unwrap();
    let last = traj.len() - 1;
    let t = traj.grid.time(last);
    let err = space.l2_error(&traj.states[last], |x| series.eval(x, t));
    let scale = space.l2_error(&traj.states[0], |_| 0.0);
    assert!(err < 1e-2 * scale, "{err} vs {scale}");
}

#[test]
fn reduced_errors_shrink_with_basis_size() {
    let (space, params, traj) = damped_run(60);
    for method in PodMethod::ALL {
        let data = build_dataset(&traj, method).unwrap();
        let basis = compute_basis(&data, &space, PodOptions::default()).unwrap();
        let mut previous = f64::INFINITY;
        for r in [2, 6, 12] {
            let actual = data_error_actual(
                &data,
                &basis,
                r,
                &space,
                Norm::L2,
                ProjectorKind::Orthogonal,
            )
            .unwrap();
            let formula =
                data_error_formula(&basis, r, &space, Norm::L2, ProjectorKind::Orthogonal).unwrap();
            assert!((actual - formula).abs() <= 1e-9 * data.weighted_energy(&space));

            let rom = build_rom(
                &basis,
                r,
                &space,
                &params,
                &traj.grid,
                &traj.states[0],
                &traj.states[1],
            )
            .unwrap();
            let reduced = solve_rom(&rom).unwrap();
            let report = error_report(&traj, &reduced, &basis, r, &space, &params).unwrap();
            assert!(report.max_pointwise_l2 < previous, "{method} r={r}");
            previous = report.max_pointwise_l2;
        }
    }
}
