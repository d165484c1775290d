use rayon::prelude::*;

use super::{Norm, PodBasis, PodDataSet, Projector, ProjectorKind};
use crate::error::{Error, Result};
use crate::fem1d::FemSpace;

/// `Σ_j γ_j ‖wʲ − P wʲ‖²` over the data set, computed directly.
pub fn data_error_actual(
    data: &PodDataSet,
    basis: &PodBasis,
    r: usize,
    space: &FemSpace,
    norm: Norm,
    kind: ProjectorKind,
) -> Result<f64> {
    if data.method != basis.method {
        return Err(Error::InvalidParameter(format!(
            "data set is {} but basis is {}",
            data.method, basis.method
        )));
    }
    let proj = Projector::new(basis, r, space, kind)?;
    let terms: Vec<f64> = data
        .columns
        .par_iter()
        .zip(data.weights.par_iter())
        .map(|(w, g)| Ok(g * norm.norm_sq(space, &proj.residual(w)?)))
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// The error formula `Σ_{k=r+1}^{s} λ_k m_k`, with `m_k = 1` for L² and `Π_r`,
/// `‖φ_k‖²_Y` for another norm and `Π_r`, and `‖φ_k − R_r φ_k‖²_Y` for `R_r`.
pub fn data_error_formula(
    basis: &PodBasis,
    r: usize,
    space: &FemSpace,
    norm: Norm,
    kind: ProjectorKind,
) -> Result<f64> {
    basis.check_r(r)?;
    let tail = basis.modes[r..].iter().zip(&basis.eigenvalues[r..]);
    match (kind, norm) {
        (ProjectorKind::Orthogonal, Norm::L2) => Ok(basis.tail_sum(r)),
        (ProjectorKind::Orthogonal, Norm::H10) => {
            Ok(tail.map(|(phi, l)| l * space.h10_norm_sq(phi)).sum())
        }
        (ProjectorKind::Ritz, _) => {
            let proj = Projector::new(basis, r, space, kind)?;
            let mut sum = 0.0;
            for (phi, l) in tail {
                sum += l * norm.norm_sq(space, &proj.residual(phi)?);
            }
            Ok(sum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pod::{build_dataset, compute_basis, PodMethod, PodOptions};
    use crate::wave::{default_initial_displacement, solve, TimeGrid, WaveParams};

    #[test]
    fn formula_matches_actual_on_small_run() {
        let space = FemSpace::new(30).unwrap();
        let grid = TimeGrid::from_step(1.0, 0.02).unwrap();
        let params = WaveParams::new(1.0, 0.1, 0.0).unwrap();
        let traj = solve(&space, &grid, &params, default_initial_displacement, |_| {
            0.0
        })
        .unwrap();
        for method in PodMethod::ALL {
            let data = build_dataset(&traj, method).unwrap();
            let basis = compute_basis(&data, &space, PodOptions::default()).unwrap();
            let lambda1 = basis.eigenvalues[0];
            for r in 1..=basis.rank() {
                for norm in [Norm::L2, Norm::H10] {
                    for kind in [ProjectorKind::Orthogonal, ProjectorKind::Ritz] {
                        let a = data_error_actual(&data, &basis, r, &space, norm, kind).unwrap();
                        let f = data_error_formula(&basis, r, &space, norm, kind).unwrap();
                        let scale = f.max(lambda1 * 1e-6);
                        assert!(
                            (a - f).abs() <= 1e-8 * f.max(lambda1),
                            "{method} r={r} {norm} {kind}: {a} vs {f}"
                        );
                        assert!(
                            (a - f).abs() / scale <= 1e-6,
                            "{method} r={r} {norm} {kind}"
                        );
                    }
                }
            }
            let s = basis.rank();
            assert_eq!(
                data_error_formula(&basis, s, &space, Norm::H10, ProjectorKind::Ritz).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn mismatched_method_rejected() {
        let space = FemSpace::new(6).unwrap();
        let grid = TimeGrid::from_step(1.0, 0.25).unwrap();
        let traj = solve(
            &space,
            &grid,
            &WaveParams::undamped(1.0).unwrap(),
            default_initial_displacement,
            |_| 0.0,
        )
        .unwrap();
        let std = build_dataset(&traj, PodMethod::Standard).unwrap();
        let ddq = build_dataset(&traj, PodMethod::Ddq).unwrap();
        let basis = compute_basis(&std, &space, PodOptions::default()).unwrap();
        assert!(
            data_error_actual(&ddq, &basis, 1, &space, Norm::L2, ProjectorKind::Orthogonal)
                .is_err()
        );
    }
}
