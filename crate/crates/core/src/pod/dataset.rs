use std::fmt;
use std::str::FromStr;

use super::diff;
use crate::error::{Error, Result};
use crate::fem1d::{FemSpace, FemVector};
use crate::wave::Trajectory;

/// Which vectors of a trajectory make up the POD data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PodMethod {
    /// Snapshots `uʲ`, weights `Δt`.
    Standard,
    /// `u¹` and the first difference quotients `∂uʲ`.
    Dq1,
    /// `u¹`, `∂u¹` and the second difference quotients `∂∂uʲ`.
    Ddq,
}

impl PodMethod {
    pub const ALL: [PodMethod; 3] = [PodMethod::Standard, PodMethod::Dq1, PodMethod::Ddq];

    pub fn as_str(&self) -> &'static str {
        match self {
            PodMethod::Standard => "standard",
            PodMethod::Dq1 => "dq1",
            PodMethod::Ddq => "ddq",
        }
    }
}

impl fmt::Display for PodMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PodMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" | "std" => Ok(PodMethod::Standard),
            "dq1" | "dq" => Ok(PodMethod::Dq1),
            "ddq" => Ok(PodMethod::Ddq),
            other => Err(Error::InvalidParameter(format!(
                "unknown POD method {other:?} (expected standard, dq1 or ddq)"
            ))),
        }
    }
}

/// Weighted data vectors `{(γ_j, wʲ)}` of one POD method.
#[derive(Debug, Clone)]
pub struct PodDataSet {
    pub method: PodMethod,
    pub columns: Vec<FemVector>,
    pub weights: Vec<f64>,
}

impl PodDataSet {
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// `Σ_j γ_j ‖wʲ‖²_{L²}`, the trace of the POD operator.
    pub fn weighted_energy(&self, space: &FemSpace) -> f64 {
        self.columns
            .iter()
            .zip(&self.weights)
            .map(|(w, g)| g * space.l2_norm_sq(w))
            .sum()
    }
}

pub fn build_dataset(traj: &Trajectory, method: PodMethod) -> Result<PodDataSet> {
    let z = &traj.states;
    let n = z.len();
    let dt = traj.dt();
    let needed = match method {
        PodMethod::Standard => 1,
        PodMethod::Dq1 => 2,
        PodMethod::Ddq => 3,
    };
    if n < needed {
        return Err(Error::TooFewStates { needed, found: n });
    }
    let (columns, weights) = match method {
        PodMethod::Standard => (z.clone(), vec![dt; n]),
        PodMethod::Dq1 => {
            let mut cols = Vec::with_capacity(n);
            cols.push(z[0].clone());
            cols.extend((0..n - 1).map(|j| diff::forward(z, j, dt)));
            let mut w = vec![dt; n];
            w[0] = 1.0;
            (cols, w)
        }
        PodMethod::Ddq => {
            let mut cols = Vec::with_capacity(n);
            cols.push(z[0].clone());
            cols.push(diff::forward(z, 0, dt));
            cols.extend((1..n - 1).map(|j| diff::second(z, j, dt)));
            let mut w = vec![dt; n];
            w[0] = 1.0;
            w[1] = 1.0;
            (cols, w)
        }
    };
    Ok(PodDataSet {
        method,
        columns,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wave::TimeGrid;

    fn trajectory(f: impl Fn(f64) -> f64) -> Trajectory {
        let grid = TimeGrid::from_step(1.0, 0.25).unwrap();
        let v = [1.0, -2.0, 0.5];
        let states = (0..grid.n_states())
            .map(|i| v.iter().map(|x| x * f(grid.time(i))).collect())
            .collect();
        Trajectory::new(grid, states).unwrap()
    }

    #[test]
    fn constant_trajectory() {
        let d = build_dataset(&trajectory(|_| 1.0), PodMethod::Ddq).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.columns[0], vec![1.0, -2.0, 0.5]);
        assert!(d.columns[1..].iter().flatten().all(|x| *x == 0.0));
        assert_eq!(d.weights, vec![1.0, 1.0, 0.25, 0.25, 0.25]);
    }

    #[test]
    fn linear_trajectory_ddq() {
        let d = build_dataset(&trajectory(|t| t), PodMethod::Ddq).unwrap();
        for (a, b) in d.columns[1].iter().zip([1.0, -2.0, 0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(d.columns[2..].iter().flatten().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn quadratic_trajectory_ddq() {
        let d = build_dataset(&trajectory(|t| t * t), PodMethod::Ddq).unwrap();
        for c in &d.columns[2..] {
            for (a, b) in c.iter().zip([2.0, -4.0, 1.0]) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn standard_and_dq1_layouts() {
        let traj = trajectory(|t| t * t);
        let s = build_dataset(&traj, PodMethod::Standard).unwrap();
        assert_eq!(s.columns, traj.states);
        assert!(s.weights.iter().all(|w| *w == 0.25));
        let d = build_dataset(&traj, PodMethod::Dq1).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(d.columns[0], traj.states[0]);
        assert_eq!(d.weights, vec![1.0, 0.25, 0.25, 0.25, 0.25]);
        // ∂u at t = 0.75: (1 − 0.5625)/0.25 = 1.75
        assert!((d.columns[4][0] - 1.75).abs() < 1e-14);
    }

    #[test]
    fn method_names_round_trip() {
        for m in PodMethod::ALL {
            assert_eq!(m.as_str().parse::<PodMethod>().unwrap(), m);
        }
        assert!("svd".parse::<PodMethod>().is_err());
    }
}
