//! Piecewise-linear finite elements on (0, 1) with homogeneous Dirichlet
//! conditions. Only interior nodes carry degrees of freedom.

use crate::error::{Error, Result};
use crate::numerics::{ThomasFactor, TridiagonalMatrix};

/// Coefficients of a finite element function at the interior nodes.
pub type FemVector = Vec<f64>;

/// 5-point Gauss–Legendre rule on [-1, 1].
pub(crate) const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

#[derive(Debug, Clone)]
pub struct FemSpace {
    n_elements: usize,
    h: f64,
    mass: TridiagonalMatrix,
    stiffness: TridiagonalMatrix,
    mass_factor: ThomasFactor,
}

impl FemSpace {
    /// Uniform mesh with `n_elements` elements and `n_elements - 1` interior nodes.
    pub fn new(n_elements: usize) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::TooFewElements(n_elements));
        }
        let h = 1.0 / n_elements as f64;
        let m = n_elements - 1;
        let mass = TridiagonalMatrix::constant(m, h / 6.0, 2.0 * h / 3.0, h / 6.0)?;
        let stiffness = TridiagonalMatrix::constant(m, -1.0 / h, 2.0 / h, -1.0 / h)?;
        let mass_factor = mass.factor()?;
        Ok(Self {
            n_elements,
            h,
            mass,
            stiffness,
            mass_factor,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_dof(&self) -> usize {
        self.n_elements - 1
    }

    /// L² Gram matrix of the hat functions.
    pub fn mass(&self) -> &TridiagonalMatrix {
        &self.mass
    }

    /// H¹₀ Gram matrix of the hat functions.
    pub fn stiffness(&self) -> &TridiagonalMatrix {
        &self.stiffness
    }

    /// Interior node coordinates.
    pub fn nodes(&self) -> Vec<f64> {
        (1..self.n_elements).map(|i| i as f64 * self.h).collect()
    }

    pub fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.n_dof() {
            return Err(Error::LengthMismatch {
                expected: self.n_dof(),
                found: u.len(),
            });
        }
        Ok(())
    }

    pub fn mass_mul(&self, u: &[f64]) -> FemVector {
        self.mass.mul_vec(u)
    }

    pub fn stiffness_mul(&self, u: &[f64]) -> FemVector {
        self.stiffness.mul_vec(u)
    }

    /// `(u, v)_{L²} = uᵀ M v`.
    pub fn l2_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.mass.bilinear(u, v)
    }

    /// `(u, v)_{H¹₀} = uᵀ A v`.
    pub fn h10_inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.stiffness.bilinear(u, v)
    }

    pub fn l2_norm_sq(&self, u: &[f64]) -> f64 {
        self.l2_inner(u, u)
    }

    pub fn h10_norm_sq(&self, u: &[f64]) -> f64 {
        self.h10_inner(u, u)
    }

    /// Load vector `b_i = ∫ f φ_i` by 5-point Gauss–Legendre on each element.
    pub fn load_vector(&self, f: impl Fn(f64) -> f64) -> FemVector {
        let m = self.n_dof();
        let mut b = vec![0.0; m];
        let half = 0.5 * self.h;
        for e in 0..self.n_elements {
            let left = e as f64 * self.h;
            let (mut to_left, mut to_right) = (0.0, 0.0);
            for (xi, w) in GAUSS5 {
                let s = 0.5 * (xi + 1.0);
                let fx = f(left + s * self.h) * w * half;
                to_left += fx * (1.0 - s);
                to_right += fx * s;
            }
            // Element e joins nodes e and e+1; interior node k is dof k-1.
            if e >= 1 {
                b[e - 1] += to_left;
            }
            if e + 1 < self.n_elements {
                b[e] += to_right;
            }
        }
        b
    }

    /// L² projection onto the finite element space.
    pub fn l2_project(&self, f: impl Fn(f64) -> f64) -> Result<FemVector> {
        let b = self.load_vector(f);
        self.solve_mass(&b)
    }

    /// Solves `M x = b`.
    pub fn solve_mass(&self, b: &[f64]) -> Result<FemVector> {
        Ok(self.mass_factor.solve(b)?)
    }

    /// Nodal interpolant at the interior nodes.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> FemVector {
        self.nodes().into_iter().map(f).collect()
    }

    /// `(f', φ_i')` for a continuous `f`, exact for linear elements:
    /// only the nodal values of `f` (boundary included) enter.
    pub fn gradient_load(&self, f: impl Fn(f64) -> f64) -> FemVector {
        let vals: Vec<f64> = (0..=self.n_elements)
            .map(|k| f(k as f64 * self.h))
            .collect();
        (1..self.n_elements)
            .map(|k| (2.0 * vals[k] - vals[k - 1] - vals[k + 1]) / self.h)
            .collect()
    }

    /// Value of the finite element function at `x ∈ [0, 1]`.
    pub fn eval(&self, u: &[f64], x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let e = ((x / self.h).floor() as usize).min(self.n_elements - 1);
        let s = (x - e as f64 * self.h) / self.h;
        let node = |k: usize| {
            if k == 0 || k == self.n_elements {
                0.0
            } else {
                u[k - 1]
            }
        };
        node(e) * (1.0 - s) + node(e + 1) * s
    }

    /// `‖u_h − f‖_{L²}` by 5-point Gauss–Legendre per element.
    pub fn l2_error(&self, u: &[f64], f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * self.h;
        let mut acc = 0.0;
        for e in 0..self.n_elements {
            let left = e as f64 * self.h;
            let ul = if e == 0 { 0.0 } else { u[e - 1] };
            let ur = if e + 1 == self.n_elements { 0.0 } else { u[e] };
            for (xi, w) in GAUSS5 {
                let s = 0.5 * (xi + 1.0);
                let d = ul * (1.0 - s) + ur * s - f(left + s * self.h);
                acc += w * half * d * d;
            }
        }
        acc.sqrt()
    }

    /// The hat function of dof `j`, as a closure on [0, 1].
    pub fn hat(&self, j: usize) -> impl Fn(f64) -> f64 {
        let center = (j + 1) as f64 * self.h;
        let h = self.h;
        move |x| (1.0 - (x - center).abs() / h).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn rejects_coarse_mesh() {
        assert_eq!(FemSpace::new(1).unwrap_err(), Error::TooFewElements(1));
    }

    #[test]
    fn two_elements() {
        let s = FemSpace::new(2).unwrap();
        assert_eq!(s.n_dof(), 1);
        assert!((s.mass().diag()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.stiffness().diag()[0] - 4.0).abs() < 1e-15);
        assert!((s.l2_inner(&[1.0], &[1.0]) - 1.0 / 3.0).abs() < 1e-15);
        assert!((s.h10_inner(&[1.0], &[1.0]) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn four_elements() {
        let s = FemSpace::new(4).unwrap();
        assert!(s
            .mass()
            .diag()
            .iter()
            .all(|d| (d - 1.0 / 6.0).abs() < 1e-15));
        assert!(s
            .mass()
            .sub()
            .iter()
            .all(|d| (d - 1.0 / 24.0).abs() < 1e-15));
        assert!(s.stiffness().diag().iter().all(|d| (d - 8.0).abs() < 1e-14));
        assert!(s.stiffness().sub().iter().all(|d| (d + 4.0).abs() < 1e-14));
    }

    #[test]
    fn interior_stiffness_rows_sum_to_zero() {
        let s = FemSpace::new(9).unwrap();
        let ones = vec![1.0; s.n_dof()];
        let r = s.stiffness_mul(&ones);
        for v in &r[1..r.len() - 1] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn norms_positive_and_symmetric() {
        let s = FemSpace::new(17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let u: Vec<f64> = (0..s.n_dof()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..s.n_dof()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(s.l2_norm_sq(&u) > 0.0);
            let (a, b) = (s.l2_inner(&u, &v), s.l2_inner(&v, &u));
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
            let (a, b) = (s.h10_inner(&u, &v), s.h10_inner(&v, &u));
            assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
        }
        assert_eq!(s.l2_norm_sq(&vec![0.0; s.n_dof()]), 0.0);
    }

    #[test]
    fn discrete_poincare() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [2, 3, 10, 50, 400] {
            let s = FemSpace::new(n).unwrap();
            for _ in 0..10 {
                let u: Vec<f64> = (0..s.n_dof()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                assert!(PI * PI * s.l2_norm_sq(&u) <= s.h10_norm_sq(&u) * (1.0 + 1e-10));
            }
        }
    }

    #[test]
    fn h10_norm_of_sine_interpolant() {
        let s = FemSpace::new(2000).unwrap();
        let u = s.interpolate(|x| (PI * x).sin());
        assert!((s.h10_norm_sq(&u) - PI * PI / 2.0).abs() < 1e-5);
    }

    #[test]
    fn projection_of_zero_and_hats() {
        let s = FemSpace::new(8).unwrap();
        assert!(s.l2_project(|_| 0.0).unwrap().iter().all(|v| *v == 0.0));
        for j in 0..s.n_dof() {
            let p = s.l2_project(s.hat(j)).unwrap();
            for (k, v) in p.iter().enumerate() {
                let want = if k == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-12, "dof {k} of hat {j}: {v}");
            }
        }
    }

    #[test]
    fn projection_idempotent() {
        let s = FemSpace::new(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u: Vec<f64> = (0..s.n_dof()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = s.l2_project(|x| s.eval(&u, x)).unwrap();
        for (a, b) in p.iter().zip(&u) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_load_matches_stiffness_on_space() {
        let s = FemSpace::new(13).unwrap();
        let u: Vec<f64> = (0..s.n_dof()).map(|i| (i as f64).sin()).collect();
        let g = s.gradient_load(|x| s.eval(&u, x));
        let a = s.stiffness_mul(&u);
        for (x, y) in g.iter().zip(&a) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_error_is_second_order() {
        let f = crate::wave::default_initial_displacement;
        let errs: Vec<f64> = [50, 100, 200, 400]
            .iter()
            .map(|&n| {
                let s = FemSpace::new(n).unwrap();
                s.l2_error(&s.l2_project(f).unwrap(), f)
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.9..2.1).contains(&order), "order {order}");
        }
    }
}
