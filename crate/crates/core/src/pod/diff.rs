//! Difference quotients and averages of a vector sequence `z⁰, z¹, …`
//! (zero-based indices throughout).

fn combine2(a: &[f64], wa: f64, b: &[f64], wb: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| wa * x + wb * y).collect()
}

/// `∂zʲ = (z^{j+1} − zʲ)/Δt`.
pub fn forward(z: &[Vec<f64>], j: usize, dt: f64) -> Vec<f64> {
    combine2(&z[j + 1], 1.0 / dt, &z[j], -1.0 / dt)
}

/// `∂⁻zʲ = (zʲ − z^{j−1})/Δt`.
pub fn backward(z: &[Vec<f64>], j: usize, dt: f64) -> Vec<f64> {
    combine2(&z[j], 1.0 / dt, &z[j - 1], -1.0 / dt)
}

/// `∂∂zʲ = (z^{j+1} − 2zʲ + z^{j−1})/Δt²`.
pub fn second(z: &[Vec<f64>], j: usize, dt: f64) -> Vec<f64> {
    let s = 1.0 / (dt * dt);
    z[j + 1]
        .iter()
        .zip(&z[j])
        .zip(&z[j - 1])
        .map(|((a, b), c)| s * ((a - b) - (b - c)))
        .collect()
}

/// `∂z̄ʲ = (z^{j+1} − z^{j−1})/(2Δt)`.
pub fn centered(z: &[Vec<f64>], j: usize, dt: f64) -> Vec<f64> {
    combine2(&z[j + 1], 0.5 / dt, &z[j - 1], -0.5 / dt)
}

/// `z̄ʲ = (zʲ + z^{j−1})/2`.
pub fn backward_average(z: &[Vec<f64>], j: usize) -> Vec<f64> {
    combine2(&z[j], 0.5, &z[j - 1], 0.5)
}

/// `ẑʲ = (z^{j+1} + 2zʲ + z^{j−1})/4`.
pub fn hat_average(z: &[Vec<f64>], j: usize) -> Vec<f64> {
    z[j + 1]
        .iter()
        .zip(&z[j])
        .zip(&z[j - 1])
        .map(|((a, b), c)| 0.25 * (a + 2.0 * b + c))
        .collect()
}

/// `∂z⁰ + Δt Σ_{i=1}^{m} ∂∂zⁱ`, which equals `∂zᵐ` for `m ≤ len − 2`.
pub fn forward_from_second_differences(z: &[Vec<f64>], m: usize, dt: f64) -> Vec<f64> {
    let mut acc = forward(z, 0, dt);
    for i in 1..=m {
        let dd = second(z, i, dt);
        acc.iter_mut().zip(&dd).for_each(|(a, d)| *a += dt * d);
    }
    acc
}

/// `z⁰ + mΔt ∂z⁰ + Δt² Σ_{i=1}^{m−1} (m − i) ∂∂zⁱ`, which equals `zᵐ`.
pub fn state_from_second_differences(z: &[Vec<f64>], m: usize, dt: f64) -> Vec<f64> {
    let d0 = forward(z, 0, dt);
    let mut acc = combine2(&z[0], 1.0, &d0, m as f64 * dt);
    for i in 1..m {
        let dd = second(z, i, dt);
        let w = (m - i) as f64 * dt * dt;
        acc.iter_mut().zip(&dd).for_each(|(a, d)| *a += w * d);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn quadratic_sequence() {
        let dt = 0.1;
        let z: Vec<Vec<f64>> = (0..5).map(|j| vec![(j as f64 * dt).powi(2)]).collect();
        assert!((second(&z, 2, dt)[0] - 2.0).abs() < 1e-12);
        assert!((centered(&z, 2, dt)[0] - 0.4).abs() < 1e-12);
        assert!((forward(&z, 1, dt)[0] - 0.3).abs() < 1e-12);
        assert!((backward(&z, 1, dt)[0] - 0.1).abs() < 1e-12);
        assert!((backward_average(&z, 1)[0] - 0.005).abs() < 1e-15);
        assert!((hat_average(&z, 1)[0] - 0.015).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn telescoping_identities(
            len in 3usize..100,
            dim in 1usize..20,
            dt in 1e-3f64..1.0,
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let z: Vec<Vec<f64>> = (0..len)
                .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            for m in 0..len - 1 {
                let want = forward(&z, m, dt);
                let got = forward_from_second_differences(&z, m, dt);
                let scale = max_abs(&want).max(max_abs(&forward(&z, 0, dt)));
                let err = max_abs(&crate::numerics::sub(&got, &want));
                prop_assert!(err <= 1e-11 * scale.max(1.0 / dt), "m = {}: {}", m, err);
            }
            for m in 0..len {
                let got = state_from_second_differences(&z, m, dt);
                let err = max_abs(&crate::numerics::sub(&got, &z[m]));
                prop_assert!(err <= 1e-11 * max_abs(&z[m]).max(1.0), "m = {}: {}", m, err);
            }
        }
    }
}
