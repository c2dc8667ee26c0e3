//! Modulus-of-continuity statistics of simulated Brownian paths on `[0, 1]`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{ensure, Result};
use crate::rng::RngStream;
use crate::stats::fit_slope;

pub const MIN_LAG_EXP: u32 = 4;
pub const MAX_LAG_EXP: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct LevyStats {
    /// `max_h max_t |W_{t+h} − W_t| / √(2h log(1/h))`.
    pub ratio: f64,
    /// `(h, max_t |W_{t+h} − W_t|)` for `h = 2^-4 … 2^-12`.
    pub increments: Vec<(f64, f64)>,
    /// Log-log slope of `max_t |W_{t+h} − W_t| / h` against `1/h`.
    pub quotient_slope: f64,
}

fn brownian_grid(rng: &mut RngStream, n_grid: usize, scale: f64) -> Vec<f64> {
    let sd = scale * (1.0 / n_grid as f64).sqrt();
    let mut w = Vec::with_capacity(n_grid + 1);
    let mut acc = 0.0;
    w.push(acc);
    for _ in 0..n_grid {
        let z: f64 = rng.sample(StandardNormal);
        acc += sd * z;
        w.push(acc);
    }
    w
}

/// Statistics of `scale · W` for one path drawn from `rng`.
pub fn levy_statistics_scaled(rng: &RngStream, n_grid: usize, scale: f64) -> Result<LevyStats> {
    ensure(n_grid.is_power_of_two() && n_grid >= 1 << 16, || {
        format!("n_grid must be a power of two at least 2^16, got {n_grid}")
    })?;
    let mut stream = rng.clone();
    let w = brownian_grid(&mut stream, n_grid, scale);
    let mut increments = Vec::new();
    let mut ratio = 0.0_f64;
    for e in MIN_LAG_EXP..=MAX_LAG_EXP {
        let lag = n_grid >> e;
        let h = 0.5_f64.powi(e as i32);
        let max_inc = w.iter().zip(&w[lag..]).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
        ratio = ratio.max(max_inc / (2.0 * h * (1.0 / h).ln()).sqrt());
        increments.push((h, max_inc));
    }
    let xs: Vec<f64> = increments.iter().map(|(h, _)| (1.0 / h).ln()).collect();
    let ys: Vec<f64> = increments.iter().map(|(h, m)| (m / h).ln()).collect();
    Ok(LevyStats {
        ratio,
        increments,
        quotient_slope: fit_slope(&xs, &ys),
    })
}

pub fn levy_statistics(rng: &RngStream, n_grid: usize) -> Result<LevyStats> {
    levy_statistics_scaled(rng, n_grid, 1.0)
}

pub fn levy_modulus_ratio(rng: &RngStream, n_grid: usize) -> Result<f64> {
    Ok(levy_statistics(rng, n_grid)?.ratio)
}

/// Per-seed statistics for paths on substreams `0..n_seeds` of `rng`, in
/// substream order regardless of scheduling.
pub fn levy_seed_study(rng: &RngStream, n_seeds: usize, n_grid: usize) -> Result<Vec<LevyStats>> {
    ensure(n_seeds >= 1, || "n_seeds must be at least 1".into())?;
    (0..n_seeds as u64)
        .into_par_iter()
        .map(|i| levy_statistics(&rng.substream(i), n_grid))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_is_exact() {
        let rng = RngStream::new(3, 1);
        let a = levy_statistics_scaled(&rng, 1 << 16, 1.0).unwrap();
        let b = levy_statistics_scaled(&rng, 1 << 16, 2.0).unwrap();
        assert_eq!(b.ratio, 2.0 * a.ratio);
    }

    #[test]
    fn grid_checks() {
        let rng = RngStream::new(3, 1);
        assert!(levy_modulus_ratio(&rng, 1 << 15).is_err());
        assert!(levy_modulus_ratio(&rng, (1 << 16) + 2).is_err());
    }

    #[test]
    fn study_is_order_stable() {
        let rng = RngStream::new(9, 0);
        let a = levy_seed_study(&rng, 4, 1 << 16).unwrap();
        let b: Vec<LevyStats> = (0..4).map(|i| levy_statistics(&rng.substream(i), 1 << 16).unwrap()).collect();
        assert_eq!(a, b);
    }
}
