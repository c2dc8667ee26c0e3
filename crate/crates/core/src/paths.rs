//! Brownian paths and Poisson velocity-flip sequences.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{ensure, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Brownian,
    FlipTimes,
}

/// A realized trajectory.
///
/// For `Brownian` paths `values[i]` is the position at `times[i]`. For
/// `FlipTimes` the first entry is the origin `(0, +1)` and every later entry
/// is a flip event carrying the velocity sign that holds after it, so the
/// event list proper is `times[1..]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: PathKind,
}

impl PathSample {
    pub fn endpoint(&self) -> f64 {
        *self.values.last().expect("path has at least one point")
    }

    /// Flip event times in (0, t); empty for Brownian paths.
    pub fn events(&self) -> &[f64] {
        match self.kind {
            PathKind::FlipTimes => &self.times[1..],
            PathKind::Brownian => &[],
        }
    }
}

/// Standard Brownian motion from `x0` on a uniform grid of `n_steps` steps
/// over `[0, t]`.
pub fn gaussian_path(rng: &mut RngStream, x0: f64, t: f64, n_steps: usize) -> Result<PathSample> {
    ensure(t > 0.0 && t.is_finite(), || format!("path horizon must be positive, got {t}"))?;
    ensure(n_steps >= 1, || "n_steps must be at least 1".into())?;
    let dt = t / n_steps as f64;
    let sd = dt.sqrt();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    values.push(x0);
    let mut x = x0;
    for i in 1..=n_steps {
        let z: f64 = rng.sample(StandardNormal);
        x += sd * z;
        times.push(if i == n_steps { t } else { i as f64 * dt });
        values.push(x);
    }
    Ok(PathSample {
        times,
        values,
        kind: PathKind::Brownian,
    })
}

/// Event times of a rate-`rate` Poisson process on `(0, t)`.
pub fn poisson_flip_times(rng: &mut RngStream, rate: f64, t: f64) -> Result<PathSample> {
    ensure(rate >= 0.0 && rate.is_finite(), || format!("flip rate must be nonnegative, got {rate}"))?;
    ensure(t > 0.0 && t.is_finite(), || format!("horizon must be positive, got {t}"))?;
    let mut times = vec![0.0];
    let mut values = vec![1.0];
    if rate > 0.0 {
        let mut clock = 0.0;
        let mut sign = 1.0;
        loop {
            let gap: f64 = rng.sample(Exp1);
            clock += gap / rate;
            if clock >= t {
                break;
            }
            // exponential gaps can underflow to zero; keep times strictly increasing
            if clock <= *times.last().unwrap() {
                continue;
            }
            sign = -sign;
            times.push(clock);
            values.push(sign);
        }
    }
    Ok(PathSample {
        times,
        values,
        kind: PathKind::FlipTimes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_point_is_pinned() {
        let mut rng = RngStream::new(1, 0);
        let p = gaussian_path(&mut rng, 5.0, 1.0, 16).unwrap();
        assert_eq!(p.values[0], 5.0);
        assert_eq!(p.times.len(), 17);
        assert_eq!(p.times[0], 0.0);
        assert_eq!(*p.times.last().unwrap(), 1.0);
        assert!(p.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bad_arguments() {
        let mut rng = RngStream::new(1, 0);
        assert!(gaussian_path(&mut rng, 0.0, 0.0, 4).is_err());
        assert!(gaussian_path(&mut rng, 0.0, -1.0, 4).is_err());
        assert!(gaussian_path(&mut rng, 0.0, 1.0, 0).is_err());
        assert!(poisson_flip_times(&mut rng, -0.5, 1.0).is_err());
        assert!(poisson_flip_times(&mut rng, 1.0, 0.0).is_err());
    }

    #[test]
    fn zero_rate_never_flips() {
        let mut rng = RngStream::new(9, 2);
        for _ in 0..100 {
            let p = poisson_flip_times(&mut rng, 0.0, 3.0).unwrap();
            assert!(p.events().is_empty());
        }
    }

    #[test]
    fn flip_events_sorted_inside_horizon() {
        let mut rng = RngStream::new(9, 3);
        for _ in 0..1000 {
            let p = poisson_flip_times(&mut rng, 5.0, 2.0).unwrap();
            assert!(p.times.windows(2).all(|w| w[1] > w[0]));
            assert!(p.events().iter().all(|&s| s > 0.0 && s < 2.0));
            for w in p.values.windows(2) {
                assert_eq!(w[0], -w[1]);
            }
        }
    }
}
