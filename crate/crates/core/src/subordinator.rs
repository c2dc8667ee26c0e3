//! Operational-time sampler for the relativistic subordinator.
//!
//! The subordinator law at time `t` with mass `m` has density
//! `t/(2√π) s^{-3/2} exp(-t²/(4s) - m²s)` and total mass `e^{-mt}`. We sample
//! the normalized law and carry the mass separately in `log_mass`:
//!
//! * `m = 0`: one-sided ½-stable (Lévy) law, `s = (t²/2) / Z²`.
//! * `m > 0`: inverse Gaussian with mean `t/(2m)` and shape `t²/2`
//!   (Michael–Schucany–Haas two-root construction).
//!
//! Its Laplace transform is `E[e^{-λs}] = e^{-t(√(λ+m²) - m)}`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinatorSample {
    pub t: f64,
    pub m: f64,
    /// Sampled operational time, always > 0.
    pub s: f64,
    /// `-m * t`, the log total mass of the subordinator law.
    pub log_mass: f64,
}

pub fn sample_subordinator(rng: &mut RngStream, t: f64, m: f64) -> Result<SubordinatorSample> {
    ensure(t > 0.0 && t.is_finite(), || format!("subordinator time must be positive, got {t}"))?;
    ensure(m >= 0.0 && m.is_finite(), || format!("mass must be nonnegative, got {m}"))?;
    let s = if m == 0.0 {
        levy_stable_half(rng, t * t / 2.0)
    } else {
        inverse_gaussian(rng, t / (2.0 * m), t * t / 2.0)
    };
    Ok(SubordinatorSample {
        t,
        m,
        s,
        log_mass: -m * t,
    })
}

fn levy_stable_half(rng: &mut RngStream, scale: f64) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        if z != 0.0 {
            return scale / (z * z);
        }
    }
}

fn inverse_gaussian(rng: &mut RngStream, mean: f64, shape: f64) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let y = mean * z * z;
        // smaller root written as mean*(2 shape) / (2 shape + y + sqrt(...)) to avoid cancellation
        let disc = (4.0 * shape * y + y * y).sqrt();
        let x = mean * 2.0 * shape / (2.0 * shape + y + disc);
        if !(x > 0.0) {
            continue;
        }
        let u = rng.open01();
        return if u <= mean / (mean + x) { x } else { mean * mean / x };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_mass_is_exact() {
        let mut rng = RngStream::new(1, 1);
        let s = sample_subordinator(&mut rng, 2.0, 1.0).unwrap();
        assert_eq!(s.log_mass, -2.0);
        let s0 = sample_subordinator(&mut rng, 2.0, 0.0).unwrap();
        assert_eq!(s0.log_mass, 0.0);
    }

    #[test]
    fn operational_time_positive() {
        let mut rng = RngStream::new(5, 0);
        for &(t, m) in &[(1.0, 0.0), (1.0, 1.0), (1e-3, 50.0), (10.0, 1e-3)] {
            for _ in 0..10_000 {
                assert!(sample_subordinator(&mut rng, t, m).unwrap().s > 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RngStream::new(5, 0);
        assert!(sample_subordinator(&mut rng, 0.0, 1.0).is_err());
        assert!(sample_subordinator(&mut rng, 1.0, -1.0).is_err());
    }

    #[test]
    fn smaller_root_matches_textbook_form() {
        // mean + mean/(2 shape) (y - sqrt(4 shape y + y^2)) is the same root
        let (mean, shape) = (0.5_f64, 0.5_f64);
        for &y in &[1e-6, 0.1, 1.0, 25.0] {
            let textbook = mean + mean / (2.0 * shape) * (y - (4.0 * shape * y + y * y).sqrt());
            let stable = mean * 2.0 * shape / (2.0 * shape + y + (4.0 * shape * y + y * y).sqrt());
            assert!((textbook - stable).abs() <= 1e-12 * mean);
        }
    }
}
