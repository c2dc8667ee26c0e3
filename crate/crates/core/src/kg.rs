//! Relativistic scalar semigroup `e^{−t√(−Δ + m²)}` in one dimension,
//! computed spectrally and by subordinated Brownian motion.
//!
//! The subordinated representation is
//! `(e^{−tH} f)(x) = e^{−mt} E[f(x + B_{T_t})]`, where `T_t` is drawn from the
//! normalized subordinator law and `B` has generator `Δ` (variance `2s` at
//! operational time `s`).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{ensure, Result};
use crate::profile::Profile;
use crate::rng::RngStream;
use crate::spectral::{apply_multiplier, check_resolved, Fourier, PeriodicGrid};
use crate::stats::{estimate, SummaryStat};
use crate::subordinator::sample_subordinator;

#[derive(Debug, Clone)]
pub struct KgProblem {
    pub m: f64,
    pub t: f64,
    pub initial: Profile,
    pub points: Vec<f64>,
}

impl KgProblem {
    pub fn validate(&self) -> Result<()> {
        ensure(self.m >= 0.0 && self.m.is_finite(), || format!("mass must be nonnegative, got {}", self.m))?;
        ensure(self.t > 0.0 && self.t.is_finite(), || format!("time must be positive, got {}", self.t))?;
        Ok(())
    }
}

/// `e^{−tH} f` on the grid points, by Fourier multiplier `e^{−t√(k² + m²)}`.
pub fn kg_semigroup_spectral(prob: &KgProblem, grid: PeriodicGrid) -> Result<Vec<f64>> {
    prob.validate()?;
    let fourier = Fourier::new(grid.n);
    let data = grid.sample(|x| prob.initial.eval(x));
    check_resolved(&fourier.forward_real(&data), 1e-20, "initial data")?;
    let (m, t) = (prob.m, prob.t);
    let out = apply_multiplier(&grid, &fourier, &data, |k| {
        Complex64::new((-t * (k * k + m * m).sqrt()).exp(), 0.0)
    });
    Ok(out.into_iter().map(|z| z.re).collect())
}

/// Subordinated-Brownian Monte Carlo estimate of `(e^{−tH} f)(x)`.
pub fn kg_semigroup_mc(prob: &KgProblem, x: f64, n_paths: usize, rng: &RngStream) -> Result<SummaryStat> {
    prob.validate()?;
    ensure(n_paths >= 1, || "n_paths must be at least 1".into())?;
    let inner = estimate(rng, n_paths, |stream, _| {
        let op = sample_subordinator(stream, prob.t, prob.m)?;
        let z: f64 = stream.sample(StandardNormal);
        Ok(prob.initial.eval(x + (2.0 * op.s).sqrt() * z))
    })?;
    Ok(inner.scaled((-prob.m * prob.t).exp()))
}

/// `P(|C| ≤ a)` for a Cauchy variable of scale `t`: the `m = 0` semigroup
/// applied to the indicator of `[−a, a]`, evaluated at the origin.
pub fn cauchy_interval_mass(a: f64, t: f64) -> f64 {
    2.0 / std::f64::consts::PI * (a / t).atan()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(m: f64, t: f64, initial: Profile) -> KgProblem {
        KgProblem {
            m,
            t,
            initial,
            points: vec![0.0],
        }
    }

    #[test]
    fn constants_decay_by_the_mass_gap() {
        let grid = PeriodicGrid::new(10.0, 64).unwrap();
        for &(m, t) in &[(0.0, 1.0), (1.0, 0.5), (2.5, 1.0)] {
            let out = kg_semigroup_spectral(&problem(m, t, Profile::Constant(1.0)), grid).unwrap();
            let expect = (-m * t).exp();
            assert!(out.iter().all(|v| (v - expect).abs() < 1e-14));
        }
    }

    #[test]
    fn mc_on_constants_is_exact() {
        let rng = RngStream::new(8, 0);
        let s = kg_semigroup_mc(&problem(1.0, 2.0, Profile::Constant(1.0)), 0.3, 10_000, &rng).unwrap();
        assert_eq!(s.mean, (-2.0_f64).exp());
        assert_eq!(s.std_error, 0.0);
    }

    #[test]
    fn spectral_is_a_contraction() {
        let grid = PeriodicGrid::new(40.0, 512).unwrap();
        let f = Profile::custom(|x| (-x * x).exp() * (3.0 * x).cos());
        let sup_f = grid.sample(|x| f.eval(x)).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let out = kg_semigroup_spectral(&problem(0.0, 0.3, f), grid).unwrap();
        assert!(out.iter().all(|v| v.abs() <= sup_f));
    }

    #[test]
    fn unresolved_data_rejected() {
        let grid = PeriodicGrid::new(40.0, 64).unwrap();
        let f = Profile::Indicator { lo: -1.0, hi: 1.0 };
        assert!(kg_semigroup_spectral(&problem(0.0, 0.3, f), grid).is_err());
    }

    #[test]
    fn invalid_problem() {
        let rng = RngStream::new(8, 0);
        assert!(kg_semigroup_mc(&problem(-1.0, 1.0, Profile::Constant(1.0)), 0.0, 10, &rng).is_err());
        assert!(kg_semigroup_mc(&problem(1.0, 0.0, Profile::Constant(1.0)), 0.0, 10, &rng).is_err());
    }
}
