//! Monte Carlo for `∂_t u = C₂ ∂²_x u − V u`, `u(0, ·) = f`.
//!
//! `u(t, x) = E[f(B_t) exp(−∫₀ᵗ V(B_s) ds)]` with `B` a Brownian motion from
//! `x` of variance `2 C₂ s`, so the generator is exactly `C₂ ∂²_x`. The time
//! integral is the trapezoid rule on the path grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{ensure, Error, Result};
use crate::paths::gaussian_path;
use crate::profile::Profile;
use crate::quadrature::integrate_real;
use crate::rng::RngStream;
use crate::stats::{estimate, sample_all, Moments, SummaryStat, MC_CHUNK};

/// Largest admissible `−∫V` before `exp` leaves the normal f64 range.
const MAX_LOG_WEIGHT: f64 = 700.0;

#[derive(Clone)]
pub enum Potential {
    Zero,
    Constant(f64),
    /// `V(x) = k x²`
    Harmonic(f64),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Zero => write!(f, "Zero"),
            Potential::Constant(v) => write!(f, "Constant({v})"),
            Potential::Harmonic(k) => write!(f, "Harmonic({k})"),
            Potential::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl Potential {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Constant(v) => *v,
            Potential::Harmonic(k) => k * x * x,
            Potential::Function(v) => v(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Potential::Zero) || matches!(self, Potential::Constant(v) if *v == 0.0)
    }
}

#[derive(Debug, Clone)]
pub struct ParabolicProblem {
    pub c2: f64,
    pub potential: Potential,
    pub initial: Profile,
    pub t: f64,
}

impl ParabolicProblem {
    pub fn validate(&self) -> Result<()> {
        ensure(self.c2 > 0.0 && self.c2.is_finite(), || format!("diffusion constant must be positive, got {}", self.c2))?;
        ensure(self.t > 0.0 && self.t.is_finite(), || format!("time must be positive, got {}", self.t))?;
        Ok(())
    }
}

pub fn solve_parabolic_mc(
    prob: &ParabolicProblem,
    x: f64,
    n_paths: usize,
    n_steps: usize,
    rng: &RngStream,
) -> Result<SummaryStat> {
    prob.validate()?;
    ensure(n_paths >= 1, || "n_paths must be at least 1".into())?;
    ensure(n_steps >= 1, || "n_steps must be at least 1".into())?;
    ensure(x.is_finite(), || format!("evaluation point must be finite, got {x}"))?;
    let sigma = (2.0 * prob.c2).sqrt();
    let dt = prob.t / n_steps as f64;
    let skip_weight = prob.potential.is_zero();

    estimate(rng, n_paths, |stream, i| {
        let path = gaussian_path(stream, 0.0, prob.t, n_steps)?;
        if skip_weight {
            return Ok(prob.initial.eval(x + sigma * path.endpoint()));
        }
        weighted_value(prob, x, sigma, &path.values, 1, dt, stream, i)
    })
}

#[allow(clippy::too_many_arguments)]
fn weighted_value(
    prob: &ParabolicProblem,
    x: f64,
    sigma: f64,
    values: &[f64],
    stride: usize,
    dt: f64,
    stream: &RngStream,
    path: usize,
) -> Result<f64> {
    let v = |w: f64| prob.potential.eval(x + sigma * w);
    let last = values.len() - 1;
    let interior: f64 = (stride..last).step_by(stride).map(|j| v(values[j])).sum();
    let integral = dt * (0.5 * (v(values[0]) + v(values[last])) + interior);
    let log_weight = -integral;
    if !(log_weight <= MAX_LOG_WEIGHT) {
        return Err(Error::WeightOverflow {
            seed: stream.seed(),
            stream: stream.stream_id(),
            path,
            exponent: log_weight,
        });
    }
    Ok(prob.initial.eval(x + sigma * values[last]) * log_weight.exp())
}

/// Estimates at several step counts from one set of paths. Each path is
/// drawn at the largest step count and the trapezoid rule is applied to its
/// subsampled grids, so differences between levels carry little noise.
pub fn solve_parabolic_mc_ladder(
    prob: &ParabolicProblem,
    x: f64,
    n_paths: usize,
    steps: &[usize],
    rng: &RngStream,
) -> Result<Vec<SummaryStat>> {
    prob.validate()?;
    ensure(n_paths >= 1, || "n_paths must be at least 1".into())?;
    let finest = steps.iter().copied().max().unwrap_or(0);
    ensure(finest >= 1 && steps.iter().all(|&n| n >= 1 && finest % n == 0), || {
        format!("step counts {steps:?} must be positive divisors of the largest")
    })?;
    let sigma = (2.0 * prob.c2).sqrt();
    let per_path: Vec<Result<Vec<f64>>> = sample_all(rng, n_paths, |stream, i| {
        let path = gaussian_path(stream, 0.0, prob.t, finest)?;
        steps
            .iter()
            .map(|&n| weighted_value(prob, x, sigma, &path.values, finest / n, prob.t / n as f64, stream, i))
            .collect()
    });
    let mut levels = vec![Moments::default(); steps.len()];
    for rows in per_path.chunks(MC_CHUNK) {
        let mut local = vec![Moments::default(); steps.len()];
        for row in rows {
            for (m, w) in local.iter_mut().zip(row.as_ref().map_err(Clone::clone)?) {
                m.push(*w);
            }
        }
        for (total, m) in levels.iter_mut().zip(&local) {
            *total = total.merge(m);
        }
    }
    Ok(levels
        .into_iter()
        .map(|m| SummaryStat::from_moments(m, rng.fingerprint()))
        .collect())
}

/// Exact `V ≡ 0` solution by quadrature of the heat kernel
/// `(4π C₂ t)^{-1/2} exp(−(x−y)²/(4 C₂ t))` against `f`.
pub fn heat_reference(prob: &ParabolicProblem, x: f64) -> Result<f64> {
    prob.validate()?;
    if !prob.potential.is_zero() {
        return Err(Error::Unsupported(format!(
            "heat reference needs V = 0, got {:?}",
            prob.potential
        )));
    }
    if let Some(c) = prob.initial.is_constant() {
        return Ok(c);
    }
    let var = 2.0 * prob.c2 * prob.t;
    let sd = var.sqrt();
    let norm = 1.0 / (2.0 * std::f64::consts::PI * var).sqrt();
    let kernel = |y: f64| norm * (-(x - y) * (x - y) / (2.0 * var)).exp();
    let (lo, hi) = (x - 40.0 * sd, x + 40.0 * sd);
    let mut cuts = vec![lo, x, hi];
    cuts.extend(prob.initial.breakpoints().into_iter().filter(|b| *b > lo && *b < hi));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += integrate_real(|y| kernel(y) * prob.initial.eval(y), w[0], w[1], 1e-14, 40)?;
    }
    Ok(total)
}
