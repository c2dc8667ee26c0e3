//! Telegrapher equation `∂²_t u + 2λ ∂_t u = c² ∂²_x u` with `u(0) = f`,
//! `∂_t u(0) = 0`.
//!
//! Two independent solvers:
//!
//! * Kac velocity-jump Monte Carlo: `u(t, x) = ½ E[f(x + S_t)] + ½ E[f(x − S_t)]`
//!   where `S_t = c ∫₀ᵗ σ(s) ds` and `σ = ±1` flips at Poisson rate `λ`.
//! * Kinetic finite differences for the velocity-resolved densities
//!   `∂_t p_± ± c ∂_x p_± = λ (p_∓ − p_±)`, with `u = p₊ + p₋` and
//!   `p_± (0) = f / 2`. Each step is an upwind transport step followed by the
//!   exact 2×2 relaxation of the flip term. Boundaries are periodic.

use crate::error::{ensure, invalid, Result};
use crate::paths::poisson_flip_times;
use crate::profile::Profile;
use crate::rng::RngStream;
use crate::spectral::PeriodicGrid;
use crate::stats::{estimate, SummaryStat};

#[derive(Debug, Clone)]
pub struct TelegrapherConfig {
    /// Flip rate λ in 1/s.
    pub lambda: f64,
    /// Propagation speed.
    pub c: f64,
    pub t: f64,
    pub initial: Profile,
}

impl TelegrapherConfig {
    pub fn validate(&self) -> Result<()> {
        ensure(self.lambda >= 0.0 && self.lambda.is_finite(), || format!("flip rate must be nonnegative, got {}", self.lambda))?;
        ensure(self.c > 0.0 && self.c.is_finite(), || format!("speed must be positive, got {}", self.c))?;
        ensure(self.t > 0.0 && self.t.is_finite(), || format!("time must be positive, got {}", self.t))?;
        Ok(())
    }
}

/// Displacement and final velocity sign of one velocity-jump flight of
/// duration `t` starting with sign `initial_sign`.
pub fn kac_flight(rng: &mut RngStream, lambda: f64, c: f64, t: f64, initial_sign: f64) -> Result<(f64, f64)> {
    let flips = poisson_flip_times(rng, lambda, t)?;
    let mut signed_time = 0.0;
    let mut sign = initial_sign;
    let mut last = 0.0;
    for &tau in flips.events() {
        signed_time += sign * (tau - last);
        sign = -sign;
        last = tau;
    }
    signed_time += sign * (t - last);
    // rounding in the segment sum must not leave the light cone
    let s = (c * signed_time).clamp(-c * t, c * t);
    Ok((s, sign))
}

/// `S_t` for a flight starting with velocity `+c`.
pub fn kac_displacement(rng: &mut RngStream, cfg: &TelegrapherConfig) -> Result<f64> {
    cfg.validate()?;
    kac_flight(rng, cfg.lambda, cfg.c, cfg.t, 1.0).map(|(s, _)| s)
}

pub fn solve_telegrapher_mc(cfg: &TelegrapherConfig, x: f64, n_paths: usize, rng: &RngStream) -> Result<SummaryStat> {
    cfg.validate()?;
    ensure(n_paths >= 1, || "n_paths must be at least 1".into())?;
    estimate(rng, n_paths, |stream, _| {
        let (s, _) = kac_flight(stream, cfg.lambda, cfg.c, cfg.t, 1.0)?;
        Ok(0.5 * (cfg.initial.eval(x + s) + cfg.initial.eval(x - s)))
    })
}

/// Velocity-resolved densities on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticState {
    pub grid: PeriodicGrid,
    pub p_plus: Vec<f64>,
    pub p_minus: Vec<f64>,
}

impl KineticState {
    /// `p₊ = p₋ = f / 2`, the kinetic lift of `(u, ∂_t u) = (f, 0)`.
    pub fn from_profile(grid: PeriodicGrid, f: &Profile) -> Self {
        let half: Vec<f64> = grid.sample(|x| 0.5 * f.eval(x));
        Self {
            grid,
            p_plus: half.clone(),
            p_minus: half,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.p_plus.len() == self.grid.n && self.p_minus.len() == self.grid.n,
            || format!(
                "density lengths ({}, {}) do not match grid size {}",
                self.p_plus.len(),
                self.p_minus.len(),
                self.grid.n
            ),
        )
    }

    /// `u = p₊ + p₋`
    pub fn density(&self) -> Vec<f64> {
        self.p_plus.iter().zip(&self.p_minus).map(|(a, b)| a + b).collect()
    }

    pub fn mass(&self) -> f64 {
        let s: f64 = self.p_plus.iter().chain(&self.p_minus).sum();
        s * self.grid.dx()
    }
}

fn step_count(t: f64, dt: f64, what: &str) -> Result<usize> {
    let steps = (t / dt).round();
    if steps < 1.0 || ((steps * dt - t).abs() > 1e-9 * t) {
        return Err(invalid(format!("{what} = {t} is not a positive multiple of dt = {dt}")));
    }
    Ok(steps as usize)
}

fn check_step(state: &KineticState, cfg: &TelegrapherConfig, dt: f64) -> Result<f64> {
    cfg.validate()?;
    state.validate()?;
    ensure(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
    let dx = state.grid.dx();
    let courant = cfg.c * dt / dx;
    if courant > 1.0 + 1e-12 {
        return Err(invalid(format!(
            "CFL condition c*dt <= dx violated: c*dt = {} > dx = {dx}",
            cfg.c * dt
        )));
    }
    if cfg.lambda * dt > 1.0 {
        return Err(invalid(format!(
            "relaxation bound lambda*dt <= 1 violated: lambda*dt = {}",
            cfg.lambda * dt
        )));
    }
    // unit Courant number is exact transport; snap the rounding
    Ok(if (courant - 1.0).abs() <= 1e-12 { 1.0 } else { courant })
}

fn evolve_steps(state: &KineticState, lambda: f64, courant: f64, dt: f64, steps: usize) -> KineticState {
    let n = state.grid.n;
    let mut plus = state.p_plus.clone();
    let mut minus = state.p_minus.clone();
    let mut next_plus = vec![0.0; n];
    let mut next_minus = vec![0.0; n];
    let stay = 1.0 - courant;
    let decay = (-2.0 * lambda * dt).exp();
    for _ in 0..steps {
        for i in 0..n {
            let left = if i == 0 { n - 1 } else { i - 1 };
            let right = if i + 1 == n { 0 } else { i + 1 };
            next_plus[i] = stay * plus[i] + courant * plus[left];
            next_minus[i] = stay * minus[i] + courant * minus[right];
        }
        std::mem::swap(&mut plus, &mut next_plus);
        std::mem::swap(&mut minus, &mut next_minus);
        if lambda > 0.0 {
            for (a, b) in plus.iter_mut().zip(minus.iter_mut()) {
                let sum = *a + *b;
                let diff = (*a - *b) * decay;
                *a = 0.5 * (sum + diff);
                *b = 0.5 * (sum - diff);
            }
        }
    }
    KineticState {
        grid: state.grid,
        p_plus: plus,
        p_minus: minus,
    }
}

/// Evolve `state0` to `cfg.t` with step `dt`.
pub fn solve_kinetic_fd(state0: &KineticState, cfg: &TelegrapherConfig, dt: f64) -> Result<KineticState> {
    let courant = check_step(state0, cfg, dt)?;
    let steps = step_count(cfg.t, dt, "t")?;
    Ok(evolve_steps(state0, cfg.lambda, courant, dt, steps))
}

/// Max abs deviation between evolving `t + s` in one run and evolving `s`
/// then `t`, on the same grid and step.
pub fn check_chapman_kolmogorov(
    cfg: &TelegrapherConfig,
    t: f64,
    s: f64,
    state0: &KineticState,
    dt: f64,
) -> Result<f64> {
    let courant = check_step(state0, cfg, dt)?;
    let nt = step_count(t, dt, "t")?;
    let ns = step_count(s, dt, "s")?;
    let direct = evolve_steps(state0, cfg.lambda, courant, dt, nt + ns);
    let mid = evolve_steps(state0, cfg.lambda, courant, dt, ns);
    let composed = evolve_steps(&mid, cfg.lambda, courant, dt, nt);
    let dev = direct
        .p_plus
        .iter()
        .zip(&composed.p_plus)
        .chain(direct.p_minus.iter().zip(&composed.p_minus))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(dev)
}
