//! Total variation of oscillatory densities `e^{iΦ(x)} dx`.
//!
//! [`tv_refinement`] evaluates `Σ_k |∫_{D_k} e^{iΦ}|` over dyadic partitions of
//! an interval. The finest cells are integrated adaptively and coarser levels
//! are formed by summing children, so every level is built from the same cell
//! integrals and refinement can only increase the sum.
//!
//! [`tv_regularized`] computes `|μ_ε|(ℝ) = ∫ |e^{iΦ(x)} χ(εx)| dx`, which
//! equals `ε^{-1} ‖χ‖₁` and so diverges as the cutoff is removed.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure, Error, Result};
use crate::quadrature::{integrate_adaptive, integrate_real};
use crate::stats::fit_slope;

pub const MAX_TV_DEPTH: u32 = 24;

#[derive(Clone)]
pub struct PhaseFunctional {
    pub phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub label: String,
}

impl fmt::Debug for PhaseFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PhaseFunctional({})", self.label)
    }
}

impl PhaseFunctional {
    pub fn new(label: impl Into<String>, phi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            phi: Arc::new(phi),
            label: label.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| 0.0)
    }

    pub fn quadratic() -> Self {
        Self::new("x^2", |x| x * x)
    }

    pub fn density(&self, x: f64) -> Complex64 {
        Complex64::from_polar(1.0, (self.phi)(x))
    }
}

/// Partial sums `Σ_k |μ(D_k)|` for the `2^j`-cell dyadic partitions of
/// `[a, b]`, `j = 0..=depth`.
pub fn tv_refinement(phase: &PhaseFunctional, a: f64, b: f64, depth: u32) -> Result<Vec<f64>> {
    ensure(a.is_finite() && b.is_finite() && b > a, || format!("need a < b, got [{a}, {b}]"))?;
    ensure(depth <= MAX_TV_DEPTH, || format!("depth {depth} exceeds {MAX_TV_DEPTH}"))?;
    let cells = 1usize << depth;
    let h = (b - a) / cells as f64;
    let tol = 1e-14 * h;
    let mut level: Vec<Complex64> = (0..cells)
        .into_par_iter()
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == cells { b } else { a + (i + 1) as f64 * h };
            integrate_adaptive(|x| phase.density(x), lo, hi, tol, 50).map_err(|e| match e {
                Error::Quadrature { reason, .. } => Error::Quadrature { panel: i, reason },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let mut sums = vec![0.0; depth as usize + 1];
    for j in (0..=depth as usize).rev() {
        sums[j] = level.iter().map(|z| z.norm()).sum();
        if j > 0 {
            level = level.chunks(2).map(|p| p[0] + p[1]).collect();
        }
    }
    Ok(sums)
}

/// Cutoff function `χ` with its known `L¹` norm and support half-width.
#[derive(Clone)]
pub struct Bump {
    pub label: String,
    pub chi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub l1_norm: f64,
    pub support: f64,
}

impl fmt::Debug for Bump {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bump({}, |chi|_1 = {})", self.label, self.l1_norm)
    }
}

impl Bump {
    /// `exp(−1/(1 − u²))` on `(−1, 1)`.
    pub fn smooth() -> Self {
        Self {
            label: "smooth".into(),
            chi: Arc::new(|u: f64| {
                if u.abs() < 1.0 {
                    (-1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }),
            l1_norm: 0.443_993_816_168_079_4,
            support: 1.0,
        }
    }

    /// `exp(−u²)`, truncated where it drops below `e^{-900}`.
    pub fn gaussian() -> Self {
        Self {
            label: "gaussian".into(),
            chi: Arc::new(|u: f64| (-u * u).exp()),
            l1_norm: std::f64::consts::PI.sqrt(),
            support: 30.0,
        }
    }
}

const TV_PANELS: usize = 64;

/// `∫ |e^{iΦ(x)} χ(εx)| dx`, checked against `ε^{-1} ‖χ‖₁` to 1e-8 relative.
pub fn tv_regularized(eps: f64, chi: &Bump, phase: &PhaseFunctional) -> Result<f64> {
    ensure(eps > 0.0 && eps.is_finite(), || format!("eps must be positive, got {eps}"))?;
    let half = chi.support / eps;
    let h = 2.0 * half / TV_PANELS as f64;
    let integrand = |x: f64| (phase.density(x) * (chi.chi)(eps * x)).norm();
    let mut total = 0.0;
    for i in 0..TV_PANELS {
        let lo = -half + i as f64 * h;
        total += integrate_real(integrand, lo, lo + h, 1e-13 * chi.l1_norm / eps / TV_PANELS as f64, 50)?;
    }
    let closed = chi.l1_norm / eps;
    if ((total - closed) / closed).abs() > 1e-8 {
        return Err(Error::Numeric(format!(
            "regularized total variation {total} disagrees with closed form {closed}"
        )));
    }
    Ok(total)
}

/// `tv_regularized` over `ε = 2^0 … 2^{-levels}` and the log-log slope of
/// the result against `ε`.
pub fn tv_regularized_ladder(levels: u32, chi: &Bump, phase: &PhaseFunctional) -> Result<(Vec<(f64, f64)>, f64)> {
    let ladder: Vec<(f64, f64)> = (0..=levels)
        .map(|j| {
            let eps = 0.5_f64.powi(j as i32);
            tv_regularized(eps, chi, phase).map(|v| (eps, v))
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = ladder.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = ladder.iter().map(|(_, v)| v.ln()).collect();
    Ok((ladder, fit_slope(&xs, &ys)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_phase_has_no_cancellation() {
        let sums = tv_refinement(&PhaseFunctional::zero(), 0.0, 20.0, 10).unwrap();
        assert!(sums.iter().all(|s| (s - 20.0).abs() <= 1e-12 * 20.0));
    }

    #[test]
    fn oscillation_cancels_at_coarse_levels() {
        let sums = tv_refinement(&PhaseFunctional::quadratic(), 0.0, 20.0, 12).unwrap();
        assert!(sums[0] < 2.0);
        assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        assert!(sums[12] <= 20.0 * (1.0 + 1e-12));
    }

    #[test]
    fn argument_checks() {
        let p = PhaseFunctional::zero();
        assert!(tv_refinement(&p, 1.0, 1.0, 2).is_err());
        assert!(tv_refinement(&p, 0.0, 1.0, 25).is_err());
        assert!(tv_regularized(0.0, &Bump::smooth(), &p).is_err());
    }

    #[test]
    fn bumps_have_their_stated_norms() {
        for bump in [Bump::smooth(), Bump::gaussian()] {
            let v = tv_regularized(1.0, &bump, &PhaseFunctional::zero()).unwrap();
            assert!((v - bump.l1_norm).abs() < 1e-12);
        }
    }

    #[test]
    fn halving_eps_doubles_variation() {
        let p = PhaseFunctional::quadratic();
        let b = Bump::smooth();
        let a = tv_regularized(0.25, &b, &p).unwrap();
        let c = tv_regularized(0.125, &b, &p).unwrap();
        assert!((c / a - 2.0).abs() < 1e-10);
    }
}
