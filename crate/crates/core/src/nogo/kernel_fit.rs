//! Best nonnegative translation-invariant kernel for a propagator.
//!
//! A fixed library of eight band-limited initial conditions on the periodic
//! interval of length [`FIT_LENGTH`] is propagated exactly. The kernel row
//! `p ≥ 0` minimizes `½ Σ_j ‖p ⊛ u_j − y_j‖²`, solved by projected gradient
//! with step `1/λ_max(AᵀA)`. All products with `A` and `Aᵀ` are circulant and
//! done by FFT.

use num_complex::Complex64;

use crate::dirac::DiracParams;
use crate::error::{ensure, Result};
use crate::spectral::{Fourier, PeriodicGrid};

pub const FIT_LENGTH: f64 = 4.0;
pub const LIBRARY_SIZE: usize = 8;
pub const MAX_ITERATIONS: usize = 100_000;
pub const GRADIENT_TOL: f64 = 1e-8;
const POWER_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagator {
    Heat,
    /// Real part of the upper-left entry of the Dirac propagator.
    DiracComponent { m: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelFitReport {
    pub grid_n: usize,
    pub t: f64,
    pub residual_rel: f64,
    pub kernel_min: f64,
    pub converged: bool,
    pub iterations: usize,
    /// `p_l` is the weight at offset `l·dx` (indices past `n/2` wrap to negative offsets).
    pub kernel: Vec<f64>,
}

/// Library element `j`: `1` for `j = 0`, else `cos(2πjx/L + 0.3j)`.
pub fn library_function(j: usize, x: f64) -> f64 {
    if j == 0 {
        1.0
    } else {
        let jf = j as f64;
        (2.0 * std::f64::consts::PI * jf * x / FIT_LENGTH + 0.3 * jf).cos()
    }
}

/// Library inputs `u_j` and exact propagated targets `y_j` on the fit grid.
pub fn kernel_fit_data(propagator: Propagator, t: f64, grid_n: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    ensure(t >= 0.0 && t.is_finite(), || format!("time must be nonnegative, got {t}"))?;
    ensure(grid_n.is_power_of_two() && (16..=1024).contains(&grid_n), || {
        format!("grid_n must be a power of two in 16..=1024, got {grid_n}")
    })?;
    let grid = PeriodicGrid::new(FIT_LENGTH, grid_n)?;
    let fourier = Fourier::new(grid_n);
    let dirac = match propagator {
        Propagator::DiracComponent { m } => Some(DiracParams::new(m)?),
        Propagator::Heat => None,
    };
    let mut inputs = Vec::with_capacity(LIBRARY_SIZE);
    let mut targets = Vec::with_capacity(LIBRARY_SIZE);
    for j in 0..LIBRARY_SIZE {
        let u = grid.sample(|x| library_function(j, x));
        let mut buf = fourier.forward_real(&u);
        for (i, z) in buf.iter_mut().enumerate() {
            let k = grid.wavenumber(i);
            *z *= match &dirac {
                None => Complex64::new((-k * k * t).exp(), 0.0),
                Some(p) => p.mode_propagator(k, t)[0][0],
            };
        }
        fourier.inverse(&mut buf);
        inputs.push(u);
        targets.push(buf.into_iter().map(|z| z.re).collect());
    }
    Ok((inputs, targets))
}

/// `(p ⊛ u)_i = Σ_l p_l u_{i−l}` with periodic indices.
pub fn circular_convolve(p: &[f64], u: &[f64]) -> Vec<f64> {
    let n = p.len();
    (0..n).map(|i| (0..n).map(|l| p[l] * u[(i + n - l) % n]).sum()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn nnls_kernel_fit(propagator: Propagator, t: f64, grid_n: usize) -> Result<KernelFitReport> {
    let (inputs, targets) = kernel_fit_data(propagator, t, grid_n)?;
    let n = grid_n;
    let fourier = Fourier::new(n);
    let u_hat: Vec<Vec<Complex64>> = inputs.iter().map(|u| fourier.forward_real(u)).collect();
    let y_hat: Vec<Vec<Complex64>> = targets.iter().map(|y| fourier.forward_real(y)).collect();
    // AᵀA has symbol S, Aᵀy has transform B
    let s: Vec<f64> = (0..n).map(|k| u_hat.iter().map(|u| u[k].norm_sqr()).sum()).collect();
    let b: Vec<Complex64> = (0..n)
        .map(|k| u_hat.iter().zip(&y_hat).map(|(u, y)| u[k].conj() * y[k]).sum())
        .collect();

    let apply_normal = |v: &[f64]| -> Vec<f64> {
        let mut buf = fourier.forward_real(v);
        for (z, sk) in buf.iter_mut().zip(&s) {
            *z *= *sk;
        }
        fourier.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    };
    let gradient = |p: &[f64]| -> Vec<f64> {
        let mut buf = fourier.forward_real(p);
        for ((z, sk), bk) in buf.iter_mut().zip(&s).zip(&b) {
            *z = *z * *sk - bk;
        }
        fourier.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    };

    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7).sin()).collect();
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let w = apply_normal(&v);
        let nv = norm(&v);
        lambda = v.iter().zip(&w).map(|(a, c)| a * c).sum::<f64>() / (nv * nv);
        let nw = norm(&w);
        v = w.into_iter().map(|x| x / nw).collect();
    }
    let step = 1.0 / lambda;

    let mut p = vec![0.0; n];
    let g0 = norm(&gradient(&p));
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        let g = gradient(&p);
        let projected: f64 = p
            .iter()
            .zip(&g)
            .map(|(&pi, &gi)| if pi > 0.0 { gi * gi } else { gi.min(0.0).powi(2) })
            .sum::<f64>()
            .sqrt();
        if projected <= GRADIENT_TOL * g0 {
            converged = true;
            break;
        }
        for (pi, gi) in p.iter_mut().zip(&g) {
            *pi = (*pi - step * gi).max(0.0);
        }
        iterations += 1;
    }

    let mut misfit = 0.0;
    let mut scale = 0.0;
    for (u, y) in inputs.iter().zip(&targets) {
        let fit = circular_convolve(&p, u);
        misfit += fit.iter().zip(y).map(|(a, c)| (a - c).powi(2)).sum::<f64>();
        scale += y.iter().map(|c| c * c).sum::<f64>();
    }
    Ok(KernelFitReport {
        grid_n,
        t,
        residual_rel: (misfit / scale).sqrt(),
        kernel_min: p.iter().cloned().fold(f64::INFINITY, f64::min),
        converged,
        iterations,
        kernel: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_at_time_zero_is_the_identity() {
        let r = nnls_kernel_fit(Propagator::Heat, 0.0, 32).unwrap();
        assert!(r.converged);
        assert!(r.residual_rel < 1e-7);
        assert!(r.kernel_min >= 0.0);
    }

    #[test]
    fn grid_checks() {
        assert!(nnls_kernel_fit(Propagator::Heat, 0.5, 100).is_err());
        assert!(nnls_kernel_fit(Propagator::Heat, 0.5, 2048).is_err());
        assert!(nnls_kernel_fit(Propagator::Heat, -1.0, 64).is_err());
    }

    #[test]
    fn convolution_with_delta() {
        let mut p = vec![0.0; 8];
        p[1] = 1.0;
        let u: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert_eq!(circular_convolve(&p, &u), vec![7.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }
}
