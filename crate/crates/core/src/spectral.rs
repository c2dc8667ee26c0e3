//! Periodic grids and FFT plumbing for the spectral solvers.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure, Error, Result};

/// Uniform periodic grid on `[-L/2, L/2)` with `n` points; `x_j = -L/2 + j L/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    pub length: f64,
    pub n: usize,
}

impl PeriodicGrid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        ensure(length > 0.0 && length.is_finite(), || format!("domain length must be positive, got {length}"))?;
        ensure(n >= 4 && n.is_power_of_two(), || format!("grid size must be a power of two >= 4, got {n}"))?;
        Ok(Self { length, n })
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -0.5 * self.length + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Index of the grid point at `x = 0`.
    pub fn origin(&self) -> usize {
        self.n / 2
    }

    /// Angular wavenumber of FFT bin `j`; the Nyquist bin is taken as negative.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as i64;
        let j = j as i64;
        let signed = if j < n / 2 { j } else { j - n };
        2.0 * PI * signed as f64 / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }
}

/// Forward/inverse FFT pair for one grid size. The inverse is normalized.
#[derive(Clone)]
pub struct Fourier {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fourier {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    pub fn forward_real(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }
}

/// Apply a Fourier multiplier `symbol(k)` to real data on `grid`.
pub fn apply_multiplier(grid: &PeriodicGrid, fourier: &Fourier, data: &[f64], symbol: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
    let mut buf = fourier.forward_real(data);
    for (j, z) in buf.iter_mut().enumerate() {
        *z *= symbol(grid.wavenumber(j));
    }
    fourier.inverse(&mut buf);
    buf
}

/// Fraction of spectral energy above half the Nyquist wavenumber.
pub fn spectral_tail(spectrum: &[Complex64]) -> f64 {
    let n = spectrum.len();
    let total: f64 = spectrum.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = spectrum
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            let signed = if *j < n / 2 { *j } else { n - *j };
            signed > n / 4
        })
        .map(|(_, z)| z.norm_sqr())
        .sum();
    tail / total
}

/// Reject data whose spectral tail exceeds `tol`.
pub fn check_resolved(spectrum: &[Complex64], tol: f64, what: &str) -> Result<()> {
    let tail = spectral_tail(spectrum);
    if tail > tol {
        return Err(Error::Resolution(format!(
            "{what}: spectral energy fraction {tail:e} beyond half-Nyquist exceeds {tol:e}"
        )));
    }
    Ok(())
}
