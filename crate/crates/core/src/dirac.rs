//! Exact (1+1)D Dirac evolution `i∂_t ψ = (−iα∂_x + mβ) ψ` on a periodic
//! grid, with `α = σ₃` and `β = σ₁`.
//!
//! Each Fourier mode is advanced by the closed-form matrix exponential
//!
//! ```text
//! exp[−it(αk + mβ)] = cos(ωt) I − i sin(ωt)/ω (αk + mβ),   ω = √(k² + m²)
//! ```
//!
//! so evolution is exact up to FFT rounding and forms a group in `t`.

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::spectral::{check_resolved, Fourier, PeriodicGrid};

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn sigma1() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn sigma3() -> Mat2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub fn mat_scale(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

/// Largest entry modulus.
pub fn mat_max_abs(a: &Mat2) -> f64 {
    a.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParams {
    pub m: f64,
    pub alpha: Mat2,
    pub beta: Mat2,
}

impl DiracParams {
    /// `α = σ₃`, `β = σ₁`; the Clifford relations are checked on construction.
    pub fn new(m: f64) -> Result<Self> {
        ensure(m >= 0.0 && m.is_finite(), || format!("mass must be nonnegative, got {m}"))?;
        let p = Self {
            m,
            alpha: sigma3(),
            beta: sigma1(),
        };
        p.check_clifford()?;
        Ok(p)
    }

    /// `α² = β² = I` and `αβ + βα = 0`, exactly.
    pub fn check_clifford(&self) -> Result<()> {
        let a2 = mat_mul(&self.alpha, &self.alpha);
        let b2 = mat_mul(&self.beta, &self.beta);
        let anti = mat_add(&mat_mul(&self.alpha, &self.beta), &mat_mul(&self.beta, &self.alpha));
        if a2 != identity() || b2 != identity() || anti != [[ZERO; 2]; 2] {
            return Err(Error::Numeric("alpha/beta violate the Clifford relations".into()));
        }
        Ok(())
    }

    /// Per-mode propagator `exp[−it(αk + mβ)]`.
    pub fn mode_propagator(&self, k: f64, t: f64) -> Mat2 {
        let omega = (k * k + self.m * self.m).sqrt();
        let phase = omega * t;
        let sinc_t = if phase.abs() < 1e-4 {
            t * (1.0 - phase * phase / 6.0)
        } else {
            phase.sin() / omega
        };
        let gen = mat_add(
            &mat_scale(&self.alpha, Complex64::new(k, 0.0)),
            &mat_scale(&self.beta, Complex64::new(self.m, 0.0)),
        );
        mat_add(
            &mat_scale(&identity(), Complex64::new(phase.cos(), 0.0)),
            &mat_scale(&gen, -I * sinc_t),
        )
    }
}

/// Two-component field on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorGrid {
    pub grid: PeriodicGrid,
    pub psi: Vec<[Complex64; 2]>,
}

impl SpinorGrid {
    pub fn new(grid: PeriodicGrid, psi: Vec<[Complex64; 2]>) -> Result<Self> {
        let s = Self { grid, psi };
        s.validate()?;
        Ok(s)
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> [Complex64; 2]) -> Self {
        Self {
            psi: (0..grid.n).map(|j| f(grid.x(j))).collect(),
            grid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.psi.len() == self.grid.n, || {
            format!("spinor has {} points, grid has {}", self.psi.len(), self.grid.n)
        })?;
        ensure(
            self.psi.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()),
            || "spinor has non-finite entries".into(),
        )
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self.psi.iter().map(|p| p[0].norm_sqr() + p[1].norm_sqr()).sum();
        (s * self.grid.dx()).sqrt()
    }

    pub fn component(&self, c: usize) -> Vec<Complex64> {
        self.psi.iter().map(|p| p[c]).collect()
    }

    fn from_components(grid: PeriodicGrid, a: Vec<Complex64>, b: Vec<Complex64>) -> Self {
        Self {
            grid,
            psi: a.into_iter().zip(b).map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &SpinorGrid) -> f64 {
        self.psi
            .iter()
            .zip(&other.psi)
            .map(|(a, b)| (a[0] - b[0]).norm().max((a[1] - b[1]).norm()))
            .fold(0.0, f64::max)
    }
}

fn transform(state: &SpinorGrid, fourier: &Fourier) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut up = state.component(0);
    let mut down = state.component(1);
    fourier.forward(&mut up);
    fourier.forward(&mut down);
    (up, down)
}

fn evolve_with(state: &SpinorGrid, params: &DiracParams, t: f64, fourier: &Fourier) -> SpinorGrid {
    let (mut up, mut down) = transform(state, fourier);
    for j in 0..state.grid.n {
        let u = params.mode_propagator(state.grid.wavenumber(j), t);
        let (a, b) = (up[j], down[j]);
        up[j] = u[0][0] * a + u[0][1] * b;
        down[j] = u[1][0] * a + u[1][1] * b;
    }
    fourier.inverse(&mut up);
    fourier.inverse(&mut down);
    SpinorGrid::from_components(state.grid, up, down)
}

/// Evolve by time `t` (any sign).
pub fn dirac_evolve(state: &SpinorGrid, params: &DiracParams, t: f64) -> Result<SpinorGrid> {
    state.validate()?;
    ensure(t.is_finite(), || format!("evolution time must be finite, got {t}"))?;
    Ok(evolve_with(state, params, t, &Fourier::new(state.grid.n)))
}

/// Grid kernel `K(t, x) = e^{−itH} δ(x)`: column `j` is the evolution of the
/// band-limited impulse at `x = 0` placed in spinor component `j`.
pub fn kernel_columns(grid: PeriodicGrid, params: &DiracParams, t: f64) -> [SpinorGrid; 2] {
    let fourier = Fourier::new(grid.n);
    let impulse = |c: usize| {
        let mut psi = vec![[ZERO, ZERO]; grid.n];
        psi[grid.origin()][c] = Complex64::new(1.0 / grid.dx(), 0.0);
        SpinorGrid { grid, psi }
    };
    [
        evolve_with(&impulse(0), params, t, &fourier),
        evolve_with(&impulse(1), params, t, &fourier),
    ]
}

/// `⟨K(t, ·), φ⟩ = ∫ K(t, x) φ(x) dx` as a 2×2 matrix, by grid quadrature of
/// the evolved impulses against `φ`.
pub fn kernel_pairing(phi: impl Fn(f64) -> f64, params: &DiracParams, t: f64, grid: PeriodicGrid) -> Result<Mat2> {
    ensure(t.is_finite(), || format!("time must be finite, got {t}"))?;
    let samples = grid.sample(&phi);
    let peak = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let edge = samples[0].abs().max(samples[grid.n - 1].abs());
    if peak == 0.0 || edge > 1e-12 * peak {
        return Err(Error::Resolution(format!(
            "test function does not decay inside the cell: edge value {edge:e} vs peak {peak:e}"
        )));
    }
    check_resolved(&Fourier::new(grid.n).forward_real(&samples), 1e-20, "test function")?;
    let cols = kernel_columns(grid, params, t);
    let dx = grid.dx();
    let mut out = [[ZERO; 2]; 2];
    for (col, k) in cols.iter().enumerate() {
        for row in 0..2 {
            let s: Complex64 = k.psi.iter().zip(&samples).map(|(p, f)| p[row] * *f).sum();
            out[row][col] = s * dx;
        }
    }
    Ok(out)
}

/// Max-norm of `(ψ(dt) − 2ψ + ψ(−dt))/dt² − (∂²_x − m²)ψ`.
pub fn klein_gordon_residual(state: &SpinorGrid, params: &DiracParams, dt: f64) -> Result<f64> {
    state.validate()?;
    ensure(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
    let fourier = Fourier::new(state.grid.n);
    let fwd = evolve_with(state, params, dt, &fourier);
    let bwd = evolve_with(state, params, -dt, &fourier);
    let (mut up, mut down) = transform(state, &fourier);
    let m2 = params.m * params.m;
    for j in 0..state.grid.n {
        let k = state.grid.wavenumber(j);
        let symbol = -(k * k) - m2;
        up[j] *= symbol;
        down[j] *= symbol;
    }
    fourier.inverse(&mut up);
    fourier.inverse(&mut down);
    let inv = 1.0 / (dt * dt);
    let mut worst = 0.0_f64;
    for j in 0..state.grid.n {
        for (c, rhs) in [up[j], down[j]].into_iter().enumerate() {
            let second = (fwd.psi[j][c] - state.psi[j][c] * 2.0 + bwd.psi[j][c]) * inv;
            worst = worst.max((second - rhs).norm());
        }
    }
    Ok(worst)
}
