//! Truncated Fresnel integral `∫_{−R}^{R} e^{ix²} dx`.
//!
//! The half line is cut at the stationary-phase nodes `√(kπ)`. The first
//! panel `[0, √π]` is integrated in `x`; every later panel is integrated in
//! `v = x²`, where it becomes `(−1)^k ∫₀^π e^{iw} / (2√(kπ + w)) dw` and the
//! phase is exact. Each panel uses a 24-point Gauss–Legendre rule and panel
//! values are accumulated with compensated summation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{ensure, Result};
use crate::quadrature::{CompensatedSum, GaussRule};

const PANEL_ORDER: usize = 24;

/// `e^{iπ/4} √π`, the conditional limit as `R → ∞`.
pub fn fresnel_limit() -> Complex64 {
    Complex64::from_polar(PI.sqrt(), PI / 4.0)
}

/// Panel integrals of `e^{ix²}` over `[√(kπ), √((k+1)π)] ∩ [0, R]`, in
/// order of `k`. Their sum is `∫₀^R e^{ix²} dx`.
pub fn fresnel_panels(r: f64) -> Result<Vec<Complex64>> {
    ensure(r >= 0.0 && r.is_finite(), || format!("truncation radius must be finite and nonnegative, got {r}"))?;
    if r == 0.0 {
        return Ok(Vec::new());
    }
    let rule = GaussRule::new(PANEL_ORDER);
    let r2 = r * r;
    let mut panels = Vec::with_capacity((r2 / PI) as usize + 2);
    let first_end = r.min(PI.sqrt());
    panels.push(rule.integrate_complex(0.0, first_end, |x| Complex64::from_polar(1.0, x * x)));
    let mut k = 1u64;
    loop {
        let v0 = k as f64 * PI;
        if v0 >= r2 {
            break;
        }
        let width = (r2 - v0).min(PI);
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let val = rule.integrate_complex(0.0, width, |w| Complex64::from_polar(0.5 / (v0 + w).sqrt(), w));
        panels.push(val * parity);
        k += 1;
    }
    Ok(panels)
}

/// `∫_{−R}^{R} e^{ix²} dx`.
pub fn fresnel_truncated(r: f64) -> Result<Complex64> {
    let mut sum = CompensatedSum::default();
    for p in fresnel_panels(r)? {
        sum.add(p);
    }
    Ok(sum.value() * 2.0)
}
