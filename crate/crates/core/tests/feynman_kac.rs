use pathlab_core::feynman_kac::{heat_reference, solve_parabolic_mc, solve_parabolic_mc_ladder, ParabolicProblem, Potential};
use pathlab_core::stats::fit_slope;
use pathlab_core::{Profile, RngStream};

fn gaussian_problem(potential: Potential) -> ParabolicProblem {
    ParabolicProblem {
        c2: 0.5,
        potential,
        initial: Profile::gaussian(0.2, 0.8),
        t: 0.7,
    }
}

/// `N(c, w²)` bump against the kernel of variance `2 c2 t`.
fn gaussian_closed_form(p: &ParabolicProblem, x: f64) -> f64 {
    let (c, w) = (0.2, 0.8);
    let var = 2.0 * p.c2 * p.t + w * w;
    w / var.sqrt() * (-(x - c) * (x - c) / (2.0 * var)).exp()
}

#[test]
fn free_heat_matches_closed_form() {
    let p = gaussian_problem(Potential::Zero);
    for (i, &x) in [-1.0, 0.0, 0.5, 1.7].iter().enumerate() {
        let exact = gaussian_closed_form(&p, x);
        assert!((heat_reference(&p, x).unwrap() - exact).abs() < 1e-13);
        let est = solve_parabolic_mc(&p, x, 100_000, 4, &RngStream::new(21, i as u64)).unwrap();
        assert!(est.within_sigma(exact, 3.0), "x={x}: {} ± {} vs {exact}", est.mean, est.std_error);
    }
}

#[test]
fn constant_potential_discounts_exactly() {
    let v = 1.3;
    let p = gaussian_problem(Potential::Constant(v));
    for (i, &x) in [-0.4, 0.9].iter().enumerate() {
        let exact = (-v * p.t).exp() * gaussian_closed_form(&p, x);
        let est = solve_parabolic_mc(&p, x, 100_000, 8, &RngStream::new(22, i as u64)).unwrap();
        assert!(est.within_sigma(exact, 3.0), "x={x}: {} ± {} vs {exact}", est.mean, est.std_error);
    }
}

#[test]
fn nonnegative_data_gives_nonnegative_estimates() {
    let p = ParabolicProblem {
        c2: 1.0,
        potential: Potential::Harmonic(0.5),
        initial: Profile::Indicator { lo: -0.5, hi: 0.5 },
        t: 1.0,
    };
    for x in [-3.0, 0.0, 2.0] {
        let est = solve_parabolic_mc(&p, x, 20_000, 16, &RngStream::new(23, 0)).unwrap();
        assert!(est.mean >= 0.0);
    }
}

#[test]
fn harmonic_potential_against_mehler() {
    // E[exp(−k∫(x + σW)²)] with σ² = 2c2 has the closed form
    // (cosh ωt)^{-1/2} exp(−x² ω tanh(ωt) / (2σ²)), ω = σ√(2k)
    let (c2, k, t, x) = (0.5_f64, 0.5_f64, 1.0_f64, 0.3_f64);
    let sigma2 = 2.0 * c2;
    let omega = (2.0 * k * sigma2).sqrt();
    let exact = (omega * t).cosh().powf(-0.5) * (-x * x * omega * (omega * t).tanh() / (2.0 * sigma2)).exp();
    let p = ParabolicProblem {
        c2,
        potential: Potential::Harmonic(k),
        initial: Profile::Constant(1.0),
        t,
    };
    let est = solve_parabolic_mc(&p, x, 100_000, 256, &RngStream::new(24, 0)).unwrap();
    assert!((est.mean - exact).abs() <= 3.0 * est.std_error + 1e-4, "{} ± {} vs {exact}", est.mean, est.std_error);
}

#[test]
fn trapezoid_bias_is_second_order() {
    let p = ParabolicProblem {
        c2: 0.5,
        potential: Potential::Harmonic(1.0),
        initial: Profile::Constant(1.0),
        t: 1.0,
    };
    let steps = [2, 4, 8, 16, 32];
    let est = solve_parabolic_mc_ladder(&p, 0.5, 100_000, &steps, &RngStream::new(25, 0)).unwrap();
    let xs: Vec<f64> = steps[..4].iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = est.windows(2).map(|w| (w[0].mean - w[1].mean).abs().ln()).collect();
    let slope = fit_slope(&xs, &ys);
    assert!((-2.4..=-1.6).contains(&slope), "bias slope {slope}");
}

#[test]
fn ladder_levels_match_direct_runs_in_distribution() {
    let p = gaussian_problem(Potential::Harmonic(0.3));
    let ladder = solve_parabolic_mc_ladder(&p, 0.1, 50_000, &[4, 8], &RngStream::new(26, 0)).unwrap();
    let direct = solve_parabolic_mc(&p, 0.1, 50_000, 8, &RngStream::new(27, 0)).unwrap();
    let se = (ladder[1].std_error.powi(2) + direct.std_error.powi(2)).sqrt();
    assert!((ladder[1].mean - direct.mean).abs() <= 4.0 * se);
    assert!(solve_parabolic_mc_ladder(&p, 0.1, 10, &[3, 8], &RngStream::new(1, 0)).is_err());
}
