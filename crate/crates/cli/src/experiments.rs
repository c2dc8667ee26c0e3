//! One runner per experiment. Each returns a table for the CSV and a JSON
//! summary for the run record.

use num_complex::Complex64;
use pathlab_core::dirac::{
    dirac_evolve, identity, kernel_pairing, mat_add, mat_max_abs, mat_scale, sigma1, sigma3, DiracParams, SpinorGrid,
};
use pathlab_core::feynman_kac::{heat_reference, solve_parabolic_mc, ParabolicProblem, Potential};
use pathlab_core::kg::{kg_semigroup_mc, kg_semigroup_spectral, KgProblem};
use pathlab_core::nogo::{
    bochner_gram_min_eig, fresnel_limit, fresnel_truncated, levy_seed_study, nnls_kernel_fit, tv_refinement,
    tv_regularized_ladder, Propagator,
};
use pathlab_core::stats::fit_slope;
use pathlab_core::telegrapher::{solve_kinetic_fd, solve_telegrapher_mc, KineticState, TelegrapherConfig};
use pathlab_core::{PeriodicGrid, RngStream};
use serde_json::{json, Value};

use crate::config::{
    params, BochnerParams, DiracRunParams, Experiment, FresnelParams, GammaSpec, HeatParams, KernelFitParams, KgParams,
    LevyParams, RunConfig, TelegrapherParams, TvParams,
};
use crate::CliError;

#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$(Cell::from($x)),*] };
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(Cell::render).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }
}

pub struct Outcome {
    pub table: Table,
    pub summary: Value,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.experiment {
        Experiment::Heat => heat(cfg),
        Experiment::Telegrapher => telegrapher(cfg),
        Experiment::Dirac => dirac(cfg),
        Experiment::Kg => kg(cfg),
        Experiment::NogoFresnel => fresnel(cfg),
        Experiment::NogoTv => tv(cfg),
        Experiment::NogoBochner => bochner(cfg),
        Experiment::NogoKernelFit => kernel_fit(cfg),
        Experiment::NogoLevy => levy(cfg),
        Experiment::Report => Err(CliError::Config("experiment: report is not a solver run".into())),
    }
}

fn nonempty<T>(v: &[T], key: &str) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::Config(format!("params.{key}: must not be empty")));
    }
    Ok(())
}

fn nearest_index(grid: PeriodicGrid, x: f64) -> usize {
    let j = ((x - grid.x(0)) / grid.dx()).round() as i64;
    j.rem_euclid(grid.n as i64) as usize
}

fn heat(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: HeatParams = params(cfg)?;
    nonempty(&p.points, "points")?;
    let prob = ParabolicProblem {
        c2: p.c2,
        potential: p.potential.build(),
        initial: p.initial.build(),
        t: p.t,
    };
    let root = RngStream::new(cfg.seed, 0);
    let mut table = Table::new(&["x", "estimate", "std_error", "n_paths", "reference"]);
    let mut worst_sigma: f64 = 0.0;
    for (i, &x) in p.points.iter().enumerate() {
        let est = solve_parabolic_mc(&prob, x, p.n_paths, p.n_steps, &root.substream(i as u64))?;
        let reference = match prob.potential {
            Potential::Zero => heat_reference(&prob, x)?,
            Potential::Constant(v) => {
                let free = ParabolicProblem {
                    potential: Potential::Zero,
                    ..prob.clone()
                };
                (-v * p.t).exp() * heat_reference(&free, x)?
            }
            _ => f64::NAN,
        };
        if reference.is_finite() {
            let dev = (est.mean - reference).abs();
            worst_sigma = worst_sigma.max(if est.std_error > 0.0 {
                dev / est.std_error
            } else if dev == 0.0 {
                0.0
            } else {
                f64::INFINITY
            });
        }
        table.rows.push(row![x, est.mean, est.std_error, p.n_paths, reference]);
    }
    let summary = json!({
        "points": p.points.len(),
        "max_reference_deviation_sigma": worst_sigma,
    });
    Ok(Outcome { table, summary })
}

fn fd_density(cfg: &TelegrapherConfig, length: f64, cells: usize, points: &[f64]) -> Result<Vec<f64>, CliError> {
    let grid = PeriodicGrid::new(length, cells)?;
    let state = KineticState::from_profile(grid, &cfg.initial);
    let u = solve_kinetic_fd(&state, cfg, grid.dx() / cfg.c)?.density();
    Ok(points.iter().map(|&x| u[nearest_index(grid, x)]).collect())
}

fn telegrapher(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: TelegrapherParams = params(cfg)?;
    nonempty(&p.points, "points")?;
    let tc = TelegrapherConfig {
        lambda: p.lambda,
        c: p.c,
        t: p.t,
        initial: p.initial.build(),
    };
    let coarse = fd_density(&tc, p.cell_length, p.fd_cells, &p.points)?;
    let fine = fd_density(&tc, p.cell_length, 2 * p.fd_cells, &p.points)?;
    let root = RngStream::new(cfg.seed, 0);
    let mut table = Table::new(&["x", "mc_estimate", "std_error", "fd_coarse", "fd_fine", "fd_budget"]);
    let mut sup_dev: f64 = 0.0;
    let mut all_within = true;
    for (i, &x) in p.points.iter().enumerate() {
        let est = solve_telegrapher_mc(&tc, x, p.n_paths, &root.substream(i as u64))?;
        let budget = (coarse[i] - fine[i]).abs();
        let dev = (est.mean - fine[i]).abs();
        sup_dev = sup_dev.max(dev);
        all_within &= dev <= (3.0 * est.std_error).max(budget).max(1e-12);
        table.rows.push(row![x, est.mean, est.std_error, coarse[i], fine[i], budget]);
    }
    let summary = json!({
        "sup_deviation": sup_dev,
        "within_tolerance": all_within,
    });
    Ok(Outcome { table, summary })
}

fn dirac(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: DiracRunParams = params(cfg)?;
    let grid = PeriodicGrid::new(p.cell_length, p.n)?;
    let dp = DiracParams::new(p.m)?;
    let state = SpinorGrid::from_fn(grid, |x| {
        let g = (-x * x).exp();
        [Complex64::new(g, 0.3 * x * g), Complex64::new(0.5 * (-(x - 1.0).powi(2)).exp(), 0.0)]
    });
    let mut table = Table::new(&["kind", "t", "value"]);
    let n0 = state.norm();
    let mut cur = state.clone();
    let mut max_drift: f64 = 0.0;
    for step in 1..=p.steps {
        cur = dirac_evolve(&cur, &dp, p.dt)?;
        let drift = (cur.norm() / n0 - 1.0).abs();
        max_drift = max_drift.max(drift);
        table.rows.push(row!["norm_drift", step as f64 * p.dt, drift]);
    }
    let total = p.steps as f64 * p.dt;
    let direct = dirac_evolve(&state, &dp, total)?;
    let group_dev = direct.max_abs_diff(&cur);
    table.rows.push(row!["group_law", total, group_dev]);

    let phi = |x: f64| (-(x - 0.3) * (x - 0.3)).exp();
    let dphi0 = 0.6 * phi(0.0);
    let mut residuals = Vec::new();
    for &t in &p.pairing_times {
        let k = kernel_pairing(phi, &dp, t, grid)?;
        let lead = mat_add(
            &mat_add(
                &mat_scale(&identity(), Complex64::new(phi(0.0), 0.0)),
                &mat_scale(&sigma3(), Complex64::new(t * dphi0, 0.0)),
            ),
            &mat_scale(&sigma1(), Complex64::new(0.0, -t * p.m * phi(0.0))),
        );
        let r = mat_max_abs(&mat_add(&k, &mat_scale(&lead, Complex64::new(-1.0, 0.0))));
        residuals.push(r);
        table.rows.push(row!["pairing_residual", t, r]);
    }
    let slope = if residuals.len() >= 2 && residuals.iter().all(|r| *r > 0.0) {
        let xs: Vec<f64> = p.pairing_times.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
        Value::from(fit_slope(&xs, &ys))
    } else {
        Value::Null
    };
    let summary = json!({
        "max_norm_drift": max_drift,
        "group_law_deviation": group_dev,
        "pairing_slope": slope,
    });
    Ok(Outcome { table, summary })
}

fn kg(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: KgParams = params(cfg)?;
    nonempty(&p.points, "points")?;
    let prob = KgProblem {
        m: p.m,
        t: p.t,
        initial: p.initial.build(),
        points: p.points.clone(),
    };
    let grid = PeriodicGrid::new(p.cell_length, p.n)?;
    let spectral = kg_semigroup_spectral(&prob, grid)?;
    let root = RngStream::new(cfg.seed, 0);
    let mut table = Table::new(&["x", "mc_estimate", "std_error", "spectral"]);
    let mut worst_sigma: f64 = 0.0;
    for (i, &x) in p.points.iter().enumerate() {
        let j = nearest_index(grid, x);
        let xg = grid.x(j);
        let est = kg_semigroup_mc(&prob, xg, p.n_paths, &root.substream(i as u64))?;
        if est.std_error > 0.0 {
            worst_sigma = worst_sigma.max((est.mean - spectral[j]).abs() / est.std_error);
        }
        table.rows.push(row![xg, est.mean, est.std_error, spectral[j]]);
    }
    let summary = json!({ "max_deviation_sigma": worst_sigma });
    Ok(Outcome { table, summary })
}

fn fresnel(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: FresnelParams = params(cfg)?;
    nonempty(&p.radii, "radii")?;
    let limit = fresnel_limit();
    let mut table = Table::new(&["r", "re", "im", "abs_error", "r_times_error"]);
    let mut worst_scaled: f64 = 0.0;
    for &r in &p.radii {
        let v = fresnel_truncated(r)?;
        let err = (v - limit).norm();
        worst_scaled = worst_scaled.max(r * err);
        table.rows.push(row![r, v.re, v.im, err, r * err]);
    }
    let summary = json!({
        "limit_re": limit.re,
        "limit_im": limit.im,
        "max_r_times_error": worst_scaled,
    });
    Ok(Outcome { table, summary })
}

fn tv(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: TvParams = params(cfg)?;
    let phase = p.phase.build();
    let bump = p.bump.build();
    let refinement = tv_refinement(&phase, p.a, p.b, p.depth)?;
    let (ladder, slope) = tv_regularized_ladder(p.eps_levels, &bump, &phase)?;
    let mut table = Table::new(&["series", "level", "param", "value"]);
    for (d, v) in refinement.iter().enumerate() {
        table.rows.push(row!["refinement", d, (1u64 << d) as f64, *v]);
    }
    for (j, (eps, v)) in ladder.iter().enumerate() {
        table.rows.push(row!["regularized", j, *eps, *v]);
    }
    table.rows.push(row!["slope", p.eps_levels as usize, f64::NAN, slope]);
    let monotone = refinement.windows(2).all(|w| w[1] >= w[0]);
    let summary = json!({
        "phase": phase.label,
        "bump": bump.label,
        "interval_length": p.b - p.a,
        "terminal": refinement.last().copied(),
        "monotone": monotone,
        "slope": slope,
    });
    Ok(Outcome { table, summary })
}

fn gamma(kind: GammaSpec) -> fn(f64) -> Complex64 {
    match kind {
        GammaSpec::Gaussian => |x| Complex64::new((-x * x / 2.0).exp(), 0.0),
        GammaSpec::Fresnel => |x| Complex64::from_polar(1.0, x * x),
        GammaSpec::Constant => |_| Complex64::new(1.0, 0.0),
    }
}

fn gamma_name(kind: GammaSpec) -> &'static str {
    match kind {
        GammaSpec::Gaussian => "gaussian",
        GammaSpec::Fresnel => "fresnel",
        GammaSpec::Constant => "constant",
    }
}

fn bochner(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: BochnerParams = params(cfg)?;
    nonempty(&p.gammas, "gammas")?;
    let mut table = Table::new(&["gamma", "nodes", "min_eigenvalue", "residual", "hermitian_defect"]);
    let mut summary = serde_json::Map::new();
    for &g in &p.gammas {
        let rep = bochner_gram_min_eig(gamma(g), &p.nodes)?;
        table.rows.push(row![
            gamma_name(g),
            rep.matrix_dim,
            rep.min_eigenvalue,
            rep.residual,
            rep.hermitian_defect
        ]);
        summary.insert(format!("{}_min_eigenvalue", gamma_name(g)), Value::from(rep.min_eigenvalue));
    }
    summary.insert("nodes".into(), Value::from(p.nodes.len()));
    Ok(Outcome {
        table,
        summary: Value::Object(summary),
    })
}

fn kernel_fit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: KernelFitParams = params(cfg)?;
    nonempty(&p.grid_n, "grid_n")?;
    let mut table = Table::new(&["propagator", "grid_n", "t", "residual_rel", "kernel_min", "converged", "iterations"]);
    let mut heat_max: f64 = 0.0;
    let mut dirac_min = f64::INFINITY;
    let mut all_converged = true;
    for &n in &p.grid_n {
        for (name, prop) in [("heat", Propagator::Heat), ("dirac", Propagator::DiracComponent { m: p.m })] {
            let fit = nnls_kernel_fit(prop, p.t, n)?;
            all_converged &= fit.converged;
            match prop {
                Propagator::Heat => heat_max = heat_max.max(fit.residual_rel),
                Propagator::DiracComponent { .. } => dirac_min = dirac_min.min(fit.residual_rel),
            }
            table.rows.push(row![
                name,
                n,
                p.t,
                fit.residual_rel,
                fit.kernel_min,
                fit.converged as usize,
                fit.iterations
            ]);
        }
    }
    let summary = json!({
        "heat_max_residual": heat_max,
        "dirac_min_residual": dirac_min,
        "all_converged": all_converged,
    });
    Ok(Outcome { table, summary })
}

fn levy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p: LevyParams = params(cfg)?;
    let stats = levy_seed_study(&RngStream::new(cfg.seed, 0), p.n_seeds, p.n_grid)?;
    let mut table = Table::new(&["seed_index", "ratio", "quotient_slope"]);
    for (i, s) in stats.iter().enumerate() {
        table.rows.push(row![i, s.ratio, s.quotient_slope]);
    }
    let k = stats.len() as f64;
    let ratios = stats.iter().map(|s| s.ratio);
    let summary = json!({
        "n_grid": p.n_grid,
        "n_seeds": p.n_seeds,
        "mean_ratio": ratios.clone().sum::<f64>() / k,
        "min_ratio": ratios.clone().fold(f64::INFINITY, f64::min),
        "max_ratio": ratios.fold(f64::NEG_INFINITY, f64::max),
        "mean_quotient_slope": stats.iter().map(|s| s.quotient_slope).sum::<f64>() / k,
    });
    Ok(Outcome { table, summary })
}
