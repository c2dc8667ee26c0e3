//! Aggregation of no-go diagnostic run records into the obstruction report.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Experiment, RunConfig};
use crate::CliError;

pub const TV_SLOPE_TOL: f64 = 1e-6;
pub const TV_TERMINAL_REL_TOL: f64 = 1e-3;
pub const BOCHNER_THRESHOLD: f64 = -0.01;
pub const BOCHNER_PSD_TOL: f64 = -1e-10;
pub const DIRAC_RESIDUAL_THRESHOLD: f64 = 0.05;
pub const HEAT_RESIDUAL_TOL: f64 = 1e-3;
pub const QUOTIENT_SLOPE_BAND: (f64, f64) = (0.4, 0.6);

pub const OUT_OF_SCOPE: &str = "out of numerical scope";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub config: RunConfig,
    pub seed: u64,
    pub summary: Value,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub item: u32,
    pub obstruction: &'static str,
    pub diagnostic: &'static str,
    pub measured: Option<f64>,
    pub threshold: String,
    pub verdict: String,
    /// Experiment and seed of the record the entry was read from.
    pub source: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoGoReport {
    pub entries: Vec<Entry>,
    pub all_numeric_exhibited: bool,
}

const CATEGORIES: [(Experiment, &str); 4] = [
    (Experiment::NogoTv, "oscillatory/TV"),
    (Experiment::NogoBochner, "positive-definiteness"),
    (Experiment::NogoKernelFit, "distributional kernel"),
    (Experiment::NogoLevy, "path geometry"),
];

pub fn load_records(pattern: &str) -> Result<Vec<(PathBuf, RunRecord)>, CliError> {
    let paths = glob::glob(pattern).map_err(|e| CliError::Config(format!("records: bad glob {pattern:?}: {e}")))?;
    let mut files: Vec<PathBuf> = paths
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(format!("records: {e}")))?;
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            let rec: RunRecord =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            Ok((p, rec))
        })
        .collect()
}

fn num(summary: &Value, key: &str) -> Option<f64> {
    summary.get(key).and_then(Value::as_f64)
}

fn verdict(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

fn source(rec: &RunRecord) -> Option<String> {
    Some(format!("{} seed={}", rec.config.experiment.name(), rec.seed))
}

fn tv_entry(rec: &RunRecord) -> Entry {
    let s = &rec.summary;
    let slope = num(s, "slope");
    let terminal = num(s, "terminal");
    let length = num(s, "interval_length");
    let monotone = s.get("monotone").and_then(Value::as_bool).unwrap_or(false);
    let slope_ok = slope.is_some_and(|v| (v + 1.0).abs() <= TV_SLOPE_TOL);
    let terminal_ok = matches!((terminal, length), (Some(t), Some(l)) if t >= (1.0 - TV_TERMINAL_REL_TOL) * l);
    let mut notes = vec![format!("refinement terminal {terminal:?} of interval length {length:?}, monotone {monotone}")];
    if !terminal_ok {
        notes.push("refinement did not reach the interval length".into());
    }
    Entry {
        item: 1,
        obstruction: "oscillatory/TV",
        diagnostic: "log-log slope of regularized total variation",
        measured: slope,
        threshold: format!("-1 +/- {TV_SLOPE_TOL:e}"),
        verdict: verdict(slope_ok && terminal_ok && monotone),
        source: source(rec),
        notes,
    }
}

fn bochner_entry(rec: &RunRecord) -> Entry {
    let fresnel = num(&rec.summary, "fresnel_min_eigenvalue");
    let control = num(&rec.summary, "gaussian_min_eigenvalue");
    let mut notes = Vec::new();
    match control {
        Some(c) => notes.push(format!("gaussian control min eigenvalue {c:e}")),
        None => notes.push("gaussian control missing".into()),
    }
    let ok = fresnel.is_some_and(|v| v <= BOCHNER_THRESHOLD) && control.is_some_and(|c| c >= BOCHNER_PSD_TOL);
    Entry {
        item: 1,
        obstruction: "positive-definiteness",
        diagnostic: "minimum Gram eigenvalue of the Fresnel phase",
        measured: fresnel,
        threshold: format!("<= {BOCHNER_THRESHOLD}"),
        verdict: verdict(ok),
        source: source(rec),
        notes,
    }
}

fn kernel_entry(rec: &RunRecord) -> Entry {
    let dirac = num(&rec.summary, "dirac_min_residual");
    let heat = num(&rec.summary, "heat_max_residual");
    let ok = dirac.is_some_and(|v| v >= DIRAC_RESIDUAL_THRESHOLD) && heat.is_some_and(|h| h <= HEAT_RESIDUAL_TOL);
    Entry {
        item: 2,
        obstruction: "distributional kernel",
        diagnostic: "relative NNLS residual of the Dirac component",
        measured: dirac,
        threshold: format!(">= {DIRAC_RESIDUAL_THRESHOLD}"),
        verdict: verdict(ok),
        source: source(rec),
        notes: vec![format!("heat control max residual {heat:?}")],
    }
}

fn levy_entry(rec: &RunRecord) -> Entry {
    let slope = num(&rec.summary, "mean_quotient_slope");
    let (lo, hi) = QUOTIENT_SLOPE_BAND;
    let ok = slope.is_some_and(|v| (lo..=hi).contains(&v));
    Entry {
        item: 3,
        obstruction: "path geometry",
        diagnostic: "divergence slope of Brownian difference quotients",
        measured: slope,
        threshold: format!("in [{lo}, {hi}]"),
        verdict: verdict(ok),
        source: source(rec),
        notes: vec![format!(
            "modulus ratio mean {:?} over {:?} seeds",
            num(&rec.summary, "mean_ratio"),
            rec.summary.get("n_seeds").and_then(Value::as_u64)
        )],
    }
}

fn grassmann_entry() -> Entry {
    Entry {
        item: 4,
        obstruction: "Grassmann",
        diagnostic: "Berezin path integral over anticommuting fields",
        measured: None,
        threshold: "n/a".into(),
        verdict: OUT_OF_SCOPE.into(),
        source: None,
        notes: vec!["no numerical diagnostic exists for this item".into()],
    }
}

/// Build the report from the latest record (last in path order) of each category.
pub fn build(records: &[(PathBuf, RunRecord)]) -> Result<NoGoReport, CliError> {
    let mut latest: BTreeMap<&str, &RunRecord> = BTreeMap::new();
    for (_, rec) in records {
        if let Some((_, cat)) = CATEGORIES.iter().find(|(e, _)| *e == rec.config.experiment) {
            latest.insert(cat, rec);
        }
    }
    let missing: Vec<String> = CATEGORIES
        .iter()
        .filter(|(_, cat)| !latest.contains_key(cat))
        .map(|(e, cat)| format!("{cat} ({})", e.name()))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Incomplete(missing));
    }
    let entries = vec![
        tv_entry(latest["oscillatory/TV"]),
        bochner_entry(latest["positive-definiteness"]),
        kernel_entry(latest["distributional kernel"]),
        levy_entry(latest["path geometry"]),
        grassmann_entry(),
    ];
    let all = entries.iter().filter(|e| e.verdict != OUT_OF_SCOPE).all(|e| e.verdict == "PASS");
    Ok(NoGoReport {
        entries,
        all_numeric_exhibited: all,
    })
}

pub fn render_table(report: &NoGoReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<4} {:<22} {:<26} {:<14} {}\n",
        "item", "obstruction", "measured", "threshold", "verdict"
    ));
    for e in &report.entries {
        let measured = e.measured.map_or("-".to_string(), |v| format!("{v:.16e}"));
        out.push_str(&format!(
            "{:<4} {:<22} {:<26} {:<14} {}\n",
            e.item, e.obstruction, measured, e.threshold, e.verdict
        ));
    }
    out.push_str(&format!(
        "numeric obstructions exhibited: {}\n",
        if report.all_numeric_exhibited { "all" } else { "not all" }
    ));
    out
}
