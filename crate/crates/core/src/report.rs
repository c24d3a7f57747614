//! Config-driven experiment runner and report emission.
//!
//! A [`ExperimentConfig`] (strict TOML, unknown keys rejected) names a
//! scenario, its parameters, and an ordered list of experiments. [`run`]
//! executes the experiments — concurrently if asked, with results always
//! reported in config order — and produces a [`RunReport`]. [`emit`] writes
//! the report as a structured JSON object (every float printed with 17
//! significant digits), a flat CSV of bound rows, and plain numeric TSV
//! tables for plot series.
//!
//! Everything in the report except `wall_time_seconds` is a pure function
//! of the config, so re-running the same file reproduces the numeric
//! content byte for byte regardless of worker count.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::bounds::{
    deviation_experiment, holonomy_experiment, rescaling_invariance_experiment,
    variation_bound_experiment, vertical_component_experiment, BoundReport, FAMILY_STEP,
};
use crate::bundle::{transversality_check, BundleMap};
use crate::error::{Error, Result};
use crate::geometry::{Point, Vector};
use crate::scenarios::{build_scenario, sharpness_check, Scenario};
use crate::transport::default_steps;

/// Hard cap on grid sizes so a typo cannot request a week of compute.
const MAX_GRID_POINTS: usize = 100_000;
const MAX_RANDOM_PROBES: usize = 10_000;

// ---------------------------------------------------------------------------
// Config schema
// ---------------------------------------------------------------------------

/// Top-level experiment configuration. Parse with [`ExperimentConfig::load`]
/// or [`ExperimentConfig::from_toml_str`]; both validate strictly.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub output: OutputConfig,
    pub experiments: Vec<ExperimentSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Registry name; see `list_scenarios`.
    pub name: String,
    /// Scenario parameter overrides; unknown names are rejected at build.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; a CLI `--out` overrides it.
    #[serde(default)]
    pub dir: Option<String>,
    /// Any of `"struct"`, `"table"`, `"all"`; empty means `"all"`.
    #[serde(default)]
    pub formats: Vec<String>,
}

/// One experiment to run against the scenario.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    /// Per-axis sample counts: empty for a balanced default, one entry to
    /// repeat on every axis, or exactly one entry per axis.
    #[serde(default)]
    pub grid: Vec<usize>,
    /// Numeric overrides; allowed keys depend on the kind (see README).
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Seed for the random probe sampler; it fully determines the probes.
    #[serde(default)]
    pub seed: u64,
    /// Extra sample points drawn uniformly from the chart box.
    #[serde(default)]
    pub random_probes: usize,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Sweep distortion, bending, and bracket norms; validate oracles and
    /// curvature assertions.
    Tensors,
    /// Horizontal-lift bundle map diagnostics: commutation, leakage,
    /// framed singular values, map distance.
    BundleMap,
    /// The scenario's bound benches: holonomy, deviation, variation,
    /// vertical component, transversality.
    Bounds,
    /// Worst-case framed pullback defect of the bundle map over a grid.
    Sharpness,
    /// Scale-free quantities must survive a uniform metric rescale.
    Rescale,
}

impl ExperimentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentKind::Tensors => "tensors",
            ExperimentKind::BundleMap => "bundle_map",
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::Sharpness => "sharpness",
            ExperimentKind::Rescale => "rescale",
        }
    }

    /// Keys accepted in this kind's `tolerances` table.
    fn allowed_tolerances(&self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Tensors => &["assertion"],
            ExperimentKind::BundleMap => &["commutation", "leakage"],
            ExperimentKind::Bounds => {
                &["holonomy", "deviation", "variation", "vertical", "c_config"]
            }
            ExperimentKind::Sharpness => &[],
            ExperimentKind::Rescale => &["lambda", "drift"],
        }
    }
}

/// Which files [`emit`] writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    /// `report.json` only.
    Struct,
    /// `bounds.csv` only.
    Table,
    /// JSON, CSV, and one TSV per plot series.
    All,
}

impl FromStr for EmitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<EmitFormat> {
        match s {
            "struct" => Ok(EmitFormat::Struct),
            "table" => Ok(EmitFormat::Table),
            "all" => Ok(EmitFormat::All),
            other => Err(Error::Config(format!(
                "unknown format {other:?}; expected struct, table, or all"
            ))),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validated()
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn validated(self) -> Result<ExperimentConfig> {
        if self.experiments.is_empty() {
            return Err(Error::Config("config must list at least one experiment".into()));
        }
        for f in &self.output.formats {
            EmitFormat::from_str(f)?;
        }
        for (i, spec) in self.experiments.iter().enumerate() {
            if spec.grid.iter().any(|&n| n == 0) {
                return Err(Error::Config(format!("experiment {i}: grid counts must be positive")));
            }
            let total: usize = spec.grid.iter().product();
            if !spec.grid.is_empty() && total > MAX_GRID_POINTS {
                return Err(Error::Config(format!(
                    "experiment {i}: grid of {total} points exceeds the cap of {MAX_GRID_POINTS}"
                )));
            }
            if spec.random_probes > MAX_RANDOM_PROBES {
                return Err(Error::Config(format!(
                    "experiment {i}: random_probes exceeds the cap of {MAX_RANDOM_PROBES}"
                )));
            }
            for key in spec.tolerances.keys() {
                if !spec.kind.allowed_tolerances().contains(&key.as_str()) {
                    return Err(Error::Config(format!(
                        "experiment {i} ({}): unknown tolerance key {key:?}; allowed: {:?}",
                        spec.kind.as_str(),
                        spec.kind.allowed_tolerances(),
                    )));
                }
            }
        }
        Ok(self)
    }
}

// ---------------------------------------------------------------------------
// Report shapes
// ---------------------------------------------------------------------------

/// One named table of plot data: column labels plus numeric rows.
#[derive(Clone, Debug)]
pub struct SeriesTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Result of one experiment. `error` is `None` when the experiment ran to
/// completion; a failed experiment keeps its slot in the report.
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    /// `"{index:02}_{kind}"`, unique and in config order.
    pub name: String,
    pub kind: ExperimentKind,
    pub error: Option<String>,
    /// Summary numbers (sup norms, distances, witness coordinates, ...).
    pub scalars: BTreeMap<String, f64>,
    /// Boolean findings that are not pass gates (e.g. singular flags).
    pub flags: BTreeMap<String, bool>,
    pub bounds: Vec<BoundReport>,
    pub series: Vec<SeriesTable>,
}

impl ExperimentResult {
    fn failed(name: String, kind: ExperimentKind, message: String) -> ExperimentResult {
        ExperimentResult {
            name,
            kind,
            error: Some(message),
            scalars: BTreeMap::new(),
            flags: BTreeMap::new(),
            bounds: Vec::new(),
            series: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.error.is_none() && self.bounds.iter().all(|b| b.pass)
    }
}

/// Everything [`run`] produces. All fields except `wall_time_seconds` are a
/// pure function of the config.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub crate_version: String,
    pub config: ExperimentConfig,
    /// Scenario parameters after defaults were filled in.
    pub scenario_params: BTreeMap<String, f64>,
    /// Geometric assumptions the scenario asserts about itself.
    pub assumptions: BTreeMap<String, f64>,
    /// The numerical knobs in force during the run.
    pub step_sizes: BTreeMap<String, f64>,
    pub experiments: Vec<ExperimentResult>,
    pub all_pass: bool,
    pub wall_time_seconds: f64,
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

/// Run every experiment in the config. `jobs = 0` lets the thread pool pick
/// a worker count; any value produces identical numeric output because
/// experiments are independent and results keep config order.
pub fn run(config: &ExperimentConfig, jobs: usize) -> Result<RunReport> {
    let started = Instant::now();
    let config = config.clone().validated()?;
    let scenario = build_scenario(&config.scenario.name, &config.scenario.params)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    let experiments: Vec<ExperimentResult> = pool.install(|| {
        config
            .experiments
            .par_iter()
            .enumerate()
            .map(|(i, spec)| run_experiment(&scenario, spec, i))
            .collect()
    });

    let all_pass = experiments.iter().all(ExperimentResult::pass);

    let mut assumptions = BTreeMap::new();
    assumptions.insert("abs_sec_total".into(), scenario.asserted.abs_sec_total);
    assumptions.insert("abs_sec_base".into(), scenario.asserted.abs_sec_base);
    assumptions.insert("inj_radius_base".into(), scenario.asserted.inj_radius_base);
    assumptions.insert("conj_radius_total".into(), scenario.asserted.conj_radius_total);
    assumptions
        .insert("fibers_compact".into(), f64::from(u8::from(scenario.asserted.fibers_compact)));

    let mut step_sizes = BTreeMap::new();
    step_sizes.insert("fd_step_total".into(), scenario.total.fd_step());
    step_sizes.insert("fd_step_base".into(), scenario.base.fd_step());
    step_sizes.insert("ode_steps_per_unit".into(), default_steps(1.0) as f64);
    step_sizes.insert("family_step".into(), FAMILY_STEP);
    step_sizes.insert("trust_radius".into(), scenario.trust_radius);
    step_sizes.insert("grid_margin".into(), scenario.grid_margin);

    Ok(RunReport {
        crate_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario_params: scenario.params.clone(),
        config,
        assumptions,
        step_sizes,
        experiments,
        all_pass,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

fn run_experiment(scenario: &Scenario, spec: &ExperimentSpec, index: usize) -> ExperimentResult {
    let name = format!("{index:02}_{}", spec.kind.as_str());
    let outcome = match spec.kind {
        ExperimentKind::Tensors => run_tensors(scenario, spec, index),
        ExperimentKind::BundleMap => run_bundle_map(scenario, spec, index),
        ExperimentKind::Bounds => run_bounds(scenario, spec),
        ExperimentKind::Sharpness => run_sharpness(scenario, spec),
        ExperimentKind::Rescale => run_rescale(scenario, spec, index),
    };
    match outcome {
        Ok(mut result) => {
            result.name = name;
            result.kind = spec.kind;
            result
        }
        Err(e) => ExperimentResult::failed(name, spec.kind, e.to_string()),
    }
}

fn blank_result() -> ExperimentResult {
    ExperimentResult {
        name: String::new(),
        kind: ExperimentKind::Tensors,
        error: None,
        scalars: BTreeMap::new(),
        flags: BTreeMap::new(),
        bounds: Vec::new(),
        series: Vec::new(),
    }
}

/// Per-axis counts: balanced default, a single repeated entry, or one per
/// axis.
fn grid_counts(dim: usize, given: &[usize], target: usize) -> Result<Vec<usize>> {
    match given.len() {
        0 => {
            let per_axis =
                ((target as f64).powf(1.0 / dim as f64).round() as usize).clamp(2, 64);
            Ok(vec![per_axis; dim])
        }
        1 => Ok(vec![given[0]; dim]),
        n if n == dim => Ok(given.to_vec()),
        n => Err(Error::Config(format!("grid has {n} entries but the chart has {dim} axes"))),
    }
}

/// Grid samples plus seeded uniform probes from the margin-shrunk box.
fn sample_points(scenario: &Scenario, spec: &ExperimentSpec, index: usize) -> Result<Vec<Point>> {
    let dim = scenario.total.dim();
    let counts = grid_counts(dim, &spec.grid, 64)?;
    let mut points = scenario.total.domain().grid(&counts, scenario.grid_margin);
    if spec.random_probes > 0 {
        let mut rng =
            ChaCha8Rng::seed_from_u64(spec.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let axes = scenario.total.domain().axes().to_vec();
        for _ in 0..spec.random_probes {
            points.push(Point::from_iterator(
                dim,
                axes.iter().map(|a| {
                    if a.periodic {
                        rng.gen_range(a.lo..a.lo + a.period())
                    } else {
                        rng.gen_range(a.lo + scenario.grid_margin..a.hi - scenario.grid_margin)
                    }
                }),
            ));
        }
    }
    Ok(points)
}

fn tolerance(spec: &ExperimentSpec, key: &str, default: f64) -> f64 {
    spec.tolerances.get(key).copied().unwrap_or(default)
}

fn insert_point(scalars: &mut BTreeMap<String, f64>, prefix: &str, p: &Point) {
    for (i, v) in p.iter().enumerate() {
        scalars.insert(format!("{prefix}_{i}"), *v);
    }
}

fn run_tensors(scenario: &Scenario, spec: &ExperimentSpec, index: usize) -> Result<ExperimentResult> {
    let points = sample_points(scenario, spec, index)?;
    let f = &scenario.f2;
    let dim = scenario.total.dim();

    let mut rows = Vec::with_capacity(points.len());
    let (mut delta_max, mut ii_max, mut a_max) = (0.0f64, 0.0f64, 0.0f64);
    for x in &points {
        let delta = f.distortion_at(x)?.delta;
        let ii = f.second_fundamental_form_at(x)?.norm;
        let a = f.integrability_tensor_at(x)?.norm;
        delta_max = delta_max.max(delta);
        ii_max = ii_max.max(ii);
        a_max = a_max.max(a);
        let mut row: Vec<f64> = x.iter().copied().collect();
        row.extend([delta, ii, a]);
        rows.push(row);
    }

    // Curvature on a strided subset; full grids would dominate the run.
    let stride = (points.len() / 24).max(1);
    let (mut sec_total, mut sec_base) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
    let mut ricci_max = 0.0f64;
    for x in points.iter().step_by(stride) {
        let cr = scenario.total.curvature_at(x)?;
        sec_total = (sec_total.0.min(cr.sectional_range.0), sec_total.1.max(cr.sectional_range.1));
        ricci_max = ricci_max.max(cr.ricci_operator_norm);
        let cb = scenario.base.curvature_at(&f.eval(x)?)?;
        sec_base = (sec_base.0.min(cb.sectional_range.0), sec_base.1.max(cb.sectional_range.1));
    }

    let assertion_tol = tolerance(spec, "assertion", 1e-3);
    let mut bounds = Vec::new();
    for (label, range, asserted) in [
        ("sec_total_within_assertion", sec_total, scenario.asserted.abs_sec_total),
        ("sec_base_within_assertion", sec_base, scenario.asserted.abs_sec_base),
    ] {
        let measured = range.0.abs().max(range.1.abs());
        let mut params = BTreeMap::new();
        params.insert("sec_min".into(), range.0);
        params.insert("sec_max".into(), range.1);
        bounds.push(BoundReport::new(label, measured, asserted, assertion_tol, params));
    }

    // Closed-form oracles against the generic pipeline, folded into a single
    // gate: worst gap over tolerance across oracles must stay at or below 1.
    let validation = scenario.validate(points.len().min(256))?;
    let mut params = BTreeMap::new();
    let mut worst_ratio = 0.0f64;
    for (key, gap) in &validation.worst {
        let tol = validation.tolerances[key];
        worst_ratio = worst_ratio.max(gap / tol);
        params.insert(format!("gap_{key}"), *gap);
        params.insert(format!("tol_{key}"), tol);
    }
    params.insert("points".into(), validation.checked as f64);
    bounds.push(BoundReport::new("oracle_validation", worst_ratio, 1.0, 0.0, params));

    let mut result = blank_result();
    result.scalars.insert("points".into(), points.len() as f64);
    result.scalars.insert("delta_max".into(), delta_max);
    result.scalars.insert("ii_max".into(), ii_max);
    result.scalars.insert("a_max".into(), a_max);
    result.scalars.insert("sec_total_min".into(), sec_total.0);
    result.scalars.insert("sec_total_max".into(), sec_total.1);
    result.scalars.insert("sec_base_min".into(), sec_base.0);
    result.scalars.insert("sec_base_max".into(), sec_base.1);
    result.scalars.insert("ricci_total_max".into(), ricci_max);
    result.bounds = bounds;

    let mut columns: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
    columns.extend(["delta".into(), "ii_norm".into(), "a_norm".into()]);
    result.series.push(SeriesTable { name: "tensor_fields".into(), columns, rows });
    Ok(result)
}

fn run_bundle_map(
    scenario: &Scenario,
    spec: &ExperimentSpec,
    index: usize,
) -> Result<ExperimentResult> {
    let points = sample_points(scenario, spec, index)?;
    let bundle =
        BundleMap::new(scenario.f1.clone(), scenario.f2.clone(), scenario.trust_radius)?;
    let h = scenario.total.fd_step();

    let (mut comm_max, mut leak_max) = (0.0f64, 0.0f64);
    let (mut sv_min, mut sv_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut sv_rows = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let d = bundle.diagnostics(x, h)?;
        comm_max = comm_max.max(d.commutation_residual);
        leak_max = leak_max.max(d.vertical_leakage);
        for (j, sv) in d.singular_values.iter().enumerate() {
            sv_min = sv_min.min(*sv);
            sv_max = sv_max.max(*sv);
            sv_rows.push(vec![i as f64, j as f64, *sv]);
        }
    }

    let md = scenario.f1.map_distance(&scenario.f2, &points, scenario.trust_radius)?;

    let mut result = blank_result();
    result.scalars.insert("points".into(), points.len() as f64);
    result.scalars.insert("sv_min".into(), sv_min);
    result.scalars.insert("sv_max".into(), sv_max);
    result.scalars.insert("map_distance".into(), md.value);
    insert_point(&mut result.scalars, "map_distance_witness", &md.witness);

    result.bounds.push(BoundReport::new(
        "phi_commutation",
        comm_max,
        0.0,
        tolerance(spec, "commutation", 1e-6),
        BTreeMap::new(),
    ));
    result.bounds.push(BoundReport::new(
        "phi_leakage",
        leak_max,
        0.0,
        tolerance(spec, "leakage", 5e-4),
        BTreeMap::new(),
    ));

    result.series.push(SeriesTable {
        name: "singular_values".into(),
        columns: vec!["point".into(), "component".into(), "value".into()],
        rows: sv_rows,
    });
    Ok(result)
}

fn run_bounds(scenario: &Scenario, spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let mut result = blank_result();
    let total = &scenario.total;

    if let Some(bench) = &scenario.holonomy_bench {
        for lp in &bench.loops {
            let edges = lp.edges(total, scenario.trust_radius)?;
            let g = total.metric_at(&lp.vertices[0])?;
            let mut v0 = Vector::zeros(total.dim());
            v0[0] = 1.0;
            let v0 = &v0 / g.norm(&v0);
            result.bounds.push(holonomy_experiment(
                &edges,
                &v0,
                &lp.label,
                tolerance(spec, "holonomy", 1e-9),
            )?);
        }
    }

    if let Some(bench) = &scenario.deviation_bench {
        let (alpha, beta) = bench.curves(total)?;
        let out = deviation_experiment(
            &alpha,
            &beta,
            &bench.s_grid,
            scenario.trust_radius,
            tolerance(spec, "deviation", 1e-9),
        )?;
        result.scalars.insert("deviation_slope".into(), out.slope);
        result.bounds.push(out.report);
        result.series.push(SeriesTable {
            name: "deviation".into(),
            columns: vec!["s".into(), "gap".into(), "envelope".into()],
            rows: out.series.iter().map(|&(s, g, e)| vec![s, g, e]).collect(),
        });
    }

    if let Some(bench) = &scenario.variation_bench {
        let mut rows = Vec::new();
        for (i, &r) in bench.r_values.iter().enumerate() {
            let out = variation_bound_experiment(
                &scenario.f1,
                &bench.x0,
                &bench.vertical_seed,
                &bench.base_dir,
                r,
                tolerance(spec, "variation", 1e-3),
            )?;
            rows.push(vec![r, out.ratio, out.upper.rhs, out.lower.lhs]);
            let mut upper = out.upper;
            upper.name = format!("variation_upper_{i}");
            let mut lower = out.lower;
            lower.name = format!("variation_lower_{i}");
            result.bounds.push(upper);
            result.bounds.push(lower);
        }
        result.series.push(SeriesTable {
            name: "variation_growth".into(),
            columns: vec!["r".into(), "ratio".into(), "upper".into(), "lower".into()],
            rows,
        });
    }

    if let Some(bench) = &scenario.vertical_bench {
        for (i, &r) in bench.r_values.iter().enumerate() {
            let mut report = vertical_component_experiment(
                &scenario.f1,
                &bench.x0,
                &bench.transversal_dir,
                &bench.base_dir,
                r,
                tolerance(spec, "c_config", 2.0),
                tolerance(spec, "vertical", 1e-9),
            )?;
            report.name = format!("vertical_component_{i}");
            result.bounds.push(report);
        }
    }

    if let Some(bench) = &scenario.transversal_bench {
        let tr = transversality_check(
            &scenario.f1,
            &scenario.f2,
            &bench.center,
            &bench.x,
            scenario.trust_radius,
        )?;
        result.scalars.insert("transversality_min_sv".into(), tr.min_singular_value);
        result.flags.insert("transversality_singular".into(), tr.singular);
    }

    Ok(result)
}

fn run_sharpness(scenario: &Scenario, spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let counts = grid_counts(scenario.total.dim(), &spec.grid, 256)?;
    let report = sharpness_check(scenario, &counts)?;
    let mut result = blank_result();
    result.scalars.insert("gap".into(), report.gap);
    result.scalars.insert("samples".into(), report.samples as f64);
    insert_point(&mut result.scalars, "witness", &report.witness);
    Ok(result)
}

fn run_rescale(scenario: &Scenario, spec: &ExperimentSpec, index: usize) -> Result<ExperimentResult> {
    let samples = sample_points(scenario, spec, index)?;
    let report = rescaling_invariance_experiment(
        &scenario.f1,
        &scenario.f2,
        scenario.trust_radius,
        tolerance(spec, "lambda", 10.0),
        &samples,
        tolerance(spec, "drift", 1e-6),
    )?;
    let mut result = blank_result();
    result.scalars.insert("samples".into(), samples.len() as f64);
    result.bounds.push(report);
    Ok(result)
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// Write the report under `out_dir` and return the paths written.
pub fn emit(report: &RunReport, format: EmitFormat, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    if matches!(format, EmitFormat::Struct | EmitFormat::All) {
        let path = out_dir.join("report.json");
        fs::write(&path, json_report(report))?;
        written.push(path);
    }
    if matches!(format, EmitFormat::Table | EmitFormat::All) {
        let path = out_dir.join("bounds.csv");
        fs::write(&path, csv_report(report))?;
        written.push(path);
    }
    if matches!(format, EmitFormat::All) {
        for exp in &report.experiments {
            for series in &exp.series {
                let path = out_dir.join(format!("series_{}_{}.tsv", exp.name, series.name));
                fs::write(&path, tsv_series(series))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

/// `f64` as JSON with 17 significant digits (lossless round-trip).
fn jf(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no non-finite literals; null keeps the document valid.
        "null".to_string()
    }
}

/// String as a quoted, escaped JSON literal.
fn js(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

fn json_map_f64(map: &BTreeMap<String, f64>, indent: &str) -> String {
    if map.is_empty() {
        return "{}".to_string();
    }
    let body: Vec<String> =
        map.iter().map(|(k, v)| format!("{indent}  {}: {}", js(k), jf(*v))).collect();
    format!("{{\n{}\n{indent}}}", body.join(",\n"))
}

fn json_bound(b: &BoundReport, indent: &str) -> String {
    let deeper = format!("{indent}  ");
    format!(
        "{{\n{indent}  \"name\": {},\n{indent}  \"lhs\": {},\n{indent}  \"rhs\": {},\n{indent}  \
         \"margin\": {},\n{indent}  \"pass\": {},\n{indent}  \"tolerance\": {},\n{indent}  \
         \"parameters\": {}\n{indent}}}",
        js(&b.name),
        jf(b.lhs),
        jf(b.rhs),
        jf(b.margin),
        b.pass,
        jf(b.tolerance),
        json_map_f64(&b.parameters, &deeper),
    )
}

fn json_series(s: &SeriesTable, indent: &str) -> String {
    let columns: Vec<String> = s.columns.iter().map(|c| js(c)).collect();
    let rows: Vec<String> = s
        .rows
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|v| jf(*v)).collect();
            format!("{indent}    [{}]", cells.join(", "))
        })
        .collect();
    let rows_body =
        if rows.is_empty() { "[]".to_string() } else { format!("[\n{}\n{indent}  ]", rows.join(",\n")) };
    format!(
        "{{\n{indent}  \"name\": {},\n{indent}  \"columns\": [{}],\n{indent}  \"rows\": \
         {rows_body}\n{indent}}}",
        js(&s.name),
        columns.join(", "),
    )
}

fn json_experiment(e: &ExperimentResult, indent: &str) -> String {
    let deeper = format!("{indent}  ");
    let status = match &e.error {
        None => format!("\"status\": \"ok\""),
        Some(msg) => format!("\"status\": \"error\",\n{indent}  \"message\": {}", js(msg)),
    };
    let flags = if e.flags.is_empty() {
        "{}".to_string()
    } else {
        let body: Vec<String> =
            e.flags.iter().map(|(k, v)| format!("{indent}    {}: {v}", js(k))).collect();
        format!("{{\n{}\n{indent}  }}", body.join(",\n"))
    };
    let bounds = if e.bounds.is_empty() {
        "[]".to_string()
    } else {
        let body: Vec<String> =
            e.bounds.iter().map(|b| format!("{indent}    {}", json_bound(b, &format!("{indent}    ")))).collect();
        format!("[\n{}\n{indent}  ]", body.join(",\n"))
    };
    let series = if e.series.is_empty() {
        "[]".to_string()
    } else {
        let body: Vec<String> =
            e.series.iter().map(|s| format!("{indent}    {}", json_series(s, &format!("{indent}    ")))).collect();
        format!("[\n{}\n{indent}  ]", body.join(",\n"))
    };
    format!(
        "{{\n{indent}  \"name\": {},\n{indent}  \"kind\": {},\n{indent}  {status},\n{indent}  \
         \"pass\": {},\n{indent}  \"scalars\": {},\n{indent}  \"flags\": {flags},\n{indent}  \
         \"bounds\": {bounds},\n{indent}  \"series\": {series}\n{indent}}}",
        js(&e.name),
        js(e.kind.as_str()),
        e.pass(),
        json_map_f64(&e.scalars, &deeper),
    )
}

fn json_config(c: &ExperimentConfig, indent: &str) -> String {
    let deeper = format!("{indent}    ");
    let dir = match &c.output.dir {
        Some(d) => js(d),
        None => "null".to_string(),
    };
    let formats: Vec<String> = c.output.formats.iter().map(|f| js(f)).collect();
    let experiments: Vec<String> = c
        .experiments
        .iter()
        .map(|e| {
            let grid: Vec<String> = e.grid.iter().map(|n| n.to_string()).collect();
            format!(
                "{indent}    {{\n{indent}      \"kind\": {},\n{indent}      \"grid\": [{}],\n\
                 {indent}      \"seed\": {},\n{indent}      \"random_probes\": {},\n{indent}      \
                 \"tolerances\": {}\n{indent}    }}",
                js(e.kind.as_str()),
                grid.join(", "),
                e.seed,
                e.random_probes,
                json_map_f64(&e.tolerances, &format!("{indent}      ")),
            )
        })
        .collect();
    let experiments_body = if experiments.is_empty() {
        "[]".to_string()
    } else {
        format!("[\n{}\n{indent}  ]", experiments.join(",\n"))
    };
    format!(
        "{{\n{indent}  \"scenario\": {{\n{indent}    \"name\": {},\n{indent}    \"params\": \
         {}\n{indent}  }},\n{indent}  \"output\": {{\n{indent}    \"dir\": {dir},\n{indent}    \
         \"formats\": [{}]\n{indent}  }},\n{indent}  \"experiments\": {experiments_body}\n{indent}}}",
        js(&c.scenario.name),
        json_map_f64(&c.scenario.params, &deeper),
        formats.join(", "),
    )
}

/// The full-fidelity structured report. `wall_time_seconds` is the last
/// line, so determinism checks can strip it with a line filter.
pub fn json_report(report: &RunReport) -> String {
    let experiments: Vec<String> = report
        .experiments
        .iter()
        .map(|e| format!("    {}", json_experiment(e, "    ")))
        .collect();
    let experiments_body = if experiments.is_empty() {
        "[]".to_string()
    } else {
        format!("[\n{}\n  ]", experiments.join(",\n"))
    };
    format!(
        "{{\n  \"version\": {},\n  \"config\": {},\n  \"scenario_params\": {},\n  \
         \"assumptions\": {},\n  \"step_sizes\": {},\n  \"experiments\": {experiments_body},\n  \
         \"all_pass\": {},\n  \"wall_time_seconds\": {}\n}}\n",
        js(&report.crate_version),
        json_config(&report.config, "  "),
        json_map_f64(&report.scenario_params, "  "),
        json_map_f64(&report.assumptions, "  "),
        json_map_f64(&report.step_sizes, "  "),
        report.all_pass,
        jf(report.wall_time_seconds),
    )
}

/// One CSV row per bound report; parameter keys become trailing columns
/// (the union over all rows, alphabetical, blank where absent).
pub fn csv_report(report: &RunReport) -> String {
    let mut param_keys = BTreeSet::new();
    for e in &report.experiments {
        for b in &e.bounds {
            param_keys.extend(b.parameters.keys().cloned());
        }
    }
    let mut out = String::from("experiment,name,lhs,rhs,margin,pass,tolerance");
    for key in &param_keys {
        out.push(',');
        out.push_str(key);
    }
    out.push('\n');
    for e in &report.experiments {
        for b in &e.bounds {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}",
                e.name,
                b.name,
                jf(b.lhs),
                jf(b.rhs),
                jf(b.margin),
                b.pass,
                jf(b.tolerance)
            ));
            for key in &param_keys {
                out.push(',');
                if let Some(v) = b.parameters.get(key) {
                    out.push_str(&jf(*v));
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Plain numeric table: a column-label header line, then one row per line.
pub fn tsv_series(series: &SeriesTable) -> String {
    let mut out = series.columns.join("\t");
    out.push('\n');
    for row in &series.rows {
        let cells: Vec<String> = row.iter().map(|v| jf(*v)).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// `report.json` minus the volatile wall-time line; two runs of the same
/// config must agree on this byte for byte.
pub fn normalized_json(json: &str) -> String {
    json.lines().filter(|l| !l.contains("wall_time_seconds")).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_config(extra: &str) -> String {
        format!(
            "[scenario]\nname = \"flat_torus_pair\"\n[scenario.params]\na = 0.3\n\n{extra}"
        )
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let text = "[scenarioo]\nname = \"flat_torus_pair\"\n\n[[experiments]]\nkind = \"tensors\"\n";
        let err = ExperimentConfig::from_toml_str(text).unwrap_err();
        assert!(err.to_string().contains("scenarioo"), "{err}");
    }

    #[test]
    fn unknown_tolerance_keys_are_rejected() {
        let text = minimal_config(
            "[[experiments]]\nkind = \"tensors\"\n[experiments.tolerances]\nassertionn = 1.0\n",
        );
        let err = ExperimentConfig::from_toml_str(&text).unwrap_err();
        assert!(err.to_string().contains("assertionn"), "{err}");
    }

    #[test]
    fn formats_parse_and_bad_ones_do_not() {
        assert_eq!(EmitFormat::from_str("struct").unwrap(), EmitFormat::Struct);
        assert_eq!(EmitFormat::from_str("table").unwrap(), EmitFormat::Table);
        assert_eq!(EmitFormat::from_str("all").unwrap(), EmitFormat::All);
        assert!(EmitFormat::from_str("csv").is_err());
    }

    #[test]
    fn grid_spec_shapes_are_resolved() {
        assert_eq!(grid_counts(2, &[], 64).unwrap(), vec![8, 8]);
        assert_eq!(grid_counts(3, &[], 64).unwrap(), vec![4, 4, 4]);
        assert_eq!(grid_counts(2, &[5], 64).unwrap(), vec![5, 5]);
        assert_eq!(grid_counts(2, &[5, 7], 64).unwrap(), vec![5, 7]);
        assert!(grid_counts(2, &[5, 7, 9], 64).is_err());
    }

    #[test]
    fn floats_are_printed_with_seventeen_significant_digits() {
        assert_eq!(jf(0.5), "5.0000000000000000e-1");
        assert_eq!(jf(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(jf(f64::NAN), "null");
    }

    #[test]
    fn small_run_is_deterministic_and_passes() {
        let text = minimal_config(
            "[[experiments]]\nkind = \"tensors\"\ngrid = [5, 5]\n\n[[experiments]]\nkind = \
             \"rescale\"\ngrid = [4, 4]\nrandom_probes = 8\nseed = 3\n",
        );
        let config = ExperimentConfig::from_toml_str(&text).unwrap();
        let first = run(&config, 1).unwrap();
        assert!(first.all_pass, "{:#?}", first.experiments);
        let second = run(&config, 2).unwrap();
        assert_eq!(
            normalized_json(&json_report(&first)),
            normalized_json(&json_report(&second)),
            "numeric content must not depend on the worker count"
        );
        assert_eq!(csv_report(&first), csv_report(&second));
    }

    #[test]
    fn emit_writes_one_csv_row_per_bound() {
        let text = minimal_config("[[experiments]]\nkind = \"tensors\"\ngrid = [4, 4]\n");
        let config = ExperimentConfig::from_toml_str(&text).unwrap();
        let report = run(&config, 1).unwrap();
        let n_bounds: usize = report.experiments.iter().map(|e| e.bounds.len()).sum();

        let dir = std::env::temp_dir().join(format!("sublab_emit_test_{}", std::process::id()));
        let written = emit(&report, EmitFormat::All, &dir).unwrap();
        assert!(written.iter().any(|p| p.ends_with("report.json")));
        assert!(written.iter().any(|p| p.ends_with("bounds.csv")));
        let csv = fs::read_to_string(dir.join("bounds.csv")).unwrap();
        assert_eq!(csv.lines().count(), n_bounds + 1, "header plus one row per bound");
        let json = fs::read_to_string(dir.join("report.json")).unwrap();
        assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok(), "emitted JSON parses");
        fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn failed_experiments_keep_their_slot() {
        // Grid shape mismatch surfaces as a per-experiment error, not a
        // run-level failure.
        let text = minimal_config("[[experiments]]\nkind = \"tensors\"\ngrid = [4, 4, 4]\n");
        let config = ExperimentConfig::from_toml_str(&text).unwrap();
        let report = run(&config, 1).unwrap();
        assert_eq!(report.experiments.len(), 1);
        assert!(report.experiments[0].error.is_some());
        assert!(!report.all_pass);
    }
}
