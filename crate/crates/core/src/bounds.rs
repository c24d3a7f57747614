//! Quantitative growth and drift experiments.
//!
//! Every experiment here compares a measured left-hand side against an
//! envelope assembled from constants that are themselves *measured* on the
//! geometry (metric conditioning, Christoffel size, bending and bracket
//! norms, curve curvatures) — nothing is assumed. The outcome is a
//! [`BoundReport`]: the two sides, the margin, the measured parameters, and
//! a pass flag at an explicit tolerance.

use std::collections::BTreeMap;

use crate::bundle::horizontal_lift;
use crate::error::{Error, Result};
use crate::geometry::{ChartedManifold, Point, Vector};
use crate::submersion::{dihedral_angle, SubmersionMap};
use crate::transport::{
    default_steps, distance_to_curve, geodesic_curvature, integrate_geodesic, parallel_transport,
    DiscreteCurve,
};

/// Finite-difference step for one-parameter families of curves.
pub const FAMILY_STEP: f64 = 1e-3;

/// One verified inequality: `pass` holds exactly when
/// `lhs <= rhs + tolerance`.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; negative margins within `tolerance` still pass.
    pub margin: f64,
    /// Measured constants and inputs that went into the two sides.
    pub parameters: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        parameters: BTreeMap<String, f64>,
    ) -> BoundReport {
        BoundReport {
            name: name.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            parameters,
            pass: lhs <= rhs + tolerance,
            tolerance,
        }
    }
}

/// Evenly strided subsample of curve points, always keeping the last one.
fn strided_points(pts: &[Point], target: usize) -> Vec<Point> {
    let stride = (pts.len() / target.max(1)).max(1);
    let mut out: Vec<Point> = pts.iter().step_by(stride).cloned().collect();
    if let (Some(last), Some(kept)) = (pts.last(), out.last()) {
        if kept != last {
            out.push(last.clone());
        }
    }
    out
}

/// Sup over the samples of the metric conditioning
/// `max(λ_max(g), 1/λ_min(g))` and of the largest Christoffel entry.
fn measured_chart_constants(m: &ChartedManifold, samples: &[Point]) -> Result<(f64, f64)> {
    let mut c = 0.0f64;
    let mut mu = 0.0f64;
    for x in samples {
        let eig = m.metric_at(x)?.g.symmetric_eigen().eigenvalues;
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        c = c.max(hi.max(1.0 / lo));
        mu = mu.max(m.christoffel_at(x)?.max_abs());
    }
    Ok((c, mu))
}

/// Sup over the samples of the metric distortion, the fiber bending norm,
/// and the horizontal bracket norm of `f`.
fn measured_submersion_constants(f: &SubmersionMap, samples: &[Point]) -> Result<(f64, f64, f64)> {
    let mut eps = 0.0f64;
    let mut ii = 0.0f64;
    let mut a = 0.0f64;
    for x in samples {
        eps = eps.max(f.distortion_at(x)?.delta);
        ii = ii.max(f.second_fundamental_form_at(x)?.norm);
        a = a.max(f.integrability_tensor_at(x)?.norm);
    }
    Ok((eps, ii, a))
}

fn sup_geodesic_curvature(curve: &DiscreteCurve, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 0..samples {
        let t = curve.t0() + (curve.t1() - curve.t0()) * (k as f64 + 0.5) / samples as f64;
        worst = worst.max(geodesic_curvature(curve, t)?);
    }
    Ok(worst)
}

/// Integrate `y' = P_V(y) v̄` from `x0`, with the seed components frozen.
/// The velocity stays f-vertical, so the flow never leaves the fiber.
fn flow_along_fiber(f: &SubmersionMap, x0: &Point, v: &Vector, s_end: f64) -> Result<Point> {
    let substeps = 4;
    let dt = s_end / substeps as f64;
    let deriv = |p: &Point| -> Result<Vector> { Ok(f.split_at(p)?.project_vertical(v)) };
    let mut y = x0.clone();
    for _ in 0..substeps {
        let k1 = deriv(&y)?;
        let k2 = deriv(&(&y + &k1 * (0.5 * dt)))?;
        let k3 = deriv(&(&y + &k2 * (0.5 * dt)))?;
        let k4 = deriv(&(&y + &k3 * dt))?;
        y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    Ok(f.total().wrap(&y))
}

/// Outcome of the fiber-variation growth experiment.
#[derive(Clone, Debug)]
pub struct VariationOutcome {
    /// Endpoint variation size over seed size.
    pub ratio: f64,
    /// `ratio <= exp(e^ε |II| r)` with measured constants.
    pub upper: BoundReport,
    /// `exp(-e^ε |II| r) <= ratio`.
    pub lower: BoundReport,
}

/// Flow the vertical part of `vertical_seed` off `x0` inside the fiber,
/// lift the base geodesic of length `r` shot along `base_dir` from each
/// flowed start, and compare how much the endpoint variation grew or shrank
/// against the measured fiber-bending envelope.
pub fn variation_bound_experiment(
    f: &SubmersionMap,
    x0: &Point,
    vertical_seed: &Vector,
    base_dir: &Vector,
    r: f64,
    tolerance: f64,
) -> Result<VariationOutcome> {
    if !(r > 0.0) {
        return Err(Error::contract("geodesic length must be positive"));
    }
    let split0 = f.split_at(x0)?;
    let v = split0.project_vertical(vertical_seed);
    let v_norm = split0.metric.norm(&v);
    if v_norm < 1e-10 {
        return Err(Error::contract("seed vector has no vertical component"));
    }

    let h = FAMILY_STEP;
    let x_plus = flow_along_fiber(f, x0, &v, h)?;
    let x_minus = flow_along_fiber(f, x0, &v, -h)?;

    let p = f.eval(x0)?;
    let w = base_dir * (r / f.base().metric_at(&p)?.norm(base_dir));
    let gamma = integrate_geodesic(f.base(), &p, &w, 1.0, default_steps(r))?;

    let lift0 = horizontal_lift(f, &gamma, x0)?;
    let lift_plus = horizontal_lift(f, &gamma, &x_plus)?;
    let lift_minus = horizontal_lift(f, &gamma, &x_minus)?;

    let d = f.total().displacement(lift_minus.end(), lift_plus.end()) / (2.0 * h);
    let ratio = f.total().metric_at(lift0.end())?.norm(&d) / v_norm;

    let samples = strided_points(lift0.points(), 17);
    let (eps, ii, _) = measured_submersion_constants(f, &samples)?;
    let r_len = gamma.length()?;
    let growth = (eps.exp() * ii * r_len).exp();

    let mut parameters = BTreeMap::new();
    parameters.insert("r".to_string(), r_len);
    parameters.insert("ratio".to_string(), ratio);
    parameters.insert("eps".to_string(), eps);
    parameters.insert("ii".to_string(), ii);
    parameters.insert("seed_norm".to_string(), v_norm);
    parameters.insert("family_step".to_string(), h);

    Ok(VariationOutcome {
        ratio,
        upper: BoundReport::new("variation_upper", ratio, growth, tolerance, parameters.clone()),
        lower: BoundReport::new("variation_lower", 1.0 / growth, ratio, tolerance, parameters),
    })
}

/// Slide the base point of a lifted geodesic family along a transversal
/// direction and measure how far the endpoint variation tilts into the
/// fiber. The envelope is `C (a+b) e^{3ε + e^ε |II| r} |A| r` with measured
/// constants and a caller-configured `C`; the `C` that would make the two
/// sides equal is reported as `c_fitted`.
pub fn vertical_component_experiment(
    f: &SubmersionMap,
    x0: &Point,
    transversal_dir: &Vector,
    base_dir: &Vector,
    r: f64,
    c_config: f64,
    tolerance: f64,
) -> Result<BoundReport> {
    if !(r > 0.0) {
        return Err(Error::contract("geodesic length must be positive"));
    }
    let base = f.base();
    let total = f.total();
    let p0 = f.eval(x0)?;
    let hs = FAMILY_STEP;

    // The transversal is a short chart line in the base, one leg per side.
    let leg = |sign: f64| -> Result<DiscreteCurve> {
        let dir = transversal_dir * sign;
        let start = p0.clone();
        DiscreteCurve::from_fn(base.clone(), 0.0, hs, 8, move |t| (&start + &dir * t, dir.clone()))
    };
    let fwd = leg(1.0)?;
    let bwd = leg(-1.0)?;

    // Lift the transversal through x0 to get the flanking lift starts, and
    // transport the shooting direction so the family is smooth in s.
    let x_plus = horizontal_lift(f, &fwd, x0)?.end().clone();
    let x_minus = horizontal_lift(f, &bwd, x0)?.end().clone();
    let w0 = base_dir * (r / base.metric_at(&p0)?.norm(base_dir));
    let w_plus = parallel_transport(&fwd, &w0)?.end().clone();
    let w_minus = parallel_transport(&bwd, &w0)?.end().clone();

    let steps = default_steps(r);
    let shoot = |p: &Point, w: &Vector, start: &Point| -> Result<(DiscreteCurve, DiscreteCurve)> {
        let g = integrate_geodesic(base, p, w, 1.0, steps)?;
        let l = horizontal_lift(f, &g, start)?;
        Ok((g, l))
    };
    let (g0, l0) = shoot(&p0, &w0, x0)?;
    let (gp, lp) = shoot(fwd.end(), &w_plus, &x_plus)?;
    let (gm, lm) = shoot(bwd.end(), &w_minus, &x_minus)?;

    // Endpoint variation upstairs, projected onto the fiber.
    let d_up = total.displacement(lm.end(), lp.end()) / (2.0 * hs);
    let split_end = f.split_at(l0.end())?;
    let lhs = split_end.metric.norm(&split_end.project_vertical(&d_up));

    // Transversal speeds at both ends of the family.
    let a = base.metric_at(&p0)?.norm(transversal_dir);
    let d_base = base.displacement(gm.end(), gp.end()) / (2.0 * hs);
    let b = base.metric_at(g0.end())?.norm(&d_base);

    let samples = strided_points(l0.points(), 17);
    let (eps, ii, a_tensor) = measured_submersion_constants(f, &samples)?;
    let r_len = g0.length()?;
    let envelope = (3.0 * eps + eps.exp() * ii * r_len).exp();
    let rhs = c_config * (a + b) * envelope * a_tensor * r_len;
    let scale = (a + b) * envelope * a_tensor * r_len;
    let c_fitted = if scale > 1e-300 { lhs / scale } else { 0.0 };

    let mut parameters = BTreeMap::new();
    parameters.insert("a".to_string(), a);
    parameters.insert("b".to_string(), b);
    parameters.insert("r".to_string(), r_len);
    parameters.insert("eps".to_string(), eps);
    parameters.insert("ii".to_string(), ii);
    parameters.insert("a_tensor".to_string(), a_tensor);
    parameters.insert("c_config".to_string(), c_config);
    parameters.insert("c_fitted".to_string(), c_fitted);
    // The envelope is first-order in r; long geodesics leave its regime.
    parameters.insert("small_r_exceeded".to_string(), f64::from(u8::from(r_len > 0.5)));
    parameters.insert("family_step".to_string(), hs);

    Ok(BoundReport::new("vertical_component", lhs, rhs, tolerance, parameters))
}

/// Outcome of the curve-comparison experiment.
#[derive(Clone, Debug)]
pub struct DeviationOutcome {
    /// Report at the station with the smallest margin.
    pub report: BoundReport,
    /// `(station, gap, envelope)` rows for every station.
    pub series: Vec<(f64, f64, f64)>,
    /// Log-log growth rate of the gap across stations that register one.
    pub slope: f64,
}

/// Compare two unit-speed curves leaving the same point with the same
/// velocity: at each arclength station `s` the half-squared distance from
/// the first curve to the second must stay under a cubic envelope whose
/// coefficients are the measured chart constants and curve curvatures.
pub fn deviation_experiment(
    alpha: &DiscreteCurve,
    beta: &DiscreteCurve,
    s_grid: &[f64],
    trust_radius: f64,
    tolerance: f64,
) -> Result<DeviationOutcome> {
    if s_grid.is_empty() {
        return Err(Error::contract("deviation needs at least one station"));
    }
    let man = alpha.manifold();

    // Contract: shared start, matching velocities, both unit-speed.
    let at_start = distance_to_curve(man, alpha.start(), beta, trust_radius)?;
    if at_start.distance > 1e-8 {
        return Err(Error::contract(format!(
            "curves must share their start; gap {:.3e}",
            at_start.distance
        )));
    }
    let (_, beta_v) = beta.interpolate(at_start.foot_time)?;
    let dv = alpha.velocities()[0].clone() - beta_v;
    if man.metric_at(alpha.start())?.norm(&dv) > 1e-6 {
        return Err(Error::contract("curves must leave with the same velocity"));
    }
    for curve in [alpha, beta] {
        for i in 0..curve.len() {
            if (curve.g_speed(i)? - 1.0).abs() > 1e-6 {
                return Err(Error::contract("curves must be unit-speed"));
            }
        }
    }

    let delta1 = sup_geodesic_curvature(alpha, 17)?;
    let delta2 = sup_geodesic_curvature(beta, 17)?;

    let mut region: Vec<Point> = Vec::new();
    region.extend(strided_points(alpha.points(), 33));
    region.extend(strided_points(beta.points(), 33));

    let mut gaps = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let (x, _) = alpha.interpolate(alpha.t0() + s)?;
        let cd = distance_to_curve(man, &x, beta, trust_radius)?;
        region.extend(strided_points(cd.geodesic.points(), 9));
        gaps.push((s, cd.distance));
    }

    let (c, mu) = measured_chart_constants(man, &region)?;
    let m = man.dim() as f64;
    let coef = (m.powi(5) * c.powi(3)).sqrt() * mu + (m - 1.0) * delta1;

    let mut series = Vec::with_capacity(gaps.len());
    let mut worst = (f64::INFINITY, 0.0, 0.0, 0.0); // margin, s, lhs, rhs
    for &(s, gap) in &gaps {
        let lhs = 0.5 * gap * gap;
        let rhs = coef * s.powi(3) / 3.0 + 0.8 * delta2.sqrt() * s.powf(2.5);
        series.push((s, gap, rhs));
        if rhs - lhs < worst.0 {
            worst = (rhs - lhs, s, lhs, rhs);
        }
    }

    let logs: Vec<(f64, f64)> =
        gaps.iter().filter(|(_, g)| *g > 1e-12).map(|&(s, g)| (s.ln(), g.ln())).collect();
    let slope = fit_slope(&logs);

    let mut parameters = BTreeMap::new();
    parameters.insert("c".to_string(), c);
    parameters.insert("mu".to_string(), mu);
    parameters.insert("curvature_alpha".to_string(), delta1);
    parameters.insert("curvature_beta".to_string(), delta2);
    parameters.insert("worst_s".to_string(), worst.1);
    parameters.insert("slope".to_string(), slope);
    parameters.insert("stations".to_string(), s_grid.len() as f64);

    Ok(DeviationOutcome {
        report: BoundReport::new("deviation", worst.2, worst.3, tolerance, parameters),
        series,
        slope,
    })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(p, q), (x, y)| (p + (x - mx) * (y - my), q + (x - mx) * (x - mx)));
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Parallel-transport a unit vector around a closed chain of curves and
/// compare the squared component drift against the loop-length envelope
/// `m⁵ C³ μ² l²` with measured chart constants.
pub fn holonomy_experiment(
    edges: &[DiscreteCurve],
    v0: &Vector,
    label: &str,
    tolerance: f64,
) -> Result<BoundReport> {
    let first = edges
        .first()
        .ok_or_else(|| Error::contract("holonomy loop needs at least one edge"))?;
    let man = first.manifold();
    let g0 = man.metric_at(first.start())?;
    if (g0.norm(v0) - 1.0).abs() > 1e-6 {
        return Err(Error::contract("transported seed must be a unit vector"));
    }
    for i in 0..edges.len() {
        let next = &edges[(i + 1) % edges.len()];
        let gap = man
            .metric_at(edges[i].end())?
            .norm(&man.displacement(edges[i].end(), next.start()));
        if gap > 1e-8 {
            return Err(Error::contract(format!("loop edge {i} fails to close; gap {gap:.3e}")));
        }
    }

    let mut v = v0.clone();
    let mut length = 0.0;
    let mut region: Vec<Point> = Vec::new();
    for e in edges {
        v = parallel_transport(e, &v)?.end().clone();
        length += e.length()?;
        region.extend(strided_points(e.points(), 17));
    }
    let drift = v - v0;
    let lhs = g0.norm(&drift).powi(2);

    let (c, mu) = measured_chart_constants(man, &region)?;
    let m = man.dim() as f64;
    let rhs = m.powi(5) * c.powi(3) * mu * mu * length * length;

    let mut parameters = BTreeMap::new();
    parameters.insert("loop_length".to_string(), length);
    parameters.insert("c".to_string(), c);
    parameters.insert("mu".to_string(), mu);
    parameters.insert("edges".to_string(), edges.len() as f64);
    parameters.insert("drift_norm".to_string(), lhs.sqrt());

    Ok(BoundReport::new(format!("holonomy_{label}"), lhs, rhs, tolerance, parameters))
}

/// Scale-free pair quantities: the worst vertical dihedral angle, the worst
/// distortion, and the bending/bracket norms multiplied by the pair's sup
/// base distance. All four must be left fixed by a uniform metric rescale.
fn scale_free_quantities(
    f1: &SubmersionMap,
    f2: &SubmersionMap,
    trust_radius: f64,
    samples: &[Point],
) -> Result<BTreeMap<String, f64>> {
    let mut dihedral = 0.0f64;
    let mut delta = 0.0f64;
    let mut ii = 0.0f64;
    let mut a = 0.0f64;
    for x in samples {
        let s1 = f1.split_at(x)?;
        let s2 = f2.split_at(x)?;
        dihedral = dihedral.max(dihedral_angle(f1.total(), x, &s1.vertical, &s2.vertical)?);
        delta = delta.max(f2.distortion_at(x)?.delta);
        ii = ii.max(f2.second_fundamental_form_at(x)?.norm);
        a = a.max(f2.integrability_tensor_at(x)?.norm);
    }
    let dh = f1.map_distance(f2, samples, trust_radius)?.value;
    let mut out = BTreeMap::new();
    out.insert("dihedral_max".to_string(), dihedral);
    out.insert("delta_max".to_string(), delta);
    out.insert("ii_dh".to_string(), ii * dh);
    out.insert("a_dh".to_string(), a * dh);
    Ok(out)
}

/// Rebuild both submersions with metrics scaled by `λ²` and verify that the
/// scale-free quantities of the pair do not move. The left-hand side is the
/// largest relative drift across quantities, the envelope is zero.
pub fn rescaling_invariance_experiment(
    f1: &SubmersionMap,
    f2: &SubmersionMap,
    trust_radius: f64,
    lambda: f64,
    samples: &[Point],
    tolerance: f64,
) -> Result<BoundReport> {
    if samples.is_empty() {
        return Err(Error::contract("rescaling check needs sample points"));
    }
    if !(lambda > 0.0) {
        return Err(Error::contract("scale factor must be positive"));
    }
    let base = scale_free_quantities(f1, f2, trust_radius, samples)?;
    let scaled = scale_free_quantities(
        &f1.rescaled(lambda),
        &f2.rescaled(lambda),
        trust_radius * lambda,
        samples,
    )?;

    let mut drift = 0.0f64;
    let mut parameters = BTreeMap::new();
    parameters.insert("lambda".to_string(), lambda);
    parameters.insert("samples".to_string(), samples.len() as f64);
    for (key, v1) in &base {
        let v2 = scaled[key];
        drift = drift.max((v2 - v1).abs() / v1.abs().max(1.0));
        parameters.insert(key.clone(), *v1);
        parameters.insert(format!("{key}_scaled"), v2);
    }

    Ok(BoundReport::new("rescale_invariance", drift, 0.0, tolerance, parameters))
}
