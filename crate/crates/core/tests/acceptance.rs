//! Acceptance sweep: one test per advertised capability, each printing a
//! single verdict line (run with `--nocapture` to see them) before asserting.
//!
//! Every criterion pins the geometry, the measured quantity, the reference
//! value, and a wall-clock budget, so a regression in accuracy or speed
//! fails loudly and names the number that moved.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use sublab::bounds::{
    deviation_experiment, holonomy_experiment, rescaling_invariance_experiment,
    variation_bound_experiment, vertical_component_experiment,
};
use sublab::bundle::{transversality_check, BundleMap};
use sublab::geometry::{pt, vec_from};
use sublab::report::{csv_report, json_report, normalized_json, run, ExperimentConfig};
use sublab::scenarios::{build_scenario, sharpness_check, Scenario};
use sublab::transport::{default_steps, integrate_geodesic, log_map, parallel_transport};

fn scenario(name: &str) -> Scenario {
    build_scenario(name, &BTreeMap::new()).unwrap()
}

fn scenario_with(name: &str, key: &str, value: f64) -> Scenario {
    let mut params = BTreeMap::new();
    params.insert(key.to_string(), value);
    build_scenario(name, &params).unwrap()
}

/// Record a failed expectation.
macro_rules! check {
    ($faults:expr, $cond:expr, $($msg:tt)+) => {
        if !($cond) {
            $faults.push(format!($($msg)+));
        }
    };
}

/// Print the one-line verdict for a criterion, then assert it.
fn verdict(number: usize, description: &str, faults: Vec<String>, detail: String) {
    let status = if faults.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("ACCEPTANCE {number:02} {status} — {description}: {detail}");
    if !faults.is_empty() {
        line.push_str(&format!(" | faults: {}", faults.join("; ")));
    }
    println!("{line}");
    assert!(faults.is_empty(), "{}", faults.join("; "));
}

fn budget(faults: &mut Vec<String>, started: Instant, seconds: f64) -> f64 {
    let elapsed = started.elapsed().as_secs_f64();
    check!(faults, elapsed < seconds, "took {elapsed:.1}s, budget {seconds:.0}s");
    elapsed
}

#[test]
fn criterion_01_fiber_transport_map_matches_the_untwist_oracle() {
    let started = Instant::now();
    let mut faults = Vec::new();

    let sc = scenario("flat_torus_pair");
    let a = sc.params["a"];
    let phi = BundleMap::new(sc.f1.clone(), sc.f2.clone(), sc.trust_radius).unwrap();
    let (oracle, oracle_tol) = sc.oracles.phi.as_ref().unwrap();
    let grid = sc.total.domain().grid(&[64, 64], sc.grid_margin);

    let mut point_gap = 0.0f64;
    let mut jac_gap = 0.0f64;
    for x in &grid {
        let y = phi.at(x).unwrap();
        point_gap = point_gap.max(sc.total.displacement(&y, &oracle(x)).amax());

        // On this pair the exact differential is diag(1, 1/(1 + a·cos σ)).
        let jac = phi.differential_at(x, sc.total.fd_step()).unwrap();
        let sigma = y[1];
        let stretch = 1.0 / (1.0 + a * sigma.cos());
        jac_gap = jac_gap
            .max((jac[(0, 0)] - 1.0).abs())
            .max(jac[(0, 1)].abs())
            .max(jac[(1, 0)].abs())
            .max((jac[(1, 1)] - stretch).abs());
    }
    check!(faults, point_gap < *oracle_tol, "point gap {point_gap:.2e} ≥ {oracle_tol:.0e}");
    check!(faults, jac_gap < 1e-4, "differential gap {jac_gap:.2e} ≥ 1e-4");

    let elapsed = budget(&mut faults, started, 60.0);
    verdict(
        1,
        "fiber transport map matches the untwist oracle on a 64×64 grid",
        faults,
        format!(
            "point gap {point_gap:.2e}, differential gap {jac_gap:.2e}, {} pts, {elapsed:.1}s",
            grid.len()
        ),
    );
}

#[test]
fn criterion_02_paired_fibrations_commute_and_stay_nearly_isometric() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Flat pair: the map must commute with both projections and keep its
    // differential inside the horizontal split.
    let flat = scenario("flat_torus_pair");
    let phi = BundleMap::new(flat.f1.clone(), flat.f2.clone(), flat.trust_radius).unwrap();
    let mut commutation = 0.0f64;
    let mut leakage = 0.0f64;
    for x in &flat.total.domain().grid(&[24, 24], flat.grid_margin) {
        let d = phi.diagnostics(x, flat.total.fd_step()).unwrap();
        commutation = commutation.max(d.commutation_residual);
        leakage = leakage.max(d.vertical_leakage);
    }
    check!(faults, commutation < 1e-6, "flat commutation {commutation:.2e} ≥ 1e-6");
    check!(faults, leakage < 5e-4, "flat leakage {leakage:.2e} ≥ 5e-4");

    // Rotated 3-sphere fibration: framed singular values stay within the
    // distortion window of the rotation angle.
    let hopf = scenario("hopf");
    let angle = hopf.params["rot_angle"];
    let bundle = BundleMap::new(hopf.f1.clone(), hopf.f2.clone(), hopf.trust_radius).unwrap();
    let points = hopf.sample_grid(27);
    let (mut sv_lo, mut sv_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for x in &points {
        let d = bundle.diagnostics(x, hopf.total.fd_step()).unwrap();
        for sv in &d.singular_values {
            sv_lo = sv_lo.min(*sv);
            sv_hi = sv_hi.max(*sv);
        }
    }
    check!(
        faults,
        sv_lo >= (-angle).exp() && sv_hi <= angle.exp(),
        "singular values [{sv_lo:.6}, {sv_hi:.6}] outside [{:.6}, {:.6}]",
        (-angle).exp(),
        angle.exp()
    );

    // The rotation moves base points by at most half the angle.
    let md = hopf.f1.map_distance(&hopf.f2, &points, hopf.trust_radius).unwrap();
    check!(faults, md.value <= 0.5 * angle + 1e-6, "map distance {:.6} > angle/2", md.value);

    let elapsed = budget(&mut faults, started, 120.0);
    verdict(
        2,
        "paired fibrations commute and the map stays nearly isometric",
        faults,
        format!(
            "commutation {commutation:.1e}, leakage {leakage:.1e}, singular values \
             [{sv_lo:.5}, {sv_hi:.5}] in e^±{angle}, map distance {:.4e}, {elapsed:.1}s",
            md.value
        ),
    );
}

#[test]
fn criterion_03_loop_transport_drift_obeys_the_curvature_envelope() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Flat rectangle: transport returns the seed exactly.
    let flat = scenario("flat_torus_pair");
    let bench = flat.holonomy_bench.as_ref().unwrap();
    let edges = bench.loops[0].edges(&flat.total, flat.trust_radius).unwrap();
    let rectangle =
        holonomy_experiment(&edges, &vec_from(&[1.0, 0.0]), "rectangle", 1e-12).unwrap();
    check!(faults, rectangle.lhs == 0.0, "flat drift {} ≠ 0", rectangle.lhs);
    check!(faults, rectangle.pass, "flat rectangle failed its envelope");

    // Sphere octant: drift² = 2 − 2cos(π/2) = 2, and the curvature envelope
    // holds; halving the enclosed area cuts the drift accordingly.
    let sphere = scenario("sphere");
    let loops = &sphere.holonomy_bench.as_ref().unwrap().loops;
    let mut drifts = BTreeMap::new();
    for label in ["triangle", "triangle_half_area"] {
        let spec = loops.iter().find(|l| l.label == label).unwrap();
        let g = sphere.total.metric_at(&spec.vertices[0]).unwrap();
        let seed = vec_from(&[1.0, 0.0]);
        let v0 = &seed / g.norm(&seed);
        let edges = spec.edges(&sphere.total, sphere.trust_radius).unwrap();
        let report = holonomy_experiment(&edges, &v0, label, 1e-9).unwrap();
        check!(faults, report.pass, "{label} exceeded its envelope (margin {})", report.margin);
        drifts.insert(label, report.lhs);
    }
    let octant = drifts["triangle"];
    let half = drifts["triangle_half_area"];
    check!(faults, (octant - 2.0).abs() < 1e-3, "octant drift² {octant} ∉ 2±1e-3");
    let ratio = half / octant;
    check!(faults, ratio > 0.175 && ratio < 0.325, "area-halving ratio {ratio} ∉ ¼±30%");

    let elapsed = budget(&mut faults, started, 30.0);
    verdict(
        3,
        "loop transport drift obeys the curvature envelope",
        faults,
        format!(
            "flat drift {}, octant drift² {octant:.6}, half-area ratio {ratio:.4}, {elapsed:.1}s",
            rectangle.lhs
        ),
    );
}

#[test]
fn criterion_04_curve_deviation_stays_under_the_cubic_envelope() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Unit circle vs its tangent line on the flat plane: the envelope
    // reduces to s³/3 and the measured gap is 1 − cos s.
    let plane = scenario("plane_curves");
    let bench = plane.deviation_bench.as_ref().unwrap();
    let (alpha, beta) = bench.curves(&plane.total).unwrap();
    let flat = deviation_experiment(&alpha, &beta, &bench.s_grid, plane.trust_radius, 1e-9)
        .unwrap();
    check!(faults, flat.report.pass, "circle left the envelope (margin {})", flat.report.margin);
    let at_one = flat
        .series
        .iter()
        .min_by(|p, q| (p.0 - 1.0).abs().partial_cmp(&(q.0 - 1.0).abs()).unwrap())
        .copied()
        .unwrap();
    check!(faults, (at_one.0 - 1.0).abs() < 1e-9, "no station at s = 1");
    check!(faults, (at_one.1 - (1.0 - 1.0f64.cos())).abs() < 1e-6, "gap(1) = {}", at_one.1);
    check!(faults, (at_one.2 - 1.0 / 3.0).abs() < 1e-3, "envelope(1) = {} ∉ ⅓±1e-3", at_one.2);

    // Rippled torus: a geodesic vs the chart line from the same start; the
    // measured separation grows at second order and stays enveloped.
    let rippled = scenario("perturbed_torus");
    let bench = rippled.deviation_bench.as_ref().unwrap();
    let (alpha, beta) = bench.curves(&rippled.total).unwrap();
    let out = deviation_experiment(&alpha, &beta, &bench.s_grid, rippled.trust_radius, 1e-9)
        .unwrap();
    check!(faults, out.report.pass, "rippled pair left the envelope (margin {})", out.report.margin);
    check!(faults, out.slope > 1.25 && out.slope <= 2.0, "growth order {} ∉ (1.25, 2]", out.slope);

    let elapsed = budget(&mut faults, started, 60.0);
    verdict(
        4,
        "geodesic deviation stays under the cubic envelope",
        faults,
        format!(
            "gap(1) {:.8}, envelope(1) {:.6}, rippled growth order {:.4}, {elapsed:.1}s",
            at_one.1, at_one.2, out.slope
        ),
    );
}

#[test]
fn criterion_05_fiber_variation_and_tilt_obey_their_growth_bounds() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Warped product: the lift-length ratio must reproduce the radius
    // profile w(r) = 1 + b·r² and sit inside the exponential envelope.
    let warped = scenario("warped_product");
    let bench = warped.variation_bench.as_ref().unwrap();
    let b = warped.params["b"];
    let r0 = bench.x0[0];
    let mut warp_gap = 0.0f64;
    for &r in &bench.r_values {
        let out = variation_bound_experiment(
            &warped.f1,
            &bench.x0,
            &bench.vertical_seed,
            &bench.base_dir,
            r,
            1e-3,
        )
        .unwrap();
        check!(faults, out.upper.pass && out.lower.pass, "warped envelope failed at r={r}");
        let expected = (1.0 + b * (r0 + r) * (r0 + r)) / (1.0 + b * r0 * r0);
        warp_gap = warp_gap.max((out.ratio - expected).abs());
    }
    check!(faults, warp_gap < 1e-4, "warp profile gap {warp_gap:.2e} ≥ 1e-4");

    // Geodesic fibers: the ratio is pinned at one.
    let hopf = scenario("hopf");
    let vbench = hopf.variation_bench.as_ref().unwrap();
    let mut hopf_gap = 0.0f64;
    for &r in &vbench.r_values {
        let out = variation_bound_experiment(
            &hopf.f1,
            &vbench.x0,
            &vbench.vertical_seed,
            &vbench.base_dir,
            r,
            1e-3,
        )
        .unwrap();
        check!(faults, out.upper.pass && out.lower.pass, "fibration envelope failed at r={r}");
        hopf_gap = hopf_gap.max((out.ratio - 1.0).abs());
    }
    check!(faults, hopf_gap < 1e-3, "fibration ratio drifted {hopf_gap:.2e} from 1");

    // Vertical tilt on the fibration: bounded with the default constant,
    // and linear in the radius while the radius is small.
    let tbench = hopf.vertical_bench.as_ref().unwrap();
    let mut tilts = Vec::new();
    let mut fitted: f64 = 0.0;
    for &r in &tbench.r_values {
        let report = vertical_component_experiment(
            &hopf.f1,
            &tbench.x0,
            &tbench.transversal_dir,
            &tbench.base_dir,
            r,
            2.0,
            1e-9,
        )
        .unwrap();
        check!(faults, report.pass, "tilt bound failed at r={r} (margin {})", report.margin);
        fitted = fitted.max(report.parameters["c_fitted"]);
        tilts.push(report.lhs);
    }
    check!(faults, fitted < 2.0, "fitted constant {fitted} ≥ configured 2");
    for pair in tilts.windows(2) {
        let ratio = pair[1] / pair[0];
        check!(faults, ratio > 1.7 && ratio < 2.3, "tilt doubling ratio {ratio} ∉ 2±15%");
    }

    // Integrable horizontal planes: no tilt at all.
    let product = scenario("torus3_product");
    let pbench = product.vertical_bench.as_ref().unwrap();
    let flat_tilt = vertical_component_experiment(
        &product.f1,
        &pbench.x0,
        &pbench.transversal_dir,
        &pbench.base_dir,
        pbench.r_values[0],
        2.0,
        1e-9,
    )
    .unwrap()
    .lhs;
    check!(faults, flat_tilt < 1e-5, "product tilt {flat_tilt:.2e} ≥ 1e-5");

    let elapsed = budget(&mut faults, started, 120.0);
    verdict(
        5,
        "fiber variation and vertical tilt obey their growth bounds",
        faults,
        format!(
            "warp profile gap {warp_gap:.1e}, fibration ratio gap {hopf_gap:.1e}, fitted \
             constant {fitted:.2}, product tilt {flat_tilt:.1e}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_06_rescaling_leaves_scale_free_quantities_fixed() {
    let started = Instant::now();
    let mut faults = Vec::new();

    let sc = scenario("flat_torus_pair");
    let samples = sc.sample_grid(16);
    let mut eps = 0.0f64;
    for x in &samples {
        eps = eps.max(sc.f2.distortion_at(x).unwrap().delta);
    }
    let lambdas = [10.0, 1.0 / eps];
    let mut drift = 0.0f64;
    for &lambda in &lambdas {
        let report = rescaling_invariance_experiment(
            &sc.f1,
            &sc.f2,
            sc.trust_radius,
            lambda,
            &samples,
            1e-6,
        )
        .unwrap();
        check!(faults, report.pass, "λ={lambda}: drift {} ≥ 1e-6", report.lhs);
        drift = drift.max(report.lhs);
    }

    let elapsed = budget(&mut faults, started, 10.0);
    verdict(
        6,
        "metric rescaling leaves scale-free quantities fixed",
        faults,
        format!("worst drift {drift:.2e} over λ ∈ {{10, 1/{eps:.4}}}, {elapsed:.1}s"),
    );
}

#[test]
fn criterion_07_pullback_defect_certifies_no_isometric_matching() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Twisted pair: the defect is (1 + a·cos σ)⁻² − 1 along the twist, so
    // its grid supremum must match an independent one-dimensional sweep.
    let sc = scenario("flat_torus_pair");
    let a = sc.params["a"];
    let measured = sharpness_check(&sc, &[24, 24]).unwrap();
    let mut swept = 0.0f64;
    for k in 0..=20_000 {
        let sigma = TAU * k as f64 / 20_000.0;
        swept = swept.max(((1.0 + a * sigma.cos()).powi(-2) - 1.0).abs());
    }
    check!(
        faults,
        (measured.gap - swept).abs() < 1e-3,
        "grid gap {} vs swept {swept} differ ≥ 1e-3",
        measured.gap
    );
    check!(faults, measured.gap > 1.0, "gap {} lost its order of magnitude", measured.gap);

    // Untwisted copy: the pair is isometric and the defect collapses.
    let plain = scenario_with("flat_torus_pair", "a", 0.0);
    let zero = sharpness_check(&plain, &[24, 24]).unwrap();
    check!(faults, zero.gap < 1e-6, "isometric pair shows defect {}", zero.gap);

    let elapsed = budget(&mut faults, started, 60.0);
    verdict(
        7,
        "pullback defect certifies that no isometric matching exists",
        faults,
        format!(
            "grid gap {:.8} vs swept {swept:.8} (witness {:?}), isometric gap {:.1e}, \
             {elapsed:.1}s",
            measured.gap,
            (measured.witness[0], measured.witness[1]),
            zero.gap
        ),
    );
}

#[test]
fn criterion_08_curvature_transport_and_integration_match_closed_forms() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Flat torus: Ricci vanishes.
    let flat = scenario("flat_torus_pair");
    let mut ricci = 0.0f64;
    for x in [pt(&[0.7, 1.3]), pt(&[3.1, 4.9]), pt(&[5.5, 0.2])] {
        ricci = ricci.max(flat.total.curvature_at(&x).unwrap().ricci_operator_norm);
    }
    check!(faults, ricci < 1e-5, "flat Ricci norm {ricci:.2e} ≥ 1e-5");

    // Unit sphere: all sectional curvatures equal one.
    let sphere = scenario("sphere");
    let mut sec_gap = 0.0f64;
    for x in [pt(&[1.0, 0.5]), pt(&[FRAC_PI_2, 2.0]), pt(&[2.0, 4.0])] {
        let (lo, hi) = sphere.total.curvature_at(&x).unwrap().sectional_range;
        sec_gap = sec_gap.max((lo - 1.0).abs()).max((hi - 1.0).abs());
    }
    check!(faults, sec_gap < 1e-3, "sphere sectional gap {sec_gap:.2e} ≥ 1e-3");

    // Geodesic integrator: halving the step divides the endpoint error by
    // at least 8 (fourth order gives 16).
    let m = &sphere.total;
    let x = pt(&[1.0, 0.5]);
    let v = vec_from(&[0.4, 0.9]);
    let reference = integrate_geodesic(m, &x, &v, 1.0, 4096).unwrap().end().clone();
    let mut errors = Vec::new();
    for steps in [64usize, 128, 256] {
        let end = integrate_geodesic(m, &x, &v, 1.0, steps).unwrap().end().clone();
        errors.push(m.displacement(&end, &reference).norm());
    }
    let mut worst_ratio = f64::INFINITY;
    for pair in errors.windows(2) {
        worst_ratio = worst_ratio.min(pair[0] / pair[1]);
    }
    check!(faults, worst_ratio >= 8.0, "integrator convergence ratio {worst_ratio:.2} < 8");

    // Parallel transport preserves inner products along a quarter circle.
    let start = pt(&[FRAC_PI_2, 0.4]);
    let tip = pt(&[0.955316618124509, 0.4 + PI / 4.0]);
    let dir = log_map(m, &start, &tip, sphere.trust_radius).unwrap();
    let edge = integrate_geodesic(m, &start, &dir, 1.0, default_steps(1.0)).unwrap();
    let u = vec_from(&[0.7, -0.3]);
    let w = vec_from(&[0.2, 1.1]);
    let ut = parallel_transport(&edge, &u).unwrap();
    let wt = parallel_transport(&edge, &w).unwrap();
    let before = m.metric_at(&start).unwrap().inner(&u, &w);
    let after = m.metric_at(edge.end()).unwrap().inner(ut.end(), wt.end());
    let ip_drift = (after - before).abs();
    check!(faults, ip_drift < 1e-8, "inner-product drift {ip_drift:.2e} ≥ 1e-8");

    let elapsed = budget(&mut faults, started, 30.0);
    verdict(
        8,
        "curvature, transport, and integration match closed forms",
        faults,
        format!(
            "flat Ricci {ricci:.1e}, sphere sectional gap {sec_gap:.1e}, convergence ratio \
             {worst_ratio:.1}, transport drift {ip_drift:.1e}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn criterion_09_transversality_probe_separates_nested_from_regular_pairs() {
    let started = Instant::now();
    let mut faults = Vec::new();

    // Projections onto orthogonal circle factors share no fiber direction
    // transverse to each other: the restricted differential is singular.
    let nested = scenario("torus3_orthogonal");
    let bench = nested.transversal_bench.as_ref().unwrap();
    let singular = transversality_check(
        &nested.f1,
        &nested.f2,
        &bench.center,
        &bench.x,
        nested.trust_radius,
    )
    .unwrap();
    check!(
        faults,
        singular.min_singular_value < 1e-5,
        "orthogonal factors kept rank: σ_min = {:.2e}",
        singular.min_singular_value
    );
    check!(faults, singular.singular, "orthogonal factors not flagged singular");

    // The same projection against itself in product form stays regular.
    let product = scenario("torus3_product");
    let bench = product.transversal_bench.as_ref().unwrap();
    let regular = transversality_check(
        &product.f1,
        &product.f2,
        &bench.center,
        &bench.x,
        product.trust_radius,
    )
    .unwrap();
    check!(
        faults,
        (regular.min_singular_value - 1.0).abs() < 1e-5,
        "product projection σ_min = {} ∉ 1±1e-5",
        regular.min_singular_value
    );
    check!(faults, !regular.singular, "product projection wrongly flagged singular");

    let elapsed = budget(&mut faults, started, 10.0);
    verdict(
        9,
        "transversality probe separates nested from regular pairs",
        faults,
        format!(
            "nested σ_min {:.1e} (singular), product σ_min {:.6} (regular), {elapsed:.1}s",
            singular.min_singular_value, regular.min_singular_value
        ),
    );
}

#[test]
fn criterion_10_reports_are_deterministic_across_worker_counts() {
    let started = Instant::now();
    let mut faults = Vec::new();

    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/torus_a03_full.toml");
    let config = ExperimentConfig::load(std::path::Path::new(path)).unwrap();

    let mut jsons = Vec::new();
    let mut csvs = Vec::new();
    for jobs in [1usize, 4, 8] {
        let report = run(&config, jobs).unwrap();
        check!(faults, report.all_pass, "run with {jobs} workers did not pass");
        jsons.push(normalized_json(&json_report(&report)));
        csvs.push(csv_report(&report));
    }
    check!(faults, jsons[0] == jsons[1] && jsons[1] == jsons[2], "json differs across workers");
    check!(faults, csvs[0] == csvs[1] && csvs[1] == csvs[2], "csv differs across workers");

    let elapsed = budget(&mut faults, started, 60.0);
    verdict(
        10,
        "reports are byte-identical across worker counts",
        faults,
        format!(
            "{} bytes of json and {} of csv agree for 1, 4, and 8 workers, {elapsed:.1}s",
            jsons[0].len(),
            csvs[0].len()
        ),
    );
}
