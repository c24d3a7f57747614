//! Sampled local-control and sampled-correspondence checks.
//!
//! Two refutable sampling checks accompany the exact tensors:
//!
//! * the local-control check verifies on a ball that a map moves points at
//!   most `Q`-times the radius (forward) and that its image stays dense in
//!   the shrunken image ball (backward) — a `Q` below the true stretch is
//!   refuted with a witness;
//! * the correspondence check compares two sampled metric spaces through an
//!   explicit relation, reporting the worst distance distortion and the
//!   density gap of the image.

use std::collections::BTreeMap;

use sublab::geometry::pt;
use sublab::scenarios::build_scenario;
use sublab::submersion::{gha_check, MetricSample};

fn main() -> sublab::Result<()> {
    let sc = build_scenario("flat_torus_pair", &BTreeMap::new())?;
    let x = pt(&[1.0, 1.0]);

    // The twisted projection stretches by at most 1 + a < 1.3, so Q = 1.5
    // passes and Q = 1.05 is refuted.
    for q in [1.5, 1.05] {
        let report = sc.f2.lcl_check(q, &x, 0.4, 200, sc.trust_radius, 11)?;
        print!(
            "local control Q = {q}: pass {}, forward margin {:+.4}, backward gap {:.4}",
            report.pass, report.forward_margin, report.backward_gap
        );
        match &report.witness {
            Some(w) => println!(", witness ({:.3}, {:.3})", w[0], w[1]),
            None => println!(),
        }
    }

    // Pairwise log maps need every pair inside the trust radius, so the
    // samples cover a local patch of each chart rather than the whole box.
    let patch = |lo: f64, step: f64| -> Vec<sublab::geometry::Point> {
        let mut points = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                points.push(pt(&[lo + step * i as f64, lo + step * j as f64]));
            }
        }
        points
    };

    // Same flat patch against itself: the identity correspondence is exact.
    let flat = MetricSample::from_chart(&sc.total, patch(0.6, 0.45), sc.trust_radius)?;
    let identity: Vec<(usize, usize)> = (0..flat.len()).map(|i| (i, i)).collect();
    let same = gha_check(&flat, &flat, &identity, 1e-6)?;
    println!(
        "flat patch vs itself: pass {}, worst distortion {:.3e}, density gap {:.3e}",
        same.pass, same.worst_distortion, same.density_gap
    );

    // Against a round-sphere patch the same chart points are far from
    // isometric.
    let sphere = build_scenario("sphere", &BTreeMap::new())?;
    let curved = MetricSample::from_chart(&sphere.total, patch(0.7, 0.4), sphere.trust_radius)?;
    let n = flat.len().min(curved.len());
    let partial: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
    let crossed = gha_check(&flat, &curved, &partial, 0.05)?;
    println!(
        "flat patch vs sphere patch: pass {}, worst distortion {:.4}, density gap {:.4}",
        crossed.pass, crossed.worst_distortion, crossed.density_gap
    );
    Ok(())
}
