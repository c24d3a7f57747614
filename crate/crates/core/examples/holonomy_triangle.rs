//! Parallel transport around closed loops, against the loop-length envelope.
//!
//! Transporting a unit vector around a geodesic triangle on the round
//! sphere rotates it by the enclosed area; around any loop on a flat torus
//! it returns unchanged. The squared drift is compared to the envelope
//! `m⁵ C³ μ² l²` of the chart constants, and the recovered rotation angle
//! is printed next to the enclosed area.

use std::collections::BTreeMap;

use sublab::bounds::holonomy_experiment;
use sublab::geometry::Vector;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    println!(
        "{:<22} {:>9} {:>13} {:>13} {:>9} {:>6}",
        "loop", "length", "|drift|^2", "envelope", "angle", "pass"
    );

    let sphere = build_scenario("sphere", &BTreeMap::new())?;
    for lp in &sphere.holonomy_bench.as_ref().unwrap().loops {
        let edges = lp.edges(&sphere.total, sphere.trust_radius)?;
        let g = sphere.total.metric_at(&lp.vertices[0])?;
        let mut seed = Vector::zeros(2);
        seed[0] = 1.0;
        let seed = &seed / g.norm(&seed);
        let report = holonomy_experiment(&edges, &seed, &lp.label, 1e-9)?;
        // |v - v'|² = 2 - 2 cos(angle) for an isometric return map.
        let angle = (1.0 - report.lhs / 2.0).acos();
        println!(
            "{:<22} {:>9.4} {:>13.6e} {:>13.4e} {:>9.5} {:>6}",
            report.name,
            report.parameters["loop_length"],
            report.lhs,
            report.rhs,
            angle,
            report.pass,
        );
    }

    let flat = build_scenario("flat_torus_pair", &BTreeMap::new())?;
    for lp in &flat.holonomy_bench.as_ref().unwrap().loops {
        let edges = lp.edges(&flat.total, flat.trust_radius)?;
        let mut seed = Vector::zeros(2);
        seed[0] = 1.0;
        let report = holonomy_experiment(&edges, &seed, &lp.label, 1e-12)?;
        println!(
            "{:<22} {:>9.4} {:>13.6e} {:>13.4e} {:>9.5} {:>6}",
            report.name,
            report.parameters["loop_length"],
            report.lhs,
            report.rhs,
            (1.0 - report.lhs / 2.0).acos(),
            report.pass,
        );
    }
    Ok(())
}
