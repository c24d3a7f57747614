//! How far a varied lift endpoint tilts into the fiber.
//!
//! Slide the base point of a lifted geodesic family along a transversal
//! direction and project the endpoint variation onto the fiber. The tilt is
//! bounded by `C (a+b) e^{3ε + e^ε|II| r} |A| r` with measured constants and
//! a configured `C` (default 2); the `C` that would make the bound tight is
//! reported alongside. The tilt is created by the bracket tensor `A`, so:
//!
//! * `torus3_product` — integrable horizontal planes, tilt collapses to
//!   rounding noise;
//! * `hopf` — `|A| = 2`, the tilt grows essentially linearly in `r` while
//!   `r` stays small.

use std::collections::BTreeMap;

use sublab::bounds::vertical_component_experiment;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    for name in ["torus3_product", "hopf"] {
        let sc = build_scenario(name, &BTreeMap::new())?;
        let bench = sc.vertical_bench.as_ref().expect("scenario ships a vertical bench");
        println!("{name}:");
        println!(
            "  {:>6}  {:>13}  {:>13}  {:>10}  {:>8}  {:>6}",
            "r", "tilt", "bound", "tilt/r", "fit C", "pass"
        );
        for &r in &bench.r_values {
            let report = vertical_component_experiment(
                &sc.f1,
                &bench.x0,
                &bench.transversal_dir,
                &bench.base_dir,
                r,
                2.0,
                1e-9,
            )?;
            println!(
                "  {:>6.2}  {:>13.6e}  {:>13.6e}  {:>10.6}  {:>8.4}  {:>6}",
                r,
                report.lhs,
                report.rhs,
                report.lhs / r,
                report.parameters["c_fitted"],
                report.pass,
            );
        }
        println!();
    }
    Ok(())
}
