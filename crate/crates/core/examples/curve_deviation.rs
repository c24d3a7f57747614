//! Distance between two curves that leave a point together.
//!
//! Both curves are unit-speed and share their start and initial velocity;
//! at each arclength station the half-squared gap must stay under a cubic
//! envelope built from measured chart constants and curve curvatures.
//!
//! * `plane_curves` — a unit circle against its tangent line on the flat
//!   plane: the gap is exactly `1 - cos s` and the envelope is `s³/3`;
//! * `perturbed_torus` — a geodesic of a rippled metric against the chart
//!   straight line with the same start data.
//!
//! The log-log slope of the gap is printed as a growth-order diagnostic
//! (tangent curves separate at order `s²`).

use std::collections::BTreeMap;

use sublab::bounds::deviation_experiment;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    for name in ["plane_curves", "perturbed_torus"] {
        let sc = build_scenario(name, &BTreeMap::new())?;
        let bench = sc.deviation_bench.as_ref().expect("scenario ships a deviation bench");
        let (alpha, beta) = bench.curves(&sc.total)?;
        let out = deviation_experiment(&alpha, &beta, &bench.s_grid, sc.trust_radius, 1e-9)?;

        println!("{name}:");
        println!("  {:>6}  {:>14}  {:>14}", "s", "gap", "envelope");
        for &(s, gap, envelope) in &out.series {
            println!("  {s:>6.2}  {gap:>14.6e}  {envelope:>14.6e}");
        }
        println!(
            "  slope {:.4}, worst margin {:.3e}, pass {}",
            out.slope, out.report.margin, out.report.pass
        );
        println!();
    }
    Ok(())
}
