//! When does fiber transport between two submersions degenerate?
//!
//! The transport map from an `f₁`-fiber to an `f₂`-trivialization slice is
//! a local diffeomorphism exactly while the `f₁`-vertical space stays
//! transversal to the slice. The check measures the smallest framed
//! singular value of the trivialized differential restricted to the
//! vertical space:
//!
//! * projections of the 3-torus onto two *orthogonal* circle factors — the
//!   `f₁`-fibers run inside the `f₂`-slices, the value collapses to zero;
//! * the product projection next to itself — fully transversal, value one.

use std::collections::BTreeMap;

use sublab::bundle::transversality_check;
use sublab::scenarios::build_scenario;

fn main() -> sublab::Result<()> {
    for name in ["torus3_orthogonal", "torus3_product"] {
        let sc = build_scenario(name, &BTreeMap::new())?;
        let bench = sc.transversal_bench.as_ref().expect("scenario ships a transversal bench");
        let report =
            transversality_check(&sc.f1, &sc.f2, &bench.center, &bench.x, sc.trust_radius)?;
        println!(
            "{name:<20} min singular value {:.3e}  singular {}",
            report.min_singular_value, report.singular
        );
    }
    Ok(())
}
