//! The Hopf fibration of the round unit 3-sphere over the 2-sphere of
//! radius one half, expressed in stereographic charts.
//!
//! Upstairs, unit quaternions are charted by stereographic projection from
//! `-1`, which pulls the round metric back to the conformally flat
//! `4 δ / (1 + |u|²)²`. Downstairs, the 2-sphere is charted by stereographic
//! projection from the point antipodal to the image of the chart origin,
//! giving `δ / (1 + |w|²)²` — the half radius is exactly what makes the
//! fibration metric-compatible. The map `q ↦ q i q̄` and its chart Jacobian
//! are assembled from quaternion algebra by the chain rule, so nothing in
//! this module is differenced numerically.

use crate::geometry::{pt, ChartDomain, ChartedManifold, Matrix, Point};
use crate::submersion::SubmersionMap;

/// Half-width of the total-space chart box. Kept well inside the unit chart
/// ball: points with `u₁ = 0, |u| = 1` map onto the base chart's excluded
/// antipode, so the box must stay clear of the unit sphere.
pub const TOTAL_HALF_WIDTH: f64 = 0.45;

/// Half-width of the base chart box; covers the image of the total box with
/// room for base rotations and finite-difference stencils.
pub const BASE_HALF_WIDTH: f64 = 2.6;

/// Geodesic trust radius used for bundle-map work on this pair.
pub const TRUST_RADIUS: f64 = 0.5;

/// Chart point of a unit quaternion `(q₀, q₁, q₂, q₃)` under stereographic
/// projection from `-1`; defined away from `q = -1`.
pub fn quaternion_to_chart(q: &[f64; 4]) -> Point {
    let d = 1.0 + q[0];
    pt(&[q[1] / d, q[2] / d, q[3] / d])
}

/// Unit quaternion of a chart point (inverse of [`quaternion_to_chart`]).
pub fn chart_to_quaternion(u: &Point) -> [f64; 4] {
    let s = u.norm_squared();
    let d = 1.0 + s;
    [(1.0 - s) / d, 2.0 * u[0] / d, 2.0 * u[1] / d, 2.0 * u[2] / d]
}

/// Image of a unit quaternion under `q ↦ q i q̄`, as a unit 3-vector in the
/// imaginary coordinates.
fn sphere_image(q: &[f64; 4]) -> [f64; 3] {
    [
        q[0] * q[0] + q[1] * q[1] - q[2] * q[2] - q[3] * q[3],
        2.0 * (q[1] * q[2] + q[0] * q[3]),
        2.0 * (q[1] * q[3] - q[0] * q[2]),
    ]
}

/// Base chart coordinates of a unit 3-vector, stereographic from
/// `(-1, 0, 0)`; the chart center is the image of the fiber through `1`.
fn sphere_to_chart(x: &[f64; 3]) -> Point {
    let d = 1.0 + x[0];
    pt(&[x[1] / d, x[2] / d])
}

/// The fibration in chart coordinates, without any base rotation.
pub fn chart_map(u: &Point) -> Point {
    sphere_to_chart(&sphere_image(&chart_to_quaternion(u)))
}

/// Closed-form chart Jacobian of [`chart_map`], chained through the
/// quaternion and 2-sphere stages.
pub fn chart_jacobian(u: &Point) -> Matrix {
    let q = chart_to_quaternion(u);
    let x = sphere_image(&q);
    let d = 1.0 + u.norm_squared();

    // Stage one: dq/du of the inverse stereographic chart.
    let mut dq = Matrix::zeros(4, 3);
    for b in 0..3 {
        dq[(0, b)] = -4.0 * u[b] / (d * d);
        for a in 0..3 {
            let kron = if a == b { 2.0 / d } else { 0.0 };
            dq[(a + 1, b)] = kron - 4.0 * u[a] * u[b] / (d * d);
        }
    }

    // Stage two: dx/dq of the quadratic map q ↦ q i q̄.
    #[rustfmt::skip]
    let dx = Matrix::from_row_slice(3, 4, &[
        2.0 * q[0], 2.0 * q[1], -2.0 * q[2], -2.0 * q[3],
        2.0 * q[3], 2.0 * q[2],  2.0 * q[1],  2.0 * q[0],
       -2.0 * q[2], 2.0 * q[3], -2.0 * q[0],  2.0 * q[1],
    ]);

    // Stage three: dw/dx of stereographic projection from (-1, 0, 0).
    let e = 1.0 + x[0];
    #[rustfmt::skip]
    let dw = Matrix::from_row_slice(2, 3, &[
        -x[1] / (e * e), 1.0 / e, 0.0,
        -x[2] / (e * e), 0.0,     1.0 / e,
    ]);

    dw * dx * dq
}

/// The round unit 3-sphere on the chart box `|uᵢ| ≤ 0.45`.
pub fn total_manifold() -> ChartedManifold {
    let w = TOTAL_HALF_WIDTH;
    ChartedManifold::conformally_flat(
        ChartDomain::boxed(&[(-w, w), (-w, w), (-w, w)]),
        |u| (2.0 / (1.0 + u.norm_squared())).ln(),
        |u| (-2.0 / (1.0 + u.norm_squared())) * u,
    )
}

/// The round 2-sphere of radius one half on the chart box `|wᵢ| ≤ 2.6`.
pub fn base_manifold() -> ChartedManifold {
    let w = BASE_HALF_WIDTH;
    ChartedManifold::conformally_flat(
        ChartDomain::boxed(&[(-w, w), (-w, w)]),
        |p| -(1.0 + p.norm_squared()).ln(),
        |p| (-2.0 / (1.0 + p.norm_squared())) * p,
    )
}

/// The fibration composed with a base rotation by `angle` about the axis
/// through the chart center. The rotation acts as a plain rotation of the
/// base chart plane, hence is an isometry, and `angle = 0` gives the
/// fibration itself.
pub fn submersion(angle: f64) -> SubmersionMap {
    let (c, s) = (angle.cos(), angle.sin());
    let rot = Matrix::from_row_slice(2, 2, &[c, -s, s, c]);
    let rot_for_map = rot.clone();
    SubmersionMap::new(total_manifold(), base_manifold(), move |u| &rot_for_map * chart_map(u))
        .with_jacobian(move |u| &rot * chart_jacobian(u))
}

/// Point at phase `t` along the fiber circle through `u0`; fibers are the
/// orbits of right multiplication by `e^{it}`, which are great circles.
/// Only moderate `t` stays inside the chart box.
pub fn fiber_point(u0: &Point, t: f64) -> Point {
    let q = chart_to_quaternion(u0);
    let (c, s) = (t.cos(), t.sin());
    quaternion_to_chart(&[
        q[0] * c - q[1] * s,
        q[0] * s + q[1] * c,
        q[2] * c + q[3] * s,
        q[3] * c - q[2] * s,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples() -> Vec<Point> {
        vec![
            pt(&[0.0, 0.0, 0.0]),
            pt(&[0.2, -0.1, 0.3]),
            pt(&[-0.35, 0.4, 0.1]),
            pt(&[0.4, 0.4, -0.4]),
        ]
    }

    #[test]
    fn chart_and_quaternion_are_inverse() {
        for u in samples() {
            let q = chart_to_quaternion(&u);
            let norm: f64 = q.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-14, "chart points must hit unit quaternions");
            assert!((quaternion_to_chart(&q) - &u).norm() < 1e-14);
        }
    }

    #[test]
    fn image_lies_on_the_unit_sphere() {
        for u in samples() {
            let x = sphere_image(&chart_to_quaternion(&u));
            let norm: f64 = x.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn closed_form_jacobian_matches_finite_differences() {
        let h = 1e-5;
        for u in samples() {
            let jac = chart_jacobian(&u);
            for b in 0..3 {
                let mut up = u.clone();
                let mut dn = u.clone();
                up[b] += h;
                dn[b] -= h;
                let col = (chart_map(&up) - chart_map(&dn)) / (2.0 * h);
                for r in 0..2 {
                    assert!((jac[(r, b)] - col[r]).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn fibration_has_zero_metric_distortion() {
        let f = submersion(0.0);
        for u in samples() {
            let d = f.distortion_at(&u).unwrap();
            assert!(d.delta < 1e-10, "distortion {} at {:?}", d.delta, u.as_slice());
        }
    }

    #[test]
    fn fiber_direction_is_vertical_and_unit_speed() {
        let f = submersion(0.0);
        let h = 1e-6;
        for u in samples() {
            let tangent = (fiber_point(&u, h) - fiber_point(&u, -h)) / (2.0 * h);
            let pushed = chart_jacobian(&u) * &tangent;
            let w = chart_map(&u);
            assert!(f.base().metric_at(&w).unwrap().norm(&pushed) < 1e-6);
            // Fibers of the unit sphere are great circles run at unit speed.
            assert!((f.total().metric_at(&u).unwrap().norm(&tangent) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn fibers_are_totally_geodesic_with_bracket_norm_two() {
        let f = submersion(0.0);
        for u in [pt(&[0.0, 0.0, 0.0]), pt(&[0.2, -0.1, 0.3]), pt(&[-0.3, 0.25, 0.1])] {
            let ii = f.second_fundamental_form_at(&u).unwrap();
            assert!(ii.norm < 1e-5, "fiber bending {} at {:?}", ii.norm, u.as_slice());
            let a = f.integrability_tensor_at(&u).unwrap();
            assert!((a.norm - 2.0).abs() < 1e-4, "bracket norm {} at {:?}", a.norm, u.as_slice());
        }
    }

    #[test]
    fn chart_curvatures_match_the_round_spheres() {
        let total = total_manifold();
        let (lo, hi) = total.curvature_at(&pt(&[0.1, -0.2, 0.25])).unwrap().sectional_range;
        assert!((lo - 1.0).abs() < 1e-4 && (hi - 1.0).abs() < 1e-4);

        let base = base_manifold();
        let (lo, hi) = base.curvature_at(&pt(&[0.4, -0.3])).unwrap().sectional_range;
        assert!((lo - 4.0).abs() < 1e-3 && (hi - 4.0).abs() < 1e-3);
    }

    #[test]
    fn rotation_turns_the_base_image() {
        let angle = 0.3;
        let f = submersion(angle);
        let u = pt(&[0.2, 0.1, -0.15]);
        let w = chart_map(&u);
        let rotated = pt(&[
            angle.cos() * w[0] - angle.sin() * w[1],
            angle.sin() * w[0] + angle.cos() * w[1],
        ]);
        assert!((f.eval(&u).unwrap() - rotated).norm() < 1e-14);
    }
}
