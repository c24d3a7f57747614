//! Horizontal lifting and the fiber-transport map between two submersions
//! over a common base: the map sends each point along the lift of the base
//! geodesic connecting the two images, so that the second submersion of the
//! output equals the first submersion of the input. Includes differential
//! diagnostics (singular values, vertical leakage, horizontal split norms)
//! and a transversality probe for the induced local trivialization.

use crate::error::{Error, Result};
use crate::geometry::{Matrix, Point, Vector, DEFAULT_FD_STEP};
use crate::submersion::SubmersionMap;
use crate::transport::{default_steps, integrate_geodesic, log_map, DiscreteCurve};

/// Maximum h-distance allowed between the image of a lift's start point and
/// the base curve's start point.
pub const LIFT_START_TOL: f64 = 1e-6;

/// Below this minimum singular value the restricted trivialization
/// differential is flagged as singular.
pub const TRANSVERSALITY_SINGULAR_TOL: f64 = 1e-3;

/// Unique horizontal preimage of the base vector `w` under `df` at `x`:
/// the solve `df(u) = w` with `u` g-orthogonal to `ker df`.
///
/// `u = g⁻¹Jᵀλ` with `(J g⁻¹ Jᵀ) λ = w`; the n×n normal matrix is positive
/// definite exactly when `df` has full rank in the metric sense.
pub fn lift_velocity(f: &SubmersionMap, x: &Point, w: &Vector) -> Result<Vector> {
    let jac = f.differential_at(x)?;
    let g = f.total().metric_at(x)?;
    let ginv_jt = &g.inv * jac.transpose();
    let normal = &jac * &ginv_jt;
    let chol = nalgebra::Cholesky::new(normal).ok_or(Error::NotASubmersion { min_sv: 0.0 })?;
    let lambda = chol.solve(w);
    Ok(ginv_jt * lambda)
}

/// Integrate the horizontal lift of `base_curve` through `f`, starting at
/// `start` in the total space.
///
/// The lift solves `c'(t) = (df|ℋ)⁻¹(γ'(t))` with fixed-step RK4, substepping
/// each segment of the base curve so stage evaluations stay inside one
/// interpolation cell. The returned curve samples every substep.
///
/// Contract checks: `f(start)` must match the base curve's start within
/// [`LIFT_START_TOL`], and the endpoint of the lift must project back onto
/// the base curve's endpoint within `1e-6·(1 + length)`.
pub fn horizontal_lift(
    f: &SubmersionMap,
    base_curve: &DiscreteCurve,
    start: &Point,
) -> Result<DiscreteCurve> {
    let base = f.base();
    let fx = f.eval(start)?;
    let start_gap = base
        .metric_at(&fx)?
        .norm(&base.displacement(&fx, base_curve.start()));
    if start_gap > LIFT_START_TOL {
        return Err(Error::contract(format!(
            "lift start maps {start_gap:.3e} away from the base curve start"
        )));
    }

    let times = base_curve.times();
    let nseg = times.len() - 1;
    let base_len = base_curve.length()?;
    // Aim for the usual per-arclength step density, spread across segments.
    let total_steps = default_steps(base_len).max(nseg);
    let per_seg = (total_steps + nseg - 1) / nseg;

    let mut out_times = Vec::with_capacity(nseg * per_seg + 1);
    let mut out_points = Vec::with_capacity(nseg * per_seg + 1);
    let mut out_vels = Vec::with_capacity(nseg * per_seg + 1);

    let mut c = start.clone();
    out_times.push(times[0]);
    out_vels.push(lift_velocity(f, &c, &base_curve.velocities()[0])?);
    out_points.push(c.clone());

    for seg in 0..nseg {
        let h = (times[seg + 1] - times[seg]) / per_seg as f64;
        for sub in 0..per_seg {
            let t = times[seg] + h * sub as f64;
            let (_, w1) = base_curve.interpolate(t)?;
            let (_, w2) = base_curve.interpolate(t + 0.5 * h)?;
            let (_, w3) = base_curve.interpolate(t + h)?;
            let k1 = lift_velocity(f, &c, &w1)?;
            let k2 = lift_velocity(f, &(&c + &k1 * (0.5 * h)), &w2)?;
            let k3 = lift_velocity(f, &(&c + &k2 * (0.5 * h)), &w2)?;
            let k4 = lift_velocity(f, &(&c + &k3 * h), &w3)?;
            c += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let t_next = times[seg] + h * (sub + 1) as f64;
            out_times.push(t_next);
            out_vels.push(lift_velocity(f, &c, &w3)?);
            out_points.push(c.clone());
        }
    }

    // The lift must still sit over the base curve at the far end; RK4 drift
    // beyond this tolerance means the step density or the data are bad.
    let fc = f.eval(&c)?;
    let end_gap = base
        .metric_at(&fc)?
        .norm(&base.displacement(&fc, base_curve.end()));
    if end_gap > 1e-6 * (1.0 + base_len) {
        return Err(Error::contract(format!(
            "lift endpoint drifted {end_gap:.3e} off the base curve"
        )));
    }

    DiscreteCurve::new(f.total().clone(), out_times, out_points, out_vels)
}

/// Fiber-transport map between two submersions of the same charted total
/// space onto the same charted base.
///
/// For each point `x` the map lifts, horizontally through `f2`, the base
/// geodesic running from `f2(x)` to `f1(x)`, and returns the lift's endpoint.
/// By construction `f2 ∘ map = f1` up to integration error.
#[derive(Clone, Debug)]
pub struct BundleMap {
    f1: SubmersionMap,
    f2: SubmersionMap,
    trust_radius: f64,
}

/// Differential diagnostics of the fiber-transport map at one point.
///
/// `singular_values` are the metric singular values of the full differential
/// (frames at the point and its image). `vertical_leakage` is the largest
/// f2-horizontal component of the differential applied to f1-vertical unit
/// vectors; `horizontal_top_norm` the largest f2-vertical component over
/// f1-horizontal unit vectors; `horizontal_bot_range` the extreme f2-
/// horizontal stretches over the same inputs.
#[derive(Clone, Debug)]
pub struct PhiDiagnostics {
    pub point: Point,
    pub phi_point: Point,
    pub commutation_residual: f64,
    pub singular_values: Vec<f64>,
    pub vertical_leakage: f64,
    pub horizontal_top_norm: f64,
    pub horizontal_bot_range: (f64, f64),
}

impl BundleMap {
    /// Pair two submersions sharing total and base charts. `trust_radius`
    /// bounds the base log maps used to connect images.
    pub fn new(f1: SubmersionMap, f2: SubmersionMap, trust_radius: f64) -> Result<BundleMap> {
        if f1.total().dim() != f2.total().dim() || f1.base().dim() != f2.base().dim() {
            return Err(Error::contract(
                "bundle map requires submersions with matching total and base dimensions",
            ));
        }
        if trust_radius <= 0.0 {
            return Err(Error::BadParameter {
                name: "trust_radius".into(),
                detail: "must be positive".into(),
            });
        }
        Ok(BundleMap { f1, f2, trust_radius })
    }

    pub fn f1(&self) -> &SubmersionMap {
        &self.f1
    }

    pub fn f2(&self) -> &SubmersionMap {
        &self.f2
    }

    pub fn trust_radius(&self) -> f64 {
        self.trust_radius
    }

    /// Evaluate the map at `x` (wrapped chart point).
    pub fn at(&self, x: &Point) -> Result<Point> {
        let q = self.f2.eval(x)?;
        let p = self.f1.eval(x)?;
        let base = self.f2.base();
        let v = log_map(base, &q, &p, self.trust_radius)?;
        let speed = base.metric_at(&q)?.norm(&v);
        if speed < 1e-13 {
            return Ok(self.f2.total().wrap(x));
        }
        let gamma = integrate_geodesic(base, &q, &v, 1.0, default_steps(speed))?;
        let lift = horizontal_lift(&self.f2, &gamma, x)?;
        Ok(self.f2.total().wrap(lift.end()))
    }

    /// Central-difference differential of the map in chart components.
    pub fn differential_at(&self, x: &Point, fd_step: f64) -> Result<Matrix> {
        let m = self.f1.total().dim();
        let total = self.f1.total();
        let y = total.wrap(x);
        total.domain().check_ball(&y, fd_step)?;
        let mut jac = Matrix::zeros(m, m);
        for i in 0..m {
            let mut xp = y.clone();
            xp[i] += fd_step;
            let mut xm = y.clone();
            xm[i] -= fd_step;
            let pp = self.at(&xp)?;
            let pm = self.at(&xm)?;
            let col = total.displacement(&pm, &pp) / (2.0 * fd_step);
            jac.set_column(i, &col);
        }
        Ok(jac)
    }

    /// Evaluate the map and decompose its differential against both
    /// submersions' splittings at `x` and at the image point.
    pub fn diagnostics(&self, x: &Point, fd_step: f64) -> Result<PhiDiagnostics> {
        let total = self.f1.total();
        let y = total.wrap(x);
        let phi = self.at(&y)?;
        let jac = self.differential_at(&y, fd_step)?;

        // Commutation residual: h-distance between f2(map(x)) and f1(x),
        // measured as the metric norm of the chart displacement (the points
        // agree to integration accuracy, far inside any chart distortion).
        let p1 = self.f1.eval(&y)?;
        let p2 = self.f2.eval(&phi)?;
        let base = self.f1.base();
        let commutation_residual = base.metric_at(&p1)?.norm(&base.displacement(&p1, &p2));

        let gx = total.metric_at(&y)?;
        let gp = total.metric_at(&phi)?;
        // Metric singular values: frames at x (input) and at the image.
        let framed = gp.to_frame_matrix(&gx.from_frame_matrix(&jac.transpose()).transpose());
        let mut singular_values: Vec<f64> =
            framed.svd(false, false).singular_values.iter().cloned().collect();
        singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());

        let s1 = self.f1.split_at(&y)?;
        let s2 = self.f2.split_at(&phi)?;
        let k = s1.fiber_dim();
        let n = self.f1.base().dim();

        // Images of the f1 bases under the differential, in chart components.
        let push = |basis: &Matrix| -> Matrix { &jac * basis };
        let vert_img = push(&s1.vertical);
        let horiz_img = push(&s1.horizontal);

        // Components against the g-orthonormal f2 bases at the image point.
        let pair = |img: &Matrix, against: &Matrix| -> Matrix {
            against.tr_mul(&(&gp.g * img))
        };
        let leak = pair(&vert_img, &s2.horizontal);
        let top = pair(&horiz_img, &s2.vertical);
        let bot = pair(&horiz_img, &s2.horizontal);

        let sv = |m: &Matrix| -> Vec<f64> {
            if m.nrows() == 0 || m.ncols() == 0 {
                return Vec::new();
            }
            m.clone().svd(false, false).singular_values.iter().cloned().collect()
        };
        let max_sv = |m: &Matrix| sv(m).into_iter().fold(0.0f64, f64::max);

        let vertical_leakage = if k == 0 { 0.0 } else { max_sv(&leak) };
        let horizontal_top_norm = if k == 0 || n == 0 { 0.0 } else { max_sv(&top) };
        let bot_sv = sv(&bot);
        let horizontal_bot_range = if bot_sv.is_empty() {
            (0.0, 0.0)
        } else {
            (
                bot_sv.iter().cloned().fold(f64::INFINITY, f64::min),
                bot_sv.iter().cloned().fold(0.0f64, f64::max),
            )
        };

        Ok(PhiDiagnostics {
            point: y,
            phi_point: phi,
            commutation_residual,
            singular_values,
            vertical_leakage,
            horizontal_top_norm,
            horizontal_bot_range,
        })
    }
}

/// Local trivialization of a submersion over a base ball: sends `x` to the
/// pair (its image, the endpoint of the horizontal lift of the base geodesic
/// from the image to the `center`). On the center fiber the second component
/// is the identity.
#[derive(Clone, Debug)]
pub struct LocalTrivialization {
    f2: SubmersionMap,
    center: Point,
    trust_radius: f64,
}

impl LocalTrivialization {
    pub fn new(f2: SubmersionMap, center: Point, trust_radius: f64) -> Result<LocalTrivialization> {
        let center = f2.base().wrap(&center);
        f2.base().domain().check(&center)?;
        if trust_radius <= 0.0 {
            return Err(Error::BadParameter {
                name: "trust_radius".into(),
                detail: "must be positive".into(),
            });
        }
        Ok(LocalTrivialization { f2, center, trust_radius })
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Full trivialization value `(f2(x), fiber coordinate of x)`.
    pub fn eval(&self, x: &Point) -> Result<(Point, Point)> {
        Ok((self.f2.eval(x)?, self.fiber_coordinate(x)?))
    }

    /// The fiber coordinate: endpoint of the horizontal lift over the base
    /// geodesic from `f2(x)` to the center.
    pub fn fiber_coordinate(&self, x: &Point) -> Result<Point> {
        let q = self.f2.eval(x)?;
        let base = self.f2.base();
        let v = log_map(base, &q, &self.center, self.trust_radius)?;
        let speed = base.metric_at(&q)?.norm(&v);
        if speed < 1e-13 {
            return Ok(self.f2.total().wrap(x));
        }
        let gamma = integrate_geodesic(base, &q, &v, 1.0, default_steps(speed))?;
        let lift = horizontal_lift(&self.f2, &gamma, x)?;
        Ok(self.f2.total().wrap(lift.end()))
    }
}

/// Result of probing the trivialization differential on the f1-vertical
/// subspace.
#[derive(Clone, Debug)]
pub struct TransversalityReport {
    /// Smallest metric singular value of the restricted differential; zero
    /// exactly when the transport map's differential is singular.
    pub min_singular_value: f64,
    /// True when the restriction drops below [`TRANSVERSALITY_SINGULAR_TOL`].
    pub singular: bool,
}

/// Minimum singular value of the trivialization's fiber-coordinate
/// differential restricted to the f1-vertical subspace at `x`, with the
/// trivialization of `f2` centered at base point `p`.
///
/// A zero value means the f1-vertical space is tangent to a radially
/// horizontal slice of the f2-trivialization, which is exactly the failure
/// mode in which the fiber-transport map stops being a local diffeomorphism.
pub fn transversality_check(
    f1: &SubmersionMap,
    f2: &SubmersionMap,
    p: &Point,
    x: &Point,
    trust_radius: f64,
) -> Result<TransversalityReport> {
    let triv = LocalTrivialization::new(f2.clone(), p.clone(), trust_radius)?;
    let total = f1.total();
    let y = total.wrap(x);
    let fd_step = DEFAULT_FD_STEP;
    total.domain().check_ball(&y, fd_step)?;

    let m = total.dim();
    let mut jac = Matrix::zeros(m, m);
    for i in 0..m {
        let mut xp = y.clone();
        xp[i] += fd_step;
        let mut xm = y.clone();
        xm[i] -= fd_step;
        let pp = triv.fiber_coordinate(&xp)?;
        let pm = triv.fiber_coordinate(&xm)?;
        let col = total.displacement(&pm, &pp) / (2.0 * fd_step);
        jac.set_column(i, &col);
    }

    let s1 = f1.split_at(&y)?;
    if s1.fiber_dim() == 0 {
        return Err(Error::contract(
            "transversality probe needs a positive-dimensional vertical space",
        ));
    }
    let image_metric = total.metric_at(&triv.fiber_coordinate(&y)?)?;
    let framed = image_metric.to_frame_matrix(&(&jac * &s1.vertical));
    let svs = framed.svd(false, false).singular_values;
    let min_singular_value = svs.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(TransversalityReport {
        min_singular_value,
        singular: min_singular_value < TRANSVERSALITY_SINGULAR_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pt, vec_from, ChartDomain, ChartedManifold};
    use crate::transport::unit_speed_chart_line;
    use nalgebra::DMatrix;
    use std::f64::consts::TAU;

    fn flat_torus(dim: usize) -> ChartedManifold {
        let periods: Vec<f64> = vec![TAU; dim];
        ChartedManifold::new(ChartDomain::torus(&periods), move |_x| {
            DMatrix::identity(dim, dim)
        })
    }

    fn circle() -> ChartedManifold {
        ChartedManifold::new(ChartDomain::torus(&[TAU]), |_x| DMatrix::identity(1, 1))
    }

    fn canonical_projection() -> SubmersionMap {
        SubmersionMap::new(flat_torus(2), circle(), |x| pt(&[x[1]]))
    }

    fn twisted_projection(a: f64) -> SubmersionMap {
        SubmersionMap::new(flat_torus(2), circle(), move |x| pt(&[x[1] + a * x[1].sin()]))
    }

    #[test]
    fn lift_on_product_stays_in_fiber_direction() {
        let f = canonical_projection();
        let base = integrate_geodesic(&circle(), &pt(&[0.2]), &vec_from(&[1.0]), 0.9, 64).unwrap();
        let lift = horizontal_lift(&f, &base, &pt(&[0.5, 0.2])).unwrap();
        let end = lift.end();
        assert!((end[0] - 0.5).abs() < 1e-10);
        assert!((end[1] - 1.1).abs() < 1e-9);
    }

    #[test]
    fn twisted_lift_tracks_base_curve() {
        let a = 0.3;
        let f = twisted_projection(a);
        let start = pt(&[0.4, 0.7]);
        let q = f.eval(&start).unwrap();
        let base = integrate_geodesic(&circle(), &q, &vec_from(&[1.0]), 0.5, 64).unwrap();
        let lift = horizontal_lift(&f, &base, &start).unwrap();
        // The image of the lift must follow the base curve at every node.
        for (i, t) in lift.times().iter().enumerate() {
            let fx = f.eval(&lift.points()[i]).unwrap();
            let (gx, _) = base.interpolate(*t).unwrap();
            let gap = circle()
                .displacement(&fx, &gx)
                .norm();
            assert!(gap < 1e-6, "tracking gap {gap:.3e} at t={t}");
        }
        // θ₂-speed of the lift is 1/(1 + a cos θ₂).
        for (i, v) in lift.velocities().iter().enumerate() {
            let theta2 = lift.points()[i][1];
            let expected = 1.0 / (1.0 + a * theta2.cos());
            assert!((v[1] - expected).abs() < 1e-5);
            assert!(v[0].abs() < 1e-12);
        }
    }

    #[test]
    fn identical_submersions_give_identity_map() {
        let f = twisted_projection(0.3);
        let map = BundleMap::new(f.clone(), f, 3.0).unwrap();
        let x = pt(&[1.2, 2.5]);
        let phi = map.at(&x).unwrap();
        assert!((phi - &x).norm() < 1e-8);
        let d = map.diagnostics(&x, 1e-4).unwrap();
        assert!(d.commutation_residual < 1e-8);
        for s in &d.singular_values {
            assert!((s - 1.0).abs() < 1e-5);
        }
        assert!(d.vertical_leakage < 1e-5);
    }

    #[test]
    fn twisted_pair_matches_scalar_root_oracle() {
        let a = 0.3;
        let map = BundleMap::new(canonical_projection(), twisted_projection(a), 3.0).unwrap();
        for &theta2 in &[0.3, 1.0, 2.4, 4.0, 5.9] {
            let x = pt(&[0.8, theta2]);
            let phi = map.at(&x).unwrap();
            // Oracle: σ solving σ + a sin σ = θ₂, by bisection-safe Newton.
            let mut sigma = theta2;
            for _ in 0..60 {
                sigma -= (sigma + a * sigma.sin() - theta2) / (1.0 + a * sigma.cos());
            }
            let gap = flat_torus(2)
                .displacement(&phi, &pt(&[0.8, sigma]))
                .norm();
            assert!(gap < 1e-6, "Φ gap {gap:.3e} at θ₂={theta2}");
        }
    }

    #[test]
    fn trivialization_is_identity_on_center_fiber() {
        let f = twisted_projection(0.3);
        let x = pt(&[0.9, 1.7]);
        let p = f.eval(&x).unwrap();
        let triv = LocalTrivialization::new(f, p, 3.0).unwrap();
        let (image, fiber) = triv.eval(&x).unwrap();
        assert!((image - triv.center()).norm() < 1e-12);
        assert!((fiber - &x).norm() < 1e-8);
    }

    #[test]
    fn orthogonal_circle_factors_are_non_transversal() {
        // f1 and f2 project a flat 3-torus onto orthogonal circle factors;
        // the f1-vertical space contains the f2-horizontal direction, so the
        // trivialization collapses it.
        let f1 = SubmersionMap::new(flat_torus(3), circle(), |x| pt(&[x[0]]));
        let f2 = SubmersionMap::new(flat_torus(3), circle(), |x| pt(&[x[1]]));
        let x = pt(&[0.3, 0.7, 1.1]);
        let p = pt(&[1.4]);
        let report = transversality_check(&f1, &f2, &p, &x, 3.0).unwrap();
        assert!(report.min_singular_value.abs() < 1e-5);
        assert!(report.singular);

        // Sanity: probing a submersion against itself is fully transversal.
        let f = twisted_projection(0.2);
        let report = transversality_check(&f, &f.clone(), &pt(&[0.4]), &pt(&[0.2, 0.9]), 3.0).unwrap();
        assert!((report.min_singular_value - 1.0).abs() < 1e-4);
        assert!(!report.singular);
    }

    #[test]
    fn lift_start_must_project_to_curve_start() {
        let f = canonical_projection();
        let base = unit_speed_chart_line(&circle(), &pt(&[0.2]), &vec_from(&[1.0]), 0.5, 32).unwrap();
        let err = horizontal_lift(&f, &base, &pt(&[0.5, 1.9])).unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }
}
