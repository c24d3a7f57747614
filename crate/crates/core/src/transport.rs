//! Curves and transport: geodesic integration, the log map by shooting,
//! parallel transport, geodesic curvature, and distance from a point to a
//! curve.
//!
//! Curves are stored unwrapped (a continuous lift on periodic axes); metric
//! evaluation wraps internally, so trajectories may cross periodic seams.

use crate::error::{Error, Result};
use crate::geometry::{ChartedManifold, Matrix, Point, Vector};

/// Integration density for geodesics and lifts (fixed-step RK4).
pub const STEPS_PER_UNIT: f64 = 512.0;
pub const MIN_STEPS: usize = 32;

/// Step count for a trajectory of the given arclength at default density.
pub fn default_steps(arclength: f64) -> usize {
    let n = (STEPS_PER_UNIT * arclength.abs()).ceil() as usize;
    n.max(MIN_STEPS)
}

/// Sampled curve on a charted manifold: strictly increasing times with chart
/// points and velocities at each sample.
#[derive(Clone, Debug)]
pub struct DiscreteCurve {
    manifold: ChartedManifold,
    times: Vec<f64>,
    points: Vec<Point>,
    velocities: Vec<Vector>,
}

impl DiscreteCurve {
    pub fn new(
        manifold: ChartedManifold,
        times: Vec<f64>,
        points: Vec<Point>,
        velocities: Vec<Vector>,
    ) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::contract("curve needs at least two samples"));
        }
        if points.len() != times.len() || velocities.len() != times.len() {
            return Err(Error::contract("curve sample arrays must have equal length"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::contract("curve times must be strictly increasing"));
        }
        let m = manifold.dim();
        if points.iter().any(|p| p.len() != m) || velocities.iter().any(|v| v.len() != m) {
            return Err(Error::contract("curve samples must match the manifold dimension"));
        }
        Ok(DiscreteCurve { manifold, times, points, velocities })
    }

    /// Sample a closed-form curve: `f(t) -> (point, velocity)` on a uniform
    /// grid of `n` segments over `[t0, t1]`.
    pub fn from_fn(
        manifold: ChartedManifold,
        t0: f64,
        t1: f64,
        n: usize,
        mut f: impl FnMut(f64) -> (Point, Vector),
    ) -> Result<Self> {
        if n == 0 || t1 <= t0 {
            return Err(Error::contract("from_fn needs n >= 1 and t1 > t0"));
        }
        let mut times = Vec::with_capacity(n + 1);
        let mut points = Vec::with_capacity(n + 1);
        let mut velocities = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let t = t0 + (t1 - t0) * k as f64 / n as f64;
            let (p, v) = f(t);
            times.push(t);
            points.push(p);
            velocities.push(v);
        }
        DiscreteCurve::new(manifold, times, points, velocities)
    }

    pub fn manifold(&self) -> &ChartedManifold {
        &self.manifold
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn velocities(&self) -> &[Vector] {
        &self.velocities
    }

    pub fn t0(&self) -> f64 {
        self.times[0]
    }

    pub fn t1(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn start(&self) -> &Point {
        &self.points[0]
    }

    pub fn end(&self) -> &Point {
        self.points.last().unwrap()
    }

    /// g-norm of the stored velocity at sample `i`.
    pub fn g_speed(&self, i: usize) -> Result<f64> {
        Ok(self.manifold.metric_at(&self.points[i])?.norm(&self.velocities[i]))
    }

    /// g-arclength by the trapezoid rule over sample speeds.
    pub fn length(&self) -> Result<f64> {
        let mut acc = 0.0;
        let mut prev = self.g_speed(0)?;
        for i in 1..self.len() {
            let cur = self.g_speed(i)?;
            acc += 0.5 * (prev + cur) * (self.times[i] - self.times[i - 1]);
            prev = cur;
        }
        Ok(acc)
    }

    /// Chart-norm of the start-to-end minimal-image displacement.
    pub fn closure_gap(&self) -> f64 {
        self.manifold.displacement(self.end(), self.start()).norm()
    }

    /// Cubic Hermite interpolation of position and velocity at time `t`.
    pub fn interpolate(&self, t: f64) -> Result<(Point, Vector)> {
        if t < self.t0() - 1e-9 || t > self.t1() + 1e-9 {
            return Err(Error::contract(format!(
                "time {t} outside curve range [{}, {}]",
                self.t0(),
                self.t1()
            )));
        }
        let t = t.clamp(self.t0(), self.t1());
        // Segment index: last i with times[i] <= t, clamped to a valid segment.
        let mut i = match self.times.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        };
        i = i.min(self.len() - 2);
        let dt = self.times[i + 1] - self.times[i];
        let u = (t - self.times[i]) / dt;
        let (p0, p1) = (&self.points[i], &self.points[i + 1]);
        let (v0, v1) = (&self.velocities[i], &self.velocities[i + 1]);
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        let p = p0 * h00 + v0 * (h10 * dt) + p1 * h01 + v1 * (h11 * dt);
        let d00 = 6.0 * u2 - 6.0 * u;
        let d10 = 3.0 * u2 - 4.0 * u + 1.0;
        let d01 = -6.0 * u2 + 6.0 * u;
        let d11 = 3.0 * u2 - 2.0 * u;
        let v = p0 * (d00 / dt) + v0 * d10 + p1 * (d01 / dt) + v1 * d11;
        Ok((p, v))
    }

    /// Orientation reversal on the same time interval.
    pub fn reversed(&self) -> DiscreteCurve {
        let t0 = self.t0();
        let t1 = self.t1();
        let times = self.times.iter().rev().map(|&t| t0 + (t1 - t)).collect();
        let points = self.points.iter().rev().cloned().collect();
        let velocities: Vec<Vector> = self.velocities.iter().rev().map(|v| -v).collect();
        DiscreteCurve { manifold: self.manifold.clone(), times, points, velocities }
    }

    /// Concatenation; `other` must start where `self` ends (time and position
    /// within 1e-8).
    pub fn concat(&self, other: &DiscreteCurve) -> Result<DiscreteCurve> {
        if (other.t0() - self.t1()).abs() > 1e-8 {
            return Err(Error::contract("concat: time grids do not meet"));
        }
        if self.manifold.displacement(self.end(), other.start()).norm() > 1e-8 {
            return Err(Error::contract("concat: endpoint mismatch"));
        }
        let mut times = self.times.clone();
        let mut points = self.points.clone();
        let mut velocities = self.velocities.clone();
        // Keep the incoming sample at the junction; skip other's duplicate.
        // Bridge any wrap offset so the stored lift stays continuous.
        let offset = self.end() - other.start();
        times.extend_from_slice(&other.times[1..]);
        points.extend(other.points[1..].iter().map(|p| p + &offset));
        velocities.extend_from_slice(&other.velocities[1..]);
        DiscreteCurve::new(self.manifold.clone(), times, points, velocities)
    }
}

/// Fixed-step RK4 integration of the geodesic equation
/// `x'' = -Γ(x)(x', x')` from `(x0, v0)` over `t ∈ [0, t_span]`.
///
/// Leaving the chart along a bounded axis yields an escape error carrying the
/// exit time.
pub fn integrate_geodesic(
    manifold: &ChartedManifold,
    x0: &Point,
    v0: &Vector,
    t_span: f64,
    steps: usize,
) -> Result<DiscreteCurve> {
    if steps == 0 || !(t_span > 0.0) {
        return Err(Error::contract("integrate_geodesic needs steps >= 1 and t_span > 0"));
    }
    manifold.domain().check(&manifold.wrap(x0))?;
    let dt = t_span / steps as f64;
    let mut x = x0.clone();
    let mut v = v0.clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(x.clone());
    velocities.push(v.clone());

    let accel = |x: &Point, v: &Vector, t: f64| -> Result<Vector> {
        match manifold.christoffel_at(x) {
            Ok(c) => Ok(-c.contract(v, v)),
            Err(Error::OutsideChart { .. }) => Err(Error::Escape { time: t }),
            Err(e) => Err(e),
        }
    };

    for k in 0..steps {
        let t = k as f64 * dt;
        let a1 = accel(&x, &v, t)?;
        let x2 = &x + &v * (0.5 * dt);
        let v2 = &v + &a1 * (0.5 * dt);
        let a2 = accel(&x2, &v2, t + 0.5 * dt)?;
        let x3 = &x + &v2 * (0.5 * dt);
        let v3 = &v + &a2 * (0.5 * dt);
        let a3 = accel(&x3, &v3, t + 0.5 * dt)?;
        let x4 = &x + &v3 * dt;
        let v4 = &v + &a3 * dt;
        let a4 = accel(&x4, &v4, t + dt)?;

        x += (&v + &v2 * 2.0 + &v3 * 2.0 + &v4) * (dt / 6.0);
        v += (&a1 + &a2 * 2.0 + &a3 * 2.0 + &a4) * (dt / 6.0);

        let t_next = (k + 1) as f64 * dt;
        if manifold.domain().check(&manifold.wrap(&x)).is_err() {
            return Err(Error::Escape { time: t_next });
        }
        times.push(t_next);
        points.push(x.clone());
        velocities.push(v.clone());
    }
    DiscreteCurve::new(manifold.clone(), times, points, velocities)
}

/// Inverse exponential map by damped-Newton shooting: returns `v` at `base`
/// with `exp_base(v) = target` (endpoint within 1e-8 chart distance).
///
/// `trust_radius` bounds the accepted distance; the chart-displacement norm
/// serves as the surrogate for the pre-check.
pub fn log_map(
    manifold: &ChartedManifold,
    base: &Point,
    target: &Point,
    trust_radius: f64,
) -> Result<Vector> {
    let seed = manifold.displacement(base, target);
    let ga = manifold.metric_at(base)?;
    let seed_len = ga.norm(&seed);
    if seed_len > 1.25 * trust_radius {
        return Err(Error::TrustRadius { distance: seed_len, trust_radius });
    }
    if seed_len < 1e-14 {
        return Ok(Vector::zeros(manifold.dim()));
    }

    let steps = default_steps(seed_len);
    let shoot = |v: &Vector| -> Result<Vector> {
        let c = integrate_geodesic(manifold, base, v, 1.0, steps)?;
        Ok(manifold.displacement(target, c.end()))
    };

    let m = manifold.dim();
    let mut v = seed;
    let mut f = shoot(&v)?;
    let tol = 1e-10;
    for it in 0..50 {
        let fnorm = f.norm();
        if fnorm <= tol {
            let dist = manifold.metric_at(base)?.norm(&v);
            if dist > trust_radius * (1.0 + 1e-9) {
                return Err(Error::TrustRadius { distance: dist, trust_radius });
            }
            return Ok(v);
        }
        // Finite-difference Jacobian of the endpoint residual.
        let h = 1e-6 * v.norm().max(1e-3);
        let mut jac = Matrix::zeros(m, m);
        for i in 0..m {
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[i] += h;
            vm[i] -= h;
            let col = (shoot(&vp)? - shoot(&vm)?) / (2.0 * h);
            jac.set_column(i, &col);
        }
        let delta = jac.lu().solve(&(-&f)).ok_or(Error::NoConvergence {
            what: "geodesic shooting (singular Jacobian)",
            iterations: it,
            residual: fnorm,
        })?;

        // Backtracking line search on the residual norm.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let cand = &v + &delta * step;
            match shoot(&cand) {
                Ok(fc) if fc.norm() < fnorm * (1.0 - 1e-4 * step) => {
                    v = cand;
                    f = fc;
                    accepted = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !accepted {
            return Err(Error::NoConvergence {
                what: "geodesic shooting (line search stalled)",
                iterations: it,
                residual: fnorm,
            });
        }
    }
    Err(Error::NoConvergence { what: "geodesic shooting", iterations: 50, residual: f.norm() })
}

/// Parallel-transported vectors along a curve, one per curve sample.
#[derive(Clone, Debug)]
pub struct TransportedField {
    pub times: Vec<f64>,
    pub vectors: Vec<Vector>,
}

impl TransportedField {
    pub fn end(&self) -> &Vector {
        self.vectors.last().unwrap()
    }
}

/// Parallel transport of `v0` along the curve: RK4 on
/// `v' = -Γ(γ(t))(γ'(t), v)`, one step per curve segment with Hermite
/// midpoints.
pub fn parallel_transport(curve: &DiscreteCurve, v0: &Vector) -> Result<TransportedField> {
    let man = curve.manifold();
    if v0.len() != man.dim() {
        return Err(Error::contract("transported vector must match manifold dimension"));
    }
    let mut v = v0.clone();
    let mut vectors = Vec::with_capacity(curve.len());
    vectors.push(v.clone());

    let rhs = |x: &Point, xdot: &Vector, v: &Vector| -> Result<Vector> {
        Ok(-man.christoffel_at(x)?.contract(xdot, v))
    };

    for i in 0..curve.len() - 1 {
        let (t0, t1) = (curve.times()[i], curve.times()[i + 1]);
        let dt = t1 - t0;
        let (x0, xd0) = (&curve.points()[i], &curve.velocities()[i]);
        let (xm, xdm) = curve.interpolate(0.5 * (t0 + t1))?;
        let (x1, xd1) = (&curve.points()[i + 1], &curve.velocities()[i + 1]);

        let k1 = rhs(x0, xd0, &v)?;
        let k2 = rhs(&xm, &xdm, &(&v + &k1 * (0.5 * dt)))?;
        let k3 = rhs(&xm, &xdm, &(&v + &k2 * (0.5 * dt)))?;
        let k4 = rhs(x1, xd1, &(&v + &k3 * dt))?;
        v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        vectors.push(v.clone());
    }
    Ok(TransportedField { times: curve.times().to_vec(), vectors })
}

/// Geodesic curvature `|∇_{γ'} γ'|_g` at the curve sample nearest to `t`.
/// The curve must be unit-speed there (within 1e-6).
pub fn geodesic_curvature(curve: &DiscreteCurve, t: f64) -> Result<f64> {
    let man = curve.manifold();
    let n = curve.len();
    let i = curve
        .times()
        .iter()
        .enumerate()
        .min_by(|a, b| {
            let da = (a.1 - t).abs();
            let db = (b.1 - t).abs();
            da.partial_cmp(&db).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap()
        .clamp(1, n - 2);

    let ga = man.metric_at(&curve.points()[i])?;
    let speed = ga.norm(&curve.velocities()[i]);
    if (speed - 1.0).abs() > 1e-6 {
        return Err(Error::contract(format!(
            "geodesic_curvature requires unit g-speed (got {speed:.8} at t = {})",
            curve.times()[i]
        )));
    }
    let ddx = (&curve.velocities()[i + 1] - &curve.velocities()[i - 1])
        / (curve.times()[i + 1] - curve.times()[i - 1]);
    let gamma = man.christoffel_at(&curve.points()[i])?;
    let acc = ddx + gamma.contract(&curve.velocities()[i], &curve.velocities()[i]);
    Ok(ga.norm(&acc))
}

/// Result of [`distance_to_curve`]: the minimal distance, the parameter of the
/// foot point, and the realizing geodesic (from the foot point to `x`).
#[derive(Clone, Debug)]
pub struct CurveDistance {
    pub distance: f64,
    pub foot_time: f64,
    pub geodesic: DiscreteCurve,
}

fn point_distance(m: &ChartedManifold, base: &Point, target: &Point, trust: f64) -> Option<f64> {
    match log_map(m, base, target, trust) {
        Ok(v) => m.metric_at(base).ok().map(|g| g.norm(&v)),
        Err(_) => None,
    }
}

/// Distance from `x` to the curve `beta`: scans the sample grid, then refines
/// with golden-section search over the two grid cells adjacent to the minimum
/// (ties toward smaller time). Errors when no sample lies within the trust
/// radius.
pub fn distance_to_curve(
    manifold: &ChartedManifold,
    x: &Point,
    beta: &DiscreteCurve,
    trust_radius: f64,
) -> Result<CurveDistance> {
    let n = beta.len();
    let mut best: Option<(usize, f64)> = None;
    for i in 0..n {
        if let Some(d) = point_distance(manifold, &beta.points()[i], x, trust_radius) {
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
    }
    let (i_best, d_best) = best.ok_or(Error::TrustRadius {
        distance: f64::INFINITY,
        trust_radius,
    })?;

    // Golden-section refinement over the two adjacent cells.
    let mut a = beta.times()[i_best.saturating_sub(1)];
    let mut b = beta.times()[(i_best + 1).min(n - 1)];
    let eval = |t: f64| -> f64 {
        beta.interpolate(t)
            .ok()
            .and_then(|(p, _)| point_distance(manifold, &p, x, trust_radius))
            .unwrap_or(f64::INFINITY)
    };
    let phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..80 {
        if b - a < 1e-10 {
            break;
        }
        // `<=` biases the bracket toward smaller times on ties.
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d);
        }
    }
    let mut t_star = 0.5 * (a + b);
    let mut foot = beta.interpolate(t_star)?.0;

    // Keep the grid sample if refinement did not improve on it.
    let refined = point_distance(manifold, &foot, x, trust_radius).unwrap_or(f64::INFINITY);
    if refined > d_best {
        t_star = beta.times()[i_best];
        foot = beta.points()[i_best].clone();
    }

    let v = log_map(manifold, &foot, x, trust_radius)?;
    let distance = manifold.metric_at(&foot)?.norm(&v);
    let geodesic = if distance < 1e-12 {
        // Degenerate realizing geodesic: constant curve.
        DiscreteCurve::from_fn(manifold.clone(), 0.0, 1.0, 1, |_| {
            (foot.clone(), Vector::zeros(manifold.dim()))
        })?
    } else {
        integrate_geodesic(manifold, &foot, &v, 1.0, default_steps(distance))?
    };
    Ok(CurveDistance { distance, foot_time: t_star, geodesic })
}

/// Unit-g-speed reparametrization of the chart ray `x0 + σ·dir`, integrated to
/// the requested g-arclength. Useful as an "almost geodesic" test curve.
pub fn unit_speed_chart_line(
    manifold: &ChartedManifold,
    x0: &Point,
    dir: &Vector,
    arclength: f64,
    steps: usize,
) -> Result<DiscreteCurve> {
    if steps == 0 || !(arclength > 0.0) {
        return Err(Error::contract("unit_speed_chart_line needs steps >= 1 and arclength > 0"));
    }
    let speed = |sigma: f64| -> Result<f64> {
        let p = x0 + dir * sigma;
        Ok(1.0 / manifold.metric_at(&p)?.norm(dir))
    };
    let dt = arclength / steps as f64;
    let mut sigma = 0.0;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    let mut velocities = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(x0.clone());
    velocities.push(dir * speed(0.0)?);
    for k in 0..steps {
        let k1 = speed(sigma)?;
        let k2 = speed(sigma + 0.5 * dt * k1)?;
        let k3 = speed(sigma + 0.5 * dt * k2)?;
        let k4 = speed(sigma + dt * k3)?;
        sigma += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let t = (k + 1) as f64 * dt;
        times.push(t);
        points.push(x0 + dir * sigma);
        velocities.push(dir * speed(sigma)?);
    }
    DiscreteCurve::new(manifold.clone(), times, points, velocities)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{pt, vec_from, ChartDomain, ChartedManifold};
    use nalgebra::DMatrix;

    fn plane() -> ChartedManifold {
        ChartedManifold::new(ChartDomain::boxed(&[(-10.0, 10.0), (-10.0, 10.0)]), |_x| {
            DMatrix::identity(2, 2)
        })
    }

    #[test]
    fn flat_geodesics_are_straight_lines() {
        let m = plane();
        let c = integrate_geodesic(&m, &pt(&[0.0, 1.0]), &vec_from(&[1.0, -0.5]), 2.0, 64).unwrap();
        assert!((c.end() - pt(&[2.0, 0.0])).norm() < 1e-12);
        assert!((c.g_speed(0).unwrap() - c.g_speed(64).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn flat_log_map_is_displacement() {
        let m = plane();
        let v = log_map(&m, &pt(&[1.0, 1.0]), &pt(&[2.0, 3.0]), 10.0).unwrap();
        assert!((v - vec_from(&[1.0, 2.0])).norm() < 1e-10);
    }

    #[test]
    fn log_map_enforces_trust_radius() {
        let m = plane();
        let err = log_map(&m, &pt(&[0.0, 0.0]), &pt(&[5.0, 0.0]), 1.0).unwrap_err();
        assert!(matches!(err, Error::TrustRadius { .. }));
    }

    #[test]
    fn geodesic_escapes_bounded_chart() {
        let m = ChartedManifold::new(ChartDomain::boxed(&[(-1.0, 1.0)]), |_x| {
            DMatrix::identity(1, 1)
        });
        let err =
            integrate_geodesic(&m, &pt(&[0.0]), &vec_from(&[1.0]), 2.0, 64).unwrap_err();
        match err {
            Error::Escape { time } => assert!((time - 1.0).abs() < 0.1),
            other => panic!("expected escape, got {other:?}"),
        }
    }

    #[test]
    fn flat_parallel_transport_is_constant() {
        let m = plane();
        let c = DiscreteCurve::from_fn(m, 0.0, 1.0, 32, |t| {
            (pt(&[t, t * t]), vec_from(&[1.0, 2.0 * t]))
        })
        .unwrap();
        let f = parallel_transport(&c, &vec_from(&[0.3, -0.7])).unwrap();
        assert!((f.end() - vec_from(&[0.3, -0.7])).norm() < 1e-12);
    }

    #[test]
    fn circle_of_radius_two_has_curvature_one_half() {
        let m = plane();
        let r = 2.0;
        let c = DiscreteCurve::from_fn(m, 0.0, 3.0, 1536, |t| {
            (
                pt(&[r * (t / r).cos(), r * (t / r).sin()]),
                vec_from(&[-(t / r).sin(), (t / r).cos()]),
            )
        })
        .unwrap();
        let k = geodesic_curvature(&c, 1.5).unwrap();
        assert!((k - 0.5).abs() < 1e-5, "got {k}");
    }

    #[test]
    fn geodesic_curvature_requires_unit_speed() {
        let m = plane();
        let c = DiscreteCurve::from_fn(m, 0.0, 1.0, 16, |t| {
            (pt(&[2.0 * t, 0.0]), vec_from(&[2.0, 0.0]))
        })
        .unwrap();
        assert!(matches!(geodesic_curvature(&c, 0.5), Err(Error::Contract(_))));
    }

    #[test]
    fn distance_to_line_in_plane() {
        let m = plane();
        let line = DiscreteCurve::from_fn(m.clone(), -2.0, 2.0, 64, |t| {
            (pt(&[t, 0.0]), vec_from(&[1.0, 0.0]))
        })
        .unwrap();
        let d = distance_to_curve(&m, &pt(&[0.4, 0.9]), &line, 10.0).unwrap();
        assert!((d.distance - 0.9).abs() < 1e-8);
        assert!((d.foot_time - 0.4).abs() < 1e-5);
        assert!((d.geodesic.end() - pt(&[0.4, 0.9])).norm() < 1e-8);
    }

    #[test]
    fn reversal_and_concat_are_consistent() {
        let m = plane();
        let a = DiscreteCurve::from_fn(m.clone(), 0.0, 1.0, 8, |t| {
            (pt(&[t, 0.0]), vec_from(&[1.0, 0.0]))
        })
        .unwrap();
        let b = DiscreteCurve::from_fn(m, 1.0, 2.0, 8, |t| {
            (pt(&[1.0, t - 1.0]), vec_from(&[0.0, 1.0]))
        })
        .unwrap();
        let ab = a.concat(&b).unwrap();
        assert_eq!(ab.len(), 17);
        assert!((ab.end() - pt(&[1.0, 1.0])).norm() < 1e-12);
        let rev = ab.reversed();
        assert!((rev.start() - pt(&[1.0, 1.0])).norm() < 1e-12);
        assert!((rev.t0() - 0.0).abs() < 1e-12 && (rev.t1() - 2.0).abs() < 1e-12);
        assert!((&rev.velocities()[0] - vec_from(&[0.0, -1.0])).norm() < 1e-12);
    }
}
