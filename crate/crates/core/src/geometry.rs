//! Charted Riemannian manifolds with finite-difference tensor calculus.
//!
//! A manifold is a single coordinate box with per-axis periodicity and a
//! user-supplied metric field. Christoffel symbols and curvature come from
//! second-order central differences unless a closed form is supplied.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Point = DVector<f64>;
pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Default step for central differences of metric and map fields.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Condition-number limit beyond which curvature is refused.
pub const METRIC_COND_LIMIT: f64 = 1e12;

/// One coordinate axis of a chart box. A periodic axis identifies `lo` with
/// `hi` (period `hi - lo`); a bounded axis is the closed interval `[lo, hi]`.
#[derive(Clone, Debug)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl Axis {
    pub fn bounded(lo: f64, hi: f64) -> Self {
        Axis { lo, hi, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Axis { lo, hi, periodic: true }
    }

    pub fn period(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Axis-aligned chart box with per-axis periodicity flags.
#[derive(Clone, Debug)]
pub struct ChartDomain {
    axes: Vec<Axis>,
}

impl ChartDomain {
    pub fn new(axes: Vec<Axis>) -> Self {
        assert!(!axes.is_empty(), "chart needs at least one axis");
        for a in &axes {
            assert!(a.hi > a.lo, "axis bounds must be increasing");
        }
        ChartDomain { axes }
    }

    /// All-bounded box from `(lo, hi)` pairs.
    pub fn boxed(bounds: &[(f64, f64)]) -> Self {
        Self::new(bounds.iter().map(|&(lo, hi)| Axis::bounded(lo, hi)).collect())
    }

    /// All-periodic box `[0, p)` per axis.
    pub fn torus(periods: &[f64]) -> Self {
        Self::new(periods.iter().map(|&p| Axis::periodic(0.0, p)).collect())
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    /// Wrap periodic coordinates into `[lo, hi)`; bounded axes pass through.
    pub fn wrap(&self, x: &Point) -> Point {
        let mut y = x.clone();
        for (i, a) in self.axes.iter().enumerate() {
            if a.periodic {
                y[i] = a.lo + (y[i] - a.lo).rem_euclid(a.period());
            }
        }
        y
    }

    /// Membership check (after wrapping). Bounded axes reject points outside
    /// `[lo, hi]`.
    pub fn check(&self, x: &Point) -> Result<()> {
        self.check_ball(x, 0.0)
    }

    /// Require that the closed ball of chart radius `radius` around `x` stays
    /// inside the box along every bounded axis (finite-difference stencils).
    pub fn check_ball(&self, x: &Point, radius: f64) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::contract(format!(
                "point dimension {} does not match chart dimension {}",
                x.len(),
                self.dim()
            )));
        }
        for (i, a) in self.axes.iter().enumerate() {
            if !a.periodic && (x[i] - radius < a.lo || x[i] + radius > a.hi) {
                return Err(Error::OutsideChart { axis: i, value: x[i], lo: a.lo, hi: a.hi });
            }
        }
        Ok(())
    }

    /// Minimal-image displacement `to - from`: periodic axes use the shortest
    /// wrapped representative in `(-p/2, p/2]`.
    pub fn displacement(&self, from: &Point, to: &Point) -> Vector {
        let mut d = to - from;
        for (i, a) in self.axes.iter().enumerate() {
            if a.periodic {
                let p = a.period();
                let mut r = d[i].rem_euclid(p);
                if r > 0.5 * p {
                    r -= p;
                }
                d[i] = r;
            }
        }
        d
    }

    /// Deterministic row-major grid. Periodic axes sample `n` points of a full
    /// period without the duplicate endpoint; bounded axes sample the interval
    /// shrunk by `margin` on both ends (inclusive endpoints).
    pub fn grid(&self, counts: &[usize], margin: f64) -> Vec<Point> {
        assert_eq!(counts.len(), self.dim(), "one sample count per axis");
        let axes_samples: Vec<Vec<f64>> = self
            .axes
            .iter()
            .zip(counts)
            .map(|(a, &n)| {
                assert!(n > 0, "grid counts must be positive");
                if a.periodic {
                    (0..n).map(|k| a.lo + a.period() * k as f64 / n as f64).collect()
                } else {
                    let lo = a.lo + margin;
                    let hi = a.hi - margin;
                    if n == 1 {
                        vec![0.5 * (lo + hi)]
                    } else {
                        (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
                    }
                }
            })
            .collect();

        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; self.dim()];
        for _ in 0..total {
            out.push(Point::from_iterator(
                self.dim(),
                idx.iter().enumerate().map(|(ax, &k)| axes_samples[ax][k]),
            ));
            for ax in (0..self.dim()).rev() {
                idx[ax] += 1;
                if idx[ax] < counts[ax] {
                    break;
                }
                idx[ax] = 0;
            }
        }
        out
    }
}

/// Tangent vector stored as chart components at a base point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vector,
}

impl TangentVector {
    pub fn new(base: Point, components: Vector) -> Self {
        assert_eq!(base.len(), components.len(), "base/component dimension mismatch");
        TangentVector { base, components }
    }
}

/// Metric data at a point: the matrix, its inverse, and a Cholesky factor
/// `g = L Lᵀ` used for g-orthonormalization (`a = Lᵀ v` has `|a|₂ = |v|_g`).
#[derive(Clone, Debug)]
pub struct MetricAt {
    pub g: Matrix,
    pub inv: Matrix,
    pub l: Matrix,
}

impl MetricAt {
    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        (u.transpose() * &self.g * v)[(0, 0)]
    }

    pub fn norm(&self, v: &Vector) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// Chart components -> g-orthonormal frame coordinates (`Lᵀ v`).
    pub fn to_frame(&self, v: &Vector) -> Vector {
        self.l.tr_mul(v)
    }

    /// g-orthonormal frame coordinates -> chart components (solve `Lᵀ v = a`).
    pub fn from_frame(&self, a: &Vector) -> Vector {
        self.l
            .transpose()
            .solve_upper_triangular(a)
            .expect("Cholesky factor is invertible")
    }

    /// Same change of coordinates applied to each column of a matrix.
    pub fn from_frame_matrix(&self, a: &Matrix) -> Matrix {
        self.l
            .transpose()
            .solve_upper_triangular(a)
            .expect("Cholesky factor is invertible")
    }
}

/// Christoffel symbols `Γ^k_{ij}` at a point, flattened `k·m² + i·m + j`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Christoffel { dim, data: vec![0.0; dim * dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut c = Christoffel::zeros(dim);
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    c.data[k * dim * dim + i * dim + j] = f(k, i, j);
                }
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[k * self.dim * self.dim + i * self.dim + j]
    }

    /// Largest `|Γ^k_{ij}|` entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Contraction `Γ^k_{ij} u^i v^j` for all k.
    pub fn contract(&self, u: &Vector, v: &Vector) -> Vector {
        let m = self.dim;
        Vector::from_iterator(
            m,
            (0..m).map(|k| {
                let mut s = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        s += self.get(k, i, j) * u[i] * v[j];
                    }
                }
                s
            }),
        )
    }
}

/// Riemann tensor components `R^k_{lij}` (meaning `R(∂_i,∂_j)∂_l = R^k_{lij} ∂_k`),
/// flattened `k·m³ + l·m² + i·m + j`.
#[derive(Clone, Debug)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 { dim, data: vec![0.0; dim * dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize, i: usize, j: usize) -> f64 {
        let m = self.dim;
        self.data[((k * m + l) * m + i) * m + j]
    }

    #[inline]
    fn set(&mut self, k: usize, l: usize, i: usize, j: usize, v: f64) {
        let m = self.dim;
        self.data[((k * m + l) * m + i) * m + j] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Curvature snapshot at a point.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub point: Point,
    pub riemann: Tensor4,
    pub ricci: Matrix,
    /// Operator norm of the Ricci endomorphism `g⁻¹ Ric` (max |eigenvalue|).
    pub ricci_operator_norm: f64,
    /// (min, max) sectional curvature over coordinate 2-planes; `(0, 0)` in
    /// dimension one where no 2-plane exists.
    pub sectional_range: (f64, f64),
}

pub type MetricField = Arc<dyn Fn(&Point) -> Matrix + Send + Sync>;
pub type ChristoffelField = Arc<dyn Fn(&Point) -> Christoffel + Send + Sync>;

/// Smooth manifold presented by one chart box and a metric field. Cloning is
/// cheap (fields are shared).
#[derive(Clone)]
pub struct ChartedManifold {
    domain: ChartDomain,
    metric: MetricField,
    christoffel: Option<ChristoffelField>,
    fd_step: f64,
}

impl fmt::Debug for ChartedManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartedManifold")
            .field("dim", &self.dim())
            .field("domain", &self.domain)
            .field("closed_form_christoffel", &self.christoffel.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ChartedManifold {
    pub fn new(
        domain: ChartDomain,
        metric: impl Fn(&Point) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        ChartedManifold { domain, metric: Arc::new(metric), christoffel: None, fd_step: DEFAULT_FD_STEP }
    }

    /// Conformally flat metric `g = e^{2φ} I`, with the closed-form
    /// Christoffel field `Γ^k_{ij} = δ_{ki} ∂_jφ + δ_{kj} ∂_iφ − δ_{ij} ∂_kφ`
    /// installed. Callers supply the gradient of `φ` so no differencing of
    /// the conformal factor is ever needed.
    pub fn conformally_flat(
        domain: ChartDomain,
        phi: impl Fn(&Point) -> f64 + Send + Sync + 'static,
        grad_phi: impl Fn(&Point) -> Vector + Send + Sync + 'static,
    ) -> Self {
        let m = domain.dim();
        ChartedManifold::new(domain, move |x| (2.0 * phi(x)).exp() * Matrix::identity(m, m))
            .with_christoffel(move |x| {
                let d = grad_phi(x);
                Christoffel::from_fn(m, |k, i, j| {
                    let mut v = 0.0;
                    if k == i {
                        v += d[j];
                    }
                    if k == j {
                        v += d[i];
                    }
                    if i == j {
                        v -= d[k];
                    }
                    v
                })
            })
    }

    /// Install a closed-form Christoffel field; it overrides finite differences.
    pub fn with_christoffel(
        mut self,
        f: impl Fn(&Point) -> Christoffel + Send + Sync + 'static,
    ) -> Self {
        self.christoffel = Some(Arc::new(f));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0, "fd step must be positive");
        self.fd_step = h;
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn domain(&self) -> &ChartDomain {
        &self.domain
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn wrap(&self, x: &Point) -> Point {
        self.domain.wrap(x)
    }

    pub fn displacement(&self, from: &Point, to: &Point) -> Vector {
        self.domain.displacement(from, to)
    }

    /// Raw metric matrix (wrapped, domain-checked, symmetrized).
    pub fn metric_raw(&self, x: &Point) -> Result<Matrix> {
        let y = self.domain.wrap(x);
        self.domain.check(&y)?;
        let g = (self.metric)(&y);
        if g.nrows() != self.dim() || g.ncols() != self.dim() {
            return Err(Error::contract(format!(
                "metric field returned a {}x{} matrix on a dim-{} chart",
                g.nrows(),
                g.ncols(),
                self.dim()
            )));
        }
        Ok(0.5 * (&g + g.transpose()))
    }

    /// Metric with inverse and Cholesky factor; rejects non-positive-definite
    /// values.
    pub fn metric_at(&self, x: &Point) -> Result<MetricAt> {
        let g = self.metric_raw(x)?;
        let chol = nalgebra::Cholesky::new(g.clone()).ok_or_else(|| Error::DegenerateMetric {
            detail: format!("Cholesky failed at {:?}", x.as_slice()),
        })?;
        let inv = chol.inverse();
        Ok(MetricAt { g, inv, l: chol.unpack() })
    }

    /// Christoffel symbols: closed form when installed, otherwise central
    /// differences of the metric with step `fd_step` (stencil radius
    /// `2·fd_step` must stay in the chart).
    pub fn christoffel_at(&self, x: &Point) -> Result<Christoffel> {
        let y = self.domain.wrap(x);
        if let Some(cf) = &self.christoffel {
            self.domain.check(&y)?;
            return Ok(cf(&y));
        }
        self.domain.check_ball(&y, 2.0 * self.fd_step)?;
        let m = self.dim();
        let h = self.fd_step;
        let ga = self.metric_at(&y)?;

        // dg[d] = ∂_d g by central differences.
        let mut dg = Vec::with_capacity(m);
        for d in 0..m {
            let mut xp = y.clone();
            let mut xm = y.clone();
            xp[d] += h;
            xm[d] -= h;
            dg.push((self.metric_raw(&xp)? - self.metric_raw(&xm)?) / (2.0 * h));
        }

        let inv = &ga.inv;
        Ok(Christoffel::from_fn(m, |k, i, j| {
            let mut s = 0.0;
            for l in 0..m {
                s += inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
            }
            0.5 * s
        }))
    }

    /// Riemann tensor by central differences of Christoffel symbols (stencil
    /// radius `4·fd_step`), Ricci by contraction, sectional curvatures over
    /// coordinate 2-planes, and the operator norm of the Ricci endomorphism.
    pub fn curvature_at(&self, x: &Point) -> Result<CurvatureReport> {
        let y = self.domain.wrap(x);
        self.domain.check_ball(&y, 4.0 * self.fd_step)?;
        let m = self.dim();
        let h = self.fd_step;

        let ga = self.metric_at(&y)?;
        let eig = nalgebra::SymmetricEigen::new(ga.g.clone());
        let lam_max = eig.eigenvalues.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lam_min = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if lam_min <= 0.0 {
            return Err(Error::DegenerateMetric {
                detail: format!("non-positive eigenvalue {lam_min:.3e}"),
            });
        }
        let cond = lam_max / lam_min;
        if cond > METRIC_COND_LIMIT {
            return Err(Error::IllConditioned { cond, limit: METRIC_COND_LIMIT });
        }

        let gamma0 = self.christoffel_at(&y)?;
        let mut dgamma = Vec::with_capacity(m);
        for d in 0..m {
            let mut xp = y.clone();
            let mut xm = y.clone();
            xp[d] += h;
            xm[d] -= h;
            let gp = self.christoffel_at(&xp)?;
            let gm = self.christoffel_at(&xm)?;
            dgamma.push(Christoffel::from_fn(m, |k, i, j| {
                (gp.get(k, i, j) - gm.get(k, i, j)) / (2.0 * h)
            }));
        }

        let mut riemann = Tensor4::zeros(m);
        for k in 0..m {
            for l in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        let mut v = dgamma[i].get(k, j, l) - dgamma[j].get(k, i, l);
                        for p in 0..m {
                            v += gamma0.get(k, i, p) * gamma0.get(p, j, l)
                                - gamma0.get(k, j, p) * gamma0.get(p, i, l);
                        }
                        riemann.set(k, l, i, j, v);
                    }
                }
            }
        }

        let mut ricci = Matrix::zeros(m, m);
        for l in 0..m {
            for j in 0..m {
                let mut s = 0.0;
                for i in 0..m {
                    s += riemann.get(i, l, i, j);
                }
                ricci[(l, j)] = s;
            }
        }
        // Symmetrize away finite-difference asymmetry.
        ricci = 0.5 * (&ricci + ricci.transpose());

        let sectional_range = if m < 2 {
            (0.0, 0.0)
        } else {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..m {
                for j in (i + 1)..m {
                    let mut num = 0.0;
                    for k in 0..m {
                        num += ga.g[(k, i)] * riemann.get(k, j, i, j);
                    }
                    let den = ga.g[(i, i)] * ga.g[(j, j)] - ga.g[(i, j)] * ga.g[(i, j)];
                    let kappa = num / den;
                    lo = lo.min(kappa);
                    hi = hi.max(kappa);
                }
            }
            (lo, hi)
        };

        // Operator norm of g⁻¹ Ric via the symmetric form L⁻¹ Ric L⁻ᵀ.
        let a = ga
            .l
            .clone()
            .solve_lower_triangular(&ricci)
            .expect("Cholesky factor is invertible");
        let b = ga
            .l
            .clone()
            .solve_lower_triangular(&a.transpose())
            .expect("Cholesky factor is invertible");
        let sym = 0.5 * (&b + b.transpose());
        let ricci_operator_norm = nalgebra::SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));

        Ok(CurvatureReport { point: y, riemann, ricci, ricci_operator_norm, sectional_range })
    }

    /// Uniform rescale `g -> λ² g`. Christoffel symbols are scale-invariant, so
    /// a closed form carries over unchanged.
    pub fn rescaled(&self, lambda: f64) -> ChartedManifold {
        assert!(lambda > 0.0, "scale factor must be positive");
        let inner = self.metric.clone();
        let s = lambda * lambda;
        ChartedManifold {
            domain: self.domain.clone(),
            metric: Arc::new(move |x: &Point| s * inner(x)),
            christoffel: self.christoffel.clone(),
            fd_step: self.fd_step,
        }
    }
}

/// Convenience: point from a slice.
pub fn pt(coords: &[f64]) -> Point {
    Point::from_column_slice(coords)
}

/// Convenience: vector from a slice.
pub fn vec_from(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_torus() -> ChartedManifold {
        let tau = std::f64::consts::TAU;
        ChartedManifold::new(ChartDomain::torus(&[tau, tau]), |_x| Matrix::identity(2, 2))
    }

    #[test]
    fn wrap_and_displacement_respect_periods() {
        let m = flat_torus();
        let tau = std::f64::consts::TAU;
        let w = m.wrap(&pt(&[-0.5, tau + 0.25]));
        assert!((w[0] - (tau - 0.5)).abs() < 1e-12);
        assert!((w[1] - 0.25).abs() < 1e-12);

        // Shortest representative crosses the seam.
        let d = m.displacement(&pt(&[0.1, 6.0]), &pt(&[6.2, 0.2]));
        assert!((d[0] - (6.1 - tau)).abs() < 1e-12);
        assert!((d[1] - (0.2 + tau - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn constant_metric_has_vanishing_christoffel_and_curvature() {
        let m = flat_torus();
        let x = pt(&[1.0, 2.0]);
        assert!(m.christoffel_at(&x).unwrap().max_abs() < 1e-12);
        let rep = m.curvature_at(&x).unwrap();
        assert!(rep.riemann.max_abs() < 1e-10);
        assert!(rep.ricci_operator_norm < 1e-10);
    }

    #[test]
    fn bounded_axis_rejects_outside_points_and_tight_stencils() {
        let m = ChartedManifold::new(ChartDomain::boxed(&[(-1.0, 1.0)]), |_x| {
            Matrix::identity(1, 1)
        });
        assert!(matches!(m.metric_at(&pt(&[1.5])), Err(Error::OutsideChart { .. })));
        // Inside the box but too close to the edge for the curvature stencil.
        assert!(matches!(m.curvature_at(&pt(&[0.99999])), Err(Error::OutsideChart { .. })));
        assert!(m.curvature_at(&pt(&[0.5])).is_ok());
    }

    #[test]
    fn degenerate_metric_is_refused() {
        let m = ChartedManifold::new(ChartDomain::boxed(&[(-1.0, 1.0), (-1.0, 1.0)]), |x| {
            Matrix::from_diagonal(&vec_from(&[1.0, x[0]]))
        });
        assert!(matches!(m.metric_at(&pt(&[-0.5, 0.0])), Err(Error::DegenerateMetric { .. })));
    }

    #[test]
    fn cholesky_frame_roundtrip_is_g_orthonormal() {
        let m = ChartedManifold::new(ChartDomain::boxed(&[(-2.0, 2.0), (-2.0, 2.0)]), |x| {
            let mut g = Matrix::identity(2, 2);
            g[(0, 0)] = 2.0 + x[0];
            g[(0, 1)] = 0.3;
            g[(1, 0)] = 0.3;
            g[(1, 1)] = 1.5;
            g
        });
        let ga = m.metric_at(&pt(&[0.2, -0.4])).unwrap();
        let v = vec_from(&[0.7, -1.1]);
        let a = ga.to_frame(&v);
        assert!((a.norm() - ga.norm(&v)).abs() < 1e-12);
        assert!((ga.from_frame(&a) - &v).norm() < 1e-12);
        // g·g⁻¹ = I
        assert!((&ga.g * &ga.inv - Matrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn grid_is_row_major_and_respects_margins() {
        let d = ChartDomain::new(vec![Axis::periodic(0.0, 1.0), Axis::bounded(0.0, 1.0)]);
        let g = d.grid(&[2, 3], 0.1);
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], pt(&[0.0, 0.1]));
        assert_eq!(g[1], pt(&[0.0, 0.5]));
        assert_eq!(g[2], pt(&[0.0, 0.9]));
        assert_eq!(g[3], pt(&[0.5, 0.1]));
    }

    #[test]
    fn conformal_christoffel_matches_finite_differences() {
        // Stereographic round 2-sphere: φ = ln 2 − ln(1 + |x|²).
        let phi = |x: &Point| (2.0 / (1.0 + x.norm_squared())).ln();
        let grad = |x: &Point| (-2.0 / (1.0 + x.norm_squared())) * x;
        let dom = || ChartDomain::boxed(&[(-1.5, 1.5), (-1.5, 1.5)]);
        let closed = ChartedManifold::conformally_flat(dom(), phi, grad);
        let numeric = ChartedManifold::new(dom(), move |x| (2.0 * phi(x)).exp() * Matrix::identity(2, 2));
        for p in [pt(&[0.0, 0.0]), pt(&[0.4, -0.7]), pt(&[-1.1, 0.3])] {
            let a = closed.christoffel_at(&p).unwrap();
            let b = numeric.christoffel_at(&p).unwrap();
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((a.get(k, i, j) - b.get(k, i, j)).abs() < 1e-7);
                    }
                }
            }
        }
        // The round unit sphere has sectional curvature one everywhere.
        let (lo, hi) = closed.curvature_at(&pt(&[0.5, -0.2])).unwrap().sectional_range;
        assert!((lo - 1.0).abs() < 1e-4 && (hi - 1.0).abs() < 1e-4);
    }
}
