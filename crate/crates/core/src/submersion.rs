//! Submersion analysis: metric-adapted differentials, vertical/horizontal
//! splitting, the second fundamental form of fibers, the integrability tensor
//! of the horizontal distribution, subspace angles, and sampled metric
//! comparison checks.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{ChartedManifold, Matrix, MetricAt, Point, Vector, DEFAULT_FD_STEP};
use crate::transport::{default_steps, integrate_geodesic, log_map};

/// Rank threshold: metric singular values of the differential below this are
/// treated as rank deficiency.
pub const RANK_TOL: f64 = 1e-8;

pub type MapField = Arc<dyn Fn(&Point) -> Point + Send + Sync>;
pub type JacobianField = Arc<dyn Fn(&Point) -> Matrix + Send + Sync>;

/// Smooth map between charted manifolds, expected to be a submersion on the
/// working region. Cloning is cheap.
#[derive(Clone)]
pub struct SubmersionMap {
    total: ChartedManifold,
    base: ChartedManifold,
    map: MapField,
    jacobian: Option<JacobianField>,
    fd_step: f64,
}

impl fmt::Debug for SubmersionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubmersionMap")
            .field("total_dim", &self.total.dim())
            .field("base_dim", &self.base.dim())
            .field("closed_form_jacobian", &self.jacobian.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl SubmersionMap {
    pub fn new(
        total: ChartedManifold,
        base: ChartedManifold,
        map: impl Fn(&Point) -> Point + Send + Sync + 'static,
    ) -> Self {
        assert!(base.dim() <= total.dim(), "base dimension cannot exceed total dimension");
        SubmersionMap { total, base, map: Arc::new(map), jacobian: None, fd_step: DEFAULT_FD_STEP }
    }

    /// Install a closed-form chart Jacobian; it overrides finite differences.
    pub fn with_jacobian(
        mut self,
        jac: impl Fn(&Point) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        assert!(h > 0.0, "fd step must be positive");
        self.fd_step = h;
        self
    }

    pub fn total(&self) -> &ChartedManifold {
        &self.total
    }

    pub fn base(&self) -> &ChartedManifold {
        &self.base
    }

    pub fn fiber_dim(&self) -> usize {
        self.total.dim() - self.base.dim()
    }

    /// Rebuild on uniformly rescaled metrics (`g -> λ²g`, `h -> λ²h`); the
    /// chart map itself is unchanged.
    pub fn rescaled(&self, lambda: f64) -> SubmersionMap {
        SubmersionMap {
            total: self.total.rescaled(lambda),
            base: self.base.rescaled(lambda),
            map: self.map.clone(),
            jacobian: self.jacobian.clone(),
            fd_step: self.fd_step,
        }
    }

    /// Map a point (wrapped and domain-checked on both sides).
    pub fn eval(&self, x: &Point) -> Result<Point> {
        let y = self.total.wrap(x);
        self.total.domain().check(&y)?;
        let fx = (self.map)(&y);
        if fx.len() != self.base.dim() {
            return Err(Error::contract(format!(
                "map returned a {}-vector on a base of dimension {}",
                fx.len(),
                self.base.dim()
            )));
        }
        let fx = self.base.wrap(&fx);
        self.base.domain().check(&fx)?;
        Ok(fx)
    }

    /// Chart Jacobian (n×m): closed form when installed, otherwise central
    /// differences with minimal-image unwrapping of base displacements.
    pub fn differential_at(&self, x: &Point) -> Result<Matrix> {
        let y = self.total.wrap(x);
        if let Some(jf) = &self.jacobian {
            self.total.domain().check(&y)?;
            return Ok(jf(&y));
        }
        self.total.domain().check_ball(&y, self.fd_step)?;
        let m = self.total.dim();
        let n = self.base.dim();
        let h = self.fd_step;
        let mut jac = Matrix::zeros(n, m);
        for j in 0..m {
            let mut xp = y.clone();
            let mut xm = y.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = self.eval(&xp)?;
            let fm = self.eval(&xm)?;
            jac.set_column(j, &(self.base.displacement(&fm, &fp) / (2.0 * h)));
        }
        Ok(jac)
    }

    /// Metric-adapted Jacobian `L_hᵀ J L_g⁻ᵀ`: maps g-orthonormal frame
    /// coordinates to h-orthonormal frame coordinates, so its singular values
    /// are the singular values of `df` in the Riemannian sense.
    fn framed_differential(
        &self,
        jac: &Matrix,
        g: &MetricAt,
        h: &MetricAt,
    ) -> Matrix {
        let a = h.l.tr_mul(jac); // L_hᵀ J, n×m
        // A · L_g⁻ᵀ = (L_g⁻¹ Aᵀ)ᵀ
        let x = g
            .l
            .clone()
            .solve_lower_triangular(&a.transpose())
            .expect("Cholesky factor is invertible");
        x.transpose()
    }

    /// Orthogonal splitting of the tangent space at `x` into the kernel of
    /// `df` (vertical) and its g-complement (horizontal).
    pub fn split_at(&self, x: &Point) -> Result<VerticalSplit> {
        let y = self.total.wrap(x);
        let jac = self.differential_at(&y)?;
        let g = self.total.metric_at(&y)?;
        let hb = self.base.metric_at(&self.eval(&y)?)?;
        let framed = self.framed_differential(&jac, &g, &hb);
        let m = self.total.dim();
        let n = self.base.dim();

        // Basis from the symmetric eigenproblem of framedᵀ framed; singular
        // values from the SVD of framed (more accurate near zero).
        let eig = nalgebra::SymmetricEigen::new(framed.tr_mul(&framed));
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap()
        });

        let mut singular_values = framed.svd(false, false).singular_values.as_slice().to_vec();
        singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        singular_values.truncate(n);
        if n > 0 && singular_values[n - 1] < RANK_TOL {
            return Err(Error::NotASubmersion { min_sv: singular_values[n - 1] });
        }

        let mut horizontal = Matrix::zeros(m, n);
        for (col, &idx) in order[..n].iter().enumerate() {
            horizontal.set_column(col, &g.from_frame(&eig.eigenvectors.column(idx).into_owned()));
        }
        let k = m - n;
        let mut vertical = Matrix::zeros(m, k);
        for (col, &idx) in order[n..].iter().enumerate() {
            vertical.set_column(col, &g.from_frame(&eig.eigenvectors.column(idx).into_owned()));
        }

        Ok(VerticalSplit { point: y, metric: g, vertical, horizontal, singular_values })
    }

    /// Log-distortion `δ(x) = max(|ln σ_1|, |ln σ_n|)` over the metric
    /// singular values of `df` — the smallest δ for which
    /// `e^{-δ}|v| ≤ |df(v)| ≤ e^{δ}|v|` holds on the horizontal space at `x`.
    pub fn distortion_at(&self, x: &Point) -> Result<Distortion> {
        let split = self.split_at(x)?;
        let s = &split.singular_values;
        let delta = s
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.ln().abs()));
        Ok(Distortion { delta, singular_values: s.clone() })
    }

    /// Second fundamental form of the fiber at `x`: `II(T,S) = (∇_T S)^⊥`
    /// for vertical T, S, expressed in the g-orthonormal bases of the split.
    ///
    /// Vertical basis vectors are extended to local vertical fields by
    /// pointwise projection of their constant extensions; derivatives are
    /// central differences with the manifold's fd step.
    pub fn second_fundamental_form_at(&self, x: &Point) -> Result<SecondFundamentalForm> {
        let split = self.split_at(x)?;
        let m = self.total.dim();
        let n = self.base.dim();
        let k = m - n;
        if k == 0 {
            return Ok(SecondFundamentalForm {
                point: split.point,
                components: vec![Matrix::zeros(0, 0); n],
                norm: 0.0,
            });
        }
        let h = self.total.fd_step();
        let gamma = self.total.christoffel_at(&split.point)?;

        // dt[i][a] = ∂_i of the projected extension of vertical basis vector a.
        let mut dt: Vec<Vec<Vector>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut xp = split.point.clone();
            let mut xm = split.point.clone();
            xp[i] += h;
            xm[i] -= h;
            let sp = self.split_at(&xp)?;
            let sm = self.split_at(&xm)?;
            let mut per_axis = Vec::with_capacity(k);
            for a in 0..k {
                let t = split.vertical.column(a).into_owned();
                let tp = sp.project_vertical(&t);
                let tm = sm.project_vertical(&t);
                per_axis.push((tp - tm) / (2.0 * h));
            }
            dt.push(per_axis);
        }

        // Raw (∇_{t_b} T_a)^⊥ in horizontal components, then symmetrized.
        let mut comp = vec![Matrix::zeros(k, k); n];
        for b in 0..k {
            let tb = split.vertical.column(b).into_owned();
            for a in 0..k {
                let ta = split.vertical.column(a).into_owned();
                let mut cov = gamma.contract(&tb, &ta);
                for i in 0..m {
                    cov += &dt[i][a] * tb[i];
                }
                for j in 0..n {
                    let hj = split.horizontal.column(j).into_owned();
                    comp[j][(b, a)] += split.metric.inner(&cov, &hj);
                }
            }
        }
        for c in comp.iter_mut() {
            *c = 0.5 * (&*c + c.transpose());
        }

        // Norm: per horizontal component take the extreme eigenvalue of the
        // symmetric form, then the Euclidean norm across components.
        let mut sq = 0.0;
        for c in &comp {
            let extreme = nalgebra::SymmetricEigen::new(c.clone())
                .eigenvalues
                .iter()
                .fold(0.0f64, |acc, &v| acc.max(v.abs()));
            sq += extreme * extreme;
        }

        Ok(SecondFundamentalForm { point: split.point, components: comp, norm: sq.sqrt() })
    }

    /// Integrability tensor of the horizontal distribution at `x`:
    /// `A(X,Y) = [X,Y]^⊤` for horizontal X, Y (vertical part of the bracket of
    /// the projected-constant extensions), expressed in the split bases.
    pub fn integrability_tensor_at(&self, x: &Point) -> Result<IntegrabilityTensor> {
        let split = self.split_at(x)?;
        let m = self.total.dim();
        let n = self.base.dim();
        let k = m - n;
        if n < 2 || k == 0 {
            return Ok(IntegrabilityTensor { point: split.point, pairs: Vec::new(), norm: 0.0 });
        }
        let h = self.total.fd_step();

        // dxf[i][b] = ∂_i of the projected extension of horizontal basis b.
        let mut dxf: Vec<Vec<Vector>> = Vec::with_capacity(m);
        for i in 0..m {
            let mut xp = split.point.clone();
            let mut xm = split.point.clone();
            xp[i] += h;
            xm[i] -= h;
            let sp = self.split_at(&xp)?;
            let sm = self.split_at(&xm)?;
            let mut per_axis = Vec::with_capacity(n);
            for b in 0..n {
                let hb = split.horizontal.column(b).into_owned();
                per_axis.push((sp.project_horizontal(&hb) - sm.project_horizontal(&hb)) / (2.0 * h));
            }
            dxf.push(per_axis);
        }

        let mut pairs = Vec::new();
        let mut norm = 0.0f64;
        for b in 0..n {
            let hb = split.horizontal.column(b).into_owned();
            for c in (b + 1)..n {
                let hc = split.horizontal.column(c).into_owned();
                let mut bracket = Vector::zeros(m);
                for i in 0..m {
                    bracket += &dxf[i][c] * hb[i] - &dxf[i][b] * hc[i];
                }
                let vert = split.project_vertical(&bracket);
                // Components in the g-orthonormal vertical basis.
                let comps = Vector::from_iterator(
                    k,
                    (0..k).map(|a| {
                        split.metric.inner(&vert, &split.vertical.column(a).into_owned())
                    }),
                );
                norm = norm.max(comps.norm());
                pairs.push((b, c, comps));
            }
        }
        Ok(IntegrabilityTensor { point: split.point, pairs, norm })
    }

    /// Sup of base distances `d_h(f1(x), f2(x))` over the supplied sample
    /// points. Both maps must share the base manifold.
    pub fn map_distance(
        &self,
        other: &SubmersionMap,
        samples: &[Point],
        trust_radius: f64,
    ) -> Result<MapDistance> {
        if self.base.dim() != other.base.dim() {
            return Err(Error::contract("map_distance requires a shared base"));
        }
        if samples.is_empty() {
            return Err(Error::contract("map_distance needs at least one sample point"));
        }
        let mut value = f64::NEG_INFINITY;
        let mut witness = samples[0].clone();
        for x in samples {
            let p = self.eval(x)?;
            let q = other.eval(x)?;
            let d = base_point_distance(&self.base, &p, &q, trust_radius)?;
            if d > value {
                value = d;
                witness = x.clone();
            }
        }
        Ok(MapDistance { value, witness })
    }

    /// Sampled local-control check: in the g-ball `B_r(x)`, verify
    /// `B_{r/Q}(f(x)) ⊂ f(B_r(x)) ⊂ B_{Q·r}(f(x))` up to sampling tolerance.
    ///
    /// The forward inclusion is refuted by any sample mapped too far out; the
    /// backward inclusion is checked against the sampled image with a density
    /// tolerance derived from the sample budget. `confidence` is the sample
    /// count.
    pub fn lcl_check(
        &self,
        q_factor: f64,
        x: &Point,
        r: f64,
        sample_budget: usize,
        trust_radius: f64,
        seed: u64,
    ) -> Result<LclReport> {
        if q_factor < 1.0 {
            return Err(Error::contract("lcl_check requires Q >= 1"));
        }
        if sample_budget < 16 {
            return Err(Error::contract("lcl_check needs a sample budget of at least 16"));
        }
        let fx = self.eval(x)?;
        let m = self.total.dim();
        let n = self.base.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // Forward: g-ball samples via the exponential map.
        let g = self.total.metric_at(x)?;
        let mut forward_margin = f64::INFINITY;
        let mut witness: Option<Point> = None;
        let mut images = Vec::with_capacity(sample_budget);
        for _ in 0..sample_budget {
            let dir = sample_unit(&mut rng, m);
            let rho = r * rng.gen::<f64>().powf(1.0 / m as f64);
            let v = g.from_frame(&(dir * rho));
            let ball_pt =
                integrate_geodesic(&self.total, x, &v, 1.0, default_steps(rho))?.end().clone();
            let fy = self.eval(&ball_pt)?;
            let d = base_point_distance(&self.base, &fx, &fy, trust_radius)?;
            let margin = q_factor * r - d;
            if margin < forward_margin {
                forward_margin = margin;
                if margin < 0.0 {
                    witness = Some(ball_pt.clone());
                }
            }
            images.push(fy);
        }

        // Backward: base-ball samples compared against the sampled image.
        let hb = self.base.metric_at(&fx)?;
        let r_in = r / q_factor;
        let density_tol = 3.0
            * q_factor
            * r
            * ((sample_budget as f64).ln() / sample_budget as f64).powf(1.0 / n as f64);
        let mut backward_gap = 0.0f64;
        let mut backward_witness: Option<Point> = None;
        for _ in 0..sample_budget {
            let dir = sample_unit(&mut rng, n);
            let rho = r_in * rng.gen::<f64>().powf(1.0 / n as f64);
            let w = hb.from_frame(&(dir * rho));
            let z = integrate_geodesic(&self.base, &fx, &w, 1.0, default_steps(rho))?
                .end()
                .clone();
            let nearest = nearest_image_distance(&self.base, &z, &images, trust_radius)?;
            if nearest > backward_gap {
                backward_gap = nearest;
                if nearest > density_tol {
                    backward_witness = Some(z.clone());
                }
            }
        }

        let pass = forward_margin >= -1e-9 && backward_gap <= density_tol;
        Ok(LclReport {
            pass,
            q: q_factor,
            radius: r,
            forward_margin,
            backward_gap,
            density_tol,
            witness: witness.or(backward_witness),
            confidence: 2 * sample_budget,
        })
    }
}

/// Distance between two base points via the log map, computed in canonical
/// argument order so the result is exactly symmetric.
pub fn base_point_distance(
    base: &ChartedManifold,
    p: &Point,
    q: &Point,
    trust_radius: f64,
) -> Result<f64> {
    let (a, b) = if lex_le(p, q) { (p, q) } else { (q, p) };
    let v = log_map(base, a, b, trust_radius)?;
    Ok(base.metric_at(a)?.norm(&v))
}

/// Geodesic distance from `z` to the nearest point of `images`.
///
/// A chart-displacement surrogate (measured in the metric at `z`) screens the
/// candidates first; the exact log-map distance is evaluated only for images
/// whose surrogate is within a factor two of the best one. Over the small
/// balls this is used on, metric distortion stays far below that factor, so
/// the screened minimum equals the full minimum.
fn nearest_image_distance(
    base: &ChartedManifold,
    z: &Point,
    images: &[Point],
    trust_radius: f64,
) -> Result<f64> {
    let gz = base.metric_at(z)?;
    let surrogates: Vec<f64> = images
        .iter()
        .map(|fy| gz.norm(&base.displacement(z, fy)))
        .collect();
    let best = surrogates.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut nearest = f64::INFINITY;
    for (fy, &s) in images.iter().zip(&surrogates) {
        if s > 2.0 * best + 1e-12 {
            continue;
        }
        let d = base_point_distance(base, z, fy, trust_radius)?;
        if d < nearest {
            nearest = d;
        }
    }
    Ok(nearest)
}

fn lex_le(a: &Point, b: &Point) -> bool {
    for i in 0..a.len() {
        if a[i] < b[i] {
            return true;
        }
        if a[i] > b[i] {
            return false;
        }
    }
    true
}

fn sample_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        // Box-Muller pairs; rejection only guards against underflow.
        let v = Vector::from_iterator(
            dim,
            (0..dim).map(|_| {
                let u1: f64 = rng.gen::<f64>().max(1e-300);
                let u2: f64 = rng.gen();
                (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
            }),
        );
        let n = v.norm();
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// g-orthogonal splitting at a point: columns of `vertical` span the kernel of
/// `df`, columns of `horizontal` its complement; both sets are g-orthonormal.
#[derive(Clone, Debug)]
pub struct VerticalSplit {
    pub point: Point,
    pub metric: MetricAt,
    pub vertical: Matrix,
    pub horizontal: Matrix,
    /// Metric singular values of `df` (descending, length = base dim).
    pub singular_values: Vec<f64>,
}

impl VerticalSplit {
    pub fn fiber_dim(&self) -> usize {
        self.vertical.ncols()
    }

    /// g-orthogonal projection onto the vertical subspace.
    pub fn project_vertical(&self, w: &Vector) -> Vector {
        let mut out = Vector::zeros(w.len());
        for a in 0..self.vertical.ncols() {
            let col = self.vertical.column(a).into_owned();
            out += &col * self.metric.inner(&col, w);
        }
        out
    }

    /// g-orthogonal projection onto the horizontal subspace.
    pub fn project_horizontal(&self, w: &Vector) -> Vector {
        let mut out = Vector::zeros(w.len());
        for b in 0..self.horizontal.ncols() {
            let col = self.horizontal.column(b).into_owned();
            out += &col * self.metric.inner(&col, w);
        }
        out
    }
}

/// Pointwise log-distortion of a submersion.
#[derive(Clone, Debug)]
pub struct Distortion {
    pub delta: f64,
    pub singular_values: Vec<f64>,
}

/// Second fundamental form of a fiber in split bases: `components[j]` is the
/// symmetric k×k matrix of the j-th horizontal component. `norm` is the sup of
/// `|II(T,T)|_g` over unit vertical T, computed per horizontal component by
/// symmetric diagonalization and combined in Euclidean norm.
#[derive(Clone, Debug)]
pub struct SecondFundamentalForm {
    pub point: Point,
    pub components: Vec<Matrix>,
    pub norm: f64,
}

impl SecondFundamentalForm {
    /// `II(t,t)` in horizontal-basis components for `t` in vertical-basis
    /// coordinates.
    pub fn value(&self, t: &Vector) -> Vector {
        Vector::from_iterator(
            self.components.len(),
            self.components.iter().map(|c| (t.transpose() * c * t)[(0, 0)]),
        )
    }
}

/// Integrability tensor values on horizontal basis pairs; `norm` is the max of
/// `|A(X_b, X_c)|_g` over pairs b < c.
#[derive(Clone, Debug)]
pub struct IntegrabilityTensor {
    pub point: Point,
    pub pairs: Vec<(usize, usize, Vector)>,
    pub norm: f64,
}

/// Sup distance between two maps over a sample, with the maximizing point.
#[derive(Clone, Debug)]
pub struct MapDistance {
    pub value: f64,
    pub witness: Point,
}

/// Outcome of a sampled local-control check.
#[derive(Clone, Debug)]
pub struct LclReport {
    pub pass: bool,
    pub q: f64,
    pub radius: f64,
    /// Min over ball samples of `Q·r - d(f(y), f(x))`; negative refutes the
    /// forward inclusion.
    pub forward_margin: f64,
    /// Max over inner-ball samples of the distance to the sampled image.
    pub backward_gap: f64,
    pub density_tol: f64,
    pub witness: Option<Point>,
    pub confidence: usize,
}

/// Largest principal angle between two equidimensional subspaces at `x`,
/// measured in the g-inner product. Symmetric in its arguments by canonical
/// ordering; range `[0, π/2]`.
pub fn dihedral_angle(
    manifold: &ChartedManifold,
    x: &Point,
    span_a: &Matrix,
    span_b: &Matrix,
) -> Result<f64> {
    if span_a.ncols() != span_b.ncols() || span_a.ncols() == 0 {
        return Err(Error::contract("dihedral_angle needs equidimensional nonzero subspaces"));
    }
    if span_a.nrows() != manifold.dim() || span_b.nrows() != manifold.dim() {
        return Err(Error::contract("subspace bases must match the manifold dimension"));
    }
    let (first, second) = if matrix_lex_le(span_a, span_b) {
        (span_a, span_b)
    } else {
        (span_b, span_a)
    };
    let g = manifold.metric_at(x)?;
    let qa = g_orthonormalize(&g, first)?;
    let qb = g_orthonormalize(&g, second)?;
    // Frame coordinates make the g-inner product Euclidean.
    let c = g.to_frame_matrix(&qa).tr_mul(&g.to_frame_matrix(&qb));
    let sv = c.svd(false, false).singular_values;
    let sigma_min = sv.iter().fold(f64::INFINITY, |a, &b| a.min(b)).clamp(0.0, 1.0);
    Ok(sigma_min.acos())
}

fn matrix_lex_le(a: &Matrix, b: &Matrix) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    true
}

fn g_orthonormalize(g: &MetricAt, span: &Matrix) -> Result<Matrix> {
    // QR in frame coordinates; reject rank-deficient spans.
    let framed = g.to_frame_matrix(span);
    let qr = framed.qr();
    let r = qr.r();
    for i in 0..r.nrows().min(r.ncols()) {
        if r[(i, i)].abs() < 1e-12 {
            return Err(Error::contract("subspace basis is rank deficient"));
        }
    }
    Ok(g.from_frame_matrix(&qr.q()))
}

impl MetricAt {
    /// Frame-coordinate images of the columns of `a` (`Lᵀ a`).
    pub fn to_frame_matrix(&self, a: &Matrix) -> Matrix {
        self.l.tr_mul(a)
    }
}

/// Finite metric space presented by sample points and a symmetric distance
/// matrix.
#[derive(Clone, Debug)]
pub struct MetricSample {
    pub points: Vec<Point>,
    pub dist: Matrix,
}

impl MetricSample {
    pub fn new(points: Vec<Point>, dist: Matrix) -> Result<Self> {
        let n = points.len();
        if dist.nrows() != n || dist.ncols() != n {
            return Err(Error::contract("distance matrix must be square of the sample size"));
        }
        if (0..n).any(|i| dist[(i, i)].abs() > 1e-12) {
            return Err(Error::contract("distance matrix must vanish on the diagonal"));
        }
        if (&dist - dist.transpose()).amax() > 1e-12 {
            return Err(Error::contract("distance matrix must be symmetric"));
        }
        Ok(MetricSample { points, dist })
    }

    /// Pairwise geodesic distances of chart points via the log map.
    pub fn from_chart(
        manifold: &ChartedManifold,
        points: Vec<Point>,
        trust_radius: f64,
    ) -> Result<Self> {
        let n = points.len();
        let mut dist = Matrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = base_point_distance(manifold, &points[i], &points[j], trust_radius)?;
                dist[(i, j)] = d;
                dist[(j, i)] = d;
            }
        }
        MetricSample::new(points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Outcome of a sampled almost-isometry check.
#[derive(Clone, Debug)]
pub struct GhaReport {
    pub pass: bool,
    pub epsilon: f64,
    /// Max over correspondence pairs of `|d_Y - d_X|`.
    pub worst_distortion: f64,
    /// Correspondence indices realizing the worst distortion.
    pub distortion_witness: Option<(usize, usize)>,
    /// Max over Y-samples of the distance to the corresponded image.
    pub density_gap: f64,
}

/// Check that a correspondence between two sampled metric spaces distorts
/// distances by less than `epsilon` and has `epsilon`-dense image in `y`.
pub fn gha_check(
    x: &MetricSample,
    y: &MetricSample,
    correspondence: &[(usize, usize)],
    epsilon: f64,
) -> Result<GhaReport> {
    if correspondence.is_empty() {
        return Err(Error::contract("gha_check needs a nonempty correspondence"));
    }
    for &(i, j) in correspondence {
        if i >= x.len() || j >= y.len() {
            return Err(Error::contract("correspondence index out of range"));
        }
    }
    let mut worst = 0.0f64;
    let mut witness = None;
    for (a, &(i1, j1)) in correspondence.iter().enumerate() {
        for (b, &(i2, j2)) in correspondence.iter().enumerate().skip(a + 1) {
            let d = (y.dist[(j1, j2)] - x.dist[(i1, i2)]).abs();
            if d > worst {
                worst = d;
                witness = Some((a, b));
            }
        }
    }
    let mut density_gap = 0.0f64;
    for j in 0..y.len() {
        let nearest = correspondence
            .iter()
            .map(|&(_, jy)| y.dist[(j, jy)])
            .fold(f64::INFINITY, f64::min);
        density_gap = density_gap.max(nearest);
    }
    Ok(GhaReport {
        pass: worst < epsilon && density_gap < epsilon,
        epsilon,
        worst_distortion: worst,
        distortion_witness: witness,
        density_gap,
    })
}
