//! Named example geometries with pinned parameters, closed-form reference
//! fields, and experiment inputs.
//!
//! Each scenario bundles a total space, a base, a pair of submersions onto
//! that base, a geodesic trust radius, the curvature assumptions of its
//! working region, and whatever closed forms the construction affords. The
//! closed forms are the ground truth the generic pipeline is checked
//! against: [`Scenario::validate`] sweeps a deterministic grid and compares
//! every reference field with the numerically computed one.

pub mod hopf;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::bundle::BundleMap;
use crate::error::{Error, Result};
use crate::geometry::{
    pt, vec_from, Axis, ChartDomain, ChartedManifold, Christoffel, Matrix, Point, Vector,
};
use crate::submersion::SubmersionMap;
use crate::transport::{
    default_steps, integrate_geodesic, log_map, unit_speed_chart_line, DiscreteCurve,
};

/// Scalar reference field evaluated at total-space chart points.
pub type ScalarOracle = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;
/// Point-valued reference field (used for the horizontal-lift bundle map).
pub type PointOracle = Arc<dyn Fn(&Point) -> Point + Send + Sync>;

/// Closed-form reference values, each paired with the absolute tolerance the
/// numerical pipeline must meet on the validation grid.
#[derive(Clone, Default)]
pub struct Oracles {
    /// The horizontal-lift bundle map `x ↦ Φ(x)`.
    pub phi: Option<(PointOracle, f64)>,
    /// Pointwise metric distortion `δ` of the second submersion.
    pub delta_f2: Option<(ScalarOracle, f64)>,
    /// Fiber bending norm `|II|` of the second submersion.
    pub ii_f2: Option<(ScalarOracle, f64)>,
    /// Horizontal non-integrability norm `|A|` of the second submersion.
    pub a_f2: Option<(ScalarOracle, f64)>,
}

/// Curvature and radius assumptions of the working region, carried as data
/// so experiment reports can echo the regime they ran in.
#[derive(Clone, Debug)]
pub struct Assertions {
    /// Sup of |sectional curvature| upstairs.
    pub abs_sec_total: f64,
    /// Sup of |sectional curvature| downstairs.
    pub abs_sec_base: f64,
    /// Radius within which base geodesics between working points are
    /// treated as unique minimizers.
    pub inj_radius_base: f64,
    /// Conjugate-point-free radius upstairs.
    pub conj_radius_total: f64,
    pub fibers_compact: bool,
}

impl Assertions {
    fn rescaled(&self, lambda: f64) -> Assertions {
        Assertions {
            abs_sec_total: self.abs_sec_total / (lambda * lambda),
            abs_sec_base: self.abs_sec_base / (lambda * lambda),
            inj_radius_base: self.inj_radius_base * lambda,
            conj_radius_total: self.conj_radius_total * lambda,
            fibers_compact: self.fibers_compact,
        }
    }
}

/// Curve pair driven by the geodesic-deviation experiment.
#[derive(Clone, Debug)]
pub enum DeviationKind {
    /// Unit-speed circle of the given radius through the chart origin,
    /// against its tangent line (the first chart axis).
    CircleVsLine { radius: f64 },
    /// Geodesic against the constant-direction chart line with matching
    /// start point and matching unit initial velocity.
    GeodesicVsChartLine { start: Point, dir: Vector },
}

#[derive(Clone, Debug)]
pub struct DeviationBench {
    pub kind: DeviationKind,
    /// Arclength stations where the gap is measured.
    pub s_grid: Vec<f64>,
}

impl DeviationBench {
    /// Materialize the curve pair on the given manifold. The first curve is
    /// parametrized by arclength from its start, so the stations in `s_grid`
    /// can be read off as curve times; the second curve overshoots the last
    /// station so closest points stay interior.
    pub fn curves(&self, m: &ChartedManifold) -> Result<(DiscreteCurve, DiscreteCurve)> {
        let smax = self.s_grid.iter().cloned().fold(0.0f64, f64::max);
        if smax <= 0.0 {
            return Err(Error::contract("deviation stations must contain a positive value"));
        }
        match &self.kind {
            DeviationKind::CircleVsLine { radius } => {
                let r = *radius;
                let alpha = DiscreteCurve::from_fn(m.clone(), 0.0, smax, 512, |s| {
                    (
                        pt(&[r * (s / r).sin(), r * (1.0 - (s / r).cos())]),
                        vec_from(&[(s / r).cos(), (s / r).sin()]),
                    )
                })?;
                let beta = DiscreteCurve::from_fn(m.clone(), -0.5 * r, 1.3 * smax, 1024, |t| {
                    (pt(&[t, 0.0]), vec_from(&[1.0, 0.0]))
                })?;
                Ok((alpha, beta))
            }
            DeviationKind::GeodesicVsChartLine { start, dir } => {
                let v0 = dir / m.metric_at(start)?.norm(dir);
                let alpha = integrate_geodesic(m, start, &v0, smax, default_steps(smax))?;
                let beta =
                    unit_speed_chart_line(m, start, dir, 1.2 * smax, default_steps(1.2 * smax))?;
                Ok((alpha, beta))
            }
        }
    }
}

/// Closed loops for the transport-drift experiment; each loop is the
/// geodesic polygon over its vertices.
#[derive(Clone, Debug)]
pub struct HolonomyBench {
    pub loops: Vec<HolonomyLoop>,
}

#[derive(Clone, Debug)]
pub struct HolonomyLoop {
    pub label: String,
    pub vertices: Vec<Point>,
}

impl HolonomyLoop {
    /// Geodesic edges of the closed polygon over the vertices, each run on
    /// unit time. Consecutive vertices must lie within the trust radius.
    pub fn edges(&self, m: &ChartedManifold, trust_radius: f64) -> Result<Vec<DiscreteCurve>> {
        if self.vertices.len() < 2 {
            return Err(Error::contract("a loop needs at least two vertices"));
        }
        let k = self.vertices.len();
        let mut edges = Vec::with_capacity(k);
        for i in 0..k {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % k];
            let v = log_map(m, a, b, trust_radius)?;
            let steps = default_steps(m.metric_at(a)?.norm(&v));
            edges.push(integrate_geodesic(m, a, &v, 1.0, steps)?);
        }
        Ok(edges)
    }
}

/// Inputs for the fiber-variation growth experiment: flow the vertical part
/// of `vertical_seed` off `x0`, lift the base geodesic shot along
/// `base_dir`, and compare endpoint variation against the measured-growth
/// envelope at each length in `r_values`.
#[derive(Clone, Debug)]
pub struct VariationBench {
    pub x0: Point,
    pub vertical_seed: Vector,
    pub base_dir: Vector,
    pub r_values: Vec<f64>,
}

/// Inputs for the lifted-variation vertical-component experiment: slide the
/// base point along `transversal_dir`, shoot base geodesics along the
/// (transported) `base_dir`, lift each from the lifted transversal, and
/// measure how far the endpoint variation tilts into the fiber.
#[derive(Clone, Debug)]
pub struct VerticalBench {
    pub x0: Point,
    pub transversal_dir: Vector,
    pub base_dir: Vector,
    pub r_values: Vec<f64>,
}

/// Point/center pair probed by the fiber-coordinate transversality check.
#[derive(Clone, Debug)]
pub struct TransversalBench {
    pub x: Point,
    pub center: Point,
}

/// A fully assembled example geometry.
#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    /// Resolved parameters with defaults filled in.
    pub params: BTreeMap<String, f64>,
    pub total: ChartedManifold,
    pub base: ChartedManifold,
    pub f1: SubmersionMap,
    pub f2: SubmersionMap,
    /// Radius within which base geodesics between computed points are
    /// trusted to be minimizing.
    pub trust_radius: f64,
    /// Margin kept from non-periodic chart edges when sampling grids.
    pub grid_margin: f64,
    pub asserted: Assertions,
    pub oracles: Oracles,
    pub deviation_bench: Option<DeviationBench>,
    pub holonomy_bench: Option<HolonomyBench>,
    pub variation_bench: Option<VariationBench>,
    pub vertical_bench: Option<VerticalBench>,
    pub transversal_bench: Option<TransversalBench>,
}

/// Outcome of an oracle sweep: worst absolute gap per reference field.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checked: usize,
    pub worst: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
}

impl Scenario {
    /// Deterministic sample grid on the total chart with roughly
    /// `target` points (equal counts per axis, margins respected).
    pub fn sample_grid(&self, target: usize) -> Vec<Point> {
        let m = self.total.dim();
        let per = (target as f64).powf(1.0 / m as f64).round().max(2.0) as usize;
        self.total.domain().grid(&vec![per; m], self.grid_margin)
    }

    /// Compare every closed-form reference field against the generic
    /// numerical pipeline on a deterministic grid.
    pub fn validate(&self, target_points: usize) -> Result<ValidationReport> {
        let pts = self.sample_grid(target_points);
        let mut worst = BTreeMap::new();
        let mut tolerances = BTreeMap::new();

        if let Some((phi, tol)) = &self.oracles.phi {
            let bundle = BundleMap::new(self.f1.clone(), self.f2.clone(), self.trust_radius)?;
            let mut w = 0.0f64;
            for x in &pts {
                let got = bundle.at(x)?;
                let want = self.total.wrap(&phi(x));
                let gap = self.total.metric_at(&want)?.norm(&self.total.displacement(&want, &got));
                w = w.max(gap);
            }
            worst.insert("phi".to_string(), w);
            tolerances.insert("phi".to_string(), *tol);
        }
        if let Some((delta, tol)) = &self.oracles.delta_f2 {
            let mut w = 0.0f64;
            for x in &pts {
                w = w.max((self.f2.distortion_at(x)?.delta - delta(x)).abs());
            }
            worst.insert("delta".to_string(), w);
            tolerances.insert("delta".to_string(), *tol);
        }
        if let Some((ii, tol)) = &self.oracles.ii_f2 {
            let mut w = 0.0f64;
            for x in &pts {
                w = w.max((self.f2.second_fundamental_form_at(x)?.norm - ii(x)).abs());
            }
            worst.insert("ii".to_string(), w);
            tolerances.insert("ii".to_string(), *tol);
        }
        if let Some((a, tol)) = &self.oracles.a_f2 {
            let mut w = 0.0f64;
            for x in &pts {
                w = w.max((self.f2.integrability_tensor_at(x)?.norm - a(x)).abs());
            }
            worst.insert("a".to_string(), w);
            tolerances.insert("a".to_string(), *tol);
        }

        let pass = worst.iter().all(|(k, v)| *v <= tolerances[k]);
        Ok(ValidationReport { checked: pts.len(), worst, tolerances, pass })
    }

    /// The same geometry with both metrics scaled by `λ²` (all distances by
    /// `λ`). Scale-carrying quantities — the trust radius, the curvature
    /// assumptions, and the bending/bracket reference fields — are updated;
    /// dimensionless ones (`Φ`, `δ`) are untouched.
    pub fn rescaled(&self, lambda: f64) -> Scenario {
        assert!(lambda > 0.0, "scale factor must be positive");
        let scale_field = |o: &Option<(ScalarOracle, f64)>| -> Option<(ScalarOracle, f64)> {
            o.as_ref().map(|(f, tol)| {
                let f = f.clone();
                let scaled: ScalarOracle = Arc::new(move |x: &Point| f(x) / lambda);
                (scaled, tol / lambda)
            })
        };
        let mut params = self.params.clone();
        let seen = params.get("rescale_lambda").copied().unwrap_or(1.0);
        params.insert("rescale_lambda".to_string(), seen * lambda);
        Scenario {
            name: self.name.clone(),
            params,
            total: self.total.rescaled(lambda),
            base: self.base.rescaled(lambda),
            f1: self.f1.rescaled(lambda),
            f2: self.f2.rescaled(lambda),
            trust_radius: self.trust_radius * lambda,
            grid_margin: self.grid_margin,
            asserted: self.asserted.rescaled(lambda),
            oracles: Oracles {
                phi: self.oracles.phi.clone(),
                delta_f2: self.oracles.delta_f2.clone(),
                ii_f2: scale_field(&self.oracles.ii_f2),
                a_f2: scale_field(&self.oracles.a_f2),
            },
            deviation_bench: self.deviation_bench.clone(),
            holonomy_bench: self.holonomy_bench.clone(),
            variation_bench: self.variation_bench.clone(),
            vertical_bench: self.vertical_bench.clone(),
            transversal_bench: self.transversal_bench.clone(),
        }
    }
}

/// One tunable number of a registry scenario.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub lo: f64,
    pub hi: f64,
    /// Whether `hi` itself is admissible.
    pub hi_inclusive: bool,
    pub doc: &'static str,
}

/// Static description of one registry entry.
#[derive(Clone, Copy, Debug)]
pub struct ScenarioSpec {
    pub name: &'static str,
    pub doc: &'static str,
    pub params: &'static [ParamSpec],
}

static REGISTRY: &[ScenarioSpec] = &[
    ScenarioSpec {
        name: "flat_torus_pair",
        doc: "flat 2-torus over the circle: coordinate projection next to its sine-twisted copy",
        params: &[ParamSpec {
            name: "a",
            default: 0.3,
            lo: 0.0,
            hi: 0.9,
            hi_inclusive: false,
            doc: "twist amplitude of the second projection",
        }],
    },
    ScenarioSpec {
        name: "hopf",
        doc: "unit 3-sphere fibered over the half-radius 2-sphere, next to a rotated copy",
        params: &[ParamSpec {
            name: "rot_angle",
            default: 0.02,
            lo: 0.0,
            hi: 0.3,
            hi_inclusive: true,
            doc: "base rotation applied to the second copy",
        }],
    },
    ScenarioSpec {
        name: "perturbed_torus",
        doc: "2-torus with a conformally rippled metric, fibered over the circle",
        params: &[
            ParamSpec {
                name: "b",
                default: 0.05,
                lo: 0.0,
                hi: 0.2,
                hi_inclusive: true,
                doc: "ripple amplitude of the conformal factor",
            },
            ParamSpec {
                name: "omega",
                default: 1.0,
                lo: 1.0,
                hi: 4.0,
                hi_inclusive: true,
                doc: "integer ripple frequency",
            },
        ],
    },
    ScenarioSpec {
        name: "plane_curves",
        doc: "flat plane chart carrying the tangent circle/line curve pair",
        params: &[ParamSpec {
            name: "radius",
            default: 1.0,
            lo: 0.1,
            hi: 2.0,
            hi_inclusive: true,
            doc: "radius of the circle",
        }],
    },
    ScenarioSpec {
        name: "sphere",
        doc: "round 2-sphere in a colatitude chart, fibered over the colatitude interval",
        params: &[ParamSpec {
            name: "radius",
            default: 1.0,
            lo: 0.1,
            hi: 10.0,
            hi_inclusive: true,
            doc: "sphere radius",
        }],
    },
    ScenarioSpec {
        name: "torus3_orthogonal",
        doc: "flat 3-torus with projections onto two orthogonal circle factors",
        params: &[],
    },
    ScenarioSpec {
        name: "torus3_product",
        doc: "flat 3-torus fibered over the flat 2-torus by coordinate projection",
        params: &[],
    },
    ScenarioSpec {
        name: "warped_product",
        doc: "circle bundle over an interval with radius profile 1 + b r², plus a shifted copy",
        params: &[
            ParamSpec {
                name: "b",
                default: 0.3,
                lo: 0.0,
                hi: 0.45,
                hi_inclusive: true,
                doc: "quadratic coefficient of the fiber radius profile",
            },
            ParamSpec {
                name: "shift",
                default: 0.2,
                lo: -0.3,
                hi: 0.3,
                hi_inclusive: true,
                doc: "base offset of the second projection",
            },
        ],
    },
];

/// Registry of buildable scenarios, in deterministic (alphabetical) order.
pub fn list_scenarios() -> &'static [ScenarioSpec] {
    REGISTRY
}

/// Build a registry scenario. Unknown names, unknown parameter keys, and
/// out-of-range values are rejected; omitted parameters take their defaults.
pub fn build_scenario(name: &str, params: &BTreeMap<String, f64>) -> Result<Scenario> {
    let spec = REGISTRY.iter().find(|s| s.name == name).ok_or_else(|| Error::BadParameter {
        name: "scenario".to_string(),
        detail: format!(
            "unknown scenario `{name}`; known: {}",
            REGISTRY.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
        ),
    })?;
    let resolved = resolve_params(spec, params)?;
    let get = |k: &str| resolved[k];
    let mut scenario = match name {
        "flat_torus_pair" => flat_torus_pair(get("a")),
        "hopf" => hopf_pair(get("rot_angle")),
        "perturbed_torus" => {
            let omega = get("omega");
            if omega.fract() != 0.0 {
                return Err(Error::BadParameter {
                    name: "omega".to_string(),
                    detail: format!("ripple frequency must be an integer, got {omega}"),
                });
            }
            perturbed_torus(get("b"), omega)
        }
        "plane_curves" => plane_curves(get("radius")),
        "sphere" => sphere_pair(get("radius")),
        "torus3_orthogonal" => torus3_orthogonal(),
        "torus3_product" => torus3_product(),
        "warped_product" => warped_product(get("b"), get("shift")),
        _ => unreachable!("registry names are handled exhaustively"),
    };
    scenario.params = resolved;
    Ok(scenario)
}

fn resolve_params(
    spec: &ScenarioSpec,
    given: &BTreeMap<String, f64>,
) -> Result<BTreeMap<String, f64>> {
    for key in given.keys() {
        if !spec.params.iter().any(|p| p.name == key) {
            return Err(Error::BadParameter {
                name: key.clone(),
                detail: format!("not a parameter of `{}`", spec.name),
            });
        }
    }
    let mut out = BTreeMap::new();
    for p in spec.params {
        let v = given.get(p.name).copied().unwrap_or(p.default);
        let hi_ok = if p.hi_inclusive { v <= p.hi } else { v < p.hi };
        if !v.is_finite() || v < p.lo || !hi_ok {
            return Err(Error::BadParameter {
                name: p.name.to_string(),
                detail: format!(
                    "{v} outside [{}, {}{}",
                    p.lo,
                    p.hi,
                    if p.hi_inclusive { "]" } else { ")" }
                ),
            });
        }
        out.insert(p.name.to_string(), v);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Shared building blocks.

fn flat_torus(m: usize) -> ChartedManifold {
    ChartedManifold::new(ChartDomain::torus(&vec![TAU; m]), move |_| Matrix::identity(m, m))
        .with_christoffel(move |_| Christoffel::zeros(m))
}

fn flat_interval(lo: f64, hi: f64) -> ChartedManifold {
    ChartedManifold::new(ChartDomain::boxed(&[(lo, hi)]), |_| Matrix::identity(1, 1))
        .with_christoffel(|_| Christoffel::zeros(1))
}

/// Projection onto the listed chart axes, with its constant Jacobian.
fn axis_projection(total: ChartedManifold, base: ChartedManifold, axes: Vec<usize>) -> SubmersionMap {
    let n = axes.len();
    let mut jac = Matrix::zeros(n, total.dim());
    for (r, &c) in axes.iter().enumerate() {
        jac[(r, c)] = 1.0;
    }
    SubmersionMap::new(total, base, move |x| Point::from_iterator(n, axes.iter().map(|&i| x[i])))
        .with_jacobian(move |_| jac.clone())
}

/// Invert the circle twist `σ ↦ σ + a sin σ` (strictly increasing for
/// `a < 1`, so plain Newton from the identity guess converges).
fn untwist(a: f64, theta: f64) -> f64 {
    let mut sigma = theta;
    for _ in 0..64 {
        let step = (sigma + a * sigma.sin() - theta) / (1.0 + a * sigma.cos());
        sigma -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    sigma
}

// ---------------------------------------------------------------------------
// Scenario builders.

/// Flat 2-torus over the circle. The first projection keeps `θ₂`; the second
/// twists it to `θ₂ + a sin θ₂`. Everything about the pair — the bundle map,
/// its differential, the distortion field — has a closed form, which makes
/// this the primary calibration geometry.
fn flat_torus_pair(a: f64) -> Scenario {
    let total = flat_torus(2);
    let base = flat_torus(1);
    let f1 = axis_projection(total.clone(), base.clone(), vec![1]);
    let f2 = SubmersionMap::new(total.clone(), base.clone(), move |x| {
        pt(&[x[1] + a * x[1].sin()])
    })
    .with_jacobian(move |x| Matrix::from_row_slice(1, 2, &[0.0, 1.0 + a * x[1].cos()]));

    Scenario {
        name: "flat_torus_pair".to_string(),
        params: BTreeMap::new(),
        trust_radius: 3.0,
        grid_margin: 0.0,
        asserted: Assertions {
            abs_sec_total: 0.0,
            abs_sec_base: 0.0,
            inj_radius_base: PI,
            conj_radius_total: PI,
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: Some((Arc::new(move |x: &Point| pt(&[x[0], untwist(a, x[1])])), 1e-6)),
            delta_f2: Some((Arc::new(move |x: &Point| (1.0 + a * x[1].cos()).ln().abs()), 1e-9)),
            ii_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: None,
        holonomy_bench: Some(HolonomyBench {
            loops: vec![HolonomyLoop {
                label: "rectangle".to_string(),
                vertices: vec![pt(&[0.5, 0.5]), pt(&[1.5, 0.5]), pt(&[1.5, 1.2]), pt(&[0.5, 1.2])],
            }],
        }),
        variation_bench: Some(VariationBench {
            x0: pt(&[1.0, 2.0]),
            vertical_seed: vec_from(&[1.0, 0.0]),
            base_dir: vec_from(&[1.0]),
            r_values: vec![0.3],
        }),
        vertical_bench: None,
        transversal_bench: Some(TransversalBench { x: pt(&[0.2, 0.9]), center: pt(&[1.5]) }),
        total,
        base,
        f1,
        f2,
    }
}

/// Unit 3-sphere over the half-radius 2-sphere; the second copy composes a
/// rotation of the base about the chart center's axis. The fibers are
/// totally geodesic but maximally non-integrable, the mirror image of the
/// twisted torus where all the defect sits in the metric distortion.
fn hopf_pair(rot_angle: f64) -> Scenario {
    Scenario {
        name: "hopf".to_string(),
        params: BTreeMap::new(),
        total: hopf::total_manifold(),
        base: hopf::base_manifold(),
        f1: hopf::submersion(0.0),
        f2: hopf::submersion(rot_angle),
        trust_radius: hopf::TRUST_RADIUS,
        grid_margin: 0.1,
        asserted: Assertions {
            abs_sec_total: 1.0,
            abs_sec_base: 4.0,
            inj_radius_base: PI / 2.0,
            conj_radius_total: PI,
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: None,
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((Arc::new(|_: &Point| 0.0), 1e-4)),
            a_f2: Some((Arc::new(|_: &Point| 2.0), 1e-3)),
        },
        deviation_bench: None,
        holonomy_bench: None,
        variation_bench: Some(VariationBench {
            x0: pt(&[0.12, -0.08, 0.15]),
            vertical_seed: vec_from(&[1.0, 1.0, 1.0]),
            base_dir: vec_from(&[1.0, 0.4]),
            r_values: vec![0.1, 0.2, 0.4],
        }),
        vertical_bench: Some(VerticalBench {
            x0: pt(&[0.12, -0.08, 0.15]),
            transversal_dir: vec_from(&[1.0, 0.0]),
            base_dir: vec_from(&[0.0, 1.0]),
            r_values: vec![0.1, 0.2, 0.4],
        }),
        transversal_bench: None,
    }
}

/// 2-torus with the conformal factor `e^{2φ}`, `φ = b(cos ωθ₁ + sin ωθ₂)`,
/// fibered over the circle by `θ₂`. Used for curve-comparison experiments on
/// a gently curved closed surface; the distortion and fiber-bending fields
/// stay in closed form.
fn perturbed_torus(b: f64, omega: f64) -> Scenario {
    let phi = move |x: &Point| b * ((omega * x[0]).cos() + (omega * x[1]).sin());
    let grad = move |x: &Point| {
        vec_from(&[-b * omega * (omega * x[0]).sin(), b * omega * (omega * x[1]).cos()])
    };
    let total = ChartedManifold::conformally_flat(ChartDomain::torus(&[TAU, TAU]), phi, grad);
    let base = flat_torus(1);
    let f1 = axis_projection(total.clone(), base.clone(), vec![1]);
    let f2 = f1.clone();

    // |K| = |e^{-2φ} Δφ| with |Δφ| ≤ 2bω² and |φ| ≤ 2b.
    let sec_bound = 2.0 * b * omega * omega * (4.0 * b).exp();

    Scenario {
        name: "perturbed_torus".to_string(),
        params: BTreeMap::new(),
        trust_radius: PI * (-2.0 * b).exp(),
        grid_margin: 0.0,
        asserted: Assertions {
            abs_sec_total: sec_bound,
            abs_sec_base: 0.0,
            inj_radius_base: PI,
            conj_radius_total: PI * (-2.0 * b).exp(),
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: None,
            delta_f2: Some((Arc::new(move |x: &Point| phi(x).abs()), 1e-9)),
            // Fibers are θ₁-circles; their bending is e^{-φ} |∂₂φ|.
            ii_f2: Some((
                Arc::new(move |x: &Point| {
                    (-phi(x)).exp() * (b * omega * (omega * x[1]).cos()).abs()
                }),
                1e-6,
            )),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: Some(DeviationBench {
            kind: DeviationKind::GeodesicVsChartLine {
                start: pt(&[0.5, 1.0]),
                dir: vec_from(&[1.0, 0.6]),
            },
            s_grid: (1..=10).map(|k| 0.1 * k as f64).collect(),
        }),
        holonomy_bench: None,
        variation_bench: None,
        vertical_bench: None,
        transversal_bench: None,
        total,
        base,
        f1,
        f2,
    }
}

/// Flat plane chart carrying the classic tangent pair: the unit-speed circle
/// of the given radius through the origin and the line it is tangent to.
/// The submersion structure is the trivial first-axis projection.
fn plane_curves(radius: f64) -> Scenario {
    let total = ChartedManifold::new(ChartDomain::boxed(&[(-3.0, 3.0), (-3.0, 3.0)]), |_| {
        Matrix::identity(2, 2)
    })
    .with_christoffel(|_| Christoffel::zeros(2));
    let base = flat_interval(-3.0, 3.0);
    let f1 = axis_projection(total.clone(), base.clone(), vec![0]);
    let f2 = f1.clone();

    Scenario {
        name: "plane_curves".to_string(),
        params: BTreeMap::new(),
        trust_radius: 6.0,
        grid_margin: 0.2,
        asserted: Assertions {
            abs_sec_total: 0.0,
            abs_sec_base: 0.0,
            inj_radius_base: 3.0,
            conj_radius_total: 6.0,
            fibers_compact: false,
        },
        oracles: Oracles {
            phi: Some((Arc::new(|x: &Point| x.clone()), 1e-9)),
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: Some(DeviationBench {
            kind: DeviationKind::CircleVsLine { radius },
            s_grid: (1..=10).map(|k| 0.1 * radius * k as f64).collect(),
        }),
        holonomy_bench: None,
        variation_bench: None,
        vertical_bench: None,
        transversal_bench: None,
        total,
        base,
        f1,
        f2,
    }
}

/// Round 2-sphere in the colatitude chart `(θ, φ)`, fibered over the
/// colatitude interval. Deliberately built *without* closed-form Christoffel
/// symbols so the finite-difference path gets exercised against textbook
/// sphere values (latitude bending `|cot θ| / R`, holonomy by enclosed
/// area).
fn sphere_pair(radius: f64) -> Scenario {
    let r2 = radius * radius;
    let total = ChartedManifold::new(
        ChartDomain::new(vec![Axis::bounded(0.05, PI - 0.05), Axis::periodic(0.0, TAU)]),
        move |x| Matrix::from_diagonal(&vec_from(&[r2, r2 * x[0].sin() * x[0].sin()])),
    );
    let base = ChartedManifold::new(ChartDomain::boxed(&[(0.05, PI - 0.05)]), move |_| {
        Matrix::from_element(1, 1, r2)
    })
    .with_christoffel(|_| Christoffel::zeros(1));
    let f1 = axis_projection(total.clone(), base.clone(), vec![0]);
    let f2 = f1.clone();

    let triangle = |colat: f64| {
        vec![pt(&[colat, 0.0]), pt(&[colat, TAU / 3.0]), pt(&[colat, 2.0 * TAU / 3.0])]
    };

    Scenario {
        name: "sphere".to_string(),
        params: BTreeMap::new(),
        trust_radius: 2.5 * radius,
        grid_margin: 0.15,
        asserted: Assertions {
            abs_sec_total: 1.0 / r2,
            abs_sec_base: 0.0,
            inj_radius_base: 1.4 * radius,
            conj_radius_total: PI * radius,
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: Some((Arc::new(|x: &Point| x.clone()), 1e-9)),
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((
                Arc::new(move |x: &Point| (x[0].cos() / x[0].sin()).abs() / radius),
                1e-5,
            )),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: None,
        holonomy_bench: Some(HolonomyBench {
            loops: vec![
                HolonomyLoop {
                    label: "triangle".to_string(),
                    vertices: triangle(equilateral_triangle_colatitude(PI / 2.0)),
                },
                HolonomyLoop {
                    label: "triangle_half_area".to_string(),
                    vertices: triangle(equilateral_triangle_colatitude(PI / 4.0)),
                },
            ],
        }),
        variation_bench: None,
        vertical_bench: None,
        transversal_bench: None,
        total,
        base,
        f1,
        f2,
    }
}

/// Flat 3-torus with the two projections onto *orthogonal* circle factors.
/// The pair is deliberately non-transversal: the second projection is
/// constant along the first one's horizontal direction, so the fiber
/// coordinate of the local trivialization degenerates.
fn torus3_orthogonal() -> Scenario {
    let total = flat_torus(3);
    let base = flat_torus(1);
    let f1 = axis_projection(total.clone(), base.clone(), vec![0]);
    let f2 = axis_projection(total.clone(), base.clone(), vec![1]);

    Scenario {
        name: "torus3_orthogonal".to_string(),
        params: BTreeMap::new(),
        trust_radius: 3.0,
        grid_margin: 0.0,
        asserted: Assertions {
            abs_sec_total: 0.0,
            abs_sec_base: 0.0,
            inj_radius_base: PI,
            conj_radius_total: PI,
            fibers_compact: true,
        },
        oracles: Oracles {
            // The lift moves only θ₂, dragging it onto θ₁.
            phi: Some((Arc::new(|x: &Point| pt(&[x[0], x[0], x[2]])), 1e-6)),
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: None,
        holonomy_bench: None,
        variation_bench: None,
        vertical_bench: None,
        transversal_bench: Some(TransversalBench {
            x: pt(&[0.3, 0.7, 1.1]),
            center: pt(&[1.4]),
        }),
        total,
        base,
        f1,
        f2,
    }
}

/// Flat 3-torus fibered over the flat 2-torus by projection onto the first
/// two coordinates: the reference Riemannian product, where every defect
/// measure vanishes and the horizontal distribution is integrable with a
/// two-dimensional base.
fn torus3_product() -> Scenario {
    let total = flat_torus(3);
    let base = flat_torus(2);
    let f1 = axis_projection(total.clone(), base.clone(), vec![0, 1]);
    let f2 = f1.clone();

    Scenario {
        name: "torus3_product".to_string(),
        params: BTreeMap::new(),
        trust_radius: 3.0,
        grid_margin: 0.0,
        asserted: Assertions {
            abs_sec_total: 0.0,
            abs_sec_base: 0.0,
            inj_radius_base: PI,
            conj_radius_total: PI,
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: Some((Arc::new(|x: &Point| x.clone()), 1e-9)),
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
        },
        deviation_bench: None,
        holonomy_bench: None,
        variation_bench: None,
        vertical_bench: Some(VerticalBench {
            x0: pt(&[0.3, 0.7, 1.1]),
            transversal_dir: vec_from(&[1.0, 0.0]),
            base_dir: vec_from(&[0.0, 1.0]),
            r_values: vec![0.5],
        }),
        transversal_bench: Some(TransversalBench {
            x: pt(&[0.3, 0.7, 1.1]),
            center: pt(&[1.0, 0.5]),
        }),
        total,
        base,
        f1,
        f2,
    }
}

/// Circle bundle over an interval with fiber radius `w(r) = 1 + b r²`:
/// `g = dr² + w(r)² dθ²`. The fibers bend with `|w'/w|` while the horizontal
/// direction stays isometric, and the shifted copy keeps a constant base
/// offset, so the bundle map is the closed-form slide `r ↦ r + shift`.
fn warped_product(b: f64, shift: f64) -> Scenario {
    let w = move |r: f64| 1.0 + b * r * r;
    let wd = move |r: f64| 2.0 * b * r;
    let total = ChartedManifold::new(
        ChartDomain::new(vec![Axis::bounded(-1.25, 1.25), Axis::periodic(0.0, TAU)]),
        move |x| Matrix::from_diagonal(&vec_from(&[1.0, w(x[0]) * w(x[0])])),
    )
    .with_christoffel(move |x| {
        let (wv, dv) = (w(x[0]), wd(x[0]));
        Christoffel::from_fn(2, |k, i, j| match (k, i, j) {
            (0, 1, 1) => -wv * dv,
            (1, 0, 1) | (1, 1, 0) => dv / wv,
            _ => 0.0,
        })
    });
    let base = flat_interval(-1.6, 1.6);
    let f1 = axis_projection(total.clone(), base.clone(), vec![0]);
    let f2 = SubmersionMap::new(total.clone(), base.clone(), move |x| pt(&[x[0] - shift]))
        .with_jacobian(|_| Matrix::from_row_slice(1, 2, &[1.0, 0.0]));

    Scenario {
        name: "warped_product".to_string(),
        params: BTreeMap::new(),
        trust_radius: 1.0,
        grid_margin: 0.45,
        asserted: Assertions {
            // K = -w''/w, so |K| ≤ 2b on the working region.
            abs_sec_total: 2.0 * b,
            abs_sec_base: 0.0,
            inj_radius_base: 1.0,
            conj_radius_total: 2.0,
            fibers_compact: true,
        },
        oracles: Oracles {
            phi: Some((Arc::new(move |x: &Point| pt(&[x[0] + shift, x[1]])), 1e-6)),
            delta_f2: Some((Arc::new(|_: &Point| 0.0), 1e-9)),
            ii_f2: Some((Arc::new(move |x: &Point| (wd(x[0]) / w(x[0])).abs()), 1e-6)),
            a_f2: Some((Arc::new(|_: &Point| 0.0), 1e-12)),
        },
        deviation_bench: None,
        holonomy_bench: None,
        variation_bench: Some(VariationBench {
            x0: pt(&[0.2, 1.0]),
            vertical_seed: vec_from(&[0.0, 1.0]),
            base_dir: vec_from(&[1.0]),
            r_values: vec![0.1, 0.3, 0.5],
        }),
        vertical_bench: None,
        transversal_bench: None,
        total,
        base,
        f1,
        f2,
    }
}

// ---------------------------------------------------------------------------
// Derived checks.

/// Result of the pullback-defect sweep.
#[derive(Clone, Debug)]
pub struct SharpnessReport {
    /// Largest operator norm of `(dΦ)ᵀ g(Φx) dΦ − g(x)` over the grid.
    pub gap: f64,
    /// Grid point attaining it.
    pub witness: Point,
    pub samples: usize,
}

/// Sweep the pullback defect of the bundle map over a sample grid. The gap
/// is zero exactly when Φ is an isometry on the sampled region, so a
/// strictly positive value certifies that no isometric identification of the
/// pair exists there.
pub fn sharpness_check(scenario: &Scenario, counts: &[usize]) -> Result<SharpnessReport> {
    let bundle = BundleMap::new(scenario.f1.clone(), scenario.f2.clone(), scenario.trust_radius)?;
    let pts = scenario.total.domain().grid(counts, scenario.grid_margin);
    let fd = scenario.total.fd_step();
    let mut gap = -1.0f64;
    let mut witness = pts[0].clone();
    for x in &pts {
        let jac = bundle.differential_at(x, fd)?;
        let phi_x = bundle.at(x)?;
        let here = scenario.total.metric_at(x)?.g;
        let there = scenario.total.metric_at(&phi_x)?.g;
        let defect = jac.transpose() * there * &jac - here;
        let sym = 0.5 * (&defect + defect.transpose());
        let op = sym.symmetric_eigen().eigenvalues.amax();
        if op > gap {
            gap = op;
            witness = x.clone();
        }
    }
    Ok(SharpnessReport { gap, witness, samples: pts.len() })
}

/// Colatitude placing three vertices, azimuth-spaced by `2π/3` on the unit
/// sphere, so the geodesic triangle over them has the given spherical excess
/// (= enclosed area). Uses the equilateral relations
/// `cos A = cos c / (1 + cos c)` with vertex angle `A = (π + excess) / 3`
/// and `cos c = (3 cos²ψ − 1) / 2` for the side `c`.
pub fn equilateral_triangle_colatitude(excess: f64) -> f64 {
    assert!(excess > 0.0 && excess < PI, "excess must lie in (0, π)");
    let vertex_angle = (PI + excess) / 3.0;
    let ca = vertex_angle.cos();
    let cos_side = ca / (1.0 - ca);
    (((2.0 * cos_side + 1.0) / 3.0).sqrt()).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults(name: &str) -> Scenario {
        build_scenario(name, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn registry_is_alphabetical() {
        for pair in REGISTRY.windows(2) {
            assert!(pair[0].name < pair[1].name, "{} vs {}", pair[0].name, pair[1].name);
        }
    }

    #[test]
    fn every_registry_scenario_validates_its_oracles() {
        for spec in list_scenarios() {
            let sc = defaults(spec.name);
            let report = sc.validate(100).unwrap();
            assert!(
                report.pass,
                "oracle sweep failed for `{}`: worst {:?} vs tolerances {:?}",
                spec.name, report.worst, report.tolerances
            );
            assert!(report.checked >= 100);
        }
    }

    #[test]
    fn unknown_names_and_parameters_are_rejected() {
        assert!(build_scenario("nope", &BTreeMap::new()).is_err());

        let mut bogus = BTreeMap::new();
        bogus.insert("bogus".to_string(), 1.0);
        assert!(build_scenario("flat_torus_pair", &bogus).is_err());

        let mut out_of_range = BTreeMap::new();
        out_of_range.insert("a".to_string(), 0.9);
        assert!(build_scenario("flat_torus_pair", &out_of_range).is_err());

        let mut fractional = BTreeMap::new();
        fractional.insert("omega".to_string(), 1.5);
        assert!(build_scenario("perturbed_torus", &fractional).is_err());
    }

    #[test]
    fn twist_inversion_solves_the_scalar_equation() {
        for theta in [0.0, 0.7, 2.2, 4.9] {
            let sigma = untwist(0.3, theta);
            assert!((sigma + 0.3 * sigma.sin() - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn sharpness_gap_is_zero_for_identical_pair() {
        let mut params = BTreeMap::new();
        params.insert("a".to_string(), 0.0);
        let sc = build_scenario("flat_torus_pair", &params).unwrap();
        let report = sharpness_check(&sc, &[4, 8]).unwrap();
        assert!(report.gap < 1e-9, "gap {}", report.gap);
    }

    #[test]
    fn sharpness_gap_matches_the_twist_compression() {
        let sc = defaults("flat_torus_pair");
        let a: f64 = 0.3;
        let report = sharpness_check(&sc, &[4, 64]).unwrap();
        // Worst compression sits at σ = π where the twist rate is 1 − a.
        let expected = (1.0 - a).powi(-2) - 1.0;
        assert!((report.gap - expected).abs() < 1e-3, "gap {} vs {}", report.gap, expected);
    }

    #[test]
    fn triangle_colatitude_reproduces_the_octant() {
        let psi = equilateral_triangle_colatitude(PI / 2.0);
        assert!((psi - (1.0f64 / 3.0f64.sqrt()).acos()).abs() < 1e-12);
    }

    #[test]
    fn rescaling_scales_the_scale_carrying_fields() {
        let sc = defaults("warped_product");
        let scaled = sc.rescaled(2.0);
        assert!((scaled.trust_radius - 2.0 * sc.trust_radius).abs() < 1e-12);
        assert!((scaled.asserted.abs_sec_total - sc.asserted.abs_sec_total / 4.0).abs() < 1e-12);
        let x = pt(&[0.4, 1.0]);
        let (ii0, _) = sc.oracles.ii_f2.as_ref().unwrap();
        let (ii2, _) = scaled.oracles.ii_f2.as_ref().unwrap();
        assert!((ii2(&x) - ii0(&x) / 2.0).abs() < 1e-12);
        let (d0, _) = sc.oracles.delta_f2.as_ref().unwrap();
        let (d2, _) = scaled.oracles.delta_f2.as_ref().unwrap();
        assert!((d2(&x) - d0(&x)).abs() < 1e-15);
        assert!((scaled.params["rescale_lambda"] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn validation_detects_a_wrong_oracle() {
        let mut sc = defaults("warped_product");
        sc.oracles.ii_f2 = Some((Arc::new(|_: &Point| 0.123), 1e-9));
        let report = sc.validate(50).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn rescaled_pipeline_matches_scaled_oracles() {
        // The measured fields on the λ-rescaled geometry must agree with the
        // λ-scaled closed forms, not just formally but numerically.
        let sc = defaults("warped_product").rescaled(10.0);
        let report = sc.validate(60).unwrap();
        assert!(report.pass, "worst {:?} vs {:?}", report.worst, report.tolerances);
    }
}
