//! Registry of the worked examples and counterexamples, each with its ground
//! grid, closed-form cones where they are known, and the expected outcome of
//! the checks it supports.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::Arc;

use once_cell::sync::Lazy;
use prefmax_core::cone::{normal_membership, BodyMode, Cone, ContourSample};
use prefmax_core::plastria::{gap_from_utility, nf_subgradient, AssumptionFlags, GapFunction};
use prefmax_core::{rules, GroundSet, Point, Property, Relation, Result as CoreResult, Utility};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::experiment::Check;
use crate::HarnessError;

pub type ConeFn = Arc<dyn Fn(&Point) -> CoreResult<Cone> + Send + Sync>;
pub type OracleFn = Arc<dyn Fn(&Point) -> CoreResult<Point> + Send + Sync>;

/// Probes per base point in the closed-form cone self-test.
pub const SELF_TEST_PROBES: usize = 100;
const SELF_TEST_BASES: usize = 12;
const SELF_TEST_SEED: u64 = 7;
/// Angular guard (radians) around generator rays in planar self-tests.
const BOUNDARY_GUARD: f64 = 0.01;

/// How strict upper contours are sampled for membership tests.
#[derive(Clone, Debug)]
pub enum Sampler {
    /// Strict contour points among a ground set (its halo included).
    Ground(GroundSet),
    /// `U^s(x)` is the open ball around `center` through `x`; sample a circle
    /// just inside it.
    Shell { center: Point, points: usize },
}

impl Sampler {
    pub fn sample(&self, rel: &Relation, x: &Point) -> CoreResult<ContourSample> {
        match self {
            Sampler::Ground(g) => ContourSample::from_ground(rel, x, g),
            Sampler::Shell { center, points } => {
                let r = x.dist(center) * (1.0 - 1e-9);
                if r <= 0.0 {
                    return Ok(ContourSample::empty(x.clone()));
                }
                let pts = (0..*points)
                    .map(|i| {
                        let t = TAU * i as f64 / *points as f64;
                        Point::new(vec![center[0] + r * t.cos(), center[1] + r * t.sin()])
                    })
                    .collect::<CoreResult<Vec<_>>>()?;
                ContourSample::checked(rel, x.clone(), pts)
            }
        }
    }
}

/// A registered example. Immutable once the registry is built.
#[derive(Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub notes: &'static str,
    pub relation: Relation,
    pub ground: GroundSet,
    /// Whether `ground` carries a halo, so grid overrides keep one.
    pub halo: bool,
    pub sampler: Sampler,
    pub cones: Option<ConeFn>,
    pub gap: Option<GapFunction>,
    /// Returns an element of `N_f(x)` of norm at most `L`.
    pub oracle: Option<OracleFn>,
    /// A maximal point used as the descent reference.
    pub reference: Option<Point>,
    pub default_x0: Option<Point>,
    pub lsc: bool,
    pub complete: bool,
    pub body_mode: BodyMode,
    pub base_points: Option<Vec<Point>>,
    pub expected_maximal: Option<Vec<Point>>,
    pub expected_maxima: Option<Vec<Point>>,
    pub properties: Vec<(Property, bool)>,
    /// Upper end of `N_f(x) = ]−∞, b(x)]` on the line, when known.
    pub nf_boundary: Option<fn(f64) -> f64>,
    /// Checks whose failure is the documented outcome.
    pub inverted: Vec<Check>,
    pub default_suite: Vec<Check>,
}

impl std::fmt::Debug for Fixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fixture").field("name", &self.name).field("relation", &self.relation.name()).finish()
    }
}

impl Fixture {
    fn new(name: &'static str, notes: &'static str, relation: Relation, ground: GroundSet) -> Self {
        Fixture {
            name,
            notes,
            relation,
            sampler: Sampler::Ground(ground.clone()),
            ground,
            halo: false,
            cones: None,
            gap: None,
            oracle: None,
            reference: None,
            default_x0: None,
            lsc: false,
            complete: false,
            body_mode: BodyMode::T,
            base_points: None,
            expected_maximal: None,
            expected_maxima: None,
            properties: Vec::new(),
            nf_boundary: None,
            inverted: Vec::new(),
            default_suite: vec![Check::Maximal],
        }
    }

    fn halo(mut self) -> Self {
        self.ground = self.ground.with_halo(1).expect("registry grids are grids");
        self.sampler = Sampler::Ground(self.ground.clone());
        self.halo = true;
        self
    }

    fn cones(mut self, f: impl Fn(&Point) -> CoreResult<Cone> + Send + Sync + 'static) -> Self {
        self.cones = Some(Arc::new(f));
        self
    }

    fn suite(mut self, checks: &[Check]) -> Self {
        self.default_suite = checks.to_vec();
        self
    }

    fn inverted(mut self, checks: &[Check]) -> Self {
        self.inverted = checks.to_vec();
        self
    }

    /// Expected verdict polarity for `check`.
    pub fn expects_pass(&self, check: Check) -> bool {
        !self.inverted.contains(&check)
    }

    /// The fixture with its ground replaced by a grid spec, keeping the halo
    /// and re-deriving a ground sampler.
    pub fn with_grid(&self, spec: &str) -> Result<Fixture, HarnessError> {
        let mut g = GroundSet::parse_grid(spec).map_err(|e| HarnessError::Config(format!("--grid {spec}: {e}")))?;
        if g.dim() != self.relation.dim() {
            return Err(HarnessError::Config(format!(
                "--grid has dimension {}, fixture {} lives in dimension {}",
                g.dim(),
                self.name,
                self.relation.dim()
            )));
        }
        if self.halo {
            g = g.with_halo(1)?;
        }
        let mut out = self.clone();
        if matches!(out.sampler, Sampler::Ground(_)) {
            out.sampler = Sampler::Ground(g.clone());
        }
        out.ground = g;
        out.base_points = None;
        Ok(out)
    }

    /// The cone at `x`: closed form when registered, else read off the sample.
    pub fn cone_at(&self, x: &Point, tol: f64) -> CoreResult<Cone> {
        match &self.cones {
            Some(f) => f(x),
            None => Cone::from_contour(&self.sampler.sample(&self.relation, x)?, tol),
        }
    }

    /// Base points for per-point checks: the registered ones, or up to `max`
    /// evenly spaced window points.
    pub fn bases(&self, max: usize) -> Vec<Point> {
        if let Some(b) = &self.base_points {
            return b.clone();
        }
        let pts = self.ground.points();
        if pts.len() <= max {
            return pts.to_vec();
        }
        (0..max).map(|i| pts[i * (pts.len() - 1) / (max - 1)].clone()).collect()
    }

    /// Mismatches between the closed-form cones and sampled membership, over
    /// `probes` random directions at each base point. Probes within 0.01 rad
    /// of a planar generator ray are skipped, since a finite sample cannot
    /// resolve them.
    pub fn cone_mismatches(&self, bases: &[Point], probes: usize, tol: f64, seed: u64) -> CoreResult<Vec<(Point, Point)>> {
        let Some(closed) = &self.cones else {
            return Ok(Vec::new());
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut bad = Vec::new();
        for x in bases {
            let cone = closed(x)?;
            let sample = self.sampler.sample(&self.relation, x)?;
            for _ in 0..probes {
                let q = random_direction(&mut rng, x.dim())?;
                if !resolvable(&cone, &q)? {
                    continue;
                }
                if cone.contains(&q)? != normal_membership(&sample, &q, tol)? {
                    bad.push((x.clone(), q));
                }
            }
        }
        Ok(bad)
    }
}

/// A unit vector, drawn from `[-1, 1]^n` and normalized.
fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> CoreResult<Point> {
    loop {
        let v = Point::new((0..dim).map(|_| rng.random_range(-1.0..1.0)).collect())?;
        if v.norm() > 1e-3 {
            return v.normalized();
        }
    }
}

fn resolvable(cone: &Cone, q: &Point) -> CoreResult<bool> {
    if q.dim() != 2 {
        return Ok(true);
    }
    let qn = q.normalized()?;
    Ok(cone.generators().iter().all(|g| {
        let gn = g.scale(1.0 / g.norm());
        gn.dot(&qn).clamp(-1.0, 1.0).acos() >= BOUNDARY_GUARD
    }))
}

fn p1(x: f64) -> Point {
    Point::scalar(x).expect("finite")
}

fn p2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).expect("finite")
}

fn grid(spec: &str) -> GroundSet {
    GroundSet::parse_grid(spec).expect("registry grids are valid")
}

fn left_half_plane() -> CoreResult<Cone> {
    Cone::generated(vec![p2(-1.0, 0.0), p2(0.0, 1.0), p2(0.0, -1.0)])
}

/// `N(x)` for a utility peaked at `c` on the line.
fn peak_cone(c: f64) -> impl Fn(&Point) -> CoreResult<Cone> + Send + Sync {
    move |x: &Point| {
        let d = x[0] - c;
        if d.abs() <= 1e-12 {
            Ok(Cone::full(1))
        } else {
            Cone::generated(vec![p1(d.signum())])
        }
    }
}

fn peak_oracle(c: f64) -> OracleFn {
    Arc::new(move |x: &Point| {
        let d = x[0] - c;
        Ok(if d == 0.0 { p1(0.0) } else { p1(d.signum()) })
    })
}

fn ex22() -> Fixture {
    Fixture::new(
        "ex22-fip-not-transitive",
        "relation on [0,4] with y/2+2 <= x <= 4 except one pair: FIP holds, transitivity fails",
        rules::fip_not_transitive(),
        GroundSet::interval(0.0, 4.0, 0.25).expect("valid"),
    )
    .suite(&[Check::Properties, Check::Maxima])
    .with(|f| {
        f.expected_maxima = Some(vec![p1(4.0)]);
        f.properties = vec![
            (Property::Reflexive, false),
            (Property::Complete, false),
            (Property::Transitive, false),
            (Property::MFip(2), true),
            (Property::Fip, true),
        ];
    })
}

fn convexity(name: &'static str, notes: &'static str, rel: Relation, u: bool) -> Fixture {
    Fixture::new(name, notes, rel, GroundSet::interval(0.0, 1.0, 0.05).expect("valid"))
        .suite(&[Check::Properties])
        .with(|f| f.properties = vec![(Property::ConvexU, u), (Property::ConvexUs, !u)])
}

fn ex_n() -> Fixture {
    Fixture::new(
        "exN-favored-one",
        "x >= y iff y = x or y = 1 on the line: N(x) is the whole line for x != 1 and {0} at 1",
        rules::favored_one(),
        GroundSet::interval(0.0, 2.0, 0.01).expect("valid"),
    )
    .halo()
    .cones(|x: &Point| Ok(if (x[0] - 1.0).abs() <= 1e-12 { Cone::zero(1) } else { Cone::full(1) }))
    .suite(&[Check::Maximal, Check::Cones, Check::Nstar, Check::SvipInclusion])
    .with(|f| {
        f.lsc = true;
        let mut me = f.ground.points().to_vec();
        me.retain(|x| (x[0] - 1.0).abs() > 1e-12);
        f.expected_maximal = Some(me);
        f.base_points = Some([0.0, 0.25, 0.5, 0.99, 1.0, 1.01, 1.5, 2.0].map(p1).to_vec());
    })
}

fn rmk35() -> Fixture {
    Fixture::new(
        "rmk35-axis-order",
        "(x,0) >= (y,0) iff x >= y on the axis of the plane: (0,1) is a nonzero normal with zero inner product",
        rules::halfline_order(),
        grid("-1:1:0.05,0:0:1"),
    )
    .halo()
    .cones(|x: &Point| if x[1].abs() <= 1e-12 { left_half_plane() } else { Ok(Cone::full(2)) })
    .suite(&[Check::Cones, Check::Nstar, Check::Properties])
    .inverted(&[Check::Nstar])
    .with(|f| f.properties = vec![(Property::ConvexUs, true), (Property::Complete, true)])
}

fn rmk311() -> Fixture {
    let k = grid("0:1:0.01,0:0:1");
    Fixture::new(
        "rmk311-segment-K",
        "same order restricted to K = [0,1]x{0} with the unit-ball variant G: every point of K solves the \
         Stampacchia problem while only (1,0) is maximal",
        rules::halfline_order(),
        k.clone(),
    )
    .cones(|_: &Point| left_half_plane())
    .suite(&[Check::Maximal, Check::Cones, Check::SvipInclusion])
    .inverted(&[Check::SvipInclusion])
    .with(|f| {
        f.sampler = Sampler::Ground(k.with_halo(1).expect("grid"));
        f.body_mode = BodyMode::G { empty_strict_contour: false };
        f.expected_maximal = Some(vec![p2(1.0, 0.0)]);
    })
}

fn ex39() -> Fixture {
    Fixture::new(
        "ex39-non-lsc",
        "(x,y) >= (a,b) iff x >= a and y = b = 0 in the plane: not lower semicontinuous, (0,1) is normal but \
         not strictly normal at every (x,0)",
        rules::axis_order_plane(),
        grid("-1:1:0.05,-1:1:0.05"),
    )
    .halo()
    .cones(|x: &Point| if x[1].abs() <= 1e-12 { left_half_plane() } else { Ok(Cone::full(2)) })
    .suite(&[Check::Cones, Check::Nstar])
    .inverted(&[Check::Nstar])
    .with(|f| f.base_points = Some((-4..=4).map(|i| p2(i as f64 * 0.25, 0.0)).chain([p2(0.5, 0.5)]).collect()))
}

fn ex315() -> Fixture {
    Fixture::new(
        "ex315-noncomplete",
        "x >= y iff (x,y) = (0,0) or (x >= y and y != 0): the origin is the only maximal element, yet the Minty \
         problem has no solution",
        rules::non_complete_origin(),
        GroundSet::interval(-1.0, 1.0, 0.01).expect("valid"),
    )
    .halo()
    .cones(|x: &Point| if x[0].abs() <= 1e-12 { Ok(Cone::full(1)) } else { Cone::generated(vec![p1(-1.0)]) })
    .suite(&[Check::Maximal, Check::MvipEmpty, Check::Cones])
    .with(|f| {
        f.expected_maximal = Some(vec![p1(0.0)]);
        f.expected_maxima = Some(Vec::new());
    })
}

fn ex46() -> Fixture {
    Fixture::new(
        "ex46-zero-gap",
        "x >= y iff x = y = 0 in the plane with f = 0: the descent assumptions hold without completeness",
        rules::only_origin(2),
        grid("-1:1:0.1,-1:1:0.1"),
    )
    .cones(|_: &Point| Ok(Cone::full(2)))
    .suite(&[Check::Maximal, Check::ZeroMaximality, Check::Cones, Check::Descent])
    .with(|f| {
        f.gap = Some(GapFunction::zero(1.0).expect("positive"));
        f.oracle = Some(Arc::new(|x: &Point| Ok(Point::zeros(x.dim()))));
        f.expected_maximal = Some(f.ground.points().to_vec());
        f.default_x0 = Some(p2(0.5, -0.5));
    })
}

fn ex42(name: &'static str, notes: &'static str, gap: GapFunction, b: fn(f64) -> f64) -> Fixture {
    Fixture::new(name, notes, rules::non_complete_origin(), GroundSet::interval(-6.0, 11.0, 0.01).expect("valid"))
        .suite(&[Check::PlastriaCone])
        .with(|f| {
            f.gap = Some(gap);
            f.nf_boundary = Some(b);
            f.base_points = Some((-10..=10).filter(|&k| k != 0).map(|k| p1(k as f64 * 0.5)).collect());
        })
}

fn utility_peak() -> Fixture {
    let rel = rules::peak_utility(0.7);
    let gap = gap_from_utility(rel.utility_fn().expect("utility"), 1.0).expect("positive");
    Fixture::new("utility-peak-0.7", "u(x) = -|x - 0.7| on [0,1]", rel, GroundSet::interval(0.0, 1.0, 0.01).expect("valid"))
        .cones(peak_cone(0.7))
        .suite(&[
            Check::Maximal,
            Check::Cones,
            Check::Nstar,
            Check::SvipInclusion,
            Check::Mvip,
            Check::Uniqueness,
            Check::ZeroMaximality,
            Check::Descent,
        ])
        .with(|f| {
            f.gap = Some(gap);
            f.oracle = Some(peak_oracle(0.7));
            f.lsc = true;
            f.complete = true;
            f.reference = Some(p1(0.7));
            f.default_x0 = Some(p1(0.0));
            f.expected_maximal = Some(vec![p1(0.7)]);
            f.properties = vec![(Property::Complete, true), (Property::Transitive, true), (Property::ConvexU, true)];
        })
}

fn utility_radial() -> Fixture {
    let a = p2(1.0, 2.0);
    let rel = rules::radial_utility(&a);
    let gap = gap_from_utility(rel.utility_fn().expect("utility"), 1.0).expect("positive");
    let (ca, oa) = (a.clone(), a.clone());
    let oracle_gap = gap.clone();
    Fixture::new(
        "utility-radial-a(1,2)",
        "u(x) = -|x - (1,2)| in the plane: N(x) is the ray through x - (1,2)",
        rel,
        grid("-1:3:0.1,0:4:0.1"),
    )
    .cones(move |x: &Point| {
        let d = x.sub(&ca);
        if d.norm() <= 1e-12 {
            Ok(Cone::full(2))
        } else {
            Cone::generated(vec![d])
        }
    })
    .suite(&[
        Check::Maximal,
        Check::Cones,
        Check::SvipInclusion,
        Check::Mvip,
        Check::Uniqueness,
        Check::ZeroMaximality,
        Check::Descent,
    ])
    .with(|f| {
        f.sampler = Sampler::Shell { center: a.clone(), points: 3600 };
        f.oracle = Some(Arc::new(move |x: &Point| {
            let u = x.sub(&oa);
            if u.is_zero() {
                Ok(Point::zeros(2))
            } else {
                nf_subgradient(&oracle_gap, x, &u)
            }
        }));
        f.gap = Some(gap);
        f.lsc = true;
        f.complete = true;
        f.reference = Some(a.clone());
        f.default_x0 = Some(p2(0.0, 0.0));
        f.expected_maximal = Some(vec![a]);
    })
}

fn utility_two_max() -> Fixture {
    let u = Utility::new("-min(|x-0.2|,|x-0.8|)", |x: &Point| -(x[0] - 0.2).abs().min((x[0] - 0.8).abs()));
    let rel = Relation::utility(1, u, Some(1.0), false).expect("valid utility");
    Fixture::new(
        "utility-two-max",
        "u(x) = -min(|x-0.2|, |x-0.8|) on [0,1]: two maximal elements, so no Minty solution",
        rel,
        GroundSet::interval(0.0, 1.0, 0.01).expect("valid"),
    )
    .cones(|x: &Point| {
        let x = x[0];
        let near = |c: f64| (x - c).abs() <= 1e-12;
        Ok(if near(0.2) || near(0.8) {
            Cone::full(1)
        } else if x < 0.2 {
            Cone::generated(vec![p1(-1.0)])?
        } else if x > 0.8 {
            Cone::generated(vec![p1(1.0)])?
        } else {
            Cone::zero(1)
        })
    })
    .suite(&[Check::Maximal, Check::Cones, Check::SvipInclusion, Check::Mvip, Check::Uniqueness])
    .inverted(&[Check::Mvip])
    .with(|f| {
        f.lsc = true;
        f.complete = true;
        f.expected_maximal = Some(vec![p1(0.2), p1(0.8)]);
    })
}

impl Fixture {
    fn with(mut self, edit: impl FnOnce(&mut Fixture)) -> Self {
        edit(&mut self);
        self
    }
}

fn build() -> Vec<Fixture> {
    let f1 = GapFunction::new("y^2-x^2", 22.0, AssumptionFlags::NONE, |x, y| y[0] * y[0] - x[0] * x[0]).expect("positive");
    let f2 = GapFunction::new("y-x", 1.0, AssumptionFlags::NONE, |x, y| y[0] - x[0]).expect("positive");
    vec![
        ex22(),
        convexity(
            "convexs-not-convex",
            "x >= y iff x = 0 or x = y on [0,1]: strict upper contours convex, upper contours not",
            rules::convexs_not_convex(),
            false,
        ),
        convexity(
            "convex-not-convexs",
            "upper contours convex on [0,1] while the strict upper contour of 0 misses 1/2",
            rules::convex_not_convexs(),
            true,
        ),
        ex_n(),
        rmk35(),
        rmk311(),
        ex39(),
        ex315(),
        ex46(),
        ex42("ex42-plastria-f1", "gap y^2 - x^2 on the previous relation: N_f(x) = ]-inf, 2x]", f1, |x| 2.0 * x),
        ex42("ex42-plastria-f2", "gap y - x on the previous relation: N_f(x) = ]-inf, 1]", f2, |_| 1.0),
        utility_peak(),
        utility_radial(),
        utility_two_max(),
    ]
}

pub struct Registry {
    fixtures: BTreeMap<&'static str, Fixture>,
}

impl Registry {
    /// Builds the registry and runs the closed-form cone self-test on every
    /// fixture.
    pub fn load() -> Result<Registry, HarnessError> {
        let mut fixtures = BTreeMap::new();
        for f in build() {
            let bases = f.bases(SELF_TEST_BASES);
            let bad = f.cone_mismatches(&bases, SELF_TEST_PROBES, 1e-9, SELF_TEST_SEED)?;
            if let Some((x, q)) = bad.first() {
                return Err(HarnessError::SelfTest(format!(
                    "{}: closed-form cone at {x} disagrees with sampled membership on {q} ({} mismatches)",
                    f.name,
                    bad.len()
                )));
            }
            if fixtures.insert(f.name, f).is_some() {
                return Err(HarnessError::SelfTest("duplicate fixture name".into()));
            }
        }
        Ok(Registry { fixtures })
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.fixtures.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fixture> {
        self.fixtures.values()
    }

    pub fn get(&self, name: &str) -> Result<&Fixture, HarnessError> {
        self.fixtures.get(name).ok_or_else(|| HarnessError::UnknownFixture {
            name: name.to_string(),
            available: self.names().collect::<Vec<_>>().join(", "),
        })
    }
}

static REGISTRY: Lazy<Result<Registry, HarnessError>> = Lazy::new(Registry::load);

pub fn registry() -> Result<&'static Registry, HarnessError> {
    REGISTRY.as_ref().map_err(Clone::clone)
}

pub fn get_fixture(name: &str) -> Result<&'static Fixture, HarnessError> {
    registry()?.get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_test_passes_and_names_are_listed() {
        let reg = registry().unwrap();
        assert_eq!(reg.names().count(), 14);
        let err = reg.get("nosuch").unwrap_err().to_string();
        assert!(err.contains("exN-favored-one") && err.contains("utility-two-max"));
    }

    #[test]
    fn favored_one_closed_form() {
        let f = get_fixture("exN-favored-one").unwrap();
        assert_eq!(f.cone_at(&p1(0.3), 1e-9).unwrap(), Cone::full(1));
        assert_eq!(f.cone_at(&p1(1.0), 1e-9).unwrap(), Cone::zero(1));
    }

    #[test]
    fn segment_fixture_uses_half_plane_everywhere() {
        let f = get_fixture("rmk311-segment-K").unwrap();
        let c = f.cone_at(&p2(1.0, 0.0), 1e-9).unwrap();
        assert!(c.contains(&p2(0.0, 1.0)).unwrap());
        assert!(!c.contains(&p2(0.5, 0.0)).unwrap());
        assert!(f.expects_pass(Check::Maximal) && !f.expects_pass(Check::SvipInclusion));
    }

    #[test]
    fn grid_override_keeps_the_halo() {
        let f = get_fixture("ex315-noncomplete").unwrap().with_grid("-0.5:0.5:0.1").unwrap();
        assert_eq!(f.ground.len(), 11);
        assert_eq!(f.ground.halo().len(), 2);
        assert!(get_fixture("ex315-noncomplete").unwrap().with_grid("0:1:0.1,0:1:0.1").is_err());
    }

    #[test]
    fn sampled_fallback_without_closed_form() {
        let f = get_fixture("ex22-fip-not-transitive").unwrap();
        assert!(f.cones.is_none());
        assert!(f.cone_mismatches(&f.bases(5), 10, 1e-9, 1).unwrap().is_empty());
    }
}
