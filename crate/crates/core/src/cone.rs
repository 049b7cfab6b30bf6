//! Normal cones of strict upper contours and the truncated hull `T(x)`.
//!
//! `N(x)` is the normal cone of `U^s(x)` at `x` (all of ℝⁿ when the contour is
//! empty) and `N*(x)` its strict refinement. Both are decided here against a
//! finite [`ContourSample`]. Closed-form cones are carried as [`Cone`] values
//! with finite generator lists, and `T(x)` as a [`ConvexBody`] given by
//! vertices.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::ground::{Axis, GroundSet};
use crate::hull;
use crate::nnls::nnls;
use crate::point::Point;
use crate::relation::Relation;

/// Default membership tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default number of directions on the planar unit-circle net (1°).
pub const PLANAR_NET: usize = 360;

#[derive(Debug, Clone, PartialEq)]
pub enum ConeTag {
    Full,
    Zero,
    Generated(Vec<Point>),
}

/// A closed convex cone: all of ℝⁿ, `{0}`, or the conic hull of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    dim: usize,
    tag: ConeTag,
    tol: f64,
}

impl Cone {
    pub fn full(dim: usize) -> Self {
        Cone { dim, tag: ConeTag::Full, tol: DEFAULT_TOL }
    }

    pub fn zero(dim: usize) -> Self {
        Cone { dim, tag: ConeTag::Zero, tol: DEFAULT_TOL }
    }

    pub fn generated(generators: Vec<Point>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidParameter("a generated cone needs generators".into()));
        };
        let dim = first.dim();
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.norm() == 0.0 {
                return Err(Error::ZeroVector);
            }
        }
        Ok(Cone { dim, tag: ConeTag::Generated(generators), tol: DEFAULT_TOL })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tag(&self) -> &ConeTag {
        &self.tag
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn generators(&self) -> &[Point] {
        match &self.tag {
            ConeTag::Generated(g) => g,
            _ => &[],
        }
    }

    /// Membership of `v`. Decided on the direction `v/‖v‖`, so it is
    /// invariant under positive scaling; `0` always belongs.
    pub fn contains(&self, v: &Point) -> Result<bool> {
        check_dim(self.dim, v.dim())?;
        let n = v.norm();
        match &self.tag {
            ConeTag::Full => Ok(true),
            ConeTag::Zero => Ok(n <= self.tol),
            ConeTag::Generated(gens) => {
                if n == 0.0 {
                    return Ok(true);
                }
                let a = DMatrix::from_fn(self.dim, gens.len(), |i, j| gens[j][i] / gens[j].norm());
                let b = DVector::from_iterator(self.dim, v.coords().iter().map(|c| c / n));
                let lambda = nnls(&a, &b);
                Ok((&a * lambda - b).norm() <= self.tol)
            }
        }
    }

    /// Polar cone of the sampled directions `{y − x : y ∈ sample}`, i.e. the
    /// normal cone the sample induces. Available in dimensions 1 and 2.
    pub fn from_contour(sample: &ContourSample, tol: f64) -> Result<Cone> {
        let dim = sample.base.dim();
        let dirs: Vec<Point> = sample
            .points
            .iter()
            .map(|y| y.sub(&sample.base))
            .filter(|d| d.norm() > 0.0)
            .collect();
        if sample.empty_contour || dirs.is_empty() {
            return Ok(Cone::full(dim).with_tol(tol));
        }
        match dim {
            1 => {
                let pos = dirs.iter().any(|d| d[0] > 0.0);
                let neg = dirs.iter().any(|d| d[0] < 0.0);
                Ok(match (pos, neg) {
                    (true, true) => Cone::zero(1),
                    (true, false) => Cone::generated(vec![Point::axis(1, 0, -1.0)])?,
                    _ => Cone::generated(vec![Point::axis(1, 0, 1.0)])?,
                }
                .with_tol(tol))
            }
            2 => planar_polar(&dirs, tol),
            _ => Err(Error::Unsupported(format!(
                "polar cone of a sample in dimension {dim}"
            ))),
        }
    }
}

fn planar_polar(dirs: &[Point], tol: f64) -> Result<Cone> {
    let mut angles: Vec<f64> = dirs.iter().map(|d| d[1].atan2(d[0]).rem_euclid(TAU)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-15);
    // Largest circular gap between consecutive directions; the occupied arc is
    // its complement, starting where the gap ends.
    let n = angles.len();
    let (mut gap, mut start) = (TAU - (angles[n - 1] - angles[0]), angles[0]);
    for i in 1..n {
        let g = angles[i] - angles[i - 1];
        if g > gap {
            gap = g;
            start = angles[i];
        }
    }
    let width = TAU - gap;
    if width > PI + 1e-12 {
        return Ok(Cone::zero(2).with_tol(tol));
    }
    let ray = |t: f64| Point::from_raw(vec![t.cos(), t.sin()]);
    let mut gens: Vec<Point> = Vec::with_capacity(3);
    for t in [start + width + PI / 2.0, start + width / 2.0 + PI, start + 1.5 * PI] {
        let r = ray(t);
        if !gens.iter().any(|g| g.dist(&r) <= 1e-12) {
            gens.push(r);
        }
    }
    Ok(Cone::generated(gens)?.with_tol(tol))
}

/// A finite sample of the strict upper contour `U^s(x)`.
#[derive(Debug, Clone)]
pub struct ContourSample {
    base: Point,
    points: Vec<Point>,
    empty_contour: bool,
}

impl ContourSample {
    /// The contour is known to be empty.
    pub fn empty(base: Point) -> Self {
        ContourSample { base, points: Vec::new(), empty_contour: true }
    }

    /// Keeps the candidates strictly preferred to `x`. An empty result marks
    /// the contour as empty: the candidates are the stand-in for `X`.
    pub fn from_candidates<'a>(
        rel: &Relation,
        x: &Point,
        candidates: impl IntoIterator<Item = &'a Point>,
    ) -> Result<Self> {
        check_dim(rel.dim(), x.dim())?;
        let mut points = Vec::new();
        for y in candidates {
            if rel.strictly_prefers(y, x)? {
                points.push(y.clone());
            }
        }
        let empty_contour = points.is_empty();
        Ok(ContourSample { base: x.clone(), points, empty_contour })
    }

    /// Strict upper contour of `x` within the ground set, halo included.
    pub fn from_ground(rel: &Relation, x: &Point, ground: &GroundSet) -> Result<Self> {
        Self::from_candidates(rel, x, ground.all_points())
    }

    /// Takes a sample drawn elsewhere (e.g. analytically), verifying every
    /// point is strictly preferred to `base`.
    pub fn checked(rel: &Relation, base: Point, points: Vec<Point>) -> Result<Self> {
        for y in &points {
            if !rel.strictly_prefers(y, &base)? {
                return Err(Error::Precondition(format!("{y} is not strictly preferred to {base}")));
            }
        }
        let empty_contour = points.is_empty();
        Ok(ContourSample { base, points, empty_contour })
    }

    /// Lattice box of half-width `radius` around `x`, refined with half the
    /// step within distance 0.1 of `x`, filtered to `U^s(x)`.
    pub fn refined_box(rel: &Relation, x: &Point, radius: f64, step: f64) -> Result<Self> {
        if !(radius > 0.0 && step > 0.0) {
            return Err(Error::InvalidParameter("radius and step must be positive".into()));
        }
        let boxed = |r: f64, h: f64| -> Result<GroundSet> {
            let axes = x
                .coords()
                .iter()
                .map(|&c| Axis::new(c - r, c + r, h))
                .collect::<Result<Vec<_>>>()?;
            GroundSet::grid(axes)
        };
        let coarse = boxed(radius, step)?;
        let fine = boxed(0.1_f64.min(radius), step / 2.0)?;
        let near = fine.points().iter().filter(|p| p.dist(x) <= 0.1);
        Self::from_candidates(rel, x, coarse.points().iter().chain(near))
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_empty_contour(&self) -> bool {
        self.empty_contour
    }
}

/// `x* ∈ N(x)`: `⟨x*, y − x⟩ ≤ tol·(1 + ‖x*‖‖y − x‖)` for every sampled `y`.
pub fn normal_membership(sample: &ContourSample, xstar: &Point, tol: f64) -> Result<bool> {
    check_dim(sample.base.dim(), xstar.dim())?;
    if sample.empty_contour {
        return Ok(true);
    }
    let ns = xstar.norm();
    Ok(sample.points.iter().all(|y| {
        let d = y.sub(&sample.base);
        xstar.dot(&d) <= tol * (1.0 + ns * d.norm())
    }))
}

/// `x* ∈ N*(x)`: `⟨x*, y − x⟩ ≤ −margin·‖y − x‖` for every sampled `y`.
pub fn strict_normal_membership(sample: &ContourSample, xstar: &Point, margin: f64) -> Result<bool> {
    if !(margin > 0.0) {
        return Err(Error::InvalidParameter(format!("margin must be positive, got {margin}")));
    }
    check_dim(sample.base.dim(), xstar.dim())?;
    if sample.empty_contour {
        return Ok(true);
    }
    Ok(sample.points.iter().all(|y| {
        let d = y.sub(&sample.base);
        xstar.dot(&d) <= -margin * d.norm()
    }))
}

/// Convex hull of finitely many vertices, possibly empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Point>,
}

impl ConvexBody {
    pub fn empty(dim: usize) -> Self {
        ConvexBody { dim, vertices: Vec::new() }
    }

    pub fn from_vertices(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidParameter("use ConvexBody::empty for the empty body".into()));
        };
        let dim = first.dim();
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(ConvexBody { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Convex weights reproducing `p` as closely as possible, with the
    /// residual `‖Σ λᵢ vᵢ − p‖`. `None` for the empty body.
    pub fn convex_weights(&self, p: &Point) -> Result<Option<(Vec<f64>, f64)>> {
        check_dim(self.dim, p.dim())?;
        if self.is_empty() {
            return Ok(None);
        }
        let m = self.vertices.len();
        let big = 1.0 + self.vertices.iter().map(Point::norm).fold(0.0, f64::max);
        let a = DMatrix::from_fn(self.dim + 1, m, |i, j| {
            if i < self.dim {
                self.vertices[j][i]
            } else {
                big
            }
        });
        let b = DVector::from_iterator(
            self.dim + 1,
            p.coords().iter().copied().chain(std::iter::once(big)),
        );
        let mut lambda: Vec<f64> = nnls(&a, &b).iter().copied().collect();
        let total: f64 = lambda.iter().sum();
        if total <= 0.0 {
            lambda = vec![1.0 / m as f64; m];
        } else {
            lambda.iter_mut().for_each(|l| *l /= total);
        }
        let mut combo = vec![0.0; self.dim];
        for (l, v) in lambda.iter().zip(&self.vertices) {
            for (c, vc) in combo.iter_mut().zip(v.coords()) {
                *c += l * vc;
            }
        }
        let residual = Point::from_raw(combo).dist(p);
        Ok(Some((lambda, residual)))
    }

    /// Convex-combination feasibility within `tol`.
    pub fn contains(&self, p: &Point, tol: f64) -> Result<bool> {
        Ok(self.convex_weights(p)?.is_some_and(|(_, r)| r <= tol))
    }

    /// Counter-clockwise hull polygon (planar bodies only).
    pub(crate) fn polygon(&self) -> Vec<hull::P2> {
        debug_assert_eq!(self.dim, 2);
        let pts: Vec<hull::P2> = self.vertices.iter().map(|v| [v[0], v[1]]).collect();
        hull::convex_hull(&pts)
    }
}

/// Which truncated hull to build from a normal cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyMode {
    /// `T(x) = conv(N(x) ∩ S[0,1])`.
    T,
    /// Variant that substitutes the closed unit ball whenever the caller
    /// reports an empty strict contour, and otherwise matches `T`.
    G { empty_strict_contour: bool },
}

/// Symmetric set of unit vectors approximating the sphere: `±1` in 1-D,
/// `planar` equally spaced directions in 2-D, and in higher dimension the
/// `±eᵢ` fan, the `(±eᵢ ± eⱼ)/√2` net and the `(±1, …, ±1)/√n` corners.
pub fn unit_sphere_net(dim: usize, planar: usize) -> Vec<Point> {
    match dim {
        1 => vec![Point::axis(1, 0, 1.0), Point::axis(1, 0, -1.0)],
        2 => (0..planar)
            .map(|k| {
                let t = TAU * k as f64 / planar as f64;
                Point::from_raw(vec![t.cos(), t.sin()])
            })
            .collect(),
        _ => {
            let mut net = Vec::new();
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    net.push(Point::axis(dim, i, s));
                }
            }
            let h = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim {
                for j in i + 1..dim {
                    for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        let mut v = vec![0.0; dim];
                        v[i] = si * h;
                        v[j] = sj * h;
                        net.push(Point::from_raw(v));
                    }
                }
            }
            if dim <= 10 {
                let c = 1.0 / (dim as f64).sqrt();
                for mask in 0..(1u32 << dim) {
                    let v = (0..dim)
                        .map(|i| if mask & (1 << i) != 0 { -c } else { c })
                        .collect();
                    net.push(Point::from_raw(v));
                }
            }
            net
        }
    }
}

pub fn build_t(cone: &Cone, mode: BodyMode) -> ConvexBody {
    build_t_with_net(cone, mode, PLANAR_NET)
}

/// [`build_t`] with an explicit planar net density.
pub fn build_t_with_net(cone: &Cone, mode: BodyMode, planar: usize) -> ConvexBody {
    let dim = cone.dim();
    let ball = || ConvexBody { dim, vertices: unit_sphere_net(dim, planar) };
    if let BodyMode::G { empty_strict_contour: true } = mode {
        return ball();
    }
    match cone.tag() {
        ConeTag::Full => ball(),
        ConeTag::Zero => ConvexBody::empty(dim),
        ConeTag::Generated(gens) => {
            let mut vertices: Vec<Point> = gens
                .iter()
                .map(|g| g.normalized().expect("generators are nonzero"))
                .collect();
            for d in unit_sphere_net(dim, planar) {
                if cone.contains(&d).unwrap_or(false) && !vertices.iter().any(|v| v.dist(&d) <= 1e-12) {
                    vertices.push(d);
                }
            }
            ConvexBody { dim, vertices }
        }
    }
}

/// For a complete relation, `x* ∈ N(x)` exactly when every `y` with
/// `⟨x*, y − x⟩ > 0` satisfies `x ⪰ y`. Returns whether both sides agree for
/// every probe, each side evaluated over the ground set (halo included).
pub fn complete_equivalence_check(
    rel: &Relation,
    x: &Point,
    probes: &[Point],
    ground: &GroundSet,
    tol: f64,
) -> Result<bool> {
    let sample = ContourSample::from_ground(rel, x, ground)?;
    for probe in probes {
        let lhs = normal_membership(&sample, probe, tol)?;
        let ns = probe.norm();
        let mut rhs = true;
        for y in ground.all_points() {
            let d = y.sub(x);
            if probe.dot(&d) > tol * (1.0 + ns * d.norm()) && !rel.holds(x, y)? {
                rhs = false;
                break;
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
